//! Superpotentials from wavefunctions and the Riccati residuals that tie
//! `W`, `ΔW`, the potential and the energies together.

use serde::{Deserialize, Serialize};

use crate::constants::Constants;
use crate::diff;
use crate::error::{Error, Result};
use crate::family::centrifugal;
use crate::function::RadialFunction;
use crate::grid::RadialGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuperpotentialSource {
    FromWavefunction,
    ClosedFormCatalog,
    PerturbationSeries,
    RiccatiGeneral,
}

/// A superpotential together with its derivative.
///
/// `W²` carries energy units, so `W` itself is measured in √energy.
#[derive(Debug, Clone)]
pub struct Superpotential {
    w: RadialFunction,
    dw: RadialFunction,
    source: SuperpotentialSource,
}

impl Superpotential {
    pub fn new(w: RadialFunction, dw: RadialFunction, source: SuperpotentialSource) -> Self {
        Self { w, dw, source }
    }

    /// Closed form with an analytic derivative.
    pub fn closed_form<F, G>(label: &str, w: F, dw: G) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            w: RadialFunction::analytic(label.to_string(), w),
            dw: RadialFunction::analytic(format!("d/dr {label}"), dw),
            source: SuperpotentialSource::ClosedFormCatalog,
        }
    }

    /// Derivative by Ridders extrapolation for closed forms, by grid central
    /// differences for sampled functions.
    pub fn with_numeric_derivative(w: RadialFunction, source: SuperpotentialSource) -> Result<Self> {
        let dw = match &w {
            RadialFunction::Analytic { .. } => {
                let f = w.clone();
                RadialFunction::analytic(format!("d/dr {}", w.label()), move |r| {
                    diff::derivative(|x| f.eval_unchecked(x), r)
                })
            }
            RadialFunction::Sampled { grid, values } => {
                RadialFunction::sampled(*grid, diff::grid_derivative(values, grid.spacing()))?
            }
        };
        Ok(Self { w, dw, source })
    }

    pub fn zero() -> Self {
        Self {
            w: RadialFunction::zero(),
            dw: RadialFunction::zero(),
            source: SuperpotentialSource::ClosedFormCatalog,
        }
    }

    pub fn value(&self) -> &RadialFunction {
        &self.w
    }

    pub fn derivative(&self) -> &RadialFunction {
        &self.dw
    }

    pub fn source(&self) -> SuperpotentialSource {
        self.source
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        self.w.eval(r)
    }

    pub fn eval_derivative(&self, r: f64) -> Result<f64> {
        self.dw.eval(r)
    }

    /// Scale by a constant, e.g. `ℓ·ΔW¹`.
    pub fn scaled(&self, factor: f64) -> Self {
        let scale = |f: &RadialFunction| match f {
            RadialFunction::Analytic { .. } => {
                let g = f.clone();
                RadialFunction::analytic(format!("{factor}*{}", f.label()), move |r| {
                    factor * g.eval_unchecked(r)
                })
            }
            RadialFunction::Sampled { grid, values } => RadialFunction::sampled(
                *grid,
                values.iter().map(|v| factor * v).collect(),
            )
            .expect("same length"),
        };
        Self {
            w: scale(&self.w),
            dw: scale(&self.dw),
            source: self.source,
        }
    }
}

/// Maximum of a pointwise residual over the interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    /// `max |res(r)|` over `r ∈ [r_min + h, r_max − h]`.
    pub max: f64,
    /// `max r²·|res(r)|`, a diagnostic that tames the `1/r²` barrier.
    pub r2_weighted_max: f64,
    /// Node where `max` is attained.
    pub at: f64,
}

impl Residual {
    pub(crate) fn from_values(grid: &RadialGrid, res: &[f64]) -> Result<Self> {
        let mut out = Residual {
            max: 0.0,
            r2_weighted_max: 0.0,
            at: grid.node(1),
        };
        for i in grid.interior() {
            let r = grid.node(i);
            let v = res[i].abs();
            if !v.is_finite() {
                return Err(Error::NonFinite { what: "residual", r });
            }
            if v > out.max {
                out.max = v;
                out.at = r;
            }
            out.r2_weighted_max = out.r2_weighted_max.max(r * r * v);
        }
        Ok(out)
    }
}

/// `ℓ(ℓ+1)ħ²/(2m r²)`.
pub fn centrifugal_barrier(ell: u32, c: &Constants) -> RadialFunction {
    let k = centrifugal(ell) * c.kappa2();
    RadialFunction::analytic(format!("l(l+1)k²/r² (l={ell})"), move |r| k / (r * r))
}

/// `W = −κ χ'/χ` for a nodeless `χ`.
///
/// `chi` must keep one strict sign on every grid node; a zero or a sign
/// change is rejected since `W` would be singular there.
pub fn superpotential_from_wavefunction(
    chi: &RadialFunction,
    chi_prime: &RadialFunction,
    grid: &RadialGrid,
    c: &Constants,
) -> Result<Superpotential> {
    let values = chi.values_on(grid)?;
    let sign = values[0].signum();
    for (i, v) in values.iter().enumerate() {
        if *v == 0.0 || v.signum() != sign || !v.is_finite() {
            return Err(Error::NodefulWavefunction { r: grid.node(i) });
        }
    }
    let kappa = c.kappa();
    let w = if chi.is_analytic() && chi_prime.is_analytic() {
        let (f, fp) = (chi.clone(), chi_prime.clone());
        RadialFunction::analytic("-k chi'/chi", move |r| {
            -kappa * fp.eval_unchecked(r) / f.eval_unchecked(r)
        })
    } else {
        let primes = chi_prime.values_on(grid)?;
        RadialFunction::sampled(
            *grid,
            values.iter().zip(&primes).map(|(v, p)| -kappa * p / v).collect(),
        )?
    };
    Superpotential::with_numeric_derivative(w, SuperpotentialSource::FromWavefunction)
}

/// `W² − κW' − (V₀ − ε)` on the interior: the base Riccati identity.
pub fn riccati_residual_eq5(
    w: &Superpotential,
    v0: &RadialFunction,
    eps: f64,
    grid: &RadialGrid,
    c: &Constants,
) -> Result<Residual> {
    let (wv, wp, v) = (
        w.value().values_on(grid)?,
        w.derivative().values_on(grid)?,
        v0.values_on(grid)?,
    );
    let k = c.kappa();
    let res: Vec<f64> = (0..grid.len())
        .map(|i| wv[i] * wv[i] - k * wp[i] - (v[i] - eps))
        .collect();
    Residual::from_values(grid, &res)
}

/// `ΔW² − κΔW' + 2WΔW − (barrier − Δε)`: the barrier-correction identity.
///
/// `barrier` is the full `ℓ`-dependent term, e.g. [`centrifugal_barrier`] or
/// [`crate::PotentialFamily::barrier_fn`].
pub fn riccati_residual_eq6(
    w0: &Superpotential,
    dw: &Superpotential,
    barrier: &RadialFunction,
    delta_eps: f64,
    grid: &RadialGrid,
    c: &Constants,
) -> Result<Residual> {
    let (w, d, dp, b) = (
        w0.value().values_on(grid)?,
        dw.value().values_on(grid)?,
        dw.derivative().values_on(grid)?,
        barrier.values_on(grid)?,
    );
    let k = c.kappa();
    let res: Vec<f64> = (0..grid.len())
        .map(|i| d[i] * d[i] - k * dp[i] + 2.0 * w[i] * d[i] - (b[i] - delta_eps))
        .collect();
    Residual::from_values(grid, &res)
}

/// `(W+ΔW)² − κ(W+ΔW)' − (V − E)` with `V` including the barrier.
pub fn riccati_residual_eq7(
    w: &Superpotential,
    dw: &Superpotential,
    v: &RadialFunction,
    energy: f64,
    grid: &RadialGrid,
    c: &Constants,
) -> Result<Residual> {
    let (a, ap, d, dp, vv) = (
        w.value().values_on(grid)?,
        w.derivative().values_on(grid)?,
        dw.value().values_on(grid)?,
        dw.derivative().values_on(grid)?,
        v.values_on(grid)?,
    );
    let k = c.kappa();
    let res: Vec<f64> = (0..grid.len())
        .map(|i| {
            let u = a[i] + d[i];
            u * u - k * (ap[i] + dp[i]) - (vv[i] - energy)
        })
        .collect();
    Residual::from_values(grid, &res)
}
