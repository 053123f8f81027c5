use serde::{Deserialize, Serialize};

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::function::RadialFunction;
use crate::grid::{make_grid, RadialGrid};

/// The potential catalog.
///
/// `Hulthen` and `GreeneAldrichEffective` describe the same physics for
/// `ℓ > 0`: the two tags differ only in which algebraic form of the
/// effective potential [`PotentialFamily::potential`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PotentialFamily {
    HarmonicOscillator { w: f64 },
    Coulomb { e2: f64 },
    Hulthen { alpha: f64, e2: f64 },
    GreeneAldrichEffective { alpha: f64, e2: f64 },
}

impl PotentialFamily {
    pub fn validate(&self) -> Result<()> {
        let check = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(name, format!("must be positive, got {v}")))
            }
        };
        match *self {
            PotentialFamily::HarmonicOscillator { w } => check("w", w),
            PotentialFamily::Coulomb { e2 } => check("e2", e2),
            PotentialFamily::Hulthen { alpha, e2 }
            | PotentialFamily::GreeneAldrichEffective { alpha, e2 } => {
                check("alpha", alpha)?;
                check("e2", e2)
            }
        }
    }

    /// Short name used on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            PotentialFamily::HarmonicOscillator { .. } => "ho",
            PotentialFamily::Coulomb { .. } => "coulomb",
            PotentialFamily::Hulthen { .. } => "hulthen",
            PotentialFamily::GreeneAldrichEffective { .. } => "greene-aldrich",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            PotentialFamily::HarmonicOscillator { w } => vec![("w", w)],
            PotentialFamily::Coulomb { e2 } => vec![("e2", e2)],
            PotentialFamily::Hulthen { alpha, e2 }
            | PotentialFamily::GreeneAldrichEffective { alpha, e2 } => {
                vec![("alpha", alpha), ("e2", e2)]
            }
        }
    }

    pub fn is_hulthen_type(&self) -> bool {
        matches!(
            self,
            PotentialFamily::Hulthen { .. } | PotentialFamily::GreeneAldrichEffective { .. }
        )
    }

    /// Screening ratio `β = αħ²/(m e²)` for the Hulthén-type tags.
    pub fn beta(&self, c: &Constants) -> Option<f64> {
        match *self {
            PotentialFamily::Hulthen { alpha, e2 }
            | PotentialFamily::GreeneAldrichEffective { alpha, e2 } => {
                Some(alpha * c.hbar() * c.hbar() / (c.mass() * e2))
            }
            _ => None,
        }
    }

    /// `ℓ = 0` potential `V₀(r)`.
    pub fn ground_potential(&self, r: f64, c: &Constants) -> f64 {
        match *self {
            PotentialFamily::HarmonicOscillator { w } => 0.5 * c.mass() * w * w * r * r,
            PotentialFamily::Coulomb { e2 } => -e2 / r,
            PotentialFamily::Hulthen { alpha, e2 }
            | PotentialFamily::GreeneAldrichEffective { alpha, e2 } => {
                -e2 * alpha * screening(alpha, r)
            }
        }
    }

    /// `f(r)` such that the barrier term is `ℓ(ℓ+1)·f(r)`.
    pub fn barrier_coefficient(&self, r: f64, c: &Constants) -> f64 {
        match *self {
            PotentialFamily::HarmonicOscillator { .. } | PotentialFamily::Coulomb { .. } => {
                c.kappa2() / (r * r)
            }
            PotentialFamily::Hulthen { alpha, .. }
            | PotentialFamily::GreeneAldrichEffective { alpha, .. } => {
                let y = screening(alpha, r);
                c.kappa2() * alpha * alpha * y * (1.0 + y)
            }
        }
    }

    /// Full effective potential at angular momentum `ell`.
    ///
    /// The Greene–Aldrich tag evaluates the form with the `[1 − ℓ(ℓ+1)β/2]`
    /// factor on the attractive term; the Hulthén tag the reduced form.
    pub fn potential(&self, r: f64, ell: u32, c: &Constants) -> f64 {
        match *self {
            PotentialFamily::Hulthen { alpha, e2 } => hulthen_reduced(alpha, e2, r, ell, c),
            PotentialFamily::GreeneAldrichEffective { alpha, e2 } => {
                greene_aldrich(alpha, e2, r, ell, c)
            }
            _ => self.ground_potential(r, c) + centrifugal(ell) * self.barrier_coefficient(r, c),
        }
    }

    pub fn ground_potential_fn(&self, c: &Constants) -> RadialFunction {
        let (fam, c) = (*self, *c);
        RadialFunction::analytic(format!("V0[{}]", self.name()), move |r| {
            fam.ground_potential(r, &c)
        })
    }

    pub fn potential_fn(&self, ell: u32, c: &Constants) -> RadialFunction {
        let (fam, c) = (*self, *c);
        RadialFunction::analytic(format!("V[{}, l={ell}]", self.name()), move |r| {
            fam.potential(r, ell, &c)
        })
    }

    /// `ℓ(ℓ+1)·f(r)`.
    pub fn barrier_fn(&self, ell: u32, c: &Constants) -> RadialFunction {
        let (fam, c) = (*self, *c);
        let l = centrifugal(ell);
        RadialFunction::analytic(format!("barrier[{}, l={ell}]", self.name()), move |r| {
            l * fam.barrier_coefficient(r, &c)
        })
    }

    pub fn barrier_coefficient_fn(&self, c: &Constants) -> RadialFunction {
        let (fam, c) = (*self, *c);
        RadialFunction::analytic(format!("f[{}]", self.name()), move |r| {
            fam.barrier_coefficient(r, &c)
        })
    }
}

/// Grid spacing, in natural length units, used for the default grids.
pub const DEFAULT_SPACING: f64 = 0.005;

/// Upper bound on default grid sizes.
pub const MAX_DEFAULT_POINTS: usize = 400_000;

impl PotentialFamily {
    /// Natural length scale: oscillator length `√(ħ/mw)` or Bohr radius
    /// `ħ²/(m e²)`.
    pub fn length_scale(&self, c: &Constants) -> f64 {
        match *self {
            PotentialFamily::HarmonicOscillator { w } => (c.hbar() / (c.mass() * w)).sqrt(),
            PotentialFamily::Coulomb { e2 }
            | PotentialFamily::Hulthen { e2, .. }
            | PotentialFamily::GreeneAldrichEffective { e2, .. } => {
                c.hbar() * c.hbar() / (c.mass() * e2)
            }
        }
    }

    /// Default box for state `ell`, sized from the family's length scale only:
    ///
    /// * oscillator: `r_max = 20` lengths, 4000 points;
    /// * Coulomb: `r_max = 60·max(1, (ℓ+1)/2)` Bohr radii, 12000 points;
    /// * Hulthén types: `r_max = max(60, 30/β)` Bohr radii at spacing
    ///   [`DEFAULT_SPACING`].
    pub fn default_grid(&self, ell: u32, c: &Constants) -> Result<RadialGrid> {
        let a = self.length_scale(c);
        match *self {
            PotentialFamily::HarmonicOscillator { .. } => make_grid(20.0 * a, 4000),
            PotentialFamily::Coulomb { .. } => {
                make_grid(60.0 * a * f64::max(1.0, (ell as f64 + 1.0) / 2.0), 12_000)
            }
            _ => {
                let beta = self.beta(c).expect("hulthen type");
                let r_max = f64::max(60.0, 30.0 / beta);
                let n = ((r_max / DEFAULT_SPACING).round() as usize).min(MAX_DEFAULT_POINTS);
                make_grid(r_max * a, n)
            }
        }
    }
}

/// `ℓ(ℓ+1)`.
#[inline]
pub fn centrifugal(ell: u32) -> f64 {
    let l = ell as f64;
    l * (l + 1.0)
}

/// `e^{-αr}/(1 − e^{-αr})`.
#[inline]
pub(crate) fn screening(alpha: f64, r: f64) -> f64 {
    1.0 / (alpha * r).exp_m1()
}

/// `(ħ²/2m)ℓ(ℓ+1)α² e^{-αr}/(1−e^{-αr})² − e²α e^{-αr}/(1−e^{-αr})`.
pub fn hulthen_reduced(alpha: f64, e2: f64, r: f64, ell: u32, c: &Constants) -> f64 {
    let ex = (-alpha * r).exp();
    let one_minus = -(-alpha * r).exp_m1();
    c.kappa2() * centrifugal(ell) * alpha * alpha * ex / (one_minus * one_minus)
        - e2 * alpha * ex / one_minus
}

/// `(ħ²/2m)ℓ(ℓ+1)α² e^{-2αr}/(1−e^{-αr})² − e²α e^{-αr}/(1−e^{-αr})·[1 − ℓ(ℓ+1)β/2]`.
pub fn greene_aldrich(alpha: f64, e2: f64, r: f64, ell: u32, c: &Constants) -> f64 {
    let beta = alpha * c.hbar() * c.hbar() / (c.mass() * e2);
    let ex = (-alpha * r).exp();
    let one_minus = -(-alpha * r).exp_m1();
    c.kappa2() * centrifugal(ell) * alpha * alpha * ex * ex / (one_minus * one_minus)
        - e2 * alpha * ex / one_minus * (1.0 - centrifugal(ell) * beta / 2.0)
}

/// `|barrier term| + |attractive term|` of the reduced Hulthén form: the
/// magnitude against which the two algebraic forms are compared, since their
/// sum crosses zero where barrier and attraction balance.
pub fn hulthen_term_scale(alpha: f64, e2: f64, r: f64, ell: u32, c: &Constants) -> f64 {
    let ex = (-alpha * r).exp();
    let one_minus = -(-alpha * r).exp_m1();
    (c.kappa2() * centrifugal(ell) * alpha * alpha * ex / (one_minus * one_minus)).abs()
        + (e2 * alpha * ex / one_minus).abs()
}
