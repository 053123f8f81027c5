//! One-parameter family of solutions of the correction Riccati equation
//!
//! ```text
//! ΔW' = (1/κ)·{ΔW² + 2W₀ΔW + Δε − ΔV}
//! ```
//!
//! built from any special solution `ΔW_sp`. With `ψ_sp = χ₀φ_sp` and
//! `F(r) = c + ∫_{r_ref}^r dz/ψ_sp²`,
//!
//! ```text
//! ΔW = ΔW_sp − κ·ψ_sp⁻²/F = ΔW_sp − κ·d/dr ln F.
//! ```
//!
//! `F` is monotone and, for a bound `ψ_sp` that vanishes at both ends, runs
//! from −∞ to +∞, so every finite `c` puts one simple pole into `ΔW`. The pole
//! is located and reported; nodes that land on it are rejected.

use crate::barrier::{log_moderating_function, R_REF};
use crate::constants::Constants;
use crate::diff;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::factorization::{Residual, Superpotential, SuperpotentialSource};
use crate::function::RadialFunction;
use crate::grid::RadialGrid;
use crate::quadrature::{cumulative_integral, gauss_legendre, Sum};

/// Exponent clamp for `ψ_sp⁻²`.
pub const LOG_CLAMP: f64 = 700.0;

/// Relative size of `|F|` against its two summands below which a node is
/// treated as sitting on the pole.
pub const SINGULAR_CANCELLATION: f64 = 1e-12;

/// Correction equation data: base superpotential `W₀`, perturbing potential
/// `ΔV` and energy shift `Δε`.
#[derive(Debug, Clone)]
pub struct RiccatiProblem {
    pub w0: Superpotential,
    pub delta_v: RadialFunction,
    pub delta_eps: f64,
}

/// `max |ΔW' − (1/κ)(ΔW² + 2W₀ΔW + Δε − ΔV)|` on the interior.
pub fn residual_a1(
    dw: &Superpotential,
    prob: &RiccatiProblem,
    grid: &RadialGrid,
    c: &Constants,
) -> Result<Residual> {
    let (d, dp, w, v) = (
        dw.value().values_on(grid)?,
        dw.derivative().values_on(grid)?,
        prob.w0.value().values_on(grid)?,
        prob.delta_v.values_on(grid)?,
    );
    let inv_k = 1.0 / c.kappa();
    let res: Vec<f64> = (0..grid.len())
        .map(|i| dp[i] - inv_k * (d[i] * d[i] + 2.0 * w[i] * d[i] + prob.delta_eps - v[i]))
        .collect();
    Residual::from_values(grid, &res)
}

/// Additive constant `c` of the outer integral. `Infinite` selects the
/// special solution itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationConstant {
    Finite(f64),
    Infinite,
}

/// Which algebraic route builds the correction term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionForm {
    /// `ψ_sp⁻² = 1/[φ_sp χ₀]²` from the moderating function and `χ₀`;
    /// correction `κ·ψ_sp⁻²/F`.
    Quotient,
    /// `ψ_sp⁻² = exp[(2/κ)∫(ΔW_sp + W₀)]`; correction `κ·d/dr ln F` with
    /// `F'` and `F''` by extrapolated differentiation.
    LogDerivative,
}

#[derive(Debug, Clone)]
pub struct GeneralSolution {
    pub superpotential: Superpotential,
    pub constant: IntegrationConstant,
    pub form: SolutionForm,
    /// Location of the pole of `ΔW` (zero of `F`) if it lies inside the grid.
    pub pole: Option<f64>,
    /// `F(r_i)` at the nodes (all ones for the special-solution branch).
    pub log_argument: Vec<f64>,
}

/// General solution in the quotient form.
pub fn general_solution(
    dw_sp: &Superpotential,
    w0: &Superpotential,
    chi0: &RadialFunction,
    grid: &RadialGrid,
    constant: IntegrationConstant,
    c: &Constants,
) -> Result<GeneralSolution> {
    general_solution_with_form(dw_sp, w0, chi0, grid, constant, SolutionForm::Quotient, c)
}

/// `ln ψ_sp⁻²` evaluable anywhere on `(0, ∞)`, from node values plus a
/// Gauss–Legendre piece of `rate` up to the requested point.
struct LogWeight<'a> {
    grid: &'a RadialGrid,
    nodes: Vec<f64>,
    piece: Box<dyn Fn(f64, f64) -> f64 + Send + Sync + 'a>,
}

impl LogWeight<'_> {
    fn at(&self, r: f64) -> f64 {
        let i = match self.grid.locate(r) {
            Some(i) => i,
            None if r < self.grid.r_min() => 0,
            None => self.grid.len() - 1,
        };
        let r0 = self.grid.node(i);
        if r == r0 {
            self.nodes[i]
        } else {
            self.nodes[i] + (self.piece)(r0, r)
        }
    }

    fn weight(&self, r: f64) -> f64 {
        self.at(r).clamp(-LOG_CLAMP, LOG_CLAMP).exp()
    }
}

fn log_weight<'a>(
    dw_sp: &Superpotential,
    w0: &Superpotential,
    chi0: &RadialFunction,
    grid: &'a RadialGrid,
    form: SolutionForm,
    c: &Constants,
) -> Result<LogWeight<'a>> {
    let inv_k = 1.0 / c.kappa();
    Ok(match form {
        SolutionForm::Quotient => {
            let log_phi = log_moderating_function(dw_sp, grid, R_REF, c)?;
            let chi = chi0.values_on(grid)?;
            let nodes = log_phi
                .iter()
                .zip(&chi)
                .map(|(lp, x)| -2.0 * (lp + x.abs().ln()))
                .collect();
            let (dsp, chi0) = (dw_sp.value().clone(), chi0.clone());
            // ln ψ⁻²(r) = −2 ln φ_sp(r) − 2 ln |χ₀(r)|, stepping ln φ_sp off the node
            LogWeight {
                grid,
                nodes,
                piece: Box::new(move |r0, r| {
                    let dlog_phi = -inv_k * gauss_legendre(|z| dsp.eval_unchecked(z), r0, r);
                    -2.0 * dlog_phi - 2.0 * (chi0.eval_unchecked(r).abs().ln() - chi0.eval_unchecked(r0).abs().ln())
                }),
            }
        }
        SolutionForm::LogDerivative => {
            let (dsp, w0f) = (dw_sp.value().clone(), w0.value().clone());
            let u = RadialFunction::analytic("W0 + dW_sp", move |r| {
                dsp.eval_unchecked(r) + w0f.eval_unchecked(r)
            });
            let chi_ref = chi0.eval(R_REF)?.abs();
            let nodes = cumulative_integral(&u, grid, R_REF, Execution::default())?
                .into_iter()
                .map(|v| 2.0 * inv_k * v - 2.0 * chi_ref.ln())
                .collect();
            LogWeight {
                grid,
                nodes,
                piece: Box::new(move |r0, r| 2.0 * inv_k * gauss_legendre(|z| u.eval_unchecked(z), r0, r)),
            }
        }
    })
}

/// `∫_{R_REF}^{r_i} ψ⁻²` at every node.
fn weight_integral(lw: &LogWeight<'_>) -> Vec<f64> {
    let grid = lw.grid;
    let n = grid.len();
    let panels = Execution::default().map_range(n - 1, |i| {
        gauss_legendre(|z| lw.weight(z), grid.node(i), grid.node(i + 1))
    });
    // accumulate outward from R_REF: ψ⁻² blows up at both ends, and a running
    // total anchored anywhere else cancels against the offset
    let w = |a: f64, b: f64| gauss_legendre(|z| lw.weight(z), a, b);
    let (below, above) = match grid.locate(R_REF) {
        Some(j) => (
            Some((j, -w(grid.node(j), R_REF))),
            Some((j + 1, w(R_REF, grid.node(j + 1)))),
        ),
        None if R_REF < grid.r_min() => (None, Some((0, w(R_REF, grid.r_min())))),
        None => (Some((n - 1, -w(grid.r_max(), R_REF))), None),
    };
    let mut out = vec![0.0; n];
    if let Some((j, start)) = above {
        let mut acc = Sum::default();
        acc.add(start);
        out[j] = acc.value();
        for i in j + 1..n {
            acc.add(panels[i - 1]);
            out[i] = acc.value();
        }
    }
    if let Some((j, start)) = below {
        let mut acc = Sum::default();
        acc.add(start);
        out[j] = acc.value();
        for i in (0..j).rev() {
            acc.add(-panels[i]);
            out[i] = acc.value();
        }
    }
    out
}

pub fn general_solution_with_form(
    dw_sp: &Superpotential,
    w0: &Superpotential,
    chi0: &RadialFunction,
    grid: &RadialGrid,
    constant: IntegrationConstant,
    form: SolutionForm,
    c: &Constants,
) -> Result<GeneralSolution> {
    let n = grid.len();
    let sp = dw_sp.value().values_on(grid)?;
    let spp = dw_sp.derivative().values_on(grid)?;
    let cval = match constant {
        IntegrationConstant::Infinite => {
            return Ok(GeneralSolution {
                superpotential: Superpotential::new(
                    RadialFunction::sampled(*grid, sp)?,
                    RadialFunction::sampled(*grid, spp)?,
                    SuperpotentialSource::RiccatiGeneral,
                ),
                constant,
                form,
                pole: None,
                log_argument: vec![1.0; n],
            })
        }
        IntegrationConstant::Finite(v) if v == 0.0 || !v.is_finite() => {
            return Err(Error::param("c", format!("must be finite and nonzero, got {v}")))
        }
        IntegrationConstant::Finite(v) => v,
    };
    if !(dw_sp.value().is_analytic() && w0.value().is_analytic() && chi0.is_analytic()) {
        return Err(Error::param(
            "dw_sp/w0/chi0",
            "general solution needs closed forms to integrate between nodes",
        ));
    }

    let k = c.kappa();
    let inv_k = 1.0 / k;
    let w0v = w0.value().values_on(grid)?;

    let lw = log_weight(dw_sp, w0, chi0, grid, form, c)?;
    let integral = weight_integral(&lw);
    let big_f: Vec<f64> = integral.iter().map(|v| cval + v).collect();
    let mut pole = None;
    for i in 0..n {
        if big_f[i].abs() <= SINGULAR_CANCELLATION * (cval.abs() + integral[i].abs()) {
            return Err(Error::SingularSolution { r: grid.node(i) });
        }
        if i + 1 < n && big_f[i].signum() != big_f[i + 1].signum() {
            let (r0, r1) = (grid.node(i), grid.node(i + 1));
            pole = Some(r0 + (r1 - r0) * big_f[i] / (big_f[i] - big_f[i + 1]));
        }
    }
    if pole.is_none() && big_f[0].signum() != big_f[n - 1].signum() {
        unreachable!("sign change without a bracketing interval");
    }

    let (s, ds): (Vec<f64>, Vec<f64>) = match form {
        // s = ψ⁻²/F, and (ψ⁻²)' = (2/κ)(W₀ + ΔW_sp)ψ⁻² gives s' = 2sU/κ − s²
        SolutionForm::Quotient => (0..n)
            .map(|i| {
                let s = lw.weight(grid.node(i)) / big_f[i];
                (s, 2.0 * inv_k * s * (w0v[i] + sp[i]) - s * s)
            })
            .unzip(),
        // s = F'/F and s' = F''/F − s², both derivatives extrapolated
        SolutionForm::LogDerivative => Execution::default()
            .map_range(n, |i| {
                let r = grid.node(i);
                let base = big_f[i];
                // F is smooth through its zero; ln |F| is not, so differentiate F
                let f_at = |x: f64| {
                    let piece = if x >= r {
                        gauss_legendre(|z| lw.weight(z), r, x)
                    } else {
                        -gauss_legendre(|z| lw.weight(z), x, r)
                    };
                    base + piece
                };
                let step = diff::default_step(r);
                let s = diff::ridders(f_at, r, step).0 / base;
                let f2 = diff::ridders(|x| lw.weight(x), r, step).0;
                (s, f2 / base - s * s)
            })
            .into_iter()
            .unzip(),
    };

    let values: Vec<f64> = (0..n).map(|i| sp[i] - k * s[i]).collect();
    let derivs: Vec<f64> = (0..n).map(|i| spp[i] - k * ds[i]).collect();

    Ok(GeneralSolution {
        superpotential: Superpotential::new(
            RadialFunction::sampled(*grid, values)?,
            RadialFunction::sampled(*grid, derivs)?,
            SuperpotentialSource::RiccatiGeneral,
        ),
        constant,
        form,
        pole,
        log_argument: big_f,
    })
}
