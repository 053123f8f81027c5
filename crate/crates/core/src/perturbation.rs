//! Expansion of the barrier correction in powers of `ℓ`.
//!
//! With `ΔV = Σ ℓᵏVᵏ`, `ΔW = Σ ℓᵏΔWᵏ` and `Δε = Σ ℓᵏεᵏ`, collecting powers in
//! the correction Riccati equation gives, order by order,
//!
//! ```text
//! 2W₀ΔW¹ − κΔW¹' = V¹ − ε¹
//! 2W₀ΔW² − κΔW²' = V² − ε² − (ΔW¹)²
//! ```
//!
//! Each line is linear in the new unknown and is integrated with the factor
//! `χ₀²`:
//!
//! ```text
//! ΔWᵏ(r) = 1/(κχ₀²(r)) ∫₀^r χ₀² jᵏ,    εᵏ = ⟨χ₀| Vᵏ − (lower orders) |χ₀⟩
//! ```
//!
//! where `εᵏ` is exactly the value for which `∫₀^∞ χ₀² jᵏ = 0`.

use crate::barrier::{ground_solution, FamilyGroundSolution};
use crate::constants::Constants;
use crate::diff;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::factorization::{Residual, Superpotential, SuperpotentialSource};
use crate::family::PotentialFamily;
use crate::function::RadialFunction;
use crate::grid::RadialGrid;
use crate::quadrature::{gauss_legendre, panel_integrals, tail_integral, Sum};

/// Largest fraction of `∫χ₀²` allowed beyond `r_max`.
pub const TRUNCATION_LIMIT: f64 = 1e-10;

/// `|∫₀^∞ χ₀² j| / ∫₀^∞ χ₀² |j|` above which the supplied energy is rejected.
pub const EPS_MISMATCH_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct OrderTerm {
    pub k: u32,
    /// Coefficient of `ℓᵏ` in the barrier.
    pub v: RadialFunction,
    pub eps: Option<f64>,
    pub dw: Option<Superpotential>,
}

#[derive(Debug, Clone)]
pub struct OrderExpansion {
    pub family: PotentialFamily,
    pub orders: Vec<OrderTerm>,
}

impl OrderExpansion {
    pub fn order(&self, k: u32) -> Option<&OrderTerm> {
        self.orders.iter().find(|t| t.k == k)
    }

    /// `Σ ℓᵏ Vᵏ(r)`.
    pub fn barrier_at(&self, ell: f64, r: f64) -> Result<f64> {
        let mut acc = 0.0;
        for t in &self.orders {
            acc += ell.powi(t.k as i32) * t.v.eval(r)?;
        }
        Ok(acc)
    }

    /// `Σ ℓᵏ εᵏ` over the orders that carry an energy.
    pub fn energy_series(&self, ell: f64) -> f64 {
        self.orders
            .iter()
            .filter_map(|t| t.eps.map(|e| ell.powi(t.k as i32) * e))
            .sum()
    }

    /// `Σ ℓᵏ ΔWᵏ(r)` over the orders that carry a superpotential.
    pub fn superpotential_series(&self, ell: f64, r: f64) -> Result<f64> {
        let mut acc = 0.0;
        for t in &self.orders {
            if let Some(dw) = &t.dw {
                acc += ell.powi(t.k as i32) * dw.eval(r)?;
            }
        }
        Ok(acc)
    }
}

/// Barrier coefficients per power of `ℓ`. The barrier is `ℓ(ℓ+1)f(r)`, so
/// `V¹ = V² = f` and nothing beyond.
pub fn expand_barrier(family: &PotentialFamily, c: &Constants) -> OrderExpansion {
    let f = family.barrier_coefficient_fn(c);
    OrderExpansion {
        family: *family,
        orders: (1..=2)
            .map(|k| OrderTerm { k, v: f.clone(), eps: None, dw: None })
            .collect(),
    }
}

/// Integral of `j` split as `[0, r_min]`, the grid panels and `[r_max, ∞)`.
struct Pieces {
    head: f64,
    panels: Vec<f64>,
    tail: f64,
}

impl Pieces {
    fn of(j: &RadialFunction, grid: &RadialGrid) -> Result<Self> {
        let panels = panel_integrals(j, grid, Execution::default())?;
        let (h0, r_max) = (grid.r_min(), grid.r_max());
        let (head, tail) = match j {
            RadialFunction::Analytic { .. } => (
                gauss_legendre(|r| j.eval_unchecked(r), 0.0, h0),
                tail_integral(|r| j.eval_unchecked(r), r_max, 0.05 * r_max),
            ),
            RadialFunction::Sampled { .. } => {
                // j stays finite at the origin (χ₀ ~ r against at worst 1/r²);
                // extend the quadratic through the first three nodes to 0
                let v: Vec<f64> = (0..3).map(|i| j.eval(grid.node(i))).collect::<Result<_>>()?;
                (h0 * (23.0 * v[0] - 16.0 * v[1] + 5.0 * v[2]) / 12.0, 0.0)
            }
        };
        Ok(Pieces { head, panels, tail })
    }

    fn total(&self) -> f64 {
        let mut acc = Sum::default();
        acc.add(self.head);
        for p in &self.panels {
            acc.add(*p);
        }
        acc.add(self.tail);
        acc.value()
    }

    /// `∫₀^{r_i}` and `∫_{r_i}^∞` at every node, each accumulated from its own
    /// end.
    fn running(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.panels.len() + 1;
        let mut fwd = Vec::with_capacity(n);
        let mut acc = Sum::default();
        acc.add(self.head);
        fwd.push(acc.value());
        for p in &self.panels {
            acc.add(*p);
            fwd.push(acc.value());
        }
        let mut bwd = vec![0.0; n];
        let mut acc = Sum::default();
        acc.add(self.tail);
        bwd[n - 1] = acc.value();
        for i in (0..n - 1).rev() {
            acc.add(self.panels[i]);
            bwd[i] = acc.value();
        }
        (fwd, bwd)
    }
}

fn product(label: &str, a: &RadialFunction, b: RadialFunction, grid: &RadialGrid) -> Result<RadialFunction> {
    if a.is_analytic() && b.is_analytic() {
        let a = a.clone();
        Ok(RadialFunction::analytic(label, move |r| a.eval_unchecked(r) * b.eval_unchecked(r)))
    } else {
        let (x, y) = (a.values_on(grid)?, b.values_on(grid)?);
        RadialFunction::sampled(*grid, x.iter().zip(&y).map(|(p, q)| p * q).collect())
    }
}

fn chi_squared(chi0: &RadialFunction, grid: &RadialGrid) -> Result<RadialFunction> {
    let chi = chi0.clone();
    if chi0.is_analytic() {
        Ok(RadialFunction::analytic("chi0²", move |r| chi.eval_unchecked(r).powi(2)))
    } else {
        let v = chi0.values_on(grid)?;
        RadialFunction::sampled(*grid, v.iter().map(|x| x * x).collect())
    }
}

/// `∫₀^∞ χ₀²` on the grid, with the truncation check.
fn norm(chi0: &RadialFunction, grid: &RadialGrid) -> Result<f64> {
    let rho = chi_squared(chi0, grid)?;
    let pieces = Pieces::of(&rho, grid)?;
    let total = pieces.total();
    let beyond = match &rho {
        RadialFunction::Analytic { .. } => pieces.tail,
        RadialFunction::Sampled { .. } => {
            // exponential decay from the last two nodes
            let v = rho.values_on(grid)?;
            let n = v.len();
            let rate = (v[n - 2] / v[n - 1]).ln() / grid.spacing();
            if rate > 0.0 && rate.is_finite() {
                v[n - 1] / rate
            } else {
                v[n - 1] * grid.r_max()
            }
        }
    };
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::NonFinite { what: "norm of chi0", r: grid.r_max() });
    }
    let weight = beyond.abs() / total;
    if weight > TRUNCATION_LIMIT {
        return Err(Error::Truncation { r_max: grid.r_max(), weight });
    }
    Ok(total)
}

fn expectation(chi0: &RadialFunction, op: RadialFunction, grid: &RadialGrid) -> Result<f64> {
    let n2 = norm(chi0, grid)?;
    let j = product("chi0² op", &chi_squared(chi0, grid)?, op, grid)?;
    Ok(Pieces::of(&j, grid)?.total() / n2)
}

/// `ε¹ = ⟨χ₀|V¹|χ₀⟩ / ⟨χ₀|χ₀⟩`.
pub fn first_order_energy(chi0: &RadialFunction, v1: &RadialFunction, grid: &RadialGrid) -> Result<f64> {
    expectation(chi0, v1.clone(), grid)
}

fn squared(dw: &Superpotential, grid: &RadialGrid) -> Result<RadialFunction> {
    let w = dw.value().clone();
    if w.is_analytic() {
        Ok(RadialFunction::analytic("dW²", move |r| w.eval_unchecked(r).powi(2)))
    } else {
        let v = w.values_on(grid)?;
        RadialFunction::sampled(*grid, v.iter().map(|x| x * x).collect())
    }
}

fn difference(a: &RadialFunction, b: RadialFunction, grid: &RadialGrid) -> Result<RadialFunction> {
    if a.is_analytic() && b.is_analytic() {
        let a = a.clone();
        Ok(RadialFunction::analytic("a - b", move |r| a.eval_unchecked(r) - b.eval_unchecked(r)))
    } else {
        let (x, y) = (a.values_on(grid)?, b.values_on(grid)?);
        RadialFunction::sampled(*grid, x.iter().zip(&y).map(|(p, q)| p - q).collect())
    }
}

/// `ε² = ⟨χ₀| V² − (ΔW¹)² |χ₀⟩ / ⟨χ₀|χ₀⟩`.
pub fn second_order_energy(
    chi0: &RadialFunction,
    v2: &RadialFunction,
    dw1: &Superpotential,
    grid: &RadialGrid,
) -> Result<f64> {
    expectation(chi0, difference(v2, squared(dw1, grid)?, grid)?, grid)
}

/// `ΔW = 1/(κχ₀²) ∫₀^r χ₀²·src` for a source with vanishing weighted mean.
///
/// Inside the peak of `χ₀²` the integral runs from the origin, beyond it from
/// infinity, so neither side divides a cancelled difference by a tiny `χ₀²`.
fn integrate_order(
    order: u32,
    eps: f64,
    chi0: &RadialFunction,
    src: RadialFunction,
    grid: &RadialGrid,
    c: &Constants,
) -> Result<Superpotential> {
    let k = c.kappa();
    norm(chi0, grid)?;
    let rho = chi_squared(chi0, grid)?;
    let j = product("chi0² src", &rho, src, grid)?;
    let pieces = Pieces::of(&j, grid)?;
    let abs_j = match &j {
        RadialFunction::Analytic { .. } => {
            let jj = j.clone();
            RadialFunction::analytic("|j|", move |r| jj.eval_unchecked(r).abs())
        }
        RadialFunction::Sampled { .. } => {
            RadialFunction::sampled(*grid, j.values_on(grid)?.iter().map(|x| x.abs()).collect())?
        }
    };
    let scale = Pieces::of(&abs_j, grid)?.total();
    let mismatch = if scale == 0.0 { 0.0 } else { pieces.total() / scale };
    if !mismatch.is_finite() || mismatch.abs() > EPS_MISMATCH_LIMIT {
        return Err(Error::InconsistentEps1 { order, eps, mismatch });
    }

    let (fwd, bwd) = pieces.running();
    let rv = rho.values_on(grid)?;
    let jv = j.values_on(grid)?;
    let peak = rv
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v > rv[best] { i } else { best });
    let chi = chi0.values_on(grid)?;
    // χ₀'/χ₀ from χ₀ itself
    let log_slope: Vec<f64> = if chi0.is_analytic() {
        Execution::default().map_range(grid.len(), |i| {
            let r = grid.node(i);
            diff::derivative(|x| chi0.eval_unchecked(x), r) / chi[i]
        })
    } else {
        diff::grid_derivative(&chi, grid.spacing())
            .iter()
            .zip(&chi)
            .map(|(d, x)| d / x)
            .collect()
    };

    let mut w = Vec::with_capacity(grid.len());
    let mut dw = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let integral = if i <= peak { fwd[i] } else { -bwd[i] };
        let wi = integral / (k * rv[i]);
        let di = jv[i] / (k * rv[i]) - 2.0 * log_slope[i] * wi;
        if !(wi.is_finite() && di.is_finite()) {
            return Err(Error::NonFinite { what: "order superpotential", r: grid.node(i) });
        }
        w.push(wi);
        dw.push(di);
    }
    Ok(Superpotential::new(
        RadialFunction::sampled(*grid, w)?,
        RadialFunction::sampled(*grid, dw)?,
        SuperpotentialSource::PerturbationSeries,
    ))
}

/// `ΔW¹ = 1/(κχ₀²) ∫₀^r χ₀²(ε¹ − V¹)`. An `eps1` other than
/// [`first_order_energy`] leaves a nonzero total and is rejected.
pub fn first_order_superpotential(
    chi0: &RadialFunction,
    v1: &RadialFunction,
    eps1: f64,
    grid: &RadialGrid,
    c: &Constants,
) -> Result<Superpotential> {
    let v = v1.clone();
    let src = if v1.is_analytic() {
        RadialFunction::analytic("eps1 - V1", move |r| eps1 - v.eval_unchecked(r))
    } else {
        RadialFunction::sampled(*grid, v1.values_on(grid)?.iter().map(|x| eps1 - x).collect())?
    };
    integrate_order(1, eps1, chi0, src, grid, c)
}

/// `ΔW² = 1/(κχ₀²) ∫₀^r χ₀²(ε² + (ΔW¹)² − V²)`.
pub fn second_order_superpotential(
    chi0: &RadialFunction,
    v2: &RadialFunction,
    dw1: &Superpotential,
    eps2: f64,
    grid: &RadialGrid,
    c: &Constants,
) -> Result<Superpotential> {
    let q = difference(&squared(dw1, grid)?, v2.clone(), grid)?;
    let src = RadialFunction::sampled(*grid, q.values_on(grid)?.iter().map(|x| eps2 + x).collect())?;
    integrate_order(2, eps2, chi0, src, grid, c)
}

/// `max |2W₀ΔW¹ − κΔW¹' − (V¹ − ε¹)|` on the interior.
pub fn first_order_residual(
    w0: &Superpotential,
    dw1: &Superpotential,
    v1: &RadialFunction,
    eps1: f64,
    grid: &RadialGrid,
    c: &Constants,
) -> Result<Residual> {
    let zero = vec![0.0; grid.len()];
    order_residual(w0, dw1, &v1.values_on(grid)?, &zero, eps1, grid, c)
}

/// `max |2W₀ΔW² − κΔW²' − (V² − ε² − (ΔW¹)²)|` on the interior.
pub fn second_order_residual(
    w0: &Superpotential,
    dw1: &Superpotential,
    dw2: &Superpotential,
    v2: &RadialFunction,
    eps2: f64,
    grid: &RadialGrid,
    c: &Constants,
) -> Result<Residual> {
    let lower: Vec<f64> = dw1.value().values_on(grid)?.iter().map(|x| x * x).collect();
    order_residual(w0, dw2, &v2.values_on(grid)?, &lower, eps2, grid, c)
}

fn order_residual(
    w0: &Superpotential,
    dw: &Superpotential,
    v: &[f64],
    lower: &[f64],
    eps: f64,
    grid: &RadialGrid,
    c: &Constants,
) -> Result<Residual> {
    let k = c.kappa();
    let (w, d, dp) = (
        w0.value().values_on(grid)?,
        dw.value().values_on(grid)?,
        dw.derivative().values_on(grid)?,
    );
    let res: Vec<f64> = (0..grid.len())
        .map(|i| 2.0 * w[i] * d[i] - k * dp[i] - (v[i] - eps - lower[i]))
        .collect();
    Residual::from_values(grid, &res)
}

/// Full second-order expansion of a family on `grid`.
pub fn expand(family: &PotentialFamily, grid: &RadialGrid, c: &Constants) -> Result<OrderExpansion> {
    let FamilyGroundSolution { chi0, .. } = ground_solution(family, c)?;
    let mut ex = expand_barrier(family, c);
    let v1 = ex.orders[0].v.clone();
    let v2 = ex.orders[1].v.clone();
    let eps1 = first_order_energy(&chi0, &v1, grid)?;
    let dw1 = first_order_superpotential(&chi0, &v1, eps1, grid, c)?;
    let eps2 = second_order_energy(&chi0, &v2, &dw1, grid)?;
    let dw2 = second_order_superpotential(&chi0, &v2, &dw1, eps2, grid, c)?;
    log::debug!("{}: eps1 = {eps1}, eps2 = {eps2}", family.name());
    ex.orders[0].eps = Some(eps1);
    ex.orders[0].dw = Some(dw1);
    ex.orders[1].eps = Some(eps2);
    ex.orders[1].dw = Some(dw2);
    Ok(ex)
}
