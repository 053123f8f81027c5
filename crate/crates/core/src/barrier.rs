//! Closed-form barrier corrections for the catalog families and assembly of
//! complete solved states.
//!
//! For each family the `ℓ = 0` ground state `(W₀, χ₀, ε₀)` is known. The
//! barrier correction `ΔW` solves
//!
//! ```text
//! ΔW² − κΔW' + 2W₀ΔW = barrier(r) − Δε
//! ```
//!
//! and the full state is `ψ = χ₀φ` with `φ = exp(−(1/κ)∫ΔW)` and
//! `E = ε₀ + Δε`.

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::factorization::{
    riccati_residual_eq5, riccati_residual_eq6, riccati_residual_eq7, Superpotential,
};
use crate::family::{screening, PotentialFamily};
use crate::function::RadialFunction;
use crate::grid::RadialGrid;
use crate::quadrature::{cumulative_integral, simpson};

/// Lower limit of the indefinite integral defining `φ`.
pub const R_REF: f64 = 1.0;

/// Known `ℓ = 0` ground state of a family.
#[derive(Debug, Clone)]
pub struct FamilyGroundSolution {
    pub family: PotentialFamily,
    pub w0: Superpotential,
    /// Unnormalized closed form.
    pub chi0: RadialFunction,
    pub chi0_prime: RadialFunction,
    /// `ln χ₀`, for grids on which `χ₀` itself would underflow.
    pub log_chi0: RadialFunction,
    pub epsilon0: f64,
}

/// `√(m/2)·e²/ħ`, the constant part of the Coulomb-like superpotentials;
/// its square is the Rydberg-like energy `m e⁴/(2ħ²)`.
fn coulomb_scale(e2: f64, c: &Constants) -> f64 {
    (c.mass() / 2.0).sqrt() * e2 / c.hbar()
}

fn hulthen_beta(family: &PotentialFamily, c: &Constants) -> Result<(f64, f64, f64)> {
    match *family {
        PotentialFamily::Hulthen { alpha, e2 } | PotentialFamily::GreeneAldrichEffective { alpha, e2 } => {
            Ok((alpha, e2, family.beta(c).expect("hulthen type")))
        }
        _ => unreachable!("not a Hulthén-type family"),
    }
}

/// Bound-state guard `β < 2/(ℓ+1)²`.
fn check_bound(beta: f64, ell: u32) -> Result<()> {
    let limit = 2.0 / ((ell as f64 + 1.0) * (ell as f64 + 1.0));
    if beta < limit {
        Ok(())
    } else {
        Err(Error::NoBoundState(format!(
            "beta = {beta} must be below 2/(l+1)^2 = {limit} for l = {ell}"
        )))
    }
}

pub fn ground_solution(family: &PotentialFamily, c: &Constants) -> Result<FamilyGroundSolution> {
    family.validate()?;
    let k = c.kappa();
    let (hbar, m) = (c.hbar(), c.mass());
    let sol = match *family {
        PotentialFamily::HarmonicOscillator { w } => {
            let a = m * w / (2.0 * hbar);
            let s = (m / 2.0).sqrt() * w;
            FamilyGroundSolution {
                family: *family,
                w0: Superpotential::closed_form("W0[ho]", move |r| s * r - k / r, move |r| {
                    s + k / (r * r)
                }),
                chi0: RadialFunction::analytic("r exp(-m w r²/2ħ)", move |r| r * (-a * r * r).exp()),
                chi0_prime: RadialFunction::analytic("chi0'[ho]", move |r| {
                    (1.0 - 2.0 * a * r * r) * (-a * r * r).exp()
                }),
                log_chi0: RadialFunction::analytic("ln chi0[ho]", move |r| r.ln() - a * r * r),
                epsilon0: 1.5 * hbar * w,
            }
        }
        PotentialFamily::Coulomb { e2 } => {
            let u = coulomb_scale(e2, c);
            let q = m * e2 / (hbar * hbar);
            FamilyGroundSolution {
                family: *family,
                w0: Superpotential::closed_form("W0[coulomb]", move |r| u - k / r, move |r| {
                    k / (r * r)
                }),
                chi0: RadialFunction::analytic("r exp(-m e² r/ħ²)", move |r| r * (-q * r).exp()),
                chi0_prime: RadialFunction::analytic("chi0'[coulomb]", move |r| {
                    (1.0 - q * r) * (-q * r).exp()
                }),
                log_chi0: RadialFunction::analytic("ln chi0[coulomb]", move |r| r.ln() - q * r),
                epsilon0: -u * u,
            }
        }
        PotentialFamily::Hulthen { .. } | PotentialFamily::GreeneAldrichEffective { .. } => {
            let (alpha, e2, beta) = hulthen_beta(family, c)?;
            check_bound(beta, 0)?;
            let u = coulomb_scale(e2, c) * (1.0 - beta / 2.0);
            let q = m * e2 / (hbar * hbar) * (1.0 - beta / 2.0);
            FamilyGroundSolution {
                family: *family,
                w0: Superpotential::closed_form(
                    "W0[hulthen]",
                    move |r| u - k * alpha * screening(alpha, r),
                    move |r| {
                        let y = screening(alpha, r);
                        k * alpha * alpha * y * (1.0 + y)
                    },
                ),
                chi0: RadialFunction::analytic("(1-e^{-ar}) exp(-q r)", move |r| {
                    -(-alpha * r).exp_m1() * (-q * r).exp()
                }),
                chi0_prime: RadialFunction::analytic("chi0'[hulthen]", move |r| {
                    (alpha * (-alpha * r).exp() + q * (-alpha * r).exp_m1()) * (-q * r).exp()
                }),
                log_chi0: RadialFunction::analytic("ln chi0[hulthen]", move |r| {
                    (-(-alpha * r).exp_m1()).ln() - q * r
                }),
                epsilon0: -u * u,
            }
        }
    };
    Ok(sol)
}

/// Closed-form `ΔW` that absorbs the barrier at angular momentum `ell`.
pub fn barrier_superpotential(
    family: &PotentialFamily,
    ell: u32,
    c: &Constants,
) -> Result<Superpotential> {
    family.validate()?;
    if ell == 0 {
        if family.is_hulthen_type() {
            check_bound(hulthen_beta(family, c)?.2, 0)?;
        }
        return Ok(Superpotential::zero());
    }
    let k = c.kappa();
    let l = ell as f64;
    let dw = match *family {
        PotentialFamily::HarmonicOscillator { .. } => {
            Superpotential::closed_form("dW[ho]", move |r| -l * k / r, move |r| l * k / (r * r))
        }
        PotentialFamily::Coulomb { e2 } => {
            let shift = coulomb_scale(e2, c) * l / (l + 1.0);
            Superpotential::closed_form(
                "dW[coulomb]",
                move |r| -l * k / r - shift,
                move |r| l * k / (r * r),
            )
        }
        PotentialFamily::Hulthen { .. } | PotentialFamily::GreeneAldrichEffective { .. } => {
            let (alpha, e2, beta) = hulthen_beta(family, c)?;
            check_bound(beta, ell)?;
            let shift = coulomb_scale(e2, c) * l * (1.0 / (l + 1.0) + beta / 2.0);
            Superpotential::closed_form(
                "dW[hulthen]",
                move |r| -shift - l * k * alpha * screening(alpha, r),
                move |r| {
                    let y = screening(alpha, r);
                    l * k * alpha * alpha * y * (1.0 + y)
                },
            )
        }
    };
    Ok(dw)
}

/// `Δε(ℓ)` with `ℓ` treated as a real parameter. Integer `ℓ` gives the
/// physical correction; real `ℓ` exposes the closed form to Taylor checks.
pub fn energy_correction_at(family: &PotentialFamily, ell: f64, c: &Constants) -> Result<f64> {
    family.validate()?;
    let v = match *family {
        PotentialFamily::HarmonicOscillator { w } => ell * c.hbar() * w,
        PotentialFamily::Coulomb { e2 } => {
            let ry = coulomb_scale(e2, c).powi(2);
            -ry * (1.0 / ((ell + 1.0) * (ell + 1.0)) - 1.0)
        }
        PotentialFamily::Hulthen { .. } | PotentialFamily::GreeneAldrichEffective { .. } => {
            let (_, e2, beta) = hulthen_beta(family, c)?;
            let ry = coulomb_scale(e2, c).powi(2);
            let g = 1.0 / (ell + 1.0) - (ell + 1.0) * beta / 2.0;
            -ry * g * g + ry * (1.0 - beta / 2.0).powi(2)
        }
    };
    Ok(v)
}

pub fn energy_correction(family: &PotentialFamily, ell: u32, c: &Constants) -> Result<f64> {
    if family.is_hulthen_type() {
        check_bound(hulthen_beta(family, c)?.2, ell)?;
    }
    if ell == 0 {
        family.validate()?;
        return Ok(0.0);
    }
    energy_correction_at(family, ell as f64, c)
}

/// `E = ε₀ + Δε` in closed form.
pub fn closed_form_energy(family: &PotentialFamily, ell: u32, c: &Constants) -> Result<f64> {
    Ok(ground_solution(family, c)?.epsilon0 + energy_correction(family, ell, c)?)
}

/// Taylor coefficients `[ε¹, ε²]` of `Δε(ℓ)` about `ℓ = 0`, worked out by
/// hand from the closed forms.
pub fn taylor_coefficients(family: &PotentialFamily, c: &Constants) -> Result<[f64; 2]> {
    family.validate()?;
    Ok(match *family {
        PotentialFamily::HarmonicOscillator { w } => [c.hbar() * w, 0.0],
        PotentialFamily::Coulomb { e2 } => {
            let ry = coulomb_scale(e2, c).powi(2);
            [2.0 * ry, -3.0 * ry]
        }
        PotentialFamily::Hulthen { .. } | PotentialFamily::GreeneAldrichEffective { .. } => {
            let (_, e2, beta) = hulthen_beta(family, c)?;
            let ry = coulomb_scale(e2, c).powi(2);
            [
                2.0 * ry * (1.0 - beta / 2.0) * (1.0 + beta / 2.0),
                -ry * (3.0 + beta * beta / 4.0),
            ]
        }
    })
}

/// `ln φ(r_i) = −(1/κ)∫_{r_ref}^{r_i} ΔW` at every node.
pub fn log_moderating_function(
    dw: &Superpotential,
    grid: &RadialGrid,
    r_ref: f64,
    c: &Constants,
) -> Result<Vec<f64>> {
    let inv_k = 1.0 / c.kappa();
    Ok(cumulative_integral(dw.value(), grid, r_ref, Execution::default())?
        .into_iter()
        .map(|v| -inv_k * v)
        .collect())
}

/// `φ(r) = exp(−(1/κ)∫_{r_ref}^r ΔW)` sampled on `grid`, with `φ(r_ref) = 1`.
pub fn moderating_function(
    dw: &Superpotential,
    grid: &RadialGrid,
    r_ref: f64,
    c: &Constants,
) -> Result<RadialFunction> {
    let values = log_moderating_function(dw, grid, r_ref, c)?
        .into_iter()
        .map(f64::exp)
        .collect();
    RadialFunction::sampled(*grid, values)
}

/// A fully solved state.
#[derive(Debug, Clone)]
pub struct SpectralRecord {
    pub family: PotentialFamily,
    pub ell: u32,
    pub epsilon0: f64,
    pub delta_eps: f64,
    /// `epsilon0 + delta_eps`, stored once.
    pub energy: f64,
    pub grid: RadialGrid,
    /// `N·χ₀` on the grid, with `N` chosen so that `ψ` is normalized.
    pub chi: RadialFunction,
    /// `φ` on the grid, `φ(R_REF) = 1`.
    pub phi: RadialFunction,
    /// `ψ = χφ`, normalized by grid quadrature.
    pub psi: RadialFunction,
    /// Multiplier `N` applied to the closed-form `χ₀`.
    pub norm_constant: f64,
    pub residual_eq5_max: f64,
    pub residual_eq6_max: f64,
    pub residual_eq7_max: f64,
}

pub fn solve_state(
    family: &PotentialFamily,
    ell: u32,
    grid: &RadialGrid,
    c: &Constants,
) -> Result<SpectralRecord> {
    let ground = ground_solution(family, c)?;
    let dw = barrier_superpotential(family, ell, c)?;
    let delta_eps = energy_correction(family, ell, c)?;
    let energy = ground.epsilon0 + delta_eps;

    let log_phi = log_moderating_function(&dw, grid, R_REF, c)?;
    let log_chi = ground.log_chi0.values_on(grid)?;
    let log_psi: Vec<f64> = log_chi.iter().zip(&log_phi).map(|(a, b)| a + b).collect();
    let shift = log_psi.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let unit: Vec<f64> = log_psi.iter().map(|v| (v - shift).exp()).collect();
    let sq: Vec<f64> = unit.iter().map(|v| v * v).collect();
    let scale = simpson(&sq, grid.spacing()).sqrt().recip();
    let log_norm = scale.ln() - shift;

    let psi: Vec<f64> = unit.iter().map(|v| scale * v).collect();
    let chi: Vec<f64> = log_chi.iter().map(|v| (v + log_norm).exp()).collect();
    let phi: Vec<f64> = log_phi.iter().map(|v| v.exp()).collect();
    for (i, (&p, &f)) in psi.iter().zip(&phi).enumerate() {
        if !(p.is_finite() && f.is_finite()) {
            return Err(Error::NonFinite {
                what: "psi/phi",
                r: grid.node(i),
            });
        }
    }
    if let Some(i) = grid.interior().find(|&i| psi[i] <= 0.0) {
        return Err(Error::NodefulWavefunction { r: grid.node(i) });
    }

    let r5 = riccati_residual_eq5(&ground.w0, &family.ground_potential_fn(c), ground.epsilon0, grid, c)?;
    let r6 = riccati_residual_eq6(&ground.w0, &dw, &family.barrier_fn(ell, c), delta_eps, grid, c)?;
    let r7 = riccati_residual_eq7(&ground.w0, &dw, &family.potential_fn(ell, c), energy, grid, c)?;

    Ok(SpectralRecord {
        family: *family,
        ell,
        epsilon0: ground.epsilon0,
        delta_eps,
        energy,
        grid: *grid,
        chi: RadialFunction::sampled(*grid, chi)?,
        phi: RadialFunction::sampled(*grid, phi)?,
        psi: RadialFunction::sampled(*grid, psi)?,
        norm_constant: log_norm.exp(),
        residual_eq5_max: r5.max,
        residual_eq6_max: r6.max,
        residual_eq7_max: r7.max,
    })
}

/// Solve several `ℓ` values, each on the grid chosen by `grid_for`. Output
/// order follows `ells` regardless of execution mode.
pub fn solve_states<G>(
    family: &PotentialFamily,
    ells: &[u32],
    grid_for: G,
    c: &Constants,
    exec: Execution,
) -> Vec<Result<SpectralRecord>>
where
    G: Fn(u32) -> Result<RadialGrid> + Sync + Send,
{
    exec.map(ells, |&ell| solve_state(family, ell, &grid_for(ell)?, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::centrifugal_barrier;
    use crate::grid::make_grid;
    use std::f64::consts::FRAC_1_SQRT_2;

    const HO: PotentialFamily = PotentialFamily::HarmonicOscillator { w: 1.0 };
    const COULOMB: PotentialFamily = PotentialFamily::Coulomb { e2: 1.0 };
    const HULTHEN: PotentialFamily = PotentialFamily::Hulthen { alpha: 0.1, e2: 1.0 };

    fn atomic() -> Constants {
        Constants::default()
    }

    #[test]
    fn ground_energies() {
        let c = atomic();
        assert_eq!(ground_solution(&HO, &c).unwrap().epsilon0, 1.5);
        assert!((ground_solution(&COULOMB, &c).unwrap().epsilon0 + 0.5).abs() < 1e-15);
        // -0.5 * 0.95²
        let e = ground_solution(&HULTHEN, &c).unwrap().epsilon0;
        assert!((e + 0.45125).abs() < 1e-15, "{e}");
    }

    #[test]
    fn hulthen_without_bound_state() {
        let c = atomic();
        let f = PotentialFamily::Hulthen { alpha: 2.5, e2: 1.0 };
        assert!(matches!(ground_solution(&f, &c), Err(Error::NoBoundState(_))));
        let f = PotentialFamily::Hulthen { alpha: 0.6, e2: 1.0 };
        assert!(ground_solution(&f, &c).is_ok());
        assert!(matches!(barrier_superpotential(&f, 1, &c), Err(Error::NoBoundState(_))));
        assert!(matches!(energy_correction(&f, 1, &c), Err(Error::NoBoundState(_))));
    }

    #[test]
    fn ground_residuals_on_default_grids() {
        let c = atomic();
        for fam in [HO, COULOMB, HULTHEN] {
            let g = fam.default_grid(0, &c).unwrap();
            let gs = ground_solution(&fam, &c).unwrap();
            let r = riccati_residual_eq5(&gs.w0, &fam.ground_potential_fn(&c), gs.epsilon0, &g, &c)
                .unwrap();
            assert!(r.max < 1e-8, "{fam:?}: {r:?}");
        }
    }

    #[test]
    fn ground_closed_forms_are_consistent() {
        // chi0' and ln chi0 agree with chi0, and W0 = -k chi0'/chi0
        let c = atomic();
        for fam in [HO, COULOMB, HULTHEN] {
            let gs = ground_solution(&fam, &c).unwrap();
            for r in [0.05, 0.7, 2.0, 5.0] {
                let chi = gs.chi0.eval(r).unwrap();
                let d = crate::diff::derivative(|x| gs.chi0.eval(x).unwrap(), r);
                assert!((gs.chi0_prime.eval(r).unwrap() - d).abs() < 1e-9 * (1.0 + d.abs()));
                assert!((gs.log_chi0.eval(r).unwrap() - chi.ln()).abs() < 1e-12);
                let w = -c.kappa() * gs.chi0_prime.eval(r).unwrap() / chi;
                assert!((gs.w0.eval(r).unwrap() - w).abs() < 1e-12 * (1.0 + w.abs()));
            }
        }
    }

    #[test]
    fn barrier_superpotential_examples() {
        let c = atomic();
        let ho = barrier_superpotential(&HO, 2, &c).unwrap();
        for r in [0.1, 1.0, 4.0] {
            assert!((ho.eval(r).unwrap() + 2f64.sqrt() / r).abs() < 1e-14);
        }
        let co = barrier_superpotential(&COULOMB, 1, &c).unwrap();
        for r in [0.1, 1.0, 4.0] {
            let want = -FRAC_1_SQRT_2 / r - 1.0 / (2.0 * 2f64.sqrt());
            assert!((co.eval(r).unwrap() - want).abs() < 1e-14);
        }
        for fam in [HO, COULOMB, HULTHEN] {
            let z = barrier_superpotential(&fam, 0, &c).unwrap();
            assert_eq!(z.eval(0.3).unwrap(), 0.0);
        }
    }

    #[test]
    fn energy_correction_examples() {
        let c = atomic();
        assert_eq!(energy_correction(&HO, 4, &c).unwrap(), 4.0);
        assert!((energy_correction(&COULOMB, 1, &c).unwrap() - 0.375).abs() < 1e-15);
        // -0.5(0.5 - 0.1)² + 0.5(0.95)²
        assert!((energy_correction(&HULTHEN, 1, &c).unwrap() - 0.37125).abs() < 1e-15);
        for fam in [HO, COULOMB, HULTHEN] {
            assert_eq!(energy_correction(&fam, 0, &c).unwrap(), 0.0);
        }
    }

    #[test]
    fn eq6_residual_examples() {
        let c = atomic();
        let g = make_grid(15.0, 4001).unwrap();
        let gs = ground_solution(&HO, &c).unwrap();
        let dw = barrier_superpotential(&HO, 1, &c).unwrap();
        let r = riccati_residual_eq6(&gs.w0, &dw, &centrifugal_barrier(1, &c), 1.0, &g, &c).unwrap();
        assert!(r.max < 1e-8, "{r:?}");

        let g = HULTHEN.default_grid(1, &c).unwrap();
        let gs = ground_solution(&HULTHEN, &c).unwrap();
        let dw = barrier_superpotential(&HULTHEN, 1, &c).unwrap();
        let de = energy_correction(&HULTHEN, 1, &c).unwrap();
        let r = riccati_residual_eq6(&gs.w0, &dw, &HULTHEN.barrier_fn(1, &c), de, &g, &c).unwrap();
        assert!(r.max < 1e-8, "{r:?}");
    }

    #[test]
    fn eq7_residual_examples() {
        let c = atomic();
        let g = make_grid(15.0, 4001).unwrap();
        let gs = ground_solution(&HO, &c).unwrap();
        let dw = barrier_superpotential(&HO, 2, &c).unwrap();
        let v = RadialFunction::analytic("r²/2 + 3/r²", |r| r * r / 2.0 + 3.0 / (r * r));
        let r = riccati_residual_eq7(&gs.w0, &dw, &v, 3.5, &g, &c).unwrap();
        assert!(r.max < 1e-8, "{r:?}");

        let gs = ground_solution(&COULOMB, &c).unwrap();
        let dw = barrier_superpotential(&COULOMB, 1, &c).unwrap();
        let v = RadialFunction::analytic("-1/r + 1/r²", |r| -1.0 / r + 1.0 / (r * r));
        let r = riccati_residual_eq7(&gs.w0, &dw, &v, -0.125, &g, &c).unwrap();
        assert!(r.max < 1e-8, "{r:?}");
    }

    #[test]
    fn moderating_function_examples() {
        let c = atomic();
        let g = make_grid(10.0, 4000).unwrap();
        let phi = moderating_function(&barrier_superpotential(&HO, 3, &c).unwrap(), &g, 1.0, &c)
            .unwrap();
        for r in g.nodes() {
            let want = r.powi(3);
            assert!(((phi.eval(r).unwrap() - want) / want).abs() < 1e-6);
        }
        let phi =
            moderating_function(&barrier_superpotential(&COULOMB, 1, &c).unwrap(), &g, 1.0, &c)
                .unwrap();
        for r in g.nodes() {
            let want = r * (0.5 * (r - 1.0)).exp();
            assert!(((phi.eval(r).unwrap() - want) / want).abs() < 1e-6);
        }
        let phi = moderating_function(&Superpotential::zero(), &g, 1.0, &c).unwrap();
        assert!(g.nodes().all(|r| phi.eval(r).unwrap() == 1.0));
    }

    #[test]
    fn solve_state_examples() {
        let c = atomic();
        let rec = solve_state(&HO, 1, &HO.default_grid(1, &c).unwrap(), &c).unwrap();
        assert_eq!(rec.energy, 2.5);
        let (g, psi) = rec.psi.samples().unwrap();
        let norm = (std::f64::consts::PI.sqrt() * 3.0 / 8.0).sqrt().recip();
        for i in (10..g.len()).step_by(301) {
            let r = g.node(i);
            let want = norm * r * r * (-r * r / 2.0).exp();
            assert!((psi[i] - want).abs() < 1e-7);
        }

        let rec = solve_state(&COULOMB, 1, &COULOMB.default_grid(1, &c).unwrap(), &c).unwrap();
        assert!((rec.energy + 0.125).abs() < 1e-15);
        let (g, psi) = rec.psi.samples().unwrap();
        // ∫ r⁴ e^{-r} dr = 24
        for i in (10..4000).step_by(211) {
            let r = g.node(i);
            let want = r * r * (-r / 2.0).exp() / 24f64.sqrt();
            assert!((psi[i] - want).abs() < 1e-7);
        }

        let rec = solve_state(&HULTHEN, 1, &HULTHEN.default_grid(1, &c).unwrap(), &c).unwrap();
        assert!((rec.energy + 0.08).abs() < 1e-15);
        let (g, psi) = rec.psi.samples().unwrap();
        let shape = |r: f64| (-(-0.1 * r).exp_m1()).powi(2) * (-0.4 * r).exp();
        let ratio = psi[1000] / shape(g.node(1000));
        for i in (10..g.len()).step_by(997) {
            let want = ratio * shape(g.node(i));
            assert!((psi[i] - want).abs() < 1e-9 * want.abs().max(1e-30) + 1e-300);
        }
    }

    #[test]
    fn record_invariants() {
        let c = atomic();
        for fam in [HO, COULOMB, HULTHEN] {
            for ell in 0..=3 {
                let g = fam.default_grid(ell, &c).unwrap();
                let rec = solve_state(&fam, ell, &g, &c).unwrap();
                assert_eq!(rec.energy, rec.epsilon0 + rec.delta_eps);
                let (_, psi) = rec.psi.samples().unwrap();
                let (_, chi) = rec.chi.samples().unwrap();
                let (_, phi) = rec.phi.samples().unwrap();
                for i in 0..g.len() {
                    let prod = chi[i] * phi[i];
                    assert!((psi[i] - prod).abs() <= 1e-12 * psi[i].abs().max(prod.abs()) + 1e-300);
                }
                let sq: Vec<f64> = psi.iter().map(|v| v * v).collect();
                assert!((simpson(&sq, g.spacing()) - 1.0).abs() < 1e-8);
                if ell == 0 {
                    assert_eq!(rec.delta_eps, 0.0);
                    assert!(phi.iter().all(|&p| p == 1.0));
                }
                assert!(rec.residual_eq6_max < 1e-8 && rec.residual_eq7_max < 1e-8, "{fam:?} {ell}");
            }
        }
    }

    #[test]
    fn sweep_order_is_by_ell() {
        let c = atomic();
        let ells = [3, 0, 2, 1];
        let out = solve_states(&HO, &ells, |_| make_grid(12.0, 1500), &c, Execution::Parallel);
        let got: Vec<u32> = out.iter().map(|r| r.as_ref().unwrap().ell).collect();
        assert_eq!(got, ells);
    }

    #[test]
    fn non_default_constants() {
        let c = Constants::new(1.3, 0.7).unwrap();
        for fam in [
            PotentialFamily::HarmonicOscillator { w: 2.0 },
            PotentialFamily::Coulomb { e2: 1.7 },
            PotentialFamily::Hulthen { alpha: 0.05, e2: 1.7 },
        ] {
            for ell in 0..=2 {
                let g = fam.default_grid(ell, &c).unwrap();
                let rec = solve_state(&fam, ell, &g, &c).unwrap();
                assert!(rec.residual_eq5_max < 1e-8, "{fam:?} {ell} {}", rec.residual_eq5_max);
                assert!(rec.residual_eq6_max < 1e-8, "{fam:?} {ell} {}", rec.residual_eq6_max);
                assert!(rec.residual_eq7_max < 1e-8, "{fam:?} {ell} {}", rec.residual_eq7_max);
            }
        }
    }
}
