//! Finite-difference eigensolver for the radial equation
//! `−(ħ²/2m)χ'' + V_ℓ(r)χ = Eχ`.
//!
//! Three-point stencil on the grid nodes with `χ = 0` one step outside either
//! end, so `χ(0) = 0` and the box closes at `r_max + h`. Eigenvalues come from
//! Sturm-sequence bisection of the symmetric tridiagonal matrix. Only the
//! family's potential is used here, never the closed-form spectrum.

use serde::Serialize;

use crate::barrier::SpectralRecord;
use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::family::PotentialFamily;
use crate::grid::RadialGrid;

/// Bisection stops once the bracket is this narrow.
pub const EIGEN_TOL: f64 = 1e-12;

/// Largest `|χ(r_max)| / max |χ|` before the box is reported as too small.
pub const BOX_EDGE_LIMIT: f64 = 1e-10;

pub const HO_TOLERANCE: f64 = 5e-6;
pub const DEFAULT_TOLERANCE: f64 = 5e-5;

#[derive(Debug, Clone)]
pub struct DiscreteHamiltonian {
    /// Absent for matrices built directly from their entries.
    pub grid: Option<RadialGrid>,
    /// Node spacing used to normalise eigenvectors.
    pub spacing: f64,
    pub diagonal: Vec<f64>,
    pub off_diagonal: f64,
}

pub fn build_hamiltonian(
    family: &PotentialFamily,
    ell: u32,
    grid: &RadialGrid,
    c: &Constants,
) -> Result<DiscreteHamiltonian> {
    family.validate()?;
    let h = grid.spacing();
    let kinetic = c.hbar() * c.hbar() / (c.mass() * h * h);
    let diagonal = grid.nodes().map(|r| kinetic + family.potential(r, ell, c)).collect();
    Ok(DiscreteHamiltonian {
        grid: Some(*grid),
        spacing: h,
        diagonal,
        off_diagonal: -0.5 * kinetic,
    })
}

impl DiscreteHamiltonian {
    /// Tridiagonal matrix given by its entries, with unit spacing.
    pub fn from_entries(diagonal: Vec<f64>, off_diagonal: f64) -> Result<Self> {
        if diagonal.is_empty() || !diagonal.iter().all(|d| d.is_finite()) || !off_diagonal.is_finite() {
            return Err(Error::param("diagonal", "must be nonempty and finite"));
        }
        Ok(DiscreteHamiltonian { grid: None, spacing: 1.0, diagonal, off_diagonal })
    }

    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty()
    }

    /// Number of eigenvalues below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let e2 = self.off_diagonal * self.off_diagonal;
        let mut count = 0;
        let mut q = 1.0;
        for (i, d) in self.diagonal.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let e = self.off_diagonal.abs();
        let (lo, hi) = self
            .diagonal
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| (lo.min(*d), hi.max(*d)));
        (lo - 2.0 * e, hi + 2.0 * e)
    }

    /// The `index`-th eigenvalue (0 = lowest).
    pub fn eigenvalue(&self, index: usize) -> Result<f64> {
        if index >= self.len() {
            return Err(Error::IndexOutOfRange { k: index, n: self.len() });
        }
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= EIGEN_TOL || mid == lo || mid == hi {
                break;
            }
            if self.sturm_count(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Inverse iteration for the eigenvector of `lambda`, normalised so that
    /// `Σ h x² = 1` with a positive largest component.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let shift = lambda - 1e-9 * lambda.abs().max(1.0);
        let e = self.off_diagonal;
        let mut x = vec![1.0; n];
        for _ in 0..3 {
            // Thomas algorithm on (H − shift)y = x
            let mut c = vec![0.0; n];
            let mut y = vec![0.0; n];
            let mut denom = self.diagonal[0] - shift;
            c[0] = e / denom;
            y[0] = x[0] / denom;
            for i in 1..n {
                denom = self.diagonal[i] - shift - e * c[i - 1];
                c[i] = e / denom;
                y[i] = (x[i] - e * y[i - 1]) / denom;
            }
            for i in (0..n - 1).rev() {
                y[i] -= c[i] * y[i + 1];
            }
            let big = y.iter().fold(0.0f64, |m, v| if v.abs() > m.abs() { *v } else { m });
            x = y.iter().map(|v| v / big).collect();
        }
        let h = self.spacing;
        let norm = (h * x.iter().map(|v| v * v).sum::<f64>()).sqrt();
        x.iter().map(|v| v / norm).collect()
    }
}

/// The `k` lowest eigenvalues, ascending.
pub fn lowest_eigenvalues(h: &DiscreteHamiltonian, k: usize) -> Result<Vec<f64>> {
    lowest_eigenvalues_with(h, k, Execution::default())
}

pub fn lowest_eigenvalues_with(h: &DiscreteHamiltonian, k: usize, exec: Execution) -> Result<Vec<f64>> {
    if k == 0 || k > h.len() {
        return Err(Error::IndexOutOfRange { k, n: h.len() });
    }
    exec.try_map_range(k, |j| h.eigenvalue(j))
}

/// Sign changes among the components that are not numerically zero.
pub fn count_nodes(x: &[f64]) -> usize {
    let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut last = 0.0;
    let mut nodes = 0;
    for v in x.iter().filter(|v| v.abs() > 1e-12 * big) {
        if last * v < 0.0 {
            nodes += 1;
        }
        last = *v;
    }
    nodes
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn tolerance_for(family: &PotentialFamily) -> f64 {
    match family {
        PotentialFamily::HarmonicOscillator { .. } => HO_TOLERANCE,
        _ => DEFAULT_TOLERANCE,
    }
}

/// Ground-state eigenvalue for `(family, ell)` on `grid`, warning when the
/// eigenvector has not decayed at the box edge.
pub fn ground_state_energy(
    family: &PotentialFamily,
    ell: u32,
    grid: &RadialGrid,
    c: &Constants,
) -> Result<f64> {
    let h = build_hamiltonian(family, ell, grid, c)?;
    let lambda = h.eigenvalue(0)?;
    let x = h.eigenvector(lambda);
    let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let edge = x[x.len() - 1].abs() / big;
    if edge > BOX_EDGE_LIMIT {
        log::warn!(
            "{} l={ell}: eigenvector is {edge:.1e} of its peak at r_max = {}; box may be too small",
            family.name(),
            grid.r_max()
        );
    }
    Ok(lambda)
}

pub fn verify_record(record: &SpectralRecord, grid: &RadialGrid, c: &Constants) -> Result<OracleReport> {
    verify_record_with(record, grid, c, tolerance_for(&record.family))
}

pub fn verify_record_with(
    record: &SpectralRecord,
    grid: &RadialGrid,
    c: &Constants,
    tolerance: f64,
) -> Result<OracleReport> {
    let oracle = ground_state_energy(&record.family, record.ell, grid, c)?;
    let abs_diff = (oracle - record.energy).abs();
    Ok(OracleReport {
        closed_form: record.energy,
        oracle,
        abs_diff,
        tolerance,
        pass: abs_diff < tolerance,
    })
}
