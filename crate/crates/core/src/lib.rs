//! Bound states of radial problems with nonzero angular momentum, built from
//! the known `ℓ = 0` solution by splitting the superpotential into a base part
//! `W` and a barrier correction `ΔW`.
//!
//! The crate is organised bottom-up:
//!
//! * [`constants`], [`grid`], [`function`], [`family`] and [`quadrature`] hold
//!   the shared model: units, the uniform radial grid, radial functions, the
//!   potential catalog and the integration rules.
//! * [`factorization`] turns wavefunctions into superpotentials and measures the
//!   Riccati residuals.
//! * [`barrier`] is the closed-form catalog of barrier corrections and
//!   assembles complete [`barrier::SpectralRecord`]s.
//! * [`riccati`] builds the one-parameter family of correction superpotentials
//!   from a special solution.
//! * [`perturbation`] expands the correction in powers of `ℓ`.
//! * [`oracle`] is an independent finite-difference eigensolver used to check
//!   every closed-form energy.
//!
//! Data-parallel loops go through [`exec::Execution`], which uses rayon when the
//! `parallel` feature is enabled and runs sequentially otherwise.

pub mod barrier;
pub mod constants;
pub mod diff;
pub mod error;
pub mod exec;
pub mod factorization;
pub mod family;
pub mod function;
pub mod grid;
pub mod oracle;
pub mod perturbation;
pub mod quadrature;
pub mod riccati;

pub use barrier::{solve_state, FamilyGroundSolution, SpectralRecord};
pub use constants::Constants;
pub use error::{Error, Result};
pub use exec::Execution;
pub use factorization::{Superpotential, SuperpotentialSource};
pub use family::PotentialFamily;
pub use function::RadialFunction;
pub use grid::{make_grid, RadialGrid};
pub use riccati::{general_solution, IntegrationConstant, RiccatiProblem, SolutionForm};
