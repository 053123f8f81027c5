use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "susyell", version, about = "Radial bound states with angular momentum from their s-wave partners")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form state for each requested l
    Solve(CommonArgs),
    /// Check every Riccati identity and the oracle spectrum against tolerances
    Verify(VerifyArgs),
    /// Order-by-order l expansion of the energy correction
    Perturb(CommonArgs),
    /// Lowest eigenvalues of the finite-difference Hamiltonian
    Oracle(OracleArgs),
    /// Write chi, phi and psi on the grid as CSV
    DumpWavefunction(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    /// Oscillator frequency
    #[arg(long)]
    pub w: Option<f64>,
    /// Coupling e²
    #[arg(long)]
    pub e2: Option<f64>,
    /// Hulthén screening parameter
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Single l or inclusive range A..B
    #[arg(long)]
    pub ell: Option<EllRange>,
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long)]
    pub npoints: Option<usize>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub tol_residual: Option<f64>,
    #[arg(long)]
    pub tol_oracle: Option<f64>,
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with the same keys as the flags; flags win
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub dev: DevArgs,
}

/// Test hooks, only accepted together with `--dev`.
#[derive(Debug, Clone, Default, Args)]
pub struct DevArgs {
    #[arg(long, hide = true)]
    pub dev: bool,
    /// Add this constant to every energy correction before checking
    #[arg(long, hide = true, requires = "dev")]
    pub inject_deps_error: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of eigenvalues per l
    #[arg(long, default_value_t = 1)]
    pub levels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    Ho,
    Coulomb,
    Hulthen,
    GreeneAldrich,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Table,
}

/// Inclusive `lo..hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EllRange {
    pub lo: u32,
    pub hi: u32,
}

impl EllRange {
    pub fn values(&self) -> Vec<u32> {
        (self.lo..=self.hi).collect()
    }

    pub fn is_single(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for EllRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_single() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

impl FromStr for EllRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("`{t}` is not a nonnegative integer"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b)?),
            None => {
                let v = num(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(EllRange { lo, hi })
    }
}

impl<'de> Deserialize<'de> for EllRange {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(EllRange { lo: v, hi: v }),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ell_syntax() {
        assert_eq!("3".parse::<EllRange>().unwrap(), EllRange { lo: 3, hi: 3 });
        assert_eq!("0..3".parse::<EllRange>().unwrap().values(), vec![0, 1, 2, 3]);
        assert!("3..1".parse::<EllRange>().is_err());
        assert!("-1".parse::<EllRange>().is_err());
        assert!("a..2".parse::<EllRange>().is_err());
        let r: EllRange = serde_json::from_str("\"1..2\"").unwrap();
        assert_eq!(r, EllRange { lo: 1, hi: 2 });
        let r: EllRange = serde_json::from_str("4").unwrap();
        assert!(r.is_single());
    }

    #[test]
    fn inject_needs_dev() {
        let bad = Cli::try_parse_from(["susyell", "verify", "--inject-deps-error", "0.01"]);
        assert!(bad.is_err());
        let ok = Cli::try_parse_from(["susyell", "verify", "--dev", "--inject-deps-error", "0.01"]);
        assert!(ok.is_ok());
    }

    #[test]
    fn command_table_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
