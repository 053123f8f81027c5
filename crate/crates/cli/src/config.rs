//! Resolution of flags, config file and environment into a [`RunConfig`].

use std::path::{Path, PathBuf};

use serde::Deserialize;
use susyell::oracle::tolerance_for;
use susyell::{make_grid, Constants, PotentialFamily, RadialGrid};

use crate::args::{CommonArgs, EllRange, FamilyName, Format};
use crate::error::CliError;

pub const GRID_ENV: &str = "SUSYELL_DEFAULT_GRID";
pub const DEFAULT_TOL_RESIDUAL: f64 = 1e-8;

/// Keys accepted in a `--config` file. Same names as the long flags, with
/// dashes replaced by underscores.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub family: Option<FamilyName>,
    pub w: Option<f64>,
    pub e2: Option<f64>,
    pub alpha: Option<f64>,
    pub ell: Option<EllRange>,
    pub rmax: Option<f64>,
    pub npoints: Option<usize>,
    pub hbar: Option<f64>,
    pub mass: Option<f64>,
    pub format: Option<Format>,
    pub tol_residual: Option<f64>,
    pub tol_oracle: Option<f64>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Grid request with either coordinate possibly left to the family default.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GridSpec {
    pub r_max: Option<f64>,
    pub n_points: Option<usize>,
}

impl GridSpec {
    /// Grid for state `ell`; unset coordinates come from the family default.
    pub fn resolve(&self, family: &PotentialFamily, ell: u32, c: &Constants) -> susyell::Result<RadialGrid> {
        match (self.r_max, self.n_points) {
            (Some(r), Some(n)) => make_grid(r, n),
            _ => {
                let d = family.default_grid(ell, c)?;
                make_grid(self.r_max.unwrap_or(d.r_max()), self.n_points.unwrap_or(d.len()))
            }
        }
    }
}

/// Parse `"rmax:npoints"`.
pub fn parse_grid_env(s: &str) -> Result<GridSpec, CliError> {
    let bad = || CliError::Usage(format!("{GRID_ENV} must look like \"rmax:npoints\", got \"{s}\""));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let r_max = a.trim().parse::<f64>().map_err(|_| bad())?;
    let n_points = b.trim().parse::<usize>().map_err(|_| bad())?;
    Ok(GridSpec {
        r_max: Some(r_max),
        n_points: Some(n_points),
    })
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub family: PotentialFamily,
    pub ells: EllRange,
    pub grid: GridSpec,
    pub constants: Constants,
    pub format: Format,
    pub tol_residual: f64,
    pub tol_oracle: f64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn grid_for(&self, ell: u32) -> susyell::Result<RadialGrid> {
        self.grid.resolve(&self.family, ell, &self.constants)
    }
}

/// Merge flags over the config file over the environment.
pub fn resolve(args: &CommonArgs, env_grid: Option<&str>) -> Result<RunConfig, CliError> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let env = env_grid.map(parse_grid_env).transpose()?.unwrap_or_default();

    let name = args
        .family
        .or(file.family)
        .ok_or_else(|| CliError::Usage("--family is required".into()))?;
    let w = args.w.or(file.w);
    let e2 = args.e2.or(file.e2).unwrap_or(1.0);
    let alpha = args.alpha.or(file.alpha);
    let need_alpha = || {
        alpha.ok_or_else(|| CliError::Usage(format!("--alpha is required for --family {}", family_flag(name))))
    };
    let family = match name {
        FamilyName::Ho => PotentialFamily::HarmonicOscillator { w: w.unwrap_or(1.0) },
        FamilyName::Coulomb => PotentialFamily::Coulomb { e2 },
        FamilyName::Hulthen => PotentialFamily::Hulthen { alpha: need_alpha()?, e2 },
        FamilyName::GreeneAldrich => PotentialFamily::GreeneAldrichEffective { alpha: need_alpha()?, e2 },
    };
    family.validate()?;

    let constants = Constants::new(
        args.hbar.or(file.hbar).unwrap_or(1.0),
        args.mass.or(file.mass).unwrap_or(1.0),
    )?;
    let grid = GridSpec {
        r_max: args.rmax.or(file.rmax).or(env.r_max),
        n_points: args.npoints.or(file.npoints).or(env.n_points),
    };
    let positive = |name: &str, v: f64| {
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(CliError::Usage(format!("--{name} must be positive, got {v}")))
        }
    };
    let tol_residual = positive("tol-residual", args.tol_residual.or(file.tol_residual).unwrap_or(DEFAULT_TOL_RESIDUAL))?;
    let tol_oracle = positive("tol-oracle", args.tol_oracle.or(file.tol_oracle).unwrap_or_else(|| tolerance_for(&family)))?;

    Ok(RunConfig {
        family,
        ells: args.ell.or(file.ell).unwrap_or(EllRange { lo: 0, hi: 0 }),
        grid,
        constants,
        format: args.format.or(file.format).unwrap_or_default(),
        tol_residual,
        tol_oracle,
        out: args.out.clone().or(file.out),
    })
}

fn family_flag(name: FamilyName) -> &'static str {
    match name {
        FamilyName::Ho => "ho",
        FamilyName::Coulomb => "coulomb",
        FamilyName::Hulthen => "hulthen",
        FamilyName::GreeneAldrich => "greene-aldrich",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_grid_syntax() {
        let g = parse_grid_env("30:3000").unwrap();
        assert_eq!(g.r_max, Some(30.0));
        assert_eq!(g.n_points, Some(3000));
        assert!(parse_grid_env("30").is_err());
        assert!(parse_grid_env("x:10").is_err());
    }

    #[test]
    fn partial_grid_uses_family_default() {
        let fam = PotentialFamily::HarmonicOscillator { w: 1.0 };
        let c = Constants::default();
        let g = GridSpec { r_max: Some(10.0), n_points: None }.resolve(&fam, 0, &c).unwrap();
        assert_eq!(g.len(), 4000);
        assert_eq!(g.r_max(), 10.0);
    }

    #[test]
    fn hulthen_needs_alpha() {
        let args = CommonArgs {
            family: Some(FamilyName::Hulthen),
            ..Default::default()
        };
        assert!(matches!(resolve(&args, None), Err(CliError::Usage(_))));
    }
}
