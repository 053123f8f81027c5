use std::fs::File;
use std::io::{BufWriter, Write};

use susyell::barrier::{barrier_superpotential, closed_form_energy, ground_solution, taylor_coefficients};
use susyell::factorization::{riccati_residual_eq6, riccati_residual_eq7};
use susyell::oracle::{build_hamiltonian, ground_state_energy, lowest_eigenvalues_with};
use susyell::perturbation::expand;
use susyell::riccati::residual_a1;
use susyell::{solve_state, Execution, RiccatiProblem, SpectralRecord};

use crate::args::{Command, CommonArgs, DevArgs};
use crate::config::{resolve, RunConfig, GRID_ENV};
use crate::error::{CliError, Outcome};
use crate::output::{
    params_of, write_oracle, write_perturb, write_solve, write_wavefunction, Check, Meta, OracleOut,
    OracleReportOut, OrderOut, PerturbReport, RecordOut, ResidualsOut, SolveReport, SpectrumOut,
};

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    let env_grid = std::env::var(GRID_ENV).ok();
    let env_grid = env_grid.as_deref();
    let cfg = |a: &CommonArgs| resolve(a, env_grid);
    match command {
        Command::Solve(a) => cmd_solve(&cfg(a)?),
        Command::Verify(v) => cmd_verify(&cfg(&v.common)?, &v.dev),
        Command::Perturb(a) => cmd_perturb(&cfg(a)?),
        Command::Oracle(o) => cmd_oracle(&cfg(&o.common)?, o.levels),
        Command::DumpWavefunction(a) => cmd_dump(&cfg(a)?),
    }
}

fn sink(cfg: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &cfg.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn finish(mut w: Box<dyn Write>) -> Result<(), CliError> {
    w.flush()?;
    Ok(())
}

/// One solved state with its A1 residual and oracle comparison.
struct Solved {
    record: SpectralRecord,
    a1: f64,
    oracle: f64,
}

fn solve_one(cfg: &RunConfig, ell: u32, inject: f64) -> Result<Solved, CliError> {
    let c = &cfg.constants;
    let fam = &cfg.family;
    let grid = cfg.grid_for(ell)?;
    let mut record = solve_state(fam, ell, &grid, c)?;
    let ground = ground_solution(fam, c)?;
    let dw = barrier_superpotential(fam, ell, c)?;
    if inject != 0.0 {
        record.delta_eps += inject;
        record.energy += inject;
        record.residual_eq6_max =
            riccati_residual_eq6(&ground.w0, &dw, &fam.barrier_fn(ell, c), record.delta_eps, &grid, c)?.max;
        record.residual_eq7_max =
            riccati_residual_eq7(&ground.w0, &dw, &fam.potential_fn(ell, c), record.energy, &grid, c)?.max;
    }
    let prob = RiccatiProblem {
        w0: ground.w0,
        delta_v: fam.barrier_fn(ell, c),
        delta_eps: record.delta_eps,
    };
    let a1 = residual_a1(&dw, &prob, &grid, c)?.max;
    let oracle = ground_state_energy(fam, ell, &grid, c)?;
    Ok(Solved { record, a1, oracle })
}

fn solve_all(cfg: &RunConfig, inject: f64) -> Result<Vec<Solved>, CliError> {
    let ells = cfg.ells.values();
    Execution::default()
        .map(&ells, |&ell| solve_one(cfg, ell, inject))
        .into_iter()
        .collect()
}

fn record_out(cfg: &RunConfig, s: &Solved) -> RecordOut {
    let r = &s.record;
    let abs_diff = (s.oracle - r.energy).abs();
    RecordOut {
        family: r.family.name().into(),
        params: params_of(&r.family),
        constants: (&cfg.constants).into(),
        ell: r.ell,
        epsilon0: r.epsilon0,
        delta_eps: r.delta_eps,
        energy: r.energy,
        residuals: ResidualsOut {
            eq5: r.residual_eq5_max,
            eq6: r.residual_eq6_max,
            eq7: r.residual_eq7_max,
            a1: s.a1,
        },
        oracle: OracleOut {
            eigenvalue: s.oracle,
            abs_diff,
            pass: abs_diff < cfg.tol_oracle,
        },
        grid: (&r.grid).into(),
    }
}

pub fn cmd_solve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let solved = solve_all(cfg, 0.0)?;
    let report = SolveReport {
        meta: Meta::new("solve"),
        records: solved.iter().map(|s| record_out(cfg, s)).collect(),
        checks: None,
    };
    let mut w = sink(cfg)?;
    write_solve(&mut w, &report, cfg.format)?;
    finish(w)?;
    Ok(Outcome::Ok)
}

pub fn cmd_verify(cfg: &RunConfig, dev: &DevArgs) -> Result<Outcome, CliError> {
    let inject = dev.inject_deps_error.unwrap_or(0.0);
    if !inject.is_finite() {
        return Err(CliError::Usage(format!("--inject-deps-error must be finite, got {inject}")));
    }
    let solved = solve_all(cfg, inject)?;
    let records: Vec<RecordOut> = solved.iter().map(|s| record_out(cfg, s)).collect();
    let mut checks = Vec::new();
    for r in &records {
        let res = &r.residuals;
        for (name, value) in [("eq5", res.eq5), ("eq6", res.eq6), ("eq7", res.eq7), ("A1", res.a1)] {
            checks.push(Check {
                ell: r.ell,
                name: name.into(),
                value,
                bound: cfg.tol_residual,
                pass: value < cfg.tol_residual,
            });
        }
        checks.push(Check {
            ell: r.ell,
            name: "oracle".into(),
            value: r.oracle.abs_diff,
            bound: cfg.tol_oracle,
            pass: r.oracle.pass,
        });
    }
    let ok = checks.iter().all(|c| c.pass);
    for c in checks.iter().filter(|c| !c.pass) {
        log::error!("l={} {}: {:.3e} exceeds {:.3e}", c.ell, c.name, c.value, c.bound);
    }
    let report = SolveReport {
        meta: Meta::new("verify"),
        records,
        checks: Some(checks),
    };
    let mut w = sink(cfg)?;
    write_solve(&mut w, &report, cfg.format)?;
    finish(w)?;
    Ok(if ok { Outcome::Ok } else { Outcome::ChecksFailed })
}

pub fn cmd_perturb(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c = &cfg.constants;
    let grid = cfg.grid_for(0)?;
    let ex = expand(&cfg.family, &grid, c)?;
    let taylor = taylor_coefficients(&cfg.family, c)?;
    let orders = ex
        .orders
        .iter()
        .zip(taylor)
        .map(|(t, reference)| {
            let eps = t.eps.expect("expand fills every order");
            OrderOut {
                k: t.k,
                eps,
                taylor: reference,
                diff: eps - reference,
            }
        })
        .collect();
    let report = PerturbReport {
        meta: Meta::new("perturb"),
        family: cfg.family.name().into(),
        params: params_of(&cfg.family),
        constants: c.into(),
        grid: (&grid).into(),
        orders,
    };
    let mut w = sink(cfg)?;
    write_perturb(&mut w, &report, cfg.format)?;
    finish(w)?;
    Ok(Outcome::Ok)
}

pub fn cmd_oracle(cfg: &RunConfig, levels: usize) -> Result<Outcome, CliError> {
    let c = &cfg.constants;
    let ells = cfg.ells.values();
    let spectra: Result<Vec<SpectrumOut>, CliError> = ells
        .iter()
        .map(|&ell| {
            let grid = cfg.grid_for(ell)?;
            let h = build_hamiltonian(&cfg.family, ell, &grid, c)?;
            let eigenvalues = lowest_eigenvalues_with(&h, levels, Execution::default())?;
            let closed_form = match closed_form_energy(&cfg.family, ell, c) {
                Ok(e) => Some(e),
                Err(susyell::Error::NoBoundState(_)) => None,
                Err(e) => return Err(e.into()),
            };
            Ok(SpectrumOut {
                ell,
                grid: (&grid).into(),
                closed_form,
                eigenvalues,
            })
        })
        .collect();
    let report = OracleReportOut {
        meta: Meta::new("oracle"),
        family: cfg.family.name().into(),
        params: params_of(&cfg.family),
        constants: c.into(),
        spectra: spectra?,
    };
    let mut w = sink(cfg)?;
    write_oracle(&mut w, &report, cfg.format)?;
    finish(w)?;
    Ok(Outcome::Ok)
}

pub fn cmd_dump(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if !cfg.ells.is_single() {
        return Err(CliError::Usage(format!(
            "dump-wavefunction needs a single --ell, got {}",
            cfg.ells
        )));
    }
    let ell = cfg.ells.lo;
    let grid = cfg.grid_for(ell)?;
    let rec = solve_state(&cfg.family, ell, &grid, &cfg.constants)?;
    let values = |f: &susyell::RadialFunction| f.values_on(&grid);
    let mut w = sink(cfg)?;
    write_wavefunction(&mut w, &grid.to_vec(), &values(&rec.chi)?, &values(&rec.phi)?, &values(&rec.psi)?)?;
    finish(w)?;
    Ok(Outcome::Ok)
}
