//! Serialized shapes and the three output formats.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use susyell::{Constants, PotentialFamily, RadialGrid};

use crate::args::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub command: String,
}

impl Meta {
    pub fn new(command: &str) -> Self {
        Meta {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsOut {
    pub hbar: f64,
    pub mass: f64,
}

impl From<&Constants> for ConstantsOut {
    fn from(c: &Constants) -> Self {
        ConstantsOut {
            hbar: c.hbar(),
            mass: c.mass(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridOut {
    pub r_max: f64,
    pub n_points: usize,
}

impl From<&RadialGrid> for GridOut {
    fn from(g: &RadialGrid) -> Self {
        GridOut {
            r_max: g.r_max(),
            n_points: g.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualsOut {
    pub eq5: f64,
    pub eq6: f64,
    pub eq7: f64,
    #[serde(rename = "A1")]
    pub a1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOut {
    pub eigenvalue: f64,
    pub abs_diff: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordOut {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub constants: ConstantsOut,
    pub ell: u32,
    pub epsilon0: f64,
    pub delta_eps: f64,
    pub energy: f64,
    pub residuals: ResidualsOut,
    pub oracle: OracleOut,
    pub grid: GridOut,
}

pub fn params_of(family: &PotentialFamily) -> BTreeMap<String, f64> {
    family.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub ell: u32,
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub meta: Meta,
    pub records: Vec<RecordOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<Check>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderOut {
    pub k: u32,
    pub eps: f64,
    pub taylor: f64,
    pub diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbReport {
    pub meta: Meta,
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub constants: ConstantsOut,
    pub grid: GridOut,
    pub orders: Vec<OrderOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOut {
    pub ell: u32,
    pub grid: GridOut,
    /// Closed-form ground energy, absent when there is no bound state.
    pub closed_form: Option<f64>,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReportOut {
    pub meta: Meta,
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub constants: ConstantsOut,
    pub spectra: Vec<SpectrumOut>,
}

fn json<T: Serialize>(w: &mut dyn Write, v: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *w, v)?;
    writeln!(w)?;
    Ok(())
}

fn params_text(p: &BTreeMap<String, f64>) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

/// Right-aligned columns separated by two spaces.
fn table(w: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            width[i] = width[i].max(cell.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        cells
            .iter()
            .zip(&width)
            .map(|(c, n)| format!("{c:>n$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(w, "{}", line(header.iter().map(|s| s.to_string()).collect()))?;
    for row in rows {
        writeln!(w, "{}", line(row.clone()))?;
    }
    Ok(())
}

fn csv_rows(w: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for row in rows {
        out.write_record(row)?;
    }
    out.flush()?;
    Ok(())
}

fn tabular(w: &mut dyn Write, format: Format, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    match format {
        Format::Csv => csv_rows(w, header, rows),
        _ => table(w, header, rows),
    }
}

fn sci(v: f64) -> String {
    format!("{v:.3e}")
}

pub fn write_solve(w: &mut dyn Write, report: &SolveReport, format: Format) -> Result<(), CliError> {
    if format == Format::Json {
        return json(w, report);
    }
    let full = format == Format::Csv;
    let num = |v: f64| if full { v.to_string() } else { format!("{v:.10}") };
    let res = |v: f64| if full { v.to_string() } else { sci(v) };
    let header = [
        "family", "params", "hbar", "mass", "ell", "epsilon0", "delta_eps", "energy", "eq5", "eq6", "eq7", "A1",
        "oracle", "oracle_diff", "oracle_pass", "r_max", "n_points",
    ];
    let rows: Vec<Vec<String>> = report
        .records
        .iter()
        .map(|r| {
            vec![
                r.family.clone(),
                params_text(&r.params),
                r.constants.hbar.to_string(),
                r.constants.mass.to_string(),
                r.ell.to_string(),
                num(r.epsilon0),
                num(r.delta_eps),
                num(r.energy),
                res(r.residuals.eq5),
                res(r.residuals.eq6),
                res(r.residuals.eq7),
                res(r.residuals.a1),
                num(r.oracle.eigenvalue),
                res(r.oracle.abs_diff),
                r.oracle.pass.to_string(),
                r.grid.r_max.to_string(),
                r.grid.n_points.to_string(),
            ]
        })
        .collect();
    tabular(w, format, &header, &rows)?;
    if let Some(checks) = &report.checks {
        if format == Format::Table {
            writeln!(w)?;
        }
        let rows: Vec<Vec<String>> = checks
            .iter()
            .map(|c| {
                vec![
                    c.ell.to_string(),
                    c.name.clone(),
                    res(c.value),
                    res(c.bound),
                    if c.pass { "PASS" } else { "FAIL" }.to_string(),
                ]
            })
            .collect();
        tabular(w, format, &["ell", "check", "value", "bound", "result"], &rows)?;
    }
    Ok(())
}

pub fn write_perturb(w: &mut dyn Write, report: &PerturbReport, format: Format) -> Result<(), CliError> {
    if format == Format::Json {
        return json(w, report);
    }
    let full = format == Format::Csv;
    let num = |v: f64| if full { v.to_string() } else { format!("{v:.10}") };
    let rows: Vec<Vec<String>> = report
        .orders
        .iter()
        .map(|o| vec![o.k.to_string(), num(o.eps), num(o.taylor), sci(o.diff)])
        .collect();
    tabular(w, format, &["k", "eps", "taylor", "diff"], &rows)
}

pub fn write_oracle(w: &mut dyn Write, report: &OracleReportOut, format: Format) -> Result<(), CliError> {
    if format == Format::Json {
        return json(w, report);
    }
    let full = format == Format::Csv;
    let num = |v: f64| if full { v.to_string() } else { format!("{v:.10}") };
    let mut rows = Vec::new();
    for s in &report.spectra {
        for (i, e) in s.eigenvalues.iter().enumerate() {
            let closed = match (i, s.closed_form) {
                (0, Some(v)) => num(v),
                _ => String::new(),
            };
            rows.push(vec![s.ell.to_string(), i.to_string(), num(*e), closed]);
        }
    }
    tabular(w, format, &["ell", "level", "eigenvalue", "closed_form"], &rows)
}

/// `r,chi,phi,psi`, one row per node. Values use the shortest text that
/// parses back to the same `f64`.
pub fn write_wavefunction(
    w: &mut dyn Write,
    r: &[f64],
    chi: &[f64],
    phi: &[f64],
    psi: &[f64],
) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["r", "chi", "phi", "psi"])?;
    for i in 0..r.len() {
        out.write_record([r[i].to_string(), chi[i].to_string(), phi[i].to_string(), psi[i].to_string()])?;
    }
    out.flush()?;
    Ok(())
}
