//! Integration rules on the uniform radial grid.
//!
//! Grid integrals use composite Simpson. Closed-form integrands are integrated
//! panel by panel with Gauss–Legendre, which stays accurate on the first panels
//! where `1/r`-type superpotentials vary on the scale of `h` itself.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::function::RadialFunction;
use crate::grid::RadialGrid;

/// Integrand magnitude, relative to its peak, above which truncating an
/// improper integral at `r_max` is reported.
pub const TAIL_WARN: f64 = 1e-14;

const GL_ORDER: usize = 12;

/// Composite Simpson on uniformly spaced samples. An odd number of intervals
/// closes with Simpson's 3/8 rule on the last three, which keeps cubics exact.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (values[0] + values[1]),
        3 => h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        _ => {
            let intervals = n - 1;
            let (simpson_end, tail) = if intervals.is_multiple_of(2) {
                (n - 1, None)
            } else {
                (n - 4, Some(n - 4))
            };
            let mut acc = Sum::default();
            if simpson_end > 0 {
                acc.add(values[0] + values[simpson_end]);
                for (i, v) in values.iter().enumerate().take(simpson_end).skip(1) {
                    acc.add(if i % 2 == 1 { 4.0 * v } else { 2.0 * v });
                }
            }
            let mut total = h / 3.0 * acc.value();
            if let Some(j) = tail {
                total += 3.0 * h / 8.0
                    * (values[j] + 3.0 * values[j + 1] + 3.0 * values[j + 2] + values[j + 3]);
            }
            total
        }
    }
}

/// `∫ f dr` over `[r_min, r_max]` by composite Simpson on the grid nodes.
///
/// Logs a warning when the integrand at `r_max` is not negligible relative to
/// its peak, since callers use this for integrals whose true upper limit is ∞.
pub fn quadrature(f: &RadialFunction, grid: &RadialGrid) -> Result<f64> {
    let values = f.values_on(grid)?;
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let last = values[values.len() - 1].abs();
    if peak > 0.0 && last > TAIL_WARN * peak {
        log::warn!(
            "quadrature: integrand at r_max = {} is {:.2e} of its peak",
            grid.r_max(),
            last / peak
        );
    }
    Ok(simpson(&values, grid.spacing()))
}

/// Compensated (Neumaier) running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Sum {
    sum: f64,
    comp: f64,
}

impl Sum {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
    fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }
}

fn gl() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(GL_ORDER))
}

/// Gauss–Legendre on a single panel `[a, b]`. The endpoints are never
/// evaluated, so integrands singular at `a = 0` but integrable are fine.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let rule = gl();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = Sum::default();
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        acc.add(w * f(mid + half * x));
    }
    half * acc.value()
}

/// `∫_a^b f` split into `panels` equal Gauss–Legendre panels.
pub fn gauss_legendre_panels<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(1);
    let w = (b - a) / panels as f64;
    let mut acc = Sum::default();
    for p in 0..panels {
        let lo = a + p as f64 * w;
        let hi = if p + 1 == panels { b } else { lo + w };
        acc.add(gauss_legendre(&f, lo, hi));
    }
    acc.value()
}

/// `∫_a^∞ f` for a decaying integrand, by Gauss–Legendre panels of geometrically
/// growing width starting at `width`. Stops once a panel adds less than
/// `1e-17` of the accumulated value (or the integrand underflows to zero).
pub fn tail_integral<F: Fn(f64) -> f64>(f: F, a: f64, width: f64) -> f64 {
    let mut acc = Sum::default();
    let mut lo = a;
    let mut w = width.max(f64::MIN_POSITIVE);
    for panel in 0..400 {
        let piece = gauss_legendre(&f, lo, lo + w);
        acc.add(piece);
        lo += w;
        let total = acc.value().abs();
        if panel >= 3 && (piece == 0.0 || piece.abs() <= 1e-17 * total) {
            break;
        }
        if !piece.is_finite() {
            break;
        }
        w *= 1.25;
    }
    acc.value()
}

/// Integral of `f` over each grid interval `[r_i, r_{i+1}]`.
pub fn panel_integrals(f: &RadialFunction, grid: &RadialGrid, exec: Execution) -> Result<Vec<f64>> {
    let n = grid.len();
    match f {
        RadialFunction::Analytic { .. } => Ok(exec.map_range(n - 1, |i| {
            gauss_legendre(|r| f.eval_unchecked(r), grid.node(i), grid.node(i + 1))
        })),
        RadialFunction::Sampled { .. } => {
            let v = f.values_on(grid)?;
            let h = grid.spacing();
            Ok((0..n - 1)
                .map(|i| {
                    if i + 2 < n {
                        h / 12.0 * (5.0 * v[i] + 8.0 * v[i + 1] - v[i + 2])
                    } else {
                        h / 12.0 * (-v[i - 1] + 8.0 * v[i] + 5.0 * v[i + 1])
                    }
                })
                .collect())
        }
    }
}

/// `∫_{r_ref}^{r_i} f` at every node.
///
/// Closed forms accept any `r_ref > 0`; sampled functions need `r_ref` inside
/// their grid. Between-node pieces of a sampled integrand use linear
/// interpolation.
pub fn cumulative_integral(
    f: &RadialFunction,
    grid: &RadialGrid,
    r_ref: f64,
    exec: Execution,
) -> Result<Vec<f64>> {
    if !(r_ref > 0.0 && r_ref.is_finite()) {
        return Err(Error::param("r_ref", format!("must be positive, got {r_ref}")));
    }
    let panels = panel_integrals(f, grid, exec)?;
    let mut from_first = Vec::with_capacity(grid.len());
    let mut acc = Sum::default();
    from_first.push(0.0);
    for p in &panels {
        acc.add(*p);
        from_first.push(acc.value());
    }
    // ∫_{r_min}^{r_ref} f
    let offset = match grid.locate(r_ref) {
        Some(j) => {
            let partial = match f {
                RadialFunction::Analytic { .. } => {
                    gauss_legendre(|r| f.eval_unchecked(r), grid.node(j), r_ref)
                }
                RadialFunction::Sampled { .. } => {
                    let (a, b) = (f.eval(grid.node(j))?, f.eval(r_ref)?);
                    0.5 * (r_ref - grid.node(j)) * (a + b)
                }
            };
            from_first[j] + partial
        }
        None => match f {
            RadialFunction::Analytic { .. } if r_ref < grid.r_min() => {
                -gauss_legendre_panels(|r| f.eval_unchecked(r), r_ref, grid.r_min(), 8)
            }
            RadialFunction::Analytic { .. } => {
                let extra = gauss_legendre_panels(
                    |r| f.eval_unchecked(r),
                    grid.r_max(),
                    r_ref,
                    ((r_ref - grid.r_max()) / grid.spacing()).ceil().max(1.0) as usize,
                );
                from_first[grid.len() - 1] + extra
            }
            RadialFunction::Sampled { .. } => {
                return Err(Error::OutOfDomain {
                    r: r_ref,
                    lo: grid.r_min(),
                    hi: grid.r_max(),
                })
            }
        },
    };
    Ok(from_first.into_iter().map(|v| v - offset).collect())
}
