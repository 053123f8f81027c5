use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grid::RadialGrid;

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function of `r`.
///
/// Either a closed form, evaluable anywhere on `(0, ∞)`, or samples on a
/// [`RadialGrid`] with linear interpolation between nodes. Cloning is cheap.
#[derive(Clone)]
pub enum RadialFunction {
    Analytic { eval: Evaluator, label: Arc<str> },
    Sampled { grid: RadialGrid, values: Arc<[f64]> },
}

impl RadialFunction {
    pub fn analytic<F>(label: impl Into<Arc<str>>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        RadialFunction::Analytic {
            eval: Arc::new(f),
            label: label.into(),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::analytic(format!("const({c})"), move |_| c)
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn sampled(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} samples for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(RadialFunction::Sampled {
            grid,
            values: values.into(),
        })
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, RadialFunction::Analytic { .. })
    }

    pub fn label(&self) -> &str {
        match self {
            RadialFunction::Analytic { label, .. } => label,
            RadialFunction::Sampled { .. } => "sampled",
        }
    }

    /// Evaluate at `r`. Sampled functions interpolate linearly and refuse
    /// points outside their grid.
    pub fn eval(&self, r: f64) -> Result<f64> {
        match self {
            RadialFunction::Analytic { eval, .. } => {
                if r > 0.0 {
                    Ok(eval(r))
                } else {
                    Err(Error::OutOfDomain {
                        r,
                        lo: 0.0,
                        hi: f64::INFINITY,
                    })
                }
            }
            RadialFunction::Sampled { grid, values } => {
                let i = grid.locate(r).ok_or(Error::OutOfDomain {
                    r,
                    lo: grid.r_min(),
                    hi: grid.r_max(),
                })?;
                let (r0, r1) = (grid.node(i), grid.node(i + 1));
                if r == r0 {
                    return Ok(values[i]);
                }
                if r == r1 {
                    return Ok(values[i + 1]);
                }
                let t = (r - r0) / (r1 - r0);
                Ok(values[i] + t * (values[i + 1] - values[i]))
            }
        }
    }

    /// Closed-form evaluation without the domain check, for hot loops over
    /// quadrature points that are known to be positive.
    #[inline]
    pub(crate) fn eval_unchecked(&self, r: f64) -> f64 {
        match self {
            RadialFunction::Analytic { eval, .. } => eval(r),
            RadialFunction::Sampled { .. } => self.eval(r).unwrap_or(f64::NAN),
        }
    }

    /// Values at every node of `grid`. A sampled function on the same grid
    /// returns its samples verbatim.
    pub fn values_on(&self, grid: &RadialGrid) -> Result<Vec<f64>> {
        self.values_on_with(grid, Execution::default())
    }

    pub fn values_on_with(&self, grid: &RadialGrid, exec: Execution) -> Result<Vec<f64>> {
        match self {
            RadialFunction::Analytic { eval, .. } => {
                Ok(exec.map_range(grid.len(), |i| eval(grid.node(i))))
            }
            RadialFunction::Sampled { grid: own, values } if own == grid => Ok(values.to_vec()),
            RadialFunction::Sampled { .. } => {
                exec.try_map_range(grid.len(), |i| self.eval(grid.node(i)))
            }
        }
    }

    /// Sample onto `grid`.
    pub fn sample(&self, grid: &RadialGrid) -> Result<Self> {
        Self::sampled(*grid, self.values_on(grid)?)
    }

    /// Samples if this function lives on a grid.
    pub fn samples(&self) -> Option<(&RadialGrid, &[f64])> {
        match self {
            RadialFunction::Sampled { grid, values } => Some((grid, values)),
            RadialFunction::Analytic { .. } => None,
        }
    }
}

impl fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialFunction::Analytic { label, .. } => write!(f, "Analytic({label})"),
            RadialFunction::Sampled { grid, .. } => {
                write!(f, "Sampled({} nodes on [{}, {}])", grid.len(), grid.r_min(), grid.r_max())
            }
        }
    }
}
