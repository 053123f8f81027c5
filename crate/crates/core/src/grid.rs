use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid on `[r_min, r_max]`.
///
/// Grids made by [`make_grid`] use `r_min = h`, the first interior point of an
/// implicit Dirichlet box that starts at `r = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid {
    r_min: f64,
    r_max: f64,
    n_points: usize,
    #[serde(skip)]
    h: f64,
}

/// Grid of `n_points` nodes `r_i = i·h`, `i = 1..=n_points`, with
/// `h = r_max / n_points`, so the last node is `r_max`.
pub fn make_grid(r_max: f64, n_points: usize) -> Result<RadialGrid> {
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(Error::InvalidGrid(format!("r_max must be positive, got {r_max}")));
    }
    if n_points < 3 {
        return Err(Error::InvalidGrid(format!("need at least 3 points, got {n_points}")));
    }
    let h = r_max / n_points as f64;
    Ok(RadialGrid {
        r_min: h,
        r_max,
        n_points,
        h,
    })
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 points, got {n_points}")));
        }
        if !(r_min.is_finite() && r_max.is_finite() && 0.0 < r_min && r_min < r_max) {
            return Err(Error::InvalidGrid(format!(
                "need 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        Ok(Self {
            r_min,
            r_max,
            n_points,
            h: (r_max - r_min) / (n_points - 1) as f64,
        })
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// Node `i` (0-based). The last node is pinned to `r_max` exactly.
    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i < self.n_points);
        if i + 1 == self.n_points {
            self.r_max
        } else {
            self.r_min + i as f64 * self.h
        }
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.node(i))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.nodes().collect()
    }

    /// Indices of the interior nodes `r_min + h ..= r_max - h`.
    pub fn interior(&self) -> std::ops::Range<usize> {
        1..self.n_points - 1
    }

    /// Same grid with twice the resolution on the same box `(0, r_max]`.
    pub fn refined(&self) -> Result<Self> {
        make_grid(self.r_max, 2 * self.n_points)
    }

    /// Index of the interval `[node(i), node(i+1)]` containing `r`, clamped
    /// to the valid range; `None` if `r` lies outside the grid.
    pub fn locate(&self, r: f64) -> Option<usize> {
        if !(r >= self.r_min && r <= self.r_max) {
            return None;
        }
        let i = ((r - self.r_min) / self.h).floor() as usize;
        Some(i.min(self.n_points - 2))
    }
}

impl<'de> Deserialize<'de> for RadialGrid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            r_min: f64,
            r_max: f64,
            n_points: usize,
        }
        let raw = Raw::deserialize(d)?;
        RadialGrid::new(raw.r_min, raw.r_max, raw.n_points).map_err(serde::de::Error::custom)
    }
}
