//! Uniform one-dimensional sampling axes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniform grid `start, start + step, ..., start + (len - 1) * step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Axis {
    /// `len` points spanning `[lo, hi]` inclusive.
    pub fn linspace(lo: f64, hi: f64, len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::Grid(format!("need at least 2 points, got {len}")));
        }
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(Error::Grid(format!("bad range [{lo}, {hi}]")));
        }
        Ok(Self {
            start: lo,
            step: (hi - lo) / (len - 1) as f64,
            len,
        })
    }

    #[inline]
    pub fn at(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.at(self.len - 1)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.at(i)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.start && x <= self.end()
    }

    /// Fractional index of `x`.
    #[inline]
    pub fn position(&self, x: f64) -> f64 {
        (x - self.start) / self.step
    }
}
