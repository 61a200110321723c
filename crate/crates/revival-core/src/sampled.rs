//! Uniformly sampled functions on closed intervals.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values at `start + i * step` for `i = 0..values.len()`; both endpoints are sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub start: f64,
    pub step: f64,
    pub values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(start: f64, step: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(step > 0.0 && step.is_finite() && start.is_finite()) || values.len() < 2 {
            return Err(Error::contract("sampled function needs a positive step and at least two samples"));
        }
        Ok(Self { start, step, values })
    }

    /// Samples `f` at `n + 1` points spanning `[a, b]`.
    pub fn from_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if n == 0 || b <= a {
            return Err(Error::contract("empty sampling interval"));
        }
        let step = (b - a) / n as f64;
        let values = (0..=n).map(|i| f(a + step * i as f64)).collect();
        Self::new(a, step, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn end(&self) -> f64 {
        self.start + self.step * (self.values.len() - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.x(i)).collect()
    }

    /// Closed trapezoid estimate of `int conj(self) other`.
    pub fn inner(&self, other: &SampledFunction) -> Result<Complex64> {
        if self.values.len() != other.values.len()
            || (self.start - other.start).abs() > 1e-12 * self.step
            || (self.step - other.step).abs() > 1e-12 * self.step
        {
            return Err(Error::contract("inner product of functions on different grids"));
        }
        let n = self.values.len();
        let mut s = Complex64::new(0.0, 0.0);
        for (i, (a, b)) in self.values.iter().zip(&other.values).enumerate() {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            s += a.conj() * b * w;
        }
        Ok(s * self.step)
    }
}
