//! Five-point central differences for q', q'', q''', q'''' on a uniform grid.
//!
//! Samples beyond either end are taken as zero (two ghost cells per side).

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 5;

/// Formal accuracy of a central-difference stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Accuracy {
    Second,
    Fourth,
}

/// Per-node derivative values of the potential.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeTable {
    pub d1: Vec<Complex64>,
    pub d2: Vec<Complex64>,
    pub d3: Vec<Complex64>,
    pub d4: Vec<Complex64>,
}

impl DerivativeTable {
    /// Builds all four derivatives. `first_second` selects the stencil for
    /// q' and q''; q''' and q'''' only have second-order five-point forms.
    pub fn new(samples: &[Complex64], tau: f64, first_second: Accuracy) -> Result<Self> {
        Ok(Self {
            d1: derivative(samples, tau, 1, first_second)?,
            d2: derivative(samples, tau, 2, first_second)?,
            d3: derivative(samples, tau, 3, Accuracy::Second)?,
            d4: derivative(samples, tau, 4, Accuracy::Second)?,
        })
    }

    pub fn len(&self) -> usize {
        self.d1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d1.is_empty()
    }

    /// `[q', q'', q''', q'''']` at `node`.
    pub fn at(&self, node: usize) -> [Complex64; 4] {
        [self.d1[node], self.d2[node], self.d3[node], self.d4[node]]
    }
}

/// Weights on `q_{-2}, q_{-1}, q_0, q_1, q_2` and the divisor exponent of τ.
fn weights(order: usize, accuracy: Accuracy) -> Result<([f64; 5], f64)> {
    let w = match (order, accuracy) {
        (1, Accuracy::Second) => ([0.0, -0.5, 0.0, 0.5, 0.0], 1.0),
        (1, Accuracy::Fourth) => ([1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0], 1.0),
        (2, Accuracy::Second) => ([0.0, 1.0, -2.0, 1.0, 0.0], 2.0),
        (2, Accuracy::Fourth) => (
            [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0],
            2.0,
        ),
        (3, Accuracy::Second) => ([-0.5, 1.0, 0.0, -1.0, 0.5], 3.0),
        (4, Accuracy::Second) => ([1.0, -4.0, 6.0, -4.0, 1.0], 4.0),
        (3 | 4, Accuracy::Fourth) => {
            return Err(Error::InvalidParameter(format!(
                "no fourth-order five-point stencil for derivative order {order}"
            )))
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "derivative order must be 1..=4, got {order}"
            )))
        }
    };
    Ok(w)
}

/// Central-difference approximation of the `order`-th derivative at every node.
pub fn derivative(
    samples: &[Complex64],
    tau: f64,
    order: usize,
    accuracy: Accuracy,
) -> Result<Vec<Complex64>> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InputSize { needed: MIN_SAMPLES, got: samples.len() });
    }
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter(format!("grid step must be positive, got {tau}")));
    }
    let (w, power) = weights(order, accuracy)?;
    let inv = tau.powf(-power);
    let n = samples.len() as isize;
    let at = |i: isize| {
        if (0..n).contains(&i) {
            samples[i as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    Ok((0..n)
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, wk) in w.iter().enumerate() {
                if *wk != 0.0 {
                    acc += at(i + k as isize - 2) * *wk;
                }
            }
            acc * inv
        })
        .collect())
}
