//! Dense complex polynomials (ascending coefficients) with schoolbook and
//! FFT multiplication.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Product degree above which [`mul`] switches to FFT convolution.
pub const FFT_CROSSOVER: usize = 64;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub fn forward_plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

pub fn inverse_plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

/// FFT length used for a product of the given result length.
pub fn convolution_len(result_len: usize) -> usize {
    result_len.next_power_of_two()
}

/// Zero-padded forward transform of `a` to length `n`.
pub fn spectrum(a: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut buf = vec![ZERO; n];
    buf[..a.len()].copy_from_slice(a);
    forward_plan(n).process(&mut buf);
    buf
}

/// Inverse transform of `buf` truncated to `len` coefficients.
pub fn from_spectrum(mut buf: Vec<Complex64>, len: usize) -> Vec<Complex64> {
    let n = buf.len();
    inverse_plan(n).process(&mut buf);
    let inv = 1.0 / n as f64;
    buf.truncate(len);
    for v in &mut buf {
        *v *= inv;
    }
    buf
}

pub fn mul_schoolbook(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn mul_fft(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = a.len() + b.len() - 1;
    let n = convolution_len(len);
    let fa = spectrum(a, n);
    let mut fb = spectrum(b, n);
    for (y, x) in fb.iter_mut().zip(&fa) {
        *y *= x;
    }
    from_spectrum(fb, len)
}

pub fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.len() + b.len() > FFT_CROSSOVER + 2 {
        mul_fft(a, b)
    } else {
        mul_schoolbook(a, b)
    }
}

/// `a + b`, padded to the longer length.
pub fn add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; a.len().max(b.len())];
    for (o, x) in out.iter_mut().zip(a) {
        *o += x;
    }
    for (o, x) in out.iter_mut().zip(b) {
        *o += x;
    }
    out
}

pub fn add_scaled(acc: &mut Vec<Complex64>, p: &[Complex64], k: Complex64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), ZERO);
    }
    for (o, x) in acc.iter_mut().zip(p) {
        *o += x * k;
    }
}

#[inline]
pub fn horner(p: &[Complex64], x: Complex64) -> Complex64 {
    p.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
}

/// `base^0, base^1, …, base^n`.
pub fn powers(base: &[Complex64], n: usize) -> Vec<Vec<Complex64>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(vec![Complex64::new(1.0, 0.0)]);
    for k in 1..=n {
        let next = mul_schoolbook(&out[k - 1], base);
        out.push(next);
    }
    out
}

pub fn max_abs(p: &[Complex64]) -> f64 {
    p.iter().fold(0.0f64, |m, c| m.max(c.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_product() {
        // (1 + x)(1 − x) = 1 − x²
        let p = mul(&[c(1.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(p, vec![c(1.0, 0.0), ZERO, c(-1.0, 0.0)]);
    }

    #[test]
    fn binomial_powers() {
        let p = powers(&[c(1.0, 0.0), c(1.0, 0.0)], 6);
        let row: Vec<f64> = p[6].iter().map(|v| v.re).collect();
        assert_eq!(row, vec![1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0]);
    }

    proptest! {
        #[test]
        fn fft_matches_schoolbook(
            a in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..200),
            b in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..200),
        ) {
            let a: Vec<Complex64> = a.into_iter().map(|(x, y)| c(x, y)).collect();
            let b: Vec<Complex64> = b.into_iter().map(|(x, y)| c(x, y)).collect();
            let s = mul_schoolbook(&a, &b);
            let f = mul_fft(&a, &b);
            prop_assert_eq!(s.len(), f.len());
            let scale = (a.len().min(b.len()) as f64).max(1.0);
            for (x, y) in s.iter().zip(&f) {
                prop_assert!((x - y).norm() < 1e-13 * scale);
            }
        }

        #[test]
        fn product_evaluates_to_product_of_values(
            a in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..100),
            b in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..100),
            theta in -3.2..3.2f64,
        ) {
            let a: Vec<Complex64> = a.into_iter().map(|(x, y)| c(x, y)).collect();
            let b: Vec<Complex64> = b.into_iter().map(|(x, y)| c(x, y)).collect();
            let w = Complex64::from_polar(1.0, theta);
            let lhs = horner(&mul(&a, &b), w);
            let rhs = horner(&a, w) * horner(&b, w);
            prop_assert!((lhs - rhs).norm() < 1e-11);
        }
    }
}
