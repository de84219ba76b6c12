//! Error measures and convergence-order fits.

use num_complex::Complex64;

/// Normalizer `φ0 = |exact|` if `|exact| > 1`, otherwise 1.
#[inline]
pub fn phi0(exact: Complex64) -> f64 {
    let m = exact.norm();
    if m > 1.0 {
        m
    } else {
        1.0
    }
}

/// `|comp − exact| / φ0`.
pub fn relative_error(comp: Complex64, exact: Complex64) -> f64 {
    (comp - exact).norm() / phi0(exact)
}

/// Real-valued convenience wrapper of [`relative_error`].
pub fn relative_error_re(comp: f64, exact: f64) -> f64 {
    relative_error(Complex64::new(comp, 0.0), Complex64::new(exact, 0.0))
}

/// `sqrt( (1/N) Σ |comp_j − exact_j|² / φ0_j² )`.
pub fn rmse(comp: &[Complex64], exact: &[Complex64]) -> f64 {
    assert_eq!(comp.len(), exact.len(), "rmse needs equal lengths");
    if comp.is_empty() {
        return 0.0;
    }
    let sum: f64 = comp.iter().zip(exact).map(|(c, e)| relative_error(*c, *e).powi(2)).sum();
    (sum / comp.len() as f64).sqrt()
}

pub fn rmse_re(comp: &[f64], exact: &[f64]) -> f64 {
    let c: Vec<Complex64> = comp.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let e: Vec<Complex64> = exact.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    rmse(&c, &e)
}

/// Least-squares slope of `log2 y` against `log2 x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "need at least two points");
    let lx: Vec<f64> = x.iter().map(|v| v.log2()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.log2()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Index of the largest entry (first on ties); `None` for empty input.
pub fn argmax(v: &[f64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, &x)| match best {
            Some((_, b)) if b >= x => best,
            _ => Some((i, x)),
        })
        .map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn clamp_behaviour() {
        assert_eq!(relative_error(Complex64::new(1.5, 0.0), Complex64::new(1.0, 0.0)), 0.5);
        assert_eq!(relative_error(Complex64::new(0.0, 0.0), Complex64::new(0.0, 4.0)), 1.0);
        assert_eq!(relative_error_re(0.1, 0.3), 0.19999999999999998);
    }

    #[test]
    fn rmse_of_constant_error() {
        let e = vec![Complex64::new(0.5, 0.0); 4];
        let c: Vec<Complex64> = e.iter().map(|x| x + 0.01).collect();
        assert!((rmse(&c, &e) - 0.01).abs() < 1e-15);
        assert_eq!(rmse(&[], &[]), 0.0);
    }

    #[test]
    fn slope_and_argmax() {
        let x = [1024.0, 2048.0, 4096.0];
        let y: Vec<f64> = x.iter().map(|m: &f64| 3.0 * m.powf(-6.0)).collect();
        assert!((loglog_slope(&x, &y) + 6.0).abs() < 1e-12);
        assert_eq!(argmax(&[1.0, 3.0, 3.0, 2.0]), Some(1));
        assert_eq!(argmax(&[]), None);
    }

    proptest! {
        #[test]
        fn rmse_is_zero_iff_equal(v in proptest::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 1..50)) {
            let e: Vec<Complex64> = v.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            prop_assert_eq!(rmse(&e, &e), 0.0);
            let shifted: Vec<Complex64> = e.iter().map(|x| x + 1e-3).collect();
            prop_assert!(rmse(&shifted, &e) > 0.0);
            prop_assert!(rmse(&shifted, &e) <= 1e-3 * 2f64.sqrt());
        }
    }
}
