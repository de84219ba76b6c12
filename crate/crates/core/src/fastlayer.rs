//! Fast transfer matrices: each step becomes `T = S(w)/d(w)` with matrix
//! polynomial `S` and scalar `d` in the Möbius variable `w`, steps are
//! multiplied in a balanced product tree, and the aggregate is evaluated
//! by Horner at arbitrary points or by FFT on an equispaced circle grid.
//!
//! The map works in dimensionless units, `z = τζ`:
//! `w = (ih − z)/(ih + z)`, `z = ih (1 − w)/(1 + w)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::Mat2;
use crate::poly::{self, max_abs};
use crate::propagator::{plane_wave, PotentialGrid, ScatteringData};
use crate::schemes::{SchemeKind, POLE_THRESHOLD};
use crate::zbuilder::{ZFamily, ZPoly};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default `h` for the fast Padé-3 scheme.
pub const DEFAULT_H_PADE3: f64 = 11.0;
/// Default `h` for the fast Padé-4 scheme.
pub const DEFAULT_H_PADE4: f64 = 15.0;
/// Default `h` for fast CN2: the free-propagation denominator then has
/// constant modulus on the unit circle.
pub const DEFAULT_H_CN2: f64 = 2.0;
/// Largest `h` at which the fast Padé-3 scheme still works.
pub const CRITICAL_H_PADE3: f64 = 11.65;
/// Largest `h` at which the fast Padé-4 scheme still works.
pub const CRITICAL_H_PADE4: f64 = 15.57;

/// Subtrees with fewer steps than this are multiplied on one thread.
const PARALLEL_LEAVES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub h: f64,
}

impl MobiusMap {
    pub fn new(h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidParameter(format!("h must be positive, got {h}")));
        }
        Ok(Self { h })
    }

    /// Default map for a fast scheme, `None` for schemes without one.
    pub fn default_for(kind: SchemeKind) -> Option<Self> {
        match kind {
            SchemeKind::Es6Pade3 => Some(Self { h: DEFAULT_H_PADE3 }),
            SchemeKind::Es6Pade4 => Some(Self { h: DEFAULT_H_PADE4 }),
            SchemeKind::Cn2 => Some(Self { h: DEFAULT_H_CN2 }),
            _ => None,
        }
    }

    pub fn w(&self, z: Complex64) -> Complex64 {
        let ih = I * self.h;
        (ih - z) / (ih + z)
    }

    pub fn z(&self, w: Complex64) -> Complex64 {
        I * self.h * (ONE - w) / (ONE + w)
    }

    /// Real `ξ` of the circle point `e^{iθ}` for step `tau`.
    pub fn xi_of_theta(&self, theta: f64, tau: f64) -> f64 {
        self.h * (0.5 * theta).tan() / tau
    }

    pub fn theta_of_xi(&self, xi: f64, tau: f64) -> f64 {
        2.0 * (xi * tau / self.h).atan()
    }
}

/// Warns when `h` exceeds the known working limit of a fast scheme.
pub fn check_h(kind: SchemeKind, map: &MobiusMap) -> bool {
    let limit = match kind {
        SchemeKind::Es6Pade3 => CRITICAL_H_PADE3,
        SchemeKind::Es6Pade4 => CRITICAL_H_PADE4,
        _ => return true,
    };
    if map.h > limit {
        log::warn!("h = {} exceeds the critical value {limit} for {kind}", map.h);
        false
    } else {
        true
    }
}

/// `T(w) = S(w)/d(w)`; `S` is stored in the Pauli basis. Coefficients are
/// scaled by `exp(−log_scale)`, which cancels in the ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferPoly {
    pub s: [Vec<Complex64>; 4],
    pub d: Vec<Complex64>,
    pub log_scale: f64,
}

impl TransferPoly {
    pub fn identity() -> Self {
        Self { s: [vec![ONE], vec![ZERO], vec![ZERO], vec![ZERO]], d: vec![ONE], log_scale: 0.0 }
    }

    /// Polynomial degree (all five sequences share one length).
    pub fn degree(&self) -> usize {
        self.d.len() - 1
    }

    /// Divides every coefficient by the largest `|d_k|`.
    pub fn normalize(&mut self) {
        let m = max_abs(&self.d);
        if m > 0.0 && m.is_finite() {
            let inv = 1.0 / m;
            for seq in self.s.iter_mut().chain(std::iter::once(&mut self.d)) {
                for v in seq.iter_mut() {
                    *v *= inv;
                }
            }
            self.log_scale += m.ln();
        }
    }

    /// `(S(w), d(w))` without dividing.
    pub fn eval_parts(&self, w: Complex64) -> (Mat2, Complex64) {
        let s = Mat2::new(
            poly::horner(&self.s[0], w),
            poly::horner(&self.s[1], w),
            poly::horner(&self.s[2], w),
            poly::horner(&self.s[3], w),
        );
        (s, poly::horner(&self.d, w))
    }

    /// `S(w)/d(w)`.
    pub fn eval(&self, w: Complex64) -> Result<Mat2> {
        let (s, d) = self.eval_parts(w);
        ratio(s, d, w)
    }

    /// `self · right` (`self` is the later step).
    pub fn mul(&self, right: &Self) -> Self {
        let len = self.d.len() + right.d.len() - 1;
        let mut out = if len > poly::FFT_CROSSOVER + 1 {
            let n = poly::convolution_len(len);
            let fa: Vec<Vec<Complex64>> =
                self.s.iter().chain([&self.d]).map(|p| poly::spectrum(p, n)).collect();
            let fb: Vec<Vec<Complex64>> =
                right.s.iter().chain([&right.d]).map(|p| poly::spectrum(p, n)).collect();
            let mut s = [vec![ZERO; n], vec![ZERO; n], vec![ZERO; n], vec![ZERO; n]];
            let mut d = vec![ZERO; n];
            for k in 0..n {
                let a = Mat2::new(fa[0][k], fa[1][k], fa[2][k], fa[3][k]);
                let b = Mat2::new(fb[0][k], fb[1][k], fb[2][k], fb[3][k]);
                let p = a * b;
                s[0][k] = p.z0;
                s[1][k] = p.z1;
                s[2][k] = p.z2;
                s[3][k] = p.z3;
                d[k] = fa[4][k] * fb[4][k];
            }
            let [s0, s1, s2, s3] = s;
            Self {
                s: [
                    poly::from_spectrum(s0, len),
                    poly::from_spectrum(s1, len),
                    poly::from_spectrum(s2, len),
                    poly::from_spectrum(s3, len),
                ],
                d: poly::from_spectrum(d, len),
                log_scale: self.log_scale + right.log_scale,
            }
        } else {
            let m = |i: usize, j: usize| poly::mul_schoolbook(&self.s[i], &right.s[j]);
            let sum = |terms: &[(usize, usize, Complex64)]| {
                let mut acc = vec![ZERO; len];
                for &(i, j, k) in terms {
                    poly::add_scaled(&mut acc, &m(i, j), k);
                }
                acc
            };
            // (a0 + a·σ)(b0 + b·σ) = a0b0 + a·b + (a0b + b0a + i a×b)·σ
            Self {
                s: [
                    sum(&[(0, 0, ONE), (1, 1, ONE), (2, 2, ONE), (3, 3, ONE)]),
                    sum(&[(0, 1, ONE), (1, 0, ONE), (2, 3, I), (3, 2, -I)]),
                    sum(&[(0, 2, ONE), (2, 0, ONE), (3, 1, I), (1, 3, -I)]),
                    sum(&[(0, 3, ONE), (3, 0, ONE), (1, 2, I), (2, 1, -I)]),
                ],
                d: poly::mul_schoolbook(&self.d, &right.d),
                log_scale: self.log_scale + right.log_scale,
            }
        };
        out.normalize();
        out
    }
}

fn ratio(s: Mat2, d: Complex64, w: Complex64) -> Result<Mat2> {
    if d.norm() < POLE_THRESHOLD || !d.is_finite() {
        return Err(Error::PoleProximity { mu: w, magnitude: d.norm() });
    }
    Ok(s.scale(d.inv()))
}

/// Nominal degree of the `Z` coordinates for a family.
fn family_degree(family: ZFamily) -> usize {
    match family {
        ZFamily::Plain => 1,
        ZFamily::Exponential => 3,
        ZFamily::Cayley => 5,
    }
}

/// Per-step polynomial degree `D` in `w`.
pub fn step_degree(kind: SchemeKind) -> Result<usize> {
    if !kind.has_fast_form() {
        return Err(Error::UnsupportedFastScheme(kind.name()));
    }
    let r = kind.rational().expect("fast schemes are rational");
    Ok(2 * family_degree(kind.family()) * (r.den.len() - 1))
}

/// Step transfer polynomial for one node.
///
/// Each coordinate `z_k(z)` of nominal degree `g` is homogenized as
/// `Σ_j z_kj u^j v^{g−j}` with `u = ih(1 − w)` and `v = 1 + w`, so a
/// polynomial `P(μ)` of nominal degree `m` in `μ = λ²` becomes
/// `Σ_j p_j μ̃^j v^{2g(m−j)}`. Every piece is padded to the common
/// degree `D = 2gm`, which clears `(1 + w)^D` from numerator and
/// denominator alike.
pub fn step_polynomial(zpoly: &ZPoly, kind: SchemeKind, map: &MobiusMap) -> Result<TransferPoly> {
    let big_d = step_degree(kind)?;
    let r = kind.rational().expect("fast schemes are rational");
    let g = family_degree(kind.family());
    let u = [I * map.h, -I * map.h];
    let v = [ONE, ONE];
    let up = poly::powers(&u, g);
    let vp = poly::powers(&v, big_d);

    let homogenize = |c: &[Complex64]| {
        let mut acc = Vec::new();
        for j in 0..=g {
            if c[j] != ZERO {
                poly::add_scaled(&mut acc, &poly::mul_schoolbook(&up[j], &vp[g - j]), c[j]);
            }
        }
        acc.resize(g + 1, ZERO);
        acc
    };
    let zt = [homogenize(&zpoly.z1), homogenize(&zpoly.z2), homogenize(&zpoly.z3)];
    let mut mu = vec![ZERO; 2 * g + 1];
    for z in &zt {
        poly::add_scaled(&mut mu, &poly::mul_schoolbook(z, z), ONE);
    }
    let mu_pows = poly::powers(&mu, r.den.len() - 1);

    // Σ_j p_j μ̃^j v^{2g(m−j)} v^{extra}
    let lift = |p: &[f64], m: usize, extra: usize| {
        let mut acc = Vec::new();
        for (j, &pj) in p.iter().enumerate() {
            if pj != 0.0 {
                let term = poly::mul_schoolbook(&mu_pows[j], &vp[2 * g * (m - j) + extra]);
                poly::add_scaled(&mut acc, &term, Complex64::new(pj, 0.0));
            }
        }
        acc
    };
    let m = r.den.len() - 1;
    let ms = r.num_s.len() - 1;
    let d = lift(r.den, m, 0);
    let s0 = lift(r.num_c, m, 0);
    let ns = lift(r.num_s, ms, big_d - 2 * g * ms - g);
    let mut s = [s0, poly::mul_schoolbook(&ns, &zt[0]), poly::mul_schoolbook(&ns, &zt[1]), poly::mul_schoolbook(&ns, &zt[2])];
    let mut d = d;
    for p in s.iter_mut().chain(std::iter::once(&mut d)) {
        p.resize(big_d + 1, ZERO);
    }
    let mut tp = TransferPoly { s, d, log_scale: 0.0 };
    tp.normalize();
    Ok(tp)
}

/// Balanced product `T_{n−1} ⋯ T_0` of an ordered step sequence.
pub fn product_tree(steps: &[TransferPoly]) -> Result<TransferPoly> {
    match steps.len() {
        0 => Err(Error::InvalidParameter("empty step sequence".into())),
        1 => Ok(steps[0].clone()),
        n => {
            let (lo, hi) = steps.split_at(n / 2);
            let (left, right) = if n >= PARALLEL_LEAVES {
                rayon::join(|| product_tree(hi), || product_tree(lo))
            } else {
                (product_tree(hi), product_tree(lo))
            };
            Ok(left?.mul(&right?))
        }
    }
}

/// Step polynomials for every node of a grid.
pub fn step_polynomials(grid: &PotentialGrid, kind: SchemeKind, map: &MobiusMap) -> Result<Vec<TransferPoly>> {
    step_degree(kind)?;
    let family = kind.family();
    grid.node_data()?
        .par_iter()
        .map(|n| step_polynomial(&ZPoly::build(family, n), kind, map))
        .collect()
}

/// Aggregate transfer polynomial of a whole grid.
pub fn build_transfer(grid: &PotentialGrid, kind: SchemeKind, map: &MobiusMap) -> Result<TransferPoly> {
    product_tree(&step_polynomials(grid, kind, map)?)
}

/// Angles `θ_j = −π + 2π(j + ½)/N` of the equispaced circle grid.
pub fn circle_angles(n: usize) -> Vec<f64> {
    (0..n).map(|j| -PI + 2.0 * PI * (j as f64 + 0.5) / n as f64).collect()
}

/// Values of one coefficient sequence at every circle point `e^{iθ_j}`.
fn circle_values(p: &[Complex64], n: usize) -> Vec<Complex64> {
    let theta0 = -PI + PI / n as f64;
    let mut buf = vec![ZERO; n];
    for (k, &c) in p.iter().enumerate() {
        // e^{ikθ0} with the angle reduced before the exponential
        let phase = ((k % (2 * n)) as f64) * theta0;
        buf[k % n] += c * Complex64::from_polar(1.0, phase);
    }
    poly::inverse_plan(n).process(&mut buf);
    buf
}

/// `S/d` at the `n` circle points, `O(deg + n log n)` per sequence.
pub fn evaluate_circle(poly: &TransferPoly, n: usize) -> Vec<Result<Mat2>> {
    let vals: Vec<Vec<Complex64>> =
        poly.s.iter().chain([&poly.d]).map(|p| circle_values(p, n)).collect();
    let angles = circle_angles(n);
    (0..n)
        .map(|j| {
            let s = Mat2::new(vals[0][j], vals[1][j], vals[2][j], vals[3][j]);
            ratio(s, vals[4][j], Complex64::from_polar(1.0, angles[j]))
        })
        .collect()
}

/// `S/d` at arbitrary `w` by Horner, in parallel.
pub fn evaluate_points(poly: &TransferPoly, ws: &[Complex64]) -> Vec<Result<Mat2>> {
    ws.par_iter().map(|&w| poly.eval(w)).collect()
}

/// Where to evaluate the fast transfer matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Targets {
    /// Arbitrary real `ξ`, Horner per point.
    Points(Vec<f64>),
    /// Equispaced circle grid of `N` points restricted to `[ξ_min, ξ_max]`,
    /// evaluated by one FFT per sequence.
    Window { xi_min: f64, xi_max: f64, n_circle: usize },
}

impl Targets {
    /// Circle grid dense enough to put about `n` points in the window.
    pub fn window(xi_min: f64, xi_max: f64, n: usize, tau: f64, map: &MobiusMap) -> Self {
        let arc = map.theta_of_xi(xi_max, tau) - map.theta_of_xi(xi_min, tau);
        let n_circle = ((n as f64) * 2.0 * PI / arc.max(1e-12)).ceil() as usize;
        Targets::Window { xi_min, xi_max, n_circle: n_circle.max(n) }
    }
}

/// Fast continuous spectrum: `a = T11 e^{iζ(t_end − t_start)}`,
/// `b = T21 e^{−iζ(t_end + t_start)}`.
pub fn fast_scatter(
    grid: &PotentialGrid,
    kind: SchemeKind,
    map: &MobiusMap,
    targets: &Targets,
) -> Result<ScatteringData> {
    check_h(kind, map);
    let transfer = build_transfer(grid, kind, map)?;
    scatter_from_transfer(&transfer, grid, map, targets)
}

/// Continuous spectrum from an already aggregated transfer polynomial.
pub fn scatter_from_transfer(
    transfer: &TransferPoly,
    grid: &PotentialGrid,
    map: &MobiusMap,
    targets: &Targets,
) -> Result<ScatteringData> {
    let tau = grid.tau();
    let (xi, mats): (Vec<f64>, Vec<Mat2>) = match targets {
        Targets::Points(xs) => {
            let ws: Vec<Complex64> =
                xs.iter().map(|&x| map.w(Complex64::new(x * tau, 0.0))).collect();
            let mats = evaluate_points(transfer, &ws).into_iter().collect::<Result<Vec<_>>>()?;
            (xs.clone(), mats)
        }
        Targets::Window { xi_min, xi_max, n_circle } => {
            let all = evaluate_circle(transfer, *n_circle);
            let mut xi = Vec::new();
            let mut mats = Vec::new();
            for (theta, m) in circle_angles(*n_circle).into_iter().zip(all) {
                let x = map.xi_of_theta(theta, tau);
                if x >= *xi_min && x <= *xi_max {
                    xi.push(x);
                    mats.push(m?);
                }
            }
            (xi, mats)
        }
    };
    let (t0, t1) = (grid.t_start(), grid.t_end());
    let mut a = Vec::with_capacity(xi.len());
    let mut b = Vec::with_capacity(xi.len());
    for (&x, m) in xi.iter().zip(&mats) {
        let z = Complex64::new(x, 0.0);
        a.push(m.m11() * plane_wave(z, t1 - t0));
        b.push(m.m21() * plane_wave(z, -(t1 + t0)));
    }
    Ok(ScatteringData::from_ab(xi, a, b, grid.sigma()))
}
