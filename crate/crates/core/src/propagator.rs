//! Conventional per-ζ scattering: Jost initialization, the layer scan,
//! extraction of `a`, `b`, `a'`, invariants, and bidirectional `b` at
//! discrete eigenvalues.
//!
//! Layer `k` (`k = 0..=M+1`) sits at `t_start + kτ` with
//! `t_start = t_0 − τ/2`; node `n` propagates layer `n` to layer `n+1`.
//! The Jost solution is stored as `e^ℓ ψ` with a complex log accumulator
//! `ℓ`, so exponential growth for `Im ζ > 0` never overflows. The boundary
//! plane waves are applied once at extraction.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::Mat2;
use crate::schemes::{transition, transition_derivative, SchemeKind};
use crate::stencil::{Accuracy, DerivativeTable, MIN_SAMPLES};
use crate::zbuilder::{NodeData, ZPoly};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Renormalize the scanned vector once its magnitude leaves `[1/R, R]`.
const RESCALE: f64 = 1e64;

/// Default bidirectional matching residual above which a warning is raised.
pub const DEFAULT_RESIDUAL_THRESHOLD: f64 = 1e-3;

/// `|a'|` below this is treated as a degenerate (or absent) eigenvalue.
pub const DEGENERATE_THRESHOLD: f64 = 1e-12;

/// Uniformly sampled potential `q_n = q(t_0 + nτ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialGrid {
    samples: Vec<Complex64>,
    t0: f64,
    tau: f64,
    sigma: f64,
}

impl PotentialGrid {
    /// Grid on `[−L, L]` with `M + 1 = samples.len()` nodes, `τ = 2L/M`.
    pub fn symmetric(samples: Vec<Complex64>, l: f64, sigma: f64) -> Result<Self> {
        if !(l > 0.0) {
            return Err(Error::InvalidParameter(format!("L must be positive, got {l}")));
        }
        let m = samples.len().saturating_sub(1).max(1);
        Self::with_step(samples, -l, 2.0 * l / m as f64, sigma)
    }

    /// Grid starting at `t0` with step `tau`.
    pub fn with_step(samples: Vec<Complex64>, t0: f64, tau: f64, sigma: f64) -> Result<Self> {
        if samples.len() < MIN_SAMPLES {
            return Err(Error::InputSize { needed: MIN_SAMPLES, got: samples.len() });
        }
        if !(tau > 0.0) || !tau.is_finite() || !t0.is_finite() {
            return Err(Error::InvalidParameter(format!("bad grid: t0 = {t0}, tau = {tau}")));
        }
        if sigma != 1.0 && sigma != -1.0 {
            return Err(Error::InvalidParameter(format!("sigma must be +1 or -1, got {sigma}")));
        }
        if let Some(i) = samples.iter().position(|q| !q.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { samples, t0, tau, sigma })
    }

    pub fn zero(l: f64, m: usize, sigma: f64) -> Result<Self> {
        Self::symmetric(vec![ZERO; m + 1], l, sigma)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Number of intervals `M`.
    pub fn m(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn t(&self, n: usize) -> f64 {
        self.t0 + self.tau * n as f64
    }

    pub fn t_first(&self) -> f64 {
        self.t0
    }

    pub fn t_last(&self) -> f64 {
        self.t(self.m())
    }

    /// Half-width `L` of the sampled interval.
    pub fn half_length(&self) -> f64 {
        0.5 * (self.t_last() - self.t0)
    }

    /// Left edge of the first layer, `t_0 − τ/2`.
    pub fn t_start(&self) -> f64 {
        self.t0 - 0.5 * self.tau
    }

    /// Right edge of the last layer, `t_M + τ/2`.
    pub fn t_end(&self) -> f64 {
        self.t_last() + 0.5 * self.tau
    }

    /// Dimensionless node data for every sample.
    pub fn node_data(&self) -> Result<Vec<NodeData>> {
        let table = DerivativeTable::new(&self.samples, self.tau, Accuracy::Fourth)?;
        Ok((0..self.samples.len())
            .map(|n| NodeData::from_grid(n, &self.samples, &table, self.tau, self.sigma))
            .collect())
    }
}

/// Per-node `Z` polynomials for one scheme, computed once and shared by
/// every spectral point.
#[derive(Debug, Clone)]
pub struct Prepared {
    kind: SchemeKind,
    zpolys: Vec<ZPoly>,
    tau: f64,
    sigma: f64,
    t_start: f64,
    t_end: f64,
}

impl Prepared {
    pub fn new(grid: &PotentialGrid, kind: SchemeKind) -> Result<Self> {
        let nodes = grid.node_data()?;
        let family = kind.family();
        let zpolys = nodes.par_iter().map(|n| ZPoly::build(family, n)).collect();
        Ok(Self {
            kind,
            zpolys,
            tau: grid.tau(),
            sigma: grid.sigma(),
            t_start: grid.t_start(),
            t_end: grid.t_end(),
        })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn zpolys(&self) -> &[ZPoly] {
        &self.zpolys
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Transition matrix of node `n`.
    pub fn transition(&self, n: usize, zeta: Complex64) -> Result<Mat2> {
        transition(self.kind, &self.zpolys[n], zeta, self.tau)
    }

    /// Ordered product `T_M ⋯ T_0`.
    pub fn transfer_matrix(&self, zeta: Complex64) -> Result<Mat2> {
        let mut acc = Mat2::identity();
        for n in 0..self.zpolys.len() {
            acc = self.transition(n, zeta)? * acc;
        }
        Ok(acc)
    }
}

#[inline]
fn vec_norm(v: &[Complex64; 2]) -> f64 {
    v[0].norm().max(v[1].norm())
}

#[inline]
fn rescale(v: &mut [Complex64; 2], dv: Option<&mut [Complex64; 2]>, log: &mut Complex64) {
    let n = vec_norm(v);
    if n > RESCALE || (n < 1.0 / RESCALE && n > 0.0) {
        let inv = 1.0 / n;
        v[0] *= inv;
        v[1] *= inv;
        if let Some(d) = dv {
            d[0] *= inv;
            d[1] *= inv;
        }
        *log += n.ln();
    }
}

/// `e^{iζt}` with the phase `Re ζ · t` carried as an exact two-term sum,
/// so large `|ξ t|` costs no more than one rounding of the result.
pub fn plane_wave(zeta: Complex64, t: f64) -> Complex64 {
    unit_phase(zeta.re, t) * (-zeta.im * t).exp()
}

/// `e^{ixt}` with the phase split as `hi + lo`, `lo` the exact rounding error.
#[inline]
fn unit_phase(x: f64, t: f64) -> Complex64 {
    let hi = x * t;
    let lo = x.mul_add(t, -hi);
    Complex64::from_polar(1.0, hi) * Complex64::new(1.0, lo)
}

/// `e^{ℓ + iζt}` with the growth folded into the log before exponentiating.
#[inline]
fn scaled_wave(log: Complex64, zeta: Complex64, t: f64) -> Complex64 {
    (log - zeta.im * t).exp() * unit_phase(zeta.re, t)
}

/// Scattering coefficients at a single spectral point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointScatter {
    pub a: Complex64,
    pub b: Complex64,
    pub a_prime: Option<Complex64>,
}

/// Left-to-right scan at `zeta`; `a'` via the co-propagated derivative when
/// `with_derivative` is set.
pub fn scatter(prep: &Prepared, zeta: Complex64, with_derivative: bool) -> Result<PointScatter> {
    let mut log = ZERO;
    let mut psi = [ONE, ZERO];
    if !with_derivative {
        for p in &prep.zpolys {
            psi = transition(prep.kind, p, zeta, prep.tau)?.mul_vec(psi);
            rescale(&mut psi, None, &mut log);
        }
        let (a, b) = extract(psi, log, zeta, prep.t_start, prep.t_end);
        return Ok(PointScatter { a, b, a_prime: None });
    }
    let mut dpsi = [-I * prep.t_start, ZERO];
    for p in &prep.zpolys {
        let (t, dt) = transition_derivative(prep.kind, p, zeta, prep.tau)?;
        let a = dt.mul_vec(psi);
        let b = t.mul_vec(dpsi);
        dpsi = [a[0] + b[0], a[1] + b[1]];
        psi = t.mul_vec(psi);
        rescale(&mut psi, Some(&mut dpsi), &mut log);
    }
    let (a, b) = extract(psi, log, zeta, prep.t_start, prep.t_end);
    let a_prime = dpsi[0] * scaled_wave(log, zeta, prep.t_end - prep.t_start) + I * prep.t_end * a;
    Ok(PointScatter { a, b, a_prime: Some(a_prime) })
}

#[inline]
fn extract(psi: [Complex64; 2], log: Complex64, zeta: Complex64, t_start: f64, t_end: f64) -> (Complex64, Complex64) {
    (
        psi[0] * scaled_wave(log, zeta, t_end - t_start),
        psi[1] * scaled_wave(log, zeta, -(t_end + t_start)),
    )
}

/// Continuous-spectrum data over a list of real `ξ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatteringData {
    pub xi: Vec<f64>,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    /// Reflection coefficient `b/a`.
    pub r: Vec<Complex64>,
    /// Quadratic invariant `|a|² + σ|b|²`.
    pub h: Vec<f64>,
    /// Continuous-spectrum energy over the sampled window.
    pub e_c: f64,
    /// Indices left out of `E_c` because `a` vanished or was not finite.
    pub excluded: Vec<usize>,
}

impl ScatteringData {
    pub fn from_ab(xi: Vec<f64>, a: Vec<Complex64>, b: Vec<Complex64>, sigma: f64) -> Self {
        let r = a.iter().zip(&b).map(|(a, b)| b / a).collect();
        let h = a.iter().zip(&b).map(|(a, b)| a.norm_sqr() + sigma * b.norm_sqr()).collect();
        let (e_c, excluded) = continuous_energy(&xi, &a);
        if !excluded.is_empty() {
            log::warn!("{} spectral points excluded from E_c (a = 0 or non-finite)", excluded.len());
        }
        Self { xi, a, b, r, h, e_c, excluded }
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }
}

/// Trapezoid rule for `−(1/π) ∫ ln|a(ξ)|² dξ`; points with `a = 0` or
/// non-finite values are dropped and their indices returned.
pub fn continuous_energy(xi: &[f64], a: &[Complex64]) -> (f64, Vec<usize>) {
    let mut excluded = Vec::new();
    let mut pts = Vec::with_capacity(xi.len());
    for (k, (&x, v)) in xi.iter().zip(a).enumerate() {
        let m = v.norm_sqr();
        if m > 0.0 && m.is_finite() && x.is_finite() {
            pts.push((x, m.ln()));
        } else {
            excluded.push(k);
        }
    }
    let integral: f64 =
        pts.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum();
    (-integral / std::f64::consts::PI, excluded)
}

/// `a`, `b`, `r`, `H` and `E_c` at every real `ξ`, in parallel.
pub fn scatter_grid(prep: &Prepared, xi: &[f64]) -> Result<ScatteringData> {
    let pts: Vec<PointScatter> = xi
        .par_iter()
        .map(|&x| scatter(prep, Complex64::new(x, 0.0), false))
        .collect::<Result<_>>()?;
    let a = pts.iter().map(|p| p.a).collect();
    let b = pts.iter().map(|p| p.b).collect();
    Ok(ScatteringData::from_ab(xi.to_vec(), a, b, prep.sigma))
}

/// `n` equispaced points on `[xi_min, xi_max]` including both ends.
pub fn linspace(xi_min: f64, xi_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (xi_min + xi_max)],
        _ => {
            let step = (xi_max - xi_min) / (n - 1) as f64;
            (0..n).map(|k| xi_min + step * k as f64).collect()
        }
    }
}

/// Outcome of matching left and right Jost solutions at an eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bidirectional {
    pub b: Complex64,
    /// `‖Ψ − bΦ‖ / ‖Ψ‖` at the crossover layer.
    pub residual: f64,
    /// Layer index where the two scans were matched.
    pub crossover: usize,
    /// Residual exceeded the threshold.
    pub ill_conditioned: bool,
}

/// `b(ζ_k)` from `Ψ = Φ b`, with `Ψ` scanned from the left and `Φ` from
/// the right using inverse transition matrices.
pub fn bidirectional_b(prep: &Prepared, zeta: Complex64, threshold: f64) -> Result<Bidirectional> {
    if !(zeta.im > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eigenvalue must lie in the upper half-plane, got {zeta}"
        )));
    }
    let layers = prep.zpolys.len() + 1;
    let mut left = Vec::with_capacity(layers);
    let mut log = -I * zeta * prep.t_start;
    let mut psi = [ONE, ZERO];
    left.push((psi, log));
    for p in &prep.zpolys {
        psi = transition(prep.kind, p, zeta, prep.tau)?.mul_vec(psi);
        rescale(&mut psi, None, &mut log);
        left.push((psi, log));
    }

    let mut right = vec![([ZERO; 2], ZERO); layers];
    let mut phi = [ZERO, ONE];
    let mut log_r = I * zeta * prep.t_end;
    right[layers - 1] = (phi, log_r);
    for (n, p) in prep.zpolys.iter().enumerate().rev() {
        let t = transition(prep.kind, p, zeta, prep.tau)?;
        let inv = t.inverse().ok_or_else(|| {
            Error::InvalidParameter(format!("singular transition matrix at node {n}"))
        })?;
        phi = inv.mul_vec(phi);
        rescale(&mut phi, None, &mut log_r);
        right[n] = (phi, log_r);
    }

    let log_mag = |v: &[Complex64; 2], l: Complex64| l.re + (v[0].norm_sqr() + v[1].norm_sqr()).sqrt().ln();
    let crossover = (0..layers)
        .max_by(|&i, &j| {
            let fi = log_mag(&left[i].0, left[i].1).min(log_mag(&right[i].0, right[i].1));
            let fj = log_mag(&left[j].0, left[j].1).min(log_mag(&right[j].0, right[j].1));
            fi.total_cmp(&fj)
        })
        .unwrap_or(0);

    let (psi, lp) = left[crossover];
    let (phi, lf) = right[crossover];
    let num = phi[0].conj() * psi[0] + phi[1].conj() * psi[1];
    let den = phi[0].norm_sqr() + phi[1].norm_sqr();
    let ratio = num / den;
    let rv = [psi[0] - phi[0] * ratio, psi[1] - phi[1] * ratio];
    let residual = (rv[0].norm_sqr() + rv[1].norm_sqr()).sqrt()
        / (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
    let b = ratio * (lp - lf).exp();
    let ill_conditioned = !(residual <= threshold);
    if ill_conditioned {
        log::warn!("bidirectional match at zeta = {zeta}: residual {residual:e} above {threshold:e}");
    }
    Ok(Bidirectional { b, residual, crossover, ill_conditioned })
}

/// Norming data at a discrete eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseCoefficient {
    pub zeta: Complex64,
    pub a: Complex64,
    pub a_prime: Complex64,
    pub b: Complex64,
    /// `b / a'`.
    pub r: Complex64,
    pub residual: f64,
    pub ill_conditioned: bool,
}

/// `r_k = b(ζ_k) / a'(ζ_k)`.
pub fn phase_coefficient(prep: &Prepared, zeta: Complex64, threshold: f64) -> Result<PhaseCoefficient> {
    let s = scatter(prep, zeta, true)?;
    let a_prime = s.a_prime.unwrap_or(ZERO);
    if !(a_prime.norm() >= DEGENERATE_THRESHOLD) {
        return Err(Error::DegenerateEigenvalue { zeta, magnitude: a_prime.norm() });
    }
    let bd = bidirectional_b(prep, zeta, threshold)?;
    Ok(PhaseCoefficient {
        zeta,
        a: s.a,
        a_prime,
        b: bd.b,
        r: bd.b / a_prime,
        residual: bd.residual,
        ill_conditioned: bd.ill_conditioned,
    })
}
