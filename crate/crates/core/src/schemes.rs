//! One-step transition matrices `T = c(λ) σ0 + (s(λ)/λ) Z` for every
//! supported scheme, their ζ-derivatives, and the applicability check.
//!
//! All coefficient functions are evaluated as functions of `μ = λ²`, so no
//! square root is needed on the rational paths.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{apply_even_odd, EvenOddCoeffs, Mat2, SMALL_LAMBDA};
use crate::zbuilder::{ZFamily, ZPoly};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Rational denominators below this magnitude are reported as poles.
pub const POLE_THRESHOLD: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    /// Sixth-order exponential scheme.
    Es6,
    /// Exponential generator with the 3rd-order diagonal Padé approximant.
    Es6Pade3,
    /// Exponential generator with the 4th-order diagonal Padé approximant.
    Es6Pade4,
    /// Cayley-matched generator with the canonical Cayley transform.
    Es6Cayley,
    /// Second-order exponential midpoint scheme, `T = exp(τQ)`.
    Bo2,
    /// Second-order Crank–Nicolson scheme, canonical Cayley of `τQ`.
    Cn2,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 6] = [
        SchemeKind::Es6,
        SchemeKind::Es6Pade3,
        SchemeKind::Es6Pade4,
        SchemeKind::Es6Cayley,
        SchemeKind::Bo2,
        SchemeKind::Cn2,
    ];

    pub const SIXTH_ORDER: [SchemeKind; 4] =
        [SchemeKind::Es6, SchemeKind::Es6Pade3, SchemeKind::Es6Pade4, SchemeKind::Es6Cayley];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Es6 => "ES6",
            SchemeKind::Es6Pade3 => "ES6_Pade3",
            SchemeKind::Es6Pade4 => "ES6_Pade4",
            SchemeKind::Es6Cayley => "ES6_Cayley",
            SchemeKind::Bo2 => "BO2",
            SchemeKind::Cn2 => "CN2",
        }
    }

    pub fn family(self) -> ZFamily {
        match self {
            SchemeKind::Es6 | SchemeKind::Es6Pade3 | SchemeKind::Es6Pade4 => ZFamily::Exponential,
            SchemeKind::Es6Cayley => ZFamily::Cayley,
            SchemeKind::Bo2 | SchemeKind::Cn2 => ZFamily::Plain,
        }
    }

    pub fn order(self) -> u32 {
        match self {
            SchemeKind::Bo2 | SchemeKind::Cn2 => 2,
            _ => 6,
        }
    }

    /// Rational `(c, s/λ)` tables, or `None` for the hyperbolic schemes.
    pub fn rational(self) -> Option<&'static Rational> {
        match self {
            SchemeKind::Es6 | SchemeKind::Bo2 => None,
            SchemeKind::Es6Pade3 => Some(&PADE3),
            SchemeKind::Es6Pade4 => Some(&PADE4),
            SchemeKind::Es6Cayley | SchemeKind::Cn2 => Some(&CAYLEY),
        }
    }

    /// Whether a polynomial transfer-matrix form exists.
    pub fn has_fast_form(self) -> bool {
        matches!(self, SchemeKind::Es6Pade3 | SchemeKind::Es6Pade4 | SchemeKind::Cn2)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String =
            s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_lowercase();
        match key.as_str() {
            "es6" => Ok(SchemeKind::Es6),
            "es6pade3" | "pade3" => Ok(SchemeKind::Es6Pade3),
            "es6pade4" | "pade4" => Ok(SchemeKind::Es6Pade4),
            "es6cayley" | "cayley" => Ok(SchemeKind::Es6Cayley),
            "bo2" => Ok(SchemeKind::Bo2),
            "cn2" => Ok(SchemeKind::Cn2),
            _ => Err(Error::InvalidParameter(format!("unknown scheme '{s}'"))),
        }
    }
}

/// `c(μ) = num_c(μ)/den(μ)`, `s/λ(μ) = num_s(μ)/den(μ)`, coefficients in
/// ascending powers of `μ = λ²`.
#[derive(Debug)]
pub struct Rational {
    pub num_c: &'static [f64],
    pub num_s: &'static [f64],
    pub den: &'static [f64],
    /// Numerator `F(z)` of the underlying `F(z)/F(−z)`, ascending powers of `z`.
    pub generator: &'static [f64],
}

pub static PADE3: Rational = Rational {
    num_c: &[1.0, 9.0 / 20.0, 11.0 / 600.0, 1.0 / 14400.0],
    num_s: &[1.0, 7.0 / 60.0, 1.0 / 600.0],
    den: &[1.0, -1.0 / 20.0, 1.0 / 600.0, -1.0 / 14400.0],
    generator: &[1.0, 1.0 / 2.0, 1.0 / 10.0, 1.0 / 120.0],
};

pub static PADE4: Rational = Rational {
    num_c: &[1.0, 13.0 / 28.0, 289.0 / 11760.0, 19.0 / 70560.0, 1.0 / 2822400.0],
    num_s: &[1.0, 11.0 / 84.0, 37.0 / 11760.0, 1.0 / 70560.0],
    den: &[1.0, -1.0 / 28.0, 3.0 / 3920.0, -1.0 / 70560.0, 1.0 / 2822400.0],
    generator: &[1.0, 1.0 / 2.0, 3.0 / 28.0, 1.0 / 84.0, 1.0 / 1680.0],
};

pub static CAYLEY: Rational = Rational {
    num_c: &[1.0, 1.0 / 4.0],
    num_s: &[1.0],
    den: &[1.0, -1.0 / 4.0],
    generator: &[1.0, 1.0 / 2.0],
};

#[inline]
fn poly_real(c: &[f64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(ZERO, |acc, &a| acc * x + a)
}

#[inline]
fn poly_real_with_derivative(c: &[f64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// Coefficients and their μ-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffsWithDerivative {
    pub coeffs: EvenOddCoeffs,
    /// `dc/dμ`
    pub dc: Complex64,
    /// `d(s/λ)/dμ`
    pub ds: Complex64,
}

impl Rational {
    pub fn eval(&self, mu: Complex64) -> Result<EvenOddCoeffs> {
        let den = poly_real(self.den, mu);
        check_pole(den, mu)?;
        let inv = den.inv();
        Ok(EvenOddCoeffs::new(poly_real(self.num_c, mu) * inv, poly_real(self.num_s, mu) * inv))
    }

    pub fn eval_with_derivative(&self, mu: Complex64) -> Result<CoeffsWithDerivative> {
        let (d, dd) = poly_real_with_derivative(self.den, mu);
        check_pole(d, mu)?;
        let (nc, dnc) = poly_real_with_derivative(self.num_c, mu);
        let (ns, dns) = poly_real_with_derivative(self.num_s, mu);
        let inv = d.inv();
        let c = nc * inv;
        let s = ns * inv;
        Ok(CoeffsWithDerivative {
            coeffs: EvenOddCoeffs::new(c, s),
            dc: (dnc - c * dd) * inv,
            ds: (dns - s * dd) * inv,
        })
    }
}

fn check_pole(den: Complex64, mu: Complex64) -> Result<()> {
    if den.norm() < POLE_THRESHOLD || !den.is_finite() {
        Err(Error::PoleProximity { mu, magnitude: den.norm() })
    } else {
        Ok(())
    }
}

fn exponential_with_derivative(mu: Complex64) -> CoeffsWithDerivative {
    let coeffs = EvenOddCoeffs::exponential(mu);
    if mu.norm() < 1e-2 {
        // d/dμ Σ μ^k/(2k)! and Σ μ^k/(2k+1)!
        let mut dc = ZERO;
        let mut ds = ZERO;
        let mut pow = ONE;
        let mut fact_even = 2.0; // (2k)! at k = 1
        let mut fact_odd = 6.0; // (2k+1)! at k = 1
        for k in 1..=8 {
            let kf = k as f64;
            dc += pow * (kf / fact_even);
            ds += pow * (kf / fact_odd);
            pow *= mu;
            fact_even *= (2.0 * kf + 1.0) * (2.0 * kf + 2.0);
            fact_odd *= (2.0 * kf + 2.0) * (2.0 * kf + 3.0);
        }
        CoeffsWithDerivative { coeffs, dc, ds }
    } else {
        let lambda = mu.sqrt();
        CoeffsWithDerivative {
            coeffs,
            dc: lambda.sinh() / (lambda * 2.0),
            ds: (coeffs.c - coeffs.s_over_lambda) / (mu * 2.0),
        }
    }
}

/// `(c, s/λ)` as functions of `μ = λ²`.
pub fn coeffs_mu(kind: SchemeKind, mu: Complex64) -> Result<EvenOddCoeffs> {
    match kind.rational() {
        None => Ok(EvenOddCoeffs::exponential(mu)),
        Some(r) => r.eval(mu),
    }
}

/// `(c, s/λ)` at eigenvalue `λ`.
pub fn coeffs(kind: SchemeKind, lambda: Complex64) -> Result<EvenOddCoeffs> {
    coeffs_mu(kind, lambda * lambda)
}

pub fn coeffs_with_derivative(kind: SchemeKind, mu: Complex64) -> Result<CoeffsWithDerivative> {
    match kind.rational() {
        None => Ok(exponential_with_derivative(mu)),
        Some(r) => r.eval_with_derivative(mu),
    }
}

/// One-step transition matrix at spectral parameter `zeta`.
#[inline]
pub fn transition(kind: SchemeKind, zpoly: &ZPoly, zeta: Complex64, tau: f64) -> Result<Mat2> {
    let z = zpoly.eval(zeta * tau);
    Ok(apply_even_odd(&z, coeffs_mu(kind, z.lambda_sq())?))
}

/// Transition matrix and its derivative with respect to ζ.
///
/// `T' = c' σ0 + (s/λ)' Z + (s/λ) Z'` with `c' = dc/dμ · μ'`,
/// `(s/λ)' = d(s/λ)/dμ · μ'`, `μ' = 2 (z1 z1' + z2 z2' + z3 z3')`, and
/// `Z' = τ dZ/dz`.
#[inline]
pub fn transition_derivative(
    kind: SchemeKind,
    zpoly: &ZPoly,
    zeta: Complex64,
    tau: f64,
) -> Result<(Mat2, Mat2)> {
    let (z, dz_dz) = zpoly.eval_with_derivative(zeta * tau);
    let dz = dz_dz.scale_re(tau);
    let mu = z.lambda_sq();
    let dmu = (z.z1 * dz.z1 + z.z2 * dz.z2 + z.z3 * dz.z3) * 2.0;
    let cd = coeffs_with_derivative(kind, mu)?;
    let t = apply_even_odd(&z, cd.coeffs);
    let mut dt = z.scale(cd.ds * dmu) + dz.scale(cd.coeffs.s_over_lambda);
    dt.z0 = cd.dc * dmu;
    Ok((t, dt))
}

/// Minimum-modulus root of a real polynomial (ascending coefficients),
/// found with the Durand–Kerner iteration.
pub fn min_root_modulus(coeffs: &[f64]) -> f64 {
    let n = coeffs.len() - 1;
    assert!(n >= 1 && coeffs[n] != 0.0, "polynomial must have positive degree");
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let p = poly_real(&monic, roots[i]);
            let mut denom = ONE;
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = p / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    roots.iter().map(|r| r.norm()).fold(f64::INFINITY, f64::min)
}

/// Smallest root modulus `|z*|` of the scheme's generating polynomial
/// `F(z)`; `None` for the exponential schemes, which have no poles.
pub fn stability_radius(kind: SchemeKind) -> Option<f64> {
    static PADE3_RADIUS: OnceLock<f64> = OnceLock::new();
    static PADE4_RADIUS: OnceLock<f64> = OnceLock::new();
    match kind {
        SchemeKind::Es6 | SchemeKind::Bo2 => None,
        SchemeKind::Es6Cayley | SchemeKind::Cn2 => Some(2.0),
        SchemeKind::Es6Pade3 => Some(*PADE3_RADIUS.get_or_init(|| min_root_modulus(PADE3.generator))),
        SchemeKind::Es6Pade4 => Some(*PADE4_RADIUS.get_or_init(|| min_root_modulus(PADE4.generator))),
    }
}

/// Outcome of the `|z*| > |λ|` applicability test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApplicabilityReport {
    pub z_star: Option<f64>,
    pub max_lambda: f64,
    /// `max |λ| / |z*|`; zero when the scheme has no poles.
    pub worst_ratio: f64,
    pub pass: bool,
}

/// Checks `|λ| < |z*|` over every node and sampled spectral point.
pub fn applicability(
    kind: SchemeKind,
    zpolys: &[ZPoly],
    spectral_points: &[Complex64],
    tau: f64,
) -> ApplicabilityReport {
    let mut max_lambda = 0.0f64;
    for zeta in spectral_points {
        let z = *zeta * tau;
        for p in zpolys {
            max_lambda = max_lambda.max(p.eval(z).lambda_sq().norm().sqrt());
        }
    }
    match stability_radius(kind) {
        None => ApplicabilityReport { z_star: None, max_lambda, worst_ratio: 0.0, pass: true },
        Some(r) => {
            let worst_ratio = max_lambda / r;
            ApplicabilityReport { z_star: Some(r), max_lambda, worst_ratio, pass: worst_ratio < 1.0 }
        }
    }
}

/// Coefficient threshold below which `ES6` switches to series.
pub const ES6_SERIES_THRESHOLD: f64 = SMALL_LAMBDA;
