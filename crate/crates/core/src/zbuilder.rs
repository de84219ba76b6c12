//! Per-node one-step generator `Z` as polynomials in the dimensionless
//! spectral variable `z = τζ`.
//!
//! For the ZS matrix `Q = [[-iζ, q], [r, iζ]]` the sixth-order expansion
//! `Z = τZ₁ + τ³Z₃ + τ⁵Z₅` collapses to closed forms whose Pauli
//! coordinates are polynomials in `z` with node-dependent coefficients.
//! All potential values are made dimensionless: the k-th derivative enters
//! as `τ^{k+1} q^{(k)}`.
//!
//! [`build_generic_z`] assembles the same matrix from explicit commutators
//! and serves as an independent check of the closed forms.

use num_complex::Complex64;

use crate::pauli::Mat2;
use crate::stencil::DerivativeTable;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Maximum polynomial degree of any coordinate (the Cayley `z⁵` term).
pub const MAX_DEGREE: usize = 5;

/// Dimensionless potential data at one node: index `k` holds
/// `τ^{k+1} q^{(k)}` (and likewise for `r`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeData {
    pub q: [Complex64; 5],
    pub r: [Complex64; 5],
}

impl NodeData {
    /// Node data for the ZS system, `r = -σ q*`.
    pub fn from_grid(
        node: usize,
        samples: &[Complex64],
        table: &DerivativeTable,
        tau: f64,
        sigma: f64,
    ) -> Self {
        let d = table.at(node);
        let q = [
            samples[node] * tau,
            d[0] * tau.powi(2),
            d[1] * tau.powi(3),
            d[2] * tau.powi(4),
            d[3] * tau.powi(5),
        ];
        let r = q.map(|v| -v.conj() * sigma);
        Self { q, r }
    }

    /// General `(q, r)` pair with independent `r`, already dimensionless.
    pub fn general(q: [Complex64; 5], r: [Complex64; 5]) -> Self {
        Self { q, r }
    }
}

/// Which closed form produced a [`ZPoly`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZFamily {
    /// `Z = τQ` (second-order schemes).
    Plain,
    /// Sixth-order exponential expansion (also used by the Padé schemes).
    Exponential,
    /// Sixth-order expansion matched to the canonical Cayley transform.
    Cayley,
}

/// Traceless `Z(z) = z1(z) σ1 + z2(z) σ2 + z3(z) σ3` with polynomial
/// coordinates, coefficients in ascending powers of `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZPoly {
    pub z1: [Complex64; MAX_DEGREE + 1],
    pub z2: [Complex64; MAX_DEGREE + 1],
    pub z3: [Complex64; MAX_DEGREE + 1],
    pub degree: usize,
}

#[inline]
fn horner(c: &[Complex64], deg: usize, z: Complex64) -> Complex64 {
    let mut acc = c[deg];
    for k in (0..deg).rev() {
        acc = acc * z + c[k];
    }
    acc
}

#[inline]
fn horner_with_derivative(c: &[Complex64], deg: usize, z: Complex64) -> (Complex64, Complex64) {
    let mut p = c[deg];
    let mut dp = ZERO;
    for k in (0..deg).rev() {
        dp = dp * z + p;
        p = p * z + c[k];
    }
    (p, dp)
}

impl ZPoly {
    /// Converts entry polynomials `Z11`, `Z12`, `Z21` to Pauli coordinates.
    pub fn from_entries(
        z11: [Complex64; MAX_DEGREE + 1],
        z12: [Complex64; MAX_DEGREE + 1],
        z21: [Complex64; MAX_DEGREE + 1],
    ) -> Self {
        let mut z1 = [ZERO; MAX_DEGREE + 1];
        let mut z2 = [ZERO; MAX_DEGREE + 1];
        for k in 0..=MAX_DEGREE {
            z1[k] = (z12[k] + z21[k]) * 0.5;
            z2[k] = I * (z12[k] - z21[k]) * 0.5;
        }
        let mut p = Self { z1, z2, z3: z11, degree: MAX_DEGREE };
        p.degree = p.actual_degree();
        p
    }

    fn actual_degree(&self) -> usize {
        (0..=MAX_DEGREE)
            .rev()
            .find(|&k| self.z1[k] != ZERO || self.z2[k] != ZERO || self.z3[k] != ZERO)
            .unwrap_or(0)
    }

    /// Degree of each coordinate `[z1, z2, z3]`.
    pub fn coordinate_degrees(&self) -> [usize; 3] {
        let deg = |c: &[Complex64; MAX_DEGREE + 1]| {
            (0..=MAX_DEGREE).rev().find(|&k| c[k] != ZERO).unwrap_or(0)
        };
        [deg(&self.z1), deg(&self.z2), deg(&self.z3)]
    }

    /// `Z` at `z = τζ`.
    #[inline]
    pub fn eval(&self, z: Complex64) -> Mat2 {
        Mat2::traceless(
            horner(&self.z1, self.degree, z),
            horner(&self.z2, self.degree, z),
            horner(&self.z3, self.degree, z),
        )
    }

    /// `Z` and `dZ/dz` at `z`.
    #[inline]
    pub fn eval_with_derivative(&self, z: Complex64) -> (Mat2, Mat2) {
        let (a1, b1) = horner_with_derivative(&self.z1, self.degree, z);
        let (a2, b2) = horner_with_derivative(&self.z2, self.degree, z);
        let (a3, b3) = horner_with_derivative(&self.z3, self.degree, z);
        (Mat2::traceless(a1, a2, a3), Mat2::traceless(b1, b2, b3))
    }

    pub fn build(family: ZFamily, node: &NodeData) -> Self {
        match family {
            ZFamily::Plain => build_z_plain(node),
            ZFamily::Exponential => build_z_exponential(node),
            ZFamily::Cayley => build_z_cayley(node),
        }
    }
}

/// `Z = τQ`: `Z11 = -iz`, `Z12 = τq`, `Z21 = τr`.
pub fn build_z_plain(node: &NodeData) -> ZPoly {
    let mut z11 = [ZERO; 6];
    let mut z12 = [ZERO; 6];
    let mut z21 = [ZERO; 6];
    z11[1] = -I;
    z12[0] = node.q[0];
    z21[0] = node.r[0];
    ZPoly::from_entries(z11, z12, z21)
}

/// Closed form of the sixth-order exponential generator.
pub fn build_z_exponential(node: &NodeData) -> ZPoly {
    let [q, q1, q2, q3, q4] = node.q;
    let [r, r1, r2, r3, r4] = node.r;
    let qr = q * r;
    let w = r * q1 - q * r1;

    let mut z11 = [ZERO; 6];
    z11[2] = w / 180.0;
    z11[1] = -I * (1.0 - (r * q2 + q * r2) / 360.0 + q1 * r1 / 60.0);
    z11[0] = (15.0 - qr) * w / 180.0 + (r * q3 - q * r3 + q1 * r2 - r1 * q2) / 480.0;

    let mut z12 = [ZERO; 6];
    z12[3] = I * q1 / 90.0;
    z12[2] = -q2 / 180.0;
    z12[1] = I * (q1 / 6.0 + q3 / 240.0 - qr * q1 / 90.0);
    z12[0] = q + q * (r * q2 - q * r2) / 360.0 - w * q1 / 120.0 + q2 / 24.0 + q4 / 1920.0;

    let mut z21 = [ZERO; 6];
    z21[3] = -I * r1 / 90.0;
    z21[2] = -r2 / 180.0;
    z21[1] = -I * (r1 / 6.0 + r3 / 240.0 - qr * r1 / 90.0);
    z21[0] = r + r * (q * r2 - r * q2) / 360.0 + w * r1 / 120.0 + r2 / 24.0 + r4 / 1920.0;

    ZPoly::from_entries(z11, z12, z21)
}

/// Closed form of the sixth-order generator for the canonical Cayley
/// transform `(I + Z/2)(I - Z/2)⁻¹`.
pub fn build_z_cayley(node: &NodeData) -> ZPoly {
    let [q, q1, q2, q3, q4] = node.q;
    let [r, r1, r2, r3, r4] = node.r;
    let qr = q * r;

    let mut z11 = [ZERO; 6];
    z11[5] = -I / 120.0;
    z11[3] = I * (qr - 5.0) / 60.0;
    z11[2] = -(q * r1 - r * q1) / 80.0;
    z11[1] = -I
        * (4.0 * qr * qr - 40.0 * qr - 3.0 * q * r2 + 8.0 * q1 * r1 - 3.0 * r * q2 + 480.0)
        / 480.0;
    z11[0] = (6.0 * q * qr * r1 - 6.0 * q1 * qr * r - 40.0 * q * r1 - r3 * q
        + 40.0 * q1 * r
        + q1 * r2
        - r1 * q2
        + q3 * r)
        / 480.0;

    let mut z12 = [ZERO; 6];
    z12[4] = q / 120.0;
    z12[3] = I * q1 / 40.0;
    z12[2] = q / 12.0 - q2 / 480.0 - q * qr / 60.0;
    z12[1] = I * (q1 / 6.0 - qr * q1 / 40.0 + q3 / 240.0);
    z12[0] = -q1 * q1 * r / 120.0 + q1 * r1 * q / 120.0 - qr * q2 / 240.0 - q * qr / 12.0
        + q * qr * qr / 120.0
        + q4 / 1920.0
        + q2 / 24.0
        + q
        - q * q * r2 / 160.0;

    let mut z21 = [ZERO; 6];
    z21[4] = r / 120.0;
    z21[3] = -I * r1 / 40.0;
    z21[2] = r / 12.0 - r2 / 480.0 - r * qr / 60.0;
    z21[1] = -I * (r1 / 6.0 - qr * r1 / 40.0 + r3 / 240.0);
    z21[0] = -r1 * r1 * q / 120.0 + q1 * r1 * r / 120.0 - qr * r2 / 240.0 - r * qr / 12.0
        + r * qr * qr / 120.0
        + r4 / 1920.0
        + r2 / 24.0
        + r
        - r * r * q2 / 160.0;

    ZPoly::from_entries(z11, z12, z21)
}

/// Free coefficients of the sixth-order generalized-Cayley generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KCoeffs {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub k5: f64,
}

impl KCoeffs {
    /// Third-order diagonal Padé (`a2 = 1/10`, `a3 = 1/120`, `a4 = a5 = 0`),
    /// which reproduces the exponential generator.
    pub const PADE3: Self =
        Self { k1: 0.0, k2: 1.0 / 720.0, k3: 0.0, k4: 1.0 / 720.0, k5: 0.0 };

    /// Canonical Cayley transform (`a2 = a3 = a4 = a5 = 0`).
    pub const CAYLEY: Self = Self {
        k1: -1.0 / 12.0,
        k2: -1.0 / 480.0,
        k3: -1.0 / 96.0,
        k4: 1.0 / 120.0,
        k5: 1.0 / 120.0,
    };

    /// Coefficients for `F(z) = 1 + z/2 + a2 z² + a3 z³ + a4 z⁴ + a5 z⁵ + …`.
    pub fn from_polynomial(a2: f64, a3: f64, a4: f64, a5: f64) -> Self {
        let k1 = a2 - 2.0 * a3 - 1.0 / 12.0;
        Self {
            k1,
            k2: (k1 + 1.0 / 30.0) / 24.0,
            k3: k1 / 8.0,
            k4: -(k1 - 1.0 / 60.0) / 12.0,
            k5: 1.0 / 120.0 - a2 / 4.0 + a3 / 2.0 + 2.0 * a2 * a2 - 10.0 * a2 * a3
                + 12.0 * a3 * a3
                + a4
                - 2.0 * a5,
        }
    }
}

/// Matrix terms of the generic expansion at one node and spectral point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenericZTerms {
    pub z1: Mat2,
    pub z3: Mat2,
    pub z5: Mat2,
}

impl GenericZTerms {
    /// Assembles `Z₁`, `Z₃`, `Z₅` (each already carrying its power of τ)
    /// from explicit matrix products and commutators `[A, B] = AB − BA`.
    pub fn assemble(node: &NodeData, k: &KCoeffs, z: Complex64) -> Self {
        let entry = |m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64| {
            Mat2::from_entries(m11, m12, m21, m22)
        };
        let q0 = entry(-I * z, node.q[0], node.r[0], I * z);
        let d = |k: usize| entry(ZERO, node.q[k], node.r[k], ZERO);
        let (q1, q2, q3, q4) = (d(1), d(2), d(3), d(4));
        let c = |a: &Mat2, b: &Mat2| a.commutator(b);
        let cube = q0 * q0 * q0;

        let z3 = q2.scale_re(1.0 / 24.0) + c(&q1, &q0).scale_re(1.0 / 12.0) + cube.scale_re(k.k1);
        let z5 = q4.scale_re(1.0 / 1920.0)
            + c(&q3, &q0).scale_re(1.0 / 480.0)
            + c(&q1, &q2).scale_re(1.0 / 480.0)
            + c(&c(&q0, &q1), &q1).scale_re(1.0 / 240.0)
            + c(&c(&q2, &q0), &q0).scale_re(k.k2)
            + (q0 * q2 * q0).scale_re(k.k3)
            + c(&cube, &q1).scale_re(k.k4)
            + c(&(q0 * q1 * q0), &q0).scale_re(1.0 / 240.0)
            + (cube * q0 * q0).scale_re(k.k5);
        Self { z1: q0, z3, z5 }
    }

    pub fn total(&self) -> Mat2 {
        self.z1 + self.z3 + self.z5
    }
}

/// Generic-formula generator at `ζ` for the node of a ZS grid.
#[allow(clippy::too_many_arguments)]
pub fn build_generic_z(
    node: usize,
    k: &KCoeffs,
    samples: &[Complex64],
    table: &DerivativeTable,
    tau: f64,
    sigma: f64,
    zeta: Complex64,
) -> Mat2 {
    let data = NodeData::from_grid(node, samples, table, tau, sigma);
    GenericZTerms::assemble(&data, k, zeta * tau).total()
}
