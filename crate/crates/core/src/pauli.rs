//! 2×2 complex matrices in the Pauli basis.
//!
//! A matrix is stored as `z0 σ0 + z1 σ1 + z2 σ2 + z3 σ3`. Entry form is
//!
//! ```text
//! [ z0 + z3      z1 - i z2 ]
//! [ z1 + i z2    z0 - z3   ]
//! ```
//!
//! For a traceless `Z` the Cayley–Hamilton identity `Z² = λ² σ0` with
//! `λ² = z1² + z2² + z3²` reduces every analytic function to
//! `F(Z) = F_c(λ) σ0 + (F_s(λ)/λ) Z`, where `F_c` and `F_s` are the even
//! and odd parts of `F`. Both `F_c` and `F_s/λ` are even in `λ`, so the
//! square-root branch never matters.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Below this |λ| the hyperbolic coefficients switch to truncated series.
pub const SMALL_LAMBDA: f64 = 1e-4;

/// 2×2 complex matrix in Pauli coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2 {
    pub z0: Complex64,
    pub z1: Complex64,
    pub z2: Complex64,
    pub z3: Complex64,
}

impl Mat2 {
    pub const fn new(z0: Complex64, z1: Complex64, z2: Complex64, z3: Complex64) -> Self {
        Self { z0, z1, z2, z3 }
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ZERO)
    }

    /// The Pauli matrix `σ_k`, `k ∈ 0..4`.
    pub fn sigma(k: usize) -> Self {
        let mut m = Self::zero();
        match k {
            0 => m.z0 = ONE,
            1 => m.z1 = ONE,
            2 => m.z2 = ONE,
            3 => m.z3 = ONE,
            _ => panic!("Pauli index out of range: {k}"),
        }
        m
    }

    /// Traceless matrix `z1 σ1 + z2 σ2 + z3 σ3`.
    pub const fn traceless(z1: Complex64, z2: Complex64, z3: Complex64) -> Self {
        Self::new(ZERO, z1, z2, z3)
    }

    /// Pauli decomposition of `[[m11, m12], [m21, m22]]`.
    pub fn from_entries(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Self {
            z0: (m11 + m22) * 0.5,
            z1: (m12 + m21) * 0.5,
            z2: I * (m12 - m21) * 0.5,
            z3: (m11 - m22) * 0.5,
        }
    }

    /// Row-major entries `[[m11, m12], [m21, m22]]`.
    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        [
            [self.z0 + self.z3, self.z1 - I * self.z2],
            [self.z1 + I * self.z2, self.z0 - self.z3],
        ]
    }

    pub fn m11(&self) -> Complex64 {
        self.z0 + self.z3
    }

    pub fn m12(&self) -> Complex64 {
        self.z1 - I * self.z2
    }

    pub fn m21(&self) -> Complex64 {
        self.z1 + I * self.z2
    }

    pub fn m22(&self) -> Complex64 {
        self.z0 - self.z3
    }

    pub fn trace(&self) -> Complex64 {
        self.z0 * 2.0
    }

    pub fn is_traceless(&self) -> bool {
        self.z0 == ZERO
    }

    /// `z1² + z2² + z3²`, the squared eigenvalue of the traceless part.
    pub fn lambda_sq(&self) -> Complex64 {
        self.z1 * self.z1 + self.z2 * self.z2 + self.z3 * self.z3
    }

    pub fn det(&self) -> Complex64 {
        self.z0 * self.z0 - self.lambda_sq()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(self.z0 * k, self.z1 * k, self.z2 * k, self.z3 * k)
    }

    pub fn scale_re(&self, k: f64) -> Self {
        Self::new(self.z0 * k, self.z1 * k, self.z2 * k, self.z3 * k)
    }

    /// Conjugate transpose. The Pauli matrices are Hermitian, so this
    /// conjugates each coordinate.
    pub fn dagger(&self) -> Self {
        Self::new(self.z0.conj(), self.z1.conj(), self.z2.conj(), self.z3.conj())
    }

    /// Adjugate: `adj(M) M = det(M) σ0`.
    pub fn adjugate(&self) -> Self {
        Self::new(self.z0, -self.z1, -self.z2, -self.z3)
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == ZERO {
            None
        } else {
            Some(self.adjugate().scale(det.inv()))
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries()
            .iter()
            .flatten()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn mul_vec(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let [[a, b], [c, d]] = self.entries();
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    }

    pub fn is_finite(&self) -> bool {
        [self.z0, self.z1, self.z2, self.z3].iter().all(|z| z.is_finite())
    }
}

impl Add for Mat2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.z0 + o.z0, self.z1 + o.z1, self.z2 + o.z2, self.z3 + o.z3)
    }
}

impl AddAssign for Mat2 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Mat2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.z0 - o.z0, self.z1 - o.z1, self.z2 - o.z2, self.z3 - o.z3)
    }
}

impl Neg for Mat2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.z0, -self.z1, -self.z2, -self.z3)
    }
}

impl Mul for Mat2 {
    type Output = Self;

    /// `(a0 + a·σ)(b0 + b·σ) = a0 b0 + a·b + (a0 b + b0 a + i a×b)·σ`.
    fn mul(self, o: Self) -> Self {
        let (a0, a1, a2, a3) = (self.z0, self.z1, self.z2, self.z3);
        let (b0, b1, b2, b3) = (o.z0, o.z1, o.z2, o.z3);
        Self {
            z0: a0 * b0 + a1 * b1 + a2 * b2 + a3 * b3,
            z1: a0 * b1 + b0 * a1 + I * (a2 * b3 - a3 * b2),
            z2: a0 * b2 + b0 * a2 + I * (a3 * b1 - a1 * b3),
            z3: a0 * b3 + b0 * a3 + I * (a1 * b2 - a2 * b1),
        }
    }
}

/// Pauli decomposition of a matrix given by entries.
pub fn decompose(m: [[Complex64; 2]; 2]) -> Mat2 {
    Mat2::from_entries(m[0][0], m[0][1], m[1][0], m[1][1])
}

/// Principal square root of `z1² + z2² + z3²`.
///
/// Either root is acceptable to every consumer in this crate: all
/// coefficient functions are even in `λ` or divide the odd part by `λ`.
pub fn eigen_lambda(z: &Mat2) -> Complex64 {
    debug_assert!(z.is_traceless(), "eigen_lambda expects a traceless matrix");
    z.lambda_sq().sqrt()
}

/// Even part `c(λ)` and odd part over `λ` of a scalar function, ready to be
/// lifted to a traceless matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvenOddCoeffs {
    pub c: Complex64,
    pub s_over_lambda: Complex64,
}

impl EvenOddCoeffs {
    pub fn new(c: Complex64, s_over_lambda: Complex64) -> Self {
        Self { c, s_over_lambda }
    }

    /// `c² − λ² (s/λ)²`; equals one for Cayley-type functions.
    pub fn cayley_defect(&self, lambda_sq: Complex64) -> Complex64 {
        self.c * self.c - lambda_sq * self.s_over_lambda * self.s_over_lambda - ONE
    }

    /// `cosh λ` and `sinh λ / λ` as functions of `μ = λ²`.
    pub fn exponential(mu: Complex64) -> Self {
        if mu.norm() < SMALL_LAMBDA * SMALL_LAMBDA {
            Self {
                c: ONE + mu * (0.5 + mu * (1.0 / 24.0 + mu / 720.0)),
                s_over_lambda: ONE + mu * (1.0 / 6.0 + mu * (1.0 / 120.0 + mu / 5040.0)),
            }
        } else {
            let lambda = mu.sqrt();
            Self { c: lambda.cosh(), s_over_lambda: lambda.sinh() / lambda }
        }
    }
}

/// `c σ0 + (s/λ) Z`.
pub fn apply_even_odd(z: &Mat2, coeffs: EvenOddCoeffs) -> Mat2 {
    debug_assert!(z.is_traceless(), "apply_even_odd expects a traceless matrix");
    let mut out = z.scale(coeffs.s_over_lambda);
    out.z0 = coeffs.c;
    out
}

/// Matrix exponential of a traceless matrix.
pub fn matexp(z: &Mat2) -> Mat2 {
    apply_even_odd(z, EvenOddCoeffs::exponential(z.lambda_sq()))
}
