//! Dense real polynomials stored in ascending-degree order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for each synthetic-division stage in [`RealPoly::deflate`].
pub const DEFLATION_TOL: f64 = 1e-9;

/// A polynomial with real coefficients; `coeffs[j]` multiplies `z^j`.
///
/// Trailing zero coefficients are stripped on construction, so the last
/// stored coefficient is the leading one. The zero polynomial has no
/// coefficients at all.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

/// Which mirror symmetry a self-reciprocal polynomial has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reciprocity {
    /// `coeffs[j] == coeffs[N - j]`, i.e. `P(z) = z^N P(1/z)`.
    Palindromic,
    /// `coeffs[j] == -coeffs[N - j]`, i.e. `P(z) = -z^N P(1/z)`.
    AntiPalindromic,
}

impl Reciprocity {
    pub fn sign(self) -> i8 {
        match self {
            Reciprocity::Palindromic => 1,
            Reciprocity::AntiPalindromic => -1,
        }
    }
}

impl RealPoly {
    /// Builds a polynomial from ascending coefficients.
    ///
    /// Panics if any coefficient is not finite; use [`RealPoly::try_new`]
    /// for untrusted input.
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self::try_new(coeffs).expect("polynomial coefficients must be finite")
    }

    pub fn try_new(mut coeffs: Vec<f64>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "coefficient {bad} is not finite"
            )));
        }
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Ok(Self { coeffs })
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1.0] }
    }

    /// The monomial `c z^k`.
    pub fn monomial(c: f64, k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `(1 - root z)^m`, which vanishes at `1/root`. For `root = ±1` this is
    /// `(1 ∓ z)^m`.
    pub fn linear_power(root: f64, m: u32) -> Self {
        let base = Self::new(vec![1.0, -root]);
        (0..m).fold(Self::one(), |acc, _| &acc * &base)
    }

    /// `1 + z^2 - 2 c z`.
    pub fn circle_quadratic(c: f64) -> Self {
        Self::new(vec![1.0, -2.0 * c, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    /// Coefficient of `z^j`, zero beyond the degree.
    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs.get(j).copied().unwrap_or(0.0)
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `Σ |a_j| |z|^j`, the magnitude scale of a Horner evaluation at `z`.
    pub fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| j as f64 * c)
            .collect();
        Self::new(coeffs)
    }

    /// The `k`-th formal derivative.
    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn multiply(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// `z^k p(z)`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0.0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    /// `p(-z)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| if j % 2 == 1 { -c } else { c })
                .collect(),
        )
    }

    /// Largest coefficient-wise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|j| (self.coeff(j) - other.coeff(j)).abs())
            .fold(0.0, f64::max)
    }

    /// Divides out `(z - root)^multiplicity` by repeated synthetic division.
    ///
    /// Each stage must leave a remainder no larger than
    /// `DEFLATION_TOL * (1 + |p|_∞)`.
    pub fn deflate(&self, root: f64, multiplicity: u32) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let tol = DEFLATION_TOL * (1.0 + self.norm_inf());
        let mut current = self.coeffs.clone();
        for stage in 0..multiplicity as usize {
            if current.len() < 2 {
                return Err(Error::DegreeTooLow {
                    degree: current.len().saturating_sub(1),
                    min: 1,
                });
            }
            let n = current.len() - 1;
            let mut quotient = vec![0.0; n];
            let mut carry = 0.0;
            for k in (1..=n).rev() {
                carry = current[k] + root * carry;
                quotient[k - 1] = carry;
            }
            let remainder = current[0] + root * carry;
            if remainder.abs() > tol {
                return Err(Error::RootNotPresent {
                    root,
                    stage,
                    remainder,
                });
            }
            current = quotient;
        }
        Ok(Self::new(current))
    }

    /// Classifies mirror symmetry of the coefficient list within an absolute
    /// tolerance. Returns `None` for the zero polynomial.
    pub fn self_reciprocal_sign(&self, tol: f64) -> Option<Reciprocity> {
        if self.is_zero() {
            return None;
        }
        let n = self.degree();
        let c = &self.coeffs;
        let within = |sign: f64| (0..=n).all(|j| (c[j] - sign * c[n - j]).abs() <= tol);
        if within(1.0) {
            Some(Reciprocity::Palindromic)
        } else if within(-1.0) {
            Some(Reciprocity::AntiPalindromic)
        } else {
            None
        }
    }
}

impl From<RealPoly> for Vec<f64> {
    fn from(p: RealPoly) -> Self {
        p.coeffs
    }
}

impl TryFrom<Vec<f64>> for RealPoly {
    type Error = Error;

    fn try_from(coeffs: Vec<f64>) -> Result<Self> {
        Self::try_new(coeffs)
    }
}

impl Mul for &RealPoly {
    type Output = RealPoly;

    fn mul(self, rhs: &RealPoly) -> RealPoly {
        self.multiply(rhs)
    }
}

impl Add for &RealPoly {
    type Output = RealPoly;

    fn add(self, rhs: &RealPoly) -> RealPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RealPoly::new((0..len).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &RealPoly {
    type Output = RealPoly;

    fn sub(self, rhs: &RealPoly) -> RealPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RealPoly::new((0..len).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Neg for &RealPoly {
    type Output = RealPoly;

    fn neg(self) -> RealPoly {
        self.scale(-1.0)
    }
}

impl fmt::Display for RealPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match j {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}z")?,
                _ => write!(f, "{a}z^{j}")?,
            }
        }
        Ok(())
    }
}
