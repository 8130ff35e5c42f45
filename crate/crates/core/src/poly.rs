//! Dense univariate polynomials over `Z` and 2×2 matrices of them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::sl2z::Mat2;

/// Polynomial in `x` with coefficients stored constant term first.
///
/// Canonical form: no trailing zero coefficients, so the zero polynomial is
/// the empty list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "RawPoly", into = "RawPoly")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct RawPoly {
    #[serde(with = "crate::bigserde::vec")]
    coeffs: Vec<BigInt>,
}

impl From<RawPoly> for IntPoly {
    fn from(raw: RawPoly) -> Self {
        IntPoly::from_coeffs(raw.coeffs)
    }
}

impl From<IntPoly> for RawPoly {
    fn from(p: IntPoly) -> Self {
        RawPoly { coeffs: p.coeffs }
    }
}

impl IntPoly {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    /// Convenience constructor from small coefficients, constant term first.
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    /// Horner evaluation at `x0`.
    pub fn eval_at(&self, x0: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x0 + c)
    }

    /// Multiplication by `x`.
    pub fn shift(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigInt::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigInt::zero();
        let coeffs = (0..n)
            .map(|i| {
                f(
                    self.coeffs.get(i).unwrap_or(&zero),
                    rhs.coeffs.get(i).unwrap_or(&zero),
                )
            })
            .collect();
        Self::from_coeffs(coeffs)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(coeffs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            let show_coeff = deg == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match deg {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{deg}")?,
            }
        }
        Ok(())
    }
}

/// Row-major 2×2 matrix over `Z[x]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyMat2 {
    pub a: IntPoly,
    pub b: IntPoly,
    pub c: IntPoly,
    pub d: IntPoly,
}

impl PolyMat2 {
    pub fn new(a: IntPoly, b: IntPoly, c: IntPoly, d: IntPoly) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(
            IntPoly::one(),
            IntPoly::zero(),
            IntPoly::zero(),
            IntPoly::one(),
        )
    }

    pub fn from_integer(m: &Mat2) -> Self {
        Self::new(
            IntPoly::constant(m.a.clone()),
            IntPoly::constant(m.b.clone()),
            IntPoly::constant(m.c.clone()),
            IntPoly::constant(m.d.clone()),
        )
    }

    pub fn det(&self) -> IntPoly {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn eval_at(&self, x0: &BigInt) -> Mat2 {
        Mat2 {
            a: self.a.eval_at(x0),
            b: self.b.eval_at(x0),
            c: self.c.eval_at(x0),
            d: self.d.eval_at(x0),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::identity(), |acc, _| &acc * self)
    }
}

impl Mul for &PolyMat2 {
    type Output = PolyMat2;
    fn mul(self, rhs: &PolyMat2) -> PolyMat2 {
        PolyMat2 {
            a: &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            c: &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            d: &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        }
    }
}

impl fmt::Display for PolyMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}, {}), ({}, {}))", self.a, self.b, self.c, self.d)
    }
}
