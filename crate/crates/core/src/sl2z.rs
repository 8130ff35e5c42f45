//! `SL_2(Z)`-framed chain links.
//!
//! The component framed `a` carries the gluing matrix `A_a = ((a, -1), (1, 0))`.
//! The chain product `A_{a_1} ... A_{a_n}` has first column `(p, q)` and the
//! surgered manifold is `L(p, p - q)` up to orientation-preserving
//! diffeomorphism. Coordinates are with respect to the basis `(l_1, m_1)` of
//! the first glued-in solid torus.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::strings::PlumbingString;
use crate::{Error, Result};

/// Row-major 2×2 integer matrix `((a, b), (c, d))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

/// Column vector `(p, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vec2 {
    pub p: BigInt,
    pub q: BigInt,
}

impl Vec2 {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        Self {
            p: p.into(),
            q: q.into(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            p: -&self.p,
            q: -&self.q,
        }
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

impl Mat2 {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    /// `A_m = ((m, -1), (1, 0))`.
    pub fn framing(m: i64) -> Self {
        Self::new(m, -1, 1, 0)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn first_column(&self) -> Vec2 {
        Vec2 {
            p: self.a.clone(),
            q: self.c.clone(),
        }
    }

    pub fn second_column(&self) -> Vec2 {
        Vec2 {
            p: self.b.clone(),
            q: self.d.clone(),
        }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2 {
            p: &self.a * &v.p + &self.b * &v.q,
            q: &self.c * &v.p + &self.d * &v.q,
        }
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}, {}), ({}, {}))", self.a, self.b, self.c, self.d)
    }
}

/// `A_{a_1} ... A_{a_n}`, multiplied left to right. The empty string gives
/// the identity.
pub fn string_product(s: &PlumbingString) -> Mat2 {
    s.entries()
        .iter()
        .fold(Mat2::identity(), |acc, &a| &acc * &Mat2::framing(a))
}

/// Coordinates of the meridian `mu_t` (1-based): the second column of
/// `A_{a_1} ... A_{a_t}`.
pub fn meridian_coords(s: &PlumbingString, t: usize) -> Result<Vec2> {
    if t == 0 || t > s.len() {
        return Err(Error::PositionOutOfRange {
            position: t,
            len: s.len(),
        });
    }
    let prefix = PlumbingString::new(s.entries()[..t].to_vec());
    Ok(string_product(&prefix).second_column())
}

/// A lens space `L(p, q)` in normal form: `0 <= q < p` with `gcd(p, q) = 1`
/// for `p >= 2`; `L(1, 0)` is `S^3` and `L(0, 1)` is `S^1 x S^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLens")]
pub struct LensSpace {
    #[serde(with = "crate::bigserde")]
    p: BigInt,
    #[serde(with = "crate::bigserde")]
    q: BigInt,
}

impl LensSpace {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        if p.is_negative() {
            return Err(Error::InvalidParameter(format!(
                "lens space order must be >= 0, got {p}"
            )));
        }
        if p.is_zero() {
            if q.abs().is_one() {
                return Ok(Self::s1_x_s2());
            }
            return Err(Error::InvalidParameter(format!(
                "L(0, {q}) requires q = ±1"
            )));
        }
        let q = q.mod_floor(&p);
        if !p.gcd(&q).is_one() {
            return Err(Error::InvalidParameter(format!(
                "L({p}, {q}): p and q not coprime"
            )));
        }
        Ok(Self { p, q })
    }

    pub fn s1_x_s2() -> Self {
        Self {
            p: BigInt::zero(),
            q: BigInt::one(),
        }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// Orientation-preserving equivalence: same `p` and `q ≡ q'` or
    /// `q q' ≡ 1 (mod p)`.
    pub fn is_equivalent(&self, other: &LensSpace) -> bool {
        if self.p != other.p {
            return false;
        }
        if self.q == other.q {
            return true;
        }
        !self.p.is_zero() && (&self.q * &other.q).mod_floor(&self.p).is_one()
    }

    /// Finds coprime `p > q >= 1` with `self ≅ L(p^2, pq - 1)`.
    ///
    /// Requires `self.p` to be a perfect square `P = p^2`. Writing `Q` for
    /// either `self.q` or its inverse mod `P`, the equation `Q ≡ pq - 1`
    /// forces `p | Q + 1` and `q ≡ (Q + 1)/p (mod p)`. Both
    /// representatives `q` and `p - q` describe the same ball; the smaller
    /// one is returned.
    pub fn as_p2_pq_minus_1(&self) -> Option<(BigInt, BigInt)> {
        let big_p = &self.p;
        if big_p < &BigInt::from(4) {
            return None;
        }
        let p = big_p.sqrt();
        if &(&p * &p) != big_p {
            return None;
        }
        let mut candidates = vec![self.q.clone()];
        if let Some(inv) = mod_inverse(&self.q, big_p) {
            candidates.push(inv);
        }
        candidates
            .into_iter()
            .filter_map(|big_q| {
                let shifted = big_q + 1u32;
                if !shifted.is_multiple_of(&p) {
                    return None;
                }
                let q = (shifted / &p).mod_floor(&p);
                (!q.is_zero() && p.gcd(&q).is_one()).then_some(q)
            })
            .map(|q| {
                let other = &p - &q;
                q.min(other)
            })
            .min()
            .map(|q| (p.clone(), q))
    }
}

#[derive(Deserialize)]
struct RawLens {
    #[serde(with = "crate::bigserde")]
    p: BigInt,
    #[serde(with = "crate::bigserde")]
    q: BigInt,
}

impl TryFrom<RawLens> for LensSpace {
    type Error = Error;

    fn try_from(raw: RawLens) -> Result<Self> {
        Self::new(raw.p, raw.q)
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({}, {})", self.p, self.q)
    }
}

/// `x^{-1} mod n` for `n >= 2`, if it exists.
pub(crate) fn mod_inverse(x: &BigInt, n: &BigInt) -> Option<BigInt> {
    let ext = x.mod_floor(n).extended_gcd(n);
    ext.gcd.is_one().then(|| ext.x.mod_floor(n))
}

/// Reads `(p, q)` off the first column of the chain product and returns
/// `L(|p|, p - q)`.
pub fn lens_from_string(s: &PlumbingString) -> LensSpace {
    let Vec2 { mut p, mut q } = string_product(s).first_column();
    if p.is_negative() {
        p = -p;
        q = -q;
    }
    let r = &p - q;
    LensSpace::new(p, r).expect("first column of an SL2(Z) matrix is primitive")
}
