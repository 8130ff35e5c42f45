//! Plumbing strings and Hirzebruch–Jung continued fractions.
//!
//! A [`PlumbingString`] is the list of framing coefficients `(a_1, ..., a_n)`
//! of a linear chain of unknots. Positions are 1-based throughout, matching
//! the numbering of the chain components.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlumbingString(Vec<i64>);

/// The block `(2^{[m-1]}, m+2)` repeated `times` times; negative counts are empty.
fn repeat_block(m: i64, times: i64) -> Vec<i64> {
    let mut out = Vec::new();
    for _ in 0..times.max(0) {
        out.extend(std::iter::repeat_n(2, (m - 1) as usize));
        out.push(m + 2);
    }
    out
}

fn check_family_params(k: i64, m: i64) -> Result<()> {
    if k < -1 {
        return Err(Error::InvalidParameter(format!("k must be >= -1, got {k}")));
    }
    if m < 1 {
        return Err(Error::InvalidParameter(format!("m must be >= 1, got {m}")));
    }
    Ok(())
}

impl PlumbingString {
    pub fn new(entries: Vec<i64>) -> Self {
        Self(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `s_{k,m} = (2, (2^{[m-1]}, m+2)^{[k+1]}, 2, 2, (2^{[m-1]}, m+2)^{[k+1]})`.
    pub fn s(k: i64, m: i64) -> Result<Self> {
        check_family_params(k, m)?;
        let block = repeat_block(m, k + 1);
        let mut v = vec![2];
        v.extend_from_slice(&block);
        v.extend([2, 2]);
        v.extend_from_slice(&block);
        Ok(Self(v))
    }

    /// `s'_{k,m}`: `s_{k,m}` with the middle `(2, 2)` replaced by `(1, 2)`.
    pub fn s_prime(k: i64, m: i64) -> Result<Self> {
        check_family_params(k, m)?;
        let block = repeat_block(m, k + 1);
        let mut v = vec![2];
        v.extend_from_slice(&block);
        v.extend([1, 2]);
        v.extend_from_slice(&block);
        Ok(Self(v))
    }

    /// `s''_{k,m} = (2^{[m-1]}, 1, m+2, B^{[k]}, 2^{[m]}, 1, m+2, B^{[k]})`
    /// with `B = (2^{[m-1]}, m+2)`.
    pub fn s_double_prime(k: i64, m: i64) -> Result<Self> {
        check_family_params(k, m)?;
        let block = repeat_block(m, k);
        let twos = |n: i64| std::iter::repeat_n(2, n as usize);
        let mut v: Vec<i64> = twos(m - 1).collect();
        v.extend([1, m + 2]);
        v.extend_from_slice(&block);
        v.extend(twos(m));
        v.extend([1, m + 2]);
        v.extend_from_slice(&block);
        Ok(Self(v))
    }

    fn require_hj_admissible(&self) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::EmptyString);
        }
        match self.0.iter().position(|&a| a < 2) {
            Some(i) => Err(Error::EntryBelowTwo {
                position: i + 1,
                value: self.0[i],
            }),
            None => Ok(()),
        }
    }

    /// `[a_1, ..., a_n] = a_1 - 1/(a_2 - 1/(... - 1/a_n))`, folded from the right.
    pub fn hj_evaluate(&self) -> Result<Fraction> {
        self.require_hj_admissible()?;
        let mut iter = self.0.iter().rev();
        let last = *iter.next().expect("non-empty");
        let mut value = Fraction::from_integer(BigInt::from(last));
        for &a in iter {
            value = Fraction::from_integer(BigInt::from(a)).sub(&value.recip()?);
        }
        Ok(value)
    }

    /// Inverse of [`hj_evaluate`](Self::hj_evaluate) by ceiling division:
    /// `a_1 = ceil(p/q)`, then recurse on `q / (a_1 q - p)`.
    pub fn hj_expand(p: &BigInt, q: &BigInt) -> Result<Self> {
        if !(q >= &BigInt::one() && p > q) {
            return Err(Error::InvalidFraction(format!(
                "need p > q >= 1, got {p}/{q}"
            )));
        }
        if !p.gcd(q).is_one() {
            return Err(Error::InvalidFraction(format!(
                "{p} and {q} are not coprime"
            )));
        }
        let (mut p, mut q) = (p.clone(), q.clone());
        let mut out = Vec::new();
        while !q.is_zero() {
            let a = p.div_ceil(&q);
            let next = &a * &q - &p;
            out.push(a.to_i64().ok_or_else(|| Error::Overflow(a.to_string()))?);
            p = q;
            q = next;
        }
        Ok(Self(out))
    }

    /// Riemenschneider point rule: row `i` holds `a_i - 1` points and starts
    /// in the column where row `i-1` ends; the dual entries are the column
    /// counts plus one.
    pub fn riemenschneider_dual(&self) -> Result<Self> {
        self.require_hj_admissible()?;
        let width: i64 = 1 + self.0.iter().map(|a| a - 2).sum::<i64>();
        let mut columns = vec![0i64; width as usize];
        let mut start = 0usize;
        for &a in &self.0 {
            let points = (a - 1) as usize;
            for c in &mut columns[start..start + points] {
                *c += 1;
            }
            start += points - 1;
        }
        Ok(Self(columns.into_iter().map(|c| c + 1).collect()))
    }

    /// Blow down the `1`-framed component at `position` (1-based).
    pub fn blow_down_once(&self, position: usize) -> Result<Self> {
        let n = self.0.len();
        if position == 0 || position > n {
            return Err(Error::PositionOutOfRange { position, len: n });
        }
        let i = position - 1;
        if self.0[i] != 1 {
            return Err(Error::NotBlowDownable {
                position,
                value: self.0[i],
            });
        }
        let mut v = self.0.clone();
        if i + 1 < n {
            v[i + 1] -= 1;
        }
        if i > 0 {
            v[i - 1] -= 1;
        }
        v.remove(i);
        Ok(Self(v))
    }

    /// Repeatedly blow down the leftmost `1` until the string is `(0)` or no
    /// `1` remains.
    pub fn blow_down_to_zero(&self) -> BlowDown {
        let zero = [0i64];
        let mut current = self.clone();
        let mut positions = Vec::new();
        let mut states = vec![current.clone()];
        while current.0 != zero {
            let Some(i) = current.0.iter().position(|&a| a == 1) else {
                break;
            };
            current = current.blow_down_once(i + 1).expect("entry is 1");
            positions.push(i + 1);
            states.push(current.clone());
        }
        BlowDown {
            reaches_zero: current.0 == zero,
            positions,
            states,
        }
    }

    pub fn blows_down_to_zero(&self) -> bool {
        self.blow_down_to_zero().reaches_zero
    }
}

/// Result of [`PlumbingString::blow_down_to_zero`]: the 1-based positions
/// blown down and every intermediate string, start included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowDown {
    pub reaches_zero: bool,
    pub positions: Vec<usize>,
    pub states: Vec<PlumbingString>,
}

impl fmt::Display for PlumbingString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Parses `2,(2^2,5)^3,2,2`.
///
/// ```text
/// LIST  := ENTRY ("," ENTRY)*
/// ENTRY := ATOM ("^" COUNT)?
/// ATOM  := INT | "(" LIST ")"
/// ```
///
/// `INT` may carry a leading `-`; `COUNT` is a non-negative integer. Outer
/// parentheses around the whole list are accepted. Whitespace is ignored.
impl FromStr for PlumbingString {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut parser = Parser {
            bytes: text.as_bytes(),
            pos: 0,
        };
        parser.skip_ws();
        if parser.at_end() {
            return Ok(Self(Vec::new()));
        }
        let entries = parser.list()?;
        parser.skip_ws();
        if !parser.at_end() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(Self(entries))
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn eat(&mut self, byte: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn list(&mut self) -> Result<Vec<i64>> {
        let mut out = self.entry()?;
        while self.eat(b',') {
            out.extend(self.entry()?);
        }
        Ok(out)
    }

    fn entry(&mut self) -> Result<Vec<i64>> {
        let atom = if self.eat(b'(') {
            let inner = self.list()?;
            if !self.eat(b')') {
                return Err(self.error("expected ')'"));
            }
            inner
        } else {
            vec![self.integer(true)?]
        };
        if self.eat(b'^') {
            let count = self.integer(false)?;
            let total = atom.len().saturating_mul(count as usize);
            if total > 1 << 24 {
                return Err(self.error("expansion too large"));
            }
            Ok(atom.iter().copied().cycle().take(total).collect())
        } else {
            Ok(atom)
        }
    }

    fn integer(&mut self, signed: bool) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if signed && self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        text.parse::<i64>().map_err(|_| Error::Parse {
            offset: start,
            message: format!("integer out of range: {text}"),
        })
    }
}

/// A rational number kept in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fraction {
    #[serde(with = "crate::bigserde")]
    num: BigInt,
    #[serde(with = "crate::bigserde")]
    den: BigInt,
}

impl Fraction {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidFraction("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Ok(Self { num, den })
    }

    pub fn from_integer(n: BigInt) -> Self {
        Self {
            num: n,
            den: BigInt::one(),
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            &self.num * &other.den - &other.num * &self.den,
            &self.den * &other.den,
        )
        .expect("product of non-zero denominators")
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}
