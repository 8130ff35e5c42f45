//! Boundary invariants of `B(s_{k,m})` and the symplectic obstruction.
//!
//! `∂B(s_{k,m}) = L(p^2, pq - 1)` with `p = P_{2k+2}(m)` and
//! `q = Q_{2k+1}(m)`. A symplectic embedding of `B_{p,q}` in `CP^2` needs
//! `p` to be a Markov number dividing `q^2 + 9`; for this family
//! `q^2 + 9 = p T_{2k+1}(m) + 8`, which `p` cannot divide once `p > 8`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::seq::{matrix_m, seq_p, seq_q, seq_t};
use crate::sl2z::{lens_from_string, mod_inverse, LensSpace, Mat2, Vec2};
use crate::strings::{Fraction, PlumbingString};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BoundaryInvariants {
    #[serde(with = "crate::bigserde")]
    pub p: BigInt,
    #[serde(with = "crate::bigserde")]
    pub q: BigInt,
}

impl BoundaryInvariants {
    /// `L(p^2, pq - 1)`.
    pub fn lens_space(&self) -> LensSpace {
        LensSpace::new(&self.p * &self.p, &self.p * &self.q - 1u32)
            .expect("p^2 and pq - 1 are coprime")
    }
}

/// `(p, q) = (P_{2k+2}(m), Q_{2k+1}(m))`, cross-checked against the first
/// column of `M_{2k+2} A_2 M_{2k+2}` at `x = m` and against the chain
/// `s_{k,m}` itself. `k = -1` gives `(2, 1)` for every `m`.
pub fn boundary_pq(k: i64, m: i64) -> Result<BoundaryInvariants> {
    if k < -1 || m < 1 {
        return Err(Error::InvalidParameter(format!(
            "need k >= -1 and m >= 1, got k={k} m={m}"
        )));
    }
    let x = BigInt::from(m);
    let l = 2 * k + 2;
    let p = seq_p(l).eval_at(&x);
    let q = seq_q(l - 1).eval_at(&x);

    let mm = matrix_m(l)?.eval_at(&x);
    let column = (&(&mm * &Mat2::framing(2)) * &mm).first_column();
    let expected = Vec2 {
        p: &p * &p,
        q: &p * seq_q(l).eval_at(&x) + 1u32,
    };
    if column != expected {
        return Err(Error::Inconsistent(format!(
            "M A_2 M first column {column} != (p^2, p Q + 1) = {expected} at k={k} m={m}"
        )));
    }

    let inv = BoundaryInvariants { p, q };
    let from_chain = lens_from_string(&PlumbingString::s(k, m)?);
    if !from_chain.is_equivalent(&inv.lens_space()) {
        return Err(Error::Inconsistent(format!(
            "L(s_{{k,m}}) = {from_chain} is not {} at k={k} m={m}",
            inv.lens_space()
        )));
    }
    Ok(inv)
}

pub fn divides_q2_plus_9(p: &BigInt, q: &BigInt) -> bool {
    !p.is_zero() && (q * q + 9u32).is_multiple_of(p)
}

/// Checks `Q_{2k+1}^2 + 9 = P_{2k+2} T_{2k+1} + 8` as polynomials and at `x = m`.
pub fn q2_plus_9_identity_check(k: i64, m: i64) -> bool {
    let l = 2 * k + 1;
    let (q, p, t) = (seq_q(l), seq_p(l + 1), seq_t(l));
    let nine = crate::poly::IntPoly::constant(9);
    let eight = crate::poly::IntPoly::constant(8);
    let symbolic = &(&q * &q) + &nine == &(&p * &t) + &eight;
    let x = BigInt::from(m);
    let (qv, pv, tv) = (q.eval_at(&x), p.eval_at(&x), t.eval_at(&x));
    let numeric = &qv * &qv + 9u32 == pv * tv + 8u32;
    symbolic && numeric
}

/// `F_{2n-1}`: `F_1 = 1`, `F_3 = 2`, `F_{2n+3} = 3 F_{2n+1} - F_{2n-1}`.
pub fn odd_fibonacci(n: u32) -> BigInt {
    assert!(n >= 1, "odd_fibonacci is indexed from 1");
    let (mut a, mut b) = (BigInt::one(), BigInt::from(2));
    if n == 1 {
        return a;
    }
    for _ in 2..n {
        let c = &b * 3u32 - &a;
        a = b;
        b = c;
    }
    b
}

/// `(3^{[k+1]}, 5, 3^{[k]}, 2)` for `k >= 0`. At `k = -1` the pattern
/// degenerates and the dual of `s_{-1,1} = (2,2,2)`, namely `(4)`, is used.
pub fn fibonacci_string(k: i64) -> Result<PlumbingString> {
    if k < -1 {
        return Err(Error::InvalidParameter(format!("k must be >= -1, got {k}")));
    }
    if k == -1 {
        return PlumbingString::s(-1, 1)?.riemenschneider_dual();
    }
    let mut v = vec![3; (k + 1) as usize];
    v.push(5);
    v.extend(std::iter::repeat_n(3, k as usize));
    v.push(2);
    Ok(PlumbingString::new(v))
}

/// `[3^{[k+1]}, 5, 3^{[k]}, 2] = F^2 / (F F' - 1)` with `F = F_{2k+5}`,
/// `F' = F_{2k+3}`; the string is the dual of `s_{k,1}`; and
/// `boundary_pq(k, 1) = (F, F')`.
pub fn verify_fibonacci_case(k: i64) -> Result<bool> {
    let s = fibonacci_string(k)?;
    let f = odd_fibonacci((k + 3) as u32);
    let f_prev = odd_fibonacci((k + 2) as u32);
    let expected = Fraction::new(&f * &f, &f * &f_prev - 1u32)?;
    let dual_matches = PlumbingString::s(k, 1)?.riemenschneider_dual()? == s;
    let bpq = boundary_pq(k, 1)?;
    Ok(s.hj_evaluate()? == expected && dual_matches && bpq.p == f && bpq.q == f_prev)
}

/// A Markov triple `p_1^2 + p_2^2 + p_3^2 = 3 p_1 p_2 p_3`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkovTriple([BigInt; 3]);

impl MarkovTriple {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        let mut v = [a.into(), b.into(), c.into()];
        v.sort();
        if v[0] < BigInt::one() || !satisfies_markov(&v) {
            return Err(Error::InvalidParameter(format!(
                "({}, {}, {}) is not a Markov triple",
                v[0], v[1], v[2]
            )));
        }
        Ok(Self(v))
    }

    pub fn root() -> Self {
        Self([BigInt::one(), BigInt::one(), BigInt::one()])
    }

    pub fn entries(&self) -> &[BigInt; 3] {
        &self.0
    }

    pub fn largest(&self) -> &BigInt {
        &self.0[2]
    }

    /// Vieta involution `p_i -> 3 p_j p_k - p_i` (0-based `i`).
    pub fn mutate(&self, i: usize) -> Self {
        let [a, b, c] = &self.0;
        let (x, y, z) = match i {
            0 => (a, b, c),
            1 => (b, a, c),
            _ => (c, a, b),
        };
        let mut v = [y * z * 3u32 - x, y.clone(), z.clone()];
        v.sort();
        Self(v)
    }

    pub fn neighbours(&self) -> [Self; 3] {
        [self.mutate(0), self.mutate(1), self.mutate(2)]
    }
}

fn satisfies_markov(v: &[BigInt; 3]) -> bool {
    let [a, b, c] = v;
    a * a + b * b + c * c == a * b * c * 3u32
}

impl MarkovTriple {
    pub fn satisfies_equation(&self) -> bool {
        satisfies_markov(&self.0)
    }
}

impl fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// All triples reachable from `(1,1,1)` by at most `depth` mutations.
pub fn markov_tree(depth: usize) -> BTreeSet<MarkovTriple> {
    let mut seen = BTreeSet::from([MarkovTriple::root()]);
    let mut frontier = vec![MarkovTriple::root()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for t in &frontier {
            for n in t.neighbours() {
                if seen.insert(n.clone()) {
                    next.push(n);
                }
            }
        }
        frontier = next;
    }
    seen
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MarkovMembership {
    /// `p` occurs in the given triple.
    Member(MarkovTriple),
    /// `p` is absent from every triple with entries up to the bound, and the
    /// bound is at least `p`. Each Markov number is the largest entry of
    /// some triple, so this settles non-membership.
    Absent,
    /// The bound is below `p`; the search could not decide.
    Inconclusive,
}

impl MarkovMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, MarkovMembership::Member(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            MarkovMembership::Member(_) => "yes",
            MarkovMembership::Absent => "no_below_bound",
            MarkovMembership::Inconclusive => "inconclusive",
        }
    }
}

/// Searches the Markov tree, pruning every triple whose largest entry
/// exceeds `search_bound`. Moving away from the root never decreases the
/// largest entry, so the pruned search visits every triple with entries
/// up to the bound.
pub fn is_markov_number(p: &BigInt, search_bound: &BigInt) -> MarkovMembership {
    if p < &BigInt::one() {
        return MarkovMembership::Absent;
    }
    let mut seen = BTreeSet::from([MarkovTriple::root()]);
    let mut queue = VecDeque::from([MarkovTriple::root()]);
    while let Some(t) = queue.pop_front() {
        if t.entries().contains(p) {
            return MarkovMembership::Member(t);
        }
        for n in t.neighbours() {
            if n.largest() <= search_bound && seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    if search_bound >= p {
        MarkovMembership::Absent
    } else {
        MarkovMembership::Inconclusive
    }
}

/// `{±3 p_j p_k^{-1} mod p_i}` for each `i`, with `{i, j, k} = {1, 2, 3}` and
/// `j < k`. Empty when `p_i = 1` or the inverse does not exist.
pub fn markov_q_candidates(t: &MarkovTriple) -> [BTreeSet<BigInt>; 3] {
    let e = t.entries();
    std::array::from_fn(|i| {
        let (j, k) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let modulus = &e[i];
        let mut out = BTreeSet::new();
        if modulus.is_one() {
            return out;
        }
        if let Some(inv) = mod_inverse(&e[k], modulus) {
            let q = (&e[j] * inv * 3u32).mod_floor(modulus);
            out.insert((modulus - &q).mod_floor(modulus));
            out.insert(q);
        }
        out
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symplectic {
    Yes,
    Obstructed,
    Unknown,
}

impl Symplectic {
    pub fn label(self) -> &'static str {
        match self {
            Symplectic::Yes => "yes",
            Symplectic::Obstructed => "obstructed",
            Symplectic::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictReason {
    /// `B_{2,1}`, the complement of a conic.
    ConicComplement,
    /// `p` does not divide `q^2 + 9`.
    QSquaredPlus9,
    /// Neither test applies.
    Undecided,
}

impl VerdictReason {
    pub fn code(self) -> &'static str {
        match self {
            VerdictReason::ConicComplement => "conic_complement",
            VerdictReason::QSquaredPlus9 => "q2_plus_9",
            VerdictReason::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingVerdict {
    pub k: i64,
    pub m: i64,
    pub p: BigInt,
    pub q: BigInt,
    pub smooth: bool,
    pub symplectic: Symplectic,
    pub reason: VerdictReason,
    pub markov: MarkovMembership,
    pub divides_q2_plus_9: bool,
}

/// The JSON shape of a verdict; integers as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictRecord {
    pub k: String,
    pub m: String,
    pub p: String,
    pub q: String,
    pub smooth: &'static str,
    pub symplectic: &'static str,
    pub markov: &'static str,
    pub divides_q2_plus_9: bool,
}

impl EmbeddingVerdict {
    pub fn record(&self) -> VerdictRecord {
        VerdictRecord {
            k: self.k.to_string(),
            m: self.m.to_string(),
            p: self.p.to_string(),
            q: self.q.to_string(),
            smooth: if self.smooth { "yes" } else { "no" },
            symplectic: self.symplectic.label(),
            markov: self.markov.label(),
            divides_q2_plus_9: self.divides_q2_plus_9,
        }
    }
}

/// Symplectic verdict for `B(s_{k,m})`, `m` odd.
///
/// The Markov search bound is `10 p`.
pub fn symplectic_verdict(k: i64, m: i64) -> Result<EmbeddingVerdict> {
    if m < 1 || m % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "m must be odd and >= 1, got {m}"
        )));
    }
    let BoundaryInvariants { p, q } = boundary_pq(k, m)?;
    let divides = divides_q2_plus_9(&p, &q);
    let markov = is_markov_number(&p, &(&p * 10u32));
    let (symplectic, reason) = if k == -1 {
        (Symplectic::Yes, VerdictReason::ConicComplement)
    } else if !divides {
        if m >= 3 {
            let floor = BigInt::from(m).pow(2);
            if p < floor || p <= BigInt::from(8) {
                return Err(Error::Inconsistent(format!("p = {p} below m^2 = {floor}")));
            }
        }
        (Symplectic::Obstructed, VerdictReason::QSquaredPlus9)
    } else {
        (Symplectic::Unknown, VerdictReason::Undecided)
    };
    Ok(EmbeddingVerdict {
        k,
        m,
        p,
        q,
        smooth: true,
        symplectic,
        reason,
        markov,
        divides_q2_plus_9: divides,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn bpq(k: i64, m: i64) -> (BigInt, BigInt) {
        let b = boundary_pq(k, m).unwrap();
        (b.p, b.q)
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(bpq(0, 1), (big(5), big(2)));
        assert_eq!(bpq(0, 3), (big(17), big(4)));
        assert_eq!(bpq(1, 1), (big(13), big(5)));
        assert_eq!(bpq(1, 3), (big(185), big(43)));
        for m in [1, 2, 7] {
            assert_eq!(bpq(-1, m), (big(2), big(1)));
        }
        assert!(boundary_pq(-2, 1).is_err());
    }

    #[test]
    fn divisibility_examples() {
        assert!(divides_q2_plus_9(&big(2), &big(1)));
        assert!(!divides_q2_plus_9(&big(5), &big(2)));
        assert!(!divides_q2_plus_9(&big(17), &big(4)));
        assert!(!divides_q2_plus_9(&big(0), &big(4)));
    }

    #[test]
    fn q2_identity_examples() {
        assert!(q2_plus_9_identity_check(0, 1));
        assert!(q2_plus_9_identity_check(1, 3));
        let x = big(3);
        assert_eq!(seq_q(3).eval_at(&x).pow(2) + 9u32, big(1858));
        for k in 0..=25 {
            assert!(q2_plus_9_identity_check(k, 5), "k={k}");
        }
    }

    #[test]
    fn fibonacci_values() {
        let got: Vec<BigInt> = (1..=5).map(odd_fibonacci).collect();
        assert_eq!(got, [1, 2, 5, 13, 34].map(big));
        assert_eq!(
            fibonacci_string(0).unwrap(),
            PlumbingString::new(vec![3, 5, 2])
        );
        assert_eq!(
            fibonacci_string(1).unwrap(),
            PlumbingString::new(vec![3, 3, 5, 3, 2])
        );
        assert_eq!(fibonacci_string(-1).unwrap(), PlumbingString::new(vec![4]));
        assert_eq!(
            fibonacci_string(1).unwrap().hj_evaluate().unwrap(),
            Fraction::new(big(169), big(64)).unwrap()
        );
        for k in -1..=15 {
            assert!(verify_fibonacci_case(k).unwrap(), "k={k}");
        }
    }

    /// Every solution with entries up to `bound`, by direct search over the
    /// equation (the largest entry is a root of a quadratic in it).
    fn brute_markov(bound: i64) -> BTreeSet<(i64, i64, i64)> {
        let mut out = BTreeSet::new();
        for a in 1..=bound {
            for b in a..=bound {
                for c in b..=bound {
                    if a * a + b * b + c * c == 3 * a * b * c {
                        out.insert((a, b, c));
                    }
                }
            }
        }
        out
    }

    fn as_tuple(t: &MarkovTriple) -> (i64, i64, i64) {
        let e = t.entries();
        (
            (&e[0]).try_into().unwrap(),
            (&e[1]).try_into().unwrap(),
            (&e[2]).try_into().unwrap(),
        )
    }

    #[test]
    fn tree_examples() {
        assert!(MarkovTriple::root().satisfies_equation());
        assert_eq!(markov_tree(0), BTreeSet::from([MarkovTriple::root()]));
        let d2: BTreeSet<_> = markov_tree(2).iter().map(as_tuple).collect();
        assert!(d2.contains(&(1, 2, 5)));
        let d3: BTreeSet<_> = markov_tree(3).iter().map(as_tuple).collect();
        assert!(d3.contains(&(2, 5, 29)));
        assert!(d3.contains(&(1, 5, 13)));
        let brute10 = brute_markov(10);
        assert!(brute10.contains(&(1, 2, 5)));
        assert!(brute10.is_subset(&d2));
        assert!(brute_markov(30).is_subset(&d3));
        assert!(!d3.iter().any(|t| t.2 == 34));
        assert!(MarkovTriple::new(1, 2, 4).is_err());
        assert_eq!(
            MarkovTriple::new(5, 1, 2).unwrap(),
            MarkovTriple::new(1, 2, 5).unwrap()
        );
    }

    #[test]
    fn tree_matches_brute_force_below_bound() {
        let brute = brute_markov(200);
        let tree: BTreeSet<_> = markov_tree(8)
            .iter()
            .filter(|t| t.largest() <= &big(200))
            .map(as_tuple)
            .collect();
        assert_eq!(tree, brute);
    }

    #[test]
    fn membership() {
        assert!(is_markov_number(&big(5), &big(50)).is_member());
        assert!(is_markov_number(&big(2), &big(20)).is_member());
        assert!(is_markov_number(&big(1), &big(1)).is_member());
        assert_eq!(
            is_markov_number(&big(17), &big(1_000_000)),
            MarkovMembership::Absent
        );
        assert_eq!(
            is_markov_number(&big(433), &big(100)),
            MarkovMembership::Inconclusive
        );
        assert!(is_markov_number(&big(433), &big(4330)).is_member());
        let markov_numbers: BTreeSet<i64> = brute_markov(200)
            .into_iter()
            .flat_map(|(a, b, c)| [a, b, c])
            .collect();
        for p in 1..=200 {
            let got = is_markov_number(&big(p), &big(10 * p)).is_member();
            assert_eq!(got, markov_numbers.contains(&p), "p={p}");
        }
    }

    #[test]
    fn q_candidates() {
        let t = MarkovTriple::new(1, 2, 5).unwrap();
        let c = markov_q_candidates(&t);
        assert!(c[0].is_empty());
        assert_eq!(c[1], BTreeSet::from([big(1)]));
        assert_eq!(c[2], BTreeSet::from([big(1), big(4)]));
        for q in &c[2] {
            assert!(divides_q2_plus_9(&big(5), q));
        }
        let c = markov_q_candidates(&MarkovTriple::new(1, 1, 2).unwrap());
        assert_eq!(c[2], BTreeSet::from([big(1)]));
        assert!(c[0].is_empty() && c[1].is_empty());
    }

    #[test]
    fn verdicts() {
        let v = symplectic_verdict(-1, 7).unwrap();
        assert_eq!(v.symplectic, Symplectic::Yes);
        assert_eq!((v.p.clone(), v.q.clone()), (big(2), big(1)));
        assert!(v.divides_q2_plus_9);

        let v = symplectic_verdict(0, 3).unwrap();
        assert_eq!(v.symplectic, Symplectic::Obstructed);
        assert_eq!(v.reason, VerdictReason::QSquaredPlus9);
        assert_eq!((v.p.clone(), v.q.clone()), (big(17), big(4)));
        assert_eq!(v.markov, MarkovMembership::Absent);

        let v = symplectic_verdict(0, 1).unwrap();
        assert_eq!(v.symplectic, Symplectic::Obstructed);
        assert_eq!((v.p.clone(), v.q.clone()), (big(5), big(2)));
        assert!(v.markov.is_member());

        assert!(symplectic_verdict(0, 2).is_err());
        assert!(symplectic_verdict(-2, 3).is_err());
    }

    #[test]
    fn verdict_json() {
        let r = symplectic_verdict(0, 3).unwrap().record();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"k":"0","m":"3","p":"17","q":"4","smooth":"yes","symplectic":"obstructed","markov":"no_below_bound","divides_q2_plus_9":false}"#
        );
    }
}
