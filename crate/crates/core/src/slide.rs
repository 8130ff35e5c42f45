//! Framed curve triples and handle slides.
//!
//! A [`FramedCurve`] `(p, q)_δ` records the homology coordinates of an
//! attaching curve on a torus slice together with its framing `δ = ±1`
//! relative to that torus. A [`CurveTriple`] lists `(ν_1, ν_2, ν_3)` in
//! diagram order. Pair and component positions are 1-based.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::seq::{seq_p, seq_q};
use crate::sl2z::{meridian_coords, Vec2};
use crate::strings::PlumbingString;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Framing {
    Plus,
    Minus,
}

impl Framing {
    pub fn sign(self) -> i64 {
        match self {
            Framing::Plus => 1,
            Framing::Minus => -1,
        }
    }

    pub fn from_sign(sign: i64) -> Result<Self> {
        match sign {
            1 => Ok(Framing::Plus),
            -1 => Ok(Framing::Minus),
            other => Err(Error::InvalidParameter(format!(
                "framing must be ±1, got {other}"
            ))),
        }
    }

    /// `(-1)^l`.
    pub fn parity(l: i64) -> Self {
        if l.rem_euclid(2) == 0 {
            Framing::Plus
        } else {
            Framing::Minus
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FramedCurve {
    p: BigInt,
    q: BigInt,
    framing: Framing,
}

impl FramedCurve {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, framing: Framing) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(Error::DegenerateSlide);
        }
        Ok(Self { p, q, framing })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn framing(&self) -> Framing {
        self.framing
    }

    pub fn coords(&self) -> Vec2 {
        Vec2 {
            p: self.p.clone(),
            q: self.q.clone(),
        }
    }

    pub fn flipped(&self) -> Self {
        Self {
            p: -&self.p,
            q: -&self.q,
            framing: self.framing,
        }
    }

    /// Representative with `p > 0`, or `p = 0, q > 0`.
    pub fn canonical_sign(&self) -> Self {
        if self.p.is_negative() || (self.p.is_zero() && self.q.is_negative()) {
            self.flipped()
        } else {
            self.clone()
        }
    }

    /// Equal up to reversing the orientation of the curve.
    pub fn same_up_to_sign(&self, other: &Self) -> bool {
        self.canonical_sign() == other.canonical_sign()
    }
}

impl fmt::Display for FramedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})_{}", self.p, self.q, self.framing.sign())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveTriple(pub [FramedCurve; 3]);

impl CurveTriple {
    pub fn new(nu1: FramedCurve, nu2: FramedCurve, nu3: FramedCurve) -> Self {
        Self([nu1, nu2, nu3])
    }

    pub fn component(&self, i: usize) -> &FramedCurve {
        &self.0[i - 1]
    }

    /// `((0,1)_1, (1,0)_{-1}, (1,0)_1)`.
    pub fn cp2_normal_form() -> Self {
        let c = |p: i64, q: i64, f| FramedCurve::new(p, q, f).expect("non-zero");
        Self::new(
            c(0, 1, Framing::Plus),
            c(1, 0, Framing::Minus),
            c(1, 0, Framing::Plus),
        )
    }

    fn same_up_to_sign(&self, other: &Self) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .all(|(a, b)| a.same_up_to_sign(b))
    }
}

impl fmt::Display for CurveTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// The sliding map
/// `F((p,q)_δ, (p0,q0)_δ0) = ((p0,q0)_δ0, (p - δ0 Δ0 p0, q - δ0 Δ0 q0)_δ)`
/// with `Δ0 = p0 q - q0 p`.
pub fn slide_f(a: &FramedCurve, b: &FramedCurve) -> Result<(FramedCurve, FramedCurve)> {
    let k = slide_coefficient(a, b);
    let moved = FramedCurve::new(&a.p - &k * &b.p, &a.q - &k * &b.q, a.framing)?;
    Ok((b.clone(), moved))
}

/// `δ0 Δ0` for the pair `(a, b)`.
pub fn slide_coefficient(a: &FramedCurve, b: &FramedCurve) -> BigInt {
    let delta0 = &b.p * &a.q - &b.q * &a.p;
    delta0 * b.framing.sign()
}

/// Exact inverse of [`slide_f`]. `Δ0` is unchanged by the slide, so it can
/// be read back from the output pair.
pub fn slide_f_inverse(x: &FramedCurve, y: &FramedCurve) -> Result<(FramedCurve, FramedCurve)> {
    let k = slide_coefficient(y, x);
    let restored = FramedCurve::new(&y.p + &k * &x.p, &y.q + &k * &x.q, y.framing)?;
    Ok((restored, x.clone()))
}

/// Negate the coordinates of component `i` (1-based), keeping its framing.
pub fn flip_sign(t: &CurveTriple, i: usize) -> Result<CurveTriple> {
    check_component(i)?;
    let mut out = t.clone();
    out.0[i - 1] = t.0[i - 1].flipped();
    Ok(out)
}

fn check_component(i: usize) -> Result<()> {
    if (1..=3).contains(&i) {
        Ok(())
    } else {
        Err(Error::PositionOutOfRange {
            position: i,
            len: 3,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    SlideForward,
    SlideBackward,
    SignFlip,
}

/// A single replayable move. For slides `pos` names the pair
/// `(pos, pos+1)`; for sign flips it names the component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub kind: MoveKind,
    pub pos: usize,
}

impl Move {
    pub fn forward(pos: usize) -> Self {
        Self {
            kind: MoveKind::SlideForward,
            pos,
        }
    }

    pub fn backward(pos: usize) -> Self {
        Self {
            kind: MoveKind::SlideBackward,
            pos,
        }
    }

    pub fn flip(pos: usize) -> Self {
        Self {
            kind: MoveKind::SignFlip,
            pos,
        }
    }

    pub fn apply(&self, t: &CurveTriple) -> Result<CurveTriple> {
        match self.kind {
            MoveKind::SignFlip => flip_sign(t, self.pos),
            MoveKind::SlideForward | MoveKind::SlideBackward => {
                if !(1..=2).contains(&self.pos) {
                    return Err(Error::PositionOutOfRange {
                        position: self.pos,
                        len: 2,
                    });
                }
                let i = self.pos - 1;
                let (a, b) = (&t.0[i], &t.0[i + 1]);
                let (x, y) = if self.kind == MoveKind::SlideForward {
                    slide_f(a, b)?
                } else {
                    slide_f_inverse(a, b)?
                };
                let mut out = t.clone();
                out.0[i] = x;
                out.0[i + 1] = y;
                Ok(out)
            }
        }
    }
}

/// A replayable certificate that `start` reduces to `end`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub k: i64,
    pub m: i64,
    pub start: CurveTriple,
    pub moves: Vec<Move>,
    pub end: CurveTriple,
}

impl ReductionTrace {
    /// Replays the moves and checks the recorded end state.
    pub fn verify(&self) -> Result<()> {
        let got = replay(self)?;
        if got != self.end {
            return Err(Error::Certificate(format!(
                "replay ends at {got}, certificate claims {}",
                self.end
            )));
        }
        Ok(())
    }
}

/// Applies the moves of `trace` to `trace.start`.
pub fn replay(trace: &ReductionTrace) -> Result<CurveTriple> {
    replay_moves(&trace.start, &trace.moves)
}

pub fn replay_moves(start: &CurveTriple, moves: &[Move]) -> Result<CurveTriple> {
    moves.iter().try_fold(start.clone(), |t, mv| mv.apply(&t))
}

/// `τ_{l,m} = ((P_{l+1}(m), Q_{l+1}(m))_{(-1)^l}, (P_{l+2}(m), Q_{l+2}(m))_{(-1)^{l+1}}, (m, m-1)_1)`.
pub fn tau(l: i64, m: i64) -> Result<CurveTriple> {
    if l < -1 {
        return Err(Error::InvalidParameter(format!("l must be >= -1, got {l}")));
    }
    if m < 1 {
        return Err(Error::InvalidParameter(format!("m must be >= 1, got {m}")));
    }
    let x = BigInt::from(m);
    let curve = |idx: i64, framing| {
        FramedCurve::new(seq_p(idx).eval_at(&x), seq_q(idx).eval_at(&x), framing)
    };
    Ok(CurveTriple::new(
        curve(l + 1, Framing::parity(l))?,
        curve(l + 2, Framing::parity(l + 1))?,
        FramedCurve::new(m, m - 1, Framing::Plus)?,
    ))
}

/// The triple `(ν_1, ν_2, ν_3)` read off the chain `s'_{k,m}` as meridians
/// at positions `(k+2)m+2`, `(k+1)m+2` and `m`, with framings `(+1, -1, +1)`
/// and signs normalised. Must agree with `τ_{2k,m}`.
pub fn starting_triple(k: i64, m: i64) -> Result<CurveTriple> {
    if k < 0 || m < 1 {
        return Err(Error::InvalidParameter(format!(
            "need k >= 0 and m >= 1, got k={k} m={m}"
        )));
    }
    let s = PlumbingString::s_prime(k, m)?;
    let nu = |pos: i64, framing| -> Result<FramedCurve> {
        let v = meridian_coords(&s, pos as usize)?;
        Ok(FramedCurve::new(v.p, v.q, framing)?.canonical_sign())
    };
    let triple = CurveTriple::new(
        nu((k + 2) * m + 2, Framing::Plus)?,
        nu((k + 1) * m + 2, Framing::Minus)?,
        nu(m, Framing::Plus)?,
    );
    let expected = tau(2 * k, m)?;
    if triple != expected {
        return Err(Error::Inconsistent(format!(
            "meridian triple {triple} differs from tau(2k, m) = {expected} at k={k} m={m}"
        )));
    }
    Ok(triple)
}

/// Exact match with the `CP^2` normal form up to per-component sign.
pub fn is_cp2_normal_form(t: &CurveTriple) -> bool {
    t.same_up_to_sign(&CurveTriple::cp2_normal_form())
}

/// Builds the certificate taking `τ_{2k,m}` to `((0,1)_1, (1,0)_{-1}, (1,0)_1)`:
///
/// 1. `2k+1` backward slides on pair 1, descending `τ_{2k,m}` to `τ_{-1,m}`;
/// 2. `(m-1)/2` rounds of a forward slide on pair 2 followed by a sign flip of
///    component 3, lowering `((a+2,a+1)_1, (a,a-1)_1)` to `((a,a-1)_1, (a-2,a-3)_1)`;
/// 3. 3 backward slides on pair 1, undoing
///    `F^3((0,1)_1, (1,0)_{-1}) = ((2,1)_{-1}, (3,2)_1)`.
pub fn reduce_to_cp2(k: i64, m: i64) -> Result<ReductionTrace> {
    if k < 0 {
        return Err(Error::InvalidParameter(format!(
            "reduction needs k >= 0, got {k}"
        )));
    }
    if m < 1 || m % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "m must be odd and >= 1, got {m}"
        )));
    }
    let start = tau(2 * k, m)?;
    let mut moves = Vec::new();
    let mut state = start.clone();
    let mut push = |mv: Move, state: &mut CurveTriple| -> Result<()> {
        *state = mv.apply(state)?;
        moves.push(mv);
        Ok(())
    };

    for _ in 0..(2 * k + 1) {
        push(Move::backward(1), &mut state)?;
    }
    let bottom = tau(-1, m)?;
    if state != bottom {
        return Err(Error::Certificate(format!(
            "descent reached {state}, expected {bottom}"
        )));
    }

    for _ in 0..(m - 1) / 2 {
        push(Move::forward(2), &mut state)?;
        push(Move::flip(3), &mut state)?;
    }

    for _ in 0..3 {
        push(Move::backward(1), &mut state)?;
    }
    let normal = CurveTriple::cp2_normal_form();
    if state != normal {
        return Err(Error::Certificate(format!(
            "reduction ended at {state}, expected {normal}"
        )));
    }
    Ok(ReductionTrace {
        k,
        m,
        start,
        moves,
        end: state,
    })
}

/// Number of moves in the certificate for `(k, m)`.
pub fn expected_move_count(k: i64, m: i64) -> usize {
    ((2 * k + 1) + (m - 1) + 3) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fc(p: i64, q: i64, s: i64) -> FramedCurve {
        FramedCurve::new(p, q, Framing::from_sign(s).unwrap()).unwrap()
    }

    fn triple(c: [(i64, i64, i64); 3]) -> CurveTriple {
        CurveTriple::new(
            fc(c[0].0, c[0].1, c[0].2),
            fc(c[1].0, c[1].1, c[1].2),
            fc(c[2].0, c[2].1, c[2].2),
        )
    }

    #[test]
    fn slide_examples() {
        let (a, b) = slide_f(&fc(0, 1, 1), &fc(1, 0, -1)).unwrap();
        assert_eq!((a.clone(), b.clone()), (fc(1, 0, -1), fc(1, 1, 1)));
        let (a, b) = slide_f(&a, &b).unwrap();
        let (a, b) = slide_f(&a, &b).unwrap();
        assert_eq!((a, b), (fc(2, 1, -1), fc(3, 2, 1)));
    }

    #[test]
    fn km_ind_three_invariant_coefficient() {
        let (mut a, mut b) = (fc(0, 1, 1), fc(1, 0, -1));
        for _ in 0..3 {
            assert_eq!(slide_coefficient(&a, &b), BigInt::from(-1));
            (a, b) = slide_f(&a, &b).unwrap();
        }
        for _ in 0..3 {
            (a, b) = slide_f_inverse(&a, &b).unwrap();
        }
        assert_eq!((a, b), (fc(0, 1, 1), fc(1, 0, -1)));
    }

    #[test]
    fn degenerate_curves_rejected() {
        assert_eq!(
            FramedCurve::new(0, 0, Framing::Plus).unwrap_err(),
            Error::DegenerateSlide
        );
        assert!(Framing::from_sign(0).is_err());
        // A (0,0) result needs a = δ0Δ0 b, but then Δ0 = 0 and a = 0.
        let (_, moved) = slide_f(&fc(2, 4, 1), &fc(1, 2, -1)).unwrap();
        assert_eq!(moved, fc(2, 4, 1));
    }

    fn curve() -> impl Strategy<Value = FramedCurve> {
        (
            -1_000_000i64..=1_000_000,
            -1_000_000i64..=1_000_000,
            prop::bool::ANY,
        )
            .prop_filter("non-zero", |(p, q, _)| *p != 0 || *q != 0)
            .prop_map(|(p, q, s)| fc(p, q, if s { 1 } else { -1 }))
    }

    proptest! {
        #[test]
        fn inverse_round_trip(a in curve(), b in curve()) {
            let (x, y) = slide_f(&a, &b).unwrap();
            prop_assert_eq!(slide_f_inverse(&x, &y).unwrap(), (a.clone(), b.clone()));
            let (u, v) = slide_f_inverse(&a, &b).unwrap();
            prop_assert_eq!(slide_f(&u, &v).unwrap(), (a, b));
        }

        #[test]
        fn slide_preserves_delta(a in curve(), b in curve()) {
            let (x, y) = slide_f(&a, &b).unwrap();
            let before = b.p() * a.q() - b.q() * a.p();
            let after = x.p() * y.q() - x.q() * y.p();
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn tau_examples() {
        for m in 1..8 {
            assert_eq!(
                tau(-1, m).unwrap(),
                triple([(2, 1, -1), (m + 2, m + 1, 1), (m, m - 1, 1)])
            );
        }
        // P_1(1) = 3, Q_1(1) = 2, P_2(1) = 5, Q_2(1) = 3
        assert_eq!(
            tau(0, 1).unwrap(),
            triple([(3, 2, 1), (5, 3, -1), (1, 0, 1)])
        );
        assert!(tau(-2, 1).is_err());
        assert!(tau(0, 0).is_err());
    }

    #[test]
    fn tau_step_is_a_slide() {
        let (l, m) = (0, 3);
        let t = tau(l, m).unwrap();
        let next = Move::forward(1).apply(&t).unwrap();
        assert_eq!(next, tau(l + 1, m).unwrap());
        let (l, m) = (2, 5);
        let back = Move::backward(1).apply(&tau(l + 1, m).unwrap()).unwrap();
        assert_eq!(back, tau(l, m).unwrap());
    }

    #[test]
    fn flip_examples() {
        let t = tau(0, 3).unwrap();
        assert_eq!(flip_sign(&flip_sign(&t, 2).unwrap(), 2).unwrap(), t);
        let f = flip_sign(&t, 1).unwrap();
        assert_eq!(f.component(1).framing(), t.component(1).framing());
        assert_eq!(f.component(1).p(), &-t.component(1).p());
        assert!(flip_sign(&t, 0).is_err());
        assert!(flip_sign(&t, 4).is_err());
    }

    #[test]
    fn starting_triple_examples() {
        assert_eq!(
            starting_triple(0, 1).unwrap(),
            triple([(3, 2, 1), (5, 3, -1), (1, 0, 1)])
        );
        for k in 0..4 {
            for m in 1..10 {
                let t = starting_triple(k, m).unwrap();
                assert_eq!(t.component(3).coords(), Vec2::new(m, m - 1));
                let signs: Vec<i64> = t.0.iter().map(|c| c.framing().sign()).collect();
                assert_eq!(signs, vec![1, -1, 1]);
            }
        }
        assert!(starting_triple(-1, 3).is_err());
    }

    #[test]
    fn normal_form_predicate() {
        assert!(is_cp2_normal_form(&CurveTriple::cp2_normal_form()));
        assert!(is_cp2_normal_form(&triple([
            (0, -1, 1),
            (1, 0, -1),
            (1, 0, 1)
        ])));
        assert!(is_cp2_normal_form(&triple([
            (0, 1, 1),
            (-1, 0, -1),
            (-1, 0, 1)
        ])));
        assert!(!is_cp2_normal_form(&triple([
            (0, 1, -1),
            (1, 0, -1),
            (1, 0, 1)
        ])));
        assert!(!is_cp2_normal_form(&tau(-1, 3).unwrap()));
    }

    #[test]
    fn reduction_small_cases() {
        let t = reduce_to_cp2(0, 1).unwrap();
        assert_eq!(t.moves.len(), 4);
        assert!(t.moves.iter().all(|m| m.kind == MoveKind::SlideBackward));
        assert_eq!(t.end, CurveTriple::cp2_normal_form());

        let t = reduce_to_cp2(0, 3).unwrap();
        let after_descent = replay_moves(&t.start, &t.moves[..1]).unwrap();
        assert_eq!(after_descent, triple([(2, 1, -1), (5, 4, 1), (3, 2, 1)]));

        let t = reduce_to_cp2(2, 5).unwrap();
        assert_eq!(replay(&t).unwrap(), CurveTriple::cp2_normal_form());
        assert_eq!(t.moves.len(), expected_move_count(2, 5));
        t.verify().unwrap();

        assert!(reduce_to_cp2(0, 2).is_err());
        assert!(reduce_to_cp2(-1, 3).is_err());
    }

    #[test]
    fn replay_edge_cases() {
        let start = tau(1, 3).unwrap();
        assert_eq!(replay_moves(&start, &[]).unwrap(), start);
        let pair = CurveTriple::new(fc(0, 1, 1), fc(1, 0, -1), fc(1, 0, 1));
        let forward = replay_moves(&pair, &[Move::forward(1); 3]).unwrap();
        assert_eq!(forward, triple([(2, 1, -1), (3, 2, 1), (1, 0, 1)]));
        assert!(Move::forward(3).apply(&pair).is_err());
    }

    #[test]
    fn tampered_trace_rejected() {
        let mut t = reduce_to_cp2(1, 3).unwrap();
        t.moves.pop();
        assert!(matches!(t.verify(), Err(Error::Certificate(_))));
    }
}
