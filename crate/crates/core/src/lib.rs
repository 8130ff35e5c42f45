//! Exact-arithmetic engine for the rational homology balls `B(s_{k,m})`.
//!
//! The crate is organised bottom-up:
//!
//! - [`strings`]: plumbing strings, Hirzebruch–Jung continued fractions,
//!   Riemenschneider duality and blow-downs.
//! - [`sl2z`]: the `A_m` matrices, chain products, meridian coordinates and
//!   lens-space classification.
//! - [`poly`] and [`seq`]: integer polynomials and the sequences `P, Q, S, T`
//!   together with the matrices `C` and `M_l`.
//! - [`slide`]: framed curve triples, the sliding map and the certified
//!   reduction to the `CP^2` normal form.
//! - [`obstruction`]: boundary invariants, the `q^2 + 9` test, Markov triples
//!   and odd Fibonacci numbers.
//!
//! Every value is immutable after construction and every operation is a pure
//! function, so all types are `Send + Sync`.

pub mod bigserde;
mod error;
pub mod obstruction;
pub mod poly;
pub mod seq;
pub mod sl2z;
pub mod slide;
pub mod strings;

pub use error::{Error, Result};
pub use obstruction::{
    boundary_pq, divides_q2_plus_9, is_markov_number, markov_q_candidates, markov_tree,
    odd_fibonacci, q2_plus_9_identity_check, symplectic_verdict, verify_fibonacci_case,
    BoundaryInvariants, EmbeddingVerdict, MarkovMembership, MarkovTriple, Symplectic,
    VerdictReason, VerdictRecord,
};
pub use poly::{IntPoly, PolyMat2};
pub use seq::{matrix_c, matrix_m, seq_p, seq_q, seq_s, seq_t, verify_identity, Identity};
pub use sl2z::{lens_from_string, meridian_coords, string_product, LensSpace, Mat2, Vec2};
pub use slide::{
    expected_move_count, flip_sign, is_cp2_normal_form, reduce_to_cp2, replay, replay_moves,
    slide_coefficient, slide_f, slide_f_inverse, starting_triple, tau, CurveTriple, FramedCurve,
    Framing, Move, MoveKind, ReductionTrace,
};
pub use strings::{BlowDown, Fraction, PlumbingString};
