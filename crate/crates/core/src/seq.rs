//! The sequences `P_l, Q_l, S_l, T_l` in `Z[x]` defined by
//! `M_l = A_2 C^l = ((P_l, -S_l), (Q_l, -T_l))` with `C = ((x+1, -1), (x, -1))`.
//!
//! Since `C^2 = xC + I`, each sequence obeys `f_{l+2} = x f_{l+1} + f_l`, so it
//! is fixed by its rows at `l = -1, 0`. Those rows are stored as constants;
//! everything else comes from the recursion and is memoised in a shared,
//! lock-protected table.

use std::sync::{OnceLock, RwLock};

use crate::poly::{IntPoly, PolyMat2};
use crate::sl2z::Mat2;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Seq {
    P = 0,
    Q = 1,
    S = 2,
    T = 3,
}

type Row = [IntPoly; 4];

/// Rows `l = -1` and `l = 0` of `(P, Q, S, T)`.
fn base_rows() -> (Row, Row) {
    let p = IntPoly::from_i64s;
    (
        [p(&[2, -1]), p(&[1]), p(&[1, -1]), p(&[1])],
        [p(&[2]), p(&[1]), p(&[1]), p(&[0])],
    )
}

/// `f_{l+2} = x f_{l+1} + f_l`, row-wise.
fn step_up(prev: &Row, cur: &Row) -> Row {
    std::array::from_fn(|i| &cur[i].shift() + &prev[i])
}

/// `f_l = f_{l+2} - x f_{l+1}`, row-wise.
fn step_down(next: &Row, next2: &Row) -> Row {
    std::array::from_fn(|i| &next2[i] - &next[i].shift())
}

fn row_of(m: &PolyMat2) -> Row {
    [m.a.clone(), m.c.clone(), -&m.b, -&m.d]
}

/// Rows indexed from `l = -1`.
struct Table {
    rows: Vec<Row>,
}

fn table() -> &'static RwLock<Table> {
    static TABLE: OnceLock<RwLock<Table>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let (r_minus, r_zero) = base_rows();
        // The stored rows must agree with A_2 C^l computed directly.
        for (l, row) in [(-1, &r_minus), (0, &r_zero)] {
            assert_eq!(&row_of(&matrix_m_product(l)), row, "base row l={l}");
        }
        let r_one = step_up(&r_minus, &r_zero);
        let r_two = step_up(&r_zero, &r_one);
        assert_eq!(row_of(&matrix_m_product(1)), r_one);
        assert_eq!(row_of(&matrix_m_product(2)), r_two);
        RwLock::new(Table {
            rows: vec![r_minus, r_zero, r_one, r_two],
        })
    })
}

fn row(l: i64) -> Row {
    if l < -1 {
        let (mut next, mut next2) = base_rows();
        // walk down from (l+1, l+2) = (-1, 0)
        let mut at = -1;
        while at > l {
            let below = step_down(&next, &next2);
            next2 = next;
            next = below;
            at -= 1;
        }
        return next;
    }
    let idx = (l + 1) as usize;
    {
        let t = table().read().expect("sequence table poisoned");
        if let Some(r) = t.rows.get(idx) {
            return r.clone();
        }
    }
    let mut t = table().write().expect("sequence table poisoned");
    while t.rows.len() <= idx {
        let n = t.rows.len();
        let next = step_up(&t.rows[n - 2], &t.rows[n - 1]);
        t.rows.push(next);
    }
    t.rows[idx].clone()
}

fn seq(which: Seq, l: i64) -> IntPoly {
    let r = row(l);
    r[which as usize].clone()
}

pub fn seq_p(l: i64) -> IntPoly {
    seq(Seq::P, l)
}

pub fn seq_q(l: i64) -> IntPoly {
    seq(Seq::Q, l)
}

/// Computed from its own base rows; equals `seq_q(l - 1)`.
pub fn seq_s(l: i64) -> IntPoly {
    seq(Seq::S, l)
}

pub fn seq_t(l: i64) -> IntPoly {
    seq(Seq::T, l)
}

/// `C = ((x+1, -1), (x, -1))`, `det C = -1`.
pub fn matrix_c() -> PolyMat2 {
    let p = IntPoly::from_i64s;
    PolyMat2::new(p(&[1, 1]), p(&[-1]), p(&[0, 1]), p(&[-1]))
}

/// `C^{-1} = ((1, -1), (x, -x-1))`.
pub fn matrix_c_inverse() -> PolyMat2 {
    let p = IntPoly::from_i64s;
    PolyMat2::new(p(&[1]), p(&[-1]), p(&[0, 1]), p(&[-1, -1]))
}

/// `A_2 C^l` by repeated multiplication.
pub fn matrix_m_product(l: i64) -> PolyMat2 {
    let a2 = PolyMat2::from_integer(&Mat2::framing(2));
    let factor = if l >= 0 {
        matrix_c()
    } else {
        matrix_c_inverse()
    };
    &a2 * &factor.pow(l.unsigned_abs() as u32)
}

/// `M_l = ((P_l, -Q_{l-1}), (Q_l, -T_l))`, built from the sequences and
/// checked against `A_2 C^l`.
pub fn matrix_m(l: i64) -> Result<PolyMat2> {
    let from_seq = PolyMat2::new(seq_p(l), -&seq_q(l - 1), seq_q(l), -&seq_t(l));
    let product = matrix_m_product(l);
    if from_seq != product {
        return Err(Error::Inconsistent(format!(
            "M_{l}: sequences give {from_seq}, A_2 C^l gives {product}"
        )));
    }
    Ok(from_seq)
}

/// The seven polynomial identities satisfied by `P, Q, T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    /// `P_{l+1} - P_l = x Q_l`
    PDifference = 1,
    /// `Q_{l+1} - Q_l = x T_{l+1}`
    QDifference = 2,
    /// `Q_{l+1} + Q_l = P_{l+1}`
    QSum = 3,
    /// `T_{l+1} + T_l = Q_l`
    TSum = 4,
    /// `P_{l+1} Q_l - P_l Q_{l+1} = (-1)^{l+1} x`
    Cross = 5,
    /// `Q_{2l} Q_{2l-1} - P_{2l} T_{2l} = 1`
    EvenDeterminant = 6,
    /// `P_{2l} T_{2l-1} - Q_{2l-1}^2 = 1`
    EvenSquare = 7,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::PDifference,
        Identity::QDifference,
        Identity::QSum,
        Identity::TSum,
        Identity::Cross,
        Identity::EvenDeterminant,
        Identity::EvenSquare,
    ];

    pub fn from_number(n: u8) -> Result<Self> {
        Self::ALL
            .get((n as usize).wrapping_sub(1))
            .copied()
            .ok_or_else(|| {
                Error::InvalidParameter(format!("identity number must be 1..=7, got {n}"))
            })
    }

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn statement(self) -> &'static str {
        match self {
            Identity::PDifference => "P_{l+1} - P_l = x*Q_l",
            Identity::QDifference => "Q_{l+1} - Q_l = x*T_{l+1}",
            Identity::QSum => "Q_{l+1} + Q_l = P_{l+1}",
            Identity::TSum => "T_{l+1} + T_l = Q_l",
            Identity::Cross => "P_{l+1}*Q_l - P_l*Q_{l+1} = (-1)^{l+1}*x",
            Identity::EvenDeterminant => "Q_{2l}*Q_{2l-1} - P_{2l}*T_{2l} = 1",
            Identity::EvenSquare => "P_{2l}*T_{2l-1} - Q_{2l-1}^2 = 1",
        }
    }

    /// Smallest `l` for which every index in the identity is `>= -1`.
    pub fn first_index(self) -> i64 {
        match self {
            Identity::EvenDeterminant | Identity::EvenSquare => 0,
            _ => -1,
        }
    }

    /// `(lhs, rhs)` at `l`.
    pub fn sides(self, l: i64) -> (IntPoly, IntPoly) {
        let x = IntPoly::x();
        match self {
            Identity::PDifference => (&seq_p(l + 1) - &seq_p(l), &x * &seq_q(l)),
            Identity::QDifference => (&seq_q(l + 1) - &seq_q(l), &x * &seq_t(l + 1)),
            Identity::QSum => (&seq_q(l + 1) + &seq_q(l), seq_p(l + 1)),
            Identity::TSum => (&seq_t(l + 1) + &seq_t(l), seq_q(l)),
            Identity::Cross => {
                let lhs = &(&seq_p(l + 1) * &seq_q(l)) - &(&seq_p(l) * &seq_q(l + 1));
                let rhs = if (l + 1).rem_euclid(2) == 0 { x } else { -&x };
                (lhs, rhs)
            }
            Identity::EvenDeterminant => {
                let (n, n1) = (2 * l, 2 * l - 1);
                let lhs = &(&seq_q(n) * &seq_q(n1)) - &(&seq_p(n) * &seq_t(n));
                (lhs, IntPoly::one())
            }
            Identity::EvenSquare => {
                let (n, n1) = (2 * l, 2 * l - 1);
                let q = seq_q(n1);
                let lhs = &(&seq_p(n) * &seq_t(n1)) - &(&q * &q);
                (lhs, IntPoly::one())
            }
        }
    }

    pub fn holds_at(self, l: i64) -> bool {
        let (lhs, rhs) = self.sides(l);
        lhs == rhs
    }
}

/// True iff identity `id` (1..=7) holds as an exact polynomial equality for
/// every admissible `l` up to `l_max`.
pub fn verify_identity(id: u8, l_max: i64) -> Result<bool> {
    let identity = Identity::from_number(id)?;
    if l_max < 1 {
        return Err(Error::InvalidParameter(format!(
            "l_max must be >= 1, got {l_max}"
        )));
    }
    Ok((identity.first_index()..=l_max).all(|l| identity.holds_at(l)))
}
