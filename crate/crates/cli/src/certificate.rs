//! Certificate JSON and its standalone replay.
//!
//! ```text
//! {"k": "0", "m": "1",
//!  "start": [["3","2","1"], ["5","3","-1"], ["1","0","1"]],
//!  "moves": [{"kind": "slide_backward", "pos": 1}, ...],
//!  "end":   [["0","1","1"], ["1","0","-1"], ["1","0","1"]]}
//! ```
//!
//! Each curve is `[p, q, framing]`. The replay here only borrows the slide
//! map itself from the engine; move dispatch, sign flips and the final
//! comparisons are done locally.

use num_bigint::BigInt;
use rhb_core::bigserde;
use rhb_core::{
    expected_move_count, slide_f, slide_f_inverse, tau, CurveTriple, FramedCurve, Framing, Move,
    MoveKind, ReductionTrace,
};
use serde::{Deserialize, Serialize};

use crate::{MAX_K, MAX_M};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub k: String,
    pub m: String,
    pub start: Vec<[String; 3]>,
    pub moves: Vec<Move>,
    pub end: Vec<[String; 3]>,
}

fn encode_triple(t: &CurveTriple) -> Vec<[String; 3]> {
    t.0.iter()
        .map(|c| {
            [
                c.p().to_string(),
                c.q().to_string(),
                c.framing().sign().to_string(),
            ]
        })
        .collect()
}

fn decode_triple(field: &str, rows: &[[String; 3]]) -> Result<[FramedCurve; 3], String> {
    if rows.len() != 3 {
        return Err(format!("{field}: expected 3 curves, got {}", rows.len()));
    }
    let curve = |i: usize| -> Result<FramedCurve, String> {
        let [p, q, d] = &rows[i];
        let p = bigserde::parse(p).map_err(|e| format!("{field}[{i}].p: {e}"))?;
        let q = bigserde::parse(q).map_err(|e| format!("{field}[{i}].q: {e}"))?;
        let framing = match d.as_str() {
            "1" => Framing::Plus,
            "-1" => Framing::Minus,
            other => {
                return Err(format!(
                    "{field}[{i}]: framing must be 1 or -1, got {other:?}"
                ))
            }
        };
        FramedCurve::new(p, q, framing).map_err(|e| format!("{field}[{i}]: {e}"))
    };
    Ok([curve(0)?, curve(1)?, curve(2)?])
}

impl From<&ReductionTrace> for Certificate {
    fn from(trace: &ReductionTrace) -> Self {
        Certificate {
            k: trace.k.to_string(),
            m: trace.m.to_string(),
            start: encode_triple(&trace.start),
            moves: trace.moves.clone(),
            end: encode_triple(&trace.end),
        }
    }
}

/// A certificate whose fields are well formed.
#[derive(Debug, Clone)]
pub struct Decoded {
    pub k: i64,
    pub m: i64,
    pub start: [FramedCurve; 3],
    pub moves: Vec<Move>,
    pub end: [FramedCurve; 3],
}

impl Certificate {
    /// Accepts a bare certificate or any report carrying one under
    /// `"certificate"`.
    pub fn from_json(text: &str) -> Result<Self, String> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| format!("malformed JSON: {e}"))?;
        let inner = match value.get("certificate") {
            Some(c) => c.clone(),
            None => value,
        };
        serde_json::from_value(inner).map_err(|e| format!("malformed certificate: {e}"))
    }

    pub fn decode(&self) -> Result<Decoded, String> {
        let k = self.k.parse::<i64>().map_err(|e| format!("k: {e}"))?;
        let m = self.m.parse::<i64>().map_err(|e| format!("m: {e}"))?;
        Ok(Decoded {
            k,
            m,
            start: decode_triple("start", &self.start)?,
            moves: self.moves.clone(),
            end: decode_triple("end", &self.end)?,
        })
    }
}

/// One failed replay check: a locus and a message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub locus: String,
    pub message: String,
}

impl Failure {
    fn new(locus: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            locus: locus.into(),
            message: message.into(),
        }
    }
}

fn show(t: &[FramedCurve; 3]) -> String {
    format!("({}, {}, {})", t[0], t[1], t[2])
}

fn step(state: &mut [FramedCurve; 3], mv: &Move) -> Result<(), String> {
    match mv.kind {
        MoveKind::SignFlip => {
            if !(1..=3).contains(&mv.pos) {
                return Err(format!("sign flip position {} outside 1..=3", mv.pos));
            }
            let c = &state[mv.pos - 1];
            let flipped: BigInt = -c.p();
            state[mv.pos - 1] =
                FramedCurve::new(flipped, -c.q(), c.framing()).map_err(|e| e.to_string())?;
        }
        MoveKind::SlideForward | MoveKind::SlideBackward => {
            if !(1..=2).contains(&mv.pos) {
                return Err(format!("slide pair {} outside 1..=2", mv.pos));
            }
            let i = mv.pos - 1;
            let (x, y) = if mv.kind == MoveKind::SlideForward {
                slide_f(&state[i], &state[i + 1])
            } else {
                slide_f_inverse(&state[i], &state[i + 1])
            }
            .map_err(|e| e.to_string())?;
            state[i] = x;
            state[i + 1] = y;
        }
    }
    Ok(())
}

/// Replays `moves` from `start`, reporting the first move that fails.
pub fn replay(start: &[FramedCurve; 3], moves: &[Move]) -> Result<[FramedCurve; 3], Failure> {
    let mut state = start.clone();
    for (i, mv) in moves.iter().enumerate() {
        step(&mut state, mv).map_err(|e| Failure::new(format!("move {}", i + 1), e))?;
    }
    Ok(state)
}

fn normal_form() -> [FramedCurve; 3] {
    let c = |p: i64, q: i64, f| FramedCurve::new(p, q, f).expect("non-zero");
    [
        c(0, 1, Framing::Plus),
        c(1, 0, Framing::Minus),
        c(1, 0, Framing::Plus),
    ]
}

/// Every check a certificate must pass. An empty list means accepted.
pub fn check(cert: &Decoded) -> Vec<Failure> {
    let mut failures = Vec::new();
    let (k, m) = (cert.k, cert.m);
    if !(0..=MAX_K).contains(&k) || !(1..=MAX_M).contains(&m) || m % 2 == 0 {
        failures.push(Failure::new(
            "parameters",
            format!("need 0 <= k <= {MAX_K} and odd 1 <= m <= {MAX_M}, got k={k} m={m}"),
        ));
        return failures;
    }
    match tau(2 * k, m) {
        Ok(expected) if expected.0 == cert.start => {}
        Ok(expected) => failures.push(Failure::new(
            "start",
            format!("start {} is not tau_(2k,m) = {expected}", show(&cert.start)),
        )),
        Err(e) => failures.push(Failure::new("start", e.to_string())),
    }
    let expected_len = expected_move_count(k, m);
    if cert.moves.len() != expected_len {
        failures.push(Failure::new(
            "length",
            format!("{} moves, expected {expected_len}", cert.moves.len()),
        ));
    }
    match replay(&cert.start, &cert.moves) {
        Ok(end) if end == cert.end => {}
        Ok(end) => failures.push(Failure::new(
            "end",
            format!(
                "replay ends at {}, certificate claims {}",
                show(&end),
                show(&cert.end)
            ),
        )),
        Err(f) => failures.push(f),
    }
    if cert.end != normal_form() {
        failures.push(Failure::new(
            "normal_form",
            format!(
                "claimed end {} is not ((0,1)_1, (1,0)_-1, (1,0)_1)",
                show(&cert.end)
            ),
        ));
    }
    failures
}
