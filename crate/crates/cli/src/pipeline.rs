//! The per-cell check pipeline shared by `verify` and `table`.

use num_bigint::BigInt;
use rhb_core::{
    boundary_pq, expected_move_count, lens_from_string, q2_plus_9_identity_check, reduce_to_cp2,
    starting_triple, string_product, symplectic_verdict, BoundaryInvariants, EmbeddingVerdict,
    PlumbingString, ReductionTrace, Symplectic,
};
use serde_json::{json, Value};

use crate::certificate::{self, Certificate};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            ok: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            ok: false,
            detail: detail.into(),
        }
    }

    fn from_result(name: &'static str, r: Result<String, String>) -> Self {
        match r {
            Ok(d) => Self::pass(name, d),
            Err(d) => Self::fail(name, d),
        }
    }
}

/// Everything computed for one `(k, m)`.
#[derive(Debug, Clone)]
pub struct Cell {
    pub k: i64,
    pub m: i64,
    pub checks: Vec<Check>,
    pub trace: Option<ReductionTrace>,
    pub boundary: Option<BoundaryInvariants>,
    pub verdict: Option<EmbeddingVerdict>,
}

impl Cell {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.ok)
            .map(|c| c.name)
            .collect()
    }

    pub fn move_count(&self) -> usize {
        self.trace.as_ref().map_or(0, |t| t.moves.len())
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "ok": c.ok, "detail": c.detail}))
            .collect();
        let lens = self.boundary.as_ref().map(|b| {
            let l = b.lens_space();
            json!({"p": l.p().to_string(), "q": l.q().to_string()})
        });
        json!({
            "k": self.k.to_string(),
            "m": self.m.to_string(),
            "ok": self.ok(),
            "failures": self.failures(),
            "checks": checks,
            "moves": self.move_count().to_string(),
            "boundary_lens": lens,
            "verdict": self.verdict.as_ref().map(|v| serde_json::to_value(v.record()).expect("plain record")),
            "certificate": self.trace.as_ref().map(|t| serde_json::to_value(Certificate::from(t)).expect("plain record")),
        })
    }
}

fn s1_x_s2_check(k: i64, m: i64) -> Result<String, String> {
    let strings = [
        ("s'", PlumbingString::s_prime(k, m)),
        ("s''", PlumbingString::s_double_prime(k, m)),
    ];
    for (name, s) in strings {
        let s = s.map_err(|e| format!("{name}: {e}"))?;
        if !s.blows_down_to_zero() {
            return Err(format!("{name} = {s} does not blow down to (0)"));
        }
        let col = string_product(&s).first_column();
        let unit = BigInt::from(1);
        if !(col.p == BigInt::from(0) && (col.q == unit || col.q == -unit)) {
            return Err(format!("{name}: first column {col} is not (0, ±1)"));
        }
    }
    Ok("s' and s'' blow down to (0)".into())
}

fn lens_form_check(k: i64, m: i64, b: &BoundaryInvariants) -> Result<String, String> {
    let s = PlumbingString::s(k, m).map_err(|e| e.to_string())?;
    let lens = lens_from_string(&s);
    let q = &b.q % &b.p;
    let expected_q = q.clone().min(&b.p - &q);
    match lens.as_p2_pq_minus_1() {
        Some((p, q)) if p == b.p && q == expected_q => {
            Ok(format!("{lens} = L({p}^2, {p}*{q} - 1)"))
        }
        other => Err(format!(
            "{lens} read back as {other:?}, expected p={} q={expected_q}",
            b.p
        )),
    }
}

fn reduction_checks(k: i64, m: i64, checks: &mut Vec<Check>) -> Option<ReductionTrace> {
    checks.push(Check::from_result(
        "starting_triple",
        starting_triple(k, m)
            .map(|t| format!("meridians of s' give {t}"))
            .map_err(|e| e.to_string()),
    ));
    let trace = match reduce_to_cp2(k, m) {
        Ok(t) => t,
        Err(e) => {
            checks.push(Check::fail("reduction", e.to_string()));
            return None;
        }
    };
    checks.push(Check::pass(
        "reduction",
        format!("{} -> {}", trace.start, trace.end),
    ));

    let expected = expected_move_count(k, m);
    checks.push(if trace.moves.len() == expected {
        Check::pass("move_count", format!("{expected} = (2k+1) + (m-1) + 3"))
    } else {
        Check::fail(
            "move_count",
            format!("{} moves, expected {expected}", trace.moves.len()),
        )
    });

    let replayed = Certificate::from(&trace)
        .decode()
        .map(|d| certificate::check(&d))
        .map_err(|e| e.to_string());
    checks.push(match replayed {
        Ok(f) if f.is_empty() => Check::pass("replay", "certificate replays to the normal form"),
        Ok(f) => Check::fail(
            "replay",
            f.iter()
                .map(|f| format!("{}: {}", f.locus, f.message))
                .collect::<Vec<_>>()
                .join("; "),
        ),
        Err(e) => Check::fail("replay", e),
    });
    Some(trace)
}

/// Runs every check for `(k, m)`; `m` odd, `k >= -1`.
pub fn run_cell(k: i64, m: i64) -> Cell {
    log::debug!("cell k={k} m={m}");
    let mut checks = Vec::new();

    let trace = if k == -1 {
        let s = PlumbingString::s(k, m);
        checks.push(Check::from_result(
            "degenerate_string",
            match s {
                Ok(s) if s.entries() == [2, 2, 2] => Ok("s = (2,2,2), no reduction needed".into()),
                Ok(s) => Err(format!("s = {s}, expected (2,2,2)")),
                Err(e) => Err(e.to_string()),
            },
        ));
        None
    } else {
        reduction_checks(k, m, &mut checks)
    };

    let boundary = match boundary_pq(k, m) {
        Ok(b) => {
            checks.push(Check::pass("boundary", format!("p = {}, q = {}", b.p, b.q)));
            Some(b)
        }
        Err(e) => {
            checks.push(Check::fail("boundary", e.to_string()));
            None
        }
    };
    if let Some(b) = &boundary {
        checks.push(Check::from_result("lens_form", lens_form_check(k, m, b)));
    }
    checks.push(Check::from_result("s1_x_s2", s1_x_s2_check(k, m)));
    checks.push(if q2_plus_9_identity_check(k, m) {
        Check::pass("q2_plus_9_identity", "q^2 + 9 = p*T + 8")
    } else {
        Check::fail("q2_plus_9_identity", "q^2 + 9 != p*T + 8")
    });

    let verdict = match symplectic_verdict(k, m) {
        Ok(v) => {
            let expected = if k == -1 {
                Symplectic::Yes
            } else {
                Symplectic::Obstructed
            };
            checks.push(if v.symplectic == expected && v.smooth {
                Check::pass("verdict", format!("symplectic: {}", v.symplectic.label()))
            } else {
                Check::fail(
                    "verdict",
                    format!(
                        "symplectic: {}, expected {}",
                        v.symplectic.label(),
                        expected.label()
                    ),
                )
            });
            Some(v)
        }
        Err(e) => {
            checks.push(Check::fail("verdict", e.to_string()));
            None
        }
    };

    Cell {
        k,
        m,
        checks,
        trace,
        boundary,
        verdict,
    }
}
