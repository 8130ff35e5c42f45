//! One function per subcommand, each returning a [`Report`].

use std::fmt::Write as _;

use rayon::prelude::*;
use rhb_core::{
    lens_from_string, markov_tree, string_product, verify_identity, Identity, PlumbingString,
};
use serde_json::{json, Value};

use crate::certificate::{self, Certificate};
use crate::pipeline::{run_cell, Cell};
use crate::{Report, UsageError, MAX_K, MAX_M};

const MAX_L: i64 = 1000;
const MAX_DEPTH: usize = 20;
const MAX_STRING_LEN: usize = 100_000;
const MAX_DUAL_WIDTH: i64 = 1_000_000;

/// CSV and text table columns, in order.
pub const TABLE_COLUMNS: [&str; 12] = [
    "k",
    "m",
    "p",
    "q",
    "lens_p",
    "lens_q",
    "smooth",
    "symplectic",
    "markov",
    "divides_q2_plus_9",
    "moves",
    "status",
];

fn envelope(command: String, ok: bool, fields: Value) -> Value {
    let mut out = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "ok": ok,
    });
    if let (Value::Object(out), Value::Object(fields)) = (&mut out, fields) {
        out.extend(fields);
    }
    out
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn check_k(k: i64, min: i64) -> Result<(), UsageError> {
    if k < min || k > MAX_K {
        return Err(usage(format!("--k must lie in {min}..={MAX_K}, got {k}")));
    }
    Ok(())
}

fn check_m(m: i64) -> Result<(), UsageError> {
    if m < 1 || m % 2 == 0 || m > MAX_M {
        return Err(usage(format!(
            "--m must be odd and lie in 1..={MAX_M}, got {m}"
        )));
    }
    Ok(())
}

fn cell_text(cell: &Cell) -> String {
    let mut s = String::new();
    let status = if cell.ok() { "ok" } else { "FAILED" };
    let _ = writeln!(s, "verify k={} m={}: {status}", cell.k, cell.m);
    if let Some(v) = &cell.verdict {
        let _ = writeln!(s, "  p = {}, q = {}", v.p, v.q);
        let r = v.record();
        let _ = writeln!(
            s,
            "  smooth: {}, symplectic: {}, markov: {}, p | q^2+9: {}",
            r.smooth, r.symplectic, r.markov, r.divides_q2_plus_9
        );
    }
    if let Some(b) = &cell.boundary {
        let _ = writeln!(s, "  boundary: {}", b.lens_space());
    }
    let _ = writeln!(s, "  moves: {}", cell.move_count());
    for c in &cell.checks {
        let mark = if c.ok { "pass" } else { "FAIL" };
        let _ = writeln!(s, "  [{mark}] {}: {}", c.name, c.detail);
    }
    s
}

pub fn verify(k: i64, m: i64) -> Result<Report, UsageError> {
    check_k(k, -1)?;
    check_m(m)?;
    let cell = run_cell(k, m);
    let ok = cell.ok();
    Ok(Report {
        ok,
        json: envelope(format!("verify --k {k} --m {m}"), ok, cell.to_json()),
        text: cell_text(&cell),
        csv: None,
    })
}

/// `k` in `k_min..=k_max`, odd `m` stepping by 2 from `m_min` up to `m_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub k_min: i64,
    pub k_max: i64,
    pub m_min: i64,
    pub m_max: i64,
}

impl GridSpec {
    pub fn new(k_min: i64, k_max: i64, m_min: i64, m_max: i64) -> Result<Self, UsageError> {
        if k_min < -1 {
            return Err(usage(format!(
                "k range must start at -1 or above, got {k_min}"
            )));
        }
        if k_max > MAX_K {
            return Err(usage(format!("k range must end at {MAX_K} or below")));
        }
        if m_min < 1 || m_min % 2 == 0 {
            return Err(usage(format!(
                "m range must start at an odd m >= 1, got {m_min}"
            )));
        }
        if m_max > MAX_M {
            return Err(usage(format!("m range must end at {MAX_M} or below")));
        }
        Ok(Self {
            k_min,
            k_max,
            m_min,
            m_max,
        })
    }

    pub fn parse(k_range: &str, m_range: &str) -> Result<Self, UsageError> {
        let (k_min, k_max) = crate::args::parse_range(k_range).map_err(UsageError)?;
        let (m_min, m_max) = crate::args::parse_range(m_range).map_err(UsageError)?;
        Self::new(k_min, k_max, m_min, m_max)
    }

    /// Cells in `(k, m)` lexicographic order.
    pub fn cells(&self) -> Vec<(i64, i64)> {
        (self.k_min..=self.k_max)
            .flat_map(|k| (self.m_min..=self.m_max).step_by(2).map(move |m| (k, m)))
            .collect()
    }
}

fn row(cell: &Cell) -> [String; 12] {
    let status = if cell.ok() {
        "ok".to_string()
    } else {
        format!("failed:{}", cell.failures().join(";"))
    };
    let (p, q, smooth, symplectic, markov, divides) = match &cell.verdict {
        Some(v) => {
            let r = v.record();
            (
                r.p,
                r.q,
                r.smooth.to_string(),
                r.symplectic.to_string(),
                r.markov.to_string(),
                r.divides_q2_plus_9.to_string(),
            )
        }
        None => Default::default(),
    };
    let (lens_p, lens_q) = cell
        .boundary
        .as_ref()
        .map(|b| {
            let l = b.lens_space();
            (l.p().to_string(), l.q().to_string())
        })
        .unwrap_or_default();
    [
        cell.k.to_string(),
        cell.m.to_string(),
        p,
        q,
        lens_p,
        lens_q,
        smooth,
        symplectic,
        markov,
        divides,
        cell.move_count().to_string(),
        status,
    ]
}

fn table_csv(rows: &[[String; 12]]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TABLE_COLUMNS).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn table_text(rows: &[[String; 12]]) -> String {
    let mut widths = TABLE_COLUMNS.map(str::len);
    for r in rows {
        for (w, f) in widths.iter_mut().zip(r) {
            *w = (*w).max(f.len());
        }
    }
    let line = |fields: Vec<&str>| {
        let cells: Vec<String> = fields
            .iter()
            .zip(widths)
            .map(|(f, w)| format!("{f:>w$}"))
            .collect();
        format!("{}\n", cells.join("  ").trim_end())
    };
    let mut out = line(TABLE_COLUMNS.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

pub fn table(grid: &GridSpec, jobs: Option<usize>) -> Result<Report, UsageError> {
    let cells = grid.cells();
    let work = || -> Vec<Cell> { cells.par_iter().map(|&(k, m)| run_cell(k, m)).collect() };
    let results = match jobs {
        Some(0) => return Err(usage("--jobs must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| usage(format!("cannot start {n} workers: {e}")))?
            .install(work),
        None => work(),
    };
    let rows: Vec<[String; 12]> = results.iter().map(row).collect();
    let ok = results.iter().all(Cell::ok);
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut obj = serde_json::Map::new();
            for (name, field) in TABLE_COLUMNS.iter().zip(r) {
                let v = match *name {
                    "divides_q2_plus_9" if !field.is_empty() => Value::Bool(field == "true"),
                    _ => Value::String(field.clone()),
                };
                obj.insert(name.to_string(), v);
            }
            Value::Object(obj)
        })
        .collect();
    let command = format!(
        "table --k-range {}:{} --m-range {}:{}",
        grid.k_min, grid.k_max, grid.m_min, grid.m_max
    );
    Ok(Report {
        ok,
        json: envelope(
            command,
            ok,
            json!({
                "grid": {
                    "k_min": grid.k_min.to_string(),
                    "k_max": grid.k_max.to_string(),
                    "m_min": grid.m_min.to_string(),
                    "m_max": grid.m_max.to_string(),
                },
                "rows": json_rows,
            }),
        ),
        text: table_text(&rows),
        csv: Some(table_csv(&rows)),
    })
}

pub fn trace(k: i64, m: i64) -> Result<Report, UsageError> {
    if k == -1 {
        return Err(usage(
            "k = -1 is the string (2,2,2) and has no reduction certificate",
        ));
    }
    check_k(k, 0)?;
    check_m(m)?;
    let trace = rhb_core::reduce_to_cp2(k, m);
    let command = format!("trace --k {k} --m {m}");
    Ok(match trace {
        Ok(t) => {
            let cert = Certificate::from(&t);
            let mut text = format!("start {}\n", t.start);
            for (i, mv) in t.moves.iter().enumerate() {
                let kind = serde_json::to_value(mv.kind).expect("plain enum");
                let _ = writeln!(
                    text,
                    "{:>4}  {} {}",
                    i + 1,
                    kind.as_str().unwrap_or(""),
                    mv.pos
                );
            }
            let _ = writeln!(text, "end   {}", t.end);
            Report {
                ok: true,
                json: envelope(
                    command,
                    true,
                    json!({"certificate": serde_json::to_value(&cert).expect("plain record")}),
                ),
                text,
                csv: None,
            }
        }
        Err(e) => Report {
            ok: false,
            json: envelope(command, false, json!({"error": e.to_string()})),
            text: format!("trace k={k} m={m}: FAILED: {e}\n"),
            csv: None,
        },
    })
}

pub fn verify_trace(text: &str) -> Result<Report, UsageError> {
    let cert = Certificate::from_json(text).map_err(UsageError)?;
    let decoded = cert.decode().map_err(UsageError)?;
    let failures = certificate::check(&decoded);
    let ok = failures.is_empty();
    let listed: Vec<Value> = failures
        .iter()
        .map(|f| json!({"locus": f.locus, "message": f.message}))
        .collect();
    let mut out = format!(
        "verify-trace k={} m={} ({} moves): {}\n",
        decoded.k,
        decoded.m,
        decoded.moves.len(),
        if ok { "ok" } else { "REJECTED" }
    );
    for f in &failures {
        let _ = writeln!(out, "  {}: {}", f.locus, f.message);
    }
    Ok(Report {
        ok,
        json: envelope(
            "verify-trace".into(),
            ok,
            json!({
                "k": cert.k,
                "m": cert.m,
                "moves": decoded.moves.len().to_string(),
                "failures": listed,
            }),
        ),
        text: out,
        csv: None,
    })
}

pub fn identities(l_max: i64) -> Result<Report, UsageError> {
    if !(1..=MAX_L).contains(&l_max) {
        return Err(usage(format!(
            "--l-max must lie in 1..={MAX_L}, got {l_max}"
        )));
    }
    let mut ok = true;
    let mut rows = Vec::new();
    let mut text = String::new();
    for id in Identity::ALL {
        let holds = verify_identity(id.number(), l_max).unwrap_or(false);
        ok &= holds;
        rows.push(json!({
            "number": id.number().to_string(),
            "statement": id.statement(),
            "l_min": id.first_index().to_string(),
            "holds": holds,
        }));
        let _ = writeln!(
            text,
            "({}) {:<42} l in [{}, {l_max}]: {}",
            id.number(),
            id.statement(),
            id.first_index(),
            if holds { "ok" } else { "FAILED" }
        );
    }
    Ok(Report {
        ok,
        json: envelope(
            format!("identities --l-max {l_max}"),
            ok,
            json!({"l_max": l_max.to_string(), "identities": rows}),
        ),
        text,
        csv: None,
    })
}

pub fn markov(depth: usize) -> Result<Report, UsageError> {
    if depth > MAX_DEPTH {
        return Err(usage(format!(
            "--depth must be at most {MAX_DEPTH}, got {depth}"
        )));
    }
    let tree = markov_tree(depth);
    let ok = tree.iter().all(|t| t.satisfies_equation());
    let numbers: std::collections::BTreeSet<_> = tree
        .iter()
        .flat_map(|t| t.entries().iter().cloned())
        .collect();
    let triples: Vec<Value> = tree
        .iter()
        .map(|t| {
            json!(t
                .entries()
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>())
        })
        .collect();
    let mut text = String::new();
    for t in &tree {
        let _ = writeln!(text, "{t}");
    }
    Ok(Report {
        ok,
        json: envelope(
            format!("markov --depth {depth}"),
            ok,
            json!({
                "depth": depth.to_string(),
                "count": tree.len().to_string(),
                "triples": triples,
                "numbers": numbers.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
            }),
        ),
        text,
        csv: None,
    })
}

pub fn string(literal: &str) -> Result<Report, UsageError> {
    let s: PlumbingString = literal
        .parse()
        .map_err(|e| usage(format!("cannot parse {literal:?}: {e}")))?;
    if s.len() > MAX_STRING_LEN {
        return Err(usage(format!(
            "string has {} entries, at most {MAX_STRING_LEN} allowed",
            s.len()
        )));
    }
    let column = string_product(&s).first_column();
    let lens = lens_from_string(&s);
    let fraction = s.hj_evaluate().ok().map(|f| f.to_string());
    let admissible = !s.is_empty() && s.entries().iter().all(|&a| a >= 2);
    let narrow = s
        .entries()
        .iter()
        .try_fold(0i64, |acc, &a| acc.checked_add(a.saturating_sub(2)))
        .is_some_and(|w| w < MAX_DUAL_WIDTH);
    let dual = (admissible && narrow)
        .then(|| s.riemenschneider_dual().ok())
        .flatten()
        .map(|d| d.to_string());
    let blow = s.blow_down_to_zero();
    let p2 = lens.as_p2_pq_minus_1();

    let mut text = format!("string: {s}\n");
    let _ = writeln!(text, "length: {}", s.len());
    let _ = writeln!(text, "first column: {column}");
    let _ = writeln!(text, "lens space: {lens}");
    if let Some(f) = &fraction {
        let _ = writeln!(text, "continued fraction: {f}");
    }
    if let Some(d) = &dual {
        let _ = writeln!(text, "dual: {d}");
    }
    let _ = writeln!(text, "blows down to (0): {}", blow.reaches_zero);
    if let Some((p, q)) = &p2 {
        let _ = writeln!(text, "of the form L(p^2, pq - 1) with p = {p}, q = {q}");
    }

    Ok(Report {
        ok: true,
        json: envelope(
            format!("string {literal}"),
            true,
            json!({
                "string": s.to_string(),
                "length": s.len().to_string(),
                "first_column": [column.p.to_string(), column.q.to_string()],
                "lens": {"p": lens.p().to_string(), "q": lens.q().to_string()},
                "continued_fraction": fraction,
                "dual": dual,
                "blows_down_to_zero": blow.reaches_zero,
                "blow_down_positions": blow.positions.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "p2_pq_minus_1": p2.map(|(p, q)| json!({"p": p.to_string(), "q": q.to_string()})),
            }),
        ),
        text,
        csv: None,
    })
}
