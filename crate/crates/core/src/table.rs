//! The overview table of worked examples: expected classes and their
//! recomputation.

use serde::Serialize;

use crate::bits::binomial;
use crate::builders::build;
use crate::engine::{Engine, Options, Subject};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub builder: String,
    /// Expected `[Y°]`; None where the table prints "?".
    pub ytorus: Option<i64>,
    pub y: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowResult {
    pub row: Row,
    pub edges: usize,
    pub rank: usize,
    pub y: Option<i64>,
    pub ytorus: Option<i64>,
    pub ok: bool,
    pub millis: u128,
}

fn sign(n: usize) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn row(builder: impl Into<String>, ytorus: Option<i64>, y: i64) -> Row {
    Row { builder: builder.into(), ytorus, y }
}

/// Family rows use sizes up to `max_n` (at least the ranges of the table).
pub fn rows(max_n: usize) -> Vec<Row> {
    let mut out = Vec::new();
    for n in 1..=4 {
        let d = i64::from(n == 1);
        out.push(row(format!("T {n}"), Some(d), d));
    }
    for n in 3..=max_n.max(6) {
        out.push(row(format!("C {n}"), Some(sign(n - 1)), sign(n - 1)));
    }
    for n in 2..=max_n.max(5) {
        out.push(row(format!("B {n}"), Some(sign(n - 1)), 1));
    }
    let c2 = |n: usize| binomial(n as u64, 2) as i64;
    for n in 3..=max_n {
        out.push(row(format!("W {n}"), Some(-c2(n)), 0));
    }
    for n in 3..=max_n {
        out.push(row(format!("Whats {n}"), Some(-c2(n)), -c2(n)));
    }
    for n in 3..=max_n {
        out.push(row(format!("WhatsOverF {n}"), Some(c2(n)), n as i64 - 1));
    }
    for (b, yt, y) in [
        ("k2-join-p3", 10, 0),
        ("prism", 10, 1),
        ("prism-chord", -15, 0),
        ("2k1-join-p4", 28, 0),
        ("2k1-join-p4-dual", 28, 1),
        ("k2-join-p4", -36, 0),
        ("ladder", -36, -2),
        ("K 3 3", 16, 1),
    ] {
        out.push(row(b, Some(yt), y));
    }
    out.push(row("octahedron", None, -1));
    out
}

pub fn evaluate(r: &Row, opts: &Options) -> Result<RowResult> {
    let start = std::time::Instant::now();
    let g = build(&r.builder)?;
    let s = Subject::from_graph(&g)?;
    let mut engine = Engine::new(opts.clone());
    let a = engine.analyze(&s);
    let y = a.y.result.known();
    let ytorus = a.ytorus.result.known();
    let ok = y == Some(r.y) && (r.ytorus.is_none() || ytorus == r.ytorus);
    Ok(RowResult {
        row: r.clone(),
        edges: s.matroid().size(),
        rank: s.matroid().rank(),
        y,
        ytorus,
        ok,
        millis: start.elapsed().as_millis(),
    })
}
