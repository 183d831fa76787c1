//! Edge-list parsing and named graph families.
//!
//! Edge lists hold one edge per line as `u v [label]`; `#` starts a comment
//! and blank lines are ignored. Unlabeled edges are named `e<k>` after their
//! position.

use crate::error::{Error, Result};
use crate::graph::Multigraph;

const FIXED: &[(&str, &str)] = &[
    ("k2-join-p3", include_str!("../data/k2-join-p3.edges")),
    ("prism", include_str!("../data/prism.edges")),
    ("prism-chord", include_str!("../data/prism-chord.edges")),
    ("2k1-join-p4", include_str!("../data/2k1-join-p4.edges")),
    ("2k1-join-p4-dual", include_str!("../data/2k1-join-p4-dual.edges")),
    ("k2-join-p4", include_str!("../data/k2-join-p4.edges")),
    ("ladder", include_str!("../data/ladder.edges")),
];

pub fn parse_edge_list(text: &str) -> Result<Multigraph> {
    let mut g = Multigraph::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let label = match fields.len() {
            2 => format!("e{}", g.edge_count()),
            3 => fields[2].to_string(),
            n => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected `u v [label]`, found {n} fields"),
                })
            }
        };
        g.add_edge(&label, fields[0], fields[1]).map_err(|e| Error::Parse {
            line: lineno + 1,
            msg: e.to_string(),
        })?;
    }
    if g.edge_count() == 0 {
        return Err(Error::Parse { line: 0, msg: "no edges".into() });
    }
    Ok(g)
}

/// Serializes every edge with its label. Vertices without edges are lost.
pub fn to_edge_list(g: &Multigraph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        out.push_str(&format!("{} {} {}\n", g.vertices()[e.u], g.vertices()[e.v], e.label));
    }
    out
}

/// Names accepted by [`build`].
pub fn builder_names() -> Vec<String> {
    let mut names: Vec<String> = [
        "T n", "C n", "B n", "K n", "K m n", "W n", "Whats n", "WhatsOverF n", "WhatsOverFDiv n",
        "octahedron", "diamond",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    names.extend(FIXED.iter().map(|(n, _)| n.to_string()));
    names
}

/// Builds a graph from an expression such as `C 5`, `K 3 3` or `octahedron`.
pub fn build(expr: &str) -> Result<Multigraph> {
    let parts: Vec<&str> = expr.split_whitespace().collect();
    let bad = |msg: &str| Error::Invalid(format!("builder `{expr}`: {msg}"));
    let (name, args) = parts.split_first().ok_or_else(|| bad("empty expression"))?;
    let nums: Vec<usize> =
        args.iter().map(|a| a.parse::<usize>()).collect::<std::result::Result<_, _>>().map_err(|_| bad("expected integers"))?;
    let one = |min: usize| -> Result<usize> {
        match nums.as_slice() {
            [n] if *n >= min => Ok(*n),
            [_] => Err(bad(&format!("size must be at least {min}"))),
            _ => Err(bad("expected one size argument")),
        }
    };
    match *name {
        "T" => Ok(path(one(1)?)),
        "C" => Ok(cycle(one(1)?)),
        "B" => Ok(banana(one(1)?)),
        "K" => match nums.as_slice() {
            [n] if *n >= 2 => Ok(complete(*n)),
            [m, n] if *m >= 1 && *n >= 1 => Ok(complete_bipartite(*m, *n)),
            _ => Err(bad("expected `K n` (n >= 2) or `K m n`")),
        },
        "W" => Ok(wheel(one(3)?)),
        "Whats" => Ok(divided_wheel(one(3)?, false, false)),
        "WhatsOverF" => Ok(divided_wheel(one(3)?, true, false)),
        "WhatsOverFDiv" => Ok(divided_wheel(one(3)?, true, true)),
        "octahedron" if nums.is_empty() => Ok(octahedron()),
        "diamond" if nums.is_empty() => Ok(diamond()),
        other => match FIXED.iter().find(|(n, _)| *n == other) {
            Some((_, text)) if nums.is_empty() => parse_edge_list(text),
            _ => Err(bad("unknown builder")),
        },
    }
}

fn from_edges(edges: &[(String, String, String)]) -> Multigraph {
    let mut g = Multigraph::new();
    for (label, u, v) in edges {
        g.add_edge(label, u, v).expect("builder labels are distinct");
    }
    g
}

fn v(i: usize) -> String {
    format!("v{i}")
}

pub fn path(n: usize) -> Multigraph {
    let edges: Vec<_> = (0..n).map(|i| (format!("e{i}"), v(i), v(i + 1))).collect();
    from_edges(&edges)
}

pub fn cycle(n: usize) -> Multigraph {
    let edges: Vec<_> = (0..n).map(|i| (format!("e{i}"), v(i), v((i + 1) % n))).collect();
    from_edges(&edges)
}

pub fn banana(n: usize) -> Multigraph {
    let edges: Vec<_> = (0..n).map(|i| (format!("e{i}"), v(0), v(1))).collect();
    from_edges(&edges)
}

pub fn complete(n: usize) -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((format!("e{}", edges.len()), v(i), v(j)));
        }
    }
    from_edges(&edges)
}

pub fn complete_bipartite(m: usize, n: usize) -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..m {
        for j in 0..n {
            edges.push((format!("e{}", edges.len()), format!("a{i}"), format!("b{j}")));
        }
    }
    from_edges(&edges)
}

/// Wheel with `n` spokes `s<i>` from `hub` to `r<i>` and rim edges `t<i>`.
pub fn wheel(n: usize) -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((format!("s{i}"), "hub".to_string(), format!("r{i}")));
    }
    for i in 0..n {
        edges.push((format!("t{i}"), format!("r{i}"), format!("r{}", (i + 1) % n)));
    }
    from_edges(&edges)
}

/// Wheel with every edge replaced by two edges in series. Spoke `i` becomes
/// `s<i>a` (hub side) and `s<i>b`; rim edge `i` becomes `t<i>a`, `t<i>b`.
/// With `keep_spoke` the first spoke stays a single edge `s0`; with
/// `extra_division` the rim half-edge `t0a` is divided once more.
fn divided_wheel(n: usize, keep_spoke: bool, extra_division: bool) -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..n {
        if keep_spoke && i == 0 {
            edges.push(("s0".to_string(), "hub".to_string(), "r0".to_string()));
        } else {
            edges.push((format!("s{i}a"), "hub".to_string(), format!("p{i}")));
            edges.push((format!("s{i}b"), format!("p{i}"), format!("r{i}")));
        }
    }
    for i in 0..n {
        let next = format!("r{}", (i + 1) % n);
        if extra_division && i == 0 {
            edges.push(("t0a".to_string(), "r0".to_string(), "x0".to_string()));
            edges.push(("t0c".to_string(), "x0".to_string(), "q0".to_string()));
        } else {
            edges.push((format!("t{i}a"), format!("r{i}"), format!("q{i}")));
        }
        edges.push((format!("t{i}b"), format!("q{i}"), next));
    }
    from_edges(&edges)
}

/// Complete tripartite graph on three antipodal pairs.
pub fn octahedron() -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            if i / 2 != j / 2 {
                edges.push((format!("e{}", edges.len()), v(i), v(j)));
            }
        }
    }
    from_edges(&edges)
}

/// Square with one diagonal.
pub fn diamond() -> Multigraph {
    let edges: Vec<_> = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| (format!("e{k}"), v(a), v(b)))
        .collect();
    from_edges(&edges)
}
