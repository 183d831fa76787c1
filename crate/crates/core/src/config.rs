//! Integer realizations of matroids and their configuration polynomials.
//!
//! A [`Configuration`] stores a full-row-rank integer matrix whose row space
//! is the configuration. Its polynomial has one term per basis `B`, with
//! coefficient `det(A_B)^2`; equivalently it is `det(A diag(x) A^T)`, which
//! is what [`GramForm`] evaluates over GF(p).

use serde::Serialize;

use crate::bits::{ones, subsets_of_size, Mask, MAX_GROUND};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::graph::Multigraph;
use crate::linalg;
use crate::matroid::Matroid;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    rows: Vec<Vec<i64>>,
    labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigPolynomial {
    size: usize,
    rank: usize,
    labels: Vec<String>,
    terms: Vec<(Mask, i128)>,
}

#[derive(Serialize)]
struct TermJson {
    basis: Vec<String>,
    coeff: i128,
}

impl Configuration {
    /// Rows must be linearly independent.
    pub fn new(rows: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_GROUND {
            return Err(Error::CapExceeded { size: n, cap: MAX_GROUND });
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("row length differs from label count".into()));
        }
        let rank = linalg::rank(&rows, n)?;
        if rank != rows.len() {
            return Err(Error::RankDeficient { rank, rows: rows.len() });
        }
        Ok(Configuration { rows, labels })
    }

    /// Keeps a maximal independent subset of `rows`.
    pub fn from_spanning_rows(rows: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self> {
        let keep = linalg::independent_rows(&rows, labels.len())?;
        let rows = keep.into_iter().map(|i| rows[i].clone()).collect();
        Self::new(rows, labels)
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn matroid(&self) -> Result<Matroid> {
        Matroid::from_matrix(&self.rows, self.labels.clone())
    }

    fn columns(&self, keep: Mask) -> (Vec<Vec<i64>>, Vec<String>) {
        let rows = self.rows.iter().map(|r| ones(keep).map(|c| r[c]).collect()).collect();
        (rows, ones(keep).map(|c| self.labels[c].clone()).collect())
    }

    /// `W|S`: coordinate projection onto `S`.
    pub fn restrict(&self, s: Mask) -> Result<Configuration> {
        let (rows, labels) = self.columns(s);
        Self::from_spanning_rows(rows, labels)
    }

    pub fn delete(&self, s: Mask) -> Result<Configuration> {
        self.restrict(crate::bits::full(self.size()) & !s)
    }

    /// `W/S`: vectors of `W` vanishing on `S`, projected to the complement.
    pub fn contract(&self, s: Mask) -> Result<Configuration> {
        let r = self.rank();
        let keep = crate::bits::full(self.size()) & !s;
        // y^T A with y^T A_S = 0, i.e. y in the kernel of A_S^T
        let ast: Vec<Vec<i64>> = ones(s).map(|c| self.rows.iter().map(|row| row[c]).collect()).collect();
        let ys = linalg::kernel_basis(&ast, r)?;
        let mut rows = Vec::with_capacity(ys.len());
        for y in &ys {
            let mut row = Vec::new();
            for c in ones(keep) {
                let mut acc: i64 = 0;
                for (k, &yk) in y.iter().enumerate() {
                    acc = yk
                        .checked_mul(self.rows[k][c])
                        .and_then(|t| acc.checked_add(t))
                        .ok_or(Error::Overflow)?;
                }
                row.push(acc);
            }
            rows.push(row);
        }
        let labels = ones(keep).map(|c| self.labels[c].clone()).collect();
        Self::from_spanning_rows(rows, labels)
    }

    /// Orthogonal complement under the standard pairing.
    pub fn dual(&self) -> Result<Configuration> {
        let rows = linalg::kernel_basis(&self.rows, self.size())?;
        Self::new(rows, self.labels.clone())
    }

    pub fn polynomial(&self) -> Result<ConfigPolynomial> {
        let (n, r) = (self.size(), self.rank());
        let mut terms = Vec::new();
        for b in subsets_of_size(n, r) {
            let m = self.rows.iter().map(|row| ones(b).map(|c| row[c] as i128).collect()).collect();
            let d = linalg::det(m)?;
            if d != 0 {
                terms.push((b, d.checked_mul(d).ok_or(Error::Overflow)?));
            }
        }
        Ok(ConfigPolynomial { size: n, rank: r, labels: self.labels.clone(), terms })
    }

    pub fn gram_form(&self, f: &Fp) -> GramForm {
        GramForm::new(&self.rows, self.size(), f)
    }
}

/// Incidence configuration: one row per vertex except the least vertex of
/// each component. Edge `{u, v}` with `u < v` gets `-1` at `u` and `+1` at
/// `v`; loops give zero columns.
pub fn incidence_configuration(g: &Multigraph) -> Configuration {
    let n = g.edge_count();
    let mut rows = Vec::new();
    for comp in g.connected_components() {
        for &v in &comp[1..] {
            let mut row = vec![0i64; n];
            for (k, e) in g.edges().iter().enumerate() {
                if e.is_loop() {
                    continue;
                }
                if v == e.u.max(e.v) {
                    row[k] = 1;
                } else if v == e.u.min(e.v) {
                    row[k] = -1;
                }
            }
            rows.push(row);
        }
    }
    Configuration { rows, labels: g.edge_labels() }
}

/// `r x n` Vandermonde matrix on the nodes `1..=n`; realizes `U_{r,n}` over
/// the rationals, and over GF(p) only when `p >= n`.
pub fn vandermonde_realization(r: usize, n: usize) -> Configuration {
    let rows = (0..r).map(|k| (1..=n as i64).map(|x| x.pow(k as u32)).collect()).collect();
    Configuration { rows, labels: (0..n).map(|i| i.to_string()).collect() }
}

impl ConfigPolynomial {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn degree(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &[(Mask, i128)] {
        &self.terms
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Overwrites one coefficient; for negative controls.
    pub fn with_coefficient(mut self, basis: Mask, coeff: i128) -> Self {
        match self.terms.iter_mut().find(|(b, _)| *b == basis) {
            Some(t) => t.1 = coeff,
            None => {
                self.terms.push((basis, coeff));
                self.terms.sort_unstable();
            }
        }
        self
    }

    pub fn evaluate_mod_p(&self, x: &[u32], f: &Fp) -> u32 {
        let mut acc = 0;
        for &(b, c) in &self.terms {
            let mut t = f.reduce(c);
            for e in ones(b) {
                t = f.mul(t, x[e]);
            }
            acc = f.add(acc, t);
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|&(b, c)| TermJson { basis: ones(b).map(|i| self.labels[i].clone()).collect(), coeff: c })
            .collect();
        serde_json::to_value(terms).expect("plain data serializes")
    }
}

/// `x -> det(A diag(x) A^T)` over GF(p), with each column's outer product
/// precomputed as a sparse list.
#[derive(Clone, Debug)]
pub struct GramForm {
    r: usize,
    n: usize,
    outer: Vec<Vec<(usize, u32)>>,
    field: Fp,
}

impl GramForm {
    pub fn new(rows: &[Vec<i64>], n: usize, f: &Fp) -> Self {
        let r = rows.len();
        let outer = (0..n)
            .map(|c| {
                let col: Vec<u32> = rows.iter().map(|row| f.reduce(row[c] as i128)).collect();
                let mut out = Vec::new();
                for i in 0..r {
                    for j in 0..r {
                        let v = f.mul(col[i], col[j]);
                        if v != 0 {
                            out.push((i * r + j, v));
                        }
                    }
                }
                out
            })
            .collect();
        GramForm { r, n, outer, field: f.clone() }
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Fp {
        &self.field
    }

    /// Adds `w * a_e a_e^T` to the `r x r` matrix `m`.
    #[inline]
    pub fn accumulate(&self, e: usize, w: u32, m: &mut [u32]) {
        if w == 0 {
            return;
        }
        let f = &self.field;
        for &(k, v) in &self.outer[e] {
            m[k] = f.add(m[k], f.mul(w, v));
        }
    }

    pub fn evaluate(&self, x: &[u32], scratch: &mut Vec<u32>) -> u32 {
        scratch.clear();
        scratch.resize(self.r * self.r, 0);
        for (e, &w) in x.iter().enumerate() {
            self.accumulate(e, w, scratch);
        }
        self.field.det_in_place(scratch, self.r)
    }
}

/// Reduced weighted Laplacian determinant: delete the least vertex of each
/// component, weight edge `e` by `x[e]`.
pub fn evaluate_graph_via_laplacian(g: &Multigraph, x: &[u32], f: &Fp) -> u32 {
    let nv = g.vertex_count();
    let mut index = vec![usize::MAX; nv];
    let mut r = 0;
    for comp in g.connected_components() {
        for &v in &comp[1..] {
            index[v] = r;
            r += 1;
        }
    }
    let mut m = vec![0u32; r * r];
    for (e, edge) in g.edges().iter().enumerate() {
        if edge.is_loop() {
            continue;
        }
        let (a, b) = (index[edge.u], index[edge.v]);
        let w = x[e];
        if a != usize::MAX {
            m[a * r + a] = f.add(m[a * r + a], w);
        }
        if b != usize::MAX {
            m[b * r + b] = f.add(m[b * r + b], w);
        }
        if a != usize::MAX && b != usize::MAX {
            m[a * r + b] = f.sub(m[a * r + b], w);
            m[b * r + a] = f.sub(m[b * r + a], w);
        }
    }
    f.det_in_place(&mut m, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build;

    #[test]
    fn triangle_polynomial() {
        let c3 = incidence_configuration(&build("C 3").unwrap());
        assert_eq!(c3.rank(), 2);
        let poly = c3.polynomial().unwrap();
        assert_eq!(poly.terms(), &[(0b011, 1), (0b101, 1), (0b110, 1)]);
        let f = Fp::new(3).unwrap();
        assert_eq!(poly.evaluate_mod_p(&[1, 1, 1], &f), 0);
        assert_eq!(poly.evaluate_mod_p(&[1, 1, 0], &f), 1);
    }

    #[test]
    fn loops_are_zero_columns() {
        let g = crate::builders::parse_edge_list("a b\nb c\nc a\na a l\n").unwrap();
        let m = incidence_configuration(&g).matroid().unwrap();
        assert_eq!(m.loops(), 0b1000);
    }

    #[test]
    fn rank_zero_polynomial_is_one() {
        let w = Configuration::new(vec![], vec!["a".into(), "b".into()]).unwrap();
        let poly = w.polynomial().unwrap();
        assert_eq!(poly.terms(), &[(0, 1)]);
        assert_eq!(poly.evaluate_mod_p(&[2, 0], &Fp::new(5).unwrap()), 1);
    }

    #[test]
    fn vandermonde_coefficients() {
        let poly = vandermonde_realization(2, 3).polynomial().unwrap();
        assert_eq!(poly.terms(), &[(0b011, 1), (0b101, 4), (0b110, 1)]);
        assert_eq!(vandermonde_realization(2, 4).matroid().unwrap().uniform_signature(), Some((2, 4)));
        assert_eq!(vandermonde_realization(4, 4).matroid().unwrap().uniform_signature(), Some((4, 4)));
        assert_eq!(vandermonde_realization(1, 5).rows(), &[vec![1, 1, 1, 1, 1]]);
    }

    #[test]
    fn small_laplacians() {
        let f5 = Fp::new(5).unwrap();
        assert_eq!(evaluate_graph_via_laplacian(&build("T 1").unwrap(), &[2], &f5), 2);
        let f3 = Fp::new(3).unwrap();
        assert_eq!(evaluate_graph_via_laplacian(&build("B 2").unwrap(), &[1, 1], &f3), 2);
    }

    #[test]
    fn minors_match_matroid_minors() {
        let g = build("W 4").unwrap();
        let w = incidence_configuration(&g);
        let m = w.matroid().unwrap();
        for s in [0b1u32, 0b101, 0b1001_0000] {
            assert_eq!(w.contract(s).unwrap().matroid().unwrap(), m.contract(s));
            assert_eq!(w.delete(s).unwrap().matroid().unwrap(), m.delete(s));
        }
        assert_eq!(w.dual().unwrap().matroid().unwrap(), m.dual());
    }
}
