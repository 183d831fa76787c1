//! Matroids given by an explicit list of bases over a ground set `0..n`.
//!
//! Bases are stored as sorted bit masks, so minors and duals are plain set
//! algebra. Element labels travel with every operation.

use std::collections::HashMap;

use serde::Serialize;

use crate::bits::{self, compress, full, ones, subsets_of_size, Mask, MAX_GROUND};
use crate::error::{Error, Result};
use crate::graph::{Multigraph, UnionFind};
use crate::linalg;

/// Default ground-set cap for enumerating bases of graphs.
pub const DEFAULT_GRAPH_CAP: usize = 24;
/// Default cap for enumerating all subsets of the ground set.
pub const DEFAULT_SUBSET_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matroid {
    size: usize,
    rank: usize,
    bases: Vec<Mask>,
    labels: Vec<String>,
}

/// Labeled-isomorphism key: identical for equal basis families on the same
/// dense ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatroidKey {
    pub size: u8,
    pub bases: Vec<Mask>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ElementClass {
    pub is_loop: bool,
    pub is_coloop: bool,
    pub parallel: Vec<usize>,
    pub series: Vec<usize>,
}

impl Matroid {
    pub fn from_bases(size: usize, mut bases: Vec<Mask>, labels: Vec<String>) -> Result<Self> {
        if size > MAX_GROUND {
            return Err(Error::CapExceeded { size, cap: MAX_GROUND });
        }
        if labels.len() != size {
            return Err(Error::Invalid(format!("{} labels for {size} elements", labels.len())));
        }
        bases.sort_unstable();
        bases.dedup();
        let Some(&first) = bases.first() else {
            return Err(Error::Invalid("a matroid needs at least one basis".into()));
        };
        let rank = first.count_ones() as usize;
        if bases.iter().any(|b| b.count_ones() as usize != rank || b & !full(size) != 0) {
            return Err(Error::Invalid("bases differ in size or leave the ground set".into()));
        }
        Ok(Matroid { size, rank, bases, labels })
    }

    fn from_sorted(size: usize, bases: Vec<Mask>, labels: Vec<String>) -> Self {
        let rank = bases[0].count_ones() as usize;
        Matroid { size, rank, bases, labels }
    }

    /// Uniform matroid `U_{r,n}` with labels `0..n`.
    pub fn uniform(r: usize, n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_sorted(n, subsets_of_size(n, r).collect(), labels)
    }

    /// Cycle matroid: bases are the maximal spanning forests.
    pub fn from_graph(g: &Multigraph, cap: usize) -> Result<Self> {
        let n = g.edge_count();
        if n > cap.min(MAX_GROUND) {
            return Err(Error::CapExceeded { size: n, cap: cap.min(MAX_GROUND) });
        }
        let r = g.vertex_count() - g.connected_components().len();
        let edges = g.edges();
        let bases = subsets_of_size(n, r)
            .filter(|&s| {
                let mut uf = UnionFind::new(g.vertex_count());
                ones(s).all(|i| uf.union(edges[i].u, edges[i].v))
            })
            .collect();
        Ok(Self::from_sorted(n, bases, g.edge_labels()))
    }

    /// Column matroid of a full-row-rank integer matrix.
    pub fn from_matrix(rows: &[Vec<i64>], labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_GROUND {
            return Err(Error::CapExceeded { size: n, cap: MAX_GROUND });
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("row length differs from label count".into()));
        }
        let r = rows.len();
        let rank = linalg::rank(rows, n)?;
        if rank != r {
            return Err(Error::RankDeficient { rank, rows: r });
        }
        let mut bases = Vec::new();
        for s in subsets_of_size(n, r) {
            if minor(rows, s)? != 0 {
                bases.push(s);
            }
        }
        Ok(Self::from_sorted(n, bases, labels))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nullity(&self) -> usize {
        self.size - self.rank
    }

    pub fn bases(&self) -> &[Mask] {
        &self.bases
    }

    pub fn basis_count(&self) -> usize {
        self.bases.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ground(&self) -> Mask {
        full(self.size)
    }

    pub fn key(&self) -> MatroidKey {
        MatroidKey { size: self.size as u8, bases: self.bases.clone() }
    }

    pub fn is_basis(&self, s: Mask) -> bool {
        self.bases.binary_search(&s).is_ok()
    }

    pub fn rank_of(&self, s: Mask) -> usize {
        let mut best = 0;
        for &b in &self.bases {
            best = best.max((b & s).count_ones() as usize);
            if best == self.rank {
                break;
            }
        }
        best
    }

    pub fn nullity_of(&self, s: Mask) -> usize {
        s.count_ones() as usize - self.rank_of(s)
    }

    pub fn is_independent(&self, s: Mask) -> bool {
        self.bases.iter().any(|&b| b & s == s)
    }

    pub fn is_spanning(&self, s: Mask) -> bool {
        self.bases.iter().any(|&b| b & !s == 0)
    }

    pub fn closure(&self, s: Mask) -> Mask {
        let r = self.rank_of(s);
        ones(self.ground()).filter(|&e| self.rank_of(s | 1 << e) == r).fold(0, |m, e| m | 1 << e)
    }

    fn relabel(&self, keep: Mask) -> Vec<String> {
        ones(keep).map(|i| self.labels[i].clone()).collect()
    }

    fn collect_minor(&self, keep: Mask, bases: impl Iterator<Item = Mask>) -> Matroid {
        let mut bases: Vec<Mask> = bases.map(|b| compress(b, keep)).collect();
        bases.sort_unstable();
        bases.dedup();
        Self::from_sorted(keep.count_ones() as usize, bases, self.relabel(keep))
    }

    /// `M \ S`: the restriction to the complement of `s`.
    pub fn delete(&self, s: Mask) -> Matroid {
        let keep = self.ground() & !s;
        let r = self.rank_of(keep);
        self.collect_minor(keep, self.bases.iter().filter(|&&b| (b & keep).count_ones() as usize == r).map(|&b| b & keep))
    }

    /// `M | S`.
    pub fn restrict(&self, s: Mask) -> Matroid {
        self.delete(self.ground() & !s)
    }

    /// `M / S`.
    pub fn contract(&self, s: Mask) -> Matroid {
        let keep = self.ground() & !s;
        let r = self.rank_of(s);
        self.collect_minor(keep, self.bases.iter().filter(|&&b| (b & s).count_ones() as usize == r).map(|&b| b & keep))
    }

    pub fn dual(&self) -> Matroid {
        let g = self.ground();
        let mut bases: Vec<Mask> = self.bases.iter().map(|&b| g & !b).collect();
        bases.sort_unstable();
        Self::from_sorted(self.size, bases, self.labels.clone())
    }

    pub fn loops(&self) -> Mask {
        let any = self.bases.iter().fold(0, |m, &b| m | b);
        self.ground() & !any
    }

    pub fn coloops(&self) -> Mask {
        self.bases.iter().fold(self.ground(), |m, &b| m & b)
    }

    /// Pairs `e < f` of nonloops forming a 2-circuit.
    pub fn parallel_pairs(&self) -> Vec<(usize, usize)> {
        let nonloops: Vec<usize> = ones(self.ground() & !self.loops()).collect();
        let mut out = Vec::new();
        for (i, &e) in nonloops.iter().enumerate() {
            for &f in &nonloops[i + 1..] {
                if self.rank_of(1 << e | 1 << f) == 1 {
                    out.push((e, f));
                }
            }
        }
        out
    }

    /// Pairs `e < f` of noncoloops that are parallel in the dual.
    pub fn series_pairs(&self) -> Vec<(usize, usize)> {
        self.dual().parallel_pairs()
    }

    pub fn classify_elements(&self) -> Vec<ElementClass> {
        let (loops, coloops) = (self.loops(), self.coloops());
        let mut classes: Vec<ElementClass> = (0..self.size)
            .map(|e| ElementClass {
                is_loop: loops >> e & 1 == 1,
                is_coloop: coloops >> e & 1 == 1,
                ..Default::default()
            })
            .collect();
        for (e, f) in self.parallel_pairs() {
            classes[e].parallel.push(f);
            classes[f].parallel.push(e);
        }
        for (e, f) in self.series_pairs() {
            classes[e].series.push(f);
            classes[f].series.push(e);
        }
        classes
    }

    /// Connected components of the restriction to `s` (which must contain a
    /// basis), via fundamental circuits of one basis.
    fn components_within(&self, s: Mask) -> Vec<Mask> {
        let n = self.size;
        let mut uf = UnionFind::new(n);
        if let Some(&b0) = self.bases.iter().find(|&&b| b & s == b) {
            for e in ones(s & !b0) {
                for f in ones(b0) {
                    if self.is_basis(b0 & !(1 << f) | 1 << e) {
                        uf.union(e, f);
                    }
                }
            }
        }
        let mut comps: Vec<Mask> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for e in ones(s) {
            let r = uf.find(e);
            let idx = *slot.entry(r).or_insert_with(|| {
                comps.push(0);
                comps.len() - 1
            });
            comps[idx] |= 1 << e;
        }
        comps
    }

    /// Separator partition of the ground set, ordered by least element.
    pub fn components(&self) -> Vec<Mask> {
        self.components_within(self.ground())
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// `(r, n)` when every `r`-subset is a basis.
    pub fn uniform_signature(&self) -> Option<(usize, usize)> {
        (self.bases.len() as u64 == bits::binomial(self.size as u64, self.rank as u64)).then_some((self.rank, self.size))
    }

    /// All `S` with `cl(S) = E` and `M|S` connected, largest first (ties by
    /// mask value).
    pub fn spanning_connected_subsets(&self, cap: usize) -> Result<Vec<Mask>> {
        let n = self.size;
        if n > cap {
            return Err(Error::CapExceeded { size: n, cap });
        }
        let mut spanning = vec![false; 1 << n];
        for &b in &self.bases {
            spanning[b as usize] = true;
        }
        for i in 0..n {
            for m in 0..(1usize << n) {
                if m >> i & 1 == 1 && spanning[m ^ 1 << i] {
                    spanning[m] = true;
                }
            }
        }
        let mut out: Vec<Mask> = (1..(1usize << n))
            .filter(|&m| spanning[m])
            .map(|m| m as Mask)
            .filter(|&m| self.components_within(m).len() == 1)
            .collect();
        out.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), m));
        Ok(out)
    }

    /// Flats that are independent sets.
    pub fn independent_flats(&self, cap: usize) -> Result<Vec<Mask>> {
        let n = self.size;
        if n > cap {
            return Err(Error::CapExceeded { size: n, cap });
        }
        let mut indep = vec![false; 1 << n];
        for &b in &self.bases {
            indep[b as usize] = true;
        }
        for i in 0..n {
            for m in 0..(1usize << n) {
                if m >> i & 1 == 1 && indep[m] {
                    indep[m ^ 1 << i] = true;
                }
            }
        }
        let ground = self.ground() as usize;
        Ok((0..(1usize << n))
            .filter(|&f| indep[f] && ones((ground & !f) as Mask).all(|e| indep[f | 1 << e]))
            .map(|f| f as Mask)
            .collect())
    }

    /// Checks the basis exchange axiom exhaustively.
    pub fn satisfies_basis_exchange(&self) -> bool {
        self.bases.iter().all(|&b1| {
            self.bases.iter().all(|&b2| {
                ones(b1 & !b2).all(|e| ones(b2 & !b1).any(|f| self.is_basis(b1 & !(1 << e) | 1 << f)))
            })
        })
    }

    /// Bases as sorted label lists, sorted.
    pub fn labeled_bases(&self) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> =
            self.bases.iter().map(|&b| ones(b).map(|i| self.labels[i].clone()).collect()).collect();
        for b in &mut out {
            b.sort();
        }
        out.sort();
        out
    }

    pub fn mask_of_labels(&self, labels: &[&str]) -> Result<Mask> {
        labels.iter().try_fold(0, |m, l| {
            let i = self.labels.iter().position(|x| x == l).ok_or_else(|| Error::UnknownEdge(l.to_string()))?;
            Ok(m | 1 << i)
        })
    }
}

fn minor(rows: &[Vec<i64>], cols: Mask) -> Result<i128> {
    let m = rows.iter().map(|r| ones(cols).map(|c| r[c] as i128).collect()).collect();
    linalg::det(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build;

    fn gm(expr: &str) -> Matroid {
        Matroid::from_graph(&build(expr).unwrap(), DEFAULT_GRAPH_CAP).unwrap()
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn graph_constructors() {
        for n in 3..7 {
            assert_eq!(gm(&format!("C {n}")).uniform_signature(), Some((n - 1, n)));
            assert_eq!(gm(&format!("B {n}")).uniform_signature(), Some((1, n)));
        }
        assert_eq!(gm("K 4").basis_count(), 16);
        assert_eq!(gm("K 4").uniform_signature(), None);
        assert_eq!(gm("B 2").uniform_signature(), Some((1, 2)));
        assert_eq!(gm("C 5").uniform_signature(), Some((4, 5)));
    }

    #[test]
    fn cap_is_enforced() {
        let err = Matroid::from_graph(&build("K 8").unwrap(), 24).unwrap_err();
        assert_eq!(err, Error::CapExceeded { size: 28, cap: 24 });
    }

    #[test]
    fn matrix_constructors() {
        let m = Matroid::from_matrix(&[vec![1, 0, 1], vec![0, 1, 1]], labels(3)).unwrap();
        assert_eq!(m.uniform_signature(), Some((2, 3)));
        let v = Matroid::from_matrix(&[vec![1, 1, 1, 1], vec![1, 2, 3, 4]], labels(4)).unwrap();
        assert_eq!(v.uniform_signature(), Some((2, 4)));
        let err = Matroid::from_matrix(&[vec![1, 2], vec![2, 4]], labels(2)).unwrap_err();
        assert_eq!(err, Error::RankDeficient { rank: 1, rows: 2 });
    }

    #[test]
    fn closures() {
        let u = Matroid::uniform(2, 4);
        assert_eq!(u.closure(0b1), 0b1);
        let c4 = gm("C 4");
        assert_eq!(c4.closure(0b0111), 0b1111);
        assert_eq!(gm("B 3").closure(0b1), 0b111);
        assert_eq!(c4.nullity_of(0b1111), 1);
    }

    #[test]
    fn minors_and_duality() {
        for n in 3..7 {
            let c = gm(&format!("C {n}"));
            assert_eq!(c.dual().bases(), gm(&format!("B {n}")).bases());
        }
        let u = Matroid::uniform(2, 4);
        assert_eq!(u.contract(0b1).uniform_signature(), Some((1, 3)));
        assert_eq!(u.delete(0b1).uniform_signature(), Some((2, 3)));
        let k4 = gm("K 4");
        assert_eq!(k4.dual().dual(), k4);
        assert_eq!(k4.contract(0b1).labels().len(), 5);
        assert_eq!(k4.contract(0b1).labels()[0], "e1");
    }

    #[test]
    fn element_classes() {
        let b3 = gm("B 3").classify_elements();
        assert!(b3.iter().all(|c| c.parallel.len() == 2 && c.series.is_empty()));
        let c4 = gm("C 4").classify_elements();
        assert!(c4.iter().all(|c| c.series.len() == 3 && c.parallel.is_empty()));
        let free = Matroid::uniform(3, 3).classify_elements();
        assert!(free.iter().all(|c| c.is_coloop && !c.is_loop));
    }

    #[test]
    fn connectivity() {
        assert!(gm("K 4").is_connected());
        assert!(!Matroid::uniform(2, 2).is_connected());
        let bowtie = crate::builders::parse_edge_list("a b\nb c\nc a\na d\nd e\ne a\n").unwrap();
        assert!(!Matroid::from_graph(&bowtie, 24).unwrap().is_connected());
        assert!(Matroid::uniform(0, 1).is_connected());
        assert!(Matroid::uniform(1, 1).is_connected());
    }

    #[test]
    fn spanning_connected() {
        let k4 = gm("K 4").spanning_connected_subsets(20).unwrap();
        let sizes: Vec<u32> = k4.iter().map(|m| m.count_ones()).collect();
        assert_eq!(sizes, vec![6, 5, 5, 5, 5, 5, 5, 4, 4, 4]);
        assert_eq!(Matroid::uniform(2, 3).spanning_connected_subsets(20).unwrap(), vec![0b111]);
        let u14 = Matroid::uniform(1, 4).spanning_connected_subsets(20).unwrap();
        assert_eq!(u14.len(), 15);
    }

    #[test]
    fn independent_flats_of_triangle() {
        // empty set and the three singletons
        let flats = gm("C 3").independent_flats(20).unwrap();
        assert_eq!(flats, vec![0, 1, 2, 4]);
        // loops leave no independent flat
        let looped = Matroid::from_bases(2, vec![0b01], labels(2)).unwrap();
        assert!(looped.independent_flats(20).unwrap().is_empty());
    }
}
