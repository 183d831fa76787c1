//! Labeled multigraphs and the graph predicates used by the class engine:
//! simplification, connectivity, cut vertices, cones and fat nexi.
//!
//! Vertex and edge labels are opaque strings mapped to dense indices in
//! insertion order. All operations return new values.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub label: String,
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Multigraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

/// A vertex `apex` together with a partition of the remaining vertices into
/// two nonempty parts such that every edge between the parts lies inside the
/// closed neighborhood of `apex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FatNexusWitness {
    pub apex: usize,
    pub part1: Vec<usize>,
    pub part2: Vec<usize>,
}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from vertex labels and `(label, u, v)` index triples.
    pub fn from_parts(vertices: Vec<String>, edges: Vec<(String, usize, usize)>) -> Result<Self> {
        let mut g = Multigraph { vertices, edges: Vec::with_capacity(edges.len()) };
        let mut seen = HashMap::new();
        for (i, v) in g.vertices.iter().enumerate() {
            if seen.insert(v.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate vertex label `{v}`")));
            }
        }
        for (label, u, v) in edges {
            g.push_edge(label, u, v)?;
        }
        Ok(g)
    }

    /// Returns the index of `label`, declaring it if needed.
    pub fn add_vertex(&mut self, label: &str) -> usize {
        match self.vertex_index(label) {
            Some(i) => i,
            None => {
                self.vertices.push(label.to_string());
                self.vertices.len() - 1
            }
        }
    }

    /// Adds an edge between two labeled vertices, declaring them on first use.
    pub fn add_edge(&mut self, label: &str, u: &str, v: &str) -> Result<usize> {
        let u = self.add_vertex(u);
        let v = self.add_vertex(v);
        self.push_edge(label.to_string(), u, v)?;
        Ok(self.edges.len() - 1)
    }

    fn push_edge(&mut self, label: String, u: usize, v: usize) -> Result<()> {
        let n = self.vertices.len();
        if u >= n || v >= n {
            return Err(Error::UnknownVertex(format!("{}", u.max(v))));
        }
        if self.edges.iter().any(|e| e.label == label) {
            return Err(Error::DuplicateEdge(label));
        }
        self.edges.push(Edge { label, u, v });
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label)
    }

    pub fn edge_labels(&self) -> Vec<String> {
        self.edges.iter().map(|e| e.label.clone()).collect()
    }

    pub fn has_non_loop_edge(&self) -> bool {
        self.edges.iter().any(|e| !e.is_loop())
    }

    /// Simple adjacency (loops ignored, parallels collapsed).
    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.vertices.len();
        let mut adj = vec![vec![false; n]; n];
        for e in &self.edges {
            if !e.is_loop() {
                adj[e.u][e.v] = true;
                adj[e.v][e.u] = true;
            }
        }
        adj
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|e| !e.is_loop() && seen.insert((e.u.min(e.v), e.u.max(e.v))))
    }

    /// Merges parallel edges (keeping the first label of each class), deletes
    /// loops and then isolated vertices.
    pub fn simplify(&self) -> Result<Multigraph> {
        if !self.has_non_loop_edge() {
            return Err(Error::LoopsOnly);
        }
        let mut seen = std::collections::HashSet::new();
        let kept: Vec<&Edge> = self
            .edges
            .iter()
            .filter(|e| !e.is_loop() && seen.insert((e.u.min(e.v), e.u.max(e.v))))
            .collect();
        let mut used = vec![false; self.vertices.len()];
        for e in &kept {
            used[e.u] = true;
            used[e.v] = true;
        }
        let mut remap = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        for (i, label) in self.vertices.iter().enumerate() {
            if used[i] {
                remap[i] = vertices.len();
                vertices.push(label.clone());
            }
        }
        let edges = kept
            .into_iter()
            .map(|e| Edge { label: e.label.clone(), u: remap[e.u], v: remap[e.v] })
            .collect();
        Ok(Multigraph { vertices, edges })
    }

    /// Connected components as sorted vertex index lists, ordered by their
    /// least vertex index.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        self.components_avoiding(None)
    }

    fn components_avoiding(&self, removed: Option<usize>) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut uf = UnionFind::new(n);
        for e in &self.edges {
            if Some(e.u) != removed && Some(e.v) != removed {
                uf.union(e.u, e.v);
            }
        }
        let mut by_root: HashMap<usize, usize> = HashMap::new();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for v in 0..n {
            if Some(v) == removed {
                continue;
            }
            let r = uf.find(v);
            let idx = *by_root.entry(r).or_insert_with(|| {
                comps.push(Vec::new());
                comps.len() - 1
            });
            comps[idx].push(v);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Vertices whose removal disconnects the graph.
    pub fn find_nexi(&self) -> Vec<usize> {
        let base = self.connected_components().len();
        (0..self.vertices.len())
            .filter(|&v| {
                let isolated = self.edges.iter().all(|e| e.is_loop() || (e.u != v && e.v != v));
                // removing an isolated vertex drops a whole component
                let expected = if isolated { base - 1 } else { base };
                self.components_avoiding(Some(v)).len() > expected
            })
            .collect()
    }

    /// The vertex itself together with all its neighbors.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<bool> {
        let mut nb = vec![false; self.vertices.len()];
        nb[v] = true;
        for e in &self.edges {
            if e.u == v {
                nb[e.v] = true;
            } else if e.v == v {
                nb[e.u] = true;
            }
        }
        nb
    }

    pub fn is_cone_with_apex(&self, v: usize) -> bool {
        self.closed_neighborhood(v).into_iter().all(|b| b)
    }

    /// Searches for a fat nexus, trying candidate apexes in index order.
    ///
    /// For a candidate `v0` the admissible partitions are exactly the unions
    /// of connected components of the auxiliary graph on `V \ {v0}` whose
    /// edges are the edges not contained in the closed neighborhood of `v0`.
    /// Expects a simple graph.
    pub fn find_fat_nexus(&self) -> Option<FatNexusWitness> {
        let n = self.vertices.len();
        if n < 3 {
            return None;
        }
        for v0 in 0..n {
            let nb = self.closed_neighborhood(v0);
            let cone = nb.iter().all(|&b| b);
            let mut uf = UnionFind::new(n);
            for e in &self.edges {
                if e.u == v0 || e.v == v0 || e.is_loop() {
                    continue;
                }
                if !(nb[e.u] && nb[e.v]) {
                    uf.union(e.u, e.v);
                }
            }
            let rest: Vec<usize> = (0..n).filter(|&v| v != v0).collect();
            let first = rest[0];
            let root = uf.find(first);
            let part1: Vec<usize> = if cone {
                // components are singletons; unequal halves need |V| >= 4
                if n < 4 {
                    continue;
                }
                vec![first]
            } else {
                rest.iter().copied().filter(|&v| uf.find(v) == root).collect()
            };
            if part1.len() == rest.len() {
                continue;
            }
            let part2: Vec<usize> = rest.into_iter().filter(|v| !part1.contains(v)).collect();
            return Some(FatNexusWitness { apex: v0, part1, part2 });
        }
        None
    }

    /// Checks the defining conditions of a fat nexus witness directly.
    pub fn is_fat_nexus_witness(&self, w: &FatNexusWitness) -> bool {
        let n = self.vertices.len();
        if w.apex >= n || w.part1.is_empty() || w.part2.is_empty() {
            return false;
        }
        let mut side = vec![0u8; n];
        side[w.apex] = 3;
        for &v in &w.part1 {
            if v >= n || side[v] != 0 {
                return false;
            }
            side[v] = 1;
        }
        for &v in &w.part2 {
            if v >= n || side[v] != 0 {
                return false;
            }
            side[v] = 2;
        }
        if side.contains(&0) {
            return false;
        }
        let nb = self.closed_neighborhood(w.apex);
        let crossing_ok = self.edges.iter().all(|e| {
            let (a, b) = (side[e.u], side[e.v]);
            let crosses = (a == 1 && b == 2) || (a == 2 && b == 1);
            !crosses || (nb[e.u] && nb[e.v])
        });
        let cone_ok = !nb.iter().all(|&b| b) || w.part1.len() != w.part2.len();
        crossing_ok && cone_ok
    }

    pub fn delete_edge(&self, label: &str) -> Result<Multigraph> {
        let i = self.edge_index(label).ok_or_else(|| Error::UnknownEdge(label.to_string()))?;
        Ok(self.delete_edge_at(i))
    }

    pub fn contract_edge(&self, label: &str) -> Result<Multigraph> {
        let i = self.edge_index(label).ok_or_else(|| Error::UnknownEdge(label.to_string()))?;
        self.contract_edge_at(i)
    }

    pub fn delete_edge_at(&self, i: usize) -> Multigraph {
        let mut g = self.clone();
        g.edges.remove(i);
        g
    }

    /// Contracts edge `i`, merging its larger endpoint into the smaller one.
    /// Parallel edges of `i` become loops.
    pub fn contract_edge_at(&self, i: usize) -> Result<Multigraph> {
        let e = &self.edges[i];
        if e.is_loop() {
            return Err(Error::ContractLoop(e.label.clone()));
        }
        let (keep, gone) = (e.u.min(e.v), e.u.max(e.v));
        let fix = |w: usize| {
            let w = if w == gone { keep } else { w };
            if w > gone {
                w - 1
            } else {
                w
            }
        };
        let mut vertices = self.vertices.clone();
        vertices.remove(gone);
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, e)| Edge { label: e.label.clone(), u: fix(e.u), v: fix(e.v) })
            .collect();
        Ok(Multigraph { vertices, edges })
    }

    /// Keeps only the edges whose index bit is set in `mask`; vertices stay.
    pub fn edge_subgraph(&self, mask: u64) -> Multigraph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e.clone())
            .collect();
        Multigraph { vertices: self.vertices.clone(), edges }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}
