//! A matroid together with the minor and dual operations that produced it
//! from an original graph or configuration. Realizations are rebuilt only
//! on demand.

use std::sync::Arc;

use crate::bits::{compress, full, ones, Mask};
use crate::config::{incidence_configuration, Configuration};
use crate::error::Result;
use crate::graph::Multigraph;
use crate::matroid::{Matroid, DEFAULT_GRAPH_CAP};

#[derive(Debug)]
struct Origin {
    size: usize,
    graph: Option<Multigraph>,
    config: Option<Configuration>,
}

#[derive(Clone, Debug)]
pub struct Subject {
    origin: Arc<Origin>,
    matroid: Arc<Matroid>,
    dual: bool,
    /// Contracted and deleted elements of the original, in original indices.
    contracted: Mask,
    deleted: Mask,
}

impl Subject {
    pub fn from_graph(g: &Multigraph) -> Result<Self> {
        let m = Matroid::from_graph(g, DEFAULT_GRAPH_CAP)?;
        let w = incidence_configuration(g);
        Ok(Self::new(m, Some(g.clone()), Some(w)))
    }

    pub fn from_configuration(w: &Configuration) -> Result<Self> {
        Ok(Self::new(w.matroid()?, None, Some(w.clone())))
    }

    /// Without a realization the point-count fallback is unavailable.
    pub fn from_matroid(m: Matroid) -> Self {
        Self::new(m, None, None)
    }

    fn new(m: Matroid, graph: Option<Multigraph>, config: Option<Configuration>) -> Self {
        let origin = Origin { size: m.size(), graph, config };
        Subject { origin: Arc::new(origin), matroid: Arc::new(m), dual: false, contracted: 0, deleted: 0 }
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    /// True when the current matroid is the cycle matroid of a known graph.
    pub fn is_graphic(&self) -> bool {
        !self.dual && self.origin.graph.is_some()
    }

    fn alive(&self) -> Mask {
        full(self.origin.size) & !(self.contracted | self.deleted)
    }

    /// Current indices to original indices.
    fn lift(&self, s: Mask) -> Mask {
        ones(self.alive()).enumerate().filter(|&(i, _)| s >> i & 1 == 1).fold(0, |acc, (_, b)| acc | 1 << b)
    }

    pub fn delete(&self, s: Mask) -> Subject {
        let mut out = self.clone();
        let base = self.lift(s);
        if self.dual {
            out.contracted |= base;
        } else {
            out.deleted |= base;
        }
        out.matroid = Arc::new(self.matroid.delete(s));
        out
    }

    pub fn contract(&self, s: Mask) -> Subject {
        let mut out = self.clone();
        let base = self.lift(s);
        if self.dual {
            out.deleted |= base;
        } else {
            out.contracted |= base;
        }
        out.matroid = Arc::new(self.matroid.contract(s));
        out
    }

    pub fn restrict(&self, s: Mask) -> Subject {
        self.delete(self.matroid.ground() & !s)
    }

    pub fn dual(&self) -> Subject {
        let mut out = self.clone();
        out.dual = !self.dual;
        out.matroid = Arc::new(self.matroid.dual());
        out
    }

    /// The graph of the current matroid, when it is graphic by construction.
    pub fn graph(&self) -> Option<Multigraph> {
        if !self.is_graphic() {
            return None;
        }
        let mut g = self.origin.graph.clone()?;
        let mut gone: Vec<usize> = ones(self.contracted | self.deleted).collect();
        gone.reverse();
        for i in gone {
            let contract = self.contracted >> i & 1 == 1 && !g.edges()[i].is_loop();
            g = if contract { g.contract_edge_at(i).ok()? } else { g.delete_edge_at(i) };
        }
        Some(g)
    }

    /// A realization of the current matroid, when the original had one.
    pub fn configuration(&self) -> Result<Option<Configuration>> {
        let Some(w) = &self.origin.config else {
            return Ok(None);
        };
        let w = w.contract(self.contracted)?;
        let rest = full(self.origin.size) & !self.contracted;
        let w = w.delete(compress(self.deleted, rest))?;
        Ok(Some(if self.dual { w.dual()? } else { w }))
    }
}
