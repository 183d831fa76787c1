//! Rule-based computation of `[Y] mod T` and `[Y°] mod T`.
//!
//! Every step applies the first matching rule of a fixed table and records a
//! [`TraceNode`] whose value is `constant + sum(coefficient * child)`. Rules
//! only recurse to strictly smaller matroids, except for the moves between
//! `Y` and `Y°` of one matroid and between a matroid and its dual. Those
//! moves can close a cycle; a target met again while still in progress
//! answers Unknown, and the earliest target of the cycle may then break it
//! by reconstructing `[Y]` from point counts (see [`count`]).

pub mod count;
mod explain;
mod subject;

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::bits::{binomial, ones, Mask};
use crate::matroid::{MatroidKey, DEFAULT_SUBSET_CAP};

pub use count::CountConfig;
pub use explain::explain;
pub use subject::Subject;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    Y,
    Ytorus,
}

impl Kind {
    pub fn symbol(self) -> &'static str {
        match self {
            Kind::Y => "Y",
            Kind::Ytorus => "Y°",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassModT {
    Known(i64),
    Unknown(String),
}

impl ClassModT {
    pub fn known(&self) -> Option<i64> {
        match self {
            ClassModT::Known(n) => Some(*n),
            ClassModT::Unknown(_) => None,
        }
    }

    pub fn is_known(&self) -> bool {
        self.known().is_some()
    }

    pub fn to_json(&self) -> Value {
        match self {
            ClassModT::Known(n) => json!(n),
            ClassModT::Unknown(_) => json!("unknown"),
        }
    }
}

impl std::fmt::Display for ClassModT {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassModT::Known(n) => write!(f, "{n}"),
            ClassModT::Unknown(_) => write!(f, "unknown"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    RankZero,
    LoopDeletion,
    ParallelDeletion,
    Coloop,
    Disconnected,
    RankOne,
    FatNexus,
    RankTwo,
    SeriesReduction,
    CorankOne,
    CorankTwo,
    Strata,
    DualFlats,
    DualFlatsShortcut,
    PointCount,
    SingleElement,
    TorusRankZero,
    TorusLoopOrColoop,
    TorusParallel,
    TorusSeries,
    TorusDisconnected,
    TorusUniform,
    TorusDuality,
    TorusStrata,
    TorusStrataDual,
    TorusStrataCounted,
    Cycle,
    Blocked,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::RankZero => "rank zero: all of projective space",
            Rule::LoopDeletion => "delete a loop",
            Rule::ParallelDeletion => "delete one of two parallel elements",
            Rule::Coloop => "coloop in rank at least two",
            Rule::Disconnected => "loopless and disconnected",
            Rule::RankOne => "connected of rank one",
            Rule::FatNexus => "graph with a nexus or fat nexus",
            Rule::RankTwo => "connected of rank two",
            Rule::SeriesReduction => "series pair: -Y(M/e) + Y(M\\{e,f})",
            Rule::CorankOne => "connected of corank one",
            Rule::CorankTwo => "uniform of corank two",
            Rule::Strata => "sum of Y° over spanning connected restrictions",
            Rule::DualFlats => "dual side: sum of Y° over independent flats",
            Rule::DualFlatsShortcut => "dual side: Y° when every rank-one flat is fat",
            Rule::PointCount => "reconstructed from point counts",
            Rule::SingleElement => "single element",
            Rule::TorusRankZero => "rank zero torus",
            Rule::TorusLoopOrColoop => "loop or coloop",
            Rule::TorusParallel => "parallel pair: -Y°(M\\f)",
            Rule::TorusSeries => "series pair: -Y°(M/f)",
            Rule::TorusDisconnected => "disconnected",
            Rule::TorusUniform => "uniform of rank or corank at most two",
            Rule::TorusDuality => "torus part of the dual",
            Rule::TorusStrata => "signed sum of Y over spanning connected restrictions",
            Rule::TorusStrataDual => "signed sum of Y over spanning connected restrictions of the dual",
            Rule::TorusStrataCounted => "signed sum with Y(M) from point counts",
            Rule::Cycle => "cycle",
            Rule::Blocked => "no rule applies",
        }
    }
}

#[derive(Debug)]
pub struct TraceNode {
    pub kind: Kind,
    pub size: usize,
    pub rank: usize,
    pub labels: Vec<String>,
    pub rule: Rule,
    pub constant: i64,
    pub terms: Vec<(i64, Arc<TraceNode>)>,
    pub note: Option<String>,
    pub result: ClassModT,
}

impl TraceNode {
    /// Re-derives the value from the children.
    pub fn replay(&self) -> ClassModT {
        if self.terms.is_empty() {
            return self.result.clone();
        }
        let mut acc = self.constant;
        for (c, child) in &self.terms {
            match child.replay() {
                ClassModT::Known(v) => acc += c * v,
                unknown => return unknown,
            }
        }
        ClassModT::Known(acc)
    }

    /// Flat JSON with shared nodes listed once.
    pub fn to_json(self: &Arc<Self>) -> Value {
        let mut ids: HashMap<*const TraceNode, usize> = HashMap::new();
        let mut nodes = Vec::new();
        flatten(self, &mut ids, &mut nodes);
        json!({ "root": ids[&Arc::as_ptr(self)], "nodes": nodes })
    }
}

fn flatten(node: &Arc<TraceNode>, ids: &mut HashMap<*const TraceNode, usize>, out: &mut Vec<Value>) -> usize {
    if let Some(&id) = ids.get(&Arc::as_ptr(node)) {
        return id;
    }
    let terms: Vec<Value> = node.terms.iter().map(|(c, ch)| json!([c, flatten(ch, ids, out)])).collect();
    let id = out.len();
    ids.insert(Arc::as_ptr(node), id);
    out.push(json!({
        "id": id,
        "kind": node.kind.symbol(),
        "size": node.size,
        "rank": node.rank,
        "rule": node.rule.name(),
        "constant": node.constant,
        "terms": terms,
        "note": node.note,
        "result": node.result.to_json(),
    }));
    id
}

/// Where the point-count fallback may break a cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountScope {
    /// Only for the matroid (or its dual) handed to the engine.
    Top,
    /// At the earliest target of any cycle.
    AnyCycle,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub cache: bool,
    pub subset_cap: usize,
    pub count: Option<CountConfig>,
    pub count_scope: CountScope,
}

impl Default for Options {
    fn default() -> Self {
        Options { cache: true, subset_cap: DEFAULT_SUBSET_CAP, count: Some(CountConfig::default()), count_scope: CountScope::AnyCycle }
    }
}

type MemoKey = (MatroidKey, bool, Kind);
type Terms = (Vec<Mask>, Vec<(i64, Eval)>);

struct Eval {
    node: Arc<TraceNode>,
    /// Stack depth of the earliest in-progress target this result was blocked on.
    taint: Option<usize>,
}

#[derive(Debug)]
pub struct Analysis {
    pub y: Arc<TraceNode>,
    pub ytorus: Arc<TraceNode>,
}

impl Analysis {
    pub fn to_json(&self, with_trace: bool) -> Value {
        let mut v = json!({ "Y": self.y.result.to_json(), "Ytorus": self.ytorus.result.to_json() });
        if with_trace {
            v["trace"] = json!({ "Y": self.y.to_json(), "Ytorus": self.ytorus.to_json() });
        }
        v
    }
}

pub struct Engine {
    opts: Options,
    memo: HashMap<MemoKey, Arc<TraceNode>>,
    stack: Vec<MemoKey>,
    top_size: usize,
    counts: usize,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(Options::default())
    }
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl Engine {
    pub fn new(opts: Options) -> Self {
        Engine { opts, memo: HashMap::new(), stack: Vec::new(), top_size: 0, counts: 0 }
    }

    pub fn options(&self) -> &Options {
        &self.opts
    }

    /// Number of point-count reconstructions performed so far.
    pub fn count_fallbacks(&self) -> usize {
        self.counts
    }

    pub fn analyze(&mut self, s: &Subject) -> Analysis {
        Analysis { y: self.class_y(s), ytorus: self.class_ytorus(s) }
    }

    pub fn class_y(&mut self, s: &Subject) -> Arc<TraceNode> {
        self.top(s, Kind::Y)
    }

    pub fn class_ytorus(&mut self, s: &Subject) -> Arc<TraceNode> {
        self.top(s, Kind::Ytorus)
    }

    /// `[Y(M^perp)]` from the independent flats of `M`, or None when the rank
    /// or nullity of `M` is zero.
    pub fn class_y_dual_via_flats(&mut self, s: &Subject) -> Option<Arc<TraceNode>> {
        self.top_size = s.matroid().size();
        self.dual_flats(s).map(|(node, _)| node)
    }

    fn top(&mut self, s: &Subject, kind: Kind) -> Arc<TraceNode> {
        self.top_size = s.matroid().size();
        self.eval(s, kind).node
    }

    fn eval(&mut self, s: &Subject, kind: Kind) -> Eval {
        let key = (s.matroid().key(), s.is_graphic(), kind);
        if self.opts.cache {
            if let Some(node) = self.memo.get(&key) {
                return Eval { node: node.clone(), taint: None };
            }
        }
        if let Some(d) = self.stack.iter().position(|k| *k == key) {
            let reason = format!("cycle back to {} of a matroid with {} elements", kind.symbol(), s.matroid().size());
            let node = leaf(s, kind, Rule::Cycle, ClassModT::Unknown(reason), None);
            return Eval { node, taint: Some(d) };
        }
        let depth = self.stack.len();
        self.stack.push(key.clone());
        let (node, taint) = match kind {
            Kind::Y => self.rules_y(s, depth),
            Kind::Ytorus => self.rules_ytorus(s, depth),
        };
        self.stack.pop();
        let taint = taint.filter(|&t| t < depth);
        if self.opts.cache && (node.result.is_known() || taint.is_none()) {
            self.memo.insert(key, node.clone());
        }
        Eval { node, taint }
    }

    fn may_count(&self, s: &Subject, root: bool) -> bool {
        root && self.opts.count.is_some()
            && match self.opts.count_scope {
                CountScope::Top => s.matroid().size() == self.top_size,
                CountScope::AnyCycle => true,
            }
    }

    fn rules_y(&mut self, s: &Subject, depth: usize) -> (Arc<TraceNode>, Option<usize>) {
        let m = s.matroid();
        let n = m.size();
        if m.rank() == 0 {
            return constant(s, Kind::Y, Rule::RankZero, n as i64);
        }
        if let Some(e) = ones(m.loops()).next() {
            let child = self.eval(&s.delete(1 << e), Kind::Y);
            return combine(s, Kind::Y, Rule::LoopDeletion, 0, vec![(1, child)], None);
        }
        if let Some(&(_, f)) = m.parallel_pairs().first() {
            let child = self.eval(&s.delete(1 << f), Kind::Y);
            return combine(s, Kind::Y, Rule::ParallelDeletion, 0, vec![(1, child)], None);
        }
        if m.coloops() != 0 && m.rank() > 1 {
            return constant(s, Kind::Y, Rule::Coloop, 0);
        }
        if !m.is_connected() {
            return constant(s, Kind::Y, Rule::Disconnected, 0);
        }
        if m.rank() == 1 {
            return constant(s, Kind::Y, Rule::RankOne, 1);
        }
        if let Some(note) = s.graph().and_then(|g| vanishing_witness(&g)) {
            let node = leaf(s, Kind::Y, Rule::FatNexus, ClassModT::Known(0), Some(note));
            return (node, None);
        }
        if m.rank() == 2 {
            return constant(s, Kind::Y, Rule::RankTwo, 1);
        }
        if let Some((e, f)) = series_reduction_pair(s) {
            let a = self.eval(&s.contract(1 << e), Kind::Y);
            let b = self.eval(&s.delete(1 << e | 1 << f), Kind::Y);
            let note = format!("e = {}, f = {}", m.labels()[e], m.labels()[f]);
            return combine(s, Kind::Y, Rule::SeriesReduction, 0, vec![(-1, a), (1, b)], Some(note));
        }
        if m.nullity() == 1 {
            return constant(s, Kind::Y, Rule::CorankOne, sign(n - 1));
        }
        if n >= 4 && m.uniform_signature() == Some((n - 2, n)) {
            return constant(s, Kind::Y, Rule::CorankTwo, corank_two_value(n));
        }

        let mut taint = None;
        let mut reason = match m.spanning_connected_subsets(self.opts.subset_cap) {
            Ok(sets) => {
                let terms = sets
                    .iter()
                    .map(|&set| {
                        let sub = if set == m.ground() { s.clone() } else { s.restrict(set) };
                        (1, self.eval(&sub, Kind::Ytorus))
                    })
                    .collect();
                let (node, t) = combine(s, Kind::Y, Rule::Strata, 0, terms, Some(format!("{} sets", sets.len())));
                if node.result.is_known() {
                    return (node, t);
                }
                taint = min_taint(taint, t);
                unknown_reason(&node)
            }
            Err(e) => e.to_string(),
        };
        if let Some((node, t)) = self.dual_flats(&s.dual()) {
            if node.result.is_known() {
                return (node, t);
            }
            taint = min_taint(taint, t);
        }
        let root = taint.is_none_or(|t| t >= depth);
        if self.may_count(s, root) {
            match self.count(s) {
                Ok(node) => return (node, None),
                Err(e) => reason = format!("{reason}; point counts: {e}"),
            }
        }
        (leaf(s, Kind::Y, Rule::Blocked, ClassModT::Unknown(reason), None), taint)
    }

    /// `[Y(N^perp)]` for `N = s`.
    fn dual_flats(&mut self, s: &Subject) -> Option<(Arc<TraceNode>, Option<usize>)> {
        let m = s.matroid();
        let (r, null) = (m.rank(), m.nullity());
        if r == 0 || null == 0 {
            return None;
        }
        let target = s.dual();
        let fat = ones(m.ground() & !m.loops()).all(|e| m.closure(1 << e).count_ones() > 1);
        if null > 1 && fat {
            let child = self.eval(s, Kind::Ytorus);
            return Some(combine(&target, Kind::Y, Rule::DualFlatsShortcut, 0, vec![(1, child)], None));
        }
        let flats = m.independent_flats(self.opts.subset_cap).ok()?;
        let c = if null == 1 { m.basis_count() as i64 } else { 0 };
        let terms = flats.iter().map(|&f| (1, self.eval(&s.contract(f), Kind::Ytorus))).collect();
        let note = format!("{} independent flats", flats.len());
        Some(combine(&target, Kind::Y, Rule::DualFlats, c, terms, Some(note)))
    }

    fn count(&mut self, s: &Subject) -> Result<Arc<TraceNode>, crate::Error> {
        let cfg = self.opts.count.clone().expect("checked by may_count");
        let w = s.configuration()?.ok_or_else(|| crate::Error::Invalid("no realization to count on".into()))?;
        let rec = count::reconstruct(&w, &cfg)?;
        self.counts += 1;
        let residues: Vec<String> = rec.residues.iter().map(|(p, c)| format!("|Y(F_{p})| = {c}")).collect();
        let mut note = format!("{}; n mod {} in [-{b}, {b}]", residues.join(", "), rec.modulus, b = (rec.modulus - 1) / 2);
        if !rec.skipped.is_empty() {
            note.push_str(&format!("; over budget at p = {:?}", rec.skipped));
        }
        let node = leaf(s, Kind::Y, Rule::PointCount, ClassModT::Known(rec.value), Some(note));
        if self.opts.cache {
            self.memo.insert((s.matroid().key(), s.is_graphic(), Kind::Y), node.clone());
        }
        Ok(node)
    }

    fn rules_ytorus(&mut self, s: &Subject, depth: usize) -> (Arc<TraceNode>, Option<usize>) {
        if let Some(step) = torus_structure(s) {
            return match step {
                TorusStep::Value(rule, v) => constant(s, Kind::Ytorus, rule, v),
                TorusStep::Minor(rule, sub, c) => {
                    let child = self.eval(&sub, Kind::Ytorus);
                    combine(s, Kind::Ytorus, rule, 0, vec![(c, child)], None)
                }
            };
        }
        let dual = s.dual();
        if torus_structure(&dual).is_some() {
            let child = self.eval(&dual, Kind::Ytorus);
            return combine(s, Kind::Ytorus, Rule::TorusDuality, 0, vec![(1, child)], None);
        }

        let mut taint = None;
        let mut reason = String::new();
        let mut own_terms: Option<Terms> = None;
        for (side, rule) in [(s, Rule::TorusStrata), (&dual, Rule::TorusStrataDual)] {
            let m = side.matroid();
            let sets = match m.spanning_connected_subsets(self.opts.subset_cap) {
                Ok(sets) => sets,
                Err(e) => {
                    reason = e.to_string();
                    break;
                }
            };
            let terms: Vec<(i64, Eval)> = sets
                .iter()
                .map(|&set| {
                    let sub = if set == m.ground() { side.clone() } else { side.restrict(set) };
                    (sign((m.ground() & !set).count_ones() as usize), self.eval(&sub, Kind::Y))
                })
                .collect();
            let shared: Vec<(i64, Eval)> =
                terms.iter().map(|(c, e)| (*c, Eval { node: e.node.clone(), taint: e.taint })).collect();
            let (node, t) = combine(s, Kind::Ytorus, rule, 0, shared, Some(format!("{} sets", sets.len())));
            if node.result.is_known() {
                return (node, t);
            }
            taint = min_taint(taint, t);
            reason = unknown_reason(&node);
            if own_terms.is_none() {
                own_terms = Some((sets, terms));
            }
        }
        let root = taint.is_none_or(|t| t >= depth);
        if let Some((sets, mut terms)) = own_terms.filter(|_| self.may_count(s, root)) {
            match self.count(s) {
                Ok(counted) => {
                    let full = s.matroid().ground();
                    for (set, term) in sets.iter().zip(terms.iter_mut()) {
                        if *set == full {
                            term.1 = Eval { node: counted.clone(), taint: None };
                        }
                    }
                    let (node, t) = combine(s, Kind::Ytorus, Rule::TorusStrataCounted, 0, terms, None);
                    if node.result.is_known() {
                        return (node, t.filter(|&t| t < depth));
                    }
                    reason = unknown_reason(&node);
                }
                Err(e) => reason = format!("{reason}; point counts: {e}"),
            }
        }
        (leaf(s, Kind::Ytorus, Rule::Blocked, ClassModT::Unknown(reason), None), taint)
    }
}

/// The shipped value of `[Y]` for `U_{n-2,n}`, `n >= 4`:
/// `(-1)^(n-1) (n^2 - 5n + 2) / 2`. The other printed candidate,
/// `(-1)^(n-1) (n^2 - n + 2) / 2`, fails point counts on Vandermonde
/// realizations and contradicts the rank-two value at `n = 4`.
pub fn corank_two_value(n: usize) -> i64 {
    let n = n as i64;
    sign((n - 1) as usize) * (n * n - 5 * n + 2) / 2
}

enum TorusStep {
    Value(Rule, i64),
    Minor(Rule, Subject, i64),
}

/// Y° rules that need no sums, in table order.
fn torus_structure(s: &Subject) -> Option<TorusStep> {
    let m = s.matroid();
    let n = m.size();
    if n == 1 {
        return Some(TorusStep::Value(Rule::SingleElement, 1));
    }
    if m.rank() == 0 {
        return Some(TorusStep::Value(Rule::TorusRankZero, 0));
    }
    if m.loops() | m.coloops() != 0 {
        return Some(TorusStep::Value(Rule::TorusLoopOrColoop, 0));
    }
    if n > 2 {
        if let Some(&(_, f)) = m.parallel_pairs().first() {
            return Some(TorusStep::Minor(Rule::TorusParallel, s.delete(1 << f), -1));
        }
        if let Some(&(_, f)) = m.series_pairs().first() {
            return Some(TorusStep::Minor(Rule::TorusSeries, s.contract(1 << f), -1));
        }
    }
    if !m.is_connected() {
        return Some(TorusStep::Value(Rule::TorusDisconnected, 0));
    }
    match m.uniform_signature() {
        Some((r, n)) if r == 1 || r + 1 == n => Some(TorusStep::Value(Rule::TorusUniform, sign(n - 1))),
        Some((2, n)) if n >= 3 => {
            Some(TorusStep::Value(Rule::TorusUniform, sign(n - 1) * binomial(n as u64 - 1, 2) as i64))
        }
        _ => None,
    }
}

/// First series pair `(e, f)` meeting the hypotheses of the series
/// reduction, trying both orientations.
fn series_reduction_pair(s: &Subject) -> Option<(usize, usize)> {
    let m = s.matroid();
    let full = m.ground();
    for (a, b) in m.series_pairs() {
        for (e, f) in [(a, b), (b, a)] {
            let me = m.contract(1 << e);
            let f_in = f - usize::from(f > e);
            let ok = me.rank() > 0
                && m.rank_of(full & !(1 << e | 1 << f)) > 0
                && m.closure(1 << e | 1 << f) != full
                && me.coloops() >> f_in & 1 == 0;
            if ok {
                return Some((e, f));
            }
        }
    }
    None
}

fn vanishing_witness(g: &crate::graph::Multigraph) -> Option<String> {
    let h = g.simplify().ok()?;
    if h.is_connected() {
        if let Some(&v) = h.find_nexi().first() {
            return Some(format!("nexus {}", h.vertices()[v]));
        }
    }
    h.find_fat_nexus().map(|w| {
        let names = |vs: &[usize]| vs.iter().map(|&v| h.vertices()[v].clone()).collect::<Vec<_>>().join(",");
        format!("fat nexus {} with parts {{{}}} and {{{}}}", h.vertices()[w.apex], names(&w.part1), names(&w.part2))
    })
}

fn min_taint(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn unknown_reason(node: &TraceNode) -> String {
    match &node.result {
        ClassModT::Unknown(r) => r.clone(),
        ClassModT::Known(_) => String::new(),
    }
}

fn leaf(s: &Subject, kind: Kind, rule: Rule, result: ClassModT, note: Option<String>) -> Arc<TraceNode> {
    let m = s.matroid();
    Arc::new(TraceNode {
        kind,
        size: m.size(),
        rank: m.rank(),
        labels: m.labels().to_vec(),
        rule,
        constant: result.known().unwrap_or(0),
        terms: Vec::new(),
        note,
        result,
    })
}

fn constant(s: &Subject, kind: Kind, rule: Rule, v: i64) -> (Arc<TraceNode>, Option<usize>) {
    (leaf(s, kind, rule, ClassModT::Known(v), None), None)
}

fn combine(
    s: &Subject,
    kind: Kind,
    rule: Rule,
    constant: i64,
    terms: Vec<(i64, Eval)>,
    note: Option<String>,
) -> (Arc<TraceNode>, Option<usize>) {
    let mut taint = None;
    let mut acc = Some(constant);
    let mut reason = None;
    for (c, e) in &terms {
        taint = min_taint(taint, e.taint);
        match &e.node.result {
            ClassModT::Known(v) => acc = acc.map(|a| a + c * v),
            ClassModT::Unknown(r) => {
                acc = None;
                reason.get_or_insert_with(|| r.clone());
            }
        }
    }
    let result = match acc {
        Some(v) => ClassModT::Known(v),
        None => ClassModT::Unknown(reason.unwrap_or_default()),
    };
    let m = s.matroid();
    let node = Arc::new(TraceNode {
        kind,
        size: m.size(),
        rank: m.rank(),
        labels: m.labels().to_vec(),
        rule,
        constant,
        terms: terms.into_iter().map(|(c, e)| (c, e.node)).collect(),
        note,
        result,
    });
    (node, taint)
}
