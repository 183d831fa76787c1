use std::collections::HashMap;
use std::fmt::Write;
use std::sync::Arc;

use super::TraceNode;

/// Indented rendering of a trace. A node reached a second time is printed
/// once more as a one-line reference to its first occurrence.
pub fn explain(root: &Arc<TraceNode>) -> String {
    let mut out = String::new();
    let mut seen = HashMap::new();
    render(root, 0, None, &mut seen, &mut out);
    out
}

fn render(
    node: &Arc<TraceNode>,
    depth: usize,
    coeff: Option<i64>,
    seen: &mut HashMap<*const TraceNode, usize>,
    out: &mut String,
) {
    let pad = "  ".repeat(depth);
    let factor = match coeff {
        Some(1) | None => String::new(),
        Some(c) => format!("({c}) * "),
    };
    let head = format!(
        "{}{}[{}] r={} n={}",
        factor,
        node.kind.symbol(),
        node.labels.join(","),
        node.rank,
        node.size
    );
    let next = seen.len() + 1;
    if let Some(id) = seen.get(&Arc::as_ptr(node)) {
        let _ = writeln!(out, "{pad}{head} = {}  (see #{id})", node.result);
        return;
    }
    seen.insert(Arc::as_ptr(node), next);
    let _ = write!(out, "{pad}#{next} {head} = {}  by {}", node.result, node.rule.name());
    if node.constant != 0 && !node.terms.is_empty() {
        let _ = write!(out, ", constant {}", node.constant);
    }
    if let Some(note) = &node.note {
        let _ = write!(out, "  [{note}]");
    }
    out.push('\n');
    for (c, child) in &node.terms {
        render(child, depth + 1, Some(*c), seen, out);
    }
}
