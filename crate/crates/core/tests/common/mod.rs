use grothmodt::graph::Multigraph;
use proptest::prelude::*;

/// Connected multigraph: a spanning path plus extra edges (loops and
/// parallels allowed).
pub fn multigraph(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = Multigraph> {
    (2..=max_vertices).prop_flat_map(move |v| {
        let extra = max_edges.saturating_sub(v - 1);
        proptest::collection::vec((0..v, 0..v), 0..=extra).prop_map(move |pairs| {
            let mut g = Multigraph::new();
            for i in 0..v {
                g.add_vertex(&format!("v{i}"));
            }
            let path = (0..v - 1).map(|i| (i, i + 1));
            for (k, (a, b)) in path.chain(pairs).enumerate() {
                g.add_edge(&format!("e{k}"), &format!("v{a}"), &format!("v{b}")).unwrap();
            }
            g
        })
    })
}

/// Simple graph on exactly `n` vertices from an adjacency bit mask.
#[allow(dead_code)]
pub fn simple_graph(n: usize, mask: u64) -> Multigraph {
    let mut g = Multigraph::new();
    for v in 0..n {
        g.add_vertex(&format!("v{v}"));
    }
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if mask >> k & 1 == 1 {
                g.add_edge(&format!("e{k}"), &format!("v{a}"), &format!("v{b}")).unwrap();
            }
            k += 1;
        }
    }
    g
}
