//! Min-degree greedy stable sets and cliques.

use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// Greedy stable set of `G[within]`: repeatedly take a vertex of minimum
/// remaining degree (lowest id on ties) and discard its neighbours.
///
/// The result has at least `k / (1 + avg_deg)` vertices for `k = |within|`.
pub fn greedy_stable(g: &Graph, within: &VertexSet) -> VertexSet {
    greedy(g, within, false)
}

/// Greedy clique of `G[within]`; the stable-set greedy on the complement.
pub fn greedy_clique(g: &Graph, within: &VertexSet) -> VertexSet {
    greedy(g, within, true)
}

fn greedy(g: &Graph, within: &VertexSet, complement: bool) -> VertexSet {
    let n = g.n();
    let mut remaining = within.clone();
    let mut deg = vec![0usize; n];
    for v in within {
        deg[v] = g.neighbours(v).intersection_len(within);
    }
    let mut out = VertexSet::new(n);
    while !remaining.is_empty() {
        let size = remaining.len();
        let local = |v: usize| {
            if complement {
                size - 1 - deg[v]
            } else {
                deg[v]
            }
        };
        let v = remaining
            .iter()
            .min_by_key(|&v| (local(v), v))
            .expect("nonempty");
        out.insert(v);
        let mut gone = if complement {
            remaining.difference(g.neighbours(v))
        } else {
            remaining.intersection(g.neighbours(v))
        };
        gone.insert(v);
        remaining.difference_with(&gone);
        for u in &gone {
            for w in g.neighbours(u).intersection(&remaining).iter() {
                deg[w] -= 1;
            }
        }
    }
    out
}
