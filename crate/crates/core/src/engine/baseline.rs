use crate::graph::{Graph, SetKind};
use crate::vertex_set::VertexSet;

use super::outcome::CliqueOrStable;

/// Majority walk: take the lowest remaining vertex and keep the larger of its
/// neighbours and non-neighbours. Vertices kept via neighbours form a clique,
/// the others a stable set; the larger has at least `⌈½·log2 n⌉` vertices.
pub fn ramsey_baseline(g: &Graph) -> CliqueOrStable {
    let n = g.n();
    let mut rest = g.vertex_set();
    let mut clique = VertexSet::new(n);
    let mut stable = VertexSet::new(n);
    while let Some(v) = rest.first() {
        rest.remove(v);
        if rest.is_empty() {
            clique.insert(v);
            stable.insert(v);
            break;
        }
        let nbrs = rest.intersection(g.neighbours(v));
        if 2 * nbrs.len() >= rest.len() {
            clique.insert(v);
            rest = nbrs;
        } else {
            stable.insert(v);
            rest.difference_with(g.neighbours(v));
        }
    }
    if clique.len() >= stable.len() {
        CliqueOrStable {
            set: clique,
            kind: SetKind::Clique,
        }
    } else {
        CliqueOrStable {
            set: stable,
            kind: SetKind::Stable,
        }
    }
}

/// `⌈½·log2 n⌉`, the size [`ramsey_baseline`] always reaches.
pub fn baseline_floor(n: usize) -> usize {
    if n <= 1 {
        return n;
    }
    // ⌈log2 n⌉ = bits of (n - 1).
    let lg = usize::BITS - (n - 1).leading_zeros();
    (lg as usize).div_ceil(2)
}
