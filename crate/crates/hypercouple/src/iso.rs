//! Brute-force isomorphism, automorphism counting, and subgraph-embedding
//! enumeration with degree pruning. Built for desk-scale patterns (<= 10
//! vertices), not for canonical-labeling research workloads.

use crate::graph::SimpleGraph;

/// All injective maps `pattern -> host` that send edges to edges
/// (subgraph embeddings, not induced). Returned as image vectors indexed
/// by pattern vertex.
pub fn enumerate_embeddings(pattern: &SimpleGraph, host: &SimpleGraph) -> Vec<Vec<u16>> {
    let np = pattern.vertex_count();
    let nh = host.vertex_count();
    if np == 0 || np > nh {
        return Vec::new();
    }
    let order = search_order(pattern);
    let mut image = vec![u16::MAX; np];
    let mut used = 0u128;
    let mut out = Vec::new();
    embed_rec(pattern, host, &order, 0, &mut image, &mut used, &mut out);
    out
}

/// Visit pattern vertices so each (after the first) touches an already
/// placed vertex when the pattern is connected; degree-descending start.
fn search_order(pattern: &SimpleGraph) -> Vec<usize> {
    let n = pattern.vertex_count();
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u128;
    while order.len() < n {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if (placed >> v) & 1 == 1 {
                continue;
            }
            let touches = pattern.neighbors_mask(v) & placed != 0;
            let better = match best {
                None => true,
                Some(b) => {
                    let b_touches = pattern.neighbors_mask(b) & placed != 0;
                    (touches && !b_touches)
                        || (touches == b_touches && pattern.degree(v) > pattern.degree(b))
                }
            };
            if better {
                best = Some(v);
            }
        }
        let v = best.unwrap();
        placed |= 1u128 << v;
        order.push(v);
    }
    order
}

fn embed_rec(
    pattern: &SimpleGraph,
    host: &SimpleGraph,
    order: &[usize],
    depth: usize,
    image: &mut Vec<u16>,
    used: &mut u128,
    out: &mut Vec<Vec<u16>>,
) {
    if depth == order.len() {
        out.push(image.clone());
        return;
    }
    let pv = order[depth];
    let pdeg = pattern.degree(pv);
    // Candidates must be adjacent (in host) to images of all placed
    // pattern-neighbors of pv.
    let mut candidates = !*used;
    let nh = host.vertex_count();
    candidates &= if nh == 128 {
        u128::MAX
    } else {
        (1u128 << nh) - 1
    };
    let mut nbrs = pattern.neighbors_mask(pv);
    while nbrs != 0 {
        let pu = nbrs.trailing_zeros() as usize;
        nbrs &= nbrs - 1;
        let img = image[pu];
        if img != u16::MAX {
            candidates &= host.neighbors_mask(img as usize);
        }
    }
    let mut m = candidates;
    while m != 0 {
        let hv = m.trailing_zeros() as usize;
        m &= m - 1;
        if host.degree(hv) < pdeg {
            continue;
        }
        image[pv] = hv as u16;
        *used |= 1u128 << hv;
        embed_rec(pattern, host, order, depth + 1, image, used, out);
        *used &= !(1u128 << hv);
        image[pv] = u16::MAX;
    }
}

/// Number of edge-set-preserving vertex permutations. An injective
/// edge-preserving self-map hits all e(G) edges, so it preserves the edge
/// set exactly; no non-edge check is needed.
pub fn automorphism_count(g: &SimpleGraph) -> u64 {
    if g.vertex_count() == 0 {
        return 1;
    }
    enumerate_embeddings(g, g).len() as u64
}

/// Exact isomorphism test for small graphs.
pub fn are_isomorphic(a: &SimpleGraph, b: &SimpleGraph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.vertex_count()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.vertex_count()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    iso_exists(a, b)
}

fn iso_exists(a: &SimpleGraph, b: &SimpleGraph) -> bool {
    let order = search_order(a);
    let n = a.vertex_count();
    let mut image = vec![u16::MAX; n];
    let mut used = 0u128;
    iso_rec(a, b, &order, 0, &mut image, &mut used)
}

fn iso_rec(
    a: &SimpleGraph,
    b: &SimpleGraph,
    order: &[usize],
    depth: usize,
    image: &mut Vec<u16>,
    used: &mut u128,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let pv = order[depth];
    for hv in 0..b.vertex_count() {
        if (*used >> hv) & 1 == 1 || b.degree(hv) != a.degree(pv) {
            continue;
        }
        // Adjacency must match exactly against every placed vertex.
        let mut ok = true;
        for (pu, &img) in image.iter().enumerate() {
            if img == u16::MAX {
                continue;
            }
            if a.has_edge(pv, pu) != b.has_edge(hv, img as usize) {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        image[pv] = hv as u16;
        *used |= 1u128 << hv;
        if iso_rec(a, b, order, depth + 1, image, used) {
            return true;
        }
        *used &= !(1u128 << hv);
        image[pv] = u16::MAX;
    }
    false
}
