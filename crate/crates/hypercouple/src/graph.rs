//! Simple graphs on at most 128 vertices, with bitset adjacency.

use rand::RngCore;
use std::fmt;

use crate::error::{Error, Result};
use crate::prob::{bernoulli, Rat};

/// Hard cap so vertex sets fit in a u128 mask.
pub const MAX_VERTICES: usize = 128;

/// An unordered vertex pair with `u() < v()`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(u16, u16);

impl Edge {
    pub fn new(a: usize, b: usize) -> Edge {
        assert!(a != b, "loops are not edges");
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Edge(a as u16, b as u16)
    }

    pub fn u(&self) -> usize {
        self.0 as usize
    }

    pub fn v(&self) -> usize {
        self.1 as usize
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Undirected simple graph. No loops, no multi-edges, every endpoint < n.
#[derive(Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u128>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Result<SimpleGraph> {
        if n > MAX_VERTICES {
            return Err(Error::GraphTooLarge {
                got: n,
                cap: MAX_VERTICES,
            });
        }
        Ok(SimpleGraph {
            n,
            adj: vec![0u128; n],
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<SimpleGraph> {
        let mut g = SimpleGraph::new(n)?;
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidPattern(format!("loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidPattern(format!(
                    "edge ({a},{b}) out of range for n={n}"
                )));
            }
            if g.has_edge(a, b) {
                return Err(Error::InvalidPattern(format!("duplicate edge ({a},{b})")));
            }
            g.add_edge(a, b);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> SimpleGraph {
        let mut g = SimpleGraph::new(n).expect("complete graph within cap");
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> SimpleGraph {
        assert!(n >= 3);
        let mut g = SimpleGraph::new(n).expect("cycle within cap");
        for u in 0..n {
            g.add_edge(u, (u + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> SimpleGraph {
        assert!(n >= 2);
        let mut g = SimpleGraph::new(n).expect("path within cap");
        for u in 0..n - 1 {
            g.add_edge(u, u + 1);
        }
        g
    }

    pub fn petersen() -> SimpleGraph {
        let outer: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let spokes: Vec<(usize, usize)> = (0..5).map(|i| (i, i + 5)).collect();
        let inner: Vec<(usize, usize)> = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5)).collect();
        let mut edges = outer;
        edges.extend(spokes);
        edges.extend(inner);
        SimpleGraph::from_edges(10, &edges).expect("petersen is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b && a < self.n && b < self.n);
        self.adj[a] |= 1u128 << b;
        self.adj[b] |= 1u128 << a;
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.adj[a] &= !(1u128 << b);
        self.adj[b] &= !(1u128 << a);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && (self.adj[a] >> b) & 1 == 1
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.has_edge(e.u(), e.v())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn neighbors_mask(&self, v: usize) -> u128 {
        self.adj[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges in lexicographic order on (u, v).
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            let mut m = self.adj[u] >> (u + 1) << (u + 1);
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                out.push(Edge::new(u, v));
                m &= m - 1;
            }
        }
        out
    }

    /// Non-edges (unordered pairs of distinct vertices that are not edges).
    pub fn non_edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    out.push(Edge::new(u, v));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let full = if self.n == 128 {
            u128::MAX
        } else {
            (1u128 << self.n) - 1
        };
        self.reachable_from(0) == full
    }

    fn reachable_from(&self, start: usize) -> u128 {
        let mut seen = 1u128 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u128;
            let mut m = frontier;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                next |= self.adj[v];
                m &= m - 1;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    }

    /// Connected components as sorted vertex lists (isolated vertices included).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = 0u128;
        let mut out = Vec::new();
        for v in 0..self.n {
            if (seen >> v) & 1 == 0 {
                let comp = self.reachable_from(v);
                seen |= comp;
                let mut verts = Vec::new();
                let mut m = comp;
                while m != 0 {
                    verts.push(m.trailing_zeros() as usize);
                    m &= m - 1;
                }
                out.push(verts);
            }
        }
        out
    }

    /// Whether the graph restricted to `mask` is connected (single component
    /// spanning every vertex of the mask). Empty mask counts as connected.
    pub fn connected_within(&self, mask: u128) -> bool {
        if mask == 0 {
            return true;
        }
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u128 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u128;
            let mut m = frontier;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                next |= self.adj[v] & mask;
                m &= m - 1;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == mask
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Samples G(n,p): each of the C(n,2) edges present independently with
/// probability p, drawn with exact coins in lexicographic edge order.
pub fn sample_gnp(n: usize, p: &Rat, rng: &mut impl RngCore) -> Result<SimpleGraph> {
    let mut g = SimpleGraph::new(n)?;
    for u in 0..n {
        for v in u + 1..n {
            if bernoulli(rng, p) {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn edge_normalizes_order() {
        assert_eq!(Edge::new(3, 1), Edge::new(1, 3));
        assert_eq!(Edge::new(1, 3).u(), 1);
    }

    #[test]
    fn rejects_loops_duplicates_and_range() {
        assert!(SimpleGraph::from_edges(3, &[(0, 0)]).is_err());
        assert!(SimpleGraph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(SimpleGraph::from_edges(3, &[(0, 3)]).is_err());
        assert!(SimpleGraph::new(129).is_err());
    }

    #[test]
    fn basic_counts() {
        let k4 = SimpleGraph::complete(4);
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(k4.max_degree(), 3);
        assert!(k4.is_connected());
        let c5 = SimpleGraph::cycle(5);
        assert_eq!(c5.edge_count(), 5);
        let p = SimpleGraph::petersen();
        assert_eq!(p.edge_count(), 15);
        assert!(p.is_connected());
        assert!((0..10).all(|v| p.degree(v) == 3));
    }

    #[test]
    fn gnp_endpoints() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let empty = sample_gnp(10, &rat(0, 1), &mut rng).unwrap();
        assert_eq!(empty.edge_count(), 0);
        let full = sample_gnp(10, &rat(1, 1), &mut rng).unwrap();
        assert_eq!(full.edge_count(), 45);
    }

    #[test]
    fn gnp_edge_count_near_mean() {
        // n=100, p=1/2: mean C(100,2)/2 = 2475, binomial sd ~ 35.2.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut total = 0usize;
        let draws = 40;
        for _ in 0..draws {
            total += sample_gnp(100, &rat(1, 2), &mut rng).unwrap().edge_count();
        }
        let mean = total as f64 / draws as f64;
        let sigma = (4950.0f64 * 0.25 / draws as f64).sqrt();
        assert!(
            (mean - 2475.0).abs() < 4.0 * sigma,
            "mean {mean} too far from 2475"
        );
    }

    #[test]
    fn per_edge_frequency_matches_p() {
        // Spec invariant: per-edge frequency within 4 binomial sigma over >= 1e4 draws.
        let n = 6;
        let p = rat(3, 10);
        let draws = 10_000u32;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut counts = vec![0u32; 15];
        for _ in 0..draws {
            let g = sample_gnp(n, &p, &mut rng).unwrap();
            for (i, e) in SimpleGraph::complete(n).edges().iter().enumerate() {
                if g.contains(*e) {
                    counts[i] += 1;
                }
            }
        }
        let sigma = (draws as f64 * 0.3 * 0.7).sqrt();
        for (i, c) in counts.iter().enumerate() {
            assert!(
                (*c as f64 - draws as f64 * 0.3).abs() < 4.0 * sigma,
                "edge {i} count {c}"
            );
        }
    }
}
