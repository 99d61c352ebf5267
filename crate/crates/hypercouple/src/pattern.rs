//! Pattern graphs F: classification (1-density, balancedness, connectivity,
//! niceness), copy enumeration over [n], and a direct F-factor solver.

use itertools::Itertools;
use num_rational::Rational64;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Edge, SimpleGraph};
use crate::iso::{are_isomorphic, automorphism_count, enumerate_embeddings};

/// Largest pattern we classify exactly.
pub const PATTERN_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub one_balanced: bool,
    pub strictly_one_balanced: bool,
    pub two_connected: bool,
    pub three_connected: bool,
    pub edge_swap_rigid: bool,
    pub nice: bool,
}

/// A connected pattern graph with derived metadata, immutable after
/// construction.
#[derive(Clone)]
pub struct PatternGraph {
    graph: SimpleGraph,
    r: usize,
    s: usize,
    d1: Rational64,
    aut_count: u64,
    kappa: usize,
    class: Classification,
}

impl PatternGraph {
    pub fn new(graph: SimpleGraph) -> Result<PatternGraph> {
        let r = graph.vertex_count();
        if r < 2 {
            return Err(Error::InvalidPattern(
                "pattern needs at least 2 vertices".into(),
            ));
        }
        if r > PATTERN_CAP {
            return Err(Error::PatternTooLarge {
                got: r,
                cap: PATTERN_CAP,
            });
        }
        if !graph.is_connected() {
            return Err(Error::InvalidPattern("pattern must be connected".into()));
        }
        let s = graph.edge_count();
        let d1 = Rational64::new(s as i64, (r - 1) as i64);
        let aut_count = automorphism_count(&graph);
        let kappa = vertex_connectivity(&graph);
        let (one_balanced, strictly_one_balanced) = balance_flags(&graph, d1);
        let edge_swap_rigid = edge_swap_rigid(&graph);
        let class = Classification {
            one_balanced,
            strictly_one_balanced,
            two_connected: kappa >= 2,
            three_connected: kappa >= 3,
            edge_swap_rigid,
            nice: strictly_one_balanced && kappa >= 3 && edge_swap_rigid,
        };
        Ok(PatternGraph {
            graph,
            r,
            s,
            d1,
            aut_count,
            kappa,
            class,
        })
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    /// |F|.
    pub fn r(&self) -> usize {
        self.r
    }

    /// e(F).
    pub fn s(&self) -> usize {
        self.s
    }

    /// 1-density e(F)/(|F|-1), exact.
    pub fn one_density(&self) -> Rational64 {
        self.d1
    }

    pub fn aut_count(&self) -> u64 {
        self.aut_count
    }

    pub fn vertex_connectivity(&self) -> usize {
        self.kappa
    }

    pub fn classification(&self) -> Classification {
        self.class
    }

    pub fn is_nice(&self) -> bool {
        self.class.nice
    }

    pub fn is_complete(&self) -> bool {
        self.s == self.r * (self.r - 1) / 2
    }

    /// Number of distinct copies of F in K_n: C(n,r) * r! / aut(F).
    pub fn copy_count(&self, n: usize) -> u64 {
        if n < self.r {
            return 0;
        }
        let mut binom = 1u128;
        for i in 0..self.r {
            binom = binom * (n - i) as u128 / (i + 1) as u128;
        }
        let fact: u128 = (1..=self.r as u128).product();
        (binom * fact / self.aut_count as u128) as u64
    }

    /// All distinct copies of F over vertex set {0..n-1}, in lexicographic
    /// order on sorted edge sets. This is the canonical testing order.
    pub fn enumerate_copies(&self, n: usize) -> Vec<FCopy> {
        if n < self.r {
            return Vec::new();
        }
        let mut copies: Vec<FCopy> = Vec::new();
        for subset in (0..n).combinations(self.r) {
            let mut seen: BTreeMap<Vec<Edge>, Vec<u16>> = BTreeMap::new();
            for perm in subset.iter().permutations(self.r) {
                let image: Vec<u16> = perm.into_iter().map(|&v| v as u16).collect();
                let edges = image_edges(&self.graph, &image);
                seen.entry(edges).or_insert(image);
            }
            for (edges, image) in seen {
                copies.push(FCopy { image, edges });
            }
        }
        copies.sort_by(|a, b| a.edges.cmp(&b.edges));
        debug_assert_eq!(copies.len() as u64, self.copy_count(n));
        copies
    }

    /// All distinct copies of F whose edges are present in `host`.
    pub fn copies_in(&self, host: &SimpleGraph) -> Vec<FCopy> {
        let mut seen: BTreeMap<Vec<Edge>, Vec<u16>> = BTreeMap::new();
        for image in enumerate_embeddings(&self.graph, host) {
            let edges = image_edges(&self.graph, &image);
            seen.entry(edges).or_insert(image);
        }
        seen.into_iter()
            .map(|(edges, image)| FCopy { image, edges })
            .collect()
    }
}

impl fmt::Debug for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PatternGraph(r={}, s={}, d1={}, aut={}, kappa={}, nice={})",
            self.r, self.s, self.d1, self.aut_count, self.kappa, self.class.nice
        )
    }
}

fn image_edges(pattern: &SimpleGraph, image: &[u16]) -> Vec<Edge> {
    let mut edges: Vec<Edge> = pattern
        .edges()
        .iter()
        .map(|e| Edge::new(image[e.u()] as usize, image[e.v()] as usize))
        .collect();
    edges.sort_unstable();
    edges
}

/// A copy of a pattern in some ambient vertex set. Two copies are equal
/// iff their edge sets are equal (quotient by pattern automorphisms); the
/// stored image is one representative map.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FCopy {
    image: Vec<u16>,
    edges: Vec<Edge>,
}

impl FCopy {
    pub fn image(&self) -> &[u16] {
        &self.image
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Sorted vertex set spanned by the copy.
    pub fn vertex_set(&self) -> Vec<u16> {
        let mut vs = self.image.clone();
        vs.sort_unstable();
        vs
    }

    pub fn shares_edge_with(&self, other: &FCopy) -> bool {
        let mut i = 0;
        let mut j = 0;
        while i < self.edges.len() && j < other.edges.len() {
            match self.edges[i].cmp(&other.edges[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

impl fmt::Debug for FCopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FCopy{:?}", self.vertex_set())
    }
}

/// (one_balanced, strictly_one_balanced). It suffices to check induced
/// subgraphs: on a fixed vertex set the induced subgraph maximizes d1, and
/// proper subgraphs on the full vertex set drop edges, lowering d1. The
/// naive all-subgraph oracle in the tests confirms this reduction.
fn balance_flags(g: &SimpleGraph, d1: Rational64) -> (bool, bool) {
    let n = g.vertex_count();
    let mut balanced = true;
    let mut strict = true;
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let verts: Vec<usize> = (0..n).filter(|v| (mask >> v) & 1 == 1).collect();
        let mut edges = 0usize;
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                if g.has_edge(u, v) {
                    edges += 1;
                }
            }
        }
        if edges == 0 {
            continue;
        }
        let sub_d1 = Rational64::new(edges as i64, (size - 1) as i64);
        if sub_d1 > d1 {
            balanced = false;
            strict = false;
            break;
        }
        if size < n && sub_d1 >= d1 {
            strict = false;
        }
    }
    (balanced, strict)
}

/// Vertex connectivity kappa(G): 0 for disconnected input, n-1 for complete
/// graphs, otherwise the smallest vertex cut, found by subset enumeration.
pub fn vertex_connectivity(g: &SimpleGraph) -> usize {
    let n = g.vertex_count();
    if n == 0 || !g.is_connected() {
        return 0;
    }
    if g.edge_count() == n * (n - 1) / 2 {
        return n - 1;
    }
    for k in 1..n - 1 {
        for cut in (0..n).combinations(k) {
            let mut mask = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
            for v in &cut {
                mask &= !(1u128 << v);
            }
            if mask.count_ones() >= 2 && !g.connected_within(mask) {
                return k;
            }
        }
    }
    n - 1
}

/// True iff no single add-one-edge-delete-one-edge move produces a graph
/// isomorphic to F. Complete graphs are vacuously rigid.
pub fn edge_swap_rigid(g: &SimpleGraph) -> bool {
    let non_edges = g.non_edges();
    if non_edges.is_empty() {
        return true;
    }
    let edges = g.edges();
    for add in &non_edges {
        for del in &edges {
            let mut h = g.clone();
            h.add_edge(add.u(), add.v());
            h.remove_edge(del.u(), del.v());
            if are_isomorphic(g, &h) {
                return false;
            }
        }
    }
    true
}

/// Built-in patterns: K3..K7, C4..C7, P3..P5, petersen.
pub fn named_pattern(name: &str) -> Result<PatternGraph> {
    let lower = name.to_ascii_lowercase();
    let graph = match lower.as_str() {
        "k3" => SimpleGraph::complete(3),
        "k4" => SimpleGraph::complete(4),
        "k5" => SimpleGraph::complete(5),
        "k6" => SimpleGraph::complete(6),
        "k7" => SimpleGraph::complete(7),
        "c4" => SimpleGraph::cycle(4),
        "c5" => SimpleGraph::cycle(5),
        "c6" => SimpleGraph::cycle(6),
        "c7" => SimpleGraph::cycle(7),
        "p3" => SimpleGraph::path(3),
        "p4" => SimpleGraph::path(4),
        "p5" => SimpleGraph::path(5),
        "petersen" => SimpleGraph::petersen(),
        _ => {
            return Err(Error::InvalidPattern(format!(
                "unknown pattern name {name:?}"
            )))
        }
    };
    PatternGraph::new(graph)
}

/// Parses the edge-list format: first line "n m", then m lines "u v".
pub fn parse_pattern(text: &str) -> Result<PatternGraph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty pattern file".into()))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("bad pattern header".into()))?;
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("bad pattern header".into()))?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse("truncated pattern file".into()))?;
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad edge line {line:?}")))?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad edge line {line:?}")))?;
        edges.push((u, v));
    }
    PatternGraph::new(SimpleGraph::from_edges(n, &edges)?)
}

pub fn format_pattern(p: &PatternGraph) -> String {
    let edges = p.graph().edges();
    let mut out = format!("{} {}\n", p.r(), edges.len());
    for e in edges {
        out.push_str(&format!("{} {}\n", e.u(), e.v()));
    }
    out
}

/// Loads a pattern from a built-in name or a file path.
pub fn load_pattern(spec: &str) -> Result<PatternGraph> {
    if let Ok(p) = named_pattern(spec) {
        return Ok(p);
    }
    let text = std::fs::read_to_string(spec)?;
    parse_pattern(&text)
}

/// Exact F-factor search in a host graph: backtracking exact cover over
/// the copies of F present in the host, branching on the lowest uncovered
/// vertex. Returns a factor iff one exists.
pub fn find_factor_direct(host: &SimpleGraph, pattern: &PatternGraph) -> Result<Option<Vec<FCopy>>> {
    let n = host.vertex_count();
    let r = pattern.r();
    if n % r != 0 {
        return Err(Error::Divisibility {
            count: n,
            divisor: r,
        });
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let copies = pattern.copies_in(host);
    // Group copies by vertex set: only the vertex set matters for covering.
    let mut by_set: BTreeMap<u128, usize> = BTreeMap::new();
    for (idx, c) in copies.iter().enumerate() {
        let mask = vertex_mask(c);
        by_set.entry(mask).or_insert(idx);
    }
    let candidates: Vec<(u128, usize)> = by_set.into_iter().collect();
    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, (mask, _)) in candidates.iter().enumerate() {
        let mut m = *mask;
        while m != 0 {
            per_vertex[m.trailing_zeros() as usize].push(i);
            m &= m - 1;
        }
    }
    let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut chosen = Vec::new();
    if cover(full, &candidates, &per_vertex, &mut chosen) {
        Ok(Some(
            chosen
                .into_iter()
                .map(|i| copies[candidates[i].1].clone())
                .collect(),
        ))
    } else {
        Ok(None)
    }
}

fn vertex_mask(c: &FCopy) -> u128 {
    c.image().iter().fold(0u128, |m, &v| m | (1u128 << v))
}

fn cover(
    uncovered: u128,
    candidates: &[(u128, usize)],
    per_vertex: &[Vec<usize>],
    chosen: &mut Vec<usize>,
) -> bool {
    if uncovered == 0 {
        return true;
    }
    // Branch on the uncovered vertex with the fewest available candidates.
    let mut best_v = usize::MAX;
    let mut best_count = usize::MAX;
    let mut m = uncovered;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        let count = per_vertex[v]
            .iter()
            .filter(|&&i| candidates[i].0 & !uncovered == 0)
            .count();
        if count < best_count {
            best_count = count;
            best_v = v;
            if count == 0 {
                return false;
            }
        }
    }
    for &i in &per_vertex[best_v] {
        let mask = candidates[i].0;
        if mask & !uncovered != 0 {
            continue;
        }
        chosen.push(i);
        if cover(uncovered & !mask, candidates, per_vertex, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(g: SimpleGraph) -> PatternGraph {
        PatternGraph::new(g).unwrap()
    }

    #[test]
    fn one_density_values() {
        assert_eq!(pat(SimpleGraph::complete(4)).one_density(), Rational64::new(2, 1));
        assert_eq!(pat(SimpleGraph::complete(3)).one_density(), Rational64::new(3, 2));
        assert_eq!(pat(SimpleGraph::cycle(4)).one_density(), Rational64::new(4, 3));
        assert!(PatternGraph::new(SimpleGraph::new(1).unwrap()).is_err());
    }

    #[test]
    fn balance_classification() {
        let k5 = pat(SimpleGraph::complete(5));
        assert!(k5.classification().one_balanced && k5.classification().strictly_one_balanced);
        let c4 = pat(SimpleGraph::cycle(4));
        assert!(c4.classification().one_balanced && c4.classification().strictly_one_balanced);
        // Two triangles sharing one vertex: d1 = 6/4 = 3/2 = d1(K3), so
        // balanced holds but strictness fails.
        let bowtie = pat(SimpleGraph::from_edges(
            5,
            &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)],
        )
        .unwrap());
        assert!(bowtie.classification().one_balanced);
        assert!(!bowtie.classification().strictly_one_balanced);
    }

    /// Naive oracle: every subgraph (every vertex subset, every edge subset
    /// within it), not just induced ones.
    fn naive_balance(g: &SimpleGraph) -> (bool, bool) {
        let n = g.vertex_count();
        let s = g.edge_count();
        let d1 = Rational64::new(s as i64, (n - 1) as i64);
        let all_edges = g.edges();
        let mut balanced = true;
        let mut strict = true;
        for vmask in 1u32..(1u32 << n) {
            let verts: Vec<usize> = (0..n).filter(|v| (vmask >> v) & 1 == 1).collect();
            if verts.len() < 2 {
                continue;
            }
            let in_edges: Vec<&Edge> = all_edges
                .iter()
                .filter(|e| (vmask >> e.u()) & 1 == 1 && (vmask >> e.v()) & 1 == 1)
                .collect();
            for emask in 1u32..(1u32 << in_edges.len()) {
                let count = emask.count_ones() as usize;
                let sub_d1 = Rational64::new(count as i64, (verts.len() - 1) as i64);
                if sub_d1 > d1 {
                    balanced = false;
                    strict = false;
                }
                let proper = verts.len() < n || count < s;
                if proper && sub_d1 >= d1 {
                    strict = false;
                }
            }
        }
        (balanced, strict)
    }

    #[test]
    fn balance_matches_naive_oracle() {
        let cases = vec![
            SimpleGraph::complete(3),
            SimpleGraph::complete(4),
            SimpleGraph::complete(5),
            SimpleGraph::cycle(4),
            SimpleGraph::cycle(5),
            SimpleGraph::cycle(6),
            SimpleGraph::path(3),
            SimpleGraph::path(4),
            SimpleGraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap(),
            SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (0, 3)]).unwrap(),
            SimpleGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
                .unwrap(),
            SimpleGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)]).unwrap(),
        ];
        for g in cases {
            let p = pat(g.clone());
            let (nb, ns) = naive_balance(&g);
            assert_eq!(p.classification().one_balanced, nb, "balanced {g:?}");
            assert_eq!(p.classification().strictly_one_balanced, ns, "strict {g:?}");
        }
    }

    #[test]
    fn connectivity_values() {
        assert_eq!(pat(SimpleGraph::complete(3)).vertex_connectivity(), 2);
        assert_eq!(pat(SimpleGraph::cycle(5)).vertex_connectivity(), 2);
        assert_eq!(pat(SimpleGraph::complete(4)).vertex_connectivity(), 3);
        assert_eq!(pat(SimpleGraph::path(4)).vertex_connectivity(), 1);
        assert_eq!(pat(SimpleGraph::petersen()).vertex_connectivity(), 3);
        assert_eq!(vertex_connectivity(&SimpleGraph::new(4).unwrap()), 0);
    }

    #[test]
    fn edge_swap_rigidity() {
        // Regular graphs satisfy the condition.
        assert!(pat(SimpleGraph::complete(4)).classification().edge_swap_rigid);
        assert!(pat(SimpleGraph::cycle(5)).classification().edge_swap_rigid);
        // P3: moving one end edge across gives an isomorphic path.
        assert!(!pat(SimpleGraph::path(3)).classification().edge_swap_rigid);
    }

    #[test]
    fn niceness() {
        for r in 4..=6 {
            assert!(pat(SimpleGraph::complete(r)).is_nice(), "K{r} nice");
        }
        assert!(!pat(SimpleGraph::complete(3)).is_nice());
        assert!(!pat(SimpleGraph::cycle(4)).is_nice());
        assert!(!pat(SimpleGraph::cycle(5)).is_nice());
    }

    #[test]
    fn copy_enumeration_counts() {
        assert_eq!(pat(SimpleGraph::complete(3)).enumerate_copies(4).len(), 4);
        assert_eq!(pat(SimpleGraph::path(3)).enumerate_copies(3).len(), 3);
        // C(5,4) * 4! / 8 = 15, cross-checked by brute force below.
        let c4 = pat(SimpleGraph::cycle(4));
        let copies = c4.enumerate_copies(5);
        assert_eq!(copies.len(), 15);
        let brute = c4.copies_in(&SimpleGraph::complete(5));
        assert_eq!(brute.len(), 15);
        let a: Vec<_> = copies.iter().map(|c| c.edges().to_vec()).collect();
        let b: Vec<_> = brute.iter().map(|c| c.edges().to_vec()).collect();
        assert_eq!(a, b);
        // Order is lexicographic on sorted edge sets.
        let mut sorted = a.clone();
        sorted.sort();
        assert_eq!(a, sorted);
        assert!(pat(SimpleGraph::complete(4)).enumerate_copies(3).is_empty());
    }

    #[test]
    fn copy_count_formula_matches() {
        for (g, n) in [
            (SimpleGraph::complete(4), 7usize),
            (SimpleGraph::cycle(5), 7),
            (SimpleGraph::path(4), 6),
            (SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (0, 3)]).unwrap(), 6),
        ] {
            let p = pat(g);
            assert_eq!(p.enumerate_copies(n).len() as u64, p.copy_count(n));
        }
    }

    #[test]
    fn factor_direct_examples() {
        let k4 = pat(SimpleGraph::complete(4));
        let factor = find_factor_direct(&SimpleGraph::complete(8), &k4)
            .unwrap()
            .expect("K8 has a K4-factor");
        assert_eq!(factor.len(), 2);
        let empty = SimpleGraph::new(4).unwrap();
        assert!(find_factor_direct(&empty, &k4).unwrap().is_none());
        assert!(find_factor_direct(&SimpleGraph::complete(6), &k4).is_err());
        // C8 host, P4 pattern: two disjoint paths.
        let p4 = pat(SimpleGraph::path(4));
        let c8 = SimpleGraph::cycle(8);
        let factor = find_factor_direct(&c8, &p4).unwrap().expect("C8 has P4-factor");
        assert_eq!(factor.len(), 2);
        let mut covered: Vec<u16> = factor.iter().flat_map(|c| c.vertex_set()).collect();
        covered.sort_unstable();
        assert_eq!(covered, (0..8).collect::<Vec<u16>>());
    }

    #[test]
    fn named_and_parsed_patterns() {
        assert_eq!(named_pattern("K4").unwrap().r(), 4);
        assert_eq!(named_pattern("petersen").unwrap().s(), 15);
        assert!(named_pattern("K9").is_err());
        let text = "4 4\n0 1\n1 2\n2 3\n3 0\n";
        let parsed = parse_pattern(text).unwrap();
        assert_eq!(parsed.one_density(), Rational64::new(4, 3));
        let round = format_pattern(&parsed);
        assert_eq!(parse_pattern(&round).unwrap().s(), 4);
    }
}
