//! r-uniform multi-hypergraphs: components, nullity, tree/unicyclic/complex
//! classification, clean k-cycles, and bounded search for avoidable
//! configurations.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// An r-uniform multi-hypergraph over an ambient vertex set {0..n-1}.
/// Hyperedges are sorted r-element vertex lists; repeats are allowed and
/// meaningful (a repeated vertex set has nullity r-1).
#[derive(Clone, PartialEq, Eq)]
pub struct Hypergraph {
    r: usize,
    ambient_n: usize,
    edges: Vec<Vec<u16>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentClass {
    Tree,
    Unicyclic,
    Complex,
}

/// Per-component structure of a hypergraph.
#[derive(Clone, Debug)]
pub struct StructureReport {
    pub components: Vec<ComponentReport>,
}

#[derive(Clone, Debug)]
pub struct ComponentReport {
    pub vertices: Vec<u16>,
    pub hyperedge_indices: Vec<usize>,
    pub nullity: i64,
    pub class: ComponentClass,
}

impl Hypergraph {
    pub fn new(r: usize, ambient_n: usize) -> Result<Hypergraph> {
        if r < 2 {
            return Err(Error::InvalidHypergraph("r must be at least 2".into()));
        }
        Ok(Hypergraph {
            r,
            ambient_n,
            edges: Vec::new(),
        })
    }

    pub fn from_edges(r: usize, ambient_n: usize, edges: &[Vec<u16>]) -> Result<Hypergraph> {
        let mut h = Hypergraph::new(r, ambient_n)?;
        for e in edges {
            h.add_edge(e.clone())?;
        }
        Ok(h)
    }

    pub fn add_edge(&mut self, mut edge: Vec<u16>) -> Result<()> {
        edge.sort_unstable();
        if edge.len() != self.r {
            return Err(Error::InvalidHypergraph(format!(
                "hyperedge has {} vertices, expected {}",
                edge.len(),
                self.r
            )));
        }
        if edge.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidHypergraph(
                "hyperedge has repeated vertices".into(),
            ));
        }
        if edge.iter().any(|&v| v as usize >= self.ambient_n) {
            return Err(Error::InvalidHypergraph(
                "hyperedge vertex out of range".into(),
            ));
        }
        self.edges.push(edge);
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<u16>] {
        &self.edges
    }

    /// Vertices spanned by at least one hyperedge, sorted.
    pub fn spanned_vertices(&self) -> Vec<u16> {
        let mut vs: Vec<u16> = self.edges.iter().flatten().copied().collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Hyperedge degree of a vertex (multiplicity counted).
    pub fn degree(&self, v: u16) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    pub fn max_degree(&self) -> usize {
        self.spanned_vertices()
            .into_iter()
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// Connected components of the spanned part, as hyperedge index groups.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let m = self.edges.len();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        let mut by_vertex: HashMap<u16, usize> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                match by_vertex.get(&v) {
                    Some(&j) => {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        if a != b {
                            parent[a] = b;
                        }
                    }
                    None => {
                        by_vertex.insert(v, i);
                    }
                }
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..m {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort_by_key(|g| g[0]);
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Nullity n(H) = (r-1)e(H) + c(H) - |H|, with |H| the number of
    /// spanned vertices and c(H) the number of components of the spanned
    /// part. Empty hypergraphs have nullity 0.
    pub fn nullity(&self) -> i64 {
        if self.edges.is_empty() {
            return 0;
        }
        let e = self.edges.len() as i64;
        let c = self.components().len() as i64;
        let v = self.spanned_vertices().len() as i64;
        (self.r as i64 - 1) * e + c - v
    }

    /// Nullity of the sub-hypergraph on the given hyperedge indices.
    pub fn nullity_of(&self, indices: &[usize]) -> i64 {
        self.sub_hypergraph(indices).nullity()
    }

    pub fn sub_hypergraph(&self, indices: &[usize]) -> Hypergraph {
        Hypergraph {
            r: self.r,
            ambient_n: self.ambient_n,
            edges: indices.iter().map(|&i| self.edges[i].clone()).collect(),
        }
    }

    /// Tree / unicyclic / complex for a connected, nonempty hypergraph.
    pub fn classify_component(&self) -> Result<ComponentClass> {
        if self.edges.is_empty() {
            return Err(Error::InvalidHypergraph(
                "cannot classify an empty hypergraph".into(),
            ));
        }
        if !self.is_connected() {
            return Err(Error::Disconnected(
                "classify_component requires a connected hypergraph".into(),
            ));
        }
        Ok(match self.nullity() {
            0 => ComponentClass::Tree,
            1 => ComponentClass::Unicyclic,
            _ => ComponentClass::Complex,
        })
    }

    pub fn structure_report(&self) -> StructureReport {
        let comps = self.components();
        let components = comps
            .into_iter()
            .map(|idx| {
                let sub = self.sub_hypergraph(&idx);
                let nullity = sub.nullity();
                let class = match nullity {
                    0 => ComponentClass::Tree,
                    1 => ComponentClass::Unicyclic,
                    _ => ComponentClass::Complex,
                };
                ComponentReport {
                    vertices: sub.spanned_vertices(),
                    hyperedge_indices: idx,
                    nullity,
                    class,
                }
            })
            .collect();
        StructureReport { components }
    }

    /// Whether a connected hypergraph can be built starting from one vertex
    /// and repeatedly adding a hyperedge meeting the existing vertex set in
    /// exactly one vertex. Backtracks over addition orders.
    pub fn is_tree_by_construction(&self) -> bool {
        if self.edges.is_empty() {
            return true;
        }
        let m = self.edges.len();
        if m > 63 {
            return self.is_connected() && self.nullity() == 0;
        }
        let mut dead: HashSet<u64> = HashSet::new();
        for first in 0..m {
            let mut verts: HashSet<u16> = self.edges[first].iter().copied().collect();
            if self.grow_tree(1u64 << first, &mut verts, &mut dead) {
                return true;
            }
        }
        false
    }

    fn grow_tree(&self, used: u64, verts: &mut HashSet<u16>, dead: &mut HashSet<u64>) -> bool {
        let m = self.edges.len();
        if used.count_ones() as usize == m {
            return true;
        }
        if dead.contains(&used) {
            return false;
        }
        for i in 0..m {
            if (used >> i) & 1 == 1 {
                continue;
            }
            let shared = self.edges[i].iter().filter(|v| verts.contains(v)).count();
            if shared != 1 {
                continue;
            }
            let added: Vec<u16> = self.edges[i]
                .iter()
                .copied()
                .filter(|v| !verts.contains(v))
                .collect();
            for &v in &added {
                verts.insert(v);
            }
            if self.grow_tree(used | (1u64 << i), verts, dead) {
                return true;
            }
            for &v in &added {
                verts.remove(&v);
            }
        }
        dead.insert(used);
        false
    }

    /// Underlying graph: each hyperedge replaced by a clique, multiplicities
    /// merged.
    pub fn underlying_graph(&self) -> SimpleGraph {
        let mut g = SimpleGraph::new(self.ambient_n).expect("ambient within cap");
        for e in &self.edges {
            for i in 0..e.len() {
                for j in i + 1..e.len() {
                    if !g.has_edge(e[i] as usize, e[j] as usize) {
                        g.add_edge(e[i] as usize, e[j] as usize);
                    }
                }
            }
        }
        g
    }

    /// All clean k-cycles with 2 <= k <= k_max, as index sets. Complete up
    /// to k_max; each cycle reported once.
    pub fn find_clean_cycles(&self, k_max: usize) -> Vec<CleanCycle> {
        let m = self.edges.len();
        let mut out = Vec::new();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        if k_max >= 2 {
            for i in 0..m {
                for j in i + 1..m {
                    let shared = self.shared_vertices(i, j);
                    if shared.len() == 2 {
                        out.push(CleanCycle {
                            k: 2,
                            hyperedge_indices: vec![i, j],
                            cycle_vertices: shared,
                        });
                    }
                }
            }
        }
        for start in 0..m {
            let mut path = vec![start];
            self.cycle_dfs(start, k_max, &mut path, &mut seen, &mut out);
        }
        out
    }

    fn shared_vertices(&self, i: usize, j: usize) -> Vec<u16> {
        self.edges[i]
            .iter()
            .copied()
            .filter(|v| self.edges[j].contains(v))
            .collect()
    }

    fn cycle_dfs(
        &self,
        start: usize,
        k_max: usize,
        path: &mut Vec<usize>,
        seen: &mut HashSet<Vec<usize>>,
        out: &mut Vec<CleanCycle>,
    ) {
        let last = *path.last().unwrap();
        if path.len() >= 3
            && path.len() <= k_max
            && !self.shared_vertices(last, start).is_empty()
        {
            let mut key = path.clone();
            key.sort_unstable();
            if !seen.contains(&key) {
                if let Some(cycle_vertices) = self.clean_cycle_vertices(path) {
                    seen.insert(key);
                    out.push(CleanCycle {
                        k: path.len(),
                        hyperedge_indices: path.clone(),
                        cycle_vertices,
                    });
                }
            }
        }
        if path.len() >= k_max {
            return;
        }
        for next in (start + 1)..self.edges.len() {
            if path.contains(&next) || self.shared_vertices(last, next).is_empty() {
                continue;
            }
            path.push(next);
            self.cycle_dfs(start, k_max, path, seen, out);
            path.pop();
        }
    }

    /// If the hyperedges along `path` (cyclic order) form a clean cycle,
    /// returns the junction vertices: consecutive edges share exactly one
    /// vertex, all junctions distinct, non-consecutive edges disjoint.
    fn clean_cycle_vertices(&self, path: &[usize]) -> Option<Vec<u16>> {
        let k = path.len();
        let mut junctions = Vec::with_capacity(k);
        for a in 0..k {
            for b in a + 1..k {
                let shared = self.shared_vertices(path[a], path[b]);
                let consecutive = b == a + 1 || (a == 0 && b == k - 1);
                if consecutive {
                    if shared.len() != 1 {
                        return None;
                    }
                    junctions.push(shared[0]);
                } else if !shared.is_empty() {
                    return None;
                }
            }
        }
        junctions.sort_unstable();
        junctions.dedup();
        if junctions.len() != k {
            return None;
        }
        Some(junctions)
    }

    /// Searches for an avoidable configuration: a connected, complex
    /// sub-hypergraph with at most 2*C(r,2) hyperedges. Pre-filter: if every
    /// component has nullity <= 1, none can exist (nullity is monotone under
    /// sub-hypergraphs). Otherwise BFS over connected hyperedge subsets up
    /// to the size bound, with canonical-set pruning and a node budget.
    pub fn find_avoidable_configuration(&self, budget: u64) -> Result<Option<AvoidableWitness>> {
        let bound = self.r * (self.r - 1); // 2 * C(r,2)
        let comps = self.components();
        if comps.iter().all(|c| self.nullity_of(c) <= 1) {
            return Ok(None);
        }
        let m = self.edges.len();
        let mut visited: HashSet<Vec<usize>> = HashSet::new();
        let mut nodes = 0u64;
        let mut queue: Vec<Vec<usize>> = (0..m).map(|i| vec![i]).collect();
        let mut qi = 0;
        while qi < queue.len() {
            let subset = queue[qi].clone();
            qi += 1;
            nodes += 1;
            if nodes > budget {
                return Err(Error::BudgetExceeded {
                    what: "avoidable-configuration search",
                    budget,
                });
            }
            if self.nullity_of(&subset) >= 2 {
                let witness = AvoidableWitness::verified(self, subset)?;
                return Ok(Some(witness));
            }
            if subset.len() >= bound {
                continue;
            }
            let verts: HashSet<u16> = subset
                .iter()
                .flat_map(|&i| self.edges[i].iter().copied())
                .collect();
            for j in 0..m {
                if subset.contains(&j) {
                    continue;
                }
                if self.edges[j].iter().any(|v| verts.contains(v)) {
                    let mut next = subset.clone();
                    next.push(j);
                    next.sort_unstable();
                    if visited.insert(next.clone()) {
                        queue.push(next);
                    }
                }
            }
        }
        Ok(None)
    }

    /// Renders "r n m" followed by one line per hyperedge.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.r, self.ambient_n, self.edges.len());
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Hypergraph> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty hypergraph file".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse("bad header".into())))
            .collect::<Result<_>>()?;
        if nums.len() != 3 {
            return Err(Error::Parse("hypergraph header must be 'r n m'".into()));
        }
        let (r, n, m) = (nums[0], nums[1], nums[2]);
        let mut h = Hypergraph::new(r, n)?;
        for _ in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse("truncated hypergraph file".into()))?;
            let edge: Vec<u16> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse("bad vertex".into())))
                .collect::<Result<_>>()?;
            h.add_edge(edge)?;
        }
        Ok(h)
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Hypergraph(r={}, n={}, edges={:?})",
            self.r, self.ambient_n, self.edges
        )
    }
}

/// A clean k-cycle inside a hypergraph: hyperedge indices in cyclic order
/// and the k junction ("cycle") vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleanCycle {
    pub k: usize,
    pub hyperedge_indices: Vec<usize>,
    pub cycle_vertices: Vec<u16>,
}

/// A verified avoidable configuration: connected, complex, within the
/// 2*C(r,2) hyperedge bound.
#[derive(Clone, Debug)]
pub struct AvoidableWitness {
    pub hyperedge_indices: Vec<usize>,
    pub sub: Hypergraph,
}

impl AvoidableWitness {
    fn verified(h: &Hypergraph, indices: Vec<usize>) -> Result<AvoidableWitness> {
        let sub = h.sub_hypergraph(&indices);
        if !sub.is_connected() {
            return Err(Error::InvalidHypergraph(
                "avoidable witness not connected".into(),
            ));
        }
        if sub.nullity() < 2 {
            return Err(Error::InvalidHypergraph(
                "avoidable witness not complex".into(),
            ));
        }
        if sub.edge_count() > h.r() * (h.r() - 1) {
            return Err(Error::InvalidHypergraph(
                "avoidable witness exceeds the hyperedge bound".into(),
            ));
        }
        Ok(AvoidableWitness {
            hyperedge_indices: indices,
            sub,
        })
    }
}

/// Clean k-cycle construction: a graph k-cycle with r-2 fresh vertices per
/// edge (k = 2: two hyperedges sharing exactly two vertices).
pub fn build_clean_cycle(r: usize, k: usize) -> Hypergraph {
    assert!(r >= 2 && k >= 2);
    if k == 2 {
        let n = 2 * r - 2;
        let mut h = Hypergraph::new(r, n).unwrap();
        let first: Vec<u16> = (0..r as u16).collect();
        let mut second: Vec<u16> = vec![0, 1];
        second.extend(r as u16..(2 * r - 2) as u16);
        h.add_edge(first).unwrap();
        h.add_edge(second).unwrap();
        return h;
    }
    let n = k * (r - 1);
    let mut h = Hypergraph::new(r, n).unwrap();
    for i in 0..k {
        let mut e: Vec<u16> = vec![i as u16, ((i + 1) % k) as u16];
        let base = k + i * (r - 2);
        e.extend((base..base + (r - 2)).map(|v| v as u16));
        h.add_edge(e).unwrap();
    }
    h
}

/// Exact isomorphism of small hypergraphs, by hyperedge-matching
/// backtracking with a consistent partial vertex bijection.
pub fn hypergraphs_isomorphic(a: &Hypergraph, b: &Hypergraph) -> bool {
    if a.r() != b.r() || a.edge_count() != b.edge_count() {
        return false;
    }
    let va = a.spanned_vertices();
    let vb = b.spanned_vertices();
    if va.len() != vb.len() {
        return false;
    }
    let mut da: Vec<usize> = va.iter().map(|&v| a.degree(v)).collect();
    let mut db: Vec<usize> = vb.iter().map(|&v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    let mut used = vec![false; b.edge_count()];
    let mut vmap: HashMap<u16, u16> = HashMap::new();
    let mut vused: HashSet<u16> = HashSet::new();
    match_edges(a, b, 0, &mut used, &mut vmap, &mut vused)
}

fn match_edges(
    a: &Hypergraph,
    b: &Hypergraph,
    i: usize,
    used: &mut Vec<bool>,
    vmap: &mut HashMap<u16, u16>,
    vused: &mut HashSet<u16>,
) -> bool {
    if i == a.edge_count() {
        return true;
    }
    let ea = a.edges()[i].clone();
    for j in 0..b.edge_count() {
        if used[j] {
            continue;
        }
        let eb = b.edges()[j].clone();
        if assign_vertices(a, b, &ea, &eb, 0, i, j, used, vmap, vused) {
            return true;
        }
    }
    false
}

/// Extends the vertex bijection over all ways to identify `ea` with `eb`,
/// then recurses into the next hyperedge of `a`.
#[allow(clippy::too_many_arguments)]
fn assign_vertices(
    a: &Hypergraph,
    b: &Hypergraph,
    ea: &[u16],
    eb: &[u16],
    k: usize,
    i: usize,
    j: usize,
    used: &mut Vec<bool>,
    vmap: &mut HashMap<u16, u16>,
    vused: &mut HashSet<u16>,
) -> bool {
    if k == ea.len() {
        used[j] = true;
        if match_edges(a, b, i + 1, used, vmap, vused) {
            return true;
        }
        used[j] = false;
        return false;
    }
    let va = ea[k];
    if let Some(&img) = vmap.get(&va) {
        if eb.contains(&img) {
            return assign_vertices(a, b, ea, eb, k + 1, i, j, used, vmap, vused);
        }
        return false;
    }
    for &vb in eb {
        if vused.contains(&vb) || a.degree(va) != b.degree(vb) {
            continue;
        }
        vmap.insert(va, vb);
        vused.insert(vb);
        if assign_vertices(a, b, ea, eb, k + 1, i, j, used, vmap, vused) {
            return true;
        }
        vmap.remove(&va);
        vused.remove(&vb);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(r: usize, n: usize, edges: &[&[u16]]) -> Hypergraph {
        Hypergraph::from_edges(r, n, &edges.iter().map(|e| e.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    /// Independent nullity oracle: replace each hyperedge by a path-tree on
    /// its vertices and compute the multigraph nullity e - v + c.
    fn multigraph_nullity(hg: &Hypergraph) -> i64 {
        let mut multi_edges: Vec<(u16, u16)> = Vec::new();
        for e in hg.edges() {
            for w in e.windows(2) {
                multi_edges.push((w[0], w[1]));
            }
        }
        let verts = hg.spanned_vertices();
        if verts.is_empty() {
            return 0;
        }
        let idx: HashMap<u16, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(u, v) in &multi_edges {
            let (a, b) = (find(&mut parent, idx[&u]), find(&mut parent, idx[&v]));
            if a != b {
                parent[a] = b;
            }
        }
        let comps: HashSet<usize> = (0..verts.len()).map(|i| find(&mut parent, i)).collect();
        multi_edges.len() as i64 - verts.len() as i64 + comps.len() as i64
    }

    #[test]
    fn nullity_examples() {
        // Single 4-uniform hyperedge: 3*1 + 1 - 4 = 0.
        assert_eq!(h(4, 4, &[&[0, 1, 2, 3]]).nullity(), 0);
        // Two 3-uniform hyperedges on the same vertex set: nullity r-1 = 2.
        assert_eq!(h(3, 3, &[&[0, 1, 2], &[0, 1, 2]]).nullity(), 2);
        // Clean 3-cycle with r=3: 2*3 + 1 - 6 = 1.
        assert_eq!(build_clean_cycle(3, 3).nullity(), 1);
        assert_eq!(Hypergraph::new(3, 5).unwrap().nullity(), 0);
    }

    #[test]
    fn nullity_matches_multigraph_oracle() {
        let cases = vec![
            h(3, 9, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 6]]),
            h(3, 6, &[&[0, 1, 2], &[1, 2, 3], &[3, 4, 5]]),
            h(4, 8, &[&[0, 1, 2, 3], &[0, 1, 4, 5], &[2, 3, 4, 5]]),
            h(3, 3, &[&[0, 1, 2], &[0, 1, 2]]),
            build_clean_cycle(3, 3),
            build_clean_cycle(4, 2),
            build_clean_cycle(5, 4),
            h(3, 12, &[&[0, 1, 2], &[6, 7, 8], &[3, 4, 5]]),
        ];
        for hg in cases {
            assert_eq!(hg.nullity(), multigraph_nullity(&hg), "{hg:?}");
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            h(3, 3, &[&[0, 1, 2]]).classify_component().unwrap(),
            ComponentClass::Tree
        );
        // Two r=3 hyperedges sharing exactly 2 vertices: 2*2 + 1 - 4 = 1.
        assert_eq!(
            h(3, 4, &[&[0, 1, 2], &[1, 2, 3]])
                .classify_component()
                .unwrap(),
            ComponentClass::Unicyclic
        );
        // Clean 3-cycle plus a hyperedge sharing 2 vertices with one of its
        // hyperedges: nullity 2, agreeing with the multigraph oracle.
        let cycle = build_clean_cycle(3, 3);
        let mut edges: Vec<Vec<u16>> = cycle.edges().to_vec();
        edges.push(vec![0, 3, 6]);
        let c = Hypergraph::from_edges(3, 7, &edges).unwrap();
        assert_eq!(c.classify_component().unwrap(), ComponentClass::Complex);
        assert_eq!(c.nullity(), 2);
        assert_eq!(c.nullity(), multigraph_nullity(&c));
        let disc = h(3, 9, &[&[0, 1, 2], &[3, 4, 5]]);
        assert!(matches!(
            disc.classify_component(),
            Err(Error::Disconnected(_))
        ));
    }

    #[test]
    fn tree_by_construction() {
        assert!(h(3, 3, &[&[0, 1, 2]]).is_tree_by_construction());
        assert!(h(3, 5, &[&[0, 1, 2], &[2, 3, 4]]).is_tree_by_construction());
        assert!(!h(3, 4, &[&[0, 1, 2], &[1, 2, 3]]).is_tree_by_construction());
        let cases = vec![
            h(3, 7, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 6]]),
            h(3, 7, &[&[0, 1, 2], &[2, 3, 4], &[0, 5, 6]]),
            h(3, 6, &[&[0, 1, 2], &[1, 2, 3], &[3, 4, 5]]),
            build_clean_cycle(3, 4),
            build_clean_cycle(4, 3),
        ];
        for hg in cases {
            assert_eq!(hg.is_tree_by_construction(), hg.nullity() == 0, "{hg:?}");
        }
    }

    #[test]
    fn underlying_graph_examples() {
        let g = h(4, 4, &[&[0, 1, 2, 3]]).underlying_graph();
        assert_eq!(g.edge_count(), 6);
        let c3 = build_clean_cycle(3, 3);
        let g = c3.underlying_graph();
        assert_eq!(c3.spanned_vertices().len(), 6);
        assert_eq!(g.edge_count(), 9);
        // The junction vertices form the central triangle.
        let cycles = c3.find_clean_cycles(3);
        let cv = &cycles.iter().find(|c| c.k == 3).unwrap().cycle_vertices;
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(g.has_edge(cv[i] as usize, cv[j] as usize));
            }
        }
    }

    #[test]
    fn clean_cycle_detection() {
        let c3 = build_clean_cycle(3, 3);
        let found = c3.find_clean_cycles(5);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].k, 3);
        let tree = h(3, 7, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 6]]);
        assert!(tree.find_clean_cycles(6).is_empty());
        // Two r=4 hyperedges sharing exactly 2 vertices: one clean 2-cycle.
        let two = build_clean_cycle(4, 2);
        let found = two.find_clean_cycles(4);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].k, 2);
        assert_eq!(found[0].cycle_vertices, vec![0, 1]);
        for (r, k) in [(3usize, 4usize), (4, 3), (5, 5)] {
            let c = build_clean_cycle(r, k);
            let found = c.find_clean_cycles(k + 1);
            assert_eq!(found.len(), 1, "r={r} k={k}");
            assert_eq!(found[0].k, k);
        }
    }

    #[test]
    fn avoidable_configuration_search() {
        for (r, k) in [(3usize, 2usize), (3, 3), (4, 2), (4, 4)] {
            let c = build_clean_cycle(r, k);
            assert!(c.find_avoidable_configuration(100_000).unwrap().is_none());
        }
        // Repeated vertex set: the two hyperedges form a witness.
        let rep = h(3, 3, &[&[0, 1, 2], &[0, 1, 2]]);
        let w = rep.find_avoidable_configuration(100_000).unwrap().unwrap();
        assert_eq!(w.hyperedge_indices.len(), 2);
        assert!(w.sub.nullity() >= 2);
        let tree = h(4, 10, &[&[0, 1, 2, 3], &[3, 4, 5, 6], &[6, 7, 8, 9]]);
        assert!(tree
            .find_avoidable_configuration(100_000)
            .unwrap()
            .is_none());
        // Budget errors are distinct from absence.
        let dense = h(
            3,
            6,
            &[
                &[0, 1, 2],
                &[1, 2, 3],
                &[2, 3, 4],
                &[3, 4, 5],
                &[0, 4, 5],
                &[0, 1, 5],
            ],
        );
        assert!(matches!(
            dense.find_avoidable_configuration(1),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn nullity_monotone_under_subsets() {
        use itertools::Itertools;
        let cases = vec![
            h(
                3,
                6,
                &[&[0, 1, 2], &[1, 2, 3], &[2, 3, 4], &[3, 4, 5], &[0, 4, 5]],
            ),
            build_clean_cycle(3, 3),
            h(3, 5, &[&[0, 1, 2], &[0, 1, 3], &[0, 1, 4], &[2, 3, 4]]),
            h(4, 7, &[&[0, 1, 2, 3], &[1, 2, 3, 4], &[2, 3, 4, 5], &[0, 1, 5, 6]]),
        ];
        for hg in cases {
            let m = hg.edge_count();
            for size in 1..=m.min(5) {
                for subset in (0..m).combinations(size) {
                    let sub = hg.sub_hypergraph(&subset);
                    for comp in sub.components() {
                        let sub_n = sub.nullity_of(&comp);
                        let verts: HashSet<u16> = sub
                            .sub_hypergraph(&comp)
                            .spanned_vertices()
                            .into_iter()
                            .collect();
                        let full_comp = hg
                            .components()
                            .into_iter()
                            .find(|c| {
                                c.iter()
                                    .any(|&i| hg.edges()[i].iter().any(|v| verts.contains(v)))
                            })
                            .unwrap();
                        assert!(
                            sub_n <= hg.nullity_of(&full_comp),
                            "monotonicity fails: {hg:?} subset {subset:?}"
                        );
                        assert!(sub_n >= 0);
                    }
                }
            }
        }
    }

    #[test]
    fn hypergraph_iso() {
        let a = build_clean_cycle(3, 3);
        let mut edges: Vec<Vec<u16>> = a.edges().to_vec();
        for e in &mut edges {
            for v in e.iter_mut() {
                *v = 5 - *v;
            }
        }
        let b = Hypergraph::from_edges(3, 6, &edges).unwrap();
        assert!(hypergraphs_isomorphic(&a, &b));
        let c = h(3, 6, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 0]]);
        assert!(hypergraphs_isomorphic(&a, &c));
        let d = h(3, 6, &[&[0, 1, 2], &[2, 3, 4], &[1, 2, 3]]);
        assert!(!hypergraphs_isomorphic(&a, &d));
    }

    #[test]
    fn text_roundtrip() {
        let a = build_clean_cycle(4, 3);
        let text = a.to_text();
        let b = Hypergraph::parse(&text).unwrap();
        assert_eq!(a, b);
        assert!(Hypergraph::parse("3 4").is_err());
        assert!(Hypergraph::parse("3 4 1\n0 0 1\n").is_err());
    }
}
