//! F-graphs: a vertex set plus a set of distinct copies of a pattern F
//! (the F-edges), with the derived multi-hypergraph and union graph.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::hypergraph::Hypergraph;
use crate::pattern::{FCopy, PatternGraph};

#[derive(Clone)]
pub struct FGraph {
    pattern: Arc<PatternGraph>,
    ambient_n: usize,
    f_edges: Vec<FCopy>,
}

impl FGraph {
    pub fn new(pattern: Arc<PatternGraph>, ambient_n: usize) -> FGraph {
        FGraph {
            pattern,
            ambient_n,
            f_edges: Vec::new(),
        }
    }

    pub fn pattern(&self) -> &PatternGraph {
        &self.pattern
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn f_edges(&self) -> &[FCopy] {
        &self.f_edges
    }

    pub fn edge_count(&self) -> usize {
        self.f_edges.len()
    }

    pub fn contains(&self, copy: &FCopy) -> bool {
        self.f_edges.iter().any(|c| c.edges() == copy.edges())
    }

    /// Adds an F-edge; copies are distinct as edge sets.
    pub fn add_copy(&mut self, copy: FCopy) -> Result<()> {
        if copy.image().iter().any(|&v| v as usize >= self.ambient_n) {
            return Err(Error::InvalidHypergraph(
                "copy vertex out of ambient range".into(),
            ));
        }
        if self.contains(&copy) {
            return Err(Error::InvalidHypergraph(
                "duplicate F-edge (same edge set)".into(),
            ));
        }
        self.f_edges.push(copy);
        Ok(())
    }

    /// The underlying multi-hypergraph: each F-edge becomes the hyperedge
    /// of its vertex set. Distinct copies on the same vertex set yield a
    /// repeated hyperedge.
    pub fn to_hypergraph(&self) -> Hypergraph {
        let mut h =
            Hypergraph::new(self.pattern.r(), self.ambient_n).expect("pattern r >= 2");
        for c in &self.f_edges {
            h.add_edge(c.vertex_set()).expect("copy vertices in range");
        }
        h
    }

    /// Union graph of the copies present as F-edges.
    pub fn underlying_graph(&self) -> SimpleGraph {
        let mut g = SimpleGraph::new(self.ambient_n).expect("ambient within cap");
        for c in &self.f_edges {
            for e in c.edges() {
                if !g.contains(*e) {
                    g.add_edge(e.u(), e.v());
                }
            }
        }
        g
    }

    /// All copies of F inside the union graph that are not F-edges.
    pub fn all_extra_copies(&self) -> Vec<FCopy> {
        let g = self.underlying_graph();
        let present: BTreeSet<&[crate::graph::Edge]> =
            self.f_edges.iter().map(|c| c.edges()).collect();
        self.pattern
            .copies_in(&g)
            .into_iter()
            .filter(|c| !present.contains(c.edges()))
            .collect()
    }

    /// Extra copies of F meeting `f1`: not an F-edge, edges inside the
    /// union graph, sharing at least one edge with `f1`. The count is
    /// N_F(H_F, F1).
    pub fn extra_copies(&self, f1: &FCopy) -> Vec<FCopy> {
        debug_assert!(self.contains(f1), "f1 must be an F-edge");
        self.all_extra_copies()
            .into_iter()
            .filter(|c| c.shares_edge_with(f1))
            .collect()
    }

    /// Renders "pattern r m u1 v1 ...", "n <ambient>", then one
    /// "copy v1 .. vr" line per F-edge (image order).
    pub fn to_text(&self) -> String {
        let pe = self.pattern.graph().edges();
        let mut out = format!("pattern {} {}", self.pattern.r(), pe.len());
        for e in &pe {
            out.push_str(&format!(" {} {}", e.u(), e.v()));
        }
        out.push('\n');
        out.push_str(&format!("n {}\n", self.ambient_n));
        for c in &self.f_edges {
            let verts: Vec<String> = c.image().iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("copy {}\n", verts.join(" ")));
        }
        out
    }

    pub fn parse(text: &str) -> Result<FGraph> {
        let mut pattern: Option<Arc<PatternGraph>> = None;
        let mut ambient: Option<usize> = None;
        let mut images: Vec<Vec<u16>> = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            match it.next() {
                Some("pattern") => {
                    let nums: Vec<usize> = it
                        .map(|t| t.parse().map_err(|_| Error::Parse("bad pattern".into())))
                        .collect::<Result<_>>()?;
                    if nums.len() < 2 {
                        return Err(Error::Parse("bad pattern line".into()));
                    }
                    let (r, m) = (nums[0], nums[1]);
                    if nums.len() != 2 + 2 * m {
                        return Err(Error::Parse("bad pattern edge list".into()));
                    }
                    let edges: Vec<(usize, usize)> =
                        (0..m).map(|i| (nums[2 + 2 * i], nums[3 + 2 * i])).collect();
                    pattern = Some(Arc::new(PatternGraph::new(SimpleGraph::from_edges(
                        r, &edges,
                    )?)?));
                }
                Some("n") => {
                    ambient = it.next().and_then(|t| t.parse().ok());
                }
                Some("copy") => {
                    let verts: Vec<u16> = it
                        .map(|t| t.parse().map_err(|_| Error::Parse("bad copy".into())))
                        .collect::<Result<_>>()?;
                    images.push(verts);
                }
                _ => return Err(Error::Parse(format!("bad F-graph line {line:?}"))),
            }
        }
        let pattern = pattern.ok_or_else(|| Error::Parse("missing pattern line".into()))?;
        let ambient = ambient.ok_or_else(|| Error::Parse("missing n line".into()))?;
        let mut fg = FGraph::new(pattern.clone(), ambient);
        for image in images {
            let copy = copy_from_image(&pattern, &image)?;
            fg.add_copy(copy)?;
        }
        Ok(fg)
    }
}

impl fmt::Debug for FGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FGraph(n={}, f_edges={:?})", self.ambient_n, self.f_edges)
    }
}

/// Builds the copy determined by mapping pattern vertex i to image[i].
pub fn copy_from_image(pattern: &PatternGraph, image: &[u16]) -> Result<FCopy> {
    if image.len() != pattern.r() {
        return Err(Error::InvalidPattern(format!(
            "image has {} vertices, pattern has {}",
            image.len(),
            pattern.r()
        )));
    }
    let mut sorted = image.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidPattern("image not injective".into()));
    }
    let mut host = SimpleGraph::new(*sorted.last().unwrap() as usize + 1)?;
    for e in pattern.graph().edges() {
        let (a, b) = (image[e.u()] as usize, image[e.v()] as usize);
        if !host.has_edge(a, b) {
            host.add_edge(a, b);
        }
    }
    let target_edges: Vec<crate::graph::Edge> = {
        let mut es: Vec<_> = pattern
            .graph()
            .edges()
            .iter()
            .map(|e| crate::graph::Edge::new(image[e.u()] as usize, image[e.v()] as usize))
            .collect();
        es.sort_unstable();
        es
    };
    pattern
        .copies_in(&host)
        .into_iter()
        .find(|c| c.edges() == target_edges.as_slice())
        .ok_or_else(|| Error::InvalidPattern("image does not induce a copy".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::named_pattern;

    fn k3() -> Arc<PatternGraph> {
        Arc::new(named_pattern("K3").unwrap())
    }

    fn c4() -> Arc<PatternGraph> {
        Arc::new(named_pattern("C4").unwrap())
    }

    /// The F-graph of a clean 3-cycle of triangles (F = K3).
    fn triangle_cycle() -> FGraph {
        let p = k3();
        let mut fg = FGraph::new(p.clone(), 6);
        for image in [[0u16, 1, 3], [1, 2, 4], [2, 0, 5]] {
            fg.add_copy(copy_from_image(&p, &image).unwrap()).unwrap();
        }
        fg
    }

    #[test]
    fn to_hypergraph_examples() {
        let p = k3();
        let mut fg = FGraph::new(p.clone(), 3);
        fg.add_copy(copy_from_image(&p, &[0, 1, 2]).unwrap()).unwrap();
        let h = fg.to_hypergraph();
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.r(), 3);
        let empty = FGraph::new(k3(), 5);
        assert_eq!(empty.to_hypergraph().edge_count(), 0);
        // Two C4 copies on the same 4 vertices: repeated hyperedge, nullity 3.
        let p = c4();
        let mut fg = FGraph::new(p.clone(), 4);
        fg.add_copy(copy_from_image(&p, &[0, 1, 2, 3]).unwrap()).unwrap();
        fg.add_copy(copy_from_image(&p, &[0, 2, 1, 3]).unwrap()).unwrap();
        let h = fg.to_hypergraph();
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.nullity(), 3);
    }

    #[test]
    fn underlying_graph_of_single_c4() {
        let p = c4();
        let mut fg = FGraph::new(p.clone(), 6);
        fg.add_copy(copy_from_image(&p, &[1, 2, 4, 5]).unwrap()).unwrap();
        let g = fg.underlying_graph();
        assert_eq!(g.edge_count(), 4);
        assert!(g.has_edge(1, 2) && g.has_edge(2, 4) && g.has_edge(4, 5) && g.has_edge(5, 1));
    }

    #[test]
    fn extra_copies_in_triangle_cycle() {
        let fg = triangle_cycle();
        // The central triangle {0,1,2} is the single extra copy, meeting
        // each of the three F-edges.
        for f1 in fg.f_edges() {
            let extras = fg.extra_copies(f1);
            assert_eq!(extras.len(), 1, "f1 = {f1:?}");
            assert_eq!(extras[0].vertex_set(), vec![0, 1, 2]);
        }
    }

    #[test]
    fn disjoint_copies_have_no_extras() {
        let p = Arc::new(named_pattern("K4").unwrap());
        let mut fg = FGraph::new(p.clone(), 8);
        fg.add_copy(copy_from_image(&p, &[0, 1, 2, 3]).unwrap()).unwrap();
        fg.add_copy(copy_from_image(&p, &[4, 5, 6, 7]).unwrap()).unwrap();
        for f1 in fg.f_edges() {
            assert!(fg.extra_copies(f1).is_empty());
        }
    }

    #[test]
    fn duplicate_copy_rejected() {
        let p = k3();
        let mut fg = FGraph::new(p.clone(), 4);
        fg.add_copy(copy_from_image(&p, &[0, 1, 2]).unwrap()).unwrap();
        // Same edge set under a different vertex order is the same copy.
        assert!(fg.add_copy(copy_from_image(&p, &[2, 0, 1]).unwrap()).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let fg = triangle_cycle();
        let text = fg.to_text();
        let back = FGraph::parse(&text).unwrap();
        assert_eq!(back.edge_count(), 3);
        assert_eq!(back.ambient_n(), 6);
        assert_eq!(back.to_hypergraph(), fg.to_hypergraph());
    }
}
