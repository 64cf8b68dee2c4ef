//! Down vertices, neighborhood representants, and the enumeration of all
//! crest separators of an embedded almost triangulated graph.
//!
//! A crest separator is a pair of down paths: either two paths starting in
//! adjacent vertices of equal height (two top vertices), or one path plus
//! an edge to a neighborhood representant followed by its down path (one
//! top vertex). The border edges are the edges of both paths plus the top
//! edge; the part above the lowpoint bounds the essential region.

use crate::embed::EmbeddedGraph;
use crate::layering::HeightMap;
use crate::{GraphError, VertexId};
use std::collections::HashMap;

/// Down vertices and neighborhood representants.
#[derive(Debug, Clone)]
pub struct DownInfo {
    /// Smallest-id lower neighbor per vertex (`None` on the coast).
    pub down: Vec<Option<VertexId>>,
    /// Per vertex of height >= 2: the representants of the maximal
    /// lower-height arcs of its rotation, in rotation order.
    pub reps: Vec<Vec<VertexId>>,
}

impl DownInfo {
    /// Down path from `v` to the coast, inclusive.
    pub fn down_path(&self, v: VertexId) -> Vec<VertexId> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(d) = self.down[cur as usize] {
            path.push(d);
            cur = d;
        }
        path
    }
}

/// Computes down vertices and neighborhood representants. Fails when a
/// vertex of height >= 2 has no lower neighbor or adjacent heights differ
/// by more than one (the graph is then not almost triangulated).
pub fn compute_down_info(g: &EmbeddedGraph, hm: &HeightMap) -> Result<DownInfo, GraphError> {
    let n = g.n();
    let mut down = vec![None; n];
    let mut reps = vec![Vec::new(); n];
    for u in 0..n as VertexId {
        let q = hm.h[u as usize];
        for &v in g.rotation(u) {
            let d = hm.h[v as usize].abs_diff(q);
            if d > 1 {
                return Err(GraphError::Precondition(format!(
                    "heights of adjacent {u},{v} differ by {d}: not almost triangulated"
                )));
            }
        }
        if q < 2 {
            continue;
        }
        let mut best: Option<VertexId> = None;
        for &v in g.rotation(u) {
            if hm.h[v as usize] + 1 == q && best.map_or(true, |b| v < b) {
                best = Some(v);
            }
        }
        let Some(best) = best else {
            return Err(GraphError::Precondition(format!(
                "vertex {u} of height {q} has no lower neighbor: not almost triangulated"
            )));
        };
        down[u as usize] = Some(best);
        // Maximal cyclic arcs of lower-height neighbors.
        let rot = g.rotation(u);
        let d = rot.len();
        let lower = |i: usize| hm.h[rot[i] as usize] + 1 == q;
        if (0..d).all(lower) {
            // One cyclic arc spanning everything.
            reps[u as usize] = vec![rot.iter().copied().min().unwrap()];
            continue;
        }
        // Scan once around starting after a non-lower position; runs of
        // lower neighbors form the arcs.
        let start = (0..d).find(|&i| !lower(i)).unwrap();
        let mut arcs: Vec<VertexId> = Vec::new();
        let mut cur: Option<VertexId> = None;
        for k in 1..=d {
            let i = (start + k) % d;
            if lower(i) {
                cur = Some(cur.map_or(rot[i], |m: VertexId| m.min(rot[i])));
            } else if let Some(m) = cur.take() {
                arcs.push(m);
            }
        }
        if let Some(m) = cur.take() {
            arcs.push(m);
        }
        reps[u as usize] = arcs;
    }
    Ok(DownInfo { down, reps })
}

/// A crest separator: two down paths plus their top edge.
#[derive(Debug, Clone)]
pub struct CrestSeparator {
    /// First path, from its top vertex down to the coast.
    pub p1: Vec<VertexId>,
    /// Second path; for a one-top separator it starts with the shared top
    /// vertex followed by the representant.
    pub p2: Vec<VertexId>,
    pub one_top: bool,
    pub top_edge: (VertexId, VertexId),
    pub lowpoint: Option<VertexId>,
    pub height: u32,
}

impl CrestSeparator {
    fn build(p1: Vec<VertexId>, p2: Vec<VertexId>, one_top: bool, hm: &HeightMap) -> Self {
        let top_edge = if one_top {
            (p2[0], p2[1])
        } else {
            (p1[0], p2[0])
        };
        // First vertex on p1 other than its start that also lies on p2.
        let p2set: std::collections::HashSet<VertexId> = p2.iter().copied().collect();
        let lowpoint = p1[1..].iter().copied().find(|v| p2set.contains(v));
        let height = hm.h[p1[0] as usize];
        CrestSeparator { p1, p2, one_top, top_edge, lowpoint, height }
    }

    pub fn top_vertices(&self) -> Vec<VertexId> {
        if self.one_top {
            vec![self.p1[0]]
        } else {
            vec![self.p1[0], self.p2[0]]
        }
    }

    pub fn num_top_vertices(&self) -> usize {
        if self.one_top {
            1
        } else {
            2
        }
    }

    /// All vertices of both paths, deduplicated, sorted.
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = self.p1.iter().chain(self.p2.iter()).copied().collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.p1.contains(&v) || self.p2.contains(&v)
    }

    /// Border edges: edges of both paths plus the top edge, deduplicated.
    pub fn border_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut es = Vec::new();
        let norm = |a: VertexId, b: VertexId| (a.min(b), a.max(b));
        for w in self.p1.windows(2) {
            es.push(norm(w[0], w[1]));
        }
        for w in self.p2.windows(2) {
            es.push(norm(w[0], w[1]));
        }
        if !self.one_top {
            es.push(norm(self.top_edge.0, self.top_edge.1));
        }
        es.sort_unstable();
        es.dedup();
        es
    }

    /// Vertices of the essential boundary: everything from the tops down
    /// to the lowpoint inclusive (all path vertices when no lowpoint).
    pub fn essential_vertices(&self) -> Vec<VertexId> {
        let mut vs = Vec::new();
        match self.lowpoint {
            None => return self.vertices(),
            Some(lp) => {
                for &v in &self.p1 {
                    vs.push(v);
                    if v == lp {
                        break;
                    }
                }
                for &v in &self.p2 {
                    if v == lp {
                        break;
                    }
                    vs.push(v);
                }
            }
        }
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// The closed cycle bounding the essential region; only defined when a
    /// lowpoint exists. Runs from the lowpoint up one path, across the top
    /// edge, and down the other path.
    pub fn essential_cycle(&self) -> Option<Vec<VertexId>> {
        let lp = self.lowpoint?;
        let mut cyc: Vec<VertexId> = Vec::new();
        for &v in &self.p1 {
            cyc.push(v);
            if v == lp {
                break;
            }
        }
        // Up the second path, skipping the shared top for one-top
        // separators.
        let mut up: Vec<VertexId> = Vec::new();
        for &v in &self.p2 {
            if v == lp {
                break;
            }
            up.push(v);
        }
        if self.one_top {
            up.remove(0); // p2[0] == p1[0]
        }
        up.reverse();
        cyc.extend(up);
        if cyc.len() < 3 {
            return None; // degenerate: lowpoint immediately below the top
        }
        Some(cyc)
    }

    /// Edge-length of the crest path between two vertices of the
    /// separator, following border edges only; when both endpoints are on
    /// the essential boundary the lowpoint may not be an inner vertex.
    pub fn crest_path(
        &self,
        s1: VertexId,
        s2: VertexId,
    ) -> Result<Vec<VertexId>, GraphError> {
        if !self.contains(s1) || !self.contains(s2) {
            return Err(GraphError::Precondition(format!(
                "vertices {s1},{s2} not on the separator"
            )));
        }
        if s1 == s2 {
            return Ok(vec![s1]);
        }
        let ess = self.essential_vertices();
        let restrict_lowpoint = match self.lowpoint {
            Some(lp) => {
                ess.binary_search(&s1).is_ok()
                    && ess.binary_search(&s2).is_ok()
                    && lp != s1
                    && lp != s2
            }
            None => false,
        };
        // BFS over the border-edge subgraph.
        let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
        for (a, b) in self.border_edges() {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut prev: HashMap<VertexId, VertexId> = HashMap::new();
        let mut queue = std::collections::VecDeque::new();
        prev.insert(s1, s1);
        queue.push_back(s1);
        while let Some(u) = queue.pop_front() {
            if u == s2 {
                break;
            }
            if restrict_lowpoint && Some(u) == self.lowpoint {
                continue; // never leave through the lowpoint
            }
            if let Some(nbrs) = adj.get(&u) {
                let mut nbrs = nbrs.clone();
                nbrs.sort_unstable();
                for v in nbrs {
                    if !prev.contains_key(&v) {
                        prev.insert(v, u);
                        queue.push_back(v);
                    }
                }
            }
        }
        if !prev.contains_key(&s2) {
            return Err(GraphError::Precondition(format!(
                "no crest path between {s1} and {s2}"
            )));
        }
        let mut path = vec![s2];
        let mut cur = s2;
        while prev[&cur] != cur {
            cur = prev[&cur];
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }

    pub fn crest_path_len(&self, s1: VertexId, s2: VertexId) -> Result<usize, GraphError> {
        Ok(self.crest_path(s1, s2)?.len() - 1)
    }
}

/// Enumerates the full separator set of the embedding: one candidate per
/// equal-height adjacent pair and one per neighborhood representant other
/// than the down vertex.
pub fn enumerate_crest_separators(
    g: &EmbeddedGraph,
    hm: &HeightMap,
    di: &DownInfo,
) -> Vec<CrestSeparator> {
    let mut out = Vec::new();
    for u in 0..g.n() as VertexId {
        let q = hm.h[u as usize];
        for &v in g.rotation(u) {
            if hm.h[v as usize] == q && u < v {
                out.push(CrestSeparator::build(
                    di.down_path(u),
                    di.down_path(v),
                    false,
                    hm,
                ));
            }
        }
        if q >= 2 {
            let down_u = di.down[u as usize];
            for &rep in &di.reps[u as usize] {
                if Some(rep) == down_u {
                    continue;
                }
                let mut p2 = vec![u];
                p2.extend(di.down_path(rep));
                out.push(CrestSeparator::build(di.down_path(u), p2, true, hm));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layering::compute_heights;

    fn k4() -> EmbeddedGraph {
        EmbeddedGraph::new(
            vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]],
            &[0, 1, 2],
        )
        .unwrap()
    }

    #[test]
    fn k4_down_info() {
        let g = k4();
        let hm = compute_heights(&g).unwrap();
        let di = compute_down_info(&g, &hm).unwrap();
        assert_eq!(di.down[3], Some(0)); // smallest-id lower neighbor
        assert_eq!(di.down[0], None);
        assert_eq!(di.down_path(3), vec![3, 0]);
        assert_eq!(di.down_path(1), vec![1]);
        // All neighbors of the center are one lower: single arc, one rep.
        assert_eq!(di.reps[3], vec![0]);
    }

    #[test]
    fn k3_separators() {
        let g = EmbeddedGraph::new(vec![vec![1, 2], vec![2, 0], vec![0, 1]], &[0, 1, 2]).unwrap();
        let hm = compute_heights(&g).unwrap();
        let di = compute_down_info(&g, &hm).unwrap();
        let seps = enumerate_crest_separators(&g, &hm, &di);
        // Three equal-height pairs; no height >= 2 vertices.
        assert_eq!(seps.len(), 3);
        assert!(seps.iter().all(|x| !x.one_top && x.height == 1));
        assert!(seps.iter().all(|x| x.p1.len() == 1 && x.p2.len() == 1));
    }

    #[test]
    fn k4_separators() {
        let g = k4();
        let hm = compute_heights(&g).unwrap();
        let di = compute_down_info(&g, &hm).unwrap();
        let seps = enumerate_crest_separators(&g, &hm, &di);
        // The three coast pairs; the center has a single lower arc whose
        // representant is its down vertex, so no one-top candidate.
        assert_eq!(seps.len(), 3);
        for x in &seps {
            let (a, b) = x.top_edge;
            assert!(a < 3 && b < 3);
        }
    }

    #[test]
    fn grid5_center_down_path() {
        let g = crate::gen::grid(5, 5, true).unwrap();
        let hm = compute_heights(&g).unwrap();
        let di = compute_down_info(&g, &hm).unwrap();
        // Center 12 at height 3: its rotation holds the ring-2 vertices
        // 7, 8, 11, 13, 16, 17; the smallest is 7, whose smallest
        // height-1 neighbor is 2.
        assert_eq!(di.down_path(12), vec![12, 7, 2]);
    }

    #[test]
    fn separator_heights_bounded() {
        let g = crate::gen::grid(5, 5, true).unwrap();
        let hm = compute_heights(&g).unwrap();
        let di = compute_down_info(&g, &hm).unwrap();
        for x in enumerate_crest_separators(&g, &hm, &di) {
            assert!(x.height <= hm.max_height);
            // Down paths descend strictly by one.
            for w in x.p1.windows(2) {
                assert_eq!(hm.h[w[0] as usize], hm.h[w[1] as usize] + 1);
            }
            let skip = if x.one_top { 1 } else { 0 };
            for w in x.p2[skip..].windows(2) {
                assert_eq!(hm.h[w[0] as usize], hm.h[w[1] as usize] + 1);
            }
        }
    }

    #[test]
    fn crest_path_cases() {
        let g = crate::gen::mountain_chain(2, 3, 1).unwrap();
        let hm = compute_heights(&g).unwrap();
        let di = compute_down_info(&g, &hm).unwrap();
        let seps = enumerate_crest_separators(&g, &hm, &di);
        let x = seps.iter().find(|x| x.height >= 2).unwrap();
        // Same endpoint: trivial path.
        let v = x.p1[0];
        assert_eq!(x.crest_path(v, v).unwrap(), vec![v]);
        // Two vertices on p1: the subpath of p1.
        if x.p1.len() >= 3 {
            let p = x.crest_path(x.p1[0], x.p1[2]).unwrap();
            assert_eq!(p, x.p1[0..3].to_vec());
        }
        // Errors for off-separator vertices.
        let outside = (0..g.n() as VertexId).find(|&v| !x.contains(v)).unwrap();
        assert!(x.crest_path(v, outside).is_err());
    }

    #[test]
    fn lowpoint_detection() {
        // Down paths that merge produce a lowpoint; stacked triangulations
        // reliably contain such separators.
        let mut found = 0;
        for seed in 0..6u64 {
            let g = crate::gen::triangulation(12, seed).unwrap();
            let hm = compute_heights(&g).unwrap();
            let di = compute_down_info(&g, &hm).unwrap();
            for x in enumerate_crest_separators(&g, &hm, &di) {
                if let Some(lp) = x.lowpoint {
                    found += 1;
                    assert!(x.p1.contains(&lp) && x.p2.contains(&lp));
                    // Below the lowpoint the paths coincide.
                    let i1 = x.p1.iter().position(|&v| v == lp).unwrap();
                    let i2 = x.p2.iter().position(|&v| v == lp).unwrap();
                    assert_eq!(x.p1[i1..], x.p2[i2..]);
                }
            }
        }
        assert!(found > 0, "no lowpoint separator in any instance");
    }
}
