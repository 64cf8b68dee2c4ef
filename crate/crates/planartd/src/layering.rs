//! Vertex heights by iterative coast peeling, crests, and the
//! outerplanarity index of an embedding.
//!
//! The coast (vertices on the outer face) has height 1; removing all
//! vertices of height below `i` leaves the height-`i` vertices on the new
//! coast. Peeling is simulated on the face structure: deleting a vertex
//! merges all its incident faces with the outer region, so the next coast
//! is exactly the set of vertices incident to an exposed face.

use crate::embed::EmbeddedGraph;
use crate::{GraphError, VertexId};

/// Heights per vertex plus the outerplanarity index of the embedding.
#[derive(Debug, Clone)]
pub struct HeightMap {
    pub h: Vec<u32>,
    pub max_height: u32,
}

impl HeightMap {
    pub fn height(&self, v: VertexId) -> u32 {
        self.h[v as usize]
    }
}

/// A maximal connected set of equal-height vertices none of which has a
/// higher neighbor.
#[derive(Debug, Clone)]
pub struct Crest {
    pub vertices: Vec<VertexId>,
    pub height: u32,
}

/// Peels the embedding layer by layer; amortized linear in the face sizes.
pub fn compute_heights(g: &EmbeddedGraph) -> Result<HeightMap, GraphError> {
    if !g.connected() {
        return Err(GraphError::Precondition(
            "heights require a connected graph".into(),
        ));
    }
    let n = g.n();
    let mut h = vec![0u32; n];
    if n == 0 {
        return Ok(HeightMap { h, max_height: 0 });
    }
    let vertex_faces = g.vertex_faces();
    let mut exposed = vec![false; g.num_faces()];
    exposed[g.outer_face() as usize] = true;
    // Vertices on the current coast, discovered from newly exposed faces.
    let mut coast: Vec<VertexId> = g
        .face_vertices(g.outer_face())
        .into_iter()
        .collect();
    if g.m() == 0 {
        // Single vertex: height 1 by definition.
        h[0] = 1;
        return Ok(HeightMap { h, max_height: 1 });
    }
    let mut level = 1u32;
    let mut assigned = 0usize;
    while !coast.is_empty() {
        let mut layer = Vec::new();
        for v in coast.drain(..) {
            if h[v as usize] == 0 {
                h[v as usize] = level;
                assigned += 1;
                layer.push(v);
            }
        }
        // Deleting this layer exposes every face incident to it.
        let mut next = Vec::new();
        for v in layer {
            for &f in &vertex_faces[v as usize] {
                if !exposed[f as usize] {
                    exposed[f as usize] = true;
                    for &(u, _) in g.face_walk(f) {
                        if h[u as usize] == 0 {
                            next.push(u);
                        }
                    }
                }
            }
        }
        coast = next;
        level += 1;
    }
    if assigned != n {
        return Err(GraphError::BadEmbedding(
            "peeling did not reach every vertex".into(),
        ));
    }
    let max_height = h.iter().copied().max().unwrap_or(0);
    Ok(HeightMap { h, max_height })
}

/// All crests of the embedding, ordered by smallest member id.
pub fn find_crests(g: &EmbeddedGraph, hm: &HeightMap) -> Vec<Crest> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut crests = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let height = hm.h[s];
        let mut verts = vec![s as VertexId];
        let mut is_crest = true;
        comp[s] = crests.len();
        let mut stack = vec![s as VertexId];
        while let Some(u) = stack.pop() {
            for &v in g.rotation(u) {
                if hm.h[v as usize] > height {
                    is_crest = false;
                } else if hm.h[v as usize] == height && comp[v as usize] == usize::MAX {
                    comp[v as usize] = crests.len();
                    verts.push(v);
                    stack.push(v);
                }
            }
        }
        if is_crest {
            verts.sort_unstable();
            crests.push(Crest { vertices: verts, height });
        } else {
            // Reuse the slot id for the next component found.
            for &v in &verts {
                comp[v as usize] = usize::MAX - 1;
            }
        }
    }
    crests
}

/// True iff the embedding has exactly one crest.
pub fn is_mountain(g: &EmbeddedGraph, hm: &HeightMap) -> bool {
    find_crests(g, hm).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::restrict;

    fn k4() -> EmbeddedGraph {
        EmbeddedGraph::new(
            vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]],
            &[0, 1, 2],
        )
        .unwrap()
    }

    #[test]
    fn k3_all_height_one() {
        let g = EmbeddedGraph::new(vec![vec![1, 2], vec![2, 0], vec![0, 1]], &[0, 1, 2]).unwrap();
        let hm = compute_heights(&g).unwrap();
        assert_eq!(hm.h, vec![1, 1, 1]);
        assert_eq!(hm.max_height, 1);
        assert!(is_mountain(&g, &hm));
    }

    #[test]
    fn k4_center_height_two() {
        let g = k4();
        let hm = compute_heights(&g).unwrap();
        assert_eq!(hm.h, vec![1, 1, 1, 2]);
        assert_eq!(hm.max_height, 2);
        let crests = find_crests(&g, &hm);
        assert_eq!(crests.len(), 1);
        assert_eq!(crests[0].vertices, vec![3]);
        assert_eq!(crests[0].height, 2);
    }

    #[test]
    fn grid5_ring_heights() {
        let g = crate::gen::grid(5, 5, false).unwrap();
        let hm = compute_heights(&g).unwrap();
        for v in 0..25u32 {
            let (i, j) = (v / 5, v % 5);
            let ring = [i, j, 4 - i, 4 - j].into_iter().min().unwrap() + 1;
            assert_eq!(hm.h[v as usize], ring, "vertex {v}");
        }
        assert_eq!(hm.max_height, 3);
        let crests = find_crests(&g, &hm);
        assert_eq!(crests.len(), 1);
        assert_eq!(crests[0].vertices, vec![12]);
    }

    #[test]
    fn peeling_matches_restriction() {
        // For all i >= 2: vertices of height i lie on the outer face of the
        // restriction to heights >= i.
        for g in [crate::gen::grid(5, 5, true).unwrap(), crate::gen::grid(6, 4, false).unwrap()] {
            let hm = compute_heights(&g).unwrap();
            for i in 2..=hm.max_height {
                let keep: Vec<VertexId> = (0..g.n() as VertexId)
                    .filter(|&v| hm.h[v as usize] >= i)
                    .collect();
                if keep.is_empty() {
                    continue;
                }
                let (r, origin) = restrict(&g, &keep).unwrap();
                let rhm = compute_heights(&r).unwrap();
                for (nv, &ov) in origin.iter().enumerate() {
                    assert_eq!(
                        rhm.h[nv] + i - 1,
                        hm.h[ov as usize],
                        "heights shift by i-1 under peeling"
                    );
                }
            }
        }
    }

    #[test]
    fn two_summits() {
        let g = crate::gen::mountain_chain(2, 2, 7).unwrap();
        let hm = compute_heights(&g).unwrap();
        let crests = find_crests(&g, &hm);
        assert_eq!(crests.len(), 2);
        assert!(!is_mountain(&g, &hm));
        assert!(crests.iter().all(|c| c.height == 2));
    }

    #[test]
    fn chain_crest_count() {
        for s in 1..=4 {
            let g = crate::gen::mountain_chain(s, 3, 1).unwrap();
            let hm = compute_heights(&g).unwrap();
            assert_eq!(find_crests(&g, &hm).len(), s, "summits={s}");
            assert_eq!(hm.max_height, 3);
        }
    }

    #[test]
    fn single_vertex() {
        let g = EmbeddedGraph::with_outer_face(vec![vec![]], 0).unwrap();
        let hm = compute_heights(&g).unwrap();
        assert_eq!(hm.h, vec![1]);
        assert_eq!(find_crests(&g, &hm).len(), 1);
    }
}
