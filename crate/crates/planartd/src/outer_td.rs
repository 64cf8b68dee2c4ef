//! Tree decompositions for nested-layer graphs: degree reduction,
//! up-connected spanning trees, standard decompositions from fundamental
//! cycles, and per-component decompositions that reserve one bag per
//! crest separator.

use crate::embed::EmbeddedGraph;
use crate::layering::HeightMap;
use crate::mountain::SepId;
use crate::{GraphError, VertexId};
use std::collections::HashMap;

/// A tree of bags. `edges` always forms a tree over `bags.len()` nodes
/// (or is empty for a single node).
#[derive(Debug, Clone, Default)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<VertexId>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> i64 {
        self.bags.iter().map(|b| b.len() as i64).max().unwrap_or(0) - 1
    }

    pub fn max_bag(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0)
    }

    /// Single-bag decomposition.
    pub fn trivial(vertices: Vec<VertexId>) -> Self {
        TreeDecomposition { bags: vec![vertices], edges: Vec::new() }
    }

    /// Normalizes bags: sorted, deduplicated.
    pub fn normalize(&mut self) {
        for b in &mut self.bags {
            b.sort_unstable();
            b.dedup();
        }
    }

    /// Appends another decomposition, returning the id offset of its nodes.
    pub fn absorb(&mut self, other: TreeDecomposition) -> usize {
        let off = self.bags.len();
        self.bags.extend(other.bags);
        self.edges
            .extend(other.edges.into_iter().map(|(a, b)| (a + off, b + off)));
        off
    }

    /// Keeps only the listed vertices in every bag.
    pub fn retain_vertices(&mut self, keep: impl Fn(VertexId) -> bool) {
        for b in &mut self.bags {
            b.retain(|&v| keep(v));
        }
    }

    /// Renames vertices through a map.
    pub fn map_vertices(&mut self, f: impl Fn(VertexId) -> VertexId) {
        for b in &mut self.bags {
            for v in b.iter_mut() {
                *v = f(*v);
            }
        }
        self.normalize();
    }

    /// Any node whose bag contains all of `set`.
    pub fn find_bag_containing(&self, set: &[VertexId]) -> Option<usize> {
        self.bags
            .iter()
            .position(|b| set.iter().all(|v| b.contains(v)))
    }
}

/// Skeleton for a standard tree decomposition: the host graph (possibly
/// with copies and virtual ladder vertices), its spanning tree, and marks.
pub struct Skeleton {
    /// Tree edges, endpoints in host-graph ids.
    pub tree_edges: Vec<(VertexId, VertexId)>,
    /// Per vertex: true if it is a virtual ladder vertex.
    pub virtual_vertex: Vec<bool>,
    /// Heights of the host graph vertices (assigned, not recomputed).
    pub heights: Vec<u32>,
}

/// Splits every vertex of degree above three into a path of copies, as in
/// the classical nested-layers construction: heights are preserved and
/// face adjacency survives through copies. Returns the reduced graph plus
/// the map from new ids to original ids.
pub fn degree_reduce(
    g: &EmbeddedGraph,
    hm: &HeightMap,
) -> Result<(EmbeddedGraph, Vec<VertexId>), GraphError> {
    let builder = LadderBuilder::from_graph(g, &hm.h);
    let (g2, info) = builder.degree_reduce(&vec![false; g.n()])?;
    Ok((g2, info.copy_of))
}

/// Result of degree reduction on a ladder builder.
pub struct ReduceInfo {
    pub copy_of: Vec<VertexId>,
    pub heights: Vec<u32>,
    pub virtual_vertex: Vec<bool>,
    /// Pre-reduction id -> first post-reduction copy id. Unsplit vertices
    /// map to their single copy.
    pub first_copy: Vec<VertexId>,
}

/// Mutable rotation-system builder used for ladder insertion, lowpoint
/// splitting and degree reduction inside `component_td`.
pub struct LadderBuilder {
    pub rotation: Vec<Vec<VertexId>>,
    pub heights: Vec<u32>,
    /// Back-map to the ids of the graph this builder was created from;
    /// added vertices map to `VertexId::MAX`.
    pub orig: Vec<VertexId>,
    pub virtual_vertex: Vec<bool>,
    outer_edge: Option<(VertexId, VertexId)>,
}

impl LadderBuilder {
    pub fn from_graph(g: &EmbeddedGraph, heights: &[u32]) -> Self {
        let n = g.n();
        let outer_edge = g.face_walk(g.outer_face()).first().copied();
        LadderBuilder {
            rotation: (0..n as VertexId).map(|v| g.rotation(v).to_vec()).collect(),
            heights: heights.to_vec(),
            orig: (0..n as VertexId).collect(),
            virtual_vertex: vec![false; n],
            outer_edge,
        }
    }

    pub fn from_parts(
        rotation: Vec<Vec<VertexId>>,
        heights: Vec<u32>,
        orig: Vec<VertexId>,
        virtual_vertex: Vec<bool>,
        outer_edge: Option<(VertexId, VertexId)>,
    ) -> Self {
        LadderBuilder { rotation, heights, orig, virtual_vertex, outer_edge }
    }

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn add_vertex(&mut self, height: u32, is_virtual: bool) -> VertexId {
        let v = self.rotation.len() as VertexId;
        self.rotation.push(Vec::new());
        self.heights.push(height);
        self.orig.push(VertexId::MAX);
        self.virtual_vertex.push(is_virtual);
        v
    }

    pub fn insert_after(&mut self, v: VertexId, after: VertexId, x: VertexId) {
        let rot = &mut self.rotation[v as usize];
        let p = rot.iter().position(|&y| y == after).expect("rotation neighbor");
        rot.insert(p + 1, x);
    }

    /// Builds the embedded graph; the outer face is recovered from a
    /// remembered directed edge of the original outer face.
    pub fn build(&self) -> Result<(EmbeddedGraph, FaceLookup), GraphError> {
        let g = match self.outer_edge {
            Some((u, v)) => {
                let tmp = EmbeddedGraph::with_outer_face(self.rotation.clone(), 0)?;
                let outer = tmp.face_of(u, v).ok_or_else(|| {
                    GraphError::BadEmbedding("outer edge vanished while building".into())
                })?;
                EmbeddedGraph::with_outer_face(self.rotation.clone(), outer)?
            }
            None => EmbeddedGraph::with_outer_face(self.rotation.clone(), 0)?,
        };
        Ok((g, FaceLookup))
    }

    /// Splits vertices of degree above three into copy paths. Copies keep
    /// the height of the original; the path is anchored at a face with a
    /// lower vertex (the outer face for coast vertices) so each copy keeps
    /// at most one higher neighbor. Virtual vertices are never split.
    pub fn degree_reduce(
        &self,
        keep_whole: &[bool],
    ) -> Result<(EmbeddedGraph, ReduceInfo), GraphError> {
        let n = self.n();
        let (g, _) = self.build()?;
        // Choose the anchor corner per vertex: a face containing a strictly
        // lower neighbor, or the outer face corner for height-1 vertices.
        let mut new_rot: Vec<Vec<VertexId>> = Vec::new();
        let mut copy_of: Vec<VertexId> = Vec::new();
        let mut heights: Vec<u32> = Vec::new();
        let mut virtual_vertex: Vec<bool> = Vec::new();
        // First assign ids for every copy; copies of v are consecutive.
        let mut first_copy = vec![0 as VertexId; n];
        let mut num_copies = vec![0usize; n];
        let mut next = 0 as VertexId;
        for v in 0..n {
            let d = self.rotation[v].len();
            let c = if d <= 3 || self.virtual_vertex[v] || keep_whole[v] {
                1
            } else {
                d - 2
            };
            first_copy[v] = next;
            num_copies[v] = c;
            next += c as VertexId;
            for _ in 0..c {
                copy_of.push(v as VertexId);
                heights.push(self.heights[v]);
                virtual_vertex.push(self.virtual_vertex[v]);
            }
        }
        // Rotation of each copy. For a split vertex the neighbors are laid
        // out clockwise starting at the anchor: copy 0 takes neighbors
        // 0 and 1, middle copies one each, the last copy the final two.
        // The copy path edges run between consecutive copies.
        let mut anchor_start = vec![0usize; n];
        for v in 0..n as VertexId {
            if num_copies[v as usize] == 1 {
                continue;
            }
            anchor_start[v as usize] = self.anchor_position(&g, v)?;
        }
        // Map each directed edge (v, u) at rotation index i of v to the copy
        // of v that carries it.
        let copy_at = |v: VertexId, i: usize| -> VertexId {
            let d = self.rotation[v as usize].len();
            let c = num_copies[v as usize];
            if c == 1 {
                return first_copy[v as usize];
            }
            let rel = (i + d - anchor_start[v as usize]) % d;
            // rel 0,1 -> copy 0; rel d-1 -> copy c-1; otherwise rel-1.
            let idx = if rel <= 1 {
                0
            } else {
                (rel - 1).min(c - 1)
            };
            first_copy[v as usize] + idx as VertexId
        };
        for v in 0..n as VertexId {
            let d = self.rotation[v as usize].len();
            let c = num_copies[v as usize];
            let rot = &self.rotation[v as usize];
            if c == 1 {
                let mut r = Vec::with_capacity(d);
                for (i, &u) in rot.iter().enumerate() {
                    let _ = i;
                    let j = self.rotation[u as usize]
                        .iter()
                        .position(|&x| x == v)
                        .expect("twin");
                    r.push(copy_at(u, j));
                }
                new_rot.push(r);
                continue;
            }
            // Build rotations per copy in clockwise order. Copy k has
            // its outside neighbors plus path edges to copies k-1, k+1.
            for k in 0..c {
                let mut r: Vec<VertexId> = Vec::new();
                let my_neighbors: Vec<usize> = (0..d)
                    .filter(|&i| {
                        let rel = (i + d - anchor_start[v as usize]) % d;
                        let idx = if rel <= 1 { 0 } else { (rel - 1).min(c - 1) };
                        idx == k
                    })
                    .collect();
                // Clockwise within the copy: previous-path edge, then the
                // outside neighbors in rotation order, then next-path edge.
                if k > 0 {
                    r.push(first_copy[v as usize] + (k as VertexId) - 1);
                }
                let mut sorted = my_neighbors.clone();
                sorted.sort_by_key(|&i| (i + d - anchor_start[v as usize]) % d);
                for i in sorted {
                    let u = rot[i];
                    let j = self.rotation[u as usize]
                        .iter()
                        .position(|&x| x == v)
                        .expect("twin");
                    r.push(copy_at(u, j));
                }
                if k + 1 < c {
                    r.push(first_copy[v as usize] + (k as VertexId) + 1);
                }
                new_rot.push(r);
            }
        }
        // The directed outer edge (u, v) survives between the copies that
        // carry it on each side.
        let outer_edge = self.outer_edge.map(|(u, v)| {
            let iu = self.rotation[u as usize]
                .iter()
                .position(|&x| x == v)
                .expect("outer edge");
            let iv = self.rotation[v as usize]
                .iter()
                .position(|&x| x == u)
                .expect("outer edge twin");
            (copy_at(u, iu), copy_at(v, iv))
        });
        let g2 = match outer_edge {
            Some((cu, cv)) => {
                let tmp = EmbeddedGraph::with_outer_face(new_rot.clone(), 0)?;
                let outer = tmp.face_of(cu, cv).ok_or_else(|| {
                    GraphError::BadEmbedding("outer edge lost in degree reduction".into())
                })?;
                EmbeddedGraph::with_outer_face(new_rot, outer)?
            }
            None => EmbeddedGraph::with_outer_face(new_rot, 0)?,
        };
        Ok((
            g2,
            ReduceInfo { copy_of, heights, virtual_vertex, first_copy },
        ))
    }

    /// Rotation index at which the copy path of `v` is anchored: the corner
    /// on a face with a strictly lower vertex (outer face corner for coast
    /// vertices). The anchor neighbor becomes the first outside neighbor
    /// of copy 0.
    fn anchor_position(&self, g: &EmbeddedGraph, v: VertexId) -> Result<usize, GraphError> {
        let rot = g.rotation(v);
        let hv = self.heights[v as usize];
        if hv == 1 {
            // Prefer the outer-face corner; ladder strips may occupy it, in
            // which case any corner flanked by non-higher entries serves.
            for (p, &u) in rot.iter().enumerate() {
                if g.face_of(u, v) == Some(g.outer_face()) {
                    return Ok((p + 1) % rot.len());
                }
            }
            // Otherwise, any corner with the lowest flanking heights.
            let best = (0..rot.len())
                .min_by_key(|&p| {
                    let a = rot[p];
                    let b = rot[(p + rot.len() - 1) % rot.len()];
                    let (ha, hb) = (self.heights[a as usize], self.heights[b as usize]);
                    (ha.max(hb), ha.min(hb), p)
                })
                .expect("nonempty rotation");
            return Ok(best);
        }
        for (i, &u) in rot.iter().enumerate() {
            if self.heights[u as usize] < hv {
                return Ok(i);
            }
        }
        Err(GraphError::BadEmbedding(format!(
            "vertex {v} of height {hv} has no lower neighbor"
        )))
    }
}

/// Marker type kept for interface stability of `LadderBuilder::build`.
pub struct FaceLookup;

/// Up-connected spanning tree: processed top level down, the height->=i
/// part always spans the height->=i subgraph; within a level, inner edges
/// are scanned before outer ones.
pub fn up_connected_tree(
    g: &EmbeddedGraph,
    heights: &[u32],
) -> Vec<(VertexId, VertexId)> {
    up_connected_tree_filtered(g, heights, |_, _| true)
}

/// Same, restricted to edges accepted by the filter (the result spans
/// only what those edges can reach).
pub fn up_connected_tree_filtered(
    g: &EmbeddedGraph,
    heights: &[u32],
    accept: impl Fn(VertexId, VertexId) -> bool,
) -> Vec<(VertexId, VertexId)> {
    let n = g.n();
    // Face min-heights decide outer-ness per level: an edge at level t is
    // outer iff an incident face has a vertex below t or is the outer face.
    let mut face_min = vec![u32::MAX; g.num_faces()];
    for f in 0..g.num_faces() {
        for &(u, _) in g.face_walk(f as u32) {
            face_min[f] = face_min[f].min(heights[u as usize]);
        }
    }
    face_min[g.outer_face() as usize] = 0;
    let mut edges: Vec<(u32, bool, VertexId, VertexId)> = Vec::new();
    for (u, v) in g.edges() {
        if !accept(u, v) {
            continue;
        }
        let level = heights[u as usize].min(heights[v as usize]);
        let fa = g.face_of(u, v).map(|f| face_min[f as usize]).unwrap_or(0);
        let fb = g.face_of(v, u).map(|f| face_min[f as usize]).unwrap_or(0);
        let outer = fa < level || fb < level;
        edges.push((level, outer, u, v));
    }
    // Highest level first; within a level inner (false) before outer.
    edges.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)).then(a.3.cmp(&b.3)));
    let mut dsu = Dsu::new(n);
    let mut tree = Vec::new();
    for (_, _, u, v) in edges {
        if dsu.union(u as usize, v as usize) {
            tree.push((u, v));
        }
    }
    tree
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Standard tree decomposition from a skeleton tree: one node per vertex
/// and per tree edge; every non-tree edge contributes one endpoint to all
/// bags along its fundamental cycle. The chosen endpoint is the non-virtual
/// one when exactly one endpoint is virtual, otherwise the smaller id.
pub fn standard_td(g: &EmbeddedGraph, skel: &Skeleton) -> TreeDecomposition {
    let n = g.n();
    let mut node_of_vertex = vec![0usize; n];
    let mut bags: Vec<Vec<VertexId>> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 0..n {
        node_of_vertex[v] = bags.len();
        bags.push(vec![v as VertexId]);
    }
    // Tree adjacency for path queries.
    let mut adj: Vec<Vec<(VertexId, usize)>> = vec![Vec::new(); n];
    let mut in_tree: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    for &(a, b) in &skel.tree_edges {
        let node = bags.len();
        bags.push(vec![a, b]);
        edges.push((node_of_vertex[a as usize], node));
        edges.push((node, node_of_vertex[b as usize]));
        adj[a as usize].push((b, node));
        adj[b as usize].push((a, node));
        in_tree.insert((a.min(b), a.max(b)), node);
    }
    // Root the tree for LCA-style path walks.
    let mut parent: Vec<Option<(VertexId, usize)>> = vec![None; n];
    let mut depth = vec![0u32; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![root as VertexId];
        while let Some(u) = stack.pop() {
            order.push(u);
            for &(v, node) in &adj[u as usize] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    parent[v as usize] = Some((u, node));
                    depth[v as usize] = depth[u as usize] + 1;
                    stack.push(v);
                }
            }
        }
    }
    for (u, v) in g.edges() {
        if in_tree.contains_key(&(u.min(v), u.max(v))) {
            continue;
        }
        let chosen = match (skel.virtual_vertex[u as usize], skel.virtual_vertex[v as usize]) {
            (true, false) => v,
            (false, true) => u,
            _ => u.min(v),
        };
        // Walk the fundamental cycle: climb both endpoints to the LCA.
        let (mut a, mut b) = (u, v);
        let mut touched: Vec<usize> = vec![node_of_vertex[a as usize], node_of_vertex[b as usize]];
        while a != b {
            if depth[a as usize] < depth[b as usize] {
                std::mem::swap(&mut a, &mut b);
            }
            let (p, node) = parent[a as usize].expect("tree is connected");
            touched.push(node);
            touched.push(node_of_vertex[p as usize]);
            a = p;
        }
        for node in touched {
            if !bags[node].contains(&chosen) {
                bags[node].push(chosen);
            }
        }
    }
    let mut td = TreeDecomposition { bags, edges };
    td.normalize();
    td
}

pub mod component;
pub use component::component_td;

/// Handle returned by `component_td`: the decomposition plus, per
/// separator, the node whose bag contains all separator vertices.
pub struct ComponentTd {
    pub td: TreeDecomposition,
    pub designated: HashMap<SepId, usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layering::compute_heights;
    use crate::verify::validate_td;

    #[test]
    fn standard_td_on_tree() {
        let g = EmbeddedGraph::with_outer_face(
            vec![vec![1], vec![0, 2], vec![1, 3], vec![2]],
            0,
        )
        .unwrap();
        let hm = compute_heights(&g).unwrap();
        let tree = up_connected_tree(&g, &hm.h);
        assert_eq!(tree.len(), 3);
        let skel = Skeleton {
            tree_edges: tree,
            virtual_vertex: vec![false; 4],
            heights: hm.h.clone(),
        };
        let td = standard_td(&g, &skel);
        assert_eq!(td.width(), 1);
        assert!(validate_td(&g, &td).ok);
    }

    #[test]
    fn standard_td_k3() {
        let g = EmbeddedGraph::new(vec![vec![1, 2], vec![2, 0], vec![0, 1]], &[0, 1, 2]).unwrap();
        let hm = compute_heights(&g).unwrap();
        let tree = up_connected_tree(&g, &hm.h);
        let skel = Skeleton {
            tree_edges: tree,
            virtual_vertex: vec![false; 3],
            heights: hm.h.clone(),
        };
        let td = standard_td(&g, &skel);
        assert!(td.width() <= 2);
        assert!(validate_td(&g, &td).ok);
    }

    #[test]
    fn up_connected_levels_span() {
        let g = crate::gen::grid(6, 6, true).unwrap();
        let hm = compute_heights(&g).unwrap();
        let tree = up_connected_tree(&g, &hm.h);
        assert_eq!(tree.len(), g.n() - 1);
        // For each level i, tree edges within height >= i connect all
        // height >= i vertices.
        for i in 1..=hm.max_height {
            let verts: Vec<usize> = (0..g.n())
                .filter(|&v| hm.h[v] >= i)
                .collect();
            let mut dsu = Dsu::new(g.n());
            for &(a, b) in &tree {
                if hm.h[a as usize] >= i && hm.h[b as usize] >= i {
                    dsu.union(a as usize, b as usize);
                }
            }
            let root = dsu.find(verts[0]);
            for &v in &verts {
                assert_eq!(dsu.find(v), root, "level {i} spans");
            }
        }
    }

    #[test]
    fn degree_reduce_small_degrees_identity() {
        let g = EmbeddedGraph::new(vec![vec![1, 2], vec![2, 0], vec![0, 1]], &[0, 1, 2]).unwrap();
        let hm = compute_heights(&g).unwrap();
        let (g2, copy_of) = degree_reduce(&g, &hm).unwrap();
        assert_eq!(g2.n(), 3);
        assert_eq!(copy_of, vec![0, 1, 2]);
    }

    #[test]
    fn degree_reduce_star() {
        // Wheel: center of degree 6.
        let g = crate::gen::grid(3, 3, true).unwrap();
        let hm = compute_heights(&g).unwrap();
        let center = 4u32;
        assert_eq!(g.degree(center), 6);
        let (g2, copy_of) = degree_reduce(&g, &hm).unwrap();
        assert!(g2.n() > g.n());
        assert!((0..g2.n()).all(|v| g2.degree(v as u32) <= 3));
        let copies: Vec<u32> = (0..g2.n() as u32)
            .filter(|&v| copy_of[v as usize] == center)
            .collect();
        assert_eq!(copies.len(), 4);
        assert!(crate::embed::validate_embedding(&g2).ok());
        // Heights preserved for copies.
        let hm2 = compute_heights(&g2).unwrap();
        for &c in &copies {
            assert_eq!(hm2.h[c as usize], hm.h[center as usize]);
        }
    }
}
