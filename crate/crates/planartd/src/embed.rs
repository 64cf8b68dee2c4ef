//! Combinatorial embeddings: faces, the outer face, restriction to a
//! vertex set, biconnected components and almost-triangulation.
//!
//! A graph is given by a rotation system (clockwise neighbor order per
//! vertex) plus one designated outer face. Faces are derived by the usual
//! walk: the successor of the directed edge `(u, v)` is `(v, w)` where `w`
//! follows `u` in the rotation of `v`. All graphs are simple.

use crate::{GraphError, VertexId};
use std::collections::HashMap;
use std::sync::OnceLock;

pub type FaceId = u32;

/// An embedded simple planar graph. Immutable after construction.
#[derive(Debug, Default)]
pub struct EmbeddedGraph {
    rotation: Vec<Vec<VertexId>>,
    pos: HashMap<(VertexId, VertexId), u32>,
    faces: Vec<Vec<(VertexId, VertexId)>>,
    face_of: HashMap<(VertexId, VertexId), FaceId>,
    outer: FaceId,
    num_edges: usize,
    vertex_faces_cache: OnceLock<Vec<Vec<FaceId>>>,
}

impl Clone for EmbeddedGraph {
    fn clone(&self) -> Self {
        EmbeddedGraph {
            rotation: self.rotation.clone(),
            pos: self.pos.clone(),
            faces: self.faces.clone(),
            face_of: self.face_of.clone(),
            outer: self.outer,
            num_edges: self.num_edges,
            vertex_faces_cache: OnceLock::new(),
        }
    }
}

/// Diagnostics produced by [`validate_embedding`].
#[derive(Debug, Clone)]
pub struct EmbeddingReport {
    pub n: usize,
    pub m: usize,
    pub faces: usize,
    pub euler_ok: bool,
    pub simple: bool,
    pub connected: bool,
    pub biconnected: bool,
    pub almost_triangulated: bool,
    pub problems: Vec<String>,
}

impl EmbeddingReport {
    pub fn ok(&self) -> bool {
        self.euler_ok && self.simple && self.problems.is_empty()
    }
}

impl EmbeddedGraph {
    /// Builds a graph from rotations and the walk of the outer face.
    /// The walk may start anywhere on the face and run in either direction.
    pub fn new(
        rotation: Vec<Vec<VertexId>>,
        outer_walk: &[VertexId],
    ) -> Result<Self, GraphError> {
        let mut g = Self::from_rotations(rotation)?;
        g.outer = g.find_face_by_walk(outer_walk)?;
        Ok(g)
    }

    /// Builds a graph from rotations, designating the outer face by id.
    pub fn with_outer_face(
        rotation: Vec<Vec<VertexId>>,
        outer: FaceId,
    ) -> Result<Self, GraphError> {
        let mut g = Self::from_rotations(rotation)?;
        if outer as usize >= g.faces.len() {
            return Err(GraphError::BadEmbedding(format!(
                "outer face id {} out of range ({} faces)",
                outer,
                g.faces.len()
            )));
        }
        g.outer = outer;
        Ok(g)
    }

    fn from_rotations(rotation: Vec<Vec<VertexId>>) -> Result<Self, GraphError> {
        let n = rotation.len();
        let mut pos = HashMap::new();
        let mut num_edges = 0usize;
        for (u, nbrs) in rotation.iter().enumerate() {
            let u = u as VertexId;
            for (i, &v) in nbrs.iter().enumerate() {
                if v as usize >= n {
                    return Err(GraphError::BadRotation(format!(
                        "vertex {u} lists out-of-range neighbor {v}"
                    )));
                }
                if v == u {
                    return Err(GraphError::NotSimple(format!("self-loop at {u}")));
                }
                if pos.insert((u, v), i as u32).is_some() {
                    return Err(GraphError::NotSimple(format!(
                        "parallel edge {u}-{v} in rotation of {u}"
                    )));
                }
            }
        }
        for (&(u, v), _) in pos.iter() {
            if !pos.contains_key(&(v, u)) {
                return Err(GraphError::BadRotation(format!(
                    "edge {u}-{v} listed at {u} but not at {v}"
                )));
            }
            if u < v {
                num_edges += 1;
            }
        }
        // Face walks partition the directed edges.
        let mut face_of: HashMap<(VertexId, VertexId), FaceId> = HashMap::new();
        let mut faces: Vec<Vec<(VertexId, VertexId)>> = Vec::new();
        for u in 0..n as VertexId {
            for &v in &rotation[u as usize] {
                if face_of.contains_key(&(u, v)) {
                    continue;
                }
                let id = faces.len() as FaceId;
                let mut walk = Vec::new();
                let (mut a, mut b) = (u, v);
                loop {
                    walk.push((a, b));
                    face_of.insert((a, b), id);
                    let p = pos[&(b, a)] as usize;
                    let nbrs = &rotation[b as usize];
                    let w = nbrs[(p + 1) % nbrs.len()];
                    a = b;
                    b = w;
                    if (a, b) == (u, v) {
                        break;
                    }
                }
                faces.push(walk);
            }
        }
        if faces.is_empty() {
            // Edgeless graph: a single face.
            faces.push(Vec::new());
        }
        Ok(EmbeddedGraph {
            rotation,
            pos,
            faces,
            face_of,
            outer: 0,
            num_edges,
            vertex_faces_cache: OnceLock::new(),
        })
    }

    fn find_face_by_walk(&self, walk: &[VertexId]) -> Result<FaceId, GraphError> {
        if self.num_edges == 0 {
            return Ok(0);
        }
        if walk.len() < 2 {
            return Err(GraphError::BadEmbedding(
                "outer face walk needs at least two vertices".into(),
            ));
        }
        let candidates = [(walk[0], walk[1]), (walk[1], walk[0])];
        for (a, b) in candidates {
            if let Some(&f) = self.face_of.get(&(a, b)) {
                let fw: Vec<VertexId> = self.faces[f as usize].iter().map(|e| e.0).collect();
                if cyclically_equal(&fw, walk) {
                    return Ok(f);
                }
            }
        }
        // Fall back to scanning all faces (walk may be reversed).
        let mut rev: Vec<VertexId> = walk.to_vec();
        rev.reverse();
        for (f, fwalk) in self.faces.iter().enumerate() {
            let fw: Vec<VertexId> = fwalk.iter().map(|e| e.0).collect();
            if cyclically_equal(&fw, walk) || cyclically_equal(&fw, &rev) {
                return Ok(f as FaceId);
            }
        }
        Err(GraphError::BadEmbedding(
            "outer face walk does not match any face".into(),
        ))
    }

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn m(&self) -> usize {
        self.num_edges
    }

    pub fn rotation(&self, u: VertexId) -> &[VertexId] {
        &self.rotation[u as usize]
    }

    pub fn degree(&self, u: VertexId) -> usize {
        self.rotation[u as usize].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.pos.contains_key(&(u, v))
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn outer_face(&self) -> FaceId {
        self.outer
    }

    /// Directed half-edge walk of a face.
    pub fn face_walk(&self, f: FaceId) -> &[(VertexId, VertexId)] {
        &self.faces[f as usize]
    }

    /// The face lying along the directed edge `(u, v)`.
    pub fn face_of(&self, u: VertexId, v: VertexId) -> Option<FaceId> {
        self.face_of.get(&(u, v)).copied()
    }

    /// Undirected edges, each reported once with `u < v`.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut es = Vec::with_capacity(self.num_edges);
        for (u, nbrs) in self.rotation.iter().enumerate() {
            let u = u as VertexId;
            for &v in nbrs {
                if u < v {
                    es.push((u, v));
                }
            }
        }
        es.sort_unstable();
        es
    }

    /// Distinct vertices on the boundary of a face, in walk order.
    pub fn face_vertices(&self, f: FaceId) -> Vec<VertexId> {
        let mut seen = Vec::new();
        for &(u, _) in &self.faces[f as usize] {
            if !seen.contains(&u) {
                seen.push(u);
            }
        }
        seen
    }

    /// True iff `u` lies on the outer face.
    pub fn on_outer_face(&self, u: VertexId) -> bool {
        if self.num_edges == 0 {
            return true;
        }
        self.faces[self.outer as usize].iter().any(|&(a, _)| a == u)
    }

    /// Vertex-to-face incidence lists (each face listed once per vertex);
    /// computed once and cached.
    pub fn vertex_faces(&self) -> &Vec<Vec<FaceId>> {
        self.vertex_faces_cache.get_or_init(|| {
            let mut inc = vec![Vec::new(); self.n()];
            for (f, walk) in self.faces.iter().enumerate() {
                for &(u, _) in walk {
                    let l = &mut inc[u as usize];
                    if l.last() != Some(&(f as FaceId)) && !l.contains(&(f as FaceId)) {
                        l.push(f as FaceId);
                    }
                }
            }
            for (u, l) in inc.iter_mut().enumerate() {
                if self.rotation[u].is_empty() {
                    l.push(self.outer);
                }
            }
            inc
        })
    }

    pub fn connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0 as VertexId];
        seen[0] = true;
        let mut cnt = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.rotation[u as usize] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    cnt += 1;
                    stack.push(v);
                }
            }
        }
        cnt == self.n()
    }

    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut comps: Vec<Vec<VertexId>> = Vec::new();
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut verts = vec![s as VertexId];
            comp[s] = id;
            let mut stack = vec![s as VertexId];
            while let Some(u) = stack.pop() {
                for &v in &self.rotation[u as usize] {
                    if comp[v as usize] == usize::MAX {
                        comp[v as usize] = id;
                        verts.push(v);
                        stack.push(v);
                    }
                }
            }
            verts.sort_unstable();
            comps.push(verts);
        }
        comps
    }

    /// True iff every inner face is bounded by exactly three vertices/edges.
    pub fn almost_triangulated(&self) -> bool {
        self.faces
            .iter()
            .enumerate()
            .all(|(f, walk)| f as FaceId == self.outer || walk.len() == 3)
    }
}

fn cyclically_equal(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return a.len() == b.len();
    }
    let n = a.len();
    'outer: for s in 0..n {
        for i in 0..n {
            if a[(s + i) % n] != b[i] {
                continue 'outer;
            }
        }
        return true;
    }
    false
}

/// Structural diagnostics: Euler formula, simplicity, face count,
/// almost-triangulation, biconnectivity. Never panics.
pub fn validate_embedding(g: &EmbeddedGraph) -> EmbeddingReport {
    let mut problems = Vec::new();
    let comps = g.connected_components().len().max(1);
    // Euler for a plane graph with c components: n - m + f = 1 + c.
    let euler_ok = g.n() as i64 - g.m() as i64 + g.num_faces() as i64 == 1 + comps as i64;
    if !euler_ok {
        problems.push(format!(
            "Euler formula fails: n={} m={} f={} components={}",
            g.n(),
            g.m(),
            g.num_faces(),
            comps
        ));
    }
    // Simplicity is enforced at construction; report holds trivially here.
    let almost = g.almost_triangulated();
    let biconnected = g.n() >= 3 && cut_vertices(g).is_empty() && comps == 1;
    EmbeddingReport {
        n: g.n(),
        m: g.m(),
        faces: g.num_faces(),
        euler_ok,
        simple: true,
        connected: comps == 1,
        biconnected,
        almost_triangulated: almost,
        problems,
    }
}

/// Adds a star vertex into every non-triangular inner face, connected to
/// all boundary vertices of that face. Returns the new graph plus, for
/// every new vertex, nothing; original vertices keep their ids and
/// `origin[v] == None` marks an added vertex.
pub fn almost_triangulate(
    g: &EmbeddedGraph,
) -> Result<(EmbeddedGraph, Vec<bool>), GraphError> {
    let n = g.n();
    let mut rotation: Vec<Vec<VertexId>> = g.rotation.clone();
    let mut is_original = vec![true; n];
    // Pending insertions into existing rotations: (vertex, after-neighbor, star).
    let mut insertions: Vec<(VertexId, VertexId, VertexId)> = Vec::new();
    for (f, walk) in g.faces.iter().enumerate() {
        if f as FaceId == g.outer || walk.len() == 3 {
            continue;
        }
        let verts: Vec<VertexId> = walk.iter().map(|e| e.0).collect();
        {
            let mut sorted = verts.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != verts.len() {
                return Err(GraphError::Precondition(format!(
                    "inner face {f} repeats a vertex; triangulation requires \
                     biconnected input"
                )));
            }
        }
        let star = rotation.len() as VertexId;
        let mut star_rot = verts.clone();
        star_rot.reverse();
        rotation.push(star_rot);
        is_original.push(false);
        for &(u, v) in walk {
            // The face corner at v spans from u to the walk successor of v;
            // the star slots in right after u in the rotation of v.
            insertions.push((v, u, star));
        }
    }
    for (v, after, star) in insertions {
        let rot = &mut rotation[v as usize];
        let p = rot.iter().position(|&x| x == after).expect("neighbor present");
        rot.insert(p + 1, star);
    }
    let outer_walk: Vec<VertexId> = g.faces[g.outer as usize].iter().map(|e| e.0).collect();
    let g2 = if g.m() == 0 {
        EmbeddedGraph::with_outer_face(rotation, 0)?
    } else {
        EmbeddedGraph::new(rotation, &outer_walk)?
    };
    Ok((g2, is_original))
}

/// Restriction of the embedding to a vertex set. Rotations become
/// subsequences; the outer face of the result is the face that absorbed
/// the original outer region. Returns the restricted graph plus the map
/// from new ids back to original ids.
pub fn restrict(
    g: &EmbeddedGraph,
    keep: &[VertexId],
) -> Result<(EmbeddedGraph, Vec<VertexId>), GraphError> {
    if keep.is_empty() {
        return Err(GraphError::Precondition("restrict to empty vertex set".into()));
    }
    let mut kept = vec![false; g.n()];
    for &v in keep {
        if (v as usize) >= g.n() {
            return Err(GraphError::Precondition(format!("vertex {v} out of range")));
        }
        kept[v as usize] = true;
    }
    let mut origin: Vec<VertexId> = (0..g.n() as VertexId).filter(|&v| kept[v as usize]).collect();
    origin.sort_unstable();
    let mut new_id = vec![VertexId::MAX; g.n()];
    for (i, &v) in origin.iter().enumerate() {
        new_id[v as usize] = i as VertexId;
    }
    let rotation: Vec<Vec<VertexId>> = origin
        .iter()
        .map(|&v| {
            g.rotation[v as usize]
                .iter()
                .filter(|&&w| kept[w as usize])
                .map(|&w| new_id[w as usize])
                .collect()
        })
        .collect();
    let mut sub = EmbeddedGraph::from_rotations(rotation)?;
    if sub.num_edges == 0 {
        sub.outer = 0;
        return Ok((sub, origin));
    }
    // Fast path: a kept edge directly on the original outer face.
    for &(u, v) in &g.faces[g.outer as usize] {
        if kept[u as usize] && kept[v as usize] {
            sub.outer = sub.face_of[&(new_id[u as usize], new_id[v as usize])];
            return Ok((sub, origin));
        }
    }
    // Flood over original faces merged with the outer region (deleting a
    // vertex merges all faces around it), stopping at the first kept edge.
    let vertex_faces = g.vertex_faces();
    let mut merged = vec![false; g.num_faces()];
    let mut queue = std::collections::VecDeque::from([g.outer]);
    merged[g.outer as usize] = true;
    let mut outer: Option<FaceId> = None;
    'flood: while let Some(f) = queue.pop_front() {
        for &(u, v) in &g.faces[f as usize] {
            if kept[u as usize] && kept[v as usize] {
                outer = Some(sub.face_of[&(new_id[u as usize], new_id[v as usize])]);
                break 'flood;
            }
            if !kept[u as usize] {
                for &f2 in &vertex_faces[u as usize] {
                    if !merged[f2 as usize] {
                        merged[f2 as usize] = true;
                        queue.push_back(f2);
                    }
                }
            }
        }
    }
    // A kept part with no boundary toward the outer region is a floating
    // component; by convention it sits in the outer region and its
    // longest face walk bounds it.
    let outer = outer.unwrap_or_else(|| longest_face(&sub));
    sub.outer = outer;
    Ok((sub, origin))
}

fn longest_face(g: &EmbeddedGraph) -> FaceId {
    (0..g.faces.len() as FaceId)
        .max_by_key(|&f| g.faces[f as usize].len())
        .unwrap_or(0)
}

/// Restriction to an explicit vertex and edge subset (the edge set need
/// not be induced). Rotations become subsequences; the outer face of the
/// result is the face that absorbed the original outer region.
pub fn restrict_edges(
    g: &EmbeddedGraph,
    keep: &[VertexId],
    keep_edges: &[(VertexId, VertexId)],
) -> Result<(EmbeddedGraph, Vec<VertexId>), GraphError> {
    if keep.is_empty() {
        return Err(GraphError::Precondition("restrict to empty vertex set".into()));
    }
    let mut kept = vec![false; g.n()];
    for &v in keep {
        kept[v as usize] = true;
    }
    let edge_set: std::collections::HashSet<(VertexId, VertexId)> = keep_edges
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    let keep_edge =
        |u: VertexId, v: VertexId| kept[u as usize] && kept[v as usize] && edge_set.contains(&(u.min(v), u.max(v)));
    let mut origin: Vec<VertexId> = keep.to_vec();
    origin.sort_unstable();
    origin.dedup();
    let mut new_id = vec![VertexId::MAX; g.n()];
    for (i, &v) in origin.iter().enumerate() {
        new_id[v as usize] = i as VertexId;
    }
    let rotation: Vec<Vec<VertexId>> = origin
        .iter()
        .map(|&v| {
            g.rotation[v as usize]
                .iter()
                .filter(|&&w| keep_edge(v, w))
                .map(|&w| new_id[w as usize])
                .collect()
        })
        .collect();
    let mut sub = EmbeddedGraph::from_rotations(rotation)?;
    if sub.num_edges == 0 {
        sub.outer = 0;
        return Ok((sub, origin));
    }
    // Fast path: a kept edge directly on the original outer face.
    for &(u, v) in &g.faces[g.outer as usize] {
        if keep_edge(u, v) {
            sub.outer = sub.face_of[&(new_id[u as usize], new_id[v as usize])];
            return Ok((sub, origin));
        }
    }
    // Faces merge across a deleted vertex or a deleted edge; stop at the
    // first merged face carrying a kept edge.
    let vertex_faces = g.vertex_faces();
    let mut merged = vec![false; g.num_faces()];
    let mut queue = std::collections::VecDeque::from([g.outer]);
    merged[g.outer as usize] = true;
    let mut outer: Option<FaceId> = None;
    'flood: while let Some(f) = queue.pop_front() {
        for &(u, v) in &g.faces[f as usize] {
            if keep_edge(u, v) {
                outer = Some(sub.face_of[&(new_id[u as usize], new_id[v as usize])]);
                break 'flood;
            }
            if !kept[u as usize] {
                for &f2 in &vertex_faces[u as usize] {
                    if !merged[f2 as usize] {
                        merged[f2 as usize] = true;
                        queue.push_back(f2);
                    }
                }
            }
            if !keep_edge(u, v) && kept[u as usize] && kept[v as usize] {
                // Edge dropped by the filter: its twin face merges too.
                let f2 = g.face_of[&(v, u)];
                if !merged[f2 as usize] {
                    merged[f2 as usize] = true;
                    queue.push_back(f2);
                }
            }
        }
    }
    let outer = outer.unwrap_or_else(|| longest_face(&sub));
    sub.outer = outer;
    Ok((sub, origin))
}

/// Cut vertices of the graph (empty for biconnected graphs).
pub fn cut_vertices(g: &EmbeddedGraph) -> Vec<VertexId> {
    BlockFinder::run(g).cuts
}

/// Standard block decomposition. Each block is returned with its restricted
/// embedding plus the original ids of its vertices; the second component
/// lists the cut vertices of the graph.
pub fn biconnected_components(
    g: &EmbeddedGraph,
) -> Result<(Vec<(EmbeddedGraph, Vec<VertexId>)>, Vec<VertexId>), GraphError> {
    let found = BlockFinder::run(g);
    let mut out = Vec::new();
    for verts in found.blocks {
        out.push(restrict(g, &verts).map(|(b, o)| (b, o))?);
    }
    Ok((out, found.cuts))
}

struct BlockFinder {
    cuts: Vec<VertexId>,
    blocks: Vec<Vec<VertexId>>,
}

impl BlockFinder {
    fn run(g: &EmbeddedGraph) -> BlockFinder {
        let n = g.n();
        let mut disc = vec![0u32; n];
        let mut low = vec![0u32; n];
        let mut is_cut = vec![false; n];
        let mut timer = 1u32;
        let mut blocks: Vec<Vec<VertexId>> = Vec::new();
        let mut estack: Vec<(VertexId, VertexId)> = Vec::new();
        for root in 0..n as VertexId {
            if disc[root as usize] != 0 {
                continue;
            }
            // Iterative DFS: (vertex, parent, next rotation index).
            let mut stack: Vec<(VertexId, VertexId, usize)> = vec![(root, VertexId::MAX, 0)];
            disc[root as usize] = timer;
            low[root as usize] = timer;
            timer += 1;
            let mut root_children = 0;
            while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
                if *idx < g.rotation[u as usize].len() {
                    let v = g.rotation[u as usize][*idx];
                    *idx += 1;
                    if disc[v as usize] == 0 {
                        estack.push((u, v));
                        disc[v as usize] = timer;
                        low[v as usize] = timer;
                        timer += 1;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((v, u, 0));
                    } else if v != parent && disc[v as usize] < disc[u as usize] {
                        estack.push((u, v));
                        low[u as usize] = low[u as usize].min(disc[v as usize]);
                    }
                } else {
                    stack.pop();
                    if let Some(&mut (p, _, _)) = stack.last_mut() {
                        low[p as usize] = low[p as usize].min(low[u as usize]);
                        if low[u as usize] >= disc[p as usize] {
                            if p != root || root_children > 1 {
                                is_cut[p as usize] = true;
                            }
                            // Pop the block of edges above (p, u).
                            let mut verts: Vec<VertexId> = Vec::new();
                            while let Some(&(a, b)) = estack.last() {
                                estack.pop();
                                for x in [a, b] {
                                    if !verts.contains(&x) {
                                        verts.push(x);
                                    }
                                }
                                if (a, b) == (p, u) {
                                    break;
                                }
                            }
                            if !verts.is_empty() {
                                verts.sort_unstable();
                                blocks.push(verts);
                            }
                        }
                    }
                }
            }
            if g.rotation[root as usize].is_empty() {
                blocks.push(vec![root]);
            }
        }
        let cuts = (0..n as VertexId).filter(|&v| is_cut[v as usize]).collect();
        BlockFinder { cuts, blocks }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn k3() -> EmbeddedGraph {
        // Outer face is the triangle itself.
        EmbeddedGraph::new(vec![vec![1, 2], vec![2, 0], vec![0, 1]], &[0, 1, 2]).unwrap()
    }

    pub fn k4() -> EmbeddedGraph {
        // Outer triangle 0,1,2; center 3.
        EmbeddedGraph::new(
            vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]],
            &[0, 1, 2],
        )
        .unwrap()
    }

    #[test]
    fn k3_faces() {
        let g = k3();
        assert_eq!(g.num_faces(), 2);
        let rep = validate_embedding(&g);
        assert!(rep.ok());
        assert!(rep.almost_triangulated);
        assert!(rep.biconnected);
    }

    #[test]
    fn self_loop_rejected() {
        let err = EmbeddedGraph::new(vec![vec![0]], &[0]).unwrap_err();
        assert!(matches!(err, GraphError::NotSimple(_)));
    }

    #[test]
    fn k4_faces() {
        let g = k4();
        assert_eq!(g.num_faces(), 4);
        assert!(validate_embedding(&g).ok());
        assert!(g.almost_triangulated());
    }

    #[test]
    fn grid3_faces() {
        let g = crate::gen::grid(3, 3, false).unwrap();
        // 4 quads + outer.
        assert_eq!(g.num_faces(), 5);
        let rep = validate_embedding(&g);
        assert!(rep.ok());
        assert!(!rep.almost_triangulated);
    }

    #[test]
    fn triangulate_k3_identity() {
        let g = k3();
        let (t, orig) = almost_triangulate(&g).unwrap();
        assert_eq!(t.n(), 3);
        assert!(orig.iter().all(|&o| o));
    }

    #[test]
    fn triangulate_c4() {
        let g = EmbeddedGraph::new(
            vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]],
            &[0, 1, 2, 3],
        )
        .unwrap();
        let (t, orig) = almost_triangulate(&g).unwrap();
        assert_eq!(t.n(), 5);
        assert_eq!(t.degree(4), 4);
        assert!(!orig[4]);
        assert!(t.almost_triangulated());
        assert!(validate_embedding(&t).ok());
        // 4 inner triangles plus the outer face.
        assert_eq!(t.num_faces(), 5);
    }

    #[test]
    fn triangulate_grid3() {
        let g = crate::gen::grid(3, 3, false).unwrap();
        let (t, orig) = almost_triangulate(&g).unwrap();
        assert_eq!(t.n(), 13); // 9 + 4 quad faces
        assert!(t.almost_triangulated());
        assert!(validate_embedding(&t).ok());
        assert_eq!(orig.iter().filter(|&&o| !o).count(), 4);
    }

    #[test]
    fn triangulate_idempotent() {
        let g = crate::gen::grid(4, 4, false).unwrap();
        let (t1, _) = almost_triangulate(&g).unwrap();
        let (t2, _) = almost_triangulate(&t1).unwrap();
        assert_eq!(t1.n(), t2.n());
        assert_eq!(t1.edges(), t2.edges());
    }

    #[test]
    fn restrict_identity() {
        let g = k4();
        let all: Vec<VertexId> = (0..4).collect();
        let (r, origin) = restrict(&g, &all).unwrap();
        assert_eq!(r.n(), 4);
        assert_eq!(origin, all);
        assert_eq!(r.edges(), g.edges());
        assert_eq!(r.outer_face(), g.outer_face());
    }

    #[test]
    fn restrict_k4_to_outer_triangle() {
        let g = k4();
        let (r, _) = restrict(&g, &[0, 1, 2]).unwrap();
        assert_eq!(r.n(), 3);
        assert_eq!(r.m(), 3);
        assert_eq!(r.num_faces(), 2);
    }

    #[test]
    fn restrict_grid5_inner_ring() {
        // Keeping the inner 3x3 of a 5x5 grid yields a 3x3 grid.
        let g = crate::gen::grid(5, 5, false).unwrap();
        let keep: Vec<VertexId> = (0..25)
            .filter(|&v| {
                let (i, j) = (v / 5, v % 5);
                (1..4).contains(&i) && (1..4).contains(&j)
            })
            .map(|v| v as VertexId)
            .collect();
        let (r, _) = restrict(&g, &keep).unwrap();
        assert_eq!(r.n(), 9);
        assert_eq!(r.m(), 12);
        assert_eq!(r.num_faces(), 5);
        // Outer face of the restriction is the 8-cycle boundary.
        assert_eq!(r.face_walk(r.outer_face()).len(), 8);
    }

    #[test]
    fn blocks_two_triangles() {
        // Two triangles sharing vertex 2.
        let g = EmbeddedGraph::new(
            vec![
                vec![1, 2],
                vec![2, 0],
                vec![0, 1, 3, 4],
                vec![4, 2],
                vec![2, 3],
            ],
            &[0, 1, 2, 3, 4, 2],
        )
        .unwrap();
        let (blocks, cuts) = biconnected_components(&g).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(cuts, vec![2]);
    }

    #[test]
    fn blocks_k4() {
        let (blocks, cuts) = biconnected_components(&k4()).unwrap();
        assert_eq!(blocks.len(), 1);
        assert!(cuts.is_empty());
    }

    #[test]
    fn blocks_path4() {
        let g = EmbeddedGraph::with_outer_face(
            vec![vec![1], vec![0, 2], vec![1, 3], vec![2]],
            0,
        )
        .unwrap();
        let (blocks, cuts) = biconnected_components(&g).unwrap();
        assert_eq!(blocks.len(), 3);
        assert_eq!(cuts, vec![1, 2]);
    }

    #[test]
    fn face_halfedge_partition() {
        let g = crate::gen::grid(4, 3, true).unwrap();
        let total: usize = (0..g.num_faces() as FaceId)
            .map(|f| g.face_walk(f).len())
            .sum();
        assert_eq!(total, 2 * g.m());
    }
}
