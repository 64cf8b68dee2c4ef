//! Components cut out by crest separators, the mountain connection tree,
//! and the pruning that yields a good mountain structure: one crest per
//! component, no separator touching a crest.

use crate::crestsep::{compute_down_info, enumerate_crest_separators, CrestSeparator};
use crate::embed::{EmbeddedGraph, FaceId};
use crate::layering::{find_crests, Crest, HeightMap};
use crate::{GraphError, VertexId};
use std::collections::{BTreeSet, HashMap, HashSet};

pub type SepId = usize;
pub type CompId = usize;

/// A component of the split: a maximal set of inner faces connected
/// across non-border edges, together with its closed subgraph.
#[derive(Debug, Clone)]
pub struct SComponent {
    pub faces: Vec<FaceId>,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl SComponent {
    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
    pub fn contains_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }
}

/// Splits the graph along the border edges of `seps`. Every inner face
/// lands in exactly one component; border edges and their endpoints are
/// shared by the components on both sides. A graph without inner faces
/// yields a single component holding everything.
pub fn split_components(g: &EmbeddedGraph, seps: &[CrestSeparator]) -> Vec<SComponent> {
    let mut border: HashSet<(VertexId, VertexId)> = HashSet::new();
    for x in seps {
        border.extend(x.border_edges());
    }
    split_components_with_border(g, &border)
}

pub(crate) fn split_components_with_border(
    g: &EmbeddedGraph,
    border: &HashSet<(VertexId, VertexId)>,
) -> Vec<SComponent> {
    let outer = g.outer_face();
    let nf = g.num_faces();
    let inner: Vec<FaceId> = (0..nf as FaceId).filter(|&f| f != outer).collect();
    if inner.is_empty() {
        let mut vertices: Vec<VertexId> = (0..g.n() as VertexId).collect();
        vertices.sort_unstable();
        return vec![SComponent { faces: Vec::new(), vertices, edges: g.edges() }];
    }
    let mut comp_of = vec![usize::MAX; nf];
    let mut comps: Vec<Vec<FaceId>> = Vec::new();
    for &f0 in &inner {
        if comp_of[f0 as usize] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut faces = vec![f0];
        comp_of[f0 as usize] = id;
        let mut stack = vec![f0];
        while let Some(f) = stack.pop() {
            for &(u, v) in g.face_walk(f) {
                if border.contains(&(u.min(v), u.max(v))) {
                    continue;
                }
                let g2 = g.face_of(v, u).expect("twin face");
                if g2 != outer && comp_of[g2 as usize] == usize::MAX {
                    comp_of[g2 as usize] = id;
                    faces.push(g2);
                    stack.push(g2);
                }
            }
        }
        comps.push(faces);
    }
    comps
        .into_iter()
        .map(|faces| {
            let mut vertices: Vec<VertexId> = Vec::new();
            let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
            for &f in &faces {
                for &(u, v) in g.face_walk(f) {
                    vertices.push(u);
                    edges.push((u.min(v), u.max(v)));
                }
            }
            vertices.sort_unstable();
            vertices.dedup();
            edges.sort_unstable();
            edges.dedup();
            SComponent { faces, vertices, edges }
        })
        .collect()
}

/// How a separator relates to two vertex sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Between {
    Strongly,
    Weakly,
    No,
}

/// Classifies whether `x` goes between `a` and `b`: weakly when the two
/// sets lie in the two sides of the split, strongly when they further
/// avoid the separator vertices.
pub fn goes_between(
    g: &EmbeddedGraph,
    x: &CrestSeparator,
    a: &[VertexId],
    b: &[VertexId],
) -> Between {
    let comps = split_components(g, std::slice::from_ref(x));
    if comps.len() != 2 {
        return Between::No;
    }
    let side = |set: &[VertexId]| -> Option<usize> {
        let in0 = set.iter().all(|&v| comps[0].contains_vertex(v));
        let in1 = set.iter().all(|&v| comps[1].contains_vertex(v));
        match (in0, in1) {
            (true, false) => Some(0),
            (false, true) => Some(1),
            // All inside both: only separator vertices; treat as no side.
            _ => None,
        }
    };
    match (side(a), side(b)) {
        (Some(sa), Some(sb)) if sa != sb => {
            if a.iter().chain(b.iter()).any(|&v| x.contains(v)) {
                Between::Weakly
            } else {
                Between::Strongly
            }
        }
        _ => Between::No,
    }
}

/// A good mountain structure: separators, components, connection tree,
/// crest bookkeeping and enclosure info, over a fixed graph and height map.
#[derive(Debug, Clone)]
pub struct MountainStructure {
    pub seps: Vec<CrestSeparator>,
    pub comps: Vec<SComponent>,
    /// Tree edges of the mountain connection tree.
    pub mct_edges: Vec<(CompId, CompId, SepId)>,
    pub mct_adj: Vec<Vec<(CompId, SepId)>>,
    /// Per separator: the two components sharing its top edge.
    pub sep_comps: Vec<(CompId, CompId)>,
    pub crests: Vec<Crest>,
    /// Component containing each crest.
    pub crest_comp: Vec<CompId>,
    /// The crest inside each component (good structures have exactly one).
    pub comp_crest: Vec<usize>,
    /// Per component: the separator enclosing it, if any.
    pub encloses: Vec<Option<SepId>>,
    /// Rooted-tree data for side queries.
    pub parent: Vec<Option<(CompId, SepId)>>,
    tin: Vec<u32>,
    tout: Vec<u32>,
    /// Component of every inner face (usize::MAX for the outer face).
    pub comp_of_face: Vec<usize>,
    /// Minimum vertex height per face.
    pub face_min_height: Vec<u32>,
}

impl MountainStructure {
    /// True iff `c` lies on the same side of separator `s` as component
    /// `sep_comps[s].0` (the child side in the rooted tree).
    pub fn comp_on_child_side(&self, s: SepId, c: CompId) -> bool {
        let (child, _) = self.sep_comps[s];
        self.tin[child as usize] <= self.tin[c as usize]
            && self.tout[c as usize] <= self.tout[child as usize]
    }

    /// Components on the given side of separator `s`; side 0 is the child
    /// (subtree) side of the rooted tree.
    pub fn side_comps(&self, s: SepId, side: usize) -> Vec<CompId> {
        (0..self.comps.len())
            .filter(|&c| (side == 0) == self.comp_on_child_side(s, c))
            .collect()
    }

    /// The side of `s` containing component `c` (0 = child side).
    pub fn side_of(&self, s: SepId, c: CompId) -> usize {
        if self.comp_on_child_side(s, c) {
            0
        } else {
            1
        }
    }

    /// Vertices of the full split-off region on the given side, including
    /// the separator boundary.
    pub fn side_vertices(&self, s: SepId, side: usize) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = Vec::new();
        for c in self.side_comps(s, side) {
            vs.extend(&self.comps[c].vertices);
        }
        vs.extend(self.seps[s].vertices());
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn num_comps(&self) -> usize {
        self.comps.len()
    }
}

/// Order key: height, then number of top vertices, then smaller top id,
/// then separator id; used to pick a largest crest separator.
fn sep_key(seps: &[CrestSeparator], s: SepId) -> (u32, usize, std::cmp::Reverse<VertexId>, std::cmp::Reverse<SepId>) {
    let x = &seps[s];
    let min_top = x.top_vertices().into_iter().min().unwrap();
    (
        x.height,
        x.num_top_vertices(),
        std::cmp::Reverse(min_top),
        std::cmp::Reverse(s),
    )
}

fn largest(seps: &[CrestSeparator], a: Option<SepId>, b: Option<SepId>) -> Option<SepId> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if sep_key(seps, a) >= sep_key(seps, b) {
                Some(a)
            } else {
                Some(b)
            }
        }
    }
}

/// Constructs a good mountain structure: enumerate all separators, drop
/// the ones touching a crest or separating nothing, then merge crestless
/// components bottom-up, always removing a largest incident separator.
pub fn good_mountain_structure(
    g: &EmbeddedGraph,
    hm: &HeightMap,
) -> Result<MountainStructure, GraphError> {
    let crests = find_crests(g, hm);
    let mut crest_of_vertex: HashMap<VertexId, usize> = HashMap::new();
    for (i, cr) in crests.iter().enumerate() {
        for &v in &cr.vertices {
            crest_of_vertex.insert(v, i);
        }
    }
    let di = compute_down_info(g, hm)?;
    let all = enumerate_crest_separators(g, hm, &di);
    // Property (b) plus: drop separators whose top edge borders the outer
    // face (their vertex set separates nothing).
    let outer = g.outer_face();
    let mut seps: Vec<CrestSeparator> = all
        .into_iter()
        .filter(|x| {
            let (a, b) = x.top_edge;
            let on_outer =
                g.face_of(a, b) == Some(outer) || g.face_of(b, a) == Some(outer);
            !on_outer && !x.vertices().iter().any(|v| crest_of_vertex.contains_key(v))
        })
        .collect();

    // Bottom-up pruning until every component holds a crest.
    loop {
        let state = StructureState::build(g, &seps, &crests)?;
        match prune_once(&state, &seps) {
            None => {
                return finish_structure(g, hm, state, seps, crests);
            }
            Some(removed) => {
                let mut keep: Vec<CrestSeparator> = Vec::with_capacity(seps.len() - removed.len());
                for (i, x) in seps.into_iter().enumerate() {
                    if !removed.contains(&i) {
                        keep.push(x);
                    }
                }
                seps = keep;
            }
        }
    }
}

/// Components + connection tree for the current separator set.
struct StructureState {
    comps: Vec<SComponent>,
    mct_edges: Vec<(CompId, CompId, SepId)>,
    adj: Vec<Vec<(CompId, SepId)>>,
    crest_flag: Vec<bool>,
    comp_crests: Vec<Vec<usize>>,
}

impl StructureState {
    fn build(
        g: &EmbeddedGraph,
        seps: &[CrestSeparator],
        crests: &[Crest],
    ) -> Result<StructureState, GraphError> {
        let comps = split_components(g, seps);
        let mut comp_of_face = vec![usize::MAX; g.num_faces()];
        for (i, c) in comps.iter().enumerate() {
            for &f in &c.faces {
                comp_of_face[f as usize] = i;
            }
        }
        let mut mct_edges = Vec::new();
        let mut adj = vec![Vec::new(); comps.len()];
        let mut seen_pairs: HashSet<(CompId, CompId)> = HashSet::new();
        for (s, x) in seps.iter().enumerate() {
            let (a, b) = x.top_edge;
            let f1 = g.face_of(a, b).expect("top edge face");
            let f2 = g.face_of(b, a).expect("top edge twin face");
            let (c1, c2) = (comp_of_face[f1 as usize], comp_of_face[f2 as usize]);
            if c1 == usize::MAX || c2 == usize::MAX || c1 == c2 {
                return Err(GraphError::BadEmbedding(format!(
                    "separator {s} does not split its top-edge faces"
                )));
            }
            if !seen_pairs.insert((c1.min(c2), c1.max(c2))) {
                return Err(GraphError::BadEmbedding(
                    "two separators between one component pair".into(),
                ));
            }
            mct_edges.push((c1, c2, s));
            adj[c1].push((c2, s));
            adj[c2].push((c1, s));
        }
        if mct_edges.len() + 1 != comps.len() {
            return Err(GraphError::BadEmbedding(format!(
                "mountain connection graph is not a tree: {} components, {} edges",
                comps.len(),
                mct_edges.len()
            )));
        }
        // Crest vertices avoid separators, so every face at a crest vertex
        // lies in the crest's unique component.
        let vertex_faces = g.vertex_faces();
        let mut comp_crests = vec![Vec::new(); comps.len()];
        let mut crest_flag = vec![false; comps.len()];
        for (i, cr) in crests.iter().enumerate() {
            let v = cr.vertices[0];
            let mut home = usize::MAX;
            for &f in &vertex_faces[v as usize] {
                let c = comp_of_face[f as usize];
                if c != usize::MAX {
                    if home == usize::MAX {
                        home = c;
                    } else if home != c {
                        return Err(GraphError::BadEmbedding(format!(
                            "crest {i} touches two components"
                        )));
                    }
                }
            }
            if home == usize::MAX {
                return Err(GraphError::BadEmbedding(format!(
                    "crest {i} not in any component"
                )));
            }
            comp_crests[home].push(i);
            crest_flag[home] = true;
        }
        Ok(StructureState { comps, mct_edges, adj, crest_flag, comp_crests })
    }
}

/// One pass of the bottom-up merge. Returns the separators to delete, or
/// `None` when every component already holds a crest.
fn prune_once(state: &StructureState, seps: &[CrestSeparator]) -> Option<BTreeSet<SepId>> {
    let nc = state.comps.len();
    if state.crest_flag.iter().all(|&f| f) {
        return None;
    }
    // Root at component 0; set up depths, parents, children.
    let mut parent: Vec<Option<(CompId, SepId)>> = vec![None; nc];
    let mut depth = vec![0u32; nc];
    let mut order = Vec::new();
    let mut seen = vec![false; nc];
    seen[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        let mut nbrs = state.adj[u].clone();
        nbrs.sort_unstable();
        for (v, s) in nbrs {
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some((u, s));
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
        }
    }
    // Node state over merges; a merged pair keeps the parent-side id.
    let mut alive = vec![true; nc];
    let mut finished = vec![false; nc];
    let mut crest = state.crest_flag.clone();
    let mut children: Vec<BTreeSet<CompId>> = vec![BTreeSet::new(); nc];
    for v in 0..nc {
        if let Some((p, _)) = parent[v] {
            children[p].insert(v);
        }
    }
    let mut unfinished_children: Vec<usize> = children.iter().map(|c| c.len()).collect();
    let mut mcs: Vec<Option<SepId>> = vec![None; nc];
    for v in 0..nc {
        for &c in &children[v] {
            let s = parent[c].unwrap().1;
            mcs[v] = largest(seps, mcs[v], Some(s));
        }
    }
    let mut mcs_star: Vec<Option<SepId>> = vec![None; nc];
    let mut removed: BTreeSet<SepId> = BTreeSet::new();

    // Max-heap of processable nodes by (depth, id).
    use std::collections::BinaryHeap;
    let mut heap: BinaryHeap<(u32, usize)> = BinaryHeap::new();
    for v in 0..nc {
        if unfinished_children[v] == 0 {
            heap.push((depth[v], v));
        }
    }
    // Delayed nodes wait out one non-delayed processing step.
    let mut delayed: Vec<(u32, usize)> = Vec::new();
    loop {
        let Some((d, w)) = heap.pop() else {
            if delayed.is_empty() {
                break;
            }
            // The paper rules this out; fall back to forcing them.
            heap.extend(delayed.drain(..));
            continue;
        };
        if !alive[w] || finished[w] || unfinished_children[w] != 0 || depth[w] != d {
            continue;
        }
        // Delay: the parent's largest child separator is the one to us and
        // the parent still has another unfinished child.
        if !heap.is_empty() {
            if let Some((p, s)) = parent[w] {
                if unfinished_children[p] >= 2 && mcs[p] == Some(s) {
                    delayed.push((d, w));
                    continue;
                }
            }
        }
        heap.extend(delayed.drain(..));
        fn finish(
            w: usize,
            seps: &[CrestSeparator],
            parent: &[Option<(CompId, SepId)>],
            depth: &[u32],
            finished: &mut [bool],
            unfinished_children: &mut [usize],
            mcs_star: &mut [Option<SepId>],
            heap: &mut std::collections::BinaryHeap<(u32, usize)>,
        ) {
            finished[w] = true;
            if let Some((p, s)) = parent[w] {
                mcs_star[p] = largest(seps, mcs_star[p], Some(s));
                unfinished_children[p] -= 1;
                if unfinished_children[p] == 0 && !finished[p] {
                    heap.push((depth[p], p));
                }
            }
        }
        if crest[w] {
            finish(
                w,
                seps,
                &parent,
                &depth,
                &mut finished,
                &mut unfinished_children,
                &mut mcs_star,
                &mut heap,
            );
            continue;
        }
        // Crestless: remove a largest incident separator and merge.
        let to_parent = parent[w].map(|(_, s)| s);
        let x = largest(seps, mcs[w], to_parent)
            .expect("crestless component must have a neighbor");
        removed.insert(x);
        if to_parent != Some(x) {
            // Merge with the child behind x; that child is finished.
            let child = *children[w]
                .iter()
                .find(|&&c| parent[c].map(|(_, s)| s) == Some(x))
                .expect("child across the removed separator");
            alive[child] = false;
            children[w].remove(&child);
            let grand: Vec<CompId> = children[child].iter().copied().collect();
            for gc in grand {
                children[child].remove(&gc);
                children[w].insert(gc);
                let s = parent[gc].unwrap().1;
                parent[gc] = Some((w, s));
            }
            crest[w] = true;
            finish(
                w,
                seps,
                &parent,
                &depth,
                &mut finished,
                &mut unfinished_children,
                &mut mcs_star,
                &mut heap,
            );
        } else {
            // Merge upward into the parent.
            let (p, _) = parent[w].unwrap();
            alive[w] = false;
            children[p].remove(&w);
            unfinished_children[p] -= 1;
            let kids: Vec<CompId> = children[w].iter().copied().collect();
            for c in kids {
                children[w].remove(&c);
                children[p].insert(c);
                let s = parent[c].unwrap().1;
                parent[c] = Some((p, s));
                // All of w's children are finished here.
            }
            mcs_star[p] = largest(seps, mcs_star[w], mcs_star[p]);
            if unfinished_children[p] >= 1 {
                mcs[p] = largest(seps, mcs[w], mcs[p]);
            } else {
                mcs[p] = largest(seps, mcs[w], mcs_star[p]);
            }
            if unfinished_children[p] == 0 && !finished[p] {
                heap.push((depth[p], p));
            }
        }
    }
    Some(removed)
}

fn finish_structure(
    g: &EmbeddedGraph,
    hm: &HeightMap,
    state: StructureState,
    seps: Vec<CrestSeparator>,
    crests: Vec<Crest>,
) -> Result<MountainStructure, GraphError> {
    let StructureState { comps, mct_edges, adj, crest_flag: _, comp_crests } = state;
    let nc = comps.len();
    // Good structure: exactly one crest per component.
    let mut comp_crest = vec![usize::MAX; nc];
    for (c, list) in comp_crests.iter().enumerate() {
        if list.len() != 1 {
            return Err(GraphError::BadEmbedding(format!(
                "component {c} holds {} crests after pruning",
                list.len()
            )));
        }
        comp_crest[c] = list[0];
    }
    let mut crest_comp = vec![0usize; crests.len()];
    for (c, &cr) in comp_crest.iter().enumerate() {
        crest_comp[cr] = c;
    }
    // Root the tree at component 0 and record an Euler interval per node;
    // sep_comps is oriented (child_side, parent_side).
    let mut parent: Vec<Option<(CompId, SepId)>> = vec![None; nc];
    let mut tin = vec![0u32; nc];
    let mut tout = vec![0u32; nc];
    let mut timer = 0u32;
    let mut seen = vec![false; nc];
    seen[0] = true;
    // Iterative DFS with post-times.
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    tin[0] = timer;
    timer += 1;
    let mut sorted_adj: Vec<Vec<(CompId, SepId)>> = adj.clone();
    for l in &mut sorted_adj {
        l.sort_unstable();
    }
    while let Some(&mut (u, ref mut i)) = stack.last_mut() {
        if *i < sorted_adj[u].len() {
            let (v, s) = sorted_adj[u][*i];
            *i += 1;
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some((u, s));
                tin[v] = timer;
                timer += 1;
                stack.push((v, 0));
            }
        } else {
            tout[u] = timer;
            timer += 1;
            stack.pop();
        }
    }
    let mut sep_comps = vec![(0usize, 0usize); seps.len()];
    for &(a, b, s) in &mct_edges {
        // Orient child first.
        let (child, par) = if parent[a].map(|(p, _)| p) == Some(b) {
            (a, b)
        } else {
            (b, a)
        };
        sep_comps[s] = (child, par);
    }
    // Enclosure: a separator with a lowpoint of height at least two
    // encloses the side of the tree without any coast vertex (the cycle
    // cuts that side off the coast, so everything inside sits at height
    // two or more).
    let mut encloses = vec![None; nc];
    let comp_touches_coast: Vec<bool> = comps
        .iter()
        .map(|c| c.vertices.iter().any(|&v| hm.h[v as usize] == 1))
        .collect();
    // Coast components inside each subtree, via the Euler intervals.
    let mut order: Vec<CompId> = (0..nc).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(tin[c]));
    let mut coast_in_subtree: Vec<usize> = comp_touches_coast.iter().map(|&b| b as usize).collect();
    for &c in &order {
        if let Some((p, _)) = parent[c] {
            coast_in_subtree[p] += coast_in_subtree[c];
        }
    }
    let total_coast: usize = comp_touches_coast.iter().map(|&b| b as usize).sum();
    for (s, x) in seps.iter().enumerate() {
        let Some(lp) = x.lowpoint else { continue };
        if hm.h[lp as usize] < 2 {
            continue;
        }
        let (child, par) = sep_comps[s];
        let child_coast = coast_in_subtree[child];
        let c = if child_coast == 0 {
            child
        } else if child_coast == total_coast {
            par
        } else {
            continue;
        };
        if encloses[c].is_some() {
            return Err(GraphError::BadEmbedding(format!(
                "component {c} enclosed by two separators"
            )));
        }
        encloses[c] = Some(s);
    }
    let mut comp_of_face = vec![usize::MAX; g.num_faces()];
    for (i, c) in comps.iter().enumerate() {
        for &f in &c.faces {
            comp_of_face[f as usize] = i;
        }
    }
    let mut face_min_height = vec![u32::MAX; g.num_faces()];
    for f in 0..g.num_faces() {
        for &(u, _) in g.face_walk(f as u32) {
            face_min_height[f] = face_min_height[f].min(hm.h[u as usize]);
        }
    }
    Ok(MountainStructure {
        seps,
        comps,
        mct_edges,
        mct_adj: adj,
        sep_comps,
        crests,
        crest_comp,
        comp_crest,
        encloses,
        parent,
        tin,
        tout,
        comp_of_face,
        face_min_height,
    })
}

/// Faces strictly inside the closed cycle (given as a vertex sequence):
/// flood from the outer face without crossing cycle edges; `None` when the
/// cycle is degenerate or some cycle edge is missing.
pub fn enclosed_faces(g: &EmbeddedGraph, cycle: &[VertexId]) -> Option<Vec<bool>> {
    if cycle.len() < 3 {
        return None;
    }
    let mut cyc_edges: HashSet<(VertexId, VertexId)> = HashSet::new();
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        if !g.has_edge(a, b) {
            return None;
        }
        cyc_edges.insert((a.min(b), a.max(b)));
    }
    let mut outside = vec![false; g.num_faces()];
    let mut stack = vec![g.outer_face()];
    outside[g.outer_face() as usize] = true;
    while let Some(f) = stack.pop() {
        for &(u, v) in g.face_walk(f) {
            if cyc_edges.contains(&(u.min(v), u.max(v))) {
                continue;
            }
            let f2 = g.face_of(v, u).expect("twin");
            if !outside[f2 as usize] {
                outside[f2 as usize] = true;
                stack.push(f2);
            }
        }
    }
    Some(outside.iter().map(|&o| !o).collect())
}

/// Convenience: the mountain connection tree of an explicit separator
/// set, as (components, edges). Fails when the result is not a tree.
pub fn mountain_connection_tree(
    g: &EmbeddedGraph,
    seps: &[CrestSeparator],
) -> Result<(Vec<SComponent>, Vec<(CompId, CompId, SepId)>), GraphError> {
    let crests = Vec::new();
    let state = StructureState::build(g, seps, &crests)?;
    Ok((state.comps, state.mct_edges))
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
    fn split_empty_is_whole_graph() {
        let g = k4();
        let comps = split_components(&g, &[]);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].vertices, vec![0, 1, 2, 3]);
        assert_eq!(comps[0].faces.len(), 3);
    }

    #[test]
    fn split_k4_two_sides() {
        let g = k4();
        let hm = compute_heights(&g).unwrap();
        // Hand-built separator through the center: down paths 3->0 and a
        // one-top variant via representant... K4 has a single lower arc, so
        // build the two-top separator of paths [3,0] and [3,1] manually is
        // not Def.2; use the equal-height coast pair {0,1} with the chord
        // missing. Instead check an inner edge split: border {3,0},{3,1}.
        let x = CrestSeparator {
            p1: vec![3, 0],
            p2: vec![3, 1],
            one_top: true,
            top_edge: (3, 1),
            lowpoint: None,
            height: hm.h[3],
        };
        let comps = split_components(&g, &[x]);
        assert_eq!(comps.len(), 2);
        let sizes: Vec<usize> = comps.iter().map(|c| c.faces.len()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 3);
        assert!(sizes.contains(&1) && sizes.contains(&2));
        // Border edges shared by both components.
        for c in &comps {
            assert!(c.contains_vertex(3) && c.contains_vertex(0) || c.contains_vertex(1));
        }
    }

    #[test]
    fn k4_good_structure_empty() {
        let g = k4();
        let hm = compute_heights(&g).unwrap();
        let ms = good_mountain_structure(&g, &hm).unwrap();
        assert_eq!(ms.seps.len(), 0);
        assert_eq!(ms.num_comps(), 1);
        assert_eq!(ms.crests.len(), 1);
    }

    #[test]
    fn one_crest_graph_single_component() {
        let g = crate::gen::grid(6, 6, true).unwrap();
        let hm = compute_heights(&g).unwrap();
        let ms = good_mountain_structure(&g, &hm).unwrap();
        assert_eq!(ms.crests.len(), 1);
        assert_eq!(ms.num_comps(), 1);
        assert!(ms.seps.is_empty());
    }

    #[test]
    fn chain_structure_matches_crests() {
        for summits in 2..=4usize {
            let g = crate::gen::mountain_chain(summits, 3, 11).unwrap();
            let hm = compute_heights(&g).unwrap();
            let ms = good_mountain_structure(&g, &hm).unwrap();
            assert_eq!(ms.crests.len(), summits);
            assert_eq!(ms.num_comps(), summits, "components = crests");
            assert_eq!(ms.seps.len(), summits - 1);
            // No separator contains a crest vertex.
            for x in &ms.seps {
                for cr in &ms.crests {
                    for &v in &cr.vertices {
                        assert!(!x.contains(v));
                    }
                }
            }
            // The tree of a chain is a path: every node has degree <= 2.
            for c in 0..ms.num_comps() {
                assert!(ms.mct_adj[c].len() <= 2);
            }
        }
    }

    #[test]
    fn chain_separators_go_between() {
        let g = crate::gen::mountain_chain(2, 3, 2).unwrap();
        let hm = compute_heights(&g).unwrap();
        let ms = good_mountain_structure(&g, &hm).unwrap();
        assert_eq!(ms.seps.len(), 1);
        let a = &ms.crests[0].vertices;
        let b = &ms.crests[1].vertices;
        assert_eq!(goes_between(&g, &ms.seps[0], a, b), Between::Strongly);
        // A set touching the separator is at most weakly between.
        let mut a2 = a.clone();
        a2.push(ms.seps[0].p1[0]);
        assert_ne!(goes_between(&g, &ms.seps[0], &a2, b), Between::Strongly);
        // Two sets on the same side are not separated.
        assert_eq!(goes_between(&g, &ms.seps[0], a, a), Between::No);
    }

    #[test]
    fn ridge_height_property() {
        // Property (a): for each crest pair some separator of height equal
        // to the ridge depth goes strongly between.
        let g = crate::gen::mountain_chain(3, 3, 4).unwrap();
        let hm = compute_heights(&g).unwrap();
        let ms = good_mountain_structure(&g, &hm).unwrap();
        for i in 0..ms.crests.len() {
            for j in i + 1..ms.crests.len() {
                let d = crate::verify::ridge_depth(
                    &g,
                    &hm,
                    ms.crests[i].vertices[0],
                    ms.crests[j].vertices[0],
                )
                .unwrap();
                let found = ms.seps.iter().any(|x| {
                    x.height == d
                        && goes_between(&g, x, &ms.crests[i].vertices, &ms.crests[j].vertices)
                            == Between::Strongly
                });
                assert!(found, "crest pair ({i},{j}) ridge depth {d}");
            }
        }
    }
}
