//! Coast separators: minimum-size high cuts around single crests via
//! network flow, and the full non-crossing cycle set that cuts every tall
//! crest off the coast.


use crate::embed::EmbeddedGraph;
use crate::layering::HeightMap;
use crate::mountain::{enclosed_faces, CompId, MountainStructure, SepId};
use crate::shortcuts::{classify_shortcut_free, composed_cycle, ShortcutSets};
use crate::verify::unit_vertex_cut;
use crate::{DecomposeError, GraphError, VertexId};
use std::collections::{BTreeSet, HashMap, HashSet};

/// How a coast cycle was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleKind {
    HMinimalCut,
    Composed(SepId),
    EssentialBoundary(SepId),
}

/// One coast separator of the plan: its vertices, its inner graph, and
/// the components whose crests it swallows.
#[derive(Debug, Clone)]
pub struct CoastCycle {
    /// Cyclic walk when one is known (composed and boundary cycles).
    pub walk: Option<Vec<VertexId>>,
    /// Distinct separator vertices, sorted.
    pub vertices: Vec<VertexId>,
    pub kind: CycleKind,
    /// Inner graph: enclosed vertices plus the cycle itself, sorted.
    pub inner: Vec<VertexId>,
    /// Components with a face strictly inside.
    pub m_comps: Vec<CompId>,
}

/// Bookkeeping counters for the cycle construction.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct CoastCounters {
    pub flow_cuts: usize,
    pub composed_cycles: usize,
    pub essential_cycles: usize,
    pub step_c_lowpoint: usize,
    pub forced_delays: usize,
    pub invariant_violations: usize,
}

/// The full cycle plan plus the surviving separator set.
#[derive(Debug, Clone)]
pub struct CoastPlan {
    pub cycles: Vec<CoastCycle>,
    /// Mask over the structure's separators: true = kept after removing
    /// the ones buried inside a single cycle region.
    pub kept_seps: Vec<bool>,
    /// Per component: the cycle whose region contains it, if any.
    pub comp_cycle: Vec<Option<usize>>,
    pub counters: CoastCounters,
}

/// Minimum-size coast separator for one crest, all vertices of height at
/// least `h`, within the given component; `boundary` lists the component
/// vertices lying on surrounding separators (the flow may cut through
/// them but not escape past them). Returns `None` when every such
/// separator needs more than `ell` vertices.
pub fn h_minimal_coast_separator(
    g: &EmbeddedGraph,
    hm: &HeightMap,
    crest_vertices: &[VertexId],
    comp_vertices: &[VertexId],
    boundary: &[VertexId],
    h: u32,
    ell: u32,
) -> Option<Vec<VertexId>> {
    // Local index: component vertices plus one auxiliary outside vertex.
    let nc = comp_vertices.len();
    let mut local: HashMap<VertexId, usize> = HashMap::new();
    for (i, &v) in comp_vertices.iter().enumerate() {
        local.insert(v, i);
    }
    let aux = nc;
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); nc + 1];
    for (i, &v) in comp_vertices.iter().enumerate() {
        for &w in g.rotation(v) {
            if let Some(&j) = local.get(&w) {
                adj[i].push(j as VertexId);
            }
        }
    }
    for &v in boundary {
        if let Some(&i) = local.get(&v) {
            adj[aux].push(i as VertexId);
            adj[i].push(aux as VertexId);
        }
    }
    let mut source = vec![false; nc + 1];
    let in_crest: HashSet<VertexId> = crest_vertices.iter().copied().collect();
    for &v in crest_vertices {
        source[*local.get(&v)?] = true;
    }
    let mut sink = vec![false; nc + 1];
    sink[aux] = true;
    for (i, &v) in comp_vertices.iter().enumerate() {
        if hm.h[v as usize] <= h - 1 {
            sink[i] = true;
        }
    }
    let eligible: Vec<bool> = (0..nc + 1)
        .map(|i| {
            i != aux
                && !source[i]
                && !sink[i]
                && hm.h[comp_vertices[i] as usize] >= h
                && !in_crest.contains(&comp_vertices[i])
        })
        .collect();
    let cut = unit_vertex_cut(
        nc + 1,
        |v| adj[v as usize].clone(),
        &source,
        &sink,
        &eligible,
        ell as usize,
    )?;
    let mut out: Vec<VertexId> = cut.iter().map(|&i| comp_vertices[i as usize]).collect();
    if out.len() > ell as usize {
        return None;
    }
    out.sort_unstable();
    Some(out)
}

/// Vertices enclosed by a cycle plus the cycle: depth-first search from a
/// known-enclosed vertex, never expanding through cycle vertices.
pub fn inner_graph(
    g: &EmbeddedGraph,
    cycle_vertices: &[VertexId],
    start: VertexId,
) -> Result<Vec<VertexId>, GraphError> {
    for &v in cycle_vertices {
        if g.on_outer_face(v) {
            return Err(GraphError::Precondition(format!(
                "cycle vertex {v} lies on the coast"
            )));
        }
    }
    let on_cycle: HashSet<VertexId> = cycle_vertices.iter().copied().collect();
    if on_cycle.contains(&start) {
        return Err(GraphError::Precondition("start vertex on the cycle".into()));
    }
    let mut seen: HashSet<VertexId> = on_cycle.clone();
    let mut inner: Vec<VertexId> = cycle_vertices.to_vec();
    seen.insert(start);
    inner.push(start);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in g.rotation(u) {
            if seen.insert(w) {
                inner.push(w);
                if !on_cycle.contains(&w) {
                    stack.push(w);
                }
            }
        }
    }
    inner.sort_unstable();
    inner.dedup();
    Ok(inner)
}

/// Faces strictly inside the region bounded by the edges among the given
/// vertex set (used for flow cuts, whose cyclic order is implicit).
fn enclosed_faces_by_vertex_set(g: &EmbeddedGraph, set: &[VertexId]) -> Vec<bool> {
    let in_set: HashSet<VertexId> = set.iter().copied().collect();
    let mut outside = vec![false; g.num_faces()];
    let mut stack = vec![g.outer_face()];
    outside[g.outer_face() as usize] = true;
    while let Some(f) = stack.pop() {
        for &(u, v) in g.face_walk(f) {
            if in_set.contains(&u) && in_set.contains(&v) {
                continue;
            }
            let f2 = g.face_of(v, u).expect("twin");
            if !outside[f2 as usize] {
                outside[f2 as usize] = true;
                stack.push(f2);
            }
        }
    }
    outside.iter().map(|&o| !o).collect()
}

struct CycleFactory<'a> {
    g: &'a EmbeddedGraph,
    hm: &'a HeightMap,
    comp_of_face: &'a [usize],
    k: u32,
}

impl<'a> CycleFactory<'a> {
    fn make(
        &self,
        kind: CycleKind,
        walk: Option<Vec<VertexId>>,
        vertices: Vec<VertexId>,
    ) -> Result<CoastCycle, String> {
        let h = self.k + 1;
        for &v in &vertices {
            if self.hm.h[v as usize] < h {
                return Err(format!(
                    "cycle vertex {v} has height {} < {h}",
                    self.hm.h[v as usize]
                ));
            }
        }
        if vertices.len() as u32 > 3 * self.k - 1 {
            return Err(format!(
                "cycle has {} vertices > 3k-1 = {}",
                vertices.len(),
                3 * self.k - 1
            ));
        }
        let inside = match &walk {
            Some(w) => enclosed_faces(self.g, w)
                .ok_or_else(|| "cycle walk broken".to_string())?,
            None => enclosed_faces_by_vertex_set(self.g, &vertices),
        };
        let mut m: BTreeSet<CompId> = BTreeSet::new();
        let mut inner: Vec<VertexId> = vertices.clone();
        for f in 0..self.g.num_faces() {
            if inside[f] {
                if self.comp_of_face[f] != usize::MAX {
                    m.insert(self.comp_of_face[f]);
                }
                for &(u, _) in self.g.face_walk(f as u32) {
                    inner.push(u);
                }
            }
        }
        inner.sort_unstable();
        inner.dedup();
        Ok(CoastCycle {
            walk,
            vertices,
            kind,
            inner,
            m_comps: m.into_iter().collect(),
        })
    }
}

/// Builds the coast-separator plan: one cycle around every tall crest,
/// regions pairwise disjoint and connected in the connection tree.
pub fn build_coast_cycles(
    g: &EmbeddedGraph,
    hm: &HeightMap,
    ms: &MountainStructure,
    sets: &ShortcutSets,
    k: u32,
) -> Result<CoastPlan, DecomposeError> {
    let h = k + 1;
    let tall = 2 * k + 1;
    let mut counters = CoastCounters::default();
    let nc = ms.num_comps();
    let too_small = |reason: String| DecomposeError::KTooSmall { k, reason };
    let free = classify_shortcut_free(hm, ms, sets, k, h);
    // Enclosing separators, thresholded at lowpoint height >= h.
    let x_c: Vec<Option<SepId>> = (0..nc)
        .map(|c| {
            ms.encloses[c].filter(|&s| {
                ms.seps[s]
                    .lowpoint
                    .map_or(false, |lp| hm.h[lp as usize] >= h)
            })
        })
        .collect();
    let factory = CycleFactory { g, hm, comp_of_face: &ms.comp_of_face, k };
    let mut cycles: Vec<CoastCycle> = Vec::new();
    let mut covered_comp: Vec<Option<usize>> = vec![None; nc];
    let mut note_cycle =
        |cy: CoastCycle, cycles: &mut Vec<CoastCycle>, covered: &mut Vec<Option<usize>>| {
            let id = cycles.len();
            for &c in &cy.m_comps {
                if covered[c].is_some() {
                    counters.invariant_violations += 1;
                }
                covered[c] = Some(id);
            }
            cycles.push(cy);
        };

    // Flow cuts for tall crests in shortcut-free components.
    let mut in_free_comp = vec![false; ms.crests.len()];
    for (cr, &c) in ms.crest_comp.iter().enumerate() {
        in_free_comp[cr] = free.free_comp[c];
    }
    for cr in 0..ms.crests.len() {
        if !in_free_comp[cr] || ms.crests[cr].height != tall {
            continue;
        }
        let c0 = ms.crest_comp[cr];
        // The free-separator component containing c0: components reachable
        // across non-free separators.
        let mut region = vec![false; nc];
        region[c0] = true;
        let mut stack = vec![c0];
        let mut frontier: Vec<SepId> = Vec::new();
        while let Some(c) = stack.pop() {
            for &(d, s) in &ms.mct_adj[c] {
                if free.free_sep[s] {
                    frontier.push(s);
                } else if !region[d] {
                    region[d] = true;
                    stack.push(d);
                }
            }
        }
        let mut comp_vertices: Vec<VertexId> = Vec::new();
        for c in 0..nc {
            if region[c] {
                comp_vertices.extend(&ms.comps[c].vertices);
            }
        }
        comp_vertices.sort_unstable();
        comp_vertices.dedup();
        let mut boundary: Vec<VertexId> = Vec::new();
        for s in frontier {
            boundary.extend(ms.seps[s].vertices());
        }
        boundary.sort_unstable();
        boundary.dedup();
        let cut = h_minimal_coast_separator(
            g,
            hm,
            &ms.crests[cr].vertices,
            &comp_vertices,
            &boundary,
            h,
            k,
        )
        .ok_or_else(|| {
            too_small(format!(
                "no {h}-high coast separator of size <= {k} around a tall crest"
            ))
        })?;
        let cy = factory
            .make(CycleKind::HMinimalCut, None, cut)
            .map_err(too_small)?;
        if !cy.m_comps.contains(&c0) {
            return Err(too_small("flow cut fails to enclose its crest".into()));
        }
        counters.flow_cuts += 1;
        note_cycle(cy, &mut cycles, &mut covered_comp);
    }

    // Forest over the still-uncovered non-free components; edges across
    // non-free separators only.
    let in_forest: Vec<bool> = (0..nc)
        .map(|c| covered_comp[c].is_none() && !free.free_comp[c])
        .collect();
    let mut tree_id = vec![usize::MAX; nc];
    let mut trees: Vec<Vec<CompId>> = Vec::new();
    for c0 in 0..nc {
        if !in_forest[c0] || tree_id[c0] != usize::MAX {
            continue;
        }
        let id = trees.len();
        let mut nodes = vec![c0];
        tree_id[c0] = id;
        let mut stack = vec![c0];
        while let Some(c) = stack.pop() {
            for &(d, s) in &ms.mct_adj[c] {
                if !free.free_sep[s] && in_forest[d] && tree_id[d] == usize::MAX {
                    tree_id[d] = id;
                    nodes.push(d);
                    stack.push(d);
                }
            }
        }
        nodes.sort_unstable();
        trees.push(nodes);
    }

    for nodes in &trees {
        run_tree_steps(
            ms,
            sets,
            k,
            &factory,
            nodes,
            &free.free_sep,
            &x_c,
            &mut cycles,
            &mut covered_comp,
            &mut counters,
        )?;
    }

    // Property (ii): every crest of height 2k+1 is enclosed by a cycle.
    for cr in 0..ms.crests.len() {
        if ms.crests[cr].height != tall {
            continue;
        }
        let c = ms.crest_comp[cr];
        let Some(cy) = covered_comp[c] else {
            return Err(too_small(format!("tall crest {cr} left uncovered")));
        };
        let cyc = &cycles[cy];
        for &v in &ms.crests[cr].vertices {
            if cyc.vertices.binary_search(&v).is_ok() || cyc.inner.binary_search(&v).is_err() {
                return Err(too_small(format!("tall crest {cr} not strictly enclosed")));
            }
        }
    }
    // Connection-tree connectivity of every region.
    for cy in &cycles {
        if !mct_connected(ms, &cy.m_comps) {
            return Err(too_small("cycle region disconnected in the tree".into()));
        }
    }
    // Separators buried inside one region disappear.
    let kept_seps: Vec<bool> = (0..ms.seps.len())
        .map(|s| {
            let (a, b) = ms.sep_comps[s];
            !(covered_comp[a].is_some() && covered_comp[a] == covered_comp[b])
        })
        .collect();
    Ok(CoastPlan { cycles, kept_seps, comp_cycle: covered_comp, counters })
}

fn mct_connected(ms: &MountainStructure, comps: &[CompId]) -> bool {
    if comps.len() <= 1 {
        return true;
    }
    let set: HashSet<CompId> = comps.iter().copied().collect();
    let mut seen = HashSet::new();
    seen.insert(comps[0]);
    let mut stack = vec![comps[0]];
    while let Some(c) = stack.pop() {
        for &(d, _) in &ms.mct_adj[c] {
            if set.contains(&d) && seen.insert(d) {
                stack.push(d);
            }
        }
    }
    seen.len() == comps.len()
}

/// Steps over one tree of the forest: orient it into an intree while
/// fixing a cycle per node, then emit cycles top-down, dropping swallowed
/// regions.
#[allow(clippy::too_many_arguments)]
fn run_tree_steps(
    ms: &MountainStructure,
    sets: &ShortcutSets,
    k: u32,
    factory: &CycleFactory,
    nodes: &[CompId],
    free_sep: &[bool],
    x_c: &[Option<SepId>],
    cycles: &mut Vec<CoastCycle>,
    covered_comp: &mut Vec<Option<usize>>,
    counters: &mut CoastCounters,
) -> Result<(), DecomposeError> {
    let too_small = |reason: String| DecomposeError::KTooSmall { k, reason };
    let node_set: HashSet<CompId> = nodes.iter().copied().collect();
    let tree_nbrs = |c: CompId| -> Vec<(CompId, SepId)> {
        let mut out: Vec<(CompId, SepId)> = ms
            .mct_adj[c]
            .iter()
            .filter(|&&(d, s)| !free_sep[s] && node_set.contains(&d))
            .copied()
            .collect();
        out.sort_unstable();
        out
    };
    let mut marked: HashMap<CompId, bool> = nodes.iter().map(|&c| (c, false)).collect();
    let mut in_w: BTreeSet<CompId> = nodes.iter().copied().collect();
    // The directed edge chosen per marked node, and its cycle.
    let mut out_edge: HashMap<CompId, CompId> = HashMap::new();
    let mut node_cycle: HashMap<CompId, CoastCycle> = HashMap::new();

    let essential_cycle_of = |s: SepId| -> Result<CoastCycle, String> {
        let x = &ms.seps[s];
        let walk = x
            .essential_cycle()
            .ok_or_else(|| "enclosing separator without a proper cycle".to_string())?;
        let mut vs = walk.clone();
        vs.sort_unstable();
        vs.dedup();
        factory.make(CycleKind::EssentialBoundary(s), Some(walk), vs)
    };
    let composed_of = |s: SepId, c: CompId| -> Result<Option<CoastCycle>, String> {
        let side = ms.side_of(s, c);
        let Some((_, _, sc)) = sets.best_within(s, side, k) else {
            return Ok(None);
        };
        let walk = composed_cycle(&ms.seps[s], &sc.path).map_err(|e| e.to_string())?;
        let mut vs = walk.clone();
        vs.sort_unstable();
        vs.dedup();
        factory
            .make(CycleKind::Composed(s), Some(walk), vs)
            .map(Some)
    };

    // Steps (a)-(b): repeatedly take a node with exactly one unmarked
    // tree neighbor.
    loop {
        let pick = in_w.iter().copied().find(|&c| {
            tree_nbrs(c)
                .iter()
                .filter(|&&(d, _)| !marked[&d])
                .count()
                == 1
        });
        let Some(c) = pick else { break };
        in_w.remove(&c);
        let (c_next, s_next) = *tree_nbrs(c)
            .iter()
            .find(|&&(d, _)| !marked[&d])
            .expect("one unmarked neighbor");
        if let Some(s) = x_c[c] {
            let cy = essential_cycle_of(s).map_err(&too_small)?;
            counters.essential_cycles += 1;
            marked.insert(c, true);
            out_edge.insert(c, c_next);
            node_cycle.insert(c, cy);
            continue;
        }
        if let Some(cy) = composed_of(s_next, c).map_err(&too_small)? {
            counters.composed_cycles += 1;
            marked.insert(c, true);
            out_edge.insert(c, c_next);
            node_cycle.insert(c, cy);
        }
        // Otherwise the node stays unmarked; it becomes the intree root.
    }
    // Step (c): remaining unmarked nodes.
    let unmarked: Vec<CompId> = nodes.iter().copied().filter(|c| !marked[c]).collect();
    if unmarked.len() != 1 {
        counters.invariant_violations += 1;
        return Err(too_small(format!(
            "{} unmarked nodes in a tree of the cycle forest",
            unmarked.len()
        )));
    }
    for &c in &unmarked {
        if let Some(s) = x_c[c] {
            counters.step_c_lowpoint += 1;
            let cy = essential_cycle_of(s).map_err(&too_small)?;
            counters.essential_cycles += 1;
            node_cycle.insert(c, cy);
            continue;
        }
        // Any separator with a top edge in c and a usable shortcut on
        // this side.
        let mut found = false;
        let mut incident: Vec<SepId> = ms.mct_adj[c].iter().map(|&(_, s)| s).collect();
        incident.sort_unstable();
        for s in incident {
            if let Some(cy) = composed_of(s, c).map_err(&too_small)? {
                counters.composed_cycles += 1;
                node_cycle.insert(c, cy);
                found = true;
                break;
            }
        }
        if !found {
            return Err(too_small(
                "root component has neither enclosure nor usable shortcut".into(),
            ));
        }
    }
    let root = unmarked[0];
    // Step (d): depths toward the root; pick the deepest node whose
    // enclosing separator points to one of its intree children.
    let mut depth: HashMap<CompId, u32> = HashMap::new();
    fn depth_of(
        c: CompId,
        out_edge: &HashMap<CompId, CompId>,
        depth: &mut HashMap<CompId, u32>,
    ) -> u32 {
        if let Some(&d) = depth.get(&c) {
            return d;
        }
        let d = match out_edge.get(&c) {
            None => 0,
            Some(&p) => depth_of(p, out_edge, depth) + 1,
        };
        depth.insert(c, d);
        d
    }
    for &c in nodes {
        depth_of(c, &out_edge, &mut depth);
    }
    let children: HashMap<CompId, Vec<CompId>> = {
        let mut m: HashMap<CompId, Vec<CompId>> = HashMap::new();
        for (&c, &p) in &out_edge {
            m.entry(p).or_default().push(c);
        }
        m
    };
    let start = nodes
        .iter()
        .copied()
        .filter(|&c| {
            let Some(s) = x_c[c] else { return false };
            let (a, b) = ms.sep_comps[s];
            let other = if a == c { b } else { a };
            children.get(&c).map_or(false, |ch| ch.contains(&other))
        })
        .max_by_key(|&c| (depth[&c], c))
        .unwrap_or(root);
    // Emit the start cycle, then step (e): keep taking a surviving root.
    let mut deleted: HashSet<CompId> = HashSet::new();
    let emit = |c: CompId,
                    deleted: &mut HashSet<CompId>,
                    cycles: &mut Vec<CoastCycle>,
                    covered_comp: &mut Vec<Option<usize>>,
                    counters: &mut CoastCounters| {
        let cy = node_cycle[&c].clone();
        let id = cycles.len();
        if matches!(cy.kind, CycleKind::HMinimalCut) {
            counters.flow_cuts += 1;
        }
        for &mc in &cy.m_comps {
            if node_set.contains(&mc) {
                deleted.insert(mc);
            }
            if covered_comp[mc].is_some() {
                counters.invariant_violations += 1;
            }
            covered_comp[mc] = Some(id);
        }
        deleted.insert(c);
        cycles.push(cy);
    };
    emit(start, &mut deleted, cycles, covered_comp, counters);
    loop {
        // Roots of the remaining intrees: undeleted nodes whose out-edge
        // target is deleted or missing.
        let next = nodes
            .iter()
            .copied()
            .filter(|c| !deleted.contains(c))
            .find(|&c| out_edge.get(&c).map_or(true, |p| deleted.contains(p)));
        let Some(c) = next else { break };
        emit(c, &mut deleted, cycles, covered_comp, counters);
    }
    if nodes.iter().any(|c| !deleted.contains(c)) {
        counters.invariant_violations += 1;
        return Err(too_small("cycle steps left components unswallowed".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layering::{compute_heights, find_crests};
    use crate::mountain::good_mountain_structure;
    use crate::shortcuts::compute_shortcut_sets;
    use crate::verify::check_separator;

    #[test]
    fn grid7_center_ring_cut() {
        let g = crate::gen::grid(7, 7, true).unwrap();
        let hm = compute_heights(&g).unwrap();
        let crests = find_crests(&g, &hm);
        assert_eq!(crests.len(), 1);
        let all: Vec<VertexId> = (0..g.n() as VertexId).collect();
        let cut = h_minimal_coast_separator(&g, &hm, &crests[0].vertices, &all, &[], 2, 99)
            .expect("cut exists");
        assert!(cut.iter().all(|&v| hm.h[v as usize] >= 2));
        let coast: Vec<VertexId> =
            (0..g.n() as VertexId).filter(|&v| hm.h[v as usize] == 1).collect();
        assert!(check_separator(&g, &cut, &crests[0].vertices, &coast, true));
        // Minimal: no smaller high subset separates (exhaustive over all
        // subsets up to size |cut| - 1).
        let high: Vec<VertexId> = (0..g.n() as VertexId)
            .filter(|&v| hm.h[v as usize] >= 2 && !crests[0].vertices.contains(&v))
            .collect();
        fn subsets(
            pool: &[VertexId],
            size: usize,
            start: usize,
            cur: &mut Vec<VertexId>,
            found: &mut dyn FnMut(&[VertexId]) -> bool,
        ) -> bool {
            if cur.len() == size {
                return found(cur);
            }
            for i in start..pool.len() {
                cur.push(pool[i]);
                if subsets(pool, size, i + 1, cur, found) {
                    return true;
                }
                cur.pop();
            }
            false
        }
        for size in 0..cut.len() {
            let mut cur = Vec::new();
            let any = subsets(&high, size, 0, &mut cur, &mut |s: &[VertexId]| {
                check_separator(&g, s, &crests[0].vertices, &coast, true)
            });
            assert!(!any, "a separator of size {size} exists");
        }
    }

    #[test]
    fn crest_next_to_coast_has_no_cut()
    {
        let g = crate::gen::grid(3, 3, true).unwrap();
        let hm = compute_heights(&g).unwrap();
        let crests = find_crests(&g, &hm);
        let all: Vec<VertexId> = (0..g.n() as VertexId).collect();
        assert!(
            h_minimal_coast_separator(&g, &hm, &crests[0].vertices, &all, &[], 2, 99).is_none()
        );
    }

    #[test]
    fn inner_graph_small() {
        let g = crate::gen::grid(5, 5, true).unwrap();
        let hm = compute_heights(&g).unwrap();
        let ring: Vec<VertexId> =
            (0..g.n() as VertexId).filter(|&v| hm.h[v as usize] == 2).collect();
        let inner = inner_graph(&g, &ring, 12).unwrap();
        let mut expect = ring.clone();
        expect.push(12);
        expect.sort_unstable();
        assert_eq!(inner, expect);
        // Cycle touching the coast is rejected.
        assert!(inner_graph(&g, &[0, 1], 12).is_err());
    }

    /// Merge tall plateaus and build the plan, as the pipeline does.
    fn plan_for(
        g: &crate::EmbeddedGraph,
        k: u32,
    ) -> Result<
        (
            crate::EmbeddedGraph,
            crate::layering::HeightMap,
            crate::mountain::MountainStructure,
            CoastPlan,
        ),
        DecomposeError,
    > {
        let hm = compute_heights(g)?;
        let g2 = crate::decompose::merge_high_regions(g, &hm, 2 * k + 1)?.graph;
        let hm2 = compute_heights(&g2)?;
        let ms = good_mountain_structure(&g2, &hm2)?;
        let sets = compute_shortcut_sets(&g2, &hm2, &ms, k + 1)?;
        let plan = build_coast_cycles(&g2, &hm2, &ms, &sets, k)?;
        Ok((g2, hm2, ms, plan))
    }

    #[test]
    fn single_tall_crest_plan() {
        // A 10-ring tower of girth 4: heights reach 11, the plateau above
        // 2k+1 = 9 merges, and the cut around it has 4 vertices.
        let g = crate::gen::tower(10, 4).unwrap();
        let k = 4;
        let (_, hm2, _, plan) = plan_for(&g, k).unwrap();
        assert_eq!(plan.cycles.len(), 1);
        let cy = &plan.cycles[0];
        assert_eq!(cy.kind, CycleKind::HMinimalCut);
        assert_eq!(cy.vertices.len(), 4);
        assert!(cy.vertices.len() as u32 <= 3 * k - 1);
        assert!(cy.vertices.iter().all(|&v| hm2.h[v as usize] >= k + 1));
        assert_eq!(plan.counters.invariant_violations, 0);
    }

    #[test]
    fn no_tall_crest_no_cycles() {
        let g = crate::gen::grid(9, 9, true).unwrap();
        let k = 5; // 2k+1 = 11 > max height
        let (_, _, _, plan) = plan_for(&g, k).unwrap();
        assert!(plan.cycles.is_empty());
        assert!(plan.kept_seps.iter().all(|&x| x));
    }

    #[test]
    fn k_too_small_reported() {
        // At k = 1 the ring around the tower plateau needs 4 > 1 vertices.
        let g = crate::gen::tower(10, 4).unwrap();
        match plan_for(&g, 1) {
            Err(DecomposeError::KTooSmall { k: 1, .. }) => {}
            other => panic!("expected KTooSmall, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn chain_plan_disjoint_regions() {
        for (g, k) in [
            (crate::gen::tower_chain(2, 10, 4, 1).unwrap(), 5u32),
            (crate::gen::tower_chain(3, 10, 4, 2).unwrap(), 5),
            (crate::gen::twin_peaks(3, 4).unwrap(), 4),
        ] {
            let (_, hm2, ms, plan) = match plan_for(&g, k) {
                Ok(x) => x,
                Err(DecomposeError::KTooSmall { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            assert_eq!(plan.counters.invariant_violations, 0);
            assert!(!plan.cycles.is_empty());
            // Pairwise disjoint m-sets, all tall crests covered, bounds.
            let mut seen: HashSet<CompId> = HashSet::new();
            for cy in &plan.cycles {
                assert!(cy.vertices.len() as u32 <= 3 * k - 1);
                assert!(cy.vertices.iter().all(|&v| hm2.h[v as usize] >= k + 1));
                for &c in &cy.m_comps {
                    assert!(seen.insert(c), "component {c} in two regions");
                }
            }
            for cr in 0..ms.crests.len() {
                if ms.crests[cr].height == 2 * k + 1 {
                    assert!(plan.comp_cycle[ms.crest_comp[cr]].is_some());
                }
            }
        }
    }
}
