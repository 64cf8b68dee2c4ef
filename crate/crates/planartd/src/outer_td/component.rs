//! Per-component tree decompositions with one designated bag per crest
//! separator.
//!
//! The construction works on the extended component: one virtual ladder
//! per separator (rungs between the two paths plus a vertical chain),
//! one-top separators normalized by subdividing the top edge, lowpoint
//! separators normalized by splitting the shared tail. After degree
//! reduction, an up-connected spanning tree containing every ladder chain
//! yields a standard decomposition; the bag of the chain's anchor edge
//! collects copies of all separator vertices through the fundamental
//! cycles of the remaining rungs.

use super::{
    standard_td, up_connected_tree_filtered, ComponentTd, LadderBuilder, Skeleton,
};
use crate::embed::{restrict_edges, EmbeddedGraph};
use crate::layering::HeightMap;
use crate::mountain::{CompId, MountainStructure, SepId};
use crate::{GraphError, VertexId};
use std::collections::{HashMap, HashSet};

/// Decomposes the extended component of `c`. Bags are in global vertex
/// ids; `designated[s]` names a node whose bag holds every vertex of
/// separator `s`, for each `s` with a top edge in the component.
pub fn component_td(
    g: &EmbeddedGraph,
    hm: &HeightMap,
    ms: &MountainStructure,
    c: CompId,
) -> Result<ComponentTd, GraphError> {
    let incident: Vec<SepId> = {
        let mut v: Vec<SepId> = ms.mct_adj[c].iter().map(|&(_, s)| s).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    // Enclosure reduction: strip everything at or below the lowpoint of
    // an enclosing separator, decompose the rest, re-add the tail.
    let strip_below = match ms.encloses[c] {
        Some(s) => {
            let lp = ms.seps[s].lowpoint.expect("enclosure implies a lowpoint");
            hm.h[lp as usize]
        }
        None => 0,
    };
    let strip_tail: Vec<VertexId> = match ms.encloses[c] {
        Some(s) => {
            let x = &ms.seps[s];
            let lp = x.lowpoint.unwrap();
            let i1 = x.p1.iter().position(|&v| v == lp).unwrap();
            x.p1[i1..].to_vec()
        }
        None => Vec::new(),
    };
    let (ext_vertices, ext_edges) = crate::shortcuts::extended_component(ms, c);
    let kept: Vec<VertexId> = ext_vertices
        .iter()
        .copied()
        .filter(|&v| hm.h[v as usize] > strip_below)
        .collect();
    let kept_edges: Vec<(VertexId, VertexId)> = ext_edges
        .iter()
        .copied()
        .filter(|&(a, b)| hm.h[a as usize] > strip_below && hm.h[b as usize] > strip_below)
        .collect();
    if kept.is_empty() {
        return Err(GraphError::Precondition(
            "component vanishes under its enclosure".into(),
        ));
    }
    // Truncated separator paths, in global ids.
    let mut paths: Vec<(SepId, Vec<VertexId>, Vec<VertexId>, bool)> = Vec::new();
    for &s in &incident {
        let x = &ms.seps[s];
        let trunc = |p: &[VertexId]| -> Result<Vec<VertexId>, GraphError> {
            for &v in p {
                if hm.h[v as usize] <= strip_below && !strip_tail.contains(&v) {
                    return Err(GraphError::BadEmbedding(format!(
                        "separator vertex {v} stripped away off the enclosure tail"
                    )));
                }
            }
            Ok(p.iter()
                .copied()
                .filter(|&v| hm.h[v as usize] > strip_below)
                .collect())
        };
        let p1 = trunc(&x.p1)?;
        let p2 = trunc(&x.p2)?;
        if p1.is_empty() || p2.is_empty() || (x.one_top && p2.len() <= 1) {
            return Err(GraphError::BadEmbedding(
                "separator vanished in the stripping".into(),
            ));
        }
        paths.push((s, p1, p2, x.one_top));
    }
    // Tail splits read the coastward corner off the current embedding, so
    // lowpoint separators install before any ladder occupies the coast.
    paths.sort_by_key(|(s, _, _, _)| {
        (ms.seps[*s].lowpoint.is_none(), *s)
    });
    let (sub, origin) = restrict_edges(g, &kept, &kept_edges)?;
    if !sub.connected() {
        return Err(GraphError::BadEmbedding(
            "extended component not connected after stripping".into(),
        ));
    }
    let mut local_of: HashMap<VertexId, VertexId> = HashMap::new();
    for (i, &v) in origin.iter().enumerate() {
        local_of.insert(v, i as VertexId);
    }
    let heights: Vec<u32> = origin
        .iter()
        .map(|&v| hm.h[v as usize] - strip_below)
        .collect();

    // Face catalogue from the structure.
    let far_face = |s: SepId, f: u32| -> bool {
        if f == g.outer_face() || ms.face_min_height[f as usize] <= strip_below {
            return true;
        }
        let fc = ms.comp_of_face[f as usize];
        fc != usize::MAX && fc != c && ms.side_of(s, fc) != ms.side_of(s, c)
    };

    // An outer-walk edge off every separator path, for face recovery.
    let on_path: HashSet<VertexId> = paths
        .iter()
        .flat_map(|(_, p1, p2, _)| p1.iter().chain(p2.iter()))
        .map(|gv| local_of[gv])
        .collect();
    let outer_walk = sub.face_walk(sub.outer_face());
    let outer_edge = outer_walk
        .iter()
        .copied()
        .find(|&(a, b)| !on_path.contains(&a) && !on_path.contains(&b))
        .or_else(|| outer_walk.first().copied());

    let mut lad = Surgeon {
        rotation: (0..sub.n() as VertexId).map(|v| sub.rotation(v).to_vec()).collect(),
        heights,
        orig: origin.clone(),
        is_virtual: vec![false; sub.n()],
        split_base: vec![VertexId::MAX; sub.n()],
        channel_anchor: HashMap::new(),
        ladders: Vec::new(),
        outer_edge,
    };
    for (s, p1g, p2g, one_top) in &paths {
        let p1: Vec<VertexId> = p1g.iter().map(|gv| local_of[gv]).collect();
        let p2: Vec<VertexId> = p2g.iter().map(|gv| local_of[gv]).collect();
        let te = ms.seps[*s].top_edge;
        lad.install_separator(g, *s, p1, p2, *one_top, te, &far_face, None)?;
    }
    let plus_pre = lad.try_build()?;
    // Degree reduction; virtual vertices stay whole.
    let builder = LadderBuilder::from_parts(
        (0..plus_pre.n() as VertexId)
            .map(|v| plus_pre.rotation(v).to_vec())
            .collect(),
        lad.heights.clone(),
        (0..plus_pre.n() as VertexId).collect(),
        lad.is_virtual.clone(),
        lad.outer_edge,
    );
    let (plus, reduce) = builder.degree_reduce(&vec![false; plus_pre.n()])?;
    // Spanning tree over the non-virtual part, then the ladder chains.
    let virt = &reduce.virtual_vertex;
    let mut tree = up_connected_tree_filtered(&plus, &reduce.heights, |a, b| {
        !virt[a as usize] && !virt[b as usize]
    });
    let mut anchor_edges: Vec<(SepId, VertexId, VertexId)> = Vec::new();
    for info in &lad.ladders {
        let xs: Vec<VertexId> =
            info.xs.iter().map(|&x| reduce.first_copy[x as usize]).collect();
        let x1 = xs[0];
        let u_star = plus
            .rotation(x1)
            .iter()
            .copied()
            .find(|&w| reduce.copy_of[w as usize] == info.top_u)
            .ok_or_else(|| GraphError::BadEmbedding("ladder lost its anchor rung".into()))?;
        tree.push((u_star, x1));
        anchor_edges.push((info.sep, u_star, x1));
        for w in xs.windows(2) {
            tree.push((w[0], w[1]));
        }
        if let Some(vp) = info.subdiv_top {
            tree.push((reduce.first_copy[vp as usize], x1));
        }
    }
    {
        // The skeleton must span; report the stranded part otherwise.
        let mut dsu = crate::outer_td::Dsu::new(plus.n());
        for &(a, b) in &tree {
            dsu.union(a as usize, b as usize);
        }
        let r0 = dsu.find(0);
        let stranded: Vec<VertexId> = (1..plus.n())
            .filter(|&v| dsu.find(v) != r0)
            .map(|v| v as VertexId)
            .collect();
        if !stranded.is_empty() {
            let info: Vec<String> = stranded
                .iter()
                .take(6)
                .map(|&v| {
                    let pre = reduce.copy_of[v as usize];
                    let nbrs: Vec<(VertexId, bool)> = plus
                        .rotation(v)
                        .iter()
                        .map(|&w| (w, reduce.virtual_vertex[w as usize]))
                        .collect();
                    format!(
                        "{v}(orig {}, virt {}, h {}, rot {:?})",
                        lad.original_of(pre),
                        reduce.virtual_vertex[v as usize],
                        reduce.heights[v as usize],
                        nbrs
                    )
                })
                .collect();
            return Err(GraphError::BadEmbedding(format!(
                "skeleton forest does not span: stranded {info:?}"
            )));
        }
    }
    let skel = Skeleton {
        tree_edges: tree,
        virtual_vertex: reduce.virtual_vertex.clone(),
        heights: reduce.heights.clone(),
    };
    let mut td = standard_td(&plus, &skel);
    let mut designated: HashMap<SepId, usize> = HashMap::new();
    for (s, a, b) in &anchor_edges {
        let idx = skel
            .tree_edges
            .iter()
            .position(|&(x, y)| (x, y) == (*a, *b) || (x, y) == (*b, *a))
            .expect("anchor edge in tree");
        designated.insert(*s, plus.n() + idx);
    }
    // Replace copies by originals; drop virtual and added vertices.
    for bag in &mut td.bags {
        let mut out: Vec<VertexId> = Vec::with_capacity(bag.len());
        for &cv in bag.iter() {
            let pre = reduce.copy_of[cv as usize];
            let base = lad.original_of(pre);
            if base != VertexId::MAX {
                out.push(base);
            }
        }
        out.sort_unstable();
        out.dedup();
        *bag = out;
    }
    if !strip_tail.is_empty() {
        for bag in &mut td.bags {
            bag.extend(strip_tail.iter().copied());
            bag.sort_unstable();
            bag.dedup();
        }
    }
    for &s in &incident {
        let node = designated[&s];
        for v in ms.seps[s].vertices() {
            if !td.bags[node].contains(&v) {
                return Err(GraphError::BadEmbedding(format!(
                    "designated bag for separator {s} misses vertex {v}"
                )));
            }
        }
    }
    Ok(ComponentTd { td, designated })
}

struct LadderInfo {
    sep: SepId,
    /// Rung vertices x_1..x_q in pre-reduction ids, top down.
    xs: Vec<VertexId>,
    /// Pre-reduction id of the P1 top vertex.
    top_u: VertexId,
    /// The subdivision vertex of a one-top separator, if any.
    subdiv_top: Option<VertexId>,
    /// Orientation the ladder was installed with.
    orient: bool,
}

/// Rotation-system surgeon: subdivision, tail splitting and ladder
/// insertion over the extended component.
struct Surgeon {
    rotation: Vec<Vec<VertexId>>,
    heights: Vec<u32>,
    /// Local id -> global id; MAX for added vertices.
    orig: Vec<VertexId>,
    is_virtual: Vec<bool>,
    /// For split copies: the local id they were split from.
    split_base: Vec<VertexId>,
    /// For split vertices and their copies: the rotation neighbor after
    /// which the rung is embedded (the channel slot).
    channel_anchor: HashMap<VertexId, VertexId>,
    ladders: Vec<LadderInfo>,
    outer_edge: Option<(VertexId, VertexId)>,
}

impl Surgeon {
    fn add_vertex(&mut self, height: u32, virt: bool) -> VertexId {
        let v = self.rotation.len() as VertexId;
        self.rotation.push(Vec::new());
        self.heights.push(height);
        self.orig.push(VertexId::MAX);
        self.is_virtual.push(virt);
        self.split_base.push(VertexId::MAX);
        v
    }

    fn pos(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.rotation[u as usize].iter().position(|&x| x == v)
    }

    /// Global id behind a local vertex, resolving split copies (chains of
    /// splits resolve to the root).
    fn original_of(&self, v: VertexId) -> VertexId {
        self.orig[self.root_base(v) as usize]
    }

    fn root_base(&self, mut v: VertexId) -> VertexId {
        while self.split_base[v as usize] != VertexId::MAX {
            v = self.split_base[v as usize];
        }
        v
    }

    /// Resolves a path of base ids onto the current graph, following
    /// edges through earlier splits.
    fn resolve_path(&self, path: &[VertexId]) -> Result<Vec<VertexId>, GraphError> {
        let mut out: Vec<VertexId> = Vec::with_capacity(path.len());
        for (i, &base) in path.iter().enumerate() {
            let candidates = self.copies_of(base);
            if i == 0 {
                out.push(candidates[0]);
                continue;
            }
            let prev = out[i - 1];
            let found = candidates
                .iter()
                .copied()
                .find(|&cand| self.pos(prev, cand).is_some())
                .ok_or_else(|| {
                    GraphError::BadEmbedding(format!(
                        "separator path loses vertex {base} across earlier splits"
                    ))
                })?;
            out.push(found);
        }
        if out.len() >= 2 && self.pos(out[0], out[1]).is_none() {
            let fixed = self
                .copies_of(path[0])
                .into_iter()
                .find(|&cand| self.pos(cand, out[1]).is_some())
                .ok_or_else(|| GraphError::BadEmbedding("path head unresolvable".into()))?;
            out[0] = fixed;
        }
        Ok(out)
    }

    fn copies_of(&self, base: VertexId) -> Vec<VertexId> {
        let root = self.root_base(base);
        let mut v = vec![root];
        for i in 0..self.split_base.len() {
            if self.split_base[i] != VertexId::MAX && self.root_base(i as VertexId) == root {
                v.push(i as VertexId);
            }
        }
        v
    }

    #[allow(clippy::too_many_arguments)]
    fn install_separator(
        &mut self,
        g: &EmbeddedGraph,
        s: SepId,
        p1_base: Vec<VertexId>,
        p2_base: Vec<VertexId>,
        one_top: bool,
        top_edge_g: (VertexId, VertexId),
        far_face: &dyn Fn(SepId, u32) -> bool,
        forced: Option<bool>,
    ) -> Result<(), GraphError> {
        // Ladder orientation from the far face of the top edge: with the
        // far region on the face right of (p2-top -> p1-top), rungs go
        // after the predecessor entry on the p1 side and before it on the
        // p2 side; mirrored otherwise. A twisted install shows up as a
        // height change, so validate and retry mirrored if needed.
        let (ga, gb) = top_edge_g;
        let fa = g.face_of(ga, gb);
        let fb = g.face_of(gb, ga);
        let orient_a = match (fa.map(|f| far_face(s, f)), fb.map(|f| far_face(s, f))) {
            (_, Some(true)) => true,
            (Some(true), _) => false,
            _ => {
                return Err(GraphError::BadEmbedding(format!(
                    "top edge of separator {s} has no far side"
                )))
            }
        };
        let snapshot = (
            self.rotation.clone(),
            self.heights.clone(),
            self.orig.clone(),
            self.is_virtual.clone(),
            self.split_base.clone(),
            self.outer_edge,
            self.ladders.len(),
        );
        let order = match forced {
            Some(bit) => vec![bit],
            None => vec![orient_a, !orient_a],
        };
        let mut last_err = None;
        for &orient in &order {
            match self
                .install_oriented(s, p1_base.clone(), p2_base.clone(), one_top, orient)
                .and_then(|_| self.validate_planar())
            {
                Ok(()) => {
                    self.ladders.last_mut().expect("just installed").orient = orient;
                    return Ok(());
                }
                Err(e) => {
                    last_err = Some(e);
                    self.rotation = snapshot.0.clone();
                    self.heights = snapshot.1.clone();
                    self.orig = snapshot.2.clone();
                    self.is_virtual = snapshot.3.clone();
                    self.split_base = snapshot.4.clone();
                    self.outer_edge = snapshot.5;
                    self.ladders.truncate(snapshot.6);
                    self.channel_anchor.clear();
                }
            }
        }
        Err(last_err.unwrap())
    }

    /// Planarity must hold after every install.
    fn validate_planar(&self) -> Result<(), GraphError> {
        let cur = self.try_build()?;
        let comps = cur.connected_components().len().max(1);
        if cur.n() as i64 - cur.m() as i64 + cur.num_faces() as i64 != 1 + comps as i64
            || comps != 1
        {
            return Err(GraphError::BadEmbedding("ladder install broke planarity".into()));
        }
        Ok(())
    }

    fn install_oriented(
        &mut self,
        s: SepId,
        p1_base: Vec<VertexId>,
        p2_base: Vec<VertexId>,
        one_top: bool,
        orient_a: bool,
    ) -> Result<(), GraphError> {
        let p1 = self.resolve_path(&p1_base)?;
        let mut p2 = self.resolve_path(&p2_base)?;
        let mut subdiv_top = None;
        if one_top && p1[0] == p2[0] {
            // Normalize a shared top: a virtual vertex beside the top
            // edge in the far face, joined to both its endpoints. The
            // original edge stays, keeping the non-virtual part connected.
            let (u1, v2) = (p2[0], p2[1]);
            let vp = self.add_vertex(self.heights[u1 as usize], true);
            self.place_rung(vp, u1, v2, orient_a)?;
            self.place_rung(vp, v2, u1, !orient_a)?;
            self.rotation[vp as usize] = vec![u1, v2];
            p2[0] = vp;
            subdiv_top = Some(vp);
        }
        // Split the shared tail below a lowpoint, on the current embedding.
        let tail_at = p1.iter().skip(1).position(|v| p2.contains(v)).map(|i| i + 1);
        if let Some(j1) = tail_at {
            let lp = p1[j1];
            let j2 = p2
                .iter()
                .position(|&v| v == lp)
                .ok_or_else(|| GraphError::BadEmbedding("lowpoint not on p2".into()))?;
            if p1[j1..] != p2[j2..] || j2 == 0 {
                return Err(GraphError::BadEmbedding(
                    "separator paths meet without sharing their tail".into(),
                ));
            }
            let tail: Vec<VertexId> = p1[j1..].to_vec();
            let copies = self.split_tail(&tail, p1[j1 - 1], p2[j2 - 1])?;
            p2.truncate(j2);
            p2.extend(copies);
        }
        let q = p1.len();
        if p2.len() != q {
            return Err(GraphError::BadEmbedding(format!(
                "separator paths disagree in length: {q} vs {}",
                p2.len()
            )));
        }
        let mut xs: Vec<VertexId> = Vec::with_capacity(q);
        for i in 0..q {
            let (u, v) = (p1[i], p2[i]);
            if u == v {
                return Err(GraphError::BadEmbedding(
                    "shared separator vertex survived the split".into(),
                ));
            }
            let h = self.heights[u as usize];
            let x = self.add_vertex(h, true);
            let ref_u = if i == 0 { p2[0] } else { p1[i - 1] };
            let ref_v = if i == 0 { p1[0] } else { p2[i - 1] };
            self.place_rung(x, u, ref_u, orient_a)?;
            self.place_rung(x, v, ref_v, !orient_a)?;
            xs.push(x);
        }
        for i in 0..q {
            let mut rot = vec![p1[i]];
            let (down, up) = if orient_a {
                (xs.get(i + 1).copied(), i.checked_sub(1).map(|j| xs[j]))
            } else {
                (i.checked_sub(1).map(|j| xs[j]), xs.get(i + 1).copied())
            };
            if let Some(w) = up {
                rot.push(w);
            }
            rot.push(p2[i]);
            if let Some(w) = down {
                rot.push(w);
            }
            self.rotation[xs[i] as usize] = rot;
        }
        self.ladders.push(LadderInfo { sep: s, xs, top_u: p1[0], subdiv_top, orient: orient_a });
        // Channel slots belong to this separator's split only.
        self.channel_anchor.clear();
        Ok(())
    }

    /// Embeds a rung endpoint at `v`: right after the reference path
    /// entry when `after` holds, right before it otherwise. Split
    /// vertices use their recorded channel slot instead.
    fn place_rung(
        &mut self,
        x: VertexId,
        v: VertexId,
        reference: VertexId,
        after: bool,
    ) -> Result<(), GraphError> {
        if let Some(&a) = self.channel_anchor.get(&v) {
            self.insert_after(v, a, x);
            return Ok(());
        }
        let Some(p) = self.pos(v, reference) else {
            return Err(GraphError::BadEmbedding(format!(
                "rung reference {reference} missing at vertex {v}"
            )));
        };
        if after {
            self.rotation[v as usize].insert(p + 1, x);
        } else {
            self.rotation[v as usize].insert(p, x);
        }
        Ok(())
    }

    fn insert_after(&mut self, v: VertexId, after: VertexId, x: VertexId) {
        let p = self.pos(v, after).expect("anchor neighbor present");
        self.rotation[v as usize].insert(p + 1, x);
    }

    /// Splits the shared tail of a lowpoint separator. Tail vertices keep
    /// their id on the P1 side and spawn a copy for the P2 side; returns
    /// the copies, top down.
    ///
    /// All geometry is read off the current embedding: the coastward
    /// corner is the one on the current outer face (earlier channels have
    /// already merged into it), the enclosed slot is the predecessor arc
    /// away from the successor, and the fan between predecessor and
    /// successor keeps its side all the way down because it shares the
    /// face right of the path edge.
    fn split_tail(
        &mut self,
        tail: &[VertexId],
        pred_u: VertexId,
        pred_v: VertexId,
    ) -> Result<Vec<VertexId>, GraphError> {
        let cur = self.try_build()?;
        let m = tail.len();
        let mut u_fans: Vec<Vec<VertexId>> = Vec::with_capacity(m);
        let mut v_fans: Vec<Vec<VertexId>> = Vec::with_capacity(m);
        let mut ps_is_v = false;
        for i in 0..m {
            let t = tail[i];
            let rot = self.rotation[t as usize].clone();
            let d = rot.len();
            let posn = |w: VertexId| -> Result<usize, GraphError> {
                rot.iter().position(|&x| x == w).ok_or_else(|| {
                    GraphError::BadEmbedding(format!("tail vertex {t} misses neighbor {w}"))
                })
            };
            let arc = |from: usize, to: usize| -> Vec<VertexId> {
                let mut out = Vec::new();
                let mut jj = (from + 1) % d;
                while jj != to {
                    out.push(rot[jj]);
                    jj = (jj + 1) % d;
                }
                out
            };
            // The coastward corner: the slot after position j lies on the
            // current outer face.
            let outer_slot = |surgeon: &Surgeon| -> Option<usize> {
                let _ = surgeon;
                (0..d).find(|&j| cur.face_of(rot[j], t) == Some(cur.outer_face()))
            };
            let pu = posn(if i == 0 { pred_u } else { tail[i - 1] })?;
            if i == 0 {
                let pv = posn(pred_v)?;
                let (sp, pseudo0) = if m > 1 {
                    (posn(tail[1])?, false)
                } else {
                    (
                        outer_slot(self).ok_or_else(|| {
                            let fs: Vec<_> = rot.iter().map(|&b| cur.face_of(b, t)).collect();
                            GraphError::BadEmbedding(format!(
                                "tail end {t} (orig {}) has no coastward corner; outer {} rot {rot:?} faces {fs:?}",
                                self.original_of(t), cur.outer_face()
                            ))
                        })?,
                        true,
                    )
                };
                let corner_in = |from: usize, to: usize, j: usize| -> bool {
                    let mut p = from;
                    loop {
                        if p == j {
                            return true;
                        }
                        p = (p + 1) % d;
                        if p == to {
                            return false;
                        }
                    }
                };
                let succ_in_ab = if pseudo0 {
                    corner_in(pu, pv, sp)
                } else {
                    arc(pu, pv).contains(&rot[sp])
                };
                let enclosed_ab = !succ_in_ab;
                if enclosed_ab && !arc(pu, pv).is_empty()
                    || !enclosed_ab && !arc(pv, pu).is_empty()
                {
                    return Err(GraphError::BadEmbedding(format!(
                        "lowpoint {t} has an occupied enclosed corner"
                    )));
                }
                let (u_fan, v_fan) = if enclosed_ab {
                    if pseudo0 {
                        (arc(sp, pu), arc(pv, (sp + 1) % d))
                    } else {
                        (arc(sp, pu), arc(pv, sp))
                    }
                } else if pseudo0 {
                    (arc(pu, (sp + 1) % d), arc(sp, pv))
                } else {
                    (arc(pu, sp), arc(sp, pv))
                };
                ps_is_v = enclosed_ab;
                u_fans.push(u_fan);
                v_fans.push(v_fan);
            } else {
                let (succ_pos, pseudo) = if i + 1 < m {
                    (posn(tail[i + 1])?, false)
                } else {
                    (
                        outer_slot(self).ok_or_else(|| {
                            GraphError::BadEmbedding(format!(
                                "tail end {t} has no coastward corner"
                            ))
                        })?,
                        true,
                    )
                };
                let f_ps;
                let f_sp;
                if !pseudo {
                    f_ps = arc(pu, succ_pos);
                    f_sp = arc(succ_pos, pu);
                } else {
                    let mut f1 = Vec::new();
                    let mut jj = (pu + 1) % d;
                    loop {
                        if jj == (succ_pos + 1) % d {
                            break;
                        }
                        f1.push(rot[jj]);
                        jj = (jj + 1) % d;
                    }
                    let mut f2 = Vec::new();
                    let mut kk = (succ_pos + 1) % d;
                    while kk != pu {
                        f2.push(rot[kk]);
                        kk = (kk + 1) % d;
                    }
                    f_ps = f1;
                    f_sp = f2;
                }
                if ps_is_v {
                    u_fans.push(f_sp);
                    v_fans.push(f_ps);
                } else {
                    u_fans.push(f_ps);
                    v_fans.push(f_sp);
                }
            }
        }
        // Surgery.
        let mut copies: Vec<VertexId> = Vec::with_capacity(m);
        for &t in tail {
            let nv = self.add_vertex(self.heights[t as usize], false);
            self.split_base[nv as usize] = t;
            copies.push(nv);
        }
        for i in 0..m {
            let t = tail[i];
            let nv = copies[i];
            let pu = if i == 0 { pred_u } else { tail[i - 1] };
            let keep_u: HashSet<VertexId> = u_fans[i].iter().copied().collect();
            let keep_v: HashSet<VertexId> = v_fans[i].iter().copied().collect();
            let old = self.rotation[t as usize].clone();
            let d = old.len();
            let start = old.iter().position(|&x| x == pu).unwrap();
            let mut ru: Vec<VertexId> = Vec::new();
            let mut rv: Vec<VertexId> = Vec::new();
            let mut anchor_u: Option<VertexId> = None;
            let mut anchor_v: Option<VertexId> = None;
            let mut last_u: Option<VertexId> = None;
            let mut last_v: Option<VertexId> = None;
            for k in 0..d {
                let w = old[(start + k) % d];
                let this_u: Option<VertexId>;
                let this_v: Option<VertexId>;
                if w == pu {
                    this_u = Some(pu);
                    this_v = None;
                } else if i + 1 < m && w == tail[i + 1] {
                    this_u = Some(w);
                    this_v = Some(copies[i + 1]);
                } else if i == 0 && w == pred_v {
                    this_u = None;
                    this_v = Some(pred_v);
                } else if keep_u.contains(&w) {
                    this_u = Some(w);
                    this_v = None;
                } else if keep_v.contains(&w) {
                    this_u = None;
                    this_v = Some(w);
                } else {
                    return Err(GraphError::BadEmbedding(format!(
                        "unclassified neighbor {w} at split vertex {t}"
                    )));
                }
                if let Some(x) = this_u {
                    ru.push(x);
                    last_u = Some(x);
                } else if anchor_u.is_none() {
                    anchor_u = last_u;
                }
                if let Some(x) = this_v {
                    rv.push(x);
                    last_v = Some(x);
                } else if anchor_v.is_none() && last_v.is_some() {
                    anchor_v = last_v;
                }
            }
            if i > 0 {
                rv.insert(0, copies[i - 1]);
            }
            let anchor_u = anchor_u.or(last_u).ok_or_else(|| {
                GraphError::BadEmbedding(format!("split vertex {t} kept no neighbors"))
            })?;
            let anchor_v = anchor_v.or(last_v).or({
                if i > 0 {
                    Some(copies[i - 1])
                } else {
                    None
                }
            })
            .ok_or_else(|| {
                GraphError::BadEmbedding(format!("split copy of {t} kept no neighbors"))
            })?;
            self.rotation[t as usize] = ru;
            self.rotation[nv as usize] = rv;
            for &w in &v_fans[i] {
                if let Some(p) = self.pos(w, t) {
                    self.rotation[w as usize][p] = nv;
                    if self.outer_edge == Some((w, t)) {
                        self.outer_edge = Some((w, nv));
                    } else if self.outer_edge == Some((t, w)) {
                        self.outer_edge = Some((nv, w));
                    }
                }
            }
            if i == 0 {
                if let Some(p) = self.pos(pred_v, t) {
                    self.rotation[pred_v as usize][p] = nv;
                }
                if self.outer_edge == Some((pred_v, t)) {
                    self.outer_edge = Some((pred_v, nv));
                } else if self.outer_edge == Some((t, pred_v)) {
                    self.outer_edge = Some((nv, pred_v));
                }
            }
            self.channel_anchor.insert(t, anchor_u);
            self.channel_anchor.insert(nv, anchor_v);
        }
        Ok(copies)
    }

    fn try_build(&self) -> Result<EmbeddedGraph, GraphError> {
        match self.outer_edge {
            Some((u, v)) => {
                let tmp = EmbeddedGraph::with_outer_face(self.rotation.clone(), 0)?;
                let outer = tmp.face_of(u, v).ok_or_else(|| {
                    GraphError::BadEmbedding("outer edge vanished during surgery".into())
                })?;
                EmbeddedGraph::with_outer_face(self.rotation.clone(), outer)
            }
            None => EmbeddedGraph::with_outer_face(self.rotation.clone(), 0),
        }
    }
}
