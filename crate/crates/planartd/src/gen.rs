//! Instance generators: grids, random stacked triangulations, and
//! multi-summit mountain chains. All generators emit an embedding; seeds
//! make them deterministic.

use crate::embed::EmbeddedGraph;
use crate::{GraphError, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Axis-aligned grid with row-major ids; optional SW-NE diagonal per cell.
pub fn grid(rows: usize, cols: usize, triangulate: bool) -> Result<EmbeddedGraph, GraphError> {
    if rows == 0 || cols == 0 {
        return Err(GraphError::Precondition("grid needs rows, cols >= 1".into()));
    }
    let cells: BTreeSet<(usize, usize)> = (0..rows.saturating_sub(1))
        .flat_map(|i| (0..cols.saturating_sub(1)).map(move |j| (i, j)))
        .collect();
    if cells.is_empty() {
        // Degenerate: a path (or single vertex).
        let n = rows * cols;
        let mut rotation = vec![Vec::new(); n];
        for v in 0..n - 1 {
            rotation[v].push((v + 1) as VertexId);
            rotation[v + 1].push(v as VertexId);
        }
        return EmbeddedGraph::with_outer_face(rotation, 0);
    }
    polyomino(&cells, cols.saturating_sub(1).max(1), triangulate)
}

/// Triangulated polyomino: the union of unit cells, every cell carrying a
/// SW-NE diagonal when `triangulate` is set. Cell `(i, j)` has corners
/// `(i, j)`, `(i, j+1)`, `(i+1, j)`, `(i+1, j+1)`.
fn polyomino(
    cells: &BTreeSet<(usize, usize)>,
    _width_hint: usize,
    triangulate: bool,
) -> Result<EmbeddedGraph, GraphError> {
    let has = |i: isize, j: isize| i >= 0 && j >= 0 && cells.contains(&(i as usize, j as usize));
    // Collect corner vertices.
    let mut corners: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(i, j) in cells {
        corners.insert((i, j));
        corners.insert((i, j + 1));
        corners.insert((i + 1, j));
        corners.insert((i + 1, j + 1));
    }
    let ids: Vec<(usize, usize)> = corners.iter().copied().collect();
    let id_of = |p: (usize, usize)| ids.binary_search(&p).ok();
    let mut rotation: Vec<Vec<VertexId>> = vec![Vec::new(); ids.len()];
    for (v, &(i, j)) in ids.iter().enumerate() {
        let (i, j) = (i as isize, j as isize);
        // Clockwise on screen coordinates (i downward): N, NE, E, S, SW, W.
        let mut nbrs: Vec<(isize, isize)> = Vec::new();
        if has(i - 1, j - 1) || has(i - 1, j) {
            nbrs.push((i - 1, j));
        }
        if triangulate && has(i - 1, j) {
            nbrs.push((i - 1, j + 1));
        }
        if has(i - 1, j) || has(i, j) {
            nbrs.push((i, j + 1));
        }
        if has(i, j - 1) || has(i, j) {
            nbrs.push((i + 1, j));
        }
        if triangulate && has(i, j - 1) {
            nbrs.push((i + 1, j - 1));
        }
        if has(i - 1, j - 1) || has(i, j - 1) {
            nbrs.push((i, j - 1));
        }
        rotation[v] = nbrs
            .into_iter()
            .map(|(a, b)| id_of((a as usize, b as usize)).expect("corner exists") as VertexId)
            .collect();
    }
    // The outer face is the one along (S-neighbor -> top-left corner).
    let v0 = 0 as VertexId; // ids are sorted, so ids[0] is the NW-most corner
    let (i0, j0) = ids[0];
    let s = id_of((i0 + 1, j0)).expect("south neighbor of NW corner") as VertexId;
    let mut g = EmbeddedGraph::with_outer_face(rotation, 0)?;
    let outer = g
        .face_of(s, v0)
        .ok_or_else(|| GraphError::BadEmbedding("missing boundary edge".into()))?;
    g = EmbeddedGraph::with_outer_face(
        (0..g.n() as VertexId).map(|v| g.rotation(v).to_vec()).collect(),
        outer,
    )?;
    Ok(g)
}

/// Random planar triangulation by inserting each new vertex into a
/// uniformly chosen inner face of the current triangulation.
pub fn triangulation(n: usize, seed: u64) -> Result<EmbeddedGraph, GraphError> {
    if n < 3 {
        return Err(GraphError::Precondition("triangulation needs n >= 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rotation: Vec<Vec<VertexId>> = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
    // Inner faces as (a, b, c) in walk order; the outer face is 0,1,2.
    let mut faces: Vec<[VertexId; 3]> = vec![[0, 2, 1]];
    let insert_after = |rot: &mut Vec<VertexId>, after: VertexId, x: VertexId| {
        let p = rot.iter().position(|&y| y == after).expect("neighbor");
        rot.insert(p + 1, x);
    };
    for x in 3..n as VertexId {
        let fi = rng.random_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(fi);
        // Corner of the face at a spans from c to b, and so on cyclically.
        insert_after(&mut rotation[a as usize], c, x);
        insert_after(&mut rotation[b as usize], a, x);
        insert_after(&mut rotation[c as usize], b, x);
        rotation.push(vec![c, b, a]);
        faces.push([a, b, x]);
        faces.push([b, c, x]);
        faces.push([c, a, x]);
    }
    EmbeddedGraph::new(rotation, &[0, 1, 2])
}

/// Chain of pyramidal summits over a shared coast. The result is a
/// triangulated polyomino with `summits` square blocks joined by
/// one-cell-high corridors; each block contributes one crest and the
/// outerplanarity index equals `height`.
pub fn mountain_chain(
    summits: usize,
    height: u32,
    seed: u64,
) -> Result<EmbeddedGraph, GraphError> {
    if summits < 1 || height < 2 {
        return Err(GraphError::Precondition(
            "mountain chain needs summits >= 1, height >= 2".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = 2 * (height as usize - 1); // block side, in cells
    let mut cells: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut off = 0usize;
    for b in 0..summits {
        for i in 0..w {
            for j in 0..w {
                cells.insert((i, off + j));
            }
        }
        if b + 1 < summits {
            let gap = 2 + (rng.random_range(0..2usize));
            let row = w / 2;
            for j in 0..gap {
                cells.insert((row, off + w + j));
            }
            off += w + gap;
        }
    }
    polyomino(&cells, 0, true)
}

/// Steep single-summit tower: `rings` concentric cycles of `r` vertices,
/// triangulated between consecutive rings, capped by an apex wheel. The
/// outermost ring is the coast, so vertex heights climb one per ring and
/// the treewidth stays near `r` however tall the tower grows.
pub fn tower(rings: usize, r: usize) -> Result<EmbeddedGraph, GraphError> {
    if rings < 1 || r < 4 {
        return Err(GraphError::Precondition("tower needs rings >= 1, r >= 4".into()));
    }
    let n = rings * r + 1;
    let apex = (n - 1) as VertexId;
    let id = |i: usize, j: usize| (i * r + (j % r)) as VertexId;
    let mut rotation: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for i in 0..rings {
        for j in 0..r {
            let mut rot: Vec<VertexId> = Vec::new();
            // Clockwise: radially out, ring backward, inner diagonal,
            // radially in, ring forward, outer diagonal.
            if i > 0 {
                rot.push(id(i - 1, j));
            }
            rot.push(id(i, j + r - 1));
            if i + 1 < rings {
                rot.push(id(i + 1, j + r - 1));
                rot.push(id(i + 1, j));
            } else {
                rot.push(apex);
            }
            rot.push(id(i, j + 1));
            if i > 0 {
                rot.push(id(i - 1, j + 1));
            }
            rotation[id(i, j) as usize] = rot;
        }
    }
    rotation[apex as usize] = (0..r).rev().map(|j| id(rings - 1, j)).collect();
    let outer: Vec<VertexId> = (0..r).map(|j| id(0, j)).collect();
    EmbeddedGraph::new(rotation, &outer)
}

/// Chain of towers over one coast: consecutive bases joined by a
/// triangulated quad, keeping the whole graph biconnected. Ring sizes
/// wobble with the seed.
pub fn tower_chain(
    summits: usize,
    rings: usize,
    r: usize,
    seed: u64,
) -> Result<EmbeddedGraph, GraphError> {
    if summits < 1 {
        return Err(GraphError::Precondition("tower chain needs summits >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rotation: Vec<Vec<VertexId>> = Vec::new();
    let mut bases: Vec<(VertexId, VertexId, VertexId)> = Vec::new(); // (v0, v1, last)
    for _ in 0..summits {
        let rr = r + rng.random_range(0..2usize);
        let t = tower(rings, rr)?;
        let off = rotation.len() as VertexId;
        for v in 0..t.n() as VertexId {
            rotation.push(t.rotation(v).iter().map(|&w| w + off).collect());
        }
        bases.push((off, off + 1, off + rr as VertexId - 1));
    }
    // Join consecutive bases: a1-b1, a2-b2, a1-b2 with a1 = base_i vertex
    // 1, a2 = vertex 0, b1 = base_{i+1} vertex 0 side... use (0,1) of each.
    // Bridge towers i and i+1: quad a0-a1-blast-b0 with diagonal a1-b0,
    // where a0, a1 are ring vertices 1, 2 of tower i and b0, blast are
    // ring vertices 0, r-1 of tower i+1. Edges: {a0,b0}, {a1,b0},
    // {a1,blast}, embedded so the combined outer walk descends around
    // every tower.
    for w in bases.windows(2) {
        let (base_a, _, _) = w[0];
        let (b0, _, blast) = w[1];
        let a0 = base_a + 1;
        let a1 = base_a + 2;
        rotation[a0 as usize].push(b0);
        rotation[a1 as usize].push(blast);
        rotation[a1 as usize].push(b0);
        rotation[b0 as usize].push(a0);
        rotation[b0 as usize].push(a1);
        rotation[blast as usize].insert(0, a1);
    }
    // The outer face is the unique longest one: it walks around every
    // tower while all inner faces are triangles.
    let g = EmbeddedGraph::with_outer_face(rotation, 0)?;
    let outer = (0..g.num_faces() as u32)
        .max_by_key(|&f| g.face_walk(f).len())
        .unwrap();
    EmbeddedGraph::with_outer_face(
        (0..g.n() as VertexId).map(|v| g.rotation(v).to_vec()).collect(),
        outer,
    )
}

/// Two towers on a shared mesa, joined by an elevated pass. The mesa is a
/// 12-vertex cylinder of `mesa_rings` rings; its top disk is a fixed
/// pair-of-pants triangulation around two square holes carrying one
/// `tower_rings`-high tower each. Crest separators between the summits
/// run over the pass, so pseudo shortcuts and composed cycles show up.
pub fn twin_peaks(mesa_rings: usize, tower_rings: usize) -> Result<EmbeddedGraph, GraphError> {
    if mesa_rings < 1 || tower_rings < 1 {
        return Err(GraphError::Precondition(
            "twin peaks need mesa_rings >= 1, tower_rings >= 1".into(),
        ));
    }
    const R: usize = 12;
    let b = mesa_rings;
    let mesa = |i: usize, j: usize| (i * R + (j % R)) as VertexId;
    let n_mesa = b * R;
    // Pants vertices.
    let u = |j: usize| (n_mesa + j % 4) as VertexId;
    let z = |j: usize| (n_mesa + 4 + j % 4) as VertexId;
    let n_pants = n_mesa + 8;
    // Sub-towers: ring t in 1..=tower_rings has 4 vertices, then an apex.
    let per_tower = 4 * tower_rings + 1;
    let sub = |side: usize, t: usize, j: usize| {
        (n_pants + side * per_tower + (t - 1) * 4 + (j % 4)) as VertexId
    };
    let apex = |side: usize| (n_pants + side * per_tower + 4 * tower_rings) as VertexId;
    let n = n_pants + 2 * per_tower;
    let mut rotation: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    // Mesa rings, as in `tower`, with the pants fans at the top ring.
    let w_fans: [&[VertexId]; R] = [
        &[u(0), z(0)],
        &[z(0)],
        &[z(0), z(1)],
        &[z(1)],
        &[z(1), z(2)],
        &[z(2)],
        &[z(2), u(2)],
        &[u(2)],
        &[u(2), u(3)],
        &[u(3)],
        &[u(3), u(0)],
        &[u(0)],
    ];
    for i in 0..b {
        for j in 0..R {
            let mut rot: Vec<VertexId> = Vec::new();
            if i > 0 {
                rot.push(mesa(i - 1, j));
            }
            rot.push(mesa(i, j + R - 1));
            if i + 1 < b {
                rot.push(mesa(i + 1, j + R - 1));
                rot.push(mesa(i + 1, j));
            } else {
                rot.extend(w_fans[j].iter().copied());
            }
            rot.push(mesa(i, j + 1));
            if i > 0 {
                rot.push(mesa(i - 1, j + 1));
            }
            rotation[mesa(i, j) as usize] = rot;
        }
    }
    let w = |j: usize| mesa(b - 1, j % R);
    // Pants rotations; the hole corner sits between the last entry and
    // the first, where each sub-tower plugs in.
    // Hole base rings in sub-tower orientation: (u0, u3, u2, u1) and
    // (z0, z3, z2, z1).
    let base: [[VertexId; 4]; 2] = [[u(0), u(1), u(2), u(3)], [z(0), z(1), z(2), z(3)]];
    rotation[u(0) as usize] = vec![u(1), z(0), w(0), w(11), w(10), u(3)];
    rotation[u(1) as usize] = vec![u(2), z(2), z(3), z(0), u(0)];
    rotation[u(2) as usize] = vec![u(3), w(8), w(7), w(6), z(2), u(1)];
    rotation[u(3) as usize] = vec![u(0), w(10), w(9), w(8), u(2)];
    rotation[z(0) as usize] = vec![u(1), z(3), z(1), w(2), w(1), w(0), u(0)];
    rotation[z(1) as usize] = vec![z(2), w(4), w(3), w(2), z(0)];
    rotation[z(2) as usize] = vec![z(3), u(1), u(2), w(6), w(5), w(4), z(1)];
    rotation[z(3) as usize] = vec![z(0), u(1), z(2)];
    // Sub-towers over the holes.
    for side in 0..2 {
        let ring0 = base[side];
        // Interior entries of the base: right after its ring predecessor.
        for j in 0..4 {
            let prev = ring0[(j + 3) % 4];
            let entries = vec![sub(side, 1, j + 3), sub(side, 1, j)];
            let rot = &mut rotation[ring0[j] as usize];
            let p = rot.iter().position(|&x| x == prev).expect("ring neighbor");
            for (o, e) in entries.into_iter().enumerate() {
                rot.insert(p + 1 + o, e);
            }
        }
        for t in 1..=tower_rings {
            for j in 0..4 {
                let mut rot: Vec<VertexId> = Vec::new();
                rot.push(if t == 1 { ring0[j] } else { sub(side, t - 1, j) });
                rot.push(sub(side, t, j + 3));
                if t < tower_rings {
                    rot.push(sub(side, t + 1, j + 3));
                    rot.push(sub(side, t + 1, j));
                } else {
                    rot.push(apex(side));
                }
                rot.push(sub(side, t, j + 1));
                rot.push(if t == 1 { ring0[(j + 1) % 4] } else { sub(side, t - 1, j + 1) });
                rotation[sub(side, t, j) as usize] = rot;
            }
        }
        rotation[apex(side) as usize] =
            (0..4).rev().map(|j| sub(side, tower_rings, j)).collect();
    }
    let outer: Vec<VertexId> = (0..R).map(|j| mesa(0, j)).collect();
    EmbeddedGraph::new(rotation, &outer)
}

/// Random connected planar graph: a random triangulation with a random
/// subset of non-outer edges removed (connectivity preserved).
pub fn random_planar(n: usize, seed: u64) -> Result<EmbeddedGraph, GraphError> {
    let g = triangulation(n, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut rotation: Vec<Vec<VertexId>> = (0..g.n() as VertexId)
        .map(|v| g.rotation(v).to_vec())
        .collect();
    let mut edges = g.edges();
    // Keep the outer triangle so the outer face survives.
    edges.retain(|&(u, v)| !(u < 3 && v < 3));
    let mut order: Vec<usize> = (0..edges.len()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let connected = |rot: &Vec<Vec<VertexId>>| {
        let mut seen = vec![false; rot.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut cnt = 1;
        while let Some(u) = stack.pop() {
            for &v in &rot[u] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    cnt += 1;
                    stack.push(v as usize);
                }
            }
        }
        cnt == rot.len()
    };
    for idx in order {
        if !rng.random_bool(0.35) {
            continue;
        }
        let (u, v) = edges[idx];
        let mut trial = rotation.clone();
        trial[u as usize].retain(|&x| x != v);
        trial[v as usize].retain(|&x| x != u);
        if connected(&trial) {
            rotation = trial;
        }
    }
    EmbeddedGraph::new(rotation, &[0, 1, 2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::validate_embedding;

    #[test]
    fn grid_1x1() {
        let g = grid(1, 1, false).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn grid_2x2_is_c4() {
        let g = grid(2, 2, false).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 4);
        assert_eq!(g.num_faces(), 2);
    }

    #[test]
    fn grid_3x3_triangulated_counts() {
        let g = grid(3, 3, true).unwrap();
        assert_eq!(g.n(), 9);
        assert_eq!(g.m(), 16); // 12 grid + 4 diagonals
        assert!(g.almost_triangulated());
        assert!(validate_embedding(&g).ok());
    }

    #[test]
    fn grid_outer_face_is_boundary() {
        let g = grid(4, 5, true).unwrap();
        let boundary = g.face_walk(g.outer_face()).len();
        assert_eq!(boundary, 2 * (3 + 4));
    }

    #[test]
    fn triangulation_small() {
        let g = triangulation(3, 0).unwrap();
        assert_eq!(g.m(), 3);
        let g = triangulation(4, 0).unwrap();
        assert_eq!(g.m(), 6); // K4
        let g = triangulation(50, 1).unwrap();
        assert_eq!(g.m(), 3 * 50 - 6);
        let rep = validate_embedding(&g);
        assert!(rep.ok());
        assert!(rep.almost_triangulated);
        assert!(rep.biconnected);
    }

    #[test]
    fn triangulation_deterministic() {
        let a = triangulation(40, 9).unwrap();
        let b = triangulation(40, 9).unwrap();
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn chain_valid() {
        for s in 1..=3 {
            let g = mountain_chain(s, 4, 3).unwrap();
            let rep = validate_embedding(&g);
            assert!(rep.ok(), "{:?}", rep.problems);
            assert!(rep.almost_triangulated);
            assert!(rep.biconnected);
        }
    }

    #[test]
    fn tower_shape() {
        let g = tower(4, 5).unwrap();
        let rep = validate_embedding(&g);
        assert!(rep.ok(), "{:?}", rep.problems);
        assert!(rep.almost_triangulated);
        assert!(rep.biconnected);
        let hm = crate::layering::compute_heights(&g).unwrap();
        for i in 0..4usize {
            for j in 0..5usize {
                assert_eq!(hm.h[i * 5 + j], i as u32 + 1);
            }
        }
        assert_eq!(hm.h[20], 5); // apex
        assert_eq!(crate::layering::find_crests(&g, &hm).len(), 1);
    }

    #[test]
    fn tower_chain_shape() {
        for s in 1..=3usize {
            let g = tower_chain(s, 3, 4, 7).unwrap();
            let rep = validate_embedding(&g);
            assert!(rep.ok(), "{:?}", rep.problems);
            assert!(rep.almost_triangulated, "summits={s}");
            assert!(rep.biconnected, "summits={s}");
            let hm = crate::layering::compute_heights(&g).unwrap();
            assert_eq!(hm.max_height, 4);
            assert_eq!(crate::layering::find_crests(&g, &hm).len(), s);
        }
    }

    #[test]
    fn random_planar_connected_simple() {
        for seed in 0..5 {
            let g = random_planar(12, seed).unwrap();
            let rep = validate_embedding(&g);
            assert!(rep.ok());
            assert!(rep.connected);
        }
    }
}
