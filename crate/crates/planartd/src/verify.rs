//! Validators and brute-force oracles: exact treewidth for tiny graphs,
//! tree-decomposition checking, separator tests and ridge depths.

use crate::embed::EmbeddedGraph;
use crate::layering::HeightMap;
use crate::outer_td::TreeDecomposition;
use crate::{GraphError, VertexId};
use std::collections::HashMap;

/// Outcome of checking a tree decomposition against a graph.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub ok: bool,
    pub vertex_coverage: bool,
    pub edge_coverage: bool,
    pub subtree_connectivity: bool,
    pub width: i64,
    pub offending: Vec<String>,
}

/// Exact check of the three tree-decomposition clauses.
pub fn validate_td(g: &EmbeddedGraph, td: &TreeDecomposition) -> ValidationReport {
    validate_td_edges(g.n(), &g.edges(), td)
}

/// Same check against an explicit vertex count and edge list.
pub fn validate_td_edges(
    n: usize,
    edges: &[(VertexId, VertexId)],
    td: &TreeDecomposition,
) -> ValidationReport {
    let mut offending = Vec::new();
    let bags = td.bags.len().max(1);
    // The td tree must be a tree.
    if !td.edges.is_empty() || bags > 1 {
        let mut dsu = crate::outer_td::Dsu::new(bags);
        let mut joined = 0;
        for &(a, b) in &td.edges {
            if a >= bags || b >= bags {
                offending.push(format!("tree edge ({a},{b}) out of range"));
                continue;
            }
            if dsu.union(a, b) {
                joined += 1;
            } else {
                offending.push(format!("tree edge ({a},{b}) closes a cycle"));
            }
        }
        if joined + 1 != bags {
            offending.push(format!(
                "decomposition tree is not connected: {} bags, {} effective edges",
                bags, joined
            ));
        }
    }
    let mut in_bag = vec![false; n];
    for b in &td.bags {
        for &v in b {
            if (v as usize) < n {
                in_bag[v as usize] = true;
            } else {
                offending.push(format!("bag vertex {v} out of range"));
            }
        }
    }
    let vertex_coverage = in_bag.iter().all(|&x| x);
    if !vertex_coverage {
        let missing: Vec<usize> =
            (0..n).filter(|&v| !in_bag[v]).take(5).collect();
        offending.push(format!("vertices not in any bag: {missing:?}"));
    }
    let mut edge_coverage = true;
    for &(u, v) in edges {
        if !td.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            edge_coverage = false;
            offending.push(format!("edge {{{u},{v}}} not inside any bag"));
            if offending.len() > 16 {
                break;
            }
        }
    }
    // Per-vertex subtrees: count occurrences and same-vertex tree edges.
    let mut occ = vec![0i64; n];
    for b in &td.bags {
        for &v in b {
            if (v as usize) < n {
                occ[v as usize] += 1;
            }
        }
    }
    let mut link = vec![0i64; n];
    for &(a, b) in &td.edges {
        if a >= td.bags.len() || b >= td.bags.len() {
            continue;
        }
        for &v in &td.bags[a] {
            if (v as usize) < n && td.bags[b].contains(&v) {
                link[v as usize] += 1;
            }
        }
    }
    // With a tree, the nodes containing v form a subtree iff the induced
    // subgraph has occ-1 edges (forests always have <= occ-1).
    let mut subtree_connectivity = true;
    for v in 0..n {
        if occ[v] > 0 && link[v] != occ[v] - 1 {
            subtree_connectivity = false;
            offending.push(format!(
                "vertex {v} appears in {} bags joined by {} tree edges",
                occ[v], link[v]
            ));
            if offending.len() > 24 {
                break;
            }
        }
    }
    let ok = vertex_coverage && edge_coverage && subtree_connectivity && offending.is_empty();
    ValidationReport {
        ok,
        vertex_coverage,
        edge_coverage,
        subtree_connectivity,
        width: td.width(),
        offending,
    }
}

const ORACLE_LIMIT: usize = 15;

/// Exact treewidth by dynamic programming over elimination orders,
/// memoized on eliminated subsets. Limited to 15 vertices.
pub fn exact_treewidth(g: &EmbeddedGraph) -> Result<u32, GraphError> {
    let adj: Vec<u32> = (0..g.n() as VertexId)
        .map(|v| {
            g.rotation(v)
                .iter()
                .fold(0u32, |acc, &u| acc | (1 << u))
        })
        .collect();
    exact_treewidth_adj(&adj)
}

/// Exact treewidth from adjacency bitmasks.
pub fn exact_treewidth_adj(adj: &[u32]) -> Result<u32, GraphError> {
    let n = adj.len();
    if n > ORACLE_LIMIT {
        return Err(GraphError::Precondition(format!(
            "exact treewidth limited to {ORACLE_LIMIT} vertices, got {n}"
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    // Degree of v when eliminated after the set `done`: neighbors of the
    // connected component of v within done+{v}, measured outside.
    fn elim_degree(adj: &[u32], done: u32, v: usize) -> u32 {
        let inside = done | (1 << v);
        let mut comp = 1u32 << v;
        let mut frontier = comp;
        let mut out = 0u32;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let u = f.trailing_zeros() as usize;
                f &= f - 1;
                out |= adj[u] & !inside;
                next |= adj[u] & inside & !comp;
            }
            comp |= next;
            frontier = next;
        }
        out.count_ones()
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let mut memo: HashMap<u32, u32> = HashMap::new();
    memo.insert(0, 0);
    // Iterate subsets in increasing popcount via explicit frontier layers.
    let mut layer: Vec<u32> = vec![0];
    for _ in 0..n {
        let mut next_layer: HashMap<u32, u32> = HashMap::new();
        for &done in &layer {
            let base = memo[&done];
            let mut rest = full & !done;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let cost = base.max(elim_degree(adj, done, v));
                let key = done | (1 << v);
                match next_layer.get_mut(&key) {
                    Some(best) => {
                        if cost < *best {
                            *best = cost;
                        }
                    }
                    None => {
                        next_layer.insert(key, cost);
                    }
                }
            }
        }
        layer = next_layer.keys().copied().collect();
        layer.sort_unstable();
        memo.extend(next_layer);
    }
    Ok(memo[&full])
}

/// Does `s` disconnect `a` from `b`? Strong disconnection additionally
/// requires `s` to avoid both sets.
pub fn check_separator(
    g: &EmbeddedGraph,
    s: &[VertexId],
    a: &[VertexId],
    b: &[VertexId],
    strong: bool,
) -> bool {
    let n = g.n();
    let mut blocked = vec![false; n];
    for &v in s {
        blocked[v as usize] = true;
    }
    if strong && (a.iter().any(|&v| blocked[v as usize]) || b.iter().any(|&v| blocked[v as usize]))
    {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack: Vec<VertexId> = Vec::new();
    for &v in a {
        if !blocked[v as usize] && !seen[v as usize] {
            seen[v as usize] = true;
            stack.push(v);
        }
    }
    while let Some(u) = stack.pop() {
        for &w in g.rotation(u) {
            if !blocked[w as usize] && !seen[w as usize] {
                seen[w as usize] = true;
                stack.push(w);
            }
        }
    }
    !b.iter().any(|&v| seen[v as usize])
}

/// Largest `d` such that `s` and `t` stay connected using only vertices of
/// height at least `d`. Verification-only descending scan.
pub fn ridge_depth(
    g: &EmbeddedGraph,
    hm: &HeightMap,
    s: VertexId,
    t: VertexId,
) -> Result<u32, GraphError> {
    if s == t {
        return Ok(hm.h[s as usize]);
    }
    let cap = hm.h[s as usize].min(hm.h[t as usize]);
    for d in (1..=cap).rev() {
        let mut seen = vec![false; g.n()];
        if hm.h[s as usize] < d {
            continue;
        }
        seen[s as usize] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in g.rotation(u) {
                if hm.h[w as usize] >= d && !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        if seen[t as usize] {
            return Ok(d);
        }
    }
    Err(GraphError::Precondition(format!(
        "vertices {s} and {t} are disconnected"
    )))
}

/// Minimum vertex cut strongly separating `a` from `b` (vertices of
/// `a`/`b` excluded from the cut). Unit-capacity flow via vertex
/// splitting; `None` when `a` and `b` touch or cannot be separated.
pub fn min_vertex_cut(
    g: &EmbeddedGraph,
    a: &[VertexId],
    b: &[VertexId],
) -> Option<Vec<VertexId>> {
    let n = g.n();
    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    for &v in a {
        in_a[v as usize] = true;
    }
    for &v in b {
        if in_a[v as usize] {
            return None;
        }
        in_b[v as usize] = true;
    }
    for &v in a {
        for &w in g.rotation(v) {
            if in_b[w as usize] {
                return None; // adjacent sets cannot be strongly separated
            }
        }
    }
    let eligible: Vec<bool> = (0..n).map(|v| !in_a[v] && !in_b[v]).collect();
    let cut = unit_vertex_cut(
        n,
        |v| g.rotation(v).to_vec(),
        &in_a,
        &in_b,
        &eligible,
        usize::MAX,
    )?;
    Some(cut)
}

/// Shared unit-capacity vertex-cut engine: finds a minimum set of
/// `eligible` vertices whose removal disconnects the sources from the
/// sinks, or `None` if more than `limit` augmentations are needed or no
/// cut exists. The returned cut is the one closest to the source side.
pub fn unit_vertex_cut(
    n: usize,
    neighbors: impl Fn(VertexId) -> Vec<VertexId>,
    source: &[bool],
    sink: &[bool],
    eligible: &[bool],
    limit: usize,
) -> Option<Vec<VertexId>> {
    // Node splitting: node 2v = v_in, 2v+1 = v_out. Residual capacities as
    // adjacency maps (unit capacities, small graphs).
    let mut cap: Vec<HashMap<usize, i32>> = vec![HashMap::new(); 2 * n];
    let add = |cap: &mut Vec<HashMap<usize, i32>>, x: usize, y: usize, c: i32| {
        *cap[x].entry(y).or_insert(0) += c;
        cap[y].entry(x).or_insert(0);
    };
    const INF: i32 = i32::MAX / 4;
    for v in 0..n {
        let c = if eligible[v] { 1 } else { INF };
        add(&mut cap, 2 * v, 2 * v + 1, c);
        for w in neighbors(v as VertexId) {
            add(&mut cap, 2 * v + 1, 2 * (w as usize), INF);
        }
    }
    let mut flow = 0usize;
    loop {
        // BFS augmenting path from any source-out to any sink-in.
        let mut pred: Vec<Option<usize>> = vec![None; 2 * n];
        let mut queue = std::collections::VecDeque::new();
        for v in 0..n {
            if source[v] {
                pred[2 * v] = Some(2 * v);
                queue.push_back(2 * v);
            }
        }
        let mut reached: Option<usize> = None;
        'bfs: while let Some(x) = queue.pop_front() {
            let keys: Vec<usize> = cap[x].iter().filter(|&(_, &c)| c > 0).map(|(&y, _)| y).collect();
            for y in keys {
                if pred[y].is_none() {
                    pred[y] = Some(x);
                    if y % 2 == 0 && sink[y / 2] {
                        reached = Some(y);
                        break 'bfs;
                    }
                    queue.push_back(y);
                }
            }
        }
        match reached {
            None => break,
            Some(t) => {
                flow += 1;
                if flow > limit {
                    return None;
                }
                let mut y = t;
                while let Some(x) = pred[y] {
                    if x == y {
                        break;
                    }
                    *cap[x].get_mut(&y).unwrap() -= 1;
                    *cap[y].get_mut(&x).unwrap() += 1;
                    y = x;
                }
            }
        }
    }
    // Residual reachability from sources gives the source-closest cut.
    let mut reach = vec![false; 2 * n];
    let mut stack: Vec<usize> = Vec::new();
    for v in 0..n {
        if source[v] && !reach[2 * v] {
            reach[2 * v] = true;
            stack.push(2 * v);
        }
    }
    while let Some(x) = stack.pop() {
        for (&y, &c) in &cap[x] {
            if c > 0 && !reach[y] {
                reach[y] = true;
                stack.push(y);
            }
        }
    }
    for v in 0..n {
        if sink[v] && reach[2 * v] {
            return None; // sources and sinks touch through non-eligible land
        }
    }
    let cut: Vec<VertexId> = (0..n)
        .filter(|&v| eligible[v] && reach[2 * v] && !reach[2 * v + 1])
        .map(|v| v as VertexId)
        .collect();
    Some(cut)
}

/// All simple paths between two vertices, restricted to an allowed set;
/// exhaustive, for oracle use on tiny graphs.
pub fn shortest_restricted_path_len(
    g: &EmbeddedGraph,
    s: VertexId,
    t: VertexId,
    allowed: &[bool],
) -> Option<usize> {
    if !allowed[s as usize] || !allowed[t as usize] {
        return None;
    }
    let mut dist = vec![usize::MAX; g.n()];
    dist[s as usize] = 0;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        if u == t {
            return Some(dist[t as usize]);
        }
        for &w in g.rotation(u) {
            if allowed[w as usize] && dist[w as usize] == usize::MAX {
                dist[w as usize] = dist[u as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::EmbeddedGraph;
    use crate::layering::compute_heights;

    fn k4() -> EmbeddedGraph {
        EmbeddedGraph::new(
            vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]],
            &[0, 1, 2],
        )
        .unwrap()
    }

    #[test]
    fn trivial_td_valid() {
        let g = k4();
        let td = TreeDecomposition::trivial(vec![0, 1, 2, 3]);
        let rep = validate_td(&g, &td);
        assert!(rep.ok);
        assert_eq!(rep.width, 3);
    }

    #[test]
    fn missing_edge_named() {
        let g = k4();
        let td = TreeDecomposition {
            bags: vec![vec![0, 1, 2], vec![1, 2, 3]],
            edges: vec![(0, 1)],
        };
        let rep = validate_td(&g, &td);
        assert!(!rep.ok);
        assert!(!rep.edge_coverage);
        assert!(rep.offending.iter().any(|s| s.contains("{0,3}")));
    }

    #[test]
    fn disconnected_subtree_detected() {
        let g = k4();
        let td = TreeDecomposition {
            bags: vec![vec![0, 1, 3], vec![1, 2], vec![0, 2, 3]],
            edges: vec![(0, 1), (1, 2)],
        };
        let rep = validate_td(&g, &td);
        assert!(!rep.subtree_connectivity);
    }

    #[test]
    fn chain_construction_valid() {
        // Nested rings: bags of each ring layer plus the two coast
        // separators around it.
        let g = crate::gen::grid(5, 5, true).unwrap();
        let hm = compute_heights(&g).unwrap();
        // One bag per height class, plus the neighboring class, chained.
        let mut bags: Vec<Vec<VertexId>> = Vec::new();
        for i in 1..=hm.max_height {
            bags.push(
                (0..g.n() as VertexId)
                    .filter(|&v| hm.h[v as usize] >= i.saturating_sub(1).max(1) && hm.h[v as usize] <= i + 1)
                    .collect(),
            );
        }
        let edges = (0..bags.len() - 1).map(|i| (i, i + 1)).collect();
        let td = TreeDecomposition { bags, edges };
        assert!(validate_td(&g, &td).ok);
    }

    #[test]
    fn oracle_closed_forms() {
        // Paths -> 1, cycles -> 2, cliques -> n-1.
        for n in 2..=8usize {
            let adj: Vec<u32> = (0..n)
                .map(|v| {
                    let mut m = 0u32;
                    if v > 0 {
                        m |= 1 << (v - 1);
                    }
                    if v + 1 < n {
                        m |= 1 << (v + 1);
                    }
                    m
                })
                .collect();
            assert_eq!(exact_treewidth_adj(&adj).unwrap(), 1, "path {n}");
        }
        for n in 3..=8usize {
            let adj: Vec<u32> = (0..n)
                .map(|v| (1u32 << ((v + 1) % n)) | (1 << ((v + n - 1) % n)))
                .collect();
            assert_eq!(exact_treewidth_adj(&adj).unwrap(), 2, "cycle {n}");
        }
        for n in 2..=8usize {
            let full = (1u32 << n) - 1;
            let adj: Vec<u32> = (0..n).map(|v| full & !(1 << v)).collect();
            assert_eq!(exact_treewidth_adj(&adj).unwrap(), n as u32 - 1, "K{n}");
        }
    }

    #[test]
    fn oracle_k4_and_grid() {
        assert_eq!(exact_treewidth(&k4()).unwrap(), 3);
        let g = crate::gen::grid(3, 3, false).unwrap();
        assert_eq!(exact_treewidth(&g).unwrap(), 3);
    }

    #[test]
    fn oracle_size_limit() {
        let g = crate::gen::grid(4, 4, false).unwrap();
        assert!(exact_treewidth(&g).is_err());
    }

    #[test]
    fn separator_checks() {
        // 3x3 grid: the neighbors of corner 0 separate it strongly from
        // the far corner.
        let g = crate::gen::grid(3, 3, false).unwrap();
        assert!(check_separator(&g, &[1, 3], &[0], &[8], true));
        assert!(!check_separator(&g, &[0, 1], &[0], &[8], true));
        assert!(check_separator(&g, &[0, 1], &[0], &[8], false));
        assert!(!check_separator(&g, &[1], &[0], &[8], false));
    }

    #[test]
    fn ridge_depths() {
        let g = crate::gen::grid(5, 5, true).unwrap();
        let hm = compute_heights(&g).unwrap();
        assert_eq!(ridge_depth(&g, &hm, 12, 12).unwrap(), 3);
        // Adjacent: min of both heights.
        assert_eq!(ridge_depth(&g, &hm, 12, 7).unwrap(), 2);
        assert_eq!(ridge_depth(&g, &hm, 0, 12).unwrap(), 1);
    }

    #[test]
    fn two_summit_ridge() {
        let g = crate::gen::mountain_chain(2, 3, 5).unwrap();
        let hm = compute_heights(&g).unwrap();
        let crests = crate::layering::find_crests(&g, &hm);
        assert_eq!(crests.len(), 2);
        let d = ridge_depth(&g, &hm, crests[0].vertices[0], crests[1].vertices[0]).unwrap();
        assert!(d < 3, "pass between summits is lower than the crests");
        assert!(d >= 1);
    }

    #[test]
    fn min_cut_matches_bruteforce() {
        let g = crate::gen::grid(4, 4, true).unwrap();
        let hm = compute_heights(&g).unwrap();
        let top: Vec<VertexId> = (0..16).filter(|&v| hm.h[v as usize] == 2).collect();
        let coast: Vec<VertexId> = (0..16).filter(|&v| hm.h[v as usize] == 1).collect();
        // Center 2x2 plateau adjacent to coast: no strong cut exists.
        assert!(min_vertex_cut(&g, &top, &coast).is_none());
        let g = crate::gen::grid(5, 5, true).unwrap();
        let hm = compute_heights(&g).unwrap();
        let top: Vec<VertexId> = (0..25).filter(|&v| hm.h[v as usize] == 3).collect();
        let coast: Vec<VertexId> = (0..25).filter(|&v| hm.h[v as usize] == 1).collect();
        let cut = min_vertex_cut(&g, &top, &coast).unwrap();
        // Must consist of middle-ring vertices and have minimum size.
        assert!(cut.iter().all(|&v| hm.h[v as usize] == 2));
        // Brute-force: no smaller vertex set separates.
        let ring: Vec<VertexId> = (0..25).filter(|&v| hm.h[v as usize] == 2).collect();
        let mut best = usize::MAX;
        for mask in 0u32..(1 << ring.len().min(16)) {
            let s: Vec<VertexId> = ring
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            if s.len() < best && check_separator(&g, &s, &top, &coast, true) {
                best = s.len();
            }
        }
        assert_eq!(cut.len(), best);
    }
}
