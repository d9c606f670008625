//! Distances, eccentricities and diameters on rotation graphs, automorphism
//! orbit reduction for all-sources BFS, and the rotation-parity, twin-
//! rotation and quotient-distance laws.

use std::collections::VecDeque;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::rotation::{RotationError, RotationGraph};
use crate::structure::QuotientMap;
use crate::tree::{self, ElimTree};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("distance {0} exceeds the 8-bit storage limit")]
    DistanceOverflow(usize),
    #[error("generator {0:?} is not an automorphism of the base graph")]
    NotAutomorphism(Vec<Vertex>),
    #[error("relabeled tree left the rotation graph; generator is unsound")]
    OrbitClosure,
    #[error("eccentricity differs within an orbit: ordinals {0} and {1}")]
    OrbitEccentricity(usize, usize),
    #[error("walk step {0} is not an edge")]
    NotAWalk(usize),
    #[error("vertices {0} and {1} are not adjacent in the base graph")]
    NotBaseAdjacent(Vertex, Vertex),
    #[error(transparent)]
    Rotation(#[from] RotationError),
}

pub const UNREACHED: u8 = u8::MAX;

/// Single-source BFS result. Distances are 8-bit: every diameter in scope is
/// far below 255, and the frontier arrays for million-vertex graphs stay
/// small.
pub struct DistanceProfile {
    pub source: usize,
    pub dist: Vec<u8>,
    pub eccentricity: usize,
    pub farthest: Vec<u32>,
}

/// Exact hop distances from `s`.
pub fn bfs_from(rg: &RotationGraph, s: usize) -> DistanceProfile {
    bfs_filtered(rg, s, |_, _| true)
}

/// BFS that only uses edges allowed by the filter (arguments: from, to).
pub fn bfs_filtered(
    rg: &RotationGraph,
    s: usize,
    allow: impl Fn(usize, usize) -> bool,
) -> DistanceProfile {
    let n = rg.len();
    let mut dist = vec![UNREACHED; n];
    dist[s] = 0;
    let mut queue = VecDeque::with_capacity(1024);
    queue.push_back(s as u32);
    let mut ecc = 0usize;
    while let Some(v) = queue.pop_front() {
        let v = v as usize;
        let d = dist[v];
        for &nb in rg.neighbors_of(v) {
            let nb = nb as usize;
            if dist[nb] == UNREACHED && allow(v, nb) {
                assert!(d < 254, "distance overflow");
                dist[nb] = d + 1;
                ecc = ecc.max(d as usize + 1);
                queue.push_back(nb as u32);
            }
        }
    }
    let farthest: Vec<u32> = (0..n)
        .filter(|&v| dist[v] != UNREACHED && dist[v] as usize == ecc)
        .map(|v| v as u32)
        .collect();
    DistanceProfile { source: s, dist, eccentricity: ecc, farthest }
}

/// One shortest s-t path as a vertex sequence (deterministic: hops to the
/// smallest-ordinal predecessor).
pub fn shortest_path(rg: &RotationGraph, s: usize, t: usize) -> Vec<usize> {
    let prof = bfs_from(rg, s);
    let mut path = vec![t];
    let mut cur = t;
    while cur != s {
        let d = prof.dist[cur];
        let prev = rg
            .neighbors_of(cur)
            .iter()
            .map(|&nb| nb as usize)
            .filter(|&nb| prof.dist[nb] + 1 == d)
            .min()
            .expect("a predecessor exists on a shortest path");
        path.push(prev);
        cur = prev;
    }
    path.reverse();
    path
}

/// Distance between two trees given as ordinals.
pub fn distance(rg: &RotationGraph, s: usize, t: usize) -> usize {
    // early-exit BFS
    let n = rg.len();
    let mut dist = vec![UNREACHED; n];
    dist[s] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(s as u32);
    while let Some(v) = queue.pop_front() {
        let v = v as usize;
        if v == t {
            return dist[v] as usize;
        }
        for &nb in rg.neighbors_of(v) {
            let nb = nb as usize;
            if dist[nb] == UNREACHED {
                dist[nb] = dist[v] + 1;
                queue.push_back(nb as u32);
            }
        }
    }
    unreachable!("rotation graphs are connected")
}

// ---------------------------------------------------------------------------
// Orbits
// ---------------------------------------------------------------------------

/// Orbit partition of the tree ordinals under the group generated by graph
/// automorphisms acting through relabeling. Orbit members share their
/// eccentricity, so BFS only needs to run from representatives.
pub struct OrbitSet {
    pub generators: Vec<Vec<Vertex>>,
    pub orbit_id: Vec<u32>,
    pub representatives: Vec<u32>,
}

impl OrbitSet {
    pub fn orbit_count(&self) -> usize {
        self.representatives.len()
    }

    /// Representatives of every orbit plus one extra member of up to `spot`
    /// non-trivial orbits, for eccentricity spot checks.
    fn spot_pairs(&self, spot: usize) -> Vec<(u32, u32)> {
        let mut pairs = Vec::new();
        for &rep in &self.representatives {
            if pairs.len() >= spot {
                break;
            }
            if let Some(other) = self
                .orbit_id
                .iter()
                .enumerate()
                .position(|(o, &id)| id == self.orbit_id[rep as usize] && o as u32 != rep)
            {
                pairs.push((rep, other as u32));
            }
        }
        pairs
    }
}

/// Verify each generator is an automorphism of the base graph and close the
/// ordinals under the induced relabeling action.
pub fn orbit_reduce(
    rg: &RotationGraph,
    generators: &[Vec<Vertex>],
) -> Result<OrbitSet, MetricsError> {
    let g = rg.graph();
    for f in generators {
        if !is_automorphism(g, f) {
            return Err(MetricsError::NotAutomorphism(f.clone()));
        }
    }
    let n = rg.len();
    let mut uf: Vec<u32> = (0..n as u32).collect();
    fn find(uf: &mut [u32], x: u32) -> u32 {
        let mut root = x;
        while uf[root as usize] != root {
            root = uf[root as usize];
        }
        let mut cur = x;
        while uf[cur as usize] != root {
            let next = uf[cur as usize];
            uf[cur as usize] = root;
            cur = next;
        }
        root
    }
    for ord in 0..n {
        let t = rg.tree(ord);
        for f in generators {
            let image = tree::relabel(&t, f).expect("generator is a bijection");
            let other = rg.ordinal_of(&image).ok_or(MetricsError::OrbitClosure)?;
            let (a, b) = (find(&mut uf, ord as u32), find(&mut uf, other as u32));
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                uf[hi as usize] = lo;
            }
        }
    }
    let mut orbit_id = vec![0u32; n];
    let mut representatives = Vec::new();
    let mut rep_index = vec![u32::MAX; n];
    for ord in 0..n {
        let root = find(&mut uf, ord as u32) as usize;
        if rep_index[root] == u32::MAX {
            rep_index[root] = representatives.len() as u32;
            representatives.push(root as u32);
        }
        orbit_id[ord] = rep_index[root];
    }
    Ok(OrbitSet { generators: generators.to_vec(), orbit_id, representatives })
}

fn is_automorphism(g: &Graph, f: &[Vertex]) -> bool {
    let n = g.n();
    if f.len() != n || VertexSet::from_iter(f.iter().copied()).len() != n {
        return false;
    }
    if f.iter().any(|&v| v >= n) {
        return false;
    }
    g.edges().iter().all(|&(u, v)| g.has_edge(f[u], f[v]))
}

/// Transpositions of consecutive members within each twin class (true or
/// false twins). These generate the full symmetric group on every class,
/// covering S_n for complete graphs and S_p x S_q for K_{p,q} and SPK_{p,q}.
pub fn twin_class_generators(g: &Graph) -> Vec<Vec<Vertex>> {
    let mut gens = Vec::new();
    let mut assigned = VertexSet::EMPTY;
    for v in g.vertices() {
        if assigned.contains(v) {
            continue;
        }
        let class: Vec<Vertex> = g
            .vertices()
            .filter(|&u| {
                u >= v && (g.are_true_twins(u, v) || g.are_false_twins(u, v))
            })
            .collect();
        for &u in &class {
            assigned.insert(u);
        }
        for pair in class.windows(2) {
            gens.push(tree::swap_map(g.n(), pair[0], pair[1]));
        }
    }
    gens
}

// ---------------------------------------------------------------------------
// Diameter
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct DiameterResult {
    pub value: usize,
    /// (source, farthest) ordinals realizing the diameter.
    pub witness: (usize, usize),
    pub sources_run: usize,
}

/// Maximum eccentricity. With an orbit set, BFS runs only from orbit
/// representatives (eccentricity is orbit-constant since relabeling induces
/// rotation-graph automorphisms; spot checks assert this). Sources run in
/// parallel; the reported witness pair is deterministic.
pub fn diameter(
    rg: &RotationGraph,
    orbits: Option<&OrbitSet>,
) -> Result<DiameterResult, MetricsError> {
    let sources: Vec<u32> = match orbits {
        Some(o) => o.representatives.clone(),
        None => (0..rg.len() as u32).collect(),
    };
    if let Some(o) = orbits {
        for (rep, other) in o.spot_pairs(3) {
            let a = bfs_from(rg, rep as usize).eccentricity;
            let b = bfs_from(rg, other as usize).eccentricity;
            if a != b {
                return Err(MetricsError::OrbitEccentricity(rep as usize, other as usize));
            }
        }
    }
    let best = sources
        .par_iter()
        .map(|&s| {
            let p = bfs_from(rg, s as usize);
            let witness = p.farthest.iter().min().copied().unwrap_or(s);
            (p.eccentricity, s, witness)
        })
        .reduce(
            || (0usize, u32::MAX, u32::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
                    b
                } else {
                    a
                }
            },
        );
    Ok(DiameterResult {
        value: best.0,
        witness: (best.1 as usize, best.2 as usize),
        sources_run: sources.len(),
    })
}

/// Eccentricities of selected sources, in parallel; used by checkpointed
/// deep runs where the caller aggregates.
pub fn eccentricities(rg: &RotationGraph, sources: &[u32]) -> Vec<(u32, usize)> {
    sources
        .par_iter()
        .map(|&s| (s, bfs_from(rg, s as usize).eccentricity))
        .collect()
}

// ---------------------------------------------------------------------------
// Rotation-parity and twin-rotation laws
// ---------------------------------------------------------------------------

/// Whether u is an ancestor of v in one tree and a descendant in the other.
/// Meaningful for G-adjacent u, v, which share a branch in every tree.
pub fn different_relative_order(a: &ElimTree, b: &ElimTree, u: Vertex, v: Vertex) -> bool {
    let ua = a.is_ancestor_or_self(u, v);
    let ub = b.is_ancestor_or_self(u, v);
    ua != ub
}

/// Parity law along a walk: the number of uv-labeled edges is odd exactly
/// when u and v change relative order between the endpoints. Returns the
/// truth of that equivalence for the given walk.
pub fn rotation_parity_check(
    rg: &RotationGraph,
    walk: &[usize],
    u: Vertex,
    v: Vertex,
) -> Result<bool, MetricsError> {
    if !rg.graph().has_edge(u, v) {
        return Err(MetricsError::NotBaseAdjacent(u, v));
    }
    let mut uv_rotations = 0usize;
    for (step, pair) in walk.windows(2).enumerate() {
        if !rg.are_adjacent(pair[0], pair[1]) {
            return Err(MetricsError::NotAWalk(step));
        }
        let (a, b) = rg.edge_label(pair[0], pair[1])?;
        if (a, b) == (u, v) || (a, b) == (v, u) {
            uv_rotations += 1;
        }
    }
    let first = rg.tree(walk[0]);
    let last = rg.tree(*walk.last().unwrap());
    let flipped = different_relative_order(&first, &last, u, v);
    Ok((uv_rotations % 2 == 1) == flipped)
}

/// For true twins u, v and a pair (s, t): some geodesic contains exactly one
/// uv-rotation edge when the twins change relative order, and some geodesic
/// avoids uv-rotations entirely when they do not. Verified with BFS in the
/// graph minus uv-labeled edges.
pub fn twin_rotation_check(
    rg: &RotationGraph,
    u: Vertex,
    v: Vertex,
    s: usize,
    t: usize,
) -> Result<bool, MetricsError> {
    if !rg.graph().are_true_twins(u, v) {
        return Err(MetricsError::NotBaseAdjacent(u, v));
    }
    let d = distance(rg, s, t);
    let is_uv = |a: usize, b: usize| -> bool {
        match rg.edge_label(a, b) {
            Ok((x, y)) => (x, y) == (u, v) || (x, y) == (v, u),
            Err(_) => false,
        }
    };
    let from_s = bfs_filtered(rg, s, |a, b| !is_uv(a, b));
    let flipped = different_relative_order(&rg.tree(s), &rg.tree(t), u, v);
    if !flipped {
        // a geodesic should exist entirely without uv-rotations
        return Ok(from_s.dist[t] != UNREACHED && from_s.dist[t] as usize == d);
    }
    // a geodesic with exactly one uv edge: split at that edge
    let from_t = bfs_filtered(rg, t, |a, b| !is_uv(a, b));
    for a in 0..rg.len() {
        for &b in rg.neighbors_of(a) {
            let b = b as usize;
            if is_uv(a, b)
                && from_s.dist[a] != UNREACHED
                && from_t.dist[b] != UNREACHED
                && from_s.dist[a] as usize + 1 + from_t.dist[b] as usize == d
            {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// The quotient-distance dichotomy for |W| = 2: the target distance drops by
/// exactly one when some source geodesic uses a W-special edge, and is
/// preserved otherwise.
pub fn quotient_distance_check(q: &QuotientMap<'_>, s: usize, t: usize) -> bool {
    let d = distance(q.source, s, t);
    let dt = distance(q.target, q.map[s] as usize, q.map[t] as usize);
    // does some geodesic s -> t pass through a special (collapsing) edge?
    let from_s = bfs_from(q.source, s);
    let from_t = bfs_from(q.source, t);
    let mut special_on_geodesic = false;
    'outer: for a in 0..q.source.len() {
        for &b in q.source.neighbors_of(a) {
            let b = b as usize;
            if q.is_special_edge(a, b)
                && from_s.dist[a] as usize + 1 + from_t.dist[b] as usize == d
            {
                special_on_geodesic = true;
                break 'outer;
            }
        }
    }
    if special_on_geodesic {
        dt == d - 1
    } else {
        dt == d
    }
}

/// diam(R(G)) - C(|W|, 2) <= diam(R(G - S)).
pub fn lower_bound_holds(diam_source: usize, w_size: usize, diam_target: usize) -> bool {
    let c2 = w_size * (w_size - 1) / 2;
    diam_source.saturating_sub(c2) <= diam_target
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_family, FamilySpec};
    use crate::structure::build_quotient;

    fn rg(spec: &str) -> RotationGraph {
        RotationGraph::build(&make_family(&FamilySpec::parse(spec).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn bfs_basics() {
        let r = rg("complete:4");
        let p = bfs_from(&r, 0);
        assert_eq!(p.dist[0], 0);
        assert_eq!(p.eccentricity, 6); // max inversions of S_4
        // edge-Lipschitz
        for (a, b) in r.edges() {
            assert!((p.dist[a] as i16 - p.dist[b] as i16).abs() <= 1);
        }
    }

    #[test]
    fn diameters_tiny() {
        assert_eq!(diameter(&rg("complete:4"), None).unwrap().value, 6);
        assert_eq!(diameter(&rg("spk:2,2"), None).unwrap().value, 5);
        // R(C_4) is the 20-vertex cyclohedron skeleton; its diameter sits at
        // the top of the interval [4, 5] allowed by the quotient bound
        assert_eq!(diameter(&rg("kpq:2,2"), None).unwrap().value, 5);
    }

    #[test]
    fn orbit_reduction_agrees() {
        for spec in ["complete:4", "spk:2,2", "spk:2,3", "kpq:2,3"] {
            let r = rg(spec);
            let gens = twin_class_generators(r.graph());
            let orbits = orbit_reduce(&r, &gens).unwrap();
            let with = diameter(&r, Some(&orbits)).unwrap();
            let without = diameter(&r, None).unwrap();
            assert_eq!(with.value, without.value, "{spec}");
            assert!(orbits.orbit_count() < r.len(), "{spec} should reduce");
        }
    }

    #[test]
    fn k4_orbit_count_is_one() {
        let r = rg("complete:4");
        let orbits = orbit_reduce(&r, &twin_class_generators(r.graph())).unwrap();
        assert_eq!(orbits.orbit_count(), 1);
    }

    #[test]
    fn rejects_non_automorphism() {
        let r = rg("path:3");
        // swapping an endpoint with the middle of P_3 is not an automorphism
        let bad = vec![1usize, 0, 2];
        assert!(matches!(
            orbit_reduce(&r, &[bad]),
            Err(MetricsError::NotAutomorphism(_))
        ));
    }

    #[test]
    fn parity_law_trivial_cases() {
        let r = rg("complete:4");
        // trivial walk
        assert!(rotation_parity_check(&r, &[0], 0, 1).unwrap());
        // one uv edge: find it from vertex 0
        let labels = r.labels_of(0).unwrap();
        let nbrs = r.neighbors_of(0);
        let (pos, &(u, v)) = labels.iter().enumerate().next().unwrap();
        let walk = [0usize, nbrs[pos] as usize];
        assert!(rotation_parity_check(&r, &walk, u as usize, v as usize).unwrap());
        // a non-adjacent base pair errors
        let s = rg("spk:2,2");
        assert!(rotation_parity_check(&s, &[0], 2, 3).is_err());
    }

    #[test]
    fn twin_rotation_exhaustive_k4() {
        let r = rg("complete:4");
        for s in 0..r.len() {
            for t in 0..r.len() {
                assert!(twin_rotation_check(&r, 2, 3, s, t).unwrap());
            }
        }
    }

    #[test]
    fn quotient_distance_exhaustive_k4() {
        let source = rg("complete:4");
        let target = rg("spk:2,2");
        let q = build_quotient(&source, VertexSet::from_iter([2, 3]), &target).unwrap();
        for s in 0..source.len() {
            for t in 0..source.len() {
                assert!(quotient_distance_check(&q, s, t), "pair {s},{t}");
            }
        }
    }

    #[test]
    fn lower_bound_examples() {
        // K_4 vs SPK_{2,2}: 6 - 1 <= 5, tight
        assert!(lower_bound_holds(6, 2, 5));
        assert!(!lower_bound_holds(7, 2, 5));
    }
}
