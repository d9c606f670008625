//! The rotation operation on search trees and explicit construction of the
//! rotation graph R(G), the 1-skeleton of the graph associahedron of G.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::tree::{self, ElimTree, TreeError, TreeKey};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RotationError {
    #[error("{1} is not a child of {0}")]
    NotAChild(Vertex, Vertex),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("tree cap exceeded: more than {cap} search trees (found at least {found})")]
    CapExceeded { cap: usize, found: usize },
    #[error("rotation graphs support at most 16 base vertices, got {0}")]
    TooWide(usize),
    #[error("tree error: {0}")]
    Tree(#[from] TreeError),
    #[error("tree is not a vertex of this rotation graph")]
    UnknownTree,
    #[error("edge labels were not built (pass edge_labels=true)")]
    NoLabels,
}

/// uv-rotation: `v` is a child of `u`; the result has u below v, keeps u's
/// other subtrees under u, and moves each subtree S of v under u exactly when
/// some vertex of S is G-adjacent to u.
pub fn rotate(g: &Graph, t: &ElimTree, u: Vertex, v: Vertex) -> Result<ElimTree, RotationError> {
    if v >= t.n() || t.parent(v) != Some(u) {
        return Err(RotationError::NotAChild(u, v));
    }
    let mut parents: Vec<Option<Vertex>> = (0..t.n()).map(|w| t.parent(w)).collect();
    parents[v] = t.parent(u);
    parents[u] = Some(v);
    for c in t.children(v) {
        let s = t.subtree_vertices(c);
        if s.intersects(g.neighbors(u)) {
            parents[c] = Some(u);
        }
    }
    Ok(ElimTree::from_parents(&parents).expect("rotation produced a rooted tree"))
}

/// All rotation neighbors of `t`, one per tree edge, labeled with the rotated
/// (parent, child) pair. Distinct tree edges are expected to yield distinct
/// trees; should that ever fail the duplicates are merged and logged.
pub fn neighbors(g: &Graph, t: &ElimTree) -> Vec<(ElimTree, (Vertex, Vertex))> {
    let mut out: Vec<(ElimTree, (Vertex, Vertex))> = Vec::with_capacity(t.n() - 1);
    for v in 0..t.n() {
        if let Some(u) = t.parent(v) {
            let rotated = rotate(g, t, u, v).expect("tree edge admits a rotation");
            out.push((rotated, (u, v)));
        }
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if out[i].0 == out[j].0 {
                log::warn!(
                    "parallel rotations: edges {:?} and {:?} of a tree produced the same neighbor",
                    out[i].1,
                    out[j].1
                );
            }
        }
    }
    out
}

/// For two trees differing by one rotation, the rotated pair (u, v) with v a
/// child of u in `a` and u a child of v in `b`. None if no such pair exists.
pub fn rotated_pair(a: &ElimTree, b: &ElimTree) -> Option<(Vertex, Vertex)> {
    if a.n() != b.n() {
        return None;
    }
    for v in 0..a.n() {
        if let Some(u) = a.parent(v) {
            if b.parent(u) == Some(v) && a.parent(u) != Some(v) {
                return Some((u, v));
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Abort when more than this many search trees are discovered.
    pub max_trees: usize,
    /// Retain the rotated pair per edge (needed by the metrics checks).
    pub edge_labels: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { max_trees: 5_000_000, edge_labels: true }
    }
}

/// Explicit rotation graph: every search tree of `graph` gets an ordinal,
/// adjacency is stored in CSR form with sorted neighbor lists, and each
/// directed edge optionally carries its rotated (parent, child) pair.
///
/// Ordinals are assigned by BFS from the identity-order tree, expanding each
/// tree's new neighbors in lexicographic key order, so the numbering is
/// reproducible. Immutable once built.
pub struct RotationGraph {
    graph: Graph,
    n: usize,
    tree_bytes: Vec<u8>,
    index: HashMap<u128, u32>,
    row_offsets: Vec<u32>,
    col: Vec<u32>,
    labels: Option<Vec<(u8, u8)>>,
}

impl RotationGraph {
    pub fn build(g: &Graph) -> Result<RotationGraph, RotationError> {
        RotationGraph::build_with(g, BuildOptions::default())
    }

    pub fn build_with(g: &Graph, opts: BuildOptions) -> Result<RotationGraph, RotationError> {
        if g.n() > 16 {
            return Err(RotationError::TooWide(g.n()));
        }
        if !g.is_connected() {
            return Err(RotationError::Disconnected);
        }
        let n = g.n();
        let order: Vec<Vertex> = (0..n).collect();
        let seed = tree::tree_from_order(g, &order)?;

        let mut rg = RotationGraph {
            graph: g.clone(),
            n,
            tree_bytes: Vec::new(),
            index: HashMap::new(),
            row_offsets: vec![0],
            col: Vec::new(),
            labels: if opts.edge_labels { Some(Vec::new()) } else { None },
        };
        rg.push_tree(&seed);

        let mut queue: VecDeque<u32> = VecDeque::new();
        queue.push_back(0);
        while let Some(ord) = queue.pop_front() {
            let t = rg.tree(ord as usize);
            let nbrs = neighbors(g, &t);
            // discover new trees in lexicographic key order
            let mut fresh: Vec<(u128, usize)> = Vec::new();
            let mut packed: Vec<u128> = Vec::with_capacity(nbrs.len());
            for (i, (nt, _)) in nbrs.iter().enumerate() {
                let key = pack_parents(nt);
                packed.push(key);
                if !rg.index.contains_key(&key) && !fresh.iter().any(|&(k, _)| k == key) {
                    fresh.push((key, i));
                }
            }
            fresh.sort_unstable_by_key(|&(k, _)| k);
            for &(_, i) in &fresh {
                if rg.len() >= opts.max_trees {
                    return Err(RotationError::CapExceeded {
                        cap: opts.max_trees,
                        found: rg.len() + 1,
                    });
                }
                let o = rg.push_tree(&nbrs[i].0);
                queue.push_back(o);
            }
            // CSR row for `ord`, sorted by neighbor ordinal
            let mut row: Vec<(u32, (u8, u8))> = nbrs
                .iter()
                .zip(&packed)
                .map(|((_, pair), key)| (rg.index[key], (pair.0 as u8, pair.1 as u8)))
                .collect();
            row.sort_unstable_by_key(|&(o, _)| o);
            row.dedup_by_key(|&mut (o, _)| o);
            for (o, pair) in row {
                rg.col.push(o);
                if let Some(ls) = rg.labels.as_mut() {
                    ls.push(pair);
                }
            }
            rg.row_offsets.push(rg.col.len() as u32);
        }
        Ok(rg)
    }

    fn push_tree(&mut self, t: &ElimTree) -> u32 {
        let ord = self.len() as u32;
        let key = pack_parents(t);
        self.tree_bytes.extend_from_slice(t.key().as_bytes());
        self.index.insert(key, ord);
        ord
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Number of search trees (vertices of R(G)).
    pub fn len(&self) -> usize {
        if self.n == 0 {
            0
        } else {
            self.tree_bytes.len() / self.n
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edge_count(&self) -> usize {
        self.col.len() / 2
    }

    pub fn tree(&self, ord: usize) -> ElimTree {
        let bytes = &self.tree_bytes[ord * self.n..(ord + 1) * self.n];
        ElimTree::from_key(&TreeKey(bytes.to_vec())).expect("stored trees are well formed")
    }

    pub fn key(&self, ord: usize) -> TreeKey {
        TreeKey(self.tree_bytes[ord * self.n..(ord + 1) * self.n].to_vec())
    }

    pub fn ordinal_of_key(&self, key: &TreeKey) -> Option<usize> {
        self.index.get(&key.pack()?).map(|&o| o as usize)
    }

    pub fn ordinal_of(&self, t: &ElimTree) -> Option<usize> {
        if t.n() != self.n {
            return None;
        }
        self.index.get(&pack_parents(t)).map(|&o| o as usize)
    }

    pub fn neighbors_of(&self, ord: usize) -> &[u32] {
        let lo = self.row_offsets[ord] as usize;
        let hi = self.row_offsets[ord + 1] as usize;
        &self.col[lo..hi]
    }

    pub fn degree(&self, ord: usize) -> usize {
        self.neighbors_of(ord).len()
    }

    pub fn has_labels(&self) -> bool {
        self.labels.is_some()
    }

    /// Rotated (parent, child) pairs aligned with `neighbors_of(ord)`.
    pub fn labels_of(&self, ord: usize) -> Result<&[(u8, u8)], RotationError> {
        let ls = self.labels.as_ref().ok_or(RotationError::NoLabels)?;
        let lo = self.row_offsets[ord] as usize;
        let hi = self.row_offsets[ord + 1] as usize;
        Ok(&ls[lo..hi])
    }

    /// Label of the directed edge a -> b.
    pub fn edge_label(&self, a: usize, b: usize) -> Result<(Vertex, Vertex), RotationError> {
        let row = self.neighbors_of(a);
        let pos = row
            .binary_search(&(b as u32))
            .map_err(|_| RotationError::UnknownTree)?;
        let ls = self.labels.as_ref().ok_or(RotationError::NoLabels)?;
        let (u, v) = ls[self.row_offsets[a] as usize + pos];
        Ok((u as Vertex, v as Vertex))
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors_of(a).binary_search(&(b as u32)).is_ok()
    }

    /// All edges as (a, b) with a < b.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |a| {
            self.neighbors_of(a)
                .iter()
                .filter(move |&&b| a < b as usize)
                .map(move |&b| (a, b as usize))
        })
    }
}

fn pack_parents(t: &ElimTree) -> u128 {
    let mut acc = 0u128;
    for v in 0..t.n() {
        let b = match t.parent(v) {
            Some(p) => p as u8,
            None => crate::tree::NO_PARENT,
        };
        acc = acc << 8 | b as u128;
    }
    acc
}

/// Brute-force vertex set of R(G): search trees reached by every one of the
/// n! elimination orders. Independent of the BFS/rotation path; used as an
/// oracle for small n.
pub fn enumerate_by_orders(g: &Graph) -> Result<Vec<TreeKey>, TreeError> {
    let n = g.n();
    let mut keys: Vec<TreeKey> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut order: Vec<Vertex> = (0..n).collect();
    // Heap's algorithm
    let mut c = vec![0usize; n];
    let t = tree::tree_from_order(g, &order)?;
    let k = t.key();
    if seen.insert(k.clone()) {
        keys.push(k);
    }
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            let t = tree::tree_from_order(g, &order)?;
            let k = t.key();
            if seen.insert(k.clone()) {
                keys.push(k);
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    keys.sort();
    Ok(keys)
}

/// Catalan numbers, the vertex counts of classical associahedra R(P_n).
pub fn catalan(n: usize) -> usize {
    let mut c = vec![0usize; n + 1];
    c[0] = 1;
    for i in 1..=n {
        for j in 0..i {
            c[i] += c[j] * c[i - 1 - j];
        }
    }
    c[n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_family, FamilySpec};
    use crate::tree::tree_from_order;

    fn build(spec: &str) -> RotationGraph {
        RotationGraph::build(&make_family(&FamilySpec::parse(spec).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn k4_rotation_on_path() {
        let g = make_family(&FamilySpec::Complete(4)).unwrap();
        let t = tree_from_order(&g, &[0, 1, 2, 3]).unwrap();
        let t2 = rotate(&g, &t, 0, 1).unwrap();
        assert_eq!(t2.path_order(), Some(vec![1, 0, 2, 3]));
        // reverse rotation restores the tree
        assert_eq!(rotate(&g, &t2, 1, 0).unwrap(), t);
        assert_eq!(rotate(&g, &t, 1, 0), Err(RotationError::NotAChild(1, 0)));
    }

    #[test]
    fn spk33_fig1_rotation_r_to_s() {
        let g = make_family(&FamilySpec::CompleteSplit(3, 3)).unwrap();
        let r = tree_from_order(&g, &[3, 4, 5, 0, 1, 2]).unwrap();
        let s = tree_from_order(&g, &[3, 4, 5, 0, 2, 1]).unwrap();
        assert_eq!(rotate(&g, &r, 1, 2).unwrap(), s);
    }

    #[test]
    fn neighbor_counts() {
        let g = make_family(&FamilySpec::Complete(4)).unwrap();
        let t = tree_from_order(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(neighbors(&g, &t).len(), 3);

        let k2 = make_family(&FamilySpec::Complete(2)).unwrap();
        let rg = RotationGraph::build(&k2).unwrap();
        assert_eq!(rg.len(), 2);
        assert!(rg.vertices_all(|o| rg.degree(o) == 1));

        // Fig. 1 tree T on SPK_{3,3} has 5 tree edges -> 5 distinct neighbors
        let s = make_family(&FamilySpec::CompleteSplit(3, 3)).unwrap();
        let t = tree_from_order(&s, &[0, 3, 1, 2, 4, 5]).unwrap();
        let nb = neighbors(&s, &t);
        assert_eq!(nb.len(), 5);
        let mut keys: Vec<_> = nb.iter().map(|(t, _)| t.key()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), 5);
        for (nt, _) in &nb {
            assert!(crate::tree::validate(&s, nt).unwrap());
        }
    }

    #[test]
    fn vertex_counts_small() {
        assert_eq!(build("complete:4").len(), 24);
        assert_eq!(build("spk:2,2").len(), 22);
        for n in 3..=6 {
            assert_eq!(build(&format!("path:{n}")).len(), catalan(n));
        }
    }

    #[test]
    fn degrees_of_permutohedron() {
        let rg = build("complete:4");
        assert!((0..rg.len()).all(|o| rg.degree(o) == 3));
        assert_eq!(rg.edge_count(), 36);
    }

    #[test]
    fn bfs_matches_order_enumeration() {
        for spec in ["complete:4", "path:5", "spk:2,2", "spk:2,3", "star:4"] {
            let g = make_family(&FamilySpec::parse(spec).unwrap()).unwrap();
            let rg = RotationGraph::build(&g).unwrap();
            let mut bfs_keys: Vec<_> = (0..rg.len()).map(|o| rg.key(o)).collect();
            bfs_keys.sort();
            let oracle = enumerate_by_orders(&g).unwrap();
            assert_eq!(bfs_keys, oracle, "vertex sets differ on {spec}");
        }
    }

    #[test]
    fn handshake_and_labels() {
        let rg = build("spk:2,3");
        for a in 0..rg.len() {
            for &b in rg.neighbors_of(a) {
                let b = b as usize;
                assert!(rg.are_adjacent(b, a));
                let (u, v) = rg.edge_label(a, b).unwrap();
                let (u2, v2) = rg.edge_label(b, a).unwrap();
                assert_eq!((u, v), (v2, u2));
                // the label really rotates a into b
                let ta = rg.tree(a);
                let rotated = rotate(rg.graph(), &ta, u, v).unwrap();
                assert_eq!(rg.ordinal_of(&rotated), Some(b));
            }
        }
    }

    #[test]
    fn cap_and_disconnected_errors() {
        let g = make_family(&FamilySpec::Complete(4)).unwrap();
        let err = RotationGraph::build_with(&g, BuildOptions { max_trees: 10, edge_labels: false });
        assert!(matches!(err, Err(RotationError::CapExceeded { cap: 10, .. })));
        let disc = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(
            RotationGraph::build(&disc).err(),
            Some(RotationError::Disconnected)
        );
    }

    #[test]
    fn deterministic_ordinals() {
        let a = build("spk:2,2");
        let b = build("spk:2,2");
        assert_eq!(a.tree_bytes, b.tree_bytes);
        assert_eq!(a.col, b.col);
        // seed is the identity-order tree
        let g = make_family(&FamilySpec::CompleteSplit(2, 2)).unwrap();
        let seed = tree_from_order(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(a.ordinal_of(&seed), Some(0));
    }

    impl RotationGraph {
        fn vertices_all(&self, f: impl Fn(usize) -> bool) -> bool {
            (0..self.len()).all(f)
        }
    }
}
