//! Search trees (elimination trees) on a graph: construction from
//! elimination orders, validity checking, the insertion/elimination calculus,
//! relabeling, and structural queries.
//!
//! A search tree on a connected graph G is a rooted tree on V(G) whose root r
//! has as children the roots of search trees of the components of G - r.
//! Equivalently, for every non-root v, the vertex set of the subtree at v
//! induces a connected component of G minus all levels shallower than v.

use crate::graph::{Graph, Vertex, VertexSet};
use thiserror::Error;

/// Sentinel in the parent array marking the root.
pub const NO_PARENT: u8 = 0xFF;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("order is not a permutation of the vertex set")]
    NotAPermutation,
    #[error("tree spans {0} vertices but graph has {1}")]
    VertexSetMismatch(usize, usize),
    #[error("insertion level {0} out of range 0..={1}")]
    LevelOutOfRange(usize, usize),
    #[error("inserted vertex id must be {0} (the next dense id), got {1}")]
    NonDenseInsert(usize, usize),
    #[error("vertex {0} has {1} children; elimination needs at most one")]
    TooManyChildren(Vertex, usize),
    #[error("cannot eliminate the only vertex of a tree")]
    CannotEliminateLast,
    #[error("map is not a bijection on vertex ids")]
    NotABijection,
    #[error("vertex {0} out of range")]
    InvalidVertex(Vertex),
    #[error("clique vertices are not on a single branch")]
    CliqueNotOnBranch,
    #[error("clique is empty")]
    EmptyClique,
}

/// Canonical fixed-width encoding of an [`ElimTree`]: the parent array in
/// vertex order, with [`NO_PARENT`] at the root. Two trees are equal iff
/// their keys are byte-equal; the length depends only on the vertex count.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TreeKey(pub Vec<u8>);

impl TreeKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Pack into a `u128`, most significant byte first so numeric order
    /// matches lexicographic byte order. Requires at most 16 vertices.
    pub fn pack(&self) -> Option<u128> {
        if self.0.len() > 16 {
            return None;
        }
        let mut acc = 0u128;
        for &b in &self.0 {
            acc = acc << 8 | b as u128;
        }
        Some(acc)
    }
}

/// Rooted spanning tree of a graph's vertex set, stored as a parent array.
///
/// Values are immutable; every operation returns a new tree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ElimTree {
    parent: Vec<u8>,
    root: u8,
}

impl ElimTree {
    /// Build from a parent array using `None` for the root.
    pub fn from_parents(parents: &[Option<Vertex>]) -> Option<ElimTree> {
        let n = parents.len();
        if n == 0 || n > NO_PARENT as usize {
            return None;
        }
        let mut parent = vec![NO_PARENT; n];
        let mut root = None;
        for (v, p) in parents.iter().enumerate() {
            match p {
                None => {
                    if root.is_some() {
                        return None;
                    }
                    root = Some(v);
                }
                Some(p) => {
                    if *p >= n || *p == v {
                        return None;
                    }
                    parent[v] = *p as u8;
                }
            }
        }
        let root = root?;
        let t = ElimTree { parent, root: root as u8 };
        // reject cycles: every vertex must reach the root
        for v in 0..n {
            let mut cur = v;
            let mut steps = 0;
            while cur != root {
                cur = t.parent[cur] as usize;
                steps += 1;
                if steps > n {
                    return None;
                }
            }
        }
        Some(t)
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> Vertex {
        self.root as Vertex
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        let p = self.parent[v];
        if p == NO_PARENT {
            None
        } else {
            Some(p as Vertex)
        }
    }

    pub fn key(&self) -> TreeKey {
        TreeKey(self.parent.clone())
    }

    pub fn from_key(key: &TreeKey) -> Option<ElimTree> {
        let parents: Vec<Option<Vertex>> = key
            .0
            .iter()
            .map(|&b| if b == NO_PARENT { None } else { Some(b as Vertex) })
            .collect();
        ElimTree::from_parents(&parents)
    }

    pub fn depth(&self, v: Vertex) -> usize {
        let mut d = 0;
        let mut cur = v;
        while self.parent[cur] != NO_PARENT {
            cur = self.parent[cur] as usize;
            d += 1;
        }
        d
    }

    pub fn depths(&self) -> Vec<usize> {
        let n = self.n();
        let mut d = vec![usize::MAX; n];
        d[self.root as usize] = 0;
        for v in 0..n {
            if d[v] != usize::MAX {
                continue;
            }
            let mut stack = vec![v];
            let mut cur = v;
            while d[cur] == usize::MAX {
                cur = self.parent[cur] as usize;
                stack.push(cur);
            }
            let mut depth = d[cur];
            for &u in stack.iter().rev().skip(1) {
                depth += 1;
                d[u] = depth;
            }
        }
        d
    }

    /// Levels L_0(T), L_1(T), ...; level i holds the vertices at depth i.
    pub fn levels(&self) -> Vec<Vec<Vertex>> {
        let d = self.depths();
        let max = *d.iter().max().unwrap();
        let mut ls = vec![Vec::new(); max + 1];
        for v in 0..self.n() {
            ls[d[v]].push(v);
        }
        ls
    }

    pub fn children(&self, v: Vertex) -> Vec<Vertex> {
        (0..self.n()).filter(|&c| self.parent[c] == v as u8).collect()
    }

    pub fn child_count(&self, v: Vertex) -> usize {
        self.parent.iter().filter(|&&p| p == v as u8).count()
    }

    pub fn is_leaf(&self, v: Vertex) -> bool {
        self.child_count(v) == 0
    }

    /// Path from the root to `v`, inclusive.
    pub fn branch_to(&self, v: Vertex) -> Vec<Vertex> {
        let mut path = vec![v];
        let mut cur = v;
        while self.parent[cur] != NO_PARENT {
            cur = self.parent[cur] as usize;
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// True iff `a` lies on the path from the root to `b` (a = b counts).
    pub fn is_ancestor_or_self(&self, a: Vertex, b: Vertex) -> bool {
        let mut cur = b;
        loop {
            if cur == a {
                return true;
            }
            match self.parent(cur) {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    /// Vertex set of the subtree rooted at `v`.
    pub fn subtree_vertices(&self, v: Vertex) -> VertexSet {
        let mut set = VertexSet::singleton(v);
        // repeatedly absorb vertices whose parent is already in the set
        let mut changed = true;
        while changed {
            changed = false;
            for u in 0..self.n() {
                if !set.contains(u) && self.parent[u] != NO_PARENT && set.contains(self.parent[u] as usize)
                {
                    set.insert(u);
                    changed = true;
                }
            }
        }
        set
    }

    /// Subtree vertex sets for all vertices at once, O(n^2) worst case.
    pub fn all_subtree_vertices(&self) -> Vec<VertexSet> {
        let n = self.n();
        let d = self.depths();
        let mut order: Vec<Vertex> = (0..n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(d[v]));
        let mut sub = vec![VertexSet::EMPTY; n];
        for &v in &order {
            sub[v].insert(v);
            if let Some(p) = self.parent(v) {
                sub[p] = sub[p].union(sub[v]);
            }
        }
        sub
    }

    /// Whether the tree is a path (every vertex has at most one child).
    pub fn is_path(&self) -> bool {
        (0..self.n()).all(|v| self.child_count(v) <= 1)
    }

    /// Root-to-leaf vertex sequence, if the tree is a path.
    pub fn path_order(&self) -> Option<Vec<Vertex>> {
        if !self.is_path() {
            return None;
        }
        let mut seq = Vec::with_capacity(self.n());
        let mut cur = self.root();
        loop {
            seq.push(cur);
            match self.children(cur).first() {
                Some(&c) => cur = c,
                None => break,
            }
        }
        Some(seq)
    }
}

/// The unique search tree induced by an elimination order: `order[0]` is the
/// root, and each later vertex becomes the root of the component it lies in
/// when removed, hanging from the vertex whose removal created the component.
pub fn tree_from_order(g: &Graph, order: &[Vertex]) -> Result<ElimTree, TreeError> {
    let n = g.n();
    if order.len() != n || VertexSet::from_iter(order.iter().copied()).len() != n {
        return Err(TreeError::NotAPermutation);
    }
    if order.iter().any(|&v| v >= n) {
        return Err(TreeError::NotAPermutation);
    }
    if !g.is_connected() {
        return Err(TreeError::Disconnected);
    }
    let mut parent = vec![NO_PARENT; n];
    // pending[v] = vertex whose removal carved out v's current component
    let mut pending = vec![NO_PARENT; n];
    let mut remaining = g.vertex_set();
    for &u in order {
        parent[u] = pending[u];
        remaining.remove(u);
        let was_component = g.component_of(u, remaining.union(VertexSet::singleton(u)));
        let mut rest = was_component.difference(VertexSet::singleton(u));
        while let Some(w) = rest.first() {
            let comp = g.component_of(w, rest);
            for x in comp.iter() {
                pending[x] = u as u8;
            }
            rest = rest.difference(comp);
        }
    }
    Ok(ElimTree { parent, root: order[0] as u8 })
}

/// Search-tree validity: for every non-root v, V(T|v) induces a connected
/// component of G minus the levels shallower than v.
pub fn validate(g: &Graph, t: &ElimTree) -> Result<bool, TreeError> {
    if t.n() != g.n() {
        return Err(TreeError::VertexSetMismatch(t.n(), g.n()));
    }
    let d = t.depths();
    let sub = t.all_subtree_vertices();
    let max_d = *d.iter().max().unwrap();
    // prefix_removed[i] = everything at depth < i
    let mut removed = vec![VertexSet::EMPTY; max_d + 1];
    for v in 0..t.n() {
        for r in removed.iter_mut().skip(d[v] + 1) {
            r.insert(v);
        }
    }
    for v in 0..t.n() {
        if v == t.root() {
            continue;
        }
        let within = g.vertex_set().difference(removed[d[v]]);
        if !within.contains(v) {
            return Ok(false);
        }
        if g.component_of(v, within) != sub[v] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Insertion T(i, x, v) of a new vertex `x` along the root-to-`v` path.
///
/// i = 0 puts x above the root; i = depth(v)+1 adds x as a new leaf child of
/// v; intermediate values subdivide the i-th edge of the branch. The new id
/// must be the next dense id, i.e. `x == t.n()`, which keeps keys of derived
/// trees deterministic.
pub fn insert(t: &ElimTree, i: usize, x: Vertex, v: Vertex) -> Result<ElimTree, TreeError> {
    if v >= t.n() {
        return Err(TreeError::InvalidVertex(v));
    }
    if x != t.n() {
        return Err(TreeError::NonDenseInsert(t.n(), x));
    }
    let branch = t.branch_to(v);
    let d = branch.len() - 1;
    if i > d + 1 {
        return Err(TreeError::LevelOutOfRange(i, d + 1));
    }
    let mut parent = t.parent.clone();
    parent.push(NO_PARENT);
    let (root, xp) = if i == 0 {
        parent[t.root()] = x as u8;
        (x as u8, NO_PARENT)
    } else if i == d + 1 {
        (t.root as u8, v as u8)
    } else {
        // subdivide the edge branch[i-1] -- branch[i]
        parent[branch[i]] = x as u8;
        (t.root, branch[i - 1] as u8)
    };
    parent[x] = xp;
    Ok(ElimTree { parent, root })
}

/// Elimination p(T, u) for a vertex with at most one child.
///
/// The remaining ids are shifted down past `u` so the result stays on a dense
/// id range; eliminating the highest id (the usual case, undoing [`insert`])
/// leaves all other ids unchanged.
pub fn eliminate(t: &ElimTree, u: Vertex) -> Result<ElimTree, TreeError> {
    if u >= t.n() {
        return Err(TreeError::InvalidVertex(u));
    }
    if t.n() == 1 {
        return Err(TreeError::CannotEliminateLast);
    }
    let kids = t.children(u);
    if kids.len() > 1 {
        return Err(TreeError::TooManyChildren(u, kids.len()));
    }
    let shift = |v: Vertex| -> u8 {
        if v > u {
            (v - 1) as u8
        } else {
            v as u8
        }
    };
    let n = t.n();
    let mut parent = vec![NO_PARENT; n - 1];
    let new_root = if u == t.root() {
        kids[0] // root elimination requires the single child
    } else {
        t.root()
    };
    for v in 0..n {
        if v == u {
            continue;
        }
        let p = if Some(u) == t.parent(v) {
            // the child of u hangs from u's parent (or becomes the root)
            match t.parent(u) {
                Some(b) => shift(b),
                None => NO_PARENT,
            }
        } else {
            match t.parent(v) {
                Some(p) => shift(p),
                None => NO_PARENT,
            }
        };
        parent[shift(v) as usize] = p;
    }
    Ok(ElimTree { parent, root: shift(new_root) })
}

/// f*(T): relabel the tree through a vertex bijection.
pub fn relabel(t: &ElimTree, f: &[Vertex]) -> Result<ElimTree, TreeError> {
    let n = t.n();
    if f.len() != n || VertexSet::from_iter(f.iter().copied()).len() != n || f.iter().any(|&v| v >= n)
    {
        return Err(TreeError::NotABijection);
    }
    let mut parent = vec![NO_PARENT; n];
    for v in 0..n {
        if let Some(p) = t.parent(v) {
            parent[f[v]] = f[p] as u8;
        }
    }
    Ok(ElimTree { parent, root: f[t.root()] as u8 })
}

/// Transposition of u and v as a relabeling map.
pub fn swap_map(n: usize, u: Vertex, v: Vertex) -> Vec<Vertex> {
    let mut f: Vec<Vertex> = (0..n).collect();
    f.swap(u, v);
    f
}

/// λ(T) for a clique K: the maximum depth of a K-vertex, together with the
/// unique deepest K-vertex. All of K must lie on one branch, which holds for
/// every valid search tree when K is a clique.
pub fn lambda(t: &ElimTree, k: VertexSet) -> Result<(usize, Vertex), TreeError> {
    if k.is_empty() {
        return Err(TreeError::EmptyClique);
    }
    if k.iter().any(|v| v >= t.n()) {
        return Err(TreeError::InvalidVertex(k.iter().find(|&v| v >= t.n()).unwrap()));
    }
    let d = t.depths();
    let deepest = k.iter().max_by_key(|&v| d[v]).unwrap();
    for u in k.iter() {
        if !t.is_ancestor_or_self(u, deepest) {
            return Err(TreeError::CliqueNotOnBranch);
        }
    }
    Ok((d[deepest], deepest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_family, FamilySpec};

    fn spk33() -> Graph {
        make_family(&FamilySpec::CompleteSplit(3, 3)).unwrap()
    }

    // ids on SPK_{3,3}: x1,x2,x3 = 0,1,2 and y1,y2,y3 = 3,4,5
    fn fig1_r(g: &Graph) -> ElimTree {
        tree_from_order(g, &[3, 4, 5, 0, 1, 2]).unwrap()
    }

    #[test]
    fn order_determines_path_tree_r() {
        let g = spk33();
        let r = fig1_r(&g);
        assert_eq!(r.path_order(), Some(vec![3, 4, 5, 0, 1, 2]));
        assert!(validate(&g, &r).unwrap());
    }

    #[test]
    fn two_orders_same_tree_t() {
        let g = spk33();
        let t1 = tree_from_order(&g, &[0, 3, 1, 2, 4, 5]).unwrap();
        let t2 = tree_from_order(&g, &[0, 3, 1, 2, 5, 4]).unwrap();
        assert_eq!(t1, t2);
        // root x1, chain x1-y1-x2-x3, leaves y2 y3 under x3
        assert_eq!(t1.root(), 0);
        assert_eq!(t1.children(2), vec![4, 5]);
        assert!(validate(&g, &t1).unwrap());
    }

    #[test]
    fn complete_graph_orders_give_paths() {
        let g = make_family(&FamilySpec::Complete(5)).unwrap();
        let order = [2, 0, 4, 1, 3];
        let t = tree_from_order(&g, &order).unwrap();
        assert_eq!(t.path_order(), Some(order.to_vec()));
    }

    #[test]
    fn order_errors() {
        let g = spk33();
        assert_eq!(tree_from_order(&g, &[0, 1, 2]), Err(TreeError::NotAPermutation));
        assert_eq!(
            tree_from_order(&g, &[0, 0, 1, 2, 3, 4]),
            Err(TreeError::NotAPermutation)
        );
        let disc = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(tree_from_order(&disc, &[0, 1, 2]), Err(TreeError::Disconnected));
    }

    #[test]
    fn star_tree_on_path_is_invalid() {
        // P_3 a-b-c: root a with children b and c is not a search tree,
        // because G - a is still connected.
        let g = make_family(&FamilySpec::Path(3)).unwrap();
        let t = ElimTree::from_parents(&[None, Some(0), Some(0)]).unwrap();
        assert!(!validate(&g, &t).unwrap());
    }

    #[test]
    fn four_cycle_tree_is_valid() {
        // C_4 a,b,c,v (ids 0,1,2,3): root a, child c, leaves b and v
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let t = ElimTree::from_parents(&[None, Some(2), Some(0), Some(2)]).unwrap();
        assert!(validate(&g, &t).unwrap());
    }

    #[test]
    fn validate_vertex_mismatch() {
        let g = spk33();
        let t = ElimTree::from_parents(&[None, Some(0)]).unwrap();
        assert_eq!(validate(&g, &t), Err(TreeError::VertexSetMismatch(2, 6)));
    }

    // insertion figure: T has root a=0, child b=1, children of b are c=2, d=3
    fn fig5_t() -> ElimTree {
        ElimTree::from_parents(&[None, Some(0), Some(1), Some(1)]).unwrap()
    }

    #[test]
    fn insertion_cases() {
        let t = fig5_t();
        let t0 = insert(&t, 0, 4, 3).unwrap();
        assert_eq!(t0.root(), 4);
        assert_eq!(t0.parent(0), Some(4));

        let t2 = insert(&t, 2, 4, 3).unwrap();
        assert_eq!(t2.parent(4), Some(1));
        assert_eq!(t2.parent(3), Some(4));
        assert_eq!(t2.parent(2), Some(1));

        let t3 = insert(&t, 3, 4, 3).unwrap();
        assert_eq!(t3.parent(4), Some(3));
        assert!(t3.is_leaf(4));

        assert_eq!(insert(&t, 4, 4, 3), Err(TreeError::LevelOutOfRange(4, 3)));
        assert_eq!(insert(&t, 0, 7, 3), Err(TreeError::NonDenseInsert(4, 7)));
    }

    #[test]
    fn insert_eliminate_roundtrip() {
        let t = fig5_t();
        for i in 0..=3 {
            let big = insert(&t, i, 4, 3).unwrap();
            let back = eliminate(&big, 4).unwrap();
            assert_eq!(back, t);
            assert_eq!(big.depth(4), i);
        }
    }

    // elimination figure: T' path 1-2-3 with children 4,5 under 3 (ids 0..4)
    fn elim_fixture() -> ElimTree {
        ElimTree::from_parents(&[None, Some(0), Some(1), Some(2), Some(2)]).unwrap()
    }

    #[test]
    fn elimination_cases() {
        let t = elim_fixture();
        // root elimination: new root is the old second vertex
        let a = eliminate(&t, 0).unwrap();
        assert_eq!(a.root(), 0); // ids shift down by one
        assert_eq!(a.children(0), vec![1]);
        assert_eq!(a.children(1), vec![2, 3]);

        // leaf elimination
        let b = eliminate(&t, 3).unwrap();
        assert_eq!(b.n(), 4);
        assert_eq!(b.children(2), vec![3]); // old vertex 4 shifted to 3

        // internal single-child elimination
        let c = eliminate(&t, 1).unwrap();
        assert_eq!(c.parent(1), Some(0)); // old 3 hangs from old 1

        // two children is an error
        assert_eq!(eliminate(&t, 2), Err(TreeError::TooManyChildren(2, 2)));
    }

    #[test]
    fn relabel_cases() {
        let t = fig5_t();
        let id: Vec<usize> = (0..4).collect();
        assert_eq!(relabel(&t, &id).unwrap(), t);
        let f = swap_map(4, 1, 3);
        let r = relabel(&t, &f).unwrap();
        assert_eq!(r.parent(3), Some(0));
        assert_eq!(r.parent(1), Some(3));
        let mut inv = vec![0; 4];
        for (i, &fi) in f.iter().enumerate() {
            inv[fi] = i;
        }
        assert_eq!(relabel(&r, &inv).unwrap(), t);
        assert_eq!(relabel(&t, &[0, 0, 1, 2]), Err(TreeError::NotABijection));
    }

    #[test]
    fn lambda_on_fig1() {
        let g = spk33();
        let r = fig1_r(&g);
        let p = VertexSet::from_iter([0, 1, 2]);
        assert_eq!(lambda(&r, p).unwrap(), (5, 2)); // x3 deepest at level 5
        assert_eq!(r.depth(r.root()), 0);
        // singleton clique
        assert_eq!(lambda(&r, VertexSet::singleton(4)).unwrap(), (1, 4));
        // vertices on different branches are rejected
        let t = ElimTree::from_parents(&[None, Some(0), Some(0), Some(1), Some(1), Some(2)])
            .unwrap();
        assert_eq!(lambda(&t, VertexSet::from_iter([3, 5])), Err(TreeError::CliqueNotOnBranch));
    }

    #[test]
    fn key_roundtrip_and_pack_order() {
        let t = fig5_t();
        let k = t.key();
        assert_eq!(ElimTree::from_key(&k).unwrap(), t);
        assert_eq!(k.0.len(), 4);
        let t2 = insert(&t, 0, 4, 3).unwrap();
        let k2 = t2.key();
        assert_eq!(k.0.len() + 1, k2.0.len());
        // packing preserves lexicographic comparisons at equal length
        let a = TreeKey(vec![0, 1, 2]);
        let b = TreeKey(vec![0, 2, 1]);
        assert_eq!(a.cmp(&b), a.pack().unwrap().cmp(&b.pack().unwrap()));
    }

    #[test]
    fn from_parents_rejects_garbage() {
        assert!(ElimTree::from_parents(&[]).is_none());
        assert!(ElimTree::from_parents(&[Some(1), Some(0)]).is_none()); // no root
        assert!(ElimTree::from_parents(&[None, None]).is_none()); // two roots
        assert!(ElimTree::from_parents(&[None, Some(2), Some(1)]).is_none()); // cycle
    }
}
