//! Simple undirected graphs on dense vertex ids, the named families used
//! throughout the crate, and the four structural operations (simplicial
//! vertex, true twin, false twin, twin-edge deletion).
//!
//! Vertices are `0..n-1`. Neighborhoods are stored as fixed-width bit masks,
//! so twin and clique predicates are single word operations. All target
//! instances are tiny (n <= 16 or so); the hard limit is [`MAX_VERTICES`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense vertex id.
pub type Vertex = usize;

/// Hard cap on vertex count, set by the `u32` bit-mask representation.
pub const MAX_VERTICES: usize = 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range (graph has {1} vertices)")]
    InvalidVertex(Vertex, usize),
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("graph with {0} vertices exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("vertex set {0:?} does not induce a clique")]
    NotAClique(Vec<Vertex>),
    #[error("clique must be nonempty")]
    EmptyClique,
    #[error("vertex set {0:?} is not a set of true twins")]
    NotTrueTwins(Vec<Vertex>),
    #[error("twin set must have at least two vertices")]
    TwinSetTooSmall,
    #[error("family parameter must be positive")]
    NonPositiveParam,
    #[error("threshold word must use only 'i' (isolated) and 'u' (universal), got {0:?}")]
    BadThresholdStep(char),
    #[error("unknown graph family {0:?}")]
    UnknownFamily(String),
    #[error("malformed family spec {0:?}, expected name:params")]
    BadFamilySpec(String),
}

/// Subset of vertices as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(pub u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(v: Vertex) -> Self {
        VertexSet(1 << v)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == 32 {
            VertexSet(u32::MAX)
        } else {
            VertexSet((1u32 << n) - 1)
        }
    }

    pub fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: Vertex) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: Vertex) {
        self.0 &= !(1 << v);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: VertexSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<Vertex> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as Vertex)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = Vertex> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as Vertex;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<Vertex> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet::from_iter(iter)
    }
}

/// Finite simple undirected graph with optional display labels.
///
/// Immutable after construction; the structural operations return new graphs.
/// A vertex added by an operation always receives id `n`, so encodings of
/// trees on derived graphs are stable.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph { n, adj: vec![VertexSet::EMPTY; n], labels: None })
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u != v {
                g.adj[u].insert(v);
                g.adj[v].insert(u);
            }
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.n
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.adj[u].contains(v)
    }

    /// Open neighborhood N(v).
    pub fn neighbors(&self, v: Vertex) -> VertexSet {
        self.adj[v]
    }

    /// Closed neighborhood N[v].
    pub fn closed_neighbors(&self, v: Vertex) -> VertexSet {
        self.adj[v].union(VertexSet::singleton(v))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Display name of a vertex; defaults to its 1-based id.
    pub fn label(&self, v: Vertex) -> String {
        match &self.labels {
            Some(ls) => ls[v].clone(),
            None => (v + 1).to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex(v, self.n))
        }
    }

    fn check_set(&self, s: VertexSet) -> Result<(), GraphError> {
        match s.iter().find(|&v| v >= self.n) {
            Some(v) => Err(GraphError::InvalidVertex(v, self.n)),
            None => Ok(()),
        }
    }

    // ----- predicates -----

    /// True iff every pair of distinct vertices in `k` is adjacent.
    pub fn is_clique(&self, k: VertexSet) -> bool {
        k.iter().all(|u| k.difference(VertexSet::singleton(u)).is_subset_of(self.adj[u]))
    }

    /// True iff all pairs in `w` are true twins: N[u] = N[v].
    pub fn is_true_twin_set(&self, w: VertexSet) -> bool {
        let mut it = w.iter();
        let Some(first) = it.next() else { return true };
        let nf = self.closed_neighbors(first);
        it.all(|v| self.closed_neighbors(v) == nf)
    }

    pub fn are_true_twins(&self, u: Vertex, v: Vertex) -> bool {
        self.closed_neighbors(u) == self.closed_neighbors(v)
    }

    pub fn are_false_twins(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u] == self.adj[v]
    }

    pub fn is_universal(&self, v: Vertex) -> bool {
        self.closed_neighbors(v) == self.vertex_set()
    }

    /// True iff N(v) induces a clique.
    pub fn is_simplicial(&self, v: Vertex) -> bool {
        self.is_clique(self.adj[v])
    }

    pub fn is_complete(&self) -> bool {
        (0..self.n).all(|v| self.is_universal(v))
    }

    /// Connected component containing `v`, restricted to `within`.
    pub fn component_of(&self, v: Vertex, within: VertexSet) -> VertexSet {
        debug_assert!(within.contains(v));
        let mut comp = VertexSet::singleton(v);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for u in frontier.iter() {
                next = next.union(self.adj[u].intersection(within).difference(comp));
            }
            comp = comp.union(next);
            frontier = next;
        }
        comp
    }

    /// Partition of the vertex set into connected components.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut remaining = self.vertex_set();
        let mut comps = Vec::new();
        while let Some(v) = remaining.first() {
            let c = self.component_of(v, remaining);
            comps.push(c);
            remaining = remaining.difference(c);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(0, self.vertex_set()) == self.vertex_set()
    }

    /// Restriction of connectivity to a subset: components of G[within].
    pub fn components_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut remaining = within;
        let mut comps = Vec::new();
        while let Some(v) = remaining.first() {
            let c = self.component_of(v, remaining);
            comps.push(c);
            remaining = remaining.difference(c);
        }
        comps
    }

    // ----- operations -----

    /// `G_K`: new vertex `n` adjacent exactly to the clique `k`.
    pub fn add_simplicial(&self, k: VertexSet) -> Result<Graph, GraphError> {
        self.check_set(k)?;
        if k.is_empty() {
            return Err(GraphError::EmptyClique);
        }
        if !self.is_clique(k) {
            return Err(GraphError::NotAClique(k.to_vec()));
        }
        let mut g = self.extend_by_one("x");
        for u in k.iter() {
            g.adj[u].insert(self.n);
            g.adj[self.n].insert(u);
        }
        Ok(g)
    }

    /// `G_v`: new vertex `n` with N[n] = N[v] ∪ {n}; in particular v and n adjacent.
    pub fn add_true_twin(&self, v: Vertex) -> Result<Graph, GraphError> {
        self.check_vertex(v)?;
        let mut g = self.extend_by_one(&format!("{}'", self.label(v)));
        for u in self.closed_neighbors(v).iter() {
            g.adj[u].insert(self.n);
            g.adj[self.n].insert(u);
        }
        Ok(g)
    }

    /// `G̃_v`: new vertex `n` with N(n) = N(v); v and n nonadjacent.
    pub fn add_false_twin(&self, v: Vertex) -> Result<Graph, GraphError> {
        self.check_vertex(v)?;
        let mut g = self.extend_by_one(&format!("{}'", self.label(v)));
        for u in self.neighbors(v).iter() {
            g.adj[u].insert(self.n);
            g.adj[self.n].insert(u);
        }
        Ok(g)
    }

    /// `G - S` where S = E(G[W]) for a true-twin set `w`, |w| >= 2.
    pub fn delete_twin_edges(&self, w: VertexSet) -> Result<Graph, GraphError> {
        self.check_set(w)?;
        if w.len() < 2 {
            return Err(GraphError::TwinSetTooSmall);
        }
        if !self.is_true_twin_set(w) {
            return Err(GraphError::NotTrueTwins(w.to_vec()));
        }
        let mut g = self.clone();
        for u in w.iter() {
            g.adj[u] = g.adj[u].difference(w);
        }
        Ok(g)
    }

    fn extend_by_one(&self, new_label: &str) -> Graph {
        assert!(self.n < MAX_VERTICES, "graph too large to extend");
        let mut adj = self.adj.clone();
        adj.push(VertexSet::EMPTY);
        let labels = self.labels.as_ref().map(|ls| {
            let mut ls = ls.clone();
            ls.push(new_label.to_string());
            ls
        });
        Graph { n: self.n + 1, adj, labels }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Step of a threshold-graph creation word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdStep {
    Isolated,
    Universal,
}

/// Named graph family, as accepted by the CLI mini-grammar `name:params`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Complete(usize),
    Path(usize),
    Star(usize),
    CompleteBipartite(usize, usize),
    CompleteSplit(usize, usize),
    Threshold(Vec<ThresholdStep>),
}

impl FamilySpec {
    /// Parse `complete:4`, `path:6`, `star:3`, `kpq:2,3`, `spk:2,3`,
    /// `threshold:iu` (word over i/u, applied to a single-vertex start).
    pub fn parse(s: &str) -> Result<FamilySpec, GraphError> {
        let (name, params) =
            s.split_once(':').ok_or_else(|| GraphError::BadFamilySpec(s.to_string()))?;
        let ints = || -> Result<Vec<usize>, GraphError> {
            params
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| GraphError::BadFamilySpec(s.to_string())))
                .collect()
        };
        let one = |v: Vec<usize>| -> Result<usize, GraphError> {
            if v.len() == 1 {
                Ok(v[0])
            } else {
                Err(GraphError::BadFamilySpec(s.to_string()))
            }
        };
        let two = |v: Vec<usize>| -> Result<(usize, usize), GraphError> {
            if v.len() == 2 {
                Ok((v[0], v[1]))
            } else {
                Err(GraphError::BadFamilySpec(s.to_string()))
            }
        };
        match name {
            "complete" => Ok(FamilySpec::Complete(one(ints()?)?)),
            "path" => Ok(FamilySpec::Path(one(ints()?)?)),
            "star" => Ok(FamilySpec::Star(one(ints()?)?)),
            "kpq" => two(ints()?).map(|(p, q)| FamilySpec::CompleteBipartite(p, q)),
            "spk" => two(ints()?).map(|(p, q)| FamilySpec::CompleteSplit(p, q)),
            "threshold" => {
                let mut steps = Vec::new();
                for c in params.chars() {
                    match c {
                        'i' => steps.push(ThresholdStep::Isolated),
                        'u' => steps.push(ThresholdStep::Universal),
                        other => return Err(GraphError::BadThresholdStep(other)),
                    }
                }
                Ok(FamilySpec::Threshold(steps))
            }
            _ => Err(GraphError::UnknownFamily(name.to_string())),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Complete(n) => write!(f, "complete:{n}"),
            FamilySpec::Path(n) => write!(f, "path:{n}"),
            FamilySpec::Star(q) => write!(f, "star:{q}"),
            FamilySpec::CompleteBipartite(p, q) => write!(f, "kpq:{p},{q}"),
            FamilySpec::CompleteSplit(p, q) => write!(f, "spk:{p},{q}"),
            FamilySpec::Threshold(steps) => {
                write!(f, "threshold:")?;
                for s in steps {
                    write!(f, "{}", if *s == ThresholdStep::Isolated { 'i' } else { 'u' })?;
                }
                Ok(())
            }
        }
    }
}

/// Build a named family member.
///
/// SPK_{p,q} gets clique P = {x_1..x_p} on ids 0..p-1 and independent set
/// Q = {y_1..y_q} on ids p..p+q-1, with all P-Q edges. K_{p,q} uses the same
/// layout without the clique edges. A star with q leaves is SPK_{1,q}.
pub fn make_family(spec: &FamilySpec) -> Result<Graph, GraphError> {
    match *spec {
        FamilySpec::Complete(n) => {
            check_pos(n)?;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    edges.push((u, v));
                }
            }
            let labels = (1..=n).map(|i| i.to_string()).collect();
            Ok(Graph::from_edges(n, &edges)?.with_labels(labels))
        }
        FamilySpec::Path(n) => {
            check_pos(n)?;
            let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
            let labels = (1..=n).map(|i| i.to_string()).collect();
            Ok(Graph::from_edges(n, &edges)?.with_labels(labels))
        }
        FamilySpec::Star(q) => make_family(&FamilySpec::CompleteSplit(1, q)),
        FamilySpec::CompleteBipartite(p, q) => {
            check_pos(p)?;
            check_pos(q)?;
            Ok(bipartite_core(p, q, false))
        }
        FamilySpec::CompleteSplit(p, q) => {
            check_pos(p)?;
            check_pos(q)?;
            Ok(bipartite_core(p, q, true))
        }
        FamilySpec::Threshold(ref steps) => {
            let mut g = Graph::empty(1)?.with_labels(vec!["v1".into()]);
            for (idx, step) in steps.iter().enumerate() {
                let n = g.n();
                assert!(n < MAX_VERTICES);
                let mut adj = g.adj.clone();
                adj.push(VertexSet::EMPTY);
                if *step == ThresholdStep::Universal {
                    for u in 0..n {
                        adj[u].insert(n);
                        adj[n].insert(u);
                    }
                }
                let mut labels = g.labels.clone().unwrap();
                labels.push(format!("v{}", idx + 2));
                g = Graph { n: n + 1, adj, labels: Some(labels) };
            }
            Ok(g)
        }
    }
}

fn bipartite_core(p: usize, q: usize, clique: bool) -> Graph {
    let n = p + q;
    let mut edges = Vec::new();
    if clique {
        for u in 0..p {
            for v in u + 1..p {
                edges.push((u, v));
            }
        }
    }
    for u in 0..p {
        for v in p..n {
            edges.push((u, v));
        }
    }
    let mut labels: Vec<String> = (1..=p).map(|i| format!("x{i}")).collect();
    labels.extend((1..=q).map(|i| format!("y{i}")));
    Graph::from_edges(n, &edges).unwrap().with_labels(labels)
}

fn check_pos(n: usize) -> Result<(), GraphError> {
    if n == 0 {
        Err(GraphError::NonPositiveParam)
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spk(p: usize, q: usize) -> Graph {
        make_family(&FamilySpec::CompleteSplit(p, q)).unwrap()
    }

    #[test]
    fn complete_4_has_6_edges_degree_3() {
        let g = make_family(&FamilySpec::Complete(4)).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!(g.vertices().all(|v| g.degree(v) == 3));
    }

    #[test]
    fn spk_33_matches_figure() {
        // 3 clique edges + 9 cross edges
        let g = spk(3, 3);
        assert_eq!(g.n(), 6);
        assert_eq!(g.edge_count(), 12);
        assert!(g.is_clique(VertexSet::from_iter([0, 1, 2])));
        assert!(g.is_true_twin_set(VertexSet::from_iter([0, 1, 2])));
        assert!(!g.has_edge(3, 4));
    }

    #[test]
    fn k22_is_spk22_minus_clique_edge() {
        let kpq = make_family(&FamilySpec::CompleteBipartite(2, 2)).unwrap();
        assert_eq!(kpq.edge_count(), 4);
        let spk22 = spk(2, 2);
        assert_eq!(spk22.edge_count(), 5);
        let mut expect = spk22.clone();
        expect = expect.delete_twin_edges(VertexSet::from_iter([0, 1])).unwrap();
        assert_eq!(expect.edges(), kpq.edges());
    }

    #[test]
    fn add_simplicial_k3_gives_k4() {
        let k3 = make_family(&FamilySpec::Complete(3)).unwrap();
        let g = k3.add_simplicial(VertexSet::from_iter([0, 1, 2])).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 6);
        assert!(g.is_complete());
        assert!(g.is_simplicial(3));
    }

    #[test]
    fn add_simplicial_pendant_and_rejections() {
        let p3 = make_family(&FamilySpec::Path(3)).unwrap();
        let g = p3.add_simplicial(VertexSet::singleton(1)).unwrap();
        assert_eq!(g.degree(3), 1);
        assert!(g.has_edge(3, 1));
        // {0, 2} is not a clique in the path 0-1-2
        assert_eq!(
            p3.add_simplicial(VertexSet::from_iter([0, 2])),
            Err(GraphError::NotAClique(vec![0, 2]))
        );
        assert_eq!(p3.add_simplicial(VertexSet::EMPTY), Err(GraphError::EmptyClique));
        // diamond-minus-one-edge check: N(x) = {a, b} for K = {a, b} on P3 edge
        let g2 = p3.add_simplicial(VertexSet::from_iter([0, 1])).unwrap();
        assert_eq!(g2.neighbors(3), VertexSet::from_iter([0, 1]));
    }

    #[test]
    fn true_twin_of_clique_vertex_grows_clique() {
        let k3 = make_family(&FamilySpec::Complete(3)).unwrap();
        let g = k3.add_true_twin(1).unwrap();
        assert!(g.is_complete());
        assert!(g.is_true_twin_set(VertexSet::from_iter([1, 3])));
    }

    #[test]
    fn true_twin_on_4_cycle() {
        // a,b,c,v cycle: v' must end up adjacent to a, c, v
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let g = c4.add_true_twin(3).unwrap();
        assert_eq!(g.neighbors(4), VertexSet::from_iter([0, 2, 3]));
        assert!(g.is_true_twin_set(VertexSet::from_iter([3, 4])));
    }

    #[test]
    fn false_twin_matches_delete_twin_edges_identity() {
        let graphs = [
            spk(2, 3),
            make_family(&FamilySpec::Path(4)).unwrap(),
            make_family(&FamilySpec::Complete(4)).unwrap(),
        ];
        for g in &graphs {
            for v in g.vertices() {
                let ft = g.add_false_twin(v).unwrap();
                let tt = g.add_true_twin(v).unwrap();
                let w = VertexSet::from_iter([v, g.n()]);
                let cut = tt.delete_twin_edges(w).unwrap();
                assert_eq!(ft.edges(), cut.edges());
                assert_eq!(ft.neighbors(v), ft.neighbors(g.n()));
                assert!(!ft.has_edge(v, g.n()));
            }
        }
    }

    #[test]
    fn false_twin_of_star_leaf_and_spk_qside() {
        let star = make_family(&FamilySpec::Star(3)).unwrap();
        let g = star.add_false_twin(1).unwrap(); // y1 is a leaf
        assert_eq!(g.n(), 5);
        assert_eq!(g.edges(), make_family(&FamilySpec::Star(4)).unwrap().edges());

        let s = spk(2, 2);
        let bigger = s.add_false_twin(2).unwrap(); // y1
        assert_eq!(bigger.edges(), spk(2, 3).edges());
    }

    #[test]
    fn delete_twin_edges_cases() {
        let k4 = make_family(&FamilySpec::Complete(4)).unwrap();
        let g = k4.delete_twin_edges(VertexSet::from_iter([2, 3])).unwrap();
        assert_eq!(g.edges(), spk(2, 2).edges());

        let s = spk(2, 2);
        let kpq = s.delete_twin_edges(VertexSet::from_iter([0, 1])).unwrap();
        assert_eq!(kpq.edges(), make_family(&FamilySpec::CompleteBipartite(2, 2)).unwrap().edges());

        // removing all edges of K_3 disconnects; constructors allow it
        let k3 = make_family(&FamilySpec::Complete(3)).unwrap();
        let e = k3.delete_twin_edges(VertexSet::from_iter([0, 1, 2])).unwrap();
        assert_eq!(e.edge_count(), 0);
        assert!(!e.is_connected());

        // W must be twins
        let p3 = make_family(&FamilySpec::Path(3)).unwrap();
        assert!(matches!(
            p3.delete_twin_edges(VertexSet::from_iter([0, 1])),
            Err(GraphError::NotTrueTwins(_))
        ));
    }

    #[test]
    fn delete_twin_edges_keeps_outside_edges() {
        let g = spk(3, 2);
        let w = VertexSet::from_iter([0, 1, 2]);
        let cut = g.delete_twin_edges(w).unwrap();
        for (u, v) in g.edges() {
            let inside = w.contains(u) && w.contains(v);
            assert_eq!(cut.has_edge(u, v), !inside);
        }
    }

    #[test]
    fn predicates() {
        let s = spk(3, 3);
        assert!(s.is_true_twin_set(VertexSet::from_iter([0, 1, 2])));
        assert!(!s.is_true_twin_set(VertexSet::from_iter([0, 3])));
        let k5 = make_family(&FamilySpec::Complete(5)).unwrap();
        assert!(k5.vertices().all(|v| k5.is_universal(v)));
        let p4 = make_family(&FamilySpec::Path(4)).unwrap();
        assert!(p4.is_simplicial(0));
        assert!(p4.is_simplicial(3));
        assert!(!p4.is_simplicial(1));
        assert!(!p4.is_simplicial(2));
    }

    #[test]
    fn components() {
        let g = Graph::from_edges(5, &[(0, 1), (2, 3)]).unwrap();
        let comps = g.connected_components();
        assert_eq!(comps.len(), 3);
        assert!(!g.is_connected());
    }

    #[test]
    fn threshold_words() {
        // single vertex + universal = K_2
        let g = make_family(&FamilySpec::parse("threshold:u").unwrap()).unwrap();
        assert_eq!(g.edge_count(), 1);
        // i then u: P_3 shape (center is the universal addition)
        let g = make_family(&FamilySpec::parse("threshold:iu").unwrap()).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.is_universal(2));
        // trailing isolated leaves it disconnected; constructors permit it
        let g = make_family(&FamilySpec::parse("threshold:ui").unwrap()).unwrap();
        assert!(!g.is_connected());
    }

    #[test]
    fn family_spec_parse_roundtrip() {
        for s in ["complete:4", "path:6", "star:3", "kpq:2,3", "spk:3,3", "threshold:iu"] {
            let spec = FamilySpec::parse(s).unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!(FamilySpec::parse("complete").is_err());
        assert!(FamilySpec::parse("blah:3").is_err());
        assert!(FamilySpec::parse("complete:0").map(|s| make_family(&s)).unwrap().is_err());
    }
}
