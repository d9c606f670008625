//! Structure induced on rotation graphs by the graph operations: the tree
//! families P^x(T), P(T), P̃(T), partition and edge-decomposition checks,
//! embedded copies of R(G), W-special trees, and the quotient map π onto
//! R(G - S).

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::report::Check;
use crate::rotation::{rotated_pair, RotationGraph};
use crate::tree::{self, ElimTree, TreeError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("tree error: {0}")]
    Tree(#[from] TreeError),
    #[error("graphs are not related by the claimed operation: {0}")]
    WrongOperation(String),
    #[error("tree {0} could not be classified: {1}")]
    Unclassifiable(String, String),
    #[error("projection of a source tree is not a vertex of the target ({0})")]
    ProjectionMissing(String),
    #[error("projected tree fails validation on the edge-deleted graph ({0})")]
    ProjectionInvalid(String),
    #[error("quotient invariant violated: {0}")]
    QuotientInvariant(String),
    #[error("{0} is not a set of at least two true twins")]
    NotTrueTwins(String),
    #[error("operation undefined on a single-vertex tree")]
    SingleVertex,
}

/// Which of the three vertex-adding operations relates a pair of graphs.
/// The new vertex always carries id |V(small)|.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpMode {
    Simplicial { k: VertexSet },
    TrueTwin { v: Vertex },
    FalseTwin { v: Vertex },
}

impl OpMode {
    pub fn name(&self) -> &'static str {
        match self {
            OpMode::Simplicial { .. } => "simplicial",
            OpMode::TrueTwin { .. } => "true_twin",
            OpMode::FalseTwin { .. } => "false_twin",
        }
    }

    pub fn apply(&self, g: &Graph) -> Result<Graph, crate::graph::GraphError> {
        match *self {
            OpMode::Simplicial { k } => g.add_simplicial(k),
            OpMode::TrueTwin { v } => g.add_true_twin(v),
            OpMode::FalseTwin { v } => g.add_false_twin(v),
        }
    }
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

/// P^x(T): the trees T(0), ..., T(λ(T)+1) obtained by inserting the new
/// vertex x = |V(G)| along the branch to the deepest K-vertex. Consecutive
/// members are adjacent in R(G_K), so the list is in path order.
pub fn family_px(k: VertexSet, t: &ElimTree) -> Result<Vec<ElimTree>, StructureError> {
    let (lam, v_lam) = tree::lambda(t, k)?;
    let x = t.n();
    (0..=lam + 1).map(|i| tree::insert(t, i, x, v_lam).map_err(Into::into)).collect()
}

/// P(T): the 2(d_{T,v}+1) trees T(0,1), ..., T(d,1), T(d,2), ..., T(0,2) on
/// G_v, in path order. The second half is the image of the first under the
/// v/v' swap.
pub fn family_p(v: Vertex, t: &ElimTree) -> Result<Vec<ElimTree>, StructureError> {
    let d = t.depth(v);
    let twin = t.n();
    let mut out: Vec<ElimTree> = Vec::with_capacity(2 * (d + 1));
    for i in 0..=d {
        out.push(tree::insert(t, i, twin, v)?);
    }
    let swap = tree::swap_map(twin + 1, v, twin);
    for i in (0..=d).rev() {
        out.push(tree::relabel(&out[i], &swap)?);
    }
    Ok(out)
}

/// P̃(T) on G̃_v: same as P(T) unless v is a leaf of T, in which case the two
/// middle trees collapse into the single wedge tree with v and v' leaves
/// under v's parent. Path order follows the corollary:
/// T(0,1), ..., T(k-1,1), T_∧, T(k-1,2), ..., T(0,2).
pub fn family_ptilde(v: Vertex, t: &ElimTree) -> Result<Vec<ElimTree>, StructureError> {
    let full = family_p(v, t)?;
    if !t.is_leaf(v) {
        return Ok(full);
    }
    let d = t.depth(v);
    let q = t.parent(v).ok_or(StructureError::SingleVertex)?;
    // a new leaf child of q sits at level depth(q) + 1 = d
    let wedge = tree::insert(t, d, t.n(), q)?;
    let mut out = full[..d].to_vec();
    out.push(wedge);
    out.extend_from_slice(&full[d + 2..]);
    Ok(out)
}

pub fn build_family(mode: OpMode, t: &ElimTree) -> Result<Vec<ElimTree>, StructureError> {
    match mode {
        OpMode::Simplicial { k } => family_px(k, t),
        OpMode::TrueTwin { v } => family_p(v, t),
        OpMode::FalseTwin { v } => family_ptilde(v, t),
    }
}

// ---------------------------------------------------------------------------
// Classification of big trees into families
// ---------------------------------------------------------------------------

/// Position of a tree of the big rotation graph within its family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemberPos {
    /// T(i) in P^x(T); `tip` marks i = λ(T)+1, where x is a leaf.
    Ins { i: u8, tip: bool },
    /// T(i, j) in P(T) or P̃(T).
    Twin { i: u8, j: u8 },
    /// T_∧ in P̃(T).
    Wedge,
}

/// Assignment of every vertex of R(big) to its family and position. This is
/// the single source of truth for i/j indexing: edge classification and the
/// lifted colorings both read from it.
pub struct FamilyIndex {
    pub mode: OpMode,
    /// ordinal in R(small) of the family owner, per big ordinal.
    pub small_of: Vec<u32>,
    pub pos: Vec<MemberPos>,
    /// λ(T) (simplicial) or d_{T,v} (twin modes), per small ordinal.
    pub k_of_small: Vec<u8>,
    /// false-twin mode: whether the family of a small ordinal was contracted
    /// (v is a leaf there, so the path is one shorter).
    pub contracted: Vec<bool>,
}

impl FamilyIndex {
    /// Linear position along the family path, matching the order returned by
    /// [`build_family`].
    pub fn path_pos(&self, ord: usize) -> usize {
        let small = self.small_of[ord] as usize;
        let k = self.k_of_small[small] as usize;
        match self.pos[ord] {
            MemberPos::Ins { i, .. } => i as usize,
            MemberPos::Wedge => k,
            MemberPos::Twin { i, j } => {
                if j == 1 {
                    i as usize
                } else if self.contracted[small] {
                    2 * k - i as usize
                } else {
                    2 * k + 1 - i as usize
                }
            }
        }
    }
}

/// Classify every vertex of `rg_big` as a member T(i), T(i,j) or T_∧ of the
/// family of a vertex of `rg_small`. Fails if the graphs are not related by
/// `mode`, or if some tree does not fit the catalog (which would contradict
/// the partition result).
pub fn classify_families(
    rg_big: &RotationGraph,
    rg_small: &RotationGraph,
    mode: OpMode,
) -> Result<FamilyIndex, StructureError> {
    let g_small = rg_small.graph();
    let expected =
        mode.apply(g_small).map_err(|e| StructureError::WrongOperation(e.to_string()))?;
    if expected.n() != rg_big.graph().n() || expected.edges() != rg_big.graph().edges() {
        return Err(StructureError::WrongOperation(format!(
            "{} applied to the small graph does not give the big graph",
            mode.name()
        )));
    }
    let new_vertex = g_small.n();

    let k_of_small: Vec<u8> = (0..rg_small.len())
        .map(|o| {
            let t = rg_small.tree(o);
            let k = match mode {
                OpMode::Simplicial { k } => tree::lambda(&t, k)?.0,
                OpMode::TrueTwin { v } | OpMode::FalseTwin { v } => t.depth(v),
            };
            Ok(k as u8)
        })
        .collect::<Result<_, TreeError>>()?;
    let contracted: Vec<bool> = (0..rg_small.len())
        .map(|o| match mode {
            OpMode::FalseTwin { v } => rg_small.tree(o).is_leaf(v),
            _ => false,
        })
        .collect();

    let mut small_of = vec![0u32; rg_big.len()];
    let mut pos = vec![MemberPos::Wedge; rg_big.len()];
    for ord in 0..rg_big.len() {
        let b = rg_big.tree(ord);
        let (small_tree, p) = classify_one(&b, mode, new_vertex)?;
        let small_ord = rg_small.ordinal_of(&small_tree).ok_or_else(|| {
            StructureError::Unclassifiable(
                b.key().to_hex(),
                "eliminated tree is not a vertex of the small rotation graph".into(),
            )
        })?;
        small_of[ord] = small_ord as u32;
        pos[ord] = p;
    }
    Ok(FamilyIndex { mode, small_of, pos, k_of_small, contracted })
}

fn classify_one(
    b: &ElimTree,
    mode: OpMode,
    new_vertex: Vertex,
) -> Result<(ElimTree, MemberPos), StructureError> {
    let fail = |msg: &str| StructureError::Unclassifiable(b.key().to_hex(), msg.into());
    match mode {
        OpMode::Simplicial { .. } => {
            let i = b.depth(new_vertex);
            let tip = b.is_leaf(new_vertex);
            let t = tree::eliminate(b, new_vertex)?;
            Ok((t, MemberPos::Ins { i: i as u8, tip }))
        }
        OpMode::TrueTwin { v } | OpMode::FalseTwin { v } => {
            if b.is_ancestor_or_self(new_vertex, v) {
                let i = b.depth(new_vertex);
                let t = tree::eliminate(b, new_vertex)?;
                Ok((t, MemberPos::Twin { i: i as u8, j: 1 }))
            } else if b.is_ancestor_or_self(v, new_vertex) {
                let i = b.depth(v);
                let swapped = tree::relabel(b, &tree::swap_map(b.n(), v, new_vertex))?;
                let t = tree::eliminate(&swapped, new_vertex)?;
                Ok((t, MemberPos::Twin { i: i as u8, j: 2 }))
            } else if matches!(mode, OpMode::FalseTwin { .. })
                && b.is_leaf(v)
                && b.is_leaf(new_vertex)
                && b.parent(v).is_some()
                && b.parent(v) == b.parent(new_vertex)
            {
                let t = tree::eliminate(b, new_vertex)?;
                Ok((t, MemberPos::Wedge))
            } else {
                Err(fail("twin vertices neither comparable nor wedge leaves"))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Partition verification
// ---------------------------------------------------------------------------

/// Check that the families generated from every vertex of R(small) are
/// pairwise disjoint, cover V(R(big)) exactly, and each induce a path in
/// R(big) in the documented order.
pub fn verify_partition(
    rg_big: &RotationGraph,
    rg_small: &RotationGraph,
    mode: OpMode,
    instance: &str,
) -> Check {
    let name = format!("partition[{}]", mode.name());
    let mut violations = Vec::new();
    let mut owner: Vec<Option<u32>> = vec![None; rg_big.len()];
    let mut covered = 0usize;
    for small in 0..rg_small.len() {
        let t = rg_small.tree(small);
        let family = match build_family(mode, &t) {
            Ok(f) => f,
            Err(e) => {
                violations.push(format!("family of small ordinal {small}: {e}"));
                continue;
            }
        };
        let mut ords = Vec::with_capacity(family.len());
        for (idx, member) in family.iter().enumerate() {
            if !matches!(tree::validate(rg_big.graph(), member), Ok(true)) {
                violations.push(format!(
                    "member {idx} of family {small} is not a search tree on the big graph"
                ));
            }
            match rg_big.ordinal_of(member) {
                Some(o) => {
                    match owner[o] {
                        Some(prev) => violations.push(format!(
                            "tree {} lies in families {prev} and {small}",
                            member.key().to_hex()
                        )),
                        None => {
                            owner[o] = Some(small as u32);
                            covered += 1;
                        }
                    }
                    ords.push(o);
                }
                None => violations.push(format!(
                    "family member {} is not a vertex of R(big)",
                    member.key().to_hex()
                )),
            }
        }
        // induced path: consecutive adjacent, nothing else adjacent
        for a in 0..ords.len() {
            for b in a + 1..ords.len() {
                let adj = rg_big.are_adjacent(ords[a], ords[b]);
                if b == a + 1 && !adj {
                    violations.push(format!("family {small}: members {a},{b} should be adjacent"));
                }
                if b > a + 1 && adj {
                    violations.push(format!(
                        "family {small}: non-consecutive members {a},{b} are adjacent"
                    ));
                }
            }
        }
    }
    if covered != rg_big.len() {
        violations.push(format!("families cover {covered} of {} vertices", rg_big.len()));
    }
    truncate_witnesses(&mut violations);
    Check::from_violations(name, instance, violations)
}

// ---------------------------------------------------------------------------
// Edge decomposition
// ---------------------------------------------------------------------------

/// Classification counts for the edges of R(big), per the case catalog.
#[derive(Debug, Default)]
pub struct DecompReport {
    pub intra_edges: usize,
    /// inter-family edges joining equal positions (cases 1, 2(a)i, 3)
    pub aligned: usize,
    /// tip-to-tip edges T(λ+1) -- T'(λ'+1) (simplicial case 3)
    pub tips: usize,
    /// offset edges from case 2(a)ii
    pub shifted: usize,
    /// contracted wedge pairs T_∧ -- T'_∧ (false-twin mode)
    pub wedge_pairs: usize,
    pub five_cycles_verified: usize,
    pub violations: Vec<String>,
}

impl DecompReport {
    pub fn into_check(mut self, mode: OpMode, instance: &str) -> Check {
        truncate_witnesses(&mut self.violations);
        let name = format!("edge_decomposition[{}]", mode.name());
        if self.violations.is_empty() {
            let mut c = Check::pass(name, instance);
            c.witnesses.push(format!(
                "intra={} aligned={} tips={} shifted={} wedge={} five_cycles={}",
                self.intra_edges,
                self.aligned,
                self.tips,
                self.shifted,
                self.wedge_pairs,
                self.five_cycles_verified
            ));
            c
        } else {
            Check::fail(name, instance, self.violations)
        }
    }
}

/// Classify every edge of R(big) as intra-family (a path edge) or
/// inter-family; check that inter-family edges only join families adjacent
/// in R(small), with level offsets in {-1, 0, +1}; verify the 5-cycle
/// pattern wherever a case-2(a)ii edge occurs; and optionally assert that no
/// such edge exists (the situation when K consists of universal vertices, or
/// v is universal).
pub fn verify_edge_decomposition(
    rg_big: &RotationGraph,
    rg_small: &RotationGraph,
    fam: &FamilyIndex,
    expect_no_shift: bool,
) -> DecompReport {
    let mut rep = DecompReport::default();
    // reverse lookup (family, position) -> big ordinal, for 5-cycle checks
    let mut member: HashMap<(u32, u8, u8), u32> = HashMap::new();
    for ord in 0..rg_big.len() {
        let key = match fam.pos[ord] {
            MemberPos::Ins { i, .. } => (fam.small_of[ord], i, 0u8),
            MemberPos::Twin { i, j } => (fam.small_of[ord], i, j),
            MemberPos::Wedge => (fam.small_of[ord], u8::MAX, 3u8),
        };
        member.insert(key, ord as u32);
    }
    // shifted edges grouped per ordered family pair (deeper side first), per j
    let mut shifted_at: HashMap<(u32, u32, u8), Vec<u8>> = HashMap::new();

    for (a, b) in rg_big.edges() {
        let (fa, fb) = (fam.small_of[a], fam.small_of[b]);
        if fa == fb {
            rep.intra_edges += 1;
            let (pa, pb) = (fam.path_pos(a), fam.path_pos(b));
            if pa.abs_diff(pb) != 1 {
                rep.violations.push(format!(
                    "intra-family edge {a}-{b} joins path positions {pa} and {pb}"
                ));
            }
            continue;
        }
        if !rg_small.are_adjacent(fa as usize, fb as usize) {
            rep.violations.push(format!(
                "inter-family edge {a}-{b} joins families {fa},{fb} not adjacent in R(small)"
            ));
            continue;
        }
        match (fam.pos[a], fam.pos[b]) {
            (MemberPos::Ins { i: ia, tip: ta }, MemberPos::Ins { i: ib, tip: tb }) => {
                if ta && tb {
                    rep.tips += 1;
                } else if ia == ib {
                    rep.aligned += 1;
                } else if ia.abs_diff(ib) == 1 {
                    rep.shifted += 1;
                    // orient: the family of the deeper endpoint is the T side
                    let (hi, lo, l) = if ia > ib { (fa, fb, ib) } else { (fb, fa, ia) };
                    shifted_at.entry((hi, lo, 0)).or_default().push(l);
                } else {
                    rep.violations
                        .push(format!("edge {a}-{b}: insertion levels {ia},{ib} differ by >1"));
                }
            }
            (MemberPos::Twin { i: ia, j: ja }, MemberPos::Twin { i: ib, j: jb }) => {
                if ja != jb {
                    rep.violations.push(format!(
                        "inter-family edge {a}-{b} crosses the two mirror halves (j={ja},{jb})"
                    ));
                } else if ia == ib {
                    rep.aligned += 1;
                } else if ia.abs_diff(ib) == 1 {
                    rep.shifted += 1;
                    let (hi, lo, l) = if ia > ib { (fa, fb, ib) } else { (fb, fa, ia) };
                    shifted_at.entry((hi, lo, ja)).or_default().push(l);
                } else {
                    rep.violations
                        .push(format!("edge {a}-{b}: twin levels {ia},{ib} differ by >1"));
                }
            }
            (MemberPos::Wedge, MemberPos::Wedge) => rep.wedge_pairs += 1,
            _ => rep
                .violations
                .push(format!("edge {a}-{b} pairs a wedge tree with a non-wedge tree")),
        }
    }

    if expect_no_shift && rep.shifted > 0 {
        rep.violations.push(format!(
            "{} case-2(a)ii edges found although the relevant vertices are universal",
            rep.shifted
        ));
    }

    // every family pair with shifted edges must exhibit the 5-cycle
    // T(l-1) T(l) T(l+1) T'(l) T'(l-1) at the smallest shifted level l
    for ((hi, lo, j), mut levels) in shifted_at {
        levels.sort_unstable();
        let l = levels[0];
        if l == 0 {
            rep.violations.push(format!(
                "families {hi},{lo}: shifted edge at level 0 contradicts the catalog"
            ));
            continue;
        }
        let get = |f: u32, i: u8| member.get(&(f, i, j)).copied();
        let cycle =
            [get(hi, l - 1), get(hi, l), get(hi, l + 1), get(lo, l), get(lo, l - 1)];
        if cycle.iter().any(|o| o.is_none()) {
            rep.violations.push(format!(
                "families {hi},{lo}: missing members for the case-2(a)ii 5-cycle at l={l}"
            ));
            continue;
        }
        let c: Vec<usize> = cycle.iter().map(|o| o.unwrap() as usize).collect();
        let ok = (0..5).all(|t| rg_big.are_adjacent(c[t], c[(t + 1) % 5]));
        if ok {
            rep.five_cycles_verified += 1;
        } else {
            rep.violations.push(format!(
                "families {hi},{lo}: vertices {c:?} do not form the expected 5-cycle"
            ));
        }
    }
    rep
}

// ---------------------------------------------------------------------------
// Embedded copies
// ---------------------------------------------------------------------------

/// Which embedded copy of R(small) to extract: trees where the new vertex is
/// the root (T(0), T(0,1)), or its mirror position (the leaf tip T(λ+1) for
/// the simplicial operation, T(0,2) for the twin operations).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopyAnchor {
    Root,
    Deepest,
}

/// Check that the explicit bijection onto an embedded copy (f_0, f_1, or f)
/// is an isomorphism onto an induced subgraph of R(big), edge for edge. No
/// general isomorphism search is involved.
pub fn embedded_copies(
    rg_big: &RotationGraph,
    rg_small: &RotationGraph,
    mode: OpMode,
    anchor: CopyAnchor,
    instance: &str,
) -> Check {
    let name = format!("embedded_copy[{},{:?}]", mode.name(), anchor);
    let mut violations = Vec::new();
    let mut image: Vec<Option<u32>> = vec![None; rg_small.len()];
    let mut preimage: HashMap<u32, u32> = HashMap::new();
    for small in 0..rg_small.len() {
        let t = rg_small.tree(small);
        let big_tree = match copy_image(&t, mode, anchor) {
            Ok(bt) => bt,
            Err(e) => {
                violations.push(format!("image of small ordinal {small}: {e}"));
                continue;
            }
        };
        match rg_big.ordinal_of(&big_tree) {
            Some(o) => {
                if preimage.insert(o as u32, small as u32).is_some() {
                    violations.push(format!("bijection not injective at big ordinal {o}"));
                }
                image[small] = Some(o as u32);
            }
            None => violations.push(format!(
                "image {} of small ordinal {small} is not a vertex of R(big)",
                big_tree.key().to_hex()
            )),
        }
    }
    // forward: small edges map to big edges
    for (a, b) in rg_small.edges() {
        if let (Some(ia), Some(ib)) = (image[a], image[b]) {
            if !rg_big.are_adjacent(ia as usize, ib as usize) {
                violations.push(format!("small edge {a}-{b} has non-adjacent images"));
            }
        }
    }
    // backward: edges inside the image come from small edges
    let mut image_edges = 0usize;
    for (&o, &small) in preimage.iter() {
        for &nb in rg_big.neighbors_of(o as usize) {
            if let Some(&other) = preimage.get(&nb) {
                if (o as usize) < nb as usize {
                    image_edges += 1;
                    if !rg_small.are_adjacent(small as usize, other as usize) {
                        violations.push(format!(
                            "induced edge {o}-{nb} has non-adjacent preimages {small}-{other}"
                        ));
                    }
                }
            }
        }
    }
    if image_edges != rg_small.edge_count() {
        violations.push(format!(
            "induced copy has {image_edges} edges, R(small) has {}",
            rg_small.edge_count()
        ));
    }
    truncate_witnesses(&mut violations);
    Check::from_violations(name, instance, violations)
}

fn copy_image(t: &ElimTree, mode: OpMode, anchor: CopyAnchor) -> Result<ElimTree, StructureError> {
    let new_vertex = t.n();
    match mode {
        OpMode::Simplicial { k } => {
            let (lam, v_lam) = tree::lambda(t, k)?;
            let i = match anchor {
                CopyAnchor::Root => 0,
                CopyAnchor::Deepest => lam + 1,
            };
            Ok(tree::insert(t, i, new_vertex, v_lam)?)
        }
        OpMode::TrueTwin { v } | OpMode::FalseTwin { v } => {
            let t01 = tree::insert(t, 0, new_vertex, v)?;
            match anchor {
                CopyAnchor::Root => Ok(t01),
                CopyAnchor::Deepest => {
                    Ok(tree::relabel(&t01, &tree::swap_map(new_vertex + 1, v, new_vertex))?)
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// W-special trees and the quotient map
// ---------------------------------------------------------------------------

/// If T is W-special, return (L_T, q_T): the unique chain of at least two
/// W-vertices hanging as a path whose bottom is a leaf of T and whose top
/// attaches to a vertex outside W.
pub fn w_special(w: VertexSet, t: &ElimTree) -> Option<(VertexSet, Vertex)> {
    let depths = t.depths();
    let deepest = w.iter().max_by_key(|&v| depths[v])?;
    if !t.is_leaf(deepest) {
        return None;
    }
    let mut chain = VertexSet::singleton(deepest);
    let mut top = deepest;
    while let Some(p) = t.parent(top) {
        if w.contains(p) {
            chain.insert(p);
            top = p;
        } else {
            break;
        }
    }
    let q = t.parent(top)?;
    if chain.len() < 2 {
        return None;
    }
    Some((chain, q))
}

/// Spec-facing wrapper that also verifies W is a true-twin set of `g`.
pub fn is_w_special(
    g: &Graph,
    w: VertexSet,
    t: &ElimTree,
) -> Result<Option<(VertexSet, Vertex)>, StructureError> {
    if !g.is_true_twin_set(w) || w.len() < 2 {
        return Err(StructureError::NotTrueTwins(format!("{w:?}")));
    }
    Ok(w_special(w, t))
}

/// π(T): the wedge tree T_∧ for W-special trees (all of L_T re-hung as
/// leaves below q_T), T itself otherwise.
pub fn project(w: VertexSet, t: &ElimTree) -> ElimTree {
    match w_special(w, t) {
        Some((chain, q)) => {
            let parents: Vec<Option<Vertex>> = (0..t.n())
                .map(|v| if chain.contains(v) { Some(q) } else { t.parent(v) })
                .collect();
            ElimTree::from_parents(&parents).expect("projection keeps a rooted tree")
        }
        None => t.clone(),
    }
}

/// Surjection from V(R(G)) onto V(R(G-S)) realizing the quotient map π.
pub struct QuotientMap<'a> {
    pub source: &'a RotationGraph,
    pub target: &'a RotationGraph,
    pub w: VertexSet,
    /// target ordinal per source ordinal.
    pub map: Vec<u32>,
}

impl QuotientMap<'_> {
    /// A source edge is W-special exactly when its endpoints collapse.
    pub fn is_special_edge(&self, a: usize, b: usize) -> bool {
        self.map[a] == self.map[b]
    }
}

/// Build π and check every invariant: surjectivity, the quotient-map law,
/// the fiber characterization (each fiber of size > 1 induces a copy of
/// R(K_{|L|}) through the chain-order correspondence), and that contracting
/// all W-special edges of R(G) yields exactly R(G-S).
pub fn build_quotient<'a>(
    rg_g: &'a RotationGraph,
    w: VertexSet,
    rg_gms: &'a RotationGraph,
) -> Result<QuotientMap<'a>, StructureError> {
    let g = rg_g.graph();
    if !g.is_true_twin_set(w) || w.len() < 2 {
        return Err(StructureError::NotTrueTwins(format!("{w:?}")));
    }
    let expected =
        g.delete_twin_edges(w).map_err(|e| StructureError::WrongOperation(e.to_string()))?;
    if expected.edges() != rg_gms.graph().edges() || expected.n() != rg_gms.graph().n() {
        return Err(StructureError::WrongOperation(
            "target is not the source minus the twin-set edges".into(),
        ));
    }

    let mut map = vec![0u32; rg_g.len()];
    for ord in 0..rg_g.len() {
        let t = rg_g.tree(ord);
        let image = project(w, &t);
        if w_special(w, &t).is_some() && !matches!(tree::validate(rg_gms.graph(), &image), Ok(true))
        {
            return Err(StructureError::ProjectionInvalid(image.key().to_hex()));
        }
        map[ord] = rg_gms
            .ordinal_of(&image)
            .ok_or_else(|| StructureError::ProjectionMissing(image.key().to_hex()))?
            as u32;
    }

    // surjectivity
    let mut hit = vec![false; rg_gms.len()];
    for &m in &map {
        hit[m as usize] = true;
    }
    if let Some(miss) = hit.iter().position(|&h| !h) {
        return Err(StructureError::QuotientInvariant(format!(
            "target ordinal {miss} has empty fiber"
        )));
    }

    // quotient law; special edges collapse, nothing else does
    let mut contracted_edges: std::collections::HashSet<(u32, u32)> =
        std::collections::HashSet::new();
    for (a, b) in rg_g.edges() {
        let (ma, mb) = (map[a], map[b]);
        if ma == mb {
            let ta = rg_g.tree(a);
            let tb = rg_g.tree(b);
            let pair = rotated_pair(&ta, &tb).ok_or_else(|| {
                StructureError::QuotientInvariant(format!("edge {a}-{b} has no rotated pair"))
            })?;
            let special = w.contains(pair.0)
                && w.contains(pair.1)
                && w_special(w, &ta).is_some()
                && w_special(w, &tb).is_some();
            if !special {
                return Err(StructureError::QuotientInvariant(format!(
                    "non-special edge {a}-{b} collapses under the map"
                )));
            }
        } else {
            if !rg_gms.are_adjacent(ma as usize, mb as usize) {
                return Err(StructureError::QuotientInvariant(format!(
                    "edge {a}-{b} maps to non-adjacent targets {ma},{mb}"
                )));
            }
            contracted_edges.insert((ma.min(mb), ma.max(mb)));
        }
    }

    // contraction equality: mapped edges are exactly the target edges
    let target_edges: std::collections::HashSet<(u32, u32)> =
        rg_gms.edges().map(|(a, b)| (a as u32, b as u32)).collect();
    if contracted_edges != target_edges {
        let missing = target_edges.difference(&contracted_edges).next();
        let extra = contracted_edges.difference(&target_edges).next();
        return Err(StructureError::QuotientInvariant(format!(
            "contracted edge set differs from the target: missing {missing:?}, extra {extra:?}"
        )));
    }

    // fibers
    let mut fibers: Vec<Vec<u32>> = vec![Vec::new(); rg_gms.len()];
    for (ord, &m) in map.iter().enumerate() {
        fibers[m as usize].push(ord as u32);
    }
    for (tgt, fiber) in fibers.iter().enumerate() {
        check_fiber(rg_g, rg_gms, w, tgt, fiber)?;
    }

    Ok(QuotientMap { source: rg_g, target: rg_gms, w, map })
}

/// Fibers of size > 1 are exactly the preimages of trees with >= 2 W-leaves
/// under a common non-W parent, and each induces a subgraph isomorphic to
/// R(K_{|L|}): members correspond to chain orders, adjacency to adjacent
/// transpositions.
fn check_fiber(
    rg_g: &RotationGraph,
    rg_gms: &RotationGraph,
    w: VertexSet,
    tgt: usize,
    fiber: &[u32],
) -> Result<(), StructureError> {
    let t_tilde = rg_gms.tree(tgt);
    let mut groups: HashMap<Vertex, VertexSet> = HashMap::new();
    for v in w.iter() {
        if t_tilde.is_leaf(v) {
            if let Some(p) = t_tilde.parent(v) {
                if !w.contains(p) {
                    groups.entry(p).or_insert(VertexSet::EMPTY).insert(v);
                }
            }
        }
    }
    let big: Vec<(&Vertex, &VertexSet)> = groups.iter().filter(|(_, l)| l.len() >= 2).collect();
    match big.len() {
        0 => {
            if fiber.len() != 1 {
                return Err(StructureError::QuotientInvariant(format!(
                    "target {tgt} has no W-leaf group but fiber size {}",
                    fiber.len()
                )));
            }
            Ok(())
        }
        1 => {
            let (&q, &l) = big[0];
            let members = l.to_vec();
            let mut expect: Vec<(u32, Vec<Vertex>)> = Vec::new();
            for perm in permutations(&members) {
                let tree = chain_tree(&t_tilde, q, &perm);
                let ord = rg_g.ordinal_of(&tree).ok_or_else(|| {
                    StructureError::QuotientInvariant(format!(
                        "expected fiber member (chain {perm:?}) of target {tgt} not in R(G)"
                    ))
                })?;
                expect.push((ord as u32, perm));
            }
            let mut expected_ords: Vec<u32> = expect.iter().map(|(o, _)| *o).collect();
            expected_ords.sort_unstable();
            let mut actual = fiber.to_vec();
            actual.sort_unstable();
            if expected_ords != actual {
                return Err(StructureError::QuotientInvariant(format!(
                    "fiber of target {tgt} is not the set of chain arrangements"
                )));
            }
            for x in 0..expect.len() {
                for y in x + 1..expect.len() {
                    let adj = rg_g.are_adjacent(expect[x].0 as usize, expect[y].0 as usize);
                    let swap = adjacent_transposition(&expect[x].1, &expect[y].1);
                    if adj != swap {
                        return Err(StructureError::QuotientInvariant(format!(
                            "fiber of target {tgt}: chains {:?},{:?} adjacent={adj} transposition={swap}",
                            expect[x].1, expect[y].1
                        )));
                    }
                }
            }
            Ok(())
        }
        _ => Err(StructureError::QuotientInvariant(format!(
            "target {tgt} has several W-leaf groups of size >= 2"
        ))),
    }
}

/// Rebuild a source tree from a target tree by hanging `chain` below `q`.
fn chain_tree(t_tilde: &ElimTree, q: Vertex, chain: &[Vertex]) -> ElimTree {
    let parents: Vec<Option<Vertex>> = (0..t_tilde.n())
        .map(|v| match chain.iter().position(|&c| c == v) {
            Some(0) => Some(q),
            Some(idx) => Some(chain[idx - 1]),
            None => t_tilde.parent(v),
        })
        .collect();
    ElimTree::from_parents(&parents).expect("chain tree is rooted")
}

fn permutations(items: &[Vertex]) -> Vec<Vec<Vertex>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            let mut perm = vec![x];
            perm.append(&mut tail);
            out.push(perm);
        }
    }
    out
}

fn adjacent_transposition(a: &[Vertex], b: &[Vertex]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let diffs: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
    diffs.len() == 2
        && diffs[1] == diffs[0] + 1
        && a[diffs[0]] == b[diffs[1]]
        && a[diffs[1]] == b[diffs[0]]
}

fn truncate_witnesses(violations: &mut Vec<String>) {
    const MAX: usize = 12;
    if violations.len() > MAX {
        let extra = violations.len() - MAX;
        violations.truncate(MAX);
        violations.push(format!("... and {extra} more"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_family, FamilySpec};
    use crate::rotation::RotationGraph;
    use crate::tree::tree_from_order;

    fn rg(spec: &str) -> RotationGraph {
        RotationGraph::build(&make_family(&FamilySpec::parse(spec).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn family_px_on_k3() {
        // K = {1,2,3} on K_3, T the path 1->2->3: members x123, 1x23, 12x3, 123x
        let k3 = make_family(&FamilySpec::Complete(3)).unwrap();
        let t = tree_from_order(&k3, &[0, 1, 2]).unwrap();
        let fam = family_px(VertexSet::from_iter([0, 1, 2]), &t).unwrap();
        assert_eq!(fam.len(), 4);
        let orders: Vec<_> = fam.iter().map(|f| f.path_order().unwrap()).collect();
        assert_eq!(
            orders,
            vec![vec![3, 0, 1, 2], vec![0, 3, 1, 2], vec![0, 1, 3, 2], vec![0, 1, 2, 3]]
        );
        let k4 = k3.add_simplicial(VertexSet::from_iter([0, 1, 2])).unwrap();
        for f in &fam {
            assert!(tree::validate(&k4, f).unwrap());
        }
    }

    #[test]
    fn family_p_on_four_cycle() {
        // C_4 with v = 3; T root 0, child 2, leaves 1 and 3 under 2
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let t = ElimTree::from_parents(&[None, Some(2), Some(0), Some(2)]).unwrap();
        assert!(tree::validate(&g, &t).unwrap());
        let fam = family_p(3, &t).unwrap();
        assert_eq!(fam.len(), 6); // d = 2, so 2(d+1) members
        let gv = g.add_true_twin(3).unwrap();
        for f in &fam {
            assert!(tree::validate(&gv, f).unwrap());
        }
        // mirror halves map onto each other under the swap
        let swap = tree::swap_map(5, 3, 4);
        for i in 0..3 {
            assert_eq!(tree::relabel(&fam[i], &swap).unwrap(), fam[5 - i]);
        }
    }

    #[test]
    fn family_ptilde_sizes() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        // v = 3 is a leaf here: wedge replaces the two middle members
        let t = ElimTree::from_parents(&[None, Some(2), Some(0), Some(2)]).unwrap();
        let fam = family_ptilde(3, &t).unwrap();
        assert_eq!(fam.len(), 5);
        let gtv = g.add_false_twin(3).unwrap();
        for f in &fam {
            assert!(tree::validate(&gtv, f).unwrap());
        }
        // v = 3 internal: same membership as family_p
        let t2 = tree_from_order(&g, &[0, 3, 2, 1]).unwrap();
        assert!(!t2.is_leaf(3));
        assert_eq!(family_ptilde(3, &t2).unwrap().len(), family_p(3, &t2).unwrap().len());
    }

    #[test]
    fn partition_k3_to_k4() {
        // 6 families of size 4 cover the 24 vertices of R(K_4)
        let small = rg("complete:3");
        let k3 = make_family(&FamilySpec::Complete(3)).unwrap();
        let big =
            RotationGraph::build(&k3.add_simplicial(VertexSet::from_iter([0, 1, 2])).unwrap())
                .unwrap();
        assert_eq!(big.len(), 24);
        let mode = OpMode::Simplicial { k: VertexSet::from_iter([0, 1, 2]) };
        let check = verify_partition(&big, &small, mode, "k3->k4");
        assert!(check.passed, "{:?}", check.witnesses);
    }

    #[test]
    fn partition_k2_true_twin() {
        // two families of sizes 2 and 4 cover R(K_3)
        let k2 = make_family(&FamilySpec::Complete(2)).unwrap();
        let small = RotationGraph::build(&k2).unwrap();
        let big = RotationGraph::build(&k2.add_true_twin(0).unwrap()).unwrap();
        assert_eq!(big.len(), 6);
        let check = verify_partition(&big, &small, OpMode::TrueTwin { v: 0 }, "k2->k3");
        assert!(check.passed, "{:?}", check.witnesses);
        let mut sizes: Vec<usize> =
            (0..small.len()).map(|o| family_p(0, &small.tree(o)).unwrap().len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 4]);
    }

    #[test]
    fn classification_matches_construction() {
        let g = make_family(&FamilySpec::CompleteSplit(2, 2)).unwrap();
        let small = RotationGraph::build(&g).unwrap();
        for (mode, big_graph) in [
            (
                OpMode::Simplicial { k: VertexSet::from_iter([0, 1]) },
                g.add_simplicial(VertexSet::from_iter([0, 1])).unwrap(),
            ),
            (OpMode::TrueTwin { v: 0 }, g.add_true_twin(0).unwrap()),
            (OpMode::FalseTwin { v: 2 }, g.add_false_twin(2).unwrap()),
        ] {
            let big = RotationGraph::build(&big_graph).unwrap();
            let fam = classify_families(&big, &small, mode).unwrap();
            for small_ord in 0..small.len() {
                let members = build_family(mode, &small.tree(small_ord)).unwrap();
                for (idx, member) in members.iter().enumerate() {
                    let ord = big.ordinal_of(member).unwrap();
                    assert_eq!(fam.small_of[ord] as usize, small_ord);
                    assert_eq!(fam.path_pos(ord), idx, "path position mismatch");
                }
            }
        }
    }

    #[test]
    fn edge_decomposition_k3_to_k4_has_no_shifts() {
        let small = rg("complete:3");
        let k3 = make_family(&FamilySpec::Complete(3)).unwrap();
        let mode = OpMode::Simplicial { k: VertexSet::from_iter([0, 1, 2]) };
        let big =
            RotationGraph::build(&k3.add_simplicial(VertexSet::from_iter([0, 1, 2])).unwrap())
                .unwrap();
        let fam = classify_families(&big, &small, mode).unwrap();
        let rep = verify_edge_decomposition(&big, &small, &fam, true);
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        assert_eq!(rep.shifted, 0);
        assert_eq!(rep.intra_edges, 6 * 3); // six families, four-vertex paths
    }

    #[test]
    fn edge_decomposition_with_shifts() {
        // a pendant over an interior path vertex produces 2(a)ii edges
        let p4 = make_family(&FamilySpec::Path(4)).unwrap();
        let small = RotationGraph::build(&p4).unwrap();
        let mode = OpMode::Simplicial { k: VertexSet::singleton(1) };
        let big =
            RotationGraph::build(&p4.add_simplicial(VertexSet::singleton(1)).unwrap()).unwrap();
        let fam = classify_families(&big, &small, mode).unwrap();
        let rep = verify_edge_decomposition(&big, &small, &fam, false);
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        assert!(rep.shifted > 0);
        assert!(rep.five_cycles_verified > 0);
    }

    #[test]
    fn copies_of_rk3_in_rk4() {
        let small = rg("complete:3");
        let k3 = make_family(&FamilySpec::Complete(3)).unwrap();
        let big =
            RotationGraph::build(&k3.add_simplicial(VertexSet::from_iter([0, 1, 2])).unwrap())
                .unwrap();
        let mode = OpMode::Simplicial { k: VertexSet::from_iter([0, 1, 2]) };
        for anchor in [CopyAnchor::Root, CopyAnchor::Deepest] {
            let check = embedded_copies(&big, &small, mode, anchor, "k3->k4");
            assert!(check.passed, "{:?}", check.witnesses);
        }
    }

    #[test]
    fn special_trees_fig1() {
        let g = make_family(&FamilySpec::CompleteSplit(3, 3)).unwrap();
        let w = VertexSet::from_iter([0, 1, 2]);
        let r = tree_from_order(&g, &[3, 4, 5, 0, 1, 2]).unwrap();
        let (l, q) = is_w_special(&g, w, &r).unwrap().unwrap();
        assert_eq!(l, w);
        assert_eq!(q, 5); // y3
        let t = tree_from_order(&g, &[0, 3, 1, 2, 4, 5]).unwrap();
        assert!(is_w_special(&g, w, &t).unwrap().is_none());
        // no W-vertex is a leaf
        let s = tree_from_order(&g, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert!(w_special(w, &s).is_none());
    }

    #[test]
    fn projection_images_fig7() {
        // K_4 with W = {2,3}: paths 0,1,2,3 and 0,1,3,2 both project to the
        // wedge 0 -> 1 -> {2,3}
        let k4 = make_family(&FamilySpec::Complete(4)).unwrap();
        let w = VertexSet::from_iter([2, 3]);
        let u1 = tree_from_order(&k4, &[0, 1, 2, 3]).unwrap();
        let u2 = tree_from_order(&k4, &[0, 1, 3, 2]).unwrap();
        let wedge = ElimTree::from_parents(&[None, Some(0), Some(1), Some(1)]).unwrap();
        assert_eq!(project(w, &u1), wedge);
        assert_eq!(project(w, &u2), wedge);
        // non-special trees are untouched
        let v = tree_from_order(&k4, &[2, 3, 0, 1]).unwrap();
        assert_eq!(project(w, &v), v);
    }

    #[test]
    fn quotient_k4_to_spk22() {
        let rg_g = rg("complete:4");
        let rg_t = rg("spk:2,2");
        let q = build_quotient(&rg_g, VertexSet::from_iter([2, 3]), &rg_t).unwrap();
        assert_eq!(q.map.len(), 24);
        // twenty singleton fibers and two fibers of size 2
        let mut count = vec![0usize; rg_t.len()];
        for &m in &q.map {
            count[m as usize] += 1;
        }
        assert_eq!(count.iter().filter(|&&s| s == 1).count(), 20);
        assert_eq!(count.iter().filter(|&&s| s == 2).count(), 2);
    }

    #[test]
    fn quotient_rejects_bad_inputs() {
        let rg_g = rg("complete:4");
        let rg_t = rg("path:4");
        assert!(build_quotient(&rg_g, VertexSet::from_iter([2, 3]), &rg_t).is_err());
        // in K_4 the pair {0,3} is a twin set, but deleting its edge gives a
        // different labeling of SPK_{2,2} than the family constructor
        let rg_t2 = rg("spk:2,2");
        assert!(matches!(
            build_quotient(&rg_g, VertexSet::from_iter([0, 3]), &rg_t2),
            Err(StructureError::WrongOperation(_))
        ));
        // x1 and y1 of SPK_{2,3} are not twins at all
        let rg_s = rg("spk:2,3");
        let rg_k = rg("kpq:2,3");
        assert!(matches!(
            build_quotient(&rg_s, VertexSet::from_iter([0, 2]), &rg_k),
            Err(StructureError::NotTrueTwins(_))
        ));
    }
}
