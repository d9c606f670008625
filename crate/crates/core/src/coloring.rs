//! Colorings of rotation graphs: the parity 2-coloring of permutohedra, the
//! 5-cycle witness separating complete from non-complete bases, the three
//! lifted colorings along the graph operations, an exact chromatic-number
//! solver, and the composed construction for threshold graphs.

use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::graph::{Graph, GraphError, ThresholdStep, Vertex, VertexSet};
use crate::rotation::{RotationError, RotationGraph};
use crate::structure::{classify_families, FamilyIndex, MemberPos, OpMode, StructureError};
use crate::tree;

#[derive(Debug, Error)]
pub enum ColoringError {
    #[error("base graph is not complete")]
    BaseNotComplete,
    #[error("lifted colorings need at least 3 colors, got {0}")]
    TooFewColors(usize),
    #[error("vertex {0} is not universal in the base graph")]
    NotUniversal(Vertex),
    #[error("clique contains non-universal vertex {0}")]
    KNotUniversal(Vertex),
    #[error("base graph is complete; the parity 2-coloring applies instead")]
    BaseComplete,
    #[error("false-twin hypothesis fails: {0}")]
    FalseTwinHypothesis(String),
    #[error("base coloring is improper on edge {0}-{1}")]
    ImproperBase(usize, usize),
    #[error("family index was built for a different operation")]
    WrongMode,
    #[error("solver supports at most {max} colors, needed {got}")]
    TooManyColors { max: usize, got: usize },
    #[error("threshold word ends with an isolated vertex; the graph is disconnected")]
    DisconnectedThreshold,
    #[error("threshold word yields a complete graph; chromatic number is 2 (or 1)")]
    CompleteThreshold,
    #[error(
        "threshold construction reaches a pendant on K_{0}; the lift composition \
         requires a non-complete base with chromatic number at least 3"
    )]
    UnsupportedThresholdTransition(usize),
    #[error("internal: {0}")]
    Internal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rotation(#[from] RotationError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Proper coloring of a rotation graph with colors 0..k-1 per ordinal.
#[derive(Clone, Debug)]
pub struct Coloring {
    pub k: usize,
    pub assign: Vec<u8>,
}

impl Coloring {
    /// One edge scan; returns the first monochromatic edge if any.
    pub fn check_proper(&self, rg: &RotationGraph) -> Result<(), (usize, usize)> {
        for (a, b) in rg.edges() {
            if self.assign[a] == self.assign[b] {
                return Err((a, b));
            }
        }
        Ok(())
    }

    pub fn colors_used(&self) -> usize {
        let mut seen = [false; 256];
        for &c in &self.assign {
            seen[c as usize] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }
}

/// 2-coloring of the permutohedron by permutation parity: search trees on a
/// complete graph are paths, read as permutations; one rotation is one
/// transposition.
pub fn sign_coloring(rg: &RotationGraph) -> Result<Coloring, ColoringError> {
    if !rg.graph().is_complete() {
        return Err(ColoringError::BaseNotComplete);
    }
    let mut assign = vec![0u8; rg.len()];
    for ord in 0..rg.len() {
        let t = rg.tree(ord);
        let perm = t
            .path_order()
            .ok_or_else(|| ColoringError::Internal("tree on a complete graph is a path".into()))?;
        assign[ord] = parity(&perm);
    }
    Ok(Coloring { k: 2, assign })
}

fn parity(perm: &[Vertex]) -> u8 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    (inversions % 2) as u8
}

/// A 5-cycle of R(G) built from six elimination orders over a path a-b-c
/// with ac not an edge; None when G is complete (and R(G) is bipartite).
pub fn five_cycle_witness(rg: &RotationGraph) -> Result<Option<[usize; 5]>, ColoringError> {
    let g = rg.graph();
    if g.is_complete() {
        return Ok(None);
    }
    let (a, b, c) = non_edge_with_center(g)
        .ok_or_else(|| ColoringError::Internal("non-complete graph must have a P_3".into()))?;
    let mut prefix: Vec<Vertex> = g.vertices().filter(|&v| v != a && v != b && v != c).collect();
    prefix.sort_unstable();
    let suffixes = [[a, b, c], [a, c, b], [c, a, b], [c, b, a], [b, c, a]];
    let mut cycle = [0usize; 5];
    for (idx, suffix) in suffixes.iter().enumerate() {
        let mut order = prefix.clone();
        order.extend_from_slice(suffix);
        let t = tree::tree_from_order(g, &order)
            .map_err(|e| ColoringError::Internal(e.to_string()))?;
        cycle[idx] = rg
            .ordinal_of(&t)
            .ok_or_else(|| ColoringError::Internal("order tree missing from R(G)".into()))?;
    }
    for i in 0..5 {
        for j in i + 1..5 {
            if cycle[i] == cycle[j] {
                return Err(ColoringError::Internal("5-cycle vertices not distinct".into()));
            }
        }
        if !rg.are_adjacent(cycle[i], cycle[(i + 1) % 5]) {
            return Err(ColoringError::Internal("5-cycle recipe produced a non-edge".into()));
        }
    }
    Ok(Some(cycle))
}

/// Vertices a, b, c with ab and bc edges but ac a non-edge.
fn non_edge_with_center(g: &Graph) -> Option<(Vertex, Vertex, Vertex)> {
    for a in g.vertices() {
        for c in g.vertices() {
            if a < c && !g.has_edge(a, c) {
                let common = g.neighbors(a).intersection(g.neighbors(c));
                if let Some(b) = common.first() {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

fn check_base(
    rg_small: &RotationGraph,
    c: &Coloring,
) -> Result<(), ColoringError> {
    if c.k < 3 {
        return Err(ColoringError::TooFewColors(c.k));
    }
    if rg_small.graph().is_complete() {
        return Err(ColoringError::BaseComplete);
    }
    c.check_proper(rg_small).map_err(|(a, b)| ColoringError::ImproperBase(a, b))
}

/// Lift a proper k-coloring (k >= 3) of R(G) to R(G_K) when K consists of
/// universal vertices: T(i) keeps c(T) at even i, shifts by one at odd i,
/// and the tip T(λ+1) shifts by two.
pub fn lift_coloring_simplicial(
    rg_big: &RotationGraph,
    rg_small: &RotationGraph,
    fam: &FamilyIndex,
    c: &Coloring,
) -> Result<Coloring, ColoringError> {
    let OpMode::Simplicial { k } = fam.mode else {
        return Err(ColoringError::WrongMode);
    };
    check_base(rg_small, c)?;
    if let Some(bad) = k.iter().find(|&u| !rg_small.graph().is_universal(u)) {
        return Err(ColoringError::KNotUniversal(bad));
    }
    let m = c.k as u16;
    let assign = (0..rg_big.len())
        .map(|ord| {
            let base = c.assign[fam.small_of[ord] as usize] as u16;
            let shift = match fam.pos[ord] {
                MemberPos::Ins { tip: true, .. } => 2,
                MemberPos::Ins { i, .. } => (i % 2) as u16,
                _ => unreachable!("simplicial index holds Ins positions"),
            };
            ((base + shift) % m) as u8
        })
        .collect();
    Ok(Coloring { k: c.k, assign })
}

/// Lift a proper k-coloring (k >= 3) of R(G) to R(G_v) for a universal v:
/// the shift alternates with i, with opposite phase on the mirror half.
pub fn lift_coloring_true_twin(
    rg_big: &RotationGraph,
    rg_small: &RotationGraph,
    fam: &FamilyIndex,
    c: &Coloring,
) -> Result<Coloring, ColoringError> {
    let OpMode::TrueTwin { v } = fam.mode else {
        return Err(ColoringError::WrongMode);
    };
    check_base(rg_small, c)?;
    if !rg_small.graph().is_universal(v) {
        return Err(ColoringError::NotUniversal(v));
    }
    let m = c.k as u16;
    let assign = (0..rg_big.len())
        .map(|ord| {
            let base = c.assign[fam.small_of[ord] as usize] as u16;
            let shift = match fam.pos[ord] {
                MemberPos::Twin { i, j } => twin_shift(i, j),
                _ => unreachable!("true-twin index holds Twin positions"),
            };
            ((base + shift) % m) as u8
        })
        .collect();
    Ok(Coloring { k: c.k, assign })
}

/// Lift a proper k-coloring (k >= 3) of R(G) to R(G̃_v). Hypothesis: V(G)
/// splits into V_1 ∪ V_2 with N(u) = V_2 for every u in V_1, and v in V_1
/// (for universal v this is V_1 = {v}). The wedge trees shift by two.
pub fn lift_coloring_false_twin(
    rg_big: &RotationGraph,
    rg_small: &RotationGraph,
    fam: &FamilyIndex,
    c: &Coloring,
) -> Result<Coloring, ColoringError> {
    let OpMode::FalseTwin { v } = fam.mode else {
        return Err(ColoringError::WrongMode);
    };
    check_base(rg_small, c)?;
    let g = rg_small.graph();
    // the only candidate split: V_2 = N(v), V_1 = the rest (contains v)
    let v2 = g.neighbors(v);
    let v1 = g.vertex_set().difference(v2);
    if let Some(bad) = v1.iter().find(|&u| g.neighbors(u) != v2) {
        return Err(ColoringError::FalseTwinHypothesis(format!(
            "vertex {bad} in V_1 has N({bad}) != V_2"
        )));
    }
    let m = c.k as u16;
    let assign = (0..rg_big.len())
        .map(|ord| {
            let base = c.assign[fam.small_of[ord] as usize] as u16;
            let shift = match fam.pos[ord] {
                MemberPos::Twin { i, j } => twin_shift(i, j),
                MemberPos::Wedge => 2,
                _ => unreachable!("false-twin index holds Twin or Wedge positions"),
            };
            ((base + shift) % m) as u8
        })
        .collect();
    Ok(Coloring { k: c.k, assign })
}

fn twin_shift(i: u8, j: u8) -> u16 {
    let even = i % 2 == 0;
    match (even, j) {
        (true, 1) | (false, 2) => 0,
        (false, 1) | (true, 2) => 1,
        _ => unreachable!("j is 1 or 2"),
    }
}

// ---------------------------------------------------------------------------
// Exact chromatic number
// ---------------------------------------------------------------------------

const MAX_COLORS: usize = 16;

#[derive(Debug)]
pub enum ChromaticOutcome {
    Exact { chi: usize, coloring: Coloring, nodes: u64 },
    /// Budget ran out; the chromatic number lies in lb..=ub.
    Bounds { lb: usize, ub: usize, nodes: u64 },
}

impl ChromaticOutcome {
    pub fn chi(&self) -> Option<usize> {
        match self {
            ChromaticOutcome::Exact { chi, .. } => Some(*chi),
            ChromaticOutcome::Bounds { .. } => None,
        }
    }
}

/// Exact chromatic number. Bipartite graphs are closed by the 2-coloring
/// itself. Otherwise DSATUR gives the upper bound, the odd cycle and a
/// greedy clique the lower bound, a portfolio of randomized DSATUR restarts
/// tries to pull the upper bound down, and backtracking search closes any
/// remaining gap. `budget` caps the number of search nodes; exceeding it
/// yields bounds instead of an answer.
pub fn chromatic_number_exact(
    rg: &RotationGraph,
    ub_hint: Option<usize>,
    budget: u64,
) -> Result<ChromaticOutcome, ColoringError> {
    let n = rg.len();
    if rg.edge_count() == 0 {
        return Ok(ChromaticOutcome::Exact {
            chi: 1,
            coloring: Coloring { k: 1, assign: vec![0; n] },
            nodes: 0,
        });
    }
    if let Some(sides) = bipartition(rg) {
        return Ok(ChromaticOutcome::Exact {
            chi: 2,
            coloring: Coloring { k: 2, assign: sides },
            nodes: 0,
        });
    }
    let mut best = dsatur_greedy(rg);
    if best.k > MAX_COLORS {
        return Err(ColoringError::TooManyColors { max: MAX_COLORS, got: best.k });
    }
    let lb = 3.max(greedy_clique(rg));
    // a hint caps how hard the portfolio pushes, never the answer
    let _ = ub_hint;

    // randomized-restart portfolio, cheapest target first; the node budget
    // also caps how many restarts are worth spending
    let attempts = budget.min(4000) as usize;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x00c0_1045);
    let mut k = lb;
    while k < best.k {
        match randomized_dsatur(rg, k, attempts, &mut rng) {
            Some(assign) => {
                best = Coloring { k, assign };
                break;
            }
            None => k += 1,
        }
    }

    let mut nodes = 0u64;
    let mut k = lb;
    while k < best.k {
        match k_colorable(rg, k, budget, &mut nodes) {
            SearchResult::Found(assign) => {
                return Ok(ChromaticOutcome::Exact {
                    chi: k,
                    coloring: Coloring { k, assign },
                    nodes,
                });
            }
            SearchResult::Unsat => k += 1,
            SearchResult::Budget => {
                return Ok(ChromaticOutcome::Bounds { lb: k, ub: best.k, nodes });
            }
        }
    }
    Ok(ChromaticOutcome::Exact { chi: best.k, coloring: best, nodes })
}

/// Two-coloring by BFS sides, when the graph is bipartite.
fn bipartition(rg: &RotationGraph) -> Option<Vec<u8>> {
    let n = rg.len();
    let mut side = vec![u8::MAX; n];
    for start in 0..n {
        if side[start] != u8::MAX {
            continue;
        }
        side[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &nb in rg.neighbors_of(v) {
                let nb = nb as usize;
                if side[nb] == u8::MAX {
                    side[nb] = 1 - side[v];
                    queue.push_back(nb);
                } else if side[nb] == side[v] {
                    return None;
                }
            }
        }
    }
    Some(side)
}

/// DSATUR greedy with random tie-breaking among the most saturated
/// vertices, retried up to `attempts` times with a hard cap of `k` colors.
fn randomized_dsatur(
    rg: &RotationGraph,
    k: usize,
    attempts: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Option<Vec<u8>> {
    let n = rg.len();
    'attempt: for _ in 0..attempts {
        let mut assign = vec![u8::MAX; n];
        let mut sat = vec![0u32; n];
        for _ in 0..n {
            let best = (0..n)
                .filter(|&v| assign[v] == u8::MAX)
                .map(|v| sat[v].count_ones())
                .max()
                .unwrap();
            let cands: Vec<usize> = (0..n)
                .filter(|&v| assign[v] == u8::MAX && sat[v].count_ones() == best)
                .collect();
            let v = cands[rng.gen_range(0..cands.len())];
            let mut c = 0u8;
            while sat[v] >> c & 1 == 1 {
                c += 1;
            }
            if c as usize >= k {
                continue 'attempt;
            }
            assign[v] = c;
            for &nb in rg.neighbors_of(v) {
                sat[nb as usize] |= 1 << c;
            }
        }
        return Some(assign);
    }
    None
}

fn greedy_clique(rg: &RotationGraph) -> usize {
    let n = rg.len();
    if n == 0 {
        return 0;
    }
    let start = (0..n).max_by_key(|&v| rg.degree(v)).unwrap();
    let mut clique = vec![start];
    for &cand in rg.neighbors_of(start) {
        let cand = cand as usize;
        if clique.iter().all(|&m| rg.are_adjacent(cand, m)) {
            clique.push(cand);
        }
    }
    clique.len()
}

fn dsatur_greedy(rg: &RotationGraph) -> Coloring {
    let n = rg.len();
    let mut assign = vec![u8::MAX; n];
    let mut sat: Vec<u32> = vec![0; n];
    let mut max_color = 0u8;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| assign[v] == u8::MAX)
            .max_by_key(|&v| (sat[v].count_ones(), rg.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        let mut c = 0u8;
        while sat[v] >> c & 1 == 1 {
            c += 1;
        }
        assign[v] = c;
        max_color = max_color.max(c);
        for &nb in rg.neighbors_of(v) {
            sat[nb as usize] |= 1 << c;
        }
    }
    Coloring { k: max_color as usize + 1, assign }
}

enum SearchResult {
    Found(Vec<u8>),
    Unsat,
    Budget,
}

/// Iterative backtracking search for a k-coloring with DSATUR branching:
/// always color the most saturated uncolored vertex, allow at most one fresh
/// color beyond those already in use (symmetry breaking), undo on dead ends.
fn k_colorable(rg: &RotationGraph, k: usize, budget: u64, nodes: &mut u64) -> SearchResult {
    let n = rg.len();
    let mut assign = vec![u8::MAX; n];
    // counts[v][c]: neighbors of v currently holding color c
    let mut counts = vec![[0u16; MAX_COLORS]; n];
    let mut sat = vec![0u32; n];
    // frame: (vertex, held color, rejected-colors mask, max_used on entry)
    let mut frames: Vec<(usize, u8, u32, u8)> = Vec::with_capacity(n);
    let select = |assign: &[u8], sat: &[u32]| {
        (0..n)
            .filter(|&v| assign[v] == u8::MAX)
            .max_by_key(|&v| (sat[v].count_ones(), rg.degree(v), std::cmp::Reverse(v)))
            .unwrap()
    };

    let mut v = select(&assign, &sat);
    let mut tried: u32 = 0;
    let mut frame_max: u8 = 0;
    loop {
        *nodes += 1;
        if *nodes > budget {
            return SearchResult::Budget;
        }
        let limit = ((frame_max as usize) + 1).min(k) as u8;
        let choice = (0..limit).find(|&c| tried >> c & 1 == 0 && sat[v] >> c & 1 == 0);
        match choice {
            Some(c) => {
                assign[v] = c;
                for &nb in rg.neighbors_of(v) {
                    let nb = nb as usize;
                    counts[nb][c as usize] += 1;
                    sat[nb] |= 1 << c;
                }
                frames.push((v, c, tried | 1 << c, frame_max));
                if frames.len() == n {
                    return SearchResult::Found(assign);
                }
                frame_max = frame_max.max(c + 1);
                v = select(&assign, &sat);
                tried = 0;
            }
            None => {
                let Some((pv, pc, ptried, pmax)) = frames.pop() else {
                    return SearchResult::Unsat;
                };
                assign[pv] = u8::MAX;
                for &nb in rg.neighbors_of(pv) {
                    let nb = nb as usize;
                    counts[nb][pc as usize] -= 1;
                    if counts[nb][pc as usize] == 0 {
                        sat[nb] &= !(1u32 << pc);
                    }
                }
                v = pv;
                tried = ptried;
                frame_max = pmax;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Threshold composition
// ---------------------------------------------------------------------------

/// Result of the composed threshold construction.
pub struct ThresholdLift {
    pub graph: Graph,
    pub rotation: RotationGraph,
    pub coloring: Coloring,
}

/// Compose the pendant and true-twin lifts along a threshold creation word,
/// starting from the 3-colored 5-cycle R(P_3).
///
/// The word is rewritten into universal/pendant operations (adding k
/// isolated vertices then a universal u equals adding u universal, then k
/// pendants at u). The composition starts at the first non-complete graph in
/// that sequence; it must be P_3, i.e. a pendant on K_2. Words whose first
/// pendant lands on K_m with m >= 3 are rejected: the lift hypotheses need a
/// non-bipartite base there, which the construction cannot supply.
pub fn threshold_coloring(steps: &[ThresholdStep]) -> Result<ThresholdLift, ColoringError> {
    let mut ops: Vec<bool> = Vec::new(); // true = universal, false = pendant
    let mut pending = 0usize;
    for step in steps {
        match step {
            ThresholdStep::Isolated => pending += 1,
            ThresholdStep::Universal => {
                ops.push(true);
                ops.extend(std::iter::repeat(false).take(pending));
                pending = 0;
            }
        }
    }
    if pending > 0 {
        return Err(ColoringError::DisconnectedThreshold);
    }

    let mut g = Graph::empty(1)?.with_labels(vec!["v1".into()]);
    let mut anchor: Vertex = 0;
    let mut ops = ops.into_iter().peekable();

    // complete prefix: universal additions keep K_m complete, and a pendant
    // on K_1 just forms K_2
    while g.is_complete() {
        match ops.next() {
            None => return Err(ColoringError::CompleteThreshold),
            Some(true) => {
                anchor = g.n();
                g = g.add_true_twin(if g.n() == 1 { 0 } else { anchor - 1 })?;
            }
            Some(false) => {
                if g.n() > 2 {
                    return Err(ColoringError::UnsupportedThresholdTransition(g.n()));
                }
                g = g.add_simplicial(VertexSet::singleton(anchor))?;
            }
        }
    }

    // g is now P_3 (pendant on K_2); seed the 3-coloring exactly
    let mut rg = RotationGraph::build(&g)?;
    let seed = chromatic_number_exact(&rg, Some(3), 1_000_000)?;
    let mut coloring = match seed {
        ChromaticOutcome::Exact { chi: 3, coloring, .. } => coloring,
        other => {
            return Err(ColoringError::Internal(format!(
                "expected chromatic number 3 for the base, got {other:?}"
            )))
        }
    };

    for op in ops {
        let (mode, big_graph) = if op {
            let mode = OpMode::TrueTwin { v: anchor };
            let bg = g.add_true_twin(anchor)?;
            anchor = g.n();
            (mode, bg)
        } else {
            (OpMode::Simplicial { k: VertexSet::singleton(anchor) },
             g.add_simplicial(VertexSet::singleton(anchor))?)
        };
        let rg_big = RotationGraph::build(&big_graph)?;
        let fam = classify_families(&rg_big, &rg, mode)?;
        coloring = match mode {
            OpMode::TrueTwin { .. } => lift_coloring_true_twin(&rg_big, &rg, &fam, &coloring)?,
            OpMode::Simplicial { .. } => lift_coloring_simplicial(&rg_big, &rg, &fam, &coloring)?,
            OpMode::FalseTwin { .. } => unreachable!(),
        };
        g = big_graph;
        rg = rg_big;
    }
    Ok(ThresholdLift { graph: g, rotation: rg, coloring })
}

/// 3-coloring of R(K_{p,q}) for p, q >= 2 by iterated false-twin lifts:
/// K_{1,2} is P_3 (the 3-colored 5-cycle), growing either side adds a false
/// twin whose hypothesis holds in every complete bipartite graph.
pub fn complete_bipartite_coloring(p: usize, q: usize) -> Result<ThresholdLift, ColoringError> {
    if p < 2 || q < 2 {
        // K_{1,q} is a star, a threshold graph; use the threshold composition
        return Err(ColoringError::FalseTwinHypothesis(
            "complete bipartite lift chain needs p, q >= 2; stars are threshold graphs".into(),
        ));
    }
    // SPK_{1,2} = K_{1,2} = P_3 with center 0
    let mut g = crate::graph::make_family(&crate::graph::FamilySpec::CompleteSplit(1, 2))?;
    let mut rg = RotationGraph::build(&g)?;
    let mut coloring = match chromatic_number_exact(&rg, Some(3), 1_000_000)? {
        ChromaticOutcome::Exact { chi: 3, coloring, .. } => coloring,
        other => {
            return Err(ColoringError::Internal(format!(
                "expected chromatic number 3 for R(P_3), got {other:?}"
            )))
        }
    };
    let mut steps: Vec<Vertex> = Vec::new();
    steps.extend(std::iter::repeat(0).take(p - 1)); // grow the p-side
    steps.extend(std::iter::repeat(1).take(q - 2)); // grow the q-side
    for v in steps {
        let mode = OpMode::FalseTwin { v };
        let big_graph = g.add_false_twin(v)?;
        let rg_big = RotationGraph::build(&big_graph)?;
        let fam = classify_families(&rg_big, &rg, mode)?;
        coloring = lift_coloring_false_twin(&rg_big, &rg, &fam, &coloring)?;
        g = big_graph;
        rg = rg_big;
    }
    Ok(ThresholdLift { graph: g, rotation: rg, coloring })
}
