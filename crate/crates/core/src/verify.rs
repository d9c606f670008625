//! Verification suites over the built-in corpus. Each suite returns a list
//! of [`Check`]s; the CLI `verify` command and the acceptance test target
//! both drive these.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coloring::{
    self, chromatic_number_exact, five_cycle_witness, lift_coloring_false_twin,
    lift_coloring_simplicial, lift_coloring_true_twin, sign_coloring, threshold_coloring,
    ChromaticOutcome, Coloring,
};
use crate::corpus;
use crate::graph::{make_family, FamilySpec, Graph, VertexSet};
use crate::io::tree_from_json;
use crate::metrics::{
    self, bfs_from, diameter, distance, orbit_reduce, quotient_distance_check,
    rotation_parity_check, shortest_path, twin_class_generators, twin_rotation_check,
};
use crate::report::Check;
use crate::rotation::{catalan, enumerate_by_orders, RotationGraph};
use crate::structure::{
    build_quotient, classify_families, embedded_copies, verify_edge_decomposition,
    verify_partition, CopyAnchor, OpMode,
};

pub const DEFAULT_SEED: u64 = 0x5eed_0001;

fn build(spec: &str) -> RotationGraph {
    RotationGraph::build(&make_family(&FamilySpec::parse(spec).unwrap()).unwrap()).unwrap()
}

// ---------------------------------------------------------------------------
// partitions suite: vertex counts, order-enumeration oracle, partition and
// edge-decomposition laws over the exhaustive small corpus
// ---------------------------------------------------------------------------

pub fn suite_partitions() -> Vec<Check> {
    let mut checks = Vec::new();
    checks.extend(vertex_count_checks());
    checks.push(order_enumeration_check());

    // exhaustive connected graphs, 3 <= n <= 5, every clique and vertex
    for n in 3..=5usize {
        let graphs = corpus::connected_graphs(n);
        let results: Vec<(Vec<String>, Vec<String>, usize)> = graphs
            .par_iter()
            .map(|g| exhaustive_partition_one(g))
            .collect();
        let mut part_violations = Vec::new();
        let mut decomp_violations = Vec::new();
        let mut instances = 0usize;
        for (pv, dv, cnt) in results {
            part_violations.extend(pv);
            decomp_violations.extend(dv);
            instances += cnt;
        }
        let label = format!("all connected graphs on {n} vertices ({instances} instances)");
        checks.push(Check::from_violations("partition[exhaustive]", label.clone(), part_violations));
        checks.push(Check::from_violations("edge_decomposition[exhaustive]", label, decomp_violations));
    }

    // named split/bipartite instances with p+q <= 7, canonical parameters
    let mut spk_violations = Vec::new();
    let mut spk_instances = 0usize;
    let jobs: Vec<(String, Graph, OpMode)> = corpus::bipartite_params(7)
        .into_iter()
        .flat_map(|(p, q)| {
            let spk = make_family(&FamilySpec::CompleteSplit(p, q)).unwrap();
            let kpq = make_family(&FamilySpec::CompleteBipartite(p, q)).unwrap();
            let p_set = VertexSet::from_iter(0..p);
            let mut jobs = vec![
                (format!("spk:{p},{q}"), spk.clone(), OpMode::Simplicial { k: p_set }),
                (format!("spk:{p},{q}"), spk.clone(), OpMode::TrueTwin { v: 0 }),
                (format!("spk:{p},{q}"), spk, OpMode::FalseTwin { v: p }),
                (format!("kpq:{p},{q}"), kpq.clone(), OpMode::TrueTwin { v: 0 }),
                (format!("kpq:{p},{q}"), kpq.clone(), OpMode::FalseTwin { v: 0 }),
            ];
            // an edge of K_{p,q} is a 2-clique
            jobs.push((
                format!("kpq:{p},{q}"),
                kpq,
                OpMode::Simplicial { k: VertexSet::from_iter([0, p]) },
            ));
            jobs
        })
        .collect();
    let results: Vec<Vec<String>> = jobs
        .par_iter()
        .map(|(name, g, mode)| partition_and_decomp(g, *mode, name).0)
        .collect();
    for v in results {
        spk_instances += 1;
        spk_violations.extend(v);
    }
    checks.push(Check::from_violations(
        "partition[split_families]",
        format!("SPK/K_pq with p+q <= 7 ({spk_instances} instances)"),
        spk_violations,
    ));
    checks
}

fn vertex_count_checks() -> Vec<Check> {
    let mut checks = Vec::new();
    let mut v = Vec::new();
    for n in 3..=6usize {
        let got = build(&format!("complete:{n}")).len();
        let want: usize = (1..=n).product();
        if got != want {
            v.push(format!("|V(R(K_{n}))| = {got}, want {want}"));
        }
    }
    checks.push(Check::from_violations("counts[permutohedra]", "K_3..K_6", v));
    let mut v = Vec::new();
    for n in 3..=8usize {
        let got = build(&format!("path:{n}")).len();
        let want = catalan(n);
        if got != want {
            v.push(format!("|V(R(P_{n}))| = {got}, want Catalan {want}"));
        }
    }
    checks.push(Check::from_violations("counts[associahedra]", "P_3..P_8", v));
    let got = build("spk:2,2").len();
    checks.push(Check::from_violations(
        "counts[spk22]",
        "SPK_{2,2}",
        if got == 22 { vec![] } else { vec![format!("|V| = {got}, want 22")] },
    ));
    checks
}

/// BFS-built vertex sets equal brute-force enumeration over all n!
/// elimination orders, for every named corpus graph with n <= 7.
fn order_enumeration_check() -> Check {
    let mut violations = Vec::new();
    let mut count = 0;
    for (name, g) in corpus::named_corpus() {
        if g.n() > 7 {
            continue;
        }
        count += 1;
        let rg = RotationGraph::build(&g).unwrap();
        let mut keys: Vec<_> = (0..rg.len()).map(|o| rg.key(o)).collect();
        keys.sort();
        match enumerate_by_orders(&g) {
            Ok(oracle) => {
                if oracle != keys {
                    violations.push(format!(
                        "{name}: BFS found {} trees, order enumeration {}",
                        keys.len(),
                        oracle.len()
                    ));
                }
            }
            Err(e) => violations.push(format!("{name}: {e}")),
        }
    }
    Check::from_violations(
        "counts[order_enumeration]",
        format!("named corpus, n <= 7 ({count} graphs)"),
        violations,
    )
}

/// All nonempty cliques of g, as bit sets.
fn cliques(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    (1u32..1 << n)
        .map(VertexSet)
        .filter(|&s| g.is_clique(s))
        .collect()
}

fn exhaustive_partition_one(g: &Graph) -> (Vec<String>, Vec<String>, usize) {
    let mut part = Vec::new();
    let mut decomp = Vec::new();
    let mut count = 0usize;
    for k in cliques(g) {
        let (pv, dv) = partition_and_decomp(g, OpMode::Simplicial { k }, "exhaustive");
        part.extend(pv);
        decomp.extend(dv);
        count += 1;
    }
    for v in g.vertices() {
        for mode in [OpMode::TrueTwin { v }, OpMode::FalseTwin { v }] {
            let (pv, dv) = partition_and_decomp(g, mode, "exhaustive");
            part.extend(pv);
            decomp.extend(dv);
            count += 1;
        }
    }
    (part, decomp, count)
}

/// Run partition + decomposition for one (graph, mode); returns violation
/// lists labeled with the mode and graph.
fn partition_and_decomp(g: &Graph, mode: OpMode, name: &str) -> (Vec<String>, Vec<String>) {
    let tag = |msg: &String| format!("{name} {:?} edges={:?}: {msg}", mode, g.edges());
    let big_graph = match mode.apply(g) {
        Ok(b) => b,
        Err(e) => return (vec![format!("{name}: cannot apply {}: {e}", mode.name())], vec![]),
    };
    let small = match RotationGraph::build(g) {
        Ok(r) => r,
        Err(e) => return (vec![format!("{name}: {e}")], vec![]),
    };
    let big = match RotationGraph::build(&big_graph) {
        Ok(r) => r,
        Err(e) => return (vec![format!("{name}: {e}")], vec![]),
    };
    let pcheck = verify_partition(&big, &small, mode, name);
    let part: Vec<String> = if pcheck.passed {
        vec![]
    } else {
        pcheck.witnesses.iter().map(&tag).collect()
    };
    let decomp: Vec<String> = match classify_families(&big, &small, mode) {
        Ok(fam) => {
            let expect_no_shift = match mode {
                OpMode::Simplicial { k } => k.iter().all(|u| g.is_universal(u)),
                OpMode::TrueTwin { v } | OpMode::FalseTwin { v } => g.is_universal(v),
            };
            let rep = verify_edge_decomposition(&big, &small, &fam, expect_no_shift);
            rep.violations.iter().map(&tag).collect()
        }
        Err(e) => vec![tag(&format!("classification failed: {e}"))],
    };
    (part, decomp)
}

// ---------------------------------------------------------------------------
// quotients suite: quotient maps and embedded copies
// ---------------------------------------------------------------------------

pub fn suite_quotients() -> Vec<Check> {
    let mut checks = Vec::new();

    // quotient instances from the acceptance list
    let mut instances: Vec<(String, Graph, VertexSet, Graph)> = vec![(
        "K_4 / {3,4}".into(),
        make_family(&FamilySpec::Complete(4)).unwrap(),
        VertexSet::from_iter([2, 3]),
        make_family(&FamilySpec::Complete(4))
            .unwrap()
            .delete_twin_edges(VertexSet::from_iter([2, 3]))
            .unwrap(),
    )];
    for q in 2..=4usize {
        instances.push((
            format!("SPK_2,{q} / P"),
            make_family(&FamilySpec::CompleteSplit(2, q)).unwrap(),
            VertexSet::from_iter([0, 1]),
            make_family(&FamilySpec::CompleteBipartite(2, q)).unwrap(),
        ));
    }
    instances.push((
        "SPK_3,3 / P".into(),
        make_family(&FamilySpec::CompleteSplit(3, 3)).unwrap(),
        VertexSet::from_iter([0, 1, 2]),
        make_family(&FamilySpec::CompleteBipartite(3, 3)).unwrap(),
    ));
    let quotient_checks: Vec<Check> = instances
        .par_iter()
        .map(|(name, g, w, gms)| {
            let rg_g = RotationGraph::build(g).unwrap();
            let rg_t = RotationGraph::build(gms).unwrap();
            match build_quotient(&rg_g, *w, &rg_t) {
                Ok(q) => {
                    let mut c = Check::pass("quotient", name.clone());
                    c.witnesses.push(format!(
                        "source |V|={} target |V|={}",
                        q.source.len(),
                        q.target.len()
                    ));
                    c
                }
                Err(e) => Check::fail("quotient", name.clone(), vec![e.to_string()]),
            }
        })
        .collect();
    checks.extend(quotient_checks);

    // embedded copies across the named corpus
    let copy_checks: Vec<Check> = corpus::named_corpus()
        .par_iter()
        .flat_map(|(name, g)| {
            let mut local = Vec::new();
            let small = RotationGraph::build(g).unwrap();
            let mut modes: Vec<OpMode> = vec![OpMode::TrueTwin { v: 0 }, OpMode::FalseTwin { v: 0 }];
            let max_clique = cliques(g).into_iter().max_by_key(|s| s.len()).unwrap();
            modes.push(OpMode::Simplicial { k: max_clique });
            modes.push(OpMode::Simplicial { k: VertexSet::singleton(0) });
            for mode in modes {
                let big_graph = mode.apply(g).unwrap();
                let big = RotationGraph::build(&big_graph).unwrap();
                for anchor in [CopyAnchor::Root, CopyAnchor::Deepest] {
                    local.push(embedded_copies(&big, &small, mode, anchor, name));
                }
            }
            local
        })
        .collect();
    // aggregate copy results per instance family to keep the report small
    let all_pass = copy_checks.iter().all(|c| c.passed);
    let fails: Vec<String> = copy_checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} on {}: {:?}", c.check, c.instance, c.witnesses))
        .collect();
    checks.push(if all_pass {
        let mut c = Check::pass("embedded_copies", "named corpus, all modes and anchors");
        c.witnesses.push(format!("{} bijections verified", copy_checks.len()));
        c
    } else {
        Check::fail("embedded_copies", "named corpus", fails)
    });
    checks
}

// ---------------------------------------------------------------------------
// colorings suite
// ---------------------------------------------------------------------------

pub fn suite_colorings() -> Vec<Check> {
    let mut checks = Vec::new();

    // permutohedra are 2-chromatic, via the sign coloring and the solver
    let mut v = Vec::new();
    for n in 2..=6usize {
        let rg = build(&format!("complete:{n}"));
        match sign_coloring(&rg) {
            Ok(c) => {
                if let Err((a, b)) = c.check_proper(&rg) {
                    v.push(format!("K_{n}: sign coloring improper on {a}-{b}"));
                }
            }
            Err(e) => v.push(format!("K_{n}: {e}")),
        }
        match chromatic_number_exact(&rg, Some(4), 1 << 26) {
            Ok(out) => {
                if out.chi() != Some(2) {
                    v.push(format!("chi(R(K_{n})) = {:?}, want 2", out.chi()));
                }
            }
            Err(e) => v.push(format!("K_{n}: {e}")),
        }
    }
    checks.push(Check::from_violations("chromatic[complete]", "K_2..K_6", v));

    // five-cycle dichotomy on the named corpus
    let mut v = Vec::new();
    for (name, g) in corpus::named_corpus() {
        if g.n() < 3 {
            continue;
        }
        let rg = RotationGraph::build(&g).unwrap();
        match five_cycle_witness(&rg) {
            Ok(Some(_)) if g.is_complete() => v.push(format!("{name}: 5-cycle in a permutohedron")),
            Ok(None) if !g.is_complete() => v.push(format!("{name}: no 5-cycle found")),
            Err(e) => v.push(format!("{name}: {e}")),
            _ => {}
        }
    }
    checks.push(Check::from_violations("five_cycle", "named corpus", v));

    // every connected non-complete threshold graph with n <= 6 has chi = 3
    let mut v = Vec::new();
    let mut tested = 0usize;
    for n in 3..=6usize {
        let outcomes: Vec<Option<String>> = corpus::threshold_words(n)
            .into_par_iter()
            .map(|word| {
                let g = make_family(&FamilySpec::Threshold(word.clone())).unwrap();
                if g.is_complete() {
                    return None;
                }
                let rg = RotationGraph::build(&g).unwrap();
                match chromatic_number_exact(&rg, Some(4), 1 << 26) {
                    Ok(out) if out.chi() == Some(3) => None,
                    Ok(out) => Some(format!(
                        "threshold word {word:?}: chi = {:?}, want 3",
                        out.chi()
                    )),
                    Err(e) => Some(format!("threshold word {word:?}: {e}")),
                }
            })
            .collect();
        for o in outcomes {
            tested += 1;
            if let Some(msg) = o {
                v.push(msg);
            }
        }
    }
    checks.push(Check::from_violations(
        "chromatic[threshold]",
        format!("connected non-complete threshold graphs, n <= 6 ({tested} words)"),
        v,
    ));

    // complete bipartite instances
    let mut v = Vec::new();
    for spec in ["kpq:2,2", "kpq:2,3", "kpq:3,3"] {
        let rg = build(spec);
        match chromatic_number_exact(&rg, Some(4), 1 << 27) {
            Ok(out) if out.chi() == Some(3) => {}
            Ok(out) => v.push(format!("{spec}: chi = {:?}, want 3", out.chi())),
            Err(e) => v.push(format!("{spec}: {e}")),
        }
    }
    // the iterated false-twin chain colors the same graphs constructively
    for (p, q) in [(2usize, 2usize), (2, 3), (3, 3)] {
        match coloring::complete_bipartite_coloring(p, q) {
            Ok(out) => {
                if let Err((a, b)) = out.coloring.check_proper(&out.rotation) {
                    v.push(format!("K_{p},{q} chain: improper on {a}-{b}"));
                }
            }
            Err(e) => v.push(format!("K_{p},{q} chain: {e}")),
        }
    }
    checks.push(Check::from_violations("chromatic[bipartite]", "K_2,2 K_2,3 K_3,3", v));

    checks.push(lifted_colorings_check());
    checks.push(threshold_composition_check());
    checks
}

fn base_coloring(rg: &RotationGraph) -> Result<Coloring, String> {
    match chromatic_number_exact(rg, Some(3), 1 << 26) {
        Ok(ChromaticOutcome::Exact { chi: 3, coloring, .. }) => Ok(coloring),
        Ok(other) => Err(format!("base chromatic number: {other:?}")),
        Err(e) => Err(e.to_string()),
    }
}

fn lifted_colorings_check() -> Check {
    let mut v = Vec::new();
    let mut count = 0usize;

    // (base graph spec, K) for the simplicial lift: all of K universal
    let simplicial: Vec<(&str, VertexSet)> = vec![
        ("path:3", VertexSet::singleton(1)),
        ("star:3", VertexSet::singleton(0)),
        ("spk:2,2", VertexSet::from_iter([0, 1])),
        ("spk:3,3", VertexSet::from_iter([0, 1, 2])),
    ];
    for (spec, k) in simplicial {
        count += 1;
        if let Err(e) = run_lift(spec, OpMode::Simplicial { k }) {
            v.push(format!("simplicial lift on {spec}: {e}"));
        }
    }
    // true twin of a universal vertex
    for (spec, vx) in [("path:3", 1), ("star:3", 0), ("spk:2,2", 0), ("spk:2,3", 0)] {
        count += 1;
        if let Err(e) = run_lift(spec, OpMode::TrueTwin { v: vx }) {
            v.push(format!("true-twin lift on {spec}: {e}"));
        }
    }
    // false twin under the V_1/V_2 hypothesis
    for (spec, vx) in [("path:3", 1), ("kpq:2,2", 0), ("kpq:2,3", 2), ("star:3", 0)] {
        count += 1;
        if let Err(e) = run_lift(spec, OpMode::FalseTwin { v: vx }) {
            v.push(format!("false-twin lift on {spec}: {e}"));
        }
    }
    Check::from_violations(
        "lifted_colorings",
        format!("{count} lift instances, full edge scans"),
        v,
    )
}

/// Build base + lifted coloring, scan properness, verify exactly three
/// colors are used and that lifting commutes with recoloring the base by a
/// cyclic color permutation.
fn run_lift(spec: &str, mode: OpMode) -> Result<(), String> {
    let g = make_family(&FamilySpec::parse(spec).unwrap()).unwrap();
    let small = RotationGraph::build(&g).unwrap();
    let c = base_coloring(&small)?;
    let big_graph = mode.apply(&g).map_err(|e| e.to_string())?;
    let big = RotationGraph::build(&big_graph).unwrap();
    let fam = classify_families(&big, &small, mode).map_err(|e| e.to_string())?;
    let lift = |c: &Coloring| -> Result<Coloring, String> {
        let lifted = match mode {
            OpMode::Simplicial { .. } => lift_coloring_simplicial(&big, &small, &fam, c),
            OpMode::TrueTwin { .. } => lift_coloring_true_twin(&big, &small, &fam, c),
            OpMode::FalseTwin { .. } => lift_coloring_false_twin(&big, &small, &fam, c),
        };
        lifted.map_err(|e| e.to_string())
    };
    let lifted = lift(&c)?;
    lifted
        .check_proper(&big)
        .map_err(|(a, b)| format!("lifted coloring improper on edge {a}-{b}"))?;
    if lifted.colors_used() != 3 {
        return Err(format!("lifted coloring uses {} colors, want 3", lifted.colors_used()));
    }
    // recolor the base by the cycle 0 -> 1 -> 2 -> 0 and lift again
    let permuted = Coloring {
        k: c.k,
        assign: c.assign.iter().map(|&x| (x + 1) % 3).collect(),
    };
    let lifted2 = lift(&permuted)?;
    lifted2
        .check_proper(&big)
        .map_err(|(a, b)| format!("lift of permuted base improper on edge {a}-{b}"))?;
    // the modular formulas are shift-equivariant
    for ord in 0..big.len() {
        if (lifted.assign[ord] + 1) % 3 != lifted2.assign[ord] {
            return Err("lift does not commute with the cyclic recoloring".into());
        }
    }
    Ok(())
}

fn threshold_composition_check() -> Check {
    let mut v = Vec::new();
    let words = ["iu", "iiu", "iuu", "iiiu", "iuiu", "iiuu", "iuuu"];
    for w in words {
        let spec = FamilySpec::parse(&format!("threshold:{w}")).unwrap();
        let FamilySpec::Threshold(steps) = &spec else { unreachable!() };
        match threshold_coloring(steps) {
            Ok(out) => {
                if let Err((a, b)) = out.coloring.check_proper(&out.rotation) {
                    v.push(format!("threshold:{w}: improper on {a}-{b}"));
                }
                if out.coloring.colors_used() != 3 {
                    v.push(format!("threshold:{w}: uses {} colors", out.coloring.colors_used()));
                }
                // the constructed graph realizes the word's degree sequence
                // (threshold graphs are determined by their degree sequence)
                let reference = make_family(&spec).unwrap();
                let mut a: Vec<usize> = out.graph.vertices().map(|u| out.graph.degree(u)).collect();
                let mut b: Vec<usize> = reference.vertices().map(|u| reference.degree(u)).collect();
                a.sort_unstable();
                b.sort_unstable();
                if a != b {
                    v.push(format!("threshold:{w}: constructed graph mismatches the word"));
                }
            }
            Err(e) => v.push(format!("threshold:{w}: {e}")),
        }
    }
    // error paths stay errors
    if threshold_coloring(&[crate::graph::ThresholdStep::Universal]).is_ok() {
        v.push("complete word should be rejected".into());
    }
    Check::from_violations("threshold_coloring", format!("{} words", words.len()), v)
}

// ---------------------------------------------------------------------------
// distances suite
// ---------------------------------------------------------------------------

/// Closed form diam(R(SPK_{p,q})) for q <= 4p.
pub fn spk_diameter_formula(p: usize, q: usize) -> usize {
    p * q + (q * (q - 1) / 2) / 2 + p * (p - 1) / 2
}

pub fn suite_distances(deep: bool, seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();

    let spk_expect = [(2usize, 5usize), (3, 8), (4, 12), (5, 16), (6, 20)];
    let kpq_expect = [(3usize, 8usize), (4, 11), (5, 15), (6, 20)];

    // cache built rotation graphs for reuse across checks
    let mut spk_diams = Vec::new();
    let mut v = Vec::new();
    for (q, want) in spk_expect {
        let (diam, used) = family_diameter("spk", 2, q);
        spk_diams.push((q, diam));
        if diam != want {
            v.push(format!("diam(R(SPK_2,{q})) = {diam}, want {want}"));
        }
        if spk_diameter_formula(2, q) != want {
            v.push(format!("closed formula mismatch at q={q}"));
        }
        log::info!("spk:2,{q} diameter {diam} ({used} sources)");
    }
    checks.push(Check::from_violations("diameter[spk]", "SPK_2,q for q = 2..6", v));

    let mut kpq_diams = vec![(2usize, family_diameter("kpq", 2, 2).0)];
    let mut v = Vec::new();
    for (q, want) in kpq_expect {
        let (diam, used) = family_diameter("kpq", 2, q);
        kpq_diams.push((q, diam));
        if diam != want {
            v.push(format!("diam(R(K_2,{q})) = {diam}, want {want}"));
        }
        log::info!("kpq:2,{q} diameter {diam} ({used} sources)");
    }
    checks.push(Check::from_violations("diameter[kpq]", "K_2,q for q = 3..6", v));

    if deep {
        let mut v = Vec::new();
        for (q, want_spk, want_kpq) in [(7usize, 25usize, 25usize), (8, 31, 30)] {
            let (ds, _) = family_diameter("spk", 2, q);
            spk_diams.push((q, ds));
            if ds != want_spk {
                v.push(format!("diam(R(SPK_2,{q})) = {ds}, want {want_spk}"));
            }
            log::info!("spk:2,{q} diameter {ds}");
            let (dk, _) = family_diameter("kpq", 2, q);
            kpq_diams.push((q, dk));
            if dk != want_kpq {
                v.push(format!("diam(R(K_2,{q})) = {dk}, want {want_kpq}"));
            }
            log::info!("kpq:2,{q} diameter {dk}");
        }
        checks.push(Check::from_violations("diameter[deep]", "q = 7, 8", v));
    }

    // broom-path upper bound: 2 diam <= 4q + C(q,2) + 1
    let mut v = Vec::new();
    for &(q, diam) in &kpq_diams {
        if q >= 3 && 2 * diam > 4 * q + q * (q - 1) / 2 + 1 {
            v.push(format!("diam(R(K_2,{q})) = {diam} exceeds the broom bound"));
        }
    }
    checks.push(Check::from_violations("broom_upper_bound", "K_2,q", v));

    // theorem: diam(R(G)) - C(|W|,2) <= diam(R(G-S)), with the known
    // equality pattern
    let mut v = Vec::new();
    {
        let k4 = diameter(&build("complete:4"), None).unwrap().value;
        let spk22 = spk_diams.iter().find(|&&(q, _)| q == 2).unwrap().1;
        if !metrics::lower_bound_holds(k4, 2, spk22) {
            v.push(format!("K_4: {k4} - 1 > {spk22}"));
        }
        if k4 - 1 != spk22 {
            v.push(format!("K_4/SPK_2,2 should be tight: {k4} - 1 != {spk22}"));
        }
    }
    for &(q, ds) in &spk_diams {
        let Some(&(_, dk)) = kpq_diams.iter().find(|&&(qq, _)| qq == q) else { continue };
        if !metrics::lower_bound_holds(ds, 2, dk) {
            v.push(format!("q={q}: {ds} - 1 > {dk}"));
        }
        let tight = ds - 1 == dk;
        let expect_tight = matches!(q, 4 | 5 | 8);
        if tight != expect_tight {
            v.push(format!("q={q}: equality pattern mismatch (diam {ds} vs {dk})"));
        }
        // corollary: pq + floor(C(q,2)/2) <= diam(R(K_p,q))
        let coro = 2 * q + (q * (q - 1) / 2) / 2;
        if coro > dk {
            v.push(format!("q={q}: corollary bound {coro} > {dk}"));
        }
    }
    checks.push(Check::from_violations("lower_bound_theorem", "SPK vs K pairs", v));

    checks.push(witness_distance_check(deep));
    checks.push(orbit_agreement_check());
    checks.push(parity_law_check(seed));
    checks.push(twin_rotation_law_check(seed));
    checks.push(quotient_distance_law_check(seed));
    checks.push(profile_invariants_check());
    checks
}

fn family_diameter(family: &str, p: usize, q: usize) -> (usize, usize) {
    let rg = build(&format!("{family}:{p},{q}"));
    let orbits = orbit_reduce(&rg, &twin_class_generators(rg.graph())).unwrap();
    let d = diameter(&rg, Some(&orbits)).unwrap();
    (d.value, d.sources_run)
}

/// The fixture tree pairs realize the stated distances in their SPK
/// rotation graphs (q = 7 only when deep, to keep the default suite fast...
/// the 190k-vertex build is still only a few seconds).
fn witness_distance_check(_deep: bool) -> Check {
    let fixtures: Vec<(&str, &str, &str, usize)> = vec![
        (
            "spk:2,3",
            include_str!("../fixtures/spk23_fig9_t.json"),
            include_str!("../fixtures/spk23_fig9_tprime.json"),
            8,
        ),
        (
            "spk:2,6",
            include_str!("../fixtures/spk26_fig10_t.json"),
            include_str!("../fixtures/spk26_fig10_tprime.json"),
            20,
        ),
        (
            "spk:2,7",
            include_str!("../fixtures/spk27_fig11_t.json"),
            include_str!("../fixtures/spk27_fig11_tprime.json"),
            25,
        ),
    ];
    let mut v = Vec::new();
    for (spec, tj, tpj, want) in fixtures {
        let rg = build(spec);
        let t = match tree_from_json(tj) {
            Ok(t) => t,
            Err(e) => {
                v.push(format!("{spec}: fixture: {e}"));
                continue;
            }
        };
        let tp = match tree_from_json(tpj) {
            Ok(t) => t,
            Err(e) => {
                v.push(format!("{spec}: fixture: {e}"));
                continue;
            }
        };
        match (rg.ordinal_of(&t), rg.ordinal_of(&tp)) {
            (Some(a), Some(b)) => {
                let d = distance(&rg, a, b);
                if d != want {
                    v.push(format!("{spec}: witness distance {d}, want {want}"));
                }
            }
            _ => v.push(format!("{spec}: fixture tree missing from R(G)")),
        }
    }
    Check::from_violations("witness_distances", "figure tree pairs", v)
}

/// Orbit-reduced diameter equals the plain all-sources diameter at q <= 4.
fn orbit_agreement_check() -> Check {
    let mut v = Vec::new();
    for spec in ["complete:4", "spk:2,2", "spk:2,3", "spk:2,4", "kpq:2,3", "kpq:2,4"] {
        let rg = build(spec);
        let orbits = orbit_reduce(&rg, &twin_class_generators(rg.graph())).unwrap();
        let with = diameter(&rg, Some(&orbits)).unwrap().value;
        let without = diameter(&rg, None).unwrap().value;
        if with != without {
            v.push(format!("{spec}: orbit {with} vs full {without}"));
        }
    }
    Check::from_violations("orbit_agreement", "q <= 4 instances", v)
}

/// >= 500 random walks per base edge per instance, plus BFS geodesics.
fn parity_law_check(seed: u64) -> Check {
    let mut v = Vec::new();
    let mut walks_run = 0usize;
    for spec in ["complete:4", "spk:2,2", "spk:2,3", "kpq:2,3"] {
        let rg = build(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ rg.len() as u64);
        for (u, w) in rg.graph().edges() {
            for _ in 0..500 {
                let start = rng.gen_range(0..rg.len());
                let len = rng.gen_range(0..=24);
                let mut walk = vec![start];
                for _ in 0..len {
                    let cur = *walk.last().unwrap();
                    let nbrs = rg.neighbors_of(cur);
                    walk.push(nbrs[rng.gen_range(0..nbrs.len())] as usize);
                }
                walks_run += 1;
                match rotation_parity_check(&rg, &walk, u, w) {
                    Ok(true) => {}
                    Ok(false) => {
                        v.push(format!("{spec}: parity law fails on a walk for pair {u},{w}"));
                    }
                    Err(e) => v.push(format!("{spec}: {e}")),
                }
            }
        }
        // geodesics between sampled pairs, all base edges
        for _ in 0..100 {
            let s = rng.gen_range(0..rg.len());
            let t = rng.gen_range(0..rg.len());
            let path = shortest_path(&rg, s, t);
            for (u, w) in rg.graph().edges() {
                walks_run += 1;
                if !matches!(rotation_parity_check(&rg, &path, u, w), Ok(true)) {
                    v.push(format!("{spec}: parity law fails on a geodesic for {u},{w}"));
                }
            }
        }
    }
    Check::from_violations("rotation_parity", format!("{walks_run} walks"), v)
}

fn twin_rotation_law_check(seed: u64) -> Check {
    let mut v = Vec::new();
    // exhaustive on K_4 with the twin pair {3,4} (ids 2,3)
    let rg = build("complete:4");
    for s in 0..rg.len() {
        for t in 0..rg.len() {
            match twin_rotation_check(&rg, 2, 3, s, t) {
                Ok(true) => {}
                Ok(false) => v.push(format!("K_4: geodesic law fails for pair {s},{t}")),
                Err(e) => v.push(format!("K_4: {e}")),
            }
        }
    }
    // sampled on SPK_{2,3} with W = P
    let rg = build("spk:2,3");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7717);
    for _ in 0..300 {
        let s = rng.gen_range(0..rg.len());
        let t = rng.gen_range(0..rg.len());
        match twin_rotation_check(&rg, 0, 1, s, t) {
            Ok(true) => {}
            Ok(false) => v.push(format!("SPK_2,3: geodesic law fails for pair {s},{t}")),
            Err(e) => v.push(format!("SPK_2,3: {e}")),
        }
    }
    Check::from_violations("twin_rotation_law", "K_4 exhaustive + SPK_2,3 sampled", v)
}

fn quotient_distance_law_check(seed: u64) -> Check {
    let mut v = Vec::new();
    {
        let source = build("complete:4");
        let target = build("spk:2,2");
        match build_quotient(&source, VertexSet::from_iter([2, 3]), &target) {
            Ok(q) => {
                for s in 0..source.len() {
                    for t in 0..source.len() {
                        if !quotient_distance_check(&q, s, t) {
                            v.push(format!("K_4 -> SPK_2,2: dichotomy fails for {s},{t}"));
                        }
                    }
                }
            }
            Err(e) => v.push(format!("K_4 -> SPK_2,2: {e}")),
        }
    }
    {
        let source = build("spk:2,3");
        let target = build("kpq:2,3");
        match build_quotient(&source, VertexSet::from_iter([0, 1]), &target) {
            Ok(q) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e0d);
                for _ in 0..200 {
                    let s = rng.gen_range(0..source.len());
                    let t = rng.gen_range(0..source.len());
                    if !quotient_distance_check(&q, s, t) {
                        v.push(format!("SPK_2,3 -> K_2,3: dichotomy fails for {s},{t}"));
                    }
                }
                // the figure witness pair maps to a distance-8 pair
                let tj = tree_from_json(include_str!("../fixtures/spk23_fig9_t.json")).unwrap();
                let tpj =
                    tree_from_json(include_str!("../fixtures/spk23_fig9_tprime.json")).unwrap();
                let a = source.ordinal_of(&tj).unwrap();
                let b = source.ordinal_of(&tpj).unwrap();
                let dt = distance(&target, q.map[a] as usize, q.map[b] as usize);
                if dt != 8 {
                    v.push(format!("projected witness pair at distance {dt}, want 8"));
                }
            }
            Err(e) => v.push(format!("SPK_2,3 -> K_2,3: {e}")),
        }
    }
    Check::from_violations("quotient_distance_law", "K_4 exhaustive + SPK_2,3 sampled", v)
}

fn profile_invariants_check() -> Check {
    let mut v = Vec::new();
    for spec in ["spk:2,3", "kpq:2,3"] {
        let rg = build(spec);
        for s in [0usize, rg.len() / 2] {
            let p = bfs_from(&rg, s);
            if p.dist[s] != 0 {
                v.push(format!("{spec}: dist(source) != 0"));
            }
            for (a, b) in rg.edges() {
                if (p.dist[a] as i16 - p.dist[b] as i16).abs() > 1 {
                    v.push(format!("{spec}: Lipschitz violation on {a}-{b}"));
                    break;
                }
            }
            if p.farthest.iter().any(|&f| p.dist[f as usize] as usize != p.eccentricity) {
                v.push(format!("{spec}: farthest set inconsistent"));
            }
        }
        // triangle inequality through a midpoint
        let pa = bfs_from(&rg, 0);
        let m = rg.len() / 3;
        let pm = bfs_from(&rg, m);
        for t in 0..rg.len() {
            if (pa.dist[t] as usize) > pa.dist[m] as usize + pm.dist[t] as usize {
                v.push(format!("{spec}: triangle inequality fails at {t}"));
                break;
            }
        }
    }
    Check::from_violations("distance_profile_invariants", "SPK_2,3 and K_2,3", v)
}

/// Run a named suite.
pub fn run_suite(name: &str, deep: bool, seed: u64) -> Option<Vec<Check>> {
    match name {
        "partitions" => Some(suite_partitions()),
        "quotients" => Some(suite_quotients()),
        "colorings" => Some(suite_colorings()),
        "distances" => Some(suite_distances(deep, seed)),
        "all" => {
            let mut all = suite_partitions();
            all.extend(suite_quotients());
            all.extend(suite_colorings());
            all.extend(suite_distances(deep, seed));
            Some(all)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spk_formula_values() {
        assert_eq!(spk_diameter_formula(2, 2), 5);
        assert_eq!(spk_diameter_formula(2, 3), 8);
        assert_eq!(spk_diameter_formula(2, 4), 12);
        assert_eq!(spk_diameter_formula(2, 5), 16);
        assert_eq!(spk_diameter_formula(2, 6), 20);
        assert_eq!(spk_diameter_formula(2, 7), 25);
        assert_eq!(spk_diameter_formula(2, 8), 31);
    }

    #[test]
    fn unknown_suite_is_none() {
        assert!(run_suite("bogus", false, 0).is_none());
    }
}
