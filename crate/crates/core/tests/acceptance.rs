//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! All tolerances are exact equalities. The q = 7, 8 diameter reproductions
//! are behind `--ignored` (run with `cargo test --release -- --ignored`), as
//! is the CLI's `verify --deep`.

use rotation_graphs::graph::{make_family, FamilySpec};
use rotation_graphs::metrics::{diameter, orbit_reduce, twin_class_generators};
use rotation_graphs::report::Check;
use rotation_graphs::rotation::{catalan, RotationGraph};
use rotation_graphs::verify;

fn report(criterion: &str, checks: &[Check]) {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    if failed.is_empty() {
        println!("PASS {criterion}");
    } else {
        println!("FAIL {criterion}");
        for c in &failed {
            println!("  {} — {}: {:?}", c.check, c.instance, c.witnesses);
        }
    }
    assert!(failed.is_empty(), "{criterion} failed");
}

fn named(checks: &[Check], prefix: &str) -> Vec<Check> {
    checks.iter().filter(|c| c.check.starts_with(prefix)).cloned().collect()
}

#[test]
fn criterion_1_vertex_counts() {
    // direct, independent of the suite plumbing
    let mut checks = Vec::new();
    for n in 3..=6usize {
        let rg = RotationGraph::build(&make_family(&FamilySpec::Complete(n)).unwrap()).unwrap();
        let want: usize = (1..=n).product();
        checks.push(Check::from_violations(
            "counts",
            format!("K_{n}"),
            if rg.len() == want { vec![] } else { vec![format!("{} != {want}", rg.len())] },
        ));
    }
    for n in 3..=8usize {
        let rg = RotationGraph::build(&make_family(&FamilySpec::Path(n)).unwrap()).unwrap();
        checks.push(Check::from_violations(
            "counts",
            format!("P_{n}"),
            if rg.len() == catalan(n) {
                vec![]
            } else {
                vec![format!("{} != {}", rg.len(), catalan(n))]
            },
        ));
    }
    let rg =
        RotationGraph::build(&make_family(&FamilySpec::CompleteSplit(2, 2)).unwrap()).unwrap();
    checks.push(Check::from_violations(
        "counts",
        "SPK_2,2",
        if rg.len() == 22 { vec![] } else { vec![format!("{} != 22", rg.len())] },
    ));
    report("criterion 1: vertex counts (n!, Catalan, 22)", &checks);
}

#[test]
fn criterion_2_partitions_and_paths() {
    let checks = verify::suite_partitions();
    report("criterion 2: partition + path-inducing checks", &checks);
}

#[test]
fn criterion_3_quotients() {
    let checks = verify::suite_quotients();
    report("criterion 3: quotient invariants", &named(&checks, "quotient"));
}

#[test]
fn criterion_4_embedded_copies() {
    let checks = verify::suite_quotients();
    report("criterion 4: embedded copies", &named(&checks, "embedded_copies"));
}

#[test]
fn criterion_5_chromatic() {
    let checks = verify::suite_colorings();
    report("criterion 5: chromatic numbers and lifted colorings", &checks);
}

#[test]
fn criterion_6_diameters_default() {
    let checks = verify::suite_distances(false, verify::DEFAULT_SEED);
    let subset: Vec<Check> = checks
        .iter()
        .filter(|c| c.check.starts_with("diameter") || c.check.starts_with("broom"))
        .cloned()
        .collect();
    report("criterion 6: diameters q <= 6 and the SPK closed formula", &subset);
}

#[test]
#[ignore = "deep: q = 7, 8 builds take ~30s and ~1 GiB"]
fn criterion_6_diameters_deep() {
    let mut checks = Vec::new();
    for (spec, want) in [("spk:2,7", 25), ("kpq:2,7", 25), ("spk:2,8", 31), ("kpq:2,8", 30)] {
        let g = make_family(&FamilySpec::parse(spec).unwrap()).unwrap();
        let rg = RotationGraph::build(&g).unwrap();
        let orbits = orbit_reduce(&rg, &twin_class_generators(&g)).unwrap();
        let d = diameter(&rg, Some(&orbits)).unwrap().value;
        checks.push(Check::from_violations(
            "diameter[deep]",
            spec,
            if d == want { vec![] } else { vec![format!("diam = {d}, want {want}")] },
        ));
    }
    report("criterion 6 (deep): diam K_2,7 = 25, K_2,8 = 30", &checks);
}

#[test]
fn criterion_7_witness_distances() {
    let checks = verify::suite_distances(false, verify::DEFAULT_SEED);
    report("criterion 7: figure witness distances 8, 20, 25", &named(&checks, "witness"));
}

#[test]
fn criterion_8_lemma_properties() {
    let checks = verify::suite_distances(false, verify::DEFAULT_SEED);
    let subset: Vec<Check> = checks
        .iter()
        .filter(|c| {
            c.check.starts_with("rotation_parity")
                || c.check.starts_with("twin_rotation")
                || c.check.starts_with("quotient_distance")
        })
        .cloned()
        .collect();
    assert_eq!(subset.len(), 3);
    report("criterion 8: parity, twin-rotation, quotient-distance laws", &subset);
}

#[test]
fn criterion_9_lower_bound_theorem() {
    let checks = verify::suite_distances(false, verify::DEFAULT_SEED);
    report(
        "criterion 9: diam(R(G)) - C(|W|,2) <= diam(R(G-S)) with the equality pattern",
        &named(&checks, "lower_bound"),
    );
}
