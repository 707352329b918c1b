//! Acceptance suite: one test per criterion, each printing a pass line with
//! its runtime. Every comparison is exact; there are no tolerances anywhere.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::Rng;

use symforge_core::dodgson::{self, DodgsonError};
use symforge_core::forest;
use symforge_core::graph::{EdgeId, EdgeVar, FeynGraph, WhitneyMove};
use symforge_core::graphfile;
use symforge_core::laplacian::{self, PolyMatrix};
use symforge_core::matroid;
use symforge_core::poly::find_variable_isomorphism;
use symforge_core::random::{self, GraphGenConfig, WhitneyKind};
use symforge_core::{MultiPoly, Poly};

const CORPUS_SEED: u64 = 0x5f0e_7a21;
const CORPUS_SIZE: usize = 200;

fn fixture(name: &str) -> FeynGraph {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    graphfile::load(&path).expect("fixture parses")
}

fn corpus() -> Vec<FeynGraph> {
    let cfg = GraphGenConfig::default();
    let mut rng = random::rng_for_seed(CORPUS_SEED);
    (0..CORPUS_SIZE)
        .map(|_| random::random_connected_graph(&mut rng, &cfg))
        .collect()
}

fn feyn_vars(g: &FeynGraph) -> Vec<u32> {
    g.edges()
        .iter()
        .filter_map(|e| match e.var {
            EdgeVar::Feyn(i) => Some(i),
            EdgeVar::Leg(_) => None,
        })
        .collect()
}

fn x(i: u32) -> Poly {
    Poly::feyn(i)
}

fn report(criterion: u32, title: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its runtime budget: {elapsed:?} >= {budget:?}"
    );
    println!(
        "acceptance {criterion} ({title}): pass ({} ms)",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_1_two_loop_determinant_golden() {
    let started = Instant::now();
    let g = fixture("fig1.graph");
    let expected = x(1) * x(2) * (x(3) + x(4))
        + (x(1) + x(2)) * x(3) * x(4)
        + (x(1) * x(2) + x(1) * x(3) + x(2) * x(4) + x(3) * x(4)) * x(5);
    let lap = laplacian::build_laplacian::<BigInt>(&g);
    for i in 0..4 {
        let removed = BTreeSet::from([i]);
        assert_eq!(
            laplacian::minor_det(&lap, &removed, &removed),
            expected,
            "principal minor {i} must equal the two-loop polynomial"
        );
    }
    assert_eq!(forest::first_symanzik_u::<BigInt>(&g), expected);
    report(
        1,
        "two-loop determinant golden",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_2_parallel_pair_matroid_golden() {
    let started = Instant::now();
    let g = fixture("fig2.graph");
    let m = matroid::cycle_matroid(&g);
    assert_eq!(m.ground, vec!["e1", "e2", "e3", "e4"]);

    let set = |ids: &[&str]| -> BTreeSet<EdgeId> { ids.iter().map(|s| s.to_string()).collect() };
    let expected: BTreeSet<BTreeSet<EdgeId>> = [
        set(&[]),
        set(&["e1"]),
        set(&["e2"]),
        set(&["e3"]),
        set(&["e4"]),
        set(&["e1", "e3"]),
        set(&["e1", "e4"]),
        set(&["e2", "e3"]),
        set(&["e2", "e4"]),
        set(&["e3", "e4"]),
    ]
    .into();
    assert_eq!(matroid::independent_sets(&m), expected);
    report(
        2,
        "parallel-pair matroid golden",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_3_cross_oracle_equivalence() {
    let started = Instant::now();
    let graphs = corpus();
    assert!(graphs.len() >= 200);
    assert!(
        graphs
            .iter()
            .any(|g| g.edges().iter().any(|e| e.is_self_loop())),
        "corpus must contain self-loops"
    );
    assert!(
        graphs.iter().any(|g| {
            g.edges().iter().enumerate().any(|(i, e)| {
                g.edges()[i + 1..].iter().any(|f| {
                    !e.is_self_loop()
                        && (e.ends == f.ends || (e.ends.0 == f.ends.1 && e.ends.1 == f.ends.0))
                })
            })
        }),
        "corpus must contain parallel edges"
    );
    let leg_counts: BTreeSet<usize> = graphs.iter().map(|g| g.legs().len()).collect();
    assert_eq!(leg_counts, BTreeSet::from([0, 1, 2, 3, 4]));

    for g in &graphs {
        let vars = feyn_vars(g);
        let u_forest = forest::first_symanzik_u::<BigInt>(g);
        let u_det: Poly = laplacian::laplacian_u(g).expect("connected");
        assert_eq!(u_forest, u_det);
        let calu_forest = forest::first_symanzik_calu::<BigInt>(g).expect("connected");
        assert_eq!(
            calu_forest,
            u_det.reciprocal_transform(&vars).expect("multilinear")
        );

        let f0_forest = forest::second_symanzik_f0::<BigInt>(g).expect("connected");
        let f0_det: Poly = laplacian::f0_via_w(g).expect("connected");
        assert_eq!(f0_forest, f0_det);
        let calf0_forest = forest::second_symanzik_calf0::<BigInt>(g).expect("connected");
        assert_eq!(
            calf0_forest,
            f0_det.reciprocal_transform(&vars).expect("multilinear")
        );
    }
    report(
        3,
        "cross-oracle equivalence on 200 graphs",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_4_structural_properties() {
    let started = Instant::now();
    for g in &corpus() {
        let vars = feyn_vars(g);
        let l = g.loop_number() as u32;

        let u = forest::first_symanzik_u::<BigInt>(g);
        let calu = forest::first_symanzik_calu::<BigInt>(g).expect("connected");
        assert!(calu.is_multilinear(&vars));
        assert!(calu.is_homogeneous(&vars, l));
        assert!(calu.terms().all(|(_, c)| *c == BigInt::from(1)));
        assert_eq!(calu.reciprocal_transform(&vars).expect("multilinear"), u);
        assert_eq!(u.reciprocal_transform(&vars).expect("multilinear"), calu);

        let f0 = forest::second_symanzik_f0::<BigInt>(g).expect("connected");
        let calf0 = forest::second_symanzik_calf0::<BigInt>(g).expect("connected");
        assert!(calf0.is_multilinear(&vars));
        assert!(calf0.is_homogeneous(&vars, l + 1) || calf0.is_zero());
        assert_eq!(calf0.reciprocal_transform(&vars).expect("multilinear"), f0);
        assert_eq!(f0.reciprocal_transform(&vars).expect("multilinear"), calf0);

        if !g.masses().is_empty() {
            let f = forest::full_f::<BigInt>(g).expect("connected");
            assert!(f.is_homogeneous(&vars, l + 1) || f.is_zero());
        }

        if !g.legs().is_empty() {
            let w_report = laplacian::w_expansion_check(g).expect("connected with legs");
            assert!(w_report.w0_zero);
            assert!(w_report.w1_matches);
        }
    }
    report(
        4,
        "structural properties on the corpus",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_5_deletion_contraction() {
    let started = Instant::now();
    let mut checked = 0usize;
    for g in &corpus() {
        for e in g.regular_edges() {
            assert!(
                forest::deletion_contraction_check(g, &e).expect("regular edge"),
                "deletion-contraction failed on {} edge {e}",
                g.name
            );
            checked += 1;
        }
    }
    assert!(checked > 100, "corpus must exercise many regular edges");
    report(
        5,
        "deletion-contraction recursions",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_6_dodgson_suites() {
    let started = Instant::now();

    // raw determinant relation on 100 random matrices, dims 2..=6
    let mut rng = random::rng_for_seed(CORPUS_SEED ^ 0xd0d6);
    for k in 0..100 {
        let n = rng.gen_range(2..=6usize);
        let symbolic = k % 2 == 0;
        let entries: Vec<Vec<Poly>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let mut entry = Poly::int(rng.gen_range(-9i64..=9));
                        if symbolic && rng.gen_bool(0.6) {
                            let a = rng.gen_range(1..=4u32);
                            entry += &x(a).scale(&BigInt::from(rng.gen_range(-3i64..=3)));
                        }
                        entry
                    })
                    .collect()
            })
            .collect();
        let m = PolyMatrix::from_rows(entries);
        let i = rng.gen_range(0..n);
        let j = (i + 1 + rng.gen_range(0..n - 1)) % n;
        assert!(
            dodgson::dodgson_determinant_check(&m, i, j).expect("valid indices"),
            "determinant relation failed on matrix {k}"
        );
    }

    // graph-side identities across the corpus
    let mut u_checked = 0usize;
    let mut mixed_checked = 0usize;
    for g in &corpus() {
        let vars = feyn_vars(g);
        for setup in dodgson::valid_setups(g) {
            let report = dodgson::dodgson_u_identity(&setup).expect("valid setup");
            assert!(
                report.holds,
                "first-polynomial identity failed on {} pair ({}, {})",
                g.name, setup.ea, setup.eb
            );
            assert!(report.delta1_quotient.is_multilinear(&vars));
            assert!(
                report
                    .delta1_quotient
                    .terms()
                    .all(|(_, c)| *c > BigInt::from(0)),
                "forest-generated quotient must have positive coefficients"
            );
            u_checked += 1;

            if !g.legs().is_empty() {
                match dodgson::dodgson_mixed_identity(&setup) {
                    Ok(report) => {
                        assert!(
                            report.holds,
                            "mixed identity failed on {} pair ({}, {})",
                            g.name, setup.ea, setup.eb
                        );
                        mixed_checked += 1;
                    }
                    Err(DodgsonError::DegenerateDelta1) => {}
                    Err(e) => panic!("unexpected error: {e}"),
                }
            }
        }
    }
    assert!(u_checked > 100, "corpus must exercise many edge pairs");
    assert!(mixed_checked > 50, "corpus must exercise legged pairs");
    report(
        6,
        "dodgson determinant and graph identities",
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_7_whitney_suite() {
    let started = Instant::now();
    let mut rng = random::rng_for_seed(CORPUS_SEED ^ 0x2150);
    let mut instances = 0usize;
    for kind in [
        WhitneyKind::Identify,
        WhitneyKind::Cleave,
        WhitneyKind::Twist,
    ] {
        for _ in 0..10 {
            let (g, mv) = random::random_whitney_instance(&mut rng, kind);
            let report = matroid::whitney_equivalence_check(&g, std::slice::from_ref(&mv))
                .expect("valid move");
            assert!(
                report.matroid_bijection.is_some(),
                "matroid isomorphism missing after {mv:?} on {}",
                g.name
            );
            assert!(
                report.u_bijection.is_some(),
                "polynomial isomorphism missing after {mv:?} on {}",
                g.name
            );
            instances += 1;
        }
    }
    assert!(instances >= 30);

    // bundled twist fixture
    let g = fixture("fig3-g.graph");
    let gprime = fixture("fig3-gprime.graph");
    let side: BTreeSet<EdgeId> = ["e8", "e9", "e10", "e11", "e12"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mv = WhitneyMove::Twist {
        u: "u".into(),
        v: "v".into(),
        side,
    };
    let report = matroid::whitney_equivalence_check(&g, &[mv]).expect("twist applies");
    assert!(report.both_found());

    // the bundled primed fixture is the same graph up to its name
    let m1 = matroid::cycle_matroid(&report.transformed);
    let m2 = matroid::cycle_matroid(&gprime);
    assert!(matroid::matroid_isomorphic(&m1, &m2).is_some());
    let u1: Poly = matroid::u_from_bases::<BigInt>(&m1);
    let u2: Poly = matroid::u_from_bases::<BigInt>(&m2);
    assert_eq!(u1, u2);
    let original: MultiPoly<BigInt> = matroid::u_from_bases(&matroid::cycle_matroid(&g));
    assert!(find_variable_isomorphism(&original, &u2).is_some());

    // base-exchange axiom on a corpus sample and the twist fixture
    for g in corpus().iter().take(20) {
        assert!(matroid::verify_base_exchange(&matroid::cycle_matroid(g)));
    }
    assert!(matroid::verify_base_exchange(&m1));

    report_line_7(started);
}

fn report_line_7(started: Instant) {
    report(
        7,
        "whitney 2-isomorphism suite",
        started,
        Duration::from_secs(60),
    );
}
