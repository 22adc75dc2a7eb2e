//! Acceptance gate: one test per shipped guarantee, each printing a
//! single [PASS]/[FAIL] line with the counts that back it.

use std::process::Command;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use poset_cosheaf::{
    check_proof_steps, falsify_refinement, figure1, indicator_above, is_isomorphism,
    mutually_inverse, random_diagram, random_monotone_map, random_poset, rat, Cofinality,
    CoverClass, Diagram, DownSet, DownSetLattice, FalsifyBounds, FinMap, FinitePoset, Hat, Map,
    Obj, OpenDiagram, RatMatrix, TheoremVerifier, ValueCategory,
};

fn verdict(ok: bool) -> &'static str {
    if ok {
        "[PASS]"
    } else {
        "[FAIL]"
    }
}

const SWEEP_SEED: u64 = 2026;

/// Both value categories with the object-size bound each is swept at.
const CATEGORIES: [(ValueCategory, usize); 2] =
    [(ValueCategory::Vect, 2), (ValueCategory::FinSet, 3)];

#[derive(Default)]
struct SweepStats {
    posets: usize,
    instances: usize,
    gluing_checks: usize,
    gluing_failures: usize,
    covers_seen: usize,
    cech_covers: usize,
    cech_non_basic: usize,
    restriction_points: usize,
    restriction_failures: usize,
    naturality_squares: usize,
    naturality_failures: usize,
}

/// One pass over every labeled poset on up to four elements with three
/// seeded diagrams per category, shared by the tests that grade it.
fn sweep() -> &'static SweepStats {
    static STATS: OnceLock<SweepStats> = OnceLock::new();
    STATS.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED);
        let mut stats = SweepStats::default();
        for n in 0..=4 {
            for poset in poset_cosheaf::enumerate_labeled(n) {
                stats.posets += 1;
                let verifier = TheoremVerifier::prepare(&poset, 4).expect("small lattices");
                for open_index in 0..verifier.lattice().len() {
                    for info in verifier.covers_at(open_index) {
                        stats.covers_seen += 1;
                        if info.is_cech() {
                            stats.cech_covers += 1;
                            if !info.is_basic() {
                                stats.cech_non_basic += 1;
                            }
                        }
                    }
                }
                for (category, bound) in CATEGORIES {
                    for _ in 0..3 {
                        let diagram = random_diagram(&mut rng, &poset, category, bound);
                        stats.instances += 1;
                        let report = verifier.verify(&diagram).expect("verification runs");
                        stats.gluing_checks += report.checks;
                        stats.gluing_failures += report.failures.len();
                        grade_restriction(&poset, verifier.lattice(), &diagram, &mut stats);
                    }
                }
            }
        }
        stats
    })
}

/// Checks that the extension's value on each principal down-set is the
/// original value, via an invertible colimit leg, and that those legs
/// commute with the original edge maps.
fn grade_restriction(
    poset: &Arc<FinitePoset>,
    lattice: &DownSetLattice,
    diagram: &Diagram,
    stats: &mut SweepStats,
) {
    let hat = Hat::hat(lattice, diagram).expect("extension exists");
    let values = OpenDiagram::from_hat(&hat);
    let leg_at = |p: usize| -> Map {
        let point = hat.at(&DownSet::principal(poset, p)).expect("principal open");
        let position = point.comma().position_of(p).expect("p lies in its own cone");
        point.colimit().leg(position).clone()
    };
    for p in 0..poset.len() {
        stats.restriction_points += 1;
        if !is_isomorphism(&leg_at(p)) {
            stats.restriction_failures += 1;
        }
    }
    for (p, q) in poset.hasse_edges() {
        let i = values
            .index_of(&DownSet::principal(poset, p))
            .expect("principal open is listed");
        let j = values
            .index_of(&DownSet::principal(poset, q))
            .expect("principal open is listed");
        let between = values.diagram().induced_map(i, j).expect("comparable opens");
        let left = between.compose(&leg_at(p));
        let right = leg_at(q).compose(diagram.edge_map(p, q));
        stats.naturality_squares += 1;
        if left != right {
            stats.naturality_failures += 1;
        }
    }
}

#[test]
fn builtin_counterexample_reproduces_within_a_second() {
    let start = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_poset-cosheaf"))
        .args(["counterexample", "--builtin", "figure1"])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    let stdout = String::from_utf8(output.stdout).expect("utf-8 stdout");
    let ok = output.status.code() == Some(0)
        && stdout == "dim F̂[U1]=1, dim F̂[U2]=2, dim F(X)=1; injective; surjective; composite iso\n"
        && elapsed.as_secs_f64() < 1.0;
    println!(
        "{} builtin counterexample reproduced in {:.0} ms",
        verdict(ok),
        elapsed.as_secs_f64() * 1000.0
    );
    assert!(ok, "stdout was {stdout:?} after {elapsed:?}");
}

#[test]
fn extensions_glue_on_every_basic_cover_of_every_small_poset() {
    let stats = sweep();
    let ok = stats.gluing_failures == 0 && stats.gluing_checks > 0;
    println!(
        "{} gluing held in {}/{} checks over {} posets and {} diagrams",
        verdict(ok),
        stats.gluing_checks - stats.gluing_failures,
        stats.gluing_checks,
        stats.posets,
        stats.instances
    );
    assert!(ok);
}

#[test]
fn pairwise_intersection_covers_are_always_basic() {
    let stats = sweep();
    let ok = stats.cech_non_basic == 0 && stats.cech_covers > 0;
    println!(
        "{} all {} intersection-closed covers among {} enumerated were basic",
        verdict(ok),
        stats.cech_covers,
        stats.covers_seen
    );
    assert!(ok);
}

#[test]
fn extension_restricts_to_the_original_diagram_naturally() {
    let stats = sweep();
    let ok = stats.restriction_failures == 0
        && stats.naturality_failures == 0
        && stats.restriction_points > 0;
    println!(
        "{} restriction legs invertible at {} points, {} squares commuted",
        verdict(ok),
        stats.restriction_points,
        stats.naturality_squares
    );
    assert!(ok);
}

#[test]
fn cofinal_maps_transport_colimits_and_certificates_separate() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut transports = 0usize;
    let mut transport_failures = 0usize;
    let mut certificates = 0usize;
    let mut certificate_failures = 0usize;
    let mut attempts = 0usize;
    while transports < 1000 && attempts < 100_000 {
        attempts += 1;
        let source_size = rng.gen_range(0..=5);
        let target_size = rng.gen_range(1..=5);
        let source = random_poset(&mut rng, source_size);
        let target = random_poset(&mut rng, target_size);
        let map = random_monotone_map(&mut rng, &source, &target);
        let (category, bound) = CATEGORIES[attempts % 2];
        match map.cofinality() {
            Cofinality::Cofinal => {
                let diagram = random_diagram(&mut rng, &target, category, bound);
                let direct = diagram.colimit();
                let pulled = diagram.restrict(&map).expect("restriction exists");
                let cocone: Vec<Map> = (0..source.len())
                    .map(|p| direct.leg(map.apply(p)).clone())
                    .collect();
                let comparison = pulled
                    .colimit()
                    .factor_through(direct.object(), &cocone)
                    .expect("cocone factors");
                transports += 1;
                if !is_isomorphism(&comparison) {
                    transport_failures += 1;
                }
            }
            Cofinality::EmptyComma { target: at } | Cofinality::DisconnectedComma { target: at, .. } => {
                let indicator = indicator_above(&target, at);
                let whole = indicator.colimit();
                let pulled = indicator.restrict(&map).expect("restriction exists");
                let separated = pulled.colimit();
                certificates += 1;
                if whole.object().size() != 1 || separated.object().size() == 1 {
                    certificate_failures += 1;
                }
            }
        }
    }
    let ok = transports >= 1000
        && transport_failures == 0
        && certificates > 0
        && certificate_failures == 0;
    println!(
        "{} {} cofinal transports invertible, {} failure certificates separated",
        verdict(ok),
        transports,
        certificates
    );
    assert!(ok);
}

#[test]
fn every_proof_stage_passes_on_small_basic_covers() {
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED);
    let mut covers = 0usize;
    let mut stage_failures = 0usize;
    let mut points = 0usize;
    for n in 0..=3 {
        for poset in poset_cosheaf::enumerate_labeled(n) {
            let verifier = TheoremVerifier::prepare(&poset, 4).expect("small lattices");
            for (category, bound) in CATEGORIES {
                for _ in 0..3 {
                    let diagram = random_diagram(&mut rng, &poset, category, bound);
                    for open_index in 0..verifier.lattice().len() {
                        for info in verifier.covers_at(open_index) {
                            if !info.is_basic() {
                                continue;
                            }
                            let report = check_proof_steps(&diagram, info.cover())
                                .expect("basic covers are accepted");
                            covers += 1;
                            points += report.points_checked;
                            if !report.passed() {
                                stage_failures += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    let ok = stage_failures == 0 && covers > 0;
    println!(
        "{} every stage passed on {} basic-cover runs covering {} points",
        verdict(ok),
        covers,
        points
    );
    assert!(ok);
}

#[test]
fn falsifier_finds_the_fixture_witness_and_spares_extensions() {
    let fixture = figure1();
    let bounds = FalsifyBounds {
        max_members: 3,
        class: CoverClass::All,
    };
    let witness = falsify_refinement(fixture.values(), &bounds)
        .expect("search runs")
        .is_some();

    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED);
    let basic_bounds = FalsifyBounds {
        max_members: 3,
        class: CoverClass::Basic,
    };
    let mut extensions = 0usize;
    let mut spurious = 0usize;
    for n in 0..=3 {
        for poset in poset_cosheaf::enumerate_labeled(n) {
            let lattice = DownSetLattice::build(&poset).expect("small lattices");
            for (category, bound) in CATEGORIES {
                let diagram = random_diagram(&mut rng, &poset, category, bound);
                let hat = Hat::hat(&lattice, &diagram).expect("extension exists");
                let values = OpenDiagram::from_hat(&hat);
                extensions += 1;
                if falsify_refinement(&values, &basic_bounds)
                    .expect("search runs")
                    .is_some()
                {
                    spurious += 1;
                }
            }
        }
    }
    let ok = witness && spurious == 0 && extensions > 0;
    println!(
        "{} fixture witness found; no basic-cover witness in {} extensions",
        verdict(ok),
        extensions
    );
    assert!(ok);
}

#[test]
fn colimits_satisfy_their_universal_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(8128);
    let mut diagrams = 0usize;
    let mut identity_failures = 0usize;
    let mut factoring_failures = 0usize;
    let mut presentation_failures = 0usize;
    while diagrams < 1000 {
        let size = rng.gen_range(0..=4);
        let poset = random_poset(&mut rng, size);
        let (category, bound) = CATEGORIES[diagrams % 2];
        let diagram = random_diagram(&mut rng, &poset, category, bound);
        diagrams += 1;

        let colimit = diagram.colimit();
        for (p, q) in poset.hasse_edges() {
            if colimit.leg(q).compose(diagram.edge_map(p, q)) != *colimit.leg(p) {
                identity_failures += 1;
            }
        }

        let out = colimit.object().size();
        let (object, generator) = match category {
            ValueCategory::Vect => {
                let mut matrix = RatMatrix::zero(2, out);
                for r in 0..2 {
                    for c in 0..out {
                        matrix.set(r, c, rat(rng.gen_range(-2..=2)));
                    }
                }
                (Obj::Vect { dim: 2 }, Map::Vect(matrix))
            }
            ValueCategory::FinSet => {
                let table: Vec<usize> = (0..out).map(|_| rng.gen_range(0..3)).collect();
                (
                    Obj::FinSet { card: 3 },
                    Map::FinSet(FinMap::new(table, 3).expect("entries lie below 3")),
                )
            }
        };
        let cocone: Vec<Map> = colimit
            .legs()
            .iter()
            .map(|leg| generator.compose(leg))
            .collect();
        let factored = colimit
            .factor_through(&object, &cocone)
            .expect("cocone factors");
        if factored != generator {
            factoring_failures += 1;
        }
        for (p, leg) in colimit.legs().iter().enumerate() {
            if factored.compose(leg) != cocone[p] {
                factoring_failures += 1;
            }
        }

        let slow = diagram.colimit_all_pairs();
        let (forward, backward) = colimit.mutual_comparison(&slow).expect("same diagram");
        if !mutually_inverse(&forward, &backward) {
            presentation_failures += 1;
        }
    }
    let ok = identity_failures == 0
        && factoring_failures == 0
        && presentation_failures == 0;
    println!(
        "{} universal property held on {} diagrams (identities, unique factoring, presentations)",
        verdict(ok),
        diagrams
    );
    assert!(ok);
}
