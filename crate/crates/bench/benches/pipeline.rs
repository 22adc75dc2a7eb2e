//! Timings for the expensive stages: down-set enumeration, pointwise
//! extension, bulk gluing verification, and the shipped fixture report.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use poset_cosheaf::{
    enumerate_labeled, figure1, random_diagram, Diagram, DownSetLattice, FinitePoset, Hat,
    TheoremVerifier, ValueCategory,
};

/// A zigzag of alternating minimal and maximal elements; its down-set
/// count grows fast enough to exercise the enumeration.
fn fence(n: usize) -> Arc<FinitePoset> {
    let mut pairs = Vec::new();
    for low in (0..n).step_by(2) {
        if low >= 1 {
            pairs.push((low, low - 1));
        }
        if low + 1 < n {
            pairs.push((low, low + 1));
        }
    }
    Arc::new(FinitePoset::from_relations(n, &pairs).expect("zigzags are acyclic"))
}

fn fence_diagram(n: usize) -> (Arc<FinitePoset>, Diagram) {
    let poset = fence(n);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let diagram = random_diagram(&mut rng, &poset, ValueCategory::Vect, 2);
    (poset, diagram)
}

fn lattice_enumeration(c: &mut Criterion) {
    let poset = fence(14);
    c.bench_function("enumerate down-sets of a 14-element zigzag", |b| {
        b.iter(|| DownSetLattice::build(&poset).expect("bounded"))
    });
}

fn pointwise_extension(c: &mut Criterion) {
    let (poset, diagram) = fence_diagram(10);
    let lattice = DownSetLattice::build(&poset).expect("bounded");
    c.bench_function("extend over the opens of a 10-element zigzag", |b| {
        b.iter(|| Hat::hat(&lattice, &diagram).expect("extension exists"))
    });
}

fn bulk_verification(c: &mut Criterion) {
    let posets = enumerate_labeled(3);
    let verifiers: Vec<TheoremVerifier> = posets
        .iter()
        .map(|poset| TheoremVerifier::prepare(poset, 3).expect("small lattices"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let diagrams: Vec<Diagram> = posets
        .iter()
        .map(|poset| random_diagram(&mut rng, poset, ValueCategory::Vect, 2))
        .collect();
    c.bench_function("verify gluing across all three-element posets", |b| {
        b.iter(|| {
            let mut failures = 0usize;
            for (verifier, diagram) in verifiers.iter().zip(&diagrams) {
                failures += verifier.verify(diagram).expect("runs").failures.len();
            }
            failures
        })
    });
}

fn fixture_report(c: &mut Criterion) {
    let fixture = figure1();
    c.bench_function("grade the built-in counterexample", |b| {
        b.iter(|| fixture.report())
    });
}

criterion_group!(
    benches,
    lattice_enumeration,
    pointwise_extension,
    bulk_verification,
    fixture_report
);
criterion_main!(benches);
