//! Seeded generators for posets, monotone maps, and diagrams, plus the
//! indicator diagram that separates colimits when a map fails cofinality.
//! Matrix entries are drawn from {-2..2} and dimensions uniformly from
//! [0, bound]; draws that violate functoriality are discarded wholesale
//! and retried, so chains and trees accept on the first attempt while
//! diagrams with parallel paths are resampled until their squares
//! commute.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::poset::{FinitePoset, PosetMap};
use crate::valcat::{rat, Diagram, FinMap, Map, Obj, RatMatrix, ValueCategory};

/// Draws a poset on `n` elements by keeping each index-increasing pair as
/// a relation with probability one half.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize) -> Arc<FinitePoset> {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.5) {
                pairs.push((i, j));
            }
        }
    }
    Arc::new(FinitePoset::from_relations(n, &pairs).expect("ascending pairs never cycle"))
}

/// Draws a monotone map by sampling assignments uniformly and discarding
/// non-monotone ones; constants are monotone, so this terminates.
pub fn random_monotone_map<R: Rng>(
    rng: &mut R,
    source: &Arc<FinitePoset>,
    target: &Arc<FinitePoset>,
) -> PosetMap {
    loop {
        let assignment: Vec<usize> = (0..source.len())
            .map(|_| rng.gen_range(0..target.len()))
            .collect();
        if let Ok(map) = PosetMap::new(source, target, assignment) {
            return map;
        }
    }
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> RatMatrix {
    let mut matrix = RatMatrix::zero(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            matrix.set(r, c, rat(rng.gen_range(-2..=2)));
        }
    }
    matrix
}

/// Draws a functorial diagram on `base` with sizes up to `max_size`. Each
/// attempt redraws every object and edge map; set-valued attempts whose
/// sizes would demand a map out of a nonempty set into an empty one are
/// discarded before sampling maps.
pub fn random_diagram<R: Rng>(
    rng: &mut R,
    base: &Arc<FinitePoset>,
    category: ValueCategory,
    max_size: usize,
) -> Diagram {
    loop {
        let sizes: Vec<usize> = (0..base.len())
            .map(|_| rng.gen_range(0..=max_size))
            .collect();
        if category == ValueCategory::FinSet
            && base
                .hasse_edges()
                .iter()
                .any(|&(p, q)| sizes[p] > 0 && sizes[q] == 0)
        {
            continue;
        }
        let objects: Vec<Obj> = sizes
            .iter()
            .map(|&size| match category {
                ValueCategory::Vect => Obj::Vect { dim: size },
                ValueCategory::FinSet => Obj::FinSet { card: size },
            })
            .collect();
        let mut edge_maps = BTreeMap::new();
        for (p, q) in base.hasse_edges() {
            let map = match category {
                ValueCategory::Vect => Map::Vect(random_matrix(rng, sizes[q], sizes[p])),
                ValueCategory::FinSet => {
                    let table = (0..sizes[p]).map(|_| rng.gen_range(0..sizes[q])).collect();
                    Map::FinSet(FinMap::new(table, sizes[q]).expect("values lie in range"))
                }
            };
            edge_maps.insert((p, q), map);
        }
        if let Ok(diagram) = Diagram::new(base, category, objects, edge_maps) {
            return diagram;
        }
    }
}

/// The set-valued diagram that is a singleton on elements above `b` and
/// empty elsewhere. Its colimit counts the connected components of the
/// up-set of `b`, which is one, while pulling it back along a map whose
/// comma over `b` is empty or disconnected yields a different count; this
/// turns every cofinality failure certificate into a colimit mismatch.
pub fn indicator_above(base: &Arc<FinitePoset>, b: usize) -> Diagram {
    let objects: Vec<Obj> = base
        .elements()
        .map(|x| Obj::FinSet {
            card: usize::from(base.leq(b, x)),
        })
        .collect();
    let mut edge_maps = BTreeMap::new();
    for (p, q) in base.hasse_edges() {
        let table = if base.leq(b, p) { vec![0] } else { Vec::new() };
        let card = usize::from(base.leq(b, q));
        edge_maps.insert(
            (p, q),
            Map::FinSet(FinMap::new(table, card).expect("the singleton is in range")),
        );
    }
    Diagram::new(base, ValueCategory::FinSet, objects, edge_maps)
        .expect("maps into a singleton always commute")
}
