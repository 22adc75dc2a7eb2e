//! Colimit computation for diagrams over finite posets.
//!
//! Vector space diagrams are handled by presenting the colimit as the
//! cokernel of a relation map assembled from one column per edge and basis
//! vector; exact row reduction of its transpose yields a quotient matrix
//! whose column blocks are the structure legs. Set diagrams use a
//! union-find partition of the disjoint sum. Both presentations come with
//! `factor_through`, the mediating map out of the colimit induced by any
//! compatible family, which is also how two colimit presentations are
//! compared.

use num::One;

use crate::error::{Error, Result};
use crate::valcat::{Diagram, FinMap, Map, Obj, RatMatrix, ValueCategory};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pairs {
    Hasse,
    AllComparable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum QuotientData {
    Vect { nonpivots: Vec<usize> },
    FinSet { reps: Vec<(usize, usize)> },
}

/// A computed colimit: the apex object, one leg per base element, and
/// enough of the presentation to factor compatible families through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColimitResult {
    source: Diagram,
    offsets: Vec<usize>,
    total: usize,
    object: Obj,
    legs: Vec<Map>,
    quotient: QuotientData,
}

/// True when the two maps compose to the identity in both orders.
pub fn mutually_inverse(forward: &Map, backward: &Map) -> bool {
    forward.compose(backward).is_identity() && backward.compose(forward).is_identity()
}

fn block_offsets(diagram: &Diagram) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(diagram.base().len());
    let mut total = 0;
    for object in diagram.objects() {
        offsets.push(total);
        total += object.size();
    }
    (offsets, total)
}

fn relation_pairs(diagram: &Diagram, pairs: Pairs) -> Vec<(usize, usize)> {
    match pairs {
        Pairs::Hasse => diagram.base().hasse_edges(),
        Pairs::AllComparable => {
            let base = diagram.base();
            let mut out = Vec::new();
            for p in base.elements() {
                for q in base.elements() {
                    if base.lt(p, q) {
                        out.push((p, q));
                    }
                }
            }
            out
        }
    }
}

fn pair_map(diagram: &Diagram, pairs: Pairs, p: usize, q: usize) -> Map {
    match pairs {
        Pairs::Hasse => diagram.edge_map(p, q).clone(),
        Pairs::AllComparable => diagram
            .induced_map(p, q)
            .expect("pairs are strictly comparable"),
    }
}

struct UnionFind {
    parent: Vec<usize>,
    weight: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            weight: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.weight[ra] >= self.weight[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.weight[big] += self.weight[small];
    }
}

fn locate(offsets: &[usize], global: usize) -> (usize, usize) {
    let p = offsets.partition_point(|&o| o <= global) - 1;
    (p, global - offsets[p])
}

fn vect_colimit(diagram: &Diagram, pairs: Pairs) -> ColimitResult {
    let base = diagram.base();
    let (offsets, total) = block_offsets(diagram);
    let pair_list = relation_pairs(diagram, pairs);
    let width: usize = pair_list
        .iter()
        .map(|&(p, _)| diagram.object(p).size())
        .sum();
    let mut relation = RatMatrix::zero(total, width);
    let mut col = 0;
    for &(p, q) in &pair_list {
        let map = pair_map(diagram, pairs, p, q);
        let Map::Vect(mat) = &map else {
            unreachable!("vector space diagram")
        };
        for k in 0..diagram.object(p).size() {
            relation.set(offsets[p] + k, col, -crate::valcat::Rational::one());
            for r in 0..mat.rows() {
                relation.set(offsets[q] + r, col, mat.get(r, k).clone());
            }
            col += 1;
        }
    }
    let (reduced, pivots) = relation.transpose().rref();
    let nonpivots: Vec<usize> = (0..total).filter(|i| !pivots.contains(i)).collect();
    let dim = nonpivots.len();
    let mut quotient = RatMatrix::zero(dim, total);
    for (i, &j) in nonpivots.iter().enumerate() {
        quotient.set(i, j, crate::valcat::Rational::one());
    }
    for (l, &c) in pivots.iter().enumerate() {
        for (i, &j) in nonpivots.iter().enumerate() {
            quotient.set(i, c, -reduced.get(l, j).clone());
        }
    }
    let legs: Vec<Map> = base
        .elements()
        .map(|p| Map::Vect(quotient.column_block(offsets[p], diagram.object(p).size())))
        .collect();
    ColimitResult {
        source: diagram.clone(),
        offsets,
        total,
        object: Obj::Vect { dim },
        legs,
        quotient: QuotientData::Vect { nonpivots },
    }
}

fn finset_colimit(diagram: &Diagram, pairs: Pairs) -> ColimitResult {
    let base = diagram.base();
    let (offsets, total) = block_offsets(diagram);
    let mut partition = UnionFind::new(total);
    for (p, q) in relation_pairs(diagram, pairs) {
        let map = pair_map(diagram, pairs, p, q);
        let Map::FinSet(f) = &map else {
            unreachable!("set diagram")
        };
        for k in 0..diagram.object(p).size() {
            partition.union(offsets[p] + k, offsets[q] + f.apply(k));
        }
    }
    let mut class_of_root: Vec<Option<usize>> = vec![None; total];
    let mut class_index = Vec::with_capacity(total);
    let mut reps: Vec<(usize, usize)> = Vec::new();
    for global in 0..total {
        let root = partition.find(global);
        let class = match class_of_root[root] {
            Some(existing) => existing,
            None => {
                let fresh = reps.len();
                class_of_root[root] = Some(fresh);
                reps.push(locate(&offsets, global));
                fresh
            }
        };
        class_index.push(class);
    }
    let card = reps.len();
    let legs: Vec<Map> = base
        .elements()
        .map(|p| {
            let start = offsets[p];
            let table = class_index[start..start + diagram.object(p).size()].to_vec();
            Map::FinSet(FinMap::new(table, card).expect("classes are in range"))
        })
        .collect();
    ColimitResult {
        source: diagram.clone(),
        offsets,
        total,
        object: Obj::FinSet { card },
        legs,
        quotient: QuotientData::FinSet { reps },
    }
}

fn colimit_with(diagram: &Diagram, pairs: Pairs) -> ColimitResult {
    match diagram.category() {
        ValueCategory::Vect => vect_colimit(diagram, pairs),
        ValueCategory::FinSet => finset_colimit(diagram, pairs),
    }
}

impl Diagram {
    /// The colimit presented by relations on Hasse edges only.
    pub fn colimit(&self) -> ColimitResult {
        colimit_with(self, Pairs::Hasse)
    }

    /// The colimit presented by relations on every comparable pair. Slower,
    /// kept as an independent presentation to compare against.
    pub fn colimit_all_pairs(&self) -> ColimitResult {
        colimit_with(self, Pairs::AllComparable)
    }
}

impl ColimitResult {
    pub fn source(&self) -> &Diagram {
        &self.source
    }

    pub fn object(&self) -> &Obj {
        &self.object
    }

    pub fn legs(&self) -> &[Map] {
        &self.legs
    }

    pub fn leg(&self, p: usize) -> &Map {
        &self.legs[p]
    }

    /// The unique map out of the colimit that composes with every leg to
    /// give the corresponding member of `cocone`. Fails when the family
    /// has wrong shapes or does not commute with the diagram's edge maps.
    pub fn factor_through(&self, target: &Obj, cocone: &[Map]) -> Result<Map> {
        let diagram = &self.source;
        let base = diagram.base();
        if cocone.len() != base.len() {
            return Err(Error::IndexOutOfRange {
                index: cocone.len(),
                size: base.len(),
            });
        }
        if target.category() != diagram.category() {
            return Err(Error::CategoryMismatch {
                at: "factorization target".to_string(),
            });
        }
        for p in base.elements() {
            if cocone[p].domain() != *diagram.object(p) || cocone[p].codomain() != *target {
                return Err(Error::BadMapShape { p, q: p });
            }
        }
        for (&(p, q), edge) in diagram.edge_maps() {
            if cocone[q].compose(edge) != cocone[p] {
                return Err(Error::NotACocone { p, q });
            }
        }
        let factor = match (&self.quotient, target) {
            (QuotientData::Vect { nonpivots }, Obj::Vect { dim }) => {
                let mut stacked = RatMatrix::zero(*dim, self.total);
                for p in base.elements() {
                    let Map::Vect(m) = &cocone[p] else {
                        unreachable!("category agreement was checked")
                    };
                    for r in 0..*dim {
                        for c in 0..m.cols() {
                            stacked.set(r, self.offsets[p] + c, m.get(r, c).clone());
                        }
                    }
                }
                Map::Vect(stacked.select_columns(nonpivots))
            }
            (QuotientData::FinSet { reps }, Obj::FinSet { card }) => {
                let mut table = Vec::with_capacity(reps.len());
                for &(p, k) in reps {
                    let Map::FinSet(f) = &cocone[p] else {
                        unreachable!("category agreement was checked")
                    };
                    table.push(f.apply(k));
                }
                Map::FinSet(FinMap::new(table, *card)?)
            }
            _ => unreachable!("category agreement was checked"),
        };
        debug_assert!(base
            .elements()
            .all(|p| factor.compose(&self.legs[p]) == cocone[p]));
        Ok(factor)
    }

    /// The canonical comparison maps in both directions between two
    /// presentations of the same colimit, each obtained by factoring the
    /// other's legs. The pair is a mutual inverse exactly when the two
    /// presentations agree.
    pub fn mutual_comparison(&self, other: &ColimitResult) -> Result<(Map, Map)> {
        let forward = self.factor_through(other.object(), other.legs())?;
        let backward = other.factor_through(self.object(), self.legs())?;
        Ok((forward, backward))
    }
}
