//! Value categories the diagrams take values in: exact rational vector
//! spaces and finite sets. Objects are sizes, maps are matrices or lookup
//! tables, and both carry enough shape information to be checked against
//! the diagrams that use them.

mod colimit;
mod diagram;
mod matrix;

pub use colimit::{mutually_inverse, ColimitResult};
pub use diagram::Diagram;
pub use matrix::{parse_rational, rat, render_rational, RatMatrix, Rational};

use crate::error::{Error, Result};

/// Which value category a diagram lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValueCategory {
    Vect,
    FinSet,
}

impl ValueCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            ValueCategory::Vect => "vect",
            ValueCategory::FinSet => "finset",
        }
    }
}

/// An object of a value category: a dimension or a cardinality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Obj {
    Vect { dim: usize },
    FinSet { card: usize },
}

impl Obj {
    pub fn category(&self) -> ValueCategory {
        match self {
            Obj::Vect { .. } => ValueCategory::Vect,
            Obj::FinSet { .. } => ValueCategory::FinSet,
        }
    }

    /// Dimension or cardinality, whichever applies.
    pub fn size(&self) -> usize {
        match self {
            Obj::Vect { dim } => *dim,
            Obj::FinSet { card } => *card,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Obj::Vect { dim } => format!("dim {dim}"),
            Obj::FinSet { card } => format!("card {card}"),
        }
    }
}

/// A function between finite sets `0..domain -> 0..codomain`, stored as a
/// lookup table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinMap {
    codomain: usize,
    table: Vec<usize>,
}

impl FinMap {
    pub fn new(table: Vec<usize>, codomain: usize) -> Result<Self> {
        for &value in &table {
            if value >= codomain {
                return Err(Error::IndexOutOfRange {
                    index: value,
                    size: codomain,
                });
            }
        }
        Ok(FinMap { codomain, table })
    }

    pub fn identity(card: usize) -> Self {
        FinMap {
            codomain: card,
            table: (0..card).collect(),
        }
    }

    pub fn domain(&self) -> usize {
        self.table.len()
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }
}

/// A map of a value category: a matrix acting on column vectors, or a
/// table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Map {
    Vect(RatMatrix),
    FinSet(FinMap),
}

impl Map {
    pub fn identity(on: &Obj) -> Map {
        match on {
            Obj::Vect { dim } => Map::Vect(RatMatrix::identity(*dim)),
            Obj::FinSet { card } => Map::FinSet(FinMap::identity(*card)),
        }
    }

    pub fn category(&self) -> ValueCategory {
        match self {
            Map::Vect(_) => ValueCategory::Vect,
            Map::FinSet(_) => ValueCategory::FinSet,
        }
    }

    pub fn domain(&self) -> Obj {
        match self {
            Map::Vect(m) => Obj::Vect { dim: m.cols() },
            Map::FinSet(f) => Obj::FinSet { card: f.domain() },
        }
    }

    pub fn codomain(&self) -> Obj {
        match self {
            Map::Vect(m) => Obj::Vect { dim: m.rows() },
            Map::FinSet(f) => Obj::FinSet {
                card: f.codomain(),
            },
        }
    }

    /// Composition `self` after `before`.
    pub fn compose(&self, before: &Map) -> Map {
        match (self, before) {
            (Map::Vect(second), Map::Vect(first)) => Map::Vect(second.mul(first)),
            (Map::FinSet(second), Map::FinSet(first)) => {
                let table = first.table().iter().map(|&x| second.apply(x)).collect();
                Map::FinSet(FinMap {
                    codomain: second.codomain(),
                    table,
                })
            }
            _ => panic!("composition across value categories"),
        }
    }

    pub fn is_injective(&self) -> bool {
        match self {
            Map::Vect(m) => m.rank() == m.cols(),
            Map::FinSet(f) => {
                let mut seen = vec![false; f.codomain()];
                f.table().iter().all(|&value| {
                    let fresh = !seen[value];
                    seen[value] = true;
                    fresh
                })
            }
        }
    }

    pub fn is_surjective(&self) -> bool {
        match self {
            Map::Vect(m) => m.rank() == m.rows(),
            Map::FinSet(f) => {
                let mut seen = vec![false; f.codomain()];
                for &value in f.table() {
                    seen[value] = true;
                }
                seen.into_iter().all(|hit| hit)
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Map::Vect(m) => m.is_identity(),
            Map::FinSet(f) => {
                f.domain() == f.codomain()
                    && f.table().iter().enumerate().all(|(i, &v)| i == v)
            }
        }
    }
}

/// True exactly when the map is invertible: a square matrix of full rank,
/// or a bijective table.
pub fn is_isomorphism(map: &Map) -> bool {
    match map {
        Map::Vect(m) => m.rows() == m.cols() && m.rank() == m.rows(),
        Map::FinSet(f) => f.domain() == f.codomain() && map.is_injective(),
    }
}
