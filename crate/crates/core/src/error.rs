//! Error type shared by every module in the crate.

use thiserror::Error;

/// A pair of Hasse paths from the same start to the same end whose edge-map
/// composites disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorialityWitness {
    pub from: usize,
    pub to: usize,
    pub path_a: Vec<usize>,
    pub path_b: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("antisymmetry violated: elements {a} and {b} lie on a common cycle")]
    Cycle { a: usize, b: usize },

    #[error("computation would need {needed} entries, over the bound of {bound}")]
    Size { needed: u128, bound: u128 },

    #[error("element index {index} out of range for a poset of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("operands belong to different parent posets")]
    ParentMismatch,

    #[error("covers have different targets")]
    TargetMismatch,

    #[error("set contains {inside} but not {missing} below it, so it is not downward closed")]
    NotDownwardClosed { inside: usize, missing: usize },

    #[error("assignment does not preserve order on the pair ({p}, {q})")]
    NotMonotone { p: usize, q: usize },

    #[error("cover member {member} repeats an earlier member")]
    DuplicateMember { member: usize },

    #[error("members do not union to the stated target")]
    NotACover,

    #[error("elements {p} and {q} are not comparable")]
    NotComparable { p: usize, q: usize },

    #[error("edge maps disagree on two paths from {} to {}", .0.from, .0.to)]
    NotFunctorial(FunctorialityWitness),

    #[error("missing edge map on the Hasse edge ({p}, {q})")]
    MissingEdgeMap { p: usize, q: usize },

    #[error("edge map given on ({p}, {q}), which is not a Hasse edge")]
    UnexpectedEdgeMap { p: usize, q: usize },

    #[error("object or map at {at} does not match the diagram's value category")]
    CategoryMismatch { at: String },

    #[error("map on edge ({p}, {q}) has the wrong shape for its endpoints")]
    BadMapShape { p: usize, q: usize },

    #[error("legs do not form a cocone: failure at the edge ({p}, {q})")]
    NotACocone { p: usize, q: usize },

    #[error("diagram has no value at the open {name}")]
    MissingOpen { name: String },

    #[error("cover is not basic, so the proof steps do not apply")]
    NotBasic,

    #[error("the first cover does not route through the second: refinement or containment fails")]
    NotARefinement,
}

pub type Result<T> = std::result::Result<T, Error>;
