//! Cosheaf structure over finite posets: down-set topologies, cover
//! taxonomies, exact colimits in vector space and finite set coefficients,
//! pointwise left Kan extensions, and machine checks for when refining a
//! cover leaves the associated colimit unchanged.

pub mod cosheaf;
pub mod covers;
pub mod error;
pub mod kan;
pub mod poset;
pub mod sample;
pub mod valcat;

pub use cosheaf::{
    check_proof_steps, cosheaf_arrow, falsify_refinement, figure1, open_poset, refinement_arrow,
    verify_theorem, AuxiliaryJ, CosheafCheck, CounterexampleReport, CoverClass, CoverInfo,
    FalsifyBounds, Figure1, OpenDiagram, ProofStepsReport, RefinementComparison,
    RefinementWitness, TheoremFailure, TheoremReport, TheoremVerifier,
};
pub use covers::{
    covers_from_pool, enumerate_basic_covers, enumerate_covers, is_cover, refines, Cover,
};
pub use error::{Error, FunctorialityWitness, Result};
pub use kan::{composition_comparisons, Hat, KanExtension, PointColimit};
pub use poset::{
    enumerate_labeled, Cofinality, CommaPoset, DownSet, DownSetLattice, FinitePoset, PosetMap,
    DEFAULT_MAX_LATTICE,
};
pub use sample::{indicator_above, random_diagram, random_monotone_map, random_poset};
pub use valcat::{
    is_isomorphism, mutually_inverse, parse_rational, rat, render_rational, ColimitResult,
    Diagram, FinMap, Map, Obj, RatMatrix, Rational, ValueCategory,
};
