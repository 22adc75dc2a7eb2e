//! A fixed fixture on the face poset of an interval subdivided into four
//! edges: values on eleven opens that glue along a fine nine-member cover
//! of the whole space but not along the coarser five-member cover it
//! refines. The fixture pins down why gluing verdicts do not transfer
//! from a refinement to the cover it refines.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::covers::{refines, Cover};
use crate::cosheaf::{open_poset, refinement_arrow, OpenDiagram};
use crate::poset::{DownSet, FinitePoset};
use crate::valcat::{is_isomorphism, rat, Diagram, Map, Obj, RatMatrix, ValueCategory};

/// The fixture: the cell poset, the values on its chosen opens, and the
/// fine/coarse cover pair over the whole space.
#[derive(Clone, Debug)]
pub struct Figure1 {
    poset: Arc<FinitePoset>,
    values: OpenDiagram,
    fine: Cover,
    coarse: Cover,
}

/// Builds the fixture. Five vertices alternate with four edges; each edge
/// sits below its two endpoints, so a vertex's down-set is its star. The
/// values assign one dimension everywhere except on the open spanning the
/// three interior stars, which gets two, with the span included on the
/// first coordinate and projected back out.
pub fn figure1() -> Figure1 {
    let names: Vec<String> = ["v0", "v1", "v2", "v3", "v4", "e01", "e12", "e23", "e34"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let relations = [
        (5, 0),
        (5, 1),
        (6, 1),
        (6, 2),
        (7, 2),
        (7, 3),
        (8, 3),
        (8, 4),
    ];
    let poset = Arc::new(FinitePoset::with_names(names, &relations).expect("cells form a poset"));
    let principal = |p: usize| DownSet::principal(&poset, p);
    let whole = DownSet::whole(&poset);
    let interior = principal(1).union(&principal(2)).union(&principal(3));

    let mut opens: Vec<DownSet> = (0..poset.len()).map(principal).collect();
    opens.push(interior.clone());
    opens.push(whole.clone());
    let (open_base, opens) = open_poset(&poset, opens).expect("opens are distinct");

    let dim_of = |open: &DownSet| if *open == interior { 2 } else { 1 };
    let objects: Vec<Obj> = opens
        .iter()
        .map(|open| Obj::Vect { dim: dim_of(open) })
        .collect();
    let mut edge_maps = BTreeMap::new();
    for (i, j) in open_base.hasse_edges() {
        let map = match (dim_of(&opens[i]), dim_of(&opens[j])) {
            (1, 2) => RatMatrix::from_rows(vec![vec![rat(1)], vec![rat(0)]]),
            (2, 1) => RatMatrix::from_i64_rows(&[&[1, 0]]),
            _ => RatMatrix::identity(1),
        };
        edge_maps.insert((i, j), Map::Vect(map));
    }
    let diagram = Diagram::new(&open_base, ValueCategory::Vect, objects, edge_maps)
        .expect("the assignment is functorial");
    let values = OpenDiagram::new(&poset, opens, diagram).expect("diagram matches the opens");

    let fine = Cover::new(
        whole.clone(),
        vec![
            principal(0),
            principal(5),
            principal(1),
            principal(6),
            principal(2),
            principal(7),
            principal(3),
            principal(8),
            principal(4),
        ],
    )
    .expect("the stars and edge cells cover the space");
    let coarse = Cover::new(
        whole,
        vec![
            principal(0),
            principal(5),
            interior,
            principal(8),
            principal(4),
        ],
    )
    .expect("the ends and the interior cover the space");

    Figure1 {
        poset,
        values,
        fine,
        coarse,
    }
}

impl Figure1 {
    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn values(&self) -> &OpenDiagram {
        &self.values
    }

    /// The nine-member cover: all vertex stars and all edge singletons.
    pub fn fine(&self) -> &Cover {
        &self.fine
    }

    /// The five-member cover: the two end stars, the two outer edge
    /// singletons, and the interior open.
    pub fn coarse(&self) -> &Cover {
        &self.coarse
    }

    /// Runs every check the fixture exists to demonstrate.
    pub fn report(&self) -> CounterexampleReport {
        let comparison = refinement_arrow(&self.values, &self.fine, &self.coarse)
            .expect("the fine cover routes through the coarse one");
        let target = self
            .values
            .index_of(self.fine.target())
            .expect("the whole space is an open");
        CounterexampleReport {
            fine_object: *comparison.fine().object(),
            coarse_object: *comparison.coarse().object(),
            target_object: *self.values.diagram().object(target),
            fine_holds: comparison.fine().holds(),
            coarse_holds: comparison.coarse().holds(),
            refines: refines(&self.fine, &self.coarse).expect("same target"),
            comparison_injective: comparison.comparison().is_injective(),
            coarse_arrow_surjective: comparison.coarse().arrow().is_surjective(),
            composite_is_iso: is_isomorphism(&comparison.composite()),
        }
    }
}

/// The fixture's verdicts: gluing holds on the fine cover and fails on
/// the coarse one, yet the comparison between their colimits is
/// injective, the failing arrow is surjective, and their composite is an
/// isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub fine_object: Obj,
    pub coarse_object: Obj,
    pub target_object: Obj,
    pub fine_holds: bool,
    pub coarse_holds: bool,
    pub refines: bool,
    pub comparison_injective: bool,
    pub coarse_arrow_surjective: bool,
    pub composite_is_iso: bool,
}

impl CounterexampleReport {
    /// True when every verdict matches the fixture's expected shape.
    pub fn holds(&self) -> bool {
        self.fine_holds
            && !self.coarse_holds
            && self.refines
            && self.comparison_injective
            && self.coarse_arrow_surjective
            && self.composite_is_iso
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosheaf::{cosheaf_arrow, falsify_refinement, CoverClass, FalsifyBounds};

    #[test]
    fn the_fixture_has_the_advertised_shape() {
        let fixture = figure1();
        assert_eq!(fixture.poset().len(), 9);
        assert_eq!(fixture.poset().hasse_edges().len(), 8);
        assert_eq!(fixture.values().opens().len(), 11);
        assert_eq!(fixture.values().diagram().base().hasse_edges().len(), 14);
        assert_eq!(fixture.fine().len(), 9);
        assert_eq!(fixture.coarse().len(), 5);
    }

    #[test]
    fn the_fine_member_poset_is_a_fence() {
        let fixture = figure1();
        let member_poset = fixture.fine().member_poset();
        let edges = member_poset.hasse_edges();
        assert_eq!(
            edges,
            vec![
                (1, 0),
                (1, 2),
                (3, 2),
                (3, 4),
                (5, 4),
                (5, 6),
                (7, 6),
                (7, 8)
            ]
        );
    }

    #[test]
    fn the_report_freezes_the_expected_verdicts() {
        let report = figure1().report();
        assert_eq!(report.fine_object, Obj::Vect { dim: 1 });
        assert_eq!(report.coarse_object, Obj::Vect { dim: 2 });
        assert_eq!(report.target_object, Obj::Vect { dim: 1 });
        assert!(report.fine_holds);
        assert!(!report.coarse_holds);
        assert!(report.refines);
        assert!(report.comparison_injective);
        assert!(report.coarse_arrow_surjective);
        assert!(report.composite_is_iso);
        assert!(report.holds());
    }

    #[test]
    fn the_composite_equals_the_fine_arrow() {
        let fixture = figure1();
        let comparison =
            refinement_arrow(fixture.values(), fixture.fine(), fixture.coarse()).unwrap();
        assert_eq!(&comparison.composite(), comparison.fine().arrow());
    }

    #[test]
    fn the_coarse_cover_is_basic_but_the_values_are_not_an_extension() {
        let fixture = figure1();
        // both covers classify as basic, so the failure shows the gluing
        // guarantee needs values that come from extending a diagram, not
        // just any functorial assignment on opens
        assert!(fixture.fine().is_basic());
        assert!(fixture.coarse().is_basic());
    }

    #[test]
    fn a_search_over_the_fixture_finds_a_witness() {
        let fixture = figure1();
        let bounds = FalsifyBounds {
            max_members: 3,
            class: CoverClass::All,
        };
        let witness = falsify_refinement(fixture.values(), &bounds)
            .unwrap()
            .expect("the fixture contains a witness");
        assert!(cosheaf_arrow(fixture.values(), &witness.fine).unwrap().holds());
        assert!(!cosheaf_arrow(fixture.values(), &witness.coarse).unwrap().holds());
        assert!(refines(&witness.fine, &witness.coarse).unwrap());
        assert_eq!(witness.fine_object, Obj::Vect { dim: 2 });
        assert_eq!(witness.coarse_object, Obj::Vect { dim: 3 });
        assert_eq!(witness.fine.target().name(), "{v1,v2,v3,e01,e12,e23,e34}");
    }
}
