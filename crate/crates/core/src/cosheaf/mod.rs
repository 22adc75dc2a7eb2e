//! The gluing axiom for diagrams of opens: the canonical arrow from the
//! colimit over a cover into the value on the covered open, bulk
//! verification that down-set extensions satisfy it on every basic cover,
//! and a search for refinement pairs where gluing holds on the finer cover
//! yet fails on the coarser one.

mod figure1;
mod proof;

pub use figure1::{figure1, CounterexampleReport, Figure1};
pub use proof::{check_proof_steps, AuxiliaryJ, ProofStepsReport};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::covers::{covers_from_pool, refines, Cover};
use crate::error::{Error, Result};
use crate::kan::Hat;
use crate::poset::{same_poset, DownSet, DownSetLattice, FinitePoset};
use crate::valcat::{is_isomorphism, ColimitResult, Diagram, Map, Obj};

/// Builds the inclusion poset on a family of distinct down-sets, named by
/// their member lists, returning the poset together with the family in
/// canonical order. Element `i` of the poset is `opens[i]` of the returned
/// family.
pub fn open_poset(
    parent: &Arc<FinitePoset>,
    mut opens: Vec<DownSet>,
) -> Result<(Arc<FinitePoset>, Vec<DownSet>)> {
    for (i, open) in opens.iter().enumerate() {
        if !same_poset(open.parent(), parent) {
            return Err(Error::ParentMismatch);
        }
        if opens[..i].contains(open) {
            return Err(Error::DuplicateMember { member: i });
        }
    }
    opens.sort();
    let names = opens.iter().map(DownSet::name).collect();
    let mut pairs = Vec::new();
    for (i, a) in opens.iter().enumerate() {
        for (j, b) in opens.iter().enumerate() {
            if i != j && a.is_subset(b) {
                pairs.push((i, j));
            }
        }
    }
    let poset = FinitePoset::with_names(names, &pairs).expect("inclusion has no cycles");
    Ok((Arc::new(poset), opens))
}

/// A diagram whose base elements are a chosen family of opens of a parent
/// poset, ordered by inclusion. This is the input shape for gluing checks:
/// a value on each open and a map along each inclusion, with no assumption
/// that the values arise from an extension.
#[derive(Clone, Debug)]
pub struct OpenDiagram {
    parent: Arc<FinitePoset>,
    opens: Vec<DownSet>,
    diagram: Diagram,
}

impl OpenDiagram {
    /// Wraps a diagram over the inclusion poset of `opens`; the diagram's
    /// base must be exactly the poset [`open_poset`] builds for the family.
    pub fn new(parent: &Arc<FinitePoset>, opens: Vec<DownSet>, diagram: Diagram) -> Result<Self> {
        let (poset, opens) = open_poset(parent, opens)?;
        if !same_poset(&poset, diagram.base()) {
            return Err(Error::ParentMismatch);
        }
        Ok(OpenDiagram {
            parent: Arc::clone(parent),
            opens,
            diagram,
        })
    }

    /// Views a down-set extension as a diagram on all opens of its lattice.
    pub fn from_hat(hat: &Hat) -> Self {
        OpenDiagram {
            parent: Arc::clone(hat.lattice().parent()),
            opens: hat.lattice().opens().to_vec(),
            diagram: hat.diagram().clone(),
        }
    }

    pub fn parent(&self) -> &Arc<FinitePoset> {
        &self.parent
    }

    pub fn opens(&self) -> &[DownSet] {
        &self.opens
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn index_of(&self, open: &DownSet) -> Option<usize> {
        self.opens.binary_search(open).ok()
    }

    fn require(&self, open: &DownSet) -> Result<usize> {
        self.index_of(open).ok_or_else(|| Error::MissingOpen {
            name: open.name(),
        })
    }
}

/// One gluing check: the colimit of the values over a cover's members and
/// the canonical arrow from it into the value on the target.
#[derive(Clone, Debug)]
pub struct CosheafCheck {
    cover: Cover,
    colimit: ColimitResult,
    arrow: Map,
}

impl CosheafCheck {
    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    /// The colimit of the restriction to the cover's member poset.
    pub fn colimit(&self) -> &ColimitResult {
        &self.colimit
    }

    pub fn object(&self) -> &Obj {
        self.colimit.object()
    }

    /// The canonical map from the colimit into the value at the target.
    pub fn arrow(&self) -> &Map {
        &self.arrow
    }

    /// The gluing verdict: the arrow is an isomorphism.
    pub fn holds(&self) -> bool {
        is_isomorphism(&self.arrow)
    }
}

/// Restricts `values` to the member poset of `cover`, computes the
/// colimit, and factors the member-to-target maps through it. Every member
/// and the target must be among the opens `values` is defined on.
pub fn cosheaf_arrow(values: &OpenDiagram, cover: &Cover) -> Result<CosheafCheck> {
    if !same_poset(values.parent(), cover.parent()) {
        return Err(Error::ParentMismatch);
    }
    let target_index = values.require(cover.target())?;
    let member_indices: Vec<usize> = cover
        .members()
        .iter()
        .map(|member| values.require(member))
        .collect::<Result<_>>()?;
    let member_poset = cover.member_poset();
    let objects: Vec<Obj> = member_indices
        .iter()
        .map(|&g| *values.diagram().object(g))
        .collect();
    let mut edge_maps = BTreeMap::new();
    for (i, j) in member_poset.hasse_edges() {
        let map = values
            .diagram()
            .induced_map(member_indices[i], member_indices[j])?;
        edge_maps.insert((i, j), map);
    }
    let restricted = Diagram::new(
        &member_poset,
        values.diagram().category(),
        objects,
        edge_maps,
    )?;
    let colimit = restricted.colimit();
    let cocone: Vec<Map> = member_indices
        .iter()
        .map(|&g| values.diagram().induced_map(g, target_index))
        .collect::<Result<_>>()?;
    let arrow = colimit.factor_through(values.diagram().object(target_index), &cocone)?;
    Ok(CosheafCheck {
        cover: cover.clone(),
        colimit,
        arrow,
    })
}

/// Both gluing checks for a fine/coarse cover pair together with the
/// canonical comparison from the fine colimit to the coarse one.
#[derive(Clone, Debug)]
pub struct RefinementComparison {
    fine: CosheafCheck,
    coarse: CosheafCheck,
    comparison: Map,
}

impl RefinementComparison {
    pub fn fine(&self) -> &CosheafCheck {
        &self.fine
    }

    pub fn coarse(&self) -> &CosheafCheck {
        &self.coarse
    }

    /// The map from the fine cover's colimit to the coarse cover's.
    pub fn comparison(&self) -> &Map {
        &self.comparison
    }

    /// The comparison followed by the coarse cover's arrow; lands in the
    /// value at the shared target.
    pub fn composite(&self) -> Map {
        self.coarse.arrow().compose(&self.comparison)
    }
}

/// Computes the comparison between the colimits of two covers of the same
/// target, routing each fine member through the first coarse member that
/// contains it. Fails with [`Error::NotARefinement`] unless the fine cover
/// refines the coarse one and every fine member lies inside some coarse
/// member; the factorization itself enforces that the routing commutes.
pub fn refinement_arrow(
    values: &OpenDiagram,
    fine: &Cover,
    coarse: &Cover,
) -> Result<RefinementComparison> {
    if !refines(fine, coarse)? {
        return Err(Error::NotARefinement);
    }
    let fine_check = cosheaf_arrow(values, fine)?;
    let coarse_check = cosheaf_arrow(values, coarse)?;
    let mut cocone = Vec::with_capacity(fine.len());
    for small in fine.members() {
        let Some((j, big)) = coarse
            .members()
            .iter()
            .enumerate()
            .find(|(_, big)| small.is_subset(big))
        else {
            return Err(Error::NotARefinement);
        };
        let small_index = values.require(small)?;
        let big_index = values.require(big)?;
        let include = values.diagram().induced_map(small_index, big_index)?;
        cocone.push(coarse_check.colimit.leg(j).compose(&include));
    }
    let comparison = fine_check
        .colimit
        .factor_through(coarse_check.colimit.object(), &cocone)?;
    Ok(RefinementComparison {
        fine: fine_check,
        coarse: coarse_check,
        comparison,
    })
}

/// An enumerated cover of one open with its classification, computed once
/// and reused across many diagrams.
#[derive(Clone, Debug)]
pub struct CoverInfo {
    cover: Cover,
    cech: bool,
    basic: bool,
}

impl CoverInfo {
    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn is_cech(&self) -> bool {
        self.cech
    }

    pub fn is_basic(&self) -> bool {
        self.basic
    }
}

/// One failed gluing check from a bulk verification run.
#[derive(Clone, Debug)]
pub struct TheoremFailure {
    pub open: DownSet,
    pub cover: Cover,
    pub object: Obj,
}

/// Outcome of a bulk verification run: how many basic covers were checked
/// and which of them failed to glue.
#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub checks: usize,
    pub failures: Vec<TheoremFailure>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Cover enumeration for every open of a poset, prepared once so that many
/// diagrams over the same poset can be verified against one enumeration.
#[derive(Clone, Debug)]
pub struct TheoremVerifier {
    lattice: DownSetLattice,
    covers_by_open: Vec<Vec<CoverInfo>>,
}

impl TheoremVerifier {
    /// Enumerates every cover with at most `max_members` members for every
    /// open of `parent`, classifying each.
    pub fn prepare(parent: &Arc<FinitePoset>, max_members: usize) -> Result<Self> {
        Self::prepare_bounded(parent, max_members, crate::poset::DEFAULT_MAX_LATTICE)
    }

    /// As [`TheoremVerifier::prepare`] with an explicit cap on how many
    /// opens the down-set lattice may hold.
    pub fn prepare_bounded(
        parent: &Arc<FinitePoset>,
        max_members: usize,
        max_lattice: u128,
    ) -> Result<Self> {
        let lattice = DownSetLattice::build_bounded(parent, max_lattice)?;
        let mut covers_by_open = Vec::with_capacity(lattice.len());
        for open in lattice.opens() {
            let covers = covers_from_pool(lattice.opens(), open, max_members)?;
            covers_by_open.push(
                covers
                    .into_iter()
                    .map(|cover| {
                        let cech = cover.is_cech();
                        let basic = cover.is_basic();
                        CoverInfo { cover, cech, basic }
                    })
                    .collect(),
            );
        }
        Ok(TheoremVerifier {
            lattice,
            covers_by_open,
        })
    }

    pub fn lattice(&self) -> &DownSetLattice {
        &self.lattice
    }

    /// The enumerated covers of the open at `open_index`, every class.
    pub fn covers_at(&self, open_index: usize) -> &[CoverInfo] {
        &self.covers_by_open[open_index]
    }

    /// Extends `diagram` over the down-set lattice and checks gluing on
    /// every enumerated basic cover of every open.
    pub fn verify(&self, diagram: &Diagram) -> Result<TheoremReport> {
        let hat = Hat::hat(&self.lattice, diagram)?;
        let values = OpenDiagram::from_hat(&hat);
        let mut checks = 0usize;
        let mut failures = Vec::new();
        for (open_index, infos) in self.covers_by_open.iter().enumerate() {
            for info in infos {
                if !info.basic {
                    continue;
                }
                let check = cosheaf_arrow(&values, &info.cover)?;
                checks += 1;
                if !check.holds() {
                    failures.push(TheoremFailure {
                        open: self.lattice.open(open_index).clone(),
                        cover: info.cover.clone(),
                        object: *check.object(),
                    });
                }
            }
        }
        Ok(TheoremReport { checks, failures })
    }
}

/// Prepares a verifier for the diagram's base poset and runs it once.
pub fn verify_theorem(diagram: &Diagram, max_members: usize) -> Result<TheoremReport> {
    TheoremVerifier::prepare(diagram.base(), max_members)?.verify(diagram)
}

/// Which covers participate in a refinement search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverClass {
    All,
    Basic,
    Cech,
}

impl CoverClass {
    fn admits(&self, cover: &Cover) -> bool {
        match self {
            CoverClass::All => true,
            CoverClass::Basic => cover.is_basic(),
            CoverClass::Cech => cover.is_cech(),
        }
    }
}

/// Search limits for [`falsify_refinement`].
#[derive(Clone, Copy, Debug)]
pub struct FalsifyBounds {
    pub max_members: usize,
    pub class: CoverClass,
}

/// A pair of covers of the same target witnessing that gluing can hold on
/// a finer cover while failing on a coarser one.
#[derive(Clone, Debug)]
pub struct RefinementWitness {
    pub fine: Cover,
    pub coarse: Cover,
    pub fine_object: Obj,
    pub coarse_object: Obj,
}

/// Scans covers drawn from the opens of `values`, target by target in
/// canonical order, for a pair where the fine cover glues, the coarse one
/// does not, and the fine cover refines the coarse one. Returns the first
/// witness found, or nothing when the admitted covers contain no such
/// pair.
pub fn falsify_refinement(
    values: &OpenDiagram,
    bounds: &FalsifyBounds,
) -> Result<Option<RefinementWitness>> {
    for target in values.opens() {
        let covers = covers_from_pool(values.opens(), target, bounds.max_members)?;
        let admitted: Vec<&Cover> = covers
            .iter()
            .filter(|cover| bounds.class.admits(cover))
            .collect();
        let mut verdicts = Vec::with_capacity(admitted.len());
        for cover in &admitted {
            let check = cosheaf_arrow(values, cover)?;
            verdicts.push((check.holds(), *check.object()));
        }
        for (i, fine) in admitted.iter().enumerate() {
            if !verdicts[i].0 {
                continue;
            }
            for (j, coarse) in admitted.iter().enumerate() {
                if verdicts[j].0 {
                    continue;
                }
                if refines(fine, coarse)? {
                    return Ok(Some(RefinementWitness {
                        fine: (*fine).clone(),
                        coarse: (*coarse).clone(),
                        fine_object: verdicts[i].1,
                        coarse_object: verdicts[j].1,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valcat::{rat, RatMatrix, ValueCategory};

    fn vect(dim: usize) -> Obj {
        Obj::Vect { dim }
    }

    fn lambda() -> Arc<FinitePoset> {
        Arc::new(
            FinitePoset::with_names(
                vec!["z".into(), "x".into(), "y".into()],
                &[(0, 1), (0, 2)],
            )
            .unwrap(),
        )
    }

    fn lambda_pushout(base: &Arc<FinitePoset>) -> Diagram {
        let mut edges = BTreeMap::new();
        edges.insert((0, 1), Map::Vect(RatMatrix::from_i64_rows(&[&[1]])));
        edges.insert(
            (0, 2),
            Map::Vect(RatMatrix::from_rows(vec![vec![rat(1)], vec![rat(0)]])),
        );
        Diagram::new(
            base,
            ValueCategory::Vect,
            vec![vect(1), vect(1), vect(2)],
            edges,
        )
        .unwrap()
    }

    fn hat_values(base: &Arc<FinitePoset>, diagram: &Diagram) -> OpenDiagram {
        let lattice = DownSetLattice::build(base).unwrap();
        let hat = Hat::hat(&lattice, diagram).unwrap();
        OpenDiagram::from_hat(&hat)
    }

    #[test]
    fn singleton_cover_always_glues() {
        let base = lambda();
        let diagram = lambda_pushout(&base);
        let values = hat_values(&base, &diagram);
        let whole = DownSet::whole(&base);
        let cover = Cover::new(whole.clone(), vec![whole]).unwrap();
        let check = cosheaf_arrow(&values, &cover).unwrap();
        assert!(check.holds());
        assert_eq!(check.object(), &vect(2));
    }

    #[test]
    fn principal_cover_of_the_extension_glues() {
        let base = lambda();
        let diagram = lambda_pushout(&base);
        let values = hat_values(&base, &diagram);
        let whole = DownSet::whole(&base);
        let members: Vec<DownSet> = base
            .elements()
            .map(|p| DownSet::principal(&base, p))
            .collect();
        let cover = Cover::new(whole, members).unwrap();
        let check = cosheaf_arrow(&values, &cover).unwrap();
        assert_eq!(check.object(), &vect(2));
        assert!(check.holds());
    }

    #[test]
    fn missing_opens_are_reported_by_name() {
        let base = lambda();
        let diagram = lambda_pushout(&base);
        let lattice = DownSetLattice::build(&base).unwrap();
        let hat = Hat::hat(&lattice, &diagram).unwrap();
        // keep only the whole poset and the principal opens
        let keep: Vec<DownSet> = lattice
            .opens()
            .iter()
            .filter(|open| open.len() != 2 || !open.contains(1))
            .cloned()
            .collect();
        let mut objects = Vec::new();
        let (poset, keep) = open_poset(&base, keep).unwrap();
        for open in &keep {
            objects.push(*hat.at(open).unwrap().colimit().object());
        }
        let mut edge_maps = BTreeMap::new();
        for (i, j) in poset.hasse_edges() {
            let gi = lattice.index_of(&keep[i]).unwrap();
            let gj = lattice.index_of(&keep[j]).unwrap();
            edge_maps.insert((i, j), hat.diagram().induced_map(gi, gj).unwrap());
        }
        let diagram_small =
            Diagram::new(&poset, ValueCategory::Vect, objects, edge_maps).unwrap();
        let values = OpenDiagram::new(&base, keep, diagram_small).unwrap();
        let missing = DownSet::principal(&base, 1);
        let cover = Cover::new(missing.clone(), vec![missing]).unwrap();
        let err = cosheaf_arrow(&values, &cover).unwrap_err();
        assert_eq!(
            err,
            Error::MissingOpen {
                name: "{z,x}".to_string()
            }
        );
    }

    #[test]
    fn bulk_verification_passes_on_the_pushout() {
        let base = lambda();
        let diagram = lambda_pushout(&base);
        let report = verify_theorem(&diagram, 3).unwrap();
        assert!(report.passed());
        assert!(report.checks > 0);
    }

    #[test]
    fn verifier_is_reusable_across_diagrams() {
        let base = lambda();
        let verifier = TheoremVerifier::prepare(&base, 3).unwrap();
        let first = verifier.verify(&lambda_pushout(&base)).unwrap();
        let constant = Diagram::constant(&base, Obj::FinSet { card: 2 });
        let second = verifier.verify(&constant).unwrap();
        assert!(first.passed() && second.passed());
        assert_eq!(first.checks, second.checks);
    }

    #[test]
    fn enumerated_cech_covers_are_basic() {
        let base = lambda();
        let verifier = TheoremVerifier::prepare(&base, 3).unwrap();
        for open_index in 0..verifier.lattice().len() {
            for info in verifier.covers_at(open_index) {
                if info.is_cech() {
                    assert!(info.is_basic());
                }
            }
        }
    }

    #[test]
    fn refinement_arrow_matches_the_fine_arrow_after_composition() {
        let base = lambda();
        let diagram = lambda_pushout(&base);
        let values = hat_values(&base, &diagram);
        let whole = DownSet::whole(&base);
        let fine = Cover::new(
            whole.clone(),
            base.elements()
                .map(|p| DownSet::principal(&base, p))
                .collect(),
        )
        .unwrap();
        let coarse = Cover::new(whole.clone(), vec![whole]).unwrap();
        let comparison = refinement_arrow(&values, &fine, &coarse).unwrap();
        assert_eq!(&comparison.composite(), comparison.fine().arrow());
    }

    #[test]
    fn refinement_arrow_requires_refinement() {
        let base = lambda();
        let diagram = lambda_pushout(&base);
        let values = hat_values(&base, &diagram);
        let whole = DownSet::whole(&base);
        let fine = Cover::new(whole.clone(), vec![whole.clone()]).unwrap();
        let coarse = Cover::new(
            whole,
            vec![DownSet::principal(&base, 1), DownSet::principal(&base, 2)],
        )
        .unwrap();
        // the singleton {whole} does not refine a cover of smaller opens
        assert_eq!(
            refinement_arrow(&values, &fine, &coarse).unwrap_err(),
            Error::NotARefinement
        );
    }

    #[test]
    fn basic_only_search_finds_nothing_on_an_extension() {
        let base = lambda();
        let diagram = lambda_pushout(&base);
        let values = hat_values(&base, &diagram);
        let bounds = FalsifyBounds {
            max_members: 3,
            class: CoverClass::Basic,
        };
        assert!(falsify_refinement(&values, &bounds).unwrap().is_none());
    }
}
