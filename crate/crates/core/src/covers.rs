//! Covers of a down-set by down-sets, and the taxonomy of cover
//! conditions that control when gluing works: plain covers, covers closed
//! under intersection, covers whose intersections are unions of members,
//! and the iterated-intersection variant of the latter.

use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::poset::{DownSet, DownSetLattice, FinitePoset, PosetMap};

/// Largest member count [`Cover::is_complete`] accepts by default.
pub const DEFAULT_COMPLETE_BOUND: usize = 12;

/// Work bound for cover enumeration: the number of candidate member sets
/// that may be inspected.
pub const DEFAULT_ENUMERATION_BOUND: u128 = 1 << 22;

/// A family of distinct down-sets whose union is a stated target down-set.
///
/// Members keep their construction order; equality and hashing treat the
/// family as a set.
#[derive(Clone, Debug)]
pub struct Cover {
    target: DownSet,
    members: Vec<DownSet>,
}

impl PartialEq for Cover {
    fn eq(&self, other: &Self) -> bool {
        self.target == other.target && self.member_set() == other.member_set()
    }
}

impl Eq for Cover {}

impl std::hash::Hash for Cover {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.target.hash(state);
        for member in self.member_set() {
            member.hash(state);
        }
    }
}

impl Cover {
    /// Validates parents, distinctness, and that the members union to the
    /// target exactly.
    pub fn new(target: DownSet, members: Vec<DownSet>) -> Result<Self> {
        for (i, member) in members.iter().enumerate() {
            if !member.same_parent(&target) {
                return Err(Error::ParentMismatch);
            }
            if members[..i].contains(member) {
                return Err(Error::DuplicateMember { member: i });
            }
        }
        if !union_equals(&members, &target) {
            return Err(Error::NotACover);
        }
        Ok(Cover { target, members })
    }

    pub fn target(&self) -> &DownSet {
        &self.target
    }

    pub fn members(&self) -> &[DownSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn parent(&self) -> &Arc<FinitePoset> {
        self.target.parent()
    }

    fn member_set(&self) -> BTreeSet<&DownSet> {
        self.members.iter().collect()
    }

    /// True when every non-empty intersection of members is itself a
    /// member.
    ///
    /// Only pairs are inspected. That suffices: argue by induction on the
    /// size of a subfamily with non-empty intersection. A single member is
    /// trivially a member. For a larger subfamily, its intersection is
    /// (intersection of all but one) meet (the last one); the first factor
    /// contains the whole non-empty intersection, so by induction it is a
    /// member, and the pairwise check then makes the full intersection a
    /// member as well.
    pub fn is_cech(&self) -> bool {
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                let meet = a.intersection(b);
                if !meet.is_empty() && !self.members.contains(&meet) {
                    return false;
                }
            }
        }
        true
    }

    /// True when every pairwise intersection of members equals the union
    /// of the members contained in it. This is the condition under which
    /// the members behave like a basis for the target.
    pub fn is_basic(&self) -> bool {
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i..] {
                if !self.union_of_members_inside_equals(&a.intersection(b)) {
                    return false;
                }
            }
        }
        true
    }

    /// True when every non-empty intersection of any subfamily equals the
    /// union of the members contained in it.
    ///
    /// The intersections of subfamilies are generated by closing the member
    /// family under pairwise intersection, so no subfamily enumeration is
    /// needed. Uses the default member-count bound.
    pub fn is_complete(&self) -> Result<bool> {
        self.is_complete_bounded(DEFAULT_COMPLETE_BOUND)
    }

    /// As [`Cover::is_complete`] with an explicit member-count bound.
    pub fn is_complete_bounded(&self, max_members: usize) -> Result<bool> {
        if self.members.len() > max_members {
            return Err(Error::Size {
                needed: self.members.len() as u128,
                bound: max_members as u128,
            });
        }
        for meet in self.intersection_closure() {
            if !meet.is_empty() && !self.union_of_members_inside_equals(&meet) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All intersections of non-empty subfamilies of the members, computed
    /// as the closure of the member family under pairwise intersection.
    pub(crate) fn intersection_closure(&self) -> Vec<DownSet> {
        let mut family: BTreeSet<DownSet> = self.members.iter().cloned().collect();
        loop {
            let mut fresh = Vec::new();
            for [a, b] in family.iter().array_combinations() {
                let meet = a.intersection(b);
                if !family.contains(&meet) {
                    fresh.push(meet);
                }
            }
            if fresh.is_empty() {
                return family.into_iter().collect();
            }
            family.extend(fresh);
        }
    }

    fn union_of_members_inside_equals(&self, region: &DownSet) -> bool {
        let mut covered = DownSet::empty(region.parent());
        for member in &self.members {
            if member.is_subset(region) {
                covered = covered.union(member);
            }
        }
        covered == *region
    }

    /// The members as a finite poset under inclusion, in member order,
    /// named by their down-set names.
    pub fn member_poset(&self) -> Arc<FinitePoset> {
        let names = self.members.iter().map(|m| m.name()).collect();
        let mut pairs = Vec::new();
        for (i, a) in self.members.iter().enumerate() {
            for (j, b) in self.members.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    pairs.push((i, j));
                }
            }
        }
        Arc::new(FinitePoset::with_names(names, &pairs).expect("inclusion has no cycles"))
    }

    /// The order-preserving map from the member poset into the down-set
    /// lattice of the parent.
    pub fn inclusion_into(&self, lattice: &DownSetLattice) -> Result<PosetMap> {
        if !crate::poset::same_poset(lattice.parent(), self.parent()) {
            return Err(Error::ParentMismatch);
        }
        let assignment: Vec<usize> = self
            .members
            .iter()
            .map(|member| {
                lattice
                    .index_of(member)
                    .expect("every down-set appears in the lattice")
            })
            .collect();
        PosetMap::new(&self.member_poset(), lattice.poset(), assignment)
    }
}

/// True when the down-sets in `members` union to `target`. Fails with
/// [`Error::ParentMismatch`] when any operand lives over a different poset.
pub fn is_cover(members: &[DownSet], target: &DownSet) -> Result<bool> {
    for member in members {
        if !member.same_parent(target) {
            return Err(Error::ParentMismatch);
        }
    }
    Ok(union_equals(members, target))
}

fn union_equals(members: &[DownSet], target: &DownSet) -> bool {
    let mut union = DownSet::empty(target.parent());
    for member in members {
        union = union.union(member);
    }
    union == *target
}

/// True when every member of `coarse` contains some member of `fine`.
/// Both covers must share a parent and a target.
pub fn refines(fine: &Cover, coarse: &Cover) -> Result<bool> {
    if !fine.target().same_parent(coarse.target()) {
        return Err(Error::ParentMismatch);
    }
    if fine.target() != coarse.target() {
        return Err(Error::TargetMismatch);
    }
    Ok(coarse
        .members()
        .iter()
        .all(|big| fine.members().iter().any(|small| small.is_subset(big))))
}

/// Every cover of `target` with at most `max_members` members, each member
/// a down-set of the parent contained in `target`. Members within a cover
/// follow the canonical down-set order, and covers are emitted in
/// lexicographic order of their member lists, so the output is
/// deduplicated by construction.
pub fn enumerate_covers(target: &DownSet, max_members: usize) -> Result<Vec<Cover>> {
    let lattice = DownSetLattice::build(target.parent())?;
    covers_from_pool(lattice.opens(), target, max_members)
}

/// As [`enumerate_covers`], but with members drawn from the given pool of
/// distinct down-sets instead of the full lattice. Pool entries not
/// contained in `target` are ignored; the rest keep their pool order
/// within each cover.
pub fn covers_from_pool(
    pool: &[DownSet],
    target: &DownSet,
    max_members: usize,
) -> Result<Vec<Cover>> {
    for (i, member) in pool.iter().enumerate() {
        if !member.same_parent(target) {
            return Err(Error::ParentMismatch);
        }
        if pool[..i].contains(member) {
            return Err(Error::DuplicateMember { member: i });
        }
    }
    let candidates: Vec<&DownSet> = pool.iter().filter(|open| open.is_subset(target)).collect();
    let mut work: u128 = 0;
    for k in 0..=max_members.min(candidates.len()) {
        work += binomial(candidates.len(), k);
        if work > DEFAULT_ENUMERATION_BOUND {
            return Err(Error::Size {
                needed: work,
                bound: DEFAULT_ENUMERATION_BOUND,
            });
        }
    }
    let mut out = Vec::new();
    for size in 0..=max_members.min(candidates.len()) {
        for family in candidates.iter().map(|&open| open.clone()).combinations(size) {
            if union_equals(&family, target) {
                out.push(Cover {
                    target: target.clone(),
                    members: family,
                });
            }
        }
    }
    Ok(out)
}

/// The covers from [`enumerate_covers`] that satisfy [`Cover::is_basic`].
pub fn enumerate_basic_covers(target: &DownSet, max_members: usize) -> Result<Vec<Cover>> {
    Ok(enumerate_covers(target, max_members)?
        .into_iter()
        .filter(Cover::is_basic)
        .collect())
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::DownSet;

    fn lambda() -> Arc<FinitePoset> {
        Arc::new(
            FinitePoset::with_names(
                vec!["z".into(), "x".into(), "y".into()],
                &[(0, 1), (0, 2)],
            )
            .unwrap(),
        )
    }

    fn principal_cover(parent: &Arc<FinitePoset>) -> Cover {
        let members = parent
            .elements()
            .map(|p| DownSet::principal(parent, p))
            .collect();
        Cover::new(DownSet::whole(parent), members).unwrap()
    }

    #[test]
    fn principal_down_sets_cover_the_whole_poset() {
        let p = lambda();
        let cover = principal_cover(&p);
        assert_eq!(cover.len(), 3);
        assert!(cover.is_cech());
    }

    #[test]
    fn non_covers_and_mismatched_parents_are_rejected() {
        let p = lambda();
        let d_x = DownSet::principal(&p, 1);
        let d_y = DownSet::principal(&p, 2);
        // {D_x} does not reach y
        assert_eq!(
            Cover::new(DownSet::whole(&p), vec![d_x.clone()]).unwrap_err(),
            Error::NotACover
        );
        assert!(!is_cover(&[d_x.clone()], &DownSet::whole(&p)).unwrap());
        assert!(is_cover(&[d_x.clone(), d_y], &DownSet::whole(&p)).unwrap());
        let other = Arc::new(FinitePoset::chain(2));
        let foreign = DownSet::principal(&other, 0);
        assert_eq!(
            is_cover(&[foreign], &DownSet::whole(&p)).unwrap_err(),
            Error::ParentMismatch
        );
    }

    #[test]
    fn duplicates_are_rejected() {
        let p = lambda();
        let d_x = DownSet::principal(&p, 1);
        let d_y = DownSet::principal(&p, 2);
        let err = Cover::new(DownSet::whole(&p), vec![d_x.clone(), d_y, d_x]).unwrap_err();
        assert_eq!(err, Error::DuplicateMember { member: 2 });
    }

    #[test]
    fn cech_depends_on_the_shared_intersection() {
        let p = lambda();
        let d_x = DownSet::principal(&p, 1);
        let d_y = DownSet::principal(&p, 2);
        let d_z = DownSet::principal(&p, 0);
        let without = Cover::new(DownSet::whole(&p), vec![d_x.clone(), d_y.clone()]).unwrap();
        assert!(!without.is_cech());
        assert!(!without.is_basic());
        let with = Cover::new(DownSet::whole(&p), vec![d_x, d_y, d_z]).unwrap();
        assert!(with.is_cech());
        assert!(with.is_basic());
    }

    #[test]
    fn basic_without_cech_via_a_two_piece_intersection() {
        // c and d incomparable, both below each of a and b
        let p = Arc::new(
            FinitePoset::with_names(
                vec!["c".into(), "d".into(), "a".into(), "b".into()],
                &[(0, 2), (0, 3), (1, 2), (1, 3)],
            )
            .unwrap(),
        );
        let d_a = DownSet::principal(&p, 2);
        let d_b = DownSet::principal(&p, 3);
        let d_c = DownSet::principal(&p, 0);
        let d_d = DownSet::principal(&p, 1);
        let cover = Cover::new(DownSet::whole(&p), vec![d_a, d_b, d_c, d_d]).unwrap();
        // D_a meet D_b = {c, d} is a union of members but not a member
        assert!(!cover.is_cech());
        assert!(cover.is_basic());
        assert!(cover.is_complete().unwrap());
    }

    /// Face poset of a solid triangle: the face below three edges, each
    /// edge below the two vertices it joins.
    fn triangle() -> Arc<FinitePoset> {
        let names = vec![
            "f".into(),
            "e12".into(),
            "e13".into(),
            "e23".into(),
            "v1".into(),
            "v2".into(),
            "v3".into(),
        ];
        let pairs = [
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 4),
            (1, 5),
            (2, 4),
            (2, 6),
            (3, 5),
            (3, 6),
        ];
        Arc::new(FinitePoset::with_names(names, &pairs).unwrap())
    }

    #[test]
    fn triangle_star_cover_needs_the_triple_intersection() {
        let p = triangle();
        let stars: Vec<DownSet> = (4..7).map(|v| DownSet::principal(&p, v)).collect();
        let pairwise: Vec<DownSet> = (1..4).map(|e| DownSet::principal(&p, e)).collect();
        let triple = DownSet::principal(&p, 0);
        let whole = DownSet::whole(&p);

        // with only the three stars, the pairwise overlaps are uncovered
        let bare = Cover::new(whole.clone(), stars.clone()).unwrap();
        assert!(!bare.is_cech() && !bare.is_basic() && !bare.is_complete().unwrap());

        // adding the pairwise overlaps still leaves the triple overlap
        // {f} uncovered, and the closure finds it
        let skeleton = Cover::new(
            whole.clone(),
            stars.iter().chain(&pairwise).cloned().collect(),
        )
        .unwrap();
        assert!(!skeleton.is_cech());
        assert!(!skeleton.is_basic());
        assert!(!skeleton.is_complete().unwrap());

        // with the triple overlap included everything closes up
        let full = Cover::new(
            whole,
            stars
                .iter()
                .chain(&pairwise)
                .chain(std::iter::once(&triple))
                .cloned()
                .collect(),
        )
        .unwrap();
        assert!(full.is_cech());
        assert!(full.is_basic());
        assert!(full.is_complete().unwrap());
    }

    #[test]
    fn complete_bound_is_enforced() {
        let p = Arc::new(FinitePoset::antichain(4));
        let cover = principal_cover(&p);
        assert_eq!(
            cover.is_complete_bounded(3).unwrap_err(),
            Error::Size { needed: 4, bound: 3 }
        );
    }

    #[test]
    fn closure_of_a_complete_cover_stays_within_unions() {
        let p = triangle();
        let members: Vec<DownSet> = p.elements().map(|e| DownSet::principal(&p, e)).collect();
        let cover = Cover::new(DownSet::whole(&p), members).unwrap();
        assert!(cover.is_complete().unwrap());
        for meet in cover.intersection_closure() {
            let mut union = DownSet::empty(&p);
            for member in cover.members() {
                if member.is_subset(&meet) {
                    union = union.union(member);
                }
            }
            assert_eq!(union, meet);
        }
    }

    #[test]
    fn refinement_examples() {
        let p = lambda();
        let whole = DownSet::whole(&p);
        let fine = principal_cover(&p);
        let coarse = Cover::new(
            whole.clone(),
            vec![DownSet::principal(&p, 1), DownSet::principal(&p, 2)],
        )
        .unwrap();
        assert!(refines(&fine, &coarse).unwrap());
        assert!(!refines(&coarse, &fine).unwrap());
        assert!(refines(&fine, &fine).unwrap());

        let d_z = DownSet::principal(&p, 0);
        let other_target = Cover::new(d_z.clone(), vec![d_z]).unwrap();
        assert_eq!(
            refines(&fine, &other_target).unwrap_err(),
            Error::TargetMismatch
        );
    }

    #[test]
    fn member_poset_and_lattice_inclusion() {
        let p = lambda();
        let cover = principal_cover(&p);
        let member_poset = cover.member_poset();
        assert_eq!(member_poset.hasse_edges(), vec![(0, 1), (0, 2)]);
        let lattice = DownSetLattice::build(&p).unwrap();
        let inclusion = cover.inclusion_into(&lattice).unwrap();
        for (i, member) in cover.members().iter().enumerate() {
            assert_eq!(lattice.open(inclusion.apply(i)), member);
        }
    }

    #[test]
    fn enumerate_covers_of_a_principal_target() {
        let p = lambda();
        let d_z = DownSet::principal(&p, 0);
        let covers = enumerate_basic_covers(&d_z, 2).unwrap();
        let summaries: Vec<Vec<String>> = covers
            .iter()
            .map(|c| c.members().iter().map(|m| m.name()).collect())
            .collect();
        assert_eq!(summaries, vec![vec!["{z}".to_string()], vec!["{}".to_string(), "{z}".to_string()]]);
    }

    #[test]
    fn enumerate_covers_of_the_empty_target() {
        let p = lambda();
        let empty = DownSet::empty(&p);
        let covers = enumerate_basic_covers(&empty, 3).unwrap();
        assert_eq!(covers.len(), 2);
        assert!(covers[0].is_empty());
        assert_eq!(covers[1].members(), &[empty.clone()]);
    }

    #[test]
    fn enumerate_covers_of_a_chain_square() {
        let p = Arc::new(FinitePoset::chain(2));
        let whole = DownSet::whole(&p);
        let covers = enumerate_covers(&whole, 2).unwrap();
        // every cover must contain {0,1}; the partner is nothing, {}, or {0}
        assert_eq!(covers.len(), 3);
        assert!(covers.iter().all(|c| c.is_basic()));
    }

    #[test]
    fn cech_implies_basic_on_small_enumerations() {
        for poset in [lambda(), Arc::new(FinitePoset::chain(3)), Arc::new(FinitePoset::antichain(3))] {
            let lattice = DownSetLattice::build(&poset).unwrap();
            for open in lattice.opens() {
                for cover in enumerate_covers(open, 3).unwrap() {
                    if cover.is_cech() {
                        assert!(cover.is_basic(), "cech cover failed basic: {cover:?}");
                    }
                }
            }
        }
    }
}
