//! Machine checks for the three-stage argument that basic covers glue:
//! the auxiliary poset of member/element pairs, cofinality of each
//! member's inclusion into its fiber, agreement of iterated colimits
//! through both projections, and pointwise recovery of the original
//! values from the second projection's extension.

use std::sync::Arc;

use crate::covers::Cover;
use crate::error::{Error, Result};
use crate::kan::{composition_comparisons, KanExtension};
use crate::poset::{same_poset, CommaPoset, FinitePoset, PosetMap};
use crate::valcat::{is_isomorphism, mutually_inverse, Diagram};

/// The poset of pairs (member, element of that member), ordered by member
/// inclusion on the first coordinate and the parent order on the second,
/// together with its two projections: onto the cover's member poset and
/// onto the covered open viewed as a sub-poset of the parent.
#[derive(Clone, Debug)]
pub struct AuxiliaryJ {
    cover: Cover,
    pairs: Vec<(usize, usize)>,
    carrier: Arc<FinitePoset>,
    member_poset: Arc<FinitePoset>,
    sub_poset: CommaPoset,
    pi1: PosetMap,
    pi2: PosetMap,
}

impl AuxiliaryJ {
    pub fn build(cover: &Cover) -> Self {
        let parent = cover.parent();
        let mut pairs = Vec::new();
        let mut names = Vec::new();
        for (i, member) in cover.members().iter().enumerate() {
            for p in member.member_vec() {
                pairs.push((i, p));
                names.push(format!("({},{})", member.name(), parent.name(p)));
            }
        }
        let mut relations = Vec::new();
        for (a, &(i, p)) in pairs.iter().enumerate() {
            for (b, &(j, q)) in pairs.iter().enumerate() {
                if a != b && cover.members()[i].is_subset(&cover.members()[j]) && parent.leq(p, q)
                {
                    relations.push((a, b));
                }
            }
        }
        let carrier = Arc::new(
            FinitePoset::with_names(names, &relations).expect("pair order has no cycles"),
        );
        let member_poset = cover.member_poset();
        let sub_poset = CommaPoset::from_members(parent, cover.target().member_vec());
        let pi1 = PosetMap::new(
            &carrier,
            &member_poset,
            pairs.iter().map(|&(i, _)| i).collect(),
        )
        .expect("first projection is monotone");
        let pi2 = PosetMap::new(
            &carrier,
            sub_poset.carrier(),
            pairs
                .iter()
                .map(|&(_, p)| {
                    sub_poset
                        .position_of(p)
                        .expect("members lie inside the target")
                })
                .collect(),
        )
        .expect("second projection is monotone");
        AuxiliaryJ {
            cover: cover.clone(),
            pairs,
            carrier,
            member_poset,
            sub_poset,
            pi1,
            pi2,
        }
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    /// The pairs in carrier order: (member index, parent element).
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn carrier(&self) -> &Arc<FinitePoset> {
        &self.carrier
    }

    pub fn member_poset(&self) -> &Arc<FinitePoset> {
        &self.member_poset
    }

    /// The covered open as a sub-poset of the parent.
    pub fn sub_poset(&self) -> &CommaPoset {
        &self.sub_poset
    }

    /// Projection onto the member poset.
    pub fn pi1(&self) -> &PosetMap {
        &self.pi1
    }

    /// Projection onto the covered open's sub-poset.
    pub fn pi2(&self) -> &PosetMap {
        &self.pi2
    }

    pub fn position_of(&self, member: usize, element: usize) -> Option<usize> {
        self.pairs.binary_search(&(member, element)).ok()
    }

    /// Pulls a diagram on the parent poset back to the pair carrier.
    pub fn pull_back(&self, diagram: &Diagram) -> Result<Diagram> {
        let to_parent = PosetMap::new(
            &self.carrier,
            self.cover.parent(),
            self.pairs.iter().map(|&(_, p)| p).collect(),
        )?;
        diagram.restrict(&to_parent)
    }
}

/// Outcome of [`check_proof_steps`]: which stages of the gluing argument
/// held on a given basic cover, with how many members and target elements
/// were examined.
#[derive(Clone, Debug)]
pub struct ProofStepsReport {
    pub members_checked: usize,
    pub cofinality_ok: bool,
    pub iterated_colimits_ok: bool,
    pub pointwise_ok: bool,
    pub points_checked: usize,
}

impl ProofStepsReport {
    pub fn passed(&self) -> bool {
        self.cofinality_ok && self.iterated_colimits_ok && self.pointwise_ok
    }
}

/// Verifies the three stages of the gluing argument for `cover`, which
/// must be basic, against `diagram` on the cover's parent poset:
///
/// 1. for each member, the member's sub-poset includes cofinally into its
///    fiber in the pair carrier, so the fiber colimit is the member value;
/// 2. computing the carrier colimit through either projection and then
///    collapsing to a point agrees with the direct carrier colimit;
/// 3. for each element of the target, the extension of the pulled-back
///    diagram along the second projection recovers the original value,
///    with equal legs from every pair sitting over that element.
pub fn check_proof_steps(diagram: &Diagram, cover: &Cover) -> Result<ProofStepsReport> {
    if !same_poset(diagram.base(), cover.parent()) {
        return Err(Error::ParentMismatch);
    }
    if !cover.is_basic() {
        return Err(Error::NotBasic);
    }
    let aux = AuxiliaryJ::build(cover);
    let pulled = aux.pull_back(diagram)?;

    let mut cofinality_ok = true;
    for (i, member) in cover.members().iter().enumerate() {
        let member_sub = CommaPoset::from_members(cover.parent(), member.member_vec());
        let fiber = CommaPoset::under(aux.pi1(), i);
        let assignment: Vec<usize> = member
            .member_vec()
            .into_iter()
            .map(|q| {
                let pair = aux.position_of(i, q).expect("pair exists");
                fiber.position_of(pair).expect("pair lies in its own fiber")
            })
            .collect();
        let include = PosetMap::new(member_sub.carrier(), fiber.carrier(), assignment)?;
        cofinality_ok &= include.is_cofinal();
    }

    let mut iterated_colimits_ok = true;
    let through_members = composition_comparisons(
        aux.pi1(),
        &PosetMap::to_point(aux.member_poset()),
        &pulled,
    )?;
    let through_target = composition_comparisons(
        aux.pi2(),
        &PosetMap::to_point(aux.sub_poset().carrier()),
        &pulled,
    )?;
    for (forward, backward) in through_members.iter().chain(through_target.iter()) {
        iterated_colimits_ok &= mutually_inverse(forward, backward);
    }

    let mut pointwise_ok = true;
    let mut points_checked = 0usize;
    let second = KanExtension::lan(aux.pi2(), &pulled)?;
    for (s, &p) in aux.sub_poset().witnesses().iter().enumerate() {
        let point = second.at(s);
        let mut legs = Vec::new();
        for (i, member) in cover.members().iter().enumerate() {
            if !member.contains(p) {
                continue;
            }
            let pair = aux.position_of(i, p).expect("pair exists");
            let local = point
                .comma()
                .position_of(pair)
                .expect("the pair lies below its own image");
            legs.push(point.colimit().leg(local));
        }
        let first = legs[0];
        pointwise_ok &= is_isomorphism(first);
        pointwise_ok &= legs.iter().all(|leg| *leg == first);
        points_checked += 1;
    }

    Ok(ProofStepsReport {
        members_checked: cover.len(),
        cofinality_ok,
        iterated_colimits_ok,
        pointwise_ok,
        points_checked,
    })
}
