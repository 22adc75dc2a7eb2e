//! Left Kan extension of diagrams along monotone maps, computed pointwise:
//! the value at a target element is the colimit of the source diagram
//! restricted to the comma poset at that element, and the maps between
//! values are the unique factorizations between those colimits.
//!
//! The special case of extending along the principal embedding of a poset
//! into its down-set lattice gets a dedicated entry point that cuts each
//! comma poset directly out of the members of the open.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poset::{same_poset, CommaPoset, DownSet, DownSetLattice, FinitePoset, PosetMap};
use crate::valcat::{ColimitResult, Diagram, Map, Obj};
use std::sync::Arc;

/// The extension's value at one target element: the comma poset indexing
/// the colimit and the computed colimit itself.
#[derive(Clone, Debug)]
pub struct PointColimit {
    comma: CommaPoset,
    colimit: ColimitResult,
}

impl PointColimit {
    pub fn comma(&self) -> &CommaPoset {
        &self.comma
    }

    pub fn colimit(&self) -> &ColimitResult {
        &self.colimit
    }
}

/// A pointwise left Kan extension: the extended diagram together with the
/// per-element colimit data it was assembled from.
#[derive(Clone, Debug)]
pub struct KanExtension {
    along: PosetMap,
    source: Diagram,
    result: Diagram,
    point_colimits: Vec<PointColimit>,
}

fn extend_over(
    target: &Arc<FinitePoset>,
    commas: Vec<CommaPoset>,
    source: &Diagram,
) -> Result<(Diagram, Vec<PointColimit>)> {
    let mut points = Vec::with_capacity(commas.len());
    for comma in commas {
        let restricted = source.restrict(comma.projection())?;
        let colimit = restricted.colimit();
        points.push(PointColimit { comma, colimit });
    }
    let objects: Vec<Obj> = points.iter().map(|point| *point.colimit.object()).collect();
    let mut edge_maps = BTreeMap::new();
    for (b1, b2) in target.hasse_edges() {
        let fine = &points[b1];
        let coarse = &points[b2];
        let cocone: Vec<Map> = fine
            .comma
            .witnesses()
            .iter()
            .map(|&a| {
                let position = coarse
                    .comma
                    .position_of(a)
                    .expect("comma posets grow along the order");
                coarse.colimit.leg(position).clone()
            })
            .collect();
        let map = fine
            .colimit
            .factor_through(coarse.colimit.object(), &cocone)?;
        edge_maps.insert((b1, b2), map);
    }
    let result = Diagram::new(target, source.category(), objects, edge_maps)?;
    Ok((result, points))
}

impl KanExtension {
    /// Extends `source` along `along`, whose source must be the diagram's
    /// base.
    pub fn lan(along: &PosetMap, source: &Diagram) -> Result<KanExtension> {
        if !same_poset(along.source(), source.base()) {
            return Err(Error::ParentMismatch);
        }
        let commas: Vec<CommaPoset> = along
            .target()
            .elements()
            .map(|b| CommaPoset::under(along, b))
            .collect();
        let (result, point_colimits) = extend_over(along.target(), commas, source)?;
        Ok(KanExtension {
            along: along.clone(),
            source: source.clone(),
            result,
            point_colimits,
        })
    }

    pub fn along(&self) -> &PosetMap {
        &self.along
    }

    pub fn source(&self) -> &Diagram {
        &self.source
    }

    /// The extended diagram on the target of the map.
    pub fn result(&self) -> &Diagram {
        &self.result
    }

    pub fn point_colimits(&self) -> &[PointColimit] {
        &self.point_colimits
    }

    pub fn at(&self, b: usize) -> &PointColimit {
        &self.point_colimits[b]
    }
}

/// A diagram on a poset extended to the full down-set lattice, valued at
/// each open by the colimit over the open's members.
#[derive(Clone, Debug)]
pub struct Hat {
    lattice: DownSetLattice,
    extension: KanExtension,
}

impl Hat {
    /// Extends `source` from `lattice.parent()` to every open of the
    /// lattice.
    pub fn hat(lattice: &DownSetLattice, source: &Diagram) -> Result<Hat> {
        if !same_poset(lattice.parent(), source.base()) {
            return Err(Error::ParentMismatch);
        }
        let commas: Vec<CommaPoset> = lattice
            .opens()
            .iter()
            .map(|open| CommaPoset::from_members(lattice.parent(), open.member_vec()))
            .collect();
        let (result, point_colimits) = extend_over(lattice.poset(), commas, source)?;
        Ok(Hat {
            lattice: lattice.clone(),
            extension: KanExtension {
                along: lattice.iota(),
                source: source.clone(),
                result,
                point_colimits,
            },
        })
    }

    pub fn lattice(&self) -> &DownSetLattice {
        &self.lattice
    }

    pub fn extension(&self) -> &KanExtension {
        &self.extension
    }

    /// The extended diagram, indexed by the lattice poset.
    pub fn diagram(&self) -> &Diagram {
        &self.extension.result
    }

    pub fn at_index(&self, open_index: usize) -> &PointColimit {
        &self.extension.point_colimits[open_index]
    }

    /// The value at a down-set of the parent poset.
    pub fn at(&self, open: &DownSet) -> Result<&PointColimit> {
        if !same_poset(self.lattice.parent(), open.parent()) {
            return Err(Error::ParentMismatch);
        }
        let index = self
            .lattice
            .index_of(open)
            .expect("every down-set of the parent is an open of the lattice");
        Ok(&self.extension.point_colimits[index])
    }
}

/// Compares extending along a composite map against extending in two
/// stages. For each element of the final target the returned pair holds
/// the canonical maps between the one-step and two-step colimits, obtained
/// by factoring each through the other; the two agree exactly when every
/// pair is a mutual inverse.
pub fn composition_comparisons(
    inner: &PosetMap,
    outer: &PosetMap,
    source: &Diagram,
) -> Result<Vec<(Map, Map)>> {
    let composite = inner.then(outer)?;
    let one_step = KanExtension::lan(&composite, source)?;
    let first = KanExtension::lan(inner, source)?;
    let second = KanExtension::lan(outer, first.result())?;
    let mut out = Vec::with_capacity(outer.target().len());
    for c in outer.target().elements() {
        let direct = one_step.at(c);
        let staged = second.at(c);
        let forward_cocone: Vec<Map> = direct
            .comma()
            .witnesses()
            .iter()
            .map(|&a| {
                let b = inner.apply(a);
                let outer_position = staged
                    .comma()
                    .position_of(b)
                    .expect("the image of a composite witness is a witness");
                let inner_position = first
                    .at(b)
                    .comma()
                    .position_of(a)
                    .expect("an element witnesses its own image");
                staged
                    .colimit()
                    .leg(outer_position)
                    .compose(first.at(b).colimit().leg(inner_position))
            })
            .collect();
        let forward = direct
            .colimit()
            .factor_through(staged.colimit().object(), &forward_cocone)?;
        let mut backward_cocone = Vec::with_capacity(staged.comma().witnesses().len());
        for &b in staged.comma().witnesses() {
            let through: Vec<Map> = first
                .at(b)
                .comma()
                .witnesses()
                .iter()
                .map(|&a| {
                    let position = direct
                        .comma()
                        .position_of(a)
                        .expect("witnesses of the stages witness the composite");
                    direct.colimit().leg(position).clone()
                })
                .collect();
            backward_cocone.push(
                first
                    .at(b)
                    .colimit()
                    .factor_through(direct.colimit().object(), &through)?,
            );
        }
        let backward = staged
            .colimit()
            .factor_through(direct.colimit().object(), &backward_cocone)?;
        out.push((forward, backward));
    }
    Ok(out)
}
