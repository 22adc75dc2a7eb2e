//! Diagrams: functors from a finite poset into a value category, with
//! objects on elements and maps on Hasse edges. Maps between arbitrary
//! comparable pairs are composites along Hasse paths, and construction
//! verifies that every two paths between the same endpoints compose to
//! the same map.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, FunctorialityWitness, Result};
use crate::poset::{FinitePoset, PosetMap};
use crate::valcat::{Map, Obj, ValueCategory};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    base: Arc<FinitePoset>,
    category: ValueCategory,
    objects: Vec<Obj>,
    edge_maps: BTreeMap<(usize, usize), Map>,
}

impl Diagram {
    /// Validates shapes and path independence.
    pub fn new(
        base: &Arc<FinitePoset>,
        category: ValueCategory,
        objects: Vec<Obj>,
        edge_maps: BTreeMap<(usize, usize), Map>,
    ) -> Result<Self> {
        let diagram = Self::new_unchecked(base, category, objects, edge_maps)?;
        diagram.check_functorial().map_err(Error::NotFunctorial)?;
        Ok(diagram)
    }

    /// Validates shapes only, leaving path independence to
    /// [`Diagram::check_functorial`]. Useful for building candidates that
    /// are about to be checked or rejected.
    pub fn new_unchecked(
        base: &Arc<FinitePoset>,
        category: ValueCategory,
        objects: Vec<Obj>,
        edge_maps: BTreeMap<(usize, usize), Map>,
    ) -> Result<Self> {
        if objects.len() != base.len() {
            return Err(Error::IndexOutOfRange {
                index: objects.len(),
                size: base.len(),
            });
        }
        for (p, object) in objects.iter().enumerate() {
            if object.category() != category {
                return Err(Error::CategoryMismatch {
                    at: base.name(p).to_string(),
                });
            }
        }
        let hasse: Vec<(usize, usize)> = base.hasse_edges();
        for &(p, q) in edge_maps.keys() {
            if !hasse.contains(&(p, q)) {
                return Err(Error::UnexpectedEdgeMap { p, q });
            }
        }
        for &(p, q) in &hasse {
            let Some(map) = edge_maps.get(&(p, q)) else {
                return Err(Error::MissingEdgeMap { p, q });
            };
            if map.category() != category {
                return Err(Error::CategoryMismatch {
                    at: format!("{}<{}", base.name(p), base.name(q)),
                });
            }
            if map.domain() != objects[p] || map.codomain() != objects[q] {
                return Err(Error::BadMapShape { p, q });
            }
        }
        Ok(Diagram {
            base: Arc::clone(base),
            category,
            objects,
            edge_maps,
        })
    }

    /// The constant diagram with one object everywhere and identity edge
    /// maps.
    pub fn constant(base: &Arc<FinitePoset>, object: Obj) -> Self {
        let edge_maps = base
            .hasse_edges()
            .into_iter()
            .map(|edge| (edge, Map::identity(&object)))
            .collect();
        Diagram {
            base: Arc::clone(base),
            category: object.category(),
            objects: vec![object; base.len()],
            edge_maps,
        }
    }

    pub fn base(&self) -> &Arc<FinitePoset> {
        &self.base
    }

    pub fn category(&self) -> ValueCategory {
        self.category
    }

    pub fn objects(&self) -> &[Obj] {
        &self.objects
    }

    pub fn object(&self, p: usize) -> &Obj {
        &self.objects[p]
    }

    pub fn edge_maps(&self) -> &BTreeMap<(usize, usize), Map> {
        &self.edge_maps
    }

    pub fn edge_map(&self, p: usize, q: usize) -> &Map {
        self.edge_maps
            .get(&(p, q))
            .expect("requested edge is not a Hasse edge")
    }

    /// Elements ordered so that every element appears after everything
    /// strictly below it.
    fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = self.base.elements().collect();
        order.sort_by_key(|&r| self.base.elements().filter(|&s| self.base.lt(s, r)).count());
        order
    }

    /// Verifies that all Hasse paths between the same endpoints compose to
    /// equal maps. On failure returns the endpoints and two offending
    /// paths.
    pub fn check_functorial(&self) -> std::result::Result<(), FunctorialityWitness> {
        let order = self.linear_extension();
        let hasse = self.base.hasse_edges();
        for &start in &order {
            let mut composite: Vec<Option<Map>> = vec![None; self.base.len()];
            let mut trail: Vec<Vec<usize>> = vec![Vec::new(); self.base.len()];
            composite[start] = Some(Map::identity(&self.objects[start]));
            trail[start] = vec![start];
            for &r in &order {
                if r == start || !self.base.lt(start, r) {
                    continue;
                }
                for &(s, t) in &hasse {
                    if t != r || !self.base.leq(start, s) {
                        continue;
                    }
                    let below = composite[s].as_ref().expect("processed in order").clone();
                    let candidate = self.edge_map(s, t).compose(&below);
                    let mut path = trail[s].clone();
                    path.push(r);
                    match &composite[r] {
                        None => {
                            composite[r] = Some(candidate);
                            trail[r] = path;
                        }
                        Some(existing) => {
                            if *existing != candidate {
                                return Err(FunctorialityWitness {
                                    from: start,
                                    to: r,
                                    path_a: trail[r].clone(),
                                    path_b: path,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The composite map from `p` to `q` along any Hasse path; the identity
    /// when `p == q`. Fails with [`Error::NotComparable`] when `p` is not
    /// below `q`.
    pub fn induced_map(&self, p: usize, q: usize) -> Result<Map> {
        if !self.base.leq(p, q) {
            return Err(Error::NotComparable { p, q });
        }
        if p == q {
            return Ok(Map::identity(&self.objects[p]));
        }
        let order = self.linear_extension();
        let mut composite: Vec<Option<Map>> = vec![None; self.base.len()];
        composite[p] = Some(Map::identity(&self.objects[p]));
        for &r in &order {
            if !self.base.lt(p, r) || !self.base.leq(r, q) {
                continue;
            }
            for s in self.base.elements() {
                if composite[s].is_none() || !self.base.lt(s, r) {
                    continue;
                }
                if self.edge_maps.contains_key(&(s, r)) {
                    let below = composite[s].as_ref().unwrap().clone();
                    composite[r] = Some(self.edge_map(s, r).compose(&below));
                    break;
                }
            }
        }
        Ok(composite[q]
            .clone()
            .expect("a Hasse path exists between comparable elements"))
    }

    /// The diagram obtained by precomposing with a monotone map into the
    /// base: objects are pulled back, and each Hasse edge of the new base
    /// gets the induced map between the images.
    pub fn restrict(&self, along: &PosetMap) -> Result<Diagram> {
        if !crate::poset::same_poset(along.target(), &self.base) {
            return Err(Error::ParentMismatch);
        }
        let source = along.source();
        let objects: Vec<Obj> = source
            .elements()
            .map(|j| self.objects[along.apply(j)])
            .collect();
        let mut edge_maps = BTreeMap::new();
        for (j1, j2) in source.hasse_edges() {
            let map = self.induced_map(along.apply(j1), along.apply(j2))?;
            edge_maps.insert((j1, j2), map);
        }
        Ok(
            Self::new_unchecked(source, self.category, objects, edge_maps)
                .expect("restriction preserves shapes"),
        )
    }
}
