//! Finite posets and the combinatorics built directly on them: down-sets,
//! the down-set lattice (the Alexandrov topology ordered by inclusion),
//! monotone maps, comma posets, and cofinality.
//!
//! A poset is stored as its full reflexive transitive relation on indices
//! `0..n`. Element identity is the index; names are presentation only.
//! Hasse edges are derived on demand. All types are immutable after
//! construction, so everything here is safe to share across threads.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Number of down-sets a lattice computation may produce before it is
/// refused with [`Error::Size`]. Two to this power is the worst case for a
/// poset of twenty elements.
pub const DEFAULT_MAX_LATTICE: u128 = 1 << 20;

/// A finite poset on indices `0..len()`, with the order stored as a closed
/// boolean relation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    names: Vec<String>,
    leq: Vec<bool>,
}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinitePoset")
            .field("names", &self.names)
            .field("hasse", &self.hasse_edges())
            .finish()
    }
}

impl FinitePoset {
    /// Builds the poset on `n` elements generated by `pairs`, where each
    /// `(p, q)` asserts `p <= q`. The reflexive transitive closure is taken
    /// automatically; a pair of distinct mutually related elements is
    /// rejected with [`Error::Cycle`].
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::with_names(names, pairs)
    }

    /// Same as [`FinitePoset::from_relations`] but with caller-chosen names.
    pub fn with_names(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(p, q) in pairs {
            for index in [p, q] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, size: n });
                }
            }
            leq[p * n + q] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::Cycle { a: i, b: j });
                }
            }
        }
        Ok(FinitePoset { names, leq })
    }

    /// The poset `0 <= 1 <= ... <= n-1`.
    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_relations(n, &pairs).expect("a chain has no cycles")
    }

    /// The discrete order on `n` elements.
    pub fn antichain(n: usize) -> Self {
        Self::from_relations(n, &[]).expect("a discrete order has no cycles")
    }

    /// The one-element poset.
    pub fn point() -> Self {
        Self::antichain(1)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn name(&self, p: usize) -> &str {
        &self.names[p]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        assert!(p < self.len() && q < self.len(), "element out of range");
        self.leq[p * self.len() + q]
    }

    pub fn lt(&self, p: usize, q: usize) -> bool {
        p != q && self.leq(p, q)
    }

    pub fn comparable(&self, p: usize, q: usize) -> bool {
        self.leq(p, q) || self.leq(q, p)
    }

    /// Covering pairs `(p, q)`: `p < q` with nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for p in self.elements() {
            for q in self.elements() {
                if self.lt(p, q)
                    && !self
                        .elements()
                        .any(|r| self.lt(p, r) && self.lt(r, q))
                {
                    edges.push((p, q));
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    /// The same carrier with the order reversed.
    pub fn opposite(&self) -> Self {
        let n = self.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = self.leq[j * n + i];
            }
        }
        FinitePoset {
            names: self.names.clone(),
            leq,
        }
    }

    /// Partition of the elements into connected components of the
    /// comparability graph. Components are sorted by smallest member and
    /// each component lists its members in ascending order.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut components = Vec::new();
        for start in self.elements() {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut component = Vec::new();
            seen[start] = true;
            while let Some(p) = stack.pop() {
                component.push(p);
                for q in self.elements() {
                    if !seen[q] && self.comparable(p, q) {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    /// The full sub-poset on `members` (ascending, duplicate-free), keeping
    /// the original names. Element `i` of the result is `members[i]`.
    pub fn induced(&self, members: &[usize]) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let n = members.len();
        let names = members.iter().map(|&p| self.names[p].clone()).collect();
        let mut leq = vec![false; n * n];
        for (i, &p) in members.iter().enumerate() {
            for (j, &q) in members.iter().enumerate() {
                leq[i * n + j] = self.leq(p, q);
            }
        }
        FinitePoset { names, leq }
    }
}

/// True when the two handles denote the same poset, either literally or
/// structurally.
pub(crate) fn same_poset(a: &Arc<FinitePoset>, b: &Arc<FinitePoset>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A downward closed subset of a parent poset. Down-sets are exactly the
/// opens of the Alexandrov topology on the parent.
///
/// Ordering, equality, and hashing consider the member set only; operations
/// that combine two down-sets check parent compatibility themselves.
#[derive(Clone)]
pub struct DownSet {
    parent: Arc<FinitePoset>,
    members: BTreeSet<usize>,
}

impl fmt::Debug for DownSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DownSet({})", self.name())
    }
}

impl PartialEq for DownSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for DownSet {}

impl PartialOrd for DownSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DownSet {
    /// Size first, then lexicographic on the sorted members. This is a
    /// linear extension of inclusion, which keeps decoded lattices and
    /// canonicalized covers in an inclusion-compatible order.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.members.len(), &self.members).cmp(&(other.members.len(), &other.members))
    }
}

impl std::hash::Hash for DownSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl DownSet {
    /// Validates that `members` is downward closed in `parent`.
    pub fn new(parent: &Arc<FinitePoset>, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        for &q in &members {
            if q >= parent.len() {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    size: parent.len(),
                });
            }
            for p in parent.elements() {
                if parent.leq(p, q) && !members.contains(&p) {
                    return Err(Error::NotDownwardClosed {
                        inside: q,
                        missing: p,
                    });
                }
            }
        }
        Ok(DownSet {
            parent: Arc::clone(parent),
            members,
        })
    }

    pub(crate) fn unchecked(parent: &Arc<FinitePoset>, members: BTreeSet<usize>) -> Self {
        DownSet {
            parent: Arc::clone(parent),
            members,
        }
    }

    /// The principal down-set of `p`: everything at or below `p`.
    pub fn principal(parent: &Arc<FinitePoset>, p: usize) -> Self {
        assert!(p < parent.len(), "element out of range");
        let members = parent.elements().filter(|&q| parent.leq(q, p)).collect();
        DownSet {
            parent: Arc::clone(parent),
            members,
        }
    }

    pub fn empty(parent: &Arc<FinitePoset>) -> Self {
        DownSet {
            parent: Arc::clone(parent),
            members: BTreeSet::new(),
        }
    }

    pub fn whole(parent: &Arc<FinitePoset>) -> Self {
        DownSet {
            parent: Arc::clone(parent),
            members: parent.elements().collect(),
        }
    }

    pub fn parent(&self) -> &Arc<FinitePoset> {
        &self.parent
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn member_vec(&self) -> Vec<usize> {
        self.members.iter().copied().collect()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members.contains(&p)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &DownSet) -> bool {
        self.assert_compatible(other);
        self.members.is_subset(&other.members)
    }

    pub fn union(&self, other: &DownSet) -> DownSet {
        self.assert_compatible(other);
        DownSet {
            parent: Arc::clone(&self.parent),
            members: &self.members | &other.members,
        }
    }

    pub fn intersection(&self, other: &DownSet) -> DownSet {
        self.assert_compatible(other);
        DownSet {
            parent: Arc::clone(&self.parent),
            members: &self.members & &other.members,
        }
    }

    /// Display name of the open: member names in index order inside braces.
    pub fn name(&self) -> String {
        let inner: Vec<&str> = self.members.iter().map(|&p| self.parent.name(p)).collect();
        format!("{{{}}}", inner.join(","))
    }

    pub(crate) fn same_parent(&self, other: &DownSet) -> bool {
        same_poset(&self.parent, &other.parent)
    }

    fn assert_compatible(&self, other: &DownSet) {
        assert!(
            self.same_parent(other),
            "down-sets combined across different parent posets"
        );
    }
}

/// The down-set lattice of a poset: all of its opens, ordered by inclusion,
/// together with the decoding from lattice elements back to down-sets.
#[derive(Clone, Debug)]
pub struct DownSetLattice {
    parent: Arc<FinitePoset>,
    poset: Arc<FinitePoset>,
    opens: Vec<DownSet>,
}

impl DownSetLattice {
    /// Enumerates every down-set of `parent` under the default size bound.
    pub fn build(parent: &Arc<FinitePoset>) -> Result<Self> {
        Self::build_bounded(parent, DEFAULT_MAX_LATTICE)
    }

    /// As [`DownSetLattice::build`] with an explicit bound on the number of
    /// down-sets the enumeration may produce.
    pub fn build_bounded(parent: &Arc<FinitePoset>, max_size: u128) -> Result<Self> {
        let n = parent.len();
        let worst = 1u128.checked_shl(n as u32).ok_or(Error::Size {
            needed: u128::MAX,
            bound: max_size,
        })?;
        if worst > max_size || n >= 64 {
            return Err(Error::Size {
                needed: worst,
                bound: max_size,
            });
        }
        let mut predecessor_masks = vec![0u64; n];
        for q in 0..n {
            for p in 0..n {
                if parent.leq(p, q) {
                    predecessor_masks[q] |= 1 << p;
                }
            }
        }
        let mut sets: Vec<u64> = Vec::new();
        for mask in 0..(1u64 << n) {
            let closed = (0..n).all(|q| mask & (1 << q) == 0 || mask & predecessor_masks[q] == predecessor_masks[q]);
            if closed {
                sets.push(mask);
            }
        }
        let mut opens: Vec<DownSet> = sets
            .into_iter()
            .map(|mask| {
                let members = (0..n).filter(|&p| mask & (1 << p) != 0).collect();
                DownSet::unchecked(parent, members)
            })
            .collect();
        opens.sort();
        let names = opens.iter().map(|d| d.name()).collect();
        let mut pairs = Vec::new();
        for (i, a) in opens.iter().enumerate() {
            for (j, b) in opens.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    pairs.push((i, j));
                }
            }
        }
        let poset = FinitePoset::with_names(names, &pairs).expect("inclusion has no cycles");
        Ok(DownSetLattice {
            parent: Arc::clone(parent),
            poset: Arc::new(poset),
            opens,
        })
    }

    pub fn parent(&self) -> &Arc<FinitePoset> {
        &self.parent
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn opens(&self) -> &[DownSet] {
        &self.opens
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    pub fn open(&self, i: usize) -> &DownSet {
        &self.opens[i]
    }

    pub fn index_of(&self, open: &DownSet) -> Option<usize> {
        self.opens.binary_search(open).ok()
    }

    /// The embedding sending each parent element to its principal down-set.
    /// Full by construction: principal down-sets include into one another
    /// exactly when their generators are ordered.
    pub fn iota(&self) -> PosetMap {
        let assignment = self
            .parent
            .elements()
            .map(|p| {
                let principal = DownSet::principal(&self.parent, p);
                self.index_of(&principal)
                    .expect("principal down-sets are enumerated")
            })
            .collect();
        PosetMap {
            source: Arc::clone(&self.parent),
            target: Arc::clone(&self.poset),
            assignment,
        }
    }
}

/// Why a monotone map fails to be cofinal, or the verdict that it is.
/// Failures carry the first witnessing target element in element order,
/// with emptiness reported before disconnection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cofinality {
    Cofinal,
    EmptyComma { target: usize },
    DisconnectedComma { target: usize, components: usize },
}

impl Cofinality {
    pub fn is_cofinal(&self) -> bool {
        matches!(self, Cofinality::Cofinal)
    }
}

/// An order-preserving map between finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetMap {
    source: Arc<FinitePoset>,
    target: Arc<FinitePoset>,
    assignment: Vec<usize>,
}

impl PosetMap {
    /// Validates that `assignment` preserves order.
    pub fn new(
        source: &Arc<FinitePoset>,
        target: &Arc<FinitePoset>,
        assignment: Vec<usize>,
    ) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::IndexOutOfRange {
                index: assignment.len(),
                size: source.len(),
            });
        }
        for &image in &assignment {
            if image >= target.len() {
                return Err(Error::IndexOutOfRange {
                    index: image,
                    size: target.len(),
                });
            }
        }
        for p in source.elements() {
            for q in source.elements() {
                if source.leq(p, q) && !target.leq(assignment[p], assignment[q]) {
                    return Err(Error::NotMonotone { p, q });
                }
            }
        }
        Ok(PosetMap {
            source: Arc::clone(source),
            target: Arc::clone(target),
            assignment,
        })
    }

    pub fn identity(poset: &Arc<FinitePoset>) -> Self {
        PosetMap {
            source: Arc::clone(poset),
            target: Arc::clone(poset),
            assignment: poset.elements().collect(),
        }
    }

    pub fn constant(source: &Arc<FinitePoset>, target: &Arc<FinitePoset>, value: usize) -> Result<Self> {
        if value >= target.len() {
            return Err(Error::IndexOutOfRange {
                index: value,
                size: target.len(),
            });
        }
        Ok(PosetMap {
            source: Arc::clone(source),
            target: Arc::clone(target),
            assignment: vec![value; source.len()],
        })
    }

    /// The collapse of a poset to the one-point poset.
    pub fn to_point(source: &Arc<FinitePoset>) -> Self {
        let point = Arc::new(FinitePoset::point());
        Self::constant(source, &point, 0).expect("the point exists")
    }

    pub fn source(&self) -> &Arc<FinitePoset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinitePoset> {
        &self.target
    }

    pub fn apply(&self, p: usize) -> usize {
        self.assignment[p]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Composition `next` after `self`.
    pub fn then(&self, next: &PosetMap) -> Result<PosetMap> {
        if !same_poset(&self.target, &next.source) {
            return Err(Error::ParentMismatch);
        }
        Ok(PosetMap {
            source: Arc::clone(&self.source),
            target: Arc::clone(&next.target),
            assignment: self.assignment.iter().map(|&p| next.assignment[p]).collect(),
        })
    }

    /// Checks the comma poset over every target element for non-emptiness
    /// and connectedness. A map passes exactly when restricting any diagram
    /// along it preserves the colimit.
    pub fn cofinality(&self) -> Cofinality {
        for b in self.target.elements() {
            let comma = CommaPoset::over(b, self);
            if comma.carrier().is_empty() {
                return Cofinality::EmptyComma { target: b };
            }
            let components = comma.carrier().connected_components().len();
            if components != 1 {
                return Cofinality::DisconnectedComma {
                    target: b,
                    components,
                };
            }
        }
        Cofinality::Cofinal
    }

    pub fn is_cofinal(&self) -> bool {
        self.cofinality().is_cofinal()
    }
}

/// A comma poset of a monotone map at a target element, realized as a full
/// sub-poset of the map's source.
///
/// The projection back into the source is full: two carrier elements are
/// comparable exactly when their witnessing source elements are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommaPoset {
    carrier: Arc<FinitePoset>,
    projection: PosetMap,
}

impl CommaPoset {
    /// Elements of the source whose image lies at or below `b`.
    pub fn under(map: &PosetMap, b: usize) -> Self {
        assert!(b < map.target.len(), "element out of range");
        let members: Vec<usize> = map
            .source
            .elements()
            .filter(|&a| map.target.leq(map.assignment[a], b))
            .collect();
        Self::from_members(map.source(), members)
    }

    /// Elements of the source whose image lies at or above `b`.
    pub fn over(b: usize, map: &PosetMap) -> Self {
        assert!(b < map.target.len(), "element out of range");
        let members: Vec<usize> = map
            .source
            .elements()
            .filter(|&a| map.target.leq(b, map.assignment[a]))
            .collect();
        Self::from_members(map.source(), members)
    }

    /// The full sub-poset of `source` on `members`, packaged with its
    /// inclusion.
    pub fn from_members(source: &Arc<FinitePoset>, members: Vec<usize>) -> Self {
        let carrier = Arc::new(source.induced(&members));
        let projection = PosetMap {
            source: Arc::clone(&carrier),
            target: Arc::clone(source),
            assignment: members,
        };
        CommaPoset {
            carrier,
            projection,
        }
    }

    pub fn carrier(&self) -> &Arc<FinitePoset> {
        &self.carrier
    }

    /// Monotone inclusion of the carrier into the poset the comma was cut
    /// from.
    pub fn projection(&self) -> &PosetMap {
        &self.projection
    }

    /// For each carrier element, the source element witnessing it.
    pub fn witnesses(&self) -> &[usize] {
        self.projection.assignment()
    }

    /// Carrier position of a witness, if present.
    pub fn position_of(&self, witness: usize) -> Option<usize> {
        self.witnesses().binary_search(&witness).ok()
    }
}

/// Every labeled poset on `n` elements, built by filtering all strict
/// relations for antisymmetry and transitivity. Feasible for small `n`
/// only; the count grows as 1, 1, 3, 19, 219, 4231, ...
pub fn enumerate_labeled(n: usize) -> Vec<Arc<FinitePoset>> {
    let strict_pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let bits = strict_pairs.len();
    assert!(bits < 32, "enumeration is only for small posets");
    let mut out = Vec::new();
    'mask: for mask in 0u32..(1 << bits) {
        let has = |p: usize, q: usize| -> bool {
            p == q
                || strict_pairs
                    .iter()
                    .position(|&e| e == (p, q))
                    .is_some_and(|k| mask & (1 << k) != 0)
        };
        for i in 0..n {
            for j in (i + 1)..n {
                if has(i, j) && has(j, i) {
                    continue 'mask;
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if has(i, j) && has(j, k) && !has(i, k) {
                        continue 'mask;
                    }
                }
            }
        }
        let pairs: Vec<(usize, usize)> = strict_pairs
            .iter()
            .enumerate()
            .filter(|&(k, _)| mask & (1 << k) != 0)
            .map(|(_, &e)| e)
            .collect();
        out.push(Arc::new(
            FinitePoset::from_relations(n, &pairs).expect("filtered relations are acyclic"),
        ));
    }
    out
}
