//! Permutation-inversion algebra.

mod automorphism;
mod perm;
mod point_group;
mod procrustes;

pub use automorphism::{automorphism_group, find_isomorphism, DEFAULT_MAX_VERTICES};
pub use perm::{PIOperation, Permutation};
pub use point_group::{point_group, DEFAULT_EPS_D};
pub use procrustes::{procrustes_fit, ProcrustesFit};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geometry::Partition;
use crate::{Error, Result};

/// Largest group the closure routines will build.
pub const MAX_GROUP_ORDER: usize = 1 << 21;

/// How membership of an element in a group was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Realised by a rigid rotation of the embedding.
    Rotation,
    /// Realised by a numerically found path, or a product of such paths.
    Path,
    /// Added only because the group must be closed.
    Closure,
}

/// A finite group of PI operations on `n` spheres, kept in canonical order,
/// with a provenance tag per element.
#[derive(Debug, Clone)]
pub struct PIGroup {
    n: usize,
    elements: BTreeMap<PIOperation, Provenance>,
    // Always generates `elements`; kept short when the group is grown
    // through `extend_closure`.
    gens: Vec<PIOperation>,
}

impl PartialEq for PIGroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.elements == other.elements
    }
}

impl Eq for PIGroup {}

impl PIGroup {
    pub fn trivial(n: usize) -> Self {
        let mut elements = BTreeMap::new();
        elements.insert(PIOperation::identity(n), Provenance::Rotation);
        Self { n, elements, gens: Vec::new() }
    }

    /// Wraps a set of elements, failing with [`Error::NotAGroup`] unless the
    /// set satisfies the group axioms.
    pub fn from_elements(
        n: usize,
        elements: impl IntoIterator<Item = (PIOperation, Provenance)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (op, prov) in elements {
            if op.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: op.len() });
            }
            map.insert(op, prov);
        }
        let g = Self::from_map(n, map);
        if g.check_axioms() {
            Ok(g)
        } else {
            Err(Error::NotAGroup)
        }
    }

    /// `G × C₂` for a permutation group `G`; every element gets `prov`.
    pub fn with_inversions(perms: &[Permutation], prov: Provenance) -> Result<Self> {
        let n = perms.first().map_or(0, Permutation::len);
        Self::from_elements(
            n,
            perms
                .iter()
                .flat_map(|p| [false, true].map(|inv| (PIOperation::new(p.clone(), inv), prov))),
        )
    }

    /// `G × {+1}`.
    pub fn without_inversions(perms: &[Permutation], prov: Provenance) -> Result<Self> {
        let n = perms.first().map_or(0, Permutation::len);
        Self::from_elements(n, perms.iter().map(|p| (PIOperation::new(p.clone(), false), prov)))
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, op: &PIOperation) -> bool {
        self.elements.contains_key(op)
    }

    pub fn provenance(&self, op: &PIOperation) -> Option<Provenance> {
        self.elements.get(op).copied()
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = &PIOperation> {
        self.elements.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PIOperation, Provenance)> {
        self.elements.iter().map(|(k, v)| (k, *v))
    }

    pub fn count(&self, prov: Provenance) -> usize {
        self.elements.values().filter(|&&p| p == prov).count()
    }

    pub fn has_inversion_of_identity(&self) -> bool {
        self.contains(&PIOperation::new(Permutation::identity(self.n), true))
    }

    pub fn set_provenance(&mut self, op: &PIOperation, prov: Provenance) {
        if let Some(p) = self.elements.get_mut(op) {
            *p = prov;
        }
    }

    /// Identity present, closed under composition, inverses present.
    pub fn check_axioms(&self) -> bool {
        if !self.contains(&PIOperation::identity(self.n)) {
            return false;
        }
        let els: Vec<&PIOperation> = self.elements.keys().collect();
        els.iter().all(|a| self.contains(&a.inverse()))
            && els
                .iter()
                .all(|a| els.iter().all(|b| self.contains(&a.compose(b))))
    }

    pub fn is_subset_of(&self, other: &PIGroup) -> bool {
        self.n == other.n && self.elements.keys().all(|k| other.contains(k))
    }

    /// Adds `g` and closes the set again. Elements that are new to the set,
    /// other than `g` itself, are tagged by `tag(element)`; `g` receives
    /// `prov`. Returns the elements that were added.
    pub fn extend_closure(
        &mut self,
        g: PIOperation,
        prov: Provenance,
        mut tag: impl FnMut(&PIOperation) -> Provenance,
    ) -> Result<Vec<PIOperation>> {
        if self.contains(&g) {
            return Ok(Vec::new());
        }
        self.gens.push(g.clone());
        let generators = self.gens.clone();
        self.elements.insert(g.clone(), prov);
        let mut added = vec![g];
        let mut frontier: Vec<PIOperation> = self.elements.keys().cloned().collect();
        while let Some(x) = frontier.pop() {
            for s in &generators {
                let y = x.compose(s);
                if !self.elements.contains_key(&y) {
                    if self.elements.len() >= MAX_GROUP_ORDER {
                        return Err(Error::TooLarge { n: self.elements.len(), max: MAX_GROUP_ORDER });
                    }
                    let p = tag(&y);
                    self.elements.insert(y.clone(), p);
                    added.push(y.clone());
                    frontier.push(y);
                }
            }
        }
        Ok(added)
    }

    /// A small generating set, built greedily in canonical order.
    pub fn generating_set(&self) -> Vec<PIOperation> {
        let mut gens = Vec::new();
        let mut span = PIGroup::trivial(self.n);
        for op in self.elements.keys() {
            if !span.contains(op) {
                span.extend_closure(op.clone(), Provenance::Closure, |_| Provenance::Closure)
                    .expect("subgroup of an existing group");
                gens.push(op.clone());
            }
        }
        gens
    }

    fn from_map(n: usize, elements: BTreeMap<PIOperation, Provenance>) -> Self {
        let gens = elements.keys().filter(|k| !k.is_identity()).cloned().collect();
        Self { n, elements, gens }
    }

    fn filtered(&self, keep: impl Fn(&PIOperation) -> bool) -> PIGroup {
        Self::from_map(
            self.n,
            self.elements
                .iter()
                .filter(|(op, _)| keep(op))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        )
    }

    /// Subgroup of elements whose permutation preserves every class.
    pub fn restrict(&self, part: &Partition) -> PIGroup {
        self.filtered(|op| preserves_partition(&op.perm, part))
    }

    /// Subgroup with δ = +1 only.
    pub fn proper_part(&self) -> PIGroup {
        self.filtered(|op| !op.inverted)
    }

    pub fn notations(&self) -> Vec<String> {
        self.elements.keys().map(PIOperation::to_notation).collect()
    }
}

/// The smallest group containing `elements`. Elements passed in keep their
/// provenance; all others are tagged [`Provenance::Closure`].
pub fn closure(n: usize, elements: impl IntoIterator<Item = (PIOperation, Provenance)>) -> Result<PIGroup> {
    let mut g = PIGroup::trivial(n);
    let given: BTreeMap<PIOperation, Provenance> = elements.into_iter().collect();
    for (op, prov) in &given {
        if op.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: op.len() });
        }
        if op.is_identity() {
            g.set_provenance(op, *prov);
        }
        g.extend_closure(op.clone(), *prov, |x| {
            given.get(x).copied().unwrap_or(Provenance::Closure)
        })?;
    }
    for (op, prov) in &given {
        g.set_provenance(op, *prov);
    }
    Ok(g)
}

/// `P·C_i = C_i` for every class.
pub fn preserves_partition(p: &Permutation, part: &Partition) -> bool {
    p.len() == part.len() && (0..p.len()).all(|i| part.class_of(p.apply(i)) == part.class_of(i))
}

/// Elements of `g` preserving every class of `part`.
pub fn restrict_group(g: &PIGroup, part: &Partition) -> PIGroup {
    g.restrict(part)
}

/// Restricts a permutation list to the partition-preserving ones.
pub fn restrict_permutations(perms: &[Permutation], part: &Partition) -> Vec<Permutation> {
    perms.iter().filter(|p| preserves_partition(p, part)).cloned().collect()
}

/// `Π_i |C_i|!`.
pub fn partition_order(part: &Partition) -> u128 {
    part.classes()
        .iter()
        .map(|c| (1..=c.len() as u128).product::<u128>())
        .product()
}

/// `n = 2·Π_i |C_i|! / σ`.
pub fn counting_number(sigma: u64, part: &Partition) -> Result<u128> {
    divide(2 * partition_order(part), sigma)
}

/// `n = Π_i |C_i|! / |𝒯⁰|` for the inversion-free variant.
pub fn counting_number_without_inversions(sigma0: u64, part: &Partition) -> Result<u128> {
    divide(partition_order(part), sigma0)
}

fn divide(order: u128, sigma: u64) -> Result<u128> {
    if sigma == 0 || !order.is_multiple_of(sigma as u128) {
        return Err(Error::NotDivisible { sigma, order });
    }
    Ok(order / sigma as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn op(s: &str, n: usize) -> PIOperation {
        PIOperation::parse(s, n).unwrap()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(closure(4, []).unwrap().order(), 1);
        let c4 = closure(4, [(op("(1234)", 4), Provenance::Path)]).unwrap();
        assert_eq!(c4.order(), 4);
        assert_eq!(c4.provenance(&op("(1234)", 4)), Some(Provenance::Path));
        assert_eq!(c4.provenance(&op("(13)(24)", 4)), Some(Provenance::Closure));
        assert!(c4.check_axioms());
    }

    #[test]
    fn transposition_and_long_cycle_generate_the_symmetric_group() {
        for n in 2..=6usize {
            let long = Permutation::from_images((0..n).map(|i| (i + 1) % n).collect()).unwrap();
            let g = closure(
                n,
                [
                    (op("(12)", n), Provenance::Path),
                    (PIOperation::new(long, false), Provenance::Path),
                ],
            )
            .unwrap();
            // Oracle: every permutation of n symbols, enumerated directly.
            let all: Vec<PIOperation> = (0..n)
                .permutations(n)
                .map(|img| PIOperation::new(Permutation::from_images(img).unwrap(), false))
                .collect();
            assert_eq!(g.order(), all.len());
            assert!(all.iter().all(|a| g.contains(a)));
        }
    }

    #[test]
    fn from_elements_rejects_non_groups() {
        assert!(matches!(
            PIGroup::from_elements(3, [(op("(123)", 3), Provenance::Rotation)]),
            Err(Error::NotAGroup)
        ));
        let g = PIGroup::from_elements(
            3,
            [(op("E", 3), Provenance::Rotation), (op("(12)*", 3), Provenance::Rotation)],
        )
        .unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn partition_preservation() {
        let part = Partition::parse_labels("1,1,2,2,3,3").unwrap();
        assert!(preserves_partition(&Permutation::identity(6), &part));
        assert!(preserves_partition(&Permutation::parse_cycles("(12)(34)(56)", 6).unwrap(), &part));
        assert!(!preserves_partition(&Permutation::parse_cycles("(13)(24)", 6).unwrap(), &part));
    }

    #[test]
    fn restriction_to_one_class_and_singletons() {
        let n = 4;
        let g = closure(
            n,
            [
                (op("(1234)", n), Provenance::Path),
                (op("(13)", n), Provenance::Path),
                (op("E*", n), Provenance::Path),
            ],
        )
        .unwrap();
        assert_eq!(g.order(), 16);
        assert_eq!(g.restrict(&Partition::one_class(n)), g);
        let s = g.restrict(&Partition::singletons(n));
        assert!(s.elements().all(|e| e.perm.is_identity()));
        assert_eq!(s.order(), 2);
        assert!(s.check_axioms() && s.is_subset_of(&g));
    }

    #[test]
    fn counting_numbers() {
        let one = |n| Partition::one_class(n);
        for n in 3..=10usize {
            let fact: u128 = (1..=n as u128).product();
            assert_eq!(counting_number(4 * n as u64, &one(n)).unwrap(), fact / n as u128 / 2);
            assert_eq!(counting_number(4, &one(n)).unwrap(), fact / 2);
        }
        assert_eq!(counting_number(24, &one(6)).unwrap(), 60);
        assert_eq!(counting_number(1440, &one(6)).unwrap(), 1);
        assert_eq!(counting_number(8, &one(6)).unwrap(), 180);
        let pairs = Partition::parse_labels("1,1,2,2,3,3").unwrap();
        assert_eq!(counting_number(4, &pairs).unwrap(), 4);
        assert!(matches!(counting_number(7, &one(6)), Err(Error::NotDivisible { .. })));
        assert_eq!(counting_number_without_inversions(12, &one(6)).unwrap(), 60);
    }

    #[test]
    fn generating_set_regenerates_the_group() {
        let g = closure(
            5,
            [(op("(12345)", 5), Provenance::Path), (op("(25)(34)*", 5), Provenance::Path)],
        )
        .unwrap();
        // The reflection is tied to the inversion, so the group is dihedral.
        assert_eq!(g.order(), 10);
        let gens = g.generating_set();
        assert!(gens.len() <= 3);
        let h = closure(5, gens.into_iter().map(|e| (e, Provenance::Path))).unwrap();
        assert_eq!(h.order(), 10);
    }
}
