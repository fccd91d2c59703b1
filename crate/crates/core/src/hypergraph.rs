//! Multi-hypergraphs over a finite ground set and their duality.

use crate::error::{Error, Result};
use crate::forms::OutcomeSet;

/// Largest ground set the subset-enumeration route will accept.
pub const ENUMERATION_LIMIT: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    ground_size: usize,
    edges: Vec<OutcomeSet>,
}

impl Hypergraph {
    pub fn new(ground_size: usize, edges: Vec<OutcomeSet>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.count_ones(..) == 0 {
                return Err(Error::Precondition(format!("edge {i} is empty")));
            }
            if e.ones().any(|v| v >= ground_size) {
                return Err(Error::Precondition(format!(
                    "edge {i} leaves the ground set 0..{ground_size}"
                )));
            }
        }
        let edges = edges
            .into_iter()
            .map(|mut e| {
                e.grow(ground_size);
                e
            })
            .collect();
        Ok(Hypergraph { ground_size, edges })
    }

    pub fn from_lists(ground_size: usize, edges: &[&[usize]]) -> Result<Self> {
        let sets = edges
            .iter()
            .map(|e| {
                let mut s = OutcomeSet::with_capacity(ground_size);
                for &v in e.iter() {
                    if v >= ground_size {
                        return Err(Error::Precondition(format!(
                            "vertex {v} outside ground set 0..{ground_size}"
                        )));
                    }
                    s.insert(v);
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ground_size, sets)
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn edges(&self) -> &[OutcomeSet] {
        &self.edges
    }

    /// Distinct inclusion-minimal edges, sorted.
    pub fn minimal_edges(&self) -> Vec<OutcomeSet> {
        minimize(self.edges.clone())
    }

    pub fn is_transversal(&self, set: &OutcomeSet) -> bool {
        self.edges.iter().all(|e| !e.is_disjoint(set))
    }

    pub fn contains_edge_within(&self, set: &OutcomeSet) -> bool {
        self.edges.iter().any(|e| e.is_subset(set))
    }

    /// Inclusion-minimal transversals by sequential edge multiplication.
    pub fn minimal_transversals(&self) -> Vec<OutcomeSet> {
        let mut partial = vec![OutcomeSet::with_capacity(self.ground_size)];
        for edge in self.minimal_edges() {
            let mut next = Vec::with_capacity(partial.len());
            for t in partial {
                if !t.is_disjoint(&edge) {
                    next.push(t);
                    continue;
                }
                for v in edge.ones() {
                    let mut grown = t.clone();
                    grown.insert(v);
                    next.push(grown);
                }
            }
            partial = minimize(next);
        }
        partial
    }

    fn pairwise_intersecting(&self, other: &Hypergraph) -> bool {
        self.edges
            .iter()
            .all(|a| other.edges.iter().all(|b| !a.is_disjoint(b)))
    }

    /// Duality by enumerating every subset of the ground set.
    pub fn is_dual_by_enumeration(&self, other: &Hypergraph) -> Result<bool> {
        self.check_ground(other)?;
        if self.ground_size > ENUMERATION_LIMIT {
            return Err(Error::BudgetExceeded {
                needed: 1u128 << self.ground_size,
                budget: 1u128 << ENUMERATION_LIMIT,
            });
        }
        if !self.pairwise_intersecting(other) {
            return Ok(false);
        }
        let n = self.ground_size;
        let mut subset = OutcomeSet::with_capacity(n);
        for mask in 0u64..(1u64 << n) {
            subset.clear();
            for v in 0..n {
                if mask >> v & 1 == 1 {
                    subset.insert(v);
                }
            }
            if other.is_transversal(&subset) && !self.contains_edge_within(&subset) {
                return Ok(false);
            }
            if self.is_transversal(&subset) && !other.contains_edge_within(&subset) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Duality via minimal transversals: `Tr(B) = min(A)` and `Tr(A) = min(B)`.
    pub fn is_dual_by_transversals(&self, other: &Hypergraph) -> Result<bool> {
        self.check_ground(other)?;
        if !self.pairwise_intersecting(other) {
            return Ok(false);
        }
        Ok(other.minimal_transversals() == self.minimal_edges()
            && self.minimal_transversals() == other.minimal_edges())
    }

    /// Uses enumeration when the ground set is small, transversals otherwise.
    pub fn is_dual(&self, other: &Hypergraph) -> Result<bool> {
        if self.ground_size <= 12 {
            self.is_dual_by_enumeration(other)
        } else {
            self.is_dual_by_transversals(other)
        }
    }

    fn check_ground(&self, other: &Hypergraph) -> Result<()> {
        if self.ground_size != other.ground_size {
            return Err(Error::GroundSetMismatch(self.ground_size, other.ground_size));
        }
        Ok(())
    }
}

/// Keeps distinct inclusion-minimal sets, sorted for canonical comparison.
pub(crate) fn minimize(mut sets: Vec<OutcomeSet>) -> Vec<OutcomeSet> {
    sets.sort_by_key(|s| s.count_ones(..));
    let mut kept: Vec<OutcomeSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g1_hypergraphs_are_dual() {
        let a = Hypergraph::from_lists(3, &[&[0], &[1, 2]]).unwrap();
        let b = Hypergraph::from_lists(3, &[&[0, 1], &[0, 2]]).unwrap();
        assert!(a.is_dual_by_enumeration(&b).unwrap());
        assert!(a.is_dual_by_transversals(&b).unwrap());
    }

    #[test]
    fn self_pair_is_not_dual() {
        let a = Hypergraph::from_lists(2, &[&[0, 1]]).unwrap();
        assert!(!a.is_dual_by_enumeration(&a).unwrap());
        assert!(!a.is_dual_by_transversals(&a).unwrap());
        assert_eq!(a.minimal_transversals().len(), 2);
    }

    #[test]
    fn singleton_is_self_dual() {
        let a = Hypergraph::from_lists(1, &[&[0]]).unwrap();
        assert!(a.is_dual_by_enumeration(&a).unwrap());
        assert!(a.is_dual_by_transversals(&a).unwrap());
    }

    #[test]
    fn mismatched_ground_sets() {
        let a = Hypergraph::from_lists(1, &[&[0]]).unwrap();
        let b = Hypergraph::from_lists(2, &[&[0]]).unwrap();
        assert_eq!(a.is_dual(&b), Err(Error::GroundSetMismatch(1, 2)));
    }

    #[test]
    fn transversals_of_a_triangle() {
        let h = Hypergraph::from_lists(3, &[&[0, 1], &[1, 2], &[0, 2]]).unwrap();
        let tr = h.minimal_transversals();
        assert_eq!(tr.len(), 3);
        assert!(tr.iter().all(|t| t.count_ones(..) == 2));
        // The triangle is self-dual.
        assert!(h.is_dual_by_transversals(&h).unwrap());
        assert!(h.is_dual_by_enumeration(&h).unwrap());
    }

    #[test]
    fn empty_edge_rejected() {
        assert!(Hypergraph::new(2, vec![OutcomeSet::with_capacity(2)]).is_err());
    }
}
