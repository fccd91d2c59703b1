//! Tightness of game forms through response strategies and hypergraph duality.

use std::collections::HashMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{GameForm, OutcomeSet};
use crate::hypergraph::Hypergraph;
use crate::rational::Rational;

/// Default cap on `|Y|^|X| + |X|^|Y|` response strategies.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Bob's `φ : X → Y`.
    BobResponse,
    /// Alice's `ψ : Y → X`.
    AliceResponse,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResponseStrategy {
    pub direction: Direction,
    pub map: Vec<usize>,
}

impl ResponseStrategy {
    pub fn bob(map: Vec<usize>) -> Self {
        ResponseStrategy {
            direction: Direction::BobResponse,
            map,
        }
    }

    pub fn alice(map: Vec<usize>) -> Self {
        ResponseStrategy {
            direction: Direction::AliceResponse,
            map,
        }
    }

    /// Checks lengths and ranges against `g`.
    pub fn validate(&self, g: &GameForm) -> Result<()> {
        let (len, range) = match self.direction {
            Direction::BobResponse => (g.rows(), g.cols()),
            Direction::AliceResponse => (g.cols(), g.rows()),
        };
        if self.map.len() != len {
            return Err(Error::InvalidWitness(format!(
                "response map has length {}, expected {len}",
                self.map.len()
            )));
        }
        if let Some(&bad) = self.map.iter().find(|&&t| t >= range) {
            return Err(Error::InvalidWitness(format!("target {bad} out of range {range}")));
        }
        Ok(())
    }

    /// `g(gr(·))`: outcomes on the graph of the mapping.
    pub fn image(&self, g: &GameForm) -> OutcomeSet {
        let mut s = OutcomeSet::with_capacity(g.num_outcomes());
        for (i, &t) in self.map.iter().enumerate() {
            let o = match self.direction {
                Direction::BobResponse => g.get(i, t),
                Direction::AliceResponse => g.get(t, i),
            };
            s.insert(o);
        }
        s
    }
}

/// A pair of responses whose graph images are disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightnessWitness {
    pub phi: ResponseStrategy,
    pub psi: ResponseStrategy,
}

impl TightnessWitness {
    /// Independent re-check of validity and disjointness.
    pub fn is_valid_for(&self, g: &GameForm) -> bool {
        self.phi.direction == Direction::BobResponse
            && self.psi.direction == Direction::AliceResponse
            && self.phi.validate(g).is_ok()
            && self.psi.validate(g).is_ok()
            && self.phi.image(g).is_disjoint(&self.psi.image(g))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Tight,
    NotTight(TightnessWitness),
}

impl Verdict {
    pub fn is_tight(&self) -> bool {
        matches!(self, Verdict::Tight)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "j")]
    J,
    #[serde(rename = "jjA")]
    JjA,
    #[serde(rename = "jjB")]
    JjB,
    #[serde(rename = "dual")]
    Dual,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::J, Method::JjA, Method::JjB, Method::Dual];

    pub fn name(self) -> &'static str {
        match self {
            Method::J => "j",
            Method::JjA => "jjA",
            Method::JjB => "jjB",
            Method::Dual => "dual",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "j" => Ok(Method::J),
            "jjA" | "jja" => Ok(Method::JjA),
            "jjB" | "jjb" => Ok(Method::JjB),
            "dual" => Ok(Method::Dual),
            other => Err(format!("unknown tightness method `{other}`")),
        }
    }
}

fn response_count(targets: usize, domain: usize) -> u128 {
    (targets as u128).saturating_pow(domain as u32)
}

fn check_budget(g: &GameForm, budget: u128) -> Result<()> {
    let needed = response_count(g.cols(), g.rows()).saturating_add(response_count(g.rows(), g.cols()));
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// Calls `f` on every map `0..domain → 0..targets` in lexicographic order.
pub(crate) fn for_each_map(domain: usize, targets: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut map = vec![0usize; domain];
    loop {
        if !f(&map) {
            return;
        }
        let mut i = domain;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            map[i] += 1;
            if map[i] < targets {
                break;
            }
            map[i] = 0;
        }
    }
}

/// Distinct inclusion-minimal graph images of all responses on one side,
/// each with the first map (lexicographically) realizing it.
fn minimal_images(g: &GameForm, direction: Direction) -> Vec<(OutcomeSet, Vec<usize>)> {
    let (domain, targets) = match direction {
        Direction::BobResponse => (g.rows(), g.cols()),
        Direction::AliceResponse => (g.cols(), g.rows()),
    };
    let mut seen: HashMap<OutcomeSet, Vec<usize>> = HashMap::new();
    for_each_map(domain, targets, |map| {
        let r = ResponseStrategy {
            direction,
            map: map.to_vec(),
        };
        seen.entry(r.image(g)).or_insert(r.map);
        true
    });
    let mut images: Vec<_> = seen.into_iter().collect();
    images.sort_by(|a, b| a.0.count_ones(..).cmp(&b.0.count_ones(..)).then(a.0.cmp(&b.0)));
    let mut kept: Vec<(OutcomeSet, Vec<usize>)> = Vec::new();
    for (img, map) in images {
        if !kept.iter().any(|(k, _)| k.is_subset(&img)) {
            kept.push((img, map));
        }
    }
    kept
}

/// Property (j): every pair of response graphs shares an outcome.
pub fn is_tight_j(g: &GameForm, budget: u128) -> Result<Verdict> {
    check_budget(g, budget)?;
    let phis = minimal_images(g, Direction::BobResponse);
    let psis = minimal_images(g, Direction::AliceResponse);
    for (pi, pmap) in &phis {
        for (qi, qmap) in &psis {
            if pi.is_disjoint(qi) {
                return Ok(Verdict::NotTight(TightnessWitness {
                    phi: ResponseStrategy::bob(pmap.clone()),
                    psi: ResponseStrategy::alice(qmap.clone()),
                }));
            }
        }
    }
    Ok(Verdict::Tight)
}

/// Property (jjA): every `φ` has a column whose support lies inside `g(gr(φ))`.
pub fn is_tight_jja(g: &GameForm, budget: u128) -> Result<bool> {
    check_budget(g, budget)?;
    let (_, cols) = g.supports();
    Ok(minimal_images(g, Direction::BobResponse)
        .iter()
        .all(|(img, _)| cols.iter().any(|c| c.is_subset(img))))
}

/// Property (jjB): every `ψ` has a row whose support lies inside `g(gr(ψ))`.
pub fn is_tight_jjb(g: &GameForm, budget: u128) -> Result<bool> {
    check_budget(g, budget)?;
    let (rows, _) = g.supports();
    Ok(minimal_images(g, Direction::AliceResponse)
        .iter()
        .all(|(img, _)| rows.iter().any(|r| r.is_subset(img))))
}

/// Row-support hypergraph `A(g)` and column-support hypergraph `B(g)`.
pub fn build_hypergraphs(g: &GameForm) -> (Hypergraph, Hypergraph) {
    let (rows, cols) = g.supports();
    let n = g.num_outcomes();
    (
        Hypergraph::new(n, rows).expect("row supports are nonempty"),
        Hypergraph::new(n, cols).expect("column supports are nonempty"),
    )
}

/// Property (jjj) on the support hypergraphs.
pub fn is_tight_dual(g: &GameForm) -> Result<bool> {
    let (a, b) = build_hypergraphs(g);
    a.is_dual(&b)
}

/// Non-tightness witness recovered from the hypergraphs: a minimal
/// transversal of `B(g)` containing no row support yields `ψ`, and the
/// complement of that transversal yields `φ`.
pub fn witness_from_duality(g: &GameForm) -> Option<TightnessWitness> {
    let (a, b) = build_hypergraphs(g);
    for t in b.minimal_transversals() {
        if a.contains_edge_within(&t) {
            continue;
        }
        // Every row meets the complement of t; every column meets t.
        let mut complement = t.clone();
        complement.toggle_range(..);
        let phi: Vec<usize> = (0..g.rows())
            .map(|x| {
                (0..g.cols())
                    .find(|&y| complement.contains(g.get(x, y)))
                    .expect("row support not inside transversal")
            })
            .collect();
        let psi: Vec<usize> = (0..g.cols())
            .map(|y| {
                (0..g.rows())
                    .find(|&x| t.contains(g.get(x, y)))
                    .expect("transversal meets every column")
            })
            .collect();
        return Some(TightnessWitness {
            phi: ResponseStrategy::bob(phi),
            psi: ResponseStrategy::alice(psi),
        });
    }
    None
}

/// Dispatches on `method`. Only (j) and the duality route return witnesses.
pub fn is_tight(g: &GameForm, method: Method, budget: u128) -> Result<Verdict> {
    let tight = match method {
        Method::J => return is_tight_j(g, budget),
        Method::JjA => is_tight_jja(g, budget)?,
        Method::JjB => is_tight_jjb(g, budget)?,
        Method::Dual => {
            return Ok(match witness_from_duality(g) {
                Some(w) => Verdict::NotTight(w),
                None => {
                    debug_assert!(is_tight_dual(g).unwrap_or(true));
                    Verdict::Tight
                }
            })
        }
    };
    if tight {
        return Ok(Verdict::Tight);
    }
    // Recover a witness from the dual route for uniform output.
    Ok(Verdict::NotTight(
        witness_from_duality(g).expect("non-tight form admits a dual witness"),
    ))
}

/// Zero-sum ±1 reward with no saddle point: −1 on `g(gr(φ))`, +1 elsewhere
/// (in particular on `g(gr(ψ))`). Alice maximizes it.
pub fn winlose_from_witness(g: &GameForm, w: &TightnessWitness) -> Result<Vec<Rational>> {
    w.phi.validate(g)?;
    w.psi.validate(g)?;
    if !w.is_valid_for(g) {
        return Err(Error::InvalidWitness("response images intersect".into()));
    }
    let bob = w.phi.image(g);
    Ok((0..g.num_outcomes())
        .map(|o| {
            if bob.contains(o) {
                -Rational::one()
            } else {
                Rational::one()
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::corpus::*;
    use crate::rational::int;

    #[test]
    fn golden_verdicts_all_methods() {
        for (i, g) in golden().iter().enumerate() {
            let want = i < 6;
            assert_eq!(is_tight_j(g, DEFAULT_BUDGET).unwrap().is_tight(), want, "g{}", i + 1);
            assert_eq!(is_tight_jja(g, DEFAULT_BUDGET).unwrap(), want);
            assert_eq!(is_tight_jjb(g, DEFAULT_BUDGET).unwrap(), want);
            assert_eq!(is_tight_dual(g).unwrap(), want);
            let (a, b) = build_hypergraphs(g);
            assert_eq!(a.is_dual_by_transversals(&b).unwrap(), want);
        }
    }

    #[test]
    fn g7_witness_by_enumeration() {
        // Oracle: the 4 × 4 pairs of g7, scanned directly.
        let g = g7();
        let mut disjoint = Vec::new();
        for_each_map(2, 2, |phi| {
            for_each_map(2, 2, |psi| {
                let w = TightnessWitness {
                    phi: ResponseStrategy::bob(phi.to_vec()),
                    psi: ResponseStrategy::alice(psi.to_vec()),
                };
                if w.is_valid_for(&g) {
                    disjoint.push(w);
                }
                true
            });
            true
        });
        let expected = TightnessWitness {
            phi: ResponseStrategy::bob(vec![1, 0]),
            psi: ResponseStrategy::alice(vec![0, 1]),
        };
        assert!(disjoint.contains(&expected));
        match is_tight_j(&g, DEFAULT_BUDGET).unwrap() {
            Verdict::NotTight(w) => {
                assert!(disjoint.contains(&w));
                assert_eq!(w.phi.image(&g).count_ones(..), 1);
                assert_eq!(w.psi.image(&g).count_ones(..), 1);
            }
            Verdict::Tight => panic!("g7 is not tight"),
        }
    }

    #[test]
    fn trivial_and_constant_forms_are_tight() {
        let one = GameForm::new(vec![vec![0]]).unwrap();
        assert!(is_tight_j(&one, DEFAULT_BUDGET).unwrap().is_tight());
        let constant = GameForm::new(vec![vec![0; 3]; 2]).unwrap();
        assert!(is_tight_jja(&constant, DEFAULT_BUDGET).unwrap());
        assert!(is_tight_jjb(&constant, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn hypergraphs_of_g1_and_g7() {
        let (a, b) = build_hypergraphs(&g1());
        let lists = |h: &Hypergraph| {
            h.edges()
                .iter()
                .map(|e| e.ones().collect::<Vec<_>>())
                .collect::<Vec<_>>()
        };
        assert_eq!(lists(&a), vec![vec![0], vec![1, 2]]);
        assert_eq!(lists(&b), vec![vec![0, 1], vec![0, 2]]);
        let (a, b) = build_hypergraphs(&g7());
        assert_eq!(lists(&a), vec![vec![0, 1], vec![0, 1]]);
        assert_eq!(a, b);
    }

    #[test]
    fn witness_reward_for_g7() {
        let g = g7();
        let w = TightnessWitness {
            phi: ResponseStrategy::bob(vec![1, 0]),
            psi: ResponseStrategy::alice(vec![0, 1]),
        };
        assert_eq!(winlose_from_witness(&g, &w).unwrap(), vec![int(1), int(-1)]);
        let bad = TightnessWitness {
            phi: ResponseStrategy::bob(vec![0, 0]),
            psi: ResponseStrategy::alice(vec![0, 1]),
        };
        assert!(winlose_from_witness(&g, &bad).is_err());
    }

    #[test]
    fn dual_witnesses_are_valid() {
        for g in [g7(), g8(), g9()] {
            let w = witness_from_duality(&g).unwrap();
            assert!(w.is_valid_for(&g));
        }
        assert!(witness_from_duality(&g5()).is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let g = GameForm::new(vec![(0..6).collect(); 6]).unwrap();
        assert!(matches!(is_tight_j(&g, 1000), Err(Error::BudgetExceeded { .. })));
        assert!(is_tight_dual(&g).is_ok());
    }
}
