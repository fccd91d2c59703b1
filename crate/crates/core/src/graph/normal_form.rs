use serde::{Deserialize, Serialize};

use super::play::{play, Play, PlayEnd, StrategySpace};
use super::scc::SccDecomposition;
use super::{GameGraph, Owner, ALICE, BOB};
use crate::error::{Error, Result};
use crate::forms::GameForm;

/// How infinite plays are scored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Each cyclic SCC is its own outcome.
    Msdggs,
    /// All infinite plays share the single outcome `c`.
    Dggs,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "msdggs" => Ok(Mode::Msdggs),
            "dggs" => Ok(Mode::Dggs),
            _ => Err(Error::Precondition(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OutcomeKey {
    Terminal(usize),
    /// Cyclic component by id.
    Cycle(usize),
    /// The merged infinite outcome `c`.
    Infinite,
}

impl OutcomeKey {
    pub fn of(p: &Play, dec: &SccDecomposition, mode: Mode) -> OutcomeKey {
        match (p.end.clone(), mode) {
            (PlayEnd::Terminal(v), _) => OutcomeKey::Terminal(v),
            (PlayEnd::Lasso { .. }, Mode::Dggs) => OutcomeKey::Infinite,
            (PlayEnd::Lasso { cycle_start }, Mode::Msdggs) => {
                OutcomeKey::Cycle(dec.component_of[p.path[cycle_start]])
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            OutcomeKey::Terminal(v) => format!("t{v}"),
            OutcomeKey::Cycle(c) => format!("C{c}"),
            OutcomeKey::Infinite => "c".to_string(),
        }
    }
}

/// Normal form of a two-player graph game. Only positions reachable from
/// the initial one carry strategy coordinates, and the outcome set is
/// restricted to outcomes some play actually reaches, sorted by key.
#[derive(Clone, Debug)]
pub struct GraphNormalForm {
    pub form: GameForm,
    pub outcomes: Vec<OutcomeKey>,
    pub alice: StrategySpace,
    pub bob: StrategySpace,
    pub mode: Mode,
}

impl GraphNormalForm {
    /// Full profile for the situation `(x, y)`.
    pub fn profile(&self, g: &GameGraph, x: usize, y: usize) -> Vec<usize> {
        let mut choice = vec![0; g.num_vertices()];
        self.alice.apply(x, &mut choice);
        self.bob.apply(y, &mut choice);
        choice
    }

    pub fn play(&self, g: &GameGraph, x: usize, y: usize) -> Play {
        play(g, &self.profile(g, x, y)).expect("profile built from the strategy spaces")
    }

    pub fn outcome_index(&self, key: OutcomeKey) -> Option<usize> {
        self.outcomes.binary_search(&key).ok()
    }
}

pub fn normal_form(
    g: &GameGraph,
    dec: &SccDecomposition,
    mode: Mode,
    budget: u128,
) -> Result<GraphNormalForm> {
    if g.owners().iter().any(|o| matches!(o, Owner::Player(p) if *p > BOB)) {
        return Err(Error::InvalidGraph("normal form needs a two-player graph".into()));
    }
    let reach = g.reachable_from(g.start());
    let alice = StrategySpace::for_player(g, ALICE, &reach);
    let bob = StrategySpace::for_player(g, BOB, &reach);
    let needed = alice.size().saturating_mul(bob.size());
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let (rows, cols) = (alice.size() as usize, bob.size() as usize);
    let mut keys = Vec::with_capacity(rows * cols);
    let mut choice = vec![0; g.num_vertices()];
    for x in 0..rows {
        alice.apply(x, &mut choice);
        for y in 0..cols {
            bob.apply(y, &mut choice);
            let p = play(g, &choice)?;
            keys.push(OutcomeKey::of(&p, dec, mode));
        }
    }
    let mut outcomes = keys.clone();
    outcomes.sort_unstable();
    outcomes.dedup();
    let table = keys
        .iter()
        .map(|k| outcomes.binary_search(k).expect("key collected"))
        .collect();
    let labels = outcomes.iter().map(OutcomeKey::label).collect();
    let form = GameForm::from_flat(rows, cols, outcomes.len(), table)?.with_labels(labels)?;
    Ok(GraphNormalForm {
        form,
        outcomes,
        alice,
        bob,
        mode,
    })
}

/// Merges outcomes of `g` by class id; see [`GameForm::relabel`].
pub fn merge_outcomes(g: &GameForm, class: &[usize]) -> Result<GameForm> {
    g.relabel(class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::corpus;
    use crate::graph::{random_graph, scc_decompose};
    use crate::tightness::{is_tight, Method, DEFAULT_BUDGET};

    #[test]
    fn single_alice_vertex() {
        let g = GameGraph::new(
            vec![Owner::ALICE, Owner::Terminal, Owner::Terminal],
            vec![(0, 1), (0, 2)],
            0,
        )
        .unwrap();
        let nf = normal_form(&g, &scc_decompose(&g), Mode::Msdggs, 1000).unwrap();
        assert_eq!((nf.form.rows(), nf.form.cols()), (2, 1));
        assert_eq!(nf.outcomes, vec![OutcomeKey::Terminal(1), OutcomeKey::Terminal(2)]);
    }

    #[test]
    fn budget_is_enforced() {
        let g = GameGraph::new(
            vec![Owner::ALICE, Owner::Terminal, Owner::Terminal],
            vec![(0, 1), (0, 2)],
            0,
        )
        .unwrap();
        assert!(matches!(
            normal_form(&g, &scc_decompose(&g), Mode::Msdggs, 1),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn extracted_forms_are_tight_and_dggs_is_a_merge() {
        let mut rng = crate::rng::stream(3, 2);
        let mut checked = 0;
        while checked < 150 {
            let n = 2 + checked % 6;
            let g = random_graph(&mut rng, n, 3, 0.3);
            let dec = scc_decompose(&g);
            let Ok(ms) = normal_form(&g, &dec, Mode::Msdggs, 4096) else {
                continue;
            };
            let dg = normal_form(&g, &dec, Mode::Dggs, 4096).unwrap();
            assert!(is_tight(&ms.form, Method::Dual, DEFAULT_BUDGET).unwrap().is_tight());
            assert!(is_tight(&dg.form, Method::Dual, DEFAULT_BUDGET).unwrap().is_tight());
            let class: Vec<usize> = ms
                .outcomes
                .iter()
                .map(|k| {
                    let merged = match k {
                        OutcomeKey::Cycle(_) => OutcomeKey::Infinite,
                        other => *other,
                    };
                    dg.outcome_index(merged).unwrap()
                })
                .collect();
            let merged = merge_outcomes(&ms.form, &class).unwrap();
            assert_eq!(merged.cells(), dg.form.cells());
            checked += 1;
        }
    }

    #[test]
    fn merging_examples() {
        let g2 = corpus::g2();
        let all = merge_outcomes(&g2, &vec![0; g2.num_outcomes()]).unwrap();
        assert_eq!(all.num_outcomes(), 1);
        let identity: Vec<usize> = (0..g2.num_outcomes()).collect();
        assert_eq!(merge_outcomes(&g2, &identity).unwrap().cells(), g2.cells());
        let mut class = identity.clone();
        class[1] = 0;
        let m = merge_outcomes(&g2, &class).unwrap();
        assert!(is_tight(&m, Method::Dual, DEFAULT_BUDGET).unwrap().is_tight());
    }
}
