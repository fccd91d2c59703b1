use num_traits::Zero;
use rand::Rng;

use super::nperson::{pure_nash_profiles, NPersonGame};
use super::paths::{shortest_path, ScaledCosts};
use super::{perturb, SpInstance};
use super::bisp::{bisp_check, BispMode};
use crate::error::{Error, Result};
use crate::graph::{
    play, scc_decompose, ComponentKind, GameGraph, Mode, OutcomeKey, Owner, Play, PlayEnd,
    SccDecomposition, StrategySpace,
};
use crate::rational::{int, ExtCost, Rational};

/// Exhaustive normal form of a graph game over every position; `cost`
/// prices each play. The flags mark profiles whose play is terminal.
fn graph_normal_form<F>(g: &GameGraph, players: usize, budget: u128, mut cost: F) -> Result<(NPersonGame, Vec<bool>)>
where
    F: FnMut(&Play) -> Vec<ExtCost>,
{
    let all = vec![true; g.num_vertices()];
    let spaces: Vec<StrategySpace> = (0..players).map(|p| StrategySpace::for_player(g, p, &all)).collect();
    let needed = spaces.iter().fold(1u128, |acc, s| acc.saturating_mul(s.size()));
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let sizes: Vec<usize> = spaces.iter().map(|s| s.size() as usize).collect();
    let total = needed as usize;
    let mut choice = vec![0; g.num_vertices()];
    let mut costs = Vec::with_capacity(total);
    let mut terminal = Vec::with_capacity(total);
    let mut profile = vec![0; players];
    for _ in 0..total {
        for (space, &s) in spaces.iter().zip(&profile) {
            space.apply(s, &mut choice);
        }
        let p = play(g, &choice)?;
        terminal.push(matches!(p.end, PlayEnd::Terminal(_)));
        costs.push(cost(&p));
        for i in (0..players).rev() {
            profile[i] += 1;
            if profile[i] < sizes[i] {
                break;
            }
            profile[i] = 0;
        }
    }
    Ok((NPersonGame::new(sizes, costs)?, terminal))
}

/// n-person game with costs on terminal positions only. Inner outcomes
/// are the cyclic strongly connected components; each has a cost per
/// player, `+∞` unless set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalGame {
    graph: GameGraph,
    dec: SccDecomposition,
    players: usize,
    /// `terminal_costs[i][v]`, meaningful at terminal positions.
    terminal_costs: Vec<Vec<Rational>>,
    /// `inner_costs[i][k]` for the `k`-th entry of `inner_outcomes()`.
    inner_costs: Vec<Vec<ExtCost>>,
}

impl TerminalGame {
    pub fn new(graph: GameGraph, players: usize, terminal_costs: Vec<Vec<Rational>>) -> Result<Self> {
        if players < graph.num_players() {
            return Err(Error::Precondition("more owners than players".into()));
        }
        if terminal_costs.len() != players || terminal_costs.iter().any(|r| r.len() != graph.num_vertices()) {
            return Err(Error::InvalidCosts("one cost per player and position expected".into()));
        }
        let dec = scc_decompose(&graph);
        let inner = dec.kinds.iter().filter(|k| **k == ComponentKind::Cyclic).count();
        Ok(TerminalGame {
            graph,
            dec,
            players,
            terminal_costs,
            inner_costs: vec![vec![ExtCost::Infinite; inner]; players],
        })
    }

    pub fn with_inner_costs(mut self, inner_costs: Vec<Vec<ExtCost>>) -> Result<Self> {
        let k = self.inner_outcomes().len();
        if inner_costs.len() != self.players || inner_costs.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidCosts(format!("{k} inner costs per player expected")));
        }
        self.inner_costs = inner_costs;
        Ok(self)
    }

    pub fn graph(&self) -> &GameGraph {
        &self.graph
    }

    pub fn num_players(&self) -> usize {
        self.players
    }

    /// Cyclic component ids, ascending.
    pub fn inner_outcomes(&self) -> Vec<usize> {
        (0..self.dec.num_components())
            .filter(|&c| self.dec.kinds[c] == ComponentKind::Cyclic)
            .collect()
    }

    pub fn terminal_cost(&self, player: usize, v: usize) -> &Rational {
        &self.terminal_costs[player][v]
    }

    pub fn inner_costs(&self) -> &[Vec<ExtCost>] {
        &self.inner_costs
    }

    fn inner_index(&self, comp: usize) -> usize {
        self.inner_outcomes().binary_search(&comp).expect("cyclic component")
    }

    pub fn outcome_cost(&self, player: usize, key: OutcomeKey) -> ExtCost {
        match key {
            OutcomeKey::Terminal(v) => ExtCost::Finite(self.terminal_costs[player][v].clone()),
            OutcomeKey::Cycle(c) => self.inner_costs[player][self.inner_index(c)].clone(),
            OutcomeKey::Infinite => self.c_cost(player),
        }
    }

    /// Cost of the merged outcome `c`: the worst inner cost.
    pub fn c_cost(&self, player: usize) -> ExtCost {
        self.inner_costs[player].iter().max().cloned().unwrap_or(ExtCost::Infinite)
    }

    fn terminal_costs_of(&self, player: usize) -> impl Iterator<Item = ExtCost> + '_ {
        self.graph.terminals().map(move |v| ExtCost::Finite(self.terminal_costs[player][v].clone()))
    }

    /// (C): every terminal is strictly better than `c` for every player.
    pub fn c_holds(&self) -> bool {
        (0..self.players).all(|i| {
            let c = self.c_cost(i);
            self.terminal_costs_of(i).all(|t| t < c)
        })
    }

    /// (C′): every terminal is strictly better than every inner outcome.
    pub fn cprime_holds(&self) -> bool {
        (0..self.players).all(|i| {
            let best_inner = self.inner_costs[i].iter().min().cloned().unwrap_or(ExtCost::Infinite);
            self.terminal_costs_of(i).all(|t| t < best_inner)
        })
    }

    /// (C22): at least two players each have two terminals worse than `c`.
    pub fn c22_holds(&self) -> bool {
        let count = (0..self.players)
            .filter(|&i| {
                let c = self.c_cost(i);
                self.terminal_costs_of(i).filter(|t| *t > c).count() >= 2
            })
            .count();
        count >= 2
    }

    /// (C′22): at least two players each have two terminals worse than
    /// some inner outcome.
    pub fn cprime22_holds(&self) -> bool {
        let count = (0..self.players)
            .filter(|&i| match self.inner_costs[i].iter().min() {
                Some(best) => self.terminal_costs_of(i).filter(|t| t > best).count() >= 2,
                None => false,
            })
            .count();
        count >= 2
    }

    pub fn normal_form(&self, budget: u128) -> Result<NPersonGame> {
        let (g, _) = graph_normal_form(&self.graph, self.players, budget, |p| {
            let key = OutcomeKey::of(p, &self.dec, Mode::Msdggs);
            (0..self.players).map(|i| self.outcome_cost(i, key)).collect()
        })?;
        Ok(g)
    }

    pub fn nash_profiles(&self, budget: u128) -> Result<Vec<Vec<usize>>> {
        Ok(pure_nash_profiles(&self.normal_form(budget)?))
    }
}

/// Merges every inner outcome into one `c` priced at the worst inner cost.
pub fn merge_inner_outcomes(g: &TerminalGame) -> TerminalGame {
    let merged = (0..g.players)
        .map(|i| vec![g.c_cost(i); g.inner_costs[i].len()])
        .collect();
    TerminalGame { inner_costs: merged, ..g.clone() }
}

/// Random terminal game: `positions` non-terminal positions owned by
/// random players, `terminals` terminals, out-degrees 1..=3, integer
/// terminal costs in `-5..=5` and inner costs in `-5..=5`.
pub fn random_terminal_game<R: Rng>(rng: &mut R, positions: usize, terminals: usize, players: usize) -> TerminalGame {
    assert!(positions >= 1 && players >= 1);
    let n = positions + terminals;
    let mut owners: Vec<Owner> = (0..positions).map(|_| Owner::Player(rng.gen_range(0..players))).collect();
    owners.extend(std::iter::repeat(Owner::Terminal).take(terminals));
    let mut edges = Vec::new();
    for v in 0..positions {
        let d = rng.gen_range(1..=3.min(n - 1));
        let mut targets: Vec<usize> = Vec::new();
        while targets.len() < d {
            let w = rng.gen_range(0..n);
            if w != v && !targets.contains(&w) {
                targets.push(w);
            }
        }
        edges.extend(targets.into_iter().map(|w| (v, w)));
    }
    let graph = GameGraph::new(owners, edges, 0).expect("every position has a move");
    let terminal_costs = (0..players)
        .map(|_| (0..n).map(|v| if v >= positions { int(rng.gen_range(-5..=5)) } else { Rational::zero() }).collect())
        .collect();
    let g = TerminalGame::new(graph, players, terminal_costs).expect("shapes match");
    let k = g.inner_outcomes().len();
    let inner = (0..players)
        .map(|_| (0..k).map(|_| ExtCost::Finite(int(rng.gen_range(-5..=5)))).collect())
        .collect();
    g.with_inner_costs(inner).expect("shapes match")
}

/// NE-free terminal games found among `samples` random draws, each with
/// whether (C′22) holds.
pub fn ne_free_terminal_search<R: Rng>(
    rng: &mut R,
    samples: usize,
    positions: usize,
    players: usize,
    budget: u128,
) -> Result<(usize, Vec<(TerminalGame, bool)>)> {
    let mut checked = 0;
    let mut found = Vec::new();
    for _ in 0..samples {
        let terminals = rng.gen_range(1..=3);
        let g = random_terminal_game(rng, positions, terminals, players);
        match g.nash_profiles(budget) {
            Ok(ne) => {
                checked += 1;
                if ne.is_empty() {
                    let c22 = g.cprime22_holds();
                    found.push((g, c22));
                }
            }
            Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok((checked, found))
}

/// Comparison of an SP game with distinct inner outcomes priced to satisfy
/// (C′) against the same game with every inner outcome merged into `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub inner_outcomes: usize,
    pub terminal_ne_before: Vec<Vec<usize>>,
    pub terminal_ne_after: Vec<Vec<usize>>,
    pub strong_intersects: bool,
}

impl EquivalenceReport {
    /// Terminal NE survive the merge unchanged, and the strong Bi-SP
    /// verdict agrees with their existence.
    pub fn holds(&self) -> bool {
        self.terminal_ne_before == self.terminal_ne_after
            && self.strong_intersects == !self.terminal_ne_after.is_empty()
    }
}

/// Runs the merge check on a two-player SP instance under perturbed costs.
/// Inner outcomes get random costs above every path cost, so (C′) holds.
pub fn bisp_equivalence_check<R: Rng>(inst: &SpInstance, rng: &mut R, budget: u128) -> Result<EquivalenceReport> {
    if inst.num_players() != 2 {
        return Err(Error::Precondition("two players expected".into()));
    }
    let p = perturb(inst);
    let g = inst.graph();
    let dec = scc_decompose(g);
    let inner: Vec<usize> = (0..dec.num_components())
        .filter(|&c| dec.kinds[c] == ComponentKind::Cyclic)
        .collect();
    let inner_costs: Vec<Vec<Rational>> = (0..2)
        .map(|i| {
            let total: Rational = p.costs()[i].iter().sum();
            inner.iter().map(|_| &total + int(rng.gen_range(1..=10))).collect()
        })
        .collect();
    let path_cost = |pl: &Play, i: usize| -> ExtCost {
        match pl.end {
            PlayEnd::Terminal(_) => ExtCost::Finite(pl.edges.iter().map(|&e| &p.costs()[i][e]).sum()),
            PlayEnd::Lasso { .. } => ExtCost::Infinite,
        }
    };
    let (before, terminal) = graph_normal_form(g, 2, budget, |pl| {
        (0..2)
            .map(|i| match pl.end {
                PlayEnd::Lasso { .. } => {
                    let key = OutcomeKey::of(pl, &dec, Mode::Msdggs);
                    let OutcomeKey::Cycle(c) = key else { unreachable!() };
                    let k = inner.binary_search(&c).expect("cyclic");
                    ExtCost::Finite(inner_costs[i][k].clone())
                }
                PlayEnd::Terminal(_) => path_cost(pl, i),
            })
            .collect()
    })?;
    let (after, _) = graph_normal_form(g, 2, budget, |pl| (0..2).map(|i| path_cost(pl, i)).collect())?;
    let keep_terminal = |ne: Vec<Vec<usize>>, game: &NPersonGame| -> Vec<Vec<usize>> {
        ne.into_iter().filter(|q| terminal[game.index(q)]).collect()
    };
    let terminal_ne_before = keep_terminal(pure_nash_profiles(&before), &before);
    let terminal_ne_after = keep_terminal(pure_nash_profiles(&after), &after);
    let strong_intersects = bisp_check(inst, BispMode::Strong, budget)?.intersects();
    // positions with no s-t path in the whole graph cannot occur after normalization
    debug_assert!(shortest_path(inst, &ScaledCosts::new(&inst.costs()[0])?, &vec![None; g.num_vertices()]).is_some());
    Ok(EquivalenceReport {
        inner_outcomes: inner.len(),
        terminal_ne_before,
        terminal_ne_after,
        strong_intersects,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn tiny(costs_a: [i64; 2], costs_b: [i64; 2], inner: Option<[i64; 2]>) -> TerminalGame {
        // 0(A) -> 1(B) | t2 ; 1(B) -> 0 | t3
        let graph = GameGraph::new(
            vec![Owner::ALICE, Owner::BOB, Owner::Terminal, Owner::Terminal],
            vec![(0, 1), (0, 2), (1, 0), (1, 3)],
            0,
        )
        .unwrap();
        let tc = vec![
            vec![int(0), int(0), int(costs_a[0]), int(costs_a[1])],
            vec![int(0), int(0), int(costs_b[0]), int(costs_b[1])],
        ];
        let g = TerminalGame::new(graph, 2, tc).unwrap();
        match inner {
            Some(c) => g
                .with_inner_costs(vec![vec![ExtCost::Finite(int(c[0]))], vec![ExtCost::Finite(int(c[1]))]])
                .unwrap(),
            None => g,
        }
    }

    #[test]
    fn negative_terminals_satisfy_c() {
        let g = tiny([-1, -2], [-3, -1], None);
        assert!(g.c_holds());
        assert!(g.cprime_holds());
        assert!(!g.c22_holds());
    }

    #[test]
    fn catch_22_counting() {
        // only Alice has terminals worse than c
        let g = tiny([5, 6], [-1, -1], Some([0, 0]));
        assert!(!g.c_holds());
        assert!(!g.c22_holds());
        let g = tiny([5, 6], [3, 4], Some([0, 0]));
        assert!(g.c22_holds());
        assert!(g.cprime22_holds());
    }

    #[test]
    fn two_player_terminal_games_have_equilibria() {
        let mut rng = stream(6, 1);
        for _ in 0..200 {
            let g = random_terminal_game(&mut rng, 4, 2, 2);
            assert!(!g.nash_profiles(1 << 16).unwrap().is_empty());
        }
    }

    #[test]
    fn merging_under_cprime_keeps_terminal_equilibria() {
        let mut rng = stream(6, 2);
        let mut tested = 0;
        while tested < 100 {
            let g = random_terminal_game(&mut rng, 4, 2, 3);
            if !g.cprime_holds() {
                continue;
            }
            tested += 1;
            let merged = merge_inner_outcomes(&g);
            assert!(merged.c_holds());
            let before = g.nash_profiles(1 << 16).unwrap();
            let after = merged.nash_profiles(1 << 16).unwrap();
            for ne in before.iter().filter(|q| is_terminal_profile(&g, q)) {
                assert!(after.contains(ne));
            }
        }
    }

    fn is_terminal_profile(g: &TerminalGame, profile: &[usize]) -> bool {
        let all = vec![true; g.graph.num_vertices()];
        let mut choice = vec![0; g.graph.num_vertices()];
        for (p, &s) in profile.iter().enumerate() {
            StrategySpace::for_player(&g.graph, p, &all).apply(s, &mut choice);
        }
        matches!(play(&g.graph, &choice).unwrap().end, PlayEnd::Terminal(_))
    }

    #[test]
    fn sp_merge_equivalence() {
        let mut rng = stream(6, 3);
        for round in 0..100 {
            let inst = crate::sp::random_bipartite(&mut rng, 2 + round % 4, 0.5);
            let inst = inst.with_costs(crate::sp::random_costs(&mut rng, 2, inst.num_edges())).unwrap();
            let r = bisp_equivalence_check(&inst, &mut rng, 1 << 16).unwrap();
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn symmetric_graphs_have_one_inner_outcome() {
        let mut rng = stream(6, 4);
        for _ in 0..100 {
            let inst = crate::sp::random_symmetric(&mut rng, 4, 2);
            let inst = inst.with_costs(crate::sp::random_costs(&mut rng, 2, inst.num_edges())).unwrap();
            if inst.num_players() != 2 {
                continue;
            }
            let r = bisp_equivalence_check(&inst, &mut rng, 1 << 16).unwrap();
            assert!(r.inner_outcomes <= 1);
            assert!(r.holds());
        }
    }
}
