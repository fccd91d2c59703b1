//! Shortest-path games: instance normalization, plays with additive
//! positive costs, SP game forms, the Bi-SP check and n-person variants.

mod bisp;
mod generate;
mod nperson;
mod paths;
mod terminal;

pub use bisp::{
    bisp_check, bisp_search, strong_bridge_holds, verify_counterexample, weak_bridge_holds,
    BispCounterexample, BispMode, BispReport, BispResult, Family, SearchConfig,
};
pub use generate::{exhaustive_bipartite, random_bipartite, random_costs, random_symmetric};
pub use nperson::{pure_nash_profiles, sp_game_ne, sp_normal_form, NPersonGame};
pub use paths::{bellman_ford_path, shortest_path, ScaledCosts};
pub use terminal::{
    bisp_equivalence_check, merge_inner_outcomes, ne_free_terminal_search, random_terminal_game,
    EquivalenceReport, TerminalGame,
};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::forms::GameForm;
use crate::graph::{play, GameGraph, Owner, PlayEnd, StrategySpace};
use crate::rational::{common_denominator, ExtCost, Rational};
use crate::vplus::VPlusForm;

/// Unnormalized input: any digraph with owners, a source and a target.
/// `costs[i][e]` is player `i`'s local cost of edge `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawInstance {
    pub owners: Vec<Owner>,
    pub edges: Vec<(usize, usize)>,
    pub s: usize,
    pub t: usize,
    pub costs: Vec<Vec<Rational>>,
}

/// Normalized shortest-path instance: the single terminal `t` is the only
/// dead end, every edge lies on an `s → t` walk, costs are positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpInstance {
    graph: GameGraph,
    t: usize,
    costs: Vec<Vec<Rational>>,
}

impl SpInstance {
    pub fn new(owners: Vec<Owner>, edges: Vec<(usize, usize)>, s: usize, t: usize, costs: Vec<Vec<Rational>>) -> Result<Self> {
        if s == t {
            return Err(Error::InvalidGraph("source equals target".into()));
        }
        if owners.get(t) != Some(&Owner::Terminal) {
            return Err(Error::InvalidGraph("target must be the terminal position".into()));
        }
        if owners.iter().filter(|o| **o == Owner::Terminal).count() != 1 {
            return Err(Error::InvalidGraph("exactly one terminal expected".into()));
        }
        let graph = GameGraph::new(owners, edges, s)?;
        let inst = SpInstance { graph, t, costs };
        inst.check_costs()?;
        if !inst.every_edge_on_a_walk() {
            return Err(Error::InvalidGraph("some edge lies on no s-t walk".into()));
        }
        Ok(inst)
    }

    fn check_costs(&self) -> Result<()> {
        let n = self.num_players();
        if self.costs.len() < n.max(1) {
            return Err(Error::InvalidCosts(format!(
                "{} cost rows for {n} players",
                self.costs.len()
            )));
        }
        for (i, row) in self.costs.iter().enumerate() {
            if row.len() != self.graph.num_edges() {
                return Err(Error::InvalidCosts(format!(
                    "player {i} has {} costs for {} edges",
                    row.len(),
                    self.graph.num_edges()
                )));
            }
            if let Some(e) = row.iter().position(|c| !c.is_positive()) {
                return Err(Error::InvalidCosts(format!("player {i}, edge {e}: cost must be positive")));
            }
        }
        Ok(())
    }

    fn every_edge_on_a_walk(&self) -> bool {
        let from_s = self.graph.reachable_from(self.s());
        let to_t = coreachable(self.graph.num_vertices(), self.graph.edges(), self.t);
        self.graph.edges().iter().all(|&(a, b)| from_s[a] && to_t[b])
    }

    pub fn graph(&self) -> &GameGraph {
        &self.graph
    }

    pub fn s(&self) -> usize {
        self.graph.start()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn num_players(&self) -> usize {
        self.graph.num_players()
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    pub fn costs(&self) -> &[Vec<Rational>] {
        &self.costs
    }

    pub fn with_costs(&self, costs: Vec<Vec<Rational>>) -> Result<SpInstance> {
        let inst = SpInstance {
            graph: self.graph.clone(),
            t: self.t,
            costs,
        };
        inst.check_costs()?;
        Ok(inst)
    }

    /// Positions of every player, for strategy enumeration.
    pub fn strategy_spaces(&self) -> Vec<StrategySpace> {
        let all = vec![true; self.graph.num_vertices()];
        (0..self.num_players())
            .map(|p| StrategySpace::for_player(&self.graph, p, &all))
            .collect()
    }

    /// Every non-terminal move is reversible.
    pub fn is_symmetric(&self) -> bool {
        let edges = self.graph.edges();
        edges.iter().all(|&(a, b)| {
            a == self.t || b == self.t || edges.contains(&(b, a))
        })
    }

    pub fn is_bipartite(&self) -> bool {
        self.graph.edges().iter().all(|&(a, b)| {
            b == self.t || self.graph.owner(a) != self.graph.owner(b)
        })
    }
}

fn coreachable(n: usize, edges: &[(usize, usize)], target: usize) -> Vec<bool> {
    let mut rev = vec![Vec::new(); n];
    for &(a, b) in edges {
        rev[b].push(a);
    }
    let mut seen = vec![false; n];
    seen[target] = true;
    let mut stack = vec![target];
    while let Some(v) = stack.pop() {
        for &u in &rev[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen
}

fn reachable(n: usize, edges: &[(usize, usize)], from: usize) -> Vec<bool> {
    let mut out = vec![Vec::new(); n];
    for &(a, b) in edges {
        out[a].push(b);
    }
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        for &w in &out[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Fixed point of the two repair rules: merge dead-end positions into `t`
/// and delete edges that lie on no `s → t` walk, merging first. Positions that end
/// up unused are dropped and the rest renumbered in order. Fails when `s`
/// itself becomes a dead end.
pub fn normalize(raw: &RawInstance) -> Result<SpInstance> {
    let n = raw.owners.len();
    if raw.s >= n || raw.t >= n {
        return Err(Error::InvalidGraph("source or target out of range".into()));
    }
    if raw.s == raw.t {
        return Err(Error::InvalidGraph("source equals target".into()));
    }
    if let Some(&(a, b)) = raw.edges.iter().find(|&&(a, b)| a >= n || b >= n) {
        return Err(Error::InvalidGraph(format!("edge ({a},{b}) out of range")));
    }
    if raw.costs.iter().any(|row| row.len() != raw.edges.len()) {
        return Err(Error::InvalidCosts("one cost per edge and player expected".into()));
    }
    let mut edges: Vec<Option<(usize, usize)>> = raw.edges.iter().map(|&e| Some(e)).collect();
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        let mut has_out = vec![false; n];
        for &(a, _) in edges.iter().flatten() {
            has_out[a] = true;
        }
        for v in 0..n {
            if alive[v] && v != raw.t && !has_out[v] {
                if v == raw.s {
                    return Err(Error::NoPath);
                }
                alive[v] = false;
                changed = true;
                for e in edges.iter_mut().flatten() {
                    if e.1 == v {
                        e.1 = raw.t;
                    }
                }
            }
        }
        let current: Vec<(usize, usize)> = edges.iter().flatten().copied().collect();
        let from_s = reachable(n, &current, raw.s);
        let to_t = coreachable(n, &current, raw.t);
        for e in edges.iter_mut() {
            if let Some((a, b)) = *e {
                if a == raw.t || !from_s[a] || !to_t[b] {
                    *e = None;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut index = vec![usize::MAX; n];
    let mut owners = Vec::new();
    for v in 0..n {
        if alive[v] {
            index[v] = owners.len();
            owners.push(if v == raw.t { Owner::Terminal } else { raw.owners[v] });
        }
    }
    if owners.iter().filter(|o| **o == Owner::Terminal).count() != 1 {
        return Err(Error::InvalidGraph("only the target may be terminal".into()));
    }
    let kept: Vec<usize> = (0..edges.len()).filter(|&e| edges[e].is_some()).collect();
    let new_edges = kept
        .iter()
        .map(|&e| {
            let (a, b) = edges[e].expect("kept");
            (index[a], index[b])
        })
        .collect();
    let costs = raw
        .costs
        .iter()
        .map(|row| kept.iter().map(|&e| row[e].clone()).collect())
        .collect();
    SpInstance::new(owners, new_edges, index[raw.s], index[raw.t], costs)
}

impl SpInstance {
    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            owners: self.graph.owners().to_vec(),
            edges: self.graph.edges().to_vec(),
            s: self.s(),
            t: self.t,
            costs: self.costs.clone(),
        }
    }
}

/// Subdivides every edge joining two positions of the same player by a
/// fresh position of the other player; both halves cost half as much.
pub fn bipartitize(inst: &SpInstance) -> Result<SpInstance> {
    if inst.num_players() > 2 {
        return Err(Error::Precondition("bipartitize is defined for two players".into()));
    }
    let g = inst.graph();
    let mut owners = g.owners().to_vec();
    let mut edges = Vec::new();
    let mut costs: Vec<Vec<Rational>> = vec![Vec::new(); inst.costs.len()];
    let half = Rational::one() / Rational::from_integer(2.into());
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        match (g.owner(a), g.owner(b)) {
            (Owner::Player(p), Owner::Player(q)) if p == q => {
                let mid = owners.len();
                owners.push(Owner::Player(1 - p));
                edges.push((a, mid));
                edges.push((mid, b));
                for (i, row) in costs.iter_mut().enumerate() {
                    let c = &inst.costs[i][e] * &half;
                    row.push(c.clone());
                    row.push(c);
                }
            }
            _ => {
                edges.push((a, b));
                for (i, row) in costs.iter_mut().enumerate() {
                    row.push(inst.costs[i][e].clone());
                }
            }
        }
    }
    SpInstance::new(owners, edges, inst.s(), inst.t, costs)
}

/// Adds `ε·2^{-e}` to every cost of edge `e`, with `ε = 1/(4L)` and `L` the
/// common denominator of the player's costs, so that distinct paths get
/// distinct lengths without reordering paths of different length.
pub fn perturb(inst: &SpInstance) -> SpInstance {
    let costs = inst
        .costs
        .iter()
        .map(|row| {
            let l = common_denominator(row.iter());
            let two = Rational::from_integer(2.into());
            let mut bump = Rational::new(1.into(), l * 4);
            row.iter()
                .map(|c| {
                    let out = c + &bump;
                    bump = &bump / &two;
                    out
                })
                .collect()
        })
        .collect();
    SpInstance {
        graph: inst.graph.clone(),
        t: inst.t,
        costs,
    }
}

/// An `s → t` path as its edge list, or the cyclic outcome `c`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpOutcome {
    Path(Vec<usize>),
    Cycle,
}

impl SpOutcome {
    /// Support vector `w_p`, or `None` for `w^c`.
    pub fn support(&self, m: usize) -> Option<Vec<Rational>> {
        match self {
            SpOutcome::Path(p) => {
                let mut w = vec![Rational::zero(); m];
                for &e in p {
                    w[e] = Rational::one();
                }
                Some(w)
            }
            SpOutcome::Cycle => None,
        }
    }

    pub fn cost(&self, local: &[Rational]) -> ExtCost {
        match self {
            SpOutcome::Path(p) => ExtCost::Finite(p.iter().map(|&e| &local[e]).sum()),
            SpOutcome::Cycle => ExtCost::Infinite,
        }
    }

    pub fn label(&self) -> String {
        match self {
            SpOutcome::Path(p) => {
                let parts: Vec<String> = p.iter().map(|e| e.to_string()).collect();
                format!("p[{}]", parts.join(","))
            }
            SpOutcome::Cycle => "c".into(),
        }
    }
}

/// Outcome of a full profile (`choice[v]` indexes `out_edges(v)`) and
/// every player's effective cost.
pub fn play_sp(inst: &SpInstance, choice: &[usize]) -> Result<(SpOutcome, Vec<ExtCost>)> {
    let p = play(&inst.graph, choice)?;
    let outcome = match p.end {
        PlayEnd::Terminal(_) => SpOutcome::Path(p.edges),
        PlayEnd::Lasso { .. } => SpOutcome::Cycle,
    };
    let costs = inst.costs.iter().map(|row| outcome.cost(row)).collect();
    Ok((outcome, costs))
}

/// Two-player SP game form with its outcomes (paths sorted, `c` last).
pub fn sp_game_form(inst: &SpInstance, budget: u128) -> Result<(GameForm, Vec<SpOutcome>)> {
    if inst.num_players() > 2 {
        return Err(Error::Precondition("SP game forms are two-player".into()));
    }
    let mut spaces = inst.strategy_spaces();
    spaces.resize(2, StrategySpace { positions: vec![], degrees: vec![] });
    let needed = spaces[0].size().saturating_mul(spaces[1].size());
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let (rows, cols) = (spaces[0].size() as usize, spaces[1].size() as usize);
    let mut choice = vec![0; inst.graph.num_vertices()];
    let mut cells = Vec::with_capacity(rows * cols);
    for x in 0..rows {
        spaces[0].apply(x, &mut choice);
        for y in 0..cols {
            spaces[1].apply(y, &mut choice);
            cells.push(play_sp(inst, &choice)?.0);
        }
    }
    let mut outcomes = cells.clone();
    outcomes.sort();
    outcomes.dedup();
    let table = cells
        .iter()
        .map(|c| outcomes.binary_search(c).expect("collected"))
        .collect();
    let labels = outcomes.iter().map(SpOutcome::label).collect();
    let form = GameForm::from_flat(rows, cols, outcomes.len(), table)?.with_labels(labels)?;
    Ok((form, outcomes))
}

/// SP v⁺-form: paths become 0/1 support vectors over the edges, `c`
/// becomes `w^c`. Weak rectangularity is checked on construction.
pub fn sp_vplus_form(inst: &SpInstance, budget: u128) -> Result<VPlusForm> {
    let (form, outcomes) = sp_game_form(inst, budget)?;
    let m = inst.num_edges();
    let table = form
        .cells()
        .iter()
        .map(|&o| outcomes[o].support(m))
        .collect();
    VPlusForm::new(form.rows(), form.cols(), m, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn raw(owners: &str, edges: &[(usize, usize)], s: usize, t: usize) -> RawInstance {
        let owners = owners
            .chars()
            .map(|c| match c {
                'A' => Owner::ALICE,
                'B' => Owner::BOB,
                'C' => Owner::Player(2),
                _ => Owner::Terminal,
            })
            .collect();
        RawInstance {
            owners,
            edges: edges.to_vec(),
            s,
            t,
            costs: vec![vec![int(1); edges.len()]; 2],
        }
    }

    #[test]
    fn dead_end_is_merged_into_t() {
        // s -> v (dead end), s -> t
        let r = raw("ABT", &[(0, 1), (0, 2)], 0, 2);
        let inst = normalize(&r).unwrap();
        assert_eq!(inst.graph().num_vertices(), 2);
        assert_eq!(inst.graph().edges(), &[(0, 1), (0, 1)]);
    }

    #[test]
    fn useless_edge_is_deleted() {
        // u is unreachable from s; its edge u -> t lies on no s-t walk.
        let r = raw("ABT", &[(0, 2), (1, 2), (1, 0)], 0, 2);
        let inst = normalize(&r).unwrap();
        assert_eq!(inst.graph().edges(), &[(0, 1)]);
        // Normalizing again changes nothing.
        assert_eq!(normalize(&inst.to_raw()).unwrap(), inst);
    }

    #[test]
    fn no_path_fails() {
        let r = raw("ABT", &[(0, 1), (1, 0)], 0, 2);
        assert_eq!(normalize(&r), Err(Error::NoPath));
    }

    #[test]
    fn trap_cycles_are_repaired() {
        // s -> a <-> b with a -> t; b's only escape is back to a.
        let r = raw("ABAT", &[(0, 1), (1, 2), (2, 1), (1, 3), (0, 3)], 0, 3);
        let inst = normalize(&r).unwrap();
        assert_eq!(inst.graph().num_edges(), 5);
        let (form, outcomes) = sp_game_form(&inst, 1000).unwrap();
        assert!(outcomes.contains(&SpOutcome::Cycle));
        assert!(form.rows() >= 2);
    }

    #[test]
    fn bipartitize_halves_costs() {
        let mut r = raw("AAT", &[(0, 1), (1, 2)], 0, 2);
        r.costs = vec![vec![int(4), int(1)], vec![int(6), int(1)]];
        let inst = normalize(&r).unwrap();
        let b = bipartitize(&inst).unwrap();
        assert!(b.is_bipartite());
        assert_eq!(b.graph().num_edges(), 3);
        assert_eq!(b.costs()[0][..2], [int(2), int(2)]);
        assert_eq!(b.costs()[1][..2], [int(3), int(3)]);
        assert_eq!(bipartitize(&b).unwrap(), b);
    }

    #[test]
    fn plays_and_costs() {
        let mut r = raw("AT", &[(0, 1)], 0, 1);
        r.costs = vec![vec![int(3)], vec![int(5)]];
        let inst = normalize(&r).unwrap();
        let (o, c) = play_sp(&inst, &[0, 0]).unwrap();
        assert_eq!(o, SpOutcome::Path(vec![0]));
        assert_eq!(c[0], ExtCost::Finite(int(3)));

        // s(A) <-> b(B), both may exit to t.
        let r = raw("ABT", &[(0, 1), (0, 2), (1, 0), (1, 2)], 0, 2);
        let inst = normalize(&r).unwrap();
        let (o, c) = play_sp(&inst, &[0, 0, 0]).unwrap();
        assert_eq!(o, SpOutcome::Cycle);
        assert!(c.iter().all(|x| *x == ExtCost::Infinite));
    }

    #[test]
    fn diamond_form_is_weakly_rectangular() {
        // s(A) -> a(B), s -> b(B), a -> t, b -> t
        let r = raw("ABBT", &[(0, 1), (0, 2), (1, 3), (2, 3)], 0, 3);
        let inst = normalize(&r).unwrap();
        let (form, outcomes) = sp_game_form(&inst, 1000).unwrap();
        assert_eq!((form.rows(), form.cols()), (2, 1));
        assert_eq!(outcomes.len(), 2);
        let v = sp_vplus_form(&inst, 1000).unwrap();
        assert_eq!(v.vectors().len(), 2);

        let single = normalize(&raw("AT", &[(0, 1)], 0, 1)).unwrap();
        let (form, _) = sp_game_form(&single, 10).unwrap();
        assert_eq!((form.rows(), form.cols()), (1, 1));
    }

    #[test]
    fn perturbation_keeps_order_and_breaks_ties() {
        let mut r = raw("ABBT", &[(0, 1), (0, 2), (1, 3), (2, 3)], 0, 3);
        r.costs = vec![vec![int(1); 4], vec![int(1); 4]];
        let inst = normalize(&r).unwrap();
        let p = perturb(&inst);
        let upper = SpOutcome::Path(vec![0, 2]).cost(&p.costs()[0]);
        let lower = SpOutcome::Path(vec![1, 3]).cost(&p.costs()[0]);
        assert!(upper != lower);
        assert!(upper.finite().unwrap() - int(2) < crate::rational::frac(1, 2));
    }
}
