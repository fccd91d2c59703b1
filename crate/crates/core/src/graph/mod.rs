//! Positional game structures on digraphs: SCC condensation, plays under
//! stationary strategies, normal-form extraction and the win-lose solver.

mod normal_form;
mod play;
mod scc;
mod winlose;

pub use normal_form::{merge_outcomes, normal_form, GraphNormalForm, Mode, OutcomeKey};
pub use play::{play, Play, PlayEnd, StrategySpace};
pub use scc::{scc_decompose, ComponentKind, SccDecomposition};
pub use winlose::{outcome_universe, solve_win_lose, WinLoseSolution};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ALICE: usize = 0;
pub const BOB: usize = 1;

/// Who moves at a position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Owner {
    Player(usize),
    Terminal,
}

impl Owner {
    pub const ALICE: Owner = Owner::Player(ALICE);
    pub const BOB: Owner = Owner::Player(BOB);

    pub fn player(self) -> Option<usize> {
        match self {
            Owner::Player(p) => Some(p),
            Owner::Terminal => None,
        }
    }
}

/// Digraph with position ownership and a fixed initial position.
/// Parallel edges and loops are allowed; edges keep their insertion index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameGraph {
    owners: Vec<Owner>,
    edges: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    start: usize,
}

impl GameGraph {
    pub fn new(owners: Vec<Owner>, edges: Vec<(usize, usize)>, start: usize) -> Result<Self> {
        let g = Self::new_unchecked(owners, edges, start)?;
        g.validate()?;
        Ok(g)
    }

    /// Builds without the out-degree/ownership checks; edge endpoints are still checked.
    pub fn new_unchecked(owners: Vec<Owner>, edges: Vec<(usize, usize)>, start: usize) -> Result<Self> {
        let n = owners.len();
        if start >= n {
            return Err(Error::InvalidGraph(format!("initial position {start} out of range")));
        }
        let mut out = vec![Vec::new(); n];
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge {i} ({a},{b}) out of range")));
            }
            out[a].push(i);
        }
        Ok(GameGraph {
            owners,
            edges,
            out,
            start,
        })
    }

    fn validate(&self) -> Result<()> {
        for (v, owner) in self.owners.iter().enumerate() {
            match owner {
                Owner::Terminal if !self.out[v].is_empty() => {
                    return Err(Error::InvalidGraph(format!("terminal {v} has outgoing moves")))
                }
                Owner::Player(_) if self.out[v].is_empty() => {
                    return Err(Error::InvalidGraph(format!("position {v} has no moves")))
                }
                _ => {}
            }
        }
        if self.owners[self.start] == Owner::Terminal {
            return Err(Error::InvalidGraph("initial position is terminal".into()));
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.owners.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn owner(&self, v: usize) -> Owner {
        self.owners[v]
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owners
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Edge ids leaving `v`, in insertion order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn terminals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_vertices()).filter(|&v| self.owners[v] == Owner::Terminal)
    }

    pub fn num_players(&self) -> usize {
        self.owners
            .iter()
            .filter_map(|o| o.player())
            .max()
            .map_or(0, |p| p + 1)
    }

    /// Positions reachable from `from`, as a membership vector.
    pub fn reachable_from(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.num_vertices()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.out[v] {
                let w = self.edges[e].1;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Adds a loop at every terminal and hands it to `owner`.
    pub fn with_terminal_loops(&self, owner: Owner) -> GameGraph {
        let mut owners = self.owners.clone();
        let mut edges = self.edges.clone();
        for v in self.terminals() {
            owners[v] = owner;
            edges.push((v, v));
        }
        GameGraph::new(owners, edges, self.start).expect("loops give every position a move")
    }
}

/// Random valid two-player graph on `n ≥ 2` positions: each position is a
/// terminal with probability `terminal_prob` (never the initial one), and
/// every non-terminal gets between 1 and `max_out` moves.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, max_out: usize, terminal_prob: f64) -> GameGraph {
    assert!(n >= 1 && max_out >= 1);
    let owners: Vec<Owner> = (0..n)
        .map(|v| {
            if v > 0 && rng.gen_bool(terminal_prob) {
                Owner::Terminal
            } else if rng.gen_bool(0.5) {
                Owner::ALICE
            } else {
                Owner::BOB
            }
        })
        .collect();
    let mut edges = Vec::new();
    for (v, owner) in owners.iter().enumerate() {
        if *owner == Owner::Terminal {
            continue;
        }
        let k = rng.gen_range(1..=max_out);
        let mut targets: Vec<usize> = Vec::new();
        for _ in 0..k {
            let w = rng.gen_range(0..n);
            if !targets.contains(&w) {
                targets.push(w);
            }
        }
        targets.sort_unstable();
        edges.extend(targets.into_iter().map(|w| (v, w)));
    }
    GameGraph::new(owners, edges, 0).expect("generator respects invariants")
}
