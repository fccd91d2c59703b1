use serde::{Deserialize, Serialize};

use super::{GameGraph, Owner};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlayEnd {
    Terminal(usize),
    /// The cycle is `path[cycle_start..]` closed by the last edge.
    Lasso { cycle_start: usize },
}

/// Walk from the initial position under a stationary profile.
/// `edges[i]` leaves `path[i]`; for a lasso the final edge returns to
/// `path[cycle_start]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Play {
    pub path: Vec<usize>,
    pub edges: Vec<usize>,
    pub end: PlayEnd,
}

impl Play {
    pub fn cycle(&self) -> Option<&[usize]> {
        match self.end {
            PlayEnd::Lasso { cycle_start } => Some(&self.path[cycle_start..]),
            PlayEnd::Terminal(_) => None,
        }
    }

    pub fn cycle_edges(&self) -> Option<&[usize]> {
        match self.end {
            PlayEnd::Lasso { cycle_start } => Some(&self.edges[cycle_start..]),
            PlayEnd::Terminal(_) => None,
        }
    }
}

/// Runs the play. `choice[v]` indexes into `g.out_edges(v)`; entries at
/// terminals are ignored.
pub fn play(g: &GameGraph, choice: &[usize]) -> Result<Play> {
    if choice.len() != g.num_vertices() {
        return Err(Error::Precondition(format!(
            "profile has {} entries for {} positions",
            choice.len(),
            g.num_vertices()
        )));
    }
    let mut seen_at = vec![usize::MAX; g.num_vertices()];
    let mut path = Vec::new();
    let mut edges = Vec::new();
    let mut v = g.start();
    loop {
        if g.owner(v) == Owner::Terminal {
            path.push(v);
            return Ok(Play {
                path,
                edges,
                end: PlayEnd::Terminal(v),
            });
        }
        if seen_at[v] != usize::MAX {
            return Ok(Play {
                path,
                edges,
                end: PlayEnd::Lasso {
                    cycle_start: seen_at[v],
                },
            });
        }
        seen_at[v] = path.len();
        path.push(v);
        let out = g.out_edges(v);
        let e = *out.get(choice[v]).ok_or(Error::IndexOutOfRange {
            what: "move",
            index: choice[v],
            size: out.len(),
        })?;
        edges.push(e);
        v = g.edge(e).1;
    }
}

/// Stationary strategies of one player on a fixed list of positions,
/// enumerated in mixed radix (first position varies slowest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategySpace {
    pub positions: Vec<usize>,
    pub degrees: Vec<usize>,
}

impl StrategySpace {
    pub fn for_player(g: &GameGraph, player: usize, relevant: &[bool]) -> Self {
        let positions: Vec<usize> = (0..g.num_vertices())
            .filter(|&v| relevant[v] && g.owner(v) == Owner::Player(player))
            .collect();
        let degrees = positions.iter().map(|&v| g.out_edges(v).len()).collect();
        StrategySpace { positions, degrees }
    }

    pub fn size(&self) -> u128 {
        self.degrees
            .iter()
            .try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
            .unwrap_or(u128::MAX)
    }

    /// Writes strategy number `index` into `choice`.
    pub fn apply(&self, mut index: usize, choice: &mut [usize]) {
        for (k, &v) in self.positions.iter().enumerate().rev() {
            let d = self.degrees[k];
            choice[v] = index % d;
            index /= d;
        }
    }

    /// Inverse of `apply`.
    pub fn index_of(&self, choice: &[usize]) -> usize {
        self.positions
            .iter()
            .zip(&self.degrees)
            .fold(0, |acc, (&v, &d)| acc * d + choice[v])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminal_play() {
        let g = GameGraph::new(
            vec![Owner::ALICE, Owner::Terminal, Owner::Terminal],
            vec![(0, 1), (0, 2)],
            0,
        )
        .unwrap();
        let p = play(&g, &[0, 0, 0]).unwrap();
        assert_eq!(p.path, vec![0, 1]);
        assert_eq!(p.end, PlayEnd::Terminal(1));
        assert_eq!(play(&g, &[1, 0, 0]).unwrap().end, PlayEnd::Terminal(2));
    }

    #[test]
    fn lasso_play() {
        // 0 -> 1 -> 2 -> 1
        let g = GameGraph::new(
            vec![Owner::ALICE, Owner::BOB, Owner::ALICE],
            vec![(0, 1), (1, 2), (2, 1)],
            0,
        )
        .unwrap();
        let p = play(&g, &[0, 0, 0]).unwrap();
        assert_eq!(p.path, vec![0, 1, 2]);
        assert_eq!(p.end, PlayEnd::Lasso { cycle_start: 1 });
        assert_eq!(p.cycle(), Some(&[1, 2][..]));
        assert_eq!(p.cycle_edges(), Some(&[1, 2][..]));
    }

    #[test]
    fn strategy_indexing_roundtrip() {
        let s = StrategySpace {
            positions: vec![1, 3],
            degrees: vec![2, 3],
        };
        let mut choice = vec![0; 4];
        for i in 0..6 {
            s.apply(i, &mut choice);
            assert_eq!(s.index_of(&choice), i);
        }
        assert_eq!(s.size(), 6);
    }
}
