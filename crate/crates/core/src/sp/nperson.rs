use super::{play_sp, SpInstance};
use crate::error::{Error, Result};
use crate::rational::ExtCost;

/// Finite n-person cost game: profile `(s_0, …, s_{n-1})` is stored at its
/// mixed-radix index with player 0 slowest; `costs[index][i]` is what
/// player `i` pays there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NPersonGame {
    sizes: Vec<usize>,
    costs: Vec<Vec<ExtCost>>,
}

impl NPersonGame {
    pub fn new(sizes: Vec<usize>, costs: Vec<Vec<ExtCost>>) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(Error::Precondition("every player needs a strategy".into()));
        }
        let total: usize = sizes.iter().product();
        if costs.len() != total || costs.iter().any(|c| c.len() != sizes.len()) {
            return Err(Error::Precondition("one cost per player and profile expected".into()));
        }
        Ok(NPersonGame { sizes, costs })
    }

    pub fn num_players(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn cost(&self, profile: &[usize]) -> &[ExtCost] {
        &self.costs[self.index(profile)]
    }

    pub fn index(&self, profile: &[usize]) -> usize {
        profile.iter().zip(&self.sizes).fold(0, |acc, (&s, &n)| acc * n + s)
    }

    pub fn profile(&self, mut index: usize) -> Vec<usize> {
        let mut p = vec![0; self.sizes.len()];
        for i in (0..self.sizes.len()).rev() {
            p[i] = index % self.sizes[i];
            index /= self.sizes[i];
        }
        p
    }
}

/// Profiles where no player lowers its own cost by a unilateral switch.
pub fn pure_nash_profiles(g: &NPersonGame) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for idx in 0..g.costs.len() {
        let mut p = g.profile(idx);
        let here = g.costs[idx].clone();
        let stable = (0..g.num_players()).all(|i| {
            let own = p[i];
            let ok = (0..g.sizes[i]).all(|s| {
                p[i] = s;
                g.cost(&p)[i] >= here[i]
            });
            p[i] = own;
            ok
        });
        if stable {
            out.push(p);
        }
    }
    out
}

/// Normal form of an n-person SP game over all positions.
pub fn sp_normal_form(inst: &SpInstance, budget: u128) -> Result<NPersonGame> {
    let spaces = inst.strategy_spaces();
    let needed = spaces.iter().fold(1u128, |acc, s| acc.saturating_mul(s.size()));
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let sizes: Vec<usize> = spaces.iter().map(|s| s.size() as usize).collect();
    let total: usize = sizes.iter().product();
    let mut choice = vec![0; inst.graph().num_vertices()];
    let mut costs = Vec::with_capacity(total);
    let mut profile = vec![0; sizes.len()];
    for _ in 0..total {
        for (space, &s) in spaces.iter().zip(&profile) {
            space.apply(s, &mut choice);
        }
        costs.push(play_sp(inst, &choice)?.1[..sizes.len()].to_vec());
        for i in (0..sizes.len()).rev() {
            profile[i] += 1;
            if profile[i] < sizes[i] {
                break;
            }
            profile[i] = 0;
        }
    }
    NPersonGame::new(sizes, costs)
}

/// First pure NE of the n-person SP game, by exhaustive scan.
pub fn sp_game_ne(inst: &SpInstance, budget: u128) -> Result<Option<Vec<usize>>> {
    let g = sp_normal_form(inst, budget)?;
    Ok(pure_nash_profiles(&g).into_iter().next())
}
