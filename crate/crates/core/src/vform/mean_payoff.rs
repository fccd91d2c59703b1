use rand::Rng;

use super::VForm;
use crate::error::{Error, Result};
use crate::forms::GameForm;
use crate::graph::{play, GameGraph, Owner, StrategySpace, ALICE, BOB};
use crate::nf::nash_equilibria;
use crate::rational::{frac, int, Rational};

/// Mean-payoff v-form of a graph without terminals, with the strategy
/// spaces that index its rows and columns and each cycle per vector.
#[derive(Clone, Debug)]
pub struct MeanPayoffForm {
    pub vform: VForm,
    pub alice: StrategySpace,
    pub bob: StrategySpace,
    /// Edge ids of the cycle behind each vector of `vform.vectors()`.
    pub cycles: Vec<Vec<usize>>,
}

/// Cell `(x, y)` is the vector with `1/k` on the `k` edges of the cycle the
/// play ends in and 0 elsewhere. Only positions reachable from the start
/// carry strategy coordinates.
pub fn mean_payoff_vform(g: &GameGraph, budget: u128) -> Result<MeanPayoffForm> {
    if g.terminals().next().is_some() {
        return Err(Error::InvalidGraph(
            "mean-payoff form needs every position to have a move; add terminal loops first".into(),
        ));
    }
    if g.owners().iter().any(|o| matches!(o, Owner::Player(p) if *p > BOB)) {
        return Err(Error::InvalidGraph("mean-payoff form needs a two-player graph".into()));
    }
    let reach = g.reachable_from(g.start());
    let alice = StrategySpace::for_player(g, ALICE, &reach);
    let bob = StrategySpace::for_player(g, BOB, &reach);
    let needed = alice.size().saturating_mul(bob.size());
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let (rows, cols) = (alice.size() as usize, bob.size() as usize);
    let m = g.num_edges();
    let mut table = Vec::with_capacity(rows * cols);
    let mut cycle_of: Vec<(Vec<Rational>, Vec<usize>)> = Vec::new();
    let mut choice = vec![0; g.num_vertices()];
    for x in 0..rows {
        alice.apply(x, &mut choice);
        for y in 0..cols {
            bob.apply(y, &mut choice);
            let p = play(g, &choice)?;
            let mut cycle = p.cycle_edges().expect("no terminals, so every play is a lasso").to_vec();
            let k = cycle.len() as i64;
            let mut w = vec![int(0); m];
            for &e in &cycle {
                w[e] = frac(1, k);
            }
            cycle.sort_unstable();
            if !cycle_of.iter().any(|(v, _)| *v == w) {
                cycle_of.push((w.clone(), cycle));
            }
            table.push(w);
        }
    }
    let vform = VForm::new(rows, cols, m, table)?;
    let cycles = vform
        .vectors()
        .iter()
        .map(|w| {
            cycle_of
                .iter()
                .find(|(v, _)| v == w)
                .expect("recorded while building")
                .1
                .clone()
        })
        .collect();
    Ok(MeanPayoffForm {
        vform,
        alice,
        bob,
        cycles,
    })
}

/// Complete bipartite arena: Alice owns `0..a`, Bob owns `a..a+b`, every
/// cross pair is joined both ways, and play starts at position 0.
pub fn complete_bipartite(a: usize, b: usize) -> GameGraph {
    let mut owners = vec![Owner::ALICE; a];
    owners.extend(vec![Owner::BOB; b]);
    let mut edges = Vec::with_capacity(2 * a * b);
    for i in 0..a {
        for j in 0..b {
            edges.push((i, a + j));
        }
    }
    for j in 0..b {
        for i in 0..a {
            edges.push((a + j, i));
        }
    }
    GameGraph::new(owners, edges, 0).expect("complete bipartite arena is valid")
}

/// Edge utilities for both players under which the mean-payoff game on
/// the `a × b` complete bipartite arena has no pure stationary NE.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeFreeCertificate {
    pub a: usize,
    pub b: usize,
    pub ua: Vec<Rational>,
    pub ub: Vec<Rational>,
}

/// Rebuilds the arena and its normal form and confirms the NE set is empty
/// with exact arithmetic.
pub fn verify_ne_free(cert: &NeFreeCertificate) -> Result<bool> {
    let g = complete_bipartite(cert.a, cert.b);
    let mp = mean_payoff_vform(&g, u128::MAX)?;
    let ra = mp.vform.scalarize(&cert.ua)?;
    let rb = mp.vform.scalarize(&cert.ub)?;
    Ok(nash_equilibria(&mp.vform.index_form(), &ra, &rb)?.is_empty())
}

/// Integer-scaled cycle values: `L/k · Σ_{e∈C} u_e` with `L` the lcm of
/// cycle lengths, so comparisons match the exact mean payoffs.
fn cycle_values(cycles: &[Vec<usize>], scale: i64, u: &[i64]) -> Vec<i64> {
    cycles
        .iter()
        .map(|c| scale / c.len() as i64 * c.iter().map(|&e| u[e]).sum::<i64>())
        .collect()
}

fn count_ne(g: &GameForm, va: &[i64], vb: &[i64], col_best: &mut [i64]) -> usize {
    col_best.fill(i64::MIN);
    for x in 0..g.rows() {
        for (y, &o) in g.row(x).iter().enumerate() {
            col_best[y] = col_best[y].max(va[o]);
        }
    }
    let mut count = 0;
    for x in 0..g.rows() {
        let row = g.row(x);
        let best = row.iter().map(|&o| vb[o]).max().expect("nonempty row");
        count += row
            .iter()
            .enumerate()
            .filter(|&(y, &o)| vb[o] == best && va[o] == col_best[y])
            .count();
    }
    count
}

/// Random restarts with greedy single-coordinate moves that never increase
/// the number of equilibria. `samples` bounds the number of utility pairs
/// evaluated. Every hit is re-verified exactly before it is returned.
pub fn search_ne_free_mean_payoff<R: Rng>(
    rng: &mut R,
    a: usize,
    b: usize,
    samples: usize,
) -> Result<Option<NeFreeCertificate>> {
    const RANGE: i64 = 9;
    const CLIMB: usize = 400;
    let g = complete_bipartite(a, b);
    let mp = mean_payoff_vform(&g, 1 << 24)?;
    let form = mp.vform.index_form();
    let scale = mp
        .cycles
        .iter()
        .map(|c| c.len() as i64)
        .fold(1, num_integer::lcm);
    let m = g.num_edges();
    let mut col_best = vec![0i64; form.cols()];
    let mut evaluated = 0usize;
    while evaluated < samples {
        let mut ua: Vec<i64> = (0..m).map(|_| rng.gen_range(-RANGE..=RANGE)).collect();
        let mut ub: Vec<i64> = (0..m).map(|_| rng.gen_range(-RANGE..=RANGE)).collect();
        let mut current = count_ne(
            &form,
            &cycle_values(&mp.cycles, scale, &ua),
            &cycle_values(&mp.cycles, scale, &ub),
            &mut col_best,
        );
        evaluated += 1;
        let mut steps = 0;
        while current > 0 && steps < CLIMB && evaluated < samples {
            steps += 1;
            let alice_side = rng.gen_bool(0.5);
            let e = rng.gen_range(0..m);
            let target = if alice_side { &mut ua } else { &mut ub };
            let old = target[e];
            target[e] = rng.gen_range(-RANGE..=RANGE);
            let next = count_ne(
                &form,
                &cycle_values(&mp.cycles, scale, &ua),
                &cycle_values(&mp.cycles, scale, &ub),
                &mut col_best,
            );
            evaluated += 1;
            if next <= current {
                current = next;
            } else if alice_side {
                ua[e] = old;
            } else {
                ub[e] = old;
            }
        }
        if current == 0 {
            let cert = NeFreeCertificate {
                a,
                b,
                ua: ua.iter().map(|&v| int(v)).collect(),
                ub: ub.iter().map(|&v| int(v)).collect(),
            };
            if verify_ne_free(&cert)? {
                return Ok(Some(cert));
            }
            return Err(Error::Precondition(
                "integer NE count disagrees with exact re-check".into(),
            ));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random_graph;
    use crate::tightness::DEFAULT_BUDGET;
    use crate::vform::is_v_tight;
    use num_traits::Zero;

    #[test]
    fn self_loop() {
        let g = GameGraph::new(vec![Owner::ALICE], vec![(0, 0)], 0).unwrap();
        let mp = mean_payoff_vform(&g, 10).unwrap();
        assert_eq!(mp.vform.vectors(), &[vec![int(1)]]);
    }

    #[test]
    fn two_cycle_halves() {
        let g = GameGraph::new(vec![Owner::ALICE, Owner::BOB], vec![(0, 1), (1, 0)], 0).unwrap();
        let mp = mean_payoff_vform(&g, 10).unwrap();
        assert_eq!(mp.vform.vectors(), &[vec![frac(1, 2), frac(1, 2)]]);
    }

    #[test]
    fn terminals_are_rejected() {
        let g = GameGraph::new(vec![Owner::ALICE, Owner::Terminal], vec![(0, 1)], 0).unwrap();
        assert!(mean_payoff_vform(&g, 10).is_err());
        assert!(mean_payoff_vform(&g.with_terminal_loops(Owner::ALICE), 10).is_ok());
    }

    #[test]
    fn small_mean_payoff_forms_are_v_tight() {
        let mut rng = crate::rng::stream(9, 5);
        for round in 0..60 {
            let n = 1 + round % 5;
            let g = random_graph(&mut rng, n, 3, 0.2).with_terminal_loops(Owner::BOB);
            let mp = mean_payoff_vform(&g, 1 << 12).unwrap();
            for w in mp.vform.vectors() {
                assert!(w.iter().all(|v| *v >= Rational::zero()));
                assert_eq!(w.iter().sum::<Rational>(), int(1));
            }
            assert!(is_v_tight(&mp.vform, DEFAULT_BUDGET).unwrap().is_tight());
        }
    }

    #[test]
    fn complete_bipartite_two_by_two_is_v_tight() {
        let mp = mean_payoff_vform(&complete_bipartite(2, 2), 1 << 12).unwrap();
        assert!(is_v_tight(&mp.vform, DEFAULT_BUDGET).unwrap().is_tight());
    }

    #[test]
    fn one_by_one_arena_has_no_ne_free_utilities() {
        let mut rng = crate::rng::stream(1, 1);
        assert_eq!(search_ne_free_mean_payoff(&mut rng, 1, 1, 200).unwrap(), None);
    }
}
