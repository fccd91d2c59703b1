use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::normal_form::{Mode, OutcomeKey};
use super::scc::{ComponentKind, SccDecomposition};
use super::{GameGraph, Owner, ALICE, BOB};
use crate::error::{Error, Result};

/// Winner of every position plus a positional strategy that wins for the
/// winner wherever the winner moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinLoseSolution {
    pub winner: Vec<usize>,
    /// Out-edge position per vertex; meaningful where `winner[v]` owns `v`.
    pub strategy: Vec<usize>,
}

impl WinLoseSolution {
    pub fn winner_at_start(&self, g: &GameGraph) -> usize {
        self.winner[g.start()]
    }
}

/// Every outcome a play can have: terminals, then cyclic components (or `c`).
pub fn outcome_universe(g: &GameGraph, dec: &SccDecomposition, mode: Mode) -> Vec<OutcomeKey> {
    let mut keys: Vec<OutcomeKey> = g.terminals().map(OutcomeKey::Terminal).collect();
    let cyclic = (0..dec.num_components()).filter(|&c| dec.kinds[c] == ComponentKind::Cyclic);
    match mode {
        Mode::Msdggs => keys.extend(cyclic.map(OutcomeKey::Cycle)),
        Mode::Dggs => {
            if cyclic.count() > 0 {
                keys.push(OutcomeKey::Infinite)
            }
        }
    }
    keys.sort_unstable();
    keys
}

/// Sinks-first evaluation of the condensation. Inside a cyclic component
/// the side that wins when play stays there keeps every position except
/// the opponent's attractor to already evaluated opponent wins.
pub fn solve_win_lose(
    g: &GameGraph,
    dec: &SccDecomposition,
    mode: Mode,
    alice_set: &[OutcomeKey],
    bob_set: &[OutcomeKey],
) -> Result<WinLoseSolution> {
    if g.owners().iter().any(|o| matches!(o, Owner::Player(p) if *p > BOB)) {
        return Err(Error::InvalidGraph("win-lose solver needs a two-player graph".into()));
    }
    let universe = outcome_universe(g, dec, mode);
    let mut side = vec![None; universe.len()];
    for (set, who) in [(alice_set, ALICE), (bob_set, BOB)] {
        for key in set {
            let i = universe.binary_search(key).map_err(|_| {
                Error::InvalidPartition(format!("{} is not an outcome", key.label()))
            })?;
            if side[i].replace(who).is_some_and(|prev| prev != who) {
                return Err(Error::InvalidPartition(format!("{} assigned to both", key.label())));
            }
        }
    }
    if let Some(i) = side.iter().position(Option::is_none) {
        return Err(Error::InvalidPartition(format!(
            "{} is unassigned",
            universe[i].label()
        )));
    }
    let side_of = |key: OutcomeKey| side[universe.binary_search(&key).expect("validated")].expect("validated");

    let n = g.num_vertices();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(_, b)) in g.edges().iter().enumerate() {
        rev[b].push(e);
    }
    const UNKNOWN: usize = usize::MAX;
    let mut winner = vec![UNKNOWN; n];
    let mut strategy = vec![0usize; n];
    let mut counter = vec![0usize; n];
    let mut in_attr = vec![false; n];
    let mut queue = VecDeque::new();

    for c in 0..dec.num_components() {
        let members = &dec.members[c];
        match dec.kinds[c] {
            ComponentKind::Terminal => {
                let v = members[0];
                winner[v] = side_of(OutcomeKey::Terminal(v));
            }
            ComponentKind::Transient => {
                let v = members[0];
                let p = g.owner(v).player().expect("transient vertices move");
                let good = g
                    .out_edges(v)
                    .iter()
                    .position(|&e| winner[g.edge(e).1] == p);
                match good {
                    Some(k) => {
                        winner[v] = p;
                        strategy[v] = k;
                    }
                    None => winner[v] = 1 - p,
                }
            }
            ComponentKind::Cyclic => {
                let stay = side_of(match mode {
                    Mode::Msdggs => OutcomeKey::Cycle(c),
                    Mode::Dggs => OutcomeKey::Infinite,
                });
                let opp = 1 - stay;
                let inside = |w: usize| dec.component_of[w] == c;
                for &v in members {
                    let owner = g.owner(v).player().expect("cyclic vertices move");
                    let exits: Vec<usize> = g
                        .out_edges(v)
                        .iter()
                        .enumerate()
                        .filter(|&(_, &e)| {
                            let w = g.edge(e).1;
                            !inside(w) && winner[w] == opp
                        })
                        .map(|(k, _)| k)
                        .collect();
                    if owner == opp {
                        if let Some(&k) = exits.first() {
                            in_attr[v] = true;
                            strategy[v] = k;
                            queue.push_back(v);
                        }
                    } else {
                        counter[v] = g.out_edges(v).len() - exits.len();
                        if counter[v] == 0 {
                            in_attr[v] = true;
                            queue.push_back(v);
                        }
                    }
                }
                while let Some(a) = queue.pop_front() {
                    for &e in &rev[a] {
                        let u = g.edge(e).0;
                        if !inside(u) || in_attr[u] {
                            continue;
                        }
                        if g.owner(u) == Owner::Player(opp) {
                            in_attr[u] = true;
                            strategy[u] = g
                                .out_edges(u)
                                .iter()
                                .position(|&f| f == e)
                                .expect("edge leaves u");
                            queue.push_back(u);
                        } else {
                            counter[u] -= 1;
                            if counter[u] == 0 {
                                in_attr[u] = true;
                                queue.push_back(u);
                            }
                        }
                    }
                }
                for &v in members {
                    winner[v] = if in_attr[v] { opp } else { stay };
                }
                for &v in members {
                    if winner[v] == stay && g.owner(v) == Owner::Player(stay) {
                        strategy[v] = g
                            .out_edges(v)
                            .iter()
                            .position(|&e| winner[g.edge(e).1] == stay)
                            .expect("a non-attractor position keeps an escape");
                    }
                }
            }
        }
    }
    Ok(WinLoseSolution { winner, strategy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{normal_form, play, random_graph, scc_decompose};
    use crate::nf::{saddle_point, win_lose_reward};
    use crate::rational::int;
    use rand::Rng;

    #[test]
    fn alice_picks_her_terminal() {
        let g = GameGraph::new(
            vec![Owner::ALICE, Owner::Terminal, Owner::Terminal],
            vec![(0, 1), (0, 2)],
            0,
        )
        .unwrap();
        let dec = scc_decompose(&g);
        let s = solve_win_lose(
            &g,
            &dec,
            Mode::Msdggs,
            &[OutcomeKey::Terminal(1)],
            &[OutcomeKey::Terminal(2)],
        )
        .unwrap();
        assert_eq!(s.winner_at_start(&g), ALICE);
        assert_eq!(s.strategy[0], 0);
    }

    #[test]
    fn bob_escapes_alices_cycle() {
        // u(A) <-> w(B), w -> t
        let g = GameGraph::new(
            vec![Owner::ALICE, Owner::BOB, Owner::Terminal],
            vec![(0, 1), (1, 0), (1, 2)],
            0,
        )
        .unwrap();
        let dec = scc_decompose(&g);
        let cyc = OutcomeKey::Cycle(dec.component_of[0]);
        let s = solve_win_lose(&g, &dec, Mode::Msdggs, &[cyc], &[OutcomeKey::Terminal(2)]).unwrap();
        assert_eq!(s.winner[1], BOB);
        assert_eq!(s.winner[0], BOB);
        let nf = normal_form(&g, &dec, Mode::Msdggs, 100).unwrap();
        let alice_wins: Vec<usize> = vec![nf.outcome_index(cyc).unwrap()];
        let r = win_lose_reward(nf.form.num_outcomes(), &alice_wins);
        let sp = saddle_point(&nf.form, &r).unwrap();
        assert_eq!(sp.maxmin, int(-1));
    }

    #[test]
    fn partition_errors() {
        let g = GameGraph::new(
            vec![Owner::ALICE, Owner::Terminal, Owner::Terminal],
            vec![(0, 1), (0, 2)],
            0,
        )
        .unwrap();
        let dec = scc_decompose(&g);
        let t1 = OutcomeKey::Terminal(1);
        let t2 = OutcomeKey::Terminal(2);
        assert!(solve_win_lose(&g, &dec, Mode::Msdggs, &[t1], &[]).is_err());
        assert!(solve_win_lose(&g, &dec, Mode::Msdggs, &[t1, t2], &[t1]).is_err());
        assert!(solve_win_lose(&g, &dec, Mode::Msdggs, &[t1, OutcomeKey::Cycle(9)], &[t2]).is_err());
    }

    #[test]
    fn agrees_with_normal_form_saddle() {
        let mut rng = crate::rng::stream(11, 3);
        let mut done = 0;
        while done < 200 {
            let n = 2 + rng.gen_range(0..7);
            let g = random_graph(&mut rng, n, 3, 0.25);
            let dec = scc_decompose(&g);
            let mode = if done % 2 == 0 { Mode::Msdggs } else { Mode::Dggs };
            let Ok(nf) = normal_form(&g, &dec, mode, 1 << 14) else {
                continue;
            };
            let universe = outcome_universe(&g, &dec, mode);
            let (mut oa, mut ob) = (Vec::new(), Vec::new());
            for k in universe {
                if rng.gen_bool(0.5) {
                    oa.push(k)
                } else {
                    ob.push(k)
                }
            }
            let s = solve_win_lose(&g, &dec, mode, &oa, &ob).unwrap();
            let alice_wins: Vec<usize> = oa.iter().filter_map(|&k| nf.outcome_index(k)).collect();
            let r = win_lose_reward(nf.form.num_outcomes(), &alice_wins);
            let sp = saddle_point(&nf.form, &r).unwrap();
            assert!(sp.saddle.is_some());
            let expected = if sp.maxmin == int(1) { ALICE } else { BOB };
            assert_eq!(s.winner_at_start(&g), expected, "graph {g:?}");

            // The returned strategy wins against every opponent response.
            let w = expected;
            let other = if w == ALICE { &nf.bob } else { &nf.alice };
            let mut choice = s.strategy.clone();
            for j in 0..other.size() as usize {
                other.apply(j, &mut choice);
                let p = play(&g, &choice).unwrap();
                let key = OutcomeKey::of(&p, &dec, mode);
                assert_eq!(oa.contains(&key), w == ALICE);
            }
            done += 1;
        }
    }
}
