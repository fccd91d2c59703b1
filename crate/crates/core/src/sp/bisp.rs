use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::generate::{exhaustive_bipartite, random_bipartite, random_costs, random_symmetric};
use super::nperson::sp_game_ne;
use super::paths::{bellman_ford_path, shortest_path, ScaledCosts};
use super::terminal::bisp_equivalence_check;
use super::{perturb, sp_vplus_form, SpInstance, SpOutcome};
use crate::error::{Error, Result};
use crate::graph::{StrategySpace, ALICE, BOB};
use crate::rng::stream;
use crate::vplus::ne_set;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BispMode {
    /// Mappings that leave no `s → t` path contribute nothing.
    Strong,
    /// Such mappings contribute the symbolic outcome `c`.
    Weak,
}

impl FromStr for BispMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strong" => Ok(BispMode::Strong),
            "weak" => Ok(BispMode::Weak),
            _ => Err(Error::Precondition(format!("unknown Bi-SP mode {s:?}"))),
        }
    }
}

impl fmt::Display for BispMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BispMode::Strong => "strong",
            BispMode::Weak => "weak",
        })
    }
}

/// The two path sets. `alice_set` collects Bob's shortest paths (under
/// `u^B`) against each of Alice's mappings, `bob_set` the converse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BispResult {
    pub mode: BispMode,
    pub alice_set: BTreeSet<SpOutcome>,
    pub bob_set: BTreeSet<SpOutcome>,
}

impl BispResult {
    pub fn common(&self) -> Vec<SpOutcome> {
        self.alice_set.intersection(&self.bob_set).cloned().collect()
    }

    pub fn intersects(&self) -> bool {
        !self.alice_set.is_disjoint(&self.bob_set)
    }

    /// Shares a real path, not just `c`.
    pub fn shares_path(&self) -> bool {
        self.common().iter().any(|o| *o != SpOutcome::Cycle)
    }
}

fn check_two_players(inst: &SpInstance) -> Result<()> {
    if inst.num_players() != 2 || inst.costs().len() != 2 {
        return Err(Error::Precondition("Bi-SP needs two players with cost vectors".into()));
    }
    Ok(())
}

/// For every mapping of `fixer`, the other player's shortest path.
fn path_set<F>(inst: &SpInstance, fixer: usize, mode: BispMode, budget: u128, mut shortest: F) -> Result<BTreeSet<SpOutcome>>
where
    F: FnMut(&[Option<usize>]) -> Option<Vec<usize>>,
{
    let n = inst.graph().num_vertices();
    let space = StrategySpace::for_player(inst.graph(), fixer, &vec![true; n]);
    if space.size() > budget {
        return Err(Error::BudgetExceeded { needed: space.size(), budget });
    }
    let mut choice = vec![0; n];
    let mut fixed = vec![None; n];
    let mut out = BTreeSet::new();
    for x in 0..space.size() as usize {
        space.apply(x, &mut choice);
        for &p in &space.positions {
            fixed[p] = Some(choice[p]);
        }
        match shortest(&fixed) {
            Some(p) => {
                out.insert(SpOutcome::Path(p));
            }
            None if mode == BispMode::Weak => {
                out.insert(SpOutcome::Cycle);
            }
            None => {}
        }
    }
    Ok(out)
}

/// Runs the Bi-SP procedure with Dijkstra under lexicographically
/// perturbed costs, so every shortest path is unique. `budget` caps the
/// number of mappings per player.
pub fn bisp_check(inst: &SpInstance, mode: BispMode, budget: u128) -> Result<BispResult> {
    check_two_players(inst)?;
    let ua = ScaledCosts::new(&inst.costs()[ALICE])?;
    let ub = ScaledCosts::new(&inst.costs()[BOB])?;
    let alice_set = path_set(inst, ALICE, mode, budget, |f| shortest_path(inst, &ub, f))?;
    let bob_set = path_set(inst, BOB, mode, budget, |f| shortest_path(inst, &ua, f))?;
    Ok(BispResult { mode, alice_set, bob_set })
}

/// Same sets from Bellman-Ford over the explicitly perturbed rationals.
fn bisp_check_bellman_ford(inst: &SpInstance, mode: BispMode, budget: u128) -> Result<BispResult> {
    check_two_players(inst)?;
    let p = perturb(inst);
    let alice_set = path_set(inst, ALICE, mode, budget, |f| bellman_ford_path(inst, &p.costs()[BOB], f))?;
    let bob_set = path_set(inst, BOB, mode, budget, |f| bellman_ford_path(inst, &p.costs()[ALICE], f))?;
    Ok(BispResult { mode, alice_set, bob_set })
}

/// Strong intersection agrees with existence of an NE with a terminal
/// outcome in the SP v⁺-form under the perturbed costs.
pub fn strong_bridge_holds(inst: &SpInstance, budget: u128) -> Result<bool> {
    let r = bisp_check(inst, BispMode::Strong, budget)?;
    let gpv = sp_vplus_form(inst, budget)?;
    let p = perturb(inst);
    let ne = ne_set(&gpv, &p.costs()[ALICE], &p.costs()[BOB])?;
    let terminal = ne.iter().any(|s| gpv.cell(s.x, s.y).is_some_and(|w| w != gpv.infinite_index()));
    Ok(r.intersects() == terminal)
}

/// Weak intersection agrees with existence of any NE.
pub fn weak_bridge_holds(inst: &SpInstance, budget: u128) -> Result<bool> {
    let r = bisp_check(inst, BispMode::Weak, budget)?;
    let gpv = sp_vplus_form(inst, budget)?;
    let p = perturb(inst);
    let ne = ne_set(&gpv, &p.costs()[ALICE], &p.costs()[BOB])?;
    Ok(r.intersects() == !ne.is_empty())
}

/// Instance, costs and both path sets of an empty intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BispCounterexample {
    pub instance: SpInstance,
    pub mode: BispMode,
    pub alice_set: BTreeSet<SpOutcome>,
    pub bob_set: BTreeSet<SpOutcome>,
}

/// Rebuilds both sets from scratch with Bellman-Ford and confirms they
/// equal the recorded ones and are disjoint.
pub fn verify_counterexample(cx: &BispCounterexample, budget: u128) -> Result<bool> {
    let r = bisp_check_bellman_ford(&cx.instance, cx.mode, budget)?;
    Ok(r.alice_set == cx.alice_set && r.bob_set == cx.bob_set && !r.intersects())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Every bipartite instance up to `max_v` positions, `samples` cost draws each.
    Exhaustive,
    /// `samples` random bipartite instances with `2..=max_v` positions.
    Random,
    /// `samples` symmetric instances with up to three players; NE existence.
    Symmetric,
    /// `samples` random instances; merging inner outcomes under (C′).
    Terminal,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub family: Family,
    pub max_v: usize,
    pub samples: usize,
    pub seed: u64,
    pub mode: BispMode,
    pub budget: u128,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BispReport {
    pub instances: usize,
    pub checks: usize,
    pub intersections: usize,
    /// Strong sets disjoint while the weak sets share `c`.
    pub weak_only: usize,
    pub ne_found: usize,
    pub ne_missing: usize,
    pub equivalence_failures: usize,
    pub max_inner_outcomes: usize,
    pub skipped: usize,
    pub counterexamples: Vec<BispCounterexample>,
}

impl BispReport {
    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty() && self.ne_missing == 0 && self.equivalence_failures == 0
    }
}

fn check_one(inst: &SpInstance, cfg: &SearchConfig, report: &mut BispReport) -> Result<()> {
    report.checks += 1;
    let r = bisp_check(inst, cfg.mode, cfg.budget)?;
    if r.intersects() {
        report.intersections += 1;
        return Ok(());
    }
    if cfg.mode == BispMode::Strong && bisp_check(inst, BispMode::Weak, cfg.budget)?.intersects() {
        report.weak_only += 1;
    }
    let cx = BispCounterexample {
        instance: inst.clone(),
        mode: cfg.mode,
        alice_set: r.alice_set,
        bob_set: r.bob_set,
    };
    if !verify_counterexample(&cx, cfg.budget)? {
        return Err(Error::InvalidWitness("Bi-SP counterexample failed re-verification".into()));
    }
    report.counterexamples.push(cx);
    Ok(())
}

/// Seeded search over one instance family. Every sample draws from its own
/// random stream, so results do not depend on iteration order.
pub fn bisp_search(cfg: &SearchConfig) -> Result<BispReport> {
    let mut report = BispReport::default();
    match cfg.family {
        Family::Exhaustive => {
            for (i, inst) in exhaustive_bipartite(cfg.max_v).into_iter().enumerate() {
                report.instances += 1;
                let mut rng = stream(cfg.seed, i as u64);
                for _ in 0..cfg.samples {
                    let costs = random_costs(&mut rng, 2, inst.num_edges());
                    check_one(&inst.with_costs(costs)?, cfg, &mut report)?;
                }
            }
        }
        Family::Random => {
            for i in 0..cfg.samples {
                let mut rng = stream(cfg.seed, i as u64);
                let k = rng.gen_range(2..=cfg.max_v.max(2));
                let inst = random_bipartite(&mut rng, k, 0.5);
                let costs = random_costs(&mut rng, 2, inst.num_edges());
                report.instances += 1;
                check_one(&inst.with_costs(costs)?, cfg, &mut report)?;
            }
        }
        Family::Symmetric => {
            for i in 0..cfg.samples {
                let mut rng = stream(cfg.seed, i as u64);
                let k = rng.gen_range(1..=cfg.max_v.max(1));
                let players = rng.gen_range(1..=3);
                let inst = random_symmetric(&mut rng, k, players);
                let inst = inst.with_costs(random_costs(&mut rng, players, inst.num_edges()))?;
                report.instances += 1;
                match sp_game_ne(&inst, cfg.budget) {
                    Ok(Some(_)) => report.ne_found += 1,
                    Ok(None) => report.ne_missing += 1,
                    Err(Error::BudgetExceeded { .. }) => report.skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        Family::Terminal => {
            for i in 0..cfg.samples {
                let mut rng = stream(cfg.seed, i as u64);
                let k = rng.gen_range(2..=cfg.max_v.max(2));
                let inst = random_bipartite(&mut rng, k, 0.5);
                let inst = inst.with_costs(random_costs(&mut rng, 2, inst.num_edges()))?;
                report.instances += 1;
                match bisp_equivalence_check(&inst, &mut rng, cfg.budget) {
                    Ok(eq) => {
                        report.checks += 1;
                        report.max_inner_outcomes = report.max_inner_outcomes.max(eq.inner_outcomes);
                        if !eq.holds() {
                            report.equivalence_failures += 1;
                        }
                    }
                    Err(Error::BudgetExceeded { .. }) => report.skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Owner;
    use crate::rational::int;
    use crate::sp::{normalize, RawInstance};

    fn diamond(ua: [i64; 4], ub: [i64; 4]) -> SpInstance {
        // s(A) -> a(B) -> t, s -> b(B) -> t; edges 0,2 are the upper path
        let raw = RawInstance {
            owners: vec![Owner::ALICE, Owner::BOB, Owner::BOB, Owner::Terminal],
            edges: vec![(0, 1), (0, 2), (1, 3), (2, 3)],
            s: 0,
            t: 3,
            costs: vec![ua.iter().map(|&c| int(c)).collect(), ub.iter().map(|&c| int(c)).collect()],
        };
        normalize(&raw).unwrap()
    }

    #[test]
    fn single_edge() {
        let raw = RawInstance {
            owners: vec![Owner::ALICE, Owner::BOB, Owner::Terminal],
            edges: vec![(0, 2), (1, 2), (0, 1)],
            s: 0,
            t: 2,
            costs: vec![vec![int(1); 3], vec![int(1); 3]],
        };
        let inst = normalize(&raw).unwrap();
        let r = bisp_check(&inst, BispMode::Strong, 100).unwrap();
        assert!(r.intersects());

        let lone = normalize(&RawInstance {
            owners: vec![Owner::ALICE, Owner::Terminal],
            edges: vec![(0, 1)],
            s: 0,
            t: 1,
            costs: vec![vec![int(3)], vec![int(3)]],
        });
        // a lone Alice position leaves Bob without positions
        let lone = lone.unwrap();
        let r = bisp_check(&lone, BispMode::Strong, 100);
        assert!(r.is_err() || r.unwrap().common() == vec![SpOutcome::Path(vec![0])]);
    }

    #[test]
    fn diamond_upper_path_shared() {
        let inst = diamond([1, 5, 1, 5], [1, 5, 1, 5]);
        let r = bisp_check(&inst, BispMode::Strong, 100).unwrap();
        let upper = SpOutcome::Path(vec![0, 2]);
        assert!(r.alice_set.contains(&upper));
        assert!(r.bob_set.contains(&upper));
        assert_eq!(r.common(), vec![upper]);
        assert!(strong_bridge_holds(&inst, 100).unwrap());
        assert!(weak_bridge_holds(&inst, 100).unwrap());
    }

    #[test]
    fn dijkstra_and_bellman_ford_sets_agree() {
        let mut rng = stream(8, 1);
        for k in 2..7 {
            for _ in 0..30 {
                let inst = random_bipartite(&mut rng, k, 0.5);
                let inst = inst.with_costs(random_costs(&mut rng, 2, inst.num_edges())).unwrap();
                for mode in [BispMode::Strong, BispMode::Weak] {
                    assert_eq!(
                        bisp_check(&inst, mode, 1 << 20).unwrap(),
                        bisp_check_bellman_ford(&inst, mode, 1 << 20).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn bridges_on_random_instances() {
        let mut rng = stream(8, 2);
        for round in 0..150 {
            let inst = random_bipartite(&mut rng, 2 + round % 4, 0.5);
            let inst = inst.with_costs(random_costs(&mut rng, 2, inst.num_edges())).unwrap();
            assert!(strong_bridge_holds(&inst, 1 << 16).unwrap(), "{inst:?}");
            assert!(weak_bridge_holds(&inst, 1 << 16).unwrap(), "{inst:?}");
            let strong = bisp_check(&inst, BispMode::Strong, 1 << 16).unwrap();
            let weak = bisp_check(&inst, BispMode::Weak, 1 << 16).unwrap();
            assert!(!strong.intersects() || weak.intersects());
        }
    }

    #[test]
    fn fabricated_counterexample_is_rejected() {
        let inst = diamond([1, 5, 1, 5], [1, 5, 1, 5]);
        let r = bisp_check(&inst, BispMode::Strong, 100).unwrap();
        let cx = BispCounterexample {
            instance: inst,
            mode: BispMode::Strong,
            alice_set: r.alice_set,
            bob_set: BTreeSet::new(),
        };
        assert!(!verify_counterexample(&cx, 100).unwrap());
    }

    #[test]
    fn small_searches_are_clean() {
        for family in [Family::Exhaustive, Family::Random, Family::Symmetric, Family::Terminal] {
            let cfg = SearchConfig {
                family,
                max_v: 3,
                samples: 5,
                seed: 1,
                mode: BispMode::Strong,
                budget: 1 << 16,
            };
            let report = bisp_search(&cfg).unwrap();
            assert!(report.is_clean(), "{family:?}: {report:?}");
            assert!(report.instances > 0);
        }
    }
}
