//! Normal-form solvers: Nash equilibria, saddle points, the three solvability
//! predicates and lexicographically safe equilibria.
//!
//! Solvability is decided over strict preference orders. Collapsing two
//! adjacent values of a strict order keeps every weak best-response inequality,
//! so an equilibrium under the refined order survives any tie-introducing
//! coarsening; strict orders therefore cover all real-valued rewards.

use std::cmp::Ordering;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{GameForm, Situation};
use crate::rational::Rational;
use crate::tightness;

/// One value per outcome.
pub type Reward = Vec<Rational>;

/// Strict total order on outcomes, best first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PreferenceOrder {
    pub ranking: Vec<usize>,
}

impl PreferenceOrder {
    pub fn new(ranking: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; ranking.len()];
        for &o in &ranking {
            if o >= ranking.len() || seen[o] {
                return Err(Error::Precondition(format!(
                    "{ranking:?} is not a permutation"
                )));
            }
            seen[o] = true;
        }
        Ok(PreferenceOrder { ranking })
    }

    /// Rank value per outcome: the best outcome gets `|O|`, the worst 1.
    pub fn values(&self) -> Vec<u32> {
        let n = self.ranking.len();
        let mut v = vec![0u32; n];
        for (pos, &o) in self.ranking.iter().enumerate() {
            v[o] = (n - pos) as u32;
        }
        v
    }

    pub fn to_reward(&self) -> Reward {
        self.values()
            .into_iter()
            .map(|v| Rational::from_integer(v.into()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaddleResult {
    pub saddle: Option<Situation>,
    pub maxmin: Rational,
    pub minmax: Rational,
}

fn check_reward(g: &GameForm, r: &[Rational], who: &str) -> Result<()> {
    if r.len() != g.num_outcomes() {
        return Err(Error::Precondition(format!(
            "{who} reward has {} entries, form has {} outcomes",
            r.len(),
            g.num_outcomes()
        )));
    }
    Ok(())
}

/// Mutual best responses with both players maximizing, in row-major order.
pub fn nash_equilibria(g: &GameForm, ra: &[Rational], rb: &[Rational]) -> Result<Vec<Situation>> {
    check_reward(g, ra, "Alice")?;
    check_reward(g, rb, "Bob")?;
    Ok(ne_by_values(g, ra, rb))
}

pub(crate) fn ne_by_values<T: Ord>(g: &GameForm, ra: &[T], rb: &[T]) -> Vec<Situation> {
    let row_best: Vec<&T> = (0..g.rows())
        .map(|x| g.row(x).iter().map(|&o| &rb[o]).max().expect("nonempty row"))
        .collect();
    let col_best: Vec<&T> = (0..g.cols())
        .map(|y| (0..g.rows()).map(|x| &ra[g.get(x, y)]).max().expect("nonempty column"))
        .collect();
    let mut out = Vec::new();
    for x in 0..g.rows() {
        for y in 0..g.cols() {
            let o = g.get(x, y);
            if &rb[o] == row_best[x] && &ra[o] == col_best[y] {
                out.push(Situation::new(x, y));
            }
        }
    }
    out
}

fn has_ne_by_values(g: &GameForm, ra: &[u32], rb: &[u32]) -> bool {
    let mut col_best = vec![0u32; g.cols()];
    for x in 0..g.rows() {
        for (y, &o) in g.row(x).iter().enumerate() {
            col_best[y] = col_best[y].max(ra[o]);
        }
    }
    (0..g.rows()).any(|x| {
        let row = g.row(x);
        let best = row.iter().map(|&o| rb[o]).max().expect("nonempty row");
        row.iter()
            .enumerate()
            .any(|(y, &o)| rb[o] == best && ra[o] == col_best[y])
    })
}

/// Saddle point of an arbitrary `rows × cols` matrix; the row player maximizes.
pub fn saddle_of<T: Ord + Clone>(
    rows: usize,
    cols: usize,
    value: impl Fn(usize, usize) -> T,
) -> (Option<Situation>, T, T) {
    let table: Vec<Vec<T>> = (0..rows)
        .map(|x| (0..cols).map(|y| value(x, y)).collect())
        .collect();
    let row_min: Vec<T> = table
        .iter()
        .map(|r| r.iter().min().expect("nonempty").clone())
        .collect();
    let col_max: Vec<T> = (0..cols)
        .map(|y| table.iter().map(|r| &r[y]).max().expect("nonempty").clone())
        .collect();
    let maxmin = row_min.iter().max().expect("nonempty").clone();
    let minmax = col_max.iter().min().expect("nonempty").clone();
    let mut saddle = None;
    if maxmin == minmax {
        'outer: for x in 0..rows {
            for y in 0..cols {
                if table[x][y] == row_min[x] && table[x][y] == col_max[y] {
                    saddle = Some(Situation::new(x, y));
                    break 'outer;
                }
            }
        }
    }
    (saddle, maxmin, minmax)
}

/// Zero-sum game `(g, r, −r)`: Alice maximizes `r`, Bob minimizes it.
pub fn saddle_point(g: &GameForm, r: &[Rational]) -> Result<SaddleResult> {
    check_reward(g, r, "zero-sum")?;
    let (saddle, maxmin, minmax) = saddle_of(g.rows(), g.cols(), |x, y| r[g.get(x, y)].clone());
    Ok(SaddleResult {
        saddle,
        maxmin,
        minmax,
    })
}

fn has_saddle_by_values(g: &GameForm, r: &[u32]) -> bool {
    let maxmin = (0..g.rows())
        .map(|x| g.row(x).iter().map(|&o| r[o]).min().expect("nonempty"))
        .max()
        .expect("nonempty");
    let minmax = (0..g.cols())
        .map(|y| (0..g.rows()).map(|x| r[g.get(x, y)]).max().expect("nonempty"))
        .min()
        .expect("nonempty");
    maxmin == minmax
}

/// Rearranges to the next permutation in lexicographic order; false after the last.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |a, b| a.saturating_mul(b))
}

/// Evidence that a form is not solvable in one of the three senses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NfCounterexample {
    Nash {
        alice: PreferenceOrder,
        bob: PreferenceOrder,
    },
    ZeroSum {
        order: PreferenceOrder,
    },
    WinLose {
        alice_wins: Vec<usize>,
    },
}

/// Default cap on the number of preference-order pairs for Nash-solvability.
pub const ORDER_BUDGET: u128 = 20_000_000;

pub fn is_nash_solvable(g: &GameForm, budget: u128) -> Result<Option<NfCounterexample>> {
    let n = g.num_outcomes();
    let needed = factorial(n).saturating_mul(factorial(n));
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut a: Vec<usize> = (0..n).collect();
    loop {
        let oa = PreferenceOrder { ranking: a.clone() };
        let va = oa.values();
        let mut b: Vec<usize> = (0..n).collect();
        loop {
            let ob = PreferenceOrder { ranking: b.clone() };
            if !has_ne_by_values(g, &va, &ob.values()) {
                return Ok(Some(NfCounterexample::Nash { alice: oa, bob: ob }));
            }
            if !next_permutation(&mut b) {
                break;
            }
        }
        if !next_permutation(&mut a) {
            return Ok(None);
        }
    }
}

/// Sampled variant for outcome sets too large for exhaustive order pairs.
pub fn is_nash_solvable_sampled<R: rand::Rng>(
    g: &GameForm,
    samples: usize,
    rng: &mut R,
) -> Option<NfCounterexample> {
    use rand::seq::SliceRandom;
    let n = g.num_outcomes();
    let mut a: Vec<usize> = (0..n).collect();
    let mut b: Vec<usize> = (0..n).collect();
    for _ in 0..samples {
        a.shuffle(rng);
        b.shuffle(rng);
        let oa = PreferenceOrder { ranking: a.clone() };
        let ob = PreferenceOrder { ranking: b.clone() };
        if !has_ne_by_values(g, &oa.values(), &ob.values()) {
            return Some(NfCounterexample::Nash { alice: oa, bob: ob });
        }
    }
    None
}

pub fn is_zero_sum_solvable(g: &GameForm, budget: u128) -> Result<Option<NfCounterexample>> {
    let n = g.num_outcomes();
    if factorial(n) > budget {
        return Err(Error::BudgetExceeded {
            needed: factorial(n),
            budget,
        });
    }
    let mut a: Vec<usize> = (0..n).collect();
    loop {
        let order = PreferenceOrder { ranking: a.clone() };
        if !has_saddle_by_values(g, &order.values()) {
            return Ok(Some(NfCounterexample::ZeroSum { order }));
        }
        if !next_permutation(&mut a) {
            return Ok(None);
        }
    }
}

pub fn is_win_lose_solvable(g: &GameForm, budget: u128) -> Result<Option<NfCounterexample>> {
    let n = g.num_outcomes();
    if n >= 127 || (1u128 << n) > budget {
        return Err(Error::BudgetExceeded {
            needed: 1u128.checked_shl(n as u32).unwrap_or(u128::MAX),
            budget,
        });
    }
    let mut values = vec![0u32; n];
    for mask in 0u128..(1u128 << n) {
        for (o, v) in values.iter_mut().enumerate() {
            *v = (mask >> o & 1) as u32;
        }
        if !has_saddle_by_values(g, &values) {
            return Ok(Some(NfCounterexample::WinLose {
                alice_wins: (0..n).filter(|&o| mask >> o & 1 == 1).collect(),
            }));
        }
    }
    Ok(None)
}

/// Turns a ±1 win-lose certificate into the reward Alice maximizes.
pub fn win_lose_reward(num_outcomes: usize, alice_wins: &[usize]) -> Reward {
    (0..num_outcomes)
        .map(|o| {
            if alice_wins.contains(&o) {
                Rational::one()
            } else {
                -Rational::one()
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolvabilityReport {
    pub tight: bool,
    pub nash_solvable: bool,
    pub zero_sum_solvable: bool,
    pub win_lose_solvable: bool,
    pub counterexample: Option<NfCounterexample>,
}

impl SolvabilityReport {
    /// All four properties agree.
    pub fn is_consistent(&self) -> bool {
        self.tight == self.nash_solvable
            && self.nash_solvable == self.zero_sum_solvable
            && self.zero_sum_solvable == self.win_lose_solvable
    }
}

pub fn solvability_report(g: &GameForm, budget: u128) -> Result<SolvabilityReport> {
    let tight = tightness::is_tight_dual(g)?;
    let nash = is_nash_solvable(g, budget)?;
    let zs = is_zero_sum_solvable(g, budget)?;
    let wl = is_win_lose_solvable(g, budget)?;
    Ok(SolvabilityReport {
        tight,
        nash_solvable: nash.is_none(),
        zero_sum_solvable: zs.is_none(),
        win_lose_solvable: wl.is_none(),
        counterexample: nash.or(zs).or(wl),
    })
}

/// Compares ascending security vectors; running out first counts as better,
/// so a support strictly inside another always wins.
fn compare_security(a: &[&Rational], b: &[&Rational]) -> Ordering {
    for (u, v) in a.iter().zip(b) {
        match u.cmp(v) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    b.len().cmp(&a.len())
}

/// Alice's lexicographically safe strategy: the row maximizing the ascending
/// vector of `ra` over its support, ties to the lowest index.
pub fn lex_safe_strategy(g: &GameForm, ra: &[Rational]) -> Result<usize> {
    check_reward(g, ra, "Alice")?;
    let vectors: Vec<Vec<&Rational>> = (0..g.rows())
        .map(|x| {
            let mut v: Vec<&Rational> = g.row_support(x).ones().map(|o| &ra[o]).collect();
            v.sort();
            v
        })
        .collect();
    let mut best = 0;
    for x in 1..g.rows() {
        if compare_security(&vectors[x], &vectors[best]) == Ordering::Greater {
            best = x;
        }
    }
    Ok(best)
}

/// The equilibrium `(x⁰, y*)`: Alice plays her lexicographically safe row,
/// Bob a column realizing his favourite outcome of that row's support.
pub fn lex_safe_ne(g: &GameForm, ra: &[Rational], rb: &[Rational]) -> Result<Situation> {
    check_reward(g, rb, "Bob")?;
    let x0 = lex_safe_strategy(g, ra)?;
    let support = g.row_support(x0);
    let best = support.ones().map(|o| &rb[o]).max().expect("nonempty support");
    let (_, basic_cols) = g.basic_strategies();
    let col_best: Vec<&Rational> = (0..g.cols())
        .map(|y| (0..g.rows()).map(|x| &ra[g.get(x, y)]).max().expect("nonempty"))
        .collect();
    let mut fallback = None;
    for o in support.ones().filter(|&o| &rb[o] == best) {
        for y in (0..g.cols()).filter(|&y| g.get(x0, y) == o) {
            if col_best[y] != &ra[o] {
                continue;
            }
            if basic_cols.contains(y) && g.is_simple(x0, y)? {
                return Ok(Situation::new(x0, y));
            }
            fallback.get_or_insert(y);
        }
    }
    match fallback {
        Some(y) => Err(Error::NeGuaranteeViolated(format!(
            "equilibrium ({x0}, {y}) is not simple in basic strategies"
        ))),
        None => Err(Error::NeGuaranteeViolated(format!(
            "no column completes row {x0} to an equilibrium"
        ))),
    }
}

/// Mirror construction with the roles of Alice and Bob swapped.
pub fn lex_safe_ne_b(g: &GameForm, ra: &[Rational], rb: &[Rational]) -> Result<Situation> {
    let s = lex_safe_ne(&g.transpose(), rb, ra)?;
    Ok(Situation::new(s.y, s.x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::corpus::*;
    use crate::rational::int;

    fn r(v: &[i64]) -> Reward {
        v.iter().map(|&n| int(n)).collect()
    }

    #[test]
    fn equilibria_examples() {
        let g = g1();
        let ne = nash_equilibria(&g, &r(&[2, 1, 0]), &r(&[2, 1, 0])).unwrap();
        assert!(ne.contains(&Situation::new(0, 0)));
        let one = GameForm::new(vec![vec![0]]).unwrap();
        assert_eq!(nash_equilibria(&one, &r(&[5]), &r(&[1])).unwrap(), vec![Situation::new(0, 0)]);
        let ne = nash_equilibria(&g7(), &r(&[1, -1]), &r(&[-1, 1])).unwrap();
        assert!(ne.is_empty());
        assert!(nash_equilibria(&g7(), &r(&[1]), &r(&[1, 2])).is_err());
    }

    #[test]
    fn saddle_examples() {
        let s = saddle_point(&g7(), &r(&[1, -1])).unwrap();
        assert_eq!(s.saddle, None);
        assert_eq!((s.maxmin, s.minmax), (int(-1), int(1)));
        let constant = GameForm::new(vec![vec![0, 0], vec![0, 0]]).unwrap();
        let s = saddle_point(&constant, &r(&[7])).unwrap();
        assert_eq!(s.saddle, Some(Situation::new(0, 0)));
        assert_eq!(s.maxmin, int(7));
        let s = saddle_point(&g1(), &r(&[0, 1, -1])).unwrap();
        assert!(s.saddle.is_some());
    }

    #[test]
    fn golden_solvability() {
        for (i, g) in golden().iter().enumerate() {
            let rep = solvability_report(g, ORDER_BUDGET).unwrap();
            assert!(rep.is_consistent(), "g{} {rep:?}", i + 1);
            assert_eq!(rep.tight, i < 6);
        }
    }

    #[test]
    fn nash_counterexamples_are_ne_free() {
        for g in [g7(), g8(), g9()] {
            match is_nash_solvable(&g, ORDER_BUDGET).unwrap() {
                Some(NfCounterexample::Nash { alice, bob }) => {
                    let ne = nash_equilibria(&g, &alice.to_reward(), &bob.to_reward()).unwrap();
                    assert!(ne.is_empty());
                }
                other => panic!("expected a certificate, got {other:?}"),
            }
        }
    }

    #[test]
    fn single_row_and_single_outcome_forms() {
        let row = GameForm::new(vec![vec![0, 1, 2]]).unwrap();
        assert!(is_nash_solvable(&row, ORDER_BUDGET).unwrap().is_none());
        let one = GameForm::new(vec![vec![0, 0]]).unwrap();
        assert!(is_zero_sum_solvable(&one, ORDER_BUDGET).unwrap().is_none());
        assert!(is_win_lose_solvable(&one, ORDER_BUDGET).unwrap().is_none());
    }

    #[test]
    fn lex_safe_row_of_g1() {
        assert_eq!(lex_safe_strategy(&g1(), &r(&[2, 1, 0])).unwrap(), 0);
        let constant = GameForm::new(vec![vec![0, 0], vec![0, 0]]).unwrap();
        let s = lex_safe_ne(&constant, &r(&[3]), &r(&[1])).unwrap();
        assert_eq!(s, Situation::new(0, 0));
    }

    #[test]
    fn lex_safe_prefers_smaller_support() {
        // g6: row 0 support {o1} is inside row 1 support {o1,o2}.
        assert_eq!(lex_safe_strategy(&g6(), &r(&[0, 5])).unwrap(), 0);
    }

    #[test]
    fn permutations_are_complete() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(p, vec![3, 2, 1, 0]);
    }
}
