//! The cross-module property checks, one function per property, and a
//! driver that runs them all under one seed and reports counts as JSON.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::cert::{self, Envelope};
use crate::enumerate::{all_forms, random_form};
use crate::error::Result;
use crate::forms::{corpus, GameForm, Situation};
use crate::graph::{
    normal_form, outcome_universe, play, random_graph, scc_decompose, solve_win_lose, Mode, OutcomeKey, Owner,
    ALICE, BOB,
};
use crate::nf::{
    lex_safe_ne, lex_safe_ne_b, lex_safe_strategy, nash_equilibria, saddle_point, solvability_report,
    win_lose_reward,
};
use crate::rational::{dot, int, Rational};
use crate::rng::stream;
use crate::sp::{self, BispMode, Family, SearchConfig};
use crate::tightness::{build_hypergraphs, is_tight, is_tight_dual, Method, Verdict, DEFAULT_BUDGET};
use crate::vform::{
    embed, is_v_tight, mean_payoff_vform, nonsolvable_u, random_utility, random_vform,
    search_ne_free_mean_payoff, verify_ne_free, zero_sum_value, VVerdict,
};
use crate::vplus::{
    all_pbrs, asumability_filter, degeneracy, is_vplus_tight, ne_set, random_cost, random_vplus_form, Asumability,
    Side, VPlusForm, VPlusVerdict,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Stream ids, one per property, so that properties draw independently.
mod task {
    pub const SAMPLED_FORMS: u64 = 1;
    pub const COLLAPSE: u64 = 2;
    pub const LEX: u64 = 3;
    pub const LEX_SEARCH: u64 = 4;
    pub const GRAPHS: u64 = 5;
    pub const MERGE: u64 = 6;
    pub const VFORMS: u64 = 7;
    pub const MEAN_PAYOFF: u64 = 8;
    pub const NE_FREE: u64 = 9;
    pub const VPLUS: u64 = 10;
    pub const SP: u64 = 11;
    pub const CATCH22: u64 = 12;
    pub const BISP: u64 = 1000;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub counts: BTreeMap<String, u64>,
}

impl PropertyResult {
    pub fn new(name: &str) -> Self {
        PropertyResult {
            name: name.to_string(),
            checked: 0,
            violations: 0,
            counts: BTreeMap::new(),
        }
    }

    pub fn check(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
        }
    }

    pub fn bump(&mut self, key: &str) {
        *self.counts.entry(key.to_string()).or_default() += 1;
    }

    pub fn count(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    /// Marks a property that needs at least one discovered example.
    fn require(&mut self, key: &str) {
        if self.count(key) == 0 {
            self.violations += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Golden forms with their expected tightness and rectangularity.
pub fn golden() -> Result<PropertyResult> {
    let mut r = PropertyResult::new("golden_corpus");
    let tight = [true, true, true, true, true, true, false, false, false];
    let rectangular = [true, true, false, false, false, false, false, true, true];
    for (i, g) in corpus::golden().iter().enumerate() {
        for m in Method::ALL {
            let v = is_tight(g, m, DEFAULT_BUDGET)?;
            r.check(v.is_tight() == tight[i]);
            if let Verdict::NotTight(w) = v {
                r.check(w.is_valid_for(g));
            }
        }
        r.check(g.is_rectangular() == rectangular[i]);
        let (rows, cols) = g.basic_strategies();
        // only g6 has a non-basic strategy on each side
        let expect_all = i != 5;
        r.check((rows.count_ones(..) == g.rows()) == expect_all && (cols.count_ones(..) == g.cols()) == expect_all);
    }
    let simple = |g: &GameForm, x, y| g.is_simple(x, y).unwrap_or(false);
    let (g3, g4, g6, g7) = (corpus::g3(), corpus::g4(), corpus::g6(), corpus::g7());
    for x in 0..3 {
        for y in 0..3 {
            r.check(simple(&g3, x, y) == (x != y));
            r.check(simple(&g4, x, y) == ((x, y) != (1, 1)));
        }
    }
    r.check((0..2).all(|x| (0..2).all(|y| !simple(&g7, x, y))));
    r.check(!simple(&g6, 1, 1) && simple(&g6, 0, 0) && simple(&g6, 0, 1) && simple(&g6, 1, 0));
    Ok(r)
}

/// All canonical forms up to `3×3×3` plus `samples` random forms with
/// four outcomes.
pub fn form_corpus(seed: u64, samples: usize) -> Vec<GameForm> {
    let mut forms = all_forms(3, 3, 3);
    let mut rng = stream(seed, task::SAMPLED_FORMS);
    let shapes = [(2, 2), (2, 3), (3, 2), (3, 3)];
    for _ in 0..samples {
        let (rows, cols) = *shapes.choose(&mut rng).expect("nonempty");
        forms.push(random_form(&mut rng, rows, cols, 4));
    }
    forms
}

/// Method agreement, witness soundness, the two duality routes,
/// rectangularity against simplicity, cell-in-support, and the four-way
/// equivalence, over one form corpus.
pub fn form_properties(forms: &[GameForm]) -> Result<Vec<PropertyResult>> {
    let mut methods = PropertyResult::new("tightness_methods_agree");
    let mut witnesses = PropertyResult::new("tightness_witnesses_sound");
    let mut dual = PropertyResult::new("duality_routes_agree");
    let mut rect = PropertyResult::new("rectangular_iff_all_simple");
    let mut supports = PropertyResult::new("cells_in_supports");
    let mut four = PropertyResult::new("four_way_equivalence");
    for g in forms {
        let verdicts = Method::ALL
            .iter()
            .map(|&m| is_tight(g, m, DEFAULT_BUDGET))
            .collect::<Result<Vec<_>>>()?;
        let first = verdicts[0].is_tight();
        methods.check(verdicts.iter().all(|v| v.is_tight() == first));
        for v in &verdicts {
            if let Verdict::NotTight(w) = v {
                witnesses.check(w.is_valid_for(g));
            }
        }
        let (a, b) = build_hypergraphs(g);
        dual.check(a.is_dual_by_enumeration(&b)? == a.is_dual_by_transversals(&b)?);
        let all_simple = (0..g.rows()).all(|x| (0..g.cols()).all(|y| g.is_simple(x, y).unwrap_or(false)));
        rect.check(g.is_rectangular() == all_simple);
        let (rs, cs) = g.supports();
        supports.check((0..g.rows()).all(|x| (0..g.cols()).all(|y| rs[x].contains(g.get(x, y)) && cs[y].contains(g.get(x, y)))));
        let report = solvability_report(g, crate::nf::ORDER_BUDGET)?;
        four.check(report.is_consistent() && report.tight == first);
        four.bump(if first { "tight" } else { "not_tight" });
    }
    Ok(vec![methods, witnesses, dual, rect, supports, four])
}

fn random_order_values<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    let mut v: Vec<i64> = (0..n as i64).collect();
    v.shuffle(rng);
    v.into_iter().map(int).collect()
}

/// An NE under strict orders stays an NE when two adjacent values merge.
pub fn ne_monotone_collapse(seed: u64, samples: usize) -> Result<PropertyResult> {
    let mut r = PropertyResult::new("ne_monotone_collapse");
    let mut rng = stream(seed, task::COLLAPSE);
    for _ in 0..samples {
        let g = random_form(&mut rng, 3, 3, 4);
        let ra = random_order_values(&mut rng, 4);
        let rb = random_order_values(&mut rng, 4);
        let ne = nash_equilibria(&g, &ra, &rb)?;
        let k = int(rng.gen_range(0..3));
        let collapse = |v: &[Rational]| -> Vec<Rational> {
            v.iter().map(|x| if *x == &k + int(1) { k.clone() } else { x.clone() }).collect()
        };
        let (ca, cb) = if rng.gen_bool(0.5) { (collapse(&ra), rb.clone()) } else { (ra.clone(), collapse(&rb)) };
        let after = nash_equilibria(&g, &ca, &cb)?;
        for s in ne {
            r.check(after.contains(&s));
        }
    }
    Ok(r)
}

/// For tight forms both lexicographically safe constructions are NE; with
/// zero-sum rewards they are saddle points of equal value.
pub fn lex_safe_equilibria(forms: &[GameForm], seed: u64, samples_per_form: usize) -> Result<PropertyResult> {
    let mut r = PropertyResult::new("lex_safe_equilibria");
    let mut rng = stream(seed, task::LEX);
    for g in forms.iter().filter(|g| is_tight_dual(g).unwrap_or(false)) {
        for _ in 0..samples_per_form {
            let n = g.num_outcomes();
            let ra: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(-3..=3))).collect();
            let rb: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(-3..=3))).collect();
            let ne = nash_equilibria(g, &ra, &rb)?;
            let a = lex_safe_ne(g, &ra, &rb);
            let b = lex_safe_ne_b(g, &ra, &rb);
            r.check(a.as_ref().is_ok_and(|s| ne.contains(s)));
            r.check(b.as_ref().is_ok_and(|s| ne.contains(s)));

            let neg: Vec<Rational> = ra.iter().map(|x| -x).collect();
            let ne = nash_equilibria(g, &ra, &neg)?;
            match (lex_safe_ne(g, &ra, &neg), lex_safe_ne_b(g, &ra, &neg)) {
                (Ok(a), Ok(b)) => {
                    r.check(ne.contains(&a) && ne.contains(&b));
                    r.check(ra[g.get(a.x, a.y)] == ra[g.get(b.x, b.y)]);
                    r.bump("zero_sum");
                }
                _ => r.check(false),
            }
        }
    }
    Ok(r)
}

/// A tight form and rewards where the pair of lexicographically safe
/// strategies is not an NE.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexPairExample {
    pub form: GameForm,
    pub ra: Vec<Rational>,
    pub rb: Vec<Rational>,
    pub pair: Situation,
}

pub fn find_lex_pair_not_ne(forms: &[GameForm], seed: u64, attempts: usize) -> Result<Option<LexPairExample>> {
    let mut rng = stream(seed, task::LEX_SEARCH);
    let tight: Vec<&GameForm> = forms.iter().filter(|g| is_tight_dual(g).unwrap_or(false) && g.num_outcomes() > 1).collect();
    for _ in 0..attempts {
        let g = *tight.choose(&mut rng).expect("tight forms exist");
        let n = g.num_outcomes();
        let ra = random_order_values(&mut rng, n);
        let rb = random_order_values(&mut rng, n);
        let x0 = lex_safe_strategy(g, &ra)?;
        let y0 = lex_safe_strategy(&g.transpose(), &rb)?;
        let pair = Situation::new(x0, y0);
        if !nash_equilibria(g, &ra, &rb)?.contains(&pair) {
            return Ok(Some(LexPairExample { form: g.clone(), ra, rb, pair }));
        }
    }
    Ok(None)
}

pub fn lex_pair_not_ne(forms: &[GameForm], seed: u64, attempts: usize) -> Result<PropertyResult> {
    let mut r = PropertyResult::new("lex_safe_pair_not_always_ne");
    if let Some(ex) = find_lex_pair_not_ne(forms, seed, attempts)? {
        // re-check from scratch
        let ne = nash_equilibria(&ex.form, &ex.ra, &ex.rb)?;
        r.check(!ne.contains(&ex.pair) && is_tight_dual(&ex.form)?);
        r.bump("found");
    }
    r.require("found");
    Ok(r)
}

/// Win-lose solver against the normal-form saddle, and tightness of every
/// extracted graph form.
pub fn graph_solver_oracle(seed: u64, samples: usize) -> Result<Vec<PropertyResult>> {
    let mut oracle = PropertyResult::new("win_lose_solver_matches_saddle");
    let mut tight = PropertyResult::new("graph_forms_tight");
    let mut rng = stream(seed, task::GRAPHS);
    let mut done = 0;
    while done < samples {
        let n = rng.gen_range(2..=8);
        let g = random_graph(&mut rng, n, 3, 0.25);
        let dec = scc_decompose(&g);
        let mode = if done % 2 == 0 { Mode::Msdggs } else { Mode::Dggs };
        let Ok(nf) = normal_form(&g, &dec, mode, 1 << 12) else { continue };
        done += 1;
        tight.check(is_tight_dual(&nf.form)?);
        let (mut oa, mut ob) = (Vec::new(), Vec::new());
        for k in outcome_universe(&g, &dec, mode) {
            if rng.gen_bool(0.5) {
                oa.push(k);
            } else {
                ob.push(k);
            }
        }
        let s = solve_win_lose(&g, &dec, mode, &oa, &ob)?;
        let wins: Vec<usize> = oa.iter().filter_map(|&k| nf.outcome_index(k)).collect();
        let sp = saddle_point(&nf.form, &win_lose_reward(nf.form.num_outcomes(), &wins))?;
        let expected = if sp.maxmin == int(1) { ALICE } else { BOB };
        oracle.check(sp.saddle.is_some() && s.winner_at_start(&g) == expected);
        // the returned strategy wins against every reply
        let other = if expected == ALICE { &nf.bob } else { &nf.alice };
        let mut choice = s.strategy.clone();
        let mut beats_all = true;
        for j in 0..other.size() as usize {
            other.apply(j, &mut choice);
            let key = OutcomeKey::of(&play(&g, &choice)?, &dec, mode);
            beats_all &= oa.contains(&key) == (expected == ALICE);
        }
        oracle.check(beats_all);
    }
    Ok(vec![oracle, tight])
}

fn random_class<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=n);
    (0..n).map(|_| rng.gen_range(0..k)).collect()
}

/// Merging outcomes keeps tight forms tight; some non-tight form becomes
/// tight after a merge.
pub fn merge_preserves_tightness(forms: &[GameForm], seed: u64) -> Result<PropertyResult> {
    let mut r = PropertyResult::new("merge_preserves_tightness");
    let mut rng = stream(seed, task::MERGE);
    for g in forms {
        let class = random_class(&mut rng, g.num_outcomes());
        let merged = g.relabel(&class)?;
        if is_tight_dual(g)? {
            r.check(is_tight_dual(&merged)?);
        } else if merged.num_outcomes() > 1 && is_tight_dual(&merged)? {
            r.bump("non_tight_became_tight");
        }
    }
    r.require("non_tight_became_tight");
    Ok(r)
}

/// The unit-vector embedding keeps the tightness verdict.
pub fn embed_preserves_tightness(forms: &[GameForm]) -> Result<PropertyResult> {
    let mut r = PropertyResult::new("embed_preserves_tightness");
    for g in forms {
        r.check(is_v_tight(&embed(g), DEFAULT_BUDGET)?.is_tight() == is_tight_dual(g)?);
    }
    Ok(r)
}

/// v-tight forms are solvable under every sampled u; the others fail
/// under their certified u. Returns the separation
/// certificates it met, for the certificate check.
pub fn v_tightness_vs_saddles(seed: u64, forms: usize, u_samples: usize) -> Result<(PropertyResult, Vec<Envelope>)> {
    let mut r = PropertyResult::new("v_tightness_vs_saddles");
    let mut certs = Vec::new();
    let mut rng = stream(seed, task::VFORMS);
    for i in 0..forms {
        let (rows, cols) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let dim = rng.gen_range(1..=3);
        let pool = rng.gen_range(2..=5);
        let gv = random_vform(&mut rng, rows, cols, dim, pool, 2);
        match is_v_tight(&gv, DEFAULT_BUDGET)? {
            VVerdict::Tight => {
                r.bump("tight");
                for _ in 0..u_samples {
                    let u = random_utility(&mut rng, dim, 5);
                    r.check(zero_sum_value(&gv, &u)?.saddle.is_some());
                }
            }
            VVerdict::NotTight(c) => {
                r.bump("not_tight");
                r.check(c.is_valid_for(&gv));
                let sv = zero_sum_value(&gv, &c.u)?;
                r.check(sv.saddle.is_none() && sv.maxmin < sv.minmax);
                let u = nonsolvable_u(&gv, DEFAULT_BUDGET)?;
                r.check(u.is_some_and(|u| zero_sum_value(&gv, &u).is_ok_and(|s| s.saddle.is_none())));
                if i % 16 == 0 {
                    certs.push(cert::separation_certificate(&gv, &c));
                }
            }
        }
    }
    Ok((r, certs))
}

/// Mean-payoff vectors are cycle distributions and the forms are v-tight.
pub fn mean_payoff_forms(seed: u64, samples: usize) -> Result<PropertyResult> {
    let mut r = PropertyResult::new("mean_payoff_forms_v_tight");
    let mut rng = stream(seed, task::MEAN_PAYOFF);
    for round in 0..samples {
        let n = 1 + round % 5;
        let owner = if rng.gen_bool(0.5) { Owner::ALICE } else { Owner::BOB };
        let g = random_graph(&mut rng, n, 3, 0.2).with_terminal_loops(owner);
        let mp = mean_payoff_vform(&g, 1 << 12)?;
        for (w, cyc) in mp.vform.vectors().iter().zip(&mp.cycles) {
            let k = Rational::from_integer((cyc.len() as i64).into());
            let on_cycle = (0..w.len()).all(|e| {
                if cyc.contains(&e) {
                    w[e] == Rational::one() / &k
                } else {
                    w[e].is_zero()
                }
            });
            r.check(on_cycle && is_simple_cycle(&g, cyc));
            r.check(w.iter().all(|v| !v.is_negative()) && w.iter().sum::<Rational>() == Rational::one());
        }
        r.check(is_v_tight(&mp.vform, DEFAULT_BUDGET)?.is_tight());
    }
    Ok(r)
}

/// The edges, in any order, form one cycle through distinct positions.
fn is_simple_cycle(g: &crate::graph::GameGraph, edges: &[usize]) -> bool {
    let mut heads: Vec<usize> = edges.iter().map(|&e| g.edge(e).0).collect();
    heads.sort_unstable();
    heads.dedup();
    if edges.is_empty() || heads.len() != edges.len() {
        return false;
    }
    // heads are distinct, so each edge has at most one successor
    let next = |e: usize| edges.iter().copied().find(|&f| g.edge(f).0 == g.edge(e).1);
    let mut e = edges[0];
    for step in 1..=edges.len() {
        match next(e) {
            Some(f) if f == edges[0] => return step == edges.len(),
            Some(f) => e = f,
            None => return false,
        }
    }
    false
}

/// An NE-free 3×3 arena is found and re-verified; 2×b arenas yield none.
pub fn mean_payoff_ne_free(seed: u64, samples_3x3: usize, samples_2xb: usize) -> Result<(PropertyResult, Vec<Envelope>)> {
    let mut r = PropertyResult::new("mean_payoff_ne_free_search");
    let mut certs = Vec::new();
    let mut rng = stream(seed, task::NE_FREE);
    if let Some(c) = search_ne_free_mean_payoff(&mut rng, 3, 3, samples_3x3)? {
        r.check(verify_ne_free(&c)?);
        r.bump("found_3x3");
        certs.push(cert::ne_free_certificate(&c));
    }
    r.require("found_3x3");
    for b in 1..=3 {
        let found = search_ne_free_mean_payoff(&mut rng, 2, b, samples_2xb)?;
        r.check(found.is_none());
    }
    Ok((r, certs))
}

/// Random weakly rectangular v⁺-forms up to `3×3`, `m ≤ 4`.
pub fn vplus_corpus(seed: u64, count: usize) -> Vec<VPlusForm> {
    let mut rng = stream(seed, task::VPLUS);
    (0..count)
        .map(|_| {
            let (rows, cols) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let dim = rng.gen_range(1..=4);
            random_vplus_form(&mut rng, rows, cols, dim, 0.15)
        })
        .collect()
}

/// Tight forms have an NE under every sampled cost pair, non-tight ones
/// lose every NE under their witness costs.
pub fn vplus_tightness_vs_equilibria(forms: &[VPlusForm], seed: u64, cost_pairs: usize) -> Result<(PropertyResult, Vec<Envelope>)> {
    let mut r = PropertyResult::new("vplus_tightness_vs_equilibria");
    let mut certs = Vec::new();
    let mut rng = stream(seed, task::VPLUS + 1);
    for (i, g) in forms.iter().enumerate() {
        match is_vplus_tight(g, DEFAULT_BUDGET)? {
            VPlusVerdict::Tight => {
                r.bump("tight");
                let deg = degeneracy(g);
                let clean_side = deg.rows.count_ones(..) == 0 || deg.cols.count_ones(..) == 0;
                for _ in 0..cost_pairs {
                    let ua = random_cost(&mut rng, g.dim());
                    let ub = random_cost(&mut rng, g.dim());
                    let ne = ne_set(g, &ua, &ub)?;
                    r.check(!ne.is_empty());
                    if clean_side {
                        r.check(ne.iter().any(|s| !deg.is_degenerate_ne(*s)));
                    }
                }
            }
            VPlusVerdict::NotTight(w) => {
                r.bump("not_tight");
                r.check(w.is_valid_for(g));
                r.check(ne_set(g, &w.psi.u, &w.phi.u)?.is_empty());
                if i % 8 == 0 {
                    certs.push(cert::vplus_witness_certificate(g, &w));
                }
            }
        }
    }
    Ok((r, certs))
}

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize <= k {
            out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

/// Runs the filter on every subset of at most three strategies against
/// every comparable competitor; returns (checks, checks passed).
fn filter_all(g: &VPlusForm, side: Side, oriented: &VPlusForm, phi: &[usize]) -> Result<(u64, u64)> {
    let (mut checks, mut passed) = (0, 0);
    for subset in subsets_up_to(oriented.rows(), 3) {
        let first: Vec<usize> = subset.iter().map(|&x| phi[x]).collect();
        let mut second = vec![0; subset.len()];
        loop {
            if competitor_is_comparable(oriented, &subset, &first, &second) {
                checks += 1;
                if asumability_filter(g, side, &subset, &first, &second)? == Asumability::Pass {
                    passed += 1;
                }
            }
            if !advance(&mut second, oriented.cols()) {
                break;
            }
        }
    }
    Ok((checks, passed))
}

/// Every LP-certified PBR re-validates and passes the asumability filter
/// against every competitor on every subset of at most three strategies.
/// Response maps that pass every filter without being PBRs are counted as
/// evidence on whether the filters are sufficient.
pub fn asumability_and_pbr_soundness(forms: &[VPlusForm]) -> Result<(Vec<PropertyResult>, Vec<Envelope>)> {
    let mut sound = PropertyResult::new("pbr_certificates_sound");
    let mut asum = PropertyResult::new("pbrs_pass_asumability");
    let mut certs = Vec::new();
    for (i, g) in forms.iter().enumerate() {
        for side in [Side::Bob, Side::Alice] {
            let oriented = match side {
                Side::Bob => g.clone(),
                Side::Alice => g.transpose(),
            };
            let pbrs = all_pbrs(g, side, DEFAULT_BUDGET)?;
            for (_, c) in &pbrs {
                sound.check(c.is_valid_for(g));
                if i % 16 == 0 && certs.len() < 8 {
                    certs.push(cert::pbr_certificate(g, c));
                }
                let (checks, passed) = filter_all(g, side, &oriented, &c.strategy.map)?;
                asum.checked += checks;
                asum.violations += checks - passed;
            }
            let mut phi = vec![0; oriented.rows()];
            loop {
                let finite = phi.iter().enumerate().all(|(x, &y)| oriented.cell(x, y).is_some());
                if finite && !pbrs.iter().any(|(_, c)| c.strategy.map == phi) {
                    let (checks, passed) = filter_all(g, side, &oriented, &phi)?;
                    asum.bump(match (checks, passed) {
                        (0, _) => "non_pbr_untested",
                        (c, p) if c == p => "non_pbr_passing_filters",
                        _ => "non_pbr_rejected",
                    });
                }
                if !advance(&mut phi, oriented.cols()) {
                    break;
                }
            }
        }
    }
    Ok((vec![sound, asum], certs))
}

/// Finite, pairwise distinct vectors, as the filter requires.
fn competitor_is_comparable(g: &VPlusForm, subset: &[usize], first: &[usize], second: &[usize]) -> bool {
    let mut picked = Vec::new();
    for (k, &x) in subset.iter().enumerate() {
        for y in [first[k], second[k]] {
            match g.cell(x, y) {
                Some(w) => picked.push(w),
                None => return false,
            }
        }
    }
    let n = picked.len();
    picked.sort_unstable();
    picked.dedup();
    picked.len() == n
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Deleting one player's degenerate strategies, when the opponent has
/// none, keeps the tightness verdict.
pub fn degenerate_deletion(forms: &[VPlusForm]) -> Result<PropertyResult> {
    let mut r = PropertyResult::new("degenerate_deletion_keeps_verdict");
    for g in forms {
        let deg = degeneracy(g);
        if deg.form {
            continue;
        }
        let none_r = FixedBitSet::with_capacity(g.rows());
        let none_c = FixedBitSet::with_capacity(g.cols());
        let reduced = match (deg.rows.count_ones(..) > 0, deg.cols.count_ones(..) > 0) {
            (true, false) => g.without(&deg.rows, &none_c)?,
            (false, true) => g.without(&none_r, &deg.cols)?,
            _ => continue,
        };
        r.check(is_vplus_tight(g, DEFAULT_BUDGET)?.is_tight() == is_vplus_tight(&reduced, DEFAULT_BUDGET)?.is_tight());
    }
    Ok(r)
}

/// SP forms: weak rectangularity, path cost as a scalar product,
/// Dijkstra against Bellman-Ford, both bridges, strong ⇒ weak.
pub fn sp_properties(seed: u64, samples: usize) -> Result<Vec<PropertyResult>> {
    let mut rect = PropertyResult::new("sp_forms_weakly_rectangular");
    let mut scalar = PropertyResult::new("sp_cost_is_scalar_product");
    let mut oracle = PropertyResult::new("dijkstra_matches_bellman_ford");
    let mut bridges = PropertyResult::new("bisp_bridges");
    let mut rng = stream(seed, task::SP);
    for round in 0..samples {
        let inst = sp::random_bipartite(&mut rng, 2 + round % 4, 0.5);
        let inst = inst.with_costs(sp::random_costs(&mut rng, 2, inst.num_edges()))?;
        let budget = 1 << 16;
        let gpv = sp::sp_vplus_form(&inst, budget);
        rect.check(gpv.is_ok());
        let (_, outcomes) = sp::sp_game_form(&inst, budget)?;
        for o in &outcomes {
            if let Some(w) = o.support(inst.num_edges()) {
                for p in 0..2 {
                    scalar.check(o.cost(&inst.costs()[p]).finite() == Some(&dot(&inst.costs()[p], &w)));
                }
            }
        }
        let pert = sp::perturb(&inst);
        for p in 0..2 {
            let scaled = sp::ScaledCosts::new(&inst.costs()[p])?;
            let n = inst.graph().num_vertices();
            let mut fixed = vec![None; n];
            for (v, f) in fixed.iter_mut().enumerate() {
                if inst.graph().owner(v) == Owner::Player(p) && rng.gen_bool(0.5) {
                    *f = Some(rng.gen_range(0..inst.graph().out_edges(v).len()));
                }
            }
            oracle.check(sp::shortest_path(&inst, &scaled, &fixed) == sp::bellman_ford_path(&inst, &pert.costs()[p], &fixed));
        }
        bridges.check(sp::strong_bridge_holds(&inst, budget)?);
        bridges.check(sp::weak_bridge_holds(&inst, budget)?);
        let strong = sp::bisp_check(&inst, BispMode::Strong, budget)?;
        let weak = sp::bisp_check(&inst, BispMode::Weak, budget)?;
        bridges.check(!strong.intersects() || weak.intersects());
        if !strong.intersects() && weak.intersects() {
            bridges.bump("weak_only");
        }
    }
    Ok(vec![rect, scalar, oracle, bridges])
}

/// One Bi-SP search family; counterexamples are violations.
pub fn bisp_family(name: &str, cfg: &SearchConfig) -> Result<(PropertyResult, Vec<Envelope>)> {
    let mut r = PropertyResult::new(name);
    let report = sp::bisp_search(cfg)?;
    r.checked = (report.checks + report.ne_found + report.ne_missing) as u64;
    r.violations = (report.counterexamples.len() + report.ne_missing + report.equivalence_failures) as u64;
    for (k, v) in [
        ("instances", report.instances),
        ("intersections", report.intersections),
        ("weak_only", report.weak_only),
        ("ne_found", report.ne_found),
        ("skipped", report.skipped),
        ("max_inner_outcomes", report.max_inner_outcomes),
    ] {
        if v > 0 {
            r.counts.insert(k.to_string(), v as u64);
        }
    }
    let certs = report.counterexamples.iter().map(cert::bisp_certificate).collect();
    Ok((r, certs))
}

/// NE-free three-player terminal games found by random search, each tested
/// for (C′22). Finding none is not a violation.
pub fn catch_22(seed: u64, samples: usize) -> Result<PropertyResult> {
    let mut r = PropertyResult::new("catch_22_evidence");
    let mut rng = stream(seed, task::CATCH22);
    let (checked, found) = sp::ne_free_terminal_search(&mut rng, samples, 4, 3, 1 << 16)?;
    r.counts.insert("games".into(), checked as u64);
    for (_, c22) in &found {
        r.bump("ne_free");
        r.check(*c22);
    }
    Ok(r)
}

fn tamper(v: &serde_json::Value) -> Vec<serde_json::Value> {
    use serde_json::Value;
    match v {
        Value::Number(n) => vec![Value::from(n.as_u64().map_or(1, |x| x + 1))],
        Value::String(s) => {
            let bumped = crate::rational::parse_rational(s)
                .map(|q| crate::rational::format_rational(&(q + Rational::one())))
                .unwrap_or_else(|_| format!("{s}x"));
            vec![Value::String(bumped)]
        }
        Value::Bool(b) => vec![Value::Bool(!b)],
        Value::Null => vec![Value::Array(vec![])],
        Value::Array(items) => {
            let mut out = Vec::new();
            for (i, item) in items.iter().enumerate() {
                for t in tamper(item) {
                    let mut copy = items.clone();
                    copy[i] = t;
                    out.push(Value::Array(copy));
                }
            }
            out
        }
        Value::Object(map) => {
            let mut out = Vec::new();
            for (k, item) in map {
                for t in tamper(item) {
                    let mut copy = map.clone();
                    copy.insert(k.clone(), t);
                    out.push(Value::Object(copy));
                }
            }
            out
        }
    }
}

/// Every certificate verifies, and every single-field change is rejected.
pub fn certificate_checks(certs: &[Envelope]) -> PropertyResult {
    let mut r = PropertyResult::new("certificates_verify_and_resist_tampering");
    for c in certs {
        r.check(cert::verify(c));
        r.bump(c.kind());
        let value = serde_json::to_value(c).expect("serializable");
        for t in tamper(&value) {
            let accepted = serde_json::from_value::<Envelope>(t).is_ok_and(|e| cert::verify(&e));
            r.check(!accepted);
        }
    }
    r
}

fn golden_witnesses() -> Result<Vec<Envelope>> {
    let mut out = Vec::new();
    for g in corpus::golden() {
        if let Verdict::NotTight(w) = is_tight(&g, Method::J, DEFAULT_BUDGET)? {
            out.push(cert::tightness_certificate(&g, &w));
        }
    }
    Ok(out)
}

/// Sample sizes for one suite run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub sampled_forms: usize,
    pub collapse_samples: usize,
    pub lex_samples_per_form: usize,
    pub lex_search_attempts: usize,
    pub graphs: usize,
    pub vforms: usize,
    pub u_samples: usize,
    pub mean_payoff_graphs: usize,
    pub ne_free_3x3: usize,
    pub ne_free_2xb: usize,
    pub vplus_forms: usize,
    pub cost_pairs: usize,
    pub sp_instances: usize,
    pub bisp_exhaustive_v: usize,
    pub bisp_cost_samples: usize,
    pub bisp_random: usize,
    pub bisp_random_v: usize,
    pub symmetric_trials: usize,
    pub terminal_trials: usize,
    pub catch22_samples: usize,
}

impl SuiteConfig {
    /// Sizes that meet every acceptance scale and still finish in a few
    /// minutes on one core.
    pub fn desk(seed: u64) -> Self {
        SuiteConfig {
            seed,
            sampled_forms: 10_000,
            collapse_samples: 2_000,
            lex_samples_per_form: 2,
            lex_search_attempts: 10_000,
            graphs: 200,
            vforms: 300,
            u_samples: 1_000,
            mean_payoff_graphs: 200,
            ne_free_3x3: 20_000,
            ne_free_2xb: 10_000,
            vplus_forms: 150,
            cost_pairs: 1_000,
            sp_instances: 200,
            bisp_exhaustive_v: 4,
            bisp_cost_samples: 100,
            bisp_random: 10_000,
            bisp_random_v: 8,
            symmetric_trials: 1_000,
            terminal_trials: 1_000,
            catch22_samples: 2_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub config: SuiteConfig,
    pub properties: Vec<PropertyResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

pub fn theorem_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let seed = cfg.seed;
    let mut props = vec![golden()?];
    let mut certs = golden_witnesses()?;
    let forms = form_corpus(seed, cfg.sampled_forms);
    props.extend(form_properties(&forms)?);
    props.push(ne_monotone_collapse(seed, cfg.collapse_samples)?);
    props.push(lex_safe_equilibria(&forms, seed, cfg.lex_samples_per_form)?);
    props.push(lex_pair_not_ne(&forms, seed, cfg.lex_search_attempts)?);
    props.extend(graph_solver_oracle(seed, cfg.graphs)?);
    props.push(merge_preserves_tightness(&forms, seed)?);
    props.push(embed_preserves_tightness(&forms)?);
    let (p, c) = v_tightness_vs_saddles(seed, cfg.vforms, cfg.u_samples)?;
    props.push(p);
    certs.extend(c);
    props.push(mean_payoff_forms(seed, cfg.mean_payoff_graphs)?);
    let (p, c) = mean_payoff_ne_free(seed, cfg.ne_free_3x3, cfg.ne_free_2xb)?;
    props.push(p);
    certs.extend(c);
    let vforms = vplus_corpus(seed, cfg.vplus_forms);
    let (p, c) = vplus_tightness_vs_equilibria(&vforms, seed, cfg.cost_pairs)?;
    props.push(p);
    certs.extend(c);
    let (p, c) = asumability_and_pbr_soundness(&vforms)?;
    props.extend(p);
    certs.extend(c);
    props.push(degenerate_deletion(&vforms)?);
    props.extend(sp_properties(seed, cfg.sp_instances)?);
    let families = [
        ("bisp_exhaustive", Family::Exhaustive, cfg.bisp_exhaustive_v, cfg.bisp_cost_samples),
        ("bisp_random", Family::Random, cfg.bisp_random_v, cfg.bisp_random),
        ("symmetric_ne", Family::Symmetric, 4, cfg.symmetric_trials),
        ("inner_outcome_merge", Family::Terminal, 5, cfg.terminal_trials),
    ];
    for (k, (name, family, max_v, samples)) in families.into_iter().enumerate() {
        let sc = SearchConfig {
            family,
            max_v,
            samples,
            seed: seed.wrapping_add(task::BISP + k as u64),
            mode: BispMode::Strong,
            budget: 1 << 20,
        };
        let (p, c) = bisp_family(name, &sc)?;
        props.push(p);
        certs.extend(c);
    }
    props.push(catch_22(seed, cfg.catch22_samples)?);
    props.push(certificate_checks(&certs));
    let passed = props.iter().all(PropertyResult::passed);
    Ok(SuiteReport {
        schema: SCHEMA_VERSION,
        config: cfg.clone(),
        properties: props,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_property_passes() {
        let r = golden().unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn tampering_covers_every_leaf() {
        let v = serde_json::json!({"a": [1, "2/3"], "b": "x"});
        assert_eq!(tamper(&v).len(), 3);
    }

    #[test]
    fn small_forms_pass_every_form_property() {
        let forms = all_forms(2, 2, 3);
        for p in form_properties(&forms).unwrap() {
            assert!(p.passed(), "{p:?}");
        }
    }
}
