//! v⁺-forms: non-negative vector outcomes plus the all-infinite `w^c`,
//! with both players minimizing positive linear costs.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::forms::Situation;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::{dot, int, ExtCost, Rational};
use crate::tightness::{Direction, ResponseStrategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Alice,
    Bob,
}

/// Cells hold `Some(id)` into the distinct finite vectors or `None` for `w^c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VPlusForm {
    rows: usize,
    cols: usize,
    dim: usize,
    vectors: Vec<Vec<Rational>>,
    cells: Vec<Option<usize>>,
}

impl VPlusForm {
    /// Row-major cells; `None` is `w^c`. Rejects negative or zero vectors
    /// and finite vectors that do not fill a box.
    pub fn new(rows: usize, cols: usize, dim: usize, table: Vec<Option<Vec<Rational>>>) -> Result<Self> {
        if rows == 0 || cols == 0 || dim == 0 {
            return Err(Error::InvalidVectorForm("empty dimension".into()));
        }
        if table.len() != rows * cols {
            return Err(Error::InvalidVectorForm(format!(
                "{} cells for a {rows}x{cols} table",
                table.len()
            )));
        }
        let mut index: HashMap<Vec<Rational>, usize> = HashMap::new();
        let mut vectors = Vec::new();
        let mut cells = Vec::with_capacity(table.len());
        for (i, cell) in table.into_iter().enumerate() {
            let Some(v) = cell else {
                cells.push(None);
                continue;
            };
            if v.len() != dim {
                return Err(Error::InvalidVectorForm(format!(
                    "cell {i} has dimension {}, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|c| c.is_negative()) || v.iter().all(|c| c.is_zero()) {
                return Err(Error::InvalidVectorForm(format!(
                    "cell {i} is not a non-negative non-zero vector"
                )));
            }
            let id = *index.entry(v.clone()).or_insert_with(|| {
                vectors.push(v);
                vectors.len() - 1
            });
            cells.push(Some(id));
        }
        let form = VPlusForm {
            rows,
            cols,
            dim,
            vectors,
            cells,
        };
        if let Some(w) = form.first_non_box() {
            return Err(Error::InvalidVectorForm(format!(
                "vector {w} does not fill a box (weak rectangularity)"
            )));
        }
        Ok(form)
    }

    pub fn from_rows(table: Vec<Vec<Option<Vec<Rational>>>>) -> Result<Self> {
        let rows = table.len();
        let cols = table.first().map_or(0, Vec::len);
        let dim = table
            .iter()
            .flatten()
            .flatten()
            .next()
            .map_or(1, Vec::len);
        if table.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidVectorForm("ragged table".into()));
        }
        Self::new(rows, cols, dim, table.into_iter().flatten().collect())
    }

    fn first_non_box(&self) -> Option<usize> {
        let n = self.vectors.len();
        let mut rows_of = vec![FixedBitSet::with_capacity(self.rows); n];
        let mut cols_of = vec![FixedBitSet::with_capacity(self.cols); n];
        let mut count = vec![0usize; n];
        for x in 0..self.rows {
            for y in 0..self.cols {
                if let Some(w) = self.cell(x, y) {
                    rows_of[w].insert(x);
                    cols_of[w].insert(y);
                    count[w] += 1;
                }
            }
        }
        (0..n).find(|&w| rows_of[w].count_ones(..) * cols_of[w].count_ones(..) != count[w])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    /// `None` is `w^c`.
    pub fn cell(&self, x: usize, y: usize) -> Option<usize> {
        self.cells[x * self.cols + y]
    }

    /// Index used for `w^c` in outcome sets: one past the finite vectors.
    pub fn infinite_index(&self) -> usize {
        self.vectors.len()
    }

    fn outcome_index(&self, x: usize, y: usize) -> usize {
        self.cell(x, y).unwrap_or(self.vectors.len())
    }

    pub fn transpose(&self) -> VPlusForm {
        let mut cells = Vec::with_capacity(self.cells.len());
        for y in 0..self.cols {
            for x in 0..self.rows {
                cells.push(self.cell(x, y));
            }
        }
        VPlusForm {
            rows: self.cols,
            cols: self.rows,
            dim: self.dim,
            vectors: self.vectors.clone(),
            cells,
        }
    }

    /// Cost of every finite vector under `u`.
    pub fn costs(&self, u: &[Rational]) -> Result<Vec<Rational>> {
        check_cost(u, self.dim)?;
        Ok(self.vectors.iter().map(|w| dot(u, w)).collect())
    }

    fn cost_at(&self, costs: &[Rational], x: usize, y: usize) -> ExtCost {
        match self.cell(x, y) {
            Some(w) => ExtCost::Finite(costs[w].clone()),
            None => ExtCost::Infinite,
        }
    }

    /// Drops the given rows and columns; fails if nothing would remain.
    pub fn without(&self, rows: &FixedBitSet, cols: &FixedBitSet) -> Result<VPlusForm> {
        let keep_r: Vec<usize> = (0..self.rows).filter(|&x| !rows.contains(x)).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|&y| !cols.contains(y)).collect();
        let table = keep_r
            .iter()
            .flat_map(|&x| {
                keep_c
                    .iter()
                    .map(move |&y| self.cell(x, y).map(|w| self.vectors[w].clone()))
            })
            .collect();
        VPlusForm::new(keep_r.len(), keep_c.len(), self.dim, table)
    }
}

fn check_cost(u: &[Rational], dim: usize) -> Result<()> {
    if u.len() != dim {
        return Err(Error::InvalidCosts(format!(
            "cost vector has dimension {}, form has {dim}",
            u.len()
        )));
    }
    if !u.iter().all(|c| c.is_positive()) {
        return Err(Error::InvalidCosts("cost vectors must be strictly positive".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degeneracy {
    pub rows: FixedBitSet,
    pub cols: FixedBitSet,
    /// Every cell is `w^c`.
    pub form: bool,
}

impl Degeneracy {
    /// A `w^c` situation is an NE exactly when both strategies are degenerate.
    pub fn is_degenerate_ne(&self, s: Situation) -> bool {
        self.rows.contains(s.x) && self.cols.contains(s.y)
    }
}

pub fn degeneracy(gpv: &VPlusForm) -> Degeneracy {
    let mut rows = FixedBitSet::with_capacity(gpv.rows);
    let mut cols = FixedBitSet::with_capacity(gpv.cols);
    for x in 0..gpv.rows {
        rows.set(x, (0..gpv.cols).all(|y| gpv.cell(x, y).is_none()));
    }
    for y in 0..gpv.cols {
        cols.set(y, (0..gpv.rows).all(|x| gpv.cell(x, y).is_none()));
    }
    let form = gpv.cells.iter().all(Option::is_none);
    Degeneracy { rows, cols, form }
}

/// A response strategy with a cost vector making it the unique best
/// response vector in every row, by at least `margin`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbrCertificate {
    pub strategy: ResponseStrategy,
    pub u: Vec<Rational>,
    pub margin: Rational,
}

impl PbrCertificate {
    /// Direct substitution with exact arithmetic.
    pub fn is_valid_for(&self, gpv: &VPlusForm) -> bool {
        let oriented;
        let g = match self.strategy.direction {
            Direction::BobResponse => gpv,
            Direction::AliceResponse => {
                oriented = gpv.transpose();
                &oriented
            }
        };
        if self.strategy.map.len() != g.rows
            || self.strategy.map.iter().any(|&y| y >= g.cols)
            || check_cost(&self.u, g.dim).is_err()
            || !self.margin.is_positive()
        {
            return false;
        }
        let costs = g.costs(&self.u).expect("checked");
        (0..g.rows).all(|x| {
            let chosen = g.cost_at(&costs, x, self.strategy.map[x]);
            (0..g.cols).all(|y| {
                let other = g.cost_at(&costs, x, y);
                match (&chosen, &other) {
                    (_, ExtCost::Infinite) => true,
                    (ExtCost::Infinite, ExtCost::Finite(_)) => false,
                    (ExtCost::Finite(a), ExtCost::Finite(b)) => {
                        g.cell(x, y) == g.cell(x, self.strategy.map[x]) || a + &self.margin <= *b
                    }
                }
            })
        })
    }
}

/// `(row, chosen vector)` constraints; returns `u ≥ 1` and the largest
/// margin `≤ 1`, or `None` when no positive margin exists.
fn pbr_lp(g: &VPlusForm, choices: &[(usize, usize)]) -> Option<(Vec<Rational>, Rational)> {
    let m = g.dim;
    let mut lp = LinearProgram::new(m + 1);
    for &(x, chosen) in choices {
        let star = &g.vectors[chosen];
        let mut seen = FixedBitSet::with_capacity(g.vectors.len());
        for y in 0..g.cols {
            let Some(w) = g.cell(x, y) else { continue };
            if w == chosen || seen.put(w) {
                continue;
            }
            // (u, w − w*) ≥ δ with u = 1 + v
            let diff: Vec<Rational> = g.vectors[w].iter().zip(star).map(|(a, b)| a - b).collect();
            let mut coeffs = diff.clone();
            coeffs.push(-Rational::one());
            let rhs = -diff.iter().sum::<Rational>();
            lp.add(coeffs, Relation::Ge, rhs);
        }
    }
    let mut cap = vec![Rational::zero(); m + 1];
    cap[m] = Rational::one();
    lp.add(cap.clone(), Relation::Le, Rational::one());
    lp.maximize(cap);
    match lp.solve() {
        LpOutcome::Optimal { x, value } if value.is_positive() => {
            let u: Vec<Rational> = x[..m].iter().map(|v| v + Rational::one()).collect();
            Some((u, value))
        }
        _ => None,
    }
}

fn certify(g: &VPlusForm, map: &[usize], direction: Direction) -> Option<PbrCertificate> {
    let mut choices = Vec::new();
    for (x, &y) in map.iter().enumerate() {
        match g.cell(x, y) {
            Some(w) => choices.push((x, w)),
            None if (0..g.cols).any(|z| g.cell(x, z).is_some()) => return None,
            None => {}
        }
    }
    let (u, _) = pbr_lp(g, &choices)?;
    let costs = g.costs(&u).expect("u ≥ 1");
    let mut margin = Rational::one();
    for &(x, chosen) in &choices {
        for y in 0..g.cols {
            if let Some(w) = g.cell(x, y) {
                if w != chosen {
                    margin = margin.min(&costs[w] - &costs[chosen]);
                }
            }
        }
    }
    Some(PbrCertificate {
        strategy: ResponseStrategy {
            direction,
            map: map.to_vec(),
        },
        u,
        margin,
    })
}

/// LP certificate that Bob's `φ : X → Y` is a possibly best response.
pub fn is_pbr(gpv: &VPlusForm, phi: &ResponseStrategy) -> Result<Option<PbrCertificate>> {
    let (g, limit) = match phi.direction {
        Direction::BobResponse => (gpv.clone(), gpv.cols),
        Direction::AliceResponse => (gpv.transpose(), gpv.rows),
    };
    if phi.map.len() != g.rows {
        return Err(Error::Precondition(format!(
            "response has {} entries, expected {}",
            phi.map.len(),
            g.rows
        )));
    }
    if let Some(&bad) = phi.map.iter().find(|&&y| y >= limit) {
        return Err(Error::IndexOutOfRange {
            what: "response target",
            index: bad,
            size: limit,
        });
    }
    Ok(certify(&g, &phi.map, phi.direction))
}

/// Every PBR up to the choice of column among equal cells, found by
/// backtracking with LP pruning, as `(image, certificate)`.
fn pbrs(g: &VPlusForm, direction: Direction, budget: u128) -> Result<Vec<(FixedBitSet, PbrCertificate)>> {
    // Per row: (vector or w^c, first column realizing it).
    let options: Vec<Vec<(Option<usize>, usize)>> = (0..g.rows)
        .map(|x| {
            let mut opts: Vec<(Option<usize>, usize)> = Vec::new();
            for y in 0..g.cols {
                let c = g.cell(x, y);
                if c.is_some() && !opts.iter().any(|o| o.0 == c) {
                    opts.push((c, y));
                }
            }
            if opts.is_empty() {
                opts.push((None, 0));
            }
            opts
        })
        .collect();
    let needed = options
        .iter()
        .try_fold(1u128, |acc, o| acc.checked_mul(o.len() as u128))
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(g.rows);
    let mut choices = Vec::new();
    extend(g, direction, &options, &mut map, &mut choices, &mut out);
    Ok(out)
}

fn extend(
    g: &VPlusForm,
    direction: Direction,
    options: &[Vec<(Option<usize>, usize)>],
    map: &mut Vec<usize>,
    choices: &mut Vec<(usize, usize)>,
    out: &mut Vec<(FixedBitSet, PbrCertificate)>,
) {
    let x = map.len();
    if x == g.rows {
        let cert = certify(g, map, direction).expect("pruned branches stay feasible");
        let mut image = FixedBitSet::with_capacity(g.vectors.len() + 1);
        for (x, &y) in map.iter().enumerate() {
            image.insert(g.outcome_index(x, y));
        }
        out.push((image, cert));
        return;
    }
    for &(vector, y) in &options[x] {
        map.push(y);
        let feasible = match vector {
            Some(w) => {
                choices.push((x, w));
                let ok = pbr_lp(g, choices).is_some();
                if !ok {
                    choices.pop();
                }
                ok
            }
            None => true,
        };
        if feasible {
            extend(g, direction, options, map, choices, out);
            if vector.is_some() {
                choices.pop();
            }
        }
        map.pop();
    }
}

/// All PBRs of one side with their images over `W ∪ {w^c}`.
pub fn all_pbrs(gpv: &VPlusForm, side: Side, budget: u128) -> Result<Vec<(FixedBitSet, PbrCertificate)>> {
    match side {
        Side::Bob => pbrs(gpv, Direction::BobResponse, budget),
        Side::Alice => pbrs(&gpv.transpose(), Direction::AliceResponse, budget),
    }
}

/// Bob's PBR `φ` and Alice's PBR `ψ` with disjoint images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPlusWitness {
    pub phi: PbrCertificate,
    pub psi: PbrCertificate,
}

impl VPlusWitness {
    pub fn is_valid_for(&self, gpv: &VPlusForm) -> bool {
        if self.phi.strategy.direction != Direction::BobResponse
            || self.psi.strategy.direction != Direction::AliceResponse
            || !self.phi.is_valid_for(gpv)
            || !self.psi.is_valid_for(gpv)
        {
            return false;
        }
        let bob: Vec<usize> = (0..gpv.rows)
            .map(|x| gpv.outcome_index(x, self.phi.strategy.map[x]))
            .collect();
        (0..gpv.cols).all(|y| !bob.contains(&gpv.outcome_index(self.psi.strategy.map[y], y)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VPlusVerdict {
    Tight,
    NotTight(VPlusWitness),
}

impl VPlusVerdict {
    pub fn is_tight(&self) -> bool {
        matches!(self, VPlusVerdict::Tight)
    }
}

fn minimal_images(mut all: Vec<(FixedBitSet, PbrCertificate)>) -> Vec<(FixedBitSet, PbrCertificate)> {
    all.sort_by(|a, b| a.0.count_ones(..).cmp(&b.0.count_ones(..)).then(a.0.cmp(&b.0)));
    let mut kept: Vec<(FixedBitSet, PbrCertificate)> = Vec::new();
    for item in all {
        if !kept.iter().any(|k| k.0.is_subset(&item.0)) {
            kept.push(item);
        }
    }
    kept
}

/// Images of every pair of PBRs intersect. Only inclusion-minimal images
/// need checking; `budget` bounds the response choices per side.
pub fn is_vplus_tight(gpv: &VPlusForm, budget: u128) -> Result<VPlusVerdict> {
    let bob = minimal_images(all_pbrs(gpv, Side::Bob, budget)?);
    let alice = minimal_images(all_pbrs(gpv, Side::Alice, budget)?);
    for (p, phi) in &bob {
        for (q, psi) in &alice {
            if p.is_disjoint(q) {
                return Ok(VPlusVerdict::NotTight(VPlusWitness {
                    phi: phi.clone(),
                    psi: psi.clone(),
                }));
            }
        }
    }
    Ok(VPlusVerdict::Tight)
}

/// Situations where each player minimizes its own cost given the other.
pub fn ne_set(gpv: &VPlusForm, ua: &[Rational], ub: &[Rational]) -> Result<Vec<Situation>> {
    let ca = gpv.costs(ua)?;
    let cb = gpv.costs(ub)?;
    let row_best: Vec<ExtCost> = (0..gpv.rows)
        .map(|x| (0..gpv.cols).map(|y| gpv.cost_at(&cb, x, y)).min().expect("nonempty"))
        .collect();
    let col_best: Vec<ExtCost> = (0..gpv.cols)
        .map(|y| (0..gpv.rows).map(|x| gpv.cost_at(&ca, x, y)).min().expect("nonempty"))
        .collect();
    let mut out = Vec::new();
    for x in 0..gpv.rows {
        for y in 0..gpv.cols {
            if gpv.cost_at(&cb, x, y) == row_best[x] && gpv.cost_at(&ca, x, y) == col_best[y] {
                out.push(Situation::new(x, y));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Asumability {
    /// The first partial map cannot extend to a PBR.
    RejectFirst,
    /// Neither partial map can extend to a PBR.
    RejectBoth,
    Pass,
}

/// Necessary conditions for partial maps `φ′, φ″ : X* → Y` (on Alice's
/// side, maps `Y* → X`) to extend to PBRs. Vector sums are compared
/// componentwise, `>` meaning `≥` everywhere and `>` somewhere.
pub fn asumability_filter(
    gpv: &VPlusForm,
    side: Side,
    subset: &[usize],
    first: &[usize],
    second: &[usize],
) -> Result<Asumability> {
    let g = match side {
        Side::Bob => gpv.clone(),
        Side::Alice => gpv.transpose(),
    };
    if first.len() != subset.len() || second.len() != subset.len() {
        return Err(Error::Precondition("partial maps must cover the subset".into()));
    }
    let mut picked: Vec<usize> = Vec::with_capacity(2 * subset.len());
    for (k, &x) in subset.iter().enumerate() {
        if x >= g.rows || first[k] >= g.cols || second[k] >= g.cols {
            return Err(Error::IndexOutOfRange {
                what: "partial map entry",
                index: x.max(first[k]).max(second[k]),
                size: g.rows.max(g.cols),
            });
        }
        for y in [first[k], second[k]] {
            let w = g.cell(x, y).ok_or_else(|| {
                Error::Precondition("asumability compares finite vectors only".into())
            })?;
            picked.push(w);
        }
    }
    let mut sorted = picked.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != picked.len() {
        return Err(Error::Precondition("selected vectors must be pairwise distinct".into()));
    }
    let sum = |which: usize| -> Vec<Rational> {
        let mut s = vec![Rational::zero(); g.dim];
        for k in 0..subset.len() {
            for (acc, v) in s.iter_mut().zip(&g.vectors[picked[2 * k + which]]) {
                *acc += v;
            }
        }
        s
    };
    let (s1, s2) = (sum(0), sum(1));
    let dominates = s1.iter().zip(&s2).all(|(a, b)| a >= b) && s1 != s2;
    Ok(if !subset.is_empty() && dominates {
        Asumability::RejectFirst
    } else if subset.len() >= 2 && s1 == s2 {
        Asumability::RejectBoth
    } else {
        Asumability::Pass
    })
}

/// Random strictly positive cost vector with entries `p/q`, `1 ≤ p ≤ 20`,
/// `1 ≤ q ≤ 4`.
pub fn random_cost<R: Rng>(rng: &mut R, dim: usize) -> Vec<Rational> {
    (0..dim)
        .map(|_| Rational::new(rng.gen_range(1..=20).into(), rng.gen_range(1..=4).into()))
        .collect()
}

/// Random weakly rectangular v⁺-form. Rows and columns are grouped at
/// random and every group product is a box holding one fresh vector, or
/// `w^c` with probability `infinite_prob`. Entries are in `0..=3`.
pub fn random_vplus_form<R: Rng>(rng: &mut R, rows: usize, cols: usize, dim: usize, infinite_prob: f64) -> VPlusForm {
    loop {
        let row_group: Vec<usize> = (0..rows).map(|x| rng.gen_range(0..=x)).collect();
        let col_group: Vec<usize> = (0..cols).map(|y| rng.gen_range(0..=y)).collect();
        let mut boxes: HashMap<(usize, usize), Option<Vec<Rational>>> = HashMap::new();
        let mut cells = Vec::with_capacity(rows * cols);
        for &rg in &row_group {
            for &cg in &col_group {
                let cell = boxes
                    .entry((rg, cg))
                    .or_insert_with(|| {
                        (!rng.gen_bool(infinite_prob)).then(|| loop {
                            let v: Vec<Rational> = (0..dim).map(|_| int(rng.gen_range(0..=3))).collect();
                            if v.iter().any(|c| c.is_positive()) {
                                break v;
                            }
                        })
                    })
                    .clone();
                cells.push(cell);
            }
        }
        // Equal vectors drawn for different boxes may break rectangularity.
        if let Ok(f) = VPlusForm::new(rows, cols, dim, cells) {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Option<Vec<Rational>> {
        Some(xs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn validation() {
        assert!(VPlusForm::from_rows(vec![vec![v(&[0, 0])]]).is_err());
        assert!(VPlusForm::from_rows(vec![vec![v(&[-1, 2])]]).is_err());
        // (1) on the diagonal is not a box.
        assert!(VPlusForm::from_rows(vec![vec![v(&[1]), v(&[2])], vec![v(&[2]), v(&[1])]]).is_err());
        // w^c is exempt.
        assert!(VPlusForm::from_rows(vec![vec![None, v(&[2])], vec![v(&[3]), None]]).is_ok());
    }

    #[test]
    fn degeneracy_cases() {
        let all_c = VPlusForm::from_rows(vec![vec![None]]).unwrap();
        let d = degeneracy(&all_c);
        assert!(d.form && d.is_degenerate_ne(Situation::new(0, 0)));
        assert_eq!(ne_set(&all_c, &[int(1)], &[int(1)]).unwrap(), vec![Situation::new(0, 0)]);

        let one_row = VPlusForm::from_rows(vec![vec![None, None], vec![v(&[1]), v(&[2])]]).unwrap();
        let d = degeneracy(&one_row);
        assert!(d.rows.contains(0) && !d.rows.contains(1));
        assert_eq!(d.cols.count_ones(..), 0);
        assert!(!d.is_degenerate_ne(Situation::new(0, 0)));

        let finite = VPlusForm::from_rows(vec![vec![v(&[1])]]).unwrap();
        let d = degeneracy(&finite);
        assert!(!d.form && d.rows.count_ones(..) == 0);
    }

    #[test]
    fn pbr_examples() {
        let g = VPlusForm::from_rows(vec![vec![v(&[1, 0]), v(&[0, 1])]]).unwrap();
        let c = is_pbr(&g, &ResponseStrategy::bob(vec![0])).unwrap().unwrap();
        assert!(c.is_valid_for(&g));
        assert!(c.u[0] < c.u[1]);

        let g = VPlusForm::from_rows(vec![
            vec![v(&[2, 0]), v(&[0, 1])],
            vec![v(&[1, 0]), v(&[0, 2])],
        ])
        .unwrap();
        assert!(is_pbr(&g, &ResponseStrategy::bob(vec![0, 1])).unwrap().is_none());
        assert!(is_pbr(&g, &ResponseStrategy::bob(vec![1, 0])).unwrap().is_some());

        // Picking w^c next to a finite vector is never a best response.
        let g = VPlusForm::from_rows(vec![vec![None, v(&[5])]]).unwrap();
        assert!(is_pbr(&g, &ResponseStrategy::bob(vec![0])).unwrap().is_none());
        assert!(is_pbr(&g, &ResponseStrategy::bob(vec![1])).unwrap().is_some());
    }

    #[test]
    fn tight_examples() {
        let all_c = VPlusForm::from_rows(vec![vec![None, None], vec![None, None]]).unwrap();
        assert!(is_vplus_tight(&all_c, 1000).unwrap().is_tight());
        let both = VPlusForm::from_rows(vec![vec![None, None], vec![None, v(&[1])]]).unwrap();
        assert!(is_vplus_tight(&both, 1000).unwrap().is_tight());
    }

    #[test]
    fn non_tight_witness_costs_kill_every_equilibrium() {
        // Matching-pennies shape over four distinct vectors in two dimensions.
        let g = VPlusForm::from_rows(vec![
            vec![v(&[1, 0]), v(&[0, 1])],
            vec![v(&[0, 2]), v(&[2, 0])],
        ])
        .unwrap();
        let VPlusVerdict::NotTight(w) = is_vplus_tight(&g, 1000).unwrap() else {
            panic!("form is not tight");
        };
        assert!(w.is_valid_for(&g));
        assert!(ne_set(&g, &w.psi.u, &w.phi.u).unwrap().is_empty());
    }

    #[test]
    fn asumability_examples() {
        let g = VPlusForm::from_rows(vec![
            vec![v(&[2, 0]), v(&[1, 0])],
            vec![v(&[0, 2]), v(&[0, 1])],
        ])
        .unwrap();
        assert_eq!(
            asumability_filter(&g, Side::Bob, &[0, 1], &[0, 0], &[1, 1]).unwrap(),
            Asumability::RejectFirst
        );
        let g = VPlusForm::from_rows(vec![
            vec![v(&[2, 0]), v(&[3, 0])],
            vec![v(&[0, 2]), v(&[0, 1])],
        ])
        .unwrap();
        assert_eq!(
            asumability_filter(&g, Side::Bob, &[0, 1], &[0, 0], &[1, 1]).unwrap(),
            Asumability::Pass
        );
        let g = VPlusForm::from_rows(vec![
            vec![v(&[2, 0]), v(&[1, 2])],
            vec![v(&[0, 2]), v(&[1, 0])],
        ])
        .unwrap();
        assert_eq!(
            asumability_filter(&g, Side::Bob, &[0, 1], &[0, 0], &[1, 1]).unwrap(),
            Asumability::RejectBoth
        );
        let g = VPlusForm::from_rows(vec![vec![v(&[1, 0]), v(&[0, 1])]]).unwrap();
        assert_eq!(
            asumability_filter(&g, Side::Bob, &[0], &[0], &[1]).unwrap(),
            Asumability::Pass
        );
    }
}
