//! Vector-valued game forms: convex-hull tightness with exact LP
//! certificates, scalarized zero-sum games and mean-payoff forms.

mod mean_payoff;

pub use mean_payoff::{
    complete_bipartite, mean_payoff_vform, search_ne_free_mean_payoff, verify_ne_free,
    MeanPayoffForm, NeFreeCertificate,
};

use std::collections::HashMap;

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::forms::{GameForm, OutcomeSet, Situation};
use crate::hypergraph::Hypergraph;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::nf::{saddle_of, SaddleResult};
use crate::rational::{dot, int, Rational};
use crate::tightness::{for_each_map, ResponseStrategy};

/// Table of rational m-vectors. `vectors` holds the distinct vectors `W`
/// in order of first appearance; cells index into it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VForm {
    rows: usize,
    cols: usize,
    dim: usize,
    vectors: Vec<Vec<Rational>>,
    cells: Vec<usize>,
}

impl VForm {
    /// Builds from a row-major list of `rows * cols` vectors.
    pub fn new(rows: usize, cols: usize, dim: usize, table: Vec<Vec<Rational>>) -> Result<Self> {
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
        for (i, v) in table.into_iter().enumerate() {
            if v.len() != dim {
                return Err(Error::InvalidVectorForm(format!(
                    "cell {i} has dimension {}, expected {dim}",
                    v.len()
                )));
            }
            let id = *index.entry(v.clone()).or_insert_with(|| {
                vectors.push(v);
                vectors.len() - 1
            });
            cells.push(id);
        }
        Ok(VForm {
            rows,
            cols,
            dim,
            vectors,
            cells,
        })
    }

    pub fn from_rows(table: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let rows = table.len();
        let cols = table.first().map_or(0, Vec::len);
        let dim = table.first().and_then(|r| r.first()).map_or(0, Vec::len);
        if table.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidVectorForm("ragged table".into()));
        }
        Self::new(rows, cols, dim, table.into_iter().flatten().collect())
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

    /// The distinct vectors `W`.
    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn cell(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.cols + y]
    }

    pub fn vector(&self, x: usize, y: usize) -> &[Rational] {
        &self.vectors[self.cell(x, y)]
    }

    /// The underlying game form over `W`.
    pub fn index_form(&self) -> GameForm {
        GameForm::from_flat(self.rows, self.cols, self.vectors.len(), self.cells.clone())
            .expect("every vector appears in some cell")
    }

    /// `(u, w)` for every `w ∈ W`.
    pub fn scalarize(&self, u: &[Rational]) -> Result<Vec<Rational>> {
        if u.len() != self.dim {
            return Err(Error::Precondition(format!(
                "utility has dimension {}, form has {}",
                u.len(),
                self.dim
            )));
        }
        Ok(self.vectors.iter().map(|w| dot(u, w)).collect())
    }
}

/// The unit-vector encoding of a game form.
pub fn embed(g: &GameForm) -> VForm {
    let m = g.num_outcomes();
    let table = g
        .cells()
        .iter()
        .map(|&o| (0..m).map(|i| if i == o { int(1) } else { int(0) }).collect())
        .collect();
    VForm::new(g.rows(), g.cols(), m, table).expect("valid form embeds")
}

/// Responses `φ` (Bob) and `ψ` (Alice) whose graph images have disjoint
/// hulls, and `u` with `(u,p) + margin ≤ (u,q)` for `p` in the image of `φ`
/// and `q` in the image of `ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationCertificate {
    pub phi: ResponseStrategy,
    pub psi: ResponseStrategy,
    pub u: Vec<Rational>,
    pub margin: Rational,
}

impl SeparationCertificate {
    pub fn is_valid_for(&self, gv: &VForm) -> bool {
        let g = gv.index_form();
        if self.phi.validate(&g).is_err()
            || self.psi.validate(&g).is_err()
            || self.u.len() != gv.dim()
            || self.margin <= Rational::zero()
        {
            return false;
        }
        let low: Vec<Rational> = (0..gv.rows())
            .map(|x| dot(&self.u, gv.vector(x, self.phi.map[x])))
            .collect();
        let high: Vec<Rational> = (0..gv.cols())
            .map(|y| dot(&self.u, gv.vector(self.psi.map[y], y)))
            .collect();
        low.iter()
            .all(|p| high.iter().all(|q| p + &self.margin <= *q))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VVerdict {
    Tight,
    NotTight(SeparationCertificate),
}

impl VVerdict {
    pub fn is_tight(&self) -> bool {
        matches!(self, VVerdict::Tight)
    }
}

/// Convex combinations `λ` of `p`s and `μ` of `q`s with equal sums, if any.
pub fn hull_intersection(
    ps: &[&[Rational]],
    qs: &[&[Rational]],
) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let m = ps.first().or(qs.first()).map_or(0, |v| v.len());
    let (a, b) = (ps.len(), qs.len());
    let mut lp = LinearProgram::new(a + b);
    let mut sum_l = vec![Rational::zero(); a + b];
    let mut sum_m = vec![Rational::zero(); a + b];
    for i in 0..a {
        sum_l[i] = int(1);
    }
    for j in 0..b {
        sum_m[a + j] = int(1);
    }
    lp.add(sum_l, Relation::Eq, int(1));
    lp.add(sum_m, Relation::Eq, int(1));
    for k in 0..m {
        let coeffs = ps
            .iter()
            .map(|p| p[k].clone())
            .chain(qs.iter().map(|q| -q[k].clone()))
            .collect();
        lp.add(coeffs, Relation::Eq, Rational::zero());
    }
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => {
            let mu = x[a..].to_vec();
            let mut lambda = x;
            lambda.truncate(a);
            Some((lambda, mu))
        }
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("zero objective"),
    }
}

/// Some `u` with `(u,p) + 1 ≤ (u,q)` for all `p ∈ ps`, `q ∈ qs`; exists
/// exactly when the two hulls are disjoint.
pub fn separating_utility(ps: &[&[Rational]], qs: &[&[Rational]]) -> Option<Vec<Rational>> {
    let m = ps.first().or(qs.first()).map_or(0, |v| v.len());
    // u = u⁺ − u⁻, α = α⁺ − α⁻, β = β⁺ − β⁻
    let n = 2 * m + 4;
    let mut lp = LinearProgram::new(n);
    let row = |w: &[Rational], a_sign: i64, b_sign: i64| {
        let mut c: Vec<Rational> = w.iter().cloned().chain(w.iter().map(|v| -v.clone())).collect();
        c.extend([int(a_sign), int(-a_sign), int(b_sign), int(-b_sign)]);
        c
    };
    for p in ps {
        lp.add(row(p, -1, 0), Relation::Le, Rational::zero());
    }
    for q in qs {
        lp.add(row(q, 0, -1), Relation::Ge, Rational::zero());
    }
    let zero = vec![Rational::zero(); m];
    lp.add(row(&zero, -1, 1), Relation::Ge, int(1));
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => Some((0..m).map(|k| &x[k] - &x[m + k]).collect()),
        _ => None,
    }
}

/// Map realizing a selection: for each domain element, the first target
/// whose cell lies in `set`.
fn realize(g: &GameForm, set: &OutcomeSet, bob: bool) -> Vec<usize> {
    if bob {
        (0..g.rows())
            .map(|x| (0..g.cols()).find(|&y| set.contains(g.get(x, y))).expect("transversal"))
            .collect()
    } else {
        (0..g.cols())
            .map(|y| (0..g.rows()).find(|&x| set.contains(g.get(x, y))).expect("transversal"))
            .collect()
    }
}

fn certificate(gv: &VForm, g: &GameForm, p: &OutcomeSet, q: &OutcomeSet) -> Option<SeparationCertificate> {
    let pv: Vec<&[Rational]> = p.ones().map(|i| gv.vectors[i].as_slice()).collect();
    let qv: Vec<&[Rational]> = q.ones().map(|i| gv.vectors[i].as_slice()).collect();
    if !p.is_disjoint(q) || hull_intersection(&pv, &qv).is_some() {
        return None;
    }
    let u = separating_utility(&pv, &qv).expect("disjoint hulls separate");
    let low = pv.iter().map(|w| dot(&u, w)).max().expect("nonempty");
    let high = qv.iter().map(|w| dot(&u, w)).min().expect("nonempty");
    Some(SeparationCertificate {
        phi: ResponseStrategy::bob(realize(g, p, true)),
        psi: ResponseStrategy::alice(realize(g, q, false)),
        u,
        margin: high - low,
    })
}

/// Decides v-tightness. Hull intersection is monotone in the point sets,
/// so it suffices to test inclusion-minimal response images, which are the
/// minimal transversals of the row- and column-support hypergraphs over `W`.
/// `budget` bounds the number of image pairs examined.
pub fn is_v_tight(gv: &VForm, budget: u128) -> Result<VVerdict> {
    let g = gv.index_form();
    let (rows, cols) = g.supports();
    let w = gv.vectors.len();
    let bob_images = Hypergraph::new(w, rows)?.minimal_transversals();
    let alice_images = Hypergraph::new(w, cols)?.minimal_transversals();
    let needed = bob_images.len() as u128 * alice_images.len() as u128;
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    for p in &bob_images {
        for q in &alice_images {
            if let Some(cert) = certificate(gv, &g, p, q) {
                return Ok(VVerdict::NotTight(cert));
            }
        }
    }
    Ok(VVerdict::Tight)
}

/// Literal definition: every response pair, one LP per distinct image pair.
pub fn is_v_tight_by_enumeration(gv: &VForm, budget: u128) -> Result<VVerdict> {
    let g = gv.index_form();
    let count = |base: usize, exp: usize| (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
    let needed = count(g.cols(), g.rows()).saturating_add(count(g.rows(), g.cols()));
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut bob_images: Vec<OutcomeSet> = Vec::new();
    for_each_map(g.rows(), g.cols(), |phi| {
        let img = ResponseStrategy::bob(phi.to_vec()).image(&g);
        if !bob_images.contains(&img) {
            bob_images.push(img);
        }
        true
    });
    let mut alice_images: Vec<OutcomeSet> = Vec::new();
    for_each_map(g.cols(), g.rows(), |psi| {
        let img = ResponseStrategy::alice(psi.to_vec()).image(&g);
        if !alice_images.contains(&img) {
            alice_images.push(img);
        }
        true
    });
    for p in &bob_images {
        for q in &alice_images {
            if let Some(cert) = certificate(gv, &g, p, q) {
                return Ok(VVerdict::NotTight(cert));
            }
        }
    }
    Ok(VVerdict::Tight)
}

/// Zero-sum game with payoff `(u, g_v(x,y))`; Alice maximizes.
pub fn zero_sum_value(gv: &VForm, u: &[Rational]) -> Result<SaddleResult> {
    let r = gv.scalarize(u)?;
    let (saddle, maxmin, minmax) = saddle_of(gv.rows(), gv.cols(), |x, y| r[gv.cell(x, y)].clone());
    Ok(SaddleResult {
        saddle,
        maxmin,
        minmax,
    })
}

/// Utility with no saddle point, taken from the separation certificate.
pub fn nonsolvable_u(gv: &VForm, budget: u128) -> Result<Option<Vec<Rational>>> {
    Ok(match is_v_tight(gv, budget)? {
        VVerdict::Tight => None,
        VVerdict::NotTight(c) => Some(c.u),
    })
}

/// Random utility with integer entries in `-range..=range`.
pub fn random_utility<R: Rng>(rng: &mut R, dim: usize, range: i64) -> Vec<Rational> {
    (0..dim).map(|_| int(rng.gen_range(-range..=range))).collect()
}

/// Random v-form drawing each cell from a pool of `pool` integer vectors
/// with entries in `-range..=range`.
pub fn random_vform<R: Rng>(rng: &mut R, rows: usize, cols: usize, dim: usize, pool: usize, range: i64) -> VForm {
    let vectors: Vec<Vec<Rational>> = (0..pool.max(1))
        .map(|_| random_utility(rng, dim, range))
        .collect();
    let table = (0..rows * cols)
        .map(|_| vectors[rng.gen_range(0..vectors.len())].clone())
        .collect();
    VForm::new(rows, cols, dim, table).expect("shape is consistent")
}

/// The scalarized payoff at a situation, for reporting.
pub fn payoff_at(gv: &VForm, u: &[Rational], s: Situation) -> Rational {
    dot(u, gv.vector(s.x, s.y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::corpus;
    use crate::rational::frac;
    use crate::tightness::{is_tight, Method, DEFAULT_BUDGET};

    #[test]
    fn embed_preserves_tightness_on_golden() {
        for (i, g) in corpus::golden().iter().enumerate() {
            let v = is_v_tight(&embed(g), DEFAULT_BUDGET).unwrap();
            assert_eq!(v.is_tight(), i < 6, "g{}", i + 1);
            if let VVerdict::NotTight(c) = v {
                assert!(c.is_valid_for(&embed(g)));
                let sp = zero_sum_value(&embed(g), &c.u).unwrap();
                assert!(sp.saddle.is_none());
                assert!(sp.maxmin < sp.minmax);
            }
        }
    }

    #[test]
    fn g7_certificate_separates_the_two_unit_vectors() {
        let gv = embed(&corpus::g7());
        let VVerdict::NotTight(c) = is_v_tight(&gv, DEFAULT_BUDGET).unwrap() else {
            panic!("g7 is not tight");
        };
        assert!(c.u[0] != c.u[1]);
        let sp = zero_sum_value(&gv, &c.u).unwrap();
        assert!(sp.saddle.is_none());
        let u = vec![int(1), int(-1)];
        let sp = zero_sum_value(&gv, &u).unwrap();
        assert_eq!((sp.maxmin, sp.minmax), (int(-1), int(1)));
    }

    #[test]
    fn trivial_cases() {
        let one = VForm::from_rows(vec![vec![vec![int(3)]]]).unwrap();
        assert!(is_v_tight(&one, 10).unwrap().is_tight());
        let gv = embed(&corpus::g7());
        let sp = zero_sum_value(&gv, &[int(0), int(0)]).unwrap();
        assert_eq!(sp.saddle, Some(Situation::new(0, 0)));
        // A vector filling a whole row and a whole column lies in every
        // response image on both sides.
        let w = vec![int(1), int(1)];
        let a = vec![int(5), int(-2)];
        let b = vec![int(-4), int(0)];
        let shared = VForm::from_rows(vec![
            vec![w.clone(), w.clone(), w.clone()],
            vec![w.clone(), a.clone(), b.clone()],
            vec![w.clone(), b.clone(), a.clone()],
        ])
        .unwrap();
        assert!(is_v_tight(&shared, 100).unwrap().is_tight());
        // Merely meeting every row and column is not enough.
        let diagonal = VForm::from_rows(vec![vec![w.clone(), a], vec![b, w]]).unwrap();
        assert!(!is_v_tight(&diagonal, 100).unwrap().is_tight());
        assert!(is_v_tight(&shared, 100).unwrap().is_tight());
    }

    #[test]
    fn hull_lp_certificates_check_out() {
        let p1 = vec![int(0), int(0)];
        let p2 = vec![int(2), int(2)];
        let q1 = vec![int(0), int(2)];
        let q2 = vec![int(2), int(0)];
        let (l, m) = hull_intersection(&[&p1, &p2], &[&q1, &q2]).unwrap();
        let lhs: Vec<Rational> = (0..2).map(|k| &l[0] * &p1[k] + &l[1] * &p2[k]).collect();
        let rhs: Vec<Rational> = (0..2).map(|k| &m[0] * &q1[k] + &m[1] * &q2[k]).collect();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, vec![int(1), int(1)]);

        let q3 = vec![int(3), frac(7, 2)];
        assert!(hull_intersection(&[&p1, &p2], &[&q3]).is_none());
        let u = separating_utility(&[&p1, &p2], &[&q3]).unwrap();
        assert!(dot(&u, &p1) + int(1) <= dot(&u, &q3));
        assert!(dot(&u, &p2) + int(1) <= dot(&u, &q3));
    }

    #[test]
    fn minimal_transversal_route_matches_enumeration() {
        let mut rng = crate::rng::stream(5, 4);
        for round in 0..300 {
            let (r, c) = (1 + round % 3, 1 + (round / 3) % 3);
            let gv = random_vform(&mut rng, r, c, 2 + round % 2, 2 + round % 4, 2);
            let fast = is_v_tight(&gv, DEFAULT_BUDGET).unwrap();
            let slow = is_v_tight_by_enumeration(&gv, DEFAULT_BUDGET).unwrap();
            assert_eq!(fast.is_tight(), slow.is_tight(), "{gv:?}");
            for v in [fast, slow] {
                if let VVerdict::NotTight(c) = v {
                    assert!(c.is_valid_for(&gv));
                }
            }
        }
    }

    #[test]
    fn embedding_agrees_with_game_form_tightness() {
        for g in crate::enumerate::all_forms(3, 3, 3).iter().step_by(7) {
            let t = is_tight(g, Method::Dual, DEFAULT_BUDGET).unwrap().is_tight();
            assert_eq!(is_v_tight(&embed(g), DEFAULT_BUDGET).unwrap().is_tight(), t);
        }
    }
}
