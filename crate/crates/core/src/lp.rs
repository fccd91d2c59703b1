//! Dense two-phase simplex over exact rationals.
//!
//! Every variable is non-negative. Pivoting follows Bland's rule (lowest
//! eligible index for both the entering and leaving variable), so the method
//! terminates without any cycling safeguards beyond that.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize objective · x` subject to the constraints and `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width mismatch");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
    }

    /// Checks `x` against every constraint with exact arithmetic.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars || x.iter().any(|v| v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs = crate::rational::dot(&c.coeffs, x);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    num_structural: usize,
    num_slack: usize,
    num_artificial: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        let mut num_slack = 0;
        let mut num_artificial = 0;
        let mut normalized = Vec::with_capacity(lp.constraints.len());
        for c in &lp.constraints {
            let (coeffs, relation, rhs) = if c.rhs.is_negative() {
                let flipped = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (
                    c.coeffs.iter().map(|v| -v).collect::<Vec<_>>(),
                    flipped,
                    -c.rhs.clone(),
                )
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            };
            match relation {
                Relation::Le => num_slack += 1,
                Relation::Ge => {
                    num_slack += 1;
                    num_artificial += 1
                }
                Relation::Eq => num_artificial += 1,
            }
            normalized.push((coeffs, relation, rhs));
        }

        let width = n + num_slack + num_artificial;
        let mut rows = Vec::with_capacity(normalized.len());
        let mut rhs = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut s, mut a) = (n, n + num_slack);
        for (coeffs, relation, b) in normalized {
            let mut row = coeffs;
            row.resize(width, Rational::zero());
            match relation {
                Relation::Le => {
                    row[s] = Rational::one();
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -Rational::one();
                    row[a] = Rational::one();
                    basis.push(a);
                    s += 1;
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = Rational::one();
                    basis.push(a);
                    a += 1;
                }
            }
            rows.push(row);
            rhs.push(b);
        }
        Tableau {
            rows,
            rhs,
            basis,
            num_structural: n,
            num_slack,
            num_artificial,
        }
    }

    fn width(&self) -> usize {
        self.num_structural + self.num_slack + self.num_artificial
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.num_structural + self.num_slack
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                *v /= &p;
            }
            self.rhs[r] /= &p;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Reduced profits `c_j − c_B·B⁻¹A_j` for the given cost vector.
    fn reduced(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut red = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (j, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    red[j] -= &cost[b] * v;
                }
            }
        }
        red
    }

    /// Maximizes `cost` over the current basis; `allowed` filters entering columns.
    /// Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: impl Fn(usize) -> bool) -> bool {
        loop {
            let red = self.reduced(cost);
            let entering = (0..self.width()).find(|&j| allowed(j) && red[j].is_positive());
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let width = self.width();
        if self.num_artificial > 0 {
            let mut phase1 = vec![Rational::zero(); width];
            for (j, v) in phase1.iter_mut().enumerate() {
                if self.is_artificial(j) {
                    *v = -Rational::one();
                }
            }
            // Phase one is bounded above by zero.
            self.optimize(&phase1, |_| true);
            let infeasibility: Rational = self
                .basis
                .iter()
                .zip(&self.rhs)
                .filter(|(b, _)| self.is_artificial(**b))
                .map(|(_, v)| v.clone())
                .sum();
            if infeasibility.is_positive() {
                return LpOutcome::Infeasible;
            }
            // Drive zero-valued artificials out of the basis, dropping redundant rows.
            let mut i = 0;
            while i < self.rows.len() {
                if self.is_artificial(self.basis[i]) {
                    let col = (0..self.num_structural + self.num_slack)
                        .find(|&j| !self.rows[i][j].is_zero());
                    match col {
                        Some(c) => {
                            self.pivot(i, c);
                            i += 1;
                        }
                        None => {
                            self.rows.remove(i);
                            self.rhs.remove(i);
                            self.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }

        let mut cost = lp.objective.clone();
        cost.resize(width, Rational::zero());
        let limit = self.num_structural + self.num_slack;
        if !self.optimize(&cost, |j| j < limit) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); self.num_structural];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.num_structural {
                x[b] = self.rhs[i].clone();
            }
        }
        let value = crate::rational::dot(&lp.objective, &x);
        LpOutcome::Optimal { x, value }
    }
}
