//! Two-phase primal simplex on a dense rational tableau with Bland's rule.

use num_traits::{Signed, Zero};

use super::problem::{LpProblem, Relation};
use super::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value; zero unless optimal.
    pub value: Rational,
    /// One value per problem variable; empty unless optimal.
    pub values: Vec<Rational>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    fn without_point(status: LpStatus) -> Self {
        LpSolution {
            status,
            value: Rational::zero(),
            values: Vec::new(),
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs of the current phase.
    reduced: Vec<Rational>,
    /// Negated objective value of the current phase.
    neg_value: Rational,
    /// Columns allowed to enter.
    enterable: Vec<bool>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col].clone();
        let nonzero: Vec<usize> = (0..self.rows[row].len())
            .filter(|&j| !self.rows[row][j].is_zero())
            .collect();
        for &j in &nonzero {
            self.rows[row][j] /= &pivot;
        }
        self.rhs[row] /= &pivot;

        let pivot_row = std::mem::take(&mut self.rows[row]);
        let pivot_rhs = self.rhs[row].clone();
        for k in 0..self.rows.len() {
            if k == row || self.rows[k].is_empty() || self.rows[k][col].is_zero() {
                continue;
            }
            let factor = self.rows[k][col].clone();
            for &j in &nonzero {
                let delta = &factor * &pivot_row[j];
                self.rows[k][j] -= delta;
            }
            self.rhs[k] -= &factor * &pivot_rhs;
        }
        if !self.reduced[col].is_zero() {
            let factor = self.reduced[col].clone();
            for &j in &nonzero {
                let delta = &factor * &pivot_row[j];
                self.reduced[j] -= delta;
            }
            self.neg_value -= &factor * &pivot_rhs;
        }
        self.rows[row] = pivot_row;
        self.basis[row] = col;
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        self.reduced = costs.to_vec();
        self.neg_value = Rational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            if self.rows[r].is_empty() || costs[b].is_zero() {
                continue;
            }
            let cb = costs[b].clone();
            for (j, a) in self.rows[r].iter().enumerate() {
                if !a.is_zero() {
                    self.reduced[j] -= &cb * a;
                }
            }
            self.neg_value -= &cb * &self.rhs[r];
        }
    }

    /// Runs Bland's rule to optimality. Returns false when unbounded.
    fn optimize(&mut self) -> bool {
        loop {
            let entering = (0..self.reduced.len())
                .find(|&j| self.enterable[j] && self.reduced[j].is_negative());
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r].is_empty() || !self.rows[r][col].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &self.rows[r][col];
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

type Row = (Vec<(usize, Rational)>, Relation, Rational);

/// Solves `lp` exactly. Deterministic for a given problem.
pub fn solve(lp: &LpProblem) -> LpSolution {
    let n = lp.num_variables();
    let lower: Vec<Rational> = lp.variables().iter().map(|v| v.lower.clone()).collect();

    // Rows over shifted variables v' = v - lower, with rhs >= 0.
    let mut rows: Vec<Row> = Vec::new();
    for c in lp.constraints() {
        let shift = c
            .terms
            .iter()
            .fold(Rational::zero(), |acc, (v, a)| acc + a * &lower[*v]);
        rows.push((c.terms.clone(), c.relation, &c.rhs - shift));
    }
    for (v, var) in lp.variables().iter().enumerate() {
        if let Some(up) = &var.upper {
            rows.push((
                vec![(v, Rational::from_integer(1.into()))],
                Relation::LessEq,
                up - &var.lower,
            ));
        }
    }
    for (terms, rel, rhs) in rows.iter_mut() {
        if rhs.is_negative() {
            for (_, a) in terms.iter_mut() {
                *a = -a.clone();
            }
            *rhs = -rhs.clone();
            *rel = match rel {
                Relation::LessEq => Relation::GreaterEq,
                Relation::GreaterEq => Relation::LessEq,
                Relation::Equal => Relation::Equal,
            };
        }
    }

    let m = rows.len();
    let num_slack = rows.iter().filter(|r| r.1 != Relation::Equal).count();
    let num_art = rows.iter().filter(|r| r.1 != Relation::LessEq).count();
    let width = n + num_slack + num_art;
    let art_start = n + num_slack;

    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        reduced: Vec::new(),
        neg_value: Rational::zero(),
        enterable: vec![true; width],
    };
    let mut next_slack = n;
    let mut next_art = art_start;
    let one = Rational::from_integer(1.into());
    for (terms, rel, rhs) in rows {
        let mut row = vec![Rational::zero(); width];
        for (v, a) in terms {
            row[v] += a;
        }
        let basic = match rel {
            Relation::LessEq => {
                row[next_slack] = one.clone();
                next_slack += 1;
                next_slack - 1
            }
            Relation::GreaterEq => {
                row[next_slack] = -one.clone();
                next_slack += 1;
                row[next_art] = one.clone();
                next_art += 1;
                next_art - 1
            }
            Relation::Equal => {
                row[next_art] = one.clone();
                next_art += 1;
                next_art - 1
            }
        };
        tab.rows.push(row);
        tab.rhs.push(rhs);
        tab.basis.push(basic);
    }

    // Phase 1: minimize the sum of artificials.
    if num_art > 0 {
        let mut costs = vec![Rational::zero(); width];
        for c in costs.iter_mut().skip(art_start) {
            *c = one.clone();
        }
        tab.set_costs(&costs);
        tab.optimize();
        if !tab.neg_value.is_zero() {
            return LpSolution::without_point(LpStatus::Infeasible);
        }
        for r in 0..m {
            if tab.basis[r] < art_start {
                continue;
            }
            match (0..art_start).find(|&j| !tab.rows[r][j].is_zero()) {
                Some(col) => tab.pivot(r, col),
                // redundant row
                None => tab.rows[r].clear(),
            }
        }
        for e in tab.enterable.iter_mut().skip(art_start) {
            *e = false;
        }
    }

    let mut costs = vec![Rational::zero(); width];
    for (v, c) in lp.objective() {
        costs[*v] += c;
    }
    tab.set_costs(&costs);
    if !tab.optimize() {
        return LpSolution::without_point(LpStatus::Unbounded);
    }

    let mut values = lower;
    for r in 0..m {
        if !tab.rows[r].is_empty() && tab.basis[r] < n {
            values[tab.basis[r]] += &tab.rhs[r];
        }
    }
    let value = lp.objective_value(&values);
    LpSolution {
        status: LpStatus::Optimal,
        value,
        values,
    }
}
