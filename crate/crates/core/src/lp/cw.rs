use std::collections::BTreeMap;

use num_traits::Zero;

use super::problem::{LpProblem, Relation, VarId};
use super::{int, Rational};
use crate::instance::{Instance, Job, Time, Window};

/// Slots of `interval` the job must use even if every slot outside it were
/// open: `max(0, p_j − |[r_j, d_j) ∖ I|)`.
pub fn q_forced(job: &Job, interval: Window) -> u32 {
    let w = job.window();
    let overlap = w
        .end
        .min(interval.end)
        .saturating_sub(w.start.max(interval.start));
    let outside = w.len() - overlap;
    job.length.saturating_sub(outside)
}

/// Time-indexed LP with interval ceiling constraints.
#[derive(Debug, Clone)]
pub struct CwLp {
    problem: LpProblem,
    x: Vec<VarId>,
    y: BTreeMap<(Time, usize), VarId>,
}

pub fn build_cw_lp(inst: &Instance) -> CwLp {
    let horizon = inst.horizon();
    let mut lp = LpProblem::new();
    let one = int(1);
    let x: Vec<VarId> = (0..horizon)
        .map(|t| lp.add_variable(format!("x{t}"), int(0), Some(one.clone())))
        .collect();
    let mut y = BTreeMap::new();
    for (j, job) in inst.jobs().iter().enumerate() {
        for t in job.window().slots() {
            y.insert((t, j), lp.add_nonneg(format!("y{t}_{}", job.id)));
        }
    }

    for (j, job) in inst.jobs().iter().enumerate() {
        let terms = job
            .window()
            .slots()
            .map(|t| (y[&(t, j)], one.clone()))
            .collect();
        lp.add_constraint(
            format!("cover_{}", job.id),
            terms,
            Relation::GreaterEq,
            int(job.length.into()),
        );
    }
    let g = int(inst.capacity().into());
    for t in 0..horizon {
        let mut terms: Vec<(VarId, Rational)> = y
            .range((t, 0)..(t + 1, 0))
            .map(|(_, &v)| (v, one.clone()))
            .collect();
        terms.push((x[t as usize], -g.clone()));
        lp.add_constraint(format!("capacity_{t}"), terms, Relation::LessEq, int(0));
    }
    for (&(t, j), &var) in &y {
        lp.add_constraint(
            format!("assign_{t}_{}", inst.job(j).id),
            vec![(var, one.clone()), (x[t as usize], -one.clone())],
            Relation::LessEq,
            int(0),
        );
    }
    let capacity = u64::from(inst.capacity());
    for start in 0..horizon {
        for end in start + 1..=horizon {
            let interval = Window::new(start, end);
            let forced: u64 = inst
                .jobs()
                .iter()
                .map(|job| u64::from(q_forced(job, interval)))
                .sum();
            let need = forced.div_ceil(capacity);
            if need == 0 {
                continue;
            }
            let terms = interval
                .slots()
                .map(|t| (x[t as usize], one.clone()))
                .collect();
            lp.add_constraint(
                format!("interval_{start}_{end}"),
                terms,
                Relation::GreaterEq,
                int(need as i64),
            );
        }
    }
    lp.set_objective(x.iter().map(|&v| (v, one.clone())).collect());
    CwLp { problem: lp, x, y }
}

impl CwLp {
    pub fn problem(&self) -> &LpProblem {
        &self.problem
    }

    pub fn x_var(&self, t: Time) -> VarId {
        self.x[t as usize]
    }

    pub fn y_var(&self, t: Time, job: usize) -> Option<VarId> {
        self.y.get(&(t, job)).copied()
    }

    pub fn assignment(
        &self,
        x: &[Rational],
        y: &BTreeMap<(Time, usize), Rational>,
    ) -> Vec<Rational> {
        let mut values = vec![Rational::zero(); self.problem.num_variables()];
        for (t, &v) in self.x.iter().enumerate() {
            values[v] = x[t].clone();
        }
        for (k, &v) in &self.y {
            if let Some(val) = y.get(k) {
                values[v] = val.clone();
            }
        }
        values
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;
    use crate::lp::solve;

    #[test]
    fn q_forced_cases() {
        let g = 4;
        let long = Job::new("j0", 0, 2 * g, g);
        assert_eq!(q_forced(&long, Window::new(0, g)), 0);
        assert_eq!(q_forced(&long, Window::new(2, 2 + g)), 0);
        assert_eq!(q_forced(&long, Window::new(1, 2 + g)), 1);
        assert_eq!(q_forced(&long, Window::new(0, 2 * g)), g);
        let unit = Job::new("u", 2, 4, 1);
        assert_eq!(q_forced(&unit, Window::new(1, 5)), 1);
        assert_eq!(q_forced(&unit, Window::new(2, 3)), 0);
        assert_eq!(q_forced(&unit, Window::new(5, 7)), 0);
    }

    #[test]
    fn single_unit_job() {
        let inst = parse_instance("g 1\njob a 0 1 1").unwrap();
        let lp = build_cw_lp(&inst);
        let sol = solve(lp.problem());
        assert_eq!(sol.value, int(1));
    }
}
