use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::problem::{LpProblem, Relation, VarId};
use super::{int, solve, LpError, Rational};
use crate::feasibility::check_slots;
use crate::instance::{Instance, LaminarTree, Time};

/// Smallest number of slots (capped at 3) that schedule `J(Des(i))` alone.
pub fn opt_lower_bound(tree: &LaminarTree, inst: &Instance, node: usize) -> Result<u8, LpError> {
    let jobs = tree.jobs_of_descendants(node);
    if jobs.is_empty() {
        return Ok(1);
    }
    let sub = inst
        .restricted_to(&jobs)
        .expect("a subset of a valid instance is valid");
    let slots: Vec<Time> = tree.node(node).window.slots().collect();
    if slots
        .iter()
        .any(|&t| check_slots(&BTreeSet::from([t]), &sub))
    {
        return Ok(1);
    }
    for (k, &a) in slots.iter().enumerate() {
        for &b in &slots[k + 1..] {
            if check_slots(&BTreeSet::from([a, b]), &sub) {
                return Ok(2);
            }
        }
    }
    if !check_slots(&slots.iter().copied().collect(), &sub) {
        return Err(LpError::InfeasibleSubinstance { node });
    }
    Ok(3)
}

/// The node LP together with its variable layout.
#[derive(Debug, Clone)]
pub struct NodeLp {
    problem: LpProblem,
    x: Vec<VarId>,
    y: BTreeMap<(usize, usize), VarId>,
    opt_bounds: Vec<u8>,
}

/// Optimal `(x, y)` of the node LP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSolution {
    pub value: Rational,
    /// `x(i)` per node.
    pub x: Vec<Rational>,
    /// `y(i, j)` for every pair with `j ∈ J(Anc(i))`.
    pub y: BTreeMap<(usize, usize), Rational>,
}

impl NodeSolution {
    pub fn total(&self) -> Rational {
        self.x.iter().fold(Rational::zero(), |a, b| a + b)
    }
}

pub fn build_node_lp(tree: &LaminarTree, inst: &Instance) -> Result<NodeLp, LpError> {
    let m = tree.len();
    let mut lp = LpProblem::new();
    let x: Vec<VarId> = (0..m).map(|i| lp.add_nonneg(format!("x{i}"))).collect();
    let mut y = BTreeMap::new();
    for i in 0..m {
        for j in tree.jobs_of_ancestors(i) {
            y.insert((i, j), lp.add_nonneg(format!("y{i}_{}", inst.job(j).id)));
        }
    }
    let one = int(1);

    for (j, job) in inst.jobs().iter().enumerate() {
        let terms = tree
            .descendants(tree.job_node(j))
            .map(|i| (y[&(i, j)], one.clone()))
            .collect();
        lp.add_constraint(
            format!("cover_{}", job.id),
            terms,
            Relation::GreaterEq,
            int(job.length.into()),
        );
    }
    let g = int(inst.capacity().into());
    for i in 0..m {
        let mut terms: Vec<(VarId, Rational)> = tree
            .jobs_of_ancestors(i)
            .into_iter()
            .map(|j| (y[&(i, j)], one.clone()))
            .collect();
        terms.push((x[i], -g.clone()));
        lp.add_constraint(format!("capacity_{i}"), terms, Relation::LessEq, int(0));
    }
    for (i, &xi) in x.iter().enumerate() {
        lp.add_constraint(
            format!("pool_{i}"),
            vec![(xi, one.clone())],
            Relation::LessEq,
            int(tree.pool_len(i).into()),
        );
    }
    for (&(i, j), &var) in &y {
        lp.add_constraint(
            format!("assign_{i}_{}", inst.job(j).id),
            vec![(var, one.clone()), (x[i], -one.clone())],
            Relation::LessEq,
            int(0),
        );
    }
    let mut opt_bounds = Vec::with_capacity(m);
    for i in 0..m {
        let bound = opt_lower_bound(tree, inst, i)?;
        opt_bounds.push(bound);
        let subtree: Vec<(VarId, Rational)> =
            tree.descendants(i).map(|d| (x[d], one.clone())).collect();
        if bound >= 2 {
            lp.add_constraint(
                format!("two_{i}"),
                subtree.clone(),
                Relation::GreaterEq,
                int(2),
            );
        }
        if bound >= 3 {
            lp.add_constraint(format!("three_{i}"), subtree, Relation::GreaterEq, int(3));
        }
    }
    lp.set_objective(x.iter().map(|&v| (v, one.clone())).collect());

    Ok(NodeLp {
        problem: lp,
        x,
        y,
        opt_bounds,
    })
}

impl NodeLp {
    pub fn problem(&self) -> &LpProblem {
        &self.problem
    }

    pub fn x_var(&self, node: usize) -> VarId {
        self.x[node]
    }

    pub fn y_var(&self, node: usize, job: usize) -> Option<VarId> {
        self.y.get(&(node, job)).copied()
    }

    /// Pairs `(i, j)` carrying a `y` variable.
    pub fn y_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.y.keys().copied()
    }

    /// `OPT_i` capped at 3, per node.
    pub fn opt_bounds(&self) -> &[u8] {
        &self.opt_bounds
    }

    pub fn solve(&self) -> Result<NodeSolution, LpError> {
        let sol = solve(&self.problem);
        if !sol.is_optimal() {
            return Err(LpError::NotOptimal(sol.status));
        }
        Ok(NodeSolution {
            value: sol.value,
            x: self.x.iter().map(|&v| sol.values[v].clone()).collect(),
            y: self
                .y
                .iter()
                .map(|(&k, &v)| (k, sol.values[v].clone()))
                .collect(),
        })
    }

    /// Flat variable vector for `(x, y)`; missing `y` entries count as zero.
    pub fn assignment(
        &self,
        x: &[Rational],
        y: &BTreeMap<(usize, usize), Rational>,
    ) -> Vec<Rational> {
        let mut values = vec![Rational::zero(); self.problem.num_variables()];
        for (i, &v) in self.x.iter().enumerate() {
            values[v] = x[i].clone();
        }
        for (k, &v) in &self.y {
            if let Some(val) = y.get(k) {
                values[v] = val.clone();
            }
        }
        values
    }

    /// Names of constraints violated by `(x, y)`, checked exactly. A `y`
    /// entry outside the variable layout counts as a violation.
    pub fn violations(
        &self,
        x: &[Rational],
        y: &BTreeMap<(usize, usize), Rational>,
    ) -> Vec<String> {
        let mut out: Vec<String> = y
            .iter()
            .filter(|(k, v)| !self.y.contains_key(k) && !v.is_zero())
            .map(|((i, j), _)| format!("y{i}_{j} must be 0"))
            .collect();
        out.extend(self.problem.violations(&self.assignment(x, y)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;
    use crate::lp::ratio;

    fn setup(text: &str) -> (Instance, LaminarTree) {
        let inst = parse_instance(text).unwrap();
        let tree = LaminarTree::build(&inst);
        (inst, tree)
    }

    #[test]
    fn single_job_needs_two_slots() {
        let (inst, tree) = setup("g 1\njob a 0 3 2");
        let lp = build_node_lp(&tree, &inst).unwrap();
        assert_eq!(lp.problem().num_variables(), 2);
        let sol = lp.solve().unwrap();
        assert_eq!(sol.value, int(2));
        assert!(lp.violations(&sol.x, &sol.y).is_empty());
    }

    #[test]
    fn opt_bounds_small_cases() {
        let (inst, tree) = setup("g 2\njob a 0 3 1");
        assert_eq!(opt_lower_bound(&tree, &inst, 0), Ok(1));
        let (inst, tree) = setup("g 2\njob a 0 3 2");
        assert_eq!(opt_lower_bound(&tree, &inst, 0), Ok(2));
        // g + 1 unit jobs on a shared window of length 2
        let (inst, tree) = setup("g 2\njob a 0 2 1\njob b 0 2 1\njob c 0 2 1");
        assert_eq!(opt_lower_bound(&tree, &inst, 0), Ok(2));
        let (inst, tree) = setup("g 1\njob a 0 3 3");
        assert_eq!(opt_lower_bound(&tree, &inst, 0), Ok(3));
    }

    #[test]
    fn infeasible_subinstance() {
        let (inst, tree) = setup("g 1\njob a 0 2 1\njob b 0 2 1\njob c 0 2 1");
        assert_eq!(
            opt_lower_bound(&tree, &inst, 0),
            Err(LpError::InfeasibleSubinstance { node: 0 })
        );
        assert!(build_node_lp(&tree, &inst).is_err());
    }

    #[test]
    fn strengthening_constraint_on_parent() {
        // two sibling unit-job leaves, parent carries a job of length 2
        let (inst, tree) = setup("g 2\njob p 0 4 2\njob a 0 2 1\njob b 2 4 1");
        let lp = build_node_lp(&tree, &inst).unwrap();
        assert_eq!(lp.opt_bounds(), &[2, 1, 1]);
        assert!(lp.problem().constraints().iter().any(|c| c.name == "two_0"));
        assert!(!lp
            .problem()
            .constraints()
            .iter()
            .any(|c| c.name == "three_0"));
    }

    #[test]
    fn y_variables_only_for_ancestor_jobs() {
        let (inst, tree) = setup("g 2\njob p 0 4 2\njob a 0 2 1\njob b 2 4 1");
        let lp = build_node_lp(&tree, &inst).unwrap();
        let pairs: Vec<_> = lp.y_pairs().collect();
        assert_eq!(pairs, vec![(0, 0), (1, 0), (1, 1), (2, 0), (2, 2)]);
        assert!(lp.y_var(1, 2).is_none());
    }

    #[test]
    fn violations_flag_bad_points() {
        let (inst, tree) = setup("g 1\njob a 0 3 2");
        let lp = build_node_lp(&tree, &inst).unwrap();
        let mut y = BTreeMap::new();
        y.insert((0, 0), ratio(3, 2));
        let bad = lp.violations(&[ratio(3, 2)], &y);
        assert!(bad.iter().any(|n| n == "cover_a"));
        assert!(bad.iter().any(|n| n == "two_0"));
    }
}
