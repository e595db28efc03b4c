//! End-to-end solve: LP, push-down, rounding, flow certification.

use thiserror::Error;

use crate::feasibility::{check_opening, CutCertificate, OpeningVerdict, Schedule, ScheduleError};
use crate::instance::{Instance, LaminarTree};
use crate::lp::{build_node_lp, LpError, NodeLp, NodeSolution, Rational};
use crate::rounding::{certify_ratio, round, IntegralOpening, RoundingError};
use crate::transform::{push_down, TransformError, TransformedSolution};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Rounding(#[from] RoundingError),
    #[error("rounded opening is infeasible: jobs {:?} need {} > {}", .0.jobs, .0.rhs, .0.lhs)]
    RoundedInfeasible(CutCertificate),
    #[error("extracted schedule is invalid: {0}")]
    InvalidSchedule(#[from] ScheduleError),
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub tree: LaminarTree,
    pub lp: NodeLp,
    pub solution: NodeSolution,
    pub transformed: TransformedSolution,
    pub opening: IntegralOpening,
    /// `x̃([m]) / x([m])`.
    pub ratio: Rational,
    pub schedule: Schedule,
}

impl PipelineOutcome {
    pub fn lp_value(&self) -> &Rational {
        &self.solution.value
    }

    pub fn total_open(&self) -> u64 {
        self.opening.total_open()
    }
}

pub fn solve_instance(inst: &Instance) -> Result<PipelineOutcome, PipelineError> {
    let tree = LaminarTree::build(inst);
    let lp = build_node_lp(&tree, inst)?;
    let solution = lp.solve()?;
    let transformed = push_down(&lp, &solution, &tree)?;
    let opening = round(&transformed, &tree)?;
    let ratio = certify_ratio(&opening)?;
    let schedule = match check_opening(opening.x_tilde(), &tree, inst) {
        OpeningVerdict::Feasible(s) => s,
        OpeningVerdict::Infeasible(cert) => return Err(PipelineError::RoundedInfeasible(cert)),
    };
    schedule.validate(inst)?;
    Ok(PipelineOutcome {
        tree,
        lp,
        solution,
        transformed,
        opening,
        ratio,
        schedule,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;
    use crate::lp::int;

    #[test]
    fn single_job() {
        let inst = parse_instance("g 1\njob a 0 3 2").unwrap();
        let out = solve_instance(&inst).unwrap();
        assert_eq!(out.lp_value(), &int(2));
        assert_eq!(out.total_open(), 2);
        assert_eq!(out.schedule.num_active(), 2);
    }

    #[test]
    fn nested_example() {
        let inst = parse_instance("g 2\njob a 0 4 2\njob b 0 2 1\njob c 2 4 1").unwrap();
        let out = solve_instance(&inst).unwrap();
        assert_eq!(out.lp_value(), &int(2));
        assert_eq!(out.total_open(), 2);
    }
}
