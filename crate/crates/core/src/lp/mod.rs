//! Exact linear programs for laminar active-time scheduling.
//!
//! Two formulations are built here:
//!
//! * the node LP, with one opening variable `x(i)` per tree node and one
//!   assignment variable `y(i, j)` per node `i` and job `j ∈ J(Anc(i))`,
//!   strengthened by `x(Des(i)) ≥ 2` / `≥ 3` wherever the subtree provably
//!   needs that many slots;
//! * the time-indexed formulation with interval ceiling constraints built
//!   from [`q_forced`].
//!
//! Everything is solved over [`Rational`] by [`solve`].

mod cw;
mod node;
mod problem;
mod simplex;

pub use cw::{build_cw_lp, q_forced, CwLp};
pub use node::{build_node_lp, opt_lower_bound, NodeLp, NodeSolution};
pub use problem::{Constraint, LpProblem, Relation, VarId, Variable};
pub use simplex::{solve, LpSolution, LpStatus};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("jobs inside node {node} cannot be scheduled even with every slot open")]
    InfeasibleSubinstance { node: usize },
    #[error("LP solve ended with status {0:?}")]
    NotOptimal(LpStatus),
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Always `num/den`, also for integers.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a plain integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.trim().parse().ok()?)),
    }
}
