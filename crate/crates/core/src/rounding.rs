//! Rounding of a pushed-down LP solution to an integral opening.
//!
//! Topmost open nodes start rounded down. Walking their ancestors (and the
//! nodes themselves) from the deepest level up, a node `i` keeps rounding up
//! fractional nodes below it while `9/5 · x(Des(i)) ≥ x̃(Des(i)) + 1`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::instance::LaminarTree;
use crate::lp::{fmt_rational, int, ratio, Rational};
use crate::transform::TransformedSolution;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RoundingError {
    #[error("node {node} is outside the topmost set but has fractional opening {value}")]
    PreconditionViolated { node: usize, value: String },
    #[error(
        "rounded total exceeds 9/5 of the LP total (ratio {ratio}); rounded-up nodes {nodes:?}"
    )]
    RatioExceeded { ratio: String, nodes: Vec<usize> },
}

/// `9/5`.
pub fn ratio_bound() -> Rational {
    ratio(9, 5)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralOpening {
    x_tilde: Vec<u32>,
    fractional: Vec<Rational>,
    total_open: u64,
    lp_total: Rational,
}

impl IntegralOpening {
    /// Builds an opening directly (e.g. for exhaustive checks).
    pub fn new(x_tilde: Vec<u32>, fractional: Vec<Rational>) -> Self {
        let total_open = x_tilde.iter().map(|&v| u64::from(v)).sum();
        let lp_total = fractional.iter().fold(Rational::zero(), |a, b| a + b);
        IntegralOpening {
            x_tilde,
            fractional,
            total_open,
            lp_total,
        }
    }

    /// `x̃(i)` per node.
    pub fn x_tilde(&self) -> &[u32] {
        &self.x_tilde
    }

    /// The fractional `x(i)` this opening was rounded from.
    pub fn fractional(&self) -> &[Rational] {
        &self.fractional
    }

    pub fn total_open(&self) -> u64 {
        self.total_open
    }

    pub fn lp_total(&self) -> &Rational {
        &self.lp_total
    }
}

fn floor_u32(r: &Rational) -> u32 {
    u32::try_from(r.floor().to_integer()).expect("opening fits in u32")
}

fn ceil_u32(r: &Rational) -> u32 {
    u32::try_from(r.ceil().to_integer()).expect("opening fits in u32")
}

pub fn round(
    ts: &TransformedSolution,
    tree: &LaminarTree,
) -> Result<IntegralOpening, RoundingError> {
    let x = &ts.x;
    let m = tree.len();
    let mut in_topmost = vec![false; m];
    for &i in &ts.topmost {
        in_topmost[i] = true;
    }
    let mut x_tilde = vec![0u32; m];
    for i in 0..m {
        if !in_topmost[i] && !x[i].is_integer() {
            return Err(RoundingError::PreconditionViolated {
                node: i,
                value: fmt_rational(&x[i]),
            });
        }
        x_tilde[i] = floor_u32(&x[i]);
    }

    let mut walk: Vec<usize> = Vec::new();
    let mut seen = vec![false; m];
    for &i in &ts.topmost {
        for a in tree.ancestors(i) {
            if !seen[a] {
                seen[a] = true;
                walk.push(a);
            }
        }
    }
    walk.sort_by_key(|&i| (std::cmp::Reverse(tree.node(i).depth), i));

    let bound = ratio_bound();
    for &i in &walk {
        let lp_mass = tree
            .descendants(i)
            .fold(Rational::zero(), |acc, d| acc + &x[d]);
        let scaled = &bound * &lp_mass;
        loop {
            let rounded: u64 = tree.descendants(i).map(|d| u64::from(x_tilde[d])).sum();
            if scaled < int(rounded as i64) + Rational::one() {
                break;
            }
            let candidate = tree
                .descendants(i)
                .find(|&d| Rational::from_integer(x_tilde[d].into()) < x[d]);
            match candidate {
                Some(d) => x_tilde[d] = ceil_u32(&x[d]),
                None => break,
            }
        }
    }

    Ok(IntegralOpening::new(x_tilde, x.clone()))
}

/// `x̃([m]) / x([m])`, required to be at most `9/5`.
pub fn certify_ratio(io: &IntegralOpening) -> Result<Rational, RoundingError> {
    let total = int(io.total_open as i64);
    let value = if io.lp_total.is_zero() {
        if io.total_open == 0 {
            Rational::zero()
        } else {
            return Err(RoundingError::RatioExceeded {
                ratio: "inf".to_string(),
                nodes: raised_nodes(io),
            });
        }
    } else {
        &total / &io.lp_total
    };
    if value > ratio_bound() {
        return Err(RoundingError::RatioExceeded {
            ratio: fmt_rational(&value),
            nodes: raised_nodes(io),
        });
    }
    Ok(value)
}

fn raised_nodes(io: &IntegralOpening) -> Vec<usize> {
    (0..io.x_tilde.len())
        .filter(|&i| Rational::from_integer(io.x_tilde[i].into()) > io.fractional[i])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;
    use std::collections::BTreeMap;

    fn chain_tree() -> LaminarTree {
        // root [0,4) above leaf [0,2)
        LaminarTree::build(&parse_instance("g 1\njob a 0 4 1\njob b 0 2 1").unwrap())
    }

    fn transformed(x: Vec<Rational>, topmost: Vec<usize>) -> TransformedSolution {
        TransformedSolution {
            x,
            y: BTreeMap::new(),
            topmost,
            steps: 0,
        }
    }

    #[test]
    fn integral_input_is_kept() {
        let tree = chain_tree();
        let io = round(&transformed(vec![int(0), int(2)], vec![1]), &tree).unwrap();
        assert_eq!(io.x_tilde(), &[0, 2]);
        assert!(certify_ratio(&io).unwrap() <= Rational::one());
    }

    #[test]
    fn three_halves_rounds_up() {
        let tree = chain_tree();
        let io = round(&transformed(vec![int(0), ratio(3, 2)], vec![1]), &tree).unwrap();
        assert_eq!(io.x_tilde(), &[0, 2]);
        assert_eq!(certify_ratio(&io).unwrap(), ratio(4, 3));
    }

    #[test]
    fn twenty_one_twentieths_rounds_down() {
        let tree = chain_tree();
        let io = round(&transformed(vec![int(0), ratio(21, 20)], vec![1]), &tree).unwrap();
        assert_eq!(io.x_tilde(), &[0, 1]);
        assert_eq!(certify_ratio(&io).unwrap(), ratio(20, 21));
    }

    #[test]
    fn fractional_node_outside_topmost() {
        let tree = chain_tree();
        let err = round(&transformed(vec![ratio(1, 2), ratio(1, 2)], vec![0]), &tree).unwrap_err();
        assert!(matches!(
            err,
            RoundingError::PreconditionViolated { node: 1, .. }
        ));
    }

    #[test]
    fn ratio_exceeded_is_reported() {
        let io = IntegralOpening::new(vec![2], vec![ratio(11, 10)]);
        assert!(matches!(
            certify_ratio(&io),
            Err(RoundingError::RatioExceeded { nodes, .. }) if nodes == vec![0]
        ));
    }

    #[test]
    fn ancestor_budget_rounds_siblings() {
        // root [0,6) with private slots {4,5}; leaves [0,2), [2,4)
        let tree = LaminarTree::build(
            &parse_instance("g 1\njob r 0 6 1\njob a 0 2 1\njob b 2 4 1").unwrap(),
        );
        // both leaves at 6/5: alone each gives 9/5·6/5 = 54/25 ≥ 2, so both round up
        let io = round(
            &transformed(vec![int(0), ratio(6, 5), ratio(6, 5)], vec![1, 2]),
            &tree,
        )
        .unwrap();
        assert_eq!(io.x_tilde(), &[0, 2, 2]);
        // at 21/20 each: leaves stay at 1; the root sees 9/5·21/10 = 189/50 ≥ 3
        // and rounds up the first leaf, then 189/50 < 4 stops
        let io = round(
            &transformed(vec![int(0), ratio(21, 20), ratio(21, 20)], vec![1, 2]),
            &tree,
        )
        .unwrap();
        assert_eq!(io.x_tilde(), &[0, 2, 1]);
        assert!(certify_ratio(&io).unwrap() <= ratio_bound());
    }
}
