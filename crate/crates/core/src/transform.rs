//! Push fractional openings toward the leaves.
//!
//! While some node `i₁` has `x(i₁) > 0` above a strict descendant `i₂` with
//! `x(i₂) < L(i₂)`, move `θ = min{L(i₂) − x(i₂), x(i₁)}` of opening from `i₁`
//! to `i₂`, carrying the proportional share `θ / x(i₁)` of every `y(i₁, ·)`
//! along. Afterwards every node with `x > 0` has a fully open subtree below
//! it, and the topmost open nodes `I` split the tree into a closed top part
//! and fully open bottom parts.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::instance::LaminarTree;
use crate::lp::{int, NodeLp, NodeSolution, Rational};

/// Structural properties of the topmost open set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimProperty {
    /// No node of `I` is a strict ancestor of another.
    Antichain,
    /// `Des(I)` contains every leaf.
    LeavesCovered,
    /// Every node of `I` has `x > 0`.
    PositiveOpening,
    /// Strict descendants of `I` are fully open.
    DescendantsSaturated,
    /// Strict ancestors of `I` are closed.
    AncestorsClosed,
}

impl fmt::Display for ClaimProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaimProperty::Antichain => "antichain",
            ClaimProperty::LeavesCovered => "leaves-covered",
            ClaimProperty::PositiveOpening => "positive-opening",
            ClaimProperty::DescendantsSaturated => "descendants-saturated",
            ClaimProperty::AncestorsClosed => "ancestors-closed",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("input violates LP constraints: {}", .0.join(", "))]
    InfeasibleInput(Vec<String>),
    #[error("topmost open set fails `{property}` at node {node}")]
    PropertyViolation {
        property: ClaimProperty,
        node: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformedSolution {
    pub x: Vec<Rational>,
    pub y: BTreeMap<(usize, usize), Rational>,
    /// `I`, in pre-order (left to right).
    pub topmost: Vec<usize>,
    /// Number of moves performed.
    pub steps: usize,
}

impl TransformedSolution {
    pub fn total(&self) -> Rational {
        self.x.iter().fold(Rational::zero(), |a, b| a + b)
    }
}

fn pool(tree: &LaminarTree, i: usize) -> Rational {
    int(tree.pool_len(i).into())
}

/// Deepest unsaturated node below an open ancestor, with that ancestor.
fn violating_pair(x: &[Rational], tree: &LaminarTree) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for lower in 0..tree.len() {
        if x[lower] >= pool(tree, lower) {
            continue;
        }
        let upper = tree
            .strict_ancestors(lower)
            .into_iter()
            .filter(|&a| x[a].is_positive())
            .min();
        if let Some(upper) = upper {
            let deeper = best.is_none_or(|(b, _)| tree.node(lower).depth > tree.node(b).depth);
            if deeper {
                best = Some((lower, upper));
            }
        }
    }
    best
}

/// Whether `x(i₂) < L(i₂)` implies `x(i₁) = 0` for every strict ancestor `i₁`.
pub fn has_push_down_property(x: &[Rational], tree: &LaminarTree) -> bool {
    violating_pair(x, tree).is_none()
}

/// Applies moves until no violating pair is left. Returns the step count.
pub fn push_down_point(
    x: &mut [Rational],
    y: &mut BTreeMap<(usize, usize), Rational>,
    tree: &LaminarTree,
) -> usize {
    let mut steps = 0;
    while let Some((lower, upper)) = violating_pair(x, tree) {
        let room = pool(tree, lower) - &x[lower];
        let theta = if room < x[upper] {
            room
        } else {
            x[upper].clone()
        };
        let old = x[upper].clone();
        let kept = &old - &theta;
        x[upper] = kept.clone();
        x[lower] += &theta;
        for j in tree.jobs_of_ancestors(upper) {
            let Some(share) = y.get(&(upper, j)).cloned() else {
                continue;
            };
            if share.is_zero() {
                continue;
            }
            y.insert((upper, j), &kept / &old * &share);
            *y.entry((lower, j)).or_insert_with(Rational::zero) += &theta / &old * &share;
        }
        steps += 1;
    }
    steps
}

/// Pushes an LP-feasible `(x, y)` down and computes the topmost open set.
pub fn push_down(
    lp: &NodeLp,
    sol: &NodeSolution,
    tree: &LaminarTree,
) -> Result<TransformedSolution, TransformError> {
    let bad = lp.violations(&sol.x, &sol.y);
    if !bad.is_empty() {
        return Err(TransformError::InfeasibleInput(bad));
    }
    let mut x = sol.x.clone();
    let mut y = sol.y.clone();
    let steps = push_down_point(&mut x, &mut y, tree);
    debug_assert!(steps <= tree.len() * tree.len());
    let topmost = topmost_open(&x, tree)?;
    Ok(TransformedSolution {
        x,
        y,
        topmost,
        steps,
    })
}

/// Topmost nodes with `x > 0`, checked against every structural property.
pub fn topmost_open(x: &[Rational], tree: &LaminarTree) -> Result<Vec<usize>, TransformError> {
    let topmost: Vec<usize> = (0..tree.len())
        .filter(|&i| {
            x[i].is_positive() && tree.strict_ancestors(i).into_iter().all(|a| x[a].is_zero())
        })
        .collect();
    let fail = |property, node| Err(TransformError::PropertyViolation { property, node });

    for &a in &topmost {
        if let Some(&b) = topmost.iter().find(|&&b| b != a && tree.is_ancestor(a, b)) {
            return fail(ClaimProperty::Antichain, b);
        }
    }
    for leaf in tree.leaves() {
        if !topmost.iter().any(|&i| tree.is_ancestor(i, leaf)) {
            return fail(ClaimProperty::LeavesCovered, leaf);
        }
    }
    for &i in &topmost {
        if !x[i].is_positive() {
            return fail(ClaimProperty::PositiveOpening, i);
        }
        if let Some(d) = tree.strict_descendants(i).find(|&d| x[d] != pool(tree, d)) {
            return fail(ClaimProperty::DescendantsSaturated, d);
        }
        if let Some(a) = tree
            .strict_ancestors(i)
            .into_iter()
            .find(|&a| !x[a].is_zero())
        {
            return fail(ClaimProperty::AncestorsClosed, a);
        }
    }
    Ok(topmost)
}
