//! Instance generators: the integrality-gap family and seeded random laminar
//! instances.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use thiserror::Error;

use crate::feasibility::check_slots;
use crate::instance::{Instance, Job, LaminarTree, Time, Window};
use crate::lp::{int, ratio, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerationError {
    #[error("no feasible instance after {attempts} attempts")]
    GenerationFailed { attempts: usize },
    #[error("gap instances need g >= 2, got {0}")]
    CapacityTooSmall(u32),
}

/// One long job of length `g` over `[0, 2g)` plus, for every `i < g`, `g`
/// unit jobs on `[2i, 2i + 2)`; capacity `g`.
///
/// Job 0 is the long job; unit job `k` of group `i` has index `1 + i·g + k`.
pub fn gap_instance(g: u32) -> Result<Instance, GenerationError> {
    if g < 2 {
        return Err(GenerationError::CapacityTooSmall(g));
    }
    let mut jobs = vec![Job::new("j0", 0, 2 * g, g)];
    for i in 0..g {
        for k in 0..g {
            jobs.push(Job::new(format!("u{i}_{k}"), 2 * i, 2 * i + 2, 1));
        }
    }
    Ok(Instance::new(g, jobs).expect("gap instance is valid"))
}

/// Time-indexed fractional point for the gap instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapWitness {
    /// `x(t)` for `t ∈ [0, 2g)`.
    pub x: Vec<Rational>,
    /// `y(t, j)`, zero entries omitted.
    pub y: BTreeMap<(Time, usize), Rational>,
}

impl GapWitness {
    pub fn total(&self) -> Rational {
        self.x.iter().fold(Rational::zero(), |a, b| a + b)
    }
}

/// Every slot open to `(g + 2) / 2g`; each job runs half a unit in both
/// slots of its group.
pub fn gap_fractional_witness(g: u32) -> Result<GapWitness, GenerationError> {
    if g < 2 {
        return Err(GenerationError::CapacityTooSmall(g));
    }
    let x = vec![ratio(i64::from(g) + 2, 2 * i64::from(g)); 2 * g as usize];
    let half = ratio(1, 2);
    let mut y = BTreeMap::new();
    for i in 0..g {
        for t in [2 * i, 2 * i + 1] {
            y.insert((t, 0), half.clone());
            for k in 0..g {
                y.insert((t, (1 + i * g + k) as usize), half.clone());
            }
        }
    }
    Ok(GapWitness { x, y })
}

/// Sums a time-indexed point over each node's private pool.
pub fn project_to_nodes(
    tree: &LaminarTree,
    x: &[Rational],
    y: &BTreeMap<(Time, usize), Rational>,
) -> (Vec<Rational>, BTreeMap<(usize, usize), Rational>) {
    let mut owner = BTreeMap::new();
    for (i, node) in tree.nodes().iter().enumerate() {
        for &t in &node.private_pool {
            owner.insert(t, i);
        }
    }
    let mut node_x = vec![Rational::zero(); tree.len()];
    for (t, v) in x.iter().enumerate() {
        if let Some(&i) = owner.get(&(t as Time)) {
            node_x[i] += v;
        }
    }
    let mut node_y: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for (&(t, j), v) in y {
        if let Some(&i) = owner.get(&t) {
            *node_y.entry((i, j)).or_insert_with(Rational::zero) += v;
        }
    }
    (node_x, node_y)
}

/// 64-bit linear congruential generator (Knuth's MMIX constants); each draw
/// returns bits 33..64 of the advanced state.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        (self.state >> 33) as u32
    }

    /// Uniform-ish draw from `0..n` (modulo reduction).
    pub fn below(&mut self, n: u32) -> u32 {
        assert!(n > 0);
        self.next_u32() % n
    }

    /// Draw from `lo..=hi`.
    pub fn between(&mut self, lo: u32, hi: u32) -> u32 {
        lo + self.below(hi - lo + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomParams {
    pub max_depth: u32,
    pub max_jobs: u32,
    pub max_g: u32,
    pub max_horizon: u32,
}

const MAX_ATTEMPTS: usize = 200;

fn split(rng: &mut Lcg, window: Window, depth: u32, max_depth: u32, out: &mut Vec<Window>) {
    out.push(window);
    if depth >= max_depth || window.len() < 2 || (depth > 0 && rng.below(3) == 0) {
        return;
    }
    let mut pos = window.start;
    while pos < window.end {
        if rng.below(3) == 0 {
            pos += 1;
            continue;
        }
        let len = rng.between(1, window.end - pos);
        let child = Window::new(pos, pos + len);
        if child != window {
            split(rng, child, depth + 1, max_depth, out);
        }
        pos += len;
    }
}

/// Deterministic laminar instance for `seed`; always feasible.
pub fn random_laminar(seed: u64, params: &RandomParams) -> Result<Instance, GenerationError> {
    assert!(params.max_jobs >= 1 && params.max_g >= 1 && params.max_horizon >= 1);
    let mut rng = Lcg::new(seed);
    for _ in 0..MAX_ATTEMPTS {
        let horizon = rng.between(1, params.max_horizon);
        let mut windows = Vec::new();
        split(
            &mut rng,
            Window::new(0, horizon),
            0,
            params.max_depth,
            &mut windows,
        );
        let g = rng.between(1, params.max_g);
        let n = rng.between(1, params.max_jobs);
        let jobs: Vec<Job> = (0..n)
            .map(|k| {
                let w = windows[rng.below(windows.len() as u32) as usize];
                let p = rng.between(1, w.len());
                Job::new(format!("j{k}"), w.start, w.end, p)
            })
            .collect();
        let inst = Instance::new(g, jobs).expect("generated windows are laminar");
        let all: BTreeSet<Time> = (0..inst.horizon()).collect();
        if check_slots(&all, &inst) {
            return Ok(inst);
        }
    }
    Err(GenerationError::GenerationFailed {
        attempts: MAX_ATTEMPTS,
    })
}

/// Lower bound on the gap ratio: `3g / (2(g + 2))`.
pub fn gap_ratio_bound(g: u32) -> Rational {
    ratio(3 * i64::from(g), 2 * (i64::from(g) + 2))
}

/// `3g / 2`, the integral optimum of the gap instance for even `g`.
pub fn gap_integral_optimum(g: u32) -> Rational {
    ratio(3 * i64::from(g), 2)
}

pub fn gap_fractional_value(g: u32) -> Rational {
    int(i64::from(g) + 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    #[test]
    fn gap_two() {
        let inst = gap_instance(2).unwrap();
        assert_eq!(inst.num_jobs(), 5);
        assert_eq!(inst.horizon(), 4);
        let tree = LaminarTree::build(&inst);
        assert_eq!(tree.len(), 3);
        assert_eq!(tree.node(0).window, Window::new(0, 4));
        assert_eq!(tree.pool_len(0), 0);
        assert_eq!(tree.node(0).children, vec![1, 2]);
        assert!(gap_instance(1).is_err());
    }

    #[test]
    fn witness_shape() {
        let w = gap_fractional_witness(6).unwrap();
        assert_eq!(w.x.len(), 12);
        assert_eq!(w.total(), int(8));
        assert_eq!(w.x[0], ratio(8, 12));
    }

    #[test]
    fn lcg_sequence_is_fixed() {
        let mut rng = Lcg::new(0);
        let first: Vec<u32> = (0..3).map(|_| rng.next_u32()).collect();
        // state_1 = INCREMENT, so the first draw is INCREMENT >> 33
        assert_eq!(first[0], (Lcg::INCREMENT >> 33) as u32);
        let mut again = Lcg::new(0);
        assert_eq!(first, (0..3).map(|_| again.next_u32()).collect::<Vec<_>>());
    }

    #[test]
    fn random_instances_are_deterministic_and_feasible() {
        let params = RandomParams {
            max_depth: 3,
            max_jobs: 8,
            max_g: 3,
            max_horizon: 12,
        };
        for seed in 0..50 {
            let a = random_laminar(seed, &params).unwrap();
            let b = random_laminar(seed, &params).unwrap();
            assert_eq!(a, b);
            assert!(a.num_jobs() <= 8 && a.horizon() <= 12 && a.capacity() <= 3);
            assert_eq!(parse_instance(&a.to_string()).unwrap(), a);
            assert!(check_slots(&(0..a.horizon()).collect(), &a));
        }
    }
}
