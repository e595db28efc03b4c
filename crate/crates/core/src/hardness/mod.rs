//! Hardness gadgets: prefix sum cover, the transform from set cover, and the
//! reduction from prefix sum cover to laminar active-time scheduling.
//!
//! Vectors are compared by prefix sums: `a ≺ b` iff every prefix sum of `a`
//! is at least the matching prefix sum of `b`. A prefix sum cover instance
//! asks for `k` of the vectors `u_1..u_n` whose sum `≺ v`.

mod packing;

pub use packing::{config_fits, pack_greedy, Configuration, Packing};

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::instance::{Instance, Job, Time};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HardnessError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("transformed entry out of range: {0}")]
    RangeViolation(String),
    #[error("maximum entry W = {0} is below 2")]
    DegenerateWidth(u64),
    #[error("{jobs} jobs exceed {machines} machines")]
    TooManyJobs { jobs: usize, machines: usize },
    #[error("{0} must be non-increasing")]
    NotNonIncreasing(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// `a ≺ b`: prefix sums of `a` dominate those of `b`.
pub fn prec(a: &[u64], b: &[u64]) -> Result<bool, HardnessError> {
    if a.len() != b.len() {
        return Err(HardnessError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut lead: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        lead += i128::from(*x) - i128::from(*y);
        if lead < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_non_increasing(v: &[u64], what: &str) -> Result<(), HardnessError> {
    if v.windows(2).all(|w| w[0] >= w[1]) {
        Ok(())
    } else {
        Err(HardnessError::NotNonIncreasing(what.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PscInstance {
    vectors: Vec<Vec<u64>>,
    target: Vec<u64>,
    k: usize,
}

impl PscInstance {
    /// Checks dimensions, ordering and positivity of the vectors.
    pub fn new(vectors: Vec<Vec<u64>>, target: Vec<u64>, k: usize) -> Result<Self, HardnessError> {
        let d = target.len();
        if d == 0 {
            return Err(HardnessError::Invalid("dimension must be positive".into()));
        }
        check_non_increasing(&target, "v")?;
        for (i, u) in vectors.iter().enumerate() {
            if u.len() != d {
                return Err(HardnessError::DimensionMismatch {
                    left: u.len(),
                    right: d,
                });
            }
            check_non_increasing(u, &format!("u{}", i + 1))?;
            if u.contains(&0) {
                return Err(HardnessError::Invalid(format!(
                    "u{} has a zero entry",
                    i + 1
                )));
            }
        }
        Ok(PscInstance { vectors, target, k })
    }

    pub fn dimension(&self) -> usize {
        self.target.len()
    }

    pub fn vectors(&self) -> &[Vec<u64>] {
        &self.vectors
    }

    pub fn target(&self) -> &[u64] {
        &self.target
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `W`, the largest entry over all vectors and the target.
    pub fn width(&self) -> u64 {
        self.vectors
            .iter()
            .flatten()
            .chain(&self.target)
            .copied()
            .max()
            .unwrap_or(0)
    }

    fn sum_of(&self, selection: &[usize]) -> Vec<u64> {
        let mut sum = vec![0u64; self.dimension()];
        for &i in selection {
            for (s, x) in sum.iter_mut().zip(&self.vectors[i]) {
                *s += x;
            }
        }
        sum
    }

    /// Whether the selected vectors solve the instance.
    pub fn is_solution(&self, selection: &[usize]) -> bool {
        selection.len() == self.k
            && selection.iter().all_unique()
            && prec(&self.sum_of(selection), &self.target).unwrap_or(false)
    }
}

/// Lexicographically first `k`-subset of vector indices whose sum `≺ v`.
pub fn psc_exhaustive(psc: &PscInstance) -> Option<Vec<usize>> {
    (0..psc.vectors.len())
        .combinations(psc.k)
        .find(|sel| prec(&psc.sum_of(sel), &psc.target).unwrap_or(false))
}

pub fn parse_psc(text: &str) -> Result<PscInstance, HardnessError> {
    let mut d: Option<usize> = None;
    let mut k: Option<usize> = None;
    let mut target: Option<Vec<u64>> = None;
    let mut vectors = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let malformed = |reason: String| HardnessError::Malformed {
            line: idx + 1,
            reason,
        };
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap_or_default();
        let nums: Vec<u64> = tokens
            .map(|t| {
                t.parse()
                    .map_err(|_| malformed(format!("bad integer `{t}`")))
            })
            .collect::<Result<_, _>>()?;
        match head {
            "d" | "k" if nums.len() != 1 => {
                return Err(malformed(format!("expected `{head} <int>`")))
            }
            "d" => d = Some(nums[0] as usize),
            "k" => k = Some(nums[0] as usize),
            "v" => target = Some(nums),
            "u" => vectors.push(nums),
            other => return Err(malformed(format!("unknown directive `{other}`"))),
        }
    }
    let missing = |what: &str| HardnessError::Malformed {
        line: 0,
        reason: format!("missing `{what}`"),
    };
    let d = d.ok_or_else(|| missing("d"))?;
    let k = k.ok_or_else(|| missing("k"))?;
    let target = target.ok_or_else(|| missing("v"))?;
    if target.len() != d {
        return Err(HardnessError::DimensionMismatch {
            left: target.len(),
            right: d,
        });
    }
    PscInstance::new(vectors, target, k)
}

fn write_vector(f: &mut fmt::Formatter<'_>, head: &str, v: &[u64]) -> fmt::Result {
    write!(f, "{head}")?;
    for x in v {
        write!(f, " {x}")?;
    }
    writeln!(f)
}

impl fmt::Display for PscInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d {}", self.dimension())?;
        writeln!(f, "k {}", self.k)?;
        write_vector(f, "v", &self.target)?;
        for u in &self.vectors {
            write_vector(f, "u", u)?;
        }
        Ok(())
    }
}

/// Set cover over elements `1..=d`, sets as 0/1 characteristic vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    universe: usize,
    sets: Vec<Vec<u8>>,
    k: usize,
}

impl SetCoverInstance {
    pub fn new(universe: usize, sets: Vec<Vec<u8>>, k: usize) -> Result<Self, HardnessError> {
        if universe == 0 {
            return Err(HardnessError::Invalid("universe must be nonempty".into()));
        }
        for s in &sets {
            if s.len() != universe {
                return Err(HardnessError::DimensionMismatch {
                    left: s.len(),
                    right: universe,
                });
            }
            if s.iter().any(|&b| b > 1) {
                return Err(HardnessError::Invalid(
                    "characteristic entries must be 0 or 1".into(),
                ));
            }
        }
        Ok(SetCoverInstance { universe, sets, k })
    }

    /// Builds characteristic vectors from 1-based element lists.
    pub fn from_element_lists(
        universe: usize,
        lists: &[Vec<usize>],
        k: usize,
    ) -> Result<Self, HardnessError> {
        let mut sets = Vec::with_capacity(lists.len());
        for list in lists {
            let mut chi = vec![0u8; universe];
            for &e in list {
                if e == 0 || e > universe {
                    return Err(HardnessError::Invalid(format!(
                        "element {e} outside 1..={universe}"
                    )));
                }
                chi[e - 1] = 1;
            }
            sets.push(chi);
        }
        Self::new(universe, sets, k)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[Vec<u8>] {
        &self.sets
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Smallest-size, then lexicographically first cover using at most `k` sets.
    pub fn solve_exhaustive(&self) -> Option<Vec<usize>> {
        (0..=self.k.min(self.sets.len())).find_map(|size| {
            (0..self.sets.len())
                .combinations(size)
                .find(|sel| (0..self.universe).all(|e| sel.iter().any(|&s| self.sets[s][e] == 1)))
        })
    }
}

/// Text format: `d <int>`, `k <int>`, then one `set <elements...>` line per set
/// with 1-based elements.
pub fn parse_set_cover(text: &str) -> Result<SetCoverInstance, HardnessError> {
    let mut d = None;
    let mut k = None;
    let mut lists = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let malformed = |reason: String| HardnessError::Malformed {
            line: idx + 1,
            reason,
        };
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap_or_default();
        let nums: Vec<usize> = tokens
            .map(|t| {
                t.parse()
                    .map_err(|_| malformed(format!("bad integer `{t}`")))
            })
            .collect::<Result<_, _>>()?;
        match head {
            "d" | "k" if nums.len() != 1 => {
                return Err(malformed(format!("expected `{head} <int>`")))
            }
            "d" => d = Some(nums[0]),
            "k" => k = Some(nums[0]),
            "set" => lists.push(nums),
            other => return Err(malformed(format!("unknown directive `{other}`"))),
        }
    }
    let missing = |what: &str| HardnessError::Malformed {
        line: 0,
        reason: format!("missing `{what}`"),
    };
    SetCoverInstance::from_element_lists(
        d.ok_or_else(|| missing("d"))?,
        &lists,
        k.ok_or_else(|| missing("k"))?,
    )
}

impl fmt::Display for SetCoverInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d {}", self.universe)?;
        writeln!(f, "k {}", self.k)?;
        for s in &self.sets {
            write!(f, "set")?;
            for (e, &b) in s.iter().enumerate() {
                if b == 1 {
                    write!(f, " {}", e + 1)?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Differences of a 0/1 vector, shifted by a linear ramp:
/// `[w']_j = [w]_j − [w]_{j−1} + a + b·(d − j)` with `[w]_0 = 0`.
fn ramp_transform(w: &[u8], a: i64, b: i64) -> Vec<i64> {
    let d = w.len() as i64;
    (1..=d)
        .map(|j| {
            let cur = i64::from(w[(j - 1) as usize]);
            let prev = if j == 1 {
                0
            } else {
                i64::from(w[(j - 2) as usize])
            };
            cur - prev + a + b * (d - j)
        })
        .collect()
}

fn in_range(v: &[i64], lo: i64, hi: i64, what: &str) -> Result<Vec<u64>, HardnessError> {
    if let Some(x) = v.iter().find(|&&x| x < lo || x > hi) {
        return Err(HardnessError::RangeViolation(format!(
            "{what} entry {x} outside [{lo}, {hi}]"
        )));
    }
    if !v.windows(2).all(|p| p[0] >= p[1]) {
        return Err(HardnessError::RangeViolation(format!(
            "{what} = {v:?} is not non-increasing"
        )));
    }
    Ok(v.iter().map(|&x| x as u64).collect())
}

/// `[u'_i]_j = [u_i]_j − [u_i]_{j−1} + 2 + d − j` and
/// `[v']_j = [v]_j − [v]_{j−1} + 2k + k(d − j)` with `v = 1^d`.
///
/// Entries must land in `[1, d + 2]` and `[2k − 1, kd + k + 1]` and every
/// vector must come out non-increasing; otherwise `RangeViolation`.
pub fn setcover_to_psc(sc: &SetCoverInstance) -> Result<PscInstance, HardnessError> {
    let d = sc.universe as i64;
    let k = sc.k as i64;
    if k < 1 {
        return Err(HardnessError::Invalid("k must be at least 1".into()));
    }
    let vectors = sc
        .sets
        .iter()
        .enumerate()
        .map(|(i, s)| in_range(&ramp_transform(s, 2, 1), 1, d + 2, &format!("u'{}", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    let ones = vec![1u8; sc.universe];
    let target = in_range(
        &ramp_transform(&ones, 2 * k, k),
        2 * k - 1,
        k * d + k + 1,
        "v'",
    )?;
    PscInstance::new(vectors, target, sc.k)
}

/// Active-time instance built from a prefix sum cover instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    pub instance: Instance,
    /// Slot `(i−1)·W` of every block.
    pub special_slots: Vec<Time>,
    /// `n(W − 1)`: the non-special slots, all of which must open.
    pub baseline: u64,
    pub width: u64,
}

impl ReductionInstance {
    /// `n(W − 1) + k`.
    pub fn threshold(&self, k: usize) -> u64 {
        self.baseline + k as u64
    }
}

/// Machines `p = dW`; block `i` spans `[(i−1)W, iW)`.
///
/// * rigid: for `w ∈ [2, W]`, `p − |{j : [u_i]_j ≥ w}|` unit jobs on slot
///   `(i−1)W + w − 1`;
/// * flexible: `Σ_j [u_i]_j − d` unit jobs on the whole block;
/// * target: one job of length `[v]_j` per coordinate on `[0, nW)`
///   (zero coordinates emit nothing).
pub fn psc_to_active_time(psc: &PscInstance) -> Result<ReductionInstance, HardnessError> {
    let width = psc.width();
    if width < 2 {
        return Err(HardnessError::DegenerateWidth(width));
    }
    let d = psc.dimension() as u64;
    let machines = d * width;
    let n = psc.vectors.len() as u64;
    let w32 = |v: u64| Time::try_from(v).expect("horizon fits in a time index");
    let mut jobs = Vec::new();
    for (idx, u) in psc.vectors.iter().enumerate() {
        let block = idx as u64 * width;
        for w in 2..=width {
            let idle = u.iter().filter(|&&x| x >= w).count() as u64;
            debug_assert!(idle < machines);
            let slot = w32(block + w - 1);
            for c in 0..machines - idle {
                jobs.push(Job::new(
                    format!("r{}_{}_{}", idx + 1, w, c),
                    slot,
                    slot + 1,
                    1,
                ));
            }
        }
        let flexible = u.iter().sum::<u64>() - d;
        for c in 0..flexible {
            jobs.push(Job::new(
                format!("f{}_{}", idx + 1, c),
                w32(block),
                w32(block + width),
                1,
            ));
        }
    }
    for (j, &len) in psc.target.iter().enumerate() {
        if len > 0 {
            jobs.push(Job::new(format!("v{}", j + 1), 0, w32(n * width), w32(len)));
        }
    }
    let capacity = u32::try_from(machines).expect("machine count fits in u32");
    let instance =
        Instance::new(capacity, jobs).map_err(|e| HardnessError::Invalid(e.to_string()))?;
    Ok(ReductionInstance {
        instance,
        special_slots: (0..n).map(|i| w32(i * width)).collect(),
        baseline: n * (width - 1),
        width,
    })
}
