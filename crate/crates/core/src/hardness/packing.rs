//! Fitting window-free jobs into machines with given idle slots.

use std::collections::BTreeSet;

use super::HardnessError;
use crate::instance::Time;

/// Idle slots per machine and job lengths, both non-increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub empty: Vec<u32>,
    pub lengths: Vec<u32>,
}

impl Configuration {
    pub fn new(empty: Vec<u32>, lengths: Vec<u32>) -> Result<Self, HardnessError> {
        if !is_non_increasing(&empty) {
            return Err(HardnessError::NotNonIncreasing("empty-slot counts".into()));
        }
        if !is_non_increasing(&lengths) {
            return Err(HardnessError::NotNonIncreasing("job lengths".into()));
        }
        Ok(Configuration { empty, lengths })
    }

    /// Layout where machine `j` is idle in slots `0..e_j`: at every slot the
    /// idle machines are a prefix `1..z_t`.
    pub fn canonical_layout(&self) -> Vec<Vec<Time>> {
        self.empty.iter().map(|&e| (0..e).collect()).collect()
    }
}

fn is_non_increasing(v: &[u32]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

/// `Σ_{i≤j} e_i ≥ Σ_{i≤j} l_i` for every `j` up to the number of jobs.
pub fn config_fits(cfg: &Configuration) -> Result<bool, HardnessError> {
    let q = cfg.lengths.len();
    if q > cfg.empty.len() {
        return Err(HardnessError::TooManyJobs {
            jobs: q,
            machines: cfg.empty.len(),
        });
    }
    let mut slack: i64 = 0;
    for (e, l) in cfg.empty.iter().zip(&cfg.lengths) {
        slack += i64::from(*e) - i64::from(*l);
        if slack < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One `(machine, slot)` cell list per job, in job order.
pub type Packing = Vec<Vec<(usize, Time)>>;

/// Places jobs largest first. With `k` jobs left, the current job draws idle
/// cells from machine `k` down to machine 1, each machine in ascending slot
/// order, never reusing a slot. Returns `None` if some job cannot be placed.
pub fn pack_greedy(cfg: &Configuration, layout: &[Vec<Time>]) -> Option<Packing> {
    let q = cfg.lengths.len();
    if q > layout.len() {
        return None;
    }
    let mut free: Vec<BTreeSet<Time>> = layout
        .iter()
        .map(|slots| slots.iter().copied().collect())
        .collect();
    let mut packing = Vec::with_capacity(q);
    for (idx, &len) in cfg.lengths.iter().enumerate() {
        let remaining = q - idx;
        let mut used: BTreeSet<Time> = BTreeSet::new();
        let mut cells = Vec::with_capacity(len as usize);
        'machines: for machine in (0..remaining).rev() {
            let picks: Vec<Time> = free[machine]
                .iter()
                .copied()
                .filter(|t| !used.contains(t))
                .take(len as usize - cells.len())
                .collect();
            for t in picks {
                free[machine].remove(&t);
                used.insert(t);
                cells.push((machine, t));
            }
            if cells.len() == len as usize {
                break 'machines;
            }
        }
        if cells.len() < len as usize {
            return None;
        }
        packing.push(cells);
    }
    Some(packing)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_examples() {
        let cfg = Configuration::new(vec![2, 1], vec![2, 1]).unwrap();
        assert_eq!(config_fits(&cfg), Ok(true));
        let cfg = Configuration::new(vec![1, 1], vec![2]).unwrap();
        assert_eq!(config_fits(&cfg), Ok(false));
        let cfg = Configuration::new(vec![3], vec![]).unwrap();
        assert_eq!(config_fits(&cfg), Ok(true));
        let cfg = Configuration::new(vec![3], vec![1, 1]).unwrap();
        assert_eq!(
            config_fits(&cfg),
            Err(HardnessError::TooManyJobs {
                jobs: 2,
                machines: 1
            })
        );
        assert!(Configuration::new(vec![1, 2], vec![]).is_err());
    }

    #[test]
    fn greedy_trace() {
        // machine 1 idle at t1, t2; machine 2 idle at t3
        let cfg = Configuration::new(vec![2, 1], vec![2, 1]).unwrap();
        let layout = vec![vec![1, 2], vec![3]];
        let packing = pack_greedy(&cfg, &layout).unwrap();
        assert_eq!(packing, vec![vec![(1, 3), (0, 1)], vec![(0, 2)]]);
    }

    #[test]
    fn greedy_on_canonical_layout() {
        let cfg = Configuration::new(vec![3, 2, 1], vec![3, 2, 1]).unwrap();
        let packing = pack_greedy(&cfg, &cfg.canonical_layout()).unwrap();
        for (cells, &len) in packing.iter().zip(&cfg.lengths) {
            let slots: BTreeSet<Time> = cells.iter().map(|c| c.1).collect();
            assert_eq!(slots.len(), len as usize);
        }
        let cfg = Configuration::new(vec![1, 1], vec![2]).unwrap();
        assert!(pack_greedy(&cfg, &cfg.canonical_layout()).is_none());
    }

    #[test]
    fn empty_job_list() {
        let cfg = Configuration::new(vec![2, 2], vec![]).unwrap();
        assert_eq!(pack_greedy(&cfg, &cfg.canonical_layout()), Some(vec![]));
    }
}
