//! Brute-force optimum for small instances.
//!
//! Slot sets are enumerated by increasing size, lexicographically within a
//! size, and decided with [`check_slots`]. Two exact reductions keep the
//! search small without changing the answer or the witness:
//!
//! * a window whose jobs need all of its slots forces those slots open;
//! * slots outside every job window never appear in a minimum set.
//!
//! A per-window counting bound then discards most candidates before the flow
//! check runs.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use thiserror::Error;

use crate::feasibility::check_slots;
use crate::instance::{Instance, Time, Window};

/// Default enumeration bound on free (non-forced) slots.
pub const DEFAULT_MAX_FREE_SLOTS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance is infeasible even with every slot open")]
    Infeasible,
    #[error("optimum exceeds the slot budget of {budget}")]
    BudgetExceeded { budget: usize },
    #[error("{free} free slots exceed the enumeration limit of {limit}")]
    TooLarge { free: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest slot count the search may try.
    pub slot_budget: usize,
    pub max_free_slots: usize,
}

impl OracleConfig {
    pub fn with_budget(slot_budget: usize) -> Self {
        OracleConfig {
            slot_budget,
            max_free_slots: DEFAULT_MAX_FREE_SLOTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub opt: usize,
    /// Lexicographically first optimal slot set.
    pub witness: BTreeSet<Time>,
}

struct WindowDemand {
    mask: u128,
    need: u32,
}

fn window_demands(inst: &Instance) -> Vec<WindowDemand> {
    let mut windows: BTreeMap<Window, ()> = BTreeMap::new();
    for job in inst.jobs() {
        windows.insert(job.window(), ());
    }
    let g = inst.capacity();
    windows
        .into_keys()
        .map(|w| {
            let inside = inst.jobs().iter().filter(|j| w.contains(&j.window()));
            let (longest, work) = inside.fold((0u32, 0u64), |(l, s), j| {
                (l.max(j.length), s + u64::from(j.length))
            });
            let by_capacity = work.div_ceil(u64::from(g)) as u32;
            WindowDemand {
                mask: w.slots().fold(0u128, |m, t| m | 1 << t),
                need: longest.max(by_capacity),
            }
        })
        .collect()
}

pub fn optimal_active_time(
    inst: &Instance,
    slot_budget: usize,
) -> Result<OracleResult, OracleError> {
    optimal_active_time_with(inst, &OracleConfig::with_budget(slot_budget))
}

pub fn optimal_active_time_with(
    inst: &Instance,
    config: &OracleConfig,
) -> Result<OracleResult, OracleError> {
    let horizon = inst.horizon();
    if horizon as usize > u128::BITS as usize {
        return Err(OracleError::TooLarge {
            free: horizon as usize,
            limit: config.max_free_slots,
        });
    }
    let all: BTreeSet<Time> = (0..horizon).collect();
    if !check_slots(&all, inst) {
        return Err(OracleError::Infeasible);
    }
    let demands = window_demands(inst);
    let mut forced: u128 = 0;
    let mut covered: u128 = 0;
    for d in &demands {
        covered |= d.mask;
        if d.need == d.mask.count_ones() {
            forced |= d.mask;
        }
    }
    let free: Vec<Time> = (0..horizon)
        .filter(|&t| covered >> t & 1 == 1 && forced >> t & 1 == 0)
        .collect();
    if free.len() > config.max_free_slots {
        return Err(OracleError::TooLarge {
            free: free.len(),
            limit: config.max_free_slots,
        });
    }
    let base = forced.count_ones() as usize;
    for extra in 0..=free.len() {
        let k = base + extra;
        if k > config.slot_budget {
            return Err(OracleError::BudgetExceeded {
                budget: config.slot_budget,
            });
        }
        for combo in free.iter().copied().combinations(extra) {
            let mask = combo.iter().fold(forced, |m, &t| m | 1 << t);
            if demands
                .iter()
                .any(|d| (d.mask & mask).count_ones() < d.need)
            {
                continue;
            }
            let slots: BTreeSet<Time> = (0..horizon).filter(|&t| mask >> t & 1 == 1).collect();
            if check_slots(&slots, inst) {
                return Ok(OracleResult {
                    opt: k,
                    witness: slots,
                });
            }
        }
    }
    unreachable!("all covered slots are feasible")
}

/// Feasible, and closing any single slot breaks feasibility.
pub fn is_minimal_feasible(slots: &BTreeSet<Time>, inst: &Instance) -> bool {
    if !check_slots(slots, inst) {
        return false;
    }
    slots.iter().all(|&t| {
        let mut fewer = slots.clone();
        fewer.remove(&t);
        !check_slots(&fewer, inst)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    #[test]
    fn one_unit_job() {
        let inst = parse_instance("g 1\njob a 2 5 1").unwrap();
        let res = optimal_active_time(&inst, 10).unwrap();
        assert_eq!(res.opt, 1);
        assert_eq!(res.witness, BTreeSet::from([2]));
    }

    #[test]
    fn errors() {
        let inst = parse_instance("g 1\njob a 0 2 1\njob b 0 2 1\njob c 0 2 1").unwrap();
        assert_eq!(optimal_active_time(&inst, 10), Err(OracleError::Infeasible));
        let inst = parse_instance("g 1\njob a 0 5 3").unwrap();
        assert_eq!(
            optimal_active_time(&inst, 2),
            Err(OracleError::BudgetExceeded { budget: 2 })
        );
        let inst = parse_instance("g 1\njob a 0 30 1").unwrap();
        assert!(matches!(
            optimal_active_time(&inst, 30),
            Err(OracleError::TooLarge { free: 30, .. })
        ));
    }

    #[test]
    fn forced_slots_count() {
        // rigid job pins [1,3); the flexible one can share slot 1
        let inst = parse_instance("g 2\njob r 1 3 2\njob f 0 4 1").unwrap();
        let res = optimal_active_time(&inst, 10).unwrap();
        assert_eq!(res.opt, 2);
        assert_eq!(res.witness, BTreeSet::from([1, 2]));
        assert!(is_minimal_feasible(&res.witness, &inst));
    }

    #[test]
    fn minimality() {
        let inst = parse_instance("g 2\njob a 0 4 1").unwrap();
        assert!(!is_minimal_feasible(&(0..4).collect(), &inst));
        assert!(is_minimal_feasible(&BTreeSet::from([3]), &inst));
        assert!(!is_minimal_feasible(&BTreeSet::new(), &inst));
    }
}
