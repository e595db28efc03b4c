//! Feasibility of integral openings and of concrete slot sets.
//!
//! An opening assigns an integral number of open slots `x̃(i)` to every tree
//! node. It is feasible iff the network
//! `s → job j (p_j) → node i ∈ Des(K(j)) (x̃(i)) → t (g·x̃(i))` saturates every
//! source arc. When it does not, the residual source side yields a job set
//! `J'` violating `Σ_i min{|J'(Anc(i))|, g}·x̃(i) ≥ p(J')`.

pub mod flow;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::instance::{Instance, LaminarTree, Time};
use flow::FlowNetwork;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeasibilityError {
    #[error("{jobs} jobs exceed the subset enumeration limit of {limit}")]
    SubsetLimitExceeded { jobs: usize, limit: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("job {job} runs {got} slots, needs {want}")]
    WrongLength { job: usize, got: usize, want: u32 },
    #[error("job {job} uses slot {slot} outside its window")]
    OutsideWindow { job: usize, slot: Time },
    #[error("job {job} uses slot {slot} twice")]
    RepeatedSlot { job: usize, slot: Time },
    #[error("slot {slot} hosts {load} jobs, capacity is {capacity}")]
    Overloaded {
        slot: Time,
        load: usize,
        capacity: u32,
    },
    #[error("slot {slot} is used but not active")]
    InactiveSlot { slot: Time },
    #[error("schedule covers {got} jobs, instance has {want}")]
    JobCount { got: usize, want: usize },
}

/// Concrete schedule: the slots each job runs in, plus the active slot set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    assignment: Vec<Vec<Time>>,
    active: BTreeSet<Time>,
}

impl Schedule {
    pub fn new(mut assignment: Vec<Vec<Time>>, active: BTreeSet<Time>) -> Self {
        for slots in &mut assignment {
            slots.sort_unstable();
        }
        Schedule { assignment, active }
    }

    /// Slots of job `j`, ascending.
    pub fn slots_of(&self, job: usize) -> &[Time] {
        &self.assignment[job]
    }

    pub fn active_slots(&self) -> &BTreeSet<Time> {
        &self.active
    }

    pub fn num_active(&self) -> usize {
        self.active.len()
    }

    /// Jobs running in each active slot.
    pub fn by_slot(&self) -> BTreeMap<Time, Vec<usize>> {
        let mut out: BTreeMap<Time, Vec<usize>> =
            self.active.iter().map(|&t| (t, Vec::new())).collect();
        for (j, slots) in self.assignment.iter().enumerate() {
            for &t in slots {
                out.entry(t).or_default().push(j);
            }
        }
        out
    }

    /// Independent check of windows, lengths, distinctness and capacity.
    pub fn validate(&self, inst: &Instance) -> Result<(), ScheduleError> {
        if self.assignment.len() != inst.num_jobs() {
            return Err(ScheduleError::JobCount {
                got: self.assignment.len(),
                want: inst.num_jobs(),
            });
        }
        let mut load: BTreeMap<Time, usize> = BTreeMap::new();
        for (j, job) in inst.jobs().iter().enumerate() {
            let slots = &self.assignment[j];
            if slots.len() != job.length as usize {
                return Err(ScheduleError::WrongLength {
                    job: j,
                    got: slots.len(),
                    want: job.length,
                });
            }
            let mut seen = BTreeSet::new();
            for &t in slots {
                if !job.window().contains_slot(t) {
                    return Err(ScheduleError::OutsideWindow { job: j, slot: t });
                }
                if !seen.insert(t) {
                    return Err(ScheduleError::RepeatedSlot { job: j, slot: t });
                }
                if !self.active.contains(&t) {
                    return Err(ScheduleError::InactiveSlot { slot: t });
                }
                *load.entry(t).or_default() += 1;
            }
        }
        for (&slot, &n) in &load {
            if n > inst.capacity() as usize {
                return Err(ScheduleError::Overloaded {
                    slot,
                    load: n,
                    capacity: inst.capacity(),
                });
            }
        }
        Ok(())
    }

    /// One line per active slot: `slot <t>: <job ids...>`.
    pub fn render(&self, inst: &Instance) -> String {
        let mut out = String::new();
        for (t, jobs) in self.by_slot() {
            let _ = write!(out, "slot {t}:");
            for j in jobs {
                let _ = write!(out, " {}", inst.job(j).id);
            }
            out.push('\n');
        }
        out
    }
}

/// Witness that an opening is infeasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCertificate {
    /// `J'`, ascending job indices.
    pub jobs: Vec<usize>,
    /// `u_i = min{|J'(Anc(i))|, g}` per node.
    pub per_node: Vec<u64>,
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpeningVerdict {
    Feasible(Schedule),
    Infeasible(CutCertificate),
}

impl OpeningVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, OpeningVerdict::Feasible(_))
    }

    pub fn schedule(&self) -> Option<&Schedule> {
        match self {
            OpeningVerdict::Feasible(s) => Some(s),
            OpeningVerdict::Infeasible(_) => None,
        }
    }
}

/// Left and right side of the cut inequality for one job subset.
pub fn cut_sides(
    opening: &[u32],
    tree: &LaminarTree,
    inst: &Instance,
    subset: &[usize],
) -> (Vec<u64>, u64, u64) {
    let g = u64::from(inst.capacity());
    let mut in_subset = vec![false; inst.num_jobs()];
    for &j in subset {
        in_subset[j] = true;
    }
    let per_node: Vec<u64> = (0..tree.len())
        .map(|i| {
            let count = tree
                .jobs_of_ancestors(i)
                .into_iter()
                .filter(|&j| in_subset[j])
                .count() as u64;
            count.min(g)
        })
        .collect();
    let lhs = per_node
        .iter()
        .zip(opening)
        .map(|(&u, &x)| u * u64::from(x))
        .sum();
    let rhs = subset.iter().map(|&j| u64::from(inst.job(j).length)).sum();
    (per_node, lhs, rhs)
}

/// Decides the opening with a max flow and extracts a schedule or a cut.
///
/// Panics if `opening` has the wrong length or exceeds a node's pool.
pub fn check_opening(opening: &[u32], tree: &LaminarTree, inst: &Instance) -> OpeningVerdict {
    assert_eq!(opening.len(), tree.len(), "one count per tree node");
    for (i, &x) in opening.iter().enumerate() {
        assert!(x <= tree.pool_len(i), "node {i} opens {x} > L(i)");
    }
    let n = inst.num_jobs();
    let m = tree.len();
    let source = 0;
    let job_vertex = |j: usize| 1 + j;
    let node_vertex = |i: usize| 1 + n + i;
    let sink = 1 + n + m;
    let mut net = FlowNetwork::new(n + m + 2);

    for (j, job) in inst.jobs().iter().enumerate() {
        net.add_arc(source, job_vertex(j), u64::from(job.length));
    }
    let mut job_arcs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (j, arcs) in job_arcs.iter_mut().enumerate() {
        for i in tree.descendants(tree.job_node(j)) {
            let arc = net.add_arc(job_vertex(j), node_vertex(i), u64::from(opening[i]));
            arcs.push((i, arc));
        }
    }
    let g = u64::from(inst.capacity());
    for (i, &x) in opening.iter().enumerate() {
        net.add_arc(node_vertex(i), sink, g * u64::from(x));
    }

    let value = net.max_flow(source, sink);
    if value == inst.total_work() {
        // materialize the earliest private slots of every node
        let slots: Vec<&[Time]> = (0..m)
            .map(|i| &tree.node(i).private_pool[..opening[i] as usize])
            .collect();
        let mut assignment = vec![Vec::new(); n];
        let mut cursor = vec![0usize; m];
        for (j, arcs) in job_arcs.iter().enumerate() {
            for &(i, arc) in arcs {
                let units = net.flow_on(arc) as usize;
                let pool = slots[i];
                for _ in 0..units {
                    assignment[j].push(pool[cursor[i] % pool.len()]);
                    cursor[i] += 1;
                }
            }
        }
        let active = slots.iter().flat_map(|s| s.iter().copied()).collect();
        OpeningVerdict::Feasible(Schedule::new(assignment, active))
    } else {
        let side = net.source_side(source);
        let jobs: Vec<usize> = (0..n).filter(|&j| side[job_vertex(j)]).collect();
        let (per_node, lhs, rhs) = cut_sides(opening, tree, inst, &jobs);
        debug_assert!(lhs < rhs);
        OpeningVerdict::Infeasible(CutCertificate {
            jobs,
            per_node,
            lhs,
            rhs,
        })
    }
}

/// First job subset (by bitmask order) violating the cut inequality.
pub fn find_violating_subset(
    opening: &[u32],
    tree: &LaminarTree,
    inst: &Instance,
    max_jobs: usize,
) -> Result<Option<Vec<usize>>, FeasibilityError> {
    let n = inst.num_jobs();
    if n > max_jobs || n >= usize::BITS as usize {
        return Err(FeasibilityError::SubsetLimitExceeded {
            jobs: n,
            limit: max_jobs,
        });
    }
    for mask in 0usize..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 1).collect();
        let (_, lhs, rhs) = cut_sides(opening, tree, inst, &subset);
        if lhs < rhs {
            return Ok(Some(subset));
        }
    }
    Ok(None)
}

/// Whether subset enumeration agrees with the max-flow verdict.
pub fn verify_cut_condition(
    opening: &[u32],
    tree: &LaminarTree,
    inst: &Instance,
    max_jobs: usize,
) -> Result<bool, FeasibilityError> {
    let enumerated = find_violating_subset(opening, tree, inst, max_jobs)?.is_none();
    Ok(enumerated == check_opening(opening, tree, inst).is_feasible())
}

/// Jobs that share window and length are interchangeable; the network keeps
/// one vertex per class and splits its flow afterwards.
fn job_classes(inst: &Instance) -> Vec<Vec<usize>> {
    let mut classes: BTreeMap<(Time, Time, Time), Vec<usize>> = BTreeMap::new();
    for (j, job) in inst.jobs().iter().enumerate() {
        classes
            .entry((job.release, job.deadline, job.length))
            .or_default()
            .push(j);
    }
    classes.into_values().collect()
}

/// Time-indexed feasibility: can all jobs run using only `slots`?
pub fn check_slots(slots: &BTreeSet<Time>, inst: &Instance) -> bool {
    schedule_on_slots(slots, inst).is_some()
}

/// Schedule using only `slots`, if one exists.
pub fn schedule_on_slots(slots: &BTreeSet<Time>, inst: &Instance) -> Option<Schedule> {
    let slot_list: Vec<Time> = slots.iter().copied().collect();
    let classes = job_classes(inst);
    let c = classes.len();
    let source = 0;
    let sink = 1 + c + slot_list.len();
    let mut net = FlowNetwork::new(sink + 1);
    let g = u64::from(inst.capacity());
    let mut class_arcs: Vec<Vec<(Time, usize)>> = Vec::with_capacity(c);
    for (k, members) in classes.iter().enumerate() {
        let job = inst.job(members[0]);
        let count = members.len() as u64;
        net.add_arc(source, 1 + k, count * u64::from(job.length));
        let mut arcs = Vec::new();
        for (s, &t) in slot_list.iter().enumerate() {
            if job.window().contains_slot(t) {
                arcs.push((t, net.add_arc(1 + k, 1 + c + s, count)));
            }
        }
        class_arcs.push(arcs);
    }
    for s in 0..slot_list.len() {
        net.add_arc(1 + c + s, sink, g);
    }
    if net.max_flow(source, sink) != inst.total_work() {
        return None;
    }
    let mut assignment = vec![Vec::new(); inst.num_jobs()];
    for (members, arcs) in classes.iter().zip(&class_arcs) {
        // Units laid out slot by slot go to members round-robin; a slot carries
        // at most |members| units, so no member sees a slot twice.
        let mut unit = 0usize;
        for &(t, arc) in arcs {
            for _ in 0..net.flow_on(arc) {
                assignment[members[unit % members.len()]].push(t);
                unit += 1;
            }
        }
    }
    Some(Schedule::new(assignment, slots.clone()))
}
