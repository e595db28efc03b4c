//! Problem instances: jobs with release/deadline windows on a machine that
//! runs at most `g` jobs per active time slot.
//!
//! Instances are read from a line-oriented text format:
//!
//! ```text
//! # comment
//! g 2
//! job a 0 4 2
//! job b 0 2 1
//! ```
//!
//! A `job` line is `job <id> <release> <deadline> <length>`, and the window
//! of the job is the half-open slot range `[release, deadline)`.

mod tree;

pub use tree::{LaminarTree, TreeNode};

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Discrete time slot index.
pub type Time = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("duplicate job id `{0}`")]
    DuplicateJobId(String),
    #[error("job `{id}`: window [{release}, {deadline}) cannot hold {length} slots")]
    InvalidWindow {
        id: String,
        release: Time,
        deadline: Time,
        length: Time,
    },
    #[error("windows of jobs `{first}` and `{second}` cross")]
    NonLaminar { first: String, second: String },
    #[error("machine capacity must be at least 1")]
    ZeroCapacity,
    #[error("instance has no jobs")]
    NoJobs,
}

/// Half-open slot range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Window {
    pub start: Time,
    pub end: Time,
}

impl Window {
    pub fn new(start: Time, end: Time) -> Self {
        debug_assert!(start <= end);
        Window { start, end }
    }

    pub fn len(&self) -> Time {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains_slot(&self, t: Time) -> bool {
        self.start <= t && t < self.end
    }

    pub fn contains(&self, other: &Window) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn is_disjoint(&self, other: &Window) -> bool {
        self.end <= other.start || other.end <= self.start
    }

    /// Disjoint or nested.
    pub fn is_laminar_with(&self, other: &Window) -> bool {
        self.is_disjoint(other) || self.contains(other) || other.contains(self)
    }

    pub fn slots(&self) -> std::ops::Range<Time> {
        self.start..self.end
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Job {
    pub id: String,
    pub release: Time,
    pub deadline: Time,
    pub length: Time,
}

impl Job {
    pub fn new(id: impl Into<String>, release: Time, deadline: Time, length: Time) -> Self {
        Job {
            id: id.into(),
            release,
            deadline,
            length,
        }
    }

    pub fn window(&self) -> Window {
        Window::new(self.release, self.deadline)
    }
}

/// A validated laminar instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    capacity: u32,
    jobs: Vec<Job>,
    horizon: Time,
}

impl Instance {
    /// Validates ids, windows and laminarity.
    pub fn new(capacity: u32, jobs: Vec<Job>) -> Result<Self, InstanceError> {
        if capacity == 0 {
            return Err(InstanceError::ZeroCapacity);
        }
        if jobs.is_empty() {
            return Err(InstanceError::NoJobs);
        }
        let mut seen = HashSet::with_capacity(jobs.len());
        for job in &jobs {
            if !seen.insert(job.id.as_str()) {
                return Err(InstanceError::DuplicateJobId(job.id.clone()));
            }
            if job.length == 0 || job.deadline < job.release.saturating_add(job.length) {
                return Err(InstanceError::InvalidWindow {
                    id: job.id.clone(),
                    release: job.release,
                    deadline: job.deadline,
                    length: job.length,
                });
            }
        }
        check_laminar(&jobs)?;
        let horizon = jobs.iter().map(|j| j.deadline).max().unwrap_or(0);
        Ok(Instance {
            capacity,
            jobs,
            horizon,
        })
    }

    /// Machine capacity `g`.
    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn job(&self, index: usize) -> &Job {
        &self.jobs[index]
    }

    pub fn num_jobs(&self) -> usize {
        self.jobs.len()
    }

    /// `T = max_j d_j`; all slots live in `[0, T)`.
    pub fn horizon(&self) -> Time {
        self.horizon
    }

    pub fn total_work(&self) -> u64 {
        self.jobs.iter().map(|j| u64::from(j.length)).sum()
    }

    pub fn job_index(&self, id: &str) -> Option<usize> {
        self.jobs.iter().position(|j| j.id == id)
    }

    /// Copy of the instance keeping only the given jobs (in the given order).
    pub fn restricted_to(&self, job_indices: &[usize]) -> Result<Instance, InstanceError> {
        let jobs = job_indices.iter().map(|&j| self.jobs[j].clone()).collect();
        Instance::new(self.capacity, jobs)
    }
}

fn check_laminar(jobs: &[Job]) -> Result<(), InstanceError> {
    // Sort by (start asc, end desc); a crossing pair then shows up between a
    // window and the innermost open window on the stack.
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.sort_by_key(|&j| (jobs[j].release, std::cmp::Reverse(jobs[j].deadline)));
    let mut stack: Vec<usize> = Vec::new();
    for &j in &order {
        let w = jobs[j].window();
        while let Some(&top) = stack.last() {
            if jobs[top].deadline <= w.start {
                stack.pop();
            } else {
                break;
            }
        }
        if let Some(&top) = stack.last() {
            if !jobs[top].window().contains(&w) {
                let (a, b) = if top < j { (top, j) } else { (j, top) };
                return Err(InstanceError::NonLaminar {
                    first: jobs[a].id.clone(),
                    second: jobs[b].id.clone(),
                });
            }
        }
        stack.push(j);
    }
    Ok(())
}

/// Parses the instance text format.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut capacity: Option<u32> = None;
    let mut jobs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let malformed = |reason: &str| InstanceError::MalformedLine {
            line: line_no,
            reason: reason.to_string(),
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "g" => {
                if tokens.len() != 2 {
                    return Err(malformed("expected `g <int>`"));
                }
                if capacity.is_some() {
                    return Err(malformed("capacity given twice"));
                }
                capacity = Some(parse_int(tokens[1]).ok_or_else(|| malformed("bad capacity"))?);
            }
            "job" => {
                if tokens.len() != 5 {
                    return Err(malformed("expected `job <id> <r> <d> <p>`"));
                }
                let field = |k: usize, name: &str| {
                    parse_int(tokens[k]).ok_or_else(|| malformed(&format!("bad {name}")))
                };
                jobs.push(Job::new(
                    tokens[1],
                    field(2, "release")?,
                    field(3, "deadline")?,
                    field(4, "length")?,
                ));
            }
            other => return Err(malformed(&format!("unknown directive `{other}`"))),
        }
    }
    let capacity = capacity.ok_or(InstanceError::MalformedLine {
        line: 0,
        reason: "missing `g` directive".to_string(),
    })?;
    Instance::new(capacity, jobs)
}

fn parse_int(token: &str) -> Option<u32> {
    token.parse().ok()
}

impl FromStr for Instance {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_instance(s)
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "g {}", self.capacity)?;
        for job in &self.jobs {
            writeln!(
                f,
                "job {} {} {} {}",
                job.id, job.release, job.deadline, job.length
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_instance() {
        let inst = parse_instance("g 1\njob a 0 1 1").unwrap();
        assert_eq!(inst.capacity(), 1);
        assert_eq!(inst.num_jobs(), 1);
        assert_eq!(inst.horizon(), 1);
    }

    #[test]
    fn nested_instance() {
        let inst = parse_instance("g 2\njob a 0 4 2\njob b 0 2 1\njob c 2 4 1").unwrap();
        assert_eq!(inst.num_jobs(), 3);
        assert_eq!(inst.horizon(), 4);
    }

    #[test]
    fn crossing_windows_rejected() {
        let err = parse_instance("g 1\njob a 0 3 2\njob b 1 4 1").unwrap_err();
        assert_eq!(
            err,
            InstanceError::NonLaminar {
                first: "a".into(),
                second: "b".into()
            }
        );
    }

    #[test]
    fn comments_and_blank_lines() {
        let inst = parse_instance("# header\n\ng 3 # cap\njob x 1 5 4 # long\n").unwrap();
        assert_eq!(inst.job(0).id, "x");
        assert_eq!(inst.horizon(), 5);
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            parse_instance("g 1\njob a 0 1 1\njob a 0 1 1"),
            Err(InstanceError::DuplicateJobId(id)) if id == "a"
        ));
        assert!(matches!(
            parse_instance("g 1\njob a 0 1 2"),
            Err(InstanceError::InvalidWindow { .. })
        ));
        assert!(matches!(
            parse_instance("g 1\njob a 0 1 0"),
            Err(InstanceError::InvalidWindow { .. })
        ));
        assert!(matches!(
            parse_instance("g 1\njob a 0 x 1"),
            Err(InstanceError::MalformedLine { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("job a 0 1 1"),
            Err(InstanceError::MalformedLine { .. })
        ));
        assert!(matches!(
            parse_instance("g 1\nfoo"),
            Err(InstanceError::MalformedLine { .. })
        ));
        assert_eq!(
            parse_instance("g 0\njob a 0 1 1"),
            Err(InstanceError::ZeroCapacity)
        );
        assert_eq!(parse_instance("g 2\n"), Err(InstanceError::NoJobs));
    }

    #[test]
    fn touching_windows_are_disjoint() {
        assert!(parse_instance("g 1\njob a 0 2 1\njob b 2 4 1\njob c 0 4 1").is_ok());
    }

    #[test]
    fn crossing_detected_behind_nested_window() {
        // [0,6) contains [1,2); [1,8) crosses [0,6).
        let err = parse_instance("g 1\njob a 0 6 1\njob b 1 2 1\njob c 1 8 1").unwrap_err();
        assert!(matches!(err, InstanceError::NonLaminar { .. }));
    }

    #[test]
    fn serialization_round_trip() {
        let text = "g 2\njob a 0 4 2\njob b 0 2 1\njob c 2 4 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.to_string(), text);
        assert_eq!(parse_instance(&inst.to_string()).unwrap(), inst);
    }
}
