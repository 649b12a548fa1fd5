//! Schedules, profiles and the flowtime-optimality check.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rational::Rational;

/// Completion times of the `m` machines, sorted nonincreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Profile(Vec<Rational>);

impl Profile {
    pub fn from_loads(loads: &[Rational]) -> Self {
        let mut v = loads.to_vec();
        v.sort_by(|a, b| b.cmp(a));
        Profile(v)
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    /// `i`-th largest entry, 1-based.
    pub fn get(&self, i: usize) -> &Rational {
        &self.0[i - 1]
    }

    pub fn max(&self) -> &Rational {
        &self.0[0]
    }

    /// Entrywise `self ≥ other`.
    pub fn dominates(&self, other: &Profile) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

/// A job-to-slot assignment with explicit start times.
///
/// `assignment[i][r-1]` is the job run by machine `i` in rank `r`; machine `i`
/// executes its jobs in rank order `k, k-1, …, 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    instance: Arc<Instance>,
    assignment: Vec<Vec<usize>>,
    start: Vec<Vec<Rational>>,
}

#[derive(Serialize)]
struct SlotOut {
    rank: usize,
    job: usize,
    time: Rational,
    start: Rational,
    completion: Rational,
}

#[derive(Serialize)]
struct MachineOut {
    machine: usize,
    slots: Vec<SlotOut>,
    completion: Rational,
}

#[derive(Serialize)]
pub struct ScheduleOut {
    m: usize,
    k: usize,
    machines: Vec<MachineOut>,
    makespan: Rational,
    total_flowtime: Rational,
    flowtime_optimal: bool,
}

impl Schedule {
    /// Left-justified flowtime-optimal timing: every machine starts its rank-`k`
    /// job at 0 and runs ranks `k, …, 1` back to back.
    pub fn flowtime_optimal(instance: Arc<Instance>, assignment: Vec<Vec<usize>>) -> Result<Self> {
        check_assignment(&instance, &assignment)?;
        let start = assignment
            .iter()
            .map(|jobs| {
                let k = jobs.len();
                let mut starts = vec![Rational::zero(); k];
                let mut clock = Rational::zero();
                for r in (0..k).rev() {
                    starts[r] = clock.clone();
                    clock += instance.time(jobs[r]);
                }
                starts
            })
            .collect();
        Ok(Schedule { instance, assignment, start })
    }

    /// Arbitrary timing for the same assignment shape; the result need not be
    /// flowtime-optimal.
    pub fn with_start_times(
        instance: Arc<Instance>,
        assignment: Vec<Vec<usize>>,
        start: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        check_assignment(&instance, &assignment)?;
        let k = instance.k();
        if start.len() != assignment.len() || start.iter().any(|s| s.len() != k) {
            return Err(Error::InvalidInput("start times must match the assignment shape".into()));
        }
        if start.iter().flatten().any(Rational::is_negative) {
            return Err(Error::InvalidInput("start times must be nonnegative".into()));
        }
        Ok(Schedule { instance, assignment, start })
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn assignment(&self) -> &[Vec<usize>] {
        &self.assignment
    }

    /// Job on machine `i` (0-based) in rank `r` (1-based).
    pub fn job(&self, i: usize, r: usize) -> usize {
        self.assignment[i][r - 1]
    }

    pub fn start(&self, i: usize, r: usize) -> &Rational {
        &self.start[i][r - 1]
    }

    pub fn completion(&self, i: usize, r: usize) -> Rational {
        self.start(i, r) + self.instance.time(self.job(i, r))
    }

    /// Completion time of machine `i`: the end of its last job.
    pub fn machine_completion(&self, i: usize) -> Rational {
        (1..=self.instance.k())
            .map(|r| self.completion(i, r))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn makespan(&self) -> Rational {
        (0..self.instance.m())
            .map(|i| self.machine_completion(i))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Sum of all job completion times.
    pub fn total_flowtime(&self) -> Rational {
        let k = self.instance.k();
        (0..self.instance.m()).flat_map(|i| (1..=k).map(move |r| (i, r))).map(|(i, r)| self.completion(i, r)).sum()
    }

    /// Per-machine sum of the times in ranks `1..=l`, i.e. the LD build-up state.
    pub fn leading_loads(&self, l: usize) -> Vec<Rational> {
        self.assignment
            .iter()
            .map(|jobs| jobs[..l].iter().map(|&j| self.instance.time(j)).sum())
            .collect()
    }

    /// Sorted profile after ranks `1..=l`.
    pub fn leading_profile(&self, l: usize) -> Profile {
        Profile::from_loads(&self.leading_loads(l))
    }

    /// Why the schedule is not flowtime-optimal, if it is not.
    pub fn flowtime_violation(&self) -> Option<String> {
        let k = self.instance.k();
        for i in 0..self.instance.m() {
            if !self.start(i, k).is_zero() {
                return Some(format!("machine {i} starts its rank-{k} job at {}", self.start(i, k)));
            }
            for r in 1..k {
                let prev_end = self.completion(i, r + 1);
                let s = self.start(i, r);
                if *s < prev_end {
                    return Some(format!(
                        "machine {i} starts rank {r} at {s} before rank {} ends at {prev_end}",
                        r + 1
                    ));
                }
                if *s > prev_end {
                    return Some(format!(
                        "machine {i} idles between rank {} (ends {prev_end}) and rank {r} (starts {s})",
                        r + 1
                    ));
                }
            }
        }
        None
    }

    pub fn to_output(&self) -> ScheduleOut {
        let k = self.instance.k();
        let machines = (0..self.instance.m())
            .map(|i| MachineOut {
                machine: i,
                slots: (1..=k)
                    .rev()
                    .map(|r| SlotOut {
                        rank: r,
                        job: self.job(i, r),
                        time: self.instance.time(self.job(i, r)).clone(),
                        start: self.start(i, r).clone(),
                        completion: self.completion(i, r),
                    })
                    .collect(),
                completion: self.machine_completion(i),
            })
            .collect();
        ScheduleOut {
            m: self.instance.m(),
            k,
            machines,
            makespan: self.makespan(),
            total_flowtime: self.total_flowtime(),
            flowtime_optimal: is_flowtime_optimal(self),
        }
    }
}

/// Rank-`k` jobs start at 0, each machine runs ranks `k, …, 1` in that order,
/// and nothing idles in between.
pub fn is_flowtime_optimal(s: &Schedule) -> bool {
    s.flowtime_violation().is_none()
}

pub fn makespan(s: &Schedule) -> Rational {
    s.makespan()
}

pub fn total_flowtime(s: &Schedule) -> Rational {
    s.total_flowtime()
}

fn check_assignment(instance: &Instance, assignment: &[Vec<usize>]) -> Result<()> {
    let (m, k) = (instance.m(), instance.k());
    if assignment.len() != m || assignment.iter().any(|a| a.len() != k) {
        return Err(Error::InvalidInput(format!("assignment must be {m} machines x {k} ranks")));
    }
    let mut seen = vec![false; instance.n()];
    for (i, jobs) in assignment.iter().enumerate() {
        for (slot, &job) in jobs.iter().enumerate() {
            if job >= instance.n() {
                return Err(Error::InvalidInput(format!("job {job} does not exist")));
            }
            if instance.rank_of(job) != slot + 1 {
                return Err(Error::InvalidInput(format!(
                    "job {job} belongs to rank {} but sits in rank {} on machine {i}",
                    instance.rank_of(job),
                    slot + 1
                )));
            }
            if std::mem::replace(&mut seen[job], true) {
                return Err(Error::InvalidInput(format!("job {job} assigned twice")));
            }
        }
    }
    Ok(())
}
