//! LD, LI and LD0 schedule construction.
//!
//! All three match the jobs of one rank against the current machine loads:
//! the largest job goes to the least loaded machine, the second largest to the
//! second least loaded one, and so on. LD walks the ranks `1..=k` (and the
//! result is then read back to front, which the flowtime-optimal timing of
//! [`Schedule`] does automatically); LI walks `k..=1`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::perm::{factorial, next_permutation};
use crate::rational::Rational;
use crate::schedule::{Profile, Schedule};

/// How LD resolves machines with equal completion times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreakPolicy {
    /// Among tied machines, the lower index receives the larger job.
    LowestMachineIndex,
    /// Every distinct way of distributing the tied jobs.
    EnumerateAll,
}

/// Default cap on the number of LD schedules produced under
/// [`TieBreakPolicy::EnumerateAll`].
pub const DEFAULT_TIE_CAP: usize = 100_000;

/// Machines ordered by load ascending, lower index first on ties.
fn ascending_machines(loads: &[Rational]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..loads.len()).collect();
    order.sort_by(|&a, &b| loads[a].cmp(&loads[b]).then(a.cmp(&b)));
    order
}

/// Assigns the jobs of rank `r` onto `loads` with the default tie policy and
/// returns, per machine, the job it received.
fn match_rank(inst: &Instance, r: usize, loads: &mut [Rational]) -> Vec<usize> {
    let order = ascending_machines(loads);
    let mut got = vec![0; loads.len()];
    for (job, &machine) in inst.rank_jobs(r).zip(&order) {
        got[machine] = job;
        loads[machine] += inst.time(job);
    }
    got
}

fn into_schedule(inst: &Arc<Instance>, by_rank: Vec<Vec<usize>>) -> Schedule {
    let m = inst.m();
    let assignment = (0..m).map(|i| by_rank.iter().map(|jobs| jobs[i]).collect()).collect();
    Schedule::flowtime_optimal(inst.clone(), assignment).expect("matching yields a valid assignment")
}

/// The LD schedule under the lowest-machine-index tie policy.
pub fn ld_schedule(inst: &Arc<Instance>) -> Schedule {
    let mut loads = vec![Rational::zero(); inst.m()];
    let by_rank = (1..=inst.k()).map(|r| match_rank(inst, r, &mut loads)).collect();
    into_schedule(inst, by_rank)
}

/// LD schedules under `policy`: one schedule, or all tie resolutions (at most
/// `cap`, otherwise [`Error::TieExplosion`]).
pub fn ld_schedules(inst: &Arc<Instance>, policy: TieBreakPolicy, cap: usize) -> Result<Vec<Schedule>> {
    match policy {
        TieBreakPolicy::LowestMachineIndex => Ok(vec![ld_schedule(inst)]),
        TieBreakPolicy::EnumerateAll => {
            let mut out = Vec::new();
            let mut by_rank = Vec::with_capacity(inst.k());
            let loads = vec![Rational::zero(); inst.m()];
            enumerate_ld(inst, 1, loads, &mut by_rank, &mut out, cap)?;
            Ok(out)
        }
    }
}

fn enumerate_ld(
    inst: &Arc<Instance>,
    r: usize,
    loads: Vec<Rational>,
    by_rank: &mut Vec<Vec<usize>>,
    out: &mut Vec<Schedule>,
    cap: usize,
) -> Result<()> {
    if r > inst.k() {
        if out.len() >= cap {
            return Err(Error::TieExplosion { cap });
        }
        out.push(into_schedule(inst, by_rank.clone()));
        return Ok(());
    }
    let order = ascending_machines(&loads);
    let jobs: Vec<usize> = inst.rank_jobs(r).collect();

    // Split the sorted positions into runs of equal load; each run may receive
    // its jobs in any value-distinct order.
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut s = 0;
    while s < order.len() {
        let mut e = s + 1;
        while e < order.len() && loads[order[e]] == loads[order[s]] {
            e += 1;
        }
        groups.push((s, e));
        s = e;
    }
    let per_group: Vec<Vec<Vec<(usize, usize)>>> =
        groups.iter().map(|&(s, e)| group_resolutions(inst, &order[s..e], &jobs[s..e])).collect();

    let mut pick = vec![0usize; per_group.len()];
    loop {
        let mut got = vec![0; inst.m()];
        let mut next = loads.clone();
        for (g, &choice) in pick.iter().enumerate() {
            for &(machine, job) in &per_group[g][choice] {
                got[machine] = job;
                next[machine] += inst.time(job);
            }
        }
        by_rank.push(got);
        let res = enumerate_ld(inst, r + 1, next, by_rank, out, cap);
        by_rank.pop();
        res?;

        // odometer over the per-group choices
        let mut g = 0;
        loop {
            if g == pick.len() {
                return Ok(());
            }
            pick[g] += 1;
            if pick[g] < per_group[g].len() {
                break;
            }
            pick[g] = 0;
            g += 1;
        }
    }
}

/// Distinct (machine, job) pairings of `jobs` onto the tied `machines`,
/// identifying jobs with equal times.
fn group_resolutions(inst: &Instance, machines: &[usize], jobs: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let mut machines = machines.to_vec();
    machines.sort_unstable();
    // class id per job: jobs arrive largest first, so equal times are adjacent
    let mut class = Vec::with_capacity(jobs.len());
    for (t, &j) in jobs.iter().enumerate() {
        let c = match t {
            0 => 0,
            _ if inst.time(j) == inst.time(jobs[t - 1]) => class[t - 1],
            _ => class[t - 1] + 1,
        };
        class.push(c);
    }
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (&c, &j) in class.iter().zip(jobs) {
        if members.len() <= c {
            members.push(Vec::new());
        }
        members[c].push(j);
    }
    let mut pattern = class.clone();
    let mut out = Vec::new();
    loop {
        let mut cursor = vec![0usize; members.len()];
        let pairing = machines
            .iter()
            .zip(&pattern)
            .map(|(&machine, &c)| {
                let job = members[c][cursor[c]];
                cursor[c] += 1;
                (machine, job)
            })
            .collect();
        out.push(pairing);
        if !next_permutation(&mut pattern) {
            return out;
        }
    }
}

/// LD makespan under the default tie policy, without building a schedule.
pub fn ld_makespan(inst: &Instance) -> Rational {
    let mut loads = vec![Rational::zero(); inst.m()];
    for r in 1..=inst.k() {
        match_rank(inst, r, &mut loads);
    }
    loads.into_iter().max().unwrap_or_else(Rational::zero)
}

/// Sorted LD profiles after each rank `1..=k`.
pub fn ld_profiles(inst: &Instance) -> Vec<Profile> {
    let mut loads = vec![Rational::zero(); inst.m()];
    (1..=inst.k())
        .map(|r| {
            match_rank(inst, r, &mut loads);
            Profile::from_loads(&loads)
        })
        .collect()
}

/// Largest makespan over every tie resolution of LD.
///
/// Works on load profiles rather than labeled schedules: machines with equal
/// load are interchangeable for everything that follows, so each state is the
/// sorted load vector and each tie group is resolved independently. At most
/// `cap` resolutions per group and `cap` states per rank are explored, beyond
/// which [`Error::TieExplosion`] is returned.
pub fn worst_ld_makespan(inst: &Arc<Instance>, cap: usize) -> Result<Rational> {
    let m = inst.m();
    let mut states: BTreeSet<Vec<Rational>> = BTreeSet::from([vec![Rational::zero(); m]]);
    for r in 1..=inst.k() {
        let jobs: Vec<usize> = inst.rank_jobs(r).collect();
        let mut next = BTreeSet::new();
        for loads in &states {
            // `loads` is ascending, so position t receives the t-th largest job
            let mut options: Vec<Vec<Vec<Rational>>> = Vec::new();
            let mut s = 0;
            while s < m {
                let mut e = s + 1;
                while e < m && loads[e] == loads[s] {
                    e += 1;
                }
                let slots: Vec<usize> = (s..e).collect();
                if resolution_count(inst, &jobs[s..e]) > cap as u128 {
                    return Err(Error::TieExplosion { cap });
                }
                let mut distinct = BTreeSet::new();
                for pairing in group_resolutions(inst, &slots, &jobs[s..e]) {
                    let mut v: Vec<Rational> = pairing.iter().map(|&(slot, job)| &loads[slot] + inst.time(job)).collect();
                    v.sort();
                    distinct.insert(v);
                }
                options.push(distinct.into_iter().collect());
                s = e;
            }
            let mut pick = vec![0usize; options.len()];
            loop {
                let mut v: Vec<Rational> =
                    pick.iter().zip(&options).flat_map(|(&c, o)| o[c].iter().cloned()).collect();
                v.sort();
                next.insert(v);
                if next.len() > cap {
                    return Err(Error::TieExplosion { cap });
                }
                let mut g = 0;
                while g < pick.len() {
                    pick[g] += 1;
                    if pick[g] < options[g].len() {
                        break;
                    }
                    pick[g] = 0;
                    g += 1;
                }
                if g == pick.len() {
                    break;
                }
            }
        }
        states = next;
    }
    Ok(states.iter().filter_map(|v| v.last().cloned()).max().unwrap_or_else(Rational::zero))
}

/// Number of value-distinct orders of `jobs`.
fn resolution_count(inst: &Instance, jobs: &[usize]) -> u128 {
    let mut total = factorial(jobs.len());
    let mut run = 1;
    for t in 1..=jobs.len() {
        if t < jobs.len() && inst.time(jobs[t]) == inst.time(jobs[t - 1]) {
            run += 1;
        } else {
            total /= factorial(run);
            run = 1;
        }
    }
    total
}

/// LI: ranks `k, k-1, …, 1`, each matched largest job to least loaded machine.
pub fn li_schedule(inst: &Arc<Instance>) -> Schedule {
    let k = inst.k();
    let mut loads = vec![Rational::zero(); inst.m()];
    let mut by_rank = vec![Vec::new(); k];
    for r in (1..=k).rev() {
        by_rank[r - 1] = match_rank(inst, r, &mut loads);
    }
    into_schedule(inst, by_rank)
}

pub fn li_makespan(inst: &Instance) -> Rational {
    let mut loads = vec![Rational::zero(); inst.m()];
    for r in (1..=inst.k()).rev() {
        match_rank(inst, r, &mut loads);
    }
    loads.into_iter().max().unwrap_or_else(Rational::zero)
}

/// Worst LD0 makespan: `max_i {τ_{i,1} + τ_{m-i+1,2}} + Σ_{r≥3} λ_r`.
///
/// For `k = 1` this is `λ_1`.
pub fn ld0_worst_makespan(inst: &Instance) -> Rational {
    let (m, k) = (inst.m(), inst.k());
    if k == 1 {
        return inst.lambda(1).clone();
    }
    let top = (1..=m)
        .map(|i| inst.tau(i, 1) + inst.tau(m - i + 1, 2))
        .max()
        .expect("m >= 1");
    top + (3..=k).map(|r| inst.lambda(r)).sum::<Rational>()
}

/// An explicit LD0 schedule attaining [`ld0_worst_makespan`]: rank 1 in index
/// order, rank 2 largest-first, and every later `λ_r` stacked on the machine
/// that leads after rank 2.
pub fn ld0_worst_schedule(inst: &Arc<Instance>) -> Schedule {
    let (m, k) = (inst.m(), inst.k());
    let mut loads = vec![Rational::zero(); m];
    let mut by_rank = Vec::with_capacity(k);
    let first: Vec<usize> = inst.rank_jobs(1).collect();
    for (i, &j) in first.iter().enumerate() {
        loads[i] += inst.time(j);
    }
    by_rank.push(first);
    if k >= 2 {
        by_rank.push(match_rank(inst, 2, &mut loads));
        let lead = (0..m).max_by(|&a, &b| loads[a].cmp(&loads[b]).then(b.cmp(&a))).expect("m >= 1");
        for r in 3..=k {
            let mut jobs = inst.rank_jobs(r);
            let mut got = vec![0; m];
            got[lead] = jobs.next().expect("rank has m jobs");
            for (i, slot) in got.iter_mut().enumerate() {
                if i != lead {
                    *slot = jobs.next().expect("rank has m jobs");
                }
            }
            by_rank.push(got);
        }
    }
    into_schedule(inst, by_rank)
}
