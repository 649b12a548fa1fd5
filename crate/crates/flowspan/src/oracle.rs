//! Exact FM optimum: the smallest makespan over all flowtime-optimal schedules.
//!
//! A flowtime-optimal schedule is fixed by which machine gets which job in
//! every rank, and a machine's completion time is just the sum of its jobs, so
//! the search places ranks `2..=k` job by job on top of the rank-1 loads. Rank 1
//! is pinned to the identity (machines are interchangeable).
//!
//! With pruning enabled the search skips unused machines whose load equals one
//! already tried at the same node, remembers every profile reached at a rank
//! boundary, and cuts nodes whose lower bound cannot beat the incumbent. The
//! incumbent starts at the LD schedule.
//!
//! The search runs on integers: every time is multiplied by the lcm of the
//! denominators, on `i64` when the totals fit and on `BigInt` otherwise.

use std::collections::HashSet;
use std::hash::Hash;
use std::ops::{Add, Mul, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::algorithms::{worst_ld_makespan, DEFAULT_TIE_CAP};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::par::Parallelism;
use crate::rational::Rational;
use crate::schedule::Schedule;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Profiles remembered per call before the transposition table stops growing.
const TABLE_LIMIT: usize = 4_000_000;

#[derive(Clone, Debug)]
pub struct OracleOptions {
    /// Maximum number of job placements explored.
    pub budget: u64,
    /// Bound pruning plus symmetry and transposition reduction. Off means a
    /// plain enumeration of every assignment (rank 1 still pinned).
    pub prune: bool,
    /// Split the rank-2 assignments across rayon workers.
    pub parallelism: Parallelism,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { budget: DEFAULT_BUDGET, prune: true, parallelism: Parallelism::Sequential }
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub makespan: Rational,
    pub witness: Schedule,
    pub nodes: u64,
}

/// `t*` and a witness schedule, with the default options and `budget`.
pub fn optimal_fm_makespan(inst: &Arc<Instance>, budget: u64) -> Result<(Rational, Schedule)> {
    let res = solve(inst, &OracleOptions { budget, ..OracleOptions::default() })?;
    Ok((res.makespan, res.witness))
}

/// Worst LD makespan, `t*`, and their ratio. The all-zero instance has ratio 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MakespanRatio {
    pub worst_ld: Rational,
    pub optimum: Rational,
    pub ratio: Rational,
}

pub fn makespan_ratio(inst: &Arc<Instance>) -> Result<MakespanRatio> {
    makespan_ratio_with(inst, &OracleOptions::default())
}

pub fn makespan_ratio_with(inst: &Arc<Instance>, opts: &OracleOptions) -> Result<MakespanRatio> {
    let worst_ld = worst_ld_makespan(inst, DEFAULT_TIE_CAP)?;
    let optimum = solve(inst, opts)?.makespan;
    let ratio = ratio_of(&worst_ld, &optimum);
    Ok(MakespanRatio { worst_ld, optimum, ratio })
}

/// `num / den`, with `0/0` read as 1.
pub fn ratio_of(num: &Rational, den: &Rational) -> Rational {
    if den.is_zero() {
        assert!(num.is_zero(), "positive makespan over a zero optimum");
        Rational::one()
    } else {
        num.checked_div(den).expect("nonzero")
    }
}

pub fn solve(inst: &Arc<Instance>, opts: &OracleOptions) -> Result<OracleResult> {
    let scale = inst
        .times()
        .iter()
        .fold(BigInt::one(), |acc, t| acc.lcm(t.denom()));
    let scaled: Vec<BigInt> =
        inst.times().iter().map(|t| t.numer() * (&scale / t.denom())).collect();
    let total: BigInt = scaled.iter().sum::<BigInt>() * BigInt::from(inst.m() as u64 + 1);
    let small = total.to_i64().is_some_and(|t| t < i64::MAX / 4);

    let ld = crate::algorithms::ld_schedule(inst);
    let (value, machine_of, nodes) = if small {
        let w: Vec<i64> = scaled.iter().map(|v| v.to_i64().expect("fits")).collect();
        let ld_val = to_scaled(&ld.makespan(), &scale).to_i64().expect("fits");
        let (v, a, n) = Search::new(inst, w, ld_val, ld_machine_of(&ld), opts).run()?;
        (v, a, n)
    } else {
        let ld_val = to_scaled(&ld.makespan(), &scale);
        Search::new(inst, scaled, ld_val, ld_machine_of(&ld), opts).run()?
    };

    let makespan = Rational::new(value, scale)?;
    let witness = witness_schedule(inst, &machine_of);
    debug_assert_eq!(witness.makespan(), makespan);
    Ok(OracleResult { makespan, witness, nodes })
}

fn to_scaled(t: &Rational, scale: &BigInt) -> BigInt {
    let v = t.numer() * scale;
    debug_assert!((&v % t.denom()).is_zero());
    v / t.denom()
}

fn ld_machine_of(s: &Schedule) -> Vec<usize> {
    let inst = s.instance();
    let mut machine_of = vec![0; inst.n()];
    for (i, jobs) in s.assignment().iter().enumerate() {
        for &j in jobs {
            machine_of[j] = i;
        }
    }
    machine_of
}

fn witness_schedule(inst: &Arc<Instance>, machine_of: &[usize]) -> Schedule {
    let (m, k) = (inst.m(), inst.k());
    let mut assignment = vec![vec![0; k]; m];
    for (job, &i) in machine_of.iter().enumerate() {
        assignment[i][inst.rank_of(job) - 1] = job;
    }
    Schedule::flowtime_optimal(inst.clone(), assignment).expect("search yields valid assignments")
}

trait Load: Clone + Ord + Eq + Hash + Zero + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn from_usize(n: usize) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Load for i64 {
    fn from_usize(n: usize) -> Self {
        n as i64
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Load for BigInt {
    fn from_usize(n: usize) -> Self {
        BigInt::from(n)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Shared, read-only description of one search.
struct Search<'a, T> {
    inst: &'a Instance,
    w: Vec<T>,
    /// `tail_mu[r]` = Σ μ over ranks after `r` (index by 1-based rank).
    tail_mu: Vec<T>,
    total: T,
    lower: T,
    start_value: T,
    start_assign: Vec<usize>,
    opts: &'a OracleOptions,
    nodes: AtomicU64,
}

/// Mutable DFS state, one per worker.
struct Walker<T> {
    loads: Vec<T>,
    used: Vec<bool>,
    machine_of: Vec<usize>,
    best: T,
    best_assign: Vec<usize>,
    seen: Vec<HashSet<Vec<T>>>,
    done: bool,
}

type SearchOutcome<T> = (T, Vec<usize>, u64);

impl<'a, T: Load> Search<'a, T> {
    fn new(inst: &'a Instance, w: Vec<T>, start_value: T, start_assign: Vec<usize>, opts: &'a OracleOptions) -> Self {
        let (m, k) = (inst.m(), inst.k());
        let mu = |r: usize| w[r * m - 1].clone();
        let mut tail_mu = vec![T::zero(); k + 2];
        for r in (1..k).rev() {
            tail_mu[r] = tail_mu[r + 1].clone() + mu(r + 1);
        }
        let total = w.iter().fold(T::zero(), |a, b| a + b.clone());
        // λ_1 + Σ_{r≥2} μ_r bounds the machine holding job 0.
        let lower = w[0].clone() + tail_mu[1].clone();
        Search {
            inst,
            w,
            tail_mu,
            total,
            lower,
            start_value,
            start_assign,
            opts,
            nodes: AtomicU64::new(0),
        }
    }

    fn m(&self) -> usize {
        self.inst.m()
    }

    /// No makespan below `v` exists once `m·(v-1) < total` or `v ≤ lower`.
    fn is_provably_optimal(&self, v: &T) -> bool {
        if v.is_zero() || *v <= self.lower {
            return true;
        }
        let below = v.clone() - T::from_usize(1);
        T::from_usize(self.m()) * below < self.total
    }

    fn lower_bound_rational(&self) -> BigInt {
        let m = BigInt::from(self.m());
        let avg = self.total.to_big().div_ceil(&m);
        avg.max(self.lower.to_big())
    }

    fn walker(&self) -> Walker<T> {
        let m = self.m();
        let k = self.inst.k();
        let mut loads = vec![T::zero(); m];
        let mut machine_of = vec![0; self.inst.n()];
        for (i, (load, slot)) in loads.iter_mut().zip(machine_of.iter_mut()).enumerate() {
            *load = self.w[i].clone();
            *slot = i;
        }
        Walker {
            loads,
            used: vec![false; m],
            machine_of,
            best: self.start_value.clone(),
            best_assign: self.start_assign.clone(),
            seen: vec![HashSet::new(); k + 1],
            done: false,
        }
    }

    fn tick(&self) -> Result<()> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.opts.budget {
            return Err(Error::BudgetExceeded {
                budget: self.opts.budget,
                lower: Rational::zero(),
                upper: Rational::zero(),
            });
        }
        Ok(())
    }

    fn run(self) -> Result<(BigInt, Vec<usize>, u64)> {
        let outcome = if self.inst.k() == 1 || self.is_provably_optimal(&self.start_value) {
            Ok((self.start_value.clone(), self.start_assign.clone(), 0))
        } else if self.opts.parallelism.is_parallel() && self.inst.k() >= 3 {
            self.run_partitioned()
        } else {
            let mut walker = self.walker();
            match self.dfs(&mut walker, 2, 0) {
                Ok(()) => Ok((walker.best, walker.best_assign, self.nodes.load(Ordering::Relaxed))),
                Err(Error::BudgetExceeded { budget, .. }) => {
                    return Err(self.budget_error(budget, &walker.best))
                }
                Err(e) => Err(e),
            }
        };
        match outcome {
            Ok((v, a, n)) => Ok((v.to_big(), a, n)),
            Err(Error::BudgetExceeded { budget, .. }) => Err(self.budget_error(budget, &self.start_value)),
            Err(e) => Err(e),
        }
    }

    /// Budget error with bounds converted back to the instance's own units.
    fn budget_error(&self, budget: u64, upper: &T) -> Error {
        let scale = self.inst.times().iter().fold(BigInt::one(), |acc, t| acc.lcm(t.denom()));
        let lower = Rational::new(self.lower_bound_rational(), scale.clone()).expect("scale > 0");
        let upper = Rational::new(upper.to_big(), scale).expect("scale > 0");
        Error::BudgetExceeded { budget, lower, upper }
    }

    /// Candidate machines for the next job: unused this rank, one per distinct
    /// load when pruning, least loaded first.
    fn candidates(&self, walker: &Walker<T>) -> Vec<usize> {
        let mut c: Vec<usize> = (0..self.m()).filter(|&i| !walker.used[i]).collect();
        if self.opts.prune {
            c.sort_by(|&a, &b| walker.loads[a].cmp(&walker.loads[b]).then(a.cmp(&b)));
            c.dedup_by(|b, a| walker.loads[*a] == walker.loads[*b]);
        }
        c
    }

    /// Lower bound on any completion of the current partial assignment, where
    /// `r` is the rank being filled and `next` the next job to place (if any
    /// remain in this rank).
    fn node_bound(&self, walker: &Walker<T>, r: usize, next: Option<usize>) -> T {
        let tail = self.tail_mu[r].clone();
        let mu_r = self.w[r * self.m() - 1].clone();
        let mut bound = T::zero();
        let mut least_unused: Option<T> = None;
        for i in 0..self.m() {
            let extra = if walker.used[i] { tail.clone() } else { tail.clone() + mu_r.clone() };
            let b = walker.loads[i].clone() + extra;
            if b > bound {
                bound = b;
            }
            if !walker.used[i] && least_unused.as_ref().is_none_or(|l| walker.loads[i] < *l) {
                least_unused = Some(walker.loads[i].clone());
            }
        }
        if let (Some(job), Some(least)) = (next, least_unused) {
            let b = least + self.w[job].clone() + tail;
            if b > bound {
                bound = b;
            }
        }
        bound
    }

    fn dfs(&self, walker: &mut Walker<T>, r: usize, t: usize) -> Result<()> {
        let (m, k) = (self.m(), self.inst.k());
        if r > k {
            let value = walker.loads.iter().max().cloned().unwrap_or_else(T::zero);
            if value < walker.best {
                walker.best = value;
                walker.best_assign = walker.machine_of.clone();
                if self.opts.prune && self.is_provably_optimal(&walker.best) {
                    walker.done = true;
                }
            }
            return Ok(());
        }
        let job = (r - 1) * m + t;
        for i in self.candidates(walker) {
            if walker.done {
                return Ok(());
            }
            self.tick()?;
            walker.loads[i] = walker.loads[i].clone() + self.w[job].clone();
            walker.used[i] = true;
            walker.machine_of[job] = i;

            let rank_done = t + 1 == m;
            let proceed = if !self.opts.prune {
                true
            } else if rank_done {
                let bound = self.rank_boundary_bound(walker, r);
                bound < walker.best && self.remember(walker, r)
            } else {
                self.node_bound(walker, r, Some(job + 1)) < walker.best
            };

            let res = if !proceed {
                Ok(())
            } else if rank_done {
                let saved = std::mem::replace(&mut walker.used, vec![false; m]);
                let res = self.dfs(walker, r + 1, 0);
                walker.used = saved;
                res
            } else {
                self.dfs(walker, r, t + 1)
            };

            walker.used[i] = false;
            walker.loads[i] = walker.loads[i].clone() - self.w[job].clone();
            res?;
        }
        Ok(())
    }

    fn rank_boundary_bound(&self, walker: &Walker<T>, r: usize) -> T {
        let tail = self.tail_mu[r].clone();
        walker.loads.iter().max().cloned().unwrap_or_else(T::zero) + tail
    }

    /// Records the profile reached after rank `r`; false if it was seen before.
    fn remember(&self, walker: &mut Walker<T>, r: usize) -> bool {
        if r == self.inst.k() {
            return true;
        }
        let mut key = walker.loads.clone();
        key.sort();
        let table = &mut walker.seen[r];
        if table.contains(&key) {
            return false;
        }
        if table.len() < TABLE_LIMIT {
            table.insert(key);
        }
        true
    }

    /// Enumerates the distinct rank-2 completions, then searches ranks `3..=k`
    /// below each one independently; the minimum over partitions (lowest
    /// partition index on ties) is the answer.
    fn run_partitioned(&self) -> Result<SearchOutcome<T>> {
        let mut roots: Vec<(Vec<T>, Vec<usize>)> = Vec::new();
        let mut walker = self.walker();
        self.collect_rank2(&mut walker, 0, &mut roots)?;

        let results: Vec<Result<Option<(T, Vec<usize>)>>> = self.opts.parallelism.map(&roots, |(loads, machine_of)| {
            let mut w = self.walker();
            w.loads = loads.clone();
            w.machine_of = machine_of.clone();
            let start = w.best.clone();
            self.dfs(&mut w, 3, 0)?;
            Ok((w.best < start).then_some((w.best, w.best_assign)))
        });

        let mut best = (self.start_value.clone(), self.start_assign.clone());
        for res in results {
            if let Some((v, a)) = res? {
                if v < best.0 {
                    best = (v, a);
                }
            }
        }
        Ok((best.0, best.1, self.nodes.load(Ordering::Relaxed)))
    }

    fn collect_rank2(&self, walker: &mut Walker<T>, t: usize, out: &mut Vec<(Vec<T>, Vec<usize>)>) -> Result<()> {
        let m = self.m();
        let job = m + t;
        for i in self.candidates(walker) {
            self.tick()?;
            walker.loads[i] = walker.loads[i].clone() + self.w[job].clone();
            walker.used[i] = true;
            walker.machine_of[job] = i;
            if t + 1 == m {
                let keep = !self.opts.prune
                    || (self.rank_boundary_bound(walker, 2) < walker.best && self.remember(walker, 2));
                if keep {
                    out.push((walker.loads.clone(), walker.machine_of.clone()));
                }
            } else if !self.opts.prune || self.node_bound(walker, 2, Some(job + 1)) < walker.best {
                self.collect_rank2(walker, t + 1, out)?;
            }
            walker.used[i] = false;
            walker.loads[i] = walker.loads[i].clone() - self.w[job].clone();
        }
        Ok(())
    }
}
