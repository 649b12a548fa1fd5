//! FM instances: `m` identical machines and `n = m·k` processing times sorted
//! nonincreasing, split into `k` ranks of `m` jobs each.
//!
//! Jobs are identified by their 0-based position in the sorted list. Rank `r`
//! (1-based, rank 1 holds the largest jobs) owns positions `(r-1)m .. rm`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    m: usize,
    p: Vec<Rational>,
}

/// Wire format: `{"m": 2, "p": [4, "7/2", 0]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub m: usize,
    pub p: Vec<Rational>,
}

impl Instance {
    /// Wraps already-normalized data, rejecting anything that breaks the
    /// instance invariants (use [`normalize_instance`] for raw input).
    pub fn new(m: usize, p: Vec<Rational>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("machine count must be at least 1".into()));
        }
        if p.is_empty() {
            return Err(Error::InvalidInput("an instance needs at least one job".into()));
        }
        if !p.len().is_multiple_of(m) {
            return Err(Error::InvalidInput(format!(
                "{} jobs do not fill whole ranks of {m} machines",
                p.len()
            )));
        }
        if let Some(neg) = p.iter().find(|t| t.is_negative()) {
            return Err(Error::InvalidInput(format!("negative processing time {neg}")));
        }
        if p.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("processing times must be nonincreasing".into()));
        }
        Ok(Instance { m, p })
    }

    pub fn from_ints(m: usize, p: &[i64]) -> Result<Self> {
        Instance::new(m, p.iter().map(|&v| Rational::from(v)).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn k(&self) -> usize {
        self.p.len() / self.m
    }

    pub fn times(&self) -> &[Rational] {
        &self.p
    }

    pub fn time(&self, job: usize) -> &Rational {
        &self.p[job]
    }

    /// The `m` times of rank `r` (1-based), largest first.
    pub fn rank(&self, r: usize) -> &[Rational] {
        assert!(r >= 1 && r <= self.k(), "rank {r} out of range 1..={}", self.k());
        &self.p[(r - 1) * self.m..r * self.m]
    }

    /// 1-based rank of a 0-based job index.
    pub fn rank_of(&self, job: usize) -> usize {
        job / self.m + 1
    }

    /// Job indices of rank `r`, largest first.
    pub fn rank_jobs(&self, r: usize) -> std::ops::Range<usize> {
        (r - 1) * self.m..r * self.m
    }

    /// Largest time in rank `r`.
    pub fn lambda(&self, r: usize) -> &Rational {
        &self.rank(r)[0]
    }

    /// Smallest time in rank `r`.
    pub fn mu(&self, r: usize) -> &Rational {
        &self.rank(r)[self.m - 1]
    }

    /// `i`-th largest time in rank `r`, both 1-based.
    pub fn tau(&self, i: usize, r: usize) -> &Rational {
        &self.rank(r)[i - 1]
    }

    pub fn total_work(&self) -> Rational {
        self.p.iter().sum()
    }

    pub fn is_all_zero(&self) -> bool {
        self.p.iter().all(Rational::is_zero)
    }

    /// λ_1 ≥ μ_1 ≥ λ_2 ≥ … ≥ μ_k ≥ 0.
    pub fn rank_chain_holds(&self) -> bool {
        let k = self.k();
        let mut chain = Vec::with_capacity(2 * k + 1);
        for r in 1..=k {
            chain.push(self.lambda(r).clone());
            chain.push(self.mu(r).clone());
        }
        chain.push(Rational::zero());
        chain.windows(2).all(|w| w[0] >= w[1])
    }

    /// Whether `μ_r = λ_{r+1}` for all `r < k` and `μ_k = 0`.
    pub fn satisfies_property2(&self) -> bool {
        let k = self.k();
        (1..k).all(|r| self.mu(r) == self.lambda(r + 1)) && self.mu(k).is_zero()
    }

    /// Appends one rank of `m` zero jobs.
    pub fn with_zero_rank(&self) -> Instance {
        let mut p = self.p.clone();
        p.extend(std::iter::repeat_n(Rational::zero(), self.m));
        Instance { m: self.m, p }
    }

    /// Multiplies every time by `factor > 0`.
    pub fn scaled(&self, factor: &Rational) -> Result<Instance> {
        if !factor.is_positive() {
            return Err(Error::InvalidInput("scale factor must be positive".into()));
        }
        Ok(Instance { m: self.m, p: self.p.iter().map(|t| t * factor).collect() })
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile { m: self.m, p: self.p.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("instance serializes")
    }

    /// Parses the wire format and normalizes it (padding and sorting).
    pub fn from_json(s: &str) -> Result<Self> {
        let file: InstanceFile =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        normalize_instance(file.p, file.m)
    }

    /// `;`-joined times, used in CSV reports.
    pub fn times_joined(&self) -> String {
        self.p.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
    }
}

/// Pads `raw` with zero jobs up to a multiple of `m` and stable-sorts it
/// nonincreasing, so equal times keep their input order.
pub fn normalize_instance(raw: Vec<Rational>, m: usize) -> Result<Instance> {
    if m == 0 {
        return Err(Error::InvalidInput("machine count must be at least 1".into()));
    }
    if raw.is_empty() {
        return Err(Error::InvalidInput("an instance needs at least one job".into()));
    }
    if let Some(neg) = raw.iter().find(|t| t.is_negative()) {
        return Err(Error::InvalidInput(format!("negative processing time {neg}")));
    }
    let mut p = raw;
    let padded = p.len().div_ceil(m) * m;
    p.resize(padded, Rational::zero());
    p.sort_by(|a, b| b.cmp(a));
    Instance::new(m, p)
}

/// Shifts ranks down until `μ_r = λ_{r+1}` for every `r < k` and `μ_k = 0`.
///
/// Rank `k` loses `μ_k`, then each rank `r` (from `k-1` up to 1) loses
/// `μ_r − λ_{r+1}` computed against the already shifted rank below it. Every
/// schedule's makespan drops by the same total, so the LD/optimal ratio can
/// only grow.
pub fn apply_property2(inst: &Instance) -> Instance {
    let m = inst.m();
    let k = inst.k();
    let mut p = inst.times().to_vec();
    for r in (1..=k).rev() {
        let lo = (r - 1) * m;
        let hi = r * m;
        let floor = if r == k { Rational::zero() } else { p[hi].clone() };
        let shift = &p[hi - 1] - &floor;
        if shift.is_positive() {
            for t in &mut p[lo..hi] {
                *t -= &shift;
            }
        }
    }
    Instance::new(m, p).expect("shifting whole ranks preserves the instance invariants")
}
