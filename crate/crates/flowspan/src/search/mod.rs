//! Instance generators and exhaustive integer search.
//!
//! [`enumerate_instances`] walks every integer instance of a shape that
//! already satisfies `μ_r = λ_{r+1}` and `μ_k = 0`. Such an instance is fixed
//! by its `k(m−1)` free values `λ_1 ≥ τ_{2,1} ≥ … ≥ τ_{m−1,1} ≥ λ_2 ≥ … ≥ 0`,
//! so the walk is an odometer over nonincreasing integer sequences.

mod hunt;

pub use hunt::{hunt, read_csv, write_csv, Heuristic, HuntOptions, HuntReport, HuntRow, RowStatus, CSV_HEADER};

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::instance::{normalize_instance, Instance};
use crate::rational::Rational;

/// `n = 3m` jobs: one job of length `m`, the lengths `m..2m−1`, the lengths
/// `2m−1..3m−2`, and `m−1` zeros. LD reaches `5m−2` where the optimum is `4m−1`.
pub fn tight_family(m: usize) -> Result<Instance> {
    if m < 2 {
        return Err(Error::InvalidInput("the tight family needs m ≥ 2".into()));
    }
    let m_i = m as i64;
    let p = (1..=3 * m_i)
        .map(|j| {
            let v = if j < m_i {
                0
            } else if j == m_i {
                m_i
            } else if j <= 2 * m_i {
                j - 1
            } else {
                j - 2
            };
            Rational::from(v)
        })
        .collect();
    normalize_instance(p, m)
}

/// `m−1` jobs of length 2, `m+2` of length 1 and `m−1` zeros; the worst
/// LD0 schedule takes 4 against an optimum of 3 when `m ≥ 3`.
pub fn ld0_family(m: usize) -> Result<Instance> {
    if m < 2 {
        return Err(Error::InvalidInput("the LD0 family needs m ≥ 2".into()));
    }
    let mut p = vec![Rational::from(2); m - 1];
    p.extend(std::iter::repeat_n(Rational::one(), m + 2));
    normalize_instance(p, m)
}

/// Lazily walks integer instances of shape `(m, k)` with `λ_1 ≤ lmax`.
#[derive(Clone, Debug)]
pub struct InstanceEnumerator {
    m: usize,
    k: usize,
    lmax: u64,
    primitive_only: bool,
}

/// Every nonzero integer instance of shape `(m, k)` satisfying `μ_r = λ_{r+1}`
/// and `μ_k = 0` with `λ_1 ≤ lmax`, each once, in a fixed order. Scaled
/// copies are kept; see [`InstanceEnumerator::primitive`].
pub fn enumerate_instances(m: usize, k: usize, lmax: u64) -> InstanceEnumerator {
    InstanceEnumerator { m, k, lmax, primitive_only: false }
}

impl InstanceEnumerator {
    /// Keeps only instances whose nonzero times have gcd 1.
    pub fn primitive(mut self, on: bool) -> Self {
        self.primitive_only = on;
        self
    }

    /// Number of free values per instance.
    pub fn free_values(&self) -> usize {
        if self.m < 2 {
            0
        } else {
            self.k * (self.m - 1)
        }
    }

    pub fn iter(&self) -> InstanceIter {
        InstanceIter { spec: self.clone(), cur: vec![0; self.free_values()], done: self.free_values() == 0 }
    }

    /// Instances `start..end` of the stream (by position).
    pub fn range(&self, start: usize, end: usize) -> impl Iterator<Item = Instance> {
        self.iter().skip(start).take(end.saturating_sub(start))
    }

    pub fn collect_all(&self) -> Vec<Instance> {
        self.iter().collect()
    }

    /// Expands free values into the full instance.
    fn build(&self, v: &[u64]) -> Instance {
        let (m, k) = (self.m, self.k);
        let mut p = Vec::with_capacity(m * k);
        for r in 0..k {
            let rank = &v[r * (m - 1)..(r + 1) * (m - 1)];
            p.extend(rank.iter().map(|&x| Rational::from(x)));
            let tail = if r + 1 < k { v[(r + 1) * (m - 1)] } else { 0 };
            p.push(Rational::from(tail));
        }
        Instance::new(m, p).expect("nonincreasing by construction")
    }
}

impl IntoIterator for &InstanceEnumerator {
    type Item = Instance;
    type IntoIter = InstanceIter;
    fn into_iter(self) -> InstanceIter {
        self.iter()
    }
}

pub struct InstanceIter {
    spec: InstanceEnumerator,
    cur: Vec<u64>,
    done: bool,
}

impl InstanceIter {
    /// Next nonincreasing sequence after `cur`: bump the rightmost entry that
    /// can grow and zero everything after it.
    fn advance(&mut self) -> bool {
        for i in (0..self.cur.len()).rev() {
            let cap = if i == 0 { self.spec.lmax } else { self.cur[i - 1] };
            if self.cur[i] < cap {
                self.cur[i] += 1;
                for x in &mut self.cur[i + 1..] {
                    *x = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for InstanceIter {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        while !self.done {
            if !self.advance() {
                self.done = true;
                return None;
            }
            if self.spec.primitive_only && gcd(&self.cur) != 1 {
                continue;
            }
            return Some(self.spec.build(&self.cur));
        }
        None
    }
}

fn gcd(v: &[u64]) -> u64 {
    v.iter().fold(0u64, |g, &x| g.gcd(&x))
}

/// Whether the nonzero times of an integer instance have gcd 1.
pub fn is_primitive(inst: &Instance) -> bool {
    let mut g = num_bigint::BigInt::zero();
    for t in inst.times() {
        if !t.is_integer() {
            return false;
        }
        g = g.gcd(t.numer());
    }
    g == num_bigint::BigInt::from(1)
}
