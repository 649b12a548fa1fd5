//! Turns a machine/rank shape `(m, k)` into a finite family of LPs whose
//! optima bound the worst LD/optimal makespan ratio on that shape.
//!
//! Processing times become variables. After the `μ_r = λ_{r+1}`, `μ_k = 0`
//! normalization, rank `r` holds `λ_r ≥ τ_{2,r} ≥ … ≥ τ_{m−1,r} ≥ λ_{r+1}`
//! (with `λ_{k+1} = 0`). Every case fixes
//!
//! - one LD branch: the sorted order of the symbolic profile after each rank,
//!   written as non-strict inequalities, which makes `t_LD` one linear
//!   expression;
//! - one candidate optimal schedule (rank 1 pinned to the identity), whose
//!   machine loads are all held at `≤ 1`.
//!
//! The LP maximizes `t_LD`. Every real instance, scaled so its optimum is 1,
//! is a feasible point of some case with objective equal to its LD makespan,
//! so the maximum over all cases bounds the ratio from above.

pub mod golden;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::lp::{check_certificate, solve_lp, Constraint, LinExpr, LpProblem, LpSolution, LpStatus, Relation, VarId};
use crate::par::Parallelism;
use crate::perm::{factorial, permutations};
use crate::rational::Rational;

/// Default limit on the number of LPs a single `(m, k)` may generate.
pub const DEFAULT_CASE_CAP: u128 = 250_000;

/// Variables and symbolic processing times for one `(m, k)` shape.
#[derive(Clone, Debug)]
pub struct CaseModel {
    m: usize,
    k: usize,
    template: LpProblem,
    /// `times[r-1][i-1]` is `τ_{i,r}`.
    times: Vec<Vec<LinExpr>>,
    /// For each variable, the (rank, position) it stands for.
    sources: Vec<(usize, usize)>,
}

impl CaseModel {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(Error::InvalidInput("case analysis needs m ≥ 1 and k ≥ 1".into()));
        }
        let mut template = LpProblem::new(format!("m{m}k{k}"));
        let mut sources = Vec::new();
        let mut lambdas = Vec::with_capacity(k);
        for r in 1..=k {
            lambdas.push(template.var(format!("lambda{r}")));
            sources.push((r, 1));
        }
        let mut times = Vec::with_capacity(k);
        for r in 1..=k {
            let mut rank = vec![LinExpr::var(lambdas[r - 1])];
            if m >= 2 {
                for i in 2..m {
                    let v = template.var(format!("tau{i}_{r}"));
                    sources.push((r, i));
                    rank.push(LinExpr::var(v));
                }
                rank.push(if r < k { LinExpr::var(lambdas[r]) } else { LinExpr::zero() });
            }
            times.push(rank);
        }
        // Rank order chain; the last entry of the final rank is the constant 0
        // (or λ_k itself when m = 1), so consecutive pairs cover everything.
        let flat: Vec<LinExpr> = if m == 1 {
            times.iter().map(|r| r[0].clone()).collect()
        } else {
            let mut flat = Vec::new();
            for (r, rank) in times.iter().enumerate() {
                let upto = if r + 1 < k { m - 1 } else { m };
                flat.extend(rank[..upto].iter().cloned());
            }
            flat
        };
        for w in flat.windows(2) {
            if !w[1].terms().any(|_| true) {
                continue;
            }
            template.ge(w[0].clone(), w[1].clone()).named("rank order");
        }
        Ok(CaseModel { m, k, template, times, sources })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn variables(&self) -> &[String] {
        &self.template.variables
    }

    /// `τ_{i,r}` as an expression, both indices 1-based.
    pub fn time(&self, i: usize, r: usize) -> &LinExpr {
        &self.times[r - 1][i - 1]
    }

    /// The ordering constraints shared by every case.
    pub fn chain(&self) -> &[Constraint] {
        &self.template.constraints
    }

    /// Variable values describing `inst`, if it has this shape and (for
    /// `m ≥ 2`) satisfies `μ_r = λ_{r+1}`, `μ_k = 0`.
    pub fn point_of(&self, inst: &Instance) -> Option<Vec<Rational>> {
        if inst.m() != self.m || inst.k() != self.k {
            return None;
        }
        if self.m >= 2 && !inst.satisfies_property2() {
            return None;
        }
        Some(self.sources.iter().map(|&(r, i)| inst.tau(i, r).clone()).collect())
    }

    /// All LD branches of this shape.
    pub fn ld_branches(&self) -> Vec<LdBranch> {
        let loads: Vec<LinExpr> = (1..=self.m).map(|i| self.time(i, 1).clone()).collect();
        let mut out = Vec::new();
        if self.k == 1 {
            self.finish(&loads, &[], &[], &mut out);
        } else {
            let order: Vec<usize> = (0..self.m).collect();
            self.extend(2, &loads, &order, &mut Vec::new(), &mut Vec::new(), &mut out);
        }
        out
    }

    /// Assigns rank `r` on top of `loads` (machines listed by nonincreasing
    /// load in `order`), then branches on the resulting order.
    fn extend(
        &self,
        r: usize,
        loads: &[LinExpr],
        order: &[usize],
        orders: &mut Vec<Vec<usize>>,
        conditions: &mut Vec<Constraint>,
        out: &mut Vec<LdBranch>,
    ) {
        let m = self.m;
        let mut next = loads.to_vec();
        for j in 0..m {
            let machine = order[m - 1 - j];
            next[machine] = next[machine].clone() + self.time(j + 1, r);
        }
        if r == self.k {
            self.finish(&next, orders, conditions, out);
            return;
        }
        for perm in permutations(m) {
            let before = conditions.len();
            for w in perm.windows(2) {
                conditions.push(ge_constraint(&next[w[0]], &next[w[1]]));
            }
            orders.push(perm.clone());
            self.extend(r + 1, &next, &perm, orders, conditions, out);
            orders.pop();
            conditions.truncate(before);
        }
    }

    fn finish(&self, loads: &[LinExpr], orders: &[Vec<usize>], conditions: &[Constraint], out: &mut Vec<LdBranch>) {
        for top in 0..self.m {
            let mut conds = conditions.to_vec();
            for other in (0..self.m).filter(|&o| o != top) {
                conds.push(ge_constraint(&loads[top], &loads[other]));
            }
            out.push(LdBranch { orders: orders.to_vec(), top, conditions: conds, t_ld: loads[top].clone() });
        }
    }

    /// Machine loads of a candidate schedule; `perms[r-2][i]` is the 0-based
    /// position in rank `r` given to machine `i` (rank 1 is the identity).
    pub fn schedule_loads(&self, perms: &[Vec<usize>]) -> Vec<LinExpr> {
        (0..self.m)
            .map(|i| {
                let mut load = self.time(i + 1, 1).clone();
                for (r, perm) in perms.iter().enumerate() {
                    load = load + self.time(perm[i] + 1, r + 2);
                }
                load
            })
            .collect()
    }

    /// LD branches times `(m!)^(k−1)` candidate schedules.
    pub fn case_count(&self) -> u128 {
        let mf = factorial(self.m);
        let branches = mf.saturating_pow(self.k.saturating_sub(2) as u32).saturating_mul(self.m as u128);
        branches.saturating_mul(mf.saturating_pow((self.k - 1) as u32))
    }
}

fn ge_constraint(lhs: &LinExpr, rhs: &LinExpr) -> Constraint {
    let diff = rhs.clone() - lhs.clone();
    Constraint {
        rhs: -diff.constant().clone(),
        expr: diff.without_constant(),
        relation: Relation::Le,
        label: "LD order".into(),
    }
}

/// One way LD can unfold on a symbolic instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LdBranch {
    /// Machines in nonincreasing load order after ranks 2..k−1.
    pub orders: Vec<Vec<usize>>,
    /// Machine finishing last.
    pub top: usize,
    pub conditions: Vec<Constraint>,
    /// LD makespan on this branch.
    pub t_ld: LinExpr,
}

impl LdBranch {
    pub fn holds_at(&self, x: &[Rational]) -> bool {
        self.conditions.iter().all(|c| c.expr.eval(x) <= c.rhs)
    }
}

/// One LP of the family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseSpec {
    pub id: usize,
    pub m: usize,
    pub k: usize,
    pub ld_branch: LdBranch,
    /// Candidate optimal schedule, ranks 2..k (rank 1 is the identity).
    pub schedule: Vec<Vec<usize>>,
    pub lp: LpProblem,
}

pub fn enumerate_cases(m: usize, k: usize) -> Result<Vec<CaseSpec>> {
    enumerate_cases_with_cap(m, k, DEFAULT_CASE_CAP)
}

pub fn enumerate_cases_with_cap(m: usize, k: usize, cap: u128) -> Result<Vec<CaseSpec>> {
    let model = CaseModel::new(m, k)?;
    let needed = model.case_count();
    if needed > cap {
        return Err(Error::CaseCapExceeded { m, k, needed, cap });
    }
    let branches = model.ld_branches();
    let schedules = candidate_schedules(m, k);
    let mut out = Vec::with_capacity(branches.len() * schedules.len());
    for (b, branch) in branches.iter().enumerate() {
        for (s, sched) in schedules.iter().enumerate() {
            let mut lp = model.template.clone();
            lp.label = format!("m{m}k{k}/ld{b}/opt{s}");
            lp.constraints.extend(branch.conditions.iter().cloned());
            for load in model.schedule_loads(sched) {
                lp.le(load, LinExpr::from(1)).named("candidate load");
            }
            lp.maximize(branch.t_ld.clone());
            out.push(CaseSpec {
                id: out.len(),
                m,
                k,
                ld_branch: branch.clone(),
                schedule: sched.clone(),
                lp,
            });
        }
    }
    Ok(out)
}

/// Every per-rank permutation list for ranks 2..k.
pub fn candidate_schedules(m: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    let perms = permutations(m);
    let mut out = vec![Vec::new()];
    for _ in 2..=k {
        let mut next = Vec::with_capacity(out.len() * perms.len());
        for prefix in &out {
            for p in &perms {
                let mut v: Vec<Vec<usize>> = prefix.clone();
                v.push(p.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    FailUnbounded,
    FailCertificate,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub spec: CaseSpec,
    pub solution: LpSolution,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub m: usize,
    pub k: usize,
    pub bound: Rational,
    pub verdict: Verdict,
    pub cases_solved: usize,
    pub global_max: Option<Rational>,
    /// Case ids reaching the global max, ascending.
    pub attaining: Vec<usize>,
    /// Optimal point of the lowest attaining case.
    pub witness: Option<Vec<(String, Rational)>>,
    pub unbounded: Vec<usize>,
    pub uncertified: Vec<usize>,
    pub cases: Vec<CaseOutcome>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        let max = self.global_max.as_ref().map_or_else(|| "none".to_string(), ToString::to_string);
        format!(
            "m={} k={} cases={} max={} bound={} verdict={:?}",
            self.m, self.k, self.cases_solved, max, self.bound, self.verdict
        )
    }
}

#[derive(Clone, Debug)]
pub struct CaseOptions {
    pub cap: u128,
    pub parallelism: Parallelism,
}

impl Default for CaseOptions {
    fn default() -> Self {
        CaseOptions { cap: DEFAULT_CASE_CAP, parallelism: Parallelism::Sequential }
    }
}

pub fn verify_bound(m: usize, k: usize, bound: &Rational) -> Result<BoundReport> {
    verify_bound_with(m, k, bound, &CaseOptions::default())
}

pub fn verify_bound_with(m: usize, k: usize, bound: &Rational, opts: &CaseOptions) -> Result<BoundReport> {
    let specs = enumerate_cases_with_cap(m, k, opts.cap)?;
    let cases: Vec<CaseOutcome> = opts.parallelism.map(&specs, |spec| {
        let solution = solve_lp(&spec.lp);
        let certified = check_certificate(&spec.lp, &solution).is_ok();
        CaseOutcome { spec: spec.clone(), solution, certified }
    });
    Ok(summarize(m, k, bound, cases))
}

fn summarize(m: usize, k: usize, bound: &Rational, cases: Vec<CaseOutcome>) -> BoundReport {
    let mut global_max: Option<Rational> = None;
    let mut unbounded = Vec::new();
    let mut uncertified = Vec::new();
    for c in &cases {
        if !c.certified {
            uncertified.push(c.spec.id);
        }
        match c.solution.status {
            LpStatus::Unbounded => unbounded.push(c.spec.id),
            LpStatus::Optimal => {
                let v = c.solution.objective.as_ref().expect("optimal has a value");
                if global_max.as_ref().is_none_or(|g| v > g) {
                    global_max = Some(v.clone());
                }
            }
            LpStatus::Infeasible => {}
        }
    }
    let attaining: Vec<usize> = match &global_max {
        Some(g) => cases
            .iter()
            .filter(|c| c.solution.objective.as_ref() == Some(g))
            .map(|c| c.spec.id)
            .collect(),
        None => Vec::new(),
    };
    let witness = attaining.first().map(|&id| {
        let c = &cases[id];
        c.spec.lp.variables.iter().cloned().zip(c.solution.primal.iter().cloned()).collect()
    });
    let verdict = if !unbounded.is_empty() {
        Verdict::FailUnbounded
    } else if !uncertified.is_empty() {
        Verdict::FailCertificate
    } else if global_max.as_ref().is_none_or(|g| g <= bound) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    BoundReport {
        m,
        k,
        bound: bound.clone(),
        verdict,
        cases_solved: cases.len(),
        global_max,
        attaining,
        witness,
        unbounded,
        uncertified,
        cases,
    }
}

/// Rank counts still open for `m` machines once the two-machine case, the
/// three-machine case, `k = 3` and `k ≥ 6` are settled.
pub fn remaining_cases(m: usize) -> Result<Vec<usize>> {
    match m {
        0 | 1 => Err(Error::InvalidInput("remaining cases are defined for m ≥ 2".into())),
        2 | 3 => Ok(Vec::new()),
        _ => Ok(vec![4, 5]),
    }
}

/// Lookup helper: a variable of the model by name.
pub fn var_named(lp: &LpProblem, name: &str) -> Option<VarId> {
    lp.variables.iter().position(|v| v == name).map(VarId)
}
