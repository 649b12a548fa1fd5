//! Independent reference implementations used by the integration tests.
//! None of these share code with the library's solvers.

#![allow(dead_code)]

use std::collections::BTreeSet;

use flowspan::lp::{LpProblem, Relation};
use flowspan::{Instance, Rational};

/// `a·x ≤ b` rows of an LP, equalities split in two, nonnegativity included.
pub fn le_rows(lp: &LpProblem) -> Vec<(Vec<Rational>, Rational)> {
    let n = lp.num_vars();
    let mut rows = Vec::new();
    for c in &lp.constraints {
        let mut a = vec![Rational::zero(); n];
        for (v, coef) in c.expr.terms() {
            a[v.0] = coef.clone();
        }
        let b = c.effective_rhs();
        if c.relation == Relation::Eq {
            rows.push((a.iter().map(|x| -x.clone()).collect(), -b.clone()));
        }
        rows.push((a, b));
    }
    for j in 0..n {
        let mut a = vec![Rational::zero(); n];
        a[j] = -Rational::one();
        rows.push((a, Rational::zero()));
    }
    rows
}

fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter().zip(x).map(|(p, q)| p * q).sum()
}

/// Solves the square system by Gauss–Jordan elimination; `None` if singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip().ok()?;
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    let d = &f * &a[col][j];
                    a[r][j] -= &d;
                }
                let d = &f * &b[col];
                b[r] -= &d;
            }
        }
    }
    Some(b)
}

/// Basic feasible points of `{x ≥ 0 : rows}` and the best objective among
/// them. A nonempty region of this form always has a vertex, so `None` means
/// infeasible; when the LP is bounded the best vertex is its optimum.
pub fn vertex_max(lp: &LpProblem) -> Option<Rational> {
    let n = lp.num_vars();
    let rows = le_rows(lp);
    let c: Vec<Rational> = (0..n).map(|j| lp.objective.coeff(flowspan::lp::VarId(j))).collect();
    let mut best: Option<Rational> = None;
    let mut pick = Vec::with_capacity(n);
    choose(&rows, n, 0, &mut pick, &mut |idx| {
        let a: Vec<Vec<Rational>> = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<Rational> = idx.iter().map(|&i| rows[i].1.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if rows.iter().all(|(a, b)| dot(a, &x) <= *b) {
                let v = dot(&c, &x);
                if best.as_ref().is_none_or(|bv| v > *bv) {
                    best = Some(v);
                }
            }
        }
    });
    best.map(|v| v + lp.objective.constant())
}

fn choose(
    rows: &[(Vec<Rational>, Rational)],
    n: usize,
    start: usize,
    pick: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    if pick.len() == n {
        f(pick);
        return;
    }
    for i in start..rows.len() {
        if rows.len() - i < n - pick.len() {
            break;
        }
        pick.push(i);
        choose(rows, n, i + 1, pick, f);
        pick.pop();
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum FmVerdict {
    Infeasible,
    Unbounded,
    Optimal(Rational),
}

/// Projects `{(x, t) : rows, t = c·x}` onto `t` by Fourier–Motzkin
/// elimination and reads off the status and the maximum of `t`.
pub fn fourier_motzkin(lp: &LpProblem) -> FmVerdict {
    let n = lp.num_vars();
    let c: Vec<Rational> = (0..n).map(|j| lp.objective.coeff(flowspan::lp::VarId(j))).collect();
    // columns 0..n are x, column n is t
    let mut rows: BTreeSet<(Vec<Rational>, Rational)> = BTreeSet::new();
    for (mut a, b) in le_rows(lp) {
        a.push(Rational::zero());
        rows.insert(normalize(a, b));
    }
    let mut up = c.clone();
    up.push(-Rational::one());
    rows.insert(normalize(up.clone(), Rational::zero()));
    rows.insert(normalize(up.into_iter().map(|v| -v).collect(), Rational::zero()));

    for j in 0..n {
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), BTreeSet::new());
        for (a, b) in rows {
            if a[j].is_positive() {
                pos.push((a, b));
            } else if a[j].is_negative() {
                neg.push((a, b));
            } else {
                zero.insert((a, b));
            }
        }
        for (pa, pb) in &pos {
            for (na, nb) in &neg {
                let sp = pa[j].recip().unwrap();
                let sn = (-na[j].clone()).recip().unwrap();
                let a: Vec<Rational> = pa.iter().zip(na).map(|(x, y)| x * &sp + y * &sn).collect();
                let b = pb * &sp + nb * &sn;
                zero.insert(normalize(a, b));
            }
        }
        rows = zero;
    }
    let mut lower: Option<Rational> = None;
    let mut upper: Option<Rational> = None;
    for (a, b) in &rows {
        let alpha = &a[n];
        if alpha.is_zero() {
            if b.is_negative() {
                return FmVerdict::Infeasible;
            }
        } else if alpha.is_positive() {
            let v = b.checked_div(alpha).unwrap();
            if upper.as_ref().is_none_or(|u| v < *u) {
                upper = Some(v);
            }
        } else {
            let v = b.checked_div(alpha).unwrap();
            if lower.as_ref().is_none_or(|l| v > *l) {
                lower = Some(v);
            }
        }
    }
    match (lower, upper) {
        (Some(l), Some(u)) if l > u => FmVerdict::Infeasible,
        (_, None) => FmVerdict::Unbounded,
        (_, Some(u)) => FmVerdict::Optimal(u + lp.objective.constant()),
    }
}

/// Scales a row so its largest coefficient magnitude is 1 (keeps duplicates out).
fn normalize(a: Vec<Rational>, b: Rational) -> (Vec<Rational>, Rational) {
    let m = a.iter().map(Rational::abs).max().unwrap_or_else(Rational::zero);
    if m.is_zero() {
        let b = if b.is_negative() { -Rational::one() } else { Rational::zero() };
        return (a, b);
    }
    let inv = m.recip().unwrap();
    (a.iter().map(|x| x * &inv).collect(), b * inv)
}

/// Minimum makespan over every rank-respecting assignment, by plain
/// enumeration of one permutation per rank after the first.
pub fn brute_force_optimum(inst: &Instance) -> Rational {
    let m = inst.m();
    let k = inst.k();
    let mut loads: Vec<Rational> = inst.rank(1).to_vec();
    let mut best: Option<Rational> = None;
    fn rec(inst: &Instance, r: usize, k: usize, m: usize, loads: &mut Vec<Rational>, best: &mut Option<Rational>) {
        if r > k {
            let mx = loads.iter().max().unwrap().clone();
            if best.as_ref().is_none_or(|b| mx < *b) {
                *best = Some(mx);
            }
            return;
        }
        let mut perm: Vec<usize> = (0..m).collect();
        loop {
            for i in 0..m {
                loads[i] += inst.tau(perm[i] + 1, r);
            }
            rec(inst, r + 1, k, m, loads, best);
            for i in 0..m {
                loads[i] -= inst.tau(perm[i] + 1, r);
            }
            if !next_perm(&mut perm) {
                break;
            }
        }
    }
    rec(inst, 2, k, m, &mut loads, &mut best);
    best.unwrap()
}

fn next_perm(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every integer instance with `m` machines, `k` ranks and times in `0..=vmax`
/// (sorted, not necessarily normalized), excluding the all-zero one.
pub fn all_sorted_instances(m: usize, k: usize, vmax: i64) -> Vec<Instance> {
    let n = m * k;
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        // next nonincreasing sequence
        let mut i = n;
        let mut moved = false;
        while i > 0 {
            i -= 1;
            let cap = if i == 0 { vmax } else { cur[i - 1] };
            if cur[i] < cap {
                cur[i] += 1;
                for x in &mut cur[i + 1..] {
                    *x = 0;
                }
                moved = true;
                break;
            }
        }
        if !moved {
            return out;
        }
        out.push(Instance::from_ints(m, &cur).unwrap());
    }
}
