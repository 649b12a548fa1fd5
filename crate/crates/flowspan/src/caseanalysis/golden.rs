//! Hand-written LPs for the two-machine three-rank cases and the
//! three-machine grid, kept next to the generic enumerator so the two can be
//! compared.
//!
//! The two-machine cases use `λ1, λ2, λ3` for the instance
//! `λ1, λ2, λ2, λ3, λ3, 0` and include the rank order `λ1 ≥ λ2 ≥ λ3`.

use crate::lp::{LinExpr, LpProblem, VarId};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub enum Expected {
    Infeasible,
    Optimal {
        value: Rational,
        /// A point attaining `value`, one entry per variable.
        point: Vec<Rational>,
        /// Whether `point` is the only optimum.
        unique: bool,
    },
}

#[derive(Clone, Debug)]
pub struct GoldenCase {
    pub name: &'static str,
    pub lp: LpProblem,
    pub expected: Expected,
}

/// Coefficient row `Σ coefs[i]·x_i`.
fn row(vars: &[VarId], coefs: &[i64]) -> LinExpr {
    vars.iter().zip(coefs).fold(LinExpr::zero(), |e, (&v, &c)| e + c * v)
}

fn konst(a: i64, b: i64) -> LinExpr {
    LinExpr::from(Rational::frac(a, b))
}

fn optimal(value: Rational, point: &[(i64, i64)], unique: bool) -> Expected {
    Expected::Optimal { value, point: point.iter().map(|&(a, b)| Rational::frac(a, b)).collect(), unique }
}

fn two_machine(name: &'static str) -> (LpProblem, Vec<VarId>) {
    let mut lp = LpProblem::new(name);
    let v: Vec<VarId> = ["lambda1", "lambda2", "lambda3"].iter().map(|n| lp.var(*n)).collect();
    lp.ge(v[0].into(), v[1].into()).named("rank order");
    lp.ge(v[1].into(), v[2].into()).named("rank order");
    (lp, v)
}

const EIGHT_SEVENTHS: [(i64, i64); 3] = [(4, 7), (3, 7), (2, 7)];
const HALVES: [(i64, i64); 3] = [(1, 2), (1, 2), (1, 4)];

/// Cases 1, 2A, 2B, 3A, 3B, 4A, 4B in full form.
pub fn two_machine_cases() -> Vec<GoldenCase> {
    let mut out = Vec::new();
    let one = || LinExpr::from(1);

    // t_LD = λ1 + λ3 needs λ1 ≥ 2λ2, which forces the optimum to λ1 + λ2.
    // A counterexample would need t_LD ≥ 8/7 with that optimum at 1.
    let (mut lp, v) = two_machine("case 1");
    lp.maximize(row(&v, &[1, 0, 1]));
    lp.ge(row(&v, &[1, 0, 0]), row(&v, &[0, 2, 0]));
    lp.equals(row(&v, &[1, 1, 0]), one());
    lp.ge(row(&v, &[1, 0, 1]), konst(8, 7)).named("counterexample threshold");
    out.push(GoldenCase { name: "case 1", lp, expected: Expected::Infeasible });

    let (mut lp, v) = two_machine("case 2A");
    lp.maximize(row(&v, &[0, 2, 1]));
    lp.le(row(&v, &[1, 0, 0]), row(&v, &[0, 0, 2]));
    lp.equals(row(&v, &[0, 1, 2]), one());
    lp.le(row(&v, &[0, 2, 0]), row(&v, &[1, 0, 1]));
    out.push(GoldenCase { name: "case 2A", lp, expected: optimal(Rational::frac(8, 7), &EIGHT_SEVENTHS, true) });

    let (mut lp, v) = two_machine("case 2B");
    lp.maximize(row(&v, &[0, 2, 1]));
    lp.equals(row(&v, &[1, 1, 0]), one());
    lp.ge(row(&v, &[1, 0, 0]), row(&v, &[0, 0, 2]));
    lp.le(row(&v, &[1, 0, 0]), row(&v, &[0, 2, 0]));
    lp.le(row(&v, &[0, 2, 0]), row(&v, &[1, 0, 1]));
    out.push(GoldenCase { name: "case 2B", lp, expected: optimal(Rational::frac(8, 7), &EIGHT_SEVENTHS, true) });

    let (mut lp, v) = two_machine("case 3A");
    lp.maximize(row(&v, &[1, 0, 2]));
    lp.le(row(&v, &[1, 0, 1]), row(&v, &[0, 2, 0]));
    lp.ge(row(&v, &[1, 0, 2]), row(&v, &[0, 2, 0]));
    lp.equals(row(&v, &[0, 1, 2]), one());
    lp.le(row(&v, &[1, 0, 0]), row(&v, &[0, 0, 2]));
    out.push(GoldenCase { name: "case 3A", lp, expected: optimal(Rational::frac(8, 7), &EIGHT_SEVENTHS, true) });

    let (mut lp, v) = two_machine("case 3B");
    lp.maximize(row(&v, &[1, 0, 2]));
    lp.equals(row(&v, &[1, 1, 0]), one());
    lp.ge(row(&v, &[1, 0, 0]), row(&v, &[0, 0, 2]));
    lp.le(row(&v, &[1, 0, 1]), row(&v, &[0, 2, 0]));
    lp.ge(row(&v, &[1, 0, 2]), row(&v, &[0, 2, 0]));
    out.push(GoldenCase { name: "case 3B", lp, expected: optimal(Rational::frac(8, 7), &EIGHT_SEVENTHS, true) });

    let (mut lp, v) = two_machine("case 4A");
    lp.maximize(row(&v, &[0, 2, 0]));
    lp.le(row(&v, &[1, 0, 0]), row(&v, &[0, 0, 2]));
    lp.equals(row(&v, &[0, 1, 2]), one());
    lp.ge(row(&v, &[0, 2, 0]), row(&v, &[1, 0, 2]));
    out.push(GoldenCase { name: "case 4A", lp, expected: optimal(Rational::one(), &HALVES, true) });

    let (mut lp, v) = two_machine("case 4B");
    lp.maximize(row(&v, &[0, 2, 0]));
    lp.equals(row(&v, &[1, 1, 0]), one());
    lp.ge(row(&v, &[1, 0, 0]), row(&v, &[0, 0, 2]));
    lp.le(row(&v, &[1, 0, 2]), row(&v, &[0, 2, 0]));
    out.push(GoldenCase { name: "case 4B", lp, expected: optimal(Rational::one(), &HALVES, false) });

    out
}

/// Reduced two-variable forms of Cases 2A–4B, each paired with the name of
/// its full form. The eliminated variable's rank order is restated on the
/// remaining ones.
pub fn two_machine_simplified() -> Vec<(&'static str, LpProblem)> {
    let mut out = Vec::new();
    let pair = |name: &'static str, a: &str, b: &str| {
        let mut lp = LpProblem::new(name);
        let x = lp.var(a);
        let y = lp.var(b);
        (lp, vec![x, y])
    };
    let c = |a: i64| LinExpr::from(a);

    // λ2, λ3
    let (mut lp, v) = pair("case 2A reduced", "lambda2", "lambda3");
    lp.maximize(row(&v, &[2, 1]));
    lp.le(row(&v, &[2, 0]), row(&v, &[0, 3]));
    lp.equals(row(&v, &[1, 2]), c(1));
    lp.ge(row(&v, &[1, 0]), row(&v, &[0, 1]));
    out.push(("case 2A", lp));

    let (mut lp, v) = pair("case 2B reduced", "lambda2", "lambda3");
    lp.maximize(row(&v, &[2, 1]));
    lp.ge(row(&v, &[1, 0]), konst(1, 3));
    lp.le(row(&v, &[1, 2]), c(1));
    lp.le(row(&v, &[3, 0]), c(1) + row(&v, &[0, 1]));
    lp.le(row(&v, &[2, 0]), c(1));
    lp.ge(row(&v, &[1, 0]), row(&v, &[0, 1]));
    out.push(("case 2B", lp));

    // λ1, λ3
    let (mut lp, v) = pair("case 3A reduced", "lambda1", "lambda3");
    lp.maximize(row(&v, &[1, 2]));
    lp.le(row(&v, &[1, 5]), c(2));
    lp.ge(row(&v, &[1, 6]), c(2));
    lp.le(row(&v, &[1, 0]), row(&v, &[0, 2]));
    lp.ge(row(&v, &[1, 2]), c(1));
    lp.le(row(&v, &[0, 3]), c(1));
    out.push(("case 3A", lp));

    let (mut lp, v) = pair("case 3B reduced", "lambda1", "lambda3");
    lp.maximize(row(&v, &[1, 2]));
    lp.ge(row(&v, &[1, 0]), row(&v, &[0, 2]));
    lp.le(row(&v, &[3, 1]), c(2));
    lp.ge(row(&v, &[3, 2]), c(2));
    lp.ge(row(&v, &[2, 0]), c(1));
    lp.le(row(&v, &[1, 1]), c(1));
    out.push(("case 3B", lp));

    // λ1, λ2
    let (mut lp, v) = pair("case 4A reduced", "lambda1", "lambda2");
    lp.maximize(row(&v, &[0, 2]));
    lp.le(row(&v, &[1, 1]), c(1));
    lp.ge(row(&v, &[-2, 5]), c(1));
    lp.ge(row(&v, &[1, 0]), row(&v, &[0, 1]));
    lp.ge(row(&v, &[0, 3]), c(1));
    out.push(("case 4A", lp));

    // λ2, λ3
    let (mut lp, v) = pair("case 4B reduced", "lambda2", "lambda3");
    lp.maximize(row(&v, &[2, 0]));
    lp.ge(row(&v, &[1, 0]), row(&v, &[0, 1]));
    lp.le(row(&v, &[1, 2]), c(1));
    lp.ge(row(&v, &[3, -2]), c(1));
    lp.le(row(&v, &[2, 0]), c(1));
    out.push(("case 4B", lp));

    out
}

/// The three-machine grid on `(λ1, λ2, λ3, α1, α2)`: shared rows (1)–(7) plus
/// one block of rows (8)–(10) per assumed optimal makespan expression.
pub fn three_machine_grid() -> Vec<GoldenCase> {
    let blocks: [(&'static str, [[i64; 5]; 3]); 4] = [
        ("grid: optimum λ1 + α2", [[-1, 0, 2, 1, -1], [-1, 2, 1, 0, -1], [1, 0, 0, 0, 1]]),
        ("grid: optimum α1 + 2λ3", [[1, 0, -2, -1, 1], [0, 2, -1, -1, 0], [0, 0, 2, 1, 0]]),
        ("grid: optimum 2λ2 + λ3", [[1, -2, -1, 0, 1], [0, -2, 1, 1, 0], [0, 2, 1, 0, 0]]),
        ("grid: optimum λ1 + λ2", [[-1, -1, 2, 1, 0], [-1, 0, 1, 0, 1], [1, 1, 0, 0, 0]]),
    ];
    let shared: [[i64; 5]; 7] = [
        [-1, 0, 0, 1, 0],
        [0, 1, 0, -1, 0],
        [0, -1, 0, 0, 1],
        [0, 0, 1, 0, -1],
        [0, 0, -1, 0, 0],
        [-1, 0, -1, 1, 1],
        [0, 2, 0, -1, -1],
    ];
    let point = [(5, 8), (3, 8), (2, 8), (4, 8), (3, 8)];
    blocks
        .iter()
        .map(|(name, extra)| {
            let mut lp = LpProblem::new(*name);
            let v: Vec<VarId> = ["lambda1", "lambda2", "lambda3", "alpha1", "alpha2"]
                .iter()
                .map(|n| lp.var(*n))
                .collect();
            lp.maximize(row(&v, &[0, 0, 1, 1, 1]));
            for (i, coefs) in shared.iter().enumerate() {
                lp.le(row(&v, coefs), LinExpr::zero()).named(format!("({})", i + 1));
            }
            lp.le(row(&v, &extra[0]), LinExpr::zero()).named("(8)");
            lp.le(row(&v, &extra[1]), LinExpr::zero()).named("(9)");
            lp.le(row(&v, &extra[2]), LinExpr::from(1)).named("(10)");
            GoldenCase { name, lp, expected: optimal(Rational::frac(9, 8), &point, false) }
        })
        .collect()
}
