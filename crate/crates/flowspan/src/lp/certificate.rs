//! Independent checks of solver certificates in exact arithmetic.

use crate::rational::Rational;

use super::{LpProblem, LpSolution, LpStatus, Relation};

pub fn verify_certificate(problem: &LpProblem, solution: &LpSolution) -> bool {
    check_certificate(problem, solution).is_ok()
}

/// Like [`verify_certificate`] but says which condition failed.
pub fn check_certificate(problem: &LpProblem, solution: &LpSolution) -> Result<(), String> {
    problem.validate().map_err(|e| e.to_string())?;
    match solution.status {
        LpStatus::Optimal => check_optimal(problem, solution),
        LpStatus::Infeasible => check_farkas(problem, &solution.dual),
        LpStatus::Unbounded => {
            let ray = solution.ray.as_ref().ok_or("unbounded verdict without a ray")?;
            check_feasible(problem, &solution.primal)?;
            check_ray(problem, ray)
        }
    }
}

fn check_feasible(p: &LpProblem, x: &[Rational]) -> Result<(), String> {
    if x.len() != p.num_vars() {
        return Err(format!("point has {} entries, expected {}", x.len(), p.num_vars()));
    }
    if let Some(j) = x.iter().position(Rational::is_negative) {
        return Err(format!("variable {} is negative", p.variables[j]));
    }
    for (i, c) in p.constraints.iter().enumerate() {
        let lhs = c.expr.eval(x);
        let ok = match c.relation {
            Relation::Le => lhs <= c.rhs,
            Relation::Eq => lhs == c.rhs,
        };
        if !ok {
            return Err(format!("constraint {i} violated: {lhs} vs {}", c.rhs));
        }
    }
    Ok(())
}

/// `Σ_i y_i a_ij` for every variable `j`.
fn combine(p: &LpProblem, y: &[Rational]) -> Vec<Rational> {
    let mut acc = vec![Rational::zero(); p.num_vars()];
    for (c, yi) in p.constraints.iter().zip(y) {
        if yi.is_zero() {
            continue;
        }
        for (v, a) in c.expr.terms() {
            acc[v.0] += yi * a;
        }
    }
    acc
}

fn check_multiplier_signs(p: &LpProblem, y: &[Rational]) -> Result<(), String> {
    if y.len() != p.constraints.len() {
        return Err(format!("{} multipliers for {} constraints", y.len(), p.constraints.len()));
    }
    for (i, (c, yi)) in p.constraints.iter().zip(y).enumerate() {
        if c.relation == Relation::Le && yi.is_negative() {
            return Err(format!("multiplier {i} of an inequality is negative"));
        }
    }
    Ok(())
}

fn check_optimal(p: &LpProblem, s: &LpSolution) -> Result<(), String> {
    let value = s.objective.as_ref().ok_or("optimal verdict without a value")?;
    check_feasible(p, &s.primal)?;
    check_multiplier_signs(p, &s.dual)?;
    let primal_value = p.objective.eval(&s.primal);
    if &primal_value != value {
        return Err(format!("primal value {primal_value} differs from reported {value}"));
    }
    let ya = combine(p, &s.dual);
    for (j, yaj) in ya.iter().enumerate() {
        let cj = p.objective.coeff(super::VarId(j));
        if *yaj < cj {
            return Err(format!("dual constraint for {} violated", p.variables[j]));
        }
    }
    let dual_value: Rational = p
        .constraints
        .iter()
        .zip(&s.dual)
        .map(|(c, y)| y * &c.effective_rhs())
        .sum::<Rational>()
        + p.objective.constant();
    if &dual_value != value {
        return Err(format!("dual value {dual_value} differs from primal {value}"));
    }
    Ok(())
}

fn check_farkas(p: &LpProblem, y: &[Rational]) -> Result<(), String> {
    check_multiplier_signs(p, y)?;
    if combine(p, y).iter().any(Rational::is_negative) {
        return Err("Farkas combination has a negative coefficient".into());
    }
    let yb: Rational = p.constraints.iter().zip(y).map(|(c, yi)| yi * &c.effective_rhs()).sum();
    if !yb.is_negative() {
        return Err(format!("Farkas right-hand side {yb} is not negative"));
    }
    Ok(())
}

fn check_ray(p: &LpProblem, d: &[Rational]) -> Result<(), String> {
    if d.len() != p.num_vars() || d.iter().any(Rational::is_negative) {
        return Err("ray must be nonnegative with one entry per variable".into());
    }
    for (i, c) in p.constraints.iter().enumerate() {
        let lhs = c.expr.linear_eval(d);
        let ok = match c.relation {
            Relation::Le => !lhs.is_positive(),
            Relation::Eq => lhs.is_zero(),
        };
        if !ok {
            return Err(format!("ray leaves constraint {i}"));
        }
    }
    let gain = p.objective.linear_eval(d);
    if !gain.is_positive() {
        return Err("ray does not improve the objective".into());
    }
    Ok(())
}
