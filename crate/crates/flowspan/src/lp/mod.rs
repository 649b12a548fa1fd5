//! Exact rational linear programming.
//!
//! Problems are `max objective` over nonnegative variables subject to `≤` and
//! `=` rows. [`solve_lp`] runs a dense two-phase simplex with Bland's rule and
//! returns a certificate for its verdict, which [`verify_certificate`] checks
//! without trusting the solver:
//!
//! - optimal: a primal point and dual multipliers with equal objectives;
//! - infeasible: Farkas multipliers `y` with `yᵀA ≥ 0` and `yᵀb < 0`;
//! - unbounded: a feasible point plus an improving feasible ray.

mod certificate;
mod expr;
mod simplex;

pub use certificate::{check_certificate, verify_certificate};
pub use expr::{LinExpr, VarId};
pub use simplex::solve_lp;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

/// `expr (≤ | =) rhs`; any constant inside `expr` counts on the left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub expr: LinExpr,
    pub relation: Relation,
    pub rhs: Rational,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
}

impl Constraint {
    /// Right-hand side with the expression's constant moved across.
    pub fn effective_rhs(&self) -> Rational {
        &self.rhs - self.expr.constant()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpProblem {
    /// Which case this problem encodes.
    pub label: String,
    pub variables: Vec<String>,
    /// Maximized.
    pub objective: LinExpr,
    pub constraints: Vec<Constraint>,
}

impl LpProblem {
    pub fn new(label: impl Into<String>) -> Self {
        LpProblem {
            label: label.into(),
            variables: Vec::new(),
            objective: LinExpr::zero(),
            constraints: Vec::new(),
        }
    }

    /// Declares a variable (implicitly `≥ 0`).
    pub fn var(&mut self, name: impl Into<String>) -> VarId {
        self.variables.push(name.into());
        VarId(self.variables.len() - 1)
    }

    pub fn maximize(&mut self, objective: LinExpr) {
        self.objective = objective;
    }

    /// `lhs ≤ rhs`.
    pub fn le(&mut self, lhs: LinExpr, rhs: LinExpr) -> &mut Self {
        self.push(lhs - rhs, Relation::Le, String::new())
    }

    /// `lhs ≥ rhs`, stored as `rhs − lhs ≤ 0`.
    pub fn ge(&mut self, lhs: LinExpr, rhs: LinExpr) -> &mut Self {
        self.push(rhs - lhs, Relation::Le, String::new())
    }

    /// `lhs = rhs`.
    pub fn equals(&mut self, lhs: LinExpr, rhs: LinExpr) -> &mut Self {
        self.push(lhs - rhs, Relation::Eq, String::new())
    }

    /// Labels the most recently added constraint.
    pub fn named(&mut self, label: impl Into<String>) -> &mut Self {
        if let Some(c) = self.constraints.last_mut() {
            c.label = label.into();
        }
        self
    }

    fn push(&mut self, diff: LinExpr, relation: Relation, label: String) -> &mut Self {
        let rhs = -diff.constant();
        let expr = diff.without_constant();
        self.constraints.push(Constraint { expr, relation, rhs, label });
        self
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.variables.is_empty() {
            return Err(Error::InvalidInput(format!("LP `{}` declares no variables", self.label)));
        }
        let n = self.num_vars();
        let bad = |e: &LinExpr| e.terms().any(|(v, _)| v.0 >= n);
        if bad(&self.objective) || self.constraints.iter().any(|c| bad(&c.expr)) {
            return Err(Error::InvalidInput(format!("LP `{}` references an undeclared variable", self.label)));
        }
        Ok(())
    }

    /// Evaluates an expression at a point given per variable.
    pub fn eval(&self, e: &LinExpr, x: &[Rational]) -> Rational {
        e.eval(x)
    }

    /// Human-readable rendering, one row per line.
    pub fn render(&self) -> String {
        let mut out = format!("max {}\n", self.objective.render(&self.variables));
        for c in &self.constraints {
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Eq => "=",
            };
            out.push_str(&format!("  {} {rel} {}", c.expr.render(&self.variables), c.rhs));
            if !c.label.is_empty() {
                out.push_str(&format!("   ({})", c.label));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point, or a feasible point when unbounded; empty if infeasible.
    pub primal: Vec<Rational>,
    /// Optimal value; `None` unless optimal.
    pub objective: Option<Rational>,
    /// One multiplier per constraint: dual optimum when optimal, Farkas
    /// multipliers when infeasible, empty when unbounded.
    pub dual: Vec<Rational>,
    /// Improving ray when unbounded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray: Option<Vec<Rational>>,
}
