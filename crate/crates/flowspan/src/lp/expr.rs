use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId(pub usize);

/// Sparse affine expression `Σ cᵢ xᵢ + constant`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinExpr {
    coeffs: BTreeMap<usize, Rational>,
    constant: Rational,
}

impl LinExpr {
    pub fn zero() -> Self {
        LinExpr::default()
    }

    pub fn var(v: VarId) -> Self {
        LinExpr::term(v, Rational::one())
    }

    pub fn term(v: VarId, c: Rational) -> Self {
        let mut e = LinExpr::zero();
        e.add_term(v, c);
        e
    }

    pub fn constant_expr(c: Rational) -> Self {
        LinExpr { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn without_constant(mut self) -> Self {
        self.constant = Rational::zero();
        self
    }

    pub fn add_term(&mut self, v: VarId, c: Rational) {
        let slot = self.coeffs.entry(v.0).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&v.0);
        }
    }

    pub fn coeff(&self, v: VarId) -> Rational {
        self.coeffs.get(&v.0).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarId, &Rational)> {
        self.coeffs.iter().map(|(&v, c)| (VarId(v), c))
    }

    pub fn scale(&self, c: &Rational) -> LinExpr {
        if c.is_zero() {
            return LinExpr::zero();
        }
        LinExpr {
            coeffs: self.coeffs.iter().map(|(&v, a)| (v, a * c)).collect(),
            constant: &self.constant * c,
        }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(&v, c)| c * &x[v]).sum::<Rational>() + &self.constant
    }

    /// Linear part only, ignoring the constant.
    pub fn linear_eval(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(&v, c)| c * &x[v]).sum()
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (v, c) in &self.coeffs {
            let name = names.get(*v).map(String::as_str).unwrap_or("?");
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != 1 {
                out.push_str(&format!("{mag} "));
            }
            out.push_str(name);
        }
        if !self.constant.is_zero() || out.is_empty() {
            if out.is_empty() {
                out = self.constant.to_string();
            } else {
                let sign = if self.constant.is_negative() { " - " } else { " + " };
                out.push_str(&format!("{sign}{}", self.constant.abs()));
            }
        }
        out
    }
}

impl From<VarId> for LinExpr {
    fn from(v: VarId) -> Self {
        LinExpr::var(v)
    }
}

impl From<Rational> for LinExpr {
    fn from(c: Rational) -> Self {
        LinExpr::constant_expr(c)
    }
}

impl From<i64> for LinExpr {
    fn from(c: i64) -> Self {
        LinExpr::constant_expr(Rational::from(c))
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(mut self, rhs: LinExpr) -> LinExpr {
        for (v, c) in rhs.coeffs {
            self.add_term(VarId(v), c);
        }
        self.constant += rhs.constant;
        self
    }
}

impl Add<&LinExpr> for LinExpr {
    type Output = LinExpr;
    fn add(self, rhs: &LinExpr) -> LinExpr {
        self + rhs.clone()
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(self, rhs: LinExpr) -> LinExpr {
        self + (-rhs)
    }
}

impl Neg for LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        LinExpr {
            coeffs: self.coeffs.into_iter().map(|(v, c)| (v, -c)).collect(),
            constant: -self.constant,
        }
    }
}

impl Mul<LinExpr> for i64 {
    type Output = LinExpr;
    fn mul(self, rhs: LinExpr) -> LinExpr {
        rhs.scale(&Rational::from(self))
    }
}

impl Mul<VarId> for i64 {
    type Output = LinExpr;
    fn mul(self, rhs: VarId) -> LinExpr {
        LinExpr::term(rhs, Rational::from(self))
    }
}

impl Add<VarId> for LinExpr {
    type Output = LinExpr;
    fn add(mut self, rhs: VarId) -> LinExpr {
        self.add_term(rhs, Rational::one());
        self
    }
}

impl Sub<VarId> for LinExpr {
    type Output = LinExpr;
    fn sub(mut self, rhs: VarId) -> LinExpr {
        self.add_term(rhs, -Rational::one());
        self
    }
}

impl Add for VarId {
    type Output = LinExpr;
    fn add(self, rhs: VarId) -> LinExpr {
        LinExpr::var(self) + rhs
    }
}

impl Add<LinExpr> for VarId {
    type Output = LinExpr;
    fn add(self, rhs: LinExpr) -> LinExpr {
        LinExpr::var(self) + rhs
    }
}

impl Sub for VarId {
    type Output = LinExpr;
    fn sub(self, rhs: VarId) -> LinExpr {
        LinExpr::var(self) - rhs
    }
}

impl Sub<LinExpr> for VarId {
    type Output = LinExpr;
    fn sub(self, rhs: LinExpr) -> LinExpr {
        LinExpr::var(self) - rhs
    }
}
