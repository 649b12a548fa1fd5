//! Dense two-phase tableau simplex over exact rationals.
//!
//! Rows with a negative right-hand side are negated (`≤` becomes `≥`) so that
//! every row starts with `b ≥ 0`. `≤` rows get a slack, `≥` rows a surplus and
//! an artificial, `=` rows an artificial. The columns that start as the
//! identity keep `B⁻¹` in the tableau, which is where dual and Farkas
//! multipliers are read from.

use crate::rational::Rational;

use super::{LpProblem, LpSolution, LpStatus, Relation};

struct Tableau {
    /// `rows × (cols + 1)`; the last column is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

enum Outcome {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.t[r][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip().expect("pivot element is nonzero");
        for v in &mut self.t[row] {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        let pivot_row = self.t[row].clone();
        for (r, line) in self.t.iter_mut().enumerate() {
            if r == row || line[col].is_zero() {
                continue;
            }
            let f = line[col].clone();
            for (v, p) in line.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// `c_B B⁻¹ A_j − c_j` for column `j`.
    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut d = -cost[j].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.t[r][j].is_zero() {
                d += &cost[b] * &self.t[r][j];
            }
        }
        d
    }

    fn value(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| !cost[b].is_zero())
            .map(|(r, &b)| &cost[b] * self.rhs(r))
            .sum()
    }

    /// `c_B B⁻¹`, one entry per row, using the initial identity columns.
    fn multipliers(&self, cost: &[Rational], identity: &[usize]) -> Vec<Rational> {
        identity
            .iter()
            .map(|&col| {
                self.basis
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| !cost[b].is_zero())
                    .map(|(r, &b)| &cost[b] * &self.t[r][col])
                    .sum()
            })
            .collect()
    }

    /// Maximizes `cost·x` over columns satisfying `allowed`, Bland's rule.
    fn run(&mut self, cost: &[Rational], allowed: &dyn Fn(usize) -> bool) -> Outcome {
        loop {
            let entering = (0..self.cols)
                .filter(|&j| allowed(j) && !self.basis.contains(&j))
                .find(|&j| self.reduced_cost(cost, j).is_negative());
            let Some(e) = entering else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.t.len() {
                let a = &self.t[r][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r).checked_div(a).expect("pivot column entry is positive");
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, e),
                None => return Outcome::Unbounded(e),
            }
        }
    }
}

pub fn solve_lp(problem: &LpProblem) -> LpSolution {
    let n = problem.num_vars();
    let rows = problem.constraints.len();

    // Orient rows so b >= 0; `flipped[i]` records a negation.
    let mut flipped = vec![false; rows];
    let mut ge = vec![false; rows];
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    let mut b: Vec<Rational> = Vec::with_capacity(rows);
    for (i, c) in problem.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); n];
        for (v, coef) in c.expr.terms() {
            row[v.0] = coef.clone();
        }
        let mut rhs = c.effective_rhs();
        if rhs.is_negative() {
            flipped[i] = true;
            ge[i] = c.relation == Relation::Le;
            row = row.into_iter().map(|v| -v).collect();
            rhs = -rhs;
        }
        a.push(row);
        b.push(rhs);
    }

    // Column layout: originals, then slack/surplus, then artificials.
    let mut cols = n;
    let mut slack = vec![None; rows];
    for (i, c) in problem.constraints.iter().enumerate() {
        if c.relation == Relation::Le {
            slack[i] = Some(cols);
            cols += 1;
        }
    }
    let first_artificial = cols;
    let mut artificial = vec![None; rows];
    for (i, c) in problem.constraints.iter().enumerate() {
        if c.relation == Relation::Eq || ge[i] {
            artificial[i] = Some(cols);
            cols += 1;
        }
    }

    let mut t = vec![vec![Rational::zero(); cols + 1]; rows];
    let mut basis = Vec::with_capacity(rows);
    let mut identity = Vec::with_capacity(rows);
    for i in 0..rows {
        t[i][..n].clone_from_slice(&a[i]);
        t[i][cols] = b[i].clone();
        if let Some(s) = slack[i] {
            t[i][s] = if ge[i] { -Rational::one() } else { Rational::one() };
        }
        let id = artificial[i].or(slack[i]).expect("every row has a basic column");
        t[i][id] = Rational::one();
        basis.push(id);
        identity.push(id);
    }
    let mut tab = Tableau { t, basis, cols };
    let unflip = |ys: Vec<Rational>| -> Vec<Rational> {
        ys.into_iter().zip(&flipped).map(|(y, &f)| if f { -y } else { y }).collect()
    };

    // Phase 1: maximize −Σ artificials.
    if first_artificial < cols {
        let mut cost1 = vec![Rational::zero(); cols];
        for c in &mut cost1[first_artificial..] {
            *c = -Rational::one();
        }
        match tab.run(&cost1, &|_| true) {
            Outcome::Optimal => {}
            Outcome::Unbounded(_) => unreachable!("phase 1 is bounded by zero"),
        }
        if tab.value(&cost1).is_negative() {
            // Phase-1 optimality gives yᵀA ≥ 0 and yᵀb = value < 0 directly.
            let y = tab.multipliers(&cost1, &identity);
            return LpSolution {
                status: LpStatus::Infeasible,
                primal: Vec::new(),
                objective: None,
                dual: unflip(y),
                ray: None,
            };
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..rows {
            if tab.basis[r] >= first_artificial {
                if let Some(j) = (0..first_artificial).find(|&j| !tab.t[r][j].is_zero()) {
                    tab.pivot(r, j);
                }
            }
        }
    }

    let mut cost = vec![Rational::zero(); cols];
    for (v, c) in problem.objective.terms() {
        cost[v.0] = c.clone();
    }
    let outcome = tab.run(&cost, &|j| j < first_artificial);

    let mut x = vec![Rational::zero(); n];
    for (r, &bcol) in tab.basis.iter().enumerate() {
        if bcol < n {
            x[bcol] = tab.rhs(r).clone();
        }
    }
    match outcome {
        Outcome::Optimal => {
            let objective = tab.value(&cost) + problem.objective.constant();
            LpSolution {
                status: LpStatus::Optimal,
                primal: x,
                objective: Some(objective),
                dual: unflip(tab.multipliers(&cost, &identity)),
                ray: None,
            }
        }
        Outcome::Unbounded(e) => {
            let mut d = vec![Rational::zero(); n];
            if e < n {
                d[e] = Rational::one();
            }
            for (r, &bcol) in tab.basis.iter().enumerate() {
                if bcol < n {
                    d[bcol] = -tab.t[r][e].clone();
                }
            }
            LpSolution {
                status: LpStatus::Unbounded,
                primal: x,
                objective: None,
                dual: Vec::new(),
                ray: Some(d),
            }
        }
    }
}
