//! Exact two-phase simplex with Bland's anti-cycling rule.
//!
//! Variables are free; constraints are equalities and `a·x >= b` inequalities.

use crate::arith::{Rat, RatVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: RatVec,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: RatVec, rhs: Rat) -> Self {
        Constraint { coeffs, rhs }
    }

    pub fn slack(&self, x: &RatVec) -> Rat {
        self.coeffs.dot(x) - &self.rhs
    }
}

#[derive(Debug, Clone, Default)]
pub struct LinearSystem {
    pub dim: usize,
    pub equalities: Vec<Constraint>,
    pub inequalities: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(dim: usize) -> Self {
        LinearSystem { dim, equalities: Vec::new(), inequalities: Vec::new() }
    }

    pub fn eq(&mut self, coeffs: RatVec, rhs: Rat) -> &mut Self {
        debug_assert_eq!(coeffs.len(), self.dim);
        self.equalities.push(Constraint::new(coeffs, rhs));
        self
    }

    pub fn ge(&mut self, coeffs: RatVec, rhs: Rat) -> &mut Self {
        debug_assert_eq!(coeffs.len(), self.dim);
        self.inequalities.push(Constraint::new(coeffs, rhs));
        self
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        self.equalities.iter().all(|c| c.slack(x).is_zero())
            && self.inequalities.iter().all(|c| !c.slack(x).is_negative())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: RatVec },
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    obj: Vec<Rat>,
    value: Rat,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip().expect("pivot is nonzero");
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &(&f * p);
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (x, p) in self.obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &(&f * p);
                }
            }
            self.value += &(&f * &prow[self.width]);
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule on the columns `< allowed`; `false` when unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn set_objective(&mut self, cost: &[Rat]) {
        let mut obj: Vec<Rat> = cost.to_vec();
        obj.push(Rat::zero());
        let mut value = Rat::zero();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (o, x) in obj.iter_mut().zip(row) {
                *o -= &(cb * x);
            }
            value += &(cb * &row[self.width]);
        }
        obj.truncate(self.width);
        obj.push(Rat::zero());
        self.obj = obj;
        self.value = value;
    }
}

/// Optimizes `objective · x` over the system.
pub fn lp_extremize(sys: &LinearSystem, objective: &RatVec, sense: Sense) -> LpOutcome {
    let n = sys.dim;
    let k = sys.inequalities.len();
    let m = sys.equalities.len() + k;
    let art0 = 2 * n + k;
    let width = art0 + m;
    let mut rows = Vec::with_capacity(m);
    let all = sys.equalities.iter().map(|c| (c, false)).chain(sys.inequalities.iter().map(|c| (c, true)));
    let mut slack_idx = 0;
    for (i, (c, is_ineq)) in all.enumerate() {
        let mut row = vec![Rat::zero(); width + 1];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[n + j] = -a;
        }
        if is_ineq {
            row[2 * n + slack_idx] = -Rat::one();
            slack_idx += 1;
        }
        row[width] = c.rhs.clone();
        if c.rhs.is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        row[art0 + i] = Rat::one();
        rows.push(row);
    }
    let mut tab = Tableau {
        rows,
        obj: Vec::new(),
        value: Rat::zero(),
        basis: (art0..width).collect(),
        width,
    };
    let mut phase1 = vec![Rat::zero(); width];
    for x in phase1.iter_mut().skip(art0) {
        *x = -Rat::one();
    }
    tab.set_objective(&phase1);
    tab.optimize(width);
    if tab.value.is_negative() {
        return LpOutcome::Infeasible;
    }
    for r in 0..m {
        if tab.basis[r] < art0 {
            continue;
        }
        if let Some(c) = (0..art0).find(|&j| !tab.rows[r][j].is_zero()) {
            tab.pivot(r, c);
        }
    }
    let mut cost = vec![Rat::zero(); width];
    for (j, a) in objective.iter().enumerate() {
        let a = match sense {
            Sense::Maximize => a.clone(),
            Sense::Minimize => -a,
        };
        cost[n + j] = -&a;
        cost[j] = a;
    }
    tab.set_objective(&cost);
    if !tab.optimize(art0) {
        return LpOutcome::Unbounded;
    }
    let mut raw = vec![Rat::zero(); width];
    for (i, &b) in tab.basis.iter().enumerate() {
        raw[b] = tab.rows[i][width].clone();
    }
    let point: RatVec = (0..n).map(|j| &raw[j] - &raw[n + j]).collect();
    let value = objective.dot(&point);
    debug_assert!(sys.contains(&point));
    LpOutcome::Optimal { value, point }
}

pub fn feasible_point(sys: &LinearSystem) -> Option<RatVec> {
    match lp_extremize(sys, &RatVec::zeros(sys.dim), Sense::Maximize) {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    }
}

/// A point satisfying `eqs` with equality, `strict` strictly and `weak` weakly.
///
/// Maximizes a shared slack `t <= 1` added to every strict row.
pub fn strict_feasible(
    dim: usize,
    eqs: &[Constraint],
    strict: &[Constraint],
    weak: &[Constraint],
) -> Option<RatVec> {
    let lift = |c: &Constraint, t: i64| {
        let mut v = c.coeffs.0.clone();
        v.push(Rat::from_int(t));
        RatVec(v)
    };
    let mut sys = LinearSystem::new(dim + 1);
    for c in eqs {
        sys.eq(lift(c, 0), c.rhs.clone());
    }
    for c in strict {
        sys.ge(lift(c, -1), c.rhs.clone());
    }
    for c in weak {
        sys.ge(lift(c, 0), c.rhs.clone());
    }
    let mut cap = RatVec::zeros(dim + 1);
    cap[dim] = -Rat::one();
    sys.ge(cap.clone(), -Rat::one());
    let objective = cap.neg();
    match lp_extremize(&sys, &objective, Sense::Maximize) {
        LpOutcome::Optimal { value, mut point } => {
            if strict.is_empty() || value.is_positive() {
                point.0.pop();
                Some(point)
            } else {
                None
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[i64], b: i64) -> Constraint {
        Constraint::new(RatVec::from_ints(v), Rat::from_int(b))
    }

    #[test]
    fn box_optimum() {
        let mut sys = LinearSystem::new(2);
        sys.ge(RatVec::from_ints(&[1, 0]), Rat::zero())
            .ge(RatVec::from_ints(&[0, 1]), Rat::zero())
            .ge(RatVec::from_ints(&[-1, -1]), Rat::from_int(-3));
        let out = lp_extremize(&sys, &RatVec::from_ints(&[2, 1]), Sense::Maximize);
        assert_eq!(out.value(), Some(&Rat::from_int(6)));
        let out = lp_extremize(&sys, &RatVec::from_ints(&[2, 1]), Sense::Minimize);
        assert_eq!(out.value(), Some(&Rat::zero()));
    }

    #[test]
    fn unbounded_and_infeasible() {
        let mut sys = LinearSystem::new(1);
        sys.ge(RatVec::from_ints(&[1]), Rat::zero());
        assert_eq!(lp_extremize(&sys, &RatVec::from_ints(&[1]), Sense::Maximize), LpOutcome::Unbounded);
        sys.ge(RatVec::from_ints(&[-1]), Rat::one());
        assert_eq!(lp_extremize(&sys, &RatVec::from_ints(&[1]), Sense::Maximize), LpOutcome::Infeasible);
    }

    #[test]
    fn redundant_equalities() {
        let mut sys = LinearSystem::new(2);
        sys.eq(RatVec::from_ints(&[1, 1]), Rat::one())
            .eq(RatVec::from_ints(&[2, 2]), Rat::from_int(2))
            .ge(RatVec::from_ints(&[1, 0]), Rat::zero())
            .ge(RatVec::from_ints(&[0, 1]), Rat::zero());
        let out = lp_extremize(&sys, &RatVec::from_ints(&[1, 0]), Sense::Maximize);
        assert_eq!(out.value(), Some(&Rat::one()));
    }

    #[test]
    fn strict_interval() {
        assert!(strict_feasible(1, &[], &[c(&[1], 0), c(&[-1], -1)], &[]).is_some());
        assert!(strict_feasible(1, &[], &[c(&[1], 0), c(&[-1], 0)], &[]).is_none());
        assert!(strict_feasible(1, &[], &[c(&[1], 0)], &[c(&[-1], 0)]).is_none());
        assert_eq!(strict_feasible(1, &[c(&[1], 0)], &[], &[c(&[-1], 0)]), Some(RatVec::from_ints(&[0])));
    }
}
