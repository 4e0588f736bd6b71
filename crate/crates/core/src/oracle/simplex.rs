//! Exact two-phase tableau simplex with Bland's rule.
//!
//! The tableau is first attempted over checked `i64` fractions; if any
//! operation overflows the solve is repeated over arbitrary-precision
//! rationals. Both paths are exact, so the answer never depends on which
//! one finished.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize objective·x` subject to the constraints and `x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        Self { objective, constraints: Vec::new() }
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }
}

/// Arithmetic the tableau needs; `None` signals overflow.
trait Field: Clone + PartialOrd + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
    fn from_rational(r: &Rational) -> Option<Self>;
    fn to_rational(&self) -> Rational;
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(r.clone())
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

type Small = Ratio<i64>;

impl Field for Small {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(Small::new(r.numer().to_i64()?, r.denom().to_i64()?))
    }
    fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

enum Outcome<T> {
    Done(T),
    Overflow,
}

macro_rules! ck {
    ($e:expr) => {
        match $e {
            Some(v) => v,
            None => return Ok(Outcome::Overflow),
        }
    };
}

struct Tableau<F> {
    /// `rows[r]` holds the coefficients followed by the right-hand side.
    rows: Vec<Vec<F>>,
    basis: Vec<usize>,
    width: usize,
}

impl<F: Field> Tableau<F> {
    fn pivot(&mut self, r: usize, c: usize) -> Option<()> {
        let p = self.rows[r][c].clone();
        if !p.is_zero() && p != F::one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v = v.div(&p)?;
                }
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.sub(&f.mul(pv)?)?;
                }
            }
        }
        self.basis[r] = c;
        Some(())
    }

    /// Reduced costs of `cost` (maximization) against the current basis.
    fn reduced(&self, cost: &[F], allowed: usize) -> Option<(Vec<F>, F)> {
        let mut red: Vec<F> = cost[..allowed].to_vec();
        let mut value = F::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, red_j) in red.iter_mut().enumerate() {
                let a = &self.rows[r][j];
                if !a.is_zero() {
                    *red_j = red_j.sub(&cb.mul(a)?)?;
                }
            }
            value = value.add(&cb.mul(&self.rows[r][self.width])?)?;
        }
        Some((red, value))
    }

    /// Runs Bland's rule over columns `< allowed`.
    fn optimize(&mut self, cost: &[F], allowed: usize) -> Result<Outcome<F>> {
        loop {
            let (red, value) = ck!(self.reduced(cost, allowed));
            let entering = (0..allowed).find(|&j| red[j].is_pos());
            let Some(c) = entering else {
                return Ok(Outcome::Done(value));
            };
            let mut best: Option<(usize, F)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][c];
                if !a.is_pos() {
                    continue;
                }
                let ratio = ck!(self.rows[r][self.width].div(a));
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Err(Error::Unbounded);
            };
            ck!(self.pivot(r, c));
        }
    }
}

fn solve_in<F: Field>(lp: &LinearProgram) -> Result<Outcome<LpSolution>> {
    let nvars = lp.objective.len();
    let m = lp.constraints.len();
    // Normalize to non-negative right-hand sides.
    let mut rows: Vec<(Vec<F>, Relation, F)> = Vec::with_capacity(m);
    for c in &lp.constraints {
        let mut coeffs: Vec<F> = Vec::with_capacity(nvars);
        for a in &c.coeffs {
            coeffs.push(ck!(F::from_rational(a)));
        }
        let mut rhs = ck!(F::from_rational(&c.rhs));
        let mut rel = c.relation;
        if rhs < F::zero() {
            coeffs = coeffs.iter().map(F::neg).collect();
            rhs = rhs.neg();
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        rows.push((coeffs, rel, rhs));
    }
    let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let artificials = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = nvars + slacks + artificials;
    let mut tab = Tableau { rows: Vec::with_capacity(m), basis: Vec::with_capacity(m), width };
    let (mut s, mut a) = (nvars, nvars + slacks);
    for (coeffs, rel, rhs) in rows {
        let mut row = coeffs;
        row.resize(width + 1, F::zero());
        row[width] = rhs;
        match rel {
            Relation::Le => {
                row[s] = F::one();
                tab.basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = F::one().neg();
                row[a] = F::one();
                tab.basis.push(a);
                s += 1;
                a += 1;
            }
            Relation::Eq => {
                row[a] = F::one();
                tab.basis.push(a);
                a += 1;
            }
        }
        tab.rows.push(row);
    }
    let first_art = nvars + slacks;
    if artificials > 0 {
        let mut cost = vec![F::zero(); width];
        for c in cost.iter_mut().skip(first_art) {
            *c = F::one().neg();
        }
        let value = match tab.optimize(&cost, width)? {
            Outcome::Done(v) => v,
            Outcome::Overflow => return Ok(Outcome::Overflow),
        };
        if !value.is_zero() {
            return Err(Error::Infeasible);
        }
        // Drive artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= first_art {
                match (0..first_art).find(|&j| !tab.rows[r][j].is_zero()) {
                    Some(j) => {
                        ck!(tab.pivot(r, j));
                        r += 1;
                    }
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }
    let mut cost = vec![F::zero(); width];
    for (j, c) in lp.objective.iter().enumerate() {
        cost[j] = ck!(F::from_rational(c));
    }
    let value = match tab.optimize(&cost, first_art)? {
        Outcome::Done(v) => v,
        Outcome::Overflow => return Ok(Outcome::Overflow),
    };
    let mut x = vec![<Rational as Zero>::zero(); nvars];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < nvars {
            x[b] = tab.rows[r][width].to_rational();
        }
    }
    Ok(Outcome::Done(LpSolution { value: value.to_rational(), x }))
}

/// Solves the program exactly. Deterministic: Bland's rule picks the
/// lowest-index improving column and breaks ratio ties by lowest basic
/// variable, which also rules out cycling on degenerate programs.
pub fn simplex_solve(lp: &LinearProgram) -> Result<LpSolution> {
    match solve_in::<Small>(lp)? {
        Outcome::Done(sol) => Ok(sol),
        Outcome::Overflow => match solve_in::<Rational>(lp)? {
            Outcome::Done(sol) => Ok(sol),
            Outcome::Overflow => unreachable!("big rationals never overflow"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn single_bound() {
        let mut lp = LinearProgram::new(vec![int(1)]);
        lp.push(vec![int(1)], Relation::Le, rat(1, 2));
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.value, rat(1, 2));
        assert_eq!(sol.x, vec![rat(1, 2)]);
    }

    #[test]
    fn textbook_program() {
        // max 2a + 3b s.t. 2a + b <= 18, 6a + 5b <= 60, 2a + 5b <= 40
        let mut lp = LinearProgram::new(vec![int(2), int(3)]);
        lp.push(vec![int(2), int(1)], Relation::Le, int(18));
        lp.push(vec![int(6), int(5)], Relation::Le, int(60));
        lp.push(vec![int(2), int(5)], Relation::Le, int(40));
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.value, int(28));
        assert_eq!(sol.x, vec![int(5), int(6)]);
    }

    #[test]
    fn equalities_and_infeasibility() {
        let mut lp = LinearProgram::new(vec![int(1), int(1)]);
        lp.push(vec![int(1), int(1)], Relation::Eq, int(1));
        lp.push(vec![int(1), int(0)], Relation::Ge, rat(1, 3));
        assert_eq!(simplex_solve(&lp).unwrap().value, int(1));
        lp.push(vec![int(1), int(0)], Relation::Ge, int(2));
        assert_eq!(simplex_solve(&lp), Err(Error::Infeasible));
    }

    #[test]
    fn unbounded() {
        let mut lp = LinearProgram::new(vec![int(1), int(0)]);
        lp.push(vec![int(0), int(1)], Relation::Le, int(1));
        assert_eq!(simplex_solve(&lp), Err(Error::Unbounded));
    }

    #[test]
    fn degenerate_redundant_rows_terminate() {
        // Repeated and scaled copies of the same constraint.
        let mut lp = LinearProgram::new(vec![int(1), int(1), int(1)]);
        for scale in 1..5 {
            lp.push(vec![int(scale), int(scale), int(0)], Relation::Le, int(0));
            lp.push(vec![int(0), int(1), int(1)], Relation::Eq, int(1));
        }
        lp.push(vec![int(1), int(1), int(1)], Relation::Le, int(1));
        assert_eq!(simplex_solve(&lp).unwrap().value, int(1));
    }

    #[test]
    fn overflow_falls_back_to_big_rationals() {
        let huge = Rational::new(BigInt::from(i64::MAX), BigInt::from(3));
        let mut lp = LinearProgram::new(vec![int(3)]);
        lp.push(vec![int(1)], Relation::Le, huge.clone());
        assert_eq!(simplex_solve(&lp).unwrap().value, huge * int(3));
    }
}
