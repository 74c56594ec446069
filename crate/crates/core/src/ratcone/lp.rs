//! Exact rational simplex method.
//!
//! Problems are in equality form `A x = b, x >= 0`. Phase one minimizes the
//! sum of artificial variables; when that minimum is positive the final
//! simplex multipliers give a Farkas certificate `y` with `y A >= 0` and
//! `y b < 0`. Entering columns follow Dantzig's rule with a fallback to Bland's rule
//! on degenerate stalls, so the method terminates.

use num_traits::{Signed, Zero};

use super::num::Num;
use super::Rational;

const BLAND_AFTER: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    /// `y` with `y^T A >= 0` componentwise and `y^T b < 0`.
    Infeasible(Vec<Rational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible(Vec<Rational>),
    Unbounded,
}

/// Dense simplex tableau kept in canonical form for the current basis, with
/// the reduced-cost row of the active objective carried along.
pub struct Simplex {
    n: usize,
    /// Row `i`: coefficients for the `n` structural columns, followed by the
    /// `m` artificial columns until phase one ends.
    rows: Vec<Vec<Num>>,
    rhs: Vec<Num>,
    basis: Vec<usize>,
    /// Sign applied to each original row so the right-hand side is nonnegative.
    row_sign: Vec<bool>,
    /// Rows found linearly dependent after phase one.
    dropped: Vec<bool>,
    /// Reduced costs `c_j - c_B B^-1 A_j`.
    obj: Vec<Num>,
    /// Minus the objective value of the current basic solution.
    obj_rhs: Num,
    feasible: bool,
    pivots: u64,
}

impl Simplex {
    /// Builds the tableau and runs phase one.
    pub fn new(a: &[Vec<Rational>], b: &[Rational]) -> (Self, Feasibility) {
        let m = a.len();
        let n = a.first().map_or(0, Vec::len);
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        for (i, (row, bi)) in a.iter().zip(b).enumerate() {
            assert_eq!(row.len(), n, "ragged constraint matrix");
            let neg = bi.is_negative();
            let mut r: Vec<Num> = row
                .iter()
                .map(|v| {
                    let v = Num::from_rational(v);
                    if neg {
                        v.neg()
                    } else {
                        v
                    }
                })
                .collect();
            r.extend((0..m).map(|j| if j == i { Num::ONE } else { Num::ZERO }));
            rows.push(r);
            rhs.push(Num::from_rational(&bi.abs()));
            row_sign.push(neg);
        }
        let mut s = Simplex {
            n,
            rows,
            rhs,
            basis: (n..n + m).collect(),
            row_sign,
            dropped: vec![false; m],
            obj: Vec::new(),
            obj_rhs: Num::ZERO,
            feasible: false,
            pivots: 0,
        };
        let verdict = s.phase_one();
        (s, verdict)
    }

    pub fn pivots(&self) -> u64 {
        self.pivots
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    fn pivot(&mut self, r: usize, col: usize) {
        self.pivots += 1;
        let inv = self.rows[r][col].recip();
        if !inv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v = v.mul(&inv);
                }
            }
            self.rhs[r] = self.rhs[r].mul(&inv);
        }
        let support: Vec<usize> = (0..self.rows[r].len())
            .filter(|&j| !self.rows[r][j].is_zero())
            .collect();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let pivot_rhs = self.rhs[r].clone();
        let eliminate = |row: &mut Vec<Num>, rhs: &mut Num| {
            let f = row[col].clone();
            if f.is_zero() {
                return;
            }
            for &j in &support {
                row[j] = row[j].sub(&f.mul(&pivot_row[j]));
            }
            *rhs = rhs.sub(&f.mul(&pivot_rhs));
        };
        for (row, rhs) in self.rows.iter_mut().zip(self.rhs.iter_mut()) {
            if !row.is_empty() {
                eliminate(row, rhs);
            }
        }
        if !self.obj.is_empty() {
            eliminate(&mut self.obj, &mut self.obj_rhs);
        }
        self.rows[r] = pivot_row;
        self.basis[r] = col;
    }

    /// Installs the reduced-cost row for `cost`.
    fn set_objective(&mut self, cost: &dyn Fn(usize) -> Num) {
        let width = self.rows.first().map_or(self.n, Vec::len);
        self.obj = (0..width).map(cost).collect();
        self.obj_rhs = Num::ZERO;
        for i in 0..self.m() {
            if self.dropped[i] {
                continue;
            }
            let cb = cost(self.basis[i]);
            if cb.is_zero() {
                continue;
            }
            for (o, a) in self.obj.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *o = o.sub(&cb.mul(a));
                }
            }
            self.obj_rhs = self.obj_rhs.sub(&cb.mul(&self.rhs[i]));
        }
    }

    /// Runs the simplex loop on the installed objective with entering
    /// columns `< cols`. Returns false when unbounded. Stops early once the
    /// objective value drops below `bound`.
    fn optimize(&mut self, cols: usize, bound: Option<&Num>) -> bool {
        // Dantzig's rule, switching to Bland's rule after a run of
        // degenerate pivots so that cycling cannot occur.
        let mut degenerate = 0u32;
        loop {
            if bound.is_some_and(|b| self.obj_rhs.neg() < *b) {
                return true;
            }
            let d = &self.obj;
            let col = if degenerate >= BLAND_AFTER {
                (0..cols).find(|&j| d[j].is_negative())
            } else {
                (0..cols)
                    .filter(|&j| d[j].is_negative())
                    .min_by(|&a, &b| d[a].cmp(&d[b]).then(a.cmp(&b)))
            };
            let Some(col) = col else {
                return true;
            };
            // Ratio test, ties broken by the smallest basic variable index.
            let mut best: Option<(usize, Num)> = None;
            for i in 0..self.m() {
                if self.dropped[i] || !self.rows[i][col].is_positive() {
                    continue;
                }
                let ratio = self.rhs[i].div(&self.rows[i][col]);
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = best else {
                return false;
            };
            if ratio.is_zero() {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, col);

        }
    }

    fn phase_one(&mut self) -> Feasibility {
        let n = self.n;
        let m = self.m();
        self.set_objective(&|j| if j >= n { Num::ONE } else { Num::ZERO });
        let finished = self.optimize(n + m, None);
        debug_assert!(finished, "phase one is bounded below by zero");
        if self.obj_rhs.is_negative() {
            // Multipliers y_i = 1 - d_{n+i}; y b = infeasibility > 0 and
            // y A <= 0, so -y is the certificate (undoing row sign flips).
            let y: Vec<Rational> = (0..m)
                .map(|i| {
                    let yi = Num::ONE.sub(&self.obj[n + i]).to_rational();
                    if self.row_sign[i] {
                        yi
                    } else {
                        -yi
                    }
                })
                .collect();
            return Feasibility::Infeasible(y);
        }
        self.obj.clear();
        // Drive remaining artificial variables out of the basis.
        for r in 0..m {
            if self.basis[r] < n {
                continue;
            }
            match (0..n).find(|&j| !self.rows[r][j].is_zero()) {
                Some(col) => self.pivot(r, col),
                None => self.dropped[r] = true,
            }
        }
        for row in &mut self.rows {
            row.truncate(n);
        }
        self.feasible = true;
        Feasibility::Feasible(self.solution())
    }

    pub fn solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.n];
        for (i, &bv) in self.basis.iter().enumerate() {
            if bv < self.n && !self.dropped[i] {
                x[bv] = self.rhs[i].to_rational();
            }
        }
        x
    }

    /// Minimizes `c x` from the current feasible basis.
    pub fn minimize(&mut self, c: &[Rational]) -> LpOutcome {
        self.minimize_below(c, None)
    }

    /// Like [`Simplex::minimize`], but settles for the first basic solution
    /// whose value drops below `bound`.
    pub fn minimize_below(&mut self, c: &[Rational], bound: Option<&Rational>) -> LpOutcome {
        assert!(self.feasible, "minimize called on an infeasible program");
        assert_eq!(c.len(), self.n);
        let cost: Vec<Num> = c.iter().map(Num::from_rational).collect();
        self.set_objective(&|j| cost[j].clone());
        let bound = bound.map(Num::from_rational);
        let finished = self.optimize(self.n, bound.as_ref());
        self.obj.clear();
        if !finished {
            return LpOutcome::Unbounded;
        }
        let x = self.solution();
        let value = x.iter().zip(c).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { x, value }
    }
}

pub fn feasible(a: &[Vec<Rational>], b: &[Rational]) -> Feasibility {
    Simplex::new(a, b).1
}

pub fn minimize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let (mut s, verdict) = Simplex::new(a, b);
    match verdict {
        Feasibility::Infeasible(y) => LpOutcome::Infeasible(y),
        Feasibility::Feasible(_) => s.minimize(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    fn dot(a: &[Rational], b: &[Rational]) -> Rational {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn feasible_system() {
        let a = mat(&[&[1, 1], &[0, 1]]);
        let b = vec![q(2), q(1)];
        match feasible(&a, &b) {
            Feasibility::Feasible(x) => assert_eq!(x, vec![q(1), q(1)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn farkas_certificate() {
        // x1 + x2 = -1 has no nonnegative solution.
        let a = mat(&[&[1, 1]]);
        let b = vec![q(-1)];
        let Feasibility::Infeasible(y) = feasible(&a, &b) else {
            panic!()
        };
        assert!(y[0].is_positive());
        // x1 - x2 = 0, x1 + x2 = 1, x2 = 1 is infeasible too.
        let a = mat(&[&[1, -1], &[1, 1], &[0, 1]]);
        let b = vec![q(0), q(1), q(1)];
        let Feasibility::Infeasible(y) = feasible(&a, &b) else {
            panic!()
        };
        for j in 0..2 {
            let col: Vec<Rational> = a.iter().map(|r| r[j].clone()).collect();
            assert!(!dot(&y, &col).is_negative());
        }
        assert!(dot(&y, &b).is_negative());
    }

    #[test]
    fn optimization_and_unbounded() {
        // min -x1 s.t. x1 + x2 = 3, x1 - x3 = 1
        let a = mat(&[&[1, 1, 0], &[1, 0, -1]]);
        let b = vec![q(3), q(1)];
        match minimize(&a, &b, &[q(-1), q(0), q(0)]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(-3)),
            other => panic!("{other:?}"),
        }
        let a = mat(&[&[1, -1]]);
        assert_eq!(minimize(&a, &[q(0)], &[q(-1), q(0)]), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = mat(&[&[1, 1], &[2, 2]]);
        let b = vec![q(1), q(2)];
        match minimize(&a, &b, &[q(1), q(2)]) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, q(1));
                assert_eq!(x, vec![q(1), q(0)]);
            }
            other => panic!("{other:?}"),
        }
    }
}
