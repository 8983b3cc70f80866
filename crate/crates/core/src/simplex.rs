//! Phase-one revised simplex for `A x = 1, x >= 0` where every column of `A`
//! is a 0/1 incidence vector.
//!
//! Bland's rule is used for both the entering and the leaving variable, so the
//! method terminates under degeneracy. The arithmetic is generic: exact
//! rationals give an exact basic feasible solution, `f64` a tolerant one.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub trait Scalar: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn less(&self, o: &Self) -> bool;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn less(&self, o: &Self) -> bool {
        self < o
    }
}

/// Comparison tolerance for the floating-point mode.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        self.abs() <= FLOAT_TOLERANCE
    }
    fn is_negative(&self) -> bool {
        *self < -FLOAT_TOLERANCE
    }
    fn is_positive(&self) -> bool {
        *self > FLOAT_TOLERANCE
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn less(&self, o: &Self) -> bool {
        *self < *o - FLOAT_TOLERANCE
    }
}

#[cfg(test)]
pub(crate) fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(num_bigint::BigInt::from(n), num_bigint::BigInt::from(d))
}

/// Outcome of a phase-one solve.
pub enum PhaseOne<S> {
    /// A basic feasible solution, one value per column.
    Feasible(Vec<S>),
    /// Minimum total artificial value is positive.
    Infeasible,
}

/// Solves `sum_{j : i in cols[j]} x_j = 1` for every row `i < rows`, `x >= 0`.
pub fn solve_unit_cover<S: Scalar>(rows: usize, cols: &[Vec<usize>]) -> PhaseOne<S> {
    let ncol = cols.len();
    // Variables 0..ncol are structural, ncol..ncol+rows artificial.
    let mut basis: Vec<usize> = (ncol..ncol + rows).collect();
    let mut binv: Vec<Vec<S>> = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect();
    let mut xb: Vec<S> = vec![S::one(); rows];
    let mut is_basic = vec![false; ncol + rows];
    for &b in &basis {
        is_basic[b] = true;
    }

    loop {
        // Duals: y = c_B^T B^{-1}, with c = 1 on artificials.
        let mut y = vec![S::zero(); rows];
        for (row, &b) in basis.iter().enumerate() {
            if b >= ncol {
                for (yi, bij) in y.iter_mut().zip(&binv[row]) {
                    if !bij.is_zero() {
                        *yi = yi.add(bij);
                    }
                }
            }
        }
        let entering = (0..ncol + rows).find(|&j| {
            if is_basic[j] {
                return false;
            }
            let d = if j < ncol {
                cols[j].iter().fold(S::zero(), |acc, &i| acc.sub(&y[i]))
            } else {
                S::one().sub(&y[j - ncol])
            };
            d.is_negative()
        });
        let Some(j) = entering else { break };

        // u = B^{-1} A_j
        let u: Vec<S> = (0..rows)
            .map(|i| {
                if j < ncol {
                    cols[j].iter().fold(S::zero(), |acc, &c| acc.add(&binv[i][c]))
                } else {
                    binv[i][j - ncol].clone()
                }
            })
            .collect();
        let mut leave: Option<(usize, S)> = None;
        for i in 0..rows {
            if !u[i].is_positive() {
                continue;
            }
            let ratio = xb[i].div(&u[i]);
            let better = match &leave {
                None => true,
                Some((l, best)) => ratio.less(best) || (!best.less(&ratio) && basis[i] < basis[*l]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below, so some u_i is positive.
        let (l, _) = leave.expect("bounded phase-one objective");

        let pivot = u[l].clone();
        let prow: Vec<S> = binv[l].iter().map(|v| v.div(&pivot)).collect();
        let px = xb[l].div(&pivot);
        for i in 0..rows {
            if i == l || u[i].is_zero() {
                continue;
            }
            let f = u[i].clone();
            for (bij, pj) in binv[i].iter_mut().zip(&prow) {
                if !pj.is_zero() {
                    *bij = bij.sub(&f.mul(pj));
                }
            }
            xb[i] = xb[i].sub(&f.mul(&px));
        }
        binv[l] = prow;
        xb[l] = px;
        is_basic[basis[l]] = false;
        is_basic[j] = true;
        basis[l] = j;
    }

    let infeasible = basis
        .iter()
        .zip(&xb)
        .any(|(&b, x)| b >= ncol && x.is_positive());
    if infeasible {
        return PhaseOne::Infeasible;
    }
    let mut x = vec![S::zero(); ncol];
    for (&b, v) in basis.iter().zip(xb) {
        if b < ncol {
            x[b] = v;
        }
    }
    PhaseOne::Feasible(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check<S: Scalar>(rows: usize, cols: &[Vec<usize>], x: &[S]) -> bool {
        (0..rows).all(|i| {
            let s = cols
                .iter()
                .zip(x)
                .filter(|(c, _)| c.contains(&i))
                .fold(S::zero(), |acc, (_, v)| acc.add(v));
            s.sub(&S::one()).is_zero()
        }) && x.iter().all(|v| !v.is_negative())
    }

    #[test]
    fn feasible_square() {
        // 4 vertices in 2x2 classes, the 4 transversals of the empty graph.
        let cols = vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]];
        let PhaseOne::Feasible(x) = solve_unit_cover::<BigRational>(4, &cols) else {
            panic!("feasible")
        };
        assert!(check(4, &cols, &x));
        let PhaseOne::Feasible(xf) = solve_unit_cover::<f64>(4, &cols) else {
            panic!("feasible")
        };
        assert!(check(4, &cols, &xf));
    }

    #[test]
    fn infeasible_when_row_uncovered() {
        let cols = vec![vec![0, 1]];
        assert!(matches!(solve_unit_cover::<BigRational>(3, &cols), PhaseOne::Infeasible));
    }

    #[test]
    fn infeasible_odd_cycle_cover() {
        // Rows 0,1,2 with columns {0,1},{1,2},{0,2}: x = 1/2 each is feasible.
        let cols = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        let PhaseOne::Feasible(x) = solve_unit_cover::<BigRational>(3, &cols) else {
            panic!("feasible")
        };
        assert_eq!(x, vec![rational(1, 2); 3]);
        // Adding a row covered only together with row 0 breaks it.
        let cols = vec![vec![0, 1, 3], vec![1, 2], vec![0, 2]];
        assert!(matches!(solve_unit_cover::<BigRational>(4, &cols), PhaseOne::Infeasible));
    }
}
