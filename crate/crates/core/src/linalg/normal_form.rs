use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, LinalgError};

/// `u * m * v == d` with `d` in Smith form and `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries of `d`, including trailing zeros up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (r, c) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = min_abs_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            clear_column(&mut d, &mut u, t);
            clear_row(&mut d, &mut v, t);
            if (t + 1..r).all(|i| d[(i, t)].is_zero()) {
                // Pivot must divide the remaining block.
                let bad = (t + 1..r).find(|&i| {
                    (t + 1..c).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)]))
                });
                match bad {
                    Some(i) => {
                        d.add_row_multiple(t, i, &BigInt::one());
                        u.add_row_multiple(t, i, &BigInt::one());
                    }
                    None => break,
                }
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Smith { u, d, v }
}

fn min_abs_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn clear_column(d: &mut IntMatrix, u: &mut IntMatrix, t: usize) {
    for i in t + 1..d.rows() {
        let b = d[(i, t)].clone();
        if b.is_zero() {
            continue;
        }
        let a = d[(t, t)].clone();
        if b.is_multiple_of(&a) {
            let q = -(&b / &a);
            d.add_row_multiple(i, t, &q);
            u.add_row_multiple(i, t, &q);
        } else {
            let eg = a.extended_gcd(&b);
            let coef = [&eg.x, &eg.y, &-(&b / &eg.gcd), &(&a / &eg.gcd)];
            d.combine_rows(t, i, coef);
            u.combine_rows(t, i, coef);
        }
    }
}

fn clear_row(d: &mut IntMatrix, v: &mut IntMatrix, t: usize) {
    for j in t + 1..d.cols() {
        let b = d[(t, j)].clone();
        if b.is_zero() {
            continue;
        }
        let a = d[(t, t)].clone();
        if b.is_multiple_of(&a) {
            let q = -(&b / &a);
            d.add_col_multiple(j, t, &q);
            v.add_col_multiple(j, t, &q);
        } else {
            let eg = a.extended_gcd(&b);
            let coef = [&eg.x, &eg.y, &-(&b / &eg.gcd), &(&a / &eg.gcd)];
            d.combine_cols(t, j, coef);
            v.combine_cols(t, j, coef);
        }
    }
}

/// Row-style Hermite normal form: returns `(w, h)` with `w * m == h`, `w` unimodular,
/// `h` in echelon form with positive pivots and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (r, c) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut w = IntMatrix::identity(r);
    let mut prow = 0;
    for col in 0..c {
        if prow == r {
            break;
        }
        for i in prow + 1..r {
            let b = h[(i, col)].clone();
            if b.is_zero() {
                continue;
            }
            let a = h[(prow, col)].clone();
            if a.is_zero() {
                h.swap_rows(prow, i);
                w.swap_rows(prow, i);
                continue;
            }
            let eg = a.extended_gcd(&b);
            let coef = [&eg.x, &eg.y, &-(&b / &eg.gcd), &(&a / &eg.gcd)];
            h.combine_rows(prow, i, coef);
            w.combine_rows(prow, i, coef);
        }
        if h[(prow, col)].is_zero() {
            continue;
        }
        if h[(prow, col)].is_negative() {
            h.negate_row(prow);
            w.negate_row(prow);
        }
        let p = h[(prow, col)].clone();
        for i in 0..prow {
            let q = -h[(i, col)].div_floor(&p);
            h.add_row_multiple(i, prow, &q);
            w.add_row_multiple(i, prow, &q);
        }
        prow += 1;
    }
    (w, h)
}

/// Solves `a * x == b` over the integers using a cached Smith decomposition.
#[derive(Clone, Debug)]
pub struct IntegerSolver {
    smith: Smith,
    diag: Vec<BigInt>,
}

impl IntegerSolver {
    pub fn new(a: &IntMatrix) -> Self {
        let smith = smith_normal_form(a);
        let diag = smith.diagonal();
        IntegerSolver { smith, diag }
    }

    pub fn solve(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
        let ub = self.smith.u.mul_vec(b)?;
        let cols = self.smith.v.rows();
        let mut y = vec![BigInt::zero(); cols];
        for (i, rhs) in ub.iter().enumerate() {
            match self.diag.get(i) {
                Some(di) if !di.is_zero() => {
                    if !rhs.is_multiple_of(di) {
                        return Ok(None);
                    }
                    y[i] = rhs / di;
                }
                _ => {
                    if !rhs.is_zero() {
                        return Ok(None);
                    }
                }
            }
        }
        Ok(Some(self.smith.v.mul_vec(&y)?))
    }
}

/// Returns an integer `x` with `a * x == b`, or `None` when no integer solution exists.
pub fn integer_solve(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::Dimension { left: a.rows(), right: b.len() });
    }
    IntegerSolver::new(a).solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::big_vec;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        IntMatrix::from_rows(rows, cols).unwrap()
    }

    fn check_smith(a: &IntMatrix) -> Smith {
        let s = smith_normal_form(a);
        let prod = s.u.mul(a).unwrap().mul(&s.v).unwrap();
        assert_eq!(prod, s.d);
        assert_eq!(s.u.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(s.v.determinant().unwrap().abs(), BigInt::one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn smith_identity() {
        let s = check_smith(&IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
    }

    #[test]
    fn smith_diag_2_3() {
        let s = check_smith(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), big_vec(&[1, 6]));
    }

    #[test]
    fn smith_k4_transpose() {
        let rays = m(&[
            vec![2, 1, 1, 1],
            vec![0, -1, -1, 1],
            vec![2, 1, -1, 1],
            vec![0, -1, 1, 1],
            vec![1, 1, -1, 1],
            vec![1, -1, 1, 1],
        ]);
        let s = check_smith(&rays.transpose());
        assert_eq!(s.diagonal(), big_vec(&[1, 1, 2, 2]));
    }

    #[test]
    fn hermite_shape() {
        let a = m(&[vec![1, 1, -1, 0, -1, 0], vec![-1, 0, 0, 1, 1, -1]]);
        let (w, h) = hermite_normal_form(&a);
        assert_eq!(w.mul(&a).unwrap(), h);
        assert_eq!(h, m(&[vec![1, 0, 0, -1, -1, 1], vec![0, 1, -1, 1, 0, -1]]));
    }

    #[test]
    fn integer_solve_examples() {
        let x = integer_solve(&IntMatrix::identity(2), &big_vec(&[3, 5])).unwrap();
        assert_eq!(x, Some(big_vec(&[3, 5])));

        let rays = m(&[vec![1, 0, 0], vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]]);
        let x = integer_solve(&rays, &big_vec(&[1, 1, 1, 1])).unwrap();
        assert_eq!(x, Some(big_vec(&[1, 1, 2])));

        assert_eq!(integer_solve(&m(&[vec![2]]), &big_vec(&[1])).unwrap(), None);
    }
}
