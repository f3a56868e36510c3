//! Exact dense linear algebra over the rationals and over `Q[y]`.

use num_traits::{Signed, Zero};

use crate::poly::UniPoly;
use crate::rational::Rational;

/// Ring with exact division, enough for fraction-free elimination.
pub trait ExactRing: Clone {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn is_ring_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / other`, where the division is known to be exact.
    fn exact_div(&self, other: &Self) -> Self;
}

impl ExactRing for Rational {
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        num_traits::One::one()
    }
    fn is_ring_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Self {
        self / other
    }
}

impl ExactRing for UniPoly {
    fn ring_zero() -> Self {
        UniPoly::zero()
    }
    fn ring_one() -> Self {
        UniPoly::one()
    }
    fn is_ring_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Self {
        UniPoly::exact_div(self, other)
    }
}

/// Determinant by Bareiss fraction-free elimination with row pivoting.
/// Every intermediate entry is a minor of the input, so entries stay
/// polynomial when the input is polynomial.
pub fn determinant<R: ExactRing>(matrix: &[Vec<R>]) -> R {
    let n = matrix.len();
    if n == 0 {
        return R::ring_one();
    }
    let mut m: Vec<Vec<R>> = matrix.to_vec();
    let mut prev = R::ring_one();
    let mut negate = false;
    for k in 0..n - 1 {
        if m[k][k].is_ring_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_ring_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return R::ring_zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.exact_div(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

pub fn submatrix<R: Clone>(matrix: &[Vec<R>], rows: &[usize]) -> Vec<Vec<R>> {
    rows.iter()
        .map(|&i| rows.iter().map(|&j| matrix[i][j].clone()).collect())
        .collect()
}

/// All nonempty subsets of `0..n` as ascending index lists, in lexicographic
/// order.
pub fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u64..(1u64 << n))
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

pub fn quadratic_form(matrix: &[Vec<Rational>], c: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (i, row) in matrix.iter().enumerate() {
        if c[i].is_zero() {
            continue;
        }
        for (j, a) in row.iter().enumerate() {
            if !c[j].is_zero() && !a.is_zero() {
                acc += &c[i] * a * &c[j];
            }
        }
    }
    acc
}

fn unit(n: usize, k: usize) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); n];
    e[k] = num_traits::One::one();
    e
}

/// A vector `c` with `c^T A c < 0` for a symmetric rational matrix, or
/// `None` when `A` is positive semidefinite.
///
/// Symmetric congruence elimination: a negative diagonal entry gives a unit
/// vector; a positive one is used as pivot and the search continues on the
/// Schur complement; when the whole diagonal is zero, a nonzero `a_ij`
/// makes one of `e_i ± e_j` negative.
pub fn negative_direction(a: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = a.len();
    if n == 0 {
        return None;
    }
    if let Some(k) = (0..n).find(|&k| a[k][k].is_negative()) {
        return Some(unit(n, k));
    }
    if let Some(k) = (0..n).find(|&k| a[k][k].is_positive()) {
        let rest: Vec<usize> = (0..n).filter(|&i| i != k).collect();
        let pivot = &a[k][k];
        let schur: Vec<Vec<Rational>> = rest
            .iter()
            .map(|&i| {
                rest.iter()
                    .map(|&j| &a[i][j] - &a[i][k] * &a[k][j] / pivot)
                    .collect()
            })
            .collect();
        let v = negative_direction(&schur)?;
        let mut c = vec![Rational::zero(); n];
        let mut dot = Rational::zero();
        for (t, &i) in rest.iter().enumerate() {
            dot += &a[k][i] * &v[t];
            c[i] = v[t].clone();
        }
        c[k] = -dot / pivot;
        return Some(c);
    }
    for i in 0..n {
        for j in i + 1..n {
            if !a[i][j].is_zero() {
                let mut c = unit(n, i);
                c[j] = if a[i][j].is_positive() {
                    -Rational::from_integer(1.into())
                } else {
                    Rational::from_integer(1.into())
                };
                return Some(c);
            }
        }
    }
    None
}

/// Solves `A x = b` for square nonsingular `A`; `None` if singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(p, k);
        let piv = m[k][k].clone();
        for j in k..=n {
            m[k][j] = &m[k][j] / &piv;
        }
        for i in 0..n {
            if i != k && !m[i][k].is_zero() {
                let f = m[i][k].clone();
                for j in k..=n {
                    let t = &f * &m[k][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn eval_matrix(m: &[Vec<UniPoly>], y: &Rational) -> Vec<Vec<Rational>> {
    m.iter()
        .map(|row| row.iter().map(|p| p.eval(y)).collect())
        .collect()
}
