//! Parametric Hankel matrices `H_{y,m} = ((i+j)! q_{i+j}(y))_{i,j=0..m}` and
//! exact semidefiniteness checks over all real `y`.
//!
//! A symmetric matrix is positive semidefinite iff every principal minor is
//! non-negative, so "PSD for every real y" reduces to finitely many
//! univariate non-negativity questions, each decided by Sturm sequences.
//! Strict definiteness uses leading minors only.

use num_traits::Signed;
use serde::Serialize;

use crate::decision::Decision;
use crate::linalg::{determinant, negative_direction, nonempty_subsets, quadratic_form, submatrix};
use crate::poly::{nonneg_on_r, positive_on_r, RealPoint, UniPoly};
use crate::rational::{factorial_q, Rational};
use crate::weyl::WeylOp;

/// `(m+1) x (m+1)` Hankel matrix with polynomial entries in `y`. Only the
/// anti-diagonal values `h_s = s! q_s(y)`, `s = 0..=2m`, are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamHankel {
    values: Vec<UniPoly>,
}

impl ParamHankel {
    pub fn build(t: &WeylOp, m: usize) -> Self {
        let values = (0..=2 * m)
            .map(|s| t.coeff(s).scale(&factorial_q(s)))
            .collect();
        ParamHankel { values }
    }

    /// Hankel matrix from anti-diagonal values `h_0..h_{2m}`.
    pub fn from_values(values: Vec<UniPoly>) -> Self {
        assert!(values.len() % 2 == 1, "a Hankel matrix needs 2m+1 values");
        ParamHankel { values }
    }

    /// Number of rows, `m + 1`.
    pub fn size(&self) -> usize {
        self.values.len().div_ceil(2)
    }

    pub fn entry(&self, i: usize, j: usize) -> &UniPoly {
        &self.values[i + j]
    }

    pub fn values(&self) -> &[UniPoly] {
        &self.values
    }

    pub fn matrix(&self) -> Vec<Vec<UniPoly>> {
        let n = self.size();
        (0..n)
            .map(|i| (0..n).map(|j| self.values[i + j].clone()).collect())
            .collect()
    }

    pub fn at(&self, y0: &Rational) -> Vec<Vec<Rational>> {
        let vals: Vec<Rational> = self.values.iter().map(|p| p.eval(y0)).collect();
        let n = self.size();
        (0..n)
            .map(|i| (0..n).map(|j| vals[i + j].clone()).collect())
            .collect()
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(UniPoly::is_constant)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MinorStatus {
    /// Non-negative on all of R.
    Nonneg,
    /// Negative at this rational point.
    FailsAt(#[serde(serialize_with = "crate::text::ser_rational")] Rational),
}

/// Principal minor over an index subset with its sign status.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorReport {
    pub subset: Vec<usize>,
    #[serde(serialize_with = "crate::text::ser_poly_y")]
    pub minor: UniPoly,
    pub status: MinorStatus,
}

/// Exact determinant of the principal submatrix indexed by `subset`.
pub fn principal_minor(h: &ParamHankel, subset: &[usize]) -> UniPoly {
    determinant(&submatrix(&h.matrix(), subset))
}

/// Checks every principal minor in lexicographic subset order, stopping at
/// the first one that is negative somewhere. On success returns all reports.
pub fn psd_minor_scan(h: &ParamHankel) -> Result<Vec<MinorReport>, MinorReport> {
    let m = h.matrix();
    let mut reports = Vec::new();
    for subset in nonempty_subsets(h.size()) {
        let minor = determinant(&submatrix(&m, &subset));
        match nonneg_on_r(&minor) {
            Decision::Holds => reports.push(MinorReport {
                subset,
                minor,
                status: MinorStatus::Nonneg,
            }),
            Decision::Fails(y0) => {
                return Err(MinorReport {
                    subset,
                    minor,
                    status: MinorStatus::FailsAt(y0),
                })
            }
        }
    }
    Ok(reports)
}

/// Is `H_y` positive semidefinite for every real `y`? On failure, the
/// lexicographically first principal minor that goes negative, with a
/// rational `y0` where it is negative.
pub fn psd_for_all_y(h: &ParamHankel) -> Decision<MinorReport> {
    match psd_minor_scan(h) {
        Ok(_) => Decision::Holds,
        Err(r) => Decision::Fails(r),
    }
}

/// Leading principal minor that is not strictly positive everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingFailure {
    /// Block size minus one, i.e. the `m` of `det H_{y,m}`.
    pub index: usize,
    pub minor: UniPoly,
    pub point: RealPoint,
}

/// `det H_{y,m}` for `m = 0..size-1`.
pub fn leading_minors(h: &ParamHankel) -> Vec<UniPoly> {
    let m = h.matrix();
    (1..=h.size())
        .map(|k| determinant(&submatrix(&m, &(0..k).collect::<Vec<_>>())))
        .collect()
}

/// Is `H_y` positive definite for every real `y` (Sylvester's criterion
/// applied pointwise)?
pub fn pd_for_all_y(h: &ParamHankel) -> Decision<LeadingFailure> {
    for (index, minor) in leading_minors(h).into_iter().enumerate() {
        if let Decision::Fails(point) = positive_on_r(&minor) {
            return Decision::Fails(LeadingFailure { index, minor, point });
        }
    }
    Decision::Holds
}

/// Direction `c` with `c^T H(y0) c = value < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeDirection {
    pub direction: Vec<Rational>,
    pub value: Rational,
}

/// Exact PSD test of a rational symmetric matrix, with a re-verified
/// negative direction on failure.
pub fn psd_rational(a: &[Vec<Rational>]) -> Decision<NegativeDirection> {
    match negative_direction(a) {
        None => Decision::Holds,
        Some(c) => {
            let value = quadratic_form(a, &c);
            assert!(value.is_negative(), "negative direction failed re-verification");
            Decision::Fails(NegativeDirection { direction: c, value })
        }
    }
}

pub fn psd_at_point(h: &ParamHankel, y0: &Rational) -> Decision<NegativeDirection> {
    psd_rational(&h.at(y0))
}
