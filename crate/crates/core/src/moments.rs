//! Moment sequences, finitely atomic measure families and the convolution
//! operators they induce.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::decision::Decision;
use crate::error::{Error, Result};
use crate::linalg::{determinant, nonempty_subsets, solve, submatrix};
use crate::poly::multi::{add_indices, indices_below, multi_factorial, point_pow, Exponent};
use crate::poly::{isolate_real_roots, nonneg_on_r, IsolatedRoot, MultiPoly, RealPoint, RootIsolation, UniPoly};
use crate::rational::{factorial_q, fmt_rational, Rational};
use crate::weyl::{MultiWeylOp, WeylOp};

/// Moments `a_0, a_1, ...` of a (candidate) measure on the line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentSequence {
    #[serde(serialize_with = "crate::text::ser_rationals")]
    pub values: Vec<Rational>,
}

impl MomentSequence {
    pub fn new(values: Vec<Rational>) -> Self {
        MomentSequence { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The Hankel matrix `(a_{i+j})_{i,j<=m}`.
    pub fn hankel(&self, m: usize) -> Vec<Vec<Rational>> {
        (0..=m)
            .map(|i| (0..=m).map(|j| self.values[i + j].clone()).collect())
            .collect()
    }
}

/// Finitely many distinct atoms in `R^n`, each with a weight that is a
/// polynomial in the parameter `y` (constants allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicMeasureFamily {
    dim: usize,
    atoms: Vec<Vec<Rational>>,
    weights: Vec<UniPoly>,
}

impl AtomicMeasureFamily {
    /// Dimension is taken from the first atom (1 when there are none).
    pub fn new(atoms: Vec<Vec<Rational>>, weights: Vec<UniPoly>) -> Result<Self> {
        let dim = atoms.first().map_or(1, Vec::len);
        Self::with_dim(dim, atoms, weights)
    }

    pub fn with_dim(dim: usize, atoms: Vec<Vec<Rational>>, weights: Vec<UniPoly>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::InvalidInput(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidInput("atoms need at least one coordinate".into()));
        }
        for a in &atoms {
            if a.len() != dim {
                return Err(Error::ArityMismatch {
                    expected: dim,
                    found: a.len(),
                });
            }
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].contains(a) {
                let parts: Vec<String> = a.iter().map(fmt_rational).collect();
                return Err(Error::DuplicateAtom(parts.join(", ")));
            }
        }
        Ok(AtomicMeasureFamily { dim, atoms, weights })
    }

    /// Univariate atoms with constant weights.
    pub fn univariate(atoms: Vec<Rational>, weights: Vec<Rational>) -> Result<Self> {
        Self::with_dim(
            1,
            atoms.into_iter().map(|t| vec![t]).collect(),
            weights.into_iter().map(UniPoly::constant).collect(),
        )
    }

    pub fn empty(dim: usize) -> Self {
        AtomicMeasureFamily {
            dim,
            atoms: Vec::new(),
            weights: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Vec<Rational>] {
        &self.atoms
    }

    pub fn weights(&self) -> &[UniPoly] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn has_constant_weights(&self) -> bool {
        self.weights.iter().all(UniPoly::is_constant)
    }

    fn require_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::ArityMismatch {
                expected: dim,
                found: self.dim,
            });
        }
        Ok(())
    }

    fn constant_weights(&self) -> Result<Vec<Rational>> {
        if !self.has_constant_weights() {
            return Err(Error::Precondition("weights must be constant in y".into()));
        }
        Ok(self.weights.iter().map(|w| w.coeff(0)).collect())
    }

    /// `sum_k w_k(y) t_k^beta` as a polynomial in `y`.
    pub fn moment(&self, beta: &[u32]) -> Result<UniPoly> {
        self.require_dim(beta.len())?;
        Ok(self
            .atoms
            .iter()
            .zip(&self.weights)
            .fold(UniPoly::zero(), |acc, (t, w)| acc + w.scale(&point_pow(t, beta))))
    }
}

/// A principal minor of the moment Hankel matrix that is negative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HamburgerFailure {
    pub subset: Vec<usize>,
    #[serde(serialize_with = "crate::text::ser_rational")]
    pub minor: Rational,
}

/// Is `(a_{i+j})_{i,j<=m}` positive semidefinite? Needs `2m+1` values.
/// Principal minors are scanned in lexicographic subset order.
pub fn hamburger_check(a: &[Rational]) -> Result<Decision<HamburgerFailure>> {
    if a.len().is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "a moment list a_0..a_2m has odd length; got {} values",
            a.len()
        )));
    }
    let h = MomentSequence::new(a.to_vec()).hankel(a.len() / 2);
    for subset in nonempty_subsets(h.len()) {
        let minor = determinant(&submatrix(&h, &subset));
        if minor.is_negative() {
            return Ok(Decision::Fails(HamburgerFailure { subset, minor }));
        }
    }
    Ok(Decision::Holds)
}

/// `a_0..a_{len-1}` of a univariate family with `y = y0`.
pub fn moments_of_atomic(m: &AtomicMeasureFamily, y0: &Rational, len: usize) -> Result<Vec<Rational>> {
    Ok(moments_symbolic(m, len)?.iter().map(|p| p.eval(y0)).collect())
}

/// Moments as polynomials in `y`.
pub fn moments_symbolic(m: &AtomicMeasureFamily, len: usize) -> Result<Vec<UniPoly>> {
    m.require_dim(1)?;
    (0..len as u32).map(|i| m.moment(&[i])).collect()
}

/// `q_i(y) = (1/i!) sum_k w_k(y) t_k^i` for `i <= order`.
pub fn conv_operator_from_measure(m: &AtomicMeasureFamily, order: usize) -> Result<WeylOp> {
    let moments = moments_symbolic(m, order + 1)?;
    Ok(WeylOp::new(
        moments
            .into_iter()
            .enumerate()
            .map(|(i, a)| a.scale(&(Rational::one() / factorial_q(i))))
            .collect(),
    ))
}

/// Multivariate convolution operator truncated to multi-indices `<= order`.
/// Weights must be constant.
pub fn conv_operator_mv(m: &AtomicMeasureFamily, order: &[u32]) -> Result<MultiWeylOp> {
    m.require_dim(order.len())?;
    let w = m.constant_weights()?;
    let n = order.len();
    let terms = indices_below(order).into_iter().map(|alpha| {
        let q: Rational = m
            .atoms
            .iter()
            .zip(&w)
            .map(|(t, wk)| wk * point_pow(t, &alpha))
            .sum::<Rational>()
            / multi_factorial(&alpha);
        (alpha, MultiPoly::constant(n, q))
    });
    MultiWeylOp::from_terms(n, terms)
}

/// `sum_k w_k f(x + t_k)` for constant weights.
pub fn apply_convolution(m: &AtomicMeasureFamily, f: &UniPoly) -> Result<UniPoly> {
    m.require_dim(1)?;
    let w = m.constant_weights()?;
    Ok(m.atoms
        .iter()
        .zip(&w)
        .fold(UniPoly::zero(), |acc, (t, wk)| acc + f.taylor_shift(&t[0]).scale(wk)))
}

pub fn apply_convolution_mv(m: &AtomicMeasureFamily, f: &MultiPoly) -> Result<MultiPoly> {
    m.require_dim(f.arity())?;
    let w = m.constant_weights()?;
    let mut acc = MultiPoly::zero(f.arity());
    for (t, wk) in m.atoms.iter().zip(&w) {
        acc = acc.add(&f.taylor_shift(t)?.scale(wk))?;
    }
    Ok(acc)
}

/// Weight that is negative somewhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightFailure {
    pub index: usize,
    #[serde(serialize_with = "crate::text::ser_rational")]
    pub y0: Rational,
}

/// Are all weights non-negative for every real `y`? Since the atoms are
/// distinct, this is exactly when the induced operator maps non-negative
/// polynomials to non-negative ones at every degree.
pub fn measure_family_sos_check(m: &AtomicMeasureFamily) -> Decision<WeightFailure> {
    for (index, w) in m.weights.iter().enumerate() {
        if let Decision::Fails(y0) = nonneg_on_r(w) {
            return Decision::Fails(WeightFailure { index, y0 });
        }
    }
    Decision::Holds
}

/// Weight of a recovered atom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum WeightValue {
    Exact(#[serde(serialize_with = "crate::text::ser_rational")] Rational),
    /// Closed interval containing the weight.
    Enclosure(
        #[serde(serialize_with = "crate::text::ser_rational")] Rational,
        #[serde(serialize_with = "crate::text::ser_rational")] Rational,
    ),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveredMeasure {
    /// Monic; its roots are the atoms.
    pub atom_polynomial: UniPoly,
    pub atom_intervals: RootIsolation,
    /// Atoms in ascending order: exact when rational, otherwise refined
    /// isolating intervals.
    pub atoms: Vec<RealPoint>,
    pub weights: Vec<WeightValue>,
}

impl RecoveredMeasure {
    pub fn rank(&self) -> usize {
        self.atoms.len()
    }

    /// The measure itself, when every atom is rational.
    pub fn to_measure(&self) -> Option<AtomicMeasureFamily> {
        let mut atoms = Vec::new();
        let mut weights = Vec::new();
        for (a, w) in self.atoms.iter().zip(&self.weights) {
            match (a, w) {
                (RealPoint::Rational(t), WeightValue::Exact(w)) => {
                    atoms.push(t.clone());
                    weights.push(w.clone());
                }
                _ => return None,
            }
        }
        AtomicMeasureFamily::univariate(atoms, weights).ok()
    }
}

/// Width below which irrational atoms and their weights are reported.
fn enclosure_width() -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(1u64 << 40))
}

fn interval_mul(a: &(Rational, Rational), b: &(Rational, Rational)) -> (Rational, Rational) {
    let c = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = c.iter().min().unwrap().clone();
    let hi = c.iter().max().unwrap().clone();
    (lo, hi)
}

/// Horner evaluation in interval arithmetic.
fn eval_interval(p: &UniPoly, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let x = (lo.clone(), hi.clone());
    let mut acc = (Rational::zero(), Rational::zero());
    for c in p.coeffs().iter().rev() {
        let t = interval_mul(&acc, &x);
        acc = (t.0 + c, t.1 + c);
    }
    acc
}

/// Atoms and weights from a moment sequence of a finitely atomic measure.
///
/// The rank `r` is the size of the first singular leading Hankel block. The
/// monic atom polynomial `P` comes from the kernel of that block and must
/// annihilate every available window `(a_s, ..., a_{s+r})`; it must have `r`
/// distinct real roots. Weights solve the Vandermonde system on `a_0..a_{r-1}`,
/// via `w_k = N(t_k) / P'(t_k)` with `N(t) = sum_j a_j sum_{i>j} p_i t^{i-j-1}`.
pub fn recover_atoms(a: &[Rational]) -> Result<RecoveredMeasure> {
    if a.is_empty() {
        return Err(Error::InvalidInput("empty moment sequence".into()));
    }
    let usable = if a.len().is_multiple_of(2) { &a[..a.len() - 1] } else { a };
    if let Decision::Fails(f) = hamburger_check(usable)? {
        return Err(Error::Precondition(format!(
            "not a moment sequence: principal minor over {:?} is {}",
            f.subset,
            fmt_rational(&f.minor)
        )));
    }
    let seq = MomentSequence::new(a.to_vec());
    let mut r = None;
    for k in 0..=(a.len() - 1) / 2 {
        if determinant(&seq.hankel(k)).is_zero() {
            r = Some(k);
            break;
        }
    }
    let r = r.ok_or_else(|| {
        Error::NotFinitelyAtomic(format!(
            "Hankel blocks are nonsingular up to size {}; supply more moments",
            (a.len() - 1) / 2 + 1
        ))
    })?;
    let mut p = if r == 0 {
        Vec::new()
    } else {
        let rhs: Vec<Rational> = (r..2 * r).map(|i| -&a[i]).collect();
        solve(&seq.hankel(r - 1), &rhs).expect("leading block of size r is nonsingular")
    };
    p.push(Rational::one());
    for s in 0..a.len() - r {
        let v: Rational = (0..=r).map(|i| &p[i] * &a[s + i]).sum();
        if !v.is_zero() {
            return Err(Error::NotFinitelyAtomic(format!(
                "rank-{r} recurrence fails at a_{}",
                s + r
            )));
        }
    }
    let poly = UniPoly::new(p.clone());
    let iso = if r == 0 {
        RootIsolation {
            intervals: Vec::new(),
            multiplicities: Vec::new(),
            factors: Vec::new(),
        }
    } else {
        isolate_real_roots(&poly)?
    };
    if iso.len() != r || iso.multiplicities.iter().any(|&m| m != 1) {
        return Err(Error::NotFinitelyAtomic(format!(
            "kernel polynomial {poly} does not have {r} distinct real roots"
        )));
    }
    let dp = poly.derivative(1);
    let numerator = UniPoly::new(
        (0..r.max(1))
            .map(|e| {
                (0..r)
                    .filter(|&j| j + e < r)
                    .map(|j| &a[j] * &p[j + e + 1])
                    .sum()
            })
            .collect(),
    );
    let width = enclosure_width();
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    for ((lo, hi), f) in iso.intervals.iter().zip(&iso.factors) {
        let root = IsolatedRoot {
            factor: f.clone(),
            lo: lo.clone(),
            hi: hi.clone(),
        };
        let exact = crate::poly::rational_root_in(f, lo, hi);
        let point = match exact {
            Some(t) => RealPoint::Rational(t),
            None => root.refine(&width),
        };
        let w = match &point {
            RealPoint::Rational(t) => WeightValue::Exact(numerator.eval(t) / dp.eval(t)),
            RealPoint::Root(iv) => {
                let mut iv = iv.clone();
                loop {
                    let num = eval_interval(&numerator, &iv.lo, &iv.hi);
                    let den = eval_interval(&dp, &iv.lo, &iv.hi);
                    if den.0.is_positive() || den.1.is_negative() {
                        let inv = (Rational::one() / &den.1, Rational::one() / &den.0);
                        let (lo, hi) = interval_mul(&num, &inv);
                        break WeightValue::Enclosure(lo, hi);
                    }
                    let w = (&iv.hi - &iv.lo) / Rational::from_integer(2.into());
                    match iv.refine(&w) {
                        RealPoint::Root(next) => iv = next,
                        RealPoint::Rational(_) => unreachable!("irrational root"),
                    }
                }
            }
        };
        atoms.push(point);
        weights.push(w);
    }
    Ok(RecoveredMeasure {
        atom_polynomial: poly,
        atom_intervals: iso,
        atoms,
        weights,
    })
}

/// `lambda_beta = sum_k w_k s_k^beta` for every `beta <= bound`.
pub fn diagonal_moments(m: &AtomicMeasureFamily, bound: &[u32]) -> Result<Vec<(Exponent, Rational)>> {
    m.require_dim(bound.len())?;
    let w = m.constant_weights()?;
    Ok(indices_below(bound)
        .into_iter()
        .map(|beta| {
            let l = m.atoms.iter().zip(&w).map(|(s, wk)| wk * point_pow(s, &beta)).sum();
            (beta, l)
        })
        .collect())
}

/// Moment matrix `(int t^(beta_i + beta_j) dmu)` over `beta <= alpha`.
pub fn moment_matrix_mv(m: &AtomicMeasureFamily, alpha: &[u32], y0: &Rational) -> Result<Vec<Vec<Rational>>> {
    m.require_dim(alpha.len())?;
    let idx = indices_below(alpha);
    idx.iter()
        .map(|b| {
            idx.iter()
                .map(|c| Ok(m.moment(&add_indices(b, c))?.eval(y0)))
                .collect()
        })
        .collect()
}
