//! Several variables: Gram kernels over `{beta <= alpha}`, pointwise PSD
//! tests, falsification search over parameter points, the
//! constant-coefficient decision, and diagonal operators.
//!
//! For `n >= 2` a PSD kernel at every sampled point is only a necessary
//! condition; nothing here claims preservation of the full non-negative cone
//! from it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decide::Outcome;
use crate::decision::Decision;
use crate::error::{Error, Result};
use crate::hankel::{psd_rational, NegativeDirection};
use crate::linalg::quadratic_form;
use crate::moments::{diagonal_moments, AtomicMeasureFamily};
use crate::poly::multi::{add_indices, index_le, indices_below, multi_factorial, Exponent};
use crate::poly::MultiPoly;
use crate::rational::{falling_factorial, Rational};
use crate::weyl::MultiWeylOp;

/// Gram matrix `((beta_i + beta_j)! q_{beta_i + beta_j}(y))` over the
/// multi-indices `beta <= alpha` in lexicographic order. Entries are
/// polynomials in `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelGram {
    pub index: Vec<Exponent>,
    pub entries: Vec<Vec<MultiPoly>>,
}

impl KernelGram {
    pub fn at(&self, y0: &[Rational]) -> Result<Vec<Vec<Rational>>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|p| p.eval(y0)).collect())
            .collect()
    }
}

fn check_arity(t: &MultiWeylOp, n: usize) -> Result<()> {
    if t.arity() != n {
        return Err(Error::ArityMismatch {
            expected: t.arity(),
            found: n,
        });
    }
    Ok(())
}

pub fn gram_kernel(t: &MultiWeylOp, alpha: &[u32]) -> Result<KernelGram> {
    check_arity(t, alpha.len())?;
    let index = indices_below(alpha);
    let entries = index
        .iter()
        .map(|b| {
            index
                .iter()
                .map(|c| {
                    let s = add_indices(b, c);
                    t.coeff(&s).scale(&multi_factorial(&s))
                })
                .collect()
        })
        .collect();
    Ok(KernelGram { index, entries })
}

pub fn gram_at(t: &MultiWeylOp, alpha: &[u32], y0: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    check_arity(t, y0.len())?;
    gram_kernel(t, alpha)?.at(y0)
}

/// Exact PSD test of the Gram matrix at `y0`; on failure a direction indexed
/// by `beta <= alpha` with negative quadratic form.
pub fn psd_kernel_at(t: &MultiWeylOp, alpha: &[u32], y0: &[Rational]) -> Result<Decision<NegativeDirection>> {
    Ok(psd_rational(&gram_at(t, alpha, y0)?))
}

/// `h = g(x - y0)^2`, `g = sum c_beta x^beta`, with `T(h)(y0) = value < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MvWitness {
    #[serde(serialize_with = "ser_mpoly")]
    pub g: MultiPoly,
    #[serde(serialize_with = "ser_mpoly")]
    pub h: MultiPoly,
    #[serde(serialize_with = "crate::text::ser_rationals")]
    pub point: Vec<Rational>,
    #[serde(serialize_with = "crate::text::ser_rational")]
    pub value: Rational,
}

fn ser_mpoly<S: serde::Serializer>(p: &MultiPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_text(&MultiPoly::default_names(p.arity())))
}

impl MvWitness {
    pub fn verify(&self, t: &MultiWeylOp) -> bool {
        let ok = || -> Result<bool> {
            Ok(self.g.square() == self.h
                && t.apply(&self.h)?.eval(&self.point)? == self.value
                && self.value.is_negative())
        };
        ok().unwrap_or(false)
    }
}

/// Builds and checks the witness for a negative direction at `y0`.
pub fn mv_witness(t: &MultiWeylOp, alpha: &[u32], y0: &[Rational], c: &[Rational]) -> Result<MvWitness> {
    let gram = gram_at(t, alpha, y0)?;
    let form = quadratic_form(&gram, c);
    if !form.is_negative() {
        return Err(Error::Precondition("quadratic form is not negative".into()));
    }
    let n = alpha.len();
    let index = indices_below(alpha);
    let g0 = MultiPoly::from_terms(n, index.into_iter().zip(c.iter().cloned()))?;
    let minus: Vec<Rational> = y0.iter().map(|v| -v).collect();
    let g = g0.taylor_shift(&minus)?;
    let h = g.square();
    let value = t.apply(&h)?.eval(y0)?;
    if value != form {
        return Err(Error::Precondition("witness failed re-verification".into()));
    }
    Ok(MvWitness {
        g,
        h,
        point: y0.to_vec(),
        value,
    })
}

/// Search budget: the grid `{-R..R}^n / q` (origin first, then shells of
/// growing max-norm, each in lexicographic order), followed by `random`
/// points drawn from a seeded generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub radius: u32,
    pub denominator: u32,
    pub random: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            radius: 2,
            denominator: 1,
            random: 32,
            seed: 0,
        }
    }
}

/// Grid points in scan order.
pub fn grid_points(n: usize, radius: u32, denominator: u32) -> Vec<Vec<Rational>> {
    let q = BigInt::from(denominator.max(1));
    let mut out = Vec::new();
    for shell in 0..=radius as i64 {
        // lexicographic product of [-shell, shell], first coordinate slowest
        let mut cube: Vec<Vec<i64>> = vec![Vec::new()];
        for _ in 0..n {
            cube = cube
                .into_iter()
                .flat_map(|p| {
                    (-shell..=shell).map(move |v| {
                        let mut p = p.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out.extend(
            cube.into_iter()
                .filter(|p| p.iter().map(|v| v.abs()).max().unwrap_or(0) == shell)
                .map(|p| p.into_iter().map(|v| Rational::new(v.into(), q.clone())).collect()),
        );
    }
    out
}

fn random_points(n: usize, budget: &Budget) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let span = 4 * budget.radius.max(1) as i64;
    (0..budget.random)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let den: i64 = rng.random_range(1..=4 * budget.denominator.max(1) as i64);
                    let num: i64 = rng.random_range(-span * den..=span * den);
                    Rational::new(num.into(), den.into())
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MvFalsification {
    pub witness: MvWitness,
    #[serde(serialize_with = "crate::text::ser_rationals")]
    pub direction: Vec<Rational>,
    pub points_scanned: usize,
    pub seed: u64,
}

/// Looks for a parameter point where the Gram matrix is not PSD. `None` when
/// the budget runs out, which proves nothing.
pub fn falsify_mv(t: &MultiWeylOp, alpha: &[u32], budget: &Budget) -> Result<Option<MvFalsification>> {
    let n = alpha.len();
    check_arity(t, n)?;
    let kernel = gram_kernel(t, alpha)?;
    let points = grid_points(n, budget.radius, budget.denominator)
        .into_iter()
        .chain(random_points(n, budget));
    for (i, y0) in points.enumerate() {
        if let Decision::Fails(dir) = psd_rational(&kernel.at(&y0)?) {
            let witness = mv_witness(t, alpha, &y0, &dir.direction)?;
            return Ok(Some(MvFalsification {
                witness,
                direction: dir.direction,
                points_scanned: i + 1,
                seed: budget.seed,
            }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MvVerdict {
    pub result: Outcome,
    #[serde(serialize_with = "ser_matrix")]
    pub gram: Vec<Vec<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MvWitness>,
}

fn ser_matrix<S: serde::Serializer>(m: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        let r: Vec<String> = row.iter().map(crate::rational::fmt_rational).collect();
        seq.serialize_element(&r)?;
    }
    seq.end()
}

/// Exact decision for constant coefficients: does `T` map sums of squares of
/// polynomials with exponents `<= alpha` to non-negative polynomials?
pub fn constant_coeff_decide(t: &MultiWeylOp, alpha: &[u32]) -> Result<MvVerdict> {
    if !t.has_constant_coefficients() {
        return Err(Error::NonConstantCoefficients);
    }
    let y0 = vec![Rational::zero(); alpha.len()];
    let gram = gram_at(t, alpha, &y0)?;
    match psd_rational(&gram) {
        Decision::Holds => Ok(MvVerdict {
            result: Outcome::Preserves,
            gram,
            witness: None,
        }),
        Decision::Fails(dir) => Ok(MvVerdict {
            result: Outcome::Violates,
            witness: Some(mv_witness(t, alpha, &y0, &dir.direction)?),
            gram,
        }),
    }
}

/// `T(x^beta) = lambda_beta x^beta` for `beta <= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalOp {
    pub bound: Exponent,
    pub eigenvalues: BTreeMap<Exponent, Rational>,
}

/// `(beta)_alpha = prod_i beta_i (beta_i - 1) ... (beta_i - alpha_i + 1)`.
fn falling_multi(beta: &[u32], alpha: &[u32]) -> Rational {
    beta.iter()
        .zip(alpha)
        .map(|(&b, &a)| Rational::from_integer(falling_factorial(b as usize, a as usize)))
        .product()
}

impl DiagonalOp {
    /// `lambda_beta = sum_{alpha <= beta} (beta)_alpha a_alpha`.
    pub fn from_generator(a: &BTreeMap<Exponent, Rational>, bound: &[u32]) -> Self {
        let eigenvalues = indices_below(bound)
            .into_iter()
            .map(|beta| {
                let l = a
                    .iter()
                    .filter(|(alpha, _)| index_le(alpha, &beta))
                    .map(|(alpha, c)| falling_multi(&beta, alpha) * c)
                    .sum();
                (beta, l)
            })
            .collect();
        DiagonalOp {
            bound: bound.to_vec(),
            eigenvalues,
        }
    }

    pub fn eigenvalue(&self, beta: &[u32]) -> Option<&Rational> {
        self.eigenvalues.get(beta)
    }

    /// Acts on polynomials whose exponents stay within the bound.
    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if f.arity() != self.bound.len() {
            return Err(Error::ArityMismatch {
                expected: self.bound.len(),
                found: f.arity(),
            });
        }
        let terms = f
            .terms()
            .iter()
            .map(|(e, c)| {
                let l = self.eigenvalues.get(e).ok_or_else(|| {
                    Error::InvalidInput(format!("exponent {e:?} exceeds the bound {:?}", self.bound))
                })?;
                Ok((e.clone(), c * l))
            })
            .collect::<Result<Vec<_>>>()?;
        MultiPoly::from_terms(f.arity(), terms)
    }

    /// `sum_alpha a_alpha x^alpha d^alpha` as a Weyl operator.
    pub fn to_weyl(&self) -> MultiWeylOp {
        let n = self.bound.len();
        let terms = diagonal_to_weyl(self).into_iter().map(|(alpha, a)| {
            let q = MultiPoly::monomial(alpha.clone(), a);
            (alpha, q)
        });
        MultiWeylOp::from_terms(n, terms).expect("consistent arity")
    }
}

/// `lambda_beta = sum_k w_k s_k^beta`: the operator `f -> sum_k w_k f(s_k . x)`.
pub fn diagonal_from_measure(nu: &AtomicMeasureFamily, bound: &[u32]) -> Result<DiagonalOp> {
    Ok(DiagonalOp {
        bound: bound.to_vec(),
        eigenvalues: diagonal_moments(nu, bound)?.into_iter().collect(),
    })
}

/// Generator coefficients `a_alpha` from the eigenvalues by triangular
/// solve: `a_beta = (lambda_beta - sum_{alpha < beta} (beta)_alpha a_alpha) / beta!`.
pub fn diagonal_to_weyl(op: &DiagonalOp) -> BTreeMap<Exponent, Rational> {
    let mut a: BTreeMap<Exponent, Rational> = BTreeMap::new();
    // lexicographic order lists every alpha <= beta before beta
    for (beta, l) in &op.eigenvalues {
        let partial: Rational = a
            .iter()
            .filter(|(alpha, _)| index_le(alpha, beta))
            .map(|(alpha, c)| falling_multi(beta, alpha) * c)
            .sum();
        let v = (l - partial) / multi_factorial(beta);
        a.insert(beta.clone(), v);
    }
    a.retain(|_, v| !v.is_zero());
    a
}

/// `sum_k w_k f(s_k . x)` directly from the measure.
pub fn apply_via_measure(nu: &AtomicMeasureFamily, f: &MultiPoly) -> Result<MultiPoly> {
    if !nu.has_constant_weights() {
        return Err(Error::Precondition("weights must be constant".into()));
    }
    let mut acc = MultiPoly::zero(f.arity());
    for (s, w) in nu.atoms().iter().zip(nu.weights()) {
        if s.len() != f.arity() {
            return Err(Error::ArityMismatch {
                expected: f.arity(),
                found: s.len(),
            });
        }
        acc = acc.add(&f.dilate(s).scale(&w.coeff(0)))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::UniPoly;
    use crate::rational::{rat, ratio};
    use crate::weyl::WeylOp;

    fn d1d2() -> MultiWeylOp {
        MultiWeylOp::from_terms(2, [(vec![1, 1], MultiPoly::one(2))]).unwrap()
    }

    fn zeros(n: usize) -> Vec<Rational> {
        vec![rat(0); n]
    }

    #[test]
    fn gram_examples() {
        let g = gram_at(&d1d2(), &[1, 1], &zeros(2)).unwrap();
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, rat(i32::from(i + j == 3) as i64));
            }
        }
        let g = gram_at(&MultiWeylOp::identity(3), &[1, 0, 1], &zeros(3)).unwrap();
        assert_eq!(g[0][0], rat(1));
        assert_eq!(g.iter().flatten().filter(|v| !v.is_zero()).count(), 1);
        let d2 = MultiWeylOp::from_univariate(&WeylOp::derivative(2));
        assert_eq!(gram_at(&d2, &[1], &zeros(1)).unwrap(), vec![vec![rat(0), rat(0)], vec![rat(0), rat(2)]]);
    }

    #[test]
    fn psd_kernel_examples() {
        let n = psd_kernel_at(&d1d2(), &[1, 1], &[rat(3), rat(-1)]).unwrap().into_failure().unwrap();
        assert_eq!(n.direction, vec![rat(1), rat(0), rat(0), rat(-1)]);
        assert_eq!(n.value, rat(-2));
        assert!(psd_kernel_at(&MultiWeylOp::identity(2), &[2, 2], &zeros(2)).unwrap().holds());
        let lap = MultiWeylOp::from_terms(2, [(vec![2, 0], MultiPoly::one(2)), (vec![0, 2], MultiPoly::one(2))]).unwrap();
        let g = gram_at(&lap, &[1, 1], &zeros(2)).unwrap();
        assert_eq!(g[1][1], rat(2));
        assert_eq!(g[2][2], rat(2));
        assert!(psd_rational(&g).holds());
    }

    #[test]
    fn falsify_examples() {
        let f = falsify_mv(&d1d2(), &[1, 1], &Budget::default()).unwrap().unwrap();
        assert_eq!(f.witness.point, zeros(2));
        assert_eq!(f.witness.value, rat(-2));
        let x1x2 = MultiPoly::var(2, 0).mul(&MultiPoly::var(2, 1)).unwrap();
        assert_eq!(f.witness.h, MultiPoly::one(2).sub(&x1x2).unwrap().square());
        assert!(f.witness.verify(&d1d2()));
        assert!(falsify_mv(&MultiWeylOp::identity(2), &[1, 1], &Budget::default()).unwrap().is_none());
        let mx = MultiWeylOp::from_terms(2, [(vec![0, 0], MultiPoly::var(2, 0))]).unwrap();
        let f = falsify_mv(&mx, &[0, 0], &Budget::default()).unwrap().unwrap();
        assert!(f.witness.point[0].is_negative());
        assert_eq!(f.witness.h, MultiPoly::one(2));
    }

    #[test]
    fn grid_scan_order() {
        let g = grid_points(2, 1, 1);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], zeros(2));
        assert_eq!(g[1], vec![rat(-1), rat(-1)]);
        assert_eq!(grid_points(1, 2, 2).len(), 5);
    }

    #[test]
    fn constant_coeff_examples() {
        let v = constant_coeff_decide(&d1d2(), &[1, 1]).unwrap();
        assert_eq!(v.result, Outcome::Violates);
        assert_eq!(v.witness.unwrap().value, rat(-2));
        let nu = AtomicMeasureFamily::new(vec![vec![rat(1), rat(1)]], vec![UniPoly::one()]).unwrap();
        let conv = crate::moments::conv_operator_mv(&nu, &[2, 2]).unwrap();
        assert_eq!(constant_coeff_decide(&conv, &[1, 1]).unwrap().result, Outcome::Preserves);
        assert_eq!(constant_coeff_decide(&MultiWeylOp::zero(2), &[1, 1]).unwrap().result, Outcome::Preserves);
        let mx = MultiWeylOp::from_terms(1, [(vec![0], MultiPoly::var(1, 0))]).unwrap();
        assert!(matches!(constant_coeff_decide(&mx, &[1]), Err(Error::NonConstantCoefficients)));
    }

    #[test]
    fn diagonal_examples() {
        let nu = AtomicMeasureFamily::new(vec![vec![rat(1), rat(1)]], vec![UniPoly::one()]).unwrap();
        let d = diagonal_from_measure(&nu, &[2, 2]).unwrap();
        assert!(d.eigenvalues.values().all(|l| *l == rat(1)));
        assert_eq!(d.to_weyl(), MultiWeylOp::identity(2));

        let nu = AtomicMeasureFamily::univariate(vec![rat(2)], vec![rat(1)]).unwrap();
        let d = diagonal_from_measure(&nu, &[3]).unwrap();
        let a = diagonal_to_weyl(&d);
        let want: BTreeMap<Exponent, Rational> =
            [(vec![0], rat(1)), (vec![1], rat(1)), (vec![2], ratio(1, 2)), (vec![3], ratio(1, 6))].into_iter().collect();
        assert_eq!(a, want);
        assert_eq!(DiagonalOp::from_generator(&a, &[3]), d);
        let f = MultiPoly::from_uni(&UniPoly::from_ints(&[1, 1, 1]), 1, 0);
        assert_eq!(d.apply(&f).unwrap(), MultiPoly::from_uni(&UniPoly::from_ints(&[1, 2, 4]), 1, 0));
        assert_eq!(d.to_weyl().apply(&f).unwrap(), apply_via_measure(&nu, &f).unwrap());

        let nu = AtomicMeasureFamily::univariate(vec![rat(-1), rat(1)], vec![rat(1), rat(1)]).unwrap();
        let d = diagonal_from_measure(&nu, &[3]).unwrap();
        assert_eq!(d.eigenvalues.values().cloned().collect::<Vec<_>>(), vec![rat(2), rat(0), rat(2), rat(0)]);
        let two = diagonal_to_weyl(&DiagonalOp::from_generator(&[(vec![0], rat(2))].into_iter().collect(), &[4]));
        assert_eq!(two, [(vec![0], rat(2))].into_iter().collect());
    }

    #[test]
    fn univariate_consistency() {
        let t = WeylOp::new(vec![UniPoly::from_ints(&[1, 2]), UniPoly::x(), UniPoly::from_ints(&[3])]);
        let m = MultiWeylOp::from_univariate(&t);
        let h = crate::hankel::ParamHankel::build(&t, 1);
        for y in [-2, 0, 5] {
            assert_eq!(gram_at(&m, &[1], &[rat(y)]).unwrap(), h.at(&rat(y)));
        }
    }
}
