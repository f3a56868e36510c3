//! Linear operators on polynomial spaces written as differential operators
//! with polynomial coefficients.
//!
//! Every linear map on `R[x]` has a unique expansion `sum_i q_i(x) D^i`.
//! Only finitely supported expansions are stored; acting on polynomials of
//! degree at most `d` only ever needs `q_0..q_d`.

use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::multi::{index_le, Exponent};
use crate::poly::{MultiPoly, UniPoly};
use crate::rational::{factorial_q, falling_factorial, Rational};

/// `T = sum_i q_i(x) D^i` with finitely many nonzero `q_i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeylOp {
    coeffs: Vec<UniPoly>,
}

/// Constant-coefficient operator `sum_i c_i D^i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstCoeffOp {
    coeffs: Vec<Rational>,
}

impl WeylOp {
    pub fn new(mut coeffs: Vec<UniPoly>) -> Self {
        while coeffs.last().is_some_and(UniPoly::is_zero) {
            coeffs.pop();
        }
        WeylOp { coeffs }
    }

    pub fn zero() -> Self {
        WeylOp { coeffs: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::multiplication(UniPoly::one())
    }

    /// `D^k`.
    pub fn derivative(k: usize) -> Self {
        let mut coeffs = vec![UniPoly::zero(); k + 1];
        coeffs[k] = UniPoly::one();
        Self::new(coeffs)
    }

    /// Multiplication by `q`.
    pub fn multiplication(q: UniPoly) -> Self {
        Self::new(vec![q])
    }

    /// Shift `f(x) -> f(x + a)`, i.e. `e^{aD}` truncated at `order`.
    pub fn shift(a: &Rational, order: usize) -> Self {
        let mut pow = Rational::one();
        let mut coeffs = Vec::with_capacity(order + 1);
        for i in 0..=order {
            coeffs.push(UniPoly::constant(&pow / factorial_q(i)));
            pow *= a;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    /// `q_i`, zero beyond the stored order.
    pub fn coeff(&self, i: usize) -> UniPoly {
        self.coeffs.get(i).cloned().unwrap_or_else(UniPoly::zero)
    }

    /// Largest `i` with `q_i != 0`; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn has_constant_coefficients(&self) -> bool {
        self.coeffs.iter().all(UniPoly::is_constant)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|q| -q).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|q| q.scale(c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    /// `sum_i q_i f^{(i)}`.
    pub fn apply(&self, f: &UniPoly) -> UniPoly {
        let deg = f.degree().map_or(0, |d| d + 1);
        self.coeffs
            .iter()
            .take(deg)
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .fold(UniPoly::zero(), |acc, (i, q)| &acc + &(q * &f.derivative(i)))
    }

    /// `T_y = sum_i q_i(y0) D^i`.
    pub fn specialize(&self, y0: &Rational) -> ConstCoeffOp {
        ConstCoeffOp::new(self.coeffs.iter().map(|q| q.eval(y0)).collect())
    }

    /// `p_{y,m}(x) = sum_{i<=m} q_i(y) x^i` as a polynomial in `(x, y)`.
    pub fn truncated_symbol(&self, m: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(2);
        for (i, q) in self.coeffs.iter().enumerate().take(m + 1) {
            for (j, c) in q.coeffs().iter().enumerate() {
                out.add_term(vec![i as u32, j as u32], c.clone());
            }
        }
        out
    }

    /// `p_{y0,m}` as a polynomial in `x`.
    pub fn symbol_at(&self, m: usize, y0: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().take(m + 1).map(|q| q.eval(y0)).collect())
    }

    /// `<p_{y0,d}, f(x + a)>` with `d = max(deg f, order)`. Equals
    /// `T_{y0}(f)(a)`.
    pub fn ff_pairing(&self, f: &UniPoly, y0: &Rational, a: &Rational) -> Rational {
        let d = f.degree().unwrap_or(0).max(self.order().unwrap_or(0));
        self.symbol_at(d, y0).ff_inner(&f.taylor_shift(a))
    }

    /// `e^{-aD} T e^{aD} = sum_i q_i(x - a) D^i`.
    pub fn conjugate_by_shift(&self, a: &Rational) -> Self {
        let minus = -a;
        Self::new(self.coeffs.iter().map(|q| q.taylor_shift(&minus)).collect())
    }

    /// Images of `1, x, ..., x^d`.
    pub fn matrix(&self, d: usize) -> ActionMatrix {
        ActionMatrix {
            columns: (0..=d)
                .map(|j| self.apply(&UniPoly::monomial(Rational::one(), j)))
                .collect(),
        }
    }

    /// The unique operator of order at most `d` with the given action on
    /// `1, x, ..., x^d`: `q_j = (T(x^j) - sum_{i<j} (j)_i q_i x^{j-i}) / j!`.
    pub fn from_matrix(m: &ActionMatrix) -> Self {
        let mut qs: Vec<UniPoly> = Vec::with_capacity(m.columns.len());
        for (j, image) in m.columns.iter().enumerate() {
            let mut r = image.clone();
            for (i, q) in qs.iter().enumerate() {
                let c = Rational::from_integer(falling_factorial(j, i));
                r = &r - &(q * &UniPoly::monomial(c, j - i));
            }
            qs.push(r.scale(&(Rational::one() / factorial_q(j))));
        }
        Self::new(qs)
    }

    /// Drops every `q_i` with `i > d` (they annihilate polynomials of degree
    /// at most `d`).
    pub fn truncate(&self, d: usize) -> Self {
        Self::new(self.coeffs.iter().take(d + 1).cloned().collect())
    }
}

/// Linear map `R_d[x] -> R[x]` given column-wise by the images of the
/// monomials `1, x, ..., x^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionMatrix {
    pub columns: Vec<UniPoly>,
}

impl ActionMatrix {
    /// Dense coefficient matrix: entry `(i, j)` is the coefficient of `x^i`
    /// in the image of `x^j`.
    pub fn dense(&self) -> Vec<Vec<Rational>> {
        let rows = self
            .columns
            .iter()
            .filter_map(|c| c.degree())
            .max()
            .map_or(0, |d| d + 1);
        (0..rows)
            .map(|i| self.columns.iter().map(|c| c.coeff(i)).collect())
            .collect()
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        ActionMatrix {
            columns: (0..ncols)
                .map(|j| UniPoly::new(rows.iter().map(|r| r[j].clone()).collect()))
                .collect(),
        }
    }
}

impl ConstCoeffOp {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ConstCoeffOp { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn apply(&self, f: &UniPoly) -> UniPoly {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(UniPoly::zero(), |acc, (i, c)| &acc + &f.derivative(i).scale(c))
    }

    pub fn to_weyl(&self) -> WeylOp {
        WeylOp::new(self.coeffs.iter().cloned().map(UniPoly::constant).collect())
    }
}

/// `T = sum_alpha q_alpha(x) ∂^alpha` in `arity` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiWeylOp {
    arity: usize,
    terms: BTreeMap<Exponent, MultiPoly>,
}

impl MultiWeylOp {
    pub fn zero(arity: usize) -> Self {
        MultiWeylOp {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(arity: usize) -> Self {
        let mut t = Self::zero(arity);
        t.terms.insert(vec![0; arity], MultiPoly::one(arity));
        t
    }

    pub fn from_terms(
        arity: usize,
        terms: impl IntoIterator<Item = (Exponent, MultiPoly)>,
    ) -> Result<Self> {
        let mut t = Self::zero(arity);
        for (alpha, q) in terms {
            if alpha.len() != arity || q.arity() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: if alpha.len() != arity { alpha.len() } else { q.arity() },
                });
            }
            let sum = match t.terms.remove(&alpha) {
                Some(prev) => prev.add(&q)?,
                None => q,
            };
            if !sum.is_zero() {
                t.terms.insert(alpha, sum);
            }
        }
        Ok(t)
    }

    /// Embeds a univariate operator (`arity` 1).
    pub fn from_univariate(t: &WeylOp) -> Self {
        let terms = t
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(|(i, q)| (vec![i as u32], MultiPoly::from_uni(q, 1, 0)));
        Self::from_terms(1, terms).expect("arity 1")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, MultiPoly> {
        &self.terms
    }

    pub fn coeff(&self, alpha: &[u32]) -> MultiPoly {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.arity))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_constant_coefficients(&self) -> bool {
        self.terms.values().all(MultiPoly::is_constant)
    }

    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if f.arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: f.arity(),
            });
        }
        let mut acc = MultiPoly::zero(self.arity);
        for (alpha, q) in &self.terms {
            let d = f.partial(alpha);
            if !d.is_zero() {
                acc = acc.add(&q.mul(&d)?)?;
            }
        }
        Ok(acc)
    }

    /// `T_y` at a point: the same operator with every coefficient evaluated.
    pub fn specialize(&self, y0: &[Rational]) -> Result<Self> {
        let mut t = Self::zero(self.arity);
        for (alpha, q) in &self.terms {
            let c = q.eval(y0)?;
            if !c.is_zero() {
                t.terms.insert(alpha.clone(), MultiPoly::constant(self.arity, c));
            }
        }
        Ok(t)
    }

    /// `p_{y,alpha}(x) = sum_{beta <= alpha} q_beta(y) x^beta` in the `2n`
    /// variables `(x_1..x_n, y_1..y_n)`.
    pub fn truncated_symbol(&self, alpha: &[u32]) -> Result<MultiPoly> {
        if alpha.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: alpha.len(),
            });
        }
        let mut out = MultiPoly::zero(2 * self.arity);
        for (beta, q) in self.terms.iter().filter(|(b, _)| index_le(b, alpha)) {
            for (e, c) in q.terms() {
                let mut exp = beta.clone();
                exp.extend_from_slice(e);
                out.add_term(exp, c.clone());
            }
        }
        Ok(out)
    }

    /// `p_{y0,alpha}` as a polynomial in `x`.
    pub fn symbol_at(&self, alpha: &[u32], y0: &[Rational]) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(self.arity);
        for (beta, q) in self.terms.iter().filter(|(b, _)| index_le(b, alpha)) {
            out.add_term(beta.clone(), q.eval(y0)?);
        }
        Ok(out)
    }

    /// Largest exponent appearing in each coordinate of the support.
    pub fn support_bound(&self) -> Exponent {
        let mut b = vec![0; self.arity];
        for alpha in self.terms.keys() {
            for (m, &a) in b.iter_mut().zip(alpha) {
                *m = (*m).max(a);
            }
        }
        b
    }

    pub fn neg(&self) -> Self {
        MultiWeylOp {
            arity: self.arity,
            terms: self.terms.iter().map(|(a, q)| (a.clone(), q.neg())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    fn x_d() -> WeylOp {
        WeylOp::new(vec![UniPoly::zero(), UniPoly::x()])
    }

    #[test]
    fn apply_examples() {
        assert_eq!(WeylOp::derivative(2).apply(&p(&[0, 0, 0, 0, 1])), p(&[0, 0, 12]));
        let f = p(&[3, 1, 4, 1, 5]);
        assert_eq!(WeylOp::identity().apply(&f), f);
        assert_eq!(x_d().apply(&p(&[0, 0, 1])), p(&[0, 0, 2]));
    }

    #[test]
    fn specialize_examples() {
        assert_eq!(x_d().specialize(&rat(2)).coeffs(), &[rat(0), rat(2)]);
        let t = WeylOp::new(vec![p(&[1]), p(&[0]), p(&[3])]);
        assert_eq!(t.specialize(&rat(7)).to_weyl(), t);
        let t = WeylOp::new(vec![UniPoly::x(), p(&[0, 0, 1])]);
        assert_eq!(t.specialize(&rat(-1)).coeffs(), &[rat(-1), rat(1)]);
    }

    #[test]
    fn symbol_examples() {
        let t = WeylOp::new(vec![UniPoly::zero(), UniPoly::zero(), UniPoly::x()]);
        assert_eq!(t.truncated_symbol(3), MultiPoly::monomial(vec![2, 1], rat(1)));
        assert!(t.truncated_symbol(1).is_zero());
        assert_eq!(WeylOp::identity().truncated_symbol(4), MultiPoly::one(2));
    }

    #[test]
    fn ff_pairing_examples() {
        let sq = p(&[0, 0, 1]);
        assert_eq!(WeylOp::derivative(1).ff_pairing(&sq, &rat(9), &rat(1)), rat(2));
        let f = p(&[1, -3, 0, 2]);
        assert_eq!(WeylOp::identity().ff_pairing(&f, &rat(4), &ratio(1, 2)), f.eval(&ratio(1, 2)));
        assert_eq!(x_d().ff_pairing(&sq, &rat(3), &rat(0)), rat(0));
    }

    #[test]
    fn shift_conjugation() {
        assert_eq!(x_d().conjugate_by_shift(&rat(0)), x_d());
        assert_eq!(
            x_d().conjugate_by_shift(&rat(1)),
            WeylOp::new(vec![UniPoly::zero(), p(&[-1, 1])])
        );
        let t = WeylOp::new(vec![p(&[1, 2]), p(&[0, 0, 1]), p(&[-1, 0, 3])]);
        let a = ratio(3, 2);
        assert_eq!(t.conjugate_by_shift(&a).conjugate_by_shift(&-&a), t);
        let f = p(&[2, 0, -1, 1]);
        assert_eq!(
            t.conjugate_by_shift(&a).apply(&f),
            t.apply(&f.taylor_shift(&a)).taylor_shift(&-&a)
        );
    }

    #[test]
    fn matrix_examples() {
        let m = ActionMatrix {
            columns: vec![p(&[1]), p(&[1, 1])],
        };
        assert_eq!(WeylOp::from_matrix(&m), WeylOp::new(vec![p(&[1]), p(&[1])]));
        let id = ActionMatrix {
            columns: (0..4).map(|j| UniPoly::monomial(rat(1), j)).collect(),
        };
        assert_eq!(WeylOp::from_matrix(&id), WeylOp::identity());
        let m = ActionMatrix {
            columns: vec![UniPoly::zero(), p(&[1]), p(&[0, 2])],
        };
        assert_eq!(WeylOp::from_matrix(&m), WeylOp::derivative(1));
        assert_eq!(WeylOp::derivative(1).matrix(2), m);
        assert_eq!(ActionMatrix::from_dense(&m.dense()), m);
    }

    #[test]
    fn shift_operator_shifts() {
        let f = p(&[0, 0, 1]);
        assert_eq!(WeylOp::shift(&rat(1), 2).apply(&f), p(&[1, 2, 1]));
    }

    #[test]
    fn multivariate_examples() {
        let mixed = MultiWeylOp::from_terms(2, [(vec![1, 1], MultiPoly::one(2))]).unwrap();
        let f = MultiPoly::monomial(vec![2, 2], rat(1));
        assert_eq!(mixed.apply(&f).unwrap(), MultiPoly::monomial(vec![1, 1], rat(4)));
        assert_eq!(
            mixed.truncated_symbol(&[1, 1]).unwrap(),
            MultiPoly::monomial(vec![1, 1, 0, 0], rat(1))
        );
        assert_eq!(mixed.specialize(&[rat(5), rat(-2)]).unwrap(), mixed);
        assert!(mixed.apply(&MultiPoly::one(3)).is_err());
    }
}
