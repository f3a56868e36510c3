use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::uni::{join_terms, UniPoly};
use crate::rational::{factorial, Rational};

/// Exponent vector.
pub type Exponent = Vec<u32>;

/// Sparse polynomial in `arity` variables. No stored coefficient is zero and
/// every key has length `arity`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Exponent, Rational>,
}

/// `alpha!` for a multi-index.
pub fn multi_factorial(alpha: &[u32]) -> Rational {
    Rational::from_integer(
        alpha
            .iter()
            .map(|&a| factorial(a as usize))
            .product(),
    )
}

/// Product partial order `beta <= alpha`.
pub fn index_le(beta: &[u32], alpha: &[u32]) -> bool {
    beta.iter().zip(alpha).all(|(b, a)| b <= a)
}

/// All `beta <= alpha` in lexicographic order.
pub fn indices_below(alpha: &[u32]) -> Vec<Exponent> {
    let mut out = vec![Vec::with_capacity(alpha.len())];
    for &a in alpha {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=a).map(move |v| {
                    let mut e = prefix.clone();
                    e.push(v);
                    e
                })
            })
            .collect();
    }
    out
}

pub fn add_indices(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn pow(x: &Rational, k: u32) -> Rational {
    num_traits::pow(x.clone(), k as usize)
}

/// `t^alpha` for a point `t`.
pub fn point_pow(t: &[Rational], alpha: &[u32]) -> Rational {
    t.iter()
        .zip(alpha)
        .fold(Rational::one(), |acc, (x, &k)| acc * pow(x, k))
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        MultiPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        Self::monomial(vec![0; arity], c)
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// The coordinate `x_i` (0-based).
    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Result<Self> {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            if e.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Embeds a univariate polynomial as variable `var` of an `arity`-variate one.
    pub fn from_uni(p: &UniPoly, arity: usize, var: usize) -> Self {
        let mut out = Self::zero(arity);
        for (i, c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0; arity];
            e[var] = i as u32;
            out.add_term(e, c.clone());
        }
        out
    }

    /// Univariate view; fails if the arity is not one.
    pub fn to_uni(&self) -> Result<UniPoly> {
        if self.arity != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: self.arity,
            });
        }
        let deg = self.terms.keys().map(|e| e[0] as usize).max().unwrap_or(0);
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (e, c) in &self.terms {
            coeffs[e[0] as usize] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn add_term(&mut self, exp: Exponent, c: Rational) {
        debug_assert_eq!(exp.len(), self.arity);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rational> {
        &self.terms
    }

    pub fn coeff(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    /// Total degree; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in each variable separately.
    pub fn multidegree(&self) -> Exponent {
        let mut d = vec![0; self.arity];
        for e in self.terms.keys() {
            for (m, &k) in d.iter_mut().zip(e) {
                *m = (*m).max(k);
            }
        }
        d
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(add_indices(ea, eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.arity);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    pub fn square(&self) -> Self {
        self.mul(self).expect("same arity")
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .fold(Rational::zero(), |acc, (e, c)| acc + c * point_pow(point, e)))
    }

    /// Substitutes values for the variables listed in `vars`, keeping the
    /// remaining ones in their original order.
    pub fn partial_eval(&self, vars: &[usize], values: &[Rational]) -> Result<Self> {
        if vars.len() != values.len() || vars.iter().any(|&v| v >= self.arity) {
            return Err(Error::InvalidInput("bad partial evaluation".into()));
        }
        let keep: Vec<usize> = (0..self.arity).filter(|i| !vars.contains(i)).collect();
        let mut out = Self::zero(keep.len());
        for (e, c) in &self.terms {
            let factor = vars
                .iter()
                .zip(values)
                .fold(Rational::one(), |acc, (&v, x)| acc * pow(x, e[v]));
            out.add_term(keep.iter().map(|&i| e[i]).collect(), c * factor);
        }
        Ok(out)
    }

    /// `∂^k / ∂x_var^k`.
    pub fn derivative(&self, var: usize, k: u32) -> Self {
        let mut out = Self::zero(self.arity);
        for (e, c) in &self.terms {
            if e[var] < k {
                continue;
            }
            let f: u64 = ((e[var] - k + 1)..=e[var]).map(u64::from).product();
            let mut ne = e.clone();
            ne[var] -= k;
            out.add_term(ne, c * Rational::from_integer(f.into()));
        }
        out
    }

    /// `∂^alpha`.
    pub fn partial(&self, alpha: &[u32]) -> Self {
        let mut out = self.clone();
        for (i, &k) in alpha.iter().enumerate() {
            if k > 0 {
                out = out.derivative(i, k);
            }
        }
        out
    }

    /// `p(x + a)`.
    pub fn taylor_shift(&self, a: &[Rational]) -> Result<Self> {
        if a.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: a.len(),
            });
        }
        let mut out = self.clone();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let mut next = Self::zero(self.arity);
            for (e, c) in &out.terms {
                // (x_i + a_i)^k expanded binomially
                let k = e[i];
                let mut binom = Rational::one();
                for j in 0..=k {
                    let mut ne = e.clone();
                    ne[i] = j;
                    next.add_term(ne, c * &binom * pow(ai, k - j));
                    // binom(k, j+1) = binom(k, j) * (k - j) / (j + 1)
                    binom = binom * Rational::from_integer((k - j).into())
                        / Rational::from_integer((j + 1).into());
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// `p(c_1 x_1, ..., c_n x_n)`.
    pub fn dilate(&self, c: &[Rational]) -> Self {
        let mut out = Self::zero(self.arity);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * point_pow(c, e));
        }
        out
    }

    /// Fischer-Fock pairing `sum_alpha alpha! a_alpha b_alpha`.
    pub fn ff_inner(&self, other: &Self) -> Result<Rational> {
        self.check_arity(other)?;
        Ok(self
            .terms
            .iter()
            .filter_map(|(e, a)| other.terms.get(e).map(|b| multi_factorial(e) * a * b))
            .fold(Rational::zero(), |acc, t| acc + t))
    }

    /// Text form using the given variable names, highest total degree first.
    pub fn to_text(&self, names: &[String]) -> String {
        let mut terms: Vec<(&Exponent, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        join_terms(terms.into_iter().map(|(e, c)| {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{k}", names[i])
                    }
                })
                .collect();
            (c.clone(), mono.join("*"))
        }))
    }

    /// Default variable names: `x` for one variable, `x1..xn` otherwise.
    pub fn default_names(arity: usize) -> Vec<String> {
        if arity == 1 {
            vec!["x".to_string()]
        } else {
            (1..=arity).map(|i| format!("x{i}")).collect()
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&Self::default_names(self.arity)))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({self})", self.arity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(2, i)
    }

    #[test]
    fn arithmetic_and_eval() {
        let p = x(0).mul(&x(1)).unwrap();
        assert_eq!(p.eval(&[rat(3), ratio(1, 3)]).unwrap(), rat(1));
        assert_eq!(p.add(&MultiPoly::zero(2)).unwrap(), p);
        assert!(p.add(&MultiPoly::zero(3)).is_err());
        assert!(p.sub(&p).unwrap().is_zero());
        let q = p.add(&MultiPoly::constant(2, rat(7))).unwrap();
        assert_eq!(q.eval(&[rat(0), rat(0)]).unwrap(), rat(7));
    }

    #[test]
    fn partial_derivative() {
        let p = MultiPoly::monomial(vec![2, 1], rat(1));
        assert_eq!(p.derivative(0, 1), MultiPoly::monomial(vec![1, 1], rat(2)));
        let q = MultiPoly::monomial(vec![2, 2], rat(1));
        assert_eq!(q.partial(&[1, 1]), MultiPoly::monomial(vec![1, 1], rat(4)));
    }

    #[test]
    fn shift_group_law() {
        let p = MultiPoly::from_terms(
            2,
            [(vec![2, 1], rat(3)), (vec![0, 3], rat(-1)), (vec![1, 0], ratio(1, 2))],
        )
        .unwrap();
        let a = [rat(1), ratio(-2, 3)];
        let b = [rat(-1), ratio(2, 3)];
        assert_eq!(p.taylor_shift(&a).unwrap().taylor_shift(&b).unwrap(), p);
        let at = [rat(2), rat(5)];
        let shifted = p.taylor_shift(&a).unwrap();
        let moved = [&at[0] + &a[0], &at[1] + &a[1]];
        assert_eq!(shifted.eval(&at).unwrap(), p.eval(&moved).unwrap());
    }

    #[test]
    fn ff_inner_orthogonality() {
        let a = MultiPoly::monomial(vec![2, 1], rat(1));
        let b = MultiPoly::monomial(vec![1, 2], rat(1));
        assert_eq!(a.ff_inner(&b).unwrap(), rat(0));
        assert_eq!(a.ff_inner(&a).unwrap(), rat(2));
    }

    #[test]
    fn lex_indices() {
        let idx = indices_below(&[1, 1]);
        assert_eq!(idx, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(indices_below(&[]), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn display() {
        let p = MultiPoly::from_terms(2, [(vec![1, 1], rat(-1)), (vec![0, 0], rat(1))]).unwrap();
        assert_eq!(p.to_string(), "-x1*x2 + 1");
    }
}
