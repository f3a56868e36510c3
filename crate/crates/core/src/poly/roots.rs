//! Real-root analysis over the rationals.
//!
//! Square-free parts come from Yun's algorithm; real roots are counted with
//! Sturm chains and isolated by bisection on dyadic intervals. Every answer
//! is exact: there is no floating point anywhere in this module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use serde::{Deserialize, Serialize};

use crate::decision::Decision;
use crate::error::{Error, Result};
use crate::poly::uni::UniPoly;
use crate::rational::{denominator_lcm, midpoint, rat, simple_between, Rational};

/// `p = constant * prod f_i^{m_i}` with monic, square-free, pairwise coprime `f_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub constant: Rational,
    pub factors: Vec<(UniPoly, usize)>,
}

impl SquarefreeDecomposition {
    /// Product of the factors, i.e. the monic square-free part.
    pub fn squarefree_part(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::one(), |acc, (f, _)| &acc * f)
    }

    /// Product of the factors with odd multiplicity.
    pub fn odd_part(&self) -> UniPoly {
        self.factors
            .iter()
            .filter(|(_, m)| m % 2 == 1)
            .fold(UniPoly::one(), |acc, (f, _)| &acc * f)
    }

    pub fn expand(&self) -> UniPoly {
        self.factors.iter().fold(
            UniPoly::constant(self.constant.clone()),
            |acc, (f, m)| &acc * &f.pow(*m as u32),
        )
    }
}

/// Yun's square-free decomposition.
pub fn squarefree_decompose(p: &UniPoly) -> Result<SquarefreeDecomposition> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let constant = p.leading();
    let f = p.monic();
    let mut factors = Vec::new();
    if f.degree() == Some(0) {
        return Ok(SquarefreeDecomposition { constant, factors });
    }
    let df = f.derivative(1);
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0);
    let mut c = df.exact_div(&a0);
    let mut d = &c - &b.derivative(1);
    let mut i = 1;
    while b.degree().is_some_and(|k| k > 0) {
        let a = b.gcd(&d);
        if a.degree().is_some_and(|k| k > 0) {
            factors.push((a.clone(), i));
        }
        b = b.exact_div(&a);
        c = d.exact_div(&a);
        d = &c - &b.derivative(1);
        i += 1;
    }
    Ok(SquarefreeDecomposition { constant, factors })
}

/// Number of distinct real roots; 0 for the zero polynomial.
pub fn count_real_roots(p: &UniPoly) -> usize {
    SturmChain::raw(p).map_or(0, |c| c.count(&CountRange::All))
}

pub fn is_squarefree(p: &UniPoly) -> bool {
    !p.is_zero() && p.gcd(&p.derivative(1)).degree() == Some(0)
}

/// Interval over which real roots are counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountRange {
    /// The whole real line.
    All,
    /// The half-open interval `(lo, hi]`.
    HalfOpen(Rational, Rational),
}

#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<UniPoly>,
}

fn sign(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

fn changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

impl SturmChain {
    /// Builds the chain `p, p', -rem(p, p'), ...`. `p` must be square-free.
    pub fn new(p: &UniPoly) -> Result<Self> {
        let chain = Self::raw(p)?;
        if chain.chain.last().and_then(|q| q.degree()) != Some(0) {
            return Err(Error::NotSquareFree);
        }
        Ok(chain)
    }

    /// The chain without the square-free requirement. Its last element is
    /// `gcd(p, p')` up to a positive factor, and counts still give the number
    /// of distinct roots: dividing the chain by the gcd changes no signs away
    /// from the roots.
    pub fn raw(p: &UniPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        // positive rescaling keeps signs and keeps coefficients small
        let mut chain = vec![p.primitive(), p.derivative(1).primitive()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(-r.primitive());
        }
        Ok(SturmChain { chain })
    }

    pub fn sign_changes_at(&self, x: &Rational) -> usize {
        changes(self.chain.iter().map(|q| sign(&q.eval(x))))
    }

    fn sign_changes_at_infinity(&self, positive: bool) -> usize {
        changes(self.chain.iter().map(|q| {
            let s = sign(&q.leading());
            let odd = q.degree().unwrap_or(0) % 2 == 1;
            if !positive && odd {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of distinct real roots in the range.
    pub fn count(&self, range: &CountRange) -> usize {
        match range {
            CountRange::All => self.sign_changes_at_infinity(false) - self.sign_changes_at_infinity(true),
            CountRange::HalfOpen(lo, hi) => {
                if lo >= hi {
                    return 0;
                }
                self.sign_changes_at(lo) - self.sign_changes_at(hi)
            }
        }
    }
}

/// Distinct real roots of a square-free polynomial in `range`.
pub fn sturm_count(p: &UniPoly, range: &CountRange) -> Result<usize> {
    Ok(SturmChain::new(p)?.count(range))
}

/// Isolating intervals for all real roots, ascending.
///
/// Interval `i` is open, contains exactly one real root, and its endpoints
/// are not roots. `factors[i]` is the square-free factor vanishing there and
/// `multiplicities[i]` the root's multiplicity in the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootIsolation {
    pub intervals: Vec<(Rational, Rational)>,
    pub multiplicities: Vec<usize>,
    pub factors: Vec<UniPoly>,
}

impl RootIsolation {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Power of two strictly above the absolute value of every real root.
fn root_bound(p: &UniPoly) -> Rational {
    let lc = p.leading().abs();
    let cauchy = p
        .coeffs()
        .iter()
        .take(p.coeffs().len().saturating_sub(1))
        .map(|c| c.abs() / &lc)
        .fold(Rational::zero(), |m, c| if c > m { c } else { m })
        + Rational::one();
    let mut b = Rational::one();
    while b < cauchy {
        b *= rat(2);
    }
    b
}

/// A split point strictly inside `(lo, hi)` that is not a root of `p`.
fn split_point(p: &UniPoly, lo: &Rational, hi: &Rational) -> Rational {
    let m = midpoint(lo, hi);
    if !p.eval(&m).is_zero() {
        return m;
    }
    let w = hi - lo;
    for k in 3i64.. {
        for j in 1..k {
            let c = lo + &w * Rational::new(BigInt::from(j), BigInt::from(k));
            if !p.eval(&c).is_zero() {
                return c;
            }
        }
    }
    unreachable!()
}

/// Isolates every real root of `p`.
pub fn isolate_real_roots(p: &UniPoly) -> Result<RootIsolation> {
    let dec = squarefree_decompose(p)?;
    let sqf = dec.squarefree_part();
    let mut out = RootIsolation {
        intervals: Vec::new(),
        multiplicities: Vec::new(),
        factors: Vec::new(),
    };
    if sqf.degree() == Some(0) {
        return Ok(out);
    }
    let chain = SturmChain::new(&sqf)?;
    let b = root_bound(&sqf);
    let mut found = Vec::new();
    // depth-first, left half first, so the output is ascending
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = chain.count(&CountRange::HalfOpen(lo.clone(), hi.clone()));
        match n {
            0 => {}
            1 => found.push((lo, hi)),
            _ => {
                let m = split_point(&sqf, &lo, &hi);
                stack.push((m.clone(), hi));
                stack.push((lo, m));
            }
        }
    }
    let chains: Vec<(SturmChain, &UniPoly, usize)> = dec
        .factors
        .iter()
        .map(|(f, m)| Ok((SturmChain::new(f)?, f, *m)))
        .collect::<Result<_>>()?;
    for (lo, hi) in found {
        let range = CountRange::HalfOpen(lo.clone(), hi.clone());
        let (_, f, m) = chains
            .iter()
            .find(|(c, _, _)| c.count(&range) == 1)
            .expect("coprime factors partition the roots");
        out.intervals.push((lo, hi));
        out.multiplicities.push(*m);
        out.factors.push((*f).clone());
    }
    Ok(out)
}

/// The root of square-free `f` in `(lo, hi)`, if it is rational.
///
/// Requires exactly one root of `f` in the open interval and no root at the
/// endpoints. A rational root `r` of the primitive integer form of `f` with
/// leading coefficient `L` satisfies `L r ∈ ℤ`, so it suffices to shrink the
/// interval below width `1/L` and test the single candidate.
pub fn rational_root_in(f: &UniPoly, lo: &Rational, hi: &Rational) -> Option<Rational> {
    if f.degree() == Some(1) {
        return Some(-f.coeff(0) / f.coeff(1));
    }
    let den = denominator_lcm(f.coeffs());
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let lead = Rational::from_integer((ints.last().unwrap() / &content).abs());
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let mut s_lo = sign(&f.eval(&lo));
    while (&hi - &lo) * &lead >= Rational::one() {
        let m = midpoint(&lo, &hi);
        let s = sign(&f.eval(&m));
        if s == 0 {
            return Some(m);
        }
        if s == s_lo {
            lo = m;
            s_lo = s;
        } else {
            hi = m;
        }
    }
    let k = (&lo * &lead).floor() + Rational::one();
    if k < &hi * &lead {
        let cand = k / lead;
        if f.eval(&cand).is_zero() {
            return Some(cand);
        }
    }
    None
}

/// A real root given by a square-free factor and an isolating interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatedRoot {
    #[serde(serialize_with = "crate::text::ser_poly_x", deserialize_with = "crate::text::de_poly_x")]
    pub factor: UniPoly,
    #[serde(serialize_with = "crate::text::ser_rational", deserialize_with = "crate::text::de_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "crate::text::ser_rational", deserialize_with = "crate::text::de_rational")]
    pub hi: Rational,
}

impl IsolatedRoot {
    /// Exact check that `p` vanishes at this root: the factor is square-free,
    /// has exactly one root in `(lo, hi)` and none at the endpoints, and
    /// divides `p`.
    pub fn is_root_of(&self, p: &UniPoly) -> bool {
        if self.lo >= self.hi || self.factor.degree().unwrap_or(0) == 0 {
            return false;
        }
        let Ok(chain) = SturmChain::new(&self.factor) else {
            return false;
        };
        self.factor.eval(&self.lo) != Rational::zero()
            && self.factor.eval(&self.hi) != Rational::zero()
            && chain.count(&CountRange::HalfOpen(self.lo.clone(), self.hi.clone())) == 1
            && p.rem(&self.factor).is_zero()
    }

    /// Bisects until the interval is at most `width` wide. Returns the exact
    /// value if a midpoint lands on the root.
    pub fn refine(&self, width: &Rational) -> RealPoint {
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        let s_lo = sign(&self.factor.eval(&lo));
        while &hi - &lo > *width {
            let m = midpoint(&lo, &hi);
            let s = sign(&self.factor.eval(&m));
            if s == 0 {
                return RealPoint::Rational(m);
            }
            if s == s_lo {
                lo = m;
            } else {
                hi = m;
            }
        }
        RealPoint::Root(IsolatedRoot {
            factor: self.factor.clone(),
            lo,
            hi,
        })
    }
}

/// A real point: rational, or an algebraic number given by isolation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RealPoint {
    Rational(
        #[serde(serialize_with = "crate::text::ser_rational", deserialize_with = "crate::text::de_rational")]
        Rational,
    ),
    Root(IsolatedRoot),
}

impl std::fmt::Display for RealPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RealPoint::Rational(q) => f.write_str(&crate::rational::fmt_rational(q)),
            RealPoint::Root(r) => write!(
                f,
                "root of {} in ({}, {})",
                r.factor,
                crate::rational::fmt_rational(&r.lo),
                crate::rational::fmt_rational(&r.hi)
            ),
        }
    }
}

impl RealPoint {
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            RealPoint::Rational(q) => Some(q),
            RealPoint::Root(_) => None,
        }
    }
}

/// Some real root of `p`, exact; `None` when `p` has no real roots.
/// The zero polynomial vanishes at 0.
pub fn find_real_root(p: &UniPoly) -> Option<RealPoint> {
    if p.is_zero() {
        return Some(RealPoint::Rational(Rational::zero()));
    }
    let iso = isolate_real_roots(p).ok()?;
    // prefer a rational root if any interval has one
    for ((lo, hi), f) in iso.intervals.iter().zip(&iso.factors) {
        if let Some(r) = rational_root_in(f, lo, hi) {
            return Some(RealPoint::Rational(r));
        }
    }
    let ((lo, hi), f) = iso.intervals.first().zip(iso.factors.first())?;
    Some(RealPoint::Root(IsolatedRoot {
        factor: f.clone(),
        lo: lo.clone(),
        hi: hi.clone(),
    }))
}

/// Sample points covering every root-free gap of `p`, scanned right to left.
fn gap_points(iso: &RootIsolation) -> Vec<Rational> {
    let Some(((_, last_hi), (first_lo, _))) = iso.intervals.last().zip(iso.intervals.first()) else {
        return vec![Rational::zero()];
    };
    let mut pts = vec![last_hi.ceil()];
    for w in iso.intervals.windows(2).rev() {
        let (a, b) = (&w[0].1, &w[1].0);
        pts.push(if a == b { a.clone() } else { simple_between(a, b) });
    }
    pts.push(first_lo.floor());
    pts
}

/// Decides `p(x) >= 0` for all real `x`. On failure returns `x0` with
/// `p(x0) < 0`.
pub fn nonneg_on_r(p: &UniPoly) -> Decision<Rational> {
    if p.is_zero() {
        return Decision::Holds;
    }
    if count_real_roots(p) == 0 {
        // constant sign, that of the leading coefficient
        return if p.leading().is_positive() {
            Decision::Holds
        } else {
            Decision::Fails(Rational::zero())
        };
    }
    let dec = squarefree_decompose(p).expect("nonzero");
    let odd = dec.odd_part();
    let odd_roots = if odd.degree() == Some(0) {
        0
    } else {
        sturm_count(&odd, &CountRange::All).expect("square-free")
    };
    if dec.constant.is_positive() && odd_roots == 0 {
        return Decision::Holds;
    }
    let iso = isolate_real_roots(p).expect("nonzero");
    // the sign is constant on each gap, so one of these points is negative
    let x0 = gap_points(&iso)
        .into_iter()
        .find(|x| p.eval(x).is_negative())
        .expect("a negative gap exists");
    Decision::Fails(x0)
}

/// Decides `p(x) > 0` for all real `x`. On failure returns a point where
/// `p <= 0`: rational when one exists among the sampled points or roots,
/// otherwise an isolated irrational root.
pub fn positive_on_r(p: &UniPoly) -> Decision<RealPoint> {
    if p.is_zero() {
        return Decision::Fails(RealPoint::Rational(Rational::zero()));
    }
    if p.is_constant() {
        return if p.leading().is_positive() {
            Decision::Holds
        } else {
            Decision::Fails(RealPoint::Rational(Rational::zero()))
        };
    }
    if count_real_roots(p) == 0 {
        return if p.leading().is_positive() {
            Decision::Holds
        } else {
            Decision::Fails(RealPoint::Rational(Rational::zero()))
        };
    }
    if let Decision::Fails(x0) = nonneg_on_r(p) {
        return Decision::Fails(RealPoint::Rational(x0));
    }
    match find_real_root(p) {
        None => Decision::Holds,
        Some(pt) => Decision::Fails(pt),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn yun_examples() {
        let d = squarefree_decompose(&p(&[1, 0, -2, 0, 1])).unwrap();
        assert_eq!(d.factors, vec![(p(&[-1, 0, 1]), 2)]);
        assert_eq!(d.constant, rat(1));
        let d = squarefree_decompose(&p(&[0, 0, 0, 1])).unwrap();
        assert_eq!(d.factors, vec![(p(&[0, 1]), 3)]);
        let d = squarefree_decompose(&p(&[0, -1, 0, 1])).unwrap();
        assert_eq!(d.factors, vec![(p(&[0, -1, 0, 1]), 1)]);
        assert_eq!(squarefree_decompose(&UniPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn yun_mixed_multiplicities() {
        // 3 (x-1) (x+2)^2 x^3
        let q = p(&[-1, 1]).scale(&rat(3)) * p(&[2, 1]).pow(2) * p(&[0, 1]).pow(3);
        let d = squarefree_decompose(&q).unwrap();
        assert_eq!(d.constant, rat(3));
        assert_eq!(
            d.factors,
            vec![(p(&[-1, 1]), 1), (p(&[2, 1]), 2), (p(&[0, 1]), 3)]
        );
        assert_eq!(d.expand(), q);
    }

    #[test]
    fn sturm_examples() {
        assert_eq!(sturm_count(&p(&[-2, 0, 1]), &CountRange::All).unwrap(), 2);
        assert_eq!(sturm_count(&p(&[1, 0, 1]), &CountRange::All).unwrap(), 0);
        let r = CountRange::HalfOpen(rat(0), rat(5));
        assert_eq!(sturm_count(&p(&[0, 1]), &r).unwrap(), 0);
        let r = CountRange::HalfOpen(rat(-1), rat(0));
        assert_eq!(sturm_count(&p(&[0, 1]), &r).unwrap(), 1);
        assert_eq!(
            sturm_count(&p(&[1, -2, 1]), &CountRange::All),
            Err(Error::NotSquareFree)
        );
    }

    #[test]
    fn isolation_examples() {
        let iso = isolate_real_roots(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(iso.len(), 2);
        assert_eq!(iso.multiplicities, vec![1, 1]);
        let f = p(&[-2, 0, 1]);
        for (lo, hi) in &iso.intervals {
            assert!((f.eval(lo) * f.eval(hi)).is_negative());
        }
        assert!(iso.intervals[0].1 <= iso.intervals[1].0);

        assert!(isolate_real_roots(&p(&[1, 0, 1])).unwrap().is_empty());

        let iso = isolate_real_roots(&p(&[1, -2, 1])).unwrap();
        assert_eq!(iso.multiplicities, vec![2]);
        let (lo, hi) = &iso.intervals[0];
        assert!(lo < &rat(1) && &rat(1) < hi);
    }

    #[test]
    fn isolation_close_roots() {
        // roots 1/3, 1/2, 1 and a double root at 0
        let q = p(&[-1, 3]) * p(&[-1, 2]) * p(&[-1, 1]) * p(&[0, 0, 1]);
        let iso = isolate_real_roots(&q).unwrap();
        assert_eq!(iso.multiplicities, vec![2, 1, 1, 1]);
        for w in iso.intervals.windows(2) {
            assert!(w[0].1 <= w[1].0);
        }
        for ((lo, hi), f) in iso.intervals.iter().zip(&iso.factors) {
            assert!(!q.eval(lo).is_zero() && !q.eval(hi).is_zero());
            assert!(rational_root_in(f, lo, hi).is_some());
        }
    }

    #[test]
    fn rational_root_detection() {
        // (3x - 2)(x^2 - 2), isolate the root 2/3
        let q = p(&[-2, 3]) * p(&[-2, 0, 1]);
        assert_eq!(rational_root_in(&q, &rat(0), &rat(1)), Some(ratio(2, 3)));
        assert_eq!(rational_root_in(&q, &rat(1), &rat(2)), None);
    }

    #[test]
    fn nonneg_examples() {
        assert_eq!(nonneg_on_r(&p(&[1, 0, 1])), Decision::Holds);
        assert_eq!(nonneg_on_r(&p(&[0, 0, 0, 1])), Decision::Fails(rat(-1)));
        assert_eq!(nonneg_on_r(&p(&[-2, 0, 1]).square()), Decision::Holds);
        assert_eq!(nonneg_on_r(&UniPoly::zero()), Decision::Holds);
        assert_eq!(nonneg_on_r(&p(&[-1])), Decision::Fails(rat(0)));
        assert_eq!(nonneg_on_r(&p(&[0, 0, -1])), Decision::Fails(rat(1)));
        // negative only between the two close roots 1/3 and 1/2
        let q = p(&[-1, 3]) * p(&[-1, 2]);
        let x0 = nonneg_on_r(&q).into_failure().unwrap();
        assert!(q.eval(&x0) < rat(0));
    }

    #[test]
    fn positive_examples() {
        assert_eq!(positive_on_r(&p(&[1, 0, 1])), Decision::Holds);
        assert_eq!(
            positive_on_r(&p(&[0, 0, 1])),
            Decision::Fails(RealPoint::Rational(rat(0)))
        );
        assert_eq!(positive_on_r(&p(&[5])), Decision::Holds);
        assert_eq!(
            positive_on_r(&UniPoly::zero()),
            Decision::Fails(RealPoint::Rational(rat(0)))
        );
        let sq = p(&[-2, 0, 1]).square();
        match positive_on_r(&sq) {
            Decision::Fails(RealPoint::Root(r)) => assert!(r.is_root_of(&sq)),
            other => panic!("expected irrational root, got {other:?}"),
        }
    }
}
