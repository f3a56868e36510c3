#![allow(dead_code)]

use num_bigint::BigInt;
use polypos::moments::AtomicMeasureFamily;
use polypos::poly::MultiPoly;
use polypos::rational::Rational;
use polypos::{UniPoly, WeylOp};
use rand::Rng;

pub fn int(rng: &mut impl Rng, h: i64) -> Rational {
    Rational::from_integer(BigInt::from(rng.random_range(-h..=h)))
}

/// Small rational with numerator in `[-h, h]` and denominator in `[1, den]`.
pub fn small_rat(rng: &mut impl Rng, h: i64, den: i64) -> Rational {
    Rational::new(
        BigInt::from(rng.random_range(-h..=h)),
        BigInt::from(rng.random_range(1..=den)),
    )
}

pub fn pos_rat(rng: &mut impl Rng, h: i64, den: i64) -> Rational {
    Rational::new(
        BigInt::from(rng.random_range(1..=h)),
        BigInt::from(rng.random_range(1..=den)),
    )
}

pub fn poly(rng: &mut impl Rng, degree: usize, h: i64) -> UniPoly {
    UniPoly::new((0..=degree).map(|_| int(rng, h)).collect())
}

/// Polynomial of exact degree `degree`.
pub fn poly_exact(rng: &mut impl Rng, degree: usize, h: i64) -> UniPoly {
    loop {
        let p = poly(rng, degree, h);
        if p.degree() == Some(degree) {
            return p;
        }
    }
}

/// Random operator of order at most `order` with coefficient degree at most
/// `coeff_degree`.
pub fn operator(rng: &mut impl Rng, order: usize, coeff_degree: usize, h: i64) -> WeylOp {
    WeylOp::new((0..=order).map(|_| poly(rng, coeff_degree, h)).collect())
}

/// Operator whose leading coefficient `q_order` is not identically zero.
pub fn operator_exact(rng: &mut impl Rng, order: usize, coeff_degree: usize, h: i64) -> WeylOp {
    let mut q: Vec<UniPoly> = (0..order).map(|_| poly(rng, coeff_degree, h)).collect();
    loop {
        let lead = poly(rng, coeff_degree, h);
        if !lead.is_zero() {
            q.push(lead);
            return WeylOp::new(q);
        }
    }
}

/// `q0 = a (x - b)^2 + c`, constant `q1`, non-negative constant `q2`: these
/// preserve the cone fairly often, so both verdicts get exercised.
pub fn near_preserver(rng: &mut impl Rng) -> WeylOp {
    let a = Rational::from_integer(rng.random_range(0..=3).into());
    let b = int(rng, 2);
    let c = Rational::from_integer(rng.random_range(0..=3).into());
    let lin = UniPoly::new(vec![-b, Rational::from_integer(1.into())]);
    let q0 = lin.square().scale(&a) + UniPoly::constant(c);
    let q1 = UniPoly::constant(int(rng, 2));
    let q2 = UniPoly::constant(Rational::from_integer(rng.random_range(0..=3).into()));
    WeylOp::new(vec![q0, q1, q2])
}

/// Distinct rational atoms with positive rational weights.
pub fn atomic_measure(rng: &mut impl Rng, max_atoms: usize) -> AtomicMeasureFamily {
    let r = rng.random_range(1..=max_atoms);
    let mut atoms: Vec<Rational> = Vec::new();
    while atoms.len() < r {
        let t = small_rat(rng, 6, 3);
        if !atoms.contains(&t) {
            atoms.push(t);
        }
    }
    let weights = (0..r).map(|_| pos_rat(rng, 5, 4)).collect();
    AtomicMeasureFamily::univariate(atoms, weights).expect("distinct atoms")
}

/// Multivariate polynomial with random integer coefficients on `beta <= bound`.
pub fn mpoly(rng: &mut impl Rng, bound: &[u32], h: i64) -> MultiPoly {
    let terms = polypos::poly::indices_below(bound)
        .into_iter()
        .map(|e| (e, int(rng, h)))
        .collect::<Vec<_>>();
    MultiPoly::from_terms(bound.len(), terms).unwrap()
}

pub fn point(rng: &mut impl Rng, n: usize, h: i64, den: i64) -> Vec<Rational> {
    (0..n).map(|_| small_rat(rng, h, den)).collect()
}

/// Polynomial of random degree in `lo..=hi`.
pub fn poly_upto(rng: &mut impl Rng, lo: usize, hi: usize, h: i64) -> UniPoly {
    let degree = rng.random_range(lo..=hi);
    poly(rng, degree, h)
}
