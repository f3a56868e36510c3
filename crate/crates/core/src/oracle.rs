//! Randomized falsification and witness checking.
//!
//! Samples are random sums of squares (plus a positive constant for the
//! POS and ELL cones). The image membership test is exact, so a returned
//! witness is a proof of non-preservation; `None` is only evidence.
//!
//! Trial `i` draws from ChaCha stream `i` of the base seed, so a run is
//! reproducible from the seed alone and trials are independent.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decide::{Cone, Witness};
use crate::decision::Decision;
use crate::error::Result;
use crate::poly::multi::{indices_below, Exponent};
use crate::poly::{count_real_roots, find_real_root, nonneg_on_r, positive_on_r, MultiPoly, RealPoint, UniPoly};
use crate::rational::Rational;
use crate::weyl::{MultiWeylOp, WeylOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SampleSpec {
    /// Degree bound `d`; each square root has degree at most `d / 2`.
    pub degree: usize,
    /// Number of squares.
    pub squares: usize,
    /// Integer coefficients are drawn from `[-height, height]`.
    pub height: i64,
    pub trials: usize,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(degree: usize, trials: usize, seed: u64) -> Self {
        SampleSpec {
            degree,
            squares: 2,
            height: 5,
            trials,
            seed,
        }
    }
}

/// Generator for trial `trial` of a run with base seed `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SosSample {
    pub f: UniPoly,
    pub roots: Vec<UniPoly>,
}

fn random_int(rng: &mut impl Rng, height: i64) -> Rational {
    Rational::from_integer(rng.random_range(-height..=height).into())
}

pub fn random_poly(rng: &mut impl Rng, degree: usize, height: i64) -> UniPoly {
    UniPoly::new((0..=degree).map(|_| random_int(rng, height)).collect())
}

/// `f = sum_j g_j^2` with random integer `g_j` of degree at most `d / 2`.
pub fn random_sos(rng: &mut impl Rng, spec: &SampleSpec) -> SosSample {
    let roots: Vec<UniPoly> = (0..spec.squares.max(1))
        .map(|_| random_poly(rng, spec.degree / 2, spec.height.max(1)))
        .collect();
    let f = roots.iter().fold(UniPoly::zero(), |acc, g| acc + g.square());
    SosSample { f, roots }
}

fn random_epsilon(rng: &mut impl Rng, height: i64) -> Rational {
    let h = height.max(1);
    Rational::new(rng.random_range(1..=h).into(), rng.random_range(1..=h).into())
}

/// One trial: a sample from the cone and, if its image leaves the cone, the
/// witness.
pub fn trial(t: &WeylOp, cone: Cone, spec: &SampleSpec, index: usize) -> Option<Witness> {
    let mut rng = trial_rng(spec.seed, index);
    let s = random_sos(&mut rng, spec);
    let epsilon = match cone {
        Cone::Sos => Rational::zero(),
        Cone::Pos | Cone::Ell => random_epsilon(&mut rng, spec.height),
    };
    let input = &s.f + &UniPoly::constant(epsilon.clone());
    let image = t.apply(&input);
    let point = match cone {
        Cone::Sos => match nonneg_on_r(&image) {
            Decision::Holds => return None,
            Decision::Fails(x0) => RealPoint::Rational(x0),
        },
        Cone::Pos => match positive_on_r(&image) {
            Decision::Holds => return None,
            Decision::Fails(p) => p,
        },
        Cone::Ell => {
            if !image.is_zero() && count_real_roots(&image) == 0 {
                return None;
            }
            find_real_root(&image).expect("not elliptic means a real zero")
        }
    };
    let value = match &point {
        RealPoint::Rational(x0) => image.eval(x0),
        RealPoint::Root(_) => Rational::zero(),
    };
    let n = s.roots.len();
    Some(Witness {
        cone,
        sign: 1,
        degree_bound: spec.degree,
        squares: s.roots,
        weights: vec![Rational::one(); n],
        epsilon,
        h: s.f,
        point,
        value,
        shift: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub seed: u64,
    pub trials_run: usize,
    /// Index of the trial that produced the witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Runs up to `spec.trials` trials and stops at the first counterexample.
pub fn falsify_preservation(t: &WeylOp, cone: Cone, spec: &SampleSpec) -> OracleReport {
    for i in 0..spec.trials {
        if let Some(w) = trial(t, cone, spec, i) {
            return OracleReport {
                seed: spec.seed,
                trials_run: i + 1,
                trial: Some(i),
                witness: Some(w),
            };
        }
    }
    OracleReport {
        seed: spec.seed,
        trials_run: spec.trials,
        trial: None,
        witness: None,
    }
}

/// Does `w` prove that `T` does not preserve `cone`? SOS and POS witnesses
/// must be about `T` itself (`sign = 1`).
pub fn verify_witness(t: &WeylOp, w: &Witness, cone: Cone) -> bool {
    w.cone == cone && w.sign == 1 && w.verify(t)
}

/// Image of a random multivariate sum of squares that is negative at a grid
/// point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvHit {
    pub roots: Vec<MultiPoly>,
    pub f: MultiPoly,
    pub point: Vec<Rational>,
    pub value: Rational,
}

pub fn random_mpoly(rng: &mut impl Rng, support: &[Exponent], arity: usize, height: i64) -> MultiPoly {
    let terms = support.iter().map(|e| (e.clone(), random_int(rng, height)));
    MultiPoly::from_terms(arity, terms).expect("support has the right arity")
}

/// Samples `f = sum_j g_j^2` with `g_j` supported on `beta <= alpha` and
/// looks for a point of `points` where `T(f)` is negative.
pub fn falsify_mv_images(
    t: &MultiWeylOp,
    alpha: &[u32],
    spec: &SampleSpec,
    points: &[Vec<Rational>],
) -> Result<Option<MvHit>> {
    let n = alpha.len();
    let support = indices_below(alpha);
    for i in 0..spec.trials {
        let mut rng = trial_rng(spec.seed, i);
        let roots: Vec<MultiPoly> = (0..spec.squares.max(1))
            .map(|_| random_mpoly(&mut rng, &support, n, spec.height.max(1)))
            .collect();
        let mut f = MultiPoly::zero(n);
        for g in &roots {
            f = f.add(&g.square())?;
        }
        let image = t.apply(&f)?;
        for p in points {
            let value = image.eval(p)?;
            if value.is_negative() {
                return Ok(Some(MvHit {
                    roots,
                    f,
                    point: p.clone(),
                    value,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::decide_sos_bounded;
    use crate::rational::rat;

    #[test]
    fn finds_derivative_violation() {
        let t = WeylOp::derivative(1);
        let r = falsify_preservation(&t, Cone::Sos, &SampleSpec::new(2, 50, 7));
        let w = r.witness.unwrap();
        assert!(verify_witness(&t, &w, Cone::Sos));
        let r = falsify_preservation(&t, Cone::Ell, &SampleSpec::new(2, 50, 7));
        assert!(verify_witness(&t, &r.witness.unwrap(), Cone::Ell));
    }

    #[test]
    fn no_false_alarms() {
        for t in [WeylOp::identity(), WeylOp::derivative(2)] {
            assert!(falsify_preservation(&t, Cone::Sos, &SampleSpec::new(2, 200, 1)).witness.is_none());
        }
        assert!(falsify_preservation(&WeylOp::identity(), Cone::Pos, &SampleSpec::new(4, 200, 1))
            .witness
            .is_none());
    }

    #[test]
    fn deterministic() {
        let t = WeylOp::new(vec![UniPoly::x(), UniPoly::one()]);
        let a = falsify_preservation(&t, Cone::Pos, &SampleSpec::new(4, 30, 99));
        let b = falsify_preservation(&t, Cone::Pos, &SampleSpec::new(4, 30, 99));
        assert_eq!(a, b);
    }

    #[test]
    fn verify_examples() {
        let t = WeylOp::derivative(1);
        let w = decide_sos_bounded(&t, 2).witness().unwrap().clone();
        assert!(verify_witness(&t, &w, Cone::Sos));
        let mut bad = w.clone();
        bad.value = rat(-1);
        assert!(!verify_witness(&t, &bad, Cone::Sos));
        let mut bad = w.clone();
        bad.degree_bound = 0;
        assert!(!verify_witness(&t, &bad, Cone::Sos));
        assert!(!verify_witness(&t, &w, Cone::Pos));
    }

    #[test]
    fn random_sos_examples() {
        let mut rng = trial_rng(3, 0);
        let spec = SampleSpec::new(6, 1, 3);
        for _ in 0..20 {
            let s = random_sos(&mut rng, &spec);
            assert!(s.f.degree().unwrap_or(0) <= 6);
            assert!(nonneg_on_r(&s.f).holds());
        }
    }
}
