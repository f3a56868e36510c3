//! Verdicts for SOS, POS and ELL preservation, with certificates.
//!
//! At degree bound `d = 2k`, `T` maps non-negative polynomials of degree at
//! most `d` to non-negative polynomials iff `H_{y,k}` is positive
//! semidefinite for every real `y`. POS preservation additionally needs
//! `T(1) = q_0 > 0` on the line, and ELL preservation is POS preservation
//! of `T` or of `-T`.
//!
//! A failed PSD test at `y0` with direction `c` gives the counterexample
//! `h(x) = g(x - y0)^2`, `g = sum c_i x^i`, for which `T(h)(y0) = c^T H_{y0} c`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::decision::Decision;
use crate::error::{Error, Result};
use crate::hankel::{
    leading_minors, pd_for_all_y, psd_at_point, psd_minor_scan, MinorReport, MinorStatus, ParamHankel,
};
use crate::linalg::quadratic_form;
use crate::poly::{find_real_root, nonneg_on_r, positive_on_r, RealPoint, UniPoly};
use crate::rational::{abs, fmt_rational, Rational};
use crate::weyl::WeylOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Cone {
    Sos,
    Pos,
    Ell,
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cone::Sos => "SOS",
            Cone::Pos => "POS",
            Cone::Ell => "ELL",
        })
    }
}

impl FromStr for Cone {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sos" => Ok(Cone::Sos),
            "pos" => Ok(Cone::Pos),
            "ell" => Ok(Cone::Ell),
            _ => Err(Error::InvalidInput(format!("unknown cone `{s}` (sos, pos or ell)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeBound {
    Bounded(usize),
    Unbounded,
}

impl Serialize for DegreeBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DegreeBound::Bounded(d) => s.serialize_u64(*d as u64),
            DegreeBound::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl fmt::Display for DegreeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeBound::Bounded(d) => write!(f, "{d}"),
            DegreeBound::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Preserves,
    Violates,
}

/// A polynomial `f = sum_j w_j g_j^2 + epsilon` of degree at most
/// `degree_bound` and a point where `sign * T(f)` fails the cone condition.
///
/// * SOS: `epsilon >= 0`, `sign = 1`, `value < 0`.
/// * POS: `epsilon > 0`, `value <= 0` (the witness is about `sign * T`).
/// * ELL: `epsilon > 0`, `sign = 1`, `value = 0`, so `T(f)` has a real zero.
///
/// `value` is `sign * T(f)` at `point`; at an irrational point it is 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub cone: Cone,
    pub sign: i8,
    pub degree_bound: usize,
    #[serde(serialize_with = "crate::text::ser_polys_x", deserialize_with = "crate::text::de_polys_x")]
    pub squares: Vec<UniPoly>,
    #[serde(serialize_with = "crate::text::ser_rationals", deserialize_with = "crate::text::de_rationals")]
    pub weights: Vec<Rational>,
    #[serde(serialize_with = "crate::text::ser_rational", deserialize_with = "crate::text::de_rational")]
    pub epsilon: Rational,
    #[serde(serialize_with = "crate::text::ser_poly_x", deserialize_with = "crate::text::de_poly_x")]
    pub h: UniPoly,
    pub point: RealPoint,
    #[serde(serialize_with = "crate::text::ser_rational", deserialize_with = "crate::text::de_rational")]
    pub value: Rational,
    /// The `y0` the construction was centred at, when it came from a Hankel
    /// matrix.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser_opt_rational",
        deserialize_with = "de_opt_rational"
    )]
    pub shift: Option<Rational>,
}

fn ser_opt_rational<S: Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&fmt_rational(q)),
        None => s.serialize_none(),
    }
}

fn de_opt_rational<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
    let s = Option::<String>::deserialize(d)?;
    s.map(|s| crate::rational::parse_rational(&s).map_err(serde::de::Error::custom))
        .transpose()
}

impl Witness {
    /// The tested input `f = h + epsilon`.
    pub fn input(&self) -> UniPoly {
        &self.h + &UniPoly::constant(self.epsilon.clone())
    }

    /// Exact re-verification against `T`.
    pub fn verify(&self, t: &WeylOp) -> bool {
        if self.squares.len() != self.weights.len() || self.weights.iter().any(|w| !w.is_positive()) {
            return false;
        }
        let h = self
            .squares
            .iter()
            .zip(&self.weights)
            .fold(UniPoly::zero(), |acc, (g, w)| acc + g.square().scale(w));
        if h != self.h || h.degree().unwrap_or(0) > self.degree_bound {
            return false;
        }
        let ok_shape = match self.cone {
            Cone::Sos => self.sign == 1 && !self.epsilon.is_negative() && self.value.is_negative(),
            Cone::Pos => {
                (self.sign == 1 || self.sign == -1)
                    && self.epsilon.is_positive()
                    && !self.value.is_positive()
            }
            Cone::Ell => self.sign == 1 && self.epsilon.is_positive() && self.value.is_zero(),
        };
        if !ok_shape {
            return false;
        }
        let op = if self.sign == 1 { t.clone() } else { t.neg() };
        let image = op.apply(&self.input());
        match &self.point {
            RealPoint::Rational(x0) => image.eval(x0) == self.value,
            RealPoint::Root(r) => self.value.is_zero() && r.is_root_of(&image),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PredicateReport {
    pub psd_all_y: bool,
    pub pd_all_y: bool,
    pub det_positive_all_m: bool,
    pub q0_positive: bool,
    pub q0_nonneg: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certificate {
    /// Every principal minor of the Hankel matrix, each non-negative on R.
    Minors(Vec<MinorReport>),
    Witness(Witness),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub cone: Cone,
    pub degree_bound: DegreeBound,
    pub result: Outcome,
    pub certificate: Certificate,
    /// For ELL: the witnesses for `T` and `-T` failing POS preservation.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub branch_witnesses: Vec<Witness>,
    /// `-1` when the certificate is about `-T` (ELL via `-T`).
    pub sign: i8,
    pub predicate_report: PredicateReport,
    /// Coefficients above the Hankel range were ignored (they vanish on the
    /// polynomials of degree at most `d`).
    pub truncation_flag: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
}

impl Verdict {
    pub fn preserves(&self) -> bool {
        self.result == Outcome::Preserves
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.certificate {
            Certificate::Witness(w) => Some(w),
            Certificate::Minors(_) => None,
        }
    }

    /// Re-checks the certificate: witnesses exactly, minor lists by
    /// recomputing the non-negativity of each minor.
    pub fn verify(&self, t: &WeylOp) -> bool {
        let op = if self.sign == -1 { t.neg() } else { t.clone() };
        match &self.certificate {
            Certificate::Witness(w) => {
                w.cone == self.cone && w.verify(t) && self.branch_witnesses.iter().all(|b| b.verify(t))
            }
            Certificate::Minors(ms) => {
                let k = ms.iter().flat_map(|m| m.subset.iter()).max().copied().unwrap_or(0);
                let h = ParamHankel::build(&op, k);
                let minors_ok = ms.iter().all(|m| {
                    m.status == MinorStatus::Nonneg
                        && crate::hankel::principal_minor(&h, &m.subset) == m.minor
                        && nonneg_on_r(&m.minor).holds()
                });
                let q0_ok = self.cone == Cone::Sos || positive_on_r(&op.coeff(0)).holds();
                minors_ok && q0_ok && ms.len() == (1usize << (k + 1)) - 1
            }
        }
    }
}

/// Even degree bound to use and an optional notice about reducing odd input.
fn normalize_degree(d: usize) -> (usize, Option<String>) {
    if d % 2 == 1 {
        (
            d - 1,
            Some(format!(
                "degree bound {d} is odd; non-negative polynomials of degree <= {d} have degree <= {}, so d = {} is used",
                d - 1,
                d - 1
            )),
        )
    } else {
        (d, None)
    }
}

pub struct StrictCriteria {
    pub pd_all_y: bool,
    pub det_positive_all_m: bool,
}

/// Positive definiteness of `H_{y,k}` for all `y`, and positivity of each
/// leading determinant `det H_{y,m}`, `m <= k`. Reported only.
pub fn strict_criteria(t: &WeylOp, d: usize) -> StrictCriteria {
    let h = ParamHankel::build(t, normalize_degree(d).0 / 2);
    StrictCriteria {
        pd_all_y: pd_for_all_y(&h).holds(),
        det_positive_all_m: leading_minors(&h).iter().all(|m| positive_on_r(m).holds()),
    }
}

fn predicate_report(t: &WeylOp, d: usize, psd: bool) -> PredicateReport {
    let strict = strict_criteria(t, d);
    let q0 = t.coeff(0);
    PredicateReport {
        psd_all_y: psd,
        pd_all_y: strict.pd_all_y,
        det_positive_all_m: strict.det_positive_all_m,
        q0_positive: positive_on_r(&q0).holds(),
        q0_nonneg: nonneg_on_r(&q0).holds(),
    }
}

/// `h = g(x - y0)^2` with `g = sum c_i x^i`, checked to satisfy
/// `T(h)(y0) = c^T H_{y0,k} c < 0`.
pub fn extract_witness(t: &WeylOp, d: usize, y0: &Rational, c: &[Rational]) -> Result<Witness> {
    let k = d / 2;
    if c.len() != k + 1 {
        return Err(Error::ArityMismatch {
            expected: k + 1,
            found: c.len(),
        });
    }
    let form = quadratic_form(&ParamHankel::build(t, k).at(y0), c);
    if !form.is_negative() {
        return Err(Error::Precondition(format!(
            "c^T H c = {} is not negative at y0 = {}",
            fmt_rational(&form),
            fmt_rational(y0)
        )));
    }
    let g = UniPoly::new(c.to_vec()).taylor_shift(&-y0);
    let h = g.square();
    let value = t.apply(&h).eval(y0);
    if value != form {
        return Err(Error::Precondition("witness failed re-verification".into()));
    }
    Ok(Witness {
        cone: Cone::Sos,
        sign: 1,
        degree_bound: d,
        squares: vec![g],
        weights: vec![Rational::one()],
        epsilon: Rational::zero(),
        h,
        point: RealPoint::Rational(y0.clone()),
        value,
        shift: Some(y0.clone()),
    })
}

/// PSD scan of `H_{y,d/2}`, with a witness on failure.
fn sos_core(t: &WeylOp, d: usize) -> std::result::Result<Vec<MinorReport>, Witness> {
    let h = ParamHankel::build(t, d / 2);
    match psd_minor_scan(&h) {
        Ok(ms) => Ok(ms),
        Err(report) => {
            let MinorStatus::FailsAt(y0) = report.status else {
                unreachable!("scan failures carry a point")
            };
            let dir = psd_at_point(&h, &y0)
                .into_failure()
                .expect("a negative principal minor at y0 means H(y0) is not PSD");
            Err(extract_witness(t, d, &y0, &dir.direction).expect("direction is negative"))
        }
    }
}

fn verdict(
    t: &WeylOp,
    cone: Cone,
    d: usize,
    notice: Option<String>,
    psd: bool,
    certificate: Certificate,
    sign: i8,
) -> Verdict {
    let result = match certificate {
        Certificate::Minors(_) => Outcome::Preserves,
        Certificate::Witness(_) => Outcome::Violates,
    };
    Verdict {
        cone,
        degree_bound: DegreeBound::Bounded(d),
        result,
        certificate,
        branch_witnesses: Vec::new(),
        sign,
        predicate_report: predicate_report(t, d, psd),
        truncation_flag: t.order().is_some_and(|n| n > d),
        notice,
    }
}

pub fn decide_sos_bounded(t: &WeylOp, d: usize) -> Verdict {
    let (d, notice) = normalize_degree(d);
    match sos_core(t, d) {
        Ok(ms) => verdict(t, Cone::Sos, d, notice, true, Certificate::Minors(ms), 1),
        Err(w) => verdict(t, Cone::Sos, d, notice, false, Certificate::Witness(w), 1),
    }
}

/// POS witness for `sign * T` (already applied to `op`), or the minor list
/// when `op` preserves POS.
fn pos_core(op: &WeylOp, d: usize, sign: i8) -> (bool, std::result::Result<Vec<MinorReport>, Witness>) {
    match sos_core(op, d) {
        Err(mut w) => {
            // T(h + eps)(x0) = value + eps q0(x0); shrink eps until negative
            let RealPoint::Rational(x0) = w.point.clone() else {
                unreachable!("SOS witnesses sit at rational points")
            };
            let q0 = op.coeff(0).eval(&x0);
            let mut eps = abs(&w.value) / (Rational::one() + abs(&q0)) / Rational::from_integer(2.into());
            loop {
                let v = &w.value + &eps * &q0;
                if v.is_negative() {
                    w.value = v;
                    break;
                }
                eps /= Rational::from_integer(2.into());
            }
            w.epsilon = eps;
            w.cone = Cone::Pos;
            w.sign = sign;
            (false, Err(w))
        }
        Ok(ms) => match positive_on_r(&op.coeff(0)) {
            Decision::Holds => (true, Ok(ms)),
            Decision::Fails(point) => {
                let value = match &point {
                    RealPoint::Rational(x0) => op.coeff(0).eval(x0),
                    RealPoint::Root(_) => Rational::zero(),
                };
                let w = Witness {
                    cone: Cone::Pos,
                    sign,
                    degree_bound: d,
                    squares: Vec::new(),
                    weights: Vec::new(),
                    epsilon: Rational::one(),
                    h: UniPoly::zero(),
                    point,
                    value,
                    shift: None,
                };
                (true, Err(w))
            }
        },
    }
}

pub fn decide_pos_bounded(t: &WeylOp, d: usize) -> Verdict {
    let (d, notice) = normalize_degree(d);
    let (psd, res) = pos_core(t, d, 1);
    let cert = match res {
        Ok(ms) => Certificate::Minors(ms),
        Err(w) => Certificate::Witness(w),
    };
    verdict(t, Cone::Pos, d, notice, psd, cert, 1)
}

fn scaled(w: &Witness, s: &Rational) -> (Vec<UniPoly>, Vec<Rational>, UniPoly, Rational) {
    (
        w.squares.clone(),
        w.weights.iter().map(|x| x * s).collect(),
        w.h.scale(s),
        &w.epsilon * s,
    )
}

/// Combines POS witnesses for `T` and `-T` into one positive input whose
/// image under `T` has a real zero.
fn ell_witness(t: &WeylOp, plus: &Witness, minus: &Witness) -> Witness {
    let as_ell = |w: &Witness| Witness {
        cone: Cone::Ell,
        sign: 1,
        ..w.clone()
    };
    if plus.value.is_zero() {
        return as_ell(plus);
    }
    if minus.value.is_zero() {
        return as_ell(minus);
    }
    // now T(f1)(x1) < 0 and T(f2)(x2) > 0 at rational points
    let x1 = plus.point.as_rational().expect("strict values sit at rational points").clone();
    let a = plus.value.clone();
    let f2_image = t.apply(&minus.input());
    let b = f2_image.eval(&x1);
    if b.is_positive() {
        let s = &b / (&b - &a);
        let one_minus = Rational::one() - &s;
        let (mut sq, mut wt, h1, e1) = scaled(plus, &s);
        let (sq2, wt2, h2, e2) = scaled(minus, &one_minus);
        sq.extend(sq2);
        wt.extend(wt2);
        return Witness {
            cone: Cone::Ell,
            sign: 1,
            degree_bound: plus.degree_bound,
            squares: sq,
            weights: wt,
            epsilon: e1 + e2,
            h: &h1 + &h2,
            point: RealPoint::Rational(x1),
            value: Rational::zero(),
            shift: None,
        };
    }
    // T(f2) is <= 0 at x1 and > 0 at x2, so it has a real zero
    let point = if b.is_zero() {
        RealPoint::Rational(x1)
    } else {
        find_real_root(&f2_image).expect("sign change implies a real root")
    };
    Witness {
        point,
        value: Rational::zero(),
        ..as_ell(minus)
    }
}

pub fn decide_ell_bounded(t: &WeylOp, d: usize) -> Verdict {
    let (d, notice) = normalize_degree(d);
    let (psd, plus) = pos_core(t, d, 1);
    let plus = match plus {
        Ok(ms) => return verdict(t, Cone::Ell, d, notice, psd, Certificate::Minors(ms), 1),
        Err(w) => w,
    };
    let neg = t.neg();
    let minus = match pos_core(&neg, d, -1).1 {
        Ok(ms) => return verdict(t, Cone::Ell, d, notice, psd, Certificate::Minors(ms), -1),
        Err(w) => w,
    };
    let w = ell_witness(t, &plus, &minus);
    let mut v = verdict(t, Cone::Ell, d, notice, psd, Certificate::Witness(w), 1);
    v.branch_witnesses = vec![plus, minus];
    v
}

pub fn decide_bounded(t: &WeylOp, d: usize, cone: Cone) -> Verdict {
    match cone {
        Cone::Sos => decide_sos_bounded(t, d),
        Cone::Pos => decide_pos_bounded(t, d),
        Cone::Ell => decide_ell_bounded(t, d),
    }
}

/// Smallest even integer above `n`.
pub fn violation_degree(n: usize) -> usize {
    n + 2 - n % 2
}

/// Preservation at every degree. An operator of order 0 is multiplication
/// by `q_0` and is decided at degree 0; any operator of positive order `N`
/// fails already at the smallest even degree above `N`.
pub fn decide_unbounded(t: &WeylOp, cone: Cone) -> Verdict {
    let d = match t.order() {
        None | Some(0) => 0,
        Some(n) => violation_degree(n),
    };
    let mut v = decide_bounded(t, d, cone);
    v.degree_bound = DegreeBound::Unbounded;
    v.truncation_flag = false;
    if d > 0 {
        debug_assert!(!v.preserves(), "positive order never preserves at every degree");
        v.notice = Some(format!("order {} > 0: counterexample at degree {d}", t.order().unwrap()));
    }
    v
}

pub fn decide_sos_unbounded(t: &WeylOp) -> Verdict {
    decide_unbounded(t, Cone::Sos)
}
