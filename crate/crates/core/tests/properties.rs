use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use polypos::decide::{
    decide_pos_bounded, decide_sos_bounded, strict_criteria, Cone, Outcome, Witness,
};
use polypos::hankel::{leading_minors, psd_at_point, psd_for_all_y, ParamHankel};
use polypos::linalg::{determinant, quadratic_form};
use polypos::moments::{
    apply_convolution, conv_operator_from_measure, hamburger_check, measure_family_sos_check, moments_of_atomic,
    recover_atoms, AtomicMeasureFamily,
};
use polypos::multivar::{diagonal_from_measure, diagonal_to_weyl, gram_at, psd_kernel_at, DiagonalOp};
use polypos::oracle::{falsify_preservation, verify_witness, SampleSpec};
use polypos::poly::{
    count_real_roots, indices_below, isolate_real_roots, nonneg_on_r, positive_on_r, squarefree_decompose,
    sturm_count, CountRange, MultiPoly, RealPoint,
};
use polypos::rational::Rational;
use polypos::text::{measure_to_text, parse_measure, parse_multi_weyl, parse_unipoly, parse_weyl, weyl_to_text};
use polypos::{MultiWeylOp, UniPoly, WeylOp};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn poly(max_degree: usize, h: i64) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-h..=h, 0..=max_degree + 1).prop_map(|c| UniPoly::from_ints(&c))
}

fn rpoly(max_degree: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(rational(), 0..=max_degree + 1).prop_map(UniPoly::new)
}

fn operator(max_order: usize, coeff_degree: usize) -> impl Strategy<Value = WeylOp> {
    prop::collection::vec(poly(coeff_degree, 4), 0..=max_order + 1).prop_map(WeylOp::new)
}

fn measure(max_atoms: usize) -> impl Strategy<Value = AtomicMeasureFamily> {
    prop::collection::btree_map((-12i64..=12, 1i64..=3).prop_map(|(n, d)| q(n, d)), (1i64..=9, 1i64..=4), 1..=max_atoms)
        .prop_map(|m| {
            let (atoms, weights) = m.into_iter().map(|(a, (n, d))| (a, q(n, d))).unzip();
            AtomicMeasureFamily::univariate(atoms, weights).unwrap()
        })
}

/// Determinant by cofactor expansion.
fn laplace(m: &[Vec<Rational>]) -> Rational {
    if m.is_empty() {
        return Rational::one();
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let s = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
            s * &m[0][j] * laplace(&minor)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn taylor_shift_group_law(p in rpoly(8), a in rational(), b in rational()) {
        prop_assert_eq!(p.taylor_shift(&a).taylor_shift(&b), p.taylor_shift(&(&a + &b)));
    }

    #[test]
    fn squares_are_nonneg(p in poly(5, 9)) {
        prop_assert!(nonneg_on_r(&p.square()).holds());
    }

    #[test]
    fn nonneg_answers_are_exact(p in poly(10, 9), xs in prop::collection::vec(rational(), 50)) {
        match nonneg_on_r(&p) {
            polypos::Decision::Holds => {
                for x in &xs {
                    prop_assert!(!p.eval(x).is_negative());
                }
            }
            polypos::Decision::Fails(x0) => prop_assert!(p.eval(&x0).is_negative()),
        }
    }

    #[test]
    fn positive_answers_are_exact(g in poly(4, 5), c in -3i64..=3) {
        let p = g.square() + UniPoly::constant(Rational::from_integer(c.into()));
        let pos = positive_on_r(&p);
        if c > 0 {
            prop_assert!(pos.holds());
        }
        match pos.failure() {
            Some(RealPoint::Rational(x0)) => prop_assert!(!p.eval(x0).is_positive()),
            Some(RealPoint::Root(r)) => prop_assert!(r.is_root_of(&p)),
            None => prop_assert!(nonneg_on_r(&p).holds()),
        }
    }

    #[test]
    fn ff_inner_symmetric_bilinear(f in rpoly(6), g in rpoly(6), h in rpoly(6), c in rational()) {
        prop_assert_eq!(f.ff_inner(&g), g.ff_inner(&f));
        let lhs = (f.scale(&c) + &h).ff_inner(&g);
        prop_assert_eq!(lhs, &c * f.ff_inner(&g) + h.ff_inner(&g));
    }

    #[test]
    fn sturm_counts_isolation(p in poly(8, 6)) {
        prop_assume!(p.degree().is_some_and(|d| d > 0));
        let sqf = squarefree_decompose(&p).unwrap();
        prop_assert_eq!(sqf.expand(), p.clone());
        let part = sqf.squarefree_part();
        let n = sturm_count(&part, &CountRange::All).unwrap();
        let iso = isolate_real_roots(&p).unwrap();
        prop_assert_eq!(n, iso.len());
        prop_assert_eq!(n, count_real_roots(&p));
        prop_assert!(iso.multiplicities.iter().sum::<usize>() <= p.degree().unwrap());
        for ((lo, hi), f) in iso.intervals.iter().zip(&iso.factors) {
            prop_assert!(lo < hi);
            prop_assert!(!part.eval(lo).is_zero() && !part.eval(hi).is_zero());
            prop_assert!((f.eval(lo) * f.eval(hi)).is_negative());
        }
        for w in iso.intervals.windows(2) {
            prop_assert!(w[0].1 <= w[1].0);
        }
    }

    #[test]
    fn bareiss_matches_cofactor_expansion(m in prop::collection::vec(prop::collection::vec(rational(), 4), 4)) {
        prop_assert_eq!(determinant(&m), laplace(&m));
    }

    #[test]
    fn symbol_pairing(t in operator(6, 2), f in rpoly(6), y0 in rational(), a in rational()) {
        prop_assert_eq!(t.specialize(&y0).apply(&f).eval(&a), t.ff_pairing(&f, &y0, &a));
    }

    #[test]
    fn matrix_round_trip(t in operator(4, 3), d in 0usize..=6) {
        let m = t.matrix(d);
        prop_assert_eq!(WeylOp::from_matrix(&m), t.truncate(d));
    }

    #[test]
    fn shift_conjugation(t in operator(3, 2), f in rpoly(5), a in rational()) {
        let lhs = t.conjugate_by_shift(&a).apply(&f);
        let rhs = t.apply(&f.taylor_shift(&a)).taylor_shift(&-&a);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn text_round_trip(p in rpoly(7), t in operator(4, 3), m in measure(4)) {
        prop_assert_eq!(parse_unipoly(&p.to_text("x"), "x").unwrap(), p);
        prop_assert_eq!(parse_weyl(&weyl_to_text(&t)).unwrap(), t);
        prop_assert_eq!(parse_measure(&measure_to_text(&m)).unwrap(), m);
    }

    #[test]
    fn hankel_structure(t in operator(6, 2), k in 0usize..=3, y0 in rational()) {
        let h = ParamHankel::build(&t, k);
        for i in 0..=k {
            for j in 0..=k {
                prop_assert_eq!(h.entry(i, j), h.entry(j, i));
                if i > 0 && j < k {
                    prop_assert_eq!(h.entry(i, j), h.entry(i - 1, j + 1));
                }
            }
        }
        if psd_for_all_y(&h).holds() {
            prop_assert!(psd_at_point(&h, &y0).holds());
        }
        if leading_minors(&h).iter().all(|m| m.eval(&y0).is_positive()) {
            prop_assert!(psd_at_point(&h, &y0).holds());
        }
        if let polypos::Decision::Fails(dir) = psd_at_point(&h, &y0) {
            prop_assert!(quadratic_form(&h.at(&y0), &dir.direction).is_negative());
        }
    }

    #[test]
    fn verdicts_sound(t in operator(3, 2), k in 0usize..=3) {
        let d = 2 * k;
        let sos = decide_sos_bounded(&t, d);
        prop_assert!(sos.verify(&t));
        if let Some(w) = sos.witness() {
            prop_assert!(verify_witness(&t, w, Cone::Sos));
            // a larger degree bound contains the same witness input
            prop_assert_eq!(decide_sos_bounded(&t, d + 2).result, Outcome::Violates);
        }
        let pos = decide_pos_bounded(&t, d);
        prop_assert!(pos.verify(&t));
        if strict_criteria(&t, d).pd_all_y {
            prop_assert!(pos.preserves());
        }
        if pos.preserves() {
            prop_assert!(pos.predicate_report.psd_all_y && pos.predicate_report.q0_positive);
        }
    }

    #[test]
    fn witness_json_round_trip(t in operator(3, 2), k in 1usize..=3) {
        let v = decide_sos_bounded(&t, 2 * k);
        if let Some(w) = v.witness() {
            let text = serde_json::to_string(w).unwrap();
            let back: Witness = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, w);
            prop_assert!(back.verify(&t));
        }
    }

    #[test]
    fn recovery_round_trip(m in measure(4), extra in 0usize..=2) {
        let r = m.len();
        let a = moments_of_atomic(&m, &Rational::zero(), 2 * r + 1 + 2 * extra).unwrap();
        prop_assert!(hamburger_check(&a).unwrap().holds());
        let back = recover_atoms(&a).unwrap().to_measure().unwrap();
        let sorted = |m: &AtomicMeasureFamily| {
            let mut v: Vec<_> = m.atoms().iter().zip(m.weights()).map(|(a, w)| (a.clone(), w.clone())).collect();
            v.sort_by(|x, y| x.0.cmp(&y.0));
            v
        };
        prop_assert_eq!(sorted(&back), sorted(&m));
    }

    #[test]
    fn convolution_consistent(m in measure(3), f in rpoly(6)) {
        let t = conv_operator_from_measure(&m, 6).unwrap();
        prop_assert_eq!(t.apply(&f), apply_convolution(&m, &f).unwrap());
    }

    #[test]
    fn nonneg_measures_give_preservers(m in measure(3), k in 0usize..=2) {
        prop_assert!(measure_family_sos_check(&m).holds());
        let t = conv_operator_from_measure(&m, 2 * k).unwrap();
        prop_assert!(decide_sos_bounded(&t, 2 * k).preserves());
    }

    #[test]
    fn univariate_kernel_matches_hankel(t in operator(4, 2), m in 0u32..=2, y0 in rational()) {
        let mt = MultiWeylOp::from_univariate(&t);
        let h = ParamHankel::build(&t, m as usize);
        prop_assert_eq!(gram_at(&mt, &[m], std::slice::from_ref(&y0)).unwrap(), h.at(&y0));
        prop_assert_eq!(psd_kernel_at(&mt, &[m], std::slice::from_ref(&y0)).unwrap().holds(), psd_at_point(&h, &y0).holds());
    }

    #[test]
    fn diagonal_round_trip(
        atoms in prop::collection::btree_set(((-4i64..=4), (-4i64..=4)), 1..=3),
        w in 1i64..=5,
    ) {
        let atoms: Vec<Vec<Rational>> = atoms.into_iter().map(|(a, b)| vec![q(a, 2), q(b, 1)]).collect();
        let weights = vec![UniPoly::constant(q(w, 3)); atoms.len()];
        let nu = AtomicMeasureFamily::with_dim(2, atoms, weights).unwrap();
        let op = diagonal_from_measure(&nu, &[4, 4]).unwrap();
        prop_assert_eq!(DiagonalOp::from_generator(&diagonal_to_weyl(&op), &[4, 4]), op);
    }
}

fn mv_operator() -> impl Strategy<Value = MultiWeylOp> {
    let term = (prop::collection::vec(0u32..=2, 2), prop::collection::vec(-3i64..=3, 4));
    prop::collection::vec(term, 1..=4).prop_map(|terms| {
        let terms = terms.into_iter().map(|(alpha, c)| {
            let q = MultiPoly::from_terms(
                2,
                indices_below(&[1, 1]).into_iter().zip(c.into_iter().map(|v| Rational::from_integer(v.into()))),
            )
            .unwrap();
            (alpha, q)
        });
        MultiWeylOp::from_terms(2, terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gram_pairing_identity(
        t in mv_operator(),
        c in prop::collection::vec(rational(), 4),
        y0 in prop::collection::vec(rational(), 2),
    ) {
        let alpha = [1u32, 1];
        let g = MultiPoly::from_terms(2, indices_below(&alpha).into_iter().zip(c.iter().cloned())).unwrap();
        let symbol = t.symbol_at(&[2, 2], &y0).unwrap();
        let lhs = symbol.ff_inner(&g.square()).unwrap();
        prop_assert_eq!(lhs, quadratic_form(&gram_at(&t, &alpha, &y0).unwrap(), &c));
    }

    #[test]
    fn multivariate_text_round_trip(t in mv_operator()) {
        let text = polypos::text::multi_weyl_to_text(&t);
        prop_assert_eq!(parse_multi_weyl(&text).unwrap(), t);
    }

    #[test]
    fn oracle_deterministic_and_sound(t in operator(2, 1), seed in 0u64..1000) {
        let spec = SampleSpec::new(2, 20, seed);
        for cone in [Cone::Sos, Cone::Pos, Cone::Ell] {
            let a = falsify_preservation(&t, cone, &spec);
            prop_assert_eq!(&a, &falsify_preservation(&t, cone, &spec));
            if let Some(w) = &a.witness {
                prop_assert!(verify_witness(&t, w, cone));
                prop_assert!(!polypos::decide::decide_bounded(&t, 2, cone).preserves());
            }
        }
    }
}
