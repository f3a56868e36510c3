//! Positivity preservation decided by positive semidefiniteness, where the
//! strict determinant test says nothing.

use polypos::decide::{decide_pos_bounded, strict_criteria};
use polypos::moments::{conv_operator_from_measure, AtomicMeasureFamily};
use polypos::oracle::{falsify_preservation, SampleSpec};
use polypos::decide::Cone;
use polypos::rational::rat;

fn main() {
    // f(x) -> f(x - 1) + f(x + 1)
    let m = AtomicMeasureFamily::univariate(vec![rat(-1), rat(1)], vec![rat(1), rat(1)]).unwrap();
    let t = conv_operator_from_measure(&m, 4).unwrap();
    println!("operator:\n{}", polypos::text::weyl_to_text(&t));

    let v = decide_pos_bounded(&t, 4);
    let strict = strict_criteria(&t, 4);
    println!("POS at d = 4: {:?}", v.result);
    println!("  PSD for all y:                {}", v.predicate_report.psd_all_y);
    println!("  positive definite for all y:  {}", strict.pd_all_y);
    println!("  every leading det positive:   {}", strict.det_positive_all_m);

    let r = falsify_preservation(&t, Cone::Pos, &SampleSpec::new(4, 1000, 1));
    println!("oracle: {} trials, counterexample: {}", r.trials_run, r.witness.is_some());
}
