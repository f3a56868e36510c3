//! Seeded random search for counterexamples, with exact image checks.

use polypos::decide::Cone;
use polypos::oracle::{falsify_preservation, verify_witness, SampleSpec};
use polypos::text::parse_weyl;

fn main() {
    let t = parse_weyl("q[0] = 1\nq[1] = x\nq[2] = 1/4").unwrap();
    for cone in [Cone::Sos, Cone::Pos, Cone::Ell] {
        let r = falsify_preservation(&t, cone, &SampleSpec::new(4, 500, 2024));
        match &r.witness {
            Some(w) => println!(
                "{cone}: trial {} of seed {}: T({}) is {} at {}; verified {}",
                r.trial.unwrap(),
                r.seed,
                w.input(),
                w.value,
                w.point,
                verify_witness(&t, w, cone)
            ),
            None => println!("{cone}: nothing in {} trials", r.trials_run),
        }
    }
}
