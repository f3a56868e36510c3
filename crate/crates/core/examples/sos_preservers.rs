//! Which operators keep non-negative polynomials non-negative?
//!
//! Run with `cargo run --example sos_preservers`.

use polypos::decide::{decide_sos_bounded, decide_sos_unbounded, Certificate};
use polypos::rational::ratio;
use polypos::{UniPoly, WeylOp};

fn main() {
    let ops = [
        ("identity", WeylOp::identity()),
        ("D^2", WeylOp::derivative(2)),
        ("shift by 1/2", WeylOp::shift(&ratio(1, 2), 4)),
        ("(x^2 + 1) * .", WeylOp::multiplication(UniPoly::from_ints(&[1, 0, 1]))),
        ("D", WeylOp::derivative(1)),
        ("x D", WeylOp::new(vec![UniPoly::zero(), UniPoly::x()])),
    ];
    for (name, t) in &ops {
        let v = decide_sos_bounded(t, 4);
        print!("{name:>14} at d = 4: {:?}", v.result);
        match &v.certificate {
            Certificate::Minors(ms) => println!(" ({} principal minors checked)", ms.len()),
            Certificate::Witness(w) => {
                println!();
                println!("{:>16}T(h) at {} is {}, where h = {}", "", w.point, w.value, w.h);
                assert!(v.verify(t));
            }
        }
    }

    // every operator of positive order fails at some degree
    let v = decide_sos_unbounded(&WeylOp::derivative(2));
    println!("D^2 at every degree: {:?} ({})", v.result, v.notice.unwrap_or_default());
}
