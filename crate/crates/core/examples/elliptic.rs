//! Elliptic (zero-free) polynomials: preserved when T or -T preserves
//! positivity. Otherwise the witness is a positive input whose image vanishes.

use polypos::decide::decide_ell_bounded;
use polypos::{UniPoly, WeylOp};

fn main() {
    for (name, t) in [
        ("-identity", WeylOp::identity().neg()),
        ("D", WeylOp::derivative(1)),
        ("x", WeylOp::multiplication(UniPoly::x())),
    ] {
        let v = decide_ell_bounded(&t, 2);
        println!("{name}: {:?} (sign {})", v.result, v.sign);
        if let Some(w) = v.witness() {
            let f = w.input();
            println!("  f = {f} is positive, T(f) = {} vanishes at {}", t.apply(&f), w.point);
            for b in &v.branch_witnesses {
                println!("  branch for {}T: h = {}, value {}", if b.sign < 0 { "-" } else { "" }, b.h, b.value);
            }
        }
        assert!(v.verify(&t));
    }
}
