//! Moment sequences: the Hamburger test and recovery of atoms and weights.

use polypos::moments::{hamburger_check, moments_of_atomic, recover_atoms, AtomicMeasureFamily, WeightValue};
use polypos::poly::RealPoint;
use polypos::rational::{rat, ratio, Rational};
use num_traits::{ToPrimitive, Zero};

fn main() {
    let m = AtomicMeasureFamily::univariate(
        vec![rat(-2), ratio(1, 3), rat(4)],
        vec![ratio(1, 2), rat(1), ratio(3, 2)],
    )
    .unwrap();
    let a = moments_of_atomic(&m, &Rational::zero(), 7).unwrap();
    let shown: Vec<String> = a.iter().map(|q| q.to_string()).collect();
    println!("moments: {}", shown.join(" "));
    println!("Hamburger test: {}", hamburger_check(&a).unwrap().holds());

    let r = recover_atoms(&a).unwrap();
    println!("atom polynomial: {}", r.atom_polynomial);
    println!("recovered exactly: {}", r.to_measure().as_ref() == Some(&m));

    // the moments 2, 0, 4, 0, 8 come from atoms at +-sqrt 2
    let r = recover_atoms(&[rat(2), rat(0), rat(4), rat(0), rat(8)]).unwrap();
    for (atom, w) in r.atoms.iter().zip(&r.weights) {
        let atom = match atom {
            RealPoint::Rational(q) => q.to_f64().unwrap(),
            RealPoint::Root(root) => ((&root.lo + &root.hi) / rat(2)).to_f64().unwrap(),
        };
        let w = match w {
            WeightValue::Exact(q) => q.to_f64().unwrap(),
            WeightValue::Enclosure(lo, hi) => ((lo + hi) / rat(2)).to_f64().unwrap(),
        };
        println!("  atom ~ {atom:.10}, weight ~ {w:.10}");
    }

    let bad = [rat(1), rat(0), rat(-1)];
    println!("1 0 -1 is a moment sequence: {}", hamburger_check(&bad).unwrap().holds());
}
