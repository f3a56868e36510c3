//! Several variables: Gram kernels, falsification search and diagonal
//! operators.

use polypos::moments::AtomicMeasureFamily;
use polypos::multivar::{diagonal_from_measure, diagonal_to_weyl, falsify_mv, Budget};
use polypos::rational::{rat, ratio};
use polypos::text::{multi_weyl_to_text, parse_multi_weyl};
use polypos::UniPoly;

fn main() {
    let t = parse_multi_weyl("q[(1,1)] = 1").unwrap();
    let hit = falsify_mv(&t, &[1, 1], &Budget::default()).unwrap().expect("not PSD");
    println!(
        "d1 d2: Gram not PSD at {:?}; h = {} gives value {}",
        hit.witness.point.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        hit.witness.h,
        hit.witness.value
    );

    // f(x1, x2) -> (f(x1, x2) + f(x1/2, -x2)) / 2
    let nu = AtomicMeasureFamily::with_dim(
        2,
        vec![vec![rat(1), rat(1)], vec![ratio(1, 2), rat(-1)]],
        vec![UniPoly::constant(ratio(1, 2)); 2],
    )
    .unwrap();
    let op = diagonal_from_measure(&nu, &[2, 2]).unwrap();
    for (beta, l) in op.eigenvalues.iter().take(5) {
        println!("  lambda{beta:?} = {l}");
    }
    let a = diagonal_to_weyl(&op);
    println!("as a differential operator up to (2,2):\n{}", multi_weyl_to_text(&op.to_weyl()));
    println!("{} generator coefficients", a.len());
    let clean = falsify_mv(&op.to_weyl(), &[1, 1], &Budget::default()).unwrap();
    println!("falsification search finds nothing: {}", clean.is_none());
}
