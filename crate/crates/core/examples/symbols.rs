//! Symbols, Hankel matrices, the Fischer-Fock pairing and action matrices.

use polypos::hankel::{leading_minors, psd_for_all_y, ParamHankel};
use polypos::rational::{rat, ratio};
use polypos::text::{matrix_to_text, parse_weyl};
use polypos::UniPoly;

fn main() {
    let t = parse_weyl("q[0] = x^2 + 1\nq[1] = -2*x\nq[2] = 1\n").unwrap();
    println!("p_(y,2)(x) = {}", t.truncated_symbol(2).to_text(&["x".into(), "y".into()]));

    let h = ParamHankel::build(&t, 1);
    println!("H_(y,1) =\n{}", matrix_to_text(&h.matrix(), |p| p.to_text("y")));
    for (m, det) in leading_minors(&h).iter().enumerate() {
        println!("  det H_(y,{m}) = {}", det.to_text("y"));
    }
    println!("PSD for every y: {}", psd_for_all_y(&h).holds());

    // T_y(f)(a) is the pairing of the symbol at y with f(x + a)
    let f = UniPoly::from_ints(&[1, -3, 0, 2]);
    let (y0, a) = (ratio(1, 2), rat(3));
    let lhs = t.specialize(&y0).apply(&f).eval(&a);
    let rhs = t.symbol_at(3, &y0).ff_inner(&f.taylor_shift(&a));
    println!("T_y(f)(a) = {lhs}, <p_y, e^(aD) f> = {rhs}");

    // the action on polynomials of degree <= 2 determines T truncated to order 2
    let m = t.matrix(2);
    println!("action on degree <= 2:\n{}", matrix_to_text(&m.dense(), |q| q.to_string()));
    assert_eq!(polypos::WeylOp::from_matrix(&m), t.truncate(2));
}
