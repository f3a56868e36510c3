//! Exact real-root tools: square-free parts, Sturm counts, isolation and
//! sign decisions.

use polypos::poly::{isolate_real_roots, nonneg_on_r, positive_on_r, squarefree_decompose, sturm_count, CountRange};
use polypos::text::parse_unipoly;

fn main() {
    let p = parse_unipoly("(x^2 - 2)^2 * (x - 1/3) * (x^2 + 1)", "x").unwrap();
    println!("p = {p}");
    let dec = squarefree_decompose(&p).unwrap();
    for (f, m) in &dec.factors {
        println!("  factor {f} with multiplicity {m}");
    }
    let sqf = dec.squarefree_part();
    println!("distinct real roots: {}", sturm_count(&sqf, &CountRange::All).unwrap());
    for (lo, hi) in isolate_real_roots(&p).unwrap().intervals {
        println!("  root in ({lo}, {hi})");
    }
    match nonneg_on_r(&p).failure() {
        Some(x0) => println!("p < 0 at {x0}: p({x0}) = {}", p.eval(x0)),
        None => println!("p >= 0 everywhere"),
    }

    let q = parse_unipoly("(x^2 - 2)^2", "x").unwrap();
    let zero = positive_on_r(&q).into_failure().unwrap();
    println!("{q} >= 0: {}, but it vanishes at the {zero}", nonneg_on_r(&q).holds());
}
