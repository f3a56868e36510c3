//! Reading and writing the text formats, and JSON certificates.

use polypos::decide::{decide_sos_bounded, Witness};
use polypos::text::{measure_to_text, parse_measure, parse_poly_auto, parse_weyl, weyl_to_text};

fn main() {
    let (p, vars) = parse_poly_auto("3/2*x1^2*x2 - x2 + 1").unwrap();
    println!("{} in {vars:?}", p.to_text(&vars));
    println!("{:?}", parse_weyl("q[x] = 1").unwrap_err().to_string());

    let t = parse_weyl("# a comment\nq[1] = 1\nq[3] = -1/6*x").unwrap_or_else(|e| panic!("{e}"));
    println!("{}", weyl_to_text(&t));

    let m = parse_measure("atom -1 weight y^2\natom 2 weight 1/3").unwrap();
    print!("{}", measure_to_text(&m));

    let w = decide_sos_bounded(&parse_weyl("q[1] = 1").unwrap(), 2).witness().cloned().unwrap();
    let json = serde_json::to_string_pretty(&w).unwrap();
    println!("{json}");
    let back: Witness = serde_json::from_str(&json).unwrap();
    assert_eq!(back, w);
}
