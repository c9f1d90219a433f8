//! Tropicalizing polynomials on the segment skeleton `0 ≤ v(t) ≤ L`: the
//! function `s ↦ −log|f|` has a kink of size `m` at each root valuation.

use num_rational::BigRational;
use tropical_chabauty::metric_graph::tropicalize::{
    expand_roots, function_from_coefficients, function_from_roots, interior, root_divisor, segment_skeleton,
};
use tropical_chabauty::metric_graph::divisor_of;
use tropical_chabauty::rat;

fn show(p: u64, roots: &[(BigRational, u32)]) {
    let g = segment_skeleton(rat(4, 1)).unwrap();
    let coeffs = expand_roots(roots);
    let by_roots = function_from_roots(p, roots, &g).unwrap();
    let by_coeffs = function_from_coefficients(p, &coeffs, &g).unwrap();
    assert_eq!(by_roots, by_coeffs);
    let piece = by_roots.piece(0);
    println!(
        "p = {p}, coefficients {:?}",
        coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>()
    );
    println!(
        "  breakpoints {:?}, slopes {:?}",
        piece.breakpoints.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        piece.slopes
    );
    let div = interior(&divisor_of(&by_roots, &g));
    assert_eq!(div, root_divisor(p, roots, &g));
    for (x, m) in div.terms() {
        println!("  div: {m} at {}", g.point_name(x));
    }
}

fn main() {
    show(3, &[(rat(-3, 1), 1)]);
    show(5, &[(rat(5, 1), 2), (rat(125, 1), 1), (rat(2, 1), 1)]);
    show(2, &[(rat(4, 1), 1), (rat(1, 8), 1), (rat(12, 1), 3)]);
}
