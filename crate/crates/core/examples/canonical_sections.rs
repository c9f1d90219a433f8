//! Canonical divisors of vertex-weighted metric graphs and the slope bound
//! `|slope| ≤ 2g − 1` for sections of the canonical divisor.

use tropical_chabauty::fixtures;
use tropical_chabauty::metric_graph::{
    canonical_divisor, check_slope_bound, divisor_of, is_canonical_section, max_abs_slope, slope_bound_constant,
    EdgePiece, PLFunction, VertexWeightedMetricGraph,
};
use tropical_chabauty::rat;

fn report(name: &str, f: &PLFunction, g: &VertexWeightedMetricGraph) {
    let check = is_canonical_section(f, g);
    let div = divisor_of(f, g);
    let terms: Vec<String> = div.terms().map(|(x, m)| format!("{m}·{}", g.point_name(x))).collect();
    println!("{name}: div = {}", terms.join(" + "));
    match check.witness {
        None => println!("  section of K, max slope {}, bound holds: {}", max_abs_slope(f), check_slope_bound(f, g)),
        Some(x) => println!("  not a section: div + K < 0 at {}", g.point_name(&x)),
    }
}

fn main() {
    let theta = fixtures::theta_default();
    let k = canonical_divisor(&theta);
    println!("theta(1, 2, 3): genus {}, deg K = {}", theta.genus(), k.degree());
    println!("slope bounds: {} in general, {} without genus-0 leaves", slope_bound_constant(2, false), slope_bound_constant(2, true));

    let zero = rat(0, 1);
    // Down then up along e1, with a double zero at its midpoint.
    let dip = EdgePiece { breakpoints: vec![rat(1, 2)], slopes: vec![-1, 1] };
    let f = PLFunction::new(&theta, vec![zero.clone(), zero.clone()], vec![dip, EdgePiece::linear(0), EdgePiece::linear(0)]).unwrap();
    report("dip on e1", &f, &theta);

    let peak = EdgePiece { breakpoints: vec![rat(1, 2)], slopes: vec![1, -1] };
    let h = PLFunction::new(&theta, vec![zero.clone(), zero], vec![peak, EdgePiece::linear(0), EdgePiece::linear(0)]).unwrap();
    report("peak on e1", &h, &theta);

    // A genus-1 vertex on a loop raises the canonical degree.
    let weighted = VertexWeightedMetricGraph::from_ids(&[("v", 1)], &[("loop", "v", "v", rat(5, 1))]).unwrap();
    let kw = canonical_divisor(&weighted);
    println!("weighted loop: genus {}, deg K = {}", weighted.genus(), kw.degree());
}
