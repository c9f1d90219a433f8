//! Chabauty–Coleman on `y² = x(x−1)(x−2)(x−5)(x−6)` at `p = 7`: the point
//! count over F_7 gives the bound, and the ten known rational points meet it.

use tropical_chabauty::bounds::{self, BoundKind, BoundRequest};
use tropical_chabauty::chabauty::coleman_bound_for_curve;
use tropical_chabauty::fixtures;

fn main() {
    let curve = fixtures::gordon_grant();
    println!("genus {}, disc {}", curve.genus(), curve.discriminant());
    for p in [3u64, 5, 7, 11, 13] {
        let good = curve.good_reduction(p).unwrap();
        let count = if good { curve.count_points_fp(p).unwrap().to_string() } else { "-".into() };
        println!("p = {p:>2}: good reduction {good:<5}  #X(F_p) = {count}");
    }

    let b = coleman_bound_for_curve(&curve, 7, 1).unwrap();
    println!("Coleman at 7: #X(Q) <= {} (from #X(F_7) = {})", b.bound, b.points_fp);

    let pts = fixtures::gordon_grant_points();
    assert!(pts.iter().all(|p| curve.contains(p)));
    println!("{} rational points known, so the bound is sharp", pts.len());

    let stoll = BoundRequest::new(BoundKind::Stoll)
        .with_int("g", 2)
        .with_int("r", 1)
        .with_int("p", 7)
        .with_int("nFp", b.points_fp as i64);
    let res = bounds::evaluate(&stoll).unwrap();
    println!("{}: {} = {}", res.kind, res.formula, res.value.unwrap());
}
