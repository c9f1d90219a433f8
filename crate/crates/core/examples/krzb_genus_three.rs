//! The genus-3 curve with seven known rational points, in the model
//! `c·y² = f(x)` and the model `y² = c·f(x)`.

use tropical_chabauty::bounds::{self, BoundKind, BoundRequest};
use tropical_chabauty::chabauty::CurvePoint;
use tropical_chabauty::fixtures;
use tropical_chabauty::padic::{is_prime, split_valuation};

fn main() {
    let printed = fixtures::krzb_printed();
    let curve = fixtures::krzb();
    println!("c = {}, genus {}", fixtures::KRZB_C, curve.genus());
    println!("c y^2 = f(x) contains (25, 280): {}", printed.contains(&CurvePoint::affine(25, 280)));

    let pts = fixtures::krzb_points();
    for pt in &pts {
        let name = match pt {
            CurvePoint::Affine(x, y) => format!("({x}, {y})"),
            CurvePoint::Infinity(_) => "infinity".into(),
        };
        println!("  {name} on y^2 = c f(x): {}", curve.contains(pt));
    }

    let disc = curve.discriminant();
    let good: Vec<u64> = (3..60).filter(|&p| is_prime(p) && curve.good_reduction(p).unwrap()).collect();
    println!("v_5(disc) = {}, good odd primes below 60: {good:?}", split_valuation(&disc, 5).0);

    let req = BoundRequest::new(BoundKind::KrzbGeneral).with_int("g", 3).with_int("r", 0).with_int("p", 3);
    println!("uniform bound for g = 3: {}", bounds::evaluate(&req).unwrap().value.unwrap());
}
