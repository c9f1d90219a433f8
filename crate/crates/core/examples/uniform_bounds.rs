//! Every bound formula, with its hypotheses, plus the finite-field group
//! orders behind the geometric torsion bound.

use num_bigint::BigInt;
use tropical_chabauty::bounds::{self, BoundKind, BoundRequest};
use tropical_chabauty::fixtures;
use tropical_chabauty::rat;

fn request(kind: BoundKind) -> BoundRequest {
    let r = BoundRequest::new(kind);
    match kind {
        BoundKind::Coleman | BoundKind::Stoll => r.with_int("g", 2).with_int("r", 1).with_int("p", 7).with_int("nFp", 8),
        BoundKind::LorenziniTucker | BoundKind::Kzb => {
            r.with_int("g", 3).with_int("r", 1).with_int("p", 7).with_int("nSm", 12)
        }
        BoundKind::StollUniformHyp | BoundKind::KrzbP3 => r.with_int("g", 5).with_int("r", 2),
        BoundKind::KrzbGeneral => r.with_int("g", 5).with_int("r", 2).with_int("p", 5),
        BoundKind::RationalTorsion => r.with_int("g", 3),
        BoundKind::GeometricTorsion => r.with_int("g", 4).with_int("p", 5),
        BoundKind::WideopenZeros => r.with_int("g", 2).with_int("p", 5).with_int("d", 3).with("a", rat(1, 2)),
        BoundKind::StollCover => r.with_int("g", 3).with_int("q", 5).with_int("t", 2),
    }
}

fn main() {
    for kind in BoundKind::ALL {
        let res = bounds::assess(&request(kind)).unwrap();
        let value = res.value.as_ref().map_or("hypothesis failed".to_string(), BigInt::to_string);
        let value = if value.len() > 40 { format!("{} digits", value.len()) } else { value };
        println!("{:<18} {:<64} {value}", kind.to_string(), res.formula);
        for h in res.hypotheses.iter().filter(|h| !h.satisfied) {
            println!("{:>20} fails: {}", "", h.name);
        }
    }

    // Katz–Zureick-Brown needs p > 2r + 2.
    let bad = request(BoundKind::Kzb).with_int("p", 3);
    println!("\nkzb at p = 3: {}", bounds::evaluate(&bad).unwrap_err());

    for g in 1..=3 {
        println!("#GSp_{}(F_5) = {}", 2 * g, bounds::gsp_order(g, 5).unwrap());
    }
    let (balls, annuli) = bounds::stoll_cover(3, 5, 2);
    println!("Stoll cover for g = 3, q = 5, t = 2: {balls} balls, {annuli} annuli");

    let theta = fixtures::theta_default();
    let dagger = bounds::check_dagger(&theta);
    println!("condition on theta graph holds: {} (violations {:?})", dagger.holds, dagger.violations);
}
