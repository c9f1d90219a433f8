//! Zeros of `∫ω` on a p-adic annulus and the Rolle bound built from N_p.

use tropical_chabauty::rat;
use tropical_chabauty::series::{annular_slope_bound_check, annulus_rolle, antiderivative, PadicSeries};

fn main() {
    // f = t(t − 3)(t − 9) on {0 < v(t) < 4} over Q_3; ω = t f'(t) dt/t.
    let f = [0, 27, -12, 1];
    let omega_coeffs: Vec<i64> = f.iter().enumerate().skip(1).map(|(n, a)| n as i64 * a).collect();
    let omega = PadicSeries::from_integers(3, 1, &omega_coeffs).unwrap();
    let g = antiderivative(&omega).unwrap();
    println!("antiderivative: {:?}", g.terms().map(|(n, c)| format!("{}t^{n}", c.to_rational())).collect::<Vec<_>>());

    let r = rat(4, 1);
    for a in [rat(1, 4), rat(1, 2), rat(1, 1)] {
        let rep = annulus_rolle(&omega, &r, &a).unwrap();
        println!(
            "a = {a}: {} zeros with v in [a, r - a], N0 = ({}, {}), bound {}",
            rep.zeros, rep.n0_outer, rep.n0_inner, rep.bound
        );
        let slope = annular_slope_bound_check(&omega, &r, &a).unwrap();
        println!("  slope at depth r - a: {} <= {}: {}", slope.interior_slope, slope.bound, slope.holds);
    }
}
