//! Newton polygons of p-adic Laurent series, zero counts in valuation
//! windows, and the correction term N_p(r, N0).

use tropical_chabauty::rat;
use tropical_chabauty::series::{compute_np, count_zeros, newton_polygon, PadicSeries, ValuationWindow};

fn main() {
    // (t − 3)(t − 9)(t − 1/3) over Q_3: roots of valuation 1, 2, −1.
    let f = PadicSeries::from_rationals(3, 0, &[rat(-9, 1), rat(28, 1), rat(-37, 3), rat(1, 1)]).unwrap();
    let np = newton_polygon(&f).unwrap();
    for s in np.segments() {
        println!("segment {:?} -> {:?}, slope {}", s.start, s.end, s.slope);
    }
    println!("slopes {:?}", np.slopes().iter().map(|s| s.to_string()).collect::<Vec<_>>());
    for text in ["[0,inf)", "(0,2)", "[1,2]", "[-1,0)"] {
        let w = ValuationWindow::parse(text).unwrap();
        println!("zeros with valuation in {text}: {}", count_zeros(&f, &w).unwrap());
    }

    println!("\n N_p(1, N0)");
    print!("   p |");
    for n0 in 0..=8 {
        print!("{n0:>4}");
    }
    println!();
    for p in [2u64, 3, 5, 7, 11] {
        print!("{p:>4} |");
        for n0 in 0..=8 {
            print!("{:>4}", compute_np(p, &rat(1, 1), n0).unwrap());
        }
        println!();
    }
    println!("N_2(1/2, 0) = {}", compute_np(2, &rat(1, 2), 0).unwrap());
}
