//! Residue discs of the McCallum–Poonen sextic at `p = 3`, the expansion of
//! `xⁱ dx/y` in each disc, tiny integrals, and per-disc zero data.

use num_bigint::BigInt;
use tropical_chabauty::chabauty::{
    disc_zero_data, expand_differential, reduced_expansion_row, residue_discs, stoll_order, tiny_integral,
    ResidueDisc,
};
use tropical_chabauty::fixtures;
use tropical_chabauty::padic::PadicNumber;
use tropical_chabauty::rat;

fn main() {
    let curve = fixtures::mccallum_poonen();
    let p = 3;
    let terms = 16;

    for disc in residue_discs(&curve, p).unwrap() {
        let mut rows = Vec::new();
        for i in 0..curve.genus() {
            let omega = expand_differential(&curve, &disc, i, terms).unwrap();
            let zeros = disc_zero_data(&curve, &disc, i, terms).unwrap();
            rows.push(reduced_expansion_row(&omega, 4).unwrap());
            println!(
                "disc ({}, {}) omega_{i}: n0 = {}, at most {} points",
                disc.a0, disc.b, zeros.n0, zeros.local_bound
            );
        }
        println!("  vanishing order of the best form: {}", stoll_order(&rows, p).unwrap());
    }

    // From (0, 1) to t = 1, i.e. x = 3, inside the same disc.
    let disc = ResidueDisc::new(&curve, p, BigInt::from(0), 1).unwrap();
    let t1 = PadicNumber::exact(p, rat(0, 1)).unwrap();
    let t2 = PadicNumber::exact(p, rat(1, 1)).unwrap();
    for i in 0..curve.genus() {
        let v = tiny_integral(&curve, &disc, i, &t1, &t2, terms).unwrap();
        println!(
            "int_(0,1)^(3,.) x^{i} dx/y = {} + O(3^{})",
            v.to_rational(),
            v.absolute_precision()
        );
    }
}
