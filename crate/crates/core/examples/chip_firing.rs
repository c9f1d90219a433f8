//! Baker–Norine rank on finite graphs via Dhar burning, with Riemann–Roch
//! and Clifford checks.

use tropical_chabauty::chipfiring::{bn_rank, check_clifford, check_riemann_roch, q_reduce, FiniteGraph, IntDivisor};

fn main() {
    // K4: genus 3, one canonical chip on every vertex.
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let g = FiniteGraph::from_edges(4, &edges).unwrap();
    println!("K4: genus {}, K = {:?}", g.genus(), g.canonical().0);

    for coeffs in [vec![1, 0, 0, 0], vec![1, 1, 0, 0], vec![2, 0, 0, 0], vec![1, 1, 1, 0], vec![2, 2, 2, 2], vec![3, -1, 0, 1]] {
        let d = IntDivisor(coeffs);
        let rr = check_riemann_roch(&g, &d);
        let clifford = check_clifford(&g, &d).map_or("n/a".to_string(), |ok| ok.to_string());
        println!(
            "D = {:?}: deg {}, r(D) = {}, r(K - D) = {}, RR {}, Clifford {clifford}, reduced {:?}",
            d.0,
            rr.degree,
            rr.rank,
            rr.dual_rank,
            rr.holds,
            q_reduce(&g, &d, 0).0
        );
    }

    // Firing a vertex does not change the class.
    let d = IntDivisor(vec![3, 0, 0, 0]);
    let mut e = d.clone();
    g.fire_vertex(&mut e, 0, 1);
    println!("{:?} ~ {:?}: ranks {} and {}", d.0, e.0, bn_rank(&g, &d), bn_rank(&g, &e));
}
