//! Period lattice of a metric graph, the Abel–Jacobi map and principal
//! divisors.

use tropical_chabauty::fixtures;
use tropical_chabauty::metric_graph::{GraphDivisor, GraphPoint};
use tropical_chabauty::rat;
use tropical_chabauty::trop_jacobian::{abel_jacobi, balancing_check, is_principal, period_lattice};

fn strings(v: &[num_rational::BigRational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn main() {
    let g = fixtures::theta(rat(1, 1), rat(2, 1), rat(3, 1));
    let lattice = period_lattice(&g);
    println!("rank {}", lattice.rank());
    for row in &lattice.gram {
        println!("  {:?}", strings(row));
    }

    let x0 = GraphPoint::Vertex(0);
    for (e, offset) in [(0, rat(1, 2)), (1, rat(1, 1)), (2, rat(5, 2))] {
        let x = g.point_on_edge(e, offset).unwrap();
        println!("AJ({}) = {:?}", g.point_name(&x), strings(&abel_jacobi(&g, &lattice, &x0, &x)));
    }
    println!("balancing at every vertex: {}", balancing_check(&g));

    let v1 = GraphPoint::Vertex(0);
    let v2 = GraphPoint::Vertex(1);
    let mid = |e: usize| g.point_on_edge(e, &g.edges()[e].length / rat(2, 1)).unwrap();
    let cases = [
        ("v1 - v2", GraphDivisor::from_terms([(v1.clone(), 1), (v2.clone(), -1)])),
        ("2 mid(e1) - v1 - v2", GraphDivisor::from_terms([(mid(0), 2), (v1.clone(), -1), (v2.clone(), -1)])),
        ("mid(e1) + mid(e2) - v1 - v2", GraphDivisor::from_terms([(mid(0), 1), (mid(1), 1), (v1, -1), (v2, -1)])),
    ];
    for (name, d) in cases {
        println!("{name}: principal {}", is_principal(&g, &d).unwrap());
    }
}
