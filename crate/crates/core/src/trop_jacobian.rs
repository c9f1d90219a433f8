//! Tropical Jacobians of metric graphs.
//!
//! `H₁(Γ, Z)` sits inside the edge chains, and the length pairing
//! `[e, e] = ℓ(e)`, `[e, e'] = 0` restricts to a positive definite form on
//! it. The Jacobian is `R^h / Λ` where `Λ` is spanned by the rows of the Gram
//! matrix of a cycle basis, and the Abel–Jacobi image of `x` is the vector of
//! pairings of a path from the base point to `x` with the basis cycles.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::metric_graph::{GraphDivisor, GraphPoint, VertexWeightedMetricGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JacobianError {
    #[error("divisor has degree {0}, expected 0")]
    NonzeroDegree(i64),
}

/// Spanning tree with, for every vertex, the signed edge chain of the tree
/// path from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: usize,
    pub tree_edges: Vec<usize>,
    /// `chains[v][e]` is `±1` when the path from the root to `v` crosses `e`.
    pub chains: Vec<Vec<i64>>,
}

impl SpanningTree {
    /// Breadth-first tree from `root`, scanning edges in their stored order.
    pub fn bfs(g: &VertexWeightedMetricGraph, root: usize) -> Self {
        let order: Vec<usize> = (0..g.edges().len()).collect();
        Self::bfs_with_order(g, root, &order)
    }

    /// Breadth-first tree scanning edges in `order`, so different orders give
    /// different trees.
    pub fn bfs_with_order(g: &VertexWeightedMetricGraph, root: usize, order: &[usize]) -> Self {
        let n = g.vertices().len();
        let m = g.edges().len();
        let mut chains: Vec<Option<Vec<i64>>> = vec![None; n];
        chains[root] = Some(vec![0; m]);
        let mut tree_edges = Vec::new();
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &e in order {
                let edge = &g.edges()[e];
                let (w, sign) = if edge.from == v {
                    (edge.to, 1)
                } else if edge.to == v {
                    (edge.from, -1)
                } else {
                    continue;
                };
                if chains[w].is_none() {
                    let mut c = chains[v].clone().expect("visited");
                    c[e] += sign;
                    chains[w] = Some(c);
                    tree_edges.push(e);
                    queue.push_back(w);
                }
            }
        }
        tree_edges.sort_unstable();
        SpanningTree {
            root,
            tree_edges,
            chains: chains.into_iter().map(|c| c.expect("graph is connected")).collect(),
        }
    }

    /// Chain, in length units, of the tree path from the root to `x`; an edge
    /// point is reached through the `from` end of its edge.
    pub fn path_from_root(&self, g: &VertexWeightedMetricGraph, x: &GraphPoint) -> Vec<BigRational> {
        let scale = |chain: &[i64]| -> Vec<BigRational> {
            chain
                .iter()
                .zip(g.edges())
                .map(|(&c, e)| &e.length * BigRational::from_integer(c.into()))
                .collect()
        };
        match x {
            GraphPoint::Vertex(v) => scale(&self.chains[*v]),
            GraphPoint::Edge { edge, offset } => {
                let mut c = scale(&self.chains[g.edges()[*edge].from]);
                c[*edge] += offset;
                c
            }
        }
    }

    /// Chain of a path from `x0` to `x`.
    pub fn path(&self, g: &VertexWeightedMetricGraph, x0: &GraphPoint, x: &GraphPoint) -> Vec<BigRational> {
        let a = self.path_from_root(g, x0);
        let b = self.path_from_root(g, x);
        b.into_iter().zip(a).map(|(p, q)| p - q).collect()
    }
}

/// Fundamental cycles of a spanning tree, as signed edge incidence vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBasis {
    pub tree: SpanningTree,
    pub cycles: Vec<Vec<i64>>,
}

impl CycleBasis {
    pub fn new(g: &VertexWeightedMetricGraph) -> Self {
        Self::from_tree(g, SpanningTree::bfs(g, 0))
    }

    /// For a non-tree edge `e: a → b` the cycle is `e` followed by the tree
    /// path from `b` back to `a`.
    pub fn from_tree(g: &VertexWeightedMetricGraph, tree: SpanningTree) -> Self {
        let mut cycles = Vec::new();
        for (i, e) in g.edges().iter().enumerate() {
            if tree.tree_edges.binary_search(&i).is_ok() {
                continue;
            }
            let mut c: Vec<i64> = tree.chains[e.from]
                .iter()
                .zip(&tree.chains[e.to])
                .map(|(a, b)| a - b)
                .collect();
            c[i] += 1;
            cycles.push(c);
        }
        CycleBasis { tree, cycles }
    }

    pub fn rank(&self) -> usize {
        self.cycles.len()
    }
}

/// The lattice `Λ ⊂ R^h` spanned by the rows of the Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodLattice {
    pub basis: CycleBasis,
    pub gram: Matrix,
}

impl PeriodLattice {
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// Pairings of an edge chain (in length units) with the basis cycles.
    pub fn pair(&self, chain: &[BigRational]) -> Vec<BigRational> {
        self.basis
            .cycles
            .iter()
            .map(|c| {
                c.iter()
                    .zip(chain)
                    .filter(|(s, _)| **s != 0)
                    .map(|(&s, x)| x * BigRational::from_integer(s.into()))
                    .sum()
            })
            .collect()
    }

    /// Whether `y = gram · z` for an integer vector `z`.
    pub fn contains(&self, y: &[BigRational]) -> bool {
        if self.rank() == 0 {
            return true;
        }
        linalg::solve(&self.gram, y).is_some_and(|z| linalg::is_integral(&z))
    }
}

pub fn period_lattice(g: &VertexWeightedMetricGraph) -> PeriodLattice {
    lattice_for_basis(g, CycleBasis::new(g))
}

pub fn lattice_for_basis(g: &VertexWeightedMetricGraph, basis: CycleBasis) -> PeriodLattice {
    let h = basis.rank();
    let mut gram = vec![vec![BigRational::zero(); h]; h];
    for i in 0..h {
        for j in 0..h {
            let mut s = BigRational::zero();
            for (e, edge) in g.edges().iter().enumerate() {
                let k = basis.cycles[i][e] * basis.cycles[j][e];
                if k != 0 {
                    s += &edge.length * BigRational::from_integer(k.into());
                }
            }
            gram[i][j] = s;
        }
    }
    PeriodLattice { basis, gram }
}

/// `([P, γᵢ])ᵢ` for a tree path `P` from `x0` to `x`.
pub fn abel_jacobi(
    g: &VertexWeightedMetricGraph,
    lattice: &PeriodLattice,
    x0: &GraphPoint,
    x: &GraphPoint,
) -> Vec<BigRational> {
    lattice.pair(&lattice.basis.tree.path(g, x0, x))
}

/// Whether a degree-zero divisor is principal, i.e. its Abel–Jacobi image
/// lies in the period lattice.
pub fn is_principal(g: &VertexWeightedMetricGraph, d: &GraphDivisor) -> Result<bool, JacobianError> {
    let deg = d.degree();
    if deg != 0 {
        return Err(JacobianError::NonzeroDegree(deg));
    }
    let lattice = period_lattice(g);
    let x0 = GraphPoint::Vertex(0);
    let mut total = vec![BigRational::zero(); lattice.rank()];
    for (x, c) in d.terms() {
        let aj = abel_jacobi(g, &lattice, &x0, x);
        for (t, a) in total.iter_mut().zip(aj) {
            *t += a * BigRational::from_integer(c.into());
        }
    }
    Ok(lattice.contains(&total))
}

/// Derivative of the Abel–Jacobi map leaving `v` along each incident edge
/// end, in the order of [`VertexWeightedMetricGraph::incidences`].
pub fn derivative_vectors(g: &VertexWeightedMetricGraph, lattice: &PeriodLattice, v: usize) -> Vec<Vec<i64>> {
    g.incidences(v)
        .into_iter()
        .map(|(e, is_from)| {
            let sign = if is_from { 1 } else { -1 };
            lattice.basis.cycles.iter().map(|c| sign * c[e]).collect()
        })
        .collect()
}

/// Outgoing derivative vectors sum to zero at every vertex.
pub fn balancing_check(g: &VertexWeightedMetricGraph) -> bool {
    let lattice = period_lattice(g);
    (0..g.vertices().len()).all(|v| {
        let vecs = derivative_vectors(g, &lattice, v);
        (0..lattice.rank()).all(|i| vecs.iter().map(|d| d[i]).sum::<i64>() == 0)
    })
}

/// Integer vectors `x` with `xᵀ A x = n`, for positive definite `A`.
fn vectors_of_norm(a: &Matrix, n: &BigRational) -> Vec<Vec<i64>> {
    let h = a.len();
    let inv = linalg::inverse(a).expect("positive definite");
    // x_i² ≤ n · (A⁻¹)_ii.
    let bounds: Vec<i64> = (0..h)
        .map(|i| {
            let b = n * &inv[i][i];
            let f = b.floor().to_integer().to_i64().unwrap_or(i64::MAX);
            let mut r = (f as f64).sqrt() as i64 + 1;
            while r > 0 && BigRational::from_integer((r * r).into()) > b {
                r -= 1;
            }
            r
        })
        .collect();
    let mut out = Vec::new();
    let mut x = vec![0i64; h];
    fn rec(i: usize, x: &mut Vec<i64>, bounds: &[i64], a: &Matrix, n: &BigRational, out: &mut Vec<Vec<i64>>) {
        if i == x.len() {
            if quad(a, x, x) == *n {
                out.push(x.clone());
            }
            return;
        }
        for v in -bounds[i]..=bounds[i] {
            x[i] = v;
            rec(i + 1, x, bounds, a, n, out);
        }
    }
    rec(0, &mut x, &bounds, a, n, &mut out);
    out
}

fn quad(a: &Matrix, x: &[i64], y: &[i64]) -> BigRational {
    let mut s = BigRational::zero();
    for (i, row) in a.iter().enumerate() {
        for (j, aij) in row.iter().enumerate() {
            let k = x[i] * y[j];
            if k != 0 {
                s += aij * BigRational::from_integer(k.into());
            }
        }
    }
    s
}

/// Whether `Uᵀ A U = B` for some integer `U` with `det U = ±1`, for positive
/// definite Gram matrices. Intended for small ranks.
pub fn gram_congruent(a: &Matrix, b: &Matrix) -> bool {
    let h = a.len();
    if b.len() != h {
        return false;
    }
    if h == 0 {
        return true;
    }
    if linalg::determinant(a) != linalg::determinant(b) {
        return false;
    }
    let candidates: Vec<Vec<Vec<i64>>> = (0..h).map(|i| vectors_of_norm(a, &b[i][i])).collect();
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    fn search(a: &Matrix, b: &Matrix, candidates: &[Vec<Vec<i64>>], chosen: &mut Vec<Vec<i64>>) -> bool {
        let i = chosen.len();
        if i == b.len() {
            let u: Vec<Vec<BigInt>> = (0..b.len())
                .map(|r| chosen.iter().map(|col| BigInt::from(col[r])).collect())
                .collect();
            return linalg::bareiss_determinant(u).abs().is_one();
        }
        for cand in &candidates[i] {
            if (0..i).all(|j| quad(a, &chosen[j], cand) == b[j][i]) {
                chosen.push(cand.clone());
                if search(a, b, candidates, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    search(a, b, &candidates, &mut chosen)
}
