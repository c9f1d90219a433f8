//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropical_chabauty::chipfiring::{FiniteGraph, IntDivisor};
use tropical_chabauty::metric_graph::{EdgePiece, GraphPoint, PLFunction, VertexWeightedMetricGraph};
use tropical_chabauty::padic::rational_valuation;
use tropical_chabauty::rat;
use tropical_chabauty::series::PadicSeries;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> BigRational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn random_length<R: Rng>(rng: &mut R) -> BigRational {
    rat(rng.gen_range(1..=6), rng.gen_range(1..=3))
}

// ---------------------------------------------------------------------------
// N_p by direct scan

fn floor_log(n: i64, p: i64) -> i64 {
    let mut k = 0;
    let mut q = p;
    while q <= n {
        k += 1;
        q = q.saturating_mul(p);
    }
    k
}

/// `min{N ≥ 1 : a(n − N₀) > b·⌊log_p n⌋ for all n ≥ N}` for the rate `a/b`,
/// scanning `n < horizon`. Panics if a failure is found in the top half of
/// the scan, where the horizon would be too small to trust.
pub fn np_scan(p: i64, a: i64, b: i64, n0: i64, horizon: i64) -> i64 {
    let mut last_fail = 0;
    for n in 1..horizon {
        if a * (n - n0) <= b * floor_log(n, p) {
            last_fail = n;
        }
    }
    assert!(last_fail < horizon / 2, "horizon {horizon} too small");
    last_fail + 1
}

// ---------------------------------------------------------------------------
// Symplectic similitudes by enumeration

/// `#{M ∈ GL_{2g}(F_q) : Mᵀ J M = λ J, λ ∈ F_q^×}` with `J = [[0, I], [−I, 0]]`,
/// built one column at a time with the pairing constraints checked as soon
/// as both columns are known.
pub fn gsp_count(g: usize, q: u64) -> u64 {
    let n = 2 * g;
    let q = q as i64;
    let vectors: Vec<Vec<i64>> = (0..q.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = k % q;
                    k /= q;
                    d
                })
                .collect()
        })
        .collect();
    let omega = |x: &[i64], y: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..g {
            s += x[i] * y[g + i] - x[g + i] * y[i];
        }
        s.rem_euclid(q)
    };
    let j = |a: usize, b: usize| -> i64 {
        if a < g && b == a + g {
            1
        } else if a >= g && b + g == a {
            -1
        } else {
            0
        }
    };
    fn extend(
        cols: &mut Vec<usize>,
        n: usize,
        lambda: i64,
        q: i64,
        vectors: &[Vec<i64>],
        omega: &dyn Fn(&[i64], &[i64]) -> i64,
        j: &dyn Fn(usize, usize) -> i64,
    ) -> u64 {
        let k = cols.len();
        if k == n {
            return 1;
        }
        let mut total = 0;
        for (idx, v) in vectors.iter().enumerate() {
            let ok = cols
                .iter()
                .enumerate()
                .all(|(i, &c)| omega(&vectors[c], v) == (lambda * j(i, k)).rem_euclid(q));
            if ok {
                cols.push(idx);
                total += extend(cols, n, lambda, q, vectors, omega, j);
                cols.pop();
            }
        }
        total
    }
    (1..q)
        .map(|lambda| extend(&mut Vec::new(), n, lambda, q, &vectors, &omega, &j))
        .sum()
}

// ---------------------------------------------------------------------------
// Finite multigraphs

/// Connected loopless multigraphs on `n` vertices with at most `max_edges`
/// edges, one per isomorphism class, as edge lists.
pub fn multigraphs(n: usize, max_edges: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut mult = vec![0usize; pairs.len()];
    fn rec(
        i: usize,
        left: usize,
        pairs: &[(usize, usize)],
        mult: &mut Vec<usize>,
        n: usize,
        perms: &[Vec<usize>],
        seen: &mut BTreeSet<Vec<usize>>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if i == pairs.len() {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .zip(mult.iter())
                .flat_map(|(&p, &m)| std::iter::repeat(p).take(m))
                .collect();
            if !connected(n, &edges) {
                return;
            }
            let key = perms
                .iter()
                .map(|perm| {
                    let mut adj = vec![0usize; n * n];
                    for &(a, b) in &edges {
                        let (x, y) = (perm[a], perm[b]);
                        adj[x * n + y] += 1;
                        adj[y * n + x] += 1;
                    }
                    adj
                })
                .min()
                .expect("nonempty");
            if seen.insert(key) {
                out.push(edges);
            }
            return;
        }
        for m in 0..=left {
            mult[i] = m;
            rec(i + 1, left - m, pairs, mult, n, perms, seen, out);
        }
        mult[i] = 0;
    }
    rec(0, max_edges, &pairs, &mut mult, n, &perms, &mut seen, &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// All divisors with coefficients in `[lo, hi]`.
pub fn all_divisors(n: usize, lo: i64, hi: i64) -> Vec<IntDivisor> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|d: Vec<i64>| {
                (lo..=hi).map(move |c| {
                    let mut e = d.clone();
                    e.push(c);
                    e
                })
            })
            .collect();
    }
    out.into_iter().map(IntDivisor).collect()
}

/// Whether `d1 − d2` lies in the image of the Laplacian, by exact solution of
/// the reduced system with the last vertex grounded.
pub fn laplacian_equivalent(g: &FiniteGraph, d1: &IntDivisor, d2: &IntDivisor) -> bool {
    let n = g.len();
    let diff: Vec<i64> = d1.0.iter().zip(&d2.0).map(|(a, b)| a - b).collect();
    if diff.iter().sum::<i64>() != 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let m = n - 1;
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..m)
                .map(|j| {
                    let v = if i == j { g.degree(i) } else { -(g.multiplicity(i, j) as i64) };
                    BigRational::from_integer(v.into())
                })
                .collect();
            row.push(BigRational::from_integer(diff[i].into()));
            row
        })
        .collect();
    for col in 0..m {
        let piv = (col..m).find(|&r| !a[r][col].is_zero()).expect("reduced Laplacian is invertible");
        a.swap(col, piv);
        let inv = a[col][col].clone().recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..=m {
                    let t = &a[col][c] * &f;
                    a[r][c] -= t;
                }
            }
        }
    }
    a.iter().all(|row| row[m].is_integer())
}

// ---------------------------------------------------------------------------
// Metric graphs and PL functions

pub struct GraphShape {
    pub max_vertices: usize,
    pub max_extra_edges: usize,
    pub max_weight: u32,
    pub loops: bool,
}

pub fn random_metric_graph<R: Rng>(rng: &mut R, shape: &GraphShape) -> VertexWeightedMetricGraph {
    let n = rng.gen_range(1..=shape.max_vertices);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    for _ in 0..rng.gen_range(0..=shape.max_extra_edges) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b || shape.loops {
            edges.push(if rng.gen_bool(0.5) { (a, b) } else { (b, a) });
        }
    }
    edges.shuffle(rng);
    let vertices: Vec<(&str, u32)> = names
        .iter()
        .map(|s| (s.as_str(), rng.gen_range(0..=shape.max_weight)))
        .collect();
    let ids: Vec<String> = (0..edges.len()).map(|i| format!("e{i}")).collect();
    let edge_specs: Vec<(&str, &str, &str, BigRational)> = edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| (ids[i].as_str(), names[a].as_str(), names[b].as_str(), random_length(rng)))
        .collect();
    VertexWeightedMetricGraph::from_ids(&vertices, &edge_specs).expect("valid random graph")
}

/// Integer-slope piece of total rise `rise` over `[0, length]`: up to two
/// free segments followed by a pair of slopes straddling the remaining
/// average slope, whose breakpoint is solved for exactly.
fn random_piece<R: Rng>(rng: &mut R, length: &BigRational, rise: &BigRational) -> EdgePiece {
    let mut breakpoints = Vec::new();
    let mut slopes = Vec::new();
    let mut start = BigRational::zero();
    let mut rest = rise.clone();
    for _ in 0..rng.gen_range(0..=2) {
        let frac = rat(rng.gen_range(1..=3), 4);
        let b = &start + (length - &start) * frac;
        let s = rng.gen_range(-3..=3);
        rest -= BigRational::from_integer(s.into()) * (&b - &start);
        slopes.push(s);
        breakpoints.push(b.clone());
        start = b;
    }
    let span = length - &start;
    let avg = &rest / &span;
    if avg.is_integer() && rng.gen_bool(0.3) {
        slopes.push(avg.to_integer().try_into().expect("small"));
        return EdgePiece { breakpoints, slopes };
    }
    let hi: i64 = i64::try_from(avg.floor().to_integer() + BigInt::from(1 + rng.gen_range(0..2i64))).expect("small");
    let lo: i64 = i64::try_from(avg.ceil().to_integer() - BigInt::from(1 + rng.gen_range(0..2i64))).expect("small");
    // hi·(x − start) + lo·(L − x) = rest
    let x = (&rest - BigRational::from_integer(lo.into()) * length + BigRational::from_integer(hi.into()) * &start)
        / BigRational::from_integer((hi - lo).into());
    slopes.push(hi);
    slopes.push(lo);
    breakpoints.push(x);
    EdgePiece { breakpoints, slopes }
}

pub fn random_pl_function<R: Rng>(rng: &mut R, g: &VertexWeightedMetricGraph) -> PLFunction {
    let values: Vec<BigRational> = (0..g.vertices().len()).map(|_| random_rational(rng, 6, 3)).collect();
    let pieces = g
        .edges()
        .iter()
        .map(|e| random_piece(rng, &e.length, &(&values[e.to] - &values[e.from])))
        .collect();
    PLFunction::new(g, values, pieces).expect("continuous by construction")
}

pub fn random_point<R: Rng>(rng: &mut R, g: &VertexWeightedMetricGraph) -> GraphPoint {
    if g.edges().is_empty() || rng.gen_bool(0.4) {
        return GraphPoint::Vertex(rng.gen_range(0..g.vertices().len()));
    }
    let e = rng.gen_range(0..g.edges().len());
    let offset = &g.edges()[e].length * rat(rng.gen_range(1..=7), 8);
    g.point_on_edge(e, offset).expect("interior")
}

/// Signed length chain of a random walk from `x0` to `x`.
pub fn random_walk_chain<R: Rng>(
    rng: &mut R,
    g: &VertexWeightedMetricGraph,
    x0: &GraphPoint,
    x: &GraphPoint,
) -> Vec<BigRational> {
    let edges = g.edges();
    let mut chain = vec![BigRational::zero(); edges.len()];
    let mut at = match x0 {
        GraphPoint::Vertex(v) => *v,
        GraphPoint::Edge { edge, offset } => {
            let e = &edges[*edge];
            if rng.gen_bool(0.5) {
                chain[*edge] -= offset;
                e.from
            } else {
                chain[*edge] += &e.length - offset;
                e.to
            }
        }
    };
    let step = |chain: &mut Vec<BigRational>, at: usize, e: usize| -> usize {
        let edge = &edges[e];
        if edge.from == at {
            chain[e] += &edge.length;
            edge.to
        } else {
            chain[e] -= &edge.length;
            edge.from
        }
    };
    for _ in 0..rng.gen_range(0..8) {
        let inc: Vec<usize> = (0..edges.len())
            .filter(|&e| edges[e].from == at || edges[e].to == at)
            .collect();
        if let Some(&e) = inc.choose(rng) {
            at = step(&mut chain, at, e);
        }
    }
    let (target, tail): (usize, Option<(usize, BigRational)>) = match x {
        GraphPoint::Vertex(v) => (*v, None),
        GraphPoint::Edge { edge, offset } => {
            let e = &edges[*edge];
            if rng.gen_bool(0.5) {
                (e.from, Some((*edge, offset.clone())))
            } else {
                (e.to, Some((*edge, offset - &e.length)))
            }
        }
    };
    // Breadth-first path from `at` to `target`.
    let n = g.vertices().len();
    let mut prev: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[at] = true;
    let mut queue = VecDeque::from([at]);
    while let Some(v) = queue.pop_front() {
        for (e, edge) in edges.iter().enumerate() {
            for (a, b) in [(edge.from, edge.to), (edge.to, edge.from)] {
                if a == v && !seen[b] {
                    seen[b] = true;
                    prev[b] = Some(e);
                    queue.push_back(b);
                }
            }
        }
    }
    let mut path = Vec::new();
    let mut v = target;
    while v != at {
        let e = prev[v].expect("connected");
        path.push(e);
        v = if edges[e].to == v { edges[e].from } else { edges[e].to };
    }
    for e in path.into_iter().rev() {
        at = step(&mut chain, at, e);
    }
    assert_eq!(at, target);
    if let Some((e, delta)) = tail {
        chain[e] += delta;
    }
    chain
}

// ---------------------------------------------------------------------------
// Canonical sections by exhaustive search

/// Unit-length graph from a loopless multigraph with the given weights.
pub fn unit_graph(n: usize, edges: &[(usize, usize)], weights: &[u32]) -> VertexWeightedMetricGraph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let ids: Vec<String> = (0..edges.len()).map(|i| format!("e{i}")).collect();
    let vs: Vec<(&str, u32)> = names.iter().zip(weights).map(|(s, &w)| (s.as_str(), w)).collect();
    let es: Vec<(&str, &str, &str, BigRational)> = edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| (ids[i].as_str(), names[a].as_str(), names[b].as_str(), BigRational::one()))
        .collect();
    VertexWeightedMetricGraph::from_ids(&vs, &es).expect("valid graph")
}

/// Every function on a unit-length graph that is linear on each half edge
/// with slopes in `[−max_slope, max_slope]`, vanishes at vertex 0, and
/// satisfies the necessary conditions for `div(F) + K ≥ 0`: concavity at
/// each midpoint, at most `2g − 2` interior zeros in total, and outgoing
/// slope sum at most `K(v)` at every vertex.
pub fn half_edge_sections(g: &VertexWeightedMetricGraph, max_slope: i64) -> Vec<PLFunction> {
    let n = g.vertices().len();
    let edges = g.edges();
    let budget = 2 * g.genus() - 2;
    if budget < 0 {
        return vec![PLFunction::constant(g, BigRational::zero())];
    }
    let k: Vec<i64> = (0..n)
        .map(|v| 2 * g.vertices()[v].weight as i64 - 2 + g.valency(v) as i64)
        .collect();
    // Edge order: each edge appears once one endpoint has a potential, and
    // a vertex is checked after its last incident edge.
    let mut order = Vec::new();
    let mut known = vec![false; n];
    known[0] = true;
    let mut used = vec![false; edges.len()];
    while order.len() < edges.len() {
        let next = (0..edges.len())
            .filter(|&e| !used[e])
            .min_by_key(|&e| match (known[edges[e].from], known[edges[e].to]) {
                (true, true) => 0,
                (true, false) | (false, true) => 1,
                _ => 2,
            })
            .expect("edges left");
        assert!(known[edges[next].from] || known[edges[next].to], "connected");
        used[next] = true;
        known[edges[next].from] = true;
        known[edges[next].to] = true;
        order.push(next);
    }
    let mut last_edge = vec![None; n];
    for (pos, &e) in order.iter().enumerate() {
        last_edge[edges[e].from] = Some(pos);
        last_edge[edges[e].to] = Some(pos);
    }
    // Potentials are stored doubled so they stay integral.
    struct State {
        pot2: Vec<Option<i64>>,
        slopes: Vec<(i64, i64)>,
        out: Vec<i64>,
        spent: i64,
    }
    let mut st = State {
        pot2: vec![None; n],
        slopes: vec![(0, 0); edges.len()],
        out: vec![0; n],
        spent: 0,
    };
    st.pot2[0] = Some(0);
    let mut found = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        pos: usize,
        order: &[usize],
        g: &VertexWeightedMetricGraph,
        k: &[i64],
        last_edge: &[Option<usize>],
        budget: i64,
        max_slope: i64,
        st: &mut State,
        found: &mut Vec<PLFunction>,
    ) {
        let edges = g.edges();
        if pos == order.len() {
            let values = st
                .pot2
                .iter()
                .map(|p| rat(p.expect("assigned"), 2))
                .collect();
            let pieces = st
                .slopes
                .iter()
                .map(|&(a, b)| EdgePiece {
                    breakpoints: vec![rat(1, 2)],
                    slopes: vec![a, b],
                })
                .collect();
            found.push(PLFunction::new(g, values, pieces).expect("continuous"));
            return;
        }
        let e = order[pos];
        let (from, to) = (edges[e].from, edges[e].to);
        let mut candidates = Vec::new();
        for a in -max_slope..=max_slope {
            for b in -max_slope..=a {
                if st.spent + (a - b) > budget {
                    continue;
                }
                let rise2 = a + b;
                let ok = match (st.pot2[from], st.pot2[to]) {
                    (Some(x), Some(y)) => y - x == rise2,
                    _ => true,
                };
                if ok {
                    candidates.push((a, b));
                }
            }
        }
        for (a, b) in candidates {
            let saved = (st.pot2[from], st.pot2[to]);
            match saved {
                (Some(x), None) => st.pot2[to] = Some(x + a + b),
                (None, Some(y)) => st.pot2[from] = Some(y - a - b),
                _ => {}
            }
            st.slopes[e] = (a, b);
            st.out[from] += a;
            st.out[to] -= b;
            st.spent += a - b;
            let fine = [from, to]
                .iter()
                .all(|&v| last_edge[v] != Some(pos) || st.out[v] <= k[v]);
            if fine {
                rec(pos + 1, order, g, k, last_edge, budget, max_slope, st, found);
            }
            st.spent -= a - b;
            st.out[from] -= a;
            st.out[to] += b;
            st.pot2[from] = saved.0;
            st.pot2[to] = saved.1;
        }
    }
    rec(0, &order, g, &k, &last_edge, budget, max_slope, &mut st, &mut found);
    found
}

// ---------------------------------------------------------------------------
// Laurent forms with known zeros

/// `F = t^e · Π(t − rᵢ)` with `e ≥ 1` or `e ≤ −(number of roots) − 1`, so
/// that `F` has no constant term, together with `ω = t·F′(t)` as a `dt/t`
/// series and the root valuations.
pub struct KnownZeros {
    pub omega: PadicSeries,
    pub f_coeffs: Vec<BigRational>,
    pub low: i64,
    pub root_valuations: Vec<i64>,
}

pub fn random_known_zeros<R: Rng>(rng: &mut R, p: u64) -> KnownZeros {
    let k = rng.gen_range(1..=5);
    let mut roots = Vec::new();
    let mut vals = Vec::new();
    for _ in 0..k {
        let v = rng.gen_range(0..=5u32);
        let unit = loop {
            let u = rng.gen_range(-20i64..=20);
            if u != 0 && u % p as i64 != 0 {
                break u;
            }
        };
        let r = BigRational::from_integer(BigInt::from(unit) * num_traits::pow(BigInt::from(p), v as usize));
        vals.push(rational_valuation(&r, p).finite().expect("nonzero"));
        roots.push(r);
    }
    let mut poly = vec![BigRational::one()];
    for r in &roots {
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        poly = next;
    }
    let e: i64 = if rng.gen_bool(0.5) {
        rng.gen_range(1..=3)
    } else {
        -(k as i64) - rng.gen_range(1..=3)
    };
    let omega_coeffs: Vec<BigRational> = poly
        .iter()
        .enumerate()
        .map(|(i, c)| c * BigRational::from_integer((e + i as i64).into()))
        .collect();
    let omega = PadicSeries::from_rationals(p, e, &omega_coeffs).expect("valid series");
    KnownZeros {
        omega,
        f_coeffs: poly,
        low: e,
        root_valuations: vals,
    }
}
