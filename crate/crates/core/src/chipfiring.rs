//! Chip-firing on finite loopless multigraphs.
//!
//! Divisors are reduced with respect to a base vertex `q` by first letting
//! every negative vertex other than `q` borrow until none is left, then
//! running Dhar's burning algorithm and firing the unburnt set until the fire
//! spreads everywhere. A divisor is equivalent to an effective one exactly
//! when its `q`-reduced form is nonnegative at `q`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChipError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("loop at {0:?} is not allowed")]
    Loop(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("divisor has {got} entries but the graph has {want} vertices")]
    WrongLength { got: usize, want: usize },
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
}

/// Connected multigraph without loops, stored as an adjacency count matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGraph {
    names: Vec<String>,
    adj: Vec<Vec<u32>>,
}

impl FiniteGraph {
    pub fn new(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, ChipError> {
        let n = names.len();
        if n == 0 {
            return Err(ChipError::Empty);
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(ChipError::DuplicateVertex(a.clone()));
            }
        }
        let mut adj = vec![vec![0u32; n]; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(ChipError::UnknownVertex(format!("#{}", a.max(b))));
            }
            if a == b {
                return Err(ChipError::Loop(names[a].clone()));
            }
            adj[a][b] += 1;
            adj[b][a] += 1;
        }
        let g = FiniteGraph { names, adj };
        if !g.is_connected() {
            return Err(ChipError::Disconnected);
        }
        Ok(g)
    }

    /// Vertices named `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, ChipError> {
        Self::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    fn is_connected(&self) -> bool {
        let n = self.len();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                if self.adj[v][w] > 0 && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Result<usize, ChipError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| ChipError::UnknownVertex(name.to_string()))
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> u32 {
        self.adj[a][b]
    }

    pub fn degree(&self, v: usize) -> i64 {
        self.adj[v].iter().map(|&m| m as i64).sum()
    }

    pub fn edge_count(&self) -> i64 {
        (0..self.len()).map(|v| self.degree(v)).sum::<i64>() / 2
    }

    /// `E − V + 1`.
    pub fn genus(&self) -> i64 {
        self.edge_count() - self.len() as i64 + 1
    }

    /// `K = Σ (deg(v) − 2)·(v)`.
    pub fn canonical(&self) -> IntDivisor {
        IntDivisor((0..self.len()).map(|v| self.degree(v) - 2).collect())
    }

    /// Fires every vertex of `set` once.
    pub fn fire_set(&self, d: &mut IntDivisor, set: &[bool]) {
        for v in 0..self.len() {
            if !set[v] {
                continue;
            }
            for w in 0..self.len() {
                if !set[w] {
                    let m = self.adj[v][w] as i64;
                    d.0[v] -= m;
                    d.0[w] += m;
                }
            }
        }
    }

    /// Fires a single vertex `times` times (negative means borrowing).
    pub fn fire_vertex(&self, d: &mut IntDivisor, v: usize, times: i64) {
        for w in 0..self.len() {
            let m = self.adj[v][w] as i64 * times;
            d.0[v] -= m;
            d.0[w] += m;
        }
    }

    pub fn divisor(&self, coeffs: Vec<i64>) -> Result<IntDivisor, ChipError> {
        if coeffs.len() != self.len() {
            return Err(ChipError::WrongLength {
                got: coeffs.len(),
                want: self.len(),
            });
        }
        Ok(IntDivisor(coeffs))
    }

    /// Reads `{"name": coefficient, ...}`; absent vertices get 0.
    pub fn divisor_from_map(&self, map: &BTreeMap<String, i64>) -> Result<IntDivisor, ChipError> {
        let mut d = vec![0; self.len()];
        for (k, &c) in map {
            d[self.index(k)?] += c;
        }
        Ok(IntDivisor(d))
    }

    pub fn divisor_to_map(&self, d: &IntDivisor) -> BTreeMap<String, i64> {
        self.names
            .iter()
            .zip(&d.0)
            .filter(|(_, &c)| c != 0)
            .map(|(n, &c)| (n.clone(), c))
            .collect()
    }
}

/// On-disk form: vertex names and edges as name pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl FiniteGraphFile {
    pub fn build(&self) -> Result<FiniteGraph, ChipError> {
        let find = |s: &str| {
            self.vertices
                .iter()
                .position(|v| v == s)
                .ok_or_else(|| ChipError::UnknownVertex(s.to_string()))
        };
        let edges = self
            .edges
            .iter()
            .map(|(a, b)| Ok((find(a)?, find(b)?)))
            .collect::<Result<Vec<_>, ChipError>>()?;
        FiniteGraph::new(self.vertices.clone(), &edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntDivisor(pub Vec<i64>);

impl IntDivisor {
    pub fn zero(n: usize) -> Self {
        IntDivisor(vec![0; n])
    }

    pub fn unit(n: usize, v: usize) -> Self {
        let mut d = Self::zero(n);
        d.0[v] = 1;
        d
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn plus(&self, other: &IntDivisor) -> IntDivisor {
        IntDivisor(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, other: &IntDivisor) -> IntDivisor {
        IntDivisor(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

/// The unique `q`-reduced divisor equivalent to `d`.
pub fn q_reduce(g: &FiniteGraph, d: &IntDivisor, q: usize) -> IntDivisor {
    let n = g.len();
    let mut d = d.clone();
    // Negative vertices other than q borrow until none is left.
    loop {
        let mut changed = false;
        for v in 0..n {
            if v != q && d.0[v] < 0 {
                let deg = g.degree(v);
                let times = (-d.0[v] + deg - 1) / deg;
                g.fire_vertex(&mut d, v, -times);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    // Dhar: burn from q; fire the unburnt set until everything burns.
    loop {
        let mut burnt = vec![false; n];
        burnt[q] = true;
        let mut queue = VecDeque::from([q]);
        let mut heat = vec![0i64; n];
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                let m = g.adj[v][w] as i64;
                if m == 0 || burnt[w] {
                    continue;
                }
                heat[w] += m;
                if heat[w] > d.0[w] {
                    burnt[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if burnt.iter().all(|&b| b) {
            return d;
        }
        let unburnt: Vec<bool> = burnt.iter().map(|b| !b).collect();
        g.fire_set(&mut d, &unburnt);
    }
}

/// Whether `d` is equivalent to an effective divisor.
pub fn is_effective_class(g: &FiniteGraph, d: &IntDivisor) -> bool {
    d.degree() >= 0 && q_reduce(g, d, 0).0[0] >= 0
}

/// Baker–Norine rank with a memo keyed by `q`-reduced representatives, so
/// repeated queries on one graph share work.
pub struct RankOracle<'g> {
    graph: &'g FiniteGraph,
    memo: HashMap<IntDivisor, i64>,
}

impl<'g> RankOracle<'g> {
    pub fn new(graph: &'g FiniteGraph) -> Self {
        RankOracle {
            graph,
            memo: HashMap::new(),
        }
    }

    /// `-1` if `d` is not equivalent to an effective divisor, otherwise
    /// `1 + min_v r(d − v)`.
    pub fn rank(&mut self, d: &IntDivisor) -> i64 {
        if d.degree() < 0 {
            return -1;
        }
        let reduced = q_reduce(self.graph, d, 0);
        if reduced.0[0] < 0 {
            return -1;
        }
        if let Some(&r) = self.memo.get(&reduced) {
            return r;
        }
        let n = self.graph.len();
        let mut best = i64::MAX;
        for v in 0..n {
            let r = self.rank(&reduced.minus(&IntDivisor::unit(n, v)));
            best = best.min(r);
            if best == -1 {
                break;
            }
        }
        let r = best + 1;
        self.memo.insert(reduced, r);
        r
    }
}

pub fn bn_rank(g: &FiniteGraph, d: &IntDivisor) -> i64 {
    RankOracle::new(g).rank(d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannRochCheck {
    pub rank: i64,
    pub dual_rank: i64,
    pub degree: i64,
    pub genus: i64,
    pub holds: bool,
}

/// Evaluates both sides of `r(D) − r(K − D) = deg D − g + 1`.
pub fn check_riemann_roch(g: &FiniteGraph, d: &IntDivisor) -> RiemannRochCheck {
    check_riemann_roch_with(&mut RankOracle::new(g), d)
}

pub fn check_riemann_roch_with(oracle: &mut RankOracle, d: &IntDivisor) -> RiemannRochCheck {
    let g = oracle.graph;
    let k = g.canonical();
    let rank = oracle.rank(d);
    let dual_rank = oracle.rank(&k.minus(d));
    let degree = d.degree();
    let genus = g.genus();
    RiemannRochCheck {
        rank,
        dual_rank,
        degree,
        genus,
        holds: rank - dual_rank == degree - genus + 1,
    }
}

/// `r(D) ≤ deg(D)/2` for special divisors (`r(D) ≥ 0` and `r(K − D) ≥ 0`).
pub fn check_clifford(g: &FiniteGraph, d: &IntDivisor) -> Result<bool, ChipError> {
    check_clifford_with(&mut RankOracle::new(g), d)
}

pub fn check_clifford_with(oracle: &mut RankOracle, d: &IntDivisor) -> Result<bool, ChipError> {
    let k = oracle.graph.canonical();
    let r = oracle.rank(d);
    let dual = oracle.rank(&k.minus(d));
    if r < 0 || dual < 0 {
        return Err(ChipError::PreconditionNotMet(format!("r(D) = {r}, r(K - D) = {dual}")));
    }
    Ok(2 * r <= d.degree())
}
