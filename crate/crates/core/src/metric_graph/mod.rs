//! Vertex-weighted metric graphs and their divisors.
//!
//! A graph is closed: leaves and other boundary vertices carry `ord` terms
//! like any other point. Loops and parallel edges are allowed; a loop adds 2
//! to the valency of its vertex.

mod pl;
pub mod tropicalize;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::json::Q;

pub use pl::{
    canonical_divisor, check_slope_bound, divisor_of, is_canonical_section, max_abs_slope, ord_at,
    slope_bound_constant, zeros_from_slopes, CanonicalCheck, EdgePiece, PLFunction, PLFunctionFile, PieceRecord,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("edge {0:?} must have positive length")]
    NonpositiveLength(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("point {0} is not on the graph")]
    PointOutOfRange(String),
    #[error("cannot parse point {0:?}")]
    BadPoint(String),
    #[error("function is discontinuous along edge {0:?}")]
    Discontinuous(String),
    #[error("bad breakpoints on edge {0:?}: {1}")]
    BadBreakpoints(String, String),
    #[error("missing data for {0:?}")]
    Missing(String),
    #[error("edge {0:?} is a loop; subdivide loops first")]
    LoopEdge(String),
    #[error("function has a pole at {0} inside the region")]
    PoleInRegion(String),
    #[error("inward slopes sum to {slopes} but the region carries {mass} zeros")]
    SlopeMassMismatch { slopes: i64, mass: i64 },
    #[error("vertex {0:?} needs exactly one cut per incident edge")]
    BadStar(String),
    #[error("divisor has degree {0}, expected 0")]
    NonzeroDegree(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub length: BigRational,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }
}

/// Connected metric graph with nonnegative integer vertex weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexWeightedMetricGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl VertexWeightedMetricGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateId(v.id.clone()));
            }
        }
        let mut edge_index = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if vertex_index.contains_key(&e.id) || edge_index.insert(e.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateId(e.id.clone()));
            }
            if !e.length.is_positive() {
                return Err(GraphError::NonpositiveLength(e.id.clone()));
            }
            if e.from >= vertices.len() || e.to >= vertices.len() {
                return Err(GraphError::UnknownVertex(format!("endpoint of {}", e.id)));
            }
        }
        let g = VertexWeightedMetricGraph {
            vertices,
            edges,
            vertex_index,
            edge_index,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Builds a graph from `(id, weight)` pairs and `(id, from, to, length)`
    /// tuples referring to vertex ids.
    pub fn from_ids(vertices: &[(&str, u32)], edges: &[(&str, &str, &str, BigRational)]) -> Result<Self, GraphError> {
        let vs: Vec<Vertex> = vertices
            .iter()
            .map(|(id, w)| Vertex {
                id: id.to_string(),
                weight: *w,
            })
            .collect();
        let find = |id: &str| {
            vs.iter()
                .position(|v| v.id == id)
                .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
        };
        let es = edges
            .iter()
            .map(|(id, a, b, len)| {
                Ok(Edge {
                    id: id.to_string(),
                    from: find(a)?,
                    to: find(b)?,
                    length: len.clone(),
                })
            })
            .collect::<Result<Vec<_>, GraphError>>()?;
        Self::new(vs, es)
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, id: &str) -> Result<usize, GraphError> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn edge(&self, id: &str) -> Result<usize, GraphError> {
        self.edge_index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownEdge(id.to_string()))
    }

    /// First Betti number `E − V + 1`.
    pub fn cycle_rank(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    /// `Σ weights + E − V + 1`.
    pub fn genus(&self) -> i64 {
        self.vertices.iter().map(|v| v.weight as i64).sum::<i64>() + self.cycle_rank()
    }

    /// Number of edge ends at `v`; loops count twice.
    pub fn valency(&self, v: usize) -> u32 {
        self.edges
            .iter()
            .map(|e| (e.from == v) as u32 + (e.to == v) as u32)
            .sum()
    }

    /// Edges incident to `v`, each listed once per end at `v`, together with
    /// whether that end is the `from` end.
    pub fn incidences(&self, v: usize) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.from == v {
                out.push((i, true));
            }
            if e.to == v {
                out.push((i, false));
            }
        }
        out
    }

    /// Point at `offset` from the `from` end of `edge`. The endpoints map to
    /// vertices.
    pub fn point_on_edge(&self, edge: usize, offset: BigRational) -> Result<GraphPoint, GraphError> {
        let e = &self.edges[edge];
        if offset.is_negative() || offset > e.length {
            return Err(GraphError::PointOutOfRange(format!("{}@{}", e.id, offset)));
        }
        if offset.is_zero() {
            Ok(GraphPoint::Vertex(e.from))
        } else if offset == e.length {
            Ok(GraphPoint::Vertex(e.to))
        } else {
            Ok(GraphPoint::Edge { edge, offset })
        }
    }

    /// Parses `v1` (a vertex id) or `e1@1/2` (an edge id and an offset).
    pub fn parse_point(&self, text: &str) -> Result<GraphPoint, GraphError> {
        let t = text.trim();
        match t.split_once('@') {
            None => Ok(GraphPoint::Vertex(self.vertex(t)?)),
            Some((e, off)) => {
                let edge = self.edge(e.trim())?;
                let offset = crate::parse_rational(off).ok_or_else(|| GraphError::BadPoint(text.to_string()))?;
                self.point_on_edge(edge, offset)
            }
        }
    }

    pub fn point_name(&self, x: &GraphPoint) -> String {
        match x {
            GraphPoint::Vertex(v) => self.vertices[*v].id.clone(),
            GraphPoint::Edge { edge, offset } => format!("{}@{}", self.edges[*edge].id, offset),
        }
    }

    /// Replaces every loop by two edges of half the length through a new
    /// weight-0 vertex. Genus and the degree of the canonical divisor are
    /// unchanged.
    pub fn subdivide_loops(&self) -> Self {
        let mut vertices = self.vertices.clone();
        let mut edges = Vec::new();
        for e in &self.edges {
            if !e.is_loop() {
                edges.push(e.clone());
                continue;
            }
            let mid = vertices.len();
            vertices.push(Vertex {
                id: format!("{}#mid", e.id),
                weight: 0,
            });
            let half = &e.length / BigRational::from_integer(2.into());
            edges.push(Edge {
                id: format!("{}#a", e.id),
                from: e.from,
                to: mid,
                length: half.clone(),
            });
            edges.push(Edge {
                id: format!("{}#b", e.id),
                from: mid,
                to: e.to,
                length: half,
            });
        }
        Self::new(vertices, edges).expect("subdivision preserves validity")
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexRecord {
                    id: v.id.clone(),
                    weight: v.weight,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    id: e.id.clone(),
                    from: self.vertices[e.from].id.clone(),
                    to: self.vertices[e.to].id.clone(),
                    length: Q(e.length.clone()),
                })
                .collect(),
        }
    }
}

/// On-disk form: vertex and edge records referring to ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: String,
    #[serde(default)]
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: String,
    pub from: String,
    pub to: String,
    pub length: Q,
}

impl GraphFile {
    pub fn build(&self) -> Result<VertexWeightedMetricGraph, GraphError> {
        let vertices: Vec<(&str, u32)> = self.vertices.iter().map(|v| (v.id.as_str(), v.weight)).collect();
        let edges: Vec<(&str, &str, &str, BigRational)> = self
            .edges
            .iter()
            .map(|e| (e.id.as_str(), e.from.as_str(), e.to.as_str(), e.length.0.clone()))
            .collect();
        VertexWeightedMetricGraph::from_ids(&vertices, &edges)
    }
}

/// A vertex, or a point strictly inside an edge at `offset` from its `from`
/// end.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphPoint {
    Vertex(usize),
    Edge { edge: usize, offset: BigRational },
}

impl fmt::Display for GraphPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphPoint::Vertex(v) => write!(f, "vertex #{v}"),
            GraphPoint::Edge { edge, offset } => write!(f, "edge #{edge} at {offset}"),
        }
    }
}

/// Finitely supported integer combination of points; zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphDivisor(BTreeMap<GraphPoint, i64>);

impl GraphDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (GraphPoint, i64)>>(terms: I) -> Self {
        let mut d = Self::new();
        for (x, c) in terms {
            d.add_term(x, c);
        }
        d
    }

    pub fn add_term(&mut self, x: GraphPoint, c: i64) {
        let entry = self.0.entry(x.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.0.remove(&x);
        }
    }

    pub fn coefficient(&self, x: &GraphPoint) -> i64 {
        self.0.get(x).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.0.values().all(|&c| c >= 0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GraphPoint, i64)> {
        self.0.iter().map(|(x, &c)| (x, c))
    }

    pub fn plus(&self, other: &GraphDivisor) -> GraphDivisor {
        let mut d = self.clone();
        for (x, c) in other.terms() {
            d.add_term(x.clone(), c);
        }
        d
    }

    pub fn minus(&self, other: &GraphDivisor) -> GraphDivisor {
        let mut d = self.clone();
        for (x, c) in other.terms() {
            d.add_term(x.clone(), -c);
        }
        d
    }

    /// Terms whose point satisfies `keep`.
    pub fn restrict<F: Fn(&GraphPoint) -> bool>(&self, keep: F) -> GraphDivisor {
        GraphDivisor(self.0.iter().filter(|(x, _)| keep(x)).map(|(x, &c)| (x.clone(), c)).collect())
    }

    /// Reads `{"point": coefficient, ...}` with point syntax as in
    /// [`VertexWeightedMetricGraph::parse_point`].
    pub fn from_json(g: &VertexWeightedMetricGraph, map: &BTreeMap<String, i64>) -> Result<Self, GraphError> {
        let mut d = GraphDivisor::new();
        for (k, &c) in map {
            d.add_term(g.parse_point(k)?, c);
        }
        Ok(d)
    }

    pub fn to_json(&self, g: &VertexWeightedMetricGraph) -> BTreeMap<String, i64> {
        self.0.iter().map(|(x, &c)| (g.point_name(x), c)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    pub(crate) fn theta(a: BigRational, b: BigRational, c: BigRational) -> VertexWeightedMetricGraph {
        VertexWeightedMetricGraph::from_ids(
            &[("v1", 0), ("v2", 0)],
            &[("e1", "v1", "v2", a), ("e2", "v1", "v2", b), ("e3", "v1", "v2", c)],
        )
        .unwrap()
    }

    #[test]
    fn genus_and_valency() {
        let g = theta(rat(1, 1), rat(1, 1), rat(1, 1));
        assert_eq!(g.genus(), 2);
        assert_eq!(g.valency(0), 3);
        let lp = VertexWeightedMetricGraph::from_ids(&[("v", 0)], &[("e", "v", "v", rat(2, 1))]).unwrap();
        assert_eq!(lp.genus(), 1);
        assert_eq!(lp.valency(0), 2);
        let iso = VertexWeightedMetricGraph::from_ids(&[("v", 2)], &[]).unwrap();
        assert_eq!(iso.genus(), 2);
    }

    #[test]
    fn validation() {
        assert_eq!(
            VertexWeightedMetricGraph::from_ids(&[("a", 0), ("b", 0)], &[]),
            Err(GraphError::Disconnected)
        );
        assert_eq!(
            VertexWeightedMetricGraph::from_ids(&[("a", 0), ("b", 0)], &[("e", "a", "b", rat(0, 1))]),
            Err(GraphError::NonpositiveLength("e".into()))
        );
        assert_eq!(
            VertexWeightedMetricGraph::from_ids(&[("a", 0), ("a", 0)], &[]),
            Err(GraphError::DuplicateId("a".into()))
        );
        assert!(matches!(
            VertexWeightedMetricGraph::from_ids(&[("a", 0)], &[("e", "a", "z", rat(1, 1))]),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn points() {
        let g = theta(rat(1, 1), rat(2, 1), rat(3, 1));
        assert_eq!(g.parse_point("v2").unwrap(), GraphPoint::Vertex(1));
        assert_eq!(
            g.parse_point("e2@1/2").unwrap(),
            GraphPoint::Edge {
                edge: 1,
                offset: rat(1, 2)
            }
        );
        assert_eq!(g.parse_point("e2@2").unwrap(), GraphPoint::Vertex(1));
        assert_eq!(g.parse_point("e1@0").unwrap(), GraphPoint::Vertex(0));
        assert!(g.parse_point("e1@3").is_err());
        assert!(g.parse_point("e9@1").is_err());
        let x = g.parse_point("e3@5/2").unwrap();
        assert_eq!(g.point_name(&x), "e3@5/2");
    }

    #[test]
    fn loop_subdivision() {
        let g = VertexWeightedMetricGraph::from_ids(&[("v", 1)], &[("e", "v", "v", rat(3, 1))]).unwrap();
        let h = g.subdivide_loops();
        assert_eq!(h.genus(), g.genus());
        assert_eq!(h.vertices().len(), 2);
        assert!(h.edges().iter().all(|e| !e.is_loop() && e.length == rat(3, 2)));
        assert_eq!(canonical_divisor(&h).degree(), canonical_divisor(&g).degree());
    }

    #[test]
    fn file_round_trip() {
        let text = r#"{"vertices":[{"id":"v1","weight":0},{"id":"v2","weight":1}],
            "edges":[{"id":"e1","from":"v1","to":"v2","length":"3/2"},{"id":"e2","from":"v1","to":"v2","length":2}]}"#;
        let file: GraphFile = serde_json::from_str(text).unwrap();
        let g = file.build().unwrap();
        assert_eq!(g.genus(), 2);
        assert_eq!(g.edges()[0].length, rat(3, 2));
        assert_eq!(g.to_file(), file);
    }

    #[test]
    fn divisor_algebra() {
        let x = GraphPoint::Vertex(0);
        let y = GraphPoint::Vertex(1);
        let d = GraphDivisor::from_terms([(x.clone(), 2), (y.clone(), -1), (x.clone(), -2)]);
        assert_eq!(d.coefficient(&x), 0);
        assert_eq!(d.degree(), -1);
        assert!(!d.is_effective());
        assert!(d.minus(&d).is_empty());
    }
}
