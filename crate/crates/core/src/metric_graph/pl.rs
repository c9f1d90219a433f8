use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{GraphDivisor, GraphError, GraphPoint, VertexWeightedMetricGraph};
use crate::json::Q;

/// Restriction of a PL function to one edge, oriented `from → to`:
/// `slopes[i]` holds on the `i`-th interval cut out by the breakpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePiece {
    pub breakpoints: Vec<BigRational>,
    pub slopes: Vec<i64>,
}

impl EdgePiece {
    pub fn linear(slope: i64) -> Self {
        EdgePiece {
            breakpoints: Vec::new(),
            slopes: vec![slope],
        }
    }

    fn normalized(&self) -> Self {
        let mut breakpoints = Vec::new();
        let mut slopes = vec![self.slopes[0]];
        for (b, &s) in self.breakpoints.iter().zip(&self.slopes[1..]) {
            if s != *slopes.last().expect("nonempty") {
                breakpoints.push(b.clone());
                slopes.push(s);
            }
        }
        EdgePiece { breakpoints, slopes }
    }

    /// Slope just after `offset`.
    pub fn slope_right(&self, offset: &BigRational) -> i64 {
        self.slopes[self.breakpoints.iter().filter(|b| *b <= offset).count()]
    }

    /// Slope just before `offset`.
    pub fn slope_left(&self, offset: &BigRational) -> i64 {
        self.slopes[self.breakpoints.iter().filter(|b| *b < offset).count()]
    }

    /// `∫₀^offset` of the slope.
    pub fn rise(&self, offset: &BigRational) -> BigRational {
        let mut total = BigRational::zero();
        let mut prev = BigRational::zero();
        for (i, s) in self.slopes.iter().enumerate() {
            let next = match self.breakpoints.get(i) {
                Some(b) if b < offset => b.clone(),
                _ => offset.clone(),
            };
            total += (&next - &prev) * BigRational::from_integer((*s).into());
            if next == *offset {
                break;
            }
            prev = next;
        }
        total
    }
}

/// Continuous piecewise linear function with integer slopes, stored with
/// redundant breakpoints removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunction {
    vertex_values: Vec<BigRational>,
    pieces: Vec<EdgePiece>,
}

impl PLFunction {
    pub fn new(
        g: &VertexWeightedMetricGraph,
        vertex_values: Vec<BigRational>,
        pieces: Vec<EdgePiece>,
    ) -> Result<Self, GraphError> {
        if vertex_values.len() != g.vertices().len() {
            return Err(GraphError::Missing("vertex values".into()));
        }
        if pieces.len() != g.edges().len() {
            return Err(GraphError::Missing("edge pieces".into()));
        }
        for (e, piece) in g.edges().iter().zip(&pieces) {
            let bad = |why: &str| GraphError::BadBreakpoints(e.id.clone(), why.to_string());
            if piece.slopes.len() != piece.breakpoints.len() + 1 {
                return Err(bad("need one more slope than breakpoints"));
            }
            let mut prev = BigRational::zero();
            for b in &piece.breakpoints {
                if *b <= prev || *b >= e.length {
                    return Err(bad("breakpoints must increase strictly inside the edge"));
                }
                prev = b.clone();
            }
            if &vertex_values[e.from] + piece.rise(&e.length) != vertex_values[e.to] {
                return Err(GraphError::Discontinuous(e.id.clone()));
            }
        }
        Ok(PLFunction {
            vertex_values,
            pieces: pieces.iter().map(EdgePiece::normalized).collect(),
        })
    }

    pub fn constant(g: &VertexWeightedMetricGraph, c: BigRational) -> Self {
        PLFunction {
            vertex_values: vec![c; g.vertices().len()],
            pieces: vec![EdgePiece::linear(0); g.edges().len()],
        }
    }

    pub fn vertex_values(&self) -> &[BigRational] {
        &self.vertex_values
    }

    pub fn pieces(&self) -> &[EdgePiece] {
        &self.pieces
    }

    pub fn piece(&self, edge: usize) -> &EdgePiece {
        &self.pieces[edge]
    }

    pub fn value_at(&self, g: &VertexWeightedMetricGraph, x: &GraphPoint) -> BigRational {
        match x {
            GraphPoint::Vertex(v) => self.vertex_values[*v].clone(),
            GraphPoint::Edge { edge, offset } => {
                &self.vertex_values[g.edges()[*edge].from] + self.pieces[*edge].rise(offset)
            }
        }
    }

    /// All interior breakpoints as graph points.
    pub fn breakpoints(&self) -> impl Iterator<Item = GraphPoint> + '_ {
        self.pieces.iter().enumerate().flat_map(|(edge, p)| {
            p.breakpoints.iter().map(move |b| GraphPoint::Edge {
                edge,
                offset: b.clone(),
            })
        })
    }

    /// Adds another function on the same graph.
    pub fn plus(&self, g: &VertexWeightedMetricGraph, other: &PLFunction) -> PLFunction {
        let vertex_values = self
            .vertex_values
            .iter()
            .zip(&other.vertex_values)
            .map(|(a, b)| a + b)
            .collect();
        let pieces = self
            .pieces
            .iter()
            .zip(&other.pieces)
            .map(|(a, b)| {
                let mut cuts: Vec<BigRational> = a.breakpoints.iter().chain(&b.breakpoints).cloned().collect();
                cuts.sort();
                cuts.dedup();
                let mut slopes = Vec::with_capacity(cuts.len() + 1);
                let mut left = BigRational::zero();
                for c in cuts.iter().chain(std::iter::once(&BigRational::zero())) {
                    // Sample each interval at its left end, using the right slope.
                    slopes.push(a.slope_right(&left) + b.slope_right(&left));
                    left = c.clone();
                }
                EdgePiece {
                    breakpoints: cuts,
                    slopes,
                }
            })
            .collect();
        PLFunction::new(g, vertex_values, pieces).expect("sum of continuous functions")
    }

    pub fn to_file(&self, g: &VertexWeightedMetricGraph) -> PLFunctionFile {
        PLFunctionFile {
            vertex_values: g
                .vertices()
                .iter()
                .zip(&self.vertex_values)
                .map(|(v, x)| (v.id.clone(), Q(x.clone())))
                .collect(),
            edges: g
                .edges()
                .iter()
                .zip(&self.pieces)
                .map(|(e, p)| {
                    (
                        e.id.clone(),
                        PieceRecord {
                            breakpoints: p.breakpoints.iter().cloned().map(Q).collect(),
                            slopes: p.slopes.clone(),
                        },
                    )
                })
                .collect(),
        }
    }
}

/// On-disk form of a [`PLFunction`]. An edge may be omitted when the
/// function is linear on it with an integer slope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PLFunctionFile {
    pub vertex_values: BTreeMap<String, Q>,
    #[serde(default)]
    pub edges: BTreeMap<String, PieceRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceRecord {
    #[serde(default)]
    pub breakpoints: Vec<Q>,
    pub slopes: Vec<i64>,
}

impl PLFunctionFile {
    pub fn build(&self, g: &VertexWeightedMetricGraph) -> Result<PLFunction, GraphError> {
        for k in self.vertex_values.keys() {
            g.vertex(k)?;
        }
        for k in self.edges.keys() {
            g.edge(k)?;
        }
        let values = g
            .vertices()
            .iter()
            .map(|v| {
                self.vertex_values
                    .get(&v.id)
                    .map(|q| q.0.clone())
                    .ok_or_else(|| GraphError::Missing(v.id.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let pieces = g
            .edges()
            .iter()
            .map(|e| match self.edges.get(&e.id) {
                Some(rec) => Ok(EdgePiece {
                    breakpoints: rec.breakpoints.iter().map(|q| q.0.clone()).collect(),
                    slopes: rec.slopes.clone(),
                }),
                None => {
                    let slope = (&values[e.to] - &values[e.from]) / &e.length;
                    if slope.is_integer() {
                        let s = i64::try_from(slope.to_integer()).map_err(|_| GraphError::Missing(e.id.clone()))?;
                        Ok(EdgePiece::linear(s))
                    } else {
                        Err(GraphError::Missing(e.id.clone()))
                    }
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        PLFunction::new(g, values, pieces)
    }
}

/// Sum of incoming slopes at `x`, i.e. minus the sum of the outgoing
/// derivatives over all tangent directions.
pub fn ord_at(f: &PLFunction, g: &VertexWeightedMetricGraph, x: &GraphPoint) -> i64 {
    match x {
        GraphPoint::Vertex(v) => -g
            .incidences(*v)
            .into_iter()
            .map(|(e, is_from)| {
                let p = f.piece(e);
                if is_from {
                    p.slopes[0]
                } else {
                    -p.slopes[p.slopes.len() - 1]
                }
            })
            .sum::<i64>(),
        GraphPoint::Edge { edge, offset } => {
            let p = f.piece(*edge);
            p.slope_left(offset) - p.slope_right(offset)
        }
    }
}

pub fn divisor_of(f: &PLFunction, g: &VertexWeightedMetricGraph) -> GraphDivisor {
    let vertices = (0..g.vertices().len()).map(GraphPoint::Vertex);
    GraphDivisor::from_terms(
        vertices
            .chain(f.breakpoints())
            .map(|x| {
                let c = ord_at(f, g, &x);
                (x, c)
            })
            .collect::<Vec<_>>(),
    )
}

/// `K = Σ (2·weight(x) − 2 + valency(x))·(x)` over the vertices.
pub fn canonical_divisor(g: &VertexWeightedMetricGraph) -> GraphDivisor {
    GraphDivisor::from_terms(
        g.vertices()
            .iter()
            .enumerate()
            .map(|(i, v)| (GraphPoint::Vertex(i), 2 * v.weight as i64 - 2 + g.valency(i) as i64))
            .collect::<Vec<_>>(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalCheck {
    pub ok: bool,
    pub witness: Option<GraphPoint>,
}

/// Whether `div(F) + K ≥ 0`, with a violating point when it is not.
pub fn is_canonical_section(f: &PLFunction, g: &VertexWeightedMetricGraph) -> CanonicalCheck {
    let k = canonical_divisor(g);
    let candidates = (0..g.vertices().len()).map(GraphPoint::Vertex).chain(f.breakpoints());
    for x in candidates {
        if ord_at(f, g, &x) + k.coefficient(&x) < 0 {
            return CanonicalCheck {
                ok: false,
                witness: Some(x),
            };
        }
    }
    CanonicalCheck { ok: true, witness: None }
}

pub fn max_abs_slope(f: &PLFunction) -> i64 {
    f.pieces()
        .iter()
        .flat_map(|p| p.slopes.iter())
        .map(|s| s.abs())
        .max()
        .unwrap_or(0)
}

/// `max |slope| ≤ 2g − 1`.
pub fn check_slope_bound(f: &PLFunction, g: &VertexWeightedMetricGraph) -> bool {
    max_abs_slope(f) <= slope_bound_constant(g.genus(), false)
}

/// `2g − 1`, or `2g − 2` when the skeleton has no genus-zero leaves.
pub fn slope_bound_constant(genus: i64, no_genus_zero_leaves: bool) -> i64 {
    if no_genus_zero_leaves {
        2 * genus - 2
    } else {
        2 * genus - 1
    }
}

/// Number of zeros of `F` in the star around vertex `x` cut at one point per
/// incident edge, read off as the sum of the inward slopes at the cuts.
///
/// `cuts` pairs each incident edge with an offset measured from the edge's
/// `from` end.
pub fn zeros_from_slopes(
    g: &VertexWeightedMetricGraph,
    x: usize,
    cuts: &[(usize, BigRational)],
    f: &PLFunction,
) -> Result<i64, GraphError> {
    let vid = g.vertices()[x].id.clone();
    let incident = g.incidences(x);
    if let Some((e, _)) = incident.iter().find(|(e, _)| g.edges()[*e].is_loop()) {
        return Err(GraphError::LoopEdge(g.edges()[*e].id.clone()));
    }
    let mut want: Vec<usize> = incident.iter().map(|(e, _)| *e).collect();
    let mut have: Vec<usize> = cuts.iter().map(|(e, _)| *e).collect();
    want.sort_unstable();
    have.sort_unstable();
    if want != have {
        return Err(GraphError::BadStar(vid));
    }
    let mut mass = ord_at(f, g, &GraphPoint::Vertex(x));
    if mass < 0 {
        return Err(GraphError::PoleInRegion(vid));
    }
    let mut slopes = 0;
    for (e, c) in cuts {
        let edge = &g.edges()[*e];
        if !c.is_positive() || *c >= edge.length {
            return Err(GraphError::PointOutOfRange(format!("{}@{}", edge.id, c)));
        }
        let piece = f.piece(*e);
        let toward_from = edge.from == x;
        for b in &piece.breakpoints {
            let inside = if toward_from { b < c } else { b > c };
            if inside {
                let pt = GraphPoint::Edge {
                    edge: *e,
                    offset: b.clone(),
                };
                let o = ord_at(f, g, &pt);
                if o < 0 {
                    return Err(GraphError::PoleInRegion(g.point_name(&pt)));
                }
                mass += o;
            }
        }
        slopes += if toward_from {
            -piece.slope_left(c)
        } else {
            piece.slope_right(c)
        };
    }
    if slopes != mass {
        return Err(GraphError::SlopeMassMismatch { slopes, mass });
    }
    Ok(slopes)
}

#[cfg(test)]
mod tests {
    use super::super::tests::theta;
    use super::super::tropicalize::segment_skeleton;
    use super::*;
    use crate::rat;

    fn min_one_s() -> (VertexWeightedMetricGraph, PLFunction) {
        let g = segment_skeleton(rat(2, 1)).unwrap();
        let f = PLFunction::new(
            &g,
            vec![rat(0, 1), rat(1, 1)],
            vec![EdgePiece {
                breakpoints: vec![rat(1, 1)],
                slopes: vec![1, 0],
            }],
        )
        .unwrap();
        (g, f)
    }

    #[test]
    fn ord_examples() {
        let (g, f) = min_one_s();
        let mid = g.parse_point("e@1").unwrap();
        assert_eq!(ord_at(&f, &g, &mid), 1);
        assert_eq!(ord_at(&f, &g, &GraphPoint::Vertex(0)), -1);
        assert_eq!(ord_at(&f, &g, &g.parse_point("e@1/2").unwrap()), 0);
        let c = PLFunction::constant(&g, rat(5, 1));
        assert_eq!(ord_at(&c, &g, &mid), 0);
        let d = divisor_of(&f, &g);
        assert_eq!(d, GraphDivisor::from_terms([(GraphPoint::Vertex(0), -1), (mid, 1)]));
        assert!(divisor_of(&c, &g).is_empty());
    }

    #[test]
    fn continuity_enforced() {
        let lp = VertexWeightedMetricGraph::from_ids(&[("v", 0)], &[("e", "v", "v", rat(1, 1))]).unwrap();
        let r = PLFunction::new(&lp, vec![rat(0, 1)], vec![EdgePiece::linear(1)]);
        assert_eq!(r, Err(GraphError::Discontinuous("e".into())));
        let (g, _) = min_one_s();
        let bad = PLFunction::new(
            &g,
            vec![rat(0, 1), rat(1, 1)],
            vec![EdgePiece {
                breakpoints: vec![rat(2, 1)],
                slopes: vec![1, 0],
            }],
        );
        assert!(matches!(bad, Err(GraphError::BadBreakpoints(..))));
    }

    #[test]
    fn redundant_breakpoints_removed() {
        let (g, _) = min_one_s();
        let f = PLFunction::new(
            &g,
            vec![rat(0, 1), rat(2, 1)],
            vec![EdgePiece {
                breakpoints: vec![rat(1, 2)],
                slopes: vec![1, 1],
            }],
        )
        .unwrap();
        assert!(f.piece(0).breakpoints.is_empty());
    }

    #[test]
    fn canonical_examples() {
        let lp = VertexWeightedMetricGraph::from_ids(&[("v", 0)], &[("e", "v", "v", rat(1, 1))]).unwrap();
        assert!(canonical_divisor(&lp).is_empty());
        let th = theta(rat(1, 1), rat(1, 1), rat(1, 1));
        let k = canonical_divisor(&th);
        assert_eq!(k, GraphDivisor::from_terms([(GraphPoint::Vertex(0), 1), (GraphPoint::Vertex(1), 1)]));
        assert_eq!(k.degree(), 2 * th.genus() - 2);
        let iso = VertexWeightedMetricGraph::from_ids(&[("v", 2)], &[]).unwrap();
        assert_eq!(canonical_divisor(&iso), GraphDivisor::from_terms([(GraphPoint::Vertex(0), 2)]));
    }

    #[test]
    fn canonical_section_witness() {
        let th = theta(rat(1, 1), rat(1, 1), rat(1, 1));
        let c = PLFunction::constant(&th, rat(0, 1));
        assert!(is_canonical_section(&c, &th).ok);
        assert!(check_slope_bound(&c, &th));
        // Slope -1 then 2 along e1: ord -3 at the kink.
        let zero = EdgePiece::linear(0);
        let f = PLFunction::new(
            &th,
            vec![rat(0, 1), rat(0, 1)],
            vec![
                EdgePiece {
                    breakpoints: vec![rat(2, 3)],
                    slopes: vec![-1, 2],
                },
                zero.clone(),
                zero,
            ],
        )
        .unwrap();
        let check = is_canonical_section(&f, &th);
        assert!(!check.ok);
        assert_eq!(
            check.witness,
            Some(GraphPoint::Edge {
                edge: 0,
                offset: rat(2, 3)
            })
        );
        assert_eq!(max_abs_slope(&f), 2);
    }

    #[test]
    fn zeros_from_slopes_examples() {
        let (g, f) = min_one_s();
        assert_eq!(zeros_from_slopes(&g, 1, &[(0, rat(1, 2))], &f).unwrap(), 1);
        assert_eq!(zeros_from_slopes(&g, 1, &[(0, rat(3, 2))], &f).unwrap(), 0);
        let c = PLFunction::constant(&g, rat(0, 1));
        assert_eq!(zeros_from_slopes(&g, 0, &[(0, rat(1, 1))], &c).unwrap(), 0);
        assert!(matches!(
            zeros_from_slopes(&g, 0, &[(0, rat(3, 2))], &f),
            Err(GraphError::PoleInRegion(_))
        ));
        assert!(matches!(zeros_from_slopes(&g, 1, &[], &f), Err(GraphError::BadStar(_))));
        let lp = VertexWeightedMetricGraph::from_ids(&[("v", 0)], &[("e", "v", "v", rat(1, 1))]).unwrap();
        let c = PLFunction::constant(&lp, rat(0, 1));
        assert!(matches!(
            zeros_from_slopes(&lp, 0, &[(0, rat(1, 2)), (0, rat(1, 2))], &c),
            Err(GraphError::LoopEdge(_))
        ));
    }

    #[test]
    fn theta_interior_kink_zeros() {
        // Theta graph with e1 split at its midpoint m; the tent on e1 peaks at m.
        let th = VertexWeightedMetricGraph::from_ids(
            &[("v1", 0), ("v2", 0), ("m", 0)],
            &[
                ("e1a", "v1", "m", rat(1, 2)),
                ("e1b", "m", "v2", rat(1, 2)),
                ("e2", "v1", "v2", rat(1, 1)),
                ("e3", "v1", "v2", rat(1, 1)),
            ],
        )
        .unwrap();
        let f = PLFunction::new(
            &th,
            vec![rat(0, 1), rat(0, 1), rat(1, 2)],
            vec![
                EdgePiece::linear(1),
                EdgePiece::linear(-1),
                EdgePiece::linear(0),
                EdgePiece::linear(0),
            ],
        )
        .unwrap();
        assert!(is_canonical_section(&f, &th).ok);
        let kink = GraphPoint::Vertex(2);
        assert_eq!(divisor_of(&f, &th).coefficient(&kink), 2);
        let cuts = [(0, rat(1, 4)), (1, rat(1, 4))];
        assert_eq!(zeros_from_slopes(&th, 2, &cuts, &f).unwrap(), 2);
        let cuts = [(0, rat(3, 4)), (1, rat(1, 2)), (2, rat(1, 2))];
        assert_eq!(zeros_from_slopes(&th, 0, &cuts, &f), Err(GraphError::BadStar("v1".into())));
        let cuts = [(0, rat(1, 4)), (2, rat(1, 2)), (3, rat(1, 2))];
        assert_eq!(zeros_from_slopes(&th, 0, &cuts, &f), Err(GraphError::PoleInRegion("v1".into())));
    }

    #[test]
    fn sums_and_files() {
        let (g, f) = min_one_s();
        let h = f.plus(&g, &f);
        assert_eq!(h.piece(0).slopes, vec![2, 0]);
        assert_eq!(divisor_of(&h, &g).degree(), 0);
        let file = f.to_file(&g);
        assert_eq!(file.build(&g).unwrap(), f);
        let text = r#"{"vertex_values": {"u": "0", "w": "2"}}"#;
        let lin: PLFunctionFile = serde_json::from_str(text).unwrap();
        assert_eq!(lin.build(&g).unwrap().piece(0).slopes, vec![1]);
    }
}
