//! Worked examples as embedded definitions, and writers for their files.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::chabauty::{CurveFile, CurvePoint, HyperellipticCurve};
use crate::metric_graph::VertexWeightedMetricGraph;
use crate::rat;

/// `y² = x(x−1)(x−2)(x−5)(x−6)`, genus 2, rank 1.
pub fn gordon_grant() -> HyperellipticCurve {
    HyperellipticCurve::from_i64(1, &[0, 60, -112, 65, -14, 1]).expect("valid curve")
}

pub fn gordon_grant_points() -> Vec<CurvePoint> {
    let mut pts: Vec<CurvePoint> = [0, 1, 2, 5, 6].iter().map(|&x| CurvePoint::affine(x, 0)).collect();
    for (x, y) in [(3, 6), (10, 120)] {
        pts.push(CurvePoint::affine(x, y));
        pts.push(CurvePoint::affine(x, -y));
    }
    pts.push(CurvePoint::Infinity(0));
    pts
}

/// `y² = x⁶ + 8x⁵ + 22x⁴ + 22x³ + 5x² + 6x + 1`.
pub fn mccallum_poonen() -> HyperellipticCurve {
    HyperellipticCurve::from_i64(1, &[1, 6, 5, 22, 22, 8, 1]).expect("valid curve")
}

pub fn mccallum_poonen_points() -> Vec<CurvePoint> {
    vec![
        CurvePoint::Infinity(1),
        CurvePoint::Infinity(-1),
        CurvePoint::affine(0, 1),
        CurvePoint::affine(0, -1),
        CurvePoint::affine(-3, 1),
        CurvePoint::affine(-3, -1),
    ]
}

/// `(x−50)(x−9)(x−3)(x+13)(x³+2x²+3x+4)`, ascending.
pub fn krzb_f() -> Vec<BigInt> {
    [-70200, -25446, -15413, -4681, 6300, -274, -47, 1]
        .iter()
        .map(|&a| BigInt::from(a))
        .collect()
}

pub const KRZB_C: i64 = -2 * 11 * 19 * 173;

/// `c·y² = f(x)` with `c = −2·11·19·173`.
pub fn krzb_printed() -> HyperellipticCurve {
    HyperellipticCurve::new(BigInt::from(KRZB_C), krzb_f()).expect("valid curve")
}

/// `y² = c·f(x)`, the model on which the listed points have the listed
/// coordinates; `(x, y) ↦ (x, c·y)` from `krzb_printed`.
pub fn krzb() -> HyperellipticCurve {
    let c = BigInt::from(KRZB_C);
    HyperellipticCurve::new(BigInt::from(1), krzb_f().into_iter().map(|a| a * &c).collect()).expect("valid curve")
}

pub fn krzb_points() -> Vec<CurvePoint> {
    let mut pts = vec![CurvePoint::Infinity(0)];
    pts.extend([50, 9, 3, -13].iter().map(|&x| CurvePoint::affine(x, 0)));
    pts.push(CurvePoint::affine(25, 20247920));
    pts.push(CurvePoint::affine(25, -20247920));
    pts
}

/// Two vertices joined by three edges of lengths `a`, `b`, `c`.
pub fn theta(a: BigRational, b: BigRational, c: BigRational) -> VertexWeightedMetricGraph {
    VertexWeightedMetricGraph::from_ids(
        &[("v1", 0), ("v2", 0)],
        &[("e1", "v1", "v2", a), ("e2", "v1", "v2", b), ("e3", "v1", "v2", c)],
    )
    .expect("valid graph")
}

pub fn theta_default() -> VertexWeightedMetricGraph {
    theta(rat(1, 1), rat(2, 1), rat(3, 1))
}

/// Affine points as `[["x", "y"], …]`.
pub fn point_list(points: &[CurvePoint]) -> serde_json::Value {
    points
        .iter()
        .filter_map(|p| match p {
            CurvePoint::Affine(x, y) => Some(serde_json::json!([x.to_string(), y.to_string()])),
            CurvePoint::Infinity(_) => None,
        })
        .collect()
}

/// Every fixture as `(file name, document)`.
pub fn documents() -> Vec<(&'static str, serde_json::Value)> {
    let curve = |c: &HyperellipticCurve| serde_json::to_value(CurveFile::from_curve(c)).expect("json");
    vec![
        ("gordon_grant.json", curve(&gordon_grant())),
        ("gordon_grant_points.json", point_list(&gordon_grant_points())),
        ("mccallum_poonen.json", curve(&mccallum_poonen())),
        ("mccallum_poonen_points.json", point_list(&mccallum_poonen_points())),
        ("krzb.json", curve(&krzb())),
        ("krzb_printed.json", curve(&krzb_printed())),
        ("krzb_points.json", point_list(&krzb_points())),
        ("theta.json", serde_json::to_value(theta_default().to_file()).expect("json")),
    ]
}

/// Writes every fixture into `dir`, creating it if needed.
pub fn write_all(dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    documents()
        .into_iter()
        .map(|(name, doc)| {
            let path = dir.join(name);
            fs::write(&path, serde_json::to_string_pretty(&doc).expect("json") + "\n")?;
            Ok(path)
        })
        .collect()
}
