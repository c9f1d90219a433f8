//! Tropicalization of polynomials on the skeleton of a closed annulus.
//!
//! The skeleton of `{0 ≤ v(t) ≤ L}` is a segment `u -e- w` of length `L`,
//! with the point at offset `s` standing for the Gauss point of the circle
//! `v(t) = s`. A polynomial `f` gives `F(s) = v_s(f)`, which can be computed
//! two ways:
//!
//! * from the roots, `F(s) = v(c) + Σ mᵢ·min(s, v(rᵢ))`;
//! * from the coefficients, `F(s) = min_i (v(aᵢ) + i·s)`.
//!
//! They must agree, and on the open segment `div(F)` is the pushforward of the
//! roots with `0 < v(r) < L`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{EdgePiece, GraphDivisor, GraphError, GraphPoint, PLFunction, VertexWeightedMetricGraph};
use crate::padic::{rational_valuation, Valuation};

/// Segment `u -e- w` of length `L`.
pub fn segment_skeleton(length: BigRational) -> Result<VertexWeightedMetricGraph, GraphError> {
    VertexWeightedMetricGraph::from_ids(&[("u", 0), ("w", 0)], &[("e", "u", "w", length)])
}

/// Coefficients, lowest degree first, of `Π (t − rᵢ)^{mᵢ}`.
pub fn expand_roots(roots: &[(BigRational, u32)]) -> Vec<BigRational> {
    let mut poly = vec![BigRational::one()];
    for (r, m) in roots {
        for _ in 0..*m {
            let mut next = vec![BigRational::zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            poly = next;
        }
    }
    poly
}

fn rat_of(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `F(s) = Σ mᵢ·min(s, v(rᵢ))` on the segment of length `L`, for a monic
/// polynomial with the given roots.
pub fn function_from_roots(
    p: u64,
    roots: &[(BigRational, u32)],
    g: &VertexWeightedMetricGraph,
) -> Result<PLFunction, GraphError> {
    let length = g.edges()[0].length.clone();
    // Slope just right of s is the multiplicity of roots with v(r) > s.
    let mut kinks: Vec<(BigRational, i64)> = Vec::new();
    let mut start = BigRational::zero();
    let mut slope0 = 0i64;
    for (r, m) in roots {
        let m = *m as i64;
        match rational_valuation(r, p) {
            Valuation::Infinity => slope0 += m,
            Valuation::Finite(v) => {
                let v = rat_of(v);
                if v.is_positive() {
                    slope0 += m;
                    if v < length {
                        kinks.push((v, m));
                    }
                } else {
                    start += v * rat_of(m);
                }
            }
        }
    }
    kinks.sort();
    let mut breakpoints = Vec::new();
    let mut slopes = vec![slope0];
    for (v, m) in kinks {
        if breakpoints.last() == Some(&v) {
            *slopes.last_mut().expect("nonempty") -= m;
        } else {
            let s = *slopes.last().expect("nonempty") - m;
            breakpoints.push(v);
            slopes.push(s);
        }
    }
    let piece = EdgePiece { breakpoints, slopes };
    let end = &start + piece.rise(&length);
    PLFunction::new(g, vec![start, end], vec![piece])
}

/// Lower envelope of the lines `v(aᵢ) + i·s` over `[0, L]`.
pub fn function_from_coefficients(
    p: u64,
    coeffs: &[BigRational],
    g: &VertexWeightedMetricGraph,
) -> Result<PLFunction, GraphError> {
    let length = g.edges()[0].length.clone();
    let lines: Vec<(i64, BigRational)> = coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, c)| rational_valuation(c, p).finite().map(|v| (i as i64, rat_of(v))))
        .collect();
    if lines.is_empty() {
        return Err(GraphError::Missing("nonzero coefficient".into()));
    }
    let eval = |(i, v): &(i64, BigRational), s: &BigRational| v + s * rat_of(*i);
    // Smallest index attaining the minimum at s is the slope just right of s.
    let right_index = |s: &BigRational| -> (i64, BigRational) {
        let mut best: Option<(i64, BigRational)> = None;
        for line in &lines {
            let val = eval(line, s);
            match &best {
                Some((_, b)) if *b <= val => {}
                _ => best = Some((line.0, val)),
            }
        }
        best.expect("nonempty")
    };
    let mut s = BigRational::zero();
    let (mut idx, start) = right_index(&s);
    let mut breakpoints = Vec::new();
    let mut slopes = vec![idx];
    loop {
        let current = lines.iter().find(|l| l.0 == idx).expect("present").clone();
        let mut next: Option<BigRational> = None;
        for line in lines.iter().filter(|l| l.0 < idx) {
            let cross = (&line.1 - &current.1) / rat_of(current.0 - line.0);
            if cross > s && next.as_ref().map_or(true, |n| cross < *n) {
                next = Some(cross);
            }
        }
        match next {
            Some(n) if n < length => {
                let (i, _) = right_index(&n);
                s = n;
                idx = i;
                breakpoints.push(s.clone());
                slopes.push(idx);
            }
            _ => break,
        }
    }
    let piece = EdgePiece { breakpoints, slopes };
    let end = &start + piece.rise(&length);
    PLFunction::new(g, vec![start, end], vec![piece])
}

/// `Σ mᵢ·(point at v(rᵢ))` over roots with `0 < v(rᵢ) < L`.
pub fn root_divisor(p: u64, roots: &[(BigRational, u32)], g: &VertexWeightedMetricGraph) -> GraphDivisor {
    let length = &g.edges()[0].length;
    let mut d = GraphDivisor::new();
    for (r, m) in roots {
        if let Valuation::Finite(v) = rational_valuation(r, p) {
            let v = rat_of(v);
            if v.is_positive() && v < *length {
                d.add_term(GraphPoint::Edge { edge: 0, offset: v }, *m as i64);
            }
        }
    }
    d
}

/// Part of a divisor on the open segment.
pub fn interior(d: &GraphDivisor) -> GraphDivisor {
    d.restrict(|x| matches!(x, GraphPoint::Edge { .. }))
}
