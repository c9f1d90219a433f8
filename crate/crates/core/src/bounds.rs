//! Closed-form uniform bounds on rational points and torsion packets.
//!
//! Each bound is evaluated exactly together with a ledger of its hypotheses;
//! a value is produced only when every hypothesis holds.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::json::Q;
use crate::metric_graph::VertexWeightedMetricGraph;
use crate::padic::is_prime;
use crate::series::{compute_np, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("missing parameter {0:?}")]
    MissingParameter(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hypothesis failed: {}", .0.join(", "))]
    HypothesisFailure(Vec<String>),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Coleman,
    LorenziniTucker,
    Stoll,
    Kzb,
    StollUniformHyp,
    KrzbGeneral,
    KrzbP3,
    RationalTorsion,
    GeometricTorsion,
    WideopenZeros,
    StollCover,
}

impl BoundKind {
    pub const ALL: [BoundKind; 11] = [
        BoundKind::Coleman,
        BoundKind::LorenziniTucker,
        BoundKind::Stoll,
        BoundKind::Kzb,
        BoundKind::StollUniformHyp,
        BoundKind::KrzbGeneral,
        BoundKind::KrzbP3,
        BoundKind::RationalTorsion,
        BoundKind::GeometricTorsion,
        BoundKind::WideopenZeros,
        BoundKind::StollCover,
    ];

    /// Required parameter names; optional ones are listed in [`BoundKind::optional`].
    pub fn required(self) -> &'static [&'static str] {
        use BoundKind::*;
        match self {
            Coleman | Stoll => &["g", "r", "p", "nFp"],
            LorenziniTucker | Kzb => &["g", "r", "p", "nSm"],
            StollUniformHyp | KrzbP3 => &["g", "r"],
            KrzbGeneral => &["g", "r", "p"],
            RationalTorsion => &["g"],
            GeometricTorsion => &["g", "p"],
            WideopenZeros => &["g", "p", "d", "a"],
            StollCover => &["g", "q", "t"],
        }
    }

    pub fn optional(self) -> &'static [&'static str] {
        match self {
            BoundKind::GeometricTorsion => &["over_q"],
            BoundKind::WideopenZeros => &["no_leaves"],
            _ => &[],
        }
    }

    pub fn formula(self) -> &'static str {
        use BoundKind::*;
        match self {
            Coleman => "#X(F_p) + 2g - 2",
            LorenziniTucker => "#X^sm(F_p) + 2g - 2",
            Stoll => "#X(F_p) + 2r",
            Kzb => "#X^sm(F_p) + 2r",
            StollUniformHyp => "8(r+4)(g-1) + max{1,4r}*g",
            KrzbGeneral => "(5pg + 6g - 2p - 8)(4g - 2)",
            KrzbP3 | RationalTorsion => "84g^2 - 98g + 28",
            GeometricTorsion => "(16g^2 - 12g) * N_p((4E)^-1, 2g - 2)",
            WideopenZeros => "d * N_p(a, 2g - 1), or d * N_p(a, 2g - 2) without genus-zero leaves",
            StollCover => "(5q+2)(g-1) - 3q(t-1) balls + (2g - 3 + t) annuli",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let s = serde_json::to_value(self).expect("serializable");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRequest {
    pub kind: BoundKind,
    #[serde(default)]
    pub parameters: BTreeMap<String, Q>,
}

impl BoundRequest {
    pub fn new(kind: BoundKind) -> Self {
        BoundRequest {
            kind,
            parameters: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: impl Into<BigRational>) -> Self {
        self.parameters.insert(name.to_string(), Q(value.into()));
        self
    }

    pub fn with_int(self, name: &str, value: i64) -> Self {
        self.with(name, BigRational::from_integer(value.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: String,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub kind: BoundKind,
    pub value: Option<BigInt>,
    /// Named parts of the value, e.g. balls and annuli of a cover.
    pub components: Vec<(String, BigInt)>,
    pub hypotheses: Vec<Hypothesis>,
    pub formula: &'static str,
}

impl BoundResult {
    pub fn failed(&self) -> Vec<String> {
        self.hypotheses.iter().filter(|h| !h.satisfied).map(|h| h.name.clone()).collect()
    }
}

struct Params<'a> {
    req: &'a BoundRequest,
}

impl Params<'_> {
    fn rational(&self, name: &str) -> Result<BigRational, BoundsError> {
        self.req
            .parameters
            .get(name)
            .map(|q| q.0.clone())
            .ok_or_else(|| BoundsError::MissingParameter(name.to_string()))
    }

    fn integer(&self, name: &str) -> Result<BigInt, BoundsError> {
        let q = self.rational(name)?;
        if !q.is_integer() {
            return Err(BoundsError::InvalidParameter(format!("{name} = {q} is not an integer")));
        }
        Ok(q.to_integer())
    }

    fn small(&self, name: &str) -> Result<i64, BoundsError> {
        self.integer(name)?
            .to_i64()
            .ok_or_else(|| BoundsError::InvalidParameter(format!("{name} is out of range")))
    }

    fn flag(&self, name: &str) -> Result<bool, BoundsError> {
        match self.req.parameters.get(name) {
            None => Ok(false),
            Some(_) => match self.small(name)? {
                0 => Ok(false),
                1 => Ok(true),
                v => Err(BoundsError::InvalidParameter(format!("{name} = {v} is not 0 or 1"))),
            },
        }
    }

    fn prime(&self, name: &str) -> Result<(u64, bool), BoundsError> {
        let v = self.small(name)?;
        Ok(match u64::try_from(v) {
            Ok(u) => (u, is_prime(u)),
            Err(_) => (0, false),
        })
    }
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn hyp(name: impl Into<String>, satisfied: bool) -> Hypothesis {
    Hypothesis {
        name: name.into(),
        satisfied,
    }
}

/// Evaluates the bound and its hypothesis ledger; `value` is `None` when any
/// hypothesis fails.
pub fn assess(req: &BoundRequest) -> Result<BoundResult, BoundsError> {
    use BoundKind::*;
    let kind = req.kind;
    for name in req.parameters.keys() {
        if !kind.required().contains(&name.as_str()) && !kind.optional().contains(&name.as_str()) {
            return Err(BoundsError::InvalidParameter(format!("{name:?} is not a parameter of {kind}")));
        }
    }
    let ps = Params { req };
    let g = ps.small("g")?;
    let mut hypotheses = vec![hyp("g >= 2", g >= 2)];
    let mut components = Vec::new();
    // Deferred so that a failed hypothesis never triggers an N_p computation.
    let value: Box<dyn Fn() -> Result<BigInt, BoundsError>> = match kind {
        Coleman | LorenziniTucker | Stoll | Kzb => {
            let r = ps.small("r")?;
            let (p, p_prime) = ps.prime("p")?;
            let count_name = if matches!(kind, Coleman | Stoll) { "nFp" } else { "nSm" };
            let n = ps.integer(count_name)?;
            hypotheses.push(hyp("p prime", p_prime));
            hypotheses.push(hyp("r >= 0", r >= 0));
            hypotheses.push(hyp(format!("{count_name} >= 0"), !n.is_negative()));
            if kind == Kzb {
                hypotheses.push(hyp("p > 2r + 2", p as i64 > 2 * r + 2));
            } else {
                hypotheses.push(hyp("p > 2g", p as i64 > 2 * g));
            }
            hypotheses.push(hyp("r < g", r < g));
            let extra = if matches!(kind, Coleman | LorenziniTucker) { 2 * g - 2 } else { 2 * r };
            Box::new(move || Ok(&n + big(extra)))
        }
        StollUniformHyp | KrzbP3 => {
            let r = ps.small("r")?;
            hypotheses.push(hyp("r >= 0", r >= 0));
            hypotheses.push(hyp("r <= g - 3", r <= g - 3));
            if kind == StollUniformHyp {
                Box::new(move || Ok(big(8 * (r + 4)) * big(g - 1) + big((4 * r).max(1)) * big(g)))
            } else {
                Box::new(move || Ok(krzb_p3(&big(g))))
            }
        }
        KrzbGeneral => {
            let r = ps.small("r")?;
            let (p, p_prime) = ps.prime("p")?;
            hypotheses.push(hyp("p prime", p_prime));
            hypotheses.push(hyp("p >= 3", p >= 3));
            hypotheses.push(hyp("r >= 0", r >= 0));
            hypotheses.push(hyp("r <= g - 3", r <= g - 3));
            Box::new(move || Ok(krzb_general(&big(p as i64), &big(g))))
        }
        RationalTorsion => {
            hypotheses.push(hyp("g >= 3", g >= 3));
            Box::new(move || Ok(krzb_p3(&big(g))))
        }
        GeometricTorsion => {
            let (p, p_prime) = ps.prime("p")?;
            let over_q = ps.flag("over_q")?;
            hypotheses.push(hyp("p prime", p_prime));
            hypotheses.push(hyp("g >= 4", g >= 4));
            Box::new(move || {
                let e = if over_q { q_field_degree_bound(g as u32) } else { e_bound(g as u32, p)? };
                geometric_torsion_with(g, p, &e)
            })
        }
        WideopenZeros => {
            let (p, p_prime) = ps.prime("p")?;
            let d = ps.small("d")?;
            let a = ps.rational("a")?;
            let no_leaves = ps.flag("no_leaves")?;
            hypotheses.push(hyp("p prime", p_prime));
            hypotheses.push(hyp("d >= 1", d >= 1));
            hypotheses.push(hyp("a > 0", a.is_positive()));
            Box::new(move || wideopen_zeros(p, g, d, &a, no_leaves))
        }
        StollCover => {
            let q = ps.small("q")?;
            let t = ps.small("t")?;
            hypotheses.push(hyp("q >= 2", q >= 2));
            hypotheses.push(hyp("0 <= t <= g", (0..=g).contains(&t)));
            if hypotheses.iter().all(|h| h.satisfied) {
                let (balls, annuli) = stoll_cover(g, q, t);
                components.push(("balls".to_string(), balls));
                components.push(("annuli".to_string(), annuli));
            }
            Box::new(move || {
                let (balls, annuli) = stoll_cover(g, q, t);
                Ok(balls + annuli)
            })
        }
    };
    let ok = hypotheses.iter().all(|h| h.satisfied);
    Ok(BoundResult {
        kind,
        value: if ok { Some(value()?) } else { None },
        components,
        hypotheses,
        formula: kind.formula(),
    })
}

/// Like [`assess`], but a failed hypothesis is an error naming it.
pub fn evaluate(req: &BoundRequest) -> Result<BoundResult, BoundsError> {
    let res = assess(req)?;
    if res.value.is_none() {
        return Err(BoundsError::HypothesisFailure(res.failed()));
    }
    Ok(res)
}

/// `(5pg + 6g − 2p − 8)(4g − 2)`.
pub fn krzb_general(p: &BigInt, g: &BigInt) -> BigInt {
    (big(5) * p * g + big(6) * g - big(2) * p - big(8)) * (big(4) * g - big(2))
}

/// `84g² − 98g + 28`.
pub fn krzb_p3(g: &BigInt) -> BigInt {
    big(84) * g * g - big(98) * g + big(28)
}

/// `(5q + 2)(g − 1) − 3q(t − 1)` balls and `2g − 3 + t` annuli.
pub fn stoll_cover(g: i64, q: i64, t: i64) -> (BigInt, BigInt) {
    let balls = big(5 * q + 2) * big(g - 1) - big(3 * q) * big(t - 1);
    (balls, big(2 * g - 3 + t))
}

/// `d·N_p(a, 2g − 1)`, or `d·N_p(a, 2g − 2)` when the skeleton has no
/// genus-zero leaves.
pub fn wideopen_zeros(p: u64, g: i64, d: i64, a: &BigRational, no_leaves: bool) -> Result<BigInt, BoundsError> {
    let n0 = if no_leaves { 2 * g - 2 } else { 2 * g - 1 };
    Ok(big(d) * compute_np(p, a, n0)?)
}

/// `(16g² − 12g)·N_p((4E)⁻¹, 2g − 2)`.
pub fn geometric_torsion_with(g: i64, p: u64, e: &BigInt) -> Result<BigInt, BoundsError> {
    let rate = BigRational::new(BigInt::one(), big(4) * e);
    Ok(big(16 * g * g - 12 * g) * compute_np(p, &rate, 2 * g - 2)?)
}

/// The geometric torsion bound with the field-degree bound `E(g, p)`.
pub fn geometric_torsion(g: u32, p: u64) -> Result<BigInt, BoundsError> {
    geometric_torsion_with(g as i64, p, &e_bound(g, p)?)
}

/// `7^{2g² + g + 1}`, the degree bound used over `Q`.
pub fn q_field_degree_bound(g: u32) -> BigInt {
    num_traits::pow(big(7), (2 * g * g + g + 1) as usize)
}

/// `#GSp_{2g}(F_q) = (q − 1)·q^{g²}·Π_{i=1}^{g} (q^{2i} − 1)`.
pub fn gsp_order(g: u32, q: u64) -> Result<BigInt, BoundsError> {
    if g < 1 {
        return Err(BoundsError::InvalidParameter(format!("g = {g} must be at least 1")));
    }
    if !is_prime_power(q) {
        return Err(BoundsError::InvalidParameter(format!("q = {q} is not a prime power")));
    }
    let qb = BigInt::from(q);
    let mut order = (&qb - 1u32) * num_traits::pow(qb.clone(), (g * g) as usize);
    for i in 1..=g {
        order *= num_traits::pow(qb.clone(), 2 * i as usize) - 1u32;
    }
    Ok(order)
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|d| q % d == 0).expect("q >= 2");
    let mut m = q;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

/// `#GSp_{2g}(F_5)` for `p ≠ 5` and `#GSp_{2g}(F_7)` for `p = 5`.
pub fn e_bound(g: u32, p: u64) -> Result<BigInt, BoundsError> {
    if !is_prime(p) {
        return Err(BoundsError::InvalidParameter(format!("p = {p} is not prime")));
    }
    gsp_order(g, if p == 5 { 7 } else { 5 })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DaggerReport {
    pub holds: bool,
    /// Vertices where `g(Γ) > 2·weight + valency` fails.
    pub violations: Vec<String>,
}

/// Whether `g(Γ) > 2·weight(x) + valency(x)` at every vertex.
pub fn check_dagger(g: &VertexWeightedMetricGraph) -> DaggerReport {
    let genus = g.genus();
    let violations: Vec<String> = g
        .vertices()
        .iter()
        .enumerate()
        .filter(|(i, v)| genus <= 2 * v.weight as i64 + g.valency(*i) as i64)
        .map(|(_, v)| v.id.clone())
        .collect();
    DaggerReport {
        holds: violations.is_empty(),
        violations,
    }
}
