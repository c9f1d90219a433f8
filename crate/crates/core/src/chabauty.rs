//! Hyperelliptic curves `c·y² = f(x)` over `Q`.
//!
//! Covers reduction type, point counts over `F_p`, the Coleman bound, and the
//! local analysis inside a residue disc: for a smooth non-Weierstrass point
//! `(a, b)` of the reduction, the disc is parametrized by `x = a₀ + p·t` with
//! `v(t) ≥ 0`, and the forms `ωᵢ = xⁱ dx / y` are expanded as power series in
//! `t`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{bareiss_determinant, rank_mod_p};
use crate::padic::{
    check_prime, chi, hensel_sqrt, rational_valuation, FiniteFieldElement, PadicError, PadicNumber, Valuation,
};
use crate::series::{antiderivative, compute_np, tail_minimum, PadicSeries, SeriesError, TailBound, TailEstimate};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChabautyError {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("p = 2 is not supported")]
    EvenPrime,
    #[error("curve has bad reduction at {0}")]
    BadReduction(u64),
    #[error("hypothesis failed: {0}")]
    HypothesisFailure(String),
    #[error("disc is centred at a Weierstrass point (b = 0)")]
    WeierstrassDisc,
    #[error("invalid residue disc: {0}")]
    BadDisc(String),
    #[error("differential index {0} is not below the genus {1}")]
    IndexOutOfRange(usize, usize),
    #[error("point with v(t) = {0} lies outside the disc")]
    OutsideDisc(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("no coefficient of the expansion is a unit; increase the number of terms")]
    ZeroSeries,
    #[error("rows are linearly dependent over F_p")]
    DependentRows,
    #[error("some row vanishes on all supplied columns; supply more columns")]
    RankNotStabilized,
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

impl From<ChabautyError> for String {
    fn from(e: ChabautyError) -> String {
        e.to_string()
    }
}

/// `c·y² = f(x)` with `f` squarefree of degree `2g+1` or `2g+2`, `g ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve {
    c: BigInt,
    f: Vec<BigInt>,
}

/// On-disk form `{"c": …, "f": [a₀, a₁, …]}`; large integers may be strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFile {
    pub c: serde_json::Value,
    pub f: Vec<serde_json::Value>,
}

fn json_integer(v: &serde_json::Value) -> Result<BigInt, ChabautyError> {
    match v {
        serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integer")),
        serde_json::Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| ChabautyError::InvalidCurve(format!("not an integer: {s:?}"))),
        other => Err(ChabautyError::InvalidCurve(format!("not an integer: {other}"))),
    }
}

impl CurveFile {
    pub fn build(&self) -> Result<HyperellipticCurve, ChabautyError> {
        let c = json_integer(&self.c)?;
        let f = self.f.iter().map(json_integer).collect::<Result<Vec<_>, _>>()?;
        HyperellipticCurve::new(c, f)
    }

    pub fn from_curve(curve: &HyperellipticCurve) -> Self {
        let enc = |x: &BigInt| match x.to_i64() {
            Some(v) if v.unsigned_abs() < (1 << 53) => serde_json::Value::from(v),
            _ => serde_json::Value::String(x.to_string()),
        };
        CurveFile {
            c: enc(&curve.c),
            f: curve.f.iter().map(enc).collect(),
        }
    }
}

impl HyperellipticCurve {
    pub fn new(c: BigInt, mut f: Vec<BigInt>) -> Result<Self, ChabautyError> {
        if c.is_zero() {
            return Err(ChabautyError::InvalidCurve("c must be nonzero".into()));
        }
        while f.last().is_some_and(|x| x.is_zero()) {
            f.pop();
        }
        let d = f.len().saturating_sub(1);
        if d < 5 {
            return Err(ChabautyError::InvalidCurve(format!("degree {d} gives genus < 2")));
        }
        let curve = HyperellipticCurve { c, f };
        if curve.discriminant().is_zero() {
            return Err(ChabautyError::InvalidCurve("f is not squarefree".into()));
        }
        Ok(curve)
    }

    pub fn from_i64(c: i64, f: &[i64]) -> Result<Self, ChabautyError> {
        Self::new(c.into(), f.iter().map(|&x| x.into()).collect())
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// Coefficients of `f`, lowest degree first.
    pub fn f(&self) -> &[BigInt] {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn genus(&self) -> usize {
        (self.degree() - 1) / 2
    }

    pub fn leading(&self) -> &BigInt {
        self.f.last().expect("nonempty")
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.f.iter().rev().fold(BigInt::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.f
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, a| acc * x + BigRational::from_integer(a.clone()))
    }

    /// `disc(f) = (−1)^{d(d−1)/2} Res(f, f′) / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let d = self.degree();
        let df: Vec<BigInt> = self.f.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect();
        let res = resultant(&self.f, &df);
        let sign = if (d * (d - 1) / 2) % 2 == 0 { 1 } else { -1 };
        BigInt::from(sign) * res / self.leading()
    }

    /// `p ∤ c`, `p ∤ lc(f)` and `p ∤ disc(f)`, for odd `p`.
    pub fn good_reduction(&self, p: u64) -> Result<bool, ChabautyError> {
        check_prime(p)?;
        if p == 2 {
            return Err(ChabautyError::EvenPrime);
        }
        let pb = BigInt::from(p);
        let divides = |x: &BigInt| (x % &pb).is_zero();
        Ok(!divides(&self.c) && !divides(self.leading()) && !divides(&self.discriminant()))
    }

    /// `#X(F_p)` for a prime of good reduction.
    pub fn count_points_fp(&self, p: u64) -> Result<u64, ChabautyError> {
        if !self.good_reduction(p)? {
            return Err(ChabautyError::BadReduction(p));
        }
        let pb = BigInt::from(p);
        let cm = self.c.mod_floor(&pb);
        let fp: Vec<BigInt> = self.f.iter().map(|a| a.mod_floor(&pb)).collect();
        let mut count: i64 = 0;
        for a in 0..p {
            let ab = BigInt::from(a);
            let v = fp.iter().rev().fold(BigInt::zero(), |acc, x| (acc * &ab + x) % &pb);
            count += 1 + chi(&(v * &cm), p)? as i64;
        }
        count += if self.degree() % 2 == 1 {
            1
        } else {
            1 + chi(&(self.leading() * &self.c), p)? as i64
        };
        Ok(count as u64)
    }

    pub fn is_rational_point(&self, x: &BigRational, y: &BigRational) -> bool {
        BigRational::from_integer(self.c.clone()) * y * y == self.eval_rational(x)
    }

    /// Whether a point in [`CurvePoint`] form lies on the curve.
    pub fn contains(&self, pt: &CurvePoint) -> bool {
        match pt {
            CurvePoint::Affine(x, y) => self.is_rational_point(x, y),
            CurvePoint::Infinity(sign) => {
                if self.degree() % 2 == 1 {
                    *sign == 0
                } else {
                    *sign != 0 && is_square_integer(&(self.leading() * &self.c))
                }
            }
        }
    }
}

fn is_square_integer(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Resultant via the Sylvester matrix.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    // Coefficients highest degree first along each row.
    for i in 0..n {
        for (j, a) in f.iter().rev().enumerate() {
            rows[i][i + j] = a.clone();
        }
    }
    for i in 0..m {
        for (j, b) in g.iter().rev().enumerate() {
            rows[n + i][i + j] = b.clone();
        }
    }
    bareiss_determinant(rows)
}

/// A rational point: affine `(x, y)`, or a point at infinity. For odd degree
/// there is one point at infinity (sign 0); for even degree two, `±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePoint {
    Affine(BigRational, BigRational),
    Infinity(i8),
}

impl CurvePoint {
    pub fn affine(x: i64, y: i64) -> Self {
        CurvePoint::Affine(BigRational::from_integer(x.into()), BigRational::from_integer(y.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColemanBound {
    pub bound: u64,
    pub points_fp: u64,
}

/// `#X(F_p) + 2g − 2`, valid for good `p > 2g` and Mordell–Weil rank `r < g`.
pub fn coleman_bound_for_curve(curve: &HyperellipticCurve, p: u64, r: u64) -> Result<ColemanBound, ChabautyError> {
    let g = curve.genus() as u64;
    if p <= 2 * g {
        return Err(ChabautyError::HypothesisFailure(format!("p > 2g (p = {p}, 2g = {})", 2 * g)));
    }
    if r >= g {
        return Err(ChabautyError::HypothesisFailure(format!("r < g (r = {r}, g = {g})")));
    }
    if !curve.good_reduction(p)? {
        return Err(ChabautyError::HypothesisFailure(format!("good reduction at p = {p}")));
    }
    let points_fp = curve.count_points_fp(p)?;
    Ok(ColemanBound {
        bound: points_fp + 2 * g - 2,
        points_fp,
    })
}

/// Residue disc of the smooth affine point `(a, b)` of the reduction with
/// `b ≠ 0`, parametrized by `x = a₀ + p·t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueDisc {
    pub prime: u64,
    pub a0: BigInt,
    pub b: u64,
}

impl ResidueDisc {
    pub fn new(curve: &HyperellipticCurve, p: u64, a0: BigInt, b: i64) -> Result<Self, ChabautyError> {
        check_prime(p)?;
        if p == 2 {
            return Err(ChabautyError::EvenPrime);
        }
        let pb = BigInt::from(p);
        if (curve.c() % &pb).is_zero() {
            return Err(ChabautyError::BadDisc(format!("p = {p} divides c")));
        }
        let b = FiniteFieldElement::new(p, b).residue();
        if b == 0 {
            return Err(ChabautyError::WeierstrassDisc);
        }
        let lhs = curve.eval(&a0).mod_floor(&pb);
        let rhs = (curve.c() * BigInt::from(b) * BigInt::from(b)).mod_floor(&pb);
        if lhs != rhs {
            return Err(ChabautyError::BadDisc(format!("({a0}, {b}) is not on the curve mod {p}")));
        }
        Ok(ResidueDisc { prime: p, a0, b })
    }
}

/// All non-Weierstrass affine residue discs, with `a₀ ∈ [0, p)`. Scans `F_p`
/// for square roots, so intended for small `p`.
pub fn residue_discs(curve: &HyperellipticCurve, p: u64) -> Result<Vec<ResidueDisc>, ChabautyError> {
    let mut out = Vec::new();
    for a in 0..p {
        for b in 1..p {
            if let Ok(d) = ResidueDisc::new(curve, p, BigInt::from(a), b as i64) {
                out.push(d);
            }
        }
    }
    Ok(out)
}

fn pow_big(p: u64, k: usize) -> BigInt {
    num_traits::pow(BigInt::from(p), k)
}

/// Coefficients of `f(a₀ + p·t)` in `t`.
fn substitute(f: &[BigInt], a0: &BigInt, p: u64) -> Vec<BigInt> {
    // Taylor coefficients at a₀ by repeated synthetic division.
    let mut work: Vec<BigInt> = f.to_vec();
    let mut taylor = Vec::with_capacity(f.len());
    for k in 0..f.len() {
        let n = work.len() - k;
        for j in (1..n).rev() {
            let carry = &work[j] * a0;
            work[j - 1] += carry;
        }
        let _ = n;
        taylor.push(work[0].clone());
        work.remove(0);
        work.insert(0, BigInt::zero());
        // After removing the constant, shift down.
        work.remove(0);
        work.push(BigInt::zero());
    }
    taylor.into_iter().enumerate().map(|(k, c)| c * pow_big(p, k)).collect()
}

fn mul_trunc(a: &[BigRational], b: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Default working precision `max(2(2g + 4), terms + 1)` in p-adic digits.
pub fn default_digits(genus: usize, terms: usize) -> u32 {
    (2 * (2 * genus + 4)).max(terms + 1) as u32
}

/// `ωᵢ = xⁱ dx / y` on the disc as `Σ aₙ tⁿ dt`, with `terms` coefficients.
///
/// Writes `f(a₀ + p t)/c = y₀²(1 + h(t))` with `y₀` the Hensel lift of `b`;
/// then `1/y = y₀⁻¹ (1 + h)^{−1/2}`, whose `tⁿ` coefficient is computed
/// exactly because `h` has no constant term and `pⁿ | hₙ`. Every coefficient
/// satisfies `v(aₙ) ≥ n + 1`, which is recorded as the tail bound.
pub fn expand_differential(
    curve: &HyperellipticCurve,
    disc: &ResidueDisc,
    i: usize,
    terms: usize,
) -> Result<PadicSeries, ChabautyError> {
    let g = curve.genus();
    if i >= g {
        return Err(ChabautyError::IndexOutOfRange(i, g));
    }
    let p = disc.prime;
    let n = terms.max(1);
    let digits = default_digits(g, n);
    let ft = substitute(curve.f(), &disc.a0, p);
    let f0 = ft[0].clone();
    // h = f(a₀ + pt)/f(a₀) − 1.
    let h: Vec<BigRational> = ft
        .iter()
        .enumerate()
        .map(|(k, x)| {
            if k == 0 {
                BigRational::zero()
            } else {
                BigRational::new(x.clone(), f0.clone())
            }
        })
        .collect();
    // S = Σ binom(−1/2, k) hᵏ, truncated to n terms.
    let mut s = vec![BigRational::zero(); n];
    let mut power = vec![BigRational::zero(); n];
    power[0] = BigRational::one();
    let mut binom = BigRational::one();
    for k in 0..n {
        for (sj, pj) in s.iter_mut().zip(&power) {
            *sj += &binom * pj;
        }
        // binom(−1/2, k+1) = binom(−1/2, k)·(−1/2 − k)/(k + 1)
        binom = binom * BigRational::new(BigInt::from(-1 - 2 * k as i64), BigInt::from(2 * (k as i64 + 1)));
        power = mul_trunc(&power, &h, n);
    }
    // Consistency: S²(1 + h) ≡ 1 mod tⁿ.
    let mut one_plus_h = h.clone();
    one_plus_h[0] = BigRational::one();
    let check = mul_trunc(&mul_trunc(&s, &s, n), &one_plus_h, n);
    if !check.iter().enumerate().all(|(k, x)| if k == 0 { x.is_one() } else { x.is_zero() }) {
        return Err(ChabautyError::InsufficientPrecision("binomial series check failed".into()));
    }
    let c = BigRational::from_integer(curve.c().clone());
    let target = PadicNumber::exact(p, BigRational::from_integer(f0) / &c)?;
    let y0 = hensel_sqrt(&target, FiniteFieldElement::new(p, disc.b as i64), digits)?;
    // y₀² must reproduce f(a₀)/c to working precision.
    let sq = y0.mul(&y0)?;
    let diff = sq.sub(&target)?;
    if !diff.is_zero() {
        return Err(ChabautyError::InsufficientPrecision("Hensel branch check failed".into()));
    }
    // (a₀ + p t)^i
    let mut xi = vec![BigRational::zero(); n];
    xi[0] = BigRational::one();
    let lin = {
        let mut v = vec![BigRational::zero(); n];
        v[0] = BigRational::from_integer(disc.a0.clone());
        if n > 1 {
            v[1] = BigRational::from_integer(BigInt::from(p));
        }
        v
    };
    for _ in 0..i {
        xi = mul_trunc(&xi, &lin, n);
    }
    let body = mul_trunc(&xi, &s, n);
    let scale = y0.inv()?.scale(&BigRational::from_integer(BigInt::from(p)))?;
    let coeffs = body
        .iter()
        .map(|x| scale.scale(x))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PadicSeries::new(p, 0, coeffs, TailBound::linear(1, 1))?)
}

/// `∫_{t₁}^{t₂} ωᵢ` inside the disc, with certified absolute precision.
pub fn tiny_integral(
    curve: &HyperellipticCurve,
    disc: &ResidueDisc,
    i: usize,
    t1: &PadicNumber,
    t2: &PadicNumber,
    terms: usize,
) -> Result<PadicNumber, ChabautyError> {
    let omega = expand_differential(curve, disc, i, terms)?;
    integrate_between(&omega, t1, t2)
}

/// `F(t₂) − F(t₁)` for the antiderivative of a `dt`-form series.
pub fn integrate_between(omega: &PadicSeries, t1: &PadicNumber, t2: &PadicNumber) -> Result<PadicNumber, ChabautyError> {
    for t in [t1, t2] {
        if let Valuation::Finite(v) = t.valuation() {
            if v < 0 {
                return Err(ChabautyError::OutsideDisc(v.to_string()));
            }
        }
    }
    let p = omega.prime();
    if t1 == t2 {
        return Ok(PadicNumber::exact_zero(p));
    }
    let f = omega.integrate_dt()?;
    let value = f.evaluate(t2)?.sub(&f.evaluate(t1)?)?;
    if value.absolute_precision() < 1 {
        return Err(ChabautyError::InsufficientPrecision(format!(
            "only {} digits certified",
            value.absolute_precision()
        )));
    }
    Ok(value)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscZeroData {
    pub n0: usize,
    pub local_bound: BigInt,
}

/// `n₀` and the resulting bound on rational points in the disc for `ωᵢ`.
pub fn disc_zero_data(
    curve: &HyperellipticCurve,
    disc: &ResidueDisc,
    i: usize,
    terms: usize,
) -> Result<DiscZeroData, ChabautyError> {
    let omega = expand_differential(curve, disc, i, terms)?;
    zero_data_from_series(&omega)
}

/// For `ω = Σ aₙ tⁿ dt` in the coordinate `x = a₀ + p t`, the coefficients in
/// the uniformizer `z = x − a₀` are `cₙ = aₙ / p^{n+1}`; after rescaling to
/// minimum valuation 0, `n₀` is the first index of a unit. The bound is
/// `1 + n₀` when `p > n₀ − 2`, and otherwise the correction
/// `N_p(1, n₀ + 1) − 1` on the disc `v(z) ≥ 1` if that is larger.
pub fn zero_data_from_series(omega: &PadicSeries) -> Result<DiscZeroData, ChabautyError> {
    let p = omega.prime();
    let vals: Vec<Option<i64>> = (0..omega.end().max(0))
        .map(|n| {
            omega
                .coeff(n)
                .and_then(|a| a.valuation().finite())
                .map(|v| v - (n + 1))
        })
        .collect();
    let min = vals.iter().flatten().min().copied().ok_or(ChabautyError::ZeroSeries)?;
    // Tail coefficients must not drop below the minimum; ties come later than n₀.
    match tail_minimum(&omega.tail(), omega.end(), &-BigRational::one(), p) {
        TailEstimate::Unbounded => return Err(ChabautyError::ZeroSeries),
        TailEstimate::Bounded(b) if &b - BigRational::one() < BigRational::from_integer(min.into()) => {
            return Err(ChabautyError::ZeroSeries)
        }
        _ => {}
    }
    let n0 = vals.iter().position(|v| *v == Some(min)).expect("minimum attained");
    let base = BigInt::from(n0 as u64 + 1);
    let local_bound = if (p as i64) > n0 as i64 - 2 {
        base
    } else {
        let corr = compute_np(p, &BigRational::one(), n0 as i64 + 1)? - 1u32;
        corr.max(base)
    };
    Ok(DiscZeroData { n0, local_bound })
}

/// Reductions mod `p` of the first `columns` coefficients `cₙ = aₙ/p^{n+1}`.
pub fn reduced_expansion_row(omega: &PadicSeries, columns: usize) -> Result<Vec<u64>, ChabautyError> {
    let p = omega.prime();
    let pb = BigInt::from(p);
    (0..columns as i64)
        .map(|n| {
            let a = omega.coeff(n).ok_or_else(|| {
                ChabautyError::InsufficientPrecision(format!("coefficient {n} not computed"))
            })?;
            let c = a.to_rational() / BigRational::from_integer(pow_big(p, n as usize + 1));
            match rational_valuation(&c, p) {
                Valuation::Finite(v) if v < 0 => Err(ChabautyError::InsufficientPrecision(format!(
                    "coefficient {n} is not integral"
                ))),
                _ => {
                    let r = crate::padic::reduce_rational(&c, &pb).expect("integral");
                    Ok(r.to_u64().expect("reduced"))
                }
            }
        })
        .collect()
}

/// Smallest vanishing order at the centre over the nonzero forms spanned by
/// `rows` (their reductions in the uniformizer): the first column in which
/// some row is nonzero.
pub fn stoll_order(rows: &[Vec<u64>], p: u64) -> Result<usize, ChabautyError> {
    check_prime(p)?;
    let reduced: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    if reduced.is_empty() || reduced.iter().any(|r| r.iter().all(|&x| x == 0)) {
        return Err(ChabautyError::RankNotStabilized);
    }
    if rank_mod_p(&reduced, p) < reduced.len() {
        return Err(ChabautyError::DependentRows);
    }
    let width = reduced.iter().map(|r| r.len()).max().unwrap_or(0);
    Ok((0..width)
        .find(|&j| reduced.iter().any(|r| r.get(j).is_some_and(|&x| x != 0)))
        .expect("nonzero row"))
}

/// `∫ ω` as a series in `t`, for counting zeros inside the disc.
pub fn antiderivative_in_disc(omega: &PadicSeries) -> Result<PadicSeries, ChabautyError> {
    Ok(antiderivative(&omega.shift(1))?)
}
