//! Truncated Laurent series over `Q_p`.
//!
//! Zeros are located by the valuation of their coordinate: a series
//! `f = Σ aₙ tⁿ` has exactly as many zeros of valuation `s` as the horizontal
//! width of the Newton polygon segment of slope `-s`. Equivalently, along the
//! skeleton of an annulus the function `F(s) = -log|f| = min_n (v(aₙ) + n·s)`
//! is piecewise linear, and its right derivative at `s` is the smallest index
//! attaining that minimum. For `f = p + t` this gives `F(s) = min{1, s}` with
//! one kink at `s = 1`, the valuation of the root `-p`.
//!
//! Truncation is certified: every series carries a [`TailBound`] on the
//! valuations of the coefficients that were not stored, and operations that
//! would need to look past the stored terms refuse with
//! [`SeriesError::InsufficientTail`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::{check_prime, floor_log, PadicError, PadicNumber, Valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series has no nonzero stored coefficient")]
    AllZero,
    #[error("tail bound is too weak to certify the result{0}")]
    InsufficientTail(String),
    #[error("differential has nonzero residue a_0 = {0}")]
    NonExactResidue(String),
    #[error("rate r must be positive, got {0}")]
    NonpositiveRate(String),
    #[error("invalid valuation window: {0}")]
    WindowError(String),
    #[error("series must have at least one coefficient")]
    Empty,
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// Lower bound on the valuations of the coefficients that were truncated:
/// `v(aₙ) ≥ floor + growth·n − log_loss·⌊log_p |n|⌋` for every `n` past the
/// stored range. A floor of `+∞` means the series is a Laurent polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TailBound {
    pub floor: Valuation,
    pub growth: i64,
    pub log_loss: u32,
}

impl TailBound {
    pub const EXACT: TailBound = TailBound {
        floor: Valuation::Infinity,
        growth: 0,
        log_loss: 0,
    };

    pub fn constant(floor: i64) -> Self {
        TailBound {
            floor: Valuation::Finite(floor),
            growth: 0,
            log_loss: 0,
        }
    }

    pub fn linear(floor: i64, growth: i64) -> Self {
        TailBound {
            floor: Valuation::Finite(floor),
            growth,
            log_loss: 0,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_infinite()
    }

    /// The bound at index `n`.
    pub fn at(&self, n: i64, p: u64) -> Option<i64> {
        let f = self.floor.finite()?;
        Some(f + self.growth * n - self.log_loss as i64 * floor_log(n, p))
    }
}

/// Outcome of bounding `min_{n ≥ start} (v(aₙ) + n·s)` over the tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailEstimate {
    /// There is no tail.
    Absent,
    /// Every tail term is at least this value.
    Bounded(BigRational),
    /// The bound does not control the tail at this `s`.
    Unbounded,
}

/// Truncated Laurent series `Σ_{n ≥ low} aₙ tⁿ` with a certified tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicSeries {
    prime: u64,
    low: i64,
    coeffs: Vec<PadicNumber>,
    tail: TailBound,
}

impl PadicSeries {
    pub fn new(prime: u64, low: i64, coeffs: Vec<PadicNumber>, tail: TailBound) -> Result<Self, SeriesError> {
        check_prime(prime)?;
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some(c) = coeffs.iter().find(|c| c.prime() != prime) {
            return Err(PadicError::PrimeMismatch(prime, c.prime()).into());
        }
        Ok(PadicSeries { prime, low, coeffs, tail })
    }

    /// A Laurent polynomial with exact rational coefficients.
    pub fn from_rationals(prime: u64, low: i64, coeffs: &[BigRational]) -> Result<Self, SeriesError> {
        let cs = coeffs
            .iter()
            .map(|c| PadicNumber::exact(prime, c.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(prime, low, cs, TailBound::EXACT)
    }

    pub fn from_integers(prime: u64, low: i64, coeffs: &[i64]) -> Result<Self, SeriesError> {
        let qs: Vec<BigRational> = coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        Self::from_rationals(prime, low, &qs)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    /// One past the last stored exponent.
    pub fn end(&self) -> i64 {
        self.low + self.coeffs.len() as i64
    }

    pub fn coeffs(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    pub fn tail(&self) -> TailBound {
        self.tail
    }

    pub fn with_tail(mut self, tail: TailBound) -> Self {
        self.tail = tail;
        self
    }

    /// Coefficient of `tⁿ` when it lies in the stored range.
    pub fn coeff(&self, n: i64) -> Option<&PadicNumber> {
        if n < self.low || n >= self.end() {
            None
        } else {
            Some(&self.coeffs[(n - self.low) as usize])
        }
    }

    /// Stored terms with nonzero coefficient, as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &PadicNumber)> {
        let low = self.low;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (low + i as i64, c))
    }

    /// Strips zero coefficients at both ends. Trailing zeros of a series
    /// with a finite tail are kept since the tail bound starts after them.
    pub fn normalize(&self) -> Self {
        let Some(first) = self.coeffs.iter().position(|c| !c.is_zero()) else {
            return PadicSeries {
                coeffs: vec![self.coeffs[0].clone()],
                ..self.clone()
            };
        };
        let last = if self.tail.is_exact() {
            self.coeffs.iter().rposition(|c| !c.is_zero()).expect("nonzero exists")
        } else {
            self.coeffs.len() - 1
        };
        PadicSeries {
            prime: self.prime,
            low: self.low + first as i64,
            coeffs: self.coeffs[first..=last].to_vec(),
            tail: self.tail,
        }
    }

    /// Lower bound for `min_{n ≥ end} (v(aₙ) + n·s)` over the truncated tail.
    pub fn tail_estimate(&self, s: &BigRational) -> TailEstimate {
        tail_minimum(&self.tail, self.end(), s, self.prime)
    }

    /// `min_n (v(aₙ) + n·s)` over stored terms, with the smallest and the
    /// largest index attaining it.
    fn stored_minimum(&self, s: &BigRational) -> Option<(BigRational, i64, i64)> {
        let mut best: Option<(BigRational, i64, i64)> = None;
        for (n, c) in self.terms() {
            let v = c.valuation().finite().expect("nonzero term");
            let val = BigRational::from_integer(v.into()) + s * BigRational::from_integer(n.into());
            best = match best {
                None => Some((val, n, n)),
                Some((b, lo, hi)) => {
                    if val < b {
                        Some((val, n, n))
                    } else if val == b {
                        Some((b, lo.min(n), hi.max(n)))
                    } else {
                        Some((b, lo, hi))
                    }
                }
            };
        }
        best
    }

    /// `F(s) = min_n (v(aₙ) + n·s)` together with the right derivative
    /// (smallest minimizing index) and left derivative (largest one).
    /// Fails when the tail could compete with the stored minimum.
    pub fn gauss_valuation(&self, s: &BigRational) -> Result<(BigRational, i64, i64), SeriesError> {
        let (m, lo, hi) = self.stored_minimum(s).ok_or(SeriesError::AllZero)?;
        match self.tail_estimate(s) {
            TailEstimate::Absent => Ok((m, lo, hi)),
            TailEstimate::Bounded(t) if t > m => Ok((m, lo, hi)),
            _ => Err(SeriesError::InsufficientTail(format!(" at s = {s}"))),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut tail = self.tail;
        if let Valuation::Finite(f) = tail.floor {
            // v(a_{n-k}) ≥ f + g(n-k) - L⌊log(n-k)⌋; a conservative log term
            // needs |n-k| ≤ |n|, which holds for k ≥ 0 and n ≥ k.
            tail.floor = Valuation::Finite(f - tail.growth * k);
            if k < 0 {
                tail.floor = Valuation::Finite(f - tail.growth * k - tail.log_loss as i64);
            }
        }
        PadicSeries {
            prime: self.prime,
            low: self.low + k,
            coeffs: self.coeffs.clone(),
            tail,
        }
    }

    /// Multiplies every coefficient by an exact rational.
    pub fn scale(&self, c: &BigRational) -> Result<Self, SeriesError> {
        let coeffs = self.coeffs.iter().map(|a| a.scale(c)).collect::<Result<Vec<_>, _>>()?;
        let mut tail = self.tail;
        if let (Valuation::Finite(f), Some(vc)) = (tail.floor, crate::padic::rational_valuation(c, self.prime).finite()) {
            tail.floor = Valuation::Finite(f + vc);
        } else if c.is_zero() {
            tail = TailBound::EXACT;
        }
        Ok(PadicSeries { coeffs, tail, ..self.clone() })
    }

    /// Sum of two series; the result is stored over the union of ranges and
    /// carries the weaker of the two tails.
    pub fn add(&self, other: &PadicSeries) -> Result<Self, SeriesError> {
        if self.prime != other.prime {
            return Err(PadicError::PrimeMismatch(self.prime, other.prime).into());
        }
        let p = self.prime;
        let low = self.low.min(other.low);
        let end = self.end().min(other.end()).max(if self.tail.is_exact() && other.tail.is_exact() {
            self.end().max(other.end())
        } else {
            i64::MIN
        });
        let end = if self.tail.is_exact() && other.tail.is_exact() {
            self.end().max(other.end())
        } else if self.tail.is_exact() {
            other.end()
        } else if other.tail.is_exact() {
            self.end()
        } else {
            end
        };
        let mut coeffs = Vec::new();
        for n in low..end {
            let a = self.coeff_or_zero(n);
            let b = other.coeff_or_zero(n);
            coeffs.push(a.add(&b)?);
        }
        let tail = weaker_tail(self.tail, other.tail, end, p);
        Ok(PadicSeries { prime: p, low, coeffs, tail })
    }

    fn coeff_or_zero(&self, n: i64) -> PadicNumber {
        match self.coeff(n) {
            Some(c) => c.clone(),
            None if n < self.low || self.tail.is_exact() => PadicNumber::exact_zero(self.prime),
            None => {
                let bound = self.tail.at(n, self.prime).expect("finite tail");
                PadicNumber::zero(self.prime, bound)
            }
        }
    }

    /// Formal derivative in the `dt/t` convention: `Σ n·aₙ tⁿ`.
    pub fn log_derivative_coefficients(&self) -> Result<Self, SeriesError> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&BigRational::from_integer((self.low + i as i64).into())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PadicSeries { coeffs, ..self.clone() })
    }

    /// Integrates a form `Σ aₙ tⁿ dt` (as opposed to `dt/t`): the result is
    /// `Σ aₙ tⁿ⁺¹/(n+1)` with constant term 0.
    pub fn integrate_dt(&self) -> Result<Self, SeriesError> {
        antiderivative(&self.shift(1))
    }

    /// Evaluates at `t`, with the absolute precision capped by the tail.
    pub fn evaluate(&self, t: &PadicNumber) -> Result<PadicNumber, SeriesError> {
        let p = self.prime;
        if t.prime() != p {
            return Err(PadicError::PrimeMismatch(p, t.prime()).into());
        }
        if t.is_zero() {
            if self.low < 0 && self.terms().any(|(n, _)| n < 0) {
                return Err(PadicError::DivisionByZero.into());
            }
            let c0 = self.coeff(0).cloned().unwrap_or_else(|| PadicNumber::exact_zero(p));
            return Ok(c0);
        }
        let mut acc = PadicNumber::exact_zero(p);
        let mut power = if self.low >= 0 {
            t.pow(self.low as u32)
        } else {
            t.inv()?.pow((-self.low) as u32)
        };
        for c in &self.coeffs {
            acc = acc.add(&c.mul(&power)?)?;
            power = power.mul(t)?;
        }
        let s = BigRational::from_integer(t.valuation().finite().expect("nonzero").into());
        match self.tail_estimate(&s) {
            TailEstimate::Absent => Ok(acc),
            TailEstimate::Bounded(b) => {
                let cap = b.ceil().to_integer();
                let cap: i64 = i64::try_from(cap).unwrap_or(i64::MAX);
                Ok(acc.with_absolute_precision_cap(cap))
            }
            TailEstimate::Unbounded => Err(SeriesError::InsufficientTail(format!(" at v(t) = {s}"))),
        }
    }
}

fn weaker_tail(a: TailBound, b: TailBound, start: i64, p: u64) -> TailBound {
    match (a.is_exact(), b.is_exact()) {
        (true, _) => b,
        (_, true) => a,
        _ => {
            // Pointwise minimum is bounded below by the tail with the smaller
            // growth and larger loss, anchored at the start.
            let growth = a.growth.min(b.growth);
            let log_loss = a.log_loss.max(b.log_loss);
            let at_start = a.at(start, p).unwrap().min(b.at(start, p).unwrap());
            let floor = at_start - growth * start + log_loss as i64 * floor_log(start, p);
            TailBound {
                floor: Valuation::Finite(floor),
                growth,
                log_loss,
            }
        }
    }
}

/// `min_{n ≥ start} (tail(n) + n·s)`, exploiting that the summand increases
/// inside each block `[p^j, p^{j+1})`.
pub fn tail_minimum(tail: &TailBound, start: i64, s: &BigRational, p: u64) -> TailEstimate {
    let Valuation::Finite(floor) = tail.floor else {
        return TailEstimate::Absent;
    };
    let rate = s + BigRational::from_integer(tail.growth.into());
    let loss = tail.log_loss as i64;
    let value = |n: i64| -> BigRational {
        BigRational::from_integer((floor - loss * floor_log(n, p)).into()) + &rate * BigRational::from_integer(n.into())
    };
    if loss == 0 {
        return if rate.is_positive() {
            TailEstimate::Bounded(value(start))
        } else if rate.is_zero() {
            TailEstimate::Bounded(BigRational::from_integer(floor.into()))
        } else {
            TailEstimate::Unbounded
        };
    }
    if !rate.is_positive() {
        return TailEstimate::Unbounded;
    }
    let mut best: Option<BigRational> = None;
    let mut keep = |v: BigRational| {
        best = Some(match best.take() {
            Some(b) if b <= v => b,
            _ => v,
        });
    };
    // Nonpositive indices: finitely many, evaluated directly.
    let mut n = start;
    if n <= 0 {
        if -n > 100_000 {
            return TailEstimate::Unbounded;
        }
        while n <= 0 {
            keep(value(n));
            n += 1;
        }
    }
    keep(value(n));
    let mut pj: i64 = 1;
    let mut j = 0;
    loop {
        if pj > n {
            keep(value(pj));
        }
        // From here on each block start is larger than the previous one.
        let step = &rate * BigRational::from_integer((pj * (p as i64 - 1)).into());
        if pj >= n && step >= BigRational::from_integer(loss.into()) {
            break;
        }
        j += 1;
        pj = match pj.checked_mul(p as i64) {
            Some(v) => v,
            None => break,
        };
        if j > 62 {
            break;
        }
    }
    TailEstimate::Bounded(best.expect("at least one candidate"))
}

/// Lower convex hull of `{(n, v(aₙ))}` over the stored nonzero terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub vertices: Vec<(i64, i64)>,
    /// Set when the tail bound admits points below the rightward extension
    /// of the hull.
    pub provisional: bool,
}

/// One edge of a Newton polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: (i64, i64),
    pub end: (i64, i64),
    pub slope: BigRational,
    pub width: i64,
}

impl NewtonPolygon {
    pub fn segments(&self) -> Vec<Segment> {
        self.vertices
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                Segment {
                    start: a,
                    end: b,
                    slope: BigRational::new((b.1 - a.1).into(), (b.0 - a.0).into()),
                    width: b.0 - a.0,
                }
            })
            .collect()
    }

    pub fn slopes(&self) -> Vec<BigRational> {
        self.segments().into_iter().map(|s| s.slope).collect()
    }

    /// Total horizontal width.
    pub fn width(&self) -> i64 {
        match (self.vertices.first(), self.vertices.last()) {
            (Some(a), Some(b)) => b.0 - a.0,
            _ => 0,
        }
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.vertices.iter().map(|(n, v)| format!("({n},{v})")).collect();
        write!(f, "{}", pts.join(" -- "))?;
        if self.provisional {
            f.write_str(" [provisional]")?;
        }
        Ok(())
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

pub fn newton_polygon(f: &PadicSeries) -> Result<NewtonPolygon, SeriesError> {
    let points: Vec<(i64, i64)> = f
        .terms()
        .map(|(n, c)| (n, c.valuation().finite().expect("nonzero")))
        .collect();
    if points.is_empty() {
        return Err(SeriesError::AllZero);
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    let provisional = if f.tail.is_exact() {
        false
    } else {
        let last = *hull.last().expect("nonempty");
        let slope = if hull.len() >= 2 {
            let prev = hull[hull.len() - 2];
            BigRational::new((last.1 - prev.1).into(), (last.0 - prev.0).into())
        } else {
            BigRational::zero()
        };
        // Tail points (n, w) lie on or below the line through `last` with
        // this slope iff w - slope·n ≤ last.1 - slope·last.0.
        let threshold = BigRational::from_integer(last.1.into()) - &slope * BigRational::from_integer(last.0.into());
        match f.tail_estimate(&(-slope)) {
            TailEstimate::Absent => false,
            TailEstimate::Bounded(m) => m <= threshold,
            TailEstimate::Unbounded => true,
        }
    };
    Ok(NewtonPolygon { vertices: hull, provisional })
}

/// Interval of valuations, used to select zeros by the valuation of their
/// coordinate. An upper end of `None` means `+∞` (always open).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationWindow {
    pub lo: BigRational,
    pub hi: Option<BigRational>,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl ValuationWindow {
    pub fn new(lo: BigRational, hi: Option<BigRational>, lo_open: bool, hi_open: bool) -> Result<Self, SeriesError> {
        match &hi {
            None if !hi_open => return Err(SeriesError::WindowError("+inf end must be open".into())),
            Some(h) if *h < lo => return Err(SeriesError::WindowError(format!("lo {lo} > hi {h}"))),
            Some(h) if *h == lo && (lo_open || hi_open) => {
                return Err(SeriesError::WindowError(format!("degenerate window at {lo} must be closed")))
            }
            _ => {}
        }
        Ok(ValuationWindow { lo, hi, lo_open, hi_open })
    }

    pub fn open(lo: BigRational, hi: Option<BigRational>) -> Result<Self, SeriesError> {
        Self::new(lo, hi, true, true)
    }

    pub fn closed(lo: BigRational, hi: BigRational) -> Result<Self, SeriesError> {
        Self::new(lo, Some(hi), false, false)
    }

    pub fn contains(&self, s: &BigRational) -> bool {
        let above = if self.lo_open { *s > self.lo } else { *s >= self.lo };
        let below = match &self.hi {
            None => true,
            Some(h) => {
                if self.hi_open {
                    s < h
                } else {
                    s <= h
                }
            }
        };
        above && below
    }

    /// Parses interval notation such as `(0,2)`, `[1,3)` or `(0,inf)`.
    pub fn parse(text: &str) -> Result<Self, SeriesError> {
        let t = text.trim();
        let bad = || SeriesError::WindowError(format!("cannot parse window {text:?}"));
        if t.len() < 2 {
            return Err(bad());
        }
        let lo_open = match t.chars().next() {
            Some('(') => true,
            Some('[') => false,
            _ => return Err(bad()),
        };
        let hi_open = match t.chars().last() {
            Some(')') => true,
            Some(']') => false,
            _ => return Err(bad()),
        };
        let inner = &t[1..t.len() - 1];
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let lo = crate::parse_rational(a).ok_or_else(bad)?;
        let b = b.trim();
        let hi = if b == "inf" || b == "+inf" || b == "∞" {
            None
        } else {
            Some(crate::parse_rational(b).ok_or_else(bad)?)
        };
        Self::new(lo, hi, lo_open, hi_open)
    }
}

impl fmt::Display for ValuationWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_open { '(' } else { '[' };
        let r = if self.hi_open { ')' } else { ']' };
        match &self.hi {
            Some(h) => write!(f, "{l}{},{h}{r}", self.lo),
            None => write!(f, "{l}{},inf{r}", self.lo),
        }
    }
}

/// Number of zeros over `C_p`, with multiplicity, whose coordinate valuation
/// lies in the window.
pub fn count_zeros(f: &PadicSeries, w: &ValuationWindow) -> Result<u64, SeriesError> {
    let polygon = newton_polygon(f)?;
    if !f.tail.is_exact() {
        // F(s) - tail is nondecreasing in s, so certifying the lower end
        // certifies the whole window.
        f.gauss_valuation(&w.lo)?;
    }
    let mut count = 0u64;
    for seg in polygon.segments() {
        let root_valuation = -seg.slope.clone();
        if w.contains(&root_valuation) {
            count += seg.width as u64;
        }
    }
    Ok(count)
}

/// Antiderivative of `ω = Σ aₙ tⁿ dt/t`, namely `Σ_{n≠0} (aₙ/n) tⁿ`.
///
/// Requires `a₀ = 0`. Division by `n` costs at most `⌊log_p n⌋` in
/// valuation, which is added to the tail's logarithmic loss.
pub fn antiderivative(omega: &PadicSeries) -> Result<PadicSeries, SeriesError> {
    let p = omega.prime;
    match omega.coeff(0) {
        Some(c) if !c.is_zero() => return Err(SeriesError::NonExactResidue(c.to_string())),
        None if omega.end() <= 0 && !omega.tail.is_exact() => {
            return Err(SeriesError::NonExactResidue("unknown (in truncated tail)".into()))
        }
        _ => {}
    }
    let coeffs = omega
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = omega.low + i as i64;
            if n == 0 {
                Ok(PadicNumber::exact_zero(p))
            } else {
                c.scale(&BigRational::new(BigInt::one(), n.into()))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut tail = omega.tail;
    if !tail.is_exact() {
        tail.log_loss += 1;
    }
    Ok(PadicSeries {
        prime: p,
        low: omega.low,
        coeffs,
        tail,
    })
}

/// `N_p(r, N₀)`: the smallest `N ≥ 1` with `r(n − N₀) > ⌊log_p n⌋` for all
/// `n ≥ N`.
///
/// Solved block by block: the failing `n` with `⌊log_p n⌋ = k` are those in
/// `[p^k, p^{k+1})` with `n ≤ N₀ + k/r`, so `N` is one more than the largest
/// of them. Blocks are scanned until `p^k > N₀ + k/r` and `p^k(p − 1) ≥ 1/r`,
/// after which `p^k − k/r` only grows; this takes `O(log_p(N₀/r))` steps even
/// for astronomically small `r`.
pub fn compute_np(p: u64, r: &BigRational, n0: i64) -> Result<BigInt, SeriesError> {
    check_prime(p)?;
    if !r.is_positive() {
        return Err(SeriesError::NonpositiveRate(r.to_string()));
    }
    let inv_r = r.recip();
    let n0q = BigRational::from_integer(n0.into());
    let pb = BigInt::from(p);
    let mut pk = BigInt::one();
    let mut best: Option<BigInt> = None;
    let mut k: u64 = 0;
    loop {
        let limit = &n0q + &inv_r * BigRational::from_integer(BigInt::from(k));
        let pk_q = BigRational::from_integer(pk.clone());
        let step = BigRational::from_integer(&pk * (&pb - 1u32));
        if k >= 1 && pk_q > limit && step >= inv_r {
            break;
        }
        let top = (&pk * &pb - 1u32).min(limit.floor().to_integer());
        if top >= pk {
            best = Some(match best {
                Some(b) if b >= top => b,
                _ => top,
            });
        }
        k += 1;
        pk *= &pb;
    }
    Ok(best.map(|b| b + 1u32).unwrap_or_else(BigInt::one))
}

/// Result of checking the annular slope bound `d_v F(z) ≤ N_p(r − a, N₀)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnularSlopeReport {
    /// Outgoing slope of `G = -log‖ω‖` at the outer end.
    pub n0: i64,
    /// Slope of `F = -log|f|` at the interior point, toward the inner end.
    pub interior_slope: i64,
    pub bound: BigInt,
    pub holds: bool,
}

/// Checks the slope bound on an annulus `{0 < v(t) < r}` for an exact form
/// `ω = Σ aₙ tⁿ dt/t` and its antiderivative `f`.
///
/// The outer end `x` is `v(t) → 0`; `N₀` is the slope of `-log‖ω‖` leaving
/// `x`. The interior point `z` sits at distance `r − a` from `x`, and the
/// slope of `-log|f|` at `z` toward the inner end is compared with
/// `N_p(r − a, N₀)`.
pub fn annular_slope_bound_check(
    omega: &PadicSeries,
    r: &BigRational,
    a: &BigRational,
) -> Result<AnnularSlopeReport, SeriesError> {
    if !a.is_positive() || a >= r {
        return Err(SeriesError::WindowError(format!("need 0 < a < r, got a = {a}, r = {r}")));
    }
    let f = antiderivative(omega)?;
    let (_, n0, _) = omega.gauss_valuation(&BigRational::zero())?;
    let depth = r - a;
    let (_, interior_slope, _) = f.gauss_valuation(&depth)?;
    let bound = compute_np(omega.prime, &depth, n0)?;
    let holds = BigInt::from(interior_slope) <= bound;
    Ok(AnnularSlopeReport {
        n0,
        interior_slope,
        bound,
        holds,
    })
}

/// Zero count of the antiderivative on an annulus shrunk by `a` at both ends,
/// together with the two-ended Rolle bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusRolleReport {
    pub zeros: u64,
    /// Slope of `-log‖ω‖` leaving the outer end.
    pub n0_outer: i64,
    /// Slope of `-log‖ω‖` leaving the inner end.
    pub n0_inner: i64,
    /// `N_p(a, N₀_outer) + N_p(a, N₀_inner)`.
    pub bound: BigInt,
}

/// Counts zeros of `∫ω` with valuation in `[a, r − a]` and bounds them by the
/// per-end correction terms.
pub fn annulus_rolle(omega: &PadicSeries, r: &BigRational, a: &BigRational) -> Result<AnnulusRolleReport, SeriesError> {
    if !a.is_positive() || a + a > *r {
        return Err(SeriesError::WindowError(format!("need 0 < a ≤ r/2, got a = {a}, r = {r}")));
    }
    let f = antiderivative(omega)?;
    let inner = r - a;
    let window = ValuationWindow::closed(a.clone(), inner)?;
    let zeros = count_zeros(&f, &window)?;
    let (_, n0_outer, _) = omega.gauss_valuation(&BigRational::zero())?;
    let (_, _, top) = omega.gauss_valuation(r)?;
    let n0_inner = -top;
    let bound = compute_np(omega.prime, a, n0_outer)? + compute_np(omega.prime, a, n0_inner)?;
    Ok(AnnulusRolleReport {
        zeros,
        n0_outer,
        n0_inner,
        bound,
    })
}

/// JSON literal `{"prime": p, "low": n₀, "coeffs": ["a/b", ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesLiteral {
    pub prime: u64,
    pub low: i64,
    pub coeffs: Vec<String>,
}

impl SeriesLiteral {
    pub fn to_series(&self) -> Result<PadicSeries, SeriesError> {
        let qs = self
            .coeffs
            .iter()
            .map(|c| {
                crate::parse_rational(c).ok_or_else(|| SeriesError::WindowError(format!("bad coefficient {c:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        PadicSeries::from_rationals(self.prime, self.low, &qs)
    }

    pub fn from_series(f: &PadicSeries) -> Self {
        SeriesLiteral {
            prime: f.prime,
            low: f.low,
            coeffs: f.coeffs.iter().map(|c| c.to_rational().to_string()).collect(),
        }
    }
}

/// Smallest `N` by direct scan of the definition, for cross-checking small
/// cases. `horizon` caps the scan.
pub fn compute_np_by_scan(p: u64, r: &BigRational, n0: i64, horizon: i64) -> i64 {
    use num_traits::ToPrimitive;
    let a = r.numer().to_i128().expect("small rate");
    let b = r.denom().to_i128().expect("small rate");
    let mut last_fail = 0;
    for n in 1..=horizon {
        if a * (n - n0) as i128 <= b * floor_log(n, p) as i128 {
            last_fail = n;
        }
    }
    last_fail + 1
}
