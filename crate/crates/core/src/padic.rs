//! Exact arithmetic in `Q_p` at finite precision.
//!
//! A [`PadicNumber`] is an exact rational written as `unit * p^valuation`
//! with `unit` coprime to `p`. The precision is bookkeeping only: it records
//! how many p-adic digits of the unit are actually known, so that callers can
//! refuse to report digits that were never computed.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Largest prime accepted by [`check_prime`].
pub const PRIME_LIMIT: u64 = 1_000_000;

/// Precision given to exactly known values.
pub const EXACT_PRECISION: i64 = 1 << 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported limit {PRIME_LIMIT}")]
    PrimeTooLarge(u64),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision must be at least 1, got {0}")]
    InvalidPrecision(i64),
    #[error("operation requires an odd prime, got {0}")]
    EvenPrime(u64),
    #[error("unit is not a square modulo {0}")]
    NonResidue(u64),
    #[error("odd valuation {0} has no square root in Q_p")]
    OddValuation(i64),
    #[error("branch {branch} does not square to the unit modulo {prime}")]
    BranchMismatch { branch: u64, prime: u64 },
}

/// Valuation in `Z ∪ {+∞}`. `Finite` sorts below `Infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

/// Trial-division primality check, restricted to `p < PRIME_LIMIT`.
pub fn check_prime(p: u64) -> Result<(), PadicError> {
    if p >= PRIME_LIMIT {
        return Err(PadicError::PrimeTooLarge(p));
    }
    if p < 2 {
        return Err(PadicError::NotPrime(p));
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return Err(PadicError::NotPrime(p));
        }
        d += 1;
    }
    Ok(())
}

pub fn is_prime(p: u64) -> bool {
    check_prime(p).is_ok()
}

/// Splits a nonzero integer as `p^v * rest` with `p ∤ rest`.
pub fn split_valuation(n: &BigInt, p: u64) -> (i64, BigInt) {
    assert!(!n.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&pb);
        if !r.is_zero() {
            return (v, rest);
        }
        rest = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn rational_valuation(q: &BigRational, p: u64) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinity;
    }
    let (vn, _) = split_valuation(q.numer(), p);
    let (vd, _) = split_valuation(q.denom(), p);
    Valuation::Finite(vn - vd)
}

/// `⌊log_p |n|⌋` for `n ≠ 0`, and 0 for `n = 0`.
pub fn floor_log(n: i64, p: u64) -> i64 {
    let mut n = n.unsigned_abs();
    let mut k = 0;
    while n >= p {
        n /= p;
        k += 1;
    }
    k
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Image of a p-integral rational in `Z/mZ` where `m` is a power of `p`.
pub fn reduce_rational(q: &BigRational, m: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse(q.denom(), m)?;
    Some((q.numer() * inv).mod_floor(m))
}

fn pow_mod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc: u128 = 1 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Element of the prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FiniteFieldElement {
    prime: u64,
    residue: u64,
}

impl FiniteFieldElement {
    pub fn new(prime: u64, value: i64) -> Self {
        let r = value.rem_euclid(prime as i64) as u64;
        FiniteFieldElement { prime, residue: r }
    }

    pub fn from_bigint(prime: u64, value: &BigInt) -> Self {
        let r = value.mod_floor(&BigInt::from(prime));
        FiniteFieldElement {
            prime,
            residue: r.to_u64().expect("residue fits"),
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }
}

/// Legendre symbol via Euler's criterion.
pub fn legendre(a: FiniteFieldElement) -> Result<i8, PadicError> {
    let p = a.prime;
    if p == 2 {
        return Err(PadicError::EvenPrime(p));
    }
    if a.residue == 0 {
        return Ok(0);
    }
    match pow_mod_u64(a.residue, (p - 1) / 2, p) {
        1 => Ok(1),
        r if r == p - 1 => Ok(-1),
        _ => Err(PadicError::NotPrime(p)),
    }
}

/// An element of `Q_p` known to finite precision.
///
/// For nonzero values `precision` counts the known digits of the unit
/// (relative precision). For zero it is the absolute precision: the value is
/// known to vanish modulo `p^precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNumber {
    prime: u64,
    unit: BigRational,
    valuation: i64,
    precision: i64,
}

impl PadicNumber {
    pub fn from_rational(prime: u64, value: BigRational, precision: i64) -> Result<Self, PadicError> {
        check_prime(prime)?;
        if value.is_zero() {
            return Ok(Self::zero(prime, precision));
        }
        if precision < 1 {
            return Err(PadicError::InvalidPrecision(precision));
        }
        let (vn, un) = split_valuation(value.numer(), prime);
        let (vd, ud) = split_valuation(value.denom(), prime);
        Ok(PadicNumber {
            prime,
            unit: BigRational::new(un, ud),
            valuation: vn - vd,
            precision: precision.min(EXACT_PRECISION),
        })
    }

    pub fn exact(prime: u64, value: BigRational) -> Result<Self, PadicError> {
        Self::from_rational(prime, value, EXACT_PRECISION)
    }

    pub fn from_integer(prime: u64, value: i64) -> Result<Self, PadicError> {
        Self::exact(prime, BigRational::from_integer(value.into()))
    }

    /// Zero known modulo `p^absolute_precision`.
    pub fn zero(prime: u64, absolute_precision: i64) -> Self {
        PadicNumber {
            prime,
            unit: BigRational::zero(),
            valuation: 0,
            precision: absolute_precision.min(EXACT_PRECISION),
        }
    }

    pub fn exact_zero(prime: u64) -> Self {
        Self::zero(prime, EXACT_PRECISION)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn unit(&self) -> &BigRational {
        &self.unit
    }

    pub fn valuation(&self) -> Valuation {
        if self.unit.is_zero() {
            Valuation::Infinity
        } else {
            Valuation::Finite(self.valuation)
        }
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.precision >= EXACT_PRECISION
    }

    /// Number of p-adic digits known counted from `p^0`.
    pub fn absolute_precision(&self) -> i64 {
        if self.is_zero() {
            self.precision
        } else {
            self.valuation.saturating_add(self.precision).min(EXACT_PRECISION)
        }
    }

    /// The exact rational representative `unit * p^valuation`.
    pub fn to_rational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let pb = BigInt::from(self.prime);
        let scale = num_traits::pow(pb, self.valuation.unsigned_abs() as usize);
        if self.valuation >= 0 {
            &self.unit * BigRational::from_integer(scale)
        } else {
            &self.unit / BigRational::from_integer(scale)
        }
    }

    /// Caps the absolute precision at `abs`, collapsing to zero when no
    /// digit of the unit survives.
    pub fn with_absolute_precision_cap(&self, abs: i64) -> Self {
        if self.is_zero() {
            return Self::zero(self.prime, self.precision.min(abs));
        }
        let rel = abs.saturating_sub(self.valuation);
        if rel < 1 {
            return Self::zero(self.prime, abs);
        }
        PadicNumber {
            precision: self.precision.min(rel),
            ..self.clone()
        }
    }

    /// The known digits as an integer modulo `p^absolute_precision`, for
    /// values with nonnegative valuation.
    pub fn residue_mod(&self, digits: u32) -> Option<BigInt> {
        let m = num_traits::pow(BigInt::from(self.prime), digits as usize);
        reduce_rational(&self.to_rational(), &m)
    }

    fn same_prime(&self, other: &PadicNumber) -> Result<(), PadicError> {
        if self.prime != other.prime {
            Err(PadicError::PrimeMismatch(self.prime, other.prime))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &PadicNumber) -> Result<Self, PadicError> {
        self.same_prime(other)?;
        let abs = self.absolute_precision().min(other.absolute_precision());
        let sum = self.to_rational() + other.to_rational();
        if sum.is_zero() {
            return Ok(Self::zero(self.prime, abs));
        }
        let exact = Self::from_rational(self.prime, sum, EXACT_PRECISION)?;
        Ok(exact.with_absolute_precision_cap(abs))
    }

    pub fn sub(&self, other: &PadicNumber) -> Result<Self, PadicError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PadicNumber {
            unit: -self.unit.clone(),
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &PadicNumber) -> Result<Self, PadicError> {
        self.same_prime(other)?;
        match (self.is_zero(), other.is_zero()) {
            (true, true) => {
                let abs = self.precision.saturating_add(other.precision);
                Ok(Self::zero(self.prime, abs))
            }
            (true, false) | (false, true) => {
                let (z, x) = if self.is_zero() { (self, other) } else { (other, self) };
                Ok(Self::zero(self.prime, z.precision.saturating_add(x.valuation)))
            }
            (false, false) => Ok(PadicNumber {
                prime: self.prime,
                unit: &self.unit * &other.unit,
                valuation: self.valuation + other.valuation,
                precision: self.precision.min(other.precision),
            }),
        }
    }

    pub fn inv(&self) -> Result<Self, PadicError> {
        if self.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        Ok(PadicNumber {
            prime: self.prime,
            unit: self.unit.recip(),
            valuation: -self.valuation,
            precision: self.precision,
        })
    }

    pub fn div(&self, other: &PadicNumber) -> Result<Self, PadicError> {
        self.same_prime(other)?;
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = PadicNumber::exact(self.prime, BigRational::one()).expect("prime checked");
        for _ in 0..n {
            acc = acc.mul(self).expect("same prime");
        }
        acc
    }

    /// Multiplies by an exact rational.
    pub fn scale(&self, q: &BigRational) -> Result<Self, PadicError> {
        self.mul(&PadicNumber::exact(self.prime, q.clone())?)
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.to_rational())
        } else {
            write!(f, "{} + O({}^{})", self.to_rational(), self.prime, self.absolute_precision())
        }
    }
}

/// Compares valuations of two p-adic numbers.
pub fn compare_valuation(a: &PadicNumber, b: &PadicNumber) -> Ordering {
    a.valuation().cmp(&b.valuation())
}

/// Square root by Newton iteration on the unit, doubling the number of
/// correct digits per step.
///
/// `branch` selects the root: the result is `s * p^(v/2)` with
/// `s ≡ branch (mod p)`.
pub fn hensel_sqrt(a: &PadicNumber, branch: FiniteFieldElement, digits: u32) -> Result<PadicNumber, PadicError> {
    let p = a.prime();
    if p == 2 {
        return Err(PadicError::EvenPrime(p));
    }
    if branch.prime() != p {
        return Err(PadicError::PrimeMismatch(p, branch.prime()));
    }
    if digits < 1 {
        return Err(PadicError::InvalidPrecision(digits as i64));
    }
    if a.is_zero() {
        return Ok(PadicNumber::zero(p, a.absolute_precision() / 2));
    }
    let v = a.valuation;
    if v % 2 != 0 {
        return Err(PadicError::OddValuation(v));
    }
    let pb = BigInt::from(p);
    let unit_mod_p = reduce_rational(a.unit(), &pb).expect("unit is p-integral");
    let u = FiniteFieldElement::from_bigint(p, &unit_mod_p);
    if legendre(u)? != 1 {
        return Err(PadicError::NonResidue(p));
    }
    let b = branch.residue();
    if b == 0 || (b as u128 * b as u128 % p as u128) as u64 != u.residue() {
        return Err(PadicError::BranchMismatch { branch: b, prime: p });
    }

    let modulus = num_traits::pow(pb.clone(), digits as usize);
    let target = reduce_rational(a.unit(), &modulus).expect("unit is p-integral");
    let mut root = BigInt::from(b);
    let mut known = 1u32;
    while known < digits {
        known = (known * 2).min(digits);
        let m = num_traits::pow(pb.clone(), known as usize);
        let two_root_inv = mod_inverse(&(&root * 2), &m).expect("2s is a unit");
        let err = (&root * &root - &target).mod_floor(&m);
        root = (&root - err * two_root_inv).mod_floor(&m);
    }
    root = root.mod_floor(&modulus);
    debug_assert!(((&root * &root) - &target).mod_floor(&modulus).is_zero());
    let rel = (digits as i64).min(a.precision());
    PadicNumber::from_rational(p, BigRational::from_integer(root), rel).map(|s| {
        let shift = num_traits::pow(pb, (v / 2).unsigned_abs() as usize);
        let shifted = if v >= 0 {
            s.to_rational() * BigRational::from_integer(shift)
        } else {
            s.to_rational() / BigRational::from_integer(shift)
        };
        PadicNumber::from_rational(p, shifted, rel).expect("nonzero root")
    })
}

/// `true` when `x` is a nonzero square in `F_p`.
pub fn is_square_mod(x: &BigInt, p: u64) -> Result<bool, PadicError> {
    Ok(legendre(FiniteFieldElement::from_bigint(p, x))? == 1)
}

/// Sign helper used by point counting: `χ(x)` for an integer `x`.
pub fn chi(x: &BigInt, p: u64) -> Result<i8, PadicError> {
    legendre(FiniteFieldElement::from_bigint(p, x))
}
