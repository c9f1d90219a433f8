//! Effective Chabauty–Coleman machinery and tropical potential theory.
//!
//! The crate is organised by subsystem:
//!
//! * [`padic`]: exact `Q_p` arithmetic, Legendre symbols, Hensel square roots.
//! * [`series`]: truncated Laurent series, Newton polygons, certified zero
//!   counts and the `N_p(r, N₀)` correction to p-adic Rolle.
//! * [`metric_graph`]: vertex-weighted metric graphs, tropical meromorphic
//!   functions, divisors, the canonical divisor and slope bounds.
//! * [`trop_jacobian`]: period lattices, the tropical Abel–Jacobi map and
//!   principality of degree-zero divisors.
//! * [`chipfiring`]: reduced divisors, Baker–Norine rank, Riemann–Roch and
//!   Clifford checks on finite multigraphs.
//! * [`chabauty`]: hyperelliptic curves, point counts, residue-disc
//!   expansions and tiny integrals.
//! * [`bounds`]: closed-form uniform bounds with hypothesis ledgers.
//! * [`cli`]: the JSON front end used by the `tropchab` binary.

pub mod bounds;
pub mod chabauty;
pub mod chipfiring;
pub mod cli;
pub mod fixtures;
pub mod json;
pub mod linalg;
pub mod metric_graph;
pub mod padic;
pub mod series;
pub mod trop_jacobian;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Parses `"a/b"` or `"a"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    s.trim().parse::<BigRational>().ok()
}

/// Shorthand for small rationals, mostly used in tests and examples.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
