//! Stability of permutation solutions: homomorphism stability of finite
//! presentations, covering stability of polygonal complexes, and cocycle
//! stability with permutation coefficients.
//!
//! The crate is organized bottom-up:
//!
//! * [`perm`]: permutations, signed words and the Hamming distance with errors.
//! * [`graph`]: Bass–Serre graphs, paths, combinatorial maps, coverings and
//!   edit distance between labeled graphs.
//! * [`complex`]: polygonal complexes, presentations and weighting systems.
//! * [`cochain`]: permutation-valued cochains, coboundaries and the
//!   cochain/covering/presentation correspondences.
//! * [`testers`]: exact local defects and seeded Monte Carlo testers.
//! * [`stability`]: global defects, spectral gaps, Cheeger constants,
//!   cohomology vanishing checks and stability profiles.
//!
//! All distances and defects are exact rationals ([`Rational`]); floating
//! point appears only in spectral computations.

pub mod cochain;
pub mod complex;
pub mod error;
pub mod graph;
pub mod instances;
pub mod io;
pub mod perm;
pub mod stability;
pub mod testers;

pub use error::{Error, Result};

/// Exact rational number used for every distance, defect and probability.
pub type Rational = num::BigRational;

/// Build the rational `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Format a rational the way the CSV and JSON outputs expect: always `p/q`.
pub fn fmt_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `p/q` or a plain integer into a rational.
pub fn parse_ratio(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: num::BigInt = p.parse().map_err(|_| bad())?;
    let q: num::BigInt = q.parse().map_err(|_| bad())?;
    if q == num::BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_formatting() {
        assert_eq!(fmt_ratio(&ratio(2, 4)), "1/2");
        assert_eq!(fmt_ratio(&ratio(0, 7)), "0/1");
        assert_eq!(parse_ratio("3/9").unwrap(), ratio(1, 3));
        assert_eq!(parse_ratio(" 5 ").unwrap(), ratio(5, 1));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
    }
}
