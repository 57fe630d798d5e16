//! Level data for the Bershadsky-Polyakov algebra.
//!
//! A level is a rational number `k != -3`, frequently presented through its
//! shifted form `k + 3 = u/v` with coprime positive integers `u`, `v`.  The
//! [`Level`] type validates either presentation and exposes the derived
//! structure constants exactly:
//!
//! - `kappa = (2k+3)/3`, the square of the norm of the weight-one current;
//! - `c_bp`, the central charge of the Bershadsky-Polyakov algebra;
//! - `c_w3`, the central charge of the commuting weight-three factor;
//! - `c_pi = 2 + 24*kappa`, the central charge of the half-lattice factor;
//! - `a_k`, the normalisation constant in the weight-three self-bracket.
//!
//! Each constant is also available symbolically, as a [`RatFunc`] over the
//! level symbol, so that identities between them can be checked once and for
//! all rather than level by level.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::scalars::{RatFunc, Rational, UniPoly};

/// Errors raised while validating level data.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LevelError {
    /// The critical level `k = -3` is excluded from every construction.
    #[error("level k = -3 is excluded")]
    CriticalLevel,
    /// A shifted-level pair must be coprime.
    #[error("shifted-level pair ({0}, {1}) is not coprime")]
    NonCoprimePair(u64, u64),
    /// A shifted-level pair must satisfy `u >= 2` and `v >= 1`.
    #[error("shifted-level pair ({0}, {1}) is out of range (need u >= 2, v >= 1)")]
    PairOutOfRange(u64, u64),
}

/// A non-critical level of the Bershadsky-Polyakov algebra.
///
/// Values are constructed from a shifted-level pair via [`Level::from_pair`]
/// or from a raw rational via [`Level::from_k`]; both reject the critical
/// level `k = -3`.  All derived constants are exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Level {
    k: Rational,
}

impl Level {
    /// Builds the level with `k + 3 = u/v`.
    ///
    /// # Errors
    ///
    /// Rejects pairs with `u < 2` or `v < 1` and non-coprime pairs.
    pub fn from_pair(u: u64, v: u64) -> Result<Self, LevelError> {
        if u < 2 || v < 1 {
            return Err(LevelError::PairOutOfRange(u, v));
        }
        if num_integer::gcd(u, v) != 1 {
            return Err(LevelError::NonCoprimePair(u, v));
        }
        let shifted = Rational::from_big(BigInt::from(u), BigInt::from(v))
            .expect("v >= 1 rules out a zero denominator");
        Ok(Level {
            k: shifted - Rational::from(3),
        })
    }

    /// Builds the level directly from a rational `k`.
    ///
    /// # Errors
    ///
    /// Rejects the critical level `k = -3`.
    pub fn from_k(k: Rational) -> Result<Self, LevelError> {
        if k == Rational::from(-3) {
            return Err(LevelError::CriticalLevel);
        }
        Ok(Level { k })
    }

    /// The level `k` itself.
    pub fn k(&self) -> &Rational {
        &self.k
    }

    /// The shifted level `k + 3`.
    pub fn shifted(&self) -> Rational {
        &self.k + &Rational::from(3)
    }

    /// The reduced pair `(u, v)` with `k + 3 = u/v`, when `k + 3 > 0` and
    /// both entries fit in a `u64`.
    pub fn pair(&self) -> Option<(u64, u64)> {
        let s = self.shifted();
        if !s.is_positive() {
            return None;
        }
        Some((s.numer().to_u64()?, s.denom().to_u64()?))
    }

    /// Whether the level is admissible: `k + 3 = u/v` with `u >= 3`.
    pub fn is_admissible(&self) -> bool {
        let s = self.shifted();
        s.is_positive() && s.numer() >= &BigInt::from(3)
    }

    /// Whether the level is nondegenerate: `k + 3 = u/v` with `u, v >= 3`.
    pub fn is_nondegenerate(&self) -> bool {
        let s = self.shifted();
        s.is_positive() && s.numer() >= &BigInt::from(3) && s.denom() >= &BigInt::from(3)
    }

    /// Whether the inverse-reduction embedding exists at this level.
    ///
    /// The embedding is unavailable exactly when `k + 3 = u/v` with `u >= 2`
    /// and `v` equal to 1 or 2.
    pub fn embedding_exists(&self) -> bool {
        let s = self.shifted();
        let blocked =
            s.is_positive() && s.numer() >= &BigInt::from(2) && s.denom() <= &BigInt::from(2);
        !blocked
    }

    /// `kappa = (2k+3)/3`.
    pub fn kappa(&self) -> Rational {
        self.eval(&kappa_sym())
    }

    /// Central charge of the Bershadsky-Polyakov algebra at this level.
    pub fn c_bp(&self) -> Rational {
        self.eval(&c_bp_sym())
    }

    /// Central charge of the commuting weight-three factor.
    pub fn c_w3(&self) -> Rational {
        self.eval(&c_w3_sym())
    }

    /// Central charge of the half-lattice factor.
    pub fn c_pi(&self) -> Rational {
        self.eval(&c_pi_sym())
    }

    /// Normalisation constant of the weight-three self-bracket.
    pub fn a_k(&self) -> Rational {
        self.eval(&a_k_sym())
    }

    /// Square of the rescaling `alpha_k = (k+3)^(3/2) / sqrt(3)` applied to
    /// weight-three eigenvalues, namely `(k+3)^3 / 3`.
    pub fn alpha_sq(&self) -> Rational {
        let s = self.shifted();
        &(&s * &s) * &s / Rational::from(3)
    }

    fn eval(&self, f: &RatFunc) -> Rational {
        f.eval(&self.k)
            .expect("derived level constants have poles only at k = -3")
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.pair() {
            Some((u, v)) => write!(f, "k = {} (u = {u}, v = {v})", self.k),
            None => write!(f, "k = {}", self.k),
        }
    }
}

/// The linear polynomial `a*k + b` in the level symbol.
pub(crate) fn k_linear(a: i64, b: i64) -> UniPoly {
    UniPoly::new(vec![Rational::from(b), Rational::from(a)])
}

fn ratio(num: UniPoly, den: UniPoly) -> RatFunc {
    RatFunc::new(num, den).expect("denominator is a fixed nonzero polynomial")
}

/// `kappa = (2k+3)/3` as a rational function of the level symbol.
pub fn kappa_sym() -> RatFunc {
    ratio(k_linear(2, 3), UniPoly::constant(Rational::from(3)))
}

/// `c_bp = -4(k+1)(2k+3)/(k+3)` as a rational function of the level symbol.
pub fn c_bp_sym() -> RatFunc {
    let num = (&k_linear(1, 1) * &k_linear(2, 3)).scale(&Rational::from(-4));
    ratio(num, k_linear(1, 3))
}

/// `c_w3 = -2(3k+5)(4k+9)/(k+3)` as a rational function of the level symbol.
pub fn c_w3_sym() -> RatFunc {
    let num = (&k_linear(3, 5) * &k_linear(4, 9)).scale(&Rational::from(-2));
    ratio(num, k_linear(1, 3))
}

/// `c_pi = 2 + 24*kappa = 16k + 26` as a rational function of the level symbol.
pub fn c_pi_sym() -> RatFunc {
    RatFunc::from_poly(k_linear(16, 26))
}

/// `a_k = -(3k+4)(5k+12)/(2(k+3))` as a rational function of the level symbol.
pub fn a_k_sym() -> RatFunc {
    let half = Rational::new(-1, 2).expect("nonzero denominator");
    let num = (&k_linear(3, 4) * &k_linear(5, 12)).scale(&half);
    ratio(num, k_linear(1, 3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn pair_2_3_constants() {
        let level = Level::from_pair(2, 3).unwrap();
        assert_eq!(level.k(), &rat!(-7, 3));
        assert_eq!(level.kappa(), rat!(-5, 9));
        assert_eq!(level.c_bp(), rat!(-40, 3));
        assert_eq!(level.c_w3(), rat!(-2));
        assert_eq!(level.c_pi(), rat!(-34, 3));
        assert_eq!(&level.c_pi() + &level.c_w3(), level.c_bp());
    }

    #[test]
    fn pair_3_2_constants() {
        let level = Level::from_pair(3, 2).unwrap();
        assert_eq!(level.k(), &rat!(-3, 2));
        assert_eq!(level.kappa(), rat!(0));
    }

    #[test]
    fn flags_across_small_pairs() {
        let cases = [
            // (u, v, admissible, nondegenerate, embedding)
            (2u64, 3u64, false, false, true),
            (2, 1, false, false, false),
            (3, 1, true, false, false),
            (3, 2, true, false, false),
            (4, 3, true, true, true),
            (5, 3, true, true, true),
            (5, 4, true, true, true),
        ];
        for (u, v, adm, nondeg, emb) in cases {
            let level = Level::from_pair(u, v).unwrap();
            assert_eq!(level.is_admissible(), adm, "admissible flag at ({u},{v})");
            assert_eq!(
                level.is_nondegenerate(),
                nondeg,
                "nondegenerate flag at ({u},{v})"
            );
            assert_eq!(
                level.embedding_exists(),
                emb,
                "embedding flag at ({u},{v})"
            );
        }
    }

    #[test]
    fn raw_level_recovers_pair_and_flags() {
        let level = Level::from_k(rat!(-7, 3)).unwrap();
        assert_eq!(level.pair(), Some((2, 3)));
        assert!(level.embedding_exists());

        let below = Level::from_k(rat!(-4)).unwrap();
        assert_eq!(below.pair(), None);
        assert!(!below.is_admissible());
        assert!(below.embedding_exists());

        let tiny = Level::from_k(rat!(-8, 3)).unwrap();
        assert_eq!(tiny.pair(), Some((1, 3)));
        assert!(!tiny.is_admissible());
        assert!(tiny.embedding_exists());
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert_eq!(Level::from_k(rat!(-3)), Err(LevelError::CriticalLevel));
        assert_eq!(Level::from_pair(2, 4), Err(LevelError::NonCoprimePair(2, 4)));
        assert_eq!(Level::from_pair(1, 1), Err(LevelError::PairOutOfRange(1, 1)));
        assert_eq!(Level::from_pair(4, 0), Err(LevelError::PairOutOfRange(4, 0)));
    }

    #[test]
    fn central_charge_identity_symbolic() {
        let lhs = &c_pi_sym() + &c_w3_sym();
        assert_eq!(lhs, c_bp_sym());
    }

    #[test]
    fn alpha_sq_matches_shifted_cube() {
        let level = Level::from_pair(2, 3).unwrap();
        assert_eq!(level.alpha_sq(), rat!(8, 81));
    }
}
