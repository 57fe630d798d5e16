//! Spectra of the minimal models attached to nondegenerate levels, and the
//! singlet spectrum at the shifted level `2/3`.
//!
//! Key items:
//!
//! - [`Triple`] and [`pwlat_enum`], the compositions of a nonnegative integer
//!   into three ordered parts;
//! - [`z3_orbit_reps`], one lexicographically least representative per orbit
//!   of the simultaneous cyclic rotation on pairs of triples;
//! - [`orbit_hw`] and [`j_of_rs`], the exact `(h, w_hat)` weights and the
//!   reducibility roots attached to each orbit;
//! - [`SingletPoint`] and [`sigma23_lookup`], the `(h_lambda, w_hat_lambda)`
//!   curve of the singlet algebra and its exact fibre over a given point.
//!
//! Weight-three eigenvalues are carried in the rescaled form
//! `w_hat = alpha_k * w`, which keeps every table entry rational; for a
//! nondegenerate pair `(u, v)` the closed form is `w_hat = N/(27 v^3)` with an
//! integer product `N` read off the triple data.

use serde::Serialize;
use thiserror::Error;

use crate::scalars::{rational_roots, Rational, UniPoly};

/// Errors raised by spectrum enumeration.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MinmodError {
    /// Spectra are tabulated only for nondegenerate pairs: `u, v >= 3`,
    /// coprime.
    #[error("pair ({0}, {1}) is not nondegenerate (need u, v >= 3 and gcd 1)")]
    NotNondegenerate(u32, u32),
}

/// An ordered triple of nonnegative integers, one part of a spectrum label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Triple(pub [u32; 3]);

impl Triple {
    /// Bundles the three parts.
    pub fn new(t0: u32, t1: u32, t2: u32) -> Self {
        Triple([t0, t1, t2])
    }

    /// The sum of the parts.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// One step of the cyclic rotation: `(t0, t1, t2) -> (t2, t0, t1)`.
    pub fn cycle(&self) -> Self {
        Triple([self.0[2], self.0[0], self.0[1]])
    }
}

impl std::fmt::Display for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// Simultaneous cyclic rotation on a pair of triples.
pub fn cycle_pair(r: &Triple, s: &Triple) -> (Triple, Triple) {
    (r.cycle(), s.cycle())
}

/// An orbit of the simultaneous cyclic action, named by its smallest member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OrbitLabel {
    r: Triple,
    s: Triple,
    size: u8,
}

impl OrbitLabel {
    /// Builds the orbit containing `(r, s)`, canonicalising the stored
    /// representative to the lexicographically least member.
    pub fn from_pair(r: Triple, s: Triple) -> Self {
        let mut best = (r, s);
        let mut size = 3u8;
        let mut cur = (r, s);
        for _ in 0..2 {
            cur = cycle_pair(&cur.0, &cur.1);
            if cur == (r, s) {
                size = 1;
            }
            if cur < best {
                best = cur;
            }
        }
        OrbitLabel {
            r: best.0,
            s: best.1,
            size,
        }
    }

    /// The canonical representative pair.
    pub fn rep(&self) -> (&Triple, &Triple) {
        (&self.r, &self.s)
    }

    /// Number of distinct pairs in the orbit (1 or 3).
    pub fn size(&self) -> u8 {
        self.size
    }

    /// The orbit members starting from the canonical representative.
    pub fn members(&self) -> Vec<(Triple, Triple)> {
        let mut out = vec![(self.r, self.s)];
        let mut cur = cycle_pair(&self.r, &self.s);
        while cur != (self.r, self.s) {
            out.push(cur);
            cur = cycle_pair(&cur.0, &cur.1);
        }
        out
    }
}

impl std::fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.r, self.s)
    }
}

/// All triples of nonnegative integers summing to `ell`, in lexicographic
/// order.  There are `(ell+1)(ell+2)/2` of them.
pub fn pwlat_enum(ell: u32) -> Vec<Triple> {
    let mut out = Vec::with_capacity(((ell + 1) * (ell + 2) / 2) as usize);
    for t0 in 0..=ell {
        for t1 in 0..=(ell - t0) {
            out.push(Triple::new(t0, t1, ell - t0 - t1));
        }
    }
    out
}

fn check_nondegenerate(u: u32, v: u32) -> Result<(), MinmodError> {
    if u < 3 || v < 3 || num_integer::gcd(u, v) != 1 {
        return Err(MinmodError::NotNondegenerate(u, v));
    }
    Ok(())
}

/// One representative per orbit of the simultaneous cyclic action on
/// `pwlat(u-3) x pwlat(v-3)`, sorted by representative.
///
/// # Errors
///
/// Rejects pairs that are not nondegenerate.
pub fn z3_orbit_reps(u: u32, v: u32) -> Result<Vec<OrbitLabel>, MinmodError> {
    check_nondegenerate(u, v)?;
    let mut reps = std::collections::BTreeSet::new();
    for r in pwlat_enum(u - 3) {
        for s in pwlat_enum(v - 3) {
            reps.insert(OrbitLabel::from_pair(r, s));
        }
    }
    Ok(reps.into_iter().collect())
}

/// The exact weight data `(h, w_hat)` of the spectrum member labelled by a
/// pair `(r, s)` at the nondegenerate pair `(u, v)`.
///
/// With `a_i = v(r_i + 1) - u(s_i + 1)`,
/// `h = (a_1 a_2 + a_1^2 + a_2^2 - 3(v-u)^2) / (3uv)`, and with
/// `b_ij = v(r_i - r_j) - u(s_i - s_j)`, `w_hat = b_01 b_02 b_12 / (27 v^3)`.
pub fn weight_of_pair(r: &Triple, s: &Triple, u: u32, v: u32) -> (Rational, Rational) {
    use num_bigint::BigInt;
    let a = |i: usize| -> Rational {
        let val = BigInt::from(v) * (BigInt::from(r.0[i]) + 1)
            - BigInt::from(u) * (BigInt::from(s.0[i]) + 1);
        Rational::from(val)
    };
    let (a1, a2) = (a(1), a(2));
    let diff = Rational::from(BigInt::from(v) - BigInt::from(u));
    let numer = &(&(&(&a1 * &a2) + &(&a1 * &a1)) + &(&a2 * &a2))
        - &(&Rational::from(3) * &(&diff * &diff));
    let h = &numer / &Rational::from(BigInt::from(3u8) * u * v);

    let b = |i: usize, j: usize| -> Rational {
        let val = BigInt::from(v) * (BigInt::from(r.0[i]) - BigInt::from(r.0[j]))
            - BigInt::from(u) * (BigInt::from(s.0[i]) - BigInt::from(s.0[j]));
        Rational::from(val)
    };
    let big_n = &(&b(0, 1) * &b(0, 2)) * &b(1, 2);
    let w_hat = &big_n / &Rational::from(BigInt::from(27u8) * v * v * v);
    (h, w_hat)
}

/// The weight data `(h, w_hat)` of an orbit, read off its canonical
/// representative.  The value does not depend on the representative choice.
pub fn orbit_hw(label: &OrbitLabel, u: u32, v: u32) -> (Rational, Rational) {
    let (r, s) = label.rep();
    weight_of_pair(r, s, u, v)
}

/// The reducibility root `j_{(r,s)} = (r_2 - r_1 - (u/v)(s_2 - s_1 - 1))/3`
/// attached to a spectrum label.
pub fn j_of_rs(r: &Triple, s: &Triple, u: u32, v: u32) -> Rational {
    let r_diff = Rational::from(i64::from(r.0[2]) - i64::from(r.0[1]));
    let s_diff = Rational::from(i64::from(s.0[2]) - i64::from(s.0[1]) - 1);
    let ratio = Rational::new(i64::from(u), i64::from(v)).expect("v >= 3");
    &(&r_diff - &(&ratio * &s_diff)) / &Rational::from(3)
}

/// The three reducibility roots of an orbit, in orbit-cycle order starting
/// from the canonical representative.
pub fn orbit_j_roots(label: &OrbitLabel, u: u32, v: u32) -> Vec<Rational> {
    label
        .members()
        .iter()
        .map(|(r, s)| j_of_rs(r, s, u, v))
        .collect()
}

/// A point of the singlet spectrum at the shifted level `2/3`:
/// `h_lambda = lambda(lambda+1)/2` and
/// `w_hat_lambda = -lambda(lambda+1)(2lambda+1)/27`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SingletPoint {
    /// The spectral parameter.
    pub lambda: Rational,
    /// Conformal weight of the top space.
    pub h: Rational,
    /// Rescaled weight-three eigenvalue of the top space.
    pub w_hat: Rational,
}

impl SingletPoint {
    /// Evaluates the spectrum curve at `lambda`.
    pub fn new(lambda: Rational) -> Self {
        let next = &lambda + &Rational::from(1);
        let h = &(&lambda * &next) / &Rational::from(2);
        let odd = &(&Rational::from(2) * &lambda) + &Rational::from(1);
        let w_hat = -&(&(&(&lambda * &next) * &odd) / &Rational::from(27));
        SingletPoint { lambda, h, w_hat }
    }
}

/// The fibre of the singlet spectrum curve over a point `(h, w_hat)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingletMatches {
    /// All rational `lambda` with `(h_lambda, w_hat_lambda) = (h, w_hat)`,
    /// sorted increasing.
    pub lambdas: Vec<Rational>,
    /// Number of non-rational solutions (reported without values).
    pub non_rational: usize,
}

/// Finds every `lambda` with `h_lambda = h` and `w_hat_lambda = w_hat`.
///
/// The two conditions are a quadratic and a cubic in `lambda`; their common
/// solutions are the roots of the polynomial gcd, extracted exactly.  Only
/// rational solutions are listed; non-rational ones are counted.
pub fn sigma23_lookup(h: &Rational, w_hat: &Rational) -> SingletMatches {
    // 2 lambda^3 + 3 lambda^2 + lambda + 27 w_hat = 0.
    let cubic = UniPoly::new(vec![
        &Rational::from(27) * w_hat,
        Rational::from(1),
        Rational::from(3),
        Rational::from(2),
    ]);
    // lambda^2 + lambda - 2h = 0.
    let quad = UniPoly::new(vec![
        -&(&Rational::from(2) * h),
        Rational::from(1),
        Rational::from(1),
    ]);
    let common = cubic.gcd(&quad);
    if common.degree() == Some(0) {
        return SingletMatches {
            lambdas: Vec::new(),
            non_rational: 0,
        };
    }
    let (lambdas, residual) =
        rational_roots(&common).expect("gcd of nonzero polynomials is nonzero");
    SingletMatches {
        lambdas,
        non_rational: residual.degree().unwrap_or(0),
    }
}

/// One row of the spectrum table: an orbit with its weight data and its
/// three reducibility roots.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitRow {
    /// Canonical representative of the orbit.
    pub rep: (Triple, Triple),
    /// Conformal weight of the orbit.
    pub h: Rational,
    /// Rescaled weight-three eigenvalue of the orbit.
    pub w_hat: Rational,
    /// Reducibility roots in orbit-cycle order.
    pub j_roots: Vec<Rational>,
}

/// The full spectrum table of a nondegenerate pair.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumTable {
    /// Numerator of the shifted level.
    pub u: u32,
    /// Denominator of the shifted level.
    pub v: u32,
    /// One row per orbit, sorted by representative.
    pub orbits: Vec<OrbitRow>,
}

/// Tabulates the whole spectrum of a nondegenerate pair.
///
/// # Errors
///
/// Rejects pairs that are not nondegenerate.
pub fn spectrum_table(u: u32, v: u32) -> Result<SpectrumTable, MinmodError> {
    let orbits = z3_orbit_reps(u, v)?
        .into_iter()
        .map(|label| {
            let (h, w_hat) = orbit_hw(&label, u, v);
            let j_roots = orbit_j_roots(&label, u, v);
            let (r, s) = label.rep();
            OrbitRow {
                rep: (*r, *s),
                h,
                w_hat,
                j_roots,
            }
        })
        .collect();
    Ok(SpectrumTable { u, v, orbits })
}
