//! Exact rational-root extraction for low-degree polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Rational, ScalarError, UniPoly};

/// Rational roots of a cubic together with the root-free cofactor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicRoots {
    /// All rational roots in increasing order, repeated by multiplicity.
    pub roots: Vec<Rational>,
    /// The remaining factor, which has no rational roots.
    pub residual: UniPoly,
}

/// Extracts all rational roots of a cubic `c3 x^3 + c2 x^2 + c1 x + c0`.
///
/// Returns the roots with multiplicity plus the rational-coefficient
/// cofactor with no rational roots. Fails when `c3` is zero.
pub fn rational_roots_cubic(coeffs: &[Rational; 4]) -> Result<CubicRoots, ScalarError> {
    if coeffs[3].is_zero() {
        return Err(ScalarError::NotCubic);
    }
    let p = UniPoly::new(vec![
        coeffs[0].clone(),
        coeffs[1].clone(),
        coeffs[2].clone(),
        coeffs[3].clone(),
    ]);
    let (roots, residual) = rational_roots(&p)?;
    Ok(CubicRoots { roots, residual })
}

/// Splits a nonzero polynomial into rational roots (with multiplicity, sorted
/// increasing) and the root-free cofactor.
///
/// Candidates come from the rational-root test on the denominator-cleared
/// polynomial; each is verified by exact evaluation and divided out until it
/// no longer vanishes.
pub fn rational_roots(p: &UniPoly) -> Result<(Vec<Rational>, UniPoly), ScalarError> {
    if p.is_zero() {
        return Err(ScalarError::ZeroPolynomial);
    }
    let mut rem = p.clone();
    let mut roots = Vec::new();

    // Factors of x come off first so the constant term below is nonzero.
    while rem.degree().is_some_and(|d| d > 0) && rem.coeff(0).is_zero() {
        roots.push(Rational::zero());
        let coeffs = rem.coeffs()[1..].to_vec();
        rem = UniPoly::new(coeffs);
    }

    if rem.degree().is_some_and(|d| d > 0) {
        let cleared = clear_denominators(&rem);
        let a0 = cleared.first().expect("nonzero").clone();
        let an = cleared.last().expect("nonzero").clone();
        let mut candidates = Vec::new();
        for num in divisors(&a0.abs()) {
            for den in divisors(&an.abs()) {
                let r = Rational::from_big(num.clone(), den.clone()).expect("positive divisor");
                candidates.push(r.clone());
                candidates.push(-r);
            }
        }
        candidates.sort();
        candidates.dedup();
        for cand in candidates {
            while rem.degree().is_some_and(|d| d > 0) && rem.eval(&cand).is_zero() {
                roots.push(cand.clone());
                let linear = UniPoly::new(vec![-&cand, Rational::one()]);
                let (q, r) = rem.div_rem(&linear);
                debug_assert!(r.is_zero());
                rem = q;
            }
        }
    }

    roots.sort();
    Ok((roots, rem))
}

/// Clears denominators, returning integer coefficients lowest degree first.
fn clear_denominators(p: &UniPoly) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect()
}

/// All positive divisors of `|n|` for nonzero `n`, via trial-division
/// factorization. Any cofactor surviving trial division up to the square
/// root is prime, so the factorization is always complete.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    debug_assert!(!n.is_zero());
    let mut m = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut push = |p: &BigInt, m: &mut BigInt| {
        let mut e = 0;
        while (&*m % p).is_zero() {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p.clone(), e));
        }
    };
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    push(&two, &mut m);
    push(&three, &mut m);
    let mut p = BigInt::from(5);
    let mut step = BigInt::from(2);
    while &p * &p <= m {
        push(&p, &mut m);
        p += &step;
        step = BigInt::from(6) - step;
    }
    if m > BigInt::one() {
        factors.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pe = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pe);
                pe *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    divs
}
