//! Sparse multivariate polynomials with rational-function coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{RatFunc, Rational, ScalarError};

/// The fixed variable universe for symbolic weight computations.
///
/// `J`, `H`, `Delta` and `WHat` are the charge, minimal-model weight,
/// conformal weight and rescaled cubic eigenvalue; `Lambda` parametrises
/// one-parameter module families; `M`, `N` and `L` are integer labels kept
/// symbolic so shift identities can be proved as polynomial identities.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    J,
    H,
    Delta,
    WHat,
    Lambda,
    M,
    N,
    L,
}

/// All variables, in monomial-exponent order.
pub const ALL_VARS: [Var; 8] = [
    Var::J,
    Var::H,
    Var::Delta,
    Var::WHat,
    Var::Lambda,
    Var::M,
    Var::N,
    Var::L,
];

impl Var {
    fn index(self) -> usize {
        ALL_VARS.iter().position(|&v| v == self).expect("listed")
    }

    /// Short lowercase name used in rendering and error messages.
    pub fn name(self) -> &'static str {
        match self {
            Var::J => "j",
            Var::H => "h",
            Var::Delta => "delta",
            Var::WHat => "w_hat",
            Var::Lambda => "lambda",
            Var::M => "m",
            Var::N => "n",
            Var::L => "l",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

type Mono = [u16; 8];

const MONO_ONE: Mono = [0; 8];

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = [0u16; 8];
    for i in 0..8 {
        out[i] = a[i] + b[i];
    }
    out
}

/// A polynomial in the [`Var`] universe with [`RatFunc`] coefficients.
///
/// Stored sparsely; zero coefficients are never kept, so equality of values
/// is equality of representations.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Mono, RatFunc>,
}

/// Variable bindings for exact evaluation.
pub type Bindings = BTreeMap<Var, Rational>;

impl MPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// A constant polynomial with rational-function value.
    pub fn constant(c: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(MONO_ONE, c);
        }
        Self { terms }
    }

    /// A constant polynomial with rational value.
    pub fn from_rational(c: Rational) -> Self {
        Self::constant(RatFunc::constant(c))
    }

    /// The polynomial consisting of a single variable.
    pub fn var(v: Var) -> Self {
        let mut mono = MONO_ONE;
        mono[v.index()] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(mono, RatFunc::one());
        Self { terms }
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The variables that actually appear.
    pub fn variables(&self) -> Vec<Var> {
        ALL_VARS
            .iter()
            .copied()
            .filter(|v| self.terms.keys().any(|m| m[v.index()] > 0))
            .collect()
    }

    /// Integer power.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(RatFunc::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces `v` by `sub` everywhere.
    pub fn subst(&self, v: Var, sub: &Self) -> Self {
        let idx = v.index();
        let mut out = Self::zero();
        for (mono, coeff) in &self.terms {
            let e = mono[idx];
            let mut rest = *mono;
            rest[idx] = 0;
            let mut term = Self {
                terms: BTreeMap::from([(rest, coeff.clone())]),
            };
            if e > 0 {
                term = &term * &sub.pow(u32::from(e));
            }
            out = &out + &term;
        }
        out
    }

    /// Partial derivative with respect to `v`.
    pub fn derivative(&self, v: Var) -> Self {
        let idx = v.index();
        let mut terms = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            let e = mono[idx];
            if e == 0 {
                continue;
            }
            let mut m = *mono;
            m[idx] = e - 1;
            let c = coeff * &RatFunc::constant(Rational::from(i64::from(e)));
            insert_term(&mut terms, m, c);
        }
        Self { terms }
    }

    /// Collects the coefficient of `v^e`: the sum of all terms whose power of
    /// `v` is exactly `e`, with that power stripped off.
    pub fn coeff_of(&self, v: Var, e: u16) -> Self {
        let idx = v.index();
        let mut terms = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            if mono[idx] != e {
                continue;
            }
            let mut m = *mono;
            m[idx] = 0;
            insert_term(&mut terms, m, coeff.clone());
        }
        Self { terms }
    }

    /// Exact evaluation with every appearing variable bound and the level
    /// symbol set to `level`.
    pub fn eval(&self, bindings: &Bindings, level: &Rational) -> Result<Rational, ScalarError> {
        for v in self.variables() {
            if !bindings.contains_key(&v) {
                return Err(ScalarError::UnboundVariable(v));
            }
        }
        let mut acc = Rational::zero();
        for (mono, coeff) in &self.terms {
            let mut term = coeff.eval(level)?;
            for (i, &e) in mono.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = &bindings[&ALL_VARS[i]];
                term = term * x.pow_i(i64::from(e))?;
            }
            acc += &term;
        }
        Ok(acc)
    }

    /// Collapses a polynomial with no variables left to its constant value.
    pub fn as_constant(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => self.terms.get(&MONO_ONE).cloned(),
            _ => None,
        }
    }
}

fn insert_term(terms: &mut BTreeMap<Mono, RatFunc>, mono: Mono, coeff: RatFunc) {
    if coeff.is_zero() {
        return;
    }
    match terms.entry(mono) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get() + &coeff;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut terms = self.terms.clone();
        for (mono, coeff) in &rhs.terms {
            insert_term(&mut terms, *mono, coeff.clone());
        }
        MPoly { terms }
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                insert_term(&mut terms, mono_mul(ma, mb), ca * cb);
            }
        }
        MPoly { terms }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coeff})")?;
            for (i, &e) in mono.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                write!(f, "*{}", ALL_VARS[i])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
