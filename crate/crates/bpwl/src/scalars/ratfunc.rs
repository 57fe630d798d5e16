//! Univariate polynomials and rational functions in the level symbol `k`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{Rational, ScalarError};

/// A dense univariate polynomial over [`Rational`], lowest degree first.
///
/// The zero polynomial is the empty coefficient list; otherwise the leading
/// coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    /// Builds a polynomial from coefficients in increasing degree order.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// A constant polynomial.
    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// Coefficients in increasing degree order (empty for zero).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Leading coefficient, or `None` for zero.
    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Scales every coefficient.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divides by the leading coefficient, making the polynomial monic.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = Rational::one().checked_div(l).expect("nonzero leading");
                self.scale(&inv)
            }
        }
    }

    /// Quotient and remainder of exact polynomial division.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let dd = d.degree().unwrap();
        let dl = d.leading().unwrap().clone();
        let mut q = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let f = rem
                .leading()
                .unwrap()
                .checked_div(&dl)
                .expect("nonzero leading");
            let shift = rd - dd;
            q[shift] = f.clone();
            let mut sub = vec![Rational::zero(); shift];
            sub.extend(d.coeffs.iter().map(|c| c * &f));
            rem = &rem - &UniPoly::new(sub);
        }
        (UniPoly::new(q), rem)
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Rational::from(i as i64))
            .collect();
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Rational::is_zero) {
            self.coeffs.pop();
        }
    }

    fn fmt_with_symbol(&self, f: &mut fmt::Formatter<'_>, sym: &str) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "{sym}")?;
                    } else {
                        write!(f, "{sym}^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_symbol(f, "k")
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        UniPoly::new(coeffs)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        UniPoly::new(coeffs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        UniPoly::new(coeffs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// A rational function `num/den` in the level symbol `k`.
///
/// Canonical form: the denominator is monic and shares no factor with the
/// numerator, so equal values have equal representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

impl RatFunc {
    /// Builds `num/den` in canonical form, failing on a zero denominator.
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree().is_some_and(|d| d > 0) {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        } else {
            (num, den)
        };
        let lead = den.leading().expect("nonzero denominator").clone();
        let inv = Rational::one().checked_div(&lead)?;
        Ok(Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    /// A polynomial viewed as a rational function.
    pub fn from_poly(p: UniPoly) -> Self {
        Self {
            num: p,
            den: UniPoly::one(),
        }
    }

    /// A constant.
    pub fn constant(c: Rational) -> Self {
        Self::from_poly(UniPoly::constant(c))
    }

    /// The zero function.
    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    /// The constant one.
    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The level symbol `k` itself.
    pub fn k() -> Self {
        Self::from_poly(UniPoly::x())
    }

    /// Numerator of the canonical form.
    pub fn numer(&self) -> &UniPoly {
        &self.num
    }

    /// Denominator of the canonical form.
    pub fn denom(&self) -> &UniPoly {
        &self.den
    }

    /// True for the zero function.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the value is a constant, including zero.
    pub fn is_constant(&self) -> bool {
        self.num.degree().is_none_or(|d| d == 0) && self.den.degree() == Some(0)
    }

    /// Exact evaluation at a level, failing on denominator poles.
    pub fn eval(&self, k: &Rational) -> Result<Rational, ScalarError> {
        let d = self.den.eval(k);
        if d.is_zero() {
            return Err(ScalarError::LevelPole(k.clone()));
        }
        self.num.eval(k).checked_div(&d)
    }

    /// Exact quotient, failing on a zero divisor.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("nonzero divisor")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
