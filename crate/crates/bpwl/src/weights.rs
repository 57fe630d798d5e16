//! Weights of the Bershadsky-Polyakov algebra and the polynomials that
//! control their module theory.
//!
//! Key items:
//!
//! - [`BPWeight`], a simultaneous eigenvalue pair `(j, Delta)` of the
//!   weight-one current zero mode and the Virasoro zero mode;
//! - [`spectral_flow_weight`] and [`conjugate_weight`], the actions of the
//!   automorphism group on weights;
//! - [`g_n_eval`] and [`top_space_dim`], the quadratic family `g_n` whose
//!   first vanishing order is the dimension of the top space of a
//!   highest-weight module;
//! - [`relaxed_cubic_eval`], the cubic in `j` whose roots mark the reducible
//!   members of a family of relaxed modules with fixed `(h, w_hat)`;
//! - [`omega_eval`], the eigenvalue of the cubic Casimir element on such a
//!   family;
//! - [`hw_spectral_flow_image`], the highest weight of the flowed image of a
//!   highest-weight module with a finite-dimensional top space.
//!
//! Weight-three eigenvalues appear exclusively in the rescaled form
//! `w_hat = alpha_k * w` with `alpha_k = (k+3)^(3/2) / sqrt(3)`, which is
//! rational for all data in scope.  The positive real branch of the square
//! root is fixed throughout.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::level::{k_linear, kappa_sym, Level};
use crate::scalars::{MPoly, RatFunc, Rational, Var};

/// Errors raised by weight-level computations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    /// Top-space indices count dimensions and start at 1.
    #[error("top-space index must be at least 1")]
    ZeroTopIndex,
    /// The cubic-Casimir eigenvalue came out differently at two evaluation
    /// points, which signals a defect in the formula transcription.
    #[error("cubic-Casimir value drifted with the evaluation point: {at_zero} at j = 0, {at_one} at j = 1")]
    OmegaEvaluationDrift {
        /// Value produced at evaluation point `j = 0`.
        at_zero: Box<Rational>,
        /// Value produced at evaluation point `j = 1`.
        at_one: Box<Rational>,
    },
}

/// A weight of the Bershadsky-Polyakov algebra: the pair of eigenvalues
/// `(j, Delta)` of the zero modes of the weight-one current and the Virasoro
/// field.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BPWeight {
    /// Eigenvalue of the weight-one current zero mode.
    pub j: Rational,
    /// Eigenvalue of the Virasoro zero mode.
    pub delta: Rational,
}

impl BPWeight {
    /// Bundles the eigenvalue pair.
    pub fn new(j: Rational, delta: Rational) -> Self {
        BPWeight { j, delta }
    }
}

impl std::fmt::Display for BPWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.j, self.delta)
    }
}

/// The label of a relaxed family: a `j`-coset together with the conformal
/// weight `h` of the top space and the rescaled weight-three eigenvalue
/// `w_hat`.
///
/// The coset representative is canonicalised into `[0, 1)` on construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RelaxedLabel {
    j_coset: Rational,
    /// Conformal weight of the top space.
    pub h: Rational,
    /// Rescaled weight-three eigenvalue of the top space.
    pub w_hat: Rational,
}

impl RelaxedLabel {
    /// Builds a label, reducing `j` to its canonical coset representative.
    pub fn new(j: Rational, h: Rational, w_hat: Rational) -> Self {
        RelaxedLabel {
            j_coset: j.coset_rep(),
            h,
            w_hat,
        }
    }

    /// The canonical coset representative, always in `[0, 1)`.
    pub fn j_coset(&self) -> &Rational {
        &self.j_coset
    }
}

impl std::fmt::Display for RelaxedLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "([{}], {}, {})", self.j_coset, self.h, self.w_hat)
    }
}

/// The eigenvalue of the cubic Casimir element on a relaxed family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaValue {
    /// The eigenvalue itself.
    pub omega: Rational,
}

/// Applies the spectral-flow automorphism `sigma^ell` at weight level:
/// `(j, Delta) -> (j + kappa*ell, Delta + ell*j + kappa*ell*(ell-1)/2)`.
pub fn spectral_flow_weight(ell: i64, w: &BPWeight, level: &Level) -> BPWeight {
    let kappa = level.kappa();
    let l = Rational::from(ell);
    let j = &w.j + &(&kappa * &l);
    let tri = &(&l * &(&l - &Rational::from(1))) / &Rational::from(2);
    let delta = &(&w.delta + &(&l * &w.j)) + &(&kappa * &tri);
    BPWeight::new(j, delta)
}

/// Applies the conjugation automorphism at weight level:
/// `(j, Delta) -> (kappa - j, Delta)`.
pub fn conjugate_weight(w: &BPWeight, level: &Level) -> BPWeight {
    BPWeight::new(&level.kappa() - &w.j, w.delta.clone())
}

/// Evaluates `g_n(j, Delta) = 3j^2 - (k+3)Delta - (2k+3n)j + (n-1)(k+n+1)`.
///
/// `g_1` is the polynomial `f` whose vanishing detects a singular vector at
/// the first level of the current zero mode acting on a highest-weight
/// vector; the minimal `n` with `g_n = 0` is the top-space dimension.
///
/// # Errors
///
/// Rejects `n = 0`.
pub fn g_n_eval(n: u32, w: &BPWeight, level: &Level) -> Result<Rational, WeightError> {
    if n == 0 {
        return Err(WeightError::ZeroTopIndex);
    }
    let k = level.k();
    let n_r = Rational::from(i64::from(n));
    let quad = &Rational::from(3) * &(&w.j * &w.j);
    let lin_delta = &(k + &Rational::from(3)) * &w.delta;
    let j_coeff = &(&Rational::from(2) * k) + &(&Rational::from(3) * &n_r);
    let tail = &(&n_r - &Rational::from(1)) * &(&(k + &n_r) + &Rational::from(1));
    Ok(&(&(&quad - &lin_delta) - &(&j_coeff * &w.j)) + &tail)
}

/// Evaluates `f(j, Delta) = g_1(j, Delta) = 3j^2 - (k+3)Delta - (2k+3)j`.
pub fn f_eval(w: &BPWeight, level: &Level) -> Rational {
    g_n_eval(1, w, level).expect("index 1 is always valid")
}

/// The smallest `n` in `[1, n_max]` with `g_n(j, Delta) = 0`, if any.
///
/// A return of `Some(n)` identifies the dimension of the top space of the
/// highest-weight module with highest weight `w`; `None` means no root was
/// found up to `n_max`.
pub fn top_space_dim(w: &BPWeight, level: &Level, n_max: u32) -> Option<u32> {
    (1..=n_max).find(|&n| {
        g_n_eval(n, w, level)
            .expect("indices from 1 up are always valid")
            .is_zero()
    })
}

/// Evaluates the polynomial
/// `P_k(j, h) = -(k+2)(k+3)h + ((k+3)h - 2(k+2)^2)(j+kappa) + 3(k+2)(j+kappa)^2 - (j+kappa)^3`.
pub fn p_k_eval(j: &Rational, h: &Rational, level: &Level) -> Rational {
    let k = level.k();
    let x = j + &level.kappa();
    let k2 = k + &Rational::from(2);
    let k3 = k + &Rational::from(3);
    let constant = -(&(&k2 * &k3) * h);
    let linear = &(&(&k3 * h) - &(&Rational::from(2) * &(&k2 * &k2))) * &x;
    let square = &(&Rational::from(3) * &k2) * &(&x * &x);
    let cube = &(&x * &x) * &x;
    &(&(&constant + &linear) + &square) - &cube
}

/// Evaluates the reducibility cubic `w_hat + P_k(j, h)` of a relaxed family.
///
/// As a polynomial in `j` this is a cubic with leading coefficient `-1`; its
/// rational roots are the `j`-values at which the family member acquires a
/// proper submodule.
pub fn relaxed_cubic_eval(j: &Rational, h: &Rational, w_hat: &Rational, level: &Level) -> Rational {
    w_hat + &p_k_eval(j, h, level)
}

/// Coefficients `[c_0, c_1, c_2, c_3]` of the reducibility cubic in `j` at
/// fixed `(h, w_hat)`, ready for rational root extraction.
pub fn relaxed_cubic_coeffs(h: &Rational, w_hat: &Rational, level: &Level) -> [Rational; 4] {
    let cubic = relaxed_cubic_sym();
    let eval_coeff = |e: u16| -> Rational {
        cubic
            .coeff_of(Var::J, e)
            .eval(
                &[(Var::H, h.clone()), (Var::WHat, w_hat.clone())]
                    .into_iter()
                    .collect(),
                level.k(),
            )
            .expect("cubic coefficients only involve h and w_hat")
    };
    [eval_coeff(0), eval_coeff(1), eval_coeff(2), eval_coeff(3)]
}

fn omega_at(j: &Rational, h: &Rational, w_hat: &Rational, level: &Level) -> Rational {
    let k = level.k();
    let kappa = level.kappa();
    let j_next = j + &Rational::from(1);
    let twice_w = &Rational::from(2) * w_hat;
    let p_here = p_k_eval(j, h, level);
    let p_next = p_k_eval(&j_next, h, level);
    let cubic = &Rational::from(2) * &(&(j * j) * j);
    let square = &(&(&Rational::from(2) * k) + &Rational::from(3)) * &(j * j);
    let cross = &(&(&Rational::from(2) * &(k + &Rational::from(3))) * j) * &(h + &kappa);
    &(&(&(&(&twice_w + &p_here) + &p_next) + &cubic) - &square) + &(j - &cross)
}

/// The eigenvalue of the cubic Casimir element on the relaxed family with
/// data `(h, w_hat)`.
///
/// The defining expression mentions an auxiliary `j`, but every `j`-dependent
/// term cancels; the value is computed at `j = 0` and `j = 1` and the two
/// results are compared as a transcription self-check.
///
/// # Errors
///
/// Reports [`WeightError::OmegaEvaluationDrift`] if the two evaluation points
/// disagree, which can only happen if the implementation itself is wrong.
pub fn omega_eval(h: &Rational, w_hat: &Rational, level: &Level) -> Result<OmegaValue, WeightError> {
    let at_zero = omega_at(&Rational::zero(), h, w_hat, level);
    let at_one = omega_at(&Rational::one(), h, w_hat, level);
    if at_zero != at_one {
        return Err(WeightError::OmegaEvaluationDrift {
            at_zero: Box::new(at_zero),
            at_one: Box::new(at_one),
        });
    }
    Ok(OmegaValue { omega: at_zero })
}

/// The highest weight of the image, under one unit of spectral flow, of a
/// highest-weight module whose top space has dimension `n`:
/// `(j, Delta) -> (j - n + 1 + kappa, Delta + j - n + 1)`.
///
/// `n` must be at least 1.
pub fn hw_spectral_flow_image(w: &BPWeight, n: u32, level: &Level) -> BPWeight {
    debug_assert!(n >= 1, "top-space dimensions start at 1");
    let shift = &w.j - &Rational::from(i64::from(n) - 1);
    BPWeight::new(&shift + &level.kappa(), &w.delta + &shift)
}

fn k_const(a: i64, b: i64) -> MPoly {
    MPoly::constant(RatFunc::from_poly(k_linear(a, b)))
}

fn int(n: i64) -> MPoly {
    MPoly::from_rational(Rational::from(n))
}

/// `P_k(j, h)` as a polynomial in `j` and `h` over the level function field.
pub fn p_k_sym() -> MPoly {
    let j = MPoly::var(Var::J);
    let h = MPoly::var(Var::H);
    let x = &j + &MPoly::constant(kappa_sym());
    let k2 = k_const(1, 2);
    let k3 = k_const(1, 3);
    let constant = -&(&(&k2 * &k3) * &h);
    let linear = &(&(&k3 * &h) - &(&int(2) * &k2.pow(2))) * &x;
    let square = &(&int(3) * &k2) * &x.pow(2);
    &(&(&constant + &linear) + &square) - &x.pow(3)
}

/// The reducibility cubic `w_hat + P_k(j, h)` as a polynomial in `j`, `h`,
/// `w_hat` over the level function field.
pub fn relaxed_cubic_sym() -> MPoly {
    &MPoly::var(Var::WHat) + &p_k_sym()
}

/// The cubic-Casimir eigenvalue as a polynomial over the level function
/// field.  All `j`-dependent terms cancel during construction, so the result
/// only involves `h` and `w_hat`.
pub fn omega_sym() -> MPoly {
    let j = MPoly::var(Var::J);
    let h = MPoly::var(Var::H);
    let w = MPoly::var(Var::WHat);
    let p_here = p_k_sym();
    let p_next = p_here.subst(Var::J, &(&j + &int(1)));
    let cubic = &int(2) * &j.pow(3);
    let square = &k_const(2, 3) * &j.pow(2);
    let cross = &(&(&k_const(2, 6) * &j) * &(&h + &MPoly::constant(kappa_sym())));
    let head = &(&(&(&int(2) * &w) + &p_here) + &p_next) + &cubic;
    &(&head - &square) + &(&j - cross)
}

/// `g_n(j, Delta)` with a polynomial argument in place of the index `n`, as a
/// polynomial over the level function field.
pub fn g_sym(n: &MPoly) -> MPoly {
    let j = MPoly::var(Var::J);
    let delta = MPoly::var(Var::Delta);
    let quad = &int(3) * &j.pow(2);
    let lin_delta = &k_const(1, 3) * &delta;
    let j_coeff = &k_const(2, 0) + &(&int(3) * n);
    let tail = &(n - &int(1)) * &(&k_const(1, 1) + n);
    &(&(&quad - &lin_delta) - &(&j_coeff * &j)) + &tail
}

/// `f(j, Delta) = g_1(j, Delta)` as a polynomial over the level function
/// field.
pub fn f_sym() -> MPoly {
    g_sym(&int(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use proptest::prelude::*;

    fn level_23() -> Level {
        Level::from_pair(2, 3).unwrap()
    }

    fn level_43() -> Level {
        Level::from_pair(4, 3).unwrap()
    }

    #[test]
    fn spectral_flow_examples() {
        let level = level_23();
        let flowed = spectral_flow_weight(1, &BPWeight::new(rat!(0), rat!(0)), &level);
        assert_eq!(flowed, BPWeight::new(rat!(-5, 9), rat!(0)));

        let flowed = spectral_flow_weight(2, &BPWeight::new(rat!(1, 3), rat!(2, 3)), &level);
        assert_eq!(flowed, BPWeight::new(rat!(-7, 9), rat!(7, 9)));

        let w = BPWeight::new(rat!(4, 7), rat!(-3, 5));
        assert_eq!(spectral_flow_weight(0, &w, &level), w);
    }

    #[test]
    fn conjugation_examples() {
        let level = level_23();
        let conj = conjugate_weight(&BPWeight::new(rat!(0), rat!(0)), &level);
        assert_eq!(conj, BPWeight::new(rat!(-5, 9), rat!(0)));

        let fixed = BPWeight::new(rat!(-5, 18), rat!(7, 2));
        assert_eq!(conjugate_weight(&fixed, &level), fixed);

        let w = BPWeight::new(rat!(9, 4), rat!(-1, 6));
        assert_eq!(conjugate_weight(&conjugate_weight(&w, &level), &level), w);
    }

    #[test]
    fn g_value_examples() {
        for level in [level_23(), level_43()] {
            assert_eq!(
                g_n_eval(1, &BPWeight::new(rat!(0), rat!(0)), &level).unwrap(),
                rat!(0)
            );
        }
        let level = level_23();
        assert_eq!(
            g_n_eval(2, &BPWeight::new(rat!(0), rat!(1)), &level).unwrap(),
            rat!(0)
        );
        assert_eq!(g_n_eval(0, &BPWeight::new(rat!(0), rat!(0)), &level), Err(WeightError::ZeroTopIndex));
    }

    #[test]
    fn dimension_one_family_sits_in_the_f_kernel() {
        let level = level_23();
        for p in -12..=12 {
            let lambda = rat!(p, 3);
            let h_lambda = &(&lambda * &(&lambda + &rat!(1))) / &rat!(2);
            let w = BPWeight::new(&lambda / &rat!(3), &h_lambda + &(&lambda / &rat!(3)));
            assert_eq!(f_eval(&w, &level), rat!(0), "lambda = {lambda}");
        }
    }

    #[test]
    fn top_space_dimensions() {
        let level = level_23();
        assert_eq!(
            top_space_dim(&BPWeight::new(rat!(0), rat!(0)), &level, 10),
            Some(1)
        );
        assert_eq!(
            top_space_dim(&BPWeight::new(rat!(0), rat!(1)), &level, 10),
            Some(2)
        );
        assert_eq!(
            top_space_dim(&BPWeight::new(rat!(1, 3), rat!(10, 3)), &level, 10),
            Some(3)
        );
        assert_eq!(
            top_space_dim(&BPWeight::new(rat!(1, 3), rat!(10, 3)), &level, 2),
            None
        );
    }

    #[test]
    fn relaxed_cubic_examples() {
        let level = level_43();
        assert_eq!(
            relaxed_cubic_eval(&rat!(0), &rat!(0), &rat!(0), &level),
            rat!(28, 729)
        );
        assert_eq!(
            relaxed_cubic_eval(&rat!(4, 9), &rat!(0), &rat!(0), &level),
            rat!(0)
        );
        let level = level_23();
        assert_eq!(
            relaxed_cubic_eval(&rat!(0), &rat!(1), &rat!(-2, 9), &level),
            rat!(-280, 729)
        );
    }

    #[test]
    fn relaxed_cubic_is_monic_up_to_sign() {
        let top = relaxed_cubic_sym().coeff_of(Var::J, 3);
        assert_eq!(top, MPoly::from_rational(rat!(-1)));
        let coeffs = relaxed_cubic_coeffs(&rat!(1, 2), &rat!(-2, 9), &level_23());
        assert_eq!(coeffs[3], rat!(-1));
    }

    #[test]
    fn cubic_coefficients_reproduce_evaluation() {
        let level = level_43();
        let (h, w_hat) = (rat!(3, 7), rat!(-5, 11));
        let coeffs = relaxed_cubic_coeffs(&h, &w_hat, &level);
        for p in -6..=6 {
            let j = rat!(p, 5);
            let horner = coeffs
                .iter()
                .rev()
                .fold(rat!(0), |acc, c| &(&acc * &j) + c);
            assert_eq!(horner, relaxed_cubic_eval(&j, &h, &w_hat, &level));
        }
    }

    #[test]
    fn omega_examples() {
        let level = level_23();
        let omega = omega_eval(&rat!(0), &rat!(0), &level).unwrap();
        assert_eq!(omega.omega, rat!(-290, 729));

        let shifted = omega_eval(&rat!(0), &rat!(3, 4), &level).unwrap();
        assert_eq!(&shifted.omega - &omega.omega, rat!(3, 2));
    }

    #[test]
    fn omega_is_j_independent_symbolically() {
        let omega = omega_sym();
        assert!(omega.derivative(Var::J).is_zero());
        assert!(!omega.variables().contains(&Var::J));
    }

    #[test]
    fn hw_flow_image_examples() {
        let level = level_23();
        assert_eq!(
            hw_spectral_flow_image(&BPWeight::new(rat!(0), rat!(0)), 1, &level),
            BPWeight::new(rat!(-5, 9), rat!(0))
        );
        let w = BPWeight::new(rat!(5, 4), rat!(-2, 3));
        assert_eq!(
            hw_spectral_flow_image(&w, 1, &level),
            spectral_flow_weight(1, &w, &level)
        );
        assert_eq!(
            hw_spectral_flow_image(&BPWeight::new(rat!(2, 3), rat!(5, 3)), 2, &level),
            BPWeight::new(rat!(-8, 9), rat!(4, 3))
        );
    }

    #[test]
    fn g_closed_form_matches_averaged_f() {
        let j = MPoly::var(Var::J);
        for n in 1u32..=50 {
            let mut sum = MPoly::zero();
            for m in 0..n {
                let shift = &j - &int(i64::from(m));
                sum = &sum + &f_sym().subst(Var::J, &shift);
            }
            let avg = &sum
                * &MPoly::constant(RatFunc::constant(
                    Rational::new(1, i64::from(n)).unwrap(),
                ));
            assert_eq!(avg, g_sym(&int(i64::from(n))), "n = {n}");
        }
    }

    #[test]
    fn g_difference_identity() {
        let j = MPoly::var(Var::J);
        let delta = MPoly::var(Var::Delta);
        let m = MPoly::var(Var::M);
        let n = MPoly::var(Var::N);
        let j_image = &(&(&j - &n) + &int(1)) + &MPoly::constant(kappa_sym());
        let delta_image = &(&(&delta + &j) - &n) + &int(1);
        let lhs = &g_sym(&m)
            .subst(Var::J, &j_image)
            .subst(Var::Delta, &delta_image)
            - &g_sym(&n);
        let linear = &(&(&(&int(3) * &j) + &int(3)) - &m) - &(&int(2) * &n);
        let rhs = &linear * &(&(&k_const(1, 3) - &m) - &n);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn linear_factor_difference_identity() {
        let j = MPoly::var(Var::J);
        let l = MPoly::var(Var::L);
        let m = MPoly::var(Var::M);
        let n = MPoly::var(Var::N);
        let factor = |a: &MPoly, b: &MPoly, x: &MPoly| -> MPoly {
            &(&(&(&int(3) * x) + &int(3)) - a) - &(&int(2) * b)
        };
        let j_image = &(&(&j - &n) + &int(1)) + &MPoly::constant(kappa_sym());
        let lhs = &factor(&l, &m, &j_image) - &factor(&m, &n, &j);
        let rhs = &(&(&k_const(2, 6) - &l) - &m) - &n;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn numeric_and_symbolic_cubic_agree() {
        let level = level_23();
        let sym = relaxed_cubic_sym();
        for (j, h, w_hat) in [
            (rat!(1, 2), rat!(-2, 7), rat!(5, 3)),
            (rat!(-4, 9), rat!(11, 6), rat!(0)),
            (rat!(6), rat!(0), rat!(-1, 12)),
        ] {
            let bound = sym
                .eval(
                    &[
                        (Var::J, j.clone()),
                        (Var::H, h.clone()),
                        (Var::WHat, w_hat.clone()),
                    ]
                    .into_iter()
                    .collect(),
                    level.k(),
                )
                .unwrap();
            assert_eq!(bound, relaxed_cubic_eval(&j, &h, &w_hat, &level));
        }
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-200i64..200, 1i64..60).prop_map(|(n, d)| Rational::new(n, d).unwrap())
    }

    fn arb_level() -> impl Strategy<Value = Level> {
        (-60i64..60, 1i64..20)
            .prop_map(|(n, d)| Rational::new(n, d).unwrap())
            .prop_filter("critical level excluded", |k| k != &rat!(-3))
            .prop_map(|k| Level::from_k(k).unwrap())
    }

    proptest! {
        #[test]
        fn flow_round_trip(
            j in arb_rational(),
            delta in arb_rational(),
            level in arb_level(),
            ell in -20i64..=20,
        ) {
            let w = BPWeight::new(j, delta);
            let back = spectral_flow_weight(-ell, &spectral_flow_weight(ell, &w, &level), &level);
            prop_assert_eq!(back, w);
        }

        #[test]
        fn dihedral_relation(
            j in arb_rational(),
            delta in arb_rational(),
            level in arb_level(),
            ell in -20i64..=20,
        ) {
            let w = BPWeight::new(j, delta);
            let lhs = conjugate_weight(&spectral_flow_weight(ell, &w, &level), &level);
            let rhs = spectral_flow_weight(-ell, &conjugate_weight(&w, &level), &level);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn omega_never_drifts(
            h in arb_rational(),
            w_hat in arb_rational(),
            level in arb_level(),
        ) {
            prop_assert!(omega_eval(&h, &w_hat, &level).is_ok());
        }

        #[test]
        fn p_k_numeric_matches_symbolic(
            j in arb_rational(),
            h in arb_rational(),
            level in arb_level(),
        ) {
            let sym = p_k_sym()
                .eval(
                    &[(Var::J, j.clone()), (Var::H, h.clone())].into_iter().collect(),
                    level.k(),
                )
                .unwrap();
            prop_assert_eq!(sym, p_k_eval(&j, &h, &level));
        }
    }
}
