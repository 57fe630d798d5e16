//! Mode actions on Verma modules of the Zamolodchikov weight-three algebra.
//!
//! States are PBW monomials in creation modes of the stress tensor `T` and a
//! weight-three primary `W`, applied to a highest-weight vector with `T_0`,
//! `W_0` eigenvalues `(h, w)`.  The primary is carried in the rescaled
//! normalization whose squared bracket absorbs the factor
//! `alpha^2 = (k+3)^3 / 3`, so every structure constant stays rational at
//! every rational level, including the levels where the quartic tail of the
//! `W W` bracket vanishes.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::{derivative_factor, mode_binomial};
use crate::rat;
use crate::scalars::Rational;

/// Field labels accepted by [`w3_apply_mode`](super::w3_apply_mode): the
/// stress tensor, the rescaled weight-three primary, and the weight-four
/// quasi-primary composite `Lambda = :TT: - (3/10) T''`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum W3Generator {
    T,
    W,
    Lambda,
}

/// PBW basis monomial: `W` creation modes to the left of `T` creation modes,
/// each block with weakly decreasing mode indices, applied to the
/// highest-weight vector.
///
/// Mode lists hold the positive magnitudes in ascending order, so
/// `w_modes = [1, 3]` stands for `W_{-1} W_{-3}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct W3BasisVector {
    w_modes: Vec<u32>,
    t_modes: Vec<u32>,
}

impl W3BasisVector {
    /// The highest-weight vector itself.
    pub fn highest_weight() -> Self {
        Self {
            w_modes: Vec::new(),
            t_modes: Vec::new(),
        }
    }

    /// Monomial with the given creation magnitudes.
    ///
    /// # Panics
    ///
    /// Panics when a magnitude is zero: zero modes act on the highest-weight
    /// vector by scalars and never appear in basis monomials.
    pub fn from_modes(mut w_modes: Vec<u32>, mut t_modes: Vec<u32>) -> Self {
        assert!(
            w_modes.iter().chain(t_modes.iter()).all(|&t| t > 0),
            "creation magnitudes must be positive"
        );
        w_modes.sort_unstable();
        t_modes.sort_unstable();
        Self { w_modes, t_modes }
    }

    /// Magnitudes of the `W` creation modes, ascending.
    pub fn w_modes(&self) -> &[u32] {
        &self.w_modes
    }

    /// Magnitudes of the `T` creation modes, ascending.
    pub fn t_modes(&self) -> &[u32] {
        &self.t_modes
    }

    /// Total grade above the highest-weight vector.
    pub fn excitation(&self) -> u32 {
        self.w_modes.iter().sum::<u32>() + self.t_modes.iter().sum::<u32>()
    }

    pub fn is_highest_weight(&self) -> bool {
        self.w_modes.is_empty() && self.t_modes.is_empty()
    }

    fn prepended(&self, gen: W3Generator, magnitude: u32) -> Self {
        let mut image = self.clone();
        match gen {
            W3Generator::W => image.w_modes.insert(0, magnitude),
            W3Generator::T => image.t_modes.insert(0, magnitude),
            W3Generator::Lambda => unreachable!("composites are never monomial factors"),
        }
        image
    }

    fn split_leading(&self) -> (W3Generator, i64, Self) {
        if let Some((&first, rest)) = self.w_modes.split_first() {
            (
                W3Generator::W,
                -i64::from(first),
                Self {
                    w_modes: rest.to_vec(),
                    t_modes: self.t_modes.clone(),
                },
            )
        } else {
            let (&first, rest) = self
                .t_modes
                .split_first()
                .expect("only non-highest-weight monomials are split");
            (
                W3Generator::T,
                -i64::from(first),
                Self {
                    w_modes: Vec::new(),
                    t_modes: rest.to_vec(),
                },
            )
        }
    }
}

/// Highest-weight data and level constants used by the mode actions.
#[derive(Clone, Debug)]
pub(crate) struct W3Params {
    pub h: Rational,
    pub w_hat: Rational,
    pub central: Rational,
    pub a_k: Rational,
    pub alpha_sq: Rational,
}

pub(crate) type W3Map = BTreeMap<W3BasisVector, Rational>;

pub(crate) fn add_term(map: &mut W3Map, v: W3BasisVector, coeff: Rational) {
    if coeff.is_zero() {
        return;
    }
    match map.entry(v) {
        Entry::Vacant(slot) => {
            slot.insert(coeff);
        }
        Entry::Occupied(mut slot) => {
            *slot.get_mut() += &coeff;
            if slot.get().is_zero() {
                slot.remove();
            }
        }
    }
}

pub(crate) fn merge_scaled(map: &mut W3Map, terms: W3Map, scale: &Rational) {
    for (v, coeff) in terms {
        add_term(map, v, coeff * scale);
    }
}

/// Applies one mode of a field to a basis monomial and returns the image in
/// the PBW basis.
pub(crate) fn apply_generator(
    gen: W3Generator,
    mode: i64,
    v: &W3BasisVector,
    params: &W3Params,
) -> W3Map {
    match gen {
        W3Generator::Lambda => apply_lambda(mode, v, params),
        primary => apply_primary(primary, mode, v, params),
    }
}

/// Memo table for [`apply_generator_cached`].  Entries are only valid for the
/// parameter set the cache was first used with.
pub(crate) type W3Cache = HashMap<(W3Generator, i64, W3BasisVector), Rc<W3Map>>;

/// Memoized variant of [`apply_generator`] for the repeated lookups of the
/// embedding sweeps.
pub(crate) fn apply_generator_cached(
    gen: W3Generator,
    mode: i64,
    v: &W3BasisVector,
    params: &W3Params,
    cache: &mut W3Cache,
) -> Rc<W3Map> {
    let key = (gen, mode, v.clone());
    if let Some(hit) = cache.get(&key) {
        return Rc::clone(hit);
    }
    let value = Rc::new(apply_generator(gen, mode, v, params));
    cache.insert(key, Rc::clone(&value));
    value
}

/// Action of a `T` or `W` mode, straightening the result into the PBW basis.
fn apply_primary(gen: W3Generator, mode: i64, v: &W3BasisVector, params: &W3Params) -> W3Map {
    let mut out = W3Map::new();
    if v.is_highest_weight() {
        if mode > 0 {
            return out;
        }
        if mode == 0 {
            let eigen = match gen {
                W3Generator::T => params.h.clone(),
                W3Generator::W => params.w_hat.clone(),
                W3Generator::Lambda => unreachable!("composites are dispatched separately"),
            };
            add_term(&mut out, v.clone(), eigen);
            return out;
        }
        add_term(&mut out, v.prepended(gen, (-mode) as u32), Rational::from(1));
        return out;
    }
    if mode <= -1 && front_admissible(gen, (-mode) as u32, v) {
        add_term(&mut out, v.prepended(gen, (-mode) as u32), Rational::from(1));
        return out;
    }
    // X_m (Y_l rest) = Y_l (X_m rest) + [X_m, Y_l] rest
    let (lead_gen, lead_mode, rest) = v.split_leading();
    for (inner, inner_coeff) in apply_primary(gen, mode, &rest, params) {
        merge_scaled(
            &mut out,
            apply_primary(lead_gen, lead_mode, &inner, params),
            &inner_coeff,
        );
    }
    for (bracketed, coeff) in bracket_on_monomial(gen, mode, lead_gen, lead_mode, &rest, params) {
        add_term(&mut out, bracketed, coeff);
    }
    out
}

/// Whether a creation mode of the given magnitude may be written directly in
/// front of the monomial without leaving the PBW basis.
fn front_admissible(gen: W3Generator, magnitude: u32, v: &W3BasisVector) -> bool {
    match gen {
        W3Generator::W => v.w_modes.first().is_none_or(|&f| magnitude <= f),
        W3Generator::T => {
            v.w_modes.is_empty() && v.t_modes.first().is_none_or(|&f| magnitude <= f)
        }
        W3Generator::Lambda => unreachable!("composites are dispatched separately"),
    }
}

/// Fields appearing in tabulated singular parts.
#[derive(Clone, Copy, Debug)]
enum Base {
    Id,
    T,
    W,
    Lambda,
}

fn base_weight(base: Base) -> i64 {
    match base {
        Base::Id => 0,
        Base::T => 2,
        Base::W => 3,
        Base::Lambda => 4,
    }
}

struct SingularTerm {
    pole: u32,
    der: u32,
    base: Base,
    coeff: Rational,
}

/// Singular parts of the generator products, as lists of
/// `(pole order, derivative order, field, coefficient)`.
fn singular_part(a: W3Generator, b: W3Generator, params: &W3Params) -> Vec<SingularTerm> {
    let term = |pole, der, base, coeff| SingularTerm {
        pole,
        der,
        base,
        coeff,
    };
    match (a, b) {
        (W3Generator::T, W3Generator::T) => vec![
            term(4, 0, Base::Id, &params.central / Rational::from(2)),
            term(2, 0, Base::T, Rational::from(2)),
            term(1, 1, Base::T, Rational::from(1)),
        ],
        (W3Generator::T, W3Generator::W) => vec![
            term(2, 0, Base::W, Rational::from(3)),
            term(1, 1, Base::W, Rational::from(1)),
        ],
        (W3Generator::W, W3Generator::W) => {
            let tail = &params.alpha_sq * &params.a_k;
            vec![
                term(6, 0, Base::Id, &tail * &params.central / Rational::from(3)),
                term(4, 0, Base::T, Rational::from(2) * &tail),
                term(3, 1, Base::T, tail.clone()),
                term(2, 0, Base::Lambda, Rational::from(2) * &params.alpha_sq),
                term(2, 2, Base::T, rat!(3, 10) * &tail),
                term(1, 1, Base::Lambda, params.alpha_sq.clone()),
                term(1, 3, Base::T, rat!(1, 15) * &tail),
            ]
        }
        _ => unreachable!("singular parts are tabulated with T left of W"),
    }
}

/// Bracket `[a_m, b_n]` applied to a monomial, derived mechanically from the
/// singular parts: `[a_m, b_n] = sum_t binom(m + wt(a) - 1, t - 1) (P_t)_{m+n}`
/// with `P_t` the pole-`t` coefficient field.
fn bracket_on_monomial(
    a: W3Generator,
    m: i64,
    b: W3Generator,
    n: i64,
    target: &W3BasisVector,
    params: &W3Params,
) -> W3Map {
    if let (W3Generator::W, W3Generator::T) = (a, b) {
        let mut out = bracket_on_monomial(W3Generator::T, n, W3Generator::W, m, target, params);
        for coeff in out.values_mut() {
            *coeff = -&*coeff;
        }
        return out;
    }
    let p = m + n;
    let weight_a = match a {
        W3Generator::T => 2,
        W3Generator::W => 3,
        W3Generator::Lambda => unreachable!("composites are never bracket inputs"),
    };
    let mut out = W3Map::new();
    for term in singular_part(a, b, params) {
        let scalar = mode_binomial(m + weight_a - 1, term.pole - 1)
            * term.coeff
            * derivative_factor(term.der, base_weight(term.base), p);
        if scalar.is_zero() {
            continue;
        }
        match term.base {
            Base::Id => {
                if p == 0 {
                    add_term(&mut out, target.clone(), scalar);
                }
            }
            Base::T => merge_scaled(
                &mut out,
                apply_primary(W3Generator::T, p, target, params),
                &scalar,
            ),
            Base::W => merge_scaled(
                &mut out,
                apply_primary(W3Generator::W, p, target, params),
                &scalar,
            ),
            Base::Lambda => merge_scaled(&mut out, apply_lambda(p, target, params), &scalar),
        }
    }
    out
}

/// Action of one mode of `Lambda = :TT: - (3/10) T''`.
pub(crate) fn apply_lambda(mode: i64, v: &W3BasisVector, params: &W3Params) -> W3Map {
    let exc = i64::from(v.excitation());
    let mut out = W3Map::new();
    // Creation-ordered half: T_q T_{mode-q} with q <= -2; the right index is
    // capped by the excitation the monomial can pay.
    for q in (mode - exc)..=(-2) {
        for (inner, c1) in apply_primary(W3Generator::T, mode - q, v, params) {
            merge_scaled(
                &mut out,
                apply_primary(W3Generator::T, q, &inner, params),
                &c1,
            );
        }
    }
    // Annihilation-ordered half: T_{mode-q} T_q with q >= -1.
    for q in -1..=exc {
        for (inner, c1) in apply_primary(W3Generator::T, q, v, params) {
            merge_scaled(
                &mut out,
                apply_primary(W3Generator::T, mode - q, &inner, params),
                &c1,
            );
        }
    }
    let correction = rat!(-3, 10) * Rational::from((mode + 2) * (mode + 3));
    if !correction.is_zero() {
        merge_scaled(
            &mut out,
            apply_primary(W3Generator::T, mode, v, params),
            &correction,
        );
    }
    out
}
