//! Mode actions on lattice-point modules over the half-lattice vertex algebra.
//!
//! The algebra is generated by two weight-one currents `c`, `d` with pairings
//! `<c,c> = <d,d> = 0` and `<c,d> = 2`, together with the vertex operators
//! attached to integer multiples of `c`.  States are oscillator monomials on
//! exponential vectors `e^{ell b + mu c}`, where `b = (kappa c + d) / 2` spans
//! the other half of the lattice.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_integer::binomial;

use super::derivative_factor;
use crate::rat;
use crate::scalars::Rational;

/// Field labels accepted by [`pi_apply_mode`](super::pi_apply_mode).
///
/// `C` and `D` are the lattice currents; `A` and `B` are the combinations
/// `(d - kappa c) / 2` and `(d + kappa c) / 2`, the second being the embedded
/// image of the charge current `J`.  `Exp(n)` labels the vertex operator
/// attached to the lattice vector `n c`, a field of conformal weight `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PiGenerator {
    C,
    D,
    A,
    B,
    Exp(i64),
}

/// Weight-one currents that occur as factors of engine composites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum PiField {
    C,
    D,
    A,
    B,
}

/// Oscillator monomial on a lattice point: a product of creation modes
/// `c_{-t}` and `d_{-t}` applied to the exponential vector `e^{ell b + mu c}`.
///
/// Oscillator lists hold the positive magnitudes `t` in ascending order, so
/// `d_osc = [1, 1, 3]` stands for `d_{-1} d_{-1} d_{-3}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PiBasisVector {
    ell: i64,
    mu: Rational,
    c_osc: Vec<u32>,
    d_osc: Vec<u32>,
}

impl PiBasisVector {
    /// Bare lattice point `e^{ell b + mu c}`.
    pub fn lattice_point(ell: i64, mu: Rational) -> Self {
        Self {
            ell,
            mu,
            c_osc: Vec::new(),
            d_osc: Vec::new(),
        }
    }

    /// Lattice point dressed with creation oscillators of the given
    /// magnitudes.
    ///
    /// # Panics
    ///
    /// Panics when a magnitude is zero: zero modes act diagonally and never
    /// appear in basis monomials.
    pub fn with_oscillators(
        ell: i64,
        mu: Rational,
        mut c_osc: Vec<u32>,
        mut d_osc: Vec<u32>,
    ) -> Self {
        assert!(
            c_osc.iter().chain(d_osc.iter()).all(|&t| t > 0),
            "oscillator magnitudes must be positive"
        );
        c_osc.sort_unstable();
        d_osc.sort_unstable();
        Self {
            ell,
            mu,
            c_osc,
            d_osc,
        }
    }

    /// Coefficient of the lattice direction `b`.
    pub fn ell(&self) -> i64 {
        self.ell
    }

    /// Coefficient of the lattice direction `c`.
    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    /// Magnitudes of the `c` oscillators, ascending.
    pub fn c_oscillators(&self) -> &[u32] {
        &self.c_osc
    }

    /// Magnitudes of the `d` oscillators, ascending.
    pub fn d_oscillators(&self) -> &[u32] {
        &self.d_osc
    }

    /// Total oscillator grade above the lattice point.
    pub fn excitation(&self) -> u32 {
        self.c_osc.iter().sum::<u32>() + self.d_osc.iter().sum::<u32>()
    }

    /// Eigenvalue of the zero mode of the current `b`, the embedded charge.
    pub fn charge(&self, kappa: &Rational) -> Rational {
        &self.mu + kappa * Rational::from(self.ell)
    }

    /// Conformal weight of the bare lattice point under the lattice Virasoro
    /// field: `mu (ell + 1) + kappa ell (ell - 1) / 2`.
    pub fn lattice_weight(&self, kappa: &Rational) -> Rational {
        let ell = Rational::from(self.ell);
        &self.mu * (&ell + Rational::from(1))
            + kappa * &ell * (&ell - Rational::from(1)) / Rational::from(2)
    }
}

/// Composite lattice fields entering the embedded generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum PiOp {
    /// `der`-fold derivative of a named current.
    Current(PiField, u32),
    /// Vertex operator attached to `n c`.
    Exp(i64),
    /// Normally ordered product whose left factor is the `der`-fold
    /// derivative of a named current.
    Normal(PiField, u32, Box<PiOp>),
}

impl PiOp {
    /// Total shift of the `c`-direction lattice coefficient.
    fn exp_charge(&self) -> i64 {
        match self {
            PiOp::Current(..) => 0,
            PiOp::Exp(n) => *n,
            PiOp::Normal(_, _, right) => right.exp_charge(),
        }
    }
}

/// Applies one mode of a composite field to a basis monomial and returns the
/// image terms with exact coefficients.  Kept uncached as the reference
/// implementation the memoized variant is tested against.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn apply_op(
    op: &PiOp,
    mode: i64,
    v: &PiBasisVector,
    kappa: &Rational,
) -> Vec<(PiBasisVector, Rational)> {
    match op {
        PiOp::Current(field, der) => apply_current(*field, *der, mode, v, kappa),
        PiOp::Exp(n) => apply_exp(*n, mode, v),
        PiOp::Normal(field, der, right) => {
            let h_left = 1 + i64::from(*der);
            let mut out = Vec::new();
            // Half with the current standing right: its index is at least
            // 1 - h_left, and annihilation indices beyond every oscillator
            // magnitude act as zero.
            let reach = i64::from(
                v.c_osc
                    .last()
                    .copied()
                    .max(v.d_osc.last().copied())
                    .unwrap_or(0),
            );
            for q in (1 - h_left)..=reach {
                for (first, c1) in apply_current(*field, *der, q, v, kappa) {
                    for (second, c2) in apply_op(right, mode - q, &first, kappa) {
                        out.push((second, &c1 * c2));
                    }
                }
            }
            // Half with the current standing left as a creation mode: the
            // other factor acts first and its index is capped by the
            // excitation the monomial can pay.
            let low = mode - i64::from(v.excitation()) + right.exp_charge() * (v.ell + 1);
            for q in low..=(-h_left) {
                for (first, c1) in apply_op(right, mode - q, v, kappa) {
                    for (second, c2) in apply_current(*field, *der, q, &first, kappa) {
                        out.push((second, &c1 * c2));
                    }
                }
            }
            out
        }
    }
}

/// Memo table for [`apply_op_cached`], keyed by the composite field, the mode
/// index, and the target monomial.
pub(crate) type PiCache = HashMap<(PiOp, i64, PiBasisVector), Rc<Vec<(PiBasisVector, Rational)>>>;

/// Memoized variant of [`apply_op`] with one coefficient per image monomial.
///
/// The nested normally ordered products re-enter the same submodes over and
/// over; caching every `(op, mode, monomial)` triple turns the repeated inner
/// sums into table lookups.  Entries are only valid for the `kappa` the cache
/// was first used with.
pub(crate) fn apply_op_cached(
    op: &PiOp,
    mode: i64,
    v: &PiBasisVector,
    kappa: &Rational,
    cache: &mut PiCache,
) -> Rc<Vec<(PiBasisVector, Rational)>> {
    let key = (op.clone(), mode, v.clone());
    if let Some(hit) = cache.get(&key) {
        return Rc::clone(hit);
    }
    let raw = match op {
        PiOp::Current(field, der) => apply_current(*field, *der, mode, v, kappa),
        PiOp::Exp(n) => apply_exp(*n, mode, v),
        PiOp::Normal(field, der, right) => {
            let h_left = 1 + i64::from(*der);
            let mut out = Vec::new();
            let reach = i64::from(
                v.c_osc
                    .last()
                    .copied()
                    .max(v.d_osc.last().copied())
                    .unwrap_or(0),
            );
            for q in (1 - h_left)..=reach {
                for (first, c1) in apply_current(*field, *der, q, v, kappa) {
                    let seconds = apply_op_cached(right, mode - q, &first, kappa, cache);
                    for (second, c2) in seconds.iter() {
                        out.push((second.clone(), &c1 * c2));
                    }
                }
            }
            let low = mode - i64::from(v.excitation()) + right.exp_charge() * (v.ell + 1);
            for q in low..=(-h_left) {
                let firsts = apply_op_cached(right, mode - q, v, kappa, cache);
                for (first, c1) in firsts.iter() {
                    for (second, c2) in apply_current(*field, *der, q, first, kappa) {
                        out.push((second, c1 * c2));
                    }
                }
            }
            out
        }
    };
    let mut merged: BTreeMap<PiBasisVector, Rational> = BTreeMap::new();
    for (image, coeff) in raw {
        *merged.entry(image).or_default() += &coeff;
    }
    let value = Rc::new(
        merged
            .into_iter()
            .filter(|(_, coeff)| !coeff.is_zero())
            .collect::<Vec<_>>(),
    );
    cache.insert(key, Rc::clone(&value));
    value
}

/// Action of one mode of the `der`-fold derivative of a named current.
pub(crate) fn apply_current(
    field: PiField,
    der: u32,
    mode: i64,
    v: &PiBasisVector,
    kappa: &Rational,
) -> Vec<(PiBasisVector, Rational)> {
    let factor = derivative_factor(der, 1, mode);
    if factor.is_zero() {
        return Vec::new();
    }
    let half = rat!(1, 2);
    let (c_coeff, d_coeff) = match field {
        PiField::C => (Rational::from(1), Rational::from(0)),
        PiField::D => (Rational::from(0), Rational::from(1)),
        PiField::A => (-(kappa * &half), half.clone()),
        PiField::B => (kappa * &half, half),
    };
    let mut out = Vec::new();
    for (coeff, is_c) in [(c_coeff, true), (d_coeff, false)] {
        if coeff.is_zero() {
            continue;
        }
        if let Some((image, value)) = apply_lattice_mode(is_c, mode, v, kappa) {
            out.push((image, value * coeff * &factor));
        }
    }
    out
}

/// Action of a bare `c` or `d` mode: contraction against the dual
/// oscillators, the zero-mode eigenvalue, or a new creation oscillator.
fn apply_lattice_mode(
    is_c: bool,
    mode: i64,
    v: &PiBasisVector,
    kappa: &Rational,
) -> Option<(PiBasisVector, Rational)> {
    use std::cmp::Ordering;

    match mode.cmp(&0) {
        Ordering::Greater => {
            let t = mode as u32;
            let mut image = v.clone();
            let dual = if is_c {
                &mut image.d_osc
            } else {
                &mut image.c_osc
            };
            let mult = dual.iter().filter(|&&s| s == t).count() as i64;
            if mult == 0 {
                return None;
            }
            let pos = dual
                .iter()
                .position(|&s| s == t)
                .expect("a counted magnitude is present");
            dual.remove(pos);
            Some((image, Rational::from(2 * mode * mult)))
        }
        Ordering::Equal => {
            let eigen = if is_c {
                Rational::from(v.ell)
            } else {
                Rational::from(2) * &v.mu + kappa * Rational::from(v.ell)
            };
            if eigen.is_zero() {
                None
            } else {
                Some((v.clone(), eigen))
            }
        }
        Ordering::Less => {
            let mut image = v.clone();
            let own = if is_c {
                &mut image.c_osc
            } else {
                &mut image.d_osc
            };
            insert_sorted(own, (-mode) as u32);
            Some((image, Rational::from(1)))
        }
    }
}

/// Action of one mode of the vertex operator attached to `n c`.
///
/// The annihilation tail contracts `d` oscillators, the creation tail emits
/// partitions of the leftover grade as new `c` oscillators, and the lattice
/// point shifts by `n c`.
pub(crate) fn apply_exp(n: i64, mode: i64, v: &PiBasisVector) -> Vec<(PiBasisVector, Rational)> {
    let mut d_counts: Vec<(u32, u32)> = Vec::new();
    for &t in &v.d_osc {
        match d_counts.last_mut() {
            Some((s, count)) if *s == t => *count += 1,
            _ => d_counts.push((t, 1)),
        }
    }
    let mut out = Vec::new();
    let mut removals: Vec<(u32, u32)> = Vec::new();
    removal_branch(
        n,
        mode,
        v,
        &d_counts,
        0,
        0,
        &Rational::from(1),
        &mut removals,
        &mut out,
    );
    out
}

/// Recursion over how many `d` oscillators of each magnitude the annihilation
/// tail of the vertex operator removes.
#[allow(clippy::too_many_arguments)]
fn removal_branch(
    n: i64,
    mode: i64,
    v: &PiBasisVector,
    d_counts: &[(u32, u32)],
    idx: usize,
    removed_grade: u32,
    coeff: &Rational,
    removals: &mut Vec<(u32, u32)>,
    out: &mut Vec<(PiBasisVector, Rational)>,
) {
    if idx == d_counts.len() {
        let leftover = i64::from(removed_grade) - n * (v.ell + 1) - mode;
        let Ok(leftover) = u32::try_from(leftover) else {
            return;
        };
        for (parts, part_coeff) in creation_partitions(n, leftover) {
            let mut image = v.clone();
            image.mu = &image.mu + Rational::from(n);
            for &(t, count) in removals.iter() {
                for _ in 0..count {
                    remove_one(&mut image.d_osc, t);
                }
            }
            for &s in &parts {
                insert_sorted(&mut image.c_osc, s);
            }
            out.push((image, coeff * part_coeff));
        }
        return;
    }
    let (t, mult) = d_counts[idx];
    for taken in 0..=mult {
        // Removing `taken` of `mult` copies at magnitude t contributes
        // (-2n)^taken * binom(mult, taken); the bracket value 2t cancels the
        // 1/t of the expansion coefficient.
        let choice = Rational::from((-2 * n).pow(taken) * binomial(i64::from(mult), i64::from(taken)));
        if choice.is_zero() {
            continue;
        }
        removals.push((t, taken));
        removal_branch(
            n,
            mode,
            v,
            d_counts,
            idx + 1,
            removed_grade + t * taken,
            &(coeff * choice),
            removals,
            out,
        );
        removals.pop();
    }
}

/// Partitions of `total` weighted by the creation tail of the vertex
/// operator: a part of size `s` used `j` times carries `(n/s)^j / j!`.
fn creation_partitions(n: i64, total: u32) -> Vec<(Vec<u32>, Rational)> {
    let mut out = Vec::new();
    let mut parts = Vec::new();
    partition_branch(n, total, total, &mut parts, &Rational::from(1), &mut out);
    out
}

fn partition_branch(
    n: i64,
    remaining: u32,
    max_part: u32,
    parts: &mut Vec<u32>,
    coeff: &Rational,
    out: &mut Vec<(Vec<u32>, Rational)>,
) {
    if remaining == 0 {
        out.push((parts.clone(), coeff.clone()));
        return;
    }
    if max_part == 0 {
        return;
    }
    partition_branch(n, remaining, max_part - 1, parts, coeff, out);
    let max_count = remaining / max_part;
    let mut running = coeff.clone();
    let mut pushed = 0;
    for j in 1..=max_count {
        running = running * Rational::new(n, i64::from(max_part)).expect("positive part size")
            / Rational::from(i64::from(j));
        if running.is_zero() {
            break;
        }
        parts.push(max_part);
        pushed += 1;
        partition_branch(n, remaining - j * max_part, max_part - 1, parts, &running, out);
    }
    for _ in 0..pushed {
        parts.pop();
    }
}

fn insert_sorted(list: &mut Vec<u32>, value: u32) {
    let pos = list.iter().position(|&x| x > value).unwrap_or(list.len());
    list.insert(pos, value);
}

fn remove_one(list: &mut Vec<u32>, value: u32) {
    let pos = list
        .iter()
        .position(|&x| x == value)
        .expect("a removed magnitude is present");
    list.remove(pos);
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::level::Level;

    fn kappa23() -> Rational {
        Level::from_pair(2, 3).expect("valid level").kappa()
    }

    fn sorted(mut terms: Vec<(PiBasisVector, Rational)>) -> Vec<(PiBasisVector, Rational)> {
        terms.sort_by(|x, y| x.0.cmp(&y.0));
        terms
    }

    /// Collects raw terms into a single coefficient per basis vector.
    ///
    /// Composite currents report one term per constituent part, so equal
    /// vectors may appear more than once in the raw output.
    fn merged(terms: Vec<(PiBasisVector, Rational)>) -> Vec<(PiBasisVector, Rational)> {
        let mut map = std::collections::BTreeMap::new();
        for (v, coeff) in terms {
            *map.entry(v).or_insert_with(Rational::default) += &coeff;
        }
        map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    #[test]
    fn zero_modes_act_by_the_lattice_pairings() {
        let kappa = kappa23();
        let j = rat!(2, 5);
        let top = PiBasisVector::lattice_point(-1, &j + &kappa);

        let c0 = apply_current(PiField::C, 0, 0, &top, &kappa);
        assert_eq!(c0, vec![(top.clone(), rat!(-1))]);

        let d0 = apply_current(PiField::D, 0, 0, &top, &kappa);
        assert_eq!(d0, vec![(top.clone(), Rational::from(2) * &j + &kappa)]);

        let b0 = merged(apply_current(PiField::B, 0, 0, &top, &kappa));
        assert_eq!(b0, vec![(top.clone(), j.clone())]);

        let a0 = merged(apply_current(PiField::A, 0, 0, &top, &kappa));
        assert_eq!(a0, vec![(top.clone(), &j + &kappa)]);

        let shifted = apply_exp(2, 0, &top);
        let expected = PiBasisVector::lattice_point(-1, &j + &kappa + Rational::from(2));
        assert_eq!(shifted, vec![(expected, rat!(1))]);
    }

    #[test]
    fn lattice_weights_match_the_closed_form() {
        let kappa = kappa23();
        let vacuum = PiBasisVector::lattice_point(0, rat!(0));
        assert_eq!(vacuum.lattice_weight(&kappa), rat!(0));

        let charged = PiBasisVector::lattice_point(0, rat!(3));
        assert_eq!(charged.lattice_weight(&kappa), rat!(3));

        let relaxed = PiBasisVector::lattice_point(-1, rat!(7, 9));
        assert_eq!(relaxed.lattice_weight(&kappa), kappa);
        assert_eq!(relaxed.charge(&kappa), rat!(7, 9) - &kappa);
    }

    #[test]
    fn annihilation_modes_contract_dual_oscillators() {
        let kappa = kappa23();
        let v = PiBasisVector::with_oscillators(0, rat!(0), vec![2, 2], vec![1]);

        let c1 = apply_current(PiField::C, 0, 1, &v, &kappa);
        let c_expected = PiBasisVector::with_oscillators(0, rat!(0), vec![2, 2], vec![]);
        assert_eq!(c1, vec![(c_expected, rat!(2))]);

        let d2 = apply_current(PiField::D, 0, 2, &v, &kappa);
        let d_expected = PiBasisVector::with_oscillators(0, rat!(0), vec![2], vec![1]);
        assert_eq!(d2, vec![(d_expected, rat!(8))]);

        assert!(apply_current(PiField::C, 0, 3, &v, &kappa).is_empty());
        assert!(apply_current(PiField::C, 0, 2, &v, &kappa).is_empty());
    }

    #[test]
    fn derived_currents_carry_the_mode_polynomial() {
        let kappa = kappa23();
        let j = rat!(1, 3);
        let top = PiBasisVector::lattice_point(-1, &j + &kappa);

        // The first derivative kills the mode at -1, the second the modes at
        // -1 and -2; their zero modes are scalar multiples of the current's.
        assert!(apply_current(PiField::A, 1, -1, &top, &kappa).is_empty());
        assert!(apply_current(PiField::A, 2, -1, &top, &kappa).is_empty());
        assert!(apply_current(PiField::A, 2, -2, &top, &kappa).is_empty());

        let da0 = merged(apply_current(PiField::A, 1, 0, &top, &kappa));
        assert_eq!(da0, vec![(top.clone(), -(&j + &kappa))]);

        let dda0 = merged(apply_current(PiField::A, 2, 0, &top, &kappa));
        assert_eq!(dda0, vec![(top.clone(), Rational::from(2) * (&j + &kappa))]);
    }

    #[test]
    fn vertex_operator_modes_respect_the_charge_window() {
        let vacuum = PiBasisVector::lattice_point(0, rat!(0));

        assert!(apply_exp(1, 0, &vacuum).is_empty());
        let raised = apply_exp(1, -1, &vacuum);
        assert_eq!(
            raised,
            vec![(PiBasisVector::lattice_point(0, rat!(1)), rat!(1))]
        );

        assert!(apply_exp(-1, 2, &vacuum).is_empty());
        let lowered = apply_exp(-1, 1, &vacuum);
        assert_eq!(
            lowered,
            vec![(PiBasisVector::lattice_point(0, rat!(-1)), rat!(1))]
        );

        // One grade below the window edge the image carries one oscillator.
        let dressed = apply_exp(-1, 0, &vacuum);
        let expected = PiBasisVector::with_oscillators(0, rat!(-1), vec![1], vec![]);
        assert_eq!(dressed, vec![(expected, rat!(-1))]);
    }

    #[test]
    fn vertex_operator_contracts_d_oscillators() {
        let mu = rat!(1, 9);
        let v = PiBasisVector::with_oscillators(-1, mu.clone(), vec![], vec![1, 1]);

        // At this mode every oscillator must be removed, with coefficient
        // (-2)^2 binom(2, 2).
        let out = apply_exp(1, 2, &v);
        let expected = PiBasisVector::lattice_point(-1, &mu + Rational::from(1));
        assert_eq!(out, vec![(expected, rat!(4))]);

        // One grade lower: remove one of two, or remove both and emit a new
        // c oscillator from the creation tail.
        let out = sorted(apply_exp(1, 1, &v));
        let shifted = &mu + Rational::from(1);
        let expected = sorted(vec![
            (
                PiBasisVector::with_oscillators(-1, shifted.clone(), vec![], vec![1]),
                rat!(-4),
            ),
            (
                PiBasisVector::with_oscillators(-1, shifted, vec![1], vec![]),
                rat!(4),
            ),
        ]);
        assert_eq!(out, expected);
    }

    #[test]
    fn vertex_operator_emits_weighted_creation_partitions() {
        let mu = rat!(1, 9);
        let bare = PiBasisVector::lattice_point(-1, mu.clone());

        let out = sorted(apply_exp(1, -2, &bare));
        let shifted = &mu + Rational::from(1);
        let expected = sorted(vec![
            (
                PiBasisVector::with_oscillators(-1, shifted.clone(), vec![1, 1], vec![]),
                rat!(1, 2),
            ),
            (
                PiBasisVector::with_oscillators(-1, shifted.clone(), vec![2], vec![]),
                rat!(1, 2),
            ),
        ]);
        assert_eq!(out, expected);

        let out = sorted(apply_exp(-2, -3, &bare));
        let dropped = &mu - Rational::from(2);
        let expected = sorted(vec![
            (
                PiBasisVector::with_oscillators(-1, dropped.clone(), vec![1, 1, 1], vec![]),
                rat!(-4, 3),
            ),
            (
                PiBasisVector::with_oscillators(-1, dropped.clone(), vec![1, 2], vec![]),
                rat!(2),
            ),
            (
                PiBasisVector::with_oscillators(-1, dropped, vec![3], vec![]),
                rat!(-2, 3),
            ),
        ]);
        assert_eq!(out, expected);
    }

    #[test]
    fn normal_ordering_splits_at_the_left_factor_weight() {
        let kappa = kappa23();
        let j = rat!(2, 5);
        let top = PiBasisVector::lattice_point(-1, &j + &kappa);

        // : a e^{-c} : at mode zero on a bare relaxed point reduces to the
        // product of both zero modes.
        let op = PiOp::Normal(PiField::A, 0, Box::new(PiOp::Exp(-1)));
        let out = merged(apply_op(&op, 0, &top, &kappa));
        let expected = PiBasisVector::lattice_point(-1, &j - Rational::from(1) + &kappa);
        assert_eq!(out, vec![(expected, &j + &kappa)]);
    }

    fn field_strategy() -> impl Strategy<Value = PiField> {
        prop_oneof![
            Just(PiField::C),
            Just(PiField::D),
            Just(PiField::A),
            Just(PiField::B),
        ]
    }

    fn op_strategy() -> impl Strategy<Value = PiOp> {
        prop_oneof![
            (field_strategy(), 0u32..3).prop_map(|(f, der)| PiOp::Current(f, der)),
            (-2i64..=2).prop_map(PiOp::Exp),
            (field_strategy(), 0u32..2, -2i64..=2)
                .prop_map(|(f, der, n)| PiOp::Normal(f, der, Box::new(PiOp::Exp(n)))),
            (field_strategy(), -2i64..=2).prop_map(|(f, n)| {
                PiOp::Normal(
                    f,
                    0,
                    Box::new(PiOp::Normal(PiField::A, 0, Box::new(PiOp::Exp(n)))),
                )
            }),
        ]
    }

    fn vector_strategy() -> impl Strategy<Value = PiBasisVector> {
        (
            -1i64..=1,
            -6i64..=6,
            1i64..=4,
            proptest::collection::vec(1u32..=3, 0..3),
            proptest::collection::vec(1u32..=3, 0..3),
        )
            .prop_map(|(ell, num, den, c_osc, d_osc)| {
                let mu = Rational::new(num, den).expect("nonzero denominator");
                PiBasisVector::with_oscillators(ell, mu, c_osc, d_osc)
            })
    }

    proptest! {
        /// Every image term sits at the excitation and charge forced by the
        /// mode index and the operator's lattice shift.
        #[test]
        fn mode_actions_track_excitation_and_charge(
            op in op_strategy(),
            mode in -4i64..=4,
            v in vector_strategy(),
        ) {
            let kappa = kappa23();
            let shift = op.exp_charge();
            let expected_exc =
                i64::from(v.excitation()) - mode - shift * (v.ell() + 1);
            let expected_mu = v.mu() + Rational::from(shift);
            for (image, coeff) in apply_op(&op, mode, &v, &kappa) {
                prop_assert!(!coeff.is_zero());
                prop_assert_eq!(image.ell(), v.ell());
                prop_assert_eq!(image.mu(), &expected_mu);
                prop_assert_eq!(i64::from(image.excitation()), expected_exc);
            }
        }

        /// The memoized evaluator agrees with the direct recursion term by
        /// term after merging.
        #[test]
        fn cached_evaluation_matches_the_direct_recursion(
            op in op_strategy(),
            mode in -4i64..=4,
            v in vector_strategy(),
        ) {
            let kappa = kappa23();
            let mut cache = PiCache::new();
            let cached = apply_op_cached(&op, mode, &v, &kappa, &mut cache);
            let direct = merged(apply_op(&op, mode, &v, &kappa));
            prop_assert_eq!(cached.as_ref(), &direct);
        }
    }
}
