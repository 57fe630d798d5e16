//! Exact truncated q-series, colored-partition product expansions, and the
//! two-variable vacuum character with its string-function extraction.
//!
//! Key items:
//!
//! - [`TruncatedSeries`] and [`TwoVarSeries`], exact coefficient containers
//!   for one- and two-variable expansions;
//! - [`inv_product_expand`], the expansion of an inverse product
//!   `prod_i (1 - q^i)^{-color(i)}` whose coefficients count colored
//!   partitions;
//! - [`string_fn_target`], the normalized charge-independent series
//!   `1 / prod_i (1 - q^i)^2 (1 - q^{i+1}) (1 - q^{i+2})`;
//! - [`bp_string_fn`], the normalized charge-`n` slice of the two-variable
//!   vacuum character;
//! - [`check_string_convergence`], the report showing from which charge on
//!   the character slices agree with the target.
//!
//! Characters carry an overall symbolic power `q^{n - c/24}` which is never
//! expanded; every comparison here is between normalized coefficient
//! sequences, where that power cancels.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::rat;
use crate::scalars::Rational;

/// The overall symbolic power of `q` stripped from a normalized series.
///
/// The exponent is `a * n + b * (c/24) + d` with the charge `n` and the
/// central charge `c` kept as symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QPrefactor {
    /// Coefficient of the charge symbol `n`.
    pub charge_coeff: Rational,
    /// Coefficient of the central-charge symbol `c/24`.
    pub central_coeff: Rational,
    /// Constant part of the exponent.
    pub constant: Rational,
}

impl QPrefactor {
    /// The exponent `n - c/24` shared by all normalized string functions.
    pub fn string_normalization() -> Self {
        QPrefactor {
            charge_coeff: rat!(1),
            central_coeff: rat!(-1),
            constant: rat!(0),
        }
    }
}

impl std::fmt::Display for QPrefactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "q^({} n + {} c/24 + {})",
            self.charge_coeff, self.central_coeff, self.constant
        )
    }
}

/// An exact power series in `q` truncated at a fixed order.
///
/// The coefficient vector always has length `order + 1`; an optional
/// symbolic prefactor exponent is carried separately and never mixed into
/// the coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncatedSeries {
    order: u32,
    coefficients: Vec<Rational>,
    prefactor: Option<QPrefactor>,
}

impl TruncatedSeries {
    /// Wraps a coefficient vector; its length fixes the order.
    ///
    /// # Panics
    ///
    /// Panics on an empty vector, which has no constant term.
    pub fn new(coefficients: Vec<Rational>) -> Self {
        assert!(
            !coefficients.is_empty(),
            "a truncated series carries at least its constant term"
        );
        TruncatedSeries {
            order: u32::try_from(coefficients.len() - 1).expect("order fits in u32"),
            coefficients,
            prefactor: None,
        }
    }

    /// The series `1` at the given order.
    pub fn one(order: u32) -> Self {
        let mut coefficients = vec![rat!(0); order as usize + 1];
        coefficients[0] = rat!(1);
        TruncatedSeries::new(coefficients)
    }

    /// Attaches a symbolic prefactor exponent.
    pub fn with_prefactor(mut self, prefactor: QPrefactor) -> Self {
        self.prefactor = Some(prefactor);
        self
    }

    /// Truncation order.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// The coefficient sequence, indexed by `q`-power.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// The coefficient of `q^power`, zero beyond the truncation order.
    pub fn coefficient(&self, power: u32) -> Rational {
        self.coefficients
            .get(power as usize)
            .cloned()
            .unwrap_or_else(|| rat!(0))
    }

    /// The symbolic prefactor, if any.
    pub fn prefactor(&self) -> Option<&QPrefactor> {
        self.prefactor.as_ref()
    }

    /// Exact product, truncated at the smaller of the two orders.
    ///
    /// Prefactors do not multiply; the product carries none.
    pub fn mul(&self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(rhs.order);
        let mut coefficients = vec![rat!(0); order as usize + 1];
        for (a, left) in self.coefficients.iter().enumerate().take(order as usize + 1) {
            if left.is_zero() {
                continue;
            }
            for (b, right) in rhs
                .coefficients
                .iter()
                .enumerate()
                .take(order as usize + 1 - a)
            {
                coefficients[a + b] += &(left * right);
            }
        }
        TruncatedSeries::new(coefficients)
    }
}

/// Color counts for partition parts: a finite head of explicit counts for
/// sizes `1, 2, ...` and a single tail count for every larger size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColorProfile {
    head: Vec<u32>,
    tail: u32,
}

impl ColorProfile {
    /// Builds a profile from explicit leading counts and a tail count.
    pub fn new(head: Vec<u32>, tail: u32) -> Self {
        ColorProfile { head, tail }
    }

    /// The profile with no colors at all; its expansion is the constant 1.
    pub fn empty() -> Self {
        ColorProfile::new(vec![], 0)
    }

    /// One color for every part size; its expansion counts partitions.
    pub fn plain_partitions() -> Self {
        ColorProfile::new(vec![], 1)
    }

    /// The string-function profile: two colors at size 1, three at size 2,
    /// four at every larger size.
    pub fn string_profile() -> Self {
        ColorProfile::new(vec![2, 3], 4)
    }

    /// Oscillator content of the rank-two half-lattice algebra: two colors
    /// at every size.
    pub fn half_lattice_profile() -> Self {
        ColorProfile::new(vec![], 2)
    }

    /// Mode content of the weight-2 and weight-3 generators of the vacuum
    /// Verma module: one color at size 2, two at every size from 3 on.
    pub fn w3_vacuum_profile() -> Self {
        ColorProfile::new(vec![0, 1], 2)
    }

    /// The number of colors available for parts of the given size.
    pub fn color(&self, size: u32) -> u32 {
        if size == 0 {
            return 0;
        }
        self.head
            .get(size as usize - 1)
            .copied()
            .unwrap_or(self.tail)
    }
}

/// Expands `prod_{i >= 1} (1 - q^i)^{-color(i)}` to the given order.
///
/// The coefficient of `q^d` counts partitions of `d` whose parts of size
/// `i` come in `color(i)` distinguishable colors.
pub fn inv_product_expand(profile: &ColorProfile, order: u32) -> TruncatedSeries {
    let mut series = TruncatedSeries::one(order);
    for size in 1..=order {
        for _ in 0..profile.color(size) {
            series = series.mul(&inv_linear_factor(size, order));
        }
    }
    series
}

/// The expansion of `1/(1 - q^size)` to the given order.
fn inv_linear_factor(size: u32, order: u32) -> TruncatedSeries {
    let mut coefficients = vec![rat!(0); order as usize + 1];
    let mut power = 0usize;
    while power <= order as usize {
        coefficients[power] = rat!(1);
        power += size as usize;
    }
    TruncatedSeries::new(coefficients)
}

/// The normalized string-function target, independent of the charge `n`.
///
/// After stripping `q^{n - c/24}`, every string function of the lemma
/// becomes `1 / prod_{i >= 1} (1 - q^i)^2 (1 - q^{i+1}) (1 - q^{i+2})`;
/// the charge survives only in the symbolic prefactor.
pub fn string_fn_target(_n: i64, order: u32) -> TruncatedSeries {
    inv_product_expand(&ColorProfile::string_profile(), order)
        .with_prefactor(QPrefactor::string_normalization())
}

/// A truncated two-variable expansion: for each `q`-power a Laurent
/// polynomial in `z`.
///
/// Rows respect the annulus expansion region `|q|^2 < |z| < |q|^{-1}`: the
/// charge-raising factors are expanded in `z q^i` and the charge-lowering
/// ones in `z^{-1} q^i` with `i >= 2`, so the row at `q^g` can only
/// populate `z`-powers between `-g/2` and `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoVarSeries {
    order: u32,
    rows: Vec<BTreeMap<i64, Rational>>,
}

impl TwoVarSeries {
    /// The series `1` at the given order.
    pub fn one(order: u32) -> Self {
        let mut rows = vec![BTreeMap::new(); order as usize + 1];
        rows[0].insert(0, rat!(1));
        TwoVarSeries { order, rows }
    }

    /// Truncation order in `q`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// The Laurent coefficients at a fixed `q`-power.
    pub fn row(&self, q_power: u32) -> &BTreeMap<i64, Rational> {
        &self.rows[q_power as usize]
    }

    /// The coefficient of `q^q_power z^z_power`.
    pub fn coefficient(&self, q_power: u32, z_power: i64) -> Rational {
        self.rows
            .get(q_power as usize)
            .and_then(|row| row.get(&z_power))
            .cloned()
            .unwrap_or_else(|| rat!(0))
    }

    /// Multiplies by `1/(1 - z^charge q^grade)` expanded in `z^charge q^grade`.
    ///
    /// # Panics
    ///
    /// Panics when `grade` is zero: such a factor has no expansion in `q`.
    pub fn mul_inv_linear(&self, charge: i64, grade: u32) -> Self {
        assert!(grade >= 1, "geometric factors need a positive grade");
        let mut rows = vec![BTreeMap::new(); self.order as usize + 1];
        for step in 0..=(self.order / grade) {
            let q_shift = step * grade;
            let z_shift = charge * i64::from(step);
            for q_power in 0..=(self.order - q_shift) {
                for (z_power, coeff) in &self.rows[q_power as usize] {
                    let entry = rows[(q_power + q_shift) as usize]
                        .entry(z_power + z_shift)
                        .or_insert_with(|| rat!(0));
                    *entry += coeff;
                }
            }
        }
        TwoVarSeries {
            order: self.order,
            rows,
        }
    }

    /// Checks that every populated `z`-power at `q^g` lies in `[-g/2, g]`.
    pub fn window_is_valid(&self) -> bool {
        self.rows.iter().enumerate().all(|(g, row)| {
            let g = g as i64;
            row.keys().all(|&z| -z * 2 <= g && z <= g)
        })
    }
}

/// The two-variable vacuum character to the given `q`-order.
///
/// The mode content is one neutral tower at every grade `i >= 1` and one at
/// every `i >= 2`, a charge `+1` tower at every `i >= 1`, and a charge `-1`
/// tower at every `i >= 2`, matching the weight-1, weight-2 pair of neutral
/// generators and the weight-1 (charge `+1`), weight-2 (charge `-1`) pair
/// of charged ones.
pub fn bp_vacuum_character(order: u32) -> TwoVarSeries {
    let mut character = TwoVarSeries::one(order);
    for grade in 1..=order {
        character = character.mul_inv_linear(0, grade);
        character = character.mul_inv_linear(1, grade);
    }
    for grade in 2..=order {
        character = character.mul_inv_linear(0, grade);
        character = character.mul_inv_linear(-1, grade);
    }
    debug_assert!(character.window_is_valid());
    character
}

/// The normalized charge-`n` string function of the vacuum character.
///
/// The coefficient of `q^d` is the number of charge-`n` states at absolute
/// grade `n + d`; grades below zero contribute nothing.  The symbolic
/// normalization `q^{n - c/24}` is carried on the prefactor.
pub fn bp_string_fn(n: i64, order: u32) -> TruncatedSeries {
    let absolute_order = n + i64::from(order);
    let character = if absolute_order >= 0 {
        bp_vacuum_character(u32::try_from(absolute_order).expect("checked sign"))
    } else {
        TwoVarSeries::one(0)
    };
    extract_normalized_slice(&character, n, order)
}

/// Reads the normalized charge-`n` slice out of a prepared character.
///
/// The character must extend to absolute order `n + order` for the slice to
/// be complete.
fn extract_normalized_slice(character: &TwoVarSeries, n: i64, order: u32) -> TruncatedSeries {
    let coefficients = (0..=order)
        .map(|d| {
            let grade = n + i64::from(d);
            if (0..=i64::from(character.order())).contains(&grade) {
                character.coefficient(u32::try_from(grade).expect("checked range"), n)
            } else {
                rat!(0)
            }
        })
        .collect();
    TruncatedSeries::new(coefficients).with_prefactor(QPrefactor::string_normalization())
}

/// The first coefficient where two series disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisagreementWitness {
    /// The `q`-power of the disagreeing coefficient.
    pub q_power: u32,
    /// Coefficient on the character side.
    pub character: Rational,
    /// Coefficient on the target side.
    pub target: Rational,
}

/// Outcome of comparing character slices against the target across charges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergenceReport {
    /// Truncation order of every compared series.
    pub order: u32,
    /// Largest charge probed.
    pub probed_to: u32,
    /// Smallest charge from which every probed slice equals the target.
    pub stable_from: u32,
    /// First disagreeing coefficient of the charge-0 slice, when any.
    pub witness: Option<DisagreementWitness>,
}

/// Compares [`bp_string_fn`] with [`string_fn_target`] for charges
/// `0..=order+2` at the given order.
///
/// Reports the smallest charge from which all probed slices agree with the
/// target, together with the first disagreeing coefficient at charge 0.
pub fn check_string_convergence(order: u32) -> ConvergenceReport {
    let probed_to = order + 2;
    let target = string_fn_target(0, order);
    let character = bp_vacuum_character(order + probed_to);
    let matches: Vec<bool> = (0..=probed_to)
        .map(|n| {
            let slice = extract_normalized_slice(&character, i64::from(n), order);
            slice.coefficients() == target.coefficients()
        })
        .collect();
    let stable_from = matches
        .iter()
        .rposition(|&agrees| !agrees)
        .map_or(0, |last_bad| u32::try_from(last_bad + 1).expect("fits"));
    let charge_zero = extract_normalized_slice(&character, 0, order);
    let witness = charge_zero
        .coefficients()
        .iter()
        .zip(target.coefficients())
        .position(|(a, b)| a != b)
        .map(|d| DisagreementWitness {
            q_power: u32::try_from(d).expect("fits"),
            character: charge_zero.coefficient(u32::try_from(d).expect("fits")),
            target: target.coefficient(u32::try_from(d).expect("fits")),
        });
    ConvergenceReport {
        order,
        probed_to,
        stable_from,
        witness,
    }
}
