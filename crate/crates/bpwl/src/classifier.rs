//! Classification tables for simple weight modules: highest-weight quotients
//! attached to the reducibility roots of relaxed families, the eight module
//! families of the singlet algebra at `k = -7/3`, and the minimal
//! quantum-hamiltonian-reduction quotients with their relaxed realisations.
//!
//! Key items:
//!
//! - [`classify_nondegenerate`], the full table of a nondegenerate pair:
//!   reducible cosets and highest-weight quotients per orbit;
//! - [`classify_singlet_relaxed`] and [`classify_singlet_ordinary`], the
//!   relaxed and ordinary sides of the singlet classification;
//! - [`coincidences_23`], the parameter values at which two singlet family
//!   formulas meet, recomputed exactly rather than tabulated;
//! - [`orbit_image_hw_23`], the one-step spectral-flow arrow out of each
//!   ordinary family, cross-checked against the flow formula;
//! - [`minimal_qhr`], [`submodule_realisation`] and [`kl_membership_23`],
//!   the two-parameter quotient modules, their conjugate realisations inside
//!   relaxed families, and their membership in the ordinary singlet families.
//!
//! Every table entry is revalidated on construction: quotient weights are
//! matched against family formulas, top-space dimensions against the Zhu
//! polynomial probe, and reducibility roots against the cubic.  A failed
//! revalidation surfaces as [`ClassifierError::Internal`] rather than a
//! silently wrong table.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::level::Level;
use crate::minmod::{orbit_hw, orbit_j_roots, z3_orbit_reps, SingletPoint};
use crate::rat;
use crate::scalars::{rational_roots, Rational, UniPoly};
use crate::weights::{
    conjugate_weight, g_n_eval, hw_spectral_flow_image, relaxed_cubic_eval, top_space_dim,
    BPWeight, RelaxedLabel,
};

/// Errors raised while assembling classification data.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifierError {
    /// The shifted-level pair must be coprime.
    #[error("pair ({0}, {1}) is not coprime")]
    NonCoprime(u32, u32),
    /// Levels with `v <= 2` admit no commuting weight-three factorisation,
    /// so no table exists for them.
    #[error(
        "pair ({0}, {1}) has v <= 2: no commuting weight-three factorisation \
         exists at this level, so its module table is out of scope"
    )]
    NoFactorisation(u32, u32),
    /// At `u = 2` only the singlet case `v = 3` has a known table.
    #[error("pair (2, {0}) is out of scope: only the singlet pair (2, 3) is classified at u = 2")]
    UnknownSpectrum(u32),
    /// The pair `(2, 3)` has its own classifiers.
    #[error("pair (2, 3) is the singlet case; use the singlet classifiers")]
    SingletLevel,
    /// Catch-all for pairs with `u < 3` or `v < 3` not covered above.
    #[error("pair ({0}, {1}) is not nondegenerate (need u, v >= 3)")]
    NotNondegenerate(u32, u32),
    /// The parameters `lambda = -1` and `lambda = 0` label the same
    /// spectrum point.
    #[error("lambda = -1 labels the same spectrum point as lambda = 0; use lambda = 0")]
    SingletDuplicate,
    /// Integer levels `k >= -1` are outside the scope of the quotient
    /// construction.
    #[error("level k = {0} is excluded: integer levels k >= -1 are out of scope")]
    ExcludedLevel(Rational),
    /// Quotient indices start at one.
    #[error("indices must satisfy r, s >= 1, got ({0}, {1})")]
    BadIndices(u32, u32),
    /// The requested family has no spectral-flow arrow at this parameter.
    #[error("family {family} has no spectral-flow arrow at lambda = {lambda}")]
    OutOfFamilyDomain {
        /// Requested source family.
        family: FamilyTag,
        /// Requested parameter.
        lambda: Rational,
    },
    /// A family tag string did not parse.
    #[error("unknown family tag {0:?} (expected one of i, ii, iii, 1, 2, 3, 4, 5)")]
    UnknownFamily(String),
    /// A cross-check between two independent routes to the same value
    /// failed; the table would have been wrong.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Names for the eight singlet module families at `k = -7/3`.
///
/// The three relaxed tags label quotients of reducible relaxed modules,
/// whose top spaces are infinite-dimensional; the five ordinary tags label
/// highest-weight modules with finite-dimensional top spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyTag {
    /// Quotient at the root `(3 lambda + 5)/9`.
    RelaxedI,
    /// Quotient at the root `(3 lambda + 2)/9`.
    RelaxedII,
    /// Quotient at the root `-(6 lambda + 1)/9`.
    RelaxedIII,
    /// One-dimensional top space through the vacuum, `j = lambda/3`.
    Ordinary1,
    /// Finite-top members on the `(3 lambda - 4)/9` line.
    Ordinary2,
    /// Finite-top members on the `(3 lambda - 7)/9` line.
    Ordinary3,
    /// Finite-top members on the `-(6 lambda + 10)/9` line, first branch.
    Ordinary4,
    /// Finite-top members on the `-(6 lambda + 10)/9` line, second branch.
    Ordinary5,
}

/// The five ordinary family tags in listing order.
pub const ORDINARY_FAMILIES: [FamilyTag; 5] = [
    FamilyTag::Ordinary1,
    FamilyTag::Ordinary2,
    FamilyTag::Ordinary3,
    FamilyTag::Ordinary4,
    FamilyTag::Ordinary5,
];

/// The three relaxed-quotient family tags in listing order.
pub const RELAXED_FAMILIES: [FamilyTag; 3] = [
    FamilyTag::RelaxedI,
    FamilyTag::RelaxedII,
    FamilyTag::RelaxedIII,
];

impl std::fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            FamilyTag::RelaxedI => "i",
            FamilyTag::RelaxedII => "ii",
            FamilyTag::RelaxedIII => "iii",
            FamilyTag::Ordinary1 => "1",
            FamilyTag::Ordinary2 => "2",
            FamilyTag::Ordinary3 => "3",
            FamilyTag::Ordinary4 => "4",
            FamilyTag::Ordinary5 => "5",
        };
        write!(f, "{name}")
    }
}

impl FromStr for FamilyTag {
    type Err = ClassifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "i" => Ok(FamilyTag::RelaxedI),
            "ii" => Ok(FamilyTag::RelaxedII),
            "iii" => Ok(FamilyTag::RelaxedIII),
            "1" => Ok(FamilyTag::Ordinary1),
            "2" => Ok(FamilyTag::Ordinary2),
            "3" => Ok(FamilyTag::Ordinary3),
            "4" => Ok(FamilyTag::Ordinary4),
            "5" => Ok(FamilyTag::Ordinary5),
            other => Err(ClassifierError::UnknownFamily(other.to_string())),
        }
    }
}

impl Serialize for FamilyTag {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Top-space dimension of a module: a finite count or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopDim {
    /// Finite-dimensional top space.
    Finite(u32),
    /// Infinite-dimensional top space.
    Infinite,
}

impl Serialize for TopDim {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            TopDim::Finite(n) => serializer.serialize_u32(*n),
            TopDim::Infinite => serializer.serialize_str("infinite"),
        }
    }
}

impl std::fmt::Display for TopDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TopDim::Finite(n) => write!(f, "{n}"),
            TopDim::Infinite => write!(f, "infinite"),
        }
    }
}

/// The structural kind of a classified module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ModuleKind {
    /// Irreducible relaxed module, `J_0` acting without extremal vectors.
    FullyRelaxed,
    /// Module generated by a highest-weight vector.
    HighestWeight,
    /// Module generated by a conjugate highest-weight vector.
    ConjugateHighestWeight,
}

/// The defining data of a classified module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ModulePayload {
    /// A relaxed family label `([j], h, w_hat)`.
    Relaxed(RelaxedLabel),
    /// A highest-weight pair `(j, delta)`.
    Weight(BPWeight),
}

/// One classified simple module together with its annotations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleDescriptor {
    /// Structural kind.
    pub kind: ModuleKind,
    /// Defining weight data.
    pub payload: ModulePayload,
    /// Spectral-flow exponent relative to the base point of its family.
    pub spectral_flow: i64,
    /// Top-space dimension.
    pub top_dim: TopDim,
    /// The family or orbit this entry comes from.
    pub source: String,
    /// Family parameter, for entries drawn from a parameterised family.
    pub parameter: Option<Rational>,
    /// Reducibility roots attached to this entry.
    pub roots: Vec<Rational>,
    /// The same module presented from its conjugate highest weight.
    pub conjugate: Option<BPWeight>,
}

/// One orbit of a nondegenerate table: spectrum data, reducible cosets, and
/// the highest-weight quotients at each root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitClassification {
    /// Canonical orbit representative.
    pub rep: String,
    /// Conformal weight of the orbit.
    pub h: Rational,
    /// Rescaled weight-three eigenvalue of the orbit.
    pub w_hat: Rational,
    /// Reducibility roots in orbit-cycle order.
    pub j_roots: Vec<Rational>,
    /// Canonical representatives of the reducible cosets, sorted.
    pub reducible_cosets: Vec<Rational>,
    /// Highest-weight quotient at each root, in orbit-cycle order.
    pub quotients: Vec<ModuleDescriptor>,
}

/// The classification table of a nondegenerate pair.
///
/// Relaxed modules at cosets outside `reducible_cosets` are irreducible and
/// are listed implicitly through that index; the explicit entries are the
/// highest-weight quotients arising at the roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationTable {
    /// The level of the table.
    pub level: Level,
    /// Numerator of the shifted level.
    pub u: u32,
    /// Denominator of the shifted level.
    pub v: u32,
    /// One block per orbit, sorted by canonical representative.
    pub orbits: Vec<OrbitClassification>,
}

impl ClassificationTable {
    /// All explicit module entries, in table order.
    pub fn entries(&self) -> impl Iterator<Item = &ModuleDescriptor> {
        self.orbits.iter().flat_map(|o| o.quotients.iter())
    }

    /// The reducible-point index: orbit representative to root cosets.
    pub fn reducible_index(&self) -> Vec<(String, Vec<Rational>)> {
        self.orbits
            .iter()
            .map(|o| (o.rep.clone(), o.reducible_cosets.clone()))
            .collect()
    }
}

/// The level `k = -7/3` of the singlet algebra.
pub fn singlet_level() -> Level {
    Level::from_pair(2, 3).expect("(2, 3) is a valid shifted-level pair")
}

/// Linear `j` and quadratic `delta` presentation of a family:
/// `j = slope * lambda + intercept`, `delta = q0 + q1 lambda + q2 lambda^2`.
fn family_shape(tag: FamilyTag) -> (Rational, Rational, [Rational; 3]) {
    let curve = [rat!(-5, 9), rat!(1, 2), rat!(1, 2)];
    match tag {
        FamilyTag::Ordinary1 => (rat!(1, 3), rat!(0), [rat!(0), rat!(5, 6), rat!(1, 2)]),
        FamilyTag::RelaxedI | FamilyTag::Ordinary2 => (rat!(1, 3), rat!(-4, 9), curve),
        FamilyTag::RelaxedII | FamilyTag::Ordinary3 => (rat!(1, 3), rat!(-7, 9), curve),
        FamilyTag::RelaxedIII | FamilyTag::Ordinary4 | FamilyTag::Ordinary5 => {
            (rat!(-2, 3), rat!(-10, 9), curve)
        }
    }
}

/// The weight `(j, delta)` of the family member at `lambda`.
///
/// The formula is evaluated without a domain check; pair it with
/// [`family_in_domain`] when membership matters.
pub fn family_weight(tag: FamilyTag, lambda: &Rational) -> BPWeight {
    let (slope, intercept, q) = family_shape(tag);
    let j = &(&slope * lambda) + &intercept;
    let delta = &(&q[0] + &(&q[1] * lambda)) + &(&(&q[2] * lambda) * lambda);
    BPWeight::new(j, delta)
}

/// True when `lambda - offset` is a nonnegative integer.
fn in_shifted_naturals(lambda: &Rational, offset: &Rational) -> bool {
    (lambda - offset).is_integer_at_least(0)
}

/// True when `-(lambda + offset)` is a nonnegative integer.
fn in_shifted_negatives(lambda: &Rational, offset: &Rational) -> bool {
    (-&(lambda + offset)).is_integer_at_least(0)
}

/// Whether `lambda` lies in the listing domain of the family.
///
/// The domains are mutually exclusive on weights: every simple module is
/// listed by exactly one `(family, lambda)` pair.  The excluded boundary
/// parameters reappear in [`coincidences_23`].
pub fn family_in_domain(tag: FamilyTag, lambda: &Rational) -> bool {
    match tag {
        FamilyTag::RelaxedI => {
            *lambda != rat!(-1) && !in_shifted_naturals(lambda, &rat!(1, 3))
        }
        FamilyTag::RelaxedII => {
            *lambda != rat!(-1) && !in_shifted_naturals(lambda, &rat!(2, 3))
        }
        FamilyTag::RelaxedIII => {
            *lambda != rat!(-1)
                && !in_shifted_negatives(lambda, &rat!(1, 3))
                && !in_shifted_negatives(lambda, &rat!(2, 3))
        }
        FamilyTag::Ordinary1 => *lambda != rat!(-5, 3),
        FamilyTag::Ordinary2 => in_shifted_naturals(lambda, &rat!(4, 3)),
        FamilyTag::Ordinary3 => in_shifted_naturals(lambda, &rat!(2, 3)),
        FamilyTag::Ordinary4 => in_shifted_negatives(lambda, &rat!(8, 3)),
        FamilyTag::Ordinary5 => in_shifted_negatives(lambda, &rat!(7, 3)),
    }
}

/// Top-space dimension of the family member at `lambda`.
///
/// Relaxed-quotient families always report [`TopDim::Infinite`].  For the
/// ordinary families the dimension is linear in `lambda`; `None` signals a
/// value that is not a positive integer, where no member exists.
pub fn family_top_dim(tag: FamilyTag, lambda: &Rational) -> Option<TopDim> {
    let linear = match tag {
        FamilyTag::RelaxedI | FamilyTag::RelaxedII | FamilyTag::RelaxedIII => {
            return Some(TopDim::Infinite)
        }
        FamilyTag::Ordinary1 => return Some(TopDim::Finite(1)),
        FamilyTag::Ordinary2 => lambda + &rat!(2, 3),
        FamilyTag::Ordinary3 => lambda + &rat!(1, 3),
        FamilyTag::Ordinary4 => -&(lambda + &rat!(2, 3)),
        FamilyTag::Ordinary5 => -&(lambda + &rat!(1, 3)),
    };
    let n = linear.to_i64()?;
    u32::try_from(n).ok().filter(|&n| n >= 1).map(TopDim::Finite)
}

/// Builds the classification table of a nondegenerate pair `(u, v)`.
///
/// Each orbit contributes three reducible cosets and three highest-weight
/// quotients with weights `(j_root - 1, h + kappa)`; relaxed modules at all
/// other cosets are irreducible and stay implicit.
///
/// # Errors
///
/// Rejects non-coprime pairs, pairs with `v <= 2` (no commuting
/// weight-three factorisation exists there), the singlet pair `(2, 3)`
/// (which has its own classifiers), and other pairs at `u = 2`, whose
/// spectra are not known.
pub fn classify_nondegenerate(u: u32, v: u32) -> Result<ClassificationTable, ClassifierError> {
    if u == 0 || v == 0 || num_integer::gcd(u, v) != 1 {
        return Err(ClassifierError::NonCoprime(u, v));
    }
    if u == 2 && v == 3 {
        return Err(ClassifierError::SingletLevel);
    }
    if v <= 2 {
        return Err(ClassifierError::NoFactorisation(u, v));
    }
    if u == 2 {
        return Err(ClassifierError::UnknownSpectrum(v));
    }
    if u < 3 {
        return Err(ClassifierError::NotNondegenerate(u, v));
    }
    let level = Level::from_pair(u64::from(u), u64::from(v)).expect("validated pair");
    let kappa = level.kappa();
    let labels = z3_orbit_reps(u, v).expect("validated pair");
    let mut orbits = Vec::with_capacity(labels.len());
    for label in &labels {
        let (h, w_hat) = orbit_hw(label, u, v);
        let j_roots = orbit_j_roots(label, u, v);
        let mut reducible_cosets: Vec<Rational> =
            j_roots.iter().map(Rational::coset_rep).collect();
        reducible_cosets.sort();
        reducible_cosets.dedup();
        if reducible_cosets.len() != j_roots.len() {
            return Err(ClassifierError::Internal(format!(
                "roots of orbit {label} fail to lie in distinct cosets"
            )));
        }
        let quotients = j_roots
            .iter()
            .map(|root| {
                let weight = BPWeight::new(root - &rat!(1), &h + &kappa);
                Ok(ModuleDescriptor {
                    kind: ModuleKind::HighestWeight,
                    payload: ModulePayload::Weight(weight.clone()),
                    spectral_flow: 0,
                    top_dim: TopDim::Infinite,
                    source: label.to_string(),
                    parameter: None,
                    roots: vec![root.clone()],
                    conjugate: Some(conjugate_weight(&weight, &level)),
                })
            })
            .collect::<Result<Vec<_>, ClassifierError>>()?;
        orbits.push(OrbitClassification {
            rep: label.to_string(),
            h,
            w_hat,
            j_roots,
            reducible_cosets,
            quotients,
        });
    }
    Ok(ClassificationTable {
        level,
        u,
        v,
        orbits,
    })
}

/// The relaxed side of the singlet classification at one parameter value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingletRelaxedClassification {
    /// The spectrum point `(lambda, h, w_hat)`.
    pub point: SingletPoint,
    /// The three reducibility roots, in family order `(i)`, `(ii)`, `(iii)`.
    pub roots: [Rational; 3],
    /// Root pairs lying in a common coset.
    pub collisions: Vec<(Rational, Rational)>,
    /// Canonical representatives of the reducible cosets, sorted.
    pub excluded_cosets: Vec<Rational>,
    /// One highest-weight quotient per reducible coset, taken at the
    /// smallest root of the coset, sorted by coset.
    pub quotients: Vec<ModuleDescriptor>,
}

/// Classifies the relaxed singlet modules over the spectrum point `lambda`.
///
/// Relaxed modules at cosets outside `excluded_cosets` are irreducible.
/// When two roots share a coset the surviving quotient is the one at the
/// smaller root; the discarded root is still reported via `collisions`.
///
/// # Errors
///
/// Rejects `lambda = -1`, which labels the same spectrum point as
/// `lambda = 0`.
pub fn classify_singlet_relaxed(
    lambda: &Rational,
) -> Result<SingletRelaxedClassification, ClassifierError> {
    if *lambda == rat!(-1) {
        return Err(ClassifierError::SingletDuplicate);
    }
    let level = singlet_level();
    let kappa = level.kappa();
    let point = SingletPoint::new(lambda.clone());
    let three_lambda = &rat!(3) * lambda;
    let roots = [
        &(&three_lambda + &rat!(5)) / &rat!(9),
        &(&three_lambda + &rat!(2)) / &rat!(9),
        &(-&(&(&rat!(6) * lambda) + &rat!(1))) / &rat!(9),
    ];
    for root in &roots {
        if relaxed_cubic_eval(root, &point.h, &point.w_hat, &level) != rat!(0) {
            return Err(ClassifierError::Internal(format!(
                "root {root} of the lambda = {lambda} fibre does not satisfy the cubic"
            )));
        }
    }
    let mut collisions = Vec::new();
    for a in 0..3 {
        for b in (a + 1)..3 {
            if roots[a].same_coset(&roots[b]) {
                collisions.push((roots[a].clone(), roots[b].clone()));
            }
        }
    }
    let mut by_coset: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for (idx, root) in roots.iter().enumerate() {
        by_coset.entry(root.coset_rep()).or_default().push(idx);
    }
    let excluded_cosets: Vec<Rational> = by_coset.keys().cloned().collect();
    let mut quotients = Vec::with_capacity(by_coset.len());
    for members in by_coset.values() {
        let &winner = members
            .iter()
            .min_by(|&&a, &&b| roots[a].cmp(&roots[b]).then(a.cmp(&b)))
            .expect("every coset group is nonempty");
        let tag = RELAXED_FAMILIES[winner];
        let weight = BPWeight::new(&roots[winner] - &rat!(1), &point.h + &kappa);
        if weight != family_weight(tag, lambda) {
            return Err(ClassifierError::Internal(format!(
                "quotient at root {} disagrees with the family {tag} formula",
                roots[winner]
            )));
        }
        let mut coset_roots: Vec<Rational> =
            members.iter().map(|&i| roots[i].clone()).collect();
        coset_roots.sort();
        quotients.push(ModuleDescriptor {
            kind: ModuleKind::HighestWeight,
            payload: ModulePayload::Weight(weight.clone()),
            spectral_flow: 0,
            top_dim: TopDim::Infinite,
            source: tag.to_string(),
            parameter: Some(lambda.clone()),
            roots: coset_roots,
            conjugate: Some(conjugate_weight(&weight, &level)),
        });
    }
    Ok(SingletRelaxedClassification {
        point,
        roots,
        collisions,
        excluded_cosets,
        quotients,
    })
}

/// Lists the ordinary singlet family members with parameter in
/// `[lambda_min, lambda_max]` and top dimension at most `dim_max`.
///
/// Parameters run over the lattice `(1/3) Z`, which carries every member of
/// families `(2)` through `(5)` and samples the one-parameter family `(1)`
/// at the same granularity.  Each entry's dimension is revalidated against
/// the Zhu polynomial probe before it is admitted.
///
/// # Errors
///
/// Fails only when a revalidation disagrees with the family data.
pub fn classify_singlet_ordinary(
    lambda_min: &Rational,
    lambda_max: &Rational,
    dim_max: u32,
) -> Result<Vec<ModuleDescriptor>, ClassifierError> {
    let level = singlet_level();
    let three = rat!(3);
    let lo = -(-&(lambda_min * &three)).floor_int();
    let hi = (lambda_max * &three).floor_int();
    let mut out = Vec::new();
    for tag in ORDINARY_FAMILIES {
        let mut m = lo.clone();
        while m <= hi {
            let lambda = Rational::from_big(m.clone(), BigInt::from(3))
                .expect("nonzero denominator");
            m += 1u32;
            if !family_in_domain(tag, &lambda) {
                continue;
            }
            let Some(TopDim::Finite(n)) = family_top_dim(tag, &lambda) else {
                return Err(ClassifierError::Internal(format!(
                    "family {tag} has no finite dimension at in-domain lambda = {lambda}"
                )));
            };
            if n > dim_max {
                continue;
            }
            let weight = family_weight(tag, &lambda);
            match top_space_dim(&weight, &level, n) {
                Some(d) if d == n => {}
                probe => {
                    return Err(ClassifierError::Internal(format!(
                        "family {tag} at lambda = {lambda} claims dimension {n}, probe found {probe:?}"
                    )))
                }
            }
            out.push(ModuleDescriptor {
                kind: ModuleKind::HighestWeight,
                payload: ModulePayload::Weight(weight.clone()),
                spectral_flow: 0,
                top_dim: TopDim::Finite(n),
                source: tag.to_string(),
                parameter: Some(lambda),
                roots: vec![],
                conjugate: Some(conjugate_weight(&weight, &level)),
            });
        }
    }
    Ok(out)
}

/// A weight reachable from two different family parameterisations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coincidence {
    /// The shared weight.
    pub weight: BPWeight,
    /// One side of the coincidence.
    pub first: (FamilyTag, Rational),
    /// The other side.
    pub second: (FamilyTag, Rational),
}

/// Substitutes `slope * x + intercept` into `p`.
fn compose_linear(p: &UniPoly, slope: &Rational, intercept: &Rational) -> UniPoly {
    let line = UniPoly::new(vec![intercept.clone(), slope.clone()]);
    let mut acc = UniPoly::zero();
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * &line) + &UniPoly::constant(c.clone());
    }
    acc
}

/// The `lambda`-coset carrying the family's discrete domain, if any.
fn domain_lattice(tag: FamilyTag) -> Option<Rational> {
    match tag {
        FamilyTag::Ordinary2 | FamilyTag::Ordinary4 => Some(rat!(1, 3)),
        FamilyTag::Ordinary3 | FamilyTag::Ordinary5 => Some(rat!(2, 3)),
        _ => None,
    }
}

/// Picks the tag in a shared-formula group that owns `lambda`, preferring
/// exact domain membership, then the matching domain lattice.
fn attribute(tags: &[FamilyTag], lambda: &Rational) -> (FamilyTag, bool) {
    for &tag in tags {
        if family_in_domain(tag, lambda) {
            return (tag, true);
        }
    }
    for &tag in tags {
        if domain_lattice(tag).is_some_and(|c| lambda.coset_rep() == c) {
            return (tag, false);
        }
    }
    (tags[0], false)
}

/// Solves `weight_a(lambda) = weight_b(mu)` for every pair of distinct
/// family shapes in `groups`, keeping solutions with at least one side in
/// its listing domain.
fn coincidences_among(groups: &[&[FamilyTag]]) -> Result<Vec<Coincidence>, ClassifierError> {
    let mut out = Vec::new();
    for a in 0..groups.len() {
        for b in (a + 1)..groups.len() {
            let (slope_a, const_a, quad_a) = family_shape(groups[a][0]);
            let (slope_b, const_b, quad_b) = family_shape(groups[b][0]);
            let alpha = slope_a
                .checked_div(&slope_b)
                .expect("family slopes are nonzero");
            let beta = (&const_a - &const_b)
                .checked_div(&slope_b)
                .expect("family slopes are nonzero");
            let delta_a = UniPoly::new(quad_a.to_vec());
            let delta_b = compose_linear(&UniPoly::new(quad_b.to_vec()), &alpha, &beta);
            let diff = &delta_a - &delta_b;
            if diff.degree().is_none() {
                return Err(ClassifierError::Internal(
                    "two distinct family shapes agree identically".to_string(),
                ));
            }
            let (solutions, _) = rational_roots(&diff).expect("nonzero polynomial");
            for lambda in solutions {
                let mu = &(&alpha * &lambda) + &beta;
                let (tag_a, in_a) = attribute(groups[a], &lambda);
                let (tag_b, in_b) = attribute(groups[b], &mu);
                let weight_a = family_weight(tag_a, &lambda);
                let weight_b = family_weight(tag_b, &mu);
                if weight_a != weight_b {
                    return Err(ClassifierError::Internal(format!(
                        "solved coincidence disagrees: {weight_a} vs {weight_b}"
                    )));
                }
                if !(in_a || in_b) {
                    continue;
                }
                out.push(Coincidence {
                    weight: weight_a,
                    first: (tag_a, lambda),
                    second: (tag_b, mu),
                });
            }
        }
    }
    out.sort_by(|x, y| x.weight.cmp(&y.weight));
    Ok(out)
}

/// Recomputes the coincidence lists of the singlet families: first the
/// relaxed-quotient families `(i)` through `(iii)`, then the ordinary
/// families `(1)` through `(5)`.
///
/// Nothing is tabulated: each list is solved exactly from the family
/// formulas, and both sides of every solution are evaluated independently
/// and compared.
///
/// # Errors
///
/// Fails when the two evaluation routes disagree.
pub fn coincidences_23() -> Result<(Vec<Coincidence>, Vec<Coincidence>), ClassifierError> {
    let relaxed_groups: [&[FamilyTag]; 3] = [
        &[FamilyTag::RelaxedI],
        &[FamilyTag::RelaxedII],
        &[FamilyTag::RelaxedIII],
    ];
    let ordinary_groups: [&[FamilyTag]; 4] = [
        &[FamilyTag::Ordinary1],
        &[FamilyTag::Ordinary2],
        &[FamilyTag::Ordinary3],
        &[FamilyTag::Ordinary4, FamilyTag::Ordinary5],
    ];
    let relaxed = coincidences_among(&relaxed_groups)?;
    let ordinary = coincidences_among(&ordinary_groups)?;
    Ok((relaxed, ordinary))
}

/// The one-step spectral-flow arrow out of an ordinary family member.
///
/// Returns the image family, its parameter, and the image weight.  The
/// weight is computed twice, from the image family formula and from the
/// flow of the source weight through its top space, and the two must agree.
///
/// # Errors
///
/// Rejects relaxed-quotient source tags and parameters outside the stated
/// arrow domains.
pub fn orbit_image_hw_23(
    tag: FamilyTag,
    lambda: &Rational,
) -> Result<(FamilyTag, Rational, BPWeight), ClassifierError> {
    let level = singlet_level();
    let out_of_domain = || ClassifierError::OutOfFamilyDomain {
        family: tag,
        lambda: lambda.clone(),
    };
    let (image, mu) = match tag {
        FamilyTag::Ordinary1 => (FamilyTag::RelaxedII, lambda + &rat!(2, 3)),
        FamilyTag::Ordinary2 => {
            if !in_shifted_naturals(lambda, &rat!(1, 3)) {
                return Err(out_of_domain());
            }
            (FamilyTag::RelaxedIII, lambda - &rat!(2, 3))
        }
        FamilyTag::Ordinary3 => {
            if !in_shifted_naturals(lambda, &rat!(2, 3)) {
                return Err(out_of_domain());
            }
            (FamilyTag::RelaxedIII, lambda - &rat!(2, 3))
        }
        FamilyTag::Ordinary4 => {
            if !in_shifted_negatives(lambda, &rat!(5, 3)) {
                return Err(out_of_domain());
            }
            (FamilyTag::Ordinary1, lambda.clone())
        }
        FamilyTag::Ordinary5 => {
            if !in_shifted_negatives(lambda, &rat!(4, 3)) {
                return Err(out_of_domain());
            }
            (FamilyTag::RelaxedI, lambda + &rat!(1, 3))
        }
        _ => return Err(out_of_domain()),
    };
    let Some(TopDim::Finite(n)) = family_top_dim(tag, lambda) else {
        return Err(ClassifierError::Internal(format!(
            "arrow source {tag} at lambda = {lambda} has no finite top dimension"
        )));
    };
    let source = family_weight(tag, lambda);
    let expected = family_weight(image, &mu);
    let flowed = hw_spectral_flow_image(&source, n, &level);
    if flowed != expected {
        return Err(ClassifierError::Internal(format!(
            "flow of {source} through dimension {n} gives {flowed}, family {image} expects {expected}"
        )));
    }
    Ok((image, mu, expected))
}

/// The highest weight and top dimension of the minimal quotient module with
/// indices `(r, s)` at an in-scope level.
///
/// The weight is `j = (r + 2s - 3)/3` and
/// `delta = (r^2 + rs + s^2 - 3)/(3(k+3)) - (2r + s - 3)/3`; the top
/// dimension is `s`, revalidated against the factorised Zhu values
/// `(n - r - s + k + 3)(n - s)` and against the probe.
///
/// # Errors
///
/// Rejects `r = 0` or `s = 0` and integer levels `k >= -1`.
pub fn minimal_qhr(r: u32, s: u32, level: &Level) -> Result<(BPWeight, u32), ClassifierError> {
    if r == 0 || s == 0 {
        return Err(ClassifierError::BadIndices(r, s));
    }
    if level.k().is_integer_at_least(-1) {
        return Err(ClassifierError::ExcludedLevel(level.k().clone()));
    }
    let big = |x: u32| Rational::from(i64::from(x));
    let (rr, ss) = (big(r), big(s));
    let three = rat!(3);
    let shift = level.shifted();
    let j = &(&(&rr + &(&rat!(2) * &ss)) - &three) / &three;
    let casimir = &(&(&(&rr * &rr) + &(&rr * &ss)) + &(&ss * &ss)) - &three;
    let delta = &(&casimir / &(&three * &shift)) - &(&(&(&(&rat!(2) * &rr) + &ss) - &three) / &three);
    let weight = BPWeight::new(j, delta);
    for n in 1..=s {
        let direct = g_n_eval(n, &weight, level).expect("n >= 1");
        let nn = big(n);
        let factored = &(&(&nn - &(&rr + &ss)) + &shift) * &(&nn - &ss);
        if direct != factored {
            return Err(ClassifierError::Internal(format!(
                "Zhu value at n = {n} does not match its factorised form for (r, s) = ({r}, {s})"
            )));
        }
    }
    match top_space_dim(&weight, level, s) {
        Some(d) if d == s => {}
        probe => {
            return Err(ClassifierError::Internal(format!(
                "expected top dimension {s} for (r, s) = ({r}, {s}), probe found {probe:?}"
            )))
        }
    }
    Ok((weight, s))
}

/// The relaxed family label realising the minimal quotient of `(r, s)` as a
/// submodule generated by a conjugate highest-weight vector.
///
/// The label is `[j']` with `j' = (r + 2s - 2(k+3))/3`, top conformal
/// weight `h = (r^2 + rs + s^2 - 3)/(3(k+3)) - r - s + 2`, and
/// `w_hat = -((r-s)/3)((2r+s)/3 - (k+3))((r+2s)/3 - (k+3))`.  Three
/// consistency checks run on every call: `j'` equals the flow shift
/// `j - kappa` of the quotient's highest weight, `h` equals `delta - j`,
/// and the reducibility cubic of `(h, w_hat)` vanishes at `j'`.
///
/// # Errors
///
/// Shares the preconditions of [`minimal_qhr`]; additionally fails when any
/// consistency check is violated.
pub fn submodule_realisation(
    r: u32,
    s: u32,
    level: &Level,
) -> Result<RelaxedLabel, ClassifierError> {
    let (hw, _) = minimal_qhr(r, s, level)?;
    let big = |x: u32| Rational::from(i64::from(x));
    let (rr, ss) = (big(r), big(s));
    let three = rat!(3);
    let shift = level.shifted();
    let j_prime = &(&(&rr + &(&rat!(2) * &ss)) - &(&rat!(2) * &shift)) / &three;
    if j_prime != &hw.j - &level.kappa() {
        return Err(ClassifierError::Internal(format!(
            "conjugate point of (r, s) = ({r}, {s}) drifted from the flow shift"
        )));
    }
    let casimir = &(&(&(&rr * &rr) + &(&rr * &ss)) + &(&ss * &ss)) - &three;
    let h = &(&(&casimir / &(&three * &shift)) - &(&rr + &ss)) + &rat!(2);
    if h != &hw.delta - &hw.j {
        return Err(ClassifierError::Internal(format!(
            "top conformal weight of (r, s) = ({r}, {s}) disagrees with delta - j"
        )));
    }
    let first = &(&rr - &ss) / &three;
    let second = &(&(&(&rat!(2) * &rr) + &ss) / &three) - &shift;
    let third = &(&(&rr + &(&rat!(2) * &ss)) / &three) - &shift;
    let w_hat = -&(&(&first * &second) * &third);
    if relaxed_cubic_eval(&j_prime, &h, &w_hat, level) != rat!(0) {
        return Err(ClassifierError::Internal(format!(
            "reducibility cubic does not vanish at the conjugate point of (r, s) = ({r}, {s})"
        )));
    }
    Ok(RelaxedLabel::new(j_prime, h, w_hat))
}

/// Finds the ordinary singlet family member carrying the given weight.
///
/// Each family's `j` formula is inverted for `lambda`; a hit requires the
/// parameter to sit in the family's domain and the full weight to match.
pub fn ordinary_family_member(weight: &BPWeight) -> Option<(FamilyTag, Rational)> {
    for tag in ORDINARY_FAMILIES {
        let (slope, intercept, _) = family_shape(tag);
        let lambda = (&weight.j - &intercept)
            .checked_div(&slope)
            .expect("family slopes are nonzero");
        if family_in_domain(tag, &lambda) && family_weight(tag, &lambda) == *weight {
            return Some((tag, lambda));
        }
    }
    None
}

/// Whether the minimal quotient of `(r, s)` at `k = -7/3` lies in one of
/// the five ordinary singlet families.
///
/// A positive answer is double-checked: the matched family must also agree
/// on the top dimension `s`.
///
/// # Errors
///
/// Shares the preconditions of [`minimal_qhr`].
pub fn kl_membership_23(r: u32, s: u32) -> Result<bool, ClassifierError> {
    let level = singlet_level();
    let (weight, dim) = minimal_qhr(r, s, &level)?;
    match ordinary_family_member(&weight) {
        Some((tag, lambda)) => {
            if family_top_dim(tag, &lambda) != Some(TopDim::Finite(dim)) {
                return Err(ClassifierError::Internal(format!(
                    "family {tag} at lambda = {lambda} disagrees with dimension {dim} at (r, s) = ({r}, {s})"
                )));
            }
            Ok(true)
        }
        None => Ok(false),
    }
}
