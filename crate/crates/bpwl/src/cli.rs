//! Command-line dispatch: parses one verb per invocation, runs the matching
//! computation, and renders a deterministic text or JSON document on stdout.
//!
//! Exit codes: `0` success, `2` malformed invocation, `3` level or parameter
//! out of scope, `4` internal invariant failure.  The `BPWL_THREADS`
//! environment variable caps the worker pool used by parallel sweeps.

use std::ffi::OsString;
use std::fmt;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::classifier::{
    classify_nondegenerate, classify_singlet_ordinary, classify_singlet_relaxed, kl_membership_23,
    minimal_qhr, orbit_image_hw_23, submodule_realisation, ClassifierError, FamilyTag,
    ModuleDescriptor, ModulePayload, RELAXED_FAMILIES,
};
use crate::engine::{verify_embedding, EngineError};
use crate::level::{Level, LevelError};
use crate::qseries::{check_string_convergence, string_fn_target};
use crate::scalars::Rational;

/// Rendering mode shared by every verb.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Compact human-readable lines.
    #[default]
    Text,
    /// Pretty-printed JSON.
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
        })
    }
}

#[derive(Parser)]
#[command(
    name = "bpwl",
    version,
    about = "Exact classification data for Bershadsky-Polyakov weight modules"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Classification table of a nondegenerate level k + 3 = u/v.
    Classify {
        /// Numerator of the shifted level.
        #[arg(long)]
        u: u32,
        /// Denominator of the shifted level.
        #[arg(long)]
        v: u32,
        /// Output format.
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Relaxed-module classification over one singlet spectrum point.
    Singlet {
        /// Spectrum parameter, as p/q.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Rational,
        /// Output format.
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Ordinary singlet family members in a parameter window.
    Ordinary {
        /// Lower end of the parameter window.
        #[arg(long, allow_hyphen_values = true, default_value = "-4")]
        min: Rational,
        /// Upper end of the parameter window.
        #[arg(long, allow_hyphen_values = true, default_value = "4")]
        max: Rational,
        /// Largest admitted top-space dimension.
        #[arg(long, default_value_t = 10)]
        dim_max: u32,
        /// Output format.
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Spectral-flow arrow out of an ordinary singlet family member.
    Orbit {
        /// Source family tag: 1 through 5.
        #[arg(long)]
        family: String,
        /// Source parameter, as p/q.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Rational,
        /// Output format.
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Minimal quotient weight and top dimension at indices (r, s).
    Qhr {
        /// First index, at least 1.
        #[arg(long)]
        r: u32,
        /// Second index, at least 1.
        #[arg(long)]
        s: u32,
        /// Numerator of the shifted level.
        #[arg(long, default_value_t = 2)]
        u: u64,
        /// Denominator of the shifted level.
        #[arg(long, default_value_t = 3)]
        v: u64,
        /// Output format.
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Ordinary-family membership grid of the minimal quotients at k = -7/3.
    Kl {
        /// Numerator of the shifted level; only 2 is in scope.
        #[arg(long, default_value_t = 2)]
        u: u64,
        /// Denominator of the shifted level; only 3 is in scope.
        #[arg(long, default_value_t = 3)]
        v: u64,
        /// Grid bound: both indices run over 1..=max.
        #[arg(long, default_value_t = 8)]
        max: u32,
        /// Output format.
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// String-function slices of the vacuum character against their target.
    Stringfn {
        /// Truncation order of the compared series.
        #[arg(long)]
        order: u32,
        /// Output format.
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Commutator verification sweep of the embedded generators.
    VerifyEmbedding {
        /// Numerator of the shifted level.
        #[arg(long, default_value_t = 2)]
        u: u64,
        /// Denominator of the shifted level.
        #[arg(long, default_value_t = 3)]
        v: u64,
        /// Charge of the relaxed ground vector; the default is a generic
        /// sample point.
        #[arg(long, allow_hyphen_values = true, default_value = "2/7")]
        j: Rational,
        /// Conformal weight of the Verma factor.
        #[arg(long, allow_hyphen_values = true, default_value = "1/3")]
        h: Rational,
        /// Rescaled weight-three eigenvalue of the Verma factor.
        #[arg(long, allow_hyphen_values = true, default_value = "-1/5")]
        w: Rational,
        /// Basis grade bound of the sweep.
        #[arg(long, default_value_t = 2)]
        grade: u32,
        /// Mode bound: generator modes run over -modes..=modes.
        #[arg(long, default_value_t = 2)]
        modes: u32,
        /// Output format.
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// A failed dispatch, carrying the process exit code it maps to.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Scope(String),
    Internal(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Scope(_) => 3,
            Failure::Internal(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) | Failure::Scope(msg) | Failure::Internal(msg) => {
                f.write_str(msg)
            }
        }
    }
}

fn classifier_failure(err: ClassifierError) -> Failure {
    match err {
        ClassifierError::NonCoprime(..)
        | ClassifierError::BadIndices(..)
        | ClassifierError::UnknownFamily(..) => Failure::Usage(err.to_string()),
        ClassifierError::Internal(..) => Failure::Internal(err.to_string()),
        _ => Failure::Scope(err.to_string()),
    }
}

fn level_failure(err: LevelError) -> Failure {
    match err {
        LevelError::CriticalLevel => Failure::Scope(err.to_string()),
        _ => Failure::Usage(err.to_string()),
    }
}

fn engine_failure(err: EngineError) -> Failure {
    match err {
        EngineError::ExcludedLevel(..) => Failure::Scope(err.to_string()),
        EngineError::TruncationOverflow { .. } => Failure::Usage(err.to_string()),
        EngineError::Internal(..) => Failure::Internal(err.to_string()),
    }
}

/// Parses the arguments, runs one verb, and prints its document.
///
/// Returns the process exit code; errors are reported on stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    if let Err(failure) = init_worker_pool() {
        eprintln!("error: {failure}");
        return failure.exit_code();
    }
    match dispatch(cli.verb) {
        Ok(document) => {
            println!("{document}");
            0
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    }
}

/// Applies the `BPWL_THREADS` cap to the global worker pool.
///
/// A failed installation only means a pool already exists, which is harmless
/// for a single dispatch, so it is ignored.
fn init_worker_pool() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("BPWL_THREADS") else {
        return Ok(());
    };
    let count: usize = raw.parse().map_err(|_| {
        Failure::Usage(format!(
            "BPWL_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    if count == 0 {
        return Err(Failure::Usage(
            "BPWL_THREADS must be a positive integer, got 0".to_string(),
        ));
    }
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(count)
        .build_global();
    Ok(())
}

fn dispatch(verb: Verb) -> Result<String, Failure> {
    match verb {
        Verb::Classify { u, v, format } => classify_doc(u, v, format),
        Verb::Singlet { lambda, format } => singlet_doc(&lambda, format),
        Verb::Ordinary {
            min,
            max,
            dim_max,
            format,
        } => ordinary_doc(&min, &max, dim_max, format),
        Verb::Orbit {
            family,
            lambda,
            format,
        } => orbit_doc(&family, &lambda, format),
        Verb::Qhr { r, s, u, v, format } => qhr_doc(r, s, u, v, format),
        Verb::Kl { u, v, max, format } => kl_doc(u, v, max, format),
        Verb::Stringfn { order, format } => stringfn_doc(order, format),
        Verb::VerifyEmbedding {
            u,
            v,
            j,
            h,
            w,
            grade,
            modes,
            format,
        } => verify_doc(u, v, &j, &h, &w, grade, modes, format),
    }
}

fn pretty_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map_err(|err| Failure::Internal(format!("serialization failed: {err}")))
}

fn join_rationals(values: &[Rational]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn describe_entry(entry: &ModuleDescriptor) -> String {
    let payload = match &entry.payload {
        ModulePayload::Weight(weight) => format!("weight {weight}"),
        ModulePayload::Relaxed(label) => format!("label {label}"),
    };
    let parameter = entry
        .parameter
        .as_ref()
        .map(|lambda| format!(" at lambda = {lambda}"))
        .unwrap_or_default();
    let conjugate = entry
        .conjugate
        .as_ref()
        .map(|weight| format!(", conjugate {weight}"))
        .unwrap_or_default();
    format!(
        "family {}{parameter}: {payload}, top dim {}{conjugate}",
        entry.source, entry.top_dim
    )
}

fn classify_doc(u: u32, v: u32, format: Format) -> Result<String, Failure> {
    let table = classify_nondegenerate(u, v).map_err(classifier_failure)?;
    Ok(match format {
        Format::Json => pretty_json(&table)?,
        Format::Text => {
            let mut lines = vec![format!("level ({u}, {v}): k = {}", table.level.k())];
            for orbit in &table.orbits {
                lines.push(format!(
                    "orbit {}: h = {}, w = {}",
                    orbit.rep, orbit.h, orbit.w_hat
                ));
                lines.push(format!("  j roots: {}", join_rationals(&orbit.j_roots)));
                lines.push(format!(
                    "  reducible cosets: {}",
                    join_rationals(&orbit.reducible_cosets)
                ));
                for entry in &orbit.quotients {
                    let payload = match &entry.payload {
                        ModulePayload::Weight(weight) => format!("weight {weight}"),
                        ModulePayload::Relaxed(label) => format!("label {label}"),
                    };
                    let at = entry
                        .roots
                        .first()
                        .map(|root| format!(" at j = {root}"))
                        .unwrap_or_default();
                    let conjugate = entry
                        .conjugate
                        .as_ref()
                        .map(|weight| format!(", conjugate {weight}"))
                        .unwrap_or_default();
                    lines.push(format!(
                        "  quotient{at}: {payload}, top dim {}{conjugate}",
                        entry.top_dim
                    ));
                }
            }
            lines.join("\n")
        }
    })
}

fn singlet_doc(lambda: &Rational, format: Format) -> Result<String, Failure> {
    let table = classify_singlet_relaxed(lambda).map_err(classifier_failure)?;
    Ok(match format {
        Format::Json => pretty_json(&table)?,
        Format::Text => {
            let mut lines = vec![format!(
                "lambda = {}: h = {}, w = {}",
                table.point.lambda, table.point.h, table.point.w_hat
            )];
            let named: Vec<String> = table
                .roots
                .iter()
                .zip(RELAXED_FAMILIES)
                .map(|(root, tag)| format!("({tag}) {root}"))
                .collect();
            lines.push(format!("roots: {}", named.join(", ")));
            if !table.collisions.is_empty() {
                let pairs: Vec<String> = table
                    .collisions
                    .iter()
                    .map(|(a, b)| format!("{a} ~ {b}"))
                    .collect();
                lines.push(format!("coset collisions: {}", pairs.join(", ")));
            }
            lines.push(format!(
                "reducible cosets: {}",
                join_rationals(&table.excluded_cosets)
            ));
            for entry in &table.quotients {
                lines.push(format!("quotient {}", describe_entry(entry)));
            }
            lines.join("\n")
        }
    })
}

fn ordinary_doc(
    min: &Rational,
    max: &Rational,
    dim_max: u32,
    format: Format,
) -> Result<String, Failure> {
    let entries = classify_singlet_ordinary(min, max, dim_max).map_err(classifier_failure)?;
    Ok(match format {
        Format::Json => pretty_json(&json!({
            "lambda_min": min,
            "lambda_max": max,
            "dim_max": dim_max,
            "families": entries,
        }))?,
        Format::Text => {
            let mut lines = vec![format!(
                "ordinary members for lambda in [{min}, {max}], top dim <= {dim_max}:"
            )];
            for entry in &entries {
                lines.push(describe_entry(entry));
            }
            lines.join("\n")
        }
    })
}

fn orbit_doc(family: &str, lambda: &Rational, format: Format) -> Result<String, Failure> {
    let tag: FamilyTag = family.parse().map_err(classifier_failure)?;
    let (image, mu, weight) = orbit_image_hw_23(tag, lambda).map_err(classifier_failure)?;
    Ok(match format {
        Format::Json => pretty_json(&json!({
            "source": { "family": tag, "lambda": lambda },
            "image": { "family": image, "lambda": mu, "weight": weight },
        }))?,
        Format::Text => format!(
            "family {tag} at lambda = {lambda} -> family {image} at lambda = {mu}, image weight {weight}"
        ),
    })
}

fn qhr_doc(r: u32, s: u32, u: u64, v: u64, format: Format) -> Result<String, Failure> {
    let level = Level::from_pair(u, v).map_err(level_failure)?;
    let (weight, top_dim) = minimal_qhr(r, s, &level).map_err(classifier_failure)?;
    let label = submodule_realisation(r, s, &level).map_err(classifier_failure)?;
    Ok(match format {
        Format::Json => pretty_json(&json!({
            "r": r,
            "s": s,
            "u": u,
            "v": v,
            "k": level.k(),
            "weight": weight,
            "top_dim": top_dim,
            "submodule": label,
        }))?,
        Format::Text => format!(
            "(r, s) = ({r}, {s}) at k = {}: weight {weight}, top dim {top_dim}\n\
             submodule realisation: {label}",
            level.k()
        ),
    })
}

fn kl_doc(u: u64, v: u64, max: u32, format: Format) -> Result<String, Failure> {
    if (u, v) != (2, 3) {
        return Err(Failure::Scope(format!(
            "membership data exists only at the singlet level k = -7/3, \
             the pair (2, 3); got ({u}, {v})"
        )));
    }
    if max == 0 {
        return Err(Failure::Usage("--max must be at least 1".to_string()));
    }
    let mut grid = Vec::with_capacity(max as usize);
    for r in 1..=max {
        let mut row = Vec::with_capacity(max as usize);
        for s in 1..=max {
            row.push(kl_membership_23(r, s).map_err(classifier_failure)?);
        }
        grid.push(row);
    }
    Ok(match format {
        Format::Json => pretty_json(&json!({
            "u": u,
            "v": v,
            "max": max,
            "grid": grid,
        }))?,
        Format::Text => {
            let mut lines = vec![format!(
                "ordinary-family membership at k = -7/3, r down, s across, 1..={max}:"
            )];
            for (row, cells) in grid.iter().enumerate() {
                let marks: Vec<&str> = cells
                    .iter()
                    .map(|&member| if member { "+" } else { "-" })
                    .collect();
                lines.push(format!("r={:>2}: {}", row + 1, marks.join(" ")));
            }
            lines.join("\n")
        }
    })
}

fn stringfn_doc(order: u32, format: Format) -> Result<String, Failure> {
    let report = check_string_convergence(order);
    let target = string_fn_target(0, order);
    Ok(match format {
        Format::Json => pretty_json(&json!({
            "order": report.order,
            "probed_to": report.probed_to,
            "stable_from": report.stable_from,
            "target": target.coefficients(),
            "witness": report.witness,
        }))?,
        Format::Text => {
            let mut lines = vec![format!(
                "order {}: target coefficients {}",
                report.order,
                join_rationals(target.coefficients())
            )];
            lines.push(format!(
                "slices equal the target for charge n >= {} (probed to {})",
                report.stable_from, report.probed_to
            ));
            match &report.witness {
                Some(witness) => lines.push(format!(
                    "charge-0 witness at q^{}: character {}, target {}",
                    witness.q_power, witness.character, witness.target
                )),
                None => lines.push("charge-0 slice equals the target".to_string()),
            }
            lines.join("\n")
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn verify_doc(
    u: u64,
    v: u64,
    j: &Rational,
    h: &Rational,
    w: &Rational,
    grade: u32,
    modes: u32,
    format: Format,
) -> Result<String, Failure> {
    let level = Level::from_pair(u, v).map_err(level_failure)?;
    let scan = verify_embedding(&level, j, h, w, grade, modes).map_err(engine_failure)?;
    Ok(match format {
        Format::Json => pretty_json(&scan)?,
        Format::Text => {
            let verdict = if scan.all_passed { "all passed" } else { "FAILURES" };
            let mut lines = vec![format!(
                "level ({u}, {v}), grade <= {}, modes within [-{}, {}]: basis {}, {verdict}",
                scan.basis_grade, scan.mode_bound, scan.mode_bound, scan.basis_size
            )];
            for pair in &scan.pairs {
                lines.push(format!(
                    "[{}, {}]: {} checks, {} failures",
                    pair.left, pair.right, pair.checks, pair.failures
                ));
            }
            lines.join("\n")
        }
    })
}
