//! C ABI for the bpwl library.
//!
//! The surface follows three conventions.  Levels are opaque handles created
//! by [`bpwl_level_new`] or [`bpwl_level_from_k`] and released by
//! [`bpwl_level_free`].  Every fallible call returns a [`BpwlStatus`] code and
//! writes its result through an out-pointer.  Structured results are UTF-8
//! JSON documents allocated by this library and released by
//! [`bpwl_string_free`]; rationals travel as `"p/q"` strings in both
//! directions.

use std::ffi::{c_char, CStr, CString};

use bpwl::classifier::{
    classify_nondegenerate, classify_singlet_ordinary, classify_singlet_relaxed, kl_membership_23,
    minimal_qhr, orbit_image_hw_23, submodule_realisation, ClassifierError, FamilyTag,
};
use bpwl::engine::{verify_embedding, EngineError};
use bpwl::level::{Level, LevelError};
use bpwl::qseries::check_string_convergence;
use bpwl::scalars::Rational;
use serde::Serialize;
use serde_json::json;

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BpwlStatus {
    /// The call succeeded and the out-pointer holds the result.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A string argument did not parse as a rational `p/q`.
    ParseError = 3,
    /// The level or parameter lies outside the computable range.
    OutOfScope = 4,
    /// The request was malformed: bad indices, unknown family tag,
    /// non-coprime pair, or a zero bound.
    BadRequest = 5,
    /// An internal cross-check failed; the result would have been wrong.
    InternalError = 6,
}

/// Opaque handle to a validated non-critical level.
pub struct BpwlLevel(Level);

fn level_status(err: &LevelError) -> BpwlStatus {
    match err {
        LevelError::CriticalLevel => BpwlStatus::OutOfScope,
        LevelError::NonCoprimePair(..) | LevelError::PairOutOfRange(..) => BpwlStatus::BadRequest,
    }
}

fn classifier_status(err: &ClassifierError) -> BpwlStatus {
    match err {
        ClassifierError::NonCoprime(..)
        | ClassifierError::BadIndices(..)
        | ClassifierError::UnknownFamily(..) => BpwlStatus::BadRequest,
        ClassifierError::Internal(..) => BpwlStatus::InternalError,
        _ => BpwlStatus::OutOfScope,
    }
}

fn engine_status(err: &EngineError) -> BpwlStatus {
    match err {
        EngineError::ExcludedLevel(..) => BpwlStatus::OutOfScope,
        EngineError::TruncationOverflow { .. } => BpwlStatus::BadRequest,
        EngineError::Internal(..) => BpwlStatus::InternalError,
    }
}

/// Reads a UTF-8 string argument.
///
/// # Safety
///
/// `ptr` must be null or point to a NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, BpwlStatus> {
    if ptr.is_null() {
        return Err(BpwlStatus::NullArgument);
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| BpwlStatus::InvalidUtf8)
}

/// Reads a rational argument written as `p/q`.
///
/// # Safety
///
/// `ptr` must be null or point to a NUL-terminated string.
unsafe fn read_rational(ptr: *const c_char) -> Result<Rational, BpwlStatus> {
    unsafe { read_str(ptr) }?
        .parse()
        .map_err(|_| BpwlStatus::ParseError)
}

/// Serializes `value` and writes the allocation through `out`.
///
/// # Safety
///
/// `out` must be null or valid for a single pointer write.
unsafe fn write_json<T: Serialize>(value: &T, out: *mut *mut c_char) -> BpwlStatus {
    if out.is_null() {
        return BpwlStatus::NullArgument;
    }
    let Ok(text) = serde_json::to_string(value) else {
        return BpwlStatus::InternalError;
    };
    let Ok(owned) = CString::new(text) else {
        return BpwlStatus::InternalError;
    };
    unsafe { *out = owned.into_raw() };
    BpwlStatus::Ok
}

/// Borrows the level behind a handle.
///
/// # Safety
///
/// `level` must be null or a live handle from a `bpwl_level_*` constructor.
unsafe fn read_level<'a>(level: *const BpwlLevel) -> Result<&'a Level, BpwlStatus> {
    if level.is_null() {
        return Err(BpwlStatus::NullArgument);
    }
    Ok(unsafe { &(*level).0 })
}

/// Returns the library version as a NUL-terminated string.
///
/// Release the result with [`bpwl_string_free`].
#[no_mangle]
pub extern "C" fn bpwl_version() -> *mut c_char {
    match CString::new(env!("CARGO_PKG_VERSION")) {
        Ok(version) => version.into_raw(),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Releases a string allocated by this library.  A null pointer is a no-op.
///
/// # Safety
///
/// `s` must be null or a pointer previously returned by a `bpwl_*` function
/// and not yet freed; passing any other pointer is undefined behavior.
#[no_mangle]
pub unsafe extern "C" fn bpwl_string_free(s: *mut c_char) {
    if s.is_null() {
        return;
    }
    // SAFETY: the caller guarantees `s` came from `CString::into_raw` here.
    let _ = unsafe { CString::from_raw(s) };
}

/// Creates a level handle from the shifted-level pair `k + 3 = u / v`.
///
/// # Safety
///
/// `out_level` must be valid for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn bpwl_level_new(
    u: u64,
    v: u64,
    out_level: *mut *mut BpwlLevel,
) -> BpwlStatus {
    if out_level.is_null() {
        return BpwlStatus::NullArgument;
    }
    match Level::from_pair(u, v) {
        Ok(level) => {
            unsafe { *out_level = Box::into_raw(Box::new(BpwlLevel(level))) };
            BpwlStatus::Ok
        }
        Err(err) => level_status(&err),
    }
}

/// Creates a level handle from a rational level written as `p/q`.
///
/// # Safety
///
/// `k` must point to a NUL-terminated string and `out_level` must be valid
/// for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn bpwl_level_from_k(
    k: *const c_char,
    out_level: *mut *mut BpwlLevel,
) -> BpwlStatus {
    if out_level.is_null() {
        return BpwlStatus::NullArgument;
    }
    let value = match unsafe { read_rational(k) } {
        Ok(value) => value,
        Err(status) => return status,
    };
    match Level::from_k(value) {
        Ok(level) => {
            unsafe { *out_level = Box::into_raw(Box::new(BpwlLevel(level))) };
            BpwlStatus::Ok
        }
        Err(err) => level_status(&err),
    }
}

/// Releases a level handle.  A null pointer is a no-op.
///
/// # Safety
///
/// `level` must be null or a handle from a `bpwl_level_*` constructor,
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bpwl_level_free(level: *mut BpwlLevel) {
    if level.is_null() {
        return;
    }
    // SAFETY: the caller guarantees `level` came from `Box::into_raw` here.
    let _ = unsafe { Box::from_raw(level) };
}

/// Writes a JSON summary of the level: `k`, the shifted pair when it is
/// known, derived constants, and scope flags.
///
/// # Safety
///
/// `level` must be a live handle and `out_json` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn bpwl_level_info_json(
    level: *const BpwlLevel,
    out_json: *mut *mut c_char,
) -> BpwlStatus {
    let level = match unsafe { read_level(level) } {
        Ok(level) => level,
        Err(status) => return status,
    };
    let doc = json!({
        "k": level.k(),
        "pair": level.pair(),
        "kappa": level.kappa(),
        "c_bp": level.c_bp(),
        "c_w3": level.c_w3(),
        "c_pi": level.c_pi(),
        "admissible": level.is_admissible(),
        "nondegenerate": level.is_nondegenerate(),
        "embedding_exists": level.embedding_exists(),
    });
    unsafe { write_json(&doc, out_json) }
}

/// Writes the module classification table of a nondegenerate pair `(u, v)`.
///
/// # Safety
///
/// `out_json` must be valid for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn bpwl_classify_json(
    u: u32,
    v: u32,
    out_json: *mut *mut c_char,
) -> BpwlStatus {
    match classify_nondegenerate(u, v) {
        Ok(table) => unsafe { write_json(&table, out_json) },
        Err(err) => classifier_status(&err),
    }
}

/// Writes the relaxed singlet classification over the spectrum point
/// `lambda`, written as `p/q`.
///
/// # Safety
///
/// `lambda` must point to a NUL-terminated string and `out_json` must be
/// valid for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn bpwl_singlet_relaxed_json(
    lambda: *const c_char,
    out_json: *mut *mut c_char,
) -> BpwlStatus {
    let lambda = match unsafe { read_rational(lambda) } {
        Ok(lambda) => lambda,
        Err(status) => return status,
    };
    match classify_singlet_relaxed(&lambda) {
        Ok(table) => unsafe { write_json(&table, out_json) },
        Err(err) => classifier_status(&err),
    }
}

/// Writes the ordinary singlet family members with parameter in
/// `[lambda_min, lambda_max]` and top dimension at most `dim_max`.
///
/// # Safety
///
/// `lambda_min` and `lambda_max` must point to NUL-terminated strings and
/// `out_json` must be valid for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn bpwl_singlet_ordinary_json(
    lambda_min: *const c_char,
    lambda_max: *const c_char,
    dim_max: u32,
    out_json: *mut *mut c_char,
) -> BpwlStatus {
    let min = match unsafe { read_rational(lambda_min) } {
        Ok(min) => min,
        Err(status) => return status,
    };
    let max = match unsafe { read_rational(lambda_max) } {
        Ok(max) => max,
        Err(status) => return status,
    };
    match classify_singlet_ordinary(&min, &max, dim_max) {
        Ok(entries) => unsafe {
            write_json(
                &json!({
                    "lambda_min": min,
                    "lambda_max": max,
                    "dim_max": dim_max,
                    "families": entries,
                }),
                out_json,
            )
        },
        Err(err) => classifier_status(&err),
    }
}

/// Writes the spectral-flow arrow out of an ordinary singlet family member.
///
/// `family` is a tag (`1` through `5`), `lambda` a rational `p/q`.
///
/// # Safety
///
/// `family` and `lambda` must point to NUL-terminated strings and `out_json`
/// must be valid for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn bpwl_orbit_image_json(
    family: *const c_char,
    lambda: *const c_char,
    out_json: *mut *mut c_char,
) -> BpwlStatus {
    let family = match unsafe { read_str(family) } {
        Ok(family) => family,
        Err(status) => return status,
    };
    let lambda = match unsafe { read_rational(lambda) } {
        Ok(lambda) => lambda,
        Err(status) => return status,
    };
    let tag: FamilyTag = match family.parse() {
        Ok(tag) => tag,
        Err(err) => return classifier_status(&err),
    };
    match orbit_image_hw_23(tag, &lambda) {
        Ok((image, mu, weight)) => unsafe {
            write_json(
                &json!({
                    "source": { "family": tag, "lambda": lambda },
                    "image": { "family": image, "lambda": mu, "weight": weight },
                }),
                out_json,
            )
        },
        Err(err) => classifier_status(&err),
    }
}

/// Writes the minimal quotient data at indices `(r, s)` over the level
/// handle: highest weight, top dimension, and the submodule realisation.
///
/// # Safety
///
/// `level` must be a live handle and `out_json` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn bpwl_qhr_json(
    r: u32,
    s: u32,
    level: *const BpwlLevel,
    out_json: *mut *mut c_char,
) -> BpwlStatus {
    let level = match unsafe { read_level(level) } {
        Ok(level) => level,
        Err(status) => return status,
    };
    let (weight, top_dim) = match minimal_qhr(r, s, level) {
        Ok(pair) => pair,
        Err(err) => return classifier_status(&err),
    };
    let label = match submodule_realisation(r, s, level) {
        Ok(label) => label,
        Err(err) => return classifier_status(&err),
    };
    unsafe {
        write_json(
            &json!({
                "r": r,
                "s": s,
                "k": level.k(),
                "weight": weight,
                "top_dim": top_dim,
                "submodule": label,
            }),
            out_json,
        )
    }
}

/// Writes the ordinary-family membership grid of the minimal quotients at
/// the singlet level `k = -7/3`, for `1 <= r, s <= max`.
///
/// # Safety
///
/// `out_json` must be valid for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn bpwl_kl_grid_json(max: u32, out_json: *mut *mut c_char) -> BpwlStatus {
    if max == 0 {
        return BpwlStatus::BadRequest;
    }
    let mut grid = Vec::with_capacity(max as usize);
    for r in 1..=max {
        let mut row = Vec::with_capacity(max as usize);
        for s in 1..=max {
            match kl_membership_23(r, s) {
                Ok(member) => row.push(member),
                Err(err) => return classifier_status(&err),
            }
        }
        grid.push(row);
    }
    unsafe { write_json(&json!({ "max": max, "grid": grid }), out_json) }
}

/// Writes the string-function convergence report at the given truncation
/// order.
///
/// # Safety
///
/// `out_json` must be valid for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn bpwl_string_convergence_json(
    order: u32,
    out_json: *mut *mut c_char,
) -> BpwlStatus {
    unsafe { write_json(&check_string_convergence(order), out_json) }
}

/// Sweeps every ordered generator pair with modes bounded by `modes` over
/// the grade-truncated module attached to `(j, h, w)` and writes the scan
/// report.  The rationals are written as `p/q`.
///
/// # Safety
///
/// `level` must be a live handle, `j`, `h`, and `w` must point to
/// NUL-terminated strings, and `out_json` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn bpwl_verify_embedding_json(
    level: *const BpwlLevel,
    j: *const c_char,
    h: *const c_char,
    w: *const c_char,
    grade: u32,
    modes: u32,
    out_json: *mut *mut c_char,
) -> BpwlStatus {
    let level = match unsafe { read_level(level) } {
        Ok(level) => level,
        Err(status) => return status,
    };
    let j = match unsafe { read_rational(j) } {
        Ok(j) => j,
        Err(status) => return status,
    };
    let h = match unsafe { read_rational(h) } {
        Ok(h) => h,
        Err(status) => return status,
    };
    let w = match unsafe { read_rational(w) } {
        Ok(w) => w,
        Err(status) => return status,
    };
    match verify_embedding(level, &j, &h, &w, grade, modes) {
        Ok(scan) => unsafe { write_json(&scan, out_json) },
        Err(err) => engine_status(&err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;
    use std::ptr;

    /// Takes ownership of an out-string and frees it through the ABI.
    unsafe fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let owned = unsafe { CStr::from_ptr(ptr) }
            .to_str()
            .expect("library strings are UTF-8")
            .to_owned();
        unsafe { bpwl_string_free(ptr) };
        owned
    }

    unsafe fn take_json(ptr: *mut c_char) -> Value {
        let text = unsafe { take_string(ptr) };
        serde_json::from_str(&text).expect("library documents are JSON")
    }

    fn with_level<T>(u: u64, v: u64, run: impl FnOnce(*mut BpwlLevel) -> T) -> T {
        let mut handle: *mut BpwlLevel = ptr::null_mut();
        let status = unsafe { bpwl_level_new(u, v, &mut handle) };
        assert_eq!(status, BpwlStatus::Ok);
        let result = run(handle);
        unsafe { bpwl_level_free(handle) };
        result
    }

    fn cstr(text: &str) -> CString {
        CString::new(text).expect("test strings have no NUL")
    }

    #[test]
    fn version_round_trips() {
        let text = unsafe { take_string(bpwl_version()) };
        assert_eq!(text, env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn string_free_ignores_null() {
        unsafe { bpwl_string_free(ptr::null_mut()) };
        unsafe { bpwl_level_free(ptr::null_mut()) };
    }

    #[test]
    fn level_info_reports_the_singlet_level() {
        let doc = with_level(2, 3, |level| {
            let mut out: *mut c_char = ptr::null_mut();
            let status = unsafe { bpwl_level_info_json(level, &mut out) };
            assert_eq!(status, BpwlStatus::Ok);
            unsafe { take_json(out) }
        });
        assert_eq!(doc["k"], "-7/3");
        assert_eq!(doc["pair"], json!([2, 3]));
        assert_eq!(doc["embedding_exists"], true);
        assert_eq!(doc["nondegenerate"], false);
    }

    #[test]
    fn level_from_k_matches_level_from_pair() {
        let mut handle: *mut BpwlLevel = ptr::null_mut();
        let k = cstr("-5/3");
        let status = unsafe { bpwl_level_from_k(k.as_ptr(), &mut handle) };
        assert_eq!(status, BpwlStatus::Ok);
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { bpwl_level_info_json(handle, &mut out) },
            BpwlStatus::Ok
        );
        let doc = unsafe { take_json(out) };
        assert_eq!(doc["pair"], json!([4, 3]));
        unsafe { bpwl_level_free(handle) };
    }

    #[test]
    fn constructors_reject_bad_pairs() {
        let mut handle: *mut BpwlLevel = ptr::null_mut();
        assert_eq!(
            unsafe { bpwl_level_new(6, 4, &mut handle) },
            BpwlStatus::BadRequest
        );
        assert_eq!(
            unsafe { bpwl_level_new(2, 3, ptr::null_mut()) },
            BpwlStatus::NullArgument
        );
        let critical = cstr("-3");
        assert_eq!(
            unsafe { bpwl_level_from_k(critical.as_ptr(), &mut handle) },
            BpwlStatus::OutOfScope
        );
        let garbled = cstr("seven");
        assert_eq!(
            unsafe { bpwl_level_from_k(garbled.as_ptr(), &mut handle) },
            BpwlStatus::ParseError
        );
        assert!(handle.is_null());
    }

    #[test]
    fn classify_emits_the_4_3_table() {
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { bpwl_classify_json(4, 3, &mut out) }, BpwlStatus::Ok);
        let doc = unsafe { take_json(out) };
        assert_eq!(doc["u"], 4);
        assert!(doc["orbits"].as_array().is_some_and(|o| !o.is_empty()));
    }

    #[test]
    fn classify_rejects_out_of_scope_pairs() {
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { bpwl_classify_json(3, 2, &mut out) },
            BpwlStatus::OutOfScope
        );
        assert!(out.is_null());
    }

    #[test]
    fn singlet_relaxed_reports_the_roots() {
        let lambda = cstr("1/3");
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { bpwl_singlet_relaxed_json(lambda.as_ptr(), &mut out) },
            BpwlStatus::Ok
        );
        let doc = unsafe { take_json(out) };
        assert_eq!(doc["roots"], json!(["2/3", "1/3", "-1/3"]));
        assert_eq!(doc["collisions"].as_array().map(Vec::len), Some(1));
    }

    #[test]
    fn singlet_relaxed_rejects_non_utf8_and_non_rationals() {
        let mut out: *mut c_char = ptr::null_mut();
        let bad_bytes = [0xffu8, 0xfe, 0x00];
        assert_eq!(
            unsafe { bpwl_singlet_relaxed_json(bad_bytes.as_ptr().cast(), &mut out) },
            BpwlStatus::InvalidUtf8
        );
        let not_a_rational = cstr("x/y");
        assert_eq!(
            unsafe { bpwl_singlet_relaxed_json(not_a_rational.as_ptr(), &mut out) },
            BpwlStatus::ParseError
        );
        assert_eq!(
            unsafe { bpwl_singlet_relaxed_json(ptr::null(), &mut out) },
            BpwlStatus::NullArgument
        );
        assert!(out.is_null());
    }

    #[test]
    fn ordinary_members_carry_dimensions() {
        let min = cstr("-2");
        let max = cstr("2");
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { bpwl_singlet_ordinary_json(min.as_ptr(), max.as_ptr(), 6, &mut out) },
            BpwlStatus::Ok
        );
        let doc = unsafe { take_json(out) };
        let families = doc["families"].as_array().expect("families array");
        assert!(!families.is_empty());
        assert!(families.iter().all(|f| f["top_dim"].is_u64()));
    }

    #[test]
    fn orbit_image_matches_the_flow_arrow() {
        let family = cstr("2");
        let lambda = cstr("4/3");
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { bpwl_orbit_image_json(family.as_ptr(), lambda.as_ptr(), &mut out) },
            BpwlStatus::Ok
        );
        let doc = unsafe { take_json(out) };
        assert_eq!(doc["image"]["family"], "iii");
        assert_eq!(doc["image"]["lambda"], "2/3");
        let unknown = cstr("vii");
        assert_eq!(
            unsafe { bpwl_orbit_image_json(unknown.as_ptr(), lambda.as_ptr(), &mut out) },
            BpwlStatus::BadRequest
        );
    }

    #[test]
    fn qhr_reports_weight_and_submodule() {
        let doc = with_level(2, 3, |level| {
            let mut out: *mut c_char = ptr::null_mut();
            let status = unsafe { bpwl_qhr_json(2, 3, level, &mut out) };
            assert_eq!(status, BpwlStatus::Ok);
            unsafe { take_json(out) }
        });
        assert_eq!(doc["weight"]["j"], "5/3");
        assert_eq!(doc["weight"]["delta"], "20/3");
        assert_eq!(doc["top_dim"], 3);
        with_level(2, 3, |level| {
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                unsafe { bpwl_qhr_json(0, 3, level, &mut out) },
                BpwlStatus::BadRequest
            );
        });
    }

    #[test]
    fn kl_grid_is_true_on_the_first_row_and_column() {
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { bpwl_kl_grid_json(5, &mut out) }, BpwlStatus::Ok);
        let doc = unsafe { take_json(out) };
        let grid = doc["grid"].as_array().expect("grid rows");
        assert_eq!(grid.len(), 5);
        for (r, row) in grid.iter().enumerate() {
            for (s, member) in row.as_array().expect("grid row").iter().enumerate() {
                assert_eq!(member, &json!(r == 0 || s == 0), "cell ({r}, {s})");
            }
        }
        assert_eq!(
            unsafe { bpwl_kl_grid_json(0, &mut out) },
            BpwlStatus::BadRequest
        );
    }

    #[test]
    fn string_convergence_reports_the_witness() {
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { bpwl_string_convergence_json(3, &mut out) },
            BpwlStatus::Ok
        );
        let doc = unsafe { take_json(out) };
        assert_eq!(doc["order"], 3);
        assert_eq!(doc["witness"]["q_power"], 1);
    }

    #[test]
    fn verify_embedding_sweeps_the_pairs() {
        let doc = with_level(2, 3, |level| {
            let j = cstr("2/7");
            let h = cstr("1/3");
            let w = cstr("-1/5");
            let mut out: *mut c_char = ptr::null_mut();
            let status = unsafe {
                bpwl_verify_embedding_json(level, j.as_ptr(), h.as_ptr(), w.as_ptr(), 1, 1, &mut out)
            };
            assert_eq!(status, BpwlStatus::Ok);
            unsafe { take_json(out) }
        });
        assert_eq!(doc["all_passed"], true);
        assert_eq!(doc["basis_size"], 5);
        assert_eq!(doc["pairs"].as_array().map(Vec::len), Some(16));
    }

    #[test]
    fn verify_embedding_rejects_levels_without_the_embedding() {
        with_level(3, 2, |level| {
            let j = cstr("0");
            let mut out: *mut c_char = ptr::null_mut();
            let status = unsafe {
                bpwl_verify_embedding_json(
                    level,
                    j.as_ptr(),
                    j.as_ptr(),
                    j.as_ptr(),
                    1,
                    1,
                    &mut out,
                )
            };
            assert_eq!(status, BpwlStatus::OutOfScope);
            assert!(out.is_null());
        });
    }
}
