//! C ABI over `phasetrop`.
//!
//! Models and descriptors are opaque handles created by `pt_*_new*` and
//! released with the matching `pt_*_free`. Every fallible call returns a
//! [`PtStatus`]; on failure `pt_last_error` describes the error on the
//! calling thread. Phases and points are passed as text (`"1/3,2/3"`,
//! `"2/3pi,-1 rad"`, `"1,1/2"`) so exact values survive the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use phasetrop::coamoeba::{closure_membership, SimpleCoA};
use phasetrop::exact::{lattice_index, PhaseVec, Rat};
use phasetrop::laurent::KPoly;
use phasetrop::nca::{
    build_pullback_model, build_trop_model, load_fixture_model, nca_membership, ptrop_membership, TropModel,
};
use phasetrop::series::Section;
use phasetrop::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Json = 4,
    NotIndependent = 5,
    EmptyTropicalVariety = 6,
    SectionUndefined = 7,
    DivisionByZero = 8,
    TruncationExhausted = 9,
    TooFewTerms = 10,
    NotSimple = 11,
    NotSurjective = 12,
    Validation = 13,
    Dimension = 14,
    Io = 15,
    Panic = 16,
}

/// Opaque model of a tropically simple variety.
pub struct PtModel(TropModel);

/// Opaque closed-coamoeba descriptor.
pub struct PtCoa(SimpleCoA);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PtStatus {
    match e {
        Error::NotIndependent(_) => PtStatus::NotIndependent,
        Error::EmptyTropicalVariety => PtStatus::EmptyTropicalVariety,
        Error::SectionUndefined(_) => PtStatus::SectionUndefined,
        Error::DivisionByZero => PtStatus::DivisionByZero,
        Error::TruncationExhausted(_) => PtStatus::TruncationExhausted,
        Error::TooFewTerms(_) => PtStatus::TooFewTerms,
        Error::NotSimple { .. } => PtStatus::NotSimple,
        Error::NotSurjective { .. } => PtStatus::NotSurjective,
        Error::Validation { .. } => PtStatus::Validation,
        Error::Dimension { .. } => PtStatus::Dimension,
        Error::Parse(_) => PtStatus::Parse,
        Error::Json(_) => PtStatus::Json,
        Error::Io(_) => PtStatus::Io,
    }
}

struct Fail(PtStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PtStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            PtStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(PtStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(PtStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn section(p: *const c_char) -> Result<Section, Fail> {
    if p.is_null() {
        return Ok(Section::Canonical);
    }
    Ok(serde_json::from_str(text(p)?).map_err(Error::from)?)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(PtStatus::NullPointer, "null output pointer".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(PtStatus::NullPointer, "null handle".into()))
}

fn parse_rats(s: &str) -> Result<Vec<Rat>, Fail> {
    Ok(s.split(',').map(|x| x.trim().parse::<Rat>()).collect::<phasetrop::Result<Vec<_>>>()?)
}

fn check_len(expected: usize, got: usize) -> Result<(), Fail> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got }.into())
    }
}

/// Message of the last error on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Model of the hypersurface given as polynomial JSON. `section_json` may be
/// null for the canonical section.
///
/// # Safety
/// String arguments must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_model_new_hypersurface(
    poly_json: *const c_char,
    section_json: *const c_char,
    out_model: *mut *mut PtModel,
) -> PtStatus {
    guard(|| {
        let o = out(out_model)?;
        let f: KPoly = serde_json::from_str(text(poly_json)?).map_err(Error::from)?;
        let m = build_trop_model(&f, &section(section_json)?)?;
        *o = Box::into_raw(Box::new(PtModel(m)));
        Ok(())
    })
}

/// Model of the preimage of a product of hyperplanes under the monomial map
/// with the given `rows × cols` row-major character matrix.
/// `factors_json` is a JSON list of polynomials.
///
/// # Safety
/// `matrix` must point to `rows * cols` integers.
#[no_mangle]
pub unsafe extern "C" fn pt_model_new_pullback(
    matrix: *const i64,
    rows: usize,
    cols: usize,
    factors_json: *const c_char,
    section_json: *const c_char,
    out_model: *mut *mut PtModel,
) -> PtStatus {
    guard(|| {
        let o = out(out_model)?;
        if matrix.is_null() {
            return Err(Fail(PtStatus::NullPointer, "null matrix".into()));
        }
        let data = std::slice::from_raw_parts(matrix, rows * cols);
        let rows_v: Vec<Vec<i64>> = data.chunks(cols.max(1)).map(<[i64]>::to_vec).collect();
        let phi = phasetrop::exact::IntMatrix::from_rows(&rows_v, cols);
        let factors: Vec<KPoly> = serde_json::from_str(text(factors_json)?).map_err(Error::from)?;
        let m = build_pullback_model(&phi, &factors, &section(section_json)?)?;
        *o = Box::into_raw(Box::new(PtModel(m)));
        Ok(())
    })
}

/// Model from a fixture (polynomials plus the faces of their tropical
/// variety), validated on load.
///
/// # Safety
/// String arguments must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_model_new_fixture(
    fixture_json: *const c_char,
    section_json: *const c_char,
    out_model: *mut *mut PtModel,
) -> PtStatus {
    guard(|| {
        let o = out(out_model)?;
        let m = load_fixture_model(text(fixture_json)?, &section(section_json)?)?;
        *o = Box::into_raw(Box::new(PtModel(m)));
        Ok(())
    })
}

/// # Safety
/// `model` must come from a `pt_model_new_*` call and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pt_model_free(model: *mut PtModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Rank of the ambient torus, or 0 for a null handle.
///
/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pt_model_rank(model: *const PtModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.rank)
}

/// Number of faces of the tropical complex, or 0 for a null handle.
///
/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pt_model_face_count(model: *const PtModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.complex.faces.len())
}

/// The model as JSON; release with `pt_string_free`.
///
/// # Safety
/// `model` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_model_to_json(model: *const PtModel, out_json: *mut *mut c_char) -> PtStatus {
    guard(|| {
        let o = out(out_json)?;
        let s = serde_json::to_string(&handle(model)?.0).map_err(Error::from)?;
        *o = CString::new(s).expect("json has no nul").into_raw();
        Ok(())
    })
}

/// Membership in the non-archimedean coamoeba. `out_face` (may be null)
/// receives the witnessing minimal face or -1.
///
/// # Safety
/// `model` must be a live handle; `theta` nul-terminated; `out_member`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pt_nca_member(
    model: *const PtModel,
    theta: *const c_char,
    out_member: *mut bool,
    out_face: *mut i64,
) -> PtStatus {
    guard(|| {
        let m = &handle(model)?.0;
        let o = out(out_member)?;
        let th = PhaseVec::parse_list(text(theta)?)?;
        check_len(m.rank, th.len())?;
        let (b, face) = nca_membership(m, &th);
        *o = b;
        if let Some(f) = out_face.as_mut() {
            *f = face.map_or(-1, |i| i as i64);
        }
        Ok(())
    })
}

/// Membership of `(w, θ)` in the phase tropical variety.
///
/// # Safety
/// `model` must be a live handle; strings nul-terminated; `out_member`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pt_ptrop_member(
    model: *const PtModel,
    w: *const c_char,
    theta: *const c_char,
    out_member: *mut bool,
) -> PtStatus {
    guard(|| {
        let m = &handle(model)?.0;
        let o = out(out_member)?;
        let w = parse_rats(text(w)?)?;
        let th = PhaseVec::parse_list(text(theta)?)?;
        check_len(m.rank, w.len())?;
        check_len(m.rank, th.len())?;
        *o = ptrop_membership(m, &w, &th);
        Ok(())
    })
}

/// Descriptor from JSON (`{"rank":2,"factors":[{"A":…,"shift":…}]}`).
///
/// # Safety
/// `desc_json` nul-terminated; `out_coa` writable.
#[no_mangle]
pub unsafe extern "C" fn pt_coa_new(desc_json: *const c_char, out_coa: *mut *mut PtCoa) -> PtStatus {
    guard(|| {
        let o = out(out_coa)?;
        let d: SimpleCoA = serde_json::from_str(text(desc_json)?).map_err(Error::from)?;
        let d = SimpleCoA::new(d.rank, d.factors)?;
        *o = Box::into_raw(Box::new(PtCoa(d)));
        Ok(())
    })
}

/// Descriptor of `1 + x_1 + … + x_n`.
#[no_mangle]
pub extern "C" fn pt_coa_new_hyperplane(n: usize) -> *mut PtCoa {
    Box::into_raw(Box::new(PtCoa(SimpleCoA::standard_hyperplane(n))))
}

/// # Safety
/// `coa` must come from `pt_coa_new*` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pt_coa_free(coa: *mut PtCoa) {
    if !coa.is_null() {
        drop(Box::from_raw(coa));
    }
}

/// Membership in the closed coamoeba.
///
/// # Safety
/// `coa` must be a live handle; `theta` nul-terminated; `out_member`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pt_coa_member(coa: *const PtCoa, theta: *const c_char, out_member: *mut bool) -> PtStatus {
    guard(|| {
        let d = &handle(coa)?.0;
        let o = out(out_member)?;
        let th = PhaseVec::parse_list(text(theta)?)?;
        check_len(d.rank, th.len())?;
        *o = closure_membership(d, &th);
        Ok(())
    })
}

/// Index of the lattice spanned by the rows of a row-major matrix in its
/// saturation.
///
/// # Safety
/// `matrix` must point to `rows * cols` integers; `out_index` writable.
#[no_mangle]
pub unsafe extern "C" fn pt_nvol(matrix: *const i64, rows: usize, cols: usize, out_index: *mut u64) -> PtStatus {
    guard(|| {
        let o = out(out_index)?;
        if matrix.is_null() {
            return Err(Fail(PtStatus::NullPointer, "null matrix".into()));
        }
        let data = std::slice::from_raw_parts(matrix, rows * cols);
        let vs: Vec<Vec<i64>> = data.chunks(cols.max(1)).map(<[i64]>::to_vec).collect();
        *o = lattice_index(&vs)?;
        Ok(())
    })
}
