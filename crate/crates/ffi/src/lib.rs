//! C ABI for `posetcohom`.
//!
//! Every function returns a [`PcStatus`]; results go through out-pointers.
//! Objects are opaque handles released with their `_free` function. After a
//! failed call, [`pc_last_error`] describes the failure on the calling thread.

use posetcohom::catalog::SpeciesName;
use posetcohom::cohomology::{build_complex, cohomology_z, CohomologySummary};
use posetcohom::poset::{mobius_number, zeta_eval, ChainVariant};
use posetcohom::species::SpeciesRef;
use posetcohom::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownName = 3,
    Budget = 4,
    Overflow = 5,
    Internal = 6,
}

/// Chain variant of a cochain complex.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcVariant {
    /// all chains
    Full = 0,
    /// chains from a minimal to a maximal element
    MinMax = 1,
    /// chains starting at a minimal element
    Min = 2,
    /// chains ending at a maximal element
    Max = 3,
}

impl From<PcVariant> for ChainVariant {
    fn from(v: PcVariant) -> Self {
        match v {
            PcVariant::Full => ChainVariant::Full,
            PcVariant::MinMax => ChainVariant::MinMax,
            PcVariant::Min => ChainVariant::Min,
            PcVariant::Max => ChainVariant::Max,
        }
    }
}

/// An operadic poset species from the catalog.
pub struct PcSpecies {
    name: SpeciesName,
    species: SpeciesRef,
    unsafe_large: bool,
}

/// Integral cohomology of one level.
pub struct PcCohomology {
    summary: CohomologySummary,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(PcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownName(_) => PcStatus::UnknownName,
            Error::Budget(_) => PcStatus::Budget,
            _ => PcStatus::InvalidArgument,
        };
        Fail(code, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PcStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("internal error");
            PcStatus::Internal
        }
    }
}

fn non_null<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    // SAFETY: callers pass pointers obtained from this library or null.
    unsafe { p.as_ref() }.ok_or_else(|| Fail(PcStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(PcStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn check_n(sp: &PcSpecies, n: usize, cohomology: bool) -> Result<(), Fail> {
    if n == 0 {
        return Err(Fail(PcStatus::InvalidArgument, "n must be at least 1".into()));
    }
    let cap = sp.name.size_budget(cohomology);
    if n > cap && !sp.unsafe_large {
        return Err(Fail(PcStatus::Budget, format!("{} is capped at n = {cap}", sp.name)));
    }
    Ok(())
}

fn to_i64(v: &num_bigint::BigInt) -> Result<i64, Fail> {
    i64::try_from(v).map_err(|_| Fail(PcStatus::Overflow, format!("{v} does not fit in 64 bits")))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn pc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn pc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Opens a catalog family such as `"pi"`, `"left:as"` or `"mlt"`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_species_open(name: *const c_char, out: *mut *mut PcSpecies) -> PcStatus {
    guard(|| {
        out_ptr(out, "out")?;
        non_null(name, "name")?;
        let s = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| Fail(PcStatus::InvalidArgument, "name is not UTF-8".into()))?;
        let parsed = SpeciesName::parse(s)?;
        let species = posetcohom::catalog::by_name(&parsed)?;
        *out = Box::into_raw(Box::new(PcSpecies { name: parsed, species, unsafe_large: false }));
        Ok(())
    })
}

/// Lifts (nonzero) or restores (zero) the size budgets for this handle.
///
/// # Safety
/// `sp` must come from [`pc_species_open`].
#[no_mangle]
pub unsafe extern "C" fn pc_species_set_unsafe_large(sp: *mut PcSpecies, enable: i32) -> PcStatus {
    guard(|| {
        out_ptr(sp, "species")?;
        (*sp).unsafe_large = enable != 0;
        Ok(())
    })
}

/// # Safety
/// `sp` must come from [`pc_species_open`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pc_species_free(sp: *mut PcSpecies) {
    if !sp.is_null() {
        drop(Box::from_raw(sp));
    }
}

/// Number of elements of `P(n)`.
///
/// # Safety
/// `sp` must come from [`pc_species_open`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_level_size(sp: *const PcSpecies, n: usize, out: *mut usize) -> PcStatus {
    guard(|| {
        let sp = non_null(sp, "species")?;
        out_ptr(out, "out")?;
        check_n(sp, n, false)?;
        *out = sp.species.level(n).len();
        Ok(())
    })
}

/// Möbius number of `P(n)` for the variant.
///
/// # Safety
/// `sp` must come from [`pc_species_open`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_mobius(sp: *const PcSpecies, n: usize, variant: PcVariant, out: *mut i64) -> PcStatus {
    guard(|| {
        let sp = non_null(sp, "species")?;
        out_ptr(out, "out")?;
        check_n(sp, n, false)?;
        *out = to_i64(&mobius_number(&sp.species.level(n).poset, variant.into()))?;
        Ok(())
    })
}

/// Multichain count for `t ≥ 0`, zeta polynomial value for `t < 0`.
///
/// # Safety
/// `sp` must come from [`pc_species_open`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_zeta(sp: *const PcSpecies, n: usize, variant: PcVariant, t: i64, out: *mut i64) -> PcStatus {
    guard(|| {
        let sp = non_null(sp, "species")?;
        out_ptr(out, "out")?;
        check_n(sp, n, false)?;
        *out = to_i64(&zeta_eval(&sp.species.level(n).poset, variant.into(), t))?;
        Ok(())
    })
}

/// Integral cohomology of `P(n)`.
///
/// # Safety
/// `sp` must come from [`pc_species_open`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_cohomology(
    sp: *const PcSpecies,
    n: usize,
    variant: PcVariant,
    out: *mut *mut PcCohomology,
) -> PcStatus {
    guard(|| {
        let sp = non_null(sp, "species")?;
        out_ptr(out, "out")?;
        check_n(sp, n, true)?;
        let summary = cohomology_z(&build_complex(&sp.species.level(n).poset, variant.into()));
        *out = Box::into_raw(Box::new(PcCohomology { summary }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`pc_cohomology`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pc_cohomology_free(h: *mut PcCohomology) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of degrees (one past the top degree).
///
/// # Safety
/// `h` must come from [`pc_cohomology`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_cohomology_degrees(h: *const PcCohomology, out: *mut usize) -> PcStatus {
    guard(|| {
        let h = non_null(h, "cohomology")?;
        out_ptr(out, "out")?;
        *out = h.summary.betti.len();
        Ok(())
    })
}

/// Free rank in degree `k` (zero beyond the top degree).
///
/// # Safety
/// `h` must come from [`pc_cohomology`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_cohomology_rank(h: *const PcCohomology, k: usize, out: *mut usize) -> PcStatus {
    guard(|| {
        let h = non_null(h, "cohomology")?;
        out_ptr(out, "out")?;
        *out = h.summary.betti.get(k).copied().unwrap_or(0);
        Ok(())
    })
}

/// Number of torsion invariants in degree `k`.
///
/// # Safety
/// `h` must come from [`pc_cohomology`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_cohomology_torsion_len(h: *const PcCohomology, k: usize, out: *mut usize) -> PcStatus {
    guard(|| {
        let h = non_null(h, "cohomology")?;
        out_ptr(out, "out")?;
        *out = h.summary.torsion.get(k).map_or(0, Vec::len);
        Ok(())
    })
}

/// JSON summary `{"variant", "betti", "torsion"}`; release with [`pc_string_free`].
///
/// # Safety
/// `h` must come from [`pc_cohomology`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_cohomology_json(h: *const PcCohomology, out: *mut *mut c_char) -> PcStatus {
    guard(|| {
        let h = non_null(h, "cohomology")?;
        out_ptr(out, "out")?;
        let s = h.summary.to_json().to_string();
        *out = CString::new(s).map_err(|_| Fail(PcStatus::Internal, "NUL in JSON".into()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
