//! C ABI for the engine over the rationals.
//!
//! Objects are opaque handles created by `qpmut_*` constructors and released
//! with the matching `*_free`. Every fallible call returns a [`QpmutStatus`];
//! the message of the last failure on the calling thread is available from
//! [`qpmut_last_error`]. Strings handed out by the library are released with
//! [`qpmut_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qpmut::catalog::{self, Params};
use qpmut::cli::json;
use qpmut::jacobian::{deformation_dim, is_rigid, jacobian_dim};
use qpmut::mutation::{b_matrix, mutate, split};
use qpmut::rep_mutation::mutate_rep;
use qpmut::reps::{format_rep, is_isomorphic, parse_rep, DecoratedRep, Isomorphism};
use qpmut::{Error, Qp, Rational};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpmutStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    /// Mutation at a vertex lying on an oriented 2-cycle.
    TwoCycle = 5,
    TruncationShortfall = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Opaque quiver with potential.
pub struct QpmutQp(Qp<Rational>);

/// Opaque decorated representation.
pub struct QpmutRep(DecoratedRep<Rational>);

/// Graded dimension summary.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QpmutDims {
    /// Sum of the graded dimensions up to the truncation degree.
    pub truncated_total: usize,
    /// Whether the top degrees vanish, so that the total is exact.
    pub stabilized: bool,
    pub trunc: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> QpmutStatus {
    match e {
        Error::Parse(_) => QpmutStatus::Parse,
        Error::TwoCycleThroughVertex(_) => QpmutStatus::TwoCycle,
        Error::TruncationShortfall { .. } => QpmutStatus::TruncationShortfall,
        _ => QpmutStatus::InvalidInput,
    }
}

fn fail(e: Error) -> QpmutStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

/// Runs `f`, converting panics into [`QpmutStatus::Panic`].
fn guard(f: impl FnOnce() -> QpmutStatus) -> QpmutStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            QpmutStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, QpmutStatus> {
    if s.is_null() {
        set_error("null string");
        return Err(QpmutStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not UTF-8");
        QpmutStatus::InvalidUtf8
    })
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> QpmutStatus {
    *out = Box::into_raw(Box::new(value));
    QpmutStatus::Ok
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> QpmutStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            QpmutStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte");
            QpmutStatus::InvalidInput
        }
    }
}

macro_rules! nonnull {
    ($($p:expr),*) => {
        $(if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return QpmutStatus::NullPointer;
        })*
    };
}

macro_rules! try_str {
    ($s:expr) => {
        match read_str($s) {
            Ok(s) => s,
            Err(status) => return status,
        }
    };
}

macro_rules! try_engine {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail(e),
        }
    };
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qpmut_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qpmut_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the QP text format. `trunc < 0` keeps the file's `trunc:` line
/// (default 6).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpmut_qp_parse(
    text: *const c_char,
    trunc: i32,
    out: *mut *mut QpmutQp,
) -> QpmutStatus {
    guard(|| {
        nonnull!(out);
        let text = try_str!(text);
        let over = usize::try_from(trunc).ok();
        let qp = try_engine!(Qp::parse(text, 6, over));
        write_out(out, QpmutQp(qp))
    })
}

/// Builds a catalog QP with default parameters, or grid order `n` when
/// `n > 0`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpmut_qp_catalog(
    name: *const c_char,
    n: u32,
    trunc: u32,
    out: *mut *mut QpmutQp,
) -> QpmutStatus {
    guard(|| {
        nonnull!(out);
        let name = try_str!(name);
        let params = if n > 0 {
            Params::with_n(n as usize)
        } else {
            Params::default()
        };
        let qp = try_engine!(catalog::make_qp(name, &params, trunc as usize));
        write_out(out, QpmutQp(qp))
    })
}

/// # Safety
/// `qp` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qpmut_qp_free(qp: *mut QpmutQp) {
    if !qp.is_null() {
        drop(Box::from_raw(qp));
    }
}

/// QP text format.
///
/// # Safety
/// `qp` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpmut_qp_to_text(
    qp: *const QpmutQp,
    out: *mut *mut c_char,
) -> QpmutStatus {
    guard(|| {
        nonnull!(qp, out);
        write_string(out, (*qp).0.to_text())
    })
}

/// Structured form with `"schema": 1`.
///
/// # Safety
/// `qp` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpmut_qp_to_json(
    qp: *const QpmutQp,
    out: *mut *mut c_char,
) -> QpmutStatus {
    guard(|| {
        nonnull!(qp, out);
        write_string(out, json::qp_value(&(*qp).0).to_string())
    })
}

/// # Safety
/// `qp` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qpmut_qp_num_vertices(qp: *const QpmutQp) -> usize {
    if qp.is_null() {
        return 0;
    }
    (*qp).0.quiver().vertices().len()
}

/// # Safety
/// `qp` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qpmut_qp_num_arrows(qp: *const QpmutQp) -> usize {
    if qp.is_null() {
        return 0;
    }
    (*qp).0.quiver().num_arrows()
}

/// Writes the B-matrix row-major into `buf`, which must hold `n * n`
/// entries for `n` vertices.
///
/// # Safety
/// `qp` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qpmut_qp_b_matrix(
    qp: *const QpmutQp,
    buf: *mut i64,
    len: usize,
) -> QpmutStatus {
    guard(|| {
        nonnull!(qp, buf);
        let b = b_matrix((*qp).0.quiver());
        let n = b.size();
        if len < n * n {
            set_error(format!("buffer needs {} entries", n * n));
            return QpmutStatus::BufferTooSmall;
        }
        for (i, row) in b.entries.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                *buf.add(i * n + j) = x;
            }
        }
        QpmutStatus::Ok
    })
}

/// Mutation at `k`. `degenerate` (optional) is set when the result has
/// oriented 2-cycles.
///
/// # Safety
/// `qp` must be a live handle, `out` a valid pointer, `degenerate` NULL or
/// valid.
#[no_mangle]
pub unsafe extern "C" fn qpmut_qp_mutate(
    qp: *const QpmutQp,
    k: u32,
    out: *mut *mut QpmutQp,
    degenerate: *mut bool,
) -> QpmutStatus {
    guard(|| {
        nonnull!(qp, out);
        let m = try_engine!(mutate(&(*qp).0, k));
        if !degenerate.is_null() {
            *degenerate = m.degenerate;
        }
        write_out(out, QpmutQp(m.mutated))
    })
}

/// Reduced part.
///
/// # Safety
/// `qp` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpmut_qp_reduce(
    qp: *const QpmutQp,
    out: *mut *mut QpmutQp,
) -> QpmutStatus {
    guard(|| {
        nonnull!(qp, out);
        let r = try_engine!(split(&(*qp).0));
        write_out(out, QpmutQp(r.reduced))
    })
}

fn dims(r: &qpmut::DimReport) -> QpmutDims {
    QpmutDims {
        truncated_total: r.truncated_total(),
        stabilized: r.stabilized,
        trunc: r.trunc(),
    }
}

/// Truncated Jacobian algebra dimension.
///
/// # Safety
/// `qp` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpmut_qp_jacobian_dim(
    qp: *const QpmutQp,
    out: *mut QpmutDims,
) -> QpmutStatus {
    guard(|| {
        nonnull!(qp, out);
        *out = dims(&jacobian_dim(&(*qp).0));
        QpmutStatus::Ok
    })
}

/// Truncated deformation space dimension.
///
/// # Safety
/// `qp` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpmut_qp_deformation_dim(
    qp: *const QpmutQp,
    out: *mut QpmutDims,
) -> QpmutStatus {
    guard(|| {
        nonnull!(qp, out);
        *out = dims(&deformation_dim(&(*qp).0));
        QpmutStatus::Ok
    })
}

/// Sets `rigid` when the deformation space vanishes and has stabilized.
///
/// # Safety
/// `qp` must be a live handle and `rigid` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpmut_qp_is_rigid(qp: *const QpmutQp, rigid: *mut bool) -> QpmutStatus {
    guard(|| {
        nonnull!(qp, rigid);
        *rigid = is_rigid(&(*qp).0).rigid;
        QpmutStatus::Ok
    })
}

/// Band module `M(m, n)` on the double triangle at truncation `trunc`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpmut_rep_band(
    m: u32,
    n: u32,
    trunc: u32,
    out: *mut *mut QpmutRep,
) -> QpmutStatus {
    guard(|| {
        nonnull!(out);
        let dt = try_engine!(catalog::double_triangle::<Rational>(trunc as usize));
        let r = try_engine!(catalog::band_rep(&dt, m as usize, n as usize));
        write_out(out, QpmutRep(r))
    })
}

/// Parses the representation text format over `qp`.
///
/// # Safety
/// `qp` must be a live handle, `text` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qpmut_rep_parse(
    qp: *const QpmutQp,
    text: *const c_char,
    out: *mut *mut QpmutRep,
) -> QpmutStatus {
    guard(|| {
        nonnull!(qp, out);
        let text = try_str!(text);
        let r = try_engine!(parse_rep(&(*qp).0, text));
        write_out(out, QpmutRep(r))
    })
}

/// # Safety
/// `rep` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qpmut_rep_free(rep: *mut QpmutRep) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Representation text format.
///
/// # Safety
/// `rep` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpmut_rep_to_text(
    rep: *const QpmutRep,
    out: *mut *mut c_char,
) -> QpmutStatus {
    guard(|| {
        nonnull!(rep, out);
        write_string(out, format_rep(&(*rep).0))
    })
}

/// Writes `dim M_i` then `dim V_i` per vertex: `2 * n` entries.
///
/// # Safety
/// `rep` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qpmut_rep_dims(
    rep: *const QpmutRep,
    buf: *mut usize,
    len: usize,
) -> QpmutStatus {
    guard(|| {
        nonnull!(rep, buf);
        let r = &(*rep).0;
        let n = r.m_dims().len();
        if len < 2 * n {
            set_error(format!("buffer needs {} entries", 2 * n));
            return QpmutStatus::BufferTooSmall;
        }
        for (i, &d) in r.m_dims().iter().chain(r.v_dims()).enumerate() {
            *buf.add(i) = d;
        }
        QpmutStatus::Ok
    })
}

/// Mutation of a representation at `k`; the result lives over the mutated
/// QP, available through [`qpmut_rep_qp`].
///
/// # Safety
/// `rep` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpmut_rep_mutate(
    rep: *const QpmutRep,
    k: u32,
    out: *mut *mut QpmutRep,
) -> QpmutStatus {
    guard(|| {
        nonnull!(rep, out);
        let r = try_engine!(mutate_rep(&(*rep).0, k));
        write_out(out, QpmutRep(r))
    })
}

/// Copy of the QP a representation lives over.
///
/// # Safety
/// `rep` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpmut_rep_qp(rep: *const QpmutRep, out: *mut *mut QpmutQp) -> QpmutStatus {
    guard(|| {
        nonnull!(rep, out);
        write_out(out, QpmutQp((*rep).0.qp().clone()))
    })
}

/// Isomorphism test over a common QP. `verdict` is 1 for isomorphic, 0 for
/// proved non-isomorphic and -1 when the search was inconclusive.
///
/// # Safety
/// `a`, `b` must be live handles and `verdict` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpmut_rep_is_isomorphic(
    a: *const QpmutRep,
    b: *const QpmutRep,
    verdict: *mut i32,
) -> QpmutStatus {
    guard(|| {
        nonnull!(a, b, verdict);
        *verdict = match try_engine!(is_isomorphic(&(*a).0, &(*b).0)) {
            Isomorphism::Isomorphic(_) => 1,
            Isomorphism::NotIsomorphic(_) => 0,
            Isomorphism::NoIsomorphismFound => -1,
        };
        QpmutStatus::Ok
    })
}
