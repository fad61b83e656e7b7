//! C ABI for the `exact-nim` solver.
//!
//! Every function returns an [`ExnStatus`]. On failure the message is kept
//! per thread and can be read with [`exn_last_error_message`]. Positions go
//! in as a pointer to `n` piles; moves come back as the full successor
//! position, written to a caller-owned buffer of `n` piles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use exact_nim::degseq;
use exact_nim::moore;
use exact_nim::oracle::{self, SgTable};
use exact_nim::sg_exact;
use exact_nim::tetris;
use exact_nim::{apply_move, Error, GameSpec, Position, Ruleset};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    IllegalMove = 3,
    Unsupported = 4,
    OutOfRange = 5,
    PrePosition = 6,
    BudgetExceeded = 7,
    NotRealizable = 8,
    Overflow = 9,
    ConstructionFailed = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

/// `ruleset` argument values.
pub const EXN_RULESET_EXACT: u32 = 0;
pub const EXN_RULESET_MOORE: u32 = 1;

/// Quantities of the `n = 2k` value formula. `kind` is 1 or 2.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExnSgParams {
    pub u: u64,
    pub m: u64,
    pub y: u64,
    pub z: u64,
    pub v: u64,
    pub kind: u32,
    pub g: u64,
}

/// Tetris value and how `x̄` was built; `x̄` itself goes to a separate buffer.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExnTetrisProfile {
    pub tvalue: u64,
    pub ell: usize,
    pub alpha: u64,
    pub beta: u64,
}

/// Opaque SG table of all canonical positions up to a pile bound.
pub struct ExnTable {
    inner: SgTable,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Fail(ExnStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::DimensionMismatch { .. }
            | Error::InvalidSpec(_)
            | Error::Parse(_)
            | Error::Io(_) => ExnStatus::InvalidArgument,
            Error::IllegalMove(_) => ExnStatus::IllegalMove,
            Error::UnsupportedCase(_) => ExnStatus::Unsupported,
            Error::TargetOutOfRange { .. } | Error::RangeViolation { .. } => ExnStatus::OutOfRange,
            Error::PrePosition(_) => ExnStatus::PrePosition,
            Error::BudgetExceeded(_) => ExnStatus::BudgetExceeded,
            Error::NotRealizable => ExnStatus::NotRealizable,
            Error::Overflow(_) => ExnStatus::Overflow,
            Error::ConstructionFailed(_) => ExnStatus::ConstructionFailed,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(ExnStatus::NullPointer, format!("{what} is null"))
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> ExnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ExnStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ExnStatus::Panic
        }
    }
}

unsafe fn read_position(piles: *const u64, n: usize) -> Result<Position, Fail> {
    if n == 0 {
        return Err(Fail(ExnStatus::InvalidArgument, "n must be positive".into()));
    }
    if piles.is_null() {
        return Err(null("piles"));
    }
    Ok(Position::from(std::slice::from_raw_parts(piles, n)))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_position(out: *mut u64, x: &Position) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    ptr::copy_nonoverlapping(x.as_ptr(), out, x.len());
    Ok(())
}

fn ruleset(code: u32) -> Result<Ruleset, Fail> {
    match code {
        EXN_RULESET_EXACT => Ok(Ruleset::ExactK),
        EXN_RULESET_MOORE => Ok(Ruleset::MooreAtMostK),
        other => Err(Fail(ExnStatus::InvalidArgument, format!("unknown ruleset {other}"))),
    }
}

fn small(v: u128, what: &'static str) -> Result<u64, Fail> {
    u64::try_from(v).map_err(|_| Fail::from(Error::Overflow(what)))
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`). Returns the full length including the
/// terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn exn_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let copy = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), copy);
            *buf.add(copy) = 0;
        }
        bytes.len() + 1
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn exn_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => c"unknown",
    };
    VERSION.as_ptr()
}

/// SG value of an Exact k-Nim position (`k = 1` or `2k >= n`).
///
/// # Safety
/// `piles` must point to `n` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn exn_sg_value(k: usize, piles: *const u64, n: usize, out: *mut u64) -> ExnStatus {
    guard(|| {
        let x = read_position(piles, n)?;
        let g = sg_exact::sg_value(&GameSpec::exact(n, k)?, &x)?;
        write_out(out, g)
    })
}

/// Formula quantities for `n = 2k`, `k >= 2`. Fails with `Overflow` when
/// `z` or `v` exceed 64 bits.
///
/// # Safety
/// `piles` must point to `n` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn exn_sg_params(
    k: usize,
    piles: *const u64,
    n: usize,
    out: *mut ExnSgParams,
) -> ExnStatus {
    guard(|| {
        let x = read_position(piles, n)?;
        let p = sg_exact::sg_params(&GameSpec::exact(n, k)?, &x)?;
        let params = ExnSgParams {
            u: p.u,
            m: p.m,
            y: p.y,
            z: small(p.z, "z")?,
            v: small(p.v, "v")?,
            kind: match p.kind {
                sg_exact::PositionType::TypeI => 1,
                sg_exact::PositionType::TypeII => 2,
            },
            g: p.g,
        };
        write_out(out, params)
    })
}

/// Tetris value, profile and `x̄` (sorted coordinates, `n` values written to
/// `xbar`, which may be null).
///
/// # Safety
/// `piles` must point to `n` readable values, `out` must be writable and
/// `xbar` must be null or point to `n` writable values.
#[no_mangle]
pub unsafe extern "C" fn exn_tetris_profile(
    k: usize,
    piles: *const u64,
    n: usize,
    out: *mut ExnTetrisProfile,
    xbar: *mut u64,
) -> ExnStatus {
    guard(|| {
        let x = read_position(piles, n)?;
        let p = tetris::tetris_fast(&GameSpec::exact(n, k)?, &x)?;
        if !xbar.is_null() {
            write_position(xbar, &p.xbar)?;
        }
        write_out(
            out,
            ExnTetrisProfile {
                tvalue: p.tvalue,
                ell: p.ell,
                alpha: p.alpha,
                beta: p.beta,
            },
        )
    })
}

/// Successor of a move to SG value `delta < sg_value`.
///
/// # Safety
/// `piles` must point to `n` readable values and `next` to `n` writable ones.
#[no_mangle]
pub unsafe extern "C" fn exn_winning_move(
    k: usize,
    piles: *const u64,
    n: usize,
    delta: u64,
    next: *mut u64,
) -> ExnStatus {
    guard(|| {
        let x = read_position(piles, n)?;
        let mv = sg_exact::winning_move(&GameSpec::exact(n, k)?, &x, delta)?;
        write_position(next, &apply_move(&x, &mv)?)
    })
}

/// Successor of a move to Tetris value `g`.
///
/// # Safety
/// `piles` must point to `n` readable values and `next` to `n` writable ones.
#[no_mangle]
pub unsafe extern "C" fn exn_move_to_tetris(
    k: usize,
    piles: *const u64,
    n: usize,
    g: u64,
    next: *mut u64,
) -> ExnStatus {
    guard(|| {
        let x = read_position(piles, n)?;
        let mv = tetris::move_to_tetris(&GameSpec::exact(n, k)?, &x, g)?;
        write_position(next, &apply_move(&x, &mv)?)
    })
}

/// Moore's `M` in decimal. Writes the NUL-terminated digits to `buf` and
/// the required size to `needed` (may be null); fails with
/// `BufferTooSmall` if `len` is short.
///
/// # Safety
/// `piles` must point to `n` readable values, `buf` to `len` writable bytes
/// and `needed` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn exn_moore_m(
    k: usize,
    piles: *const u64,
    n: usize,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> ExnStatus {
    guard(|| {
        let x = read_position(piles, n)?;
        let digits = moore::moore_m(&GameSpec::moore(n, k)?, &x)?.mvalue.to_string();
        let size = digits.len() + 1;
        if !needed.is_null() {
            needed.write(size);
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < size {
            return Err(Fail(ExnStatus::BufferTooSmall, format!("need {size} bytes, got {len}")));
        }
        ptr::copy_nonoverlapping(digits.as_ptr(), buf.cast::<u8>(), digits.len());
        *buf.add(digits.len()) = 0;
        Ok(())
    })
}

/// Successor of a Moore's Nim move to `M = target` (0 or 1).
///
/// # Safety
/// `piles` must point to `n` readable values and `next` to `n` writable ones.
#[no_mangle]
pub unsafe extern "C" fn exn_moore_move(
    k: usize,
    piles: *const u64,
    n: usize,
    target: u32,
    next: *mut u64,
) -> ExnStatus {
    guard(|| {
        let x = read_position(piles, n)?;
        let spec = GameSpec::moore(n, k)?;
        let mv = match target {
            0 => moore::moore_move_to_zero(&spec, &x)?,
            1 => moore::moore_move_to_one(&spec, &x)?,
            t => return Err(Fail(ExnStatus::InvalidArgument, format!("target {t} is not 0 or 1"))),
        };
        write_position(next, &apply_move(&x, &mv)?)
    })
}

/// Whether `piles` is the degree sequence of a k-uniform multi-hypergraph.
///
/// # Safety
/// `piles` must point to `n` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn exn_is_realizable(k: usize, piles: *const u64, n: usize, out: *mut bool) -> ExnStatus {
    guard(|| {
        if k == 0 {
            return Err(Fail(ExnStatus::InvalidArgument, "k must be positive".into()));
        }
        let x = read_position(piles, n)?;
        write_out(out, degseq::is_realizable(&x, k))
    })
}

/// Largest realizable sequence below `piles`, written to `corrected`.
///
/// # Safety
/// `piles` must point to `n` readable values and `corrected` to `n`
/// writable ones.
#[no_mangle]
pub unsafe extern "C" fn exn_minimal_correction(
    k: usize,
    piles: *const u64,
    n: usize,
    corrected: *mut u64,
) -> ExnStatus {
    guard(|| {
        if k == 0 {
            return Err(Fail(ExnStatus::InvalidArgument, "k must be positive".into()));
        }
        let x = read_position(piles, n)?;
        write_position(corrected, &degseq::minimal_correction(&x, k))
    })
}

/// Builds the brute-force SG table for all positions with piles `<= max`.
/// Free it with [`exn_table_free`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn exn_table_build(
    ruleset_code: u32,
    n: usize,
    k: usize,
    max: u64,
    out: *mut *mut ExnTable,
) -> ExnStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = GameSpec::new(n, k, ruleset(ruleset_code)?)?;
        let inner = oracle::build_table(&spec, max)?;
        out.write(Box::into_raw(Box::new(ExnTable { inner })));
        Ok(())
    })
}

/// Looks up a position in any pile order. Fails with `OutOfRange` if a pile
/// exceeds the table bound.
///
/// # Safety
/// `table` must come from [`exn_table_build`], `piles` must point to `n`
/// readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn exn_table_get(
    table: *const ExnTable,
    piles: *const u64,
    n: usize,
    out: *mut u64,
) -> ExnStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        let x = read_position(piles, n)?;
        t.inner.spec.validate(&x)?;
        let g = t.inner.get(&x).ok_or_else(|| {
            Fail(ExnStatus::OutOfRange, format!("{x} is outside the table bound {}", t.inner.bound))
        })?;
        write_out(out, g)
    })
}

/// Number of canonical positions in the table; 0 for null.
///
/// # Safety
/// `table` must be null or come from [`exn_table_build`].
#[no_mangle]
pub unsafe extern "C" fn exn_table_len(table: *const ExnTable) -> usize {
    table.as_ref().map_or(0, |t| t.inner.len())
}

/// Releases a table. Null is ignored.
///
/// # Safety
/// `table` must be null or come from [`exn_table_build`] and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn exn_table_free(table: *mut ExnTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}
