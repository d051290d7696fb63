//! C interface to `cfstammer`.
//!
//! Every fallible function returns a [`CfsStatus`]; on failure a message is
//! available from [`cfs_last_error`] on the same thread. Objects are opaque
//! handles released with their `_free` function. Strings returned through
//! `char **` out-parameters are released with [`cfs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_rational::Ratio;

use cfstammer::cf::continuant;
use cfstammer::family::Family;
use cfstammer::matgrowth::alphabet_spectrum;
use cfstammer::report::{analyze, AnalysisConfig, Source};
use cfstammer::stammer::{detect_repetitions, Witness};
use cfstammer::words::{Alphabet, Letter, WordStream};
use cfstammer::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    UnknownFamily = 4,
    StreamExhausted = 5,
    DegenerateGrowth = 6,
    OutOfRange = 7,
    /// A Rust panic was caught at the boundary.
    Internal = 8,
}

impl From<&Error> for CfsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::UnknownFamily(_) => CfsStatus::UnknownFamily,
            Error::StreamExhausted(_) | Error::TooFewConvergents { .. } => {
                CfsStatus::StreamExhausted
            }
            Error::DegenerateGrowth { .. } => CfsStatus::DegenerateGrowth,
            _ => CfsStatus::InvalidArgument,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(text).expect("nul bytes removed")));
}

fn fail(status: CfsStatus, msg: impl Into<String>) -> CfsStatus {
    set_error(msg);
    status
}

fn fail_with(e: Error) -> CfsStatus {
    fail(CfsStatus::from(&e), e.to_string())
}

/// Runs `f`, turning panics into [`CfsStatus::Internal`].
fn guard(f: impl FnOnce() -> CfsStatus) -> CfsStatus {
    catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|_| fail(CfsStatus::Internal, "internal panic"))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CfsStatus> {
    if s.is_null() {
        return Err(fail(CfsStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(CfsStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn read_letters<'a>(letters: *const u64, len: usize) -> Result<&'a [Letter], CfsStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if letters.is_null() {
        return Err(fail(CfsStatus::NullPointer, "null letter buffer"));
    }
    Ok(std::slice::from_raw_parts(letters, len))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> CfsStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            CfsStatus::Ok
        }
        Err(_) => fail(CfsStatus::Internal, "output contains a nul byte"),
    }
}

/// Message for the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cfs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cfs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A letter stream of a family.
pub struct CfsStream {
    inner: WordStream,
}

/// Opens a stream from a descriptor such as `"davison theta=golden k=2"`.
///
/// # Safety
/// `descriptor` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cfs_stream_new(
    descriptor: *const c_char,
    out: *mut *mut CfsStream,
) -> CfsStatus {
    guard(|| {
        if out.is_null() {
            return fail(CfsStatus::NullPointer, "null output pointer");
        }
        let desc = match read_str(descriptor) {
            Ok(d) => d,
            Err(s) => return s,
        };
        match desc.parse::<Family>().and_then(|f| f.stream()) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(CfsStream { inner }));
                CfsStatus::Ok
            }
            Err(e) => fail_with(e),
        }
    })
}

/// Writes the next letter to `out`.
///
/// # Safety
/// `stream` must come from [`cfs_stream_new`]; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cfs_stream_next(stream: *mut CfsStream, out: *mut u64) -> CfsStatus {
    cfs_stream_fill(stream, out, 1)
}

/// Writes the next `len` letters to `buf`.
///
/// # Safety
/// `stream` must come from [`cfs_stream_new`]; `buf` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn cfs_stream_fill(
    stream: *mut CfsStream,
    buf: *mut u64,
    len: usize,
) -> CfsStatus {
    guard(|| {
        let Some(stream) = stream.as_mut() else {
            return fail(CfsStatus::NullPointer, "null stream");
        };
        if len == 0 {
            return CfsStatus::Ok;
        }
        if buf.is_null() {
            return fail(CfsStatus::NullPointer, "null buffer");
        }
        let buf = std::slice::from_raw_parts_mut(buf, len);
        for slot in buf {
            match stream.inner.next_letter() {
                Ok(l) => *slot = l,
                Err(e) => return fail_with(e),
            }
        }
        CfsStatus::Ok
    })
}

/// Number of letters read so far.
///
/// # Safety
/// `stream` must come from [`cfs_stream_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn cfs_stream_position(stream: *const CfsStream) -> usize {
    stream.as_ref().map_or(0, |s| s.inner.position())
}

/// # Safety
/// `stream` must come from [`cfs_stream_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cfs_stream_free(stream: *mut CfsStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}

/// Continuant `K(a_1, ..., a_len)` as a decimal string; `K()` is 1.
///
/// # Safety
/// `letters` must hold `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cfs_continuant(
    letters: *const u64,
    len: usize,
    out: *mut *mut c_char,
) -> CfsStatus {
    guard(|| {
        if out.is_null() {
            return fail(CfsStatus::NullPointer, "null output pointer");
        }
        let word = match read_letters(letters, len) {
            Ok(w) => w,
            Err(s) => return s,
        };
        match continuant(word) {
            Ok(k) => write_string(out, k.to_string()),
            Err(e) => fail_with(e),
        }
    })
}

/// One repetition: the word begins with `U V^w`, `|U| = r`, `|V| = s`,
/// `w = w_num / w_den` in lowest terms.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CfsWitness {
    pub r: u64,
    pub s: u64,
    pub w_num: u64,
    pub w_den: u64,
}

impl From<&Witness> for CfsWitness {
    fn from(w: &Witness) -> Self {
        CfsWitness {
            r: w.r as u64,
            s: w.s as u64,
            w_num: *w.w.numer(),
            w_den: *w.w.denom(),
        }
    }
}

pub struct CfsWitnessList {
    items: Vec<CfsWitness>,
}

/// Repetitions `U V^w` with `|U| <= max_r` and `w >= min_w_num / min_w_den`,
/// sorted by `s` then `r`.
///
/// # Safety
/// `letters` must hold `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cfs_detect_repetitions(
    letters: *const u64,
    len: usize,
    max_r: usize,
    min_w_num: u64,
    min_w_den: u64,
    out: *mut *mut CfsWitnessList,
) -> CfsStatus {
    guard(|| {
        if out.is_null() {
            return fail(CfsStatus::NullPointer, "null output pointer");
        }
        let word = match read_letters(letters, len) {
            Ok(w) => w,
            Err(s) => return s,
        };
        if word.is_empty() || max_r >= word.len() {
            return fail(
                CfsStatus::InvalidArgument,
                "need a non-empty word and max_r < len",
            );
        }
        if min_w_den == 0 || min_w_num <= min_w_den {
            return fail(CfsStatus::InvalidArgument, "min_w must exceed 1");
        }
        let found = detect_repetitions(word, max_r, Ratio::new(min_w_num, min_w_den));
        let items = found.iter().map(CfsWitness::from).collect();
        *out = Box::into_raw(Box::new(CfsWitnessList { items }));
        CfsStatus::Ok
    })
}

/// # Safety
/// `list` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn cfs_witness_list_len(list: *const CfsWitnessList) -> usize {
    list.as_ref().map_or(0, |l| l.items.len())
}

/// # Safety
/// `list` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cfs_witness_list_get(
    list: *const CfsWitnessList,
    index: usize,
    out: *mut CfsWitness,
) -> CfsStatus {
    guard(|| {
        let (Some(list), false) = (list.as_ref(), out.is_null()) else {
            return fail(CfsStatus::NullPointer, "null list or output pointer");
        };
        match list.items.get(index) {
            Some(w) => {
                *out = *w;
                CfsStatus::Ok
            }
            None => fail(
                CfsStatus::OutOfRange,
                format!("index {index} >= {}", list.items.len()),
            ),
        }
    })
}

/// # Safety
/// `list` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cfs_witness_list_free(list: *mut CfsWitnessList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// Full analysis report as JSON. `prefix_len` and `scales` use the library
/// defaults when 0.
///
/// # Safety
/// `descriptor` must be a valid C string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cfs_analyze_json(
    descriptor: *const c_char,
    prefix_len: usize,
    scales: usize,
    out: *mut *mut c_char,
) -> CfsStatus {
    guard(|| {
        if out.is_null() {
            return fail(CfsStatus::NullPointer, "null output pointer");
        }
        let desc = match read_str(descriptor) {
            Ok(d) => d,
            Err(s) => return s,
        };
        let mut cfg = AnalysisConfig::default();
        if prefix_len > 0 {
            cfg.prefix_len = Some(prefix_len);
        }
        if scales > 0 {
            cfg.scales = scales;
        }
        match desc
            .parse::<Family>()
            .and_then(|f| analyze(&Source::Family(f), &cfg))
        {
            Ok(doc) => write_string(out, doc.to_json()),
            Err(e) => fail_with(e),
        }
    })
}

/// Spectral radii of the letter matrices, their mean log `X`, and the
/// block-growth threshold, as JSON.
///
/// # Safety
/// `letters` must hold `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cfs_matrix_report_json(
    letters: *const u64,
    len: usize,
    out: *mut *mut c_char,
) -> CfsStatus {
    guard(|| {
        if out.is_null() {
            return fail(CfsStatus::NullPointer, "null output pointer");
        }
        let letters = match read_letters(letters, len) {
            Ok(w) => w,
            Err(s) => return s,
        };
        match Alphabet::new(letters.to_vec()).and_then(|a| alphabet_spectrum(&a)) {
            Ok(report) => write_string(
                out,
                serde_json::to_string(&report).expect("report serializes"),
            ),
            Err(e) => fail_with(e),
        }
    })
}
