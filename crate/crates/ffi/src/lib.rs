//! C ABI over the `chrestenson` crate.
//!
//! Every fallible function returns a [`ChStatus`]; on failure a description
//! is available from [`ch_last_error_message`] on the same thread. Step
//! functions and spectra cross the boundary as opaque handles that the caller
//! releases with the matching `_free` function. Values travel as separate
//! real and imaginary `double` arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use chrestenson::counterexample::block_gap;
use chrestenson::kernels::{lebesgue, verify_lemma};
use chrestenson::radix::DEFAULT_CELL_CAP;
use chrestenson::{
    forward, inverse, sample_walsh, walsh_exponent, AdicCell, Error, Limits, Order, Spectrum,
    StepFunction,
};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    MemoryGuard = 3,
    Overflow = 4,
    BufferTooSmall = 5,
    Infeasible = 6,
    Panic = 7,
}

/// Opaque step function handle.
pub struct ChStepFunction(StepFunction);

/// Opaque spectrum handle.
pub struct ChSpectrum(Spectrum);

/// Block gap results. `final_bound` is NaN where no bound applies.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ChGapSummary {
    pub block_start: u64,
    pub m_k: u64,
    pub resolution: u32,
    pub gap: f64,
    pub gap_error_bound: f64,
    pub lebesgue_m: f64,
    pub j2_bound: f64,
    pub j2_bound_log2: i64,
    pub dirichlet_bound: f64,
    pub final_bound: f64,
    pub pass: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ChStatus {
    match e {
        Error::MemoryGuard { .. } => ChStatus::MemoryGuard,
        Error::Overflow(_) => ChStatus::Overflow,
        Error::LemmaInfeasible { .. } => ChStatus::Infeasible,
        _ => ChStatus::InvalidArgument,
    }
}

/// Runs `f`, recording any error or panic for [`ch_last_error_message`].
fn guard<F: FnOnce() -> Result<(), ChStatus>>(f: F) -> ChStatus {
    set_last_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ChStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_last_error("internal panic");
            ChStatus::Panic
        }
    }
}

fn lib<T>(r: chrestenson::Result<T>) -> Result<T, ChStatus> {
    r.map_err(|e| {
        set_last_error(&e.to_string());
        status_of(&e)
    })
}

fn null(what: &str) -> ChStatus {
    set_last_error(&format!("{what} is null"));
    ChStatus::NullPointer
}

fn order(a: u32) -> Result<Order, ChStatus> {
    lib(Order::new(a))
}

fn limits(cell_cap: u64) -> Limits {
    Limits::with_cell_cap(if cell_cap == 0 {
        DEFAULT_CELL_CAP
    } else {
        cell_cap
    })
}

/// # Safety
/// `re` and `im` must each point to `len` readable doubles.
unsafe fn gather(re: *const f64, im: *const f64, len: usize) -> Result<Vec<Complex64>, ChStatus> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if re.is_null() {
        return Err(null("re"));
    }
    if im.is_null() {
        return Err(null("im"));
    }
    let re = std::slice::from_raw_parts(re, len);
    let im = std::slice::from_raw_parts(im, len);
    Ok(re
        .iter()
        .zip(im)
        .map(|(&r, &i)| Complex64::new(r, i))
        .collect())
}

/// # Safety
/// `re` and `im` must each point to `capacity` writable doubles.
unsafe fn scatter(
    values: &[Complex64],
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
) -> Result<(), ChStatus> {
    if capacity < values.len() {
        set_last_error(&format!(
            "buffers hold {capacity} values, need {}",
            values.len()
        ));
        return Err(ChStatus::BufferTooSmall);
    }
    if values.is_empty() {
        return Ok(());
    }
    if re.is_null() {
        return Err(null("re"));
    }
    if im.is_null() {
        return Err(null("im"));
    }
    for (k, v) in values.iter().enumerate() {
        *re.add(k) = v.re;
        *im.add(k) = v.im;
    }
    Ok(())
}

/// Description of the last failure on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn ch_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ch_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Whether `a` is a supported order.
#[no_mangle]
pub extern "C" fn ch_order_is_valid(a: u32) -> bool {
    Order::new(a).is_ok()
}

/// Exponent `e` with `ψ_n = ω^e` on cell `index` of the resolution grid.
///
/// # Safety
/// `out_exponent` must be a valid pointer to a `uint32_t`.
#[no_mangle]
pub unsafe extern "C" fn ch_walsh_exponent(
    a: u32,
    n: u64,
    resolution: u32,
    index: u64,
    out_exponent: *mut u32,
) -> ChStatus {
    guard(|| {
        if out_exponent.is_null() {
            return Err(null("out_exponent"));
        }
        let cell = lib(AdicCell::new(resolution, index, order(a)?))?;
        *out_exponent = lib(walsh_exponent(n, &cell))?.exponent();
        Ok(())
    })
}

/// Samples `ψ_n` on the resolution grid. `cell_cap` of 0 selects the default.
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle to free
/// with [`ch_step_function_free`].
#[no_mangle]
pub unsafe extern "C" fn ch_step_function_walsh(
    a: u32,
    n: u64,
    resolution: u32,
    cell_cap: u64,
    out: *mut *mut ChStepFunction,
) -> ChStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let o = order(a)?;
        lib(limits(cell_cap).check(lib(o.pow(resolution))?))?;
        let f = lib(sample_walsh(n, resolution, o))?;
        *out = Box::into_raw(Box::new(ChStepFunction(f)));
        Ok(())
    })
}

/// Step function from `len = a^N` cell values.
///
/// # Safety
/// `re` and `im` must each point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ch_step_function_from_values(
    a: u32,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut ChStepFunction,
) -> ChStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let values = gather(re, im, len)?;
        let f = lib(StepFunction::from_values(order(a)?, values))?;
        *out = Box::into_raw(Box::new(ChStepFunction(f)));
        Ok(())
    })
}

/// Number of cells, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ch_step_function_len(f: *const ChStepFunction) -> usize {
    f.as_ref().map_or(0, |f| f.0.len())
}

/// Resolution `N` of the grid, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ch_step_function_resolution(f: *const ChStepFunction) -> u32 {
    f.as_ref().map_or(0, |f| f.0.resolution())
}

/// Copies the cell values into caller buffers of `capacity` doubles each.
///
/// # Safety
/// `f` must be a live handle; `re` and `im` must each hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn ch_step_function_copy_values(
    f: *const ChStepFunction,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
) -> ChStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("f"))?;
        scatter(f.0.values(), re, im, capacity)
    })
}

/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ch_step_function_free(f: *mut ChStepFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Spectrum from `len` coefficients.
///
/// # Safety
/// `re` and `im` must each point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ch_spectrum_from_values(
    a: u32,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut ChSpectrum,
) -> ChStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let values = gather(re, im, len)?;
        *out = Box::into_raw(Box::new(ChSpectrum(Spectrum::new(order(a)?, values))));
        Ok(())
    })
}

/// Number of coefficients, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ch_spectrum_len(s: *const ChSpectrum) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `s` must be a live handle; `re` and `im` must each hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn ch_spectrum_copy_values(
    s: *const ChSpectrum,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
) -> ChStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("s"))?;
        scatter(s.0.coefficients(), re, im, capacity)
    })
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ch_spectrum_free(s: *mut ChSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Fast forward transform.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ch_forward(
    f: *const ChStepFunction,
    out: *mut *mut ChSpectrum,
) -> ChStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("f"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = Box::into_raw(Box::new(ChSpectrum(forward(&f.0))));
        Ok(())
    })
}

/// Synthesis on the resolution grid. `cell_cap` of 0 selects the default.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ch_inverse(
    s: *const ChSpectrum,
    resolution: u32,
    cell_cap: u64,
    out: *mut *mut ChStepFunction,
) -> ChStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("s"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        lib(limits(cell_cap).check(lib(s.0.order().pow(resolution))?))?;
        let f = lib(inverse(&s.0, resolution))?;
        *out = Box::into_raw(Box::new(ChStepFunction(f)));
        Ok(())
    })
}

/// Lebesgue constant `L_n` with its summation error bound.
///
/// # Safety
/// `out_value` must be valid; `out_error_bound` may be null.
#[no_mangle]
pub unsafe extern "C" fn ch_lebesgue_constant(
    a: u32,
    n: u64,
    cell_cap: u64,
    out_value: *mut f64,
    out_error_bound: *mut f64,
) -> ChStatus {
    guard(|| {
        if out_value.is_null() {
            return Err(null("out_value"));
        }
        let l = lib(lebesgue(n, order(a)?, &limits(cell_cap)))?;
        *out_value = l.value;
        if !out_error_bound.is_null() {
            *out_error_bound = l.error_bound;
        }
        Ok(())
    })
}

/// Checks the Lebesgue lower bounds for `k = 0 ..= k_max`.
///
/// # Safety
/// `out_all_pass` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ch_verify_lemma(
    a: u32,
    k_max: u32,
    cell_cap: u64,
    out_all_pass: *mut bool,
) -> ChStatus {
    guard(|| {
        if out_all_pass.is_null() {
            return Err(null("out_all_pass"));
        }
        *out_all_pass = lib(verify_lemma(k_max, order(a)?, &limits(cell_cap)))?.all_pass;
        Ok(())
    })
}

/// L1 norm of the `k`-th block and the bounds it is checked against.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ch_block_gap(
    a: u32,
    k: u32,
    cell_cap: u64,
    out: *mut ChGapSummary,
) -> ChStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = lib(block_gap(k, order(a)?, &limits(cell_cap)))?;
        *out = ChGapSummary {
            block_start: r.block_start,
            m_k: r.m_k,
            resolution: r.resolution,
            gap: r.gap,
            gap_error_bound: r.gap_error_bound,
            lebesgue_m: r.lebesgue_m,
            j2_bound: r.j2_bound,
            j2_bound_log2: r.j2_bound_log2,
            dirichlet_bound: r.dirichlet_bound,
            final_bound: r.final_bound.unwrap_or(f64::NAN),
            pass: r.pass,
        };
        Ok(())
    })
}
