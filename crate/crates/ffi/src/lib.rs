//! C ABI over `sfm-lab`.
//!
//! Every fallible call returns an [`SfmStatus`]; on failure a message is kept
//! per thread and can be read with [`sfm_last_error_message`]. Objects are
//! opaque handles released with their `_free` function. Rationals cross the
//! boundary as `"p/q"` strings owned by the caller and released with
//! [`sfm_string_free`]. Subsets are `uint32_t` bitmasks, element `i` at bit
//! `i - 1`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sfm_lab::cut_dimension::cut_dimension;
use sfm_lab::graph_learning::{st_kernel_vector, verify_st_kernel};
use sfm_lab::hard_instances::{Adversary2n, PermutationInstance, QueryClass, Verdict};
use sfm_lab::io::graph_from_json;
use sfm_lab::rational::{parse_pq, to_pq};
use sfm_lab::solvers::brute_force_sfm;
use sfm_lab::weight_based::{build_star_matching_graph, WeightBasedFunction, WeightedGraph};
use sfm_lab::{Error, SetFunction, Subset, ValueOracle};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidInstance = 3,
    LimitExceeded = 4,
    Inconsistent = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfmQueryClass {
    Important = 0,
    Useless = 1,
    Decoy = 2,
}

/// Opaque weighted graph.
pub struct SfmGraph {
    graph: WeightedGraph,
    function: WeightBasedFunction,
}

/// Opaque permutation-family adversary.
pub struct SfmAdversary2n {
    inner: Adversary2n,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SfmStatus {
    match e {
        Error::EnumerationLimit { .. } => SfmStatus::LimitExceeded,
        Error::Inconsistent(_) => SfmStatus::Inconsistent,
        Error::InvalidInstance(_) | Error::ParseRational(_) | Error::NotACutFunction(_) | Error::NotSymmetric(_) => {
            SfmStatus::InvalidInstance
        }
        _ => SfmStatus::InvalidArgument,
    }
}

/// Runs `body`, recording its error message and catching panics.
fn guarded(body: impl FnOnce() -> Result<(), (SfmStatus, String)>) -> SfmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            SfmStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SfmStatus::Panic
        }
    }
}

fn lib(e: Error) -> (SfmStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SfmStatus, String) {
    (SfmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (SfmStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (SfmStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn subset(n: usize, mask: u32) -> Result<Subset, (SfmStatus, String)> {
    Subset::new(n, mask).map_err(lib)
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sfm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sfm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn new_graph(graph: WeightedGraph) -> *mut SfmGraph {
    let function = WeightBasedFunction::from_graph(&graph);
    Box::into_raw(Box::new(SfmGraph { graph, function }))
}

/// Parses graph JSON (`n_vertices`, `mode`, optional `s`/`t`/`directed`,
/// `edges` as `[tail, head, "p/q"]`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sfm_graph_from_json(json: *const c_char, out: *mut *mut SfmGraph) -> SfmStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let g = graph_from_json(text).map_err(lib)?;
        *out = new_graph(g);
        Ok(())
    })
}

/// Star plus matching construction on `n` vertices.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sfm_graph_star_matching(n: usize, out: *mut *mut SfmGraph) -> SfmStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = new_graph(build_star_matching_graph(n).map_err(lib)?);
        Ok(())
    })
}

/// # Safety
/// `g` must come from this library and not have been freed. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sfm_graph_free(g: *mut SfmGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of ground elements (non-terminal vertices for s-t graphs).
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sfm_graph_ground_size(g: *const SfmGraph, out: *mut usize) -> SfmStatus {
    guarded(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        *out.as_mut().ok_or_else(|| null("out"))? = g.graph.ground_size();
        Ok(())
    })
}

/// Cut value of `mask` as a newly allocated `"p/q"` string.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sfm_graph_cut_value(g: *const SfmGraph, mask: u32, out: *mut *mut c_char) -> SfmStatus {
    guarded(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = subset(g.function.ground_size(), mask)?;
        *out = into_c_string(to_pq(&g.function.value(s)));
        Ok(())
    })
}

/// Rank of the minimizers' indicator vectors.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sfm_graph_cut_dimension(g: *const SfmGraph, nontrivial: bool, out: *mut usize) -> SfmStatus {
    guarded(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = cut_dimension(&g.function, nontrivial).map_err(lib)?.d;
        Ok(())
    })
}

/// Exhaustive minimum cut: first minimizer in bitmask order.
///
/// # Safety
/// `g` must be a live handle; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sfm_graph_min_cut(
    g: *const SfmGraph,
    nontrivial: bool,
    out_value: *mut *mut c_char,
    out_mask: *mut u32,
) -> SfmStatus {
    guarded(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        let out_value = out_value.as_mut().ok_or_else(|| null("out_value"))?;
        let out_mask = out_mask.as_mut().ok_or_else(|| null("out_mask"))?;
        let r = brute_force_sfm(&mut ValueOracle::new(&g.function), nontrivial).map_err(lib)?;
        *out_value = into_c_string(to_pq(&r.min_value));
        *out_mask = r.argmin.bits();
        Ok(())
    })
}

/// Evaluates the permutation-family function given by `sigma[0..n]`
/// (a permutation of `1..=n`) and `c[0..=n]` (entries 0 or 1) at `mask`.
///
/// # Safety
/// `sigma` must point to `n` values, `c` to `n + 1`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sfm_permutation_eval(
    n: usize,
    sigma: *const usize,
    c: *const u8,
    mask: u32,
    out: *mut *mut c_char,
) -> SfmStatus {
    guarded(|| {
        if sigma.is_null() || c.is_null() {
            return Err(null("sigma or c"));
        }
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let sigma = std::slice::from_raw_parts(sigma, n).to_vec();
        let c = std::slice::from_raw_parts(c, n + 1).to_vec();
        let f = PermutationInstance::new(sigma, c).map_err(lib)?;
        *out = into_c_string(to_pq(&f.value(subset(n, mask)?)));
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sfm_adversary2n_new(n: usize, out: *mut *mut SfmAdversary2n) -> SfmStatus {
    guarded(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let inner = Adversary2n::new(n).map_err(lib)?;
        *out = Box::into_raw(Box::new(SfmAdversary2n { inner }));
        Ok(())
    })
}

/// Answers one query; `out_class` may be null.
///
/// # Safety
/// `a` must be a live handle; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sfm_adversary2n_query(
    a: *mut SfmAdversary2n,
    mask: u32,
    out_value: *mut *mut c_char,
    out_class: *mut SfmQueryClass,
) -> SfmStatus {
    guarded(|| {
        let a = a.as_mut().ok_or_else(|| null("adversary"))?;
        let out_value = out_value.as_mut().ok_or_else(|| null("out_value"))?;
        let s = subset(a.inner.n(), mask)?;
        let (v, class) = a.inner.answer(s).map_err(lib)?;
        *out_value = into_c_string(to_pq(&v));
        if let Some(cls) = out_class.as_mut() {
            *cls = match class {
                QueryClass::Important => SfmQueryClass::Important,
                QueryClass::Useless => SfmQueryClass::Useless,
                QueryClass::Decoy => SfmQueryClass::Decoy,
            };
        }
        Ok(())
    })
}

/// Judges `guess` (a `"p/q"` string). Writes whether the solver was fooled
/// and the true minimum of the completed instance.
///
/// # Safety
/// `a` must be a live handle; `guess` NUL-terminated; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn sfm_adversary2n_finalize(
    a: *const SfmAdversary2n,
    guess: *const c_char,
    out_fooled: *mut bool,
    out_true_min: *mut *mut c_char,
) -> SfmStatus {
    guarded(|| {
        let a = a.as_ref().ok_or_else(|| null("adversary"))?;
        let guess = parse_pq(read_str(guess, "guess")?).map_err(lib)?;
        let out_fooled = out_fooled.as_mut().ok_or_else(|| null("out_fooled"))?;
        let out_true_min = out_true_min.as_mut().ok_or_else(|| null("out_true_min"))?;
        let game = a.inner.finalize(&guess);
        *out_fooled = game.verdict == Verdict::Fooled;
        *out_true_min = into_c_string(to_pq(&game.true_min));
        Ok(())
    })
}

/// # Safety
/// `a` must come from this library and not have been freed. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sfm_adversary2n_free(a: *mut SfmAdversary2n) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Builds the s-t kernel vector for `k` non-terminals and scans all `2^k`
/// query vectors. `k < 2` reports `InvalidArgument`.
///
/// # Safety
/// `out_pass` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sfm_st_kernel_check(k: usize, special_vertex: usize, out_pass: *mut bool) -> SfmStatus {
    guarded(|| {
        let out = out_pass.as_mut().ok_or_else(|| null("out_pass"))?;
        let kv = st_kernel_vector(k, special_vertex).map_err(lib)?;
        *out = verify_st_kernel(&kv).map_err(lib)?.passed();
        Ok(())
    })
}
