//! C ABI over the sampling lab.
//!
//! All objects cross the boundary as opaque handles created and destroyed
//! by paired `*_new`-style and `*_free` functions. Fallible calls return a
//! [`QslStatus`]; on failure, `qsl_last_error_message` returns a
//! thread-local description valid until the next failing call on the same
//! thread. Strings returned through out-parameters are released with
//! `qsl_string_free`. Panics never unwind across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use qsl_core::circuit::{Circuit, Connectivity, TwoQubit};
use qsl_core::learner::{fit_ar, fit_product, Model};
use qsl_core::porter_thomas::{self, Ordering, SubsetMask};
use qsl_core::simulator::{self, NoiseModel, SimOptions};
use qsl_core::{BasisIndex, Error, ExplicitDistribution, Prng, SampleSet};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QslStatus {
    Ok = 0,
    /// Null pointer, unparsable string, or an argument outside its domain.
    InvalidArgument = 1,
    /// Input failed validation (widths, normalization, file contents).
    Validation = 3,
    /// Request exceeds a configured resource cap.
    ResourceLimit = 4,
    /// Filesystem error.
    Io = 5,
    /// Unexpected internal failure.
    Internal = 6,
}

/// An immutable random circuit.
pub struct QslCircuit(Circuit);

/// A dense probability distribution over bitstrings.
pub struct QslDistribution(ExplicitDistribution);

/// An ordered multiset of measured bitstrings.
pub struct QslSamples(SampleSet);

/// A trained generative model.
pub struct QslModel(Model);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let cleaned: String = msg.chars().map(|c| if c == '\0' { ' ' } else { c }).collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(cleaned).expect("no interior nul"));
}

fn status_of(err: &Error) -> QslStatus {
    match err {
        Error::ResourceCap { .. } | Error::DbmInfeasible { .. } => QslStatus::ResourceLimit,
        Error::Io(_) => QslStatus::Io,
        _ => QslStatus::Validation,
    }
}

fn fail(err: Error) -> QslStatus {
    set_error(&err.to_string());
    status_of(&err)
}

fn invalid(msg: &str) -> QslStatus {
    set_error(msg);
    QslStatus::InvalidArgument
}

/// Runs a closure, converting panics into `QslStatus::Internal`.
fn guarded(f: impl FnOnce() -> QslStatus) -> QslStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            QslStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> QslStatus {
    if out.is_null() {
        return invalid("null out-parameter");
    }
    *out = Box::into_raw(Box::new(value));
    QslStatus::Ok
}

/// Message for the most recent failure on this thread. Owned by the
/// library; valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qsl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned through an out-parameter.
///
/// # Safety
/// `s` must have been produced by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn qsl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// circuits
// ---------------------------------------------------------------------------

/// Draws a random circuit. `connectivity` is "chain" or "grid:RxC";
/// `two_qubit` is "cz" or "fsim"; the fSim angles are read only for "fsim".
///
/// # Safety
/// String pointers must be valid NUL-terminated UTF-8 or null; `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qsl_circuit_random(
    n: u32,
    depth: u32,
    connectivity: *const c_char,
    two_qubit: *const c_char,
    fsim_theta: f64,
    fsim_phi: f64,
    seed: u64,
    out: *mut *mut QslCircuit,
) -> QslStatus {
    guarded(|| {
        let Some(conn) = read_str(connectivity) else { return invalid("null connectivity") };
        let Some(kind) = read_str(two_qubit) else { return invalid("null two_qubit") };
        let conn = match Connectivity::parse(conn) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        let two_qubit = match kind {
            "cz" => TwoQubit::Cz,
            "fsim" => TwoQubit::FSim { theta: fsim_theta, phi: fsim_phi },
            other => return invalid(&format!("unknown two-qubit gate {other:?}")),
        };
        match Circuit::random(n as usize, depth as usize, &conn, two_qubit, seed) {
            Ok(c) => write_out(out, QslCircuit(c)),
            Err(e) => fail(e),
        }
    })
}

/// Parses a circuit from its JSON form.
///
/// # Safety
/// `json` must be valid NUL-terminated UTF-8; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsl_circuit_from_json(
    json: *const c_char,
    out: *mut *mut QslCircuit,
) -> QslStatus {
    guarded(|| {
        let Some(text) = read_str(json) else { return invalid("null json") };
        match Circuit::from_json(text) {
            Ok(c) => write_out(out, QslCircuit(c)),
            Err(e) => fail(e),
        }
    })
}

/// Serializes a circuit to JSON; release with `qsl_string_free`.
///
/// # Safety
/// `circuit` must be a live handle; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsl_circuit_to_json(
    circuit: *const QslCircuit,
    out_json: *mut *mut c_char,
) -> QslStatus {
    guarded(|| {
        if circuit.is_null() || out_json.is_null() {
            return invalid("null argument");
        }
        let text = (*circuit).0.to_json();
        *out_json = CString::new(text).expect("json has no NUL").into_raw();
        QslStatus::Ok
    })
}

/// Qubit count, or 0 for a null handle.
///
/// # Safety
/// `circuit` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qsl_circuit_qubits(circuit: *const QslCircuit) -> u32 {
    if circuit.is_null() {
        0
    } else {
        (*circuit).0.n as u32
    }
}

/// Cycle count, or 0 for a null handle.
///
/// # Safety
/// `circuit` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qsl_circuit_depth(circuit: *const QslCircuit) -> u32 {
    if circuit.is_null() {
        0
    } else {
        (*circuit).0.depth() as u32
    }
}

/// # Safety
/// `circuit` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qsl_circuit_free(circuit: *mut QslCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

// ---------------------------------------------------------------------------
// distributions
// ---------------------------------------------------------------------------

/// Full state-vector simulation of a circuit into its output distribution.
/// `mem_cap_gib` bounds the amplitude array (1.0 admits 26 qubits).
///
/// # Safety
/// `circuit` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsl_simulate(
    circuit: *const QslCircuit,
    mem_cap_gib: f64,
    out: *mut *mut QslDistribution,
) -> QslStatus {
    guarded(|| {
        if circuit.is_null() {
            return invalid("null circuit");
        }
        let opts = SimOptions { mem_cap_gib };
        match simulator::output_distribution(&(*circuit).0, &opts) {
            Ok(d) => write_out(out, QslDistribution(d)),
            Err(e) => fail(e),
        }
    })
}

/// Ordered Porter-Thomas distribution. `ordering` is "integer",
/// "parity:BITSTRING" (mask with qubit n-1 leftmost) or "permute:SEED".
///
/// # Safety
/// `ordering` must be valid NUL-terminated UTF-8; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsl_porter_thomas(
    n: u32,
    seed: u64,
    ordering: *const c_char,
    out: *mut *mut QslDistribution,
) -> QslStatus {
    guarded(|| {
        let Some(spec) = read_str(ordering) else { return invalid("null ordering") };
        let ordering = if spec == "integer" {
            Ordering::Integer
        } else if let Some(mask_text) = spec.strip_prefix("parity:") {
            let mask = match BasisIndex::from_bit_string(mask_text) {
                Ok(b) if b.width() == n as usize => match SubsetMask::new(b.value(), n as usize) {
                    Ok(m) => m,
                    Err(e) => return fail(e),
                },
                Ok(b) => {
                    return invalid(&format!("mask has {} bits, want {n}", b.width()));
                }
                Err(e) => return fail(e),
            };
            Ordering::SubsetParity(mask)
        } else if let Some(ps) = spec.strip_prefix("permute:") {
            match ps.parse() {
                Ok(seed) => Ordering::RandomPermutation { seed },
                Err(_) => return invalid(&format!("bad permutation seed {ps:?}")),
            }
        } else {
            return invalid(&format!("unknown ordering {spec:?}"));
        };
        let mut rng = Prng::new(seed);
        let raw = match porter_thomas::porter_thomas_probs(n as usize, &mut rng) {
            Ok(d) => d,
            Err(e) => return fail(e),
        };
        match porter_thomas::apply_ordering(&raw, &ordering) {
            Ok(d) => write_out(out, QslDistribution(d)),
            Err(e) => fail(e),
        }
    })
}

/// f·P + (1-f)·Uniform as a new handle.
///
/// # Safety
/// `dist` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsl_distribution_mix_uniform(
    dist: *const QslDistribution,
    fidelity: f64,
    out: *mut *mut QslDistribution,
) -> QslStatus {
    guarded(|| {
        if dist.is_null() {
            return invalid("null distribution");
        }
        let noise = match NoiseModel::new(fidelity) {
            Ok(n) => n,
            Err(e) => return fail(e),
        };
        write_out(out, QslDistribution(simulator::apply_noise(&(*dist).0, &noise)))
    })
}

/// # Safety
/// `dist` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qsl_distribution_qubits(dist: *const QslDistribution) -> u32 {
    if dist.is_null() {
        0
    } else {
        (*dist).0.n() as u32
    }
}

/// Probability of one basis index; -1.0 on a null handle or out-of-range
/// index.
///
/// # Safety
/// `dist` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qsl_distribution_prob(dist: *const QslDistribution, index: u64) -> f64 {
    if dist.is_null() {
        return -1.0;
    }
    let d = &(*dist).0;
    if index >= d.len() as u64 {
        return -1.0;
    }
    d.prob(index)
}

/// Shannon entropy in nats; NaN on a null handle.
///
/// # Safety
/// `dist` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qsl_distribution_entropy(dist: *const QslDistribution) -> f64 {
    if dist.is_null() {
        return f64::NAN;
    }
    qsl_core::metrics::entropy(&(*dist).0)
}

/// Ideal deep-circuit entropy reference ln(2^n) - 1 + γ.
#[no_mangle]
pub extern "C" fn qsl_pt_reference_entropy(n: u32) -> f64 {
    qsl_core::metrics::pt_reference_entropy(n as usize)
}

/// Writes the binary distribution format (or CSV if the path ends in .csv).
///
/// # Safety
/// `dist` must be a live handle; `path` valid NUL-terminated UTF-8.
#[no_mangle]
pub unsafe extern "C" fn qsl_distribution_write(
    dist: *const QslDistribution,
    path: *const c_char,
) -> QslStatus {
    guarded(|| {
        if dist.is_null() {
            return invalid("null distribution");
        }
        let Some(path) = read_str(path) else { return invalid("null path") };
        match (*dist).0.write_file(&PathBuf::from(path)) {
            Ok(()) => QslStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

/// Reads a distribution file written by `qsl_distribution_write`.
///
/// # Safety
/// `path` must be valid NUL-terminated UTF-8; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsl_distribution_read(
    path: *const c_char,
    out: *mut *mut QslDistribution,
) -> QslStatus {
    guarded(|| {
        let Some(path) = read_str(path) else { return invalid("null path") };
        match ExplicitDistribution::read_file(&PathBuf::from(path)) {
            Ok(d) => write_out(out, QslDistribution(d)),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `dist` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qsl_distribution_free(dist: *mut QslDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

// ---------------------------------------------------------------------------
// samples
// ---------------------------------------------------------------------------

/// Draws `count` bitstrings by inverse-CDF sampling; deterministic in
/// `seed` and independent of worker count.
///
/// # Safety
/// `dist` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsl_sample(
    dist: *const QslDistribution,
    count: u64,
    seed: u64,
    out: *mut *mut QslSamples,
) -> QslStatus {
    guarded(|| {
        if dist.is_null() {
            return invalid("null distribution");
        }
        match (*dist).0.sample_seeded(count as usize, seed, "ffi") {
            Ok(s) => write_out(out, QslSamples(s)),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `samples` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qsl_samples_len(samples: *const QslSamples) -> u64 {
    if samples.is_null() {
        0
    } else {
        (*samples).0.len() as u64
    }
}

/// # Safety
/// `samples` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qsl_samples_qubits(samples: *const QslSamples) -> u32 {
    if samples.is_null() {
        0
    } else {
        (*samples).0.n() as u32
    }
}

/// Basis index of sample `i`, or u64::MAX when out of range.
///
/// # Safety
/// `samples` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qsl_samples_get(samples: *const QslSamples, i: u64) -> u64 {
    if samples.is_null() {
        return u64::MAX;
    }
    (*samples).0.values().get(i as usize).copied().unwrap_or(u64::MAX)
}

/// Writes the text format: one bitstring per line, qubit n-1 leftmost.
///
/// # Safety
/// `samples` must be a live handle; `path` valid NUL-terminated UTF-8.
#[no_mangle]
pub unsafe extern "C" fn qsl_samples_write(
    samples: *const QslSamples,
    path: *const c_char,
) -> QslStatus {
    guarded(|| {
        if samples.is_null() {
            return invalid("null samples");
        }
        let Some(path) = read_str(path) else { return invalid("null path") };
        match (*samples).0.write_file(&PathBuf::from(path)) {
            Ok(()) => QslStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

/// Reads the text sample format; ragged lines are rejected.
///
/// # Safety
/// `path` must be valid NUL-terminated UTF-8; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsl_samples_read(
    path: *const c_char,
    out: *mut *mut QslSamples,
) -> QslStatus {
    guarded(|| {
        let Some(path) = read_str(path) else { return invalid("null path") };
        match SampleSet::read_file(&PathBuf::from(path)) {
            Ok(s) => write_out(out, QslSamples(s)),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `samples` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qsl_samples_free(samples: *mut QslSamples) {
    if !samples.is_null() {
        drop(Box::from_raw(samples));
    }
}

// ---------------------------------------------------------------------------
// metrics
// ---------------------------------------------------------------------------

/// Linear cross-entropy fidelity of samples against a truth distribution,
/// with its standard error.
///
/// # Safety
/// Handles must be live; out-pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn qsl_xeb(
    samples: *const QslSamples,
    truth: *const QslDistribution,
    out_fidelity: *mut f64,
    out_standard_error: *mut f64,
) -> QslStatus {
    guarded(|| {
        if samples.is_null() || truth.is_null() {
            return invalid("null argument");
        }
        match qsl_core::metrics::xeb(&(*samples).0, &(*truth).0) {
            Ok(r) => {
                if !out_fidelity.is_null() {
                    *out_fidelity = r.fidelity;
                }
                if !out_standard_error.is_null() {
                    *out_standard_error = r.standard_error;
                }
                QslStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Pearson χ² of the sample counts against a null distribution.
///
/// # Safety
/// Handles must be live; out-pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn qsl_chi2(
    samples: *const QslSamples,
    null: *const QslDistribution,
    out_statistic: *mut f64,
    out_p_value: *mut f64,
) -> QslStatus {
    guarded(|| {
        if samples.is_null() || null.is_null() {
            return invalid("null argument");
        }
        match qsl_core::metrics::chi2_from_samples(&(*samples).0, &(*null).0) {
            Ok(r) => {
                if !out_statistic.is_null() {
                    *out_statistic = r.statistic;
                }
                if !out_p_value.is_null() {
                    *out_p_value = r.p_value;
                }
                QslStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Raw L1 distance Σ|a-b| between two distributions.
///
/// # Safety
/// Handles must be live; `out` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn qsl_l1_distance(
    a: *const QslDistribution,
    b: *const QslDistribution,
    out: *mut f64,
) -> QslStatus {
    guarded(|| {
        if a.is_null() || b.is_null() {
            return invalid("null argument");
        }
        match qsl_core::metrics::l1_distance(&(*a).0, &(*b).0) {
            Ok(v) => {
                if !out.is_null() {
                    *out = v;
                }
                QslStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

// ---------------------------------------------------------------------------
// models
// ---------------------------------------------------------------------------

/// Fits the autoregressive table model with context length `order`.
///
/// # Safety
/// `samples` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsl_fit_ar(
    samples: *const QslSamples,
    order: u32,
    alpha: f64,
    out: *mut *mut QslModel,
) -> QslStatus {
    guarded(|| {
        if samples.is_null() {
            return invalid("null samples");
        }
        match fit_ar(&(*samples).0, order as usize, alpha) {
            Ok(m) => write_out(out, QslModel(Model::Ar(m))),
            Err(e) => fail(e),
        }
    })
}

/// Fits the product-Bernoulli (one-shot) model.
///
/// # Safety
/// `samples` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsl_fit_product(
    samples: *const QslSamples,
    out: *mut *mut QslModel,
) -> QslStatus {
    guarded(|| {
        if samples.is_null() {
            return invalid("null samples");
        }
        match fit_product(&(*samples).0) {
            Ok(m) => write_out(out, QslModel(Model::Product(m))),
            Err(e) => fail(e),
        }
    })
}

/// Number of stored model parameters.
///
/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qsl_model_parameter_count(model: *const QslModel) -> u64 {
    if model.is_null() {
        0
    } else {
        (*model).0.parameter_count() as u64
    }
}

/// Generates samples from a trained model (bit-by-bit for the
/// autoregressive model, independent bits for the product model).
///
/// # Safety
/// `model` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsl_model_sample(
    model: *const QslModel,
    count: u64,
    seed: u64,
    out: *mut *mut QslSamples,
) -> QslStatus {
    guarded(|| {
        if model.is_null() {
            return invalid("null model");
        }
        let mut rng = Prng::new(seed);
        match (*model).0.sample(count as usize, &mut rng, "ffi-model") {
            Ok(s) => write_out(out, QslSamples(s)),
            Err(e) => fail(e),
        }
    })
}

/// Serializes a model to JSON; release with `qsl_string_free`.
///
/// # Safety
/// `model` must be a live handle; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsl_model_to_json(
    model: *const QslModel,
    out_json: *mut *mut c_char,
) -> QslStatus {
    guarded(|| {
        if model.is_null() || out_json.is_null() {
            return invalid("null argument");
        }
        *out_json = CString::new((*model).0.to_json()).expect("json has no NUL").into_raw();
        QslStatus::Ok
    })
}

/// Parses a model from its JSON form.
///
/// # Safety
/// `json` must be valid NUL-terminated UTF-8; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsl_model_from_json(
    json: *const c_char,
    out: *mut *mut QslModel,
) -> QslStatus {
    guarded(|| {
        let Some(text) = read_str(json) else { return invalid("null json") };
        match Model::from_json(text) {
            Ok(m) => write_out(out, QslModel(m)),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `model` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qsl_model_free(model: *mut QslModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}
