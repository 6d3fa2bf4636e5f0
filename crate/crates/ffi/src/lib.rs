//! C interface to `seqsem`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_parse`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`SeqsemStatus`]; on failure [`seqsem_last_error_message`]
//! describes the problem. Positions are 1-based, energies are kcal/mol, and
//! logarithms are natural.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use seqsem::cli::parse_structure_text;
use seqsem::sampler::draw_rng;
use seqsem::{
    structure_energy, BoltzmannSampler, EnergyParams, Folder, PartitionEngine, PatternConstraint,
    SecondaryStructure, Sequence, StructurePartition,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqsemStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    IoError = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// An energy parameter set.
pub struct SeqsemParams {
    inner: EnergyParams,
}

/// A validated secondary structure.
pub struct SeqsemStructure {
    inner: SecondaryStructure,
}

/// The sequence partition function of one structure, with the parameters
/// it was computed from.
pub struct SeqsemPartition {
    params: EnergyParams,
    structure: SecondaryStructure,
    partition: StructurePartition,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(SeqsemStatus, String);

impl Failure {
    fn new(status: SeqsemStatus, message: impl ToString) -> Self {
        Failure(status, message.to_string())
    }
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, records its error and turns panics into [`SeqsemStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SeqsemStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SeqsemStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal error: {message}"));
            SeqsemStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(SeqsemStatus::NullPointer, format!("{what} is NULL")))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure::new(SeqsemStatus::NullPointer, format!("{what} is NULL")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(
            SeqsemStatus::NullPointer,
            format!("{what} is NULL"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(SeqsemStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn sequence(p: *const c_char) -> Result<Sequence, Failure> {
    text(p, "sequence")?
        .parse()
        .map_err(|e| Failure::new(SeqsemStatus::ParseError, e))
}

/// Copies `s` and a terminating NUL into `buf` of `len` bytes.
unsafe fn write_str(s: &str, buf: *mut c_char, len: usize) -> Result<(), Failure> {
    if buf.is_null() {
        return Err(Failure::new(
            SeqsemStatus::NullPointer,
            "output buffer is NULL",
        ));
    }
    if s.len() + 1 > len {
        return Err(Failure::new(
            SeqsemStatus::BufferTooSmall,
            format!("need {} bytes, buffer has {len}", s.len() + 1),
        ));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

fn kcal(e: seqsem::Energy) -> f64 {
    if e.is_finite() {
        e.kcal()
    } else {
        f64::INFINITY
    }
}

/// Message describing the last failed call on this thread; empty after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn seqsem_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn seqsem_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The built-in parameter set.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn seqsem_params_default(out: *mut *mut SeqsemParams) -> SeqsemStatus {
    guard(|| {
        *out_ref(out, "out")? = Box::into_raw(Box::new(SeqsemParams {
            inner: EnergyParams::default_set(),
        }));
        Ok(())
    })
}

/// Load a parameter file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqsem_params_from_file(
    path: *const c_char,
    out: *mut *mut SeqsemParams,
) -> SeqsemStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let path = text(path, "path")?;
        let inner = EnergyParams::from_file(path).map_err(|e| match e {
            seqsem::error::ParamsError::Io(_) => Failure::new(SeqsemStatus::IoError, e),
            _ => Failure::new(SeqsemStatus::ParseError, e),
        })?;
        *out = Box::into_raw(Box::new(SeqsemParams { inner }));
        Ok(())
    })
}

/// Rescale RT to the given temperature in degrees Celsius.
///
/// # Safety
/// `params` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn seqsem_params_set_temperature(
    params: *mut SeqsemParams,
    celsius: f64,
) -> SeqsemStatus {
    guard(|| {
        let p = out_ref(params, "params")?;
        if !(celsius > -273.15) || !celsius.is_finite() {
            return Err(Failure::new(
                SeqsemStatus::InvalidArgument,
                format!("temperature {celsius} C"),
            ));
        }
        p.inner = p.inner.clone().with_temperature(celsius);
        Ok(())
    })
}

/// Copy the SHA-256 of the parameter source, as hex, into `buf`.
///
/// # Safety
/// `params` must be a live handle and `buf` writable for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn seqsem_params_checksum(
    params: *const SeqsemParams,
    buf: *mut c_char,
    len: usize,
) -> SeqsemStatus {
    guard(|| write_str(deref(params, "params")?.inner.checksum(), buf, len))
}

/// # Safety
/// `params` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn seqsem_params_free(params: *mut SeqsemParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Parse a dot-bracket string or pair-list text.
///
/// # Safety
/// `text` must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqsem_structure_parse(
    structure: *const c_char,
    out: *mut *mut SeqsemStructure,
) -> SeqsemStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let inner = parse_structure_text(text(structure, "structure")?)
            .map_err(|e| Failure::new(SeqsemStatus::ParseError, e))?;
        *out = Box::into_raw(Box::new(SeqsemStructure { inner }));
        Ok(())
    })
}

/// Length of the structure, 0 for NULL.
///
/// # Safety
/// `structure` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn seqsem_structure_len(structure: *const SeqsemStructure) -> usize {
    structure.as_ref().map_or(0, |s| s.inner.len())
}

/// Number of arcs, 0 for NULL.
///
/// # Safety
/// `structure` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn seqsem_structure_arc_count(structure: *const SeqsemStructure) -> usize {
    structure.as_ref().map_or(0, |s| s.inner.arcs().len())
}

/// # Safety
/// `structure` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn seqsem_structure_free(structure: *mut SeqsemStructure) {
    if !structure.is_null() {
        drop(Box::from_raw(structure));
    }
}

/// Compute the partition function over all sequences for `structure`. The
/// result keeps its own copies of both inputs.
///
/// # Safety
/// `params` and `structure` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqsem_partition_new(
    params: *const SeqsemParams,
    structure: *const SeqsemStructure,
    out: *mut *mut SeqsemPartition,
) -> SeqsemStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let params = deref(params, "params")?.inner.clone();
        let structure = deref(structure, "structure")?.inner.clone();
        let partition = seqsem::partition_function(&params, &structure);
        *out = Box::into_raw(Box::new(SeqsemPartition {
            params,
            structure,
            partition,
        }));
        Ok(())
    })
}

/// `ln Q(S)`.
///
/// # Safety
/// `partition` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqsem_partition_log_q(
    partition: *const SeqsemPartition,
    out: *mut f64,
) -> SeqsemStatus {
    guard(|| {
        *out_ref(out, "out")? = deref(partition, "partition")?.partition.log_q().ln();
        Ok(())
    })
}

/// The 16 entries `ln Q(a, b)` of the arc with the given index (arcs sorted
/// by left end, 0-based), row-major with bases ordered A, U, C, G.
///
/// # Safety
/// `partition` must be a live handle and `out` writable for 16 doubles.
#[no_mangle]
pub unsafe extern "C" fn seqsem_partition_arc_table(
    partition: *const SeqsemPartition,
    arc: usize,
    out: *mut f64,
) -> SeqsemStatus {
    guard(|| {
        let p = deref(partition, "partition")?;
        if out.is_null() {
            return Err(Failure::new(SeqsemStatus::NullPointer, "out is NULL"));
        }
        let table = p.partition.tables().get(arc).ok_or_else(|| {
            Failure::new(
                SeqsemStatus::InvalidArgument,
                format!("arc {arc} out of range ({} arcs)", p.structure.arcs().len()),
            )
        })?;
        for (k, w) in table.iter().flatten().enumerate() {
            *out.add(k) = w.ln();
        }
        Ok(())
    })
}

/// # Safety
/// `partition` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn seqsem_partition_free(partition: *mut SeqsemPartition) {
    if !partition.is_null() {
        drop(Box::from_raw(partition));
    }
}

/// Probability that positions `start..start+len(pattern)-1` carry `pattern`.
///
/// # Safety
/// `partition` must be a live handle, `pattern` NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn seqsem_pattern_probability(
    partition: *const SeqsemPartition,
    start: usize,
    pattern: *const c_char,
    out: *mut f64,
) -> SeqsemStatus {
    guard(|| {
        let p = deref(partition, "partition")?;
        let out = out_ref(out, "out")?;
        let pattern = sequence(pattern)?;
        let c = PatternConstraint::pattern(p.structure.len(), start, pattern.bases())
            .map_err(|e| Failure::new(SeqsemStatus::InvalidArgument, e))?;
        let engine = PartitionEngine::new(&p.params, &p.structure);
        *out = engine
            .probability(&c)
            .map_err(|e| Failure::new(SeqsemStatus::InvalidArgument, e))?;
        Ok(())
    })
}

/// Draw `index` of the ensemble seeded with `seed`, written as a string of
/// `n` bases plus NUL. Matches `seqsem sample --seed`. `log_prob` and
/// `energy` may be NULL.
///
/// # Safety
/// `partition` must be a live handle, `buf` writable for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn seqsem_sample(
    partition: *const SeqsemPartition,
    seed: u64,
    index: u64,
    buf: *mut c_char,
    len: usize,
    log_prob: *mut f64,
    energy: *mut f64,
) -> SeqsemStatus {
    guard(|| {
        let p = deref(partition, "partition")?;
        let sampler = BoltzmannSampler::new(&p.params, &p.structure, &p.partition);
        let draw = sampler.sample(&mut draw_rng(seed, index));
        write_str(&draw.sequence.to_string(), buf, len)?;
        if let Some(lp) = log_prob.as_mut() {
            *lp = draw.log_prob;
        }
        if let Some(e) = energy.as_mut() {
            *e = kcal(draw.energy);
        }
        Ok(())
    })
}

/// Draws `0..count` of the ensemble seeded with `seed`, concatenated without
/// separators into `buf` (`count * n` bytes plus one NUL).
///
/// # Safety
/// `partition` must be a live handle, `buf` writable for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn seqsem_sample_ensemble(
    partition: *const SeqsemPartition,
    count: usize,
    seed: u64,
    buf: *mut c_char,
    len: usize,
) -> SeqsemStatus {
    guard(|| {
        let p = deref(partition, "partition")?;
        let sampler = BoltzmannSampler::new(&p.params, &p.structure, &p.partition);
        let joined: String = sampler
            .ensemble(count, seed)
            .iter()
            .map(|d| d.sequence.to_string())
            .collect();
        write_str(&joined, buf, len)
    })
}

/// `eta(sequence, structure)`; `INFINITY` when a pair is inadmissible.
///
/// # Safety
/// Handles must be live, `seq` NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn seqsem_energy(
    params: *const SeqsemParams,
    seq: *const c_char,
    structure: *const SeqsemStructure,
    out: *mut f64,
) -> SeqsemStatus {
    guard(|| {
        let params = deref(params, "params")?;
        let s = deref(structure, "structure")?;
        let out = out_ref(out, "out")?;
        let e = structure_energy(&params.inner, &sequence(seq)?, &s.inner)
            .map_err(|e| Failure::new(SeqsemStatus::InvalidArgument, e))?;
        *out = kcal(e);
        Ok(())
    })
}

/// Minimum free energy structure of `seq` as dot-bracket in `buf`.
///
/// # Safety
/// `params` must be live, `seq` NUL-terminated, `buf` writable for `len`
/// bytes; `energy` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn seqsem_fold_mfe(
    params: *const SeqsemParams,
    seq: *const c_char,
    buf: *mut c_char,
    len: usize,
    energy: *mut f64,
) -> SeqsemStatus {
    guard(|| {
        let params = deref(params, "params")?;
        let fold = Folder::new(&params.inner).mfe(&sequence(seq)?);
        write_str(&fold.structure.dot_bracket(), buf, len)?;
        if let Some(e) = energy.as_mut() {
            *e = kcal(fold.energy);
        }
        Ok(())
    })
}

/// `ln Q(sequence)` over all structures.
///
/// # Safety
/// `params` must be live, `seq` NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn seqsem_sequence_log_partition(
    params: *const SeqsemParams,
    seq: *const c_char,
    out: *mut f64,
) -> SeqsemStatus {
    guard(|| {
        let params = deref(params, "params")?;
        let out = out_ref(out, "out")?;
        *out = Folder::new(&params.inner)
            .partition(&sequence(seq)?)
            .log_q
            .ln();
        Ok(())
    })
}
