//! C ABI for the sac aggregation library.
//!
//! The surface is flat C: plain enums select aggregator, engine and order;
//! results come back as opaque handles read through accessor calls and
//! released through the matching `_free`. Every function that can fail
//! returns a [`SacStatus`]; out-parameters are written only on `Ok`.
//!
//! The companion header `include/sac.h` is generated from this file by
//! cbindgen at build time.

use std::ffi::{c_char, CStr, CString};
use std::slice;

use sac::accum::{accumarray, AccumResult, AccumSpec, SubscriptMatrix};
use sac::{Aggregator, EngineKind, Error, KeyVector, KeyedSummary, OrderPolicy};

/// Result of any fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SacStatus {
    /// Success.
    Ok = 0,
    /// Null pointer, out-of-range index, or wrong key kind.
    InvalidArgument = 1,
    /// Data rejected: shape mismatch, bad subscript, empty group.
    ParseOrShape = 2,
    /// Unknown aggregator or engine name.
    UnknownName = 3,
    /// Engines disagreed during verification.
    Mismatch = 4,
}

/// Aggregation function applied to each group.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SacAgg {
    Mean = 0,
    Sum = 1,
    Count = 2,
    Min = 3,
    Max = 4,
}

/// Which engine computes the summary.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SacEngine {
    Hash = 0,
    Dense = 1,
    Streaming = 2,
    Apl = 3,
    LinearScan = 4,
}

/// Output row order.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SacOrder {
    Sorted = 0,
    First = 1,
}

impl From<SacAgg> for Aggregator {
    fn from(agg: SacAgg) -> Aggregator {
        match agg {
            SacAgg::Mean => Aggregator::Mean,
            SacAgg::Sum => Aggregator::Sum,
            SacAgg::Count => Aggregator::Count,
            SacAgg::Min => Aggregator::Min,
            SacAgg::Max => Aggregator::Max,
        }
    }
}

impl From<SacEngine> for EngineKind {
    fn from(engine: SacEngine) -> EngineKind {
        match engine {
            SacEngine::Hash => EngineKind::Hash,
            SacEngine::Dense => EngineKind::Dense,
            SacEngine::Streaming => EngineKind::Streaming,
            SacEngine::Apl => EngineKind::AplStyle,
            SacEngine::LinearScan => EngineKind::LinearScan,
        }
    }
}

impl From<SacOrder> for OrderPolicy {
    fn from(order: SacOrder) -> OrderPolicy {
        match order {
            SacOrder::Sorted => OrderPolicy::SortedAscending,
            SacOrder::First => OrderPolicy::FirstOccurrence,
        }
    }
}

fn status_of(err: &Error) -> SacStatus {
    match err {
        Error::NoSuchColumn(_) | Error::UnknownAggregator(_) | Error::UnknownEngine(_) => {
            SacStatus::UnknownName
        }
        Error::EngineMismatch { .. } => SacStatus::Mismatch,
        _ => SacStatus::ParseOrShape,
    }
}

/// Per-group aggregates, readable through `sac_summary_*` accessors.
pub struct SacSummary {
    inner: KeyedSummary,
    labels: Option<Vec<CString>>,
}

/// An accumulated array, readable through `sac_accum_*` accessors.
pub struct SacAccum {
    inner: AccumResult,
}

/// Empty slices are fine with a null pointer; nonempty ones are not.
unsafe fn slice_arg<'a, T>(ptr: *const T, len: usize) -> Option<&'a [T]> {
    if len == 0 {
        Some(&[])
    } else if ptr.is_null() {
        None
    } else {
        Some(slice::from_raw_parts(ptr, len))
    }
}

/// Groups `len` (key, value) pairs by integer key and reduces each group.
///
/// On success writes a new handle to `out`; release it with
/// `sac_summary_free`.
#[no_mangle]
pub unsafe extern "C" fn sac_summarize_int(
    keys: *const i64,
    values: *const f64,
    len: usize,
    agg: SacAgg,
    engine: SacEngine,
    order: SacOrder,
    out: *mut *mut SacSummary,
) -> SacStatus {
    if out.is_null() {
        return SacStatus::InvalidArgument;
    }
    let (Some(keys), Some(values)) = (slice_arg(keys, len), slice_arg(values, len)) else {
        return SacStatus::InvalidArgument;
    };
    let key_vec = KeyVector::Int(keys.to_vec());
    match sac::engines::summarize(&key_vec, values, agg.into(), engine.into(), order.into()) {
        Ok(summary) => {
            *out = Box::into_raw(Box::new(SacSummary {
                inner: summary,
                labels: None,
            }));
            SacStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Like `sac_summarize_int` with NUL-terminated string keys. The dense
/// engine rejects string keys.
#[no_mangle]
pub unsafe extern "C" fn sac_summarize_labels(
    keys: *const *const c_char,
    values: *const f64,
    len: usize,
    agg: SacAgg,
    engine: SacEngine,
    order: SacOrder,
    out: *mut *mut SacSummary,
) -> SacStatus {
    if out.is_null() {
        return SacStatus::InvalidArgument;
    }
    let (Some(key_ptrs), Some(values)) = (slice_arg(keys, len), slice_arg(values, len)) else {
        return SacStatus::InvalidArgument;
    };
    let mut key_bytes = Vec::with_capacity(len);
    for &ptr in key_ptrs {
        if ptr.is_null() {
            return SacStatus::InvalidArgument;
        }
        key_bytes.push(CStr::from_ptr(ptr).to_bytes().to_vec());
    }
    let key_vec = KeyVector::Bytes(key_bytes);
    match sac::engines::summarize(&key_vec, values, agg.into(), engine.into(), order.into()) {
        Ok(summary) => {
            let labels = summary
                .keys()
                .as_byte_strings()
                .map(|ks| {
                    ks.iter()
                        .map(|k| CString::new(k.clone()).expect("keys came from C strings"))
                        .collect()
                });
            *out = Box::into_raw(Box::new(SacSummary {
                inner: summary,
                labels,
            }));
            SacStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Number of groups in the summary; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn sac_summary_len(summary: *const SacSummary) -> usize {
    summary.as_ref().map_or(0, |s| s.inner.len())
}

/// The integer key of group `index`. Fails on string-keyed summaries.
#[no_mangle]
pub unsafe extern "C" fn sac_summary_key_int(
    summary: *const SacSummary,
    index: usize,
    out: *mut i64,
) -> SacStatus {
    let Some(s) = summary.as_ref() else {
        return SacStatus::InvalidArgument;
    };
    if out.is_null() || index >= s.inner.len() {
        return SacStatus::InvalidArgument;
    }
    match s.inner.keys().key(index).as_int() {
        Some(k) => {
            *out = k;
            SacStatus::Ok
        }
        None => SacStatus::InvalidArgument,
    }
}

/// The string key of group `index`, or null for integer-keyed summaries
/// and out-of-range indexes. The pointer stays valid until
/// `sac_summary_free`.
#[no_mangle]
pub unsafe extern "C" fn sac_summary_key_label(
    summary: *const SacSummary,
    index: usize,
) -> *const c_char {
    let Some(s) = summary.as_ref() else {
        return std::ptr::null();
    };
    match &s.labels {
        Some(labels) if index < labels.len() => labels[index].as_ptr(),
        _ => std::ptr::null(),
    }
}

/// The aggregate of group `index`.
#[no_mangle]
pub unsafe extern "C" fn sac_summary_value(
    summary: *const SacSummary,
    index: usize,
    out: *mut f64,
) -> SacStatus {
    let Some(s) = summary.as_ref() else {
        return SacStatus::InvalidArgument;
    };
    if out.is_null() || index >= s.inner.len() {
        return SacStatus::InvalidArgument;
    }
    *out = s.inner.values()[index];
    SacStatus::Ok
}

/// Releases a summary handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sac_summary_free(summary: *mut SacSummary) {
    if !summary.is_null() {
        drop(Box::from_raw(summary));
    }
}

/// Accumulates `values` into an array addressed by 1-based subscripts.
///
/// `subs` is row-major `n_rows` × `n_dims`. `sz` optionally fixes the
/// extents (`sz_len` must then equal `n_dims`; pass null and 0 to default
/// to the per-column maxima). Sparse output needs `n_dims` ≤ 2 and a zero
/// `fillval`. On success writes a new handle to `out`; release it with
/// `sac_accum_free`.
#[no_mangle]
pub unsafe extern "C" fn sac_accumarray(
    subs: *const u64,
    n_rows: usize,
    n_dims: usize,
    values: *const f64,
    agg: SacAgg,
    sz: *const u64,
    sz_len: usize,
    fillval: f64,
    sparse: bool,
    out: *mut *mut SacAccum,
) -> SacStatus {
    if out.is_null() || n_dims == 0 {
        return SacStatus::InvalidArgument;
    }
    let Some(total) = n_rows.checked_mul(n_dims) else {
        return SacStatus::InvalidArgument;
    };
    let (Some(subs), Some(values), Some(sz)) = (
        slice_arg(subs, total),
        slice_arg(values, n_rows),
        slice_arg(sz, sz_len),
    ) else {
        return SacStatus::InvalidArgument;
    };

    let data: Vec<usize> = subs.iter().map(|&v| v as usize).collect();
    let matrix = match SubscriptMatrix::new(n_rows, n_dims, data) {
        Ok(m) => m,
        Err(e) => return status_of(&e),
    };
    let spec = AccumSpec {
        sz: if sz.is_empty() {
            None
        } else {
            Some(sz.iter().map(|&v| v as usize).collect())
        },
        fillval,
        sparse,
    };
    match accumarray(&matrix, values, agg.into(), &spec) {
        Ok(result) => {
            *out = Box::into_raw(Box::new(SacAccum { inner: result }));
            SacStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Number of dimensions; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn sac_accum_ndims(accum: *const SacAccum) -> usize {
    accum.as_ref().map_or(0, |a| a.inner.n_dims())
}

/// The extent of dimension `dim`.
#[no_mangle]
pub unsafe extern "C" fn sac_accum_extent(
    accum: *const SacAccum,
    dim: usize,
    out: *mut u64,
) -> SacStatus {
    let Some(a) = accum.as_ref() else {
        return SacStatus::InvalidArgument;
    };
    if out.is_null() || dim >= a.inner.n_dims() {
        return SacStatus::InvalidArgument;
    }
    *out = a.inner.extents()[dim] as u64;
    SacStatus::Ok
}

/// Whether the result stores a coordinate list instead of every cell.
#[no_mangle]
pub unsafe extern "C" fn sac_accum_is_sparse(accum: *const SacAccum) -> bool {
    accum.as_ref().is_some_and(|a| a.inner.is_sparse())
}

/// Number of stored coordinate-list entries; 0 for dense results.
#[no_mangle]
pub unsafe extern "C" fn sac_accum_nnz(accum: *const SacAccum) -> usize {
    accum
        .as_ref()
        .and_then(|a| a.inner.sparse_entries())
        .map_or(0, <[_]>::len)
}

/// Reads stored entry `index` of a sparse result: its coordinates into
/// `coords_out` (`n_dims` slots, 1-based) and its value into `value_out`.
#[no_mangle]
pub unsafe extern "C" fn sac_accum_entry(
    accum: *const SacAccum,
    index: usize,
    coords_out: *mut u64,
    value_out: *mut f64,
) -> SacStatus {
    let Some(a) = accum.as_ref() else {
        return SacStatus::InvalidArgument;
    };
    let Some(entries) = a.inner.sparse_entries() else {
        return SacStatus::InvalidArgument;
    };
    if coords_out.is_null() || value_out.is_null() || index >= entries.len() {
        return SacStatus::InvalidArgument;
    }
    let (coords, value) = &entries[index];
    for (i, &c) in coords.iter().enumerate() {
        *coords_out.add(i) = c as u64;
    }
    *value_out = *value;
    SacStatus::Ok
}

/// Reads one cell by 1-based coordinates (`n_coords` must equal the
/// dimension count). Unstored sparse cells read as 0.
#[no_mangle]
pub unsafe extern "C" fn sac_accum_cell(
    accum: *const SacAccum,
    coords: *const u64,
    n_coords: usize,
    out: *mut f64,
) -> SacStatus {
    let Some(a) = accum.as_ref() else {
        return SacStatus::InvalidArgument;
    };
    let Some(coords) = slice_arg(coords, n_coords) else {
        return SacStatus::InvalidArgument;
    };
    if out.is_null() || n_coords != a.inner.n_dims() {
        return SacStatus::InvalidArgument;
    }
    let coords: Vec<usize> = coords.iter().map(|&c| c as usize).collect();
    for (c, &e) in coords.iter().zip(a.inner.extents()) {
        if *c < 1 || *c > e {
            return SacStatus::InvalidArgument;
        }
    }
    *out = a.inner.cell(&coords);
    SacStatus::Ok
}

/// Releases an accumarray handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sac_accum_free(accum: *mut SacAccum) {
    if !accum.is_null() {
        drop(Box::from_raw(accum));
    }
}

/// Static name for a status code.
#[no_mangle]
pub extern "C" fn sac_status_name(status: SacStatus) -> *const c_char {
    let name: &'static str = match status {
        SacStatus::Ok => "ok\0",
        SacStatus::InvalidArgument => "invalid-argument\0",
        SacStatus::ParseOrShape => "parse-or-shape\0",
        SacStatus::UnknownName => "unknown-name\0",
        SacStatus::Mismatch => "engine-mismatch\0",
    };
    name.as_ptr() as *const c_char
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sac_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
