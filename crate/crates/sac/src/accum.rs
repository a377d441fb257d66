//! Subscript accumulation: build a dense or sparse d-dimensional array by
//! routing each value to the output cell its subscript row addresses, then
//! reducing every cell's values with an [`Aggregator`].
//!
//! Semantics follow the classic matrix-language contract:
//!
//! * subscripts are 1-based positive integers, one row per value;
//! * omitted extents default to the column-wise maxima of the subscripts;
//! * cells nobody addressed hold `fillval` (dense) or are simply absent
//!   (sparse); the reducer is never called on an empty cell;
//! * within a cell, values are collected in input order, so positional
//!   reducers like [`Aggregator::First`] are well defined.
//!
//! The computation runs in three phases: collect every cell's value list,
//! reduce each list, then place the results.

use std::collections::BTreeMap;

use crate::agg::Aggregator;
use crate::error::{Error, Result};

/// n rows of d-dimensional 1-based output coordinates, row-major.
/// Row `i` names the cell that receives value `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubscriptMatrix {
    rows: usize,
    cols: usize,
    data: Vec<usize>,
}

impl SubscriptMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<usize>) -> Result<Self> {
        if cols == 0 || data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                left: data.len(),
                right: rows * cols.max(1),
            });
        }
        Ok(SubscriptMatrix { rows, cols, data })
    }

    /// A single-column matrix: plain grouping by one subscript.
    pub fn from_column(col: Vec<usize>) -> Self {
        let rows = col.len();
        SubscriptMatrix {
            rows,
            cols: 1,
            data: col,
        }
    }

    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let cols = rows.first().map_or(1, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch {
                    left: row.len(),
                    right: cols,
                });
            }
            data.extend(row);
        }
        SubscriptMatrix::new(n, cols, data)
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    /// Number of dimensions d.
    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Column-wise maxima; all zeros when there are no rows.
    pub fn column_maxima(&self) -> Vec<usize> {
        let mut maxima = vec![0usize; self.cols];
        for i in 0..self.rows {
            for (m, &s) in maxima.iter_mut().zip(self.row(i)) {
                *m = (*m).max(s);
            }
        }
        maxima
    }
}

/// Optional extents, fill value and output representation for
/// [`accumarray`].
#[derive(Debug, Clone, PartialEq)]
pub struct AccumSpec {
    /// Extent per dimension. When omitted, extents default to the
    /// column-wise maxima of the subscripts.
    pub sz: Option<Vec<usize>>,
    /// Value of unreferenced dense cells.
    pub fillval: f64,
    /// Request coordinate-list output instead of full cell storage.
    /// Requires d ≤ 2 and a zero fill value.
    pub sparse: bool,
}

impl Default for AccumSpec {
    fn default() -> Self {
        AccumSpec {
            sz: None,
            fillval: 0.0,
            sparse: false,
        }
    }
}

impl AccumSpec {
    pub fn sparse() -> Self {
        AccumSpec {
            sparse: true,
            ..AccumSpec::default()
        }
    }

    pub fn with_size(sz: Vec<usize>) -> Self {
        AccumSpec {
            sz: Some(sz),
            ..AccumSpec::default()
        }
    }
}

/// Cell storage of an accumulation result.
#[derive(Debug, Clone, PartialEq)]
pub enum AccumStorage {
    /// Every cell, row-major.
    Dense(Vec<f64>),
    /// Only referenced cells, as (coordinates, value) sorted by coordinates.
    Sparse(Vec<(Vec<usize>, f64)>),
}

/// A dense or sparse accumulated array.
#[derive(Debug, Clone, PartialEq)]
pub struct AccumResult {
    extents: Vec<usize>,
    fillval: f64,
    storage: AccumStorage,
}

impl AccumResult {
    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn n_dims(&self) -> usize {
        self.extents.len()
    }

    pub fn fillval(&self) -> f64 {
        self.fillval
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, AccumStorage::Sparse(_))
    }

    pub fn dense_cells(&self) -> Option<&[f64]> {
        match &self.storage {
            AccumStorage::Dense(cells) => Some(cells),
            AccumStorage::Sparse(_) => None,
        }
    }

    pub fn sparse_entries(&self) -> Option<&[(Vec<usize>, f64)]> {
        match &self.storage {
            AccumStorage::Dense(_) => None,
            AccumStorage::Sparse(entries) => Some(entries),
        }
    }

    /// Total cell count, `extents` multiplied out.
    pub fn cell_count(&self) -> usize {
        self.extents.iter().product()
    }

    /// Reads one cell by 1-based coordinates. Sparse misses read as 0.
    pub fn cell(&self, coords: &[usize]) -> f64 {
        match &self.storage {
            AccumStorage::Dense(cells) => cells[linear_index(&self.extents, coords)],
            AccumStorage::Sparse(entries) => entries
                .binary_search_by(|(c, _)| c.as_slice().cmp(coords))
                .map(|i| entries[i].1)
                .unwrap_or(0.0),
        }
    }

    /// Expands to full row-major cell storage regardless of representation.
    pub fn to_dense_cells(&self) -> Vec<f64> {
        match &self.storage {
            AccumStorage::Dense(cells) => cells.clone(),
            AccumStorage::Sparse(entries) => {
                let mut cells = vec![0.0; self.cell_count()];
                for (coords, v) in entries {
                    cells[linear_index(&self.extents, coords)] = *v;
                }
                cells
            }
        }
    }
}

/// Row-major linearization of 1-based `coords` within `extents`.
/// The last coordinate varies fastest.
pub fn linear_index(extents: &[usize], coords: &[usize]) -> usize {
    debug_assert_eq!(extents.len(), coords.len());
    let mut idx = 0usize;
    for (&e, &c) in extents.iter().zip(coords) {
        debug_assert!(c >= 1 && c <= e);
        idx = idx * e + (c - 1);
    }
    idx
}

/// Accumulates `vals` into an array addressed by `subs`.
///
/// For each distinct coordinate row the output cell holds the reduction of
/// every value whose subscript row addresses it, taken in increasing row
/// order. Every other cell holds `spec.fillval` (dense) or is absent
/// (sparse).
pub fn accumarray(
    subs: &SubscriptMatrix,
    vals: &[f64],
    agg: Aggregator,
    spec: &AccumSpec,
) -> Result<AccumResult> {
    if subs.n_rows() != vals.len() {
        return Err(Error::ShapeMismatch {
            left: subs.n_rows(),
            right: vals.len(),
        });
    }
    let d = subs.n_cols();
    if spec.sparse {
        if d > 2 {
            return Err(Error::SparseUnsupported(format!(
                "{d} dimensions (at most 2 supported)"
            )));
        }
        if spec.fillval != 0.0 {
            return Err(Error::SparseUnsupported(format!(
                "fill value {} (must be 0)",
                spec.fillval
            )));
        }
    }

    let extents = match &spec.sz {
        Some(sz) => {
            if sz.len() != d {
                return Err(Error::ShapeMismatch {
                    left: sz.len(),
                    right: d,
                });
            }
            sz.clone()
        }
        None => subs.column_maxima(),
    };

    // Bounds check every subscript against the extents; with defaulted
    // extents only zero entries can fail.
    for i in 0..subs.n_rows() {
        for (j, (&s, &e)) in subs.row(i).iter().zip(&extents).enumerate() {
            if s < 1 || s > e {
                return Err(Error::SubscriptOutOfBounds {
                    row: i + 1,
                    col: j + 1,
                    value: s,
                    extent: e,
                });
            }
        }
    }

    // Split: collect each cell's values in input order. The BTreeMap keys
    // double as the sorted coordinate list for sparse output.
    let mut cells: BTreeMap<&[usize], Vec<f64>> = BTreeMap::new();
    for i in 0..subs.n_rows() {
        cells.entry(subs.row(i)).or_default().push(vals[i]);
    }

    // Apply: reduce each cell. Cells in the map are never empty, so even
    // mean/min/max cannot fail here.
    let mut reduced: Vec<(&[usize], f64)> = Vec::with_capacity(cells.len());
    for (coords, cell_vals) in &cells {
        reduced.push((coords, agg.fold(cell_vals)?));
    }

    // Combine: place results into the requested representation.
    let storage = if spec.sparse {
        AccumStorage::Sparse(
            reduced
                .into_iter()
                .map(|(coords, v)| (coords.to_vec(), v))
                .collect(),
        )
    } else {
        let cell_count = checked_cell_count(&extents)?;
        let mut dense = vec![spec.fillval; cell_count];
        for (coords, v) in reduced {
            dense[linear_index(&extents, coords)] = v;
        }
        AccumStorage::Dense(dense)
    };

    Ok(AccumResult {
        extents,
        fillval: if spec.sparse { 0.0 } else { spec.fillval },
        storage,
    })
}

/// Dense allocation guard: the product of extents must fit an addressable
/// allocation.
fn checked_cell_count(extents: &[usize]) -> Result<usize> {
    let limit = isize::MAX as u128;
    let cells = extents
        .iter()
        .fold(1u128, |acc, &e| acc.saturating_mul(e as u128));
    if cells > limit {
        return Err(Error::DenseLimitExceeded { cells, limit });
    }
    Ok(cells as usize)
}
