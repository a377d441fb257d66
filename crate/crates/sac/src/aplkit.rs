//! Array-language combinators for grouped aggregation.
//!
//! This module spells split-apply-combine the way an APL programmer would:
//! take the sorted unique keys, split the value vector into one ragged
//! group per key, map the aggregator over each group, and laminate keys
//! and aggregates into a two-column matrix. Each combinator is useful on
//! its own; [`summarize_by`] is literally their composition.
//!
//! `splitby` filters the whole value vector once per distinct key, which
//! is O(n·m). That cost profile is intentional: the point of the pipeline
//! is clarity of composition, and the benchmark harness measures what the
//! clarity costs.

use crate::agg::Aggregator;
use crate::error::{Error, Result};
use crate::types::{KeyVector, RaggedGroups, ValueVector};

/// The combined result: one row per distinct key, keys in column 1
/// (strictly increasing) and aggregates in column 2.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoColumnSummary {
    rows: Vec<(f64, f64)>,
}

impl TwoColumnSummary {
    pub fn new(rows: Vec<(f64, f64)>) -> Self {
        TwoColumnSummary { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows in order, each (key, aggregate).
    pub fn rows(&self) -> &[(f64, f64)] {
        &self.rows
    }
}

/// Distinct keys, sorted ascending.
pub fn uniqfy(keys: &KeyVector) -> KeyVector {
    match keys {
        KeyVector::Int(ks) => {
            let mut out = ks.clone();
            out.sort_unstable();
            out.dedup();
            KeyVector::Int(out)
        }
        KeyVector::Bytes(ks) => {
            let mut out = ks.clone();
            out.sort();
            out.dedup();
            KeyVector::Bytes(out)
        }
    }
}

/// Splits `values` into one group per distinct key, groups ordered by
/// ascending key. Each group keeps the input order of its values.
pub fn splitby(values: &[f64], keys: &KeyVector) -> Result<RaggedGroups> {
    if values.len() != keys.len() {
        return Err(Error::ShapeMismatch {
            left: values.len(),
            right: keys.len(),
        });
    }
    let unique = uniqfy(keys);
    let entries = unique
        .keys()
        .map(|u| {
            let members: ValueVector = keys
                .keys()
                .zip(values)
                .filter(|(k, _)| *k == u)
                .map(|(_, &v)| v)
                .collect();
            (u, members)
        })
        .collect();
    RaggedGroups::from_entries(entries)
}

/// Maps the aggregator over each group, preserving group order.
pub fn apply_each(groups: &RaggedGroups, agg: Aggregator) -> Result<ValueVector> {
    groups
        .iter()
        .map(|(_, values)| agg.fold(values))
        .collect()
}

/// Pairs `a[i]` with `b[i]` into an m×2 matrix. Integer keys convert to
/// 64-bit floats, exact for magnitudes up to 2^53.
pub fn laminate(a: &KeyVector, b: &[f64]) -> Result<TwoColumnSummary> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let ks = a.as_ints().ok_or(Error::IntegerKeysRequired)?;
    Ok(TwoColumnSummary::new(
        ks.iter().map(|&k| k as f64).zip(b.iter().copied()).collect(),
    ))
}

/// The whole pipeline: `laminate(uniqfy(keys), apply_each(splitby(values,
/// keys), agg))`.
pub fn summarize_by(
    values: &[f64],
    keys: &KeyVector,
    agg: Aggregator,
) -> Result<TwoColumnSummary> {
    let unique = uniqfy(keys);
    let groups = splitby(values, keys)?;
    let aggregates = apply_each(&groups, agg)?;
    laminate(&unique, &aggregates)
}
