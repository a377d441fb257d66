//! Interchangeable grouping engines.
//!
//! Five algorithmically distinct engines produce the same key→aggregate
//! relation: a hash-table engine, a subscript-accumulation engine for
//! positive integer keys, a single-pass streaming engine, the APL-style
//! combinator pipeline, and a deliberately naive linear-scan variant kept
//! for benchmark comparison. Each engine folds every group's values in
//! input order, so their results agree bit for bit and only the requested
//! [`OrderPolicy`] decides the output order.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::hash::Hash;
use std::str::FromStr;

use crate::accum::{accumarray, AccumSpec, SubscriptMatrix};
use crate::agg::{AggState, Aggregator};
use crate::aplkit;
use crate::error::{Error, Result};
use crate::types::{Key, KeyVector, KeyedSummary, OrderPolicy, RaggedGroups, ValueVector};

/// Which engine computes a summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineKind {
    /// Hash table keyed by group key.
    Hash,
    /// Subscript accumulation; requires positive integer keys.
    Dense,
    /// One pass over (key, value) pairs, updating states in place.
    Streaming,
    /// The array-combinator pipeline from [`crate::aplkit`].
    AplStyle,
    /// The naive loop with a linear find-first; O(n·m), for benchmarks.
    LinearScan,
}

impl EngineKind {
    pub const ALL: [EngineKind; 5] = [
        EngineKind::Hash,
        EngineKind::Dense,
        EngineKind::Streaming,
        EngineKind::AplStyle,
        EngineKind::LinearScan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Hash => "hash",
            EngineKind::Dense => "dense",
            EngineKind::Streaming => "streaming",
            EngineKind::AplStyle => "apl",
            EngineKind::LinearScan => "linear-scan",
        }
    }
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hash" => Ok(EngineKind::Hash),
            "dense" => Ok(EngineKind::Dense),
            "streaming" => Ok(EngineKind::Streaming),
            "apl" => Ok(EngineKind::AplStyle),
            "linear-scan" => Ok(EngineKind::LinearScan),
            other => Err(Error::UnknownEngine(other.to_string())),
        }
    }
}

impl std::fmt::Display for EngineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Default cap on the key range the dense engine will address.
pub const DEFAULT_DENSE_LIMIT: usize = 1 << 26;

fn check_paired(keys: &KeyVector, values: &[f64]) -> Result<()> {
    if keys.len() != values.len() {
        return Err(Error::ShapeMismatch {
            left: keys.len(),
            right: values.len(),
        });
    }
    Ok(())
}

/// Row indices per distinct key, in first-occurrence order; sorted by key
/// afterwards when asked.
fn grouped_indices<K: Eq + Hash + Ord + Clone>(
    keys: &[K],
    order: OrderPolicy,
) -> Vec<(K, Vec<usize>)> {
    let mut slots: Vec<(K, Vec<usize>)> = Vec::new();
    let mut index: HashMap<K, usize> = HashMap::new();
    for (i, k) in keys.iter().enumerate() {
        match index.entry(k.clone()) {
            Entry::Occupied(e) => slots[*e.get()].1.push(i),
            Entry::Vacant(e) => {
                e.insert(slots.len());
                slots.push((k.clone(), vec![i]));
            }
        }
    }
    if order == OrderPolicy::SortedAscending {
        slots.sort_by(|a, b| a.0.cmp(&b.0));
    }
    slots
}

/// Row positions of each distinct key, ordered per policy. Used by the
/// table layer, which groups row indices rather than values.
pub(crate) fn group_row_indices(keys: &KeyVector, order: OrderPolicy) -> Vec<(Key, Vec<usize>)> {
    match keys {
        KeyVector::Int(ks) => grouped_indices(ks, order)
            .into_iter()
            .map(|(k, rows)| (Key::Int(k), rows))
            .collect(),
        KeyVector::Bytes(ks) => {
            let refs: Vec<&[u8]> = ks.iter().map(|k| k.as_slice()).collect();
            grouped_indices(&refs, order)
                .into_iter()
                .map(|(k, rows)| (Key::Bytes(k.to_vec()), rows))
                .collect()
        }
    }
}

/// Splits `values` into one group per distinct key.
///
/// Within each group values keep their input order, and concatenating all
/// groups permutes the input exactly once.
pub fn group(keys: &KeyVector, values: &[f64], order: OrderPolicy) -> Result<RaggedGroups> {
    check_paired(keys, values)?;
    let entries = group_row_indices(keys, order)
        .into_iter()
        .map(|(k, rows)| (k, rows.into_iter().map(|i| values[i]).collect()))
        .collect();
    RaggedGroups::from_entries(entries)
}

/// The streaming engine's core: consume (key, value) pairs exactly once.
/// A new key appends a state slot; a seen key updates its slot in place.
/// Result order is first occurrence.
pub fn summarize_pairs<K, I>(pairs: I, agg: Aggregator) -> Result<Vec<(K, f64)>>
where
    K: Eq + Hash + Clone,
    I: IntoIterator<Item = (K, f64)>,
{
    let mut slots: Vec<(K, AggState)> = Vec::new();
    let mut index: HashMap<K, usize> = HashMap::new();
    for (k, v) in pairs {
        match index.entry(k) {
            Entry::Occupied(e) => {
                let slot = &mut slots[*e.get()];
                slot.1 = slot.1.step(v);
            }
            Entry::Vacant(e) => {
                slots.push((e.key().clone(), AggState::EMPTY.step(v)));
                e.insert(slots.len() - 1);
            }
        }
    }
    slots
        .into_iter()
        .map(|(k, st)| Ok((k, agg.finalize(st)?)))
        .collect()
}

/// Single-pass summary in first-occurrence order.
pub fn summarize_streaming(
    keys: &KeyVector,
    values: &[f64],
    agg: Aggregator,
) -> Result<KeyedSummary> {
    check_paired(keys, values)?;
    match keys {
        KeyVector::Int(ks) => {
            let pairs =
                summarize_pairs(ks.iter().copied().zip(values.iter().copied()), agg)?;
            pairs_into_summary_int(pairs)
        }
        KeyVector::Bytes(ks) => {
            let pairs = summarize_pairs(
                ks.iter().map(|k| k.as_slice()).zip(values.iter().copied()),
                agg,
            )?;
            pairs_into_summary_bytes(pairs.into_iter().map(|(k, v)| (k.to_vec(), v)))
        }
    }
}

fn hash_pairs<K: Eq + Hash + Clone>(
    keys: &[K],
    values: &[f64],
    agg: Aggregator,
) -> Result<Vec<(K, f64)>> {
    let mut map: HashMap<K, (usize, AggState)> = HashMap::new();
    for (i, (k, &v)) in keys.iter().zip(values).enumerate() {
        let entry = map.entry(k.clone()).or_insert((i, AggState::EMPTY));
        entry.1 = entry.1.step(v);
    }
    // Hash iteration order is nondeterministic; pin first-occurrence order
    // here so callers never observe it.
    let mut slots: Vec<(usize, K, AggState)> = map
        .into_iter()
        .map(|(k, (i, st))| (i, k, st))
        .collect();
    slots.sort_by_key(|(i, _, _)| *i);
    slots
        .into_iter()
        .map(|(_, k, st)| Ok((k, agg.finalize(st)?)))
        .collect()
}

fn linear_scan_pairs<K: PartialEq + Clone>(
    keys: &[K],
    values: &[f64],
    agg: Aggregator,
) -> Result<Vec<(K, f64)>> {
    let mut slots: Vec<(K, AggState)> = Vec::new();
    for (k, &v) in keys.iter().zip(values) {
        match slots.iter_mut().find(|(sk, _)| sk == k) {
            Some((_, st)) => *st = st.step(v),
            None => slots.push((k.clone(), AggState::EMPTY.step(v))),
        }
    }
    slots
        .into_iter()
        .map(|(k, st)| Ok((k, agg.finalize(st)?)))
        .collect()
}

fn dense_pairs(keys: &[i64], values: &[f64], agg: Aggregator, limit: usize) -> Result<Vec<(i64, f64)>> {
    let mut subs = Vec::with_capacity(keys.len());
    for &k in keys {
        if k < 1 {
            return Err(Error::NonPositiveKey(k));
        }
        if k as u128 > limit as u128 {
            return Err(Error::DenseLimitExceeded {
                cells: k as u128,
                limit: limit as u128,
            });
        }
        subs.push(k as usize);
    }
    let result = accumarray(
        &SubscriptMatrix::from_column(subs),
        values,
        agg,
        &AccumSpec::sparse(),
    )?;
    let entries = result.sparse_entries().expect("sparse was requested");
    Ok(entries
        .iter()
        .map(|(coords, v)| (coords[0] as i64, *v))
        .collect())
}

/// Integer-key summary through subscript accumulation, ascending key order.
/// Only keys present in the input appear; unreferenced cells are dropped
/// rather than reported as fill.
pub fn summarize_dense(
    keys: &KeyVector,
    values: &[f64],
    agg: Aggregator,
) -> Result<KeyedSummary> {
    summarize_dense_with_limit(keys, values, agg, DEFAULT_DENSE_LIMIT)
}

/// [`summarize_dense`] with an explicit cap on the addressable key range.
pub fn summarize_dense_with_limit(
    keys: &KeyVector,
    values: &[f64],
    agg: Aggregator,
    limit: usize,
) -> Result<KeyedSummary> {
    check_paired(keys, values)?;
    let ks = keys.as_ints().ok_or(Error::IntegerKeysRequired)?;
    pairs_into_summary_int(dense_pairs(ks, values, agg, limit)?)
}

fn apl_summary(keys: &KeyVector, values: &[f64], agg: Aggregator) -> Result<KeyedSummary> {
    let unique = aplkit::uniqfy(keys);
    let groups = aplkit::splitby(values, keys)?;
    let aggregates = aplkit::apply_each(&groups, agg)?;
    KeyedSummary::new(unique, aggregates)
}

fn pairs_into_summary_int(pairs: Vec<(i64, f64)>) -> Result<KeyedSummary> {
    let (keys, values): (Vec<i64>, ValueVector) = pairs.into_iter().unzip();
    KeyedSummary::new(KeyVector::Int(keys), values)
}

fn pairs_into_summary_bytes<I: Iterator<Item = (Vec<u8>, f64)>>(pairs: I) -> Result<KeyedSummary> {
    let (keys, values): (Vec<Vec<u8>>, ValueVector) = pairs.unzip();
    KeyedSummary::new(KeyVector::Bytes(keys), values)
}

fn apply_order<K: Eq + Hash + Ord + Clone>(
    pairs: &mut [(K, f64)],
    input_keys: &[K],
    order: OrderPolicy,
) {
    match order {
        OrderPolicy::SortedAscending => pairs.sort_by(|a, b| a.0.cmp(&b.0)),
        OrderPolicy::FirstOccurrence => {
            let mut rank: HashMap<&K, usize> = HashMap::new();
            for k in input_keys {
                let next = rank.len();
                rank.entry(k).or_insert(next);
            }
            pairs.sort_by_key(|(k, _)| rank[k]);
        }
    }
}

/// Runs the chosen engine, then permutes the result into the requested
/// order. Every engine yields the same key→aggregate pairs; only the
/// algorithm (and its cost) differs.
pub fn summarize(
    keys: &KeyVector,
    values: &[f64],
    agg: Aggregator,
    engine: EngineKind,
    order: OrderPolicy,
) -> Result<KeyedSummary> {
    check_paired(keys, values)?;
    match keys {
        KeyVector::Int(ks) => {
            let mut pairs: Vec<(i64, f64)> = match engine {
                EngineKind::Hash => hash_pairs(ks, values, agg)?,
                EngineKind::Streaming => {
                    summarize_pairs(ks.iter().copied().zip(values.iter().copied()), agg)?
                }
                EngineKind::LinearScan => linear_scan_pairs(ks, values, agg)?,
                EngineKind::Dense => dense_pairs(ks, values, agg, DEFAULT_DENSE_LIMIT)?,
                EngineKind::AplStyle => {
                    let s = apl_summary(keys, values, agg)?;
                    let sk = s.keys().as_ints().expect("integer keys in, integer keys out");
                    sk.iter().copied().zip(s.values().iter().copied()).collect()
                }
            };
            apply_order(&mut pairs, ks, order);
            pairs_into_summary_int(pairs)
        }
        KeyVector::Bytes(ks) => {
            if engine == EngineKind::Dense {
                return Err(Error::IntegerKeysRequired);
            }
            let refs: Vec<&[u8]> = ks.iter().map(|k| k.as_slice()).collect();
            let mut pairs: Vec<(Vec<u8>, f64)> = match engine {
                EngineKind::Hash => hash_pairs(&refs, values, agg)?
                    .into_iter()
                    .map(|(k, v)| (k.to_vec(), v))
                    .collect(),
                EngineKind::Streaming => summarize_pairs(
                    refs.iter().copied().zip(values.iter().copied()),
                    agg,
                )?
                .into_iter()
                .map(|(k, v)| (k.to_vec(), v))
                .collect(),
                EngineKind::LinearScan => linear_scan_pairs(&refs, values, agg)?
                    .into_iter()
                    .map(|(k, v)| (k.to_vec(), v))
                    .collect(),
                EngineKind::AplStyle => {
                    let s = apl_summary(keys, values, agg)?;
                    let sk = s.keys().as_byte_strings().expect("byte keys in, byte keys out");
                    sk.iter().cloned().zip(s.values().iter().copied()).collect()
                }
                EngineKind::Dense => unreachable!(),
            };
            apply_order(&mut pairs, ks, order);
            pairs_into_summary_bytes(pairs.into_iter())
        }
    }
}
