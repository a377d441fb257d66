//! Shared fixtures and independent oracles for the integration suites.
//! Not every suite uses every helper.
#![allow(dead_code)]
//!
//! The oracles deliberately avoid the library's aggregation machinery:
//! they find groups by membership scans and reduce with plain loops, so a
//! bug in the engines cannot hide in the expectation.

use sac::{Aggregator, Key, KeyVector};

pub const RATING_KEYS: [i64; 10] = [381, 1291, 3992, 193942, 9493, 381, 3992, 381, 3992, 193942];
pub const RATING_KEYS_ALT: [i64; 10] =
    [381, 1291, 3992, 193942, 9494, 381, 3992, 381, 3992, 193942];
pub const RATINGS: [f64; 10] = [5.0, 4.0, 4.0, 4.0, 5.0, 5.0, 5.0, 3.0, 5.0, 4.0];

/// Expected per-user means, ascending by key (9493 dataset).
pub fn expected_means() -> Vec<(i64, f64)> {
    vec![
        (381, 13.0 / 3.0),
        (1291, 4.0),
        (3992, 14.0 / 3.0),
        (9493, 5.0),
        (193942, 4.0),
    ]
}

/// Reduces one group the long way. None for reductions that need at least
/// one value.
pub fn oracle_reduce(agg: Aggregator, values: &[f64]) -> Option<f64> {
    match agg {
        Aggregator::Count => Some(values.len() as f64),
        Aggregator::Sum => {
            let mut total = 0.0;
            for v in values {
                total += v;
            }
            Some(total)
        }
        Aggregator::Mean => {
            if values.is_empty() {
                return None;
            }
            let mut total = 0.0;
            for v in values {
                total += v;
            }
            Some(total / values.len() as f64)
        }
        Aggregator::Min => {
            let mut best: Option<f64> = None;
            for &v in values {
                best = Some(match best {
                    Some(b) if b <= v => b,
                    _ => v,
                });
            }
            best
        }
        Aggregator::Max => {
            let mut best: Option<f64> = None;
            for &v in values {
                best = Some(match best {
                    Some(b) if b >= v => b,
                    _ => v,
                });
            }
            best
        }
        Aggregator::First => values.first().copied(),
        Aggregator::Last => values.last().copied(),
    }
}

/// Brute-force grouped aggregation: distinct keys by first-occurrence scan,
/// one full membership pass per key. `sorted` picks the output order.
pub fn oracle_summarize(
    keys: &KeyVector,
    values: &[f64],
    agg: Aggregator,
    sorted: bool,
) -> Vec<(Key, f64)> {
    assert_eq!(keys.len(), values.len());
    let all: Vec<Key> = keys.keys().collect();
    let mut distinct: Vec<Key> = Vec::new();
    for k in &all {
        if !distinct.contains(k) {
            distinct.push(k.clone());
        }
    }
    if sorted {
        distinct.sort();
    }
    distinct
        .into_iter()
        .map(|k| {
            let members: Vec<f64> = all
                .iter()
                .zip(values)
                .filter(|(kk, _)| **kk == k)
                .map(|(_, &v)| v)
                .collect();
            let reduced = oracle_reduce(agg, &members).expect("every distinct key has a member");
            (k, reduced)
        })
        .collect()
}

/// Row-major coordinate enumeration, last dimension fastest.
fn coordinates(extents: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = extents.iter().map(|_| 1).collect();
    if extents.iter().any(|&e| e == 0) {
        return out;
    }
    loop {
        out.push(current.clone());
        // Odometer step.
        let mut dim = extents.len();
        loop {
            if dim == 0 {
                return out;
            }
            dim -= 1;
            if current[dim] < extents[dim] {
                current[dim] += 1;
                break;
            }
            current[dim] = 1;
        }
    }
}

/// Full-scan accumarray oracle: for every cell of the dense result, scan
/// all subscript rows for exact matches and reduce the matching values in
/// input order; unreferenced cells take the fill value. O(cells × n).
pub fn oracle_accumarray(
    sub_rows: &[Vec<usize>],
    values: &[f64],
    agg: Aggregator,
    extents: &[usize],
    fillval: f64,
) -> Vec<f64> {
    assert_eq!(sub_rows.len(), values.len());
    coordinates(extents)
        .into_iter()
        .map(|coords| {
            let members: Vec<f64> = sub_rows
                .iter()
                .zip(values)
                .filter(|(row, _)| **row == coords)
                .map(|(_, &v)| v)
                .collect();
            if members.is_empty() {
                fillval
            } else {
                oracle_reduce(agg, &members).expect("nonempty")
            }
        })
        .collect()
}

pub fn assert_close(got: f64, want: f64, tol: f64, context: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{context}: {got} differs from {want} by more than {tol}"
    );
}
