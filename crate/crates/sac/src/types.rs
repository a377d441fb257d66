//! Domain types shared by every engine: keys, values, ragged groups and the
//! key→aggregate result relation.
//!
//! All of these are immutable after construction and safe to share across
//! threads.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// A sequence of 64-bit floats. Values stay `f64` even when the input text
/// looks integral, so every aggregate has one numeric type.
pub type ValueVector = Vec<f64>;

/// A single group key. Key equality is exact; there is no tolerance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Key {
    Int(i64),
    Bytes(Vec<u8>),
}

impl Key {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Key::Int(k) => Some(*k),
            Key::Bytes(_) => None,
        }
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Key::Int(k) => write!(f, "{k}"),
            Key::Bytes(b) => write!(f, "{}", String::from_utf8_lossy(b)),
        }
    }
}

/// An ordered sequence of group keys. A vector holds keys of exactly one
/// kind: 64-bit signed integers or opaque byte-string labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyVector {
    Int(Vec<i64>),
    Bytes(Vec<Vec<u8>>),
}

impl KeyVector {
    pub fn len(&self) -> usize {
        match self {
            KeyVector::Int(ks) => ks.len(),
            KeyVector::Bytes(ks) => ks.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The key at position `i`. Panics when out of bounds, like slice
    /// indexing.
    pub fn key(&self, i: usize) -> Key {
        match self {
            KeyVector::Int(ks) => Key::Int(ks[i]),
            KeyVector::Bytes(ks) => Key::Bytes(ks[i].clone()),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = Key> + '_ {
        (0..self.len()).map(move |i| self.key(i))
    }

    pub fn as_ints(&self) -> Option<&[i64]> {
        match self {
            KeyVector::Int(ks) => Some(ks),
            KeyVector::Bytes(_) => None,
        }
    }

    pub fn as_byte_strings(&self) -> Option<&[Vec<u8>]> {
        match self {
            KeyVector::Int(_) => None,
            KeyVector::Bytes(ks) => Some(ks),
        }
    }

    /// Builds a byte-string key vector from anything string-like.
    pub fn from_labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        KeyVector::Bytes(labels.into_iter().map(|s| s.as_ref().to_vec()).collect())
    }

    /// True when no key occurs twice.
    pub fn all_distinct(&self) -> bool {
        match self {
            KeyVector::Int(ks) => {
                let mut seen = HashSet::with_capacity(ks.len());
                ks.iter().all(|k| seen.insert(*k))
            }
            KeyVector::Bytes(ks) => {
                let mut seen = HashSet::with_capacity(ks.len());
                ks.iter().all(|k| seen.insert(k.as_slice()))
            }
        }
    }
}

impl From<Vec<i64>> for KeyVector {
    fn from(ks: Vec<i64>) -> Self {
        KeyVector::Int(ks)
    }
}

impl From<Vec<Vec<u8>>> for KeyVector {
    fn from(ks: Vec<Vec<u8>>) -> Self {
        KeyVector::Bytes(ks)
    }
}

impl FromIterator<Key> for KeyVector {
    /// Collects keys into a vector. Mixed kinds fall back to the display
    /// bytes of each key; callers that care should not mix kinds.
    fn from_iter<I: IntoIterator<Item = Key>>(iter: I) -> Self {
        let keys: Vec<Key> = iter.into_iter().collect();
        if keys.iter().all(|k| matches!(k, Key::Int(_))) {
            KeyVector::Int(
                keys.iter()
                    .map(|k| k.as_int().expect("checked integral"))
                    .collect(),
            )
        } else {
            KeyVector::Bytes(
                keys.into_iter()
                    .map(|k| match k {
                        Key::Bytes(b) => b,
                        Key::Int(i) => i.to_string().into_bytes(),
                    })
                    .collect(),
            )
        }
    }
}

/// How distinct keys are ordered in any engine output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrderPolicy {
    /// Keys strictly increasing: integer order, or lexicographic byte order
    /// for labels.
    #[default]
    SortedAscending,
    /// Keys in order of first appearance in the input.
    FirstOccurrence,
}

/// The split stage's product: an ordered list of (key, values) entries with
/// pairwise-distinct keys. Within each entry the values keep their original
/// input order, and the concatenation of all entries is a permutation of the
/// source values.
#[derive(Debug, Clone, PartialEq)]
pub struct RaggedGroups {
    entries: Vec<(Key, ValueVector)>,
}

impl RaggedGroups {
    /// Wraps pre-built entries, rejecting duplicate keys.
    pub fn from_entries(entries: Vec<(Key, ValueVector)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(entries.len());
        for (key, _) in &entries {
            if !seen.insert(key.clone()) {
                return Err(Error::DuplicateKey(key.to_string()));
            }
        }
        Ok(RaggedGroups { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Key, ValueVector)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(Key, ValueVector)> {
        self.entries
    }

    /// Total number of values across all groups.
    pub fn total_values(&self) -> usize {
        self.entries.iter().map(|(_, vs)| vs.len()).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Key, ValueVector)> {
        self.entries.iter()
    }
}

/// The combine stage's product: distinct keys paired with one aggregate each,
/// ordered by whichever [`OrderPolicy`] was requested.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyedSummary {
    keys: KeyVector,
    aggregates: ValueVector,
}

impl KeyedSummary {
    pub fn new(keys: KeyVector, aggregates: ValueVector) -> Result<Self> {
        if keys.len() != aggregates.len() {
            return Err(Error::ShapeMismatch {
                left: keys.len(),
                right: aggregates.len(),
            });
        }
        if !keys.all_distinct() {
            return Err(Error::DuplicateKey("<summary key>".into()));
        }
        Ok(KeyedSummary { keys, aggregates })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &KeyVector {
        &self.keys
    }

    pub fn values(&self) -> &[f64] {
        &self.aggregates
    }

    /// Owned (key, aggregate) pairs, in summary order.
    pub fn pairs(&self) -> Vec<(Key, f64)> {
        self.keys.keys().zip(self.aggregates.iter().copied()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_vector_kinds() {
        let ints = KeyVector::from(vec![3i64, 1, 3]);
        assert_eq!(ints.len(), 3);
        assert_eq!(ints.key(1), Key::Int(1));
        assert!(ints.as_ints().is_some());
        assert!(ints.as_byte_strings().is_none());

        let labels = KeyVector::from_labels(["a", "b"]);
        assert_eq!(labels.key(0), Key::Bytes(b"a".to_vec()));
        assert!(!labels.is_empty());
    }

    #[test]
    fn distinctness() {
        assert!(KeyVector::from(vec![1i64, 2, 3]).all_distinct());
        assert!(!KeyVector::from(vec![1i64, 2, 1]).all_distinct());
        assert!(KeyVector::Int(vec![]).all_distinct());
    }

    #[test]
    fn ragged_groups_reject_duplicates() {
        let entries = vec![
            (Key::Int(1), vec![1.0]),
            (Key::Int(1), vec![2.0]),
        ];
        assert!(matches!(
            RaggedGroups::from_entries(entries),
            Err(Error::DuplicateKey(_))
        ));
    }

    #[test]
    fn summary_shape_checked() {
        let err = KeyedSummary::new(KeyVector::from(vec![1i64, 2]), vec![1.0]);
        assert!(matches!(err, Err(Error::ShapeMismatch { left: 2, right: 1 })));
    }

    #[test]
    fn summary_pairs_round() {
        let s = KeyedSummary::new(KeyVector::from(vec![7i64]), vec![3.5]).unwrap();
        assert_eq!(s.pairs(), vec![(Key::Int(7), 3.5)]);
    }
}
