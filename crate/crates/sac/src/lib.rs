//! Split-apply-combine aggregation with interchangeable engines.
//!
//! The same grouped reduction, five ways: a hash-table engine, dense
//! subscript accumulation in the accumarray tradition, a single-pass
//! streaming fold, APL-style array combinators, and a naive linear scan
//! kept around so the benchmark harness has something to beat. All engines
//! fold each group's values in input order, so they agree bit for bit and
//! can be swapped freely.
//!
//! ```
//! use sac::{Aggregator, EngineKind, Key, KeyVector, OrderPolicy};
//!
//! let keys = KeyVector::from(vec![3i64, 1, 3]);
//! let values = [10.0, 1.0, 20.0];
//! let summary = sac::engines::summarize(
//!     &keys,
//!     &values,
//!     Aggregator::Mean,
//!     EngineKind::Hash,
//!     OrderPolicy::SortedAscending,
//! )?;
//! assert_eq!(summary.pairs(), vec![(Key::Int(1), 1.0), (Key::Int(3), 15.0)]);
//! # Ok::<(), sac::Error>(())
//! ```
//!
//! Beyond the engines there is [`accum::accumarray`] for multi-dimensional
//! subscript accumulation, [`table`] for a minimal named-column group-by,
//! [`aplkit`] for the combinator spelling, and [`cli`] plus the `sac`
//! binary for CSV streams.

pub mod accum;
pub mod agg;
pub mod aplkit;
pub mod bench;
pub mod cli;
pub mod csvio;
pub mod engines;
pub mod error;
pub mod table;
pub mod types;

pub use agg::Aggregator;
pub use engines::EngineKind;
pub use error::{Error, Result};
pub use types::{Key, KeyVector, KeyedSummary, OrderPolicy, RaggedGroups, ValueVector};
