//! Named reductions with an explicit identity / step / merge / finalize
//! shape.
//!
//! Every cataloged aggregator runs over the same [`AggState`], a running
//! record of count, sum and extrema. `merge` is associative with the empty
//! state as neutral element, which is what lets an engine fold partitions
//! independently and combine them afterwards. Mean is (sum, count) finalized
//! by division rather than a stored quotient.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Running accumulator state. One state type serves every aggregator; each
/// kind reads only the fields it needs at finalize time.
#[derive(Debug, Clone, Copy)]
pub struct AggState {
    count: u64,
    sum: f64,
    min: f64,
    max: f64,
    first: f64,
    last: f64,
}

impl AggState {
    /// The neutral element: merging it into any state is a no-op.
    pub const EMPTY: AggState = AggState {
        count: 0,
        sum: 0.0,
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        first: f64::NAN,
        last: f64::NAN,
    };

    /// Folds one more value into the state.
    pub fn step(mut self, v: f64) -> AggState {
        if self.count == 0 {
            self.first = v;
        }
        self.count += 1;
        self.sum += v;
        self.min = self.min.min(v);
        self.max = self.max.max(v);
        self.last = v;
        self
    }

    /// Combines two states as if their inputs had been concatenated,
    /// `self` first.
    pub fn merge(self, other: AggState) -> AggState {
        AggState {
            count: self.count + other.count,
            sum: self.sum + other.sum,
            min: self.min.min(other.min),
            max: self.max.max(other.max),
            first: if self.count > 0 { self.first } else { other.first },
            last: if other.count > 0 { other.last } else { self.last },
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

impl Default for AggState {
    fn default() -> Self {
        AggState::EMPTY
    }
}

/// A named reduction over a group of values.
///
/// The catalog reachable by name is `mean`, `sum`, `count`, `min` and `max`.
/// [`Aggregator::First`] and [`Aggregator::Last`] sit outside that catalog;
/// they select a value by position and exist for subscript accumulation,
/// where within-cell input order is observable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Aggregator {
    Mean,
    Sum,
    Count,
    Min,
    Max,
    First,
    Last,
}

impl Aggregator {
    /// The five aggregators constructible by name.
    pub const CATALOG: [Aggregator; 5] = [
        Aggregator::Mean,
        Aggregator::Sum,
        Aggregator::Count,
        Aggregator::Min,
        Aggregator::Max,
    ];

    /// Looks an aggregator up by its catalog name.
    pub fn from_name(name: &str) -> Result<Aggregator> {
        match name {
            "mean" => Ok(Aggregator::Mean),
            "sum" => Ok(Aggregator::Sum),
            "count" => Ok(Aggregator::Count),
            "min" => Ok(Aggregator::Min),
            "max" => Ok(Aggregator::Max),
            other => Err(Error::UnknownAggregator(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Aggregator::Mean => "mean",
            Aggregator::Sum => "sum",
            Aggregator::Count => "count",
            Aggregator::Min => "min",
            Aggregator::Max => "max",
            Aggregator::First => "first",
            Aggregator::Last => "last",
        }
    }

    pub fn identity(self) -> AggState {
        AggState::EMPTY
    }

    pub fn step(self, state: AggState, v: f64) -> AggState {
        state.step(v)
    }

    pub fn merge(self, a: AggState, b: AggState) -> AggState {
        a.merge(b)
    }

    /// Turns a finished state into the aggregate. Sum and count of nothing
    /// are 0; the others have no empty result and report [`Error::EmptyGroup`].
    pub fn finalize(self, state: AggState) -> Result<f64> {
        match self {
            Aggregator::Sum => Ok(state.sum),
            Aggregator::Count => Ok(state.count as f64),
            _ if state.count == 0 => Err(Error::EmptyGroup),
            Aggregator::Mean => Ok(state.sum / state.count as f64),
            Aggregator::Min => Ok(state.min),
            Aggregator::Max => Ok(state.max),
            Aggregator::First => Ok(state.first),
            Aggregator::Last => Ok(state.last),
        }
    }

    /// Folds a whole slice in order and finalizes.
    pub fn fold(self, values: &[f64]) -> Result<f64> {
        let state = values
            .iter()
            .fold(self.identity(), |st, &v| self.step(st, v));
        self.finalize(state)
    }
}

impl FromStr for Aggregator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Aggregator::from_name(s)
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
