//! Benchmark harness comparing the engines on seeded synthetic workloads.
//!
//! Timing wrong code is worse than not timing at all, so every workload is
//! first run through all contenders and the outputs compared exactly; a
//! single disagreement aborts the whole report. Workloads are a pure
//! function of (seed, n, k), which makes runs reproducible while timings
//! naturally vary.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::agg::Aggregator;
use crate::engines::{self, EngineKind};
use crate::error::{Error, Result};
use crate::types::{KeyVector, KeyedSummary, OrderPolicy};

/// What to run: sizes × key counts, each timed `reps` times per contender.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub keys: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![1000, 10000],
            keys: vec![10, 100],
            reps: 5,
            seed: 42,
        }
    }
}

type RunnerFn = dyn Fn(&KeyVector, &[f64]) -> Result<KeyedSummary>;

/// A named implementation under benchmark: one of the built-in engines, or
/// any custom function claiming to compute the same summary. Custom
/// contenders let callers (and tests) check the harness against an
/// implementation that is wrong on purpose.
pub struct Contender {
    name: String,
    runner: Box<RunnerFn>,
}

impl Contender {
    pub fn engine(kind: EngineKind) -> Contender {
        Contender {
            name: kind.name().to_string(),
            runner: Box::new(move |keys, values| {
                engines::summarize(
                    keys,
                    values,
                    Aggregator::Mean,
                    kind,
                    OrderPolicy::SortedAscending,
                )
            }),
        }
    }

    pub fn custom<F>(name: impl Into<String>, runner: F) -> Contender
    where
        F: Fn(&KeyVector, &[f64]) -> Result<KeyedSummary> + 'static,
    {
        Contender {
            name: name.into(),
            runner: Box::new(runner),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// One timed result: median of `reps` wall-clock runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub engine: String,
    pub n: usize,
    pub k: usize,
    pub median_ns: u128,
}

/// A workload every contender agreed on before timing started.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifiedWorkload {
    pub n: usize,
    pub k: usize,
    pub engines: usize,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub verified: Vec<VerifiedWorkload>,
    pub rows: Vec<BenchRow>,
}

/// Deterministic workload: n keys uniform in 1..=k, n values in [0, 100).
pub fn workload(seed: u64, n: usize, k: usize) -> (Vec<i64>, Vec<f64>) {
    let mixed = seed
        ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (k as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    let mut rng = ChaCha8Rng::seed_from_u64(mixed);
    let keys = (0..n).map(|_| rng.gen_range(1..=k as i64)).collect();
    let values = (0..n).map(|_| rng.gen_range(0.0..100.0)).collect();
    (keys, values)
}

fn verify(
    contenders: &[Contender],
    keys: &KeyVector,
    values: &[f64],
    n: usize,
    k: usize,
) -> Result<()> {
    let baseline = (contenders[0].runner)(keys, values)?;
    for contender in &contenders[1..] {
        let summary = (contender.runner)(keys, values)?;
        // Identical fold order makes agreement exact, so compare bits, not
        // tolerances.
        if summary.keys() != baseline.keys() || summary.values() != baseline.values() {
            return Err(Error::EngineMismatch {
                engine: contender.name.clone(),
                baseline: contenders[0].name.clone(),
                n,
                k,
            });
        }
    }
    Ok(())
}

fn median_ns(mut samples: Vec<u128>) -> u128 {
    samples.sort_unstable();
    samples[samples.len() / 2]
}

/// Runs the full built-in engine set. See [`run_with_contenders`].
pub fn run(config: &BenchConfig) -> Result<BenchReport> {
    let contenders: Vec<Contender> = EngineKind::ALL.into_iter().map(Contender::engine).collect();
    run_with_contenders(config, &contenders)
}

/// Verifies, then times, each contender on each (n, k) workload. Returns
/// an error, timing nothing further, as soon as any contender disagrees
/// with the first one on a workload.
pub fn run_with_contenders(config: &BenchConfig, contenders: &[Contender]) -> Result<BenchReport> {
    assert!(!contenders.is_empty(), "need at least one contender");
    assert!(config.reps >= 1, "need at least one repetition");

    let mut report = BenchReport {
        verified: Vec::new(),
        rows: Vec::new(),
    };
    for &n in &config.sizes {
        for &k in &config.keys {
            let (raw_keys, values) = workload(config.seed, n, k);
            let keys = KeyVector::Int(raw_keys);

            verify(contenders, &keys, &values, n, k)?;
            report.verified.push(VerifiedWorkload {
                n,
                k,
                engines: contenders.len(),
            });

            for contender in contenders {
                let samples: Vec<u128> = (0..config.reps)
                    .map(|_| {
                        let start = Instant::now();
                        let summary = (contender.runner)(&keys, &values);
                        let elapsed = start.elapsed().as_nanos();
                        summary.map(|_| elapsed)
                    })
                    .collect::<Result<_>>()?;
                report.rows.push(BenchRow {
                    engine: contender.name.clone(),
                    n,
                    k,
                    median_ns: median_ns(samples),
                });
            }
        }
    }
    Ok(report)
}
