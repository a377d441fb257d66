//! The acceptance gate: one test per criterion, each printing a PASS or
//! FAIL line (visible with `--nocapture`) before reporting through the
//! harness.

mod common;

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{
    assert_close, expected_means, oracle_accumarray, oracle_summarize, RATINGS, RATING_KEYS,
    RATING_KEYS_ALT,
};
use sac::accum::{accumarray, AccumSpec, SubscriptMatrix};
use sac::agg::AggState;
use sac::bench::{self, BenchConfig, Contender};
use sac::table::{Column, Table};
use sac::{aplkit, engines};
use sac::{Aggregator, EngineKind, KeyVector, OrderPolicy};

fn criterion(number: usize, name: &str, body: impl FnOnce() + UnwindSafe) {
    let result = catch_unwind(body);
    match &result {
        Ok(()) => println!("ACCEPTANCE {number} PASS: {name}"),
        Err(_) => println!("ACCEPTANCE {number} FAIL: {name}"),
    }
    if let Err(panic) = result {
        resume_unwind(panic);
    }
}

fn rating_keys() -> KeyVector {
    KeyVector::Int(RATING_KEYS.to_vec())
}

fn fixture_path(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn criterion_1_fixture_means_everywhere() {
    criterion(1, "fixture means agree across engines and spellings", || {
        let keys = rating_keys();
        let expected = expected_means();

        for engine in EngineKind::ALL {
            let summary = engines::summarize(
                &keys,
                &RATINGS,
                Aggregator::Mean,
                engine,
                OrderPolicy::SortedAscending,
            )
            .unwrap();
            assert_eq!(summary.len(), expected.len(), "{engine}");
            for ((key, got), (want_key, want)) in summary.pairs().iter().zip(&expected) {
                assert_eq!(key.as_int().unwrap(), *want_key, "{engine}");
                assert_close(*got, *want, 1e-12, &format!("engine {engine}"));
            }
        }

        let table = Table::from_columns(vec![
            Column::keys("userid", rating_keys()),
            Column::values("rating", RATINGS.to_vec()),
        ])
        .unwrap();
        let summarized = table
            .group_by("userid")
            .unwrap()
            .summarize("avgrating", Aggregator::Mean, "rating")
            .unwrap();
        let table_keys = summarized.key_column("userid").unwrap().as_ints().unwrap().to_vec();
        let table_means = summarized.value_column("avgrating").unwrap();
        for ((key, got), (want_key, want)) in
            table_keys.iter().zip(table_means).zip(&expected)
        {
            assert_eq!(key, want_key);
            assert_close(*got, *want, 1e-12, "table spelling");
        }

        let combinators = aplkit::summarize_by(&RATINGS, &keys, Aggregator::Mean).unwrap();
        for ((key, got), (want_key, want)) in combinators.rows().iter().zip(&expected) {
            assert_eq!(*key, *want_key as f64);
            assert_close(*got, *want, 1e-12, "combinator spelling");
        }
    });
}

#[test]
fn criterion_2_order_policies_on_alternate_fixture() {
    criterion(2, "alternate fixture: streaming order and ratings_mean", || {
        let keys = KeyVector::Int(RATING_KEYS_ALT.to_vec());

        let streamed = engines::summarize_streaming(&keys, &RATINGS, Aggregator::Mean).unwrap();
        assert_eq!(
            streamed.keys().as_ints().unwrap(),
            &[381, 1291, 3992, 193942, 9494],
            "first-occurrence order"
        );
        let by_key = |k: i64| -> f64 {
            let pos = streamed
                .keys()
                .as_ints()
                .unwrap()
                .iter()
                .position(|&x| x == k)
                .unwrap();
            streamed.values()[pos]
        };
        assert_close(by_key(381), 13.0 / 3.0, 1e-12, "381");
        assert_close(by_key(9494), 5.0, 1e-12, "9494");

        let table = Table::from_columns(vec![
            Column::keys("userids", keys),
            Column::values("ratings", RATINGS.to_vec()),
        ])
        .unwrap();
        let aggregated = table.aggregate_all("userids", Aggregator::Mean).unwrap();
        let names: Vec<&str> = aggregated.columns().iter().map(Column::name).collect();
        assert_eq!(names, vec!["userids", "ratings_mean"], "output column name");
        assert_eq!(
            aggregated.key_column("userids").unwrap().as_ints().unwrap(),
            &[381, 1291, 3992, 9494, 193942],
            "sorted order"
        );
        let means = aggregated.value_column("ratings_mean").unwrap();
        let expected = [13.0 / 3.0, 4.0, 14.0 / 3.0, 5.0, 4.0];
        for (got, want) in means.iter().zip(&expected) {
            assert_close(*got, *want, 1e-12, "ratings_mean");
        }
    });
}

#[test]
fn criterion_3_sparse_accumarray_fixture() {
    criterion(3, "sparse accumarray stores exactly the five user cells", || {
        let subs = SubscriptMatrix::from_column(
            RATING_KEYS.iter().map(|&k| k as usize).collect(),
        );
        let result =
            accumarray(&subs, &RATINGS, Aggregator::Mean, &AccumSpec::sparse()).unwrap();
        let entries = result.sparse_entries().unwrap();
        let expected = expected_means();
        assert_eq!(entries.len(), 5);
        for ((coords, got), (key, want)) in entries.iter().zip(&expected) {
            assert_eq!(coords.as_slice(), &[*key as usize], "sorted coordinates");
            assert_close(*got, *want, 1e-12, "stored mean");
        }

        // The printed form: sorted `(i,1) value` lines.
        let output = Command::new(env!("CARGO_BIN_EXE_sac"))
            .args([
                "accumarray",
                "--input",
                &fixture_path("ratings.csv"),
                "--agg",
                "mean",
                "--sparse",
                "--format",
                "text",
            ])
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(0));
        assert_eq!(
            String::from_utf8(output.stdout).unwrap(),
            "(381,1) 4.33333\n\
             (1291,1) 4.00000\n\
             (3992,1) 4.66667\n\
             (9493,1) 5.00000\n\
             (193942,1) 4.00000\n"
        );
    });
}

#[test]
fn criterion_4_oracle_equivalence() {
    criterion(4, "1000 engine instances and 200 accumarray instances match the oracles", || {
        let started = Instant::now();

        for instance in 0..1000u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0000 + instance);
            let n = rng.gen_range(0..=200);
            let keys: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=20)).collect();
            let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-100.0..100.0)).collect();
            let kv = KeyVector::Int(keys);

            for agg in Aggregator::CATALOG {
                let expected = oracle_summarize(&kv, &values, agg, true);
                for engine in EngineKind::ALL {
                    let summary = engines::summarize(
                        &kv,
                        &values,
                        agg,
                        engine,
                        OrderPolicy::SortedAscending,
                    )
                    .unwrap();
                    assert_eq!(
                        summary.len(),
                        expected.len(),
                        "instance {instance} {engine} {agg}"
                    );
                    for ((key, got), (want_key, want)) in summary.pairs().iter().zip(&expected) {
                        assert_eq!(key, want_key, "instance {instance} {engine} {agg}");
                        assert_close(
                            *got,
                            *want,
                            1e-9,
                            &format!("instance {instance} {engine} {agg}"),
                        );
                    }
                }
            }
        }

        for instance in 0..200u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(0xACC2_0000 + instance);
            let n = rng.gen_range(0..=60);
            let rows: Vec<Vec<usize>> = (0..n)
                .map(|_| vec![rng.gen_range(1..=8), rng.gen_range(1..=6)])
                .collect();
            let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-50.0..50.0)).collect();
            let flat: Vec<usize> = rows.iter().flatten().copied().collect();
            let subs = SubscriptMatrix::new(rows.len(), 2, flat).unwrap();

            for agg in Aggregator::CATALOG {
                let result = accumarray(&subs, &values, agg, &AccumSpec::default()).unwrap();
                let expected =
                    oracle_accumarray(&rows, &values, agg, result.extents(), 0.0);
                let cells = result.dense_cells().unwrap();
                assert_eq!(cells.len(), expected.len(), "instance {instance} {agg}");
                for (got, want) in cells.iter().zip(&expected) {
                    assert_close(*got, *want, 1e-9, &format!("instance {instance} {agg}"));
                }
            }
        }

        let elapsed = started.elapsed();
        assert!(
            elapsed.as_secs_f64() < 10.0,
            "oracle equivalence took {elapsed:?}, budget is 10s"
        );
    });
}

#[test]
fn criterion_5_property_suites() {
    criterion(5, "the eight property suites hold on seeded inputs", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_5EED);
        for _ in 0..200 {
            let n = rng.gen_range(0..=50);
            let keys: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=10)).collect();
            let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-100.0..100.0)).collect();
            let kv = KeyVector::Int(keys.clone());

            // RaggedGroups permutation invariant.
            let groups = engines::group(&kv, &values, OrderPolicy::SortedAscending).unwrap();
            assert_eq!(groups.total_values(), n);
            let mut scattered: Vec<f64> = groups
                .iter()
                .flat_map(|(_, g)| g.iter().copied())
                .collect();
            let mut original = values.clone();
            scattered.sort_by(f64::total_cmp);
            original.sort_by(f64::total_cmp);
            assert_eq!(scattered, original, "permutation invariant");

            // Aggregator merge-associativity at a random cut.
            let cut = if n == 0 { 0 } else { rng.gen_range(0..=n) };
            let fold = |vs: &[f64]| vs.iter().fold(AggState::EMPTY, |st, &v| st.step(v));
            let merged = fold(&values[..cut]).merge(fold(&values[cut..]));
            let whole = fold(&values);
            assert_eq!(merged.count(), whole.count(), "merge count");
            for agg in Aggregator::CATALOG {
                match (agg.finalize(merged), agg.finalize(whole)) {
                    (Ok(a), Ok(b)) => assert_close(a, b, 1e-9, "merge-associativity"),
                    (Err(_), Err(_)) => {}
                    (a, b) => panic!("merge-associativity: {a:?} vs {b:?}"),
                }
            }

            // uniqfy idempotence.
            let once = aplkit::uniqfy(&kv);
            assert_eq!(aplkit::uniqfy(&once), once, "uniqfy idempotence");

            // Composition law.
            let direct = aplkit::summarize_by(&values, &kv, Aggregator::Mean).unwrap();
            let composed = aplkit::laminate(
                &once,
                &aplkit::apply_each(
                    &aplkit::splitby(&values, &kv).unwrap(),
                    Aggregator::Mean,
                )
                .unwrap(),
            )
            .unwrap();
            assert_eq!(direct, composed, "composition law");

            // Subscript-side properties on a derived d=2 instance.
            let rows: Vec<Vec<usize>> = keys
                .iter()
                .map(|&k| vec![k as usize, rng.gen_range(1..=4)])
                .collect();
            let flat: Vec<usize> = rows.iter().flatten().copied().collect();
            let subs = SubscriptMatrix::new(rows.len(), 2, flat).unwrap();

            // Dense/sparse agreement.
            let dense =
                accumarray(&subs, &values, Aggregator::Sum, &AccumSpec::default()).unwrap();
            let sparse =
                accumarray(&subs, &values, Aggregator::Sum, &AccumSpec::sparse()).unwrap();
            assert_eq!(dense.extents(), sparse.extents(), "dense/sparse extents");
            assert_eq!(
                dense.dense_cells().unwrap(),
                sparse.to_dense_cells().as_slice(),
                "dense/sparse agreement"
            );

            // Sum conservation.
            let total_out: f64 = dense.dense_cells().unwrap().iter().sum();
            let total_in: f64 = values.iter().sum();
            assert_close(total_out, total_in, 1e-9, "sum conservation");

            // Default-extent law.
            let mut maxima = vec![0usize; 2];
            for row in &rows {
                for (m, &c) in maxima.iter_mut().zip(row) {
                    *m = (*m).max(c);
                }
            }
            assert_eq!(dense.extents(), maxima.as_slice(), "default extents");

            // Within-cell input order via first/last.
            for (agg, last) in [(Aggregator::First, false), (Aggregator::Last, true)] {
                let picked =
                    accumarray(&subs, &values, agg, &AccumSpec::sparse()).unwrap();
                for (coords, got) in picked.sparse_entries().unwrap() {
                    let members: Vec<f64> = rows
                        .iter()
                        .zip(&values)
                        .filter(|(row, _)| *row == coords)
                        .map(|(_, &v)| v)
                        .collect();
                    let want = if last {
                        members[members.len() - 1]
                    } else {
                        members[0]
                    };
                    assert_eq!(*got, want, "within-cell input order");
                }
            }
        }
    });
}

#[test]
fn criterion_6_benchmark_separates_and_refuses() {
    criterion(6, "bench: linear scan loses to hash; mismatches refuse timing", || {
        let config = BenchConfig {
            sizes: vec![100_000],
            keys: vec![1000],
            reps: 3,
            seed: 42,
        };
        let report = bench::run(&config).unwrap();
        assert_eq!(report.verified.len(), 1);
        let median = |name: &str| -> u128 {
            report
                .rows
                .iter()
                .find(|r| r.engine == name)
                .unwrap()
                .median_ns
        };
        let (hash, linear) = (median("hash"), median("linear-scan"));
        assert!(
            linear > hash,
            "linear-scan median {linear}ns not above hash median {hash}ns"
        );

        // A contender that disagrees must abort the report before timing.
        let contenders = vec![
            Contender::engine(EngineKind::Hash),
            Contender::custom("off-by-half", |keys, values| {
                let summary = engines::summarize(
                    keys,
                    values,
                    Aggregator::Mean,
                    EngineKind::Hash,
                    OrderPolicy::SortedAscending,
                )?;
                let mut skewed = summary.values().to_vec();
                if let Some(v) = skewed.first_mut() {
                    *v += 0.5;
                }
                sac::KeyedSummary::new(summary.keys().clone(), skewed)
            }),
        ];
        let small = BenchConfig {
            sizes: vec![500],
            keys: vec![10],
            reps: 3,
            seed: 42,
        };
        let refused = bench::run_with_contenders(&small, &contenders);
        assert!(
            matches!(refused, Err(sac::Error::EngineMismatch { .. })),
            "expected an engine mismatch refusal"
        );
    });
}
