use std::path::Path;

use mpmab::harness::batch::{run_batch, BatchOptions};
use mpmab::harness::{generate_random_schedule, ExperimentSpec};
use mpmab::model::{validate, BanditEnv};
use mpmab::rng::stream;
use proptest::prelude::*;

fn spec(repeats: usize) -> ExperimentSpec {
    ExperimentSpec::from_json(&format!(
        r#"{{"env":{{"K":6}},"schedule":{{"random":{{"players":3}}}},"T":3000,
            "algorithms":["ace","ucb(2.0)","rd-ucb(1.0)"],"repeats":{repeats},"seed":40}}"#
    ))
    .unwrap()
}

#[test]
fn single_repeat_has_zero_stderr() {
    let exp = spec(1).resolve(Path::new(".")).unwrap();
    let res = run_batch(&exp, &BatchOptions::default()).unwrap();
    assert_eq!(res.series.len(), 3);
    for s in &res.series {
        assert!(s.stderr.iter().all(|&e| e == 0.0));
        assert_eq!(*s.t.last().unwrap(), 3000);
        assert!(s.mean.windows(2).all(|w| w[0] <= w[1]), "{}", s.label);
    }
}

#[test]
fn doubling_repeats_keeps_the_first_half() {
    let small = run_batch(
        &spec(3).resolve(Path::new(".")).unwrap(),
        &BatchOptions::default(),
    )
    .unwrap();
    let big = run_batch(
        &spec(6).resolve(Path::new(".")).unwrap(),
        &BatchOptions::default(),
    )
    .unwrap();
    for (a, b) in small.series.iter().zip(&big.series) {
        assert_eq!(a.finals[..], b.finals[..3]);
    }
}

#[test]
fn raw_traces_are_written_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let exp = spec(2).resolve(Path::new(".")).unwrap();
    let opts = BatchOptions {
        raw_dir: Some(dir.path().join("raw")),
        force: false,
    };
    let res = run_batch(&exp, &opts).unwrap();
    let text = std::fs::read_to_string(dir.path().join("raw/ace-seed41.csv")).unwrap();
    assert_eq!(text.lines().count(), 3001);
    let last = text.lines().last().unwrap();
    let final_regret: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(final_regret, res.series[0].finals[1]);
    // A second batch into the same directory refuses to overwrite.
    assert!(run_batch(&exp, &opts).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_schedules_validate_when_m_fits(k in 4usize..40, t in 100u64..100_000, seed in any::<u64>(), frac in 0.0f64..1.0) {
        let players = 2 + ((k / 2 - 2) as f64 * frac) as usize;
        let mut rng = stream(seed, u64::MAX);
        let sched = generate_random_schedule(t, players, &mut rng).unwrap();
        let env = BanditEnv::gaussian_ladder(k, 0.1, 0.05, 0.5).unwrap();
        let report = validate(&env, &sched, players);
        prop_assert!(report.is_ok(), "{}", report);
        let min_span = t.div_ceil(players as u64);
        for iv in sched.entries() {
            prop_assert!(iv.start >= 1 && iv.start <= t / 2);
            prop_assert!(iv.end >= t.div_ceil(2) && iv.end <= t);
            prop_assert!(iv.end - iv.start >= min_span);
        }
    }
}
