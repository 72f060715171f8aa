use normlab_verify::{run, Report, Suite, SuiteConfig};

fn small(seed: u64) -> SuiteConfig {
    SuiteConfig {
        seed,
        trials: 20,
        dims: vec![3, 5],
        levels: vec![3, 5],
        ..SuiteConfig::default()
    }
}

fn without_clock(report: &Report) -> String {
    let mut r = report.clone();
    r.wall_time_seconds = 0.0;
    r.to_toml().unwrap()
}

#[test]
fn identical_configs_give_identical_reports() {
    let a = run(&small(7)).unwrap();
    let b = run(&small(7)).unwrap();
    assert_eq!(without_clock(&a), without_clock(&b));
}

#[test]
fn thread_count_does_not_change_the_report() {
    let config = SuiteConfig {
        suites: vec![Suite::Dyadic, Suite::Operators],
        ..small(11)
    };
    let a = run(&config).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    let b = pool.install(|| run(&config)).unwrap();
    assert_eq!(without_clock(&a), without_clock(&b));
}

#[test]
fn selecting_fewer_checks_leaves_the_rest_untouched() {
    let all = run(&small(5)).unwrap();
    let some = run(&SuiteConfig {
        only: vec!["core.holder".into(), "dyadic.layer_cake".into()],
        ..small(5)
    })
    .unwrap();
    for r in &some.checks {
        let full = all.get(&r.id).unwrap();
        assert_eq!(r.worst_margin, full.worst_margin);
        let (a, b) = (r.witness.as_ref().unwrap(), full.witness.as_ref().unwrap());
        assert_eq!((a.trial, &a.case), (b.trial, &b.case));
    }
}

#[test]
fn report_round_trips_through_text() {
    let report = run(&SuiteConfig {
        suites: vec![Suite::Seqspace],
        ..small(3)
    })
    .unwrap();
    let text = report.to_toml().unwrap();
    assert_eq!(Report::parse(&text).unwrap(), report);
    assert!(text.contains("format_version = 1"));
}
