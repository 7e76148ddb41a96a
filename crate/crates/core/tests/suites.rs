use ellq::report::Expect;
use ellq::suites::{run_suite, run_suites, SuiteConfig, SUITE_NAMES};

#[test]
fn same_seed_same_report() {
    let cfg = SuiteConfig {
        samples: 5,
        seed: 1,
        ..Default::default()
    };
    let a = run_suite("rll", &cfg).unwrap();
    let b = run_suite("rll", &cfg).unwrap();
    assert_eq!(a, b);
    let other = run_suite("rll", &SuiteConfig { seed: 2, ..cfg }).unwrap();
    assert_ne!(a, other);
}

#[test]
fn suite_streams_are_independent() {
    let cfg = SuiteConfig {
        samples: 4,
        ..Default::default()
    };
    let alone = run_suite("theta", &cfg).unwrap();
    let together = run_suites(&["series", "theta"], &cfg).unwrap();
    assert_eq!(together[1], alone);
}

#[test]
fn unknown_suite_is_rejected() {
    assert!(run_suite("nope", &SuiteConfig::default()).is_err());
    assert!(run_suites(&["theta", "nope"], &SuiteConfig::default()).is_err());
}

#[test]
fn all_expands_without_duplicates() {
    let cfg = SuiteConfig {
        samples: 2,
        ..Default::default()
    };
    let reps = run_suites(&["theta", "all"], &cfg).unwrap();
    let names: Vec<&str> = reps.iter().map(|r| r.suite.as_str()).collect();
    assert_eq!(names, SUITE_NAMES);
}

#[test]
fn tiny_tolerance_fails_cg() {
    let cfg = SuiteConfig {
        tol: 1e-20,
        samples: 5,
        ..Default::default()
    };
    let rep = run_suite("cg", &cfg).unwrap();
    assert!(!rep.pass);
    // negative controls are unaffected by tol
    assert!(rep
        .cases
        .iter()
        .filter(|c| c.expect == Expect::Above)
        .all(|c| c.pass));
}

#[test]
fn cases_are_sorted_and_controls_marked() {
    let rep = run_suite(
        "theta",
        &SuiteConfig {
            samples: 3,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(rep.pass);
    assert!(rep
        .cases
        .windows(2)
        .all(|w| (&w[0].name, &w[0].inputs) <= (&w[1].name, &w[1].inputs)));
    for c in &rep.cases {
        assert_eq!(c.name.starts_with("control:"), c.expect == Expect::Above);
    }
}

#[test]
fn bad_nome_is_a_domain_error() {
    let cfg = SuiteConfig {
        q: 1.5,
        ..Default::default()
    };
    assert!(matches!(
        run_suite("theta", &cfg),
        Err(ellq::Error::Domain(_))
    ));
}
