use std::collections::{BTreeSet, HashMap};

use bicross::catalog;
use bicross::report::ProbeConfig;
use bicross::verify::{registry, run_suite, SUITES};

#[test]
fn every_id_belongs_to_exactly_one_suite() {
    let mut owner: HashMap<String, &str> = HashMap::new();
    for (suite, ids) in registry() {
        assert!(SUITES.contains(&suite), "{suite} is not a known suite");
        for id in ids {
            if let Some(prev) = owner.insert(id.clone(), suite) {
                panic!("{id} registered in both {prev} and {suite}");
            }
        }
    }
    let named: BTreeSet<&str> = registry().iter().map(|(s, _)| *s).collect();
    assert_eq!(named, SUITES.iter().copied().collect());
}

#[test]
fn reports_cover_exactly_the_registry() {
    let reg: HashMap<&str, BTreeSet<String>> = registry().into_iter().map(|(s, ids)| (s, ids.into_iter().collect())).collect();
    let inst = catalog::s3().unwrap();
    let cfg = ProbeConfig::random(7, 5);
    for suite in SUITES {
        let r = run_suite(&inst, suite, &cfg).unwrap();
        let got: BTreeSet<String> = r.checks.iter().map(|c| c.id.clone()).collect();
        assert_eq!(got.len(), r.checks.len(), "{suite} has duplicate ids");
        assert_eq!(&got, &reg[suite], "{suite}");
    }
}

#[test]
fn unknown_suite_is_an_error() {
    let inst = catalog::s3().unwrap();
    assert!(matches!(
        run_suite(&inst, "thm-conditions", &ProbeConfig::default()),
        Err(bicross::Error::UnknownSuite(_))
    ));
}
