use bicross::catalog;
use bicross::report::{ProbeConfig, Report, Status};
use bicross::verify::{full_pipeline, PipelineOptions};

fn failures(reports: &[Report]) -> Vec<String> {
    reports
        .iter()
        .flat_map(|r| r.checks.iter())
        .filter(|c| c.status == Status::Fail)
        .map(|c| format!("{}: {:?} {:?}", c.id, c.detail, c.counterexample))
        .collect()
}

fn run_all(inst: &bicross::bicross::Instance, cfg: &ProbeConfig) -> Vec<Report> {
    full_pipeline(inst, cfg, PipelineOptions { force: true, star: true }).unwrap()
}

#[test]
fn s3_all_suites_pass() {
    for inst in [catalog::s3().unwrap(), catalog::s3_swapped().unwrap(), catalog::c6().unwrap()] {
        let reps = run_all(&inst, &ProbeConfig::exhaustive());
        let f = failures(&reps);
        assert!(f.is_empty(), "{}: {:#?}", inst.name, f);
    }
}

#[test]
fn dyadic_all_suites_pass() {
    for inst in [catalog::dyadic(2).unwrap(), catalog::dyadic_swapped(2).unwrap()] {
        let reps = run_all(&inst, &ProbeConfig::exhaustive());
        let f = failures(&reps);
        assert!(f.is_empty(), "{}: {:#?}", inst.name, f);
    }
}

#[test]
fn a5_all_suites_pass() {
    let inst = catalog::a5().unwrap();
    let t = std::time::Instant::now();
    let reps = run_all(&inst, &ProbeConfig::exhaustive());
    for r in &reps {
        eprintln!("{} pass={} skip={}", r.suite, r.count(Status::Pass), r.count(Status::Skipped));
    }
    eprintln!("a5 took {:?}", t.elapsed());
    let f = failures(&reps);
    assert!(f.is_empty(), "{:#?}", f);
}

#[test]
fn unbounded_cotwist_fails_the_finite_support_gate() {
    use bicross::bicross::{ab_action, ab_coaction, A, B};
    use bicross::tensor::LinOp;
    use bicross::verify::{finite_support_suite, MHA_AXIOMS};

    let inst = catalog::dyadic(2).unwrap();
    let (t, t_op) = ab_coaction(&inst.mp);
    // a cotwist that cannot be written down except at the identity of H
    let t_bad = LinOp::new("T∞", vec![A, B], vec![B, A], move |w| {
        if w[0].elem == bicross::Elem::int(0) {
            t.apply_word(w)
        } else {
            Err(bicross::Error::NotFinitelySupported("Γ(h) has infinite support".into()))
        }
    });
    let bad = inst.with_ab(ab_action(&catalog::dyadic(2).unwrap().mp), t_bad, t_op).unwrap();
    let cfg = ProbeConfig::random(42, 20);
    let r = finite_support_suite(&bad, &cfg).unwrap();
    let c = r.find("ab.finite-support").unwrap();
    assert_eq!(c.status, Status::Fail);
    assert!(c.detail.as_deref().unwrap().contains("not finitely supported"), "{:?}", c.detail);
    assert!(c.counterexample.is_some());

    let reps = full_pipeline(&bad, &cfg, PipelineOptions::default()).unwrap();
    assert!(!reps.last().unwrap().passed());
    assert!(reps.iter().all(|r| r.suite != MHA_AXIOMS), "built despite a failed gate");
}
