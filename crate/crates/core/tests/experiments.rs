use zsnft::experiments::{
    run_continuous, run_discrete, run_invariant, ExperimentConfig, ReferenceSpec, SchemeChoice,
};
use zsnft::schemes::SchemeKind;
use zsnft::signals::{SignalKind, SignalSpec};

fn chirped(sigma: f64) -> ExperimentConfig {
    ExperimentConfig {
        signal: SignalSpec { sigma, ..SignalSpec::default() },
        m_list: vec![1 << 12],
        n_xi: Some(257),
        ..Default::default()
    }
}

#[test]
fn sixth_order_gap_over_second_order() {
    let cfg = ExperimentConfig {
        schemes: vec![SchemeChoice::conventional(SchemeKind::Es6), SchemeChoice::conventional(SchemeKind::Bo2)],
        reference: ReferenceSpec { m_ref: 1 << 15, ..Default::default() },
        ..chirped(1.0)
    };
    let rows = run_continuous(&cfg).unwrap();
    let (es6, bo2) = (rows[0].rmse_a.unwrap(), rows[1].rmse_a.unwrap());
    assert!(es6 * 1e3 < bo2, "ES6 {es6:e}, BO2 {bo2:e}");
}

#[test]
fn invariant_profiles() {
    let kinds = [SchemeKind::Es6, SchemeKind::Es6Pade3, SchemeKind::Es6Pade4, SchemeKind::Es6Cayley];
    let mut cfg = chirped(1.0);
    cfg.schemes = kinds.iter().map(|&k| SchemeChoice::conventional(k)).collect();
    cfg.schemes.push(SchemeChoice::fast(SchemeKind::Es6Pade3));
    let (rows, _) = run_invariant(&cfg).unwrap();
    for r in &rows[..4] {
        assert!(r.max_err_h.unwrap() <= 1e-10, "{r:?}");
    }
    let (conv, fast) = (rows[1].rmse_h.unwrap(), rows[4].rmse_h.unwrap());
    assert!(fast <= 10.0 * conv, "fast {fast:e} vs conventional {conv:e}");
    assert!(rows[4].max_err_h.unwrap() <= 1e-6);

    let mut cfg = chirped(-1.0);
    cfg.schemes = kinds.iter().map(|&k| SchemeChoice::conventional(k)).collect();
    let (rows, _) = run_invariant(&cfg).unwrap();
    for r in &rows {
        let peak = r.xi_max_err.unwrap();
        assert!(peak.abs() <= 40.0 / 6.0, "{}: peak at {peak}", r.scheme);
    }
}

#[test]
fn discrete_errors_and_ordering() {
    let cfg = ExperimentConfig {
        signal: SignalSpec { kind: SignalKind::Sech, amplitude: 2.0, chirp: 0.0, ..SignalSpec::default() },
        schemes: SchemeKind::SIXTH_ORDER.iter().map(|&k| SchemeChoice::conventional(k)).collect(),
        m_list: vec![1 << 10, 1 << 12],
        eigenvalues: vec![[0.0, 1.5]],
        ..Default::default()
    };
    let rows = run_discrete(&cfg).unwrap();
    assert!(rows.iter().all(|r| r.status == "ok"));
    for r in rows.iter().filter(|r| r.m == 1 << 12) {
        assert!(r.err_a.unwrap() < 1e-6, "{r:?}");
    }
    let at_1024: Vec<_> = rows.iter().filter(|r| r.m == 1 << 10).collect();
    let cayley = at_1024.iter().find(|r| r.scheme.kind == SchemeKind::Es6Cayley).unwrap().err_r.unwrap();
    assert!(at_1024.iter().all(|r| r.err_r.unwrap() <= cayley));
}

#[test]
fn zero_potential_trial_eigenvalue_is_reported() {
    let cfg = ExperimentConfig {
        signal: SignalSpec { kind: SignalKind::Sech, amplitude: 0.0, chirp: 0.0, ..SignalSpec::default() },
        schemes: vec![SchemeChoice::conventional(SchemeKind::Es6)],
        m_list: vec![256],
        eigenvalues: vec![[0.0, 0.5]],
        oracle_m: 1 << 12,
        ..Default::default()
    };
    let rows = run_discrete(&cfg).unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].status.contains("not a simple eigenvalue"), "{}", rows[0].status);
    assert!(rows[0].err_r.is_none());
}
