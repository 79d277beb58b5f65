use pathspin_core::analysis::{cross_validate, probability_axis, sweep};
use pathspin_core::protocol::{enumerate_branches, run_sampled};
use pathspin_core::{
    BobOutcome, CorrectionTable, ProtocolConfig32, ProtocolConfig64, Selector, Session,
};

#[test]
fn single_precision_pipeline_agrees_with_double() {
    let c32 = ProtocolConfig32::new(0.6, 0.8).unwrap();
    let c64 = ProtocolConfig64::new(0.6, 0.8).unwrap();
    let b32 = enumerate_branches(&c32).unwrap();
    let b64 = enumerate_branches(&c64).unwrap();
    for (x, y) in b32.iter().zip(&b64) {
        assert_eq!(x.correction, y.correction);
        assert!((x.probability as f64 - y.probability).abs() < 1e-5);
        assert!((x.fidelity.unwrap() as f64 - y.fidelity.unwrap()).abs() < 1e-5);
    }
}

#[test]
fn manual_session_matches_enumeration() {
    let cfg = ProtocolConfig64::new(0.35, 0.9).unwrap();
    let table = enumerate_branches(&cfg).unwrap();
    let mut s = Session::prepare(cfg.clone()).unwrap();
    s.transmit(false, false).unwrap();
    let out = s
        .complete(
            Selector::Forced((1, 1)),
            Selector::Forced(BobOutcome::new(0, 1)),
            &CorrectionTable::STANDARD,
        )
        .unwrap();
    let id = 0b1101;
    assert_eq!(table[id].id(), id);
    assert_eq!(Some(out), table[id].output_state);
    assert_eq!(s.correction(), Some(table[id].correction));
}

#[test]
fn report_and_sweep_agree() {
    let axis = probability_axis::<f64>(5);
    let grid = sweep(&axis, &axis, true).unwrap();
    for (i, &a) in axis.iter().enumerate() {
        for (j, &g) in axis.iter().enumerate() {
            let r = cross_validate(&ProtocolConfig64::new(a, g).unwrap()).unwrap();
            assert!((r.average_enumerated - grid.values[i][j]).abs() < 1e-10);
        }
    }
}

#[test]
fn sampled_runs_serialize() {
    let cfg = ProtocolConfig64::new(0.6, 0.8).unwrap().with_seed(3);
    let runs = run_sampled(&cfg, 4).unwrap();
    let v = serde_json::to_value(&runs).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
    assert_eq!(v[2]["run_index"], 2);
    assert!(v[0]["transcript"]["measurements"].as_array().unwrap().len() == 4);
}
