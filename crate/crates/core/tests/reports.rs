use floer_core::pipeline::{run_theorem_1_1, run_theorem_1_2, Theorem11Config, Theorem12Config, SCHEMA};
use serde_json::Value;

fn strip_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn reports_rerun_identically() {
    let cfg = Theorem11Config { eps: 0.3, ..Default::default() }.with_seed(7);
    let a = serde_json::to_value(run_theorem_1_1(&cfg).unwrap()).unwrap();
    let b = serde_json::to_value(run_theorem_1_1(&cfg).unwrap()).unwrap();
    assert_eq!(a["schema"], SCHEMA);
    assert_eq!(a["inputs"]["eps"], 0.3);
    assert_eq!(strip_timing(a), strip_timing(b));
}

#[test]
fn bulk_report_records_degrees() {
    let rep = run_theorem_1_2(&Theorem12Config { l: 10, ..Default::default() }).unwrap();
    assert_eq!(rep.counts["degrees"]["a"], 18);
    assert_eq!(rep.counts["hbar_degree"], -8);
    assert!(rep.to_text().contains("[pass] witness h-ledger"));
}
