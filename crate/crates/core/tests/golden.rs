mod common;

use common::{fixture, fixture_path, FIXTURES};
use polymmp::document::InputDocument;
use polymmp::mmp::{build_family, run_mmp, StepKind};
use polymmp::report::{Report, REPORT_SCHEMA_VERSION};

fn golden(name: &str) -> (&'static [&'static str], &'static [StepKind]) {
    use StepKind::*;
    match name {
        "ex_toric1" => (&["[0,1)", "[1,2)", "{2}"], &[Divisorial, MoriFibration]),
        "ex_toric2" => (&["[0,1/2)", "{1/2}", "(1/2,3/2)", "[3/2,2)", "{2}"], &[Flip, Divisorial, MoriFibration]),
        "ex_horo1" | "ex_horo2" => (&["[0,1)", "[1,4/3)", "{4/3}"], &[Divisorial, MoriFibration]),
        "ex_horo3" => (&["[0,1/2)", "{1/2}"], &[MoriFibration]),
        "ex_horo4" => (&["[0,1)", "{1}", "(1,5/3)", "{5/3}"], &[Flip, MoriFibration]),
        "ex_horo5" => (&["[0,1)", "{1}", "(1,5/4)", "{5/4}"], &[Flip, MoriFibration]),
        _ => unreachable!(),
    }
}

#[test]
fn fixture_classes_and_steps() {
    for name in FIXTURES {
        let (_, trace) = run_mmp(&build_family(&fixture(name)).unwrap()).unwrap();
        let (classes, steps) = golden(name);
        let got: Vec<&str> = trace.classes.iter().map(|c| c.interval.as_str()).collect();
        assert_eq!(got, classes, "{name}");
        let kinds: Vec<StepKind> = trace.steps.iter().map(|s| s.kind).collect();
        assert_eq!(kinds, steps, "{name}");
        assert!(trace.message.is_none(), "{name}: {:?}", trace.message);
    }
}

#[test]
fn input_documents_round_trip() {
    for name in FIXTURES {
        let text = std::fs::read_to_string(fixture_path(name)).unwrap();
        let doc = InputDocument::from_json(&text).unwrap();
        assert_eq!(InputDocument::from_json(&doc.to_json()).unwrap(), doc, "{name}");
        let e = doc.to_embedding().unwrap();
        let again = InputDocument::from_embedding(&e, doc.name.clone()).to_embedding().unwrap();
        assert_eq!(again.divisor, e.divisor, "{name}");
        assert_eq!(again.fan, e.fan, "{name}");
    }
}

#[test]
fn reports_round_trip_and_are_deterministic() {
    for name in FIXTURES {
        let e = fixture(name);
        let make = || {
            let (_, trace) = run_mmp(&build_family(&e).unwrap()).unwrap();
            Report::new("run", Some(name.into()), &e).with_trace(trace)
        };
        let report = make();
        assert_eq!(report.schema_version, REPORT_SCHEMA_VERSION);
        let json = report.to_json();
        let parsed: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, report, "{name}");
        assert_eq!(make().to_json(), json, "{name}");
        assert!(!report.to_text().is_empty());
    }
}

#[test]
fn unknown_schema_version_is_rejected() {
    let text = std::fs::read_to_string(fixture_path("ex_horo1")).unwrap();
    let bumped = text.replacen("\"schema_version\": 1", "\"schema_version\": 2", 1);
    assert!(InputDocument::from_json(&bumped).is_err());
    let extra = text.replacen('{', "{\"bogus\": 0,", 1);
    assert!(InputDocument::from_json(&extra).is_err());
}
