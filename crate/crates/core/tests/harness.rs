use std::fs;

use ctaea::harness::{read_json, read_record, run_plan, scatter_csv, ComparisonReport, ExperimentPlan, Mark, ProblemEntry};
use ctaea::{AlgorithmKind, Budget};

fn plan() -> ExperimentPlan {
    ExperimentPlan {
        problems: vec![
            ProblemEntry::new("ctp8"),
            ProblemEntry {
                m: Some(3),
                population: Some(15),
                ..ProblemEntry::new("dc1-dtlz1")
            },
        ],
        algorithms: vec![AlgorithmKind::Ctaea2, AlgorithmKind::CtaeaBaseline],
        runs: 5,
        seed_base: 100,
        budget: Budget::Generations(6),
        out_dir: None,
        ref_resolution: Some(200),
        variation: None,
    }
}

#[test]
fn plan_to_records_to_report_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = run_plan(&plan(), 1, a.path()).unwrap();
    let second = run_plan(&plan(), 3, b.path()).unwrap();
    assert_eq!(first.records.len(), 20);

    for name in ["report.json", "report.txt"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name} differs"
        );
    }
    for (pa, pb) in first.record_paths.iter().zip(&second.record_paths) {
        let ra = read_record(pa).unwrap();
        let rb = read_record(pb).unwrap();
        assert_eq!(ra.without_wall_clock(), rb.without_wall_clock());
        assert_eq!(pa.file_name(), pb.file_name());
    }
    // every record round-trips through JSON unchanged
    for (record, path) in first.records.iter().zip(&first.record_paths) {
        assert_eq!(&read_record(path).unwrap(), record);
    }

    let report: ComparisonReport = read_json(&a.path().join("report.json")).unwrap();
    assert_eq!(report, first.report);
    let cell = report.cell("ctp8", AlgorithmKind::Ctaea2).unwrap();
    assert_eq!(cell.seeds, vec![100, 101, 102, 103, 104]);
    let mark = report
        .comparison("ctp8", AlgorithmKind::Ctaea2, AlgorithmKind::CtaeaBaseline)
        .unwrap();
    assert_ne!(mark.mark, Mark::NotTested);
}

#[test]
fn plan_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plan.json");
    ctaea::harness::write_json(&path, &plan()).unwrap();
    let back: ExperimentPlan = read_json(&path).unwrap();
    assert_eq!(back, plan());
}

#[test]
fn scatter_rows_match_the_final_archive() {
    let dir = tempfile::tempdir().unwrap();
    let mut p = plan();
    p.problems.truncate(1);
    p.algorithms.truncate(1);
    p.runs = 1;
    let outcome = run_plan(&p, 1, dir.path()).unwrap();
    let record = &outcome.records[0];
    let csv = scatter_csv(&record.final_ca, record.m);
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), record.final_ca.len());
    for (row, s) in rows.iter().zip(record.final_ca.iter()) {
        assert_eq!(&row[..2], s.f.as_slice());
        assert_eq!(row[2], s.cv);
    }
}
