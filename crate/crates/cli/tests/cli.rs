//! End-to-end runs of the `thetaobs` binary: report contents, the golden
//! obstruction report for type (2,2), and exit statuses.

use std::path::PathBuf;
use std::process::{Command, Output};

use thetaobs::report::{Report, Verdict};
use thetaobs::spgroup::SpGroup;
use thetaobs::symmod::TypeD;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetaobs")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Report {
    let r = Report::from_json(&String::from_utf8_lossy(&out.stdout)).expect("stdout is a report");
    assert!(r.is_valid());
    r
}

#[test]
fn classify_recovers_type_of_shifted_presentation() {
    let out = run(&["classify", &data("shifted_2_4.txt")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.records[0].summary, "type: 2,4");
    assert_eq!(r.records[0].verdict, Verdict::Pass);
}

#[test]
fn degenerate_module_fails_with_the_radical() {
    let out = run(&["classify", &data("degenerate.txt")]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let err = r.records[0].error.as_ref().expect("error recorded");
    assert_eq!(err.kind, "degenerate");
    assert!(err.message.contains("(0,1)"), "{}", err.message);
}

#[test]
fn missing_file_is_an_input_error() {
    let out = run(&["classify", &data("no_such_module.txt")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out).records[0].error.as_ref().unwrap().kind, "input");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["obstruction"]).status.code(), Some(2));
    assert_eq!(run(&["verify-all", "--criterion", "13"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn oversized_module_exits_with_three() {
    let out = run(&["obstruction", "--type", "3,3,3,3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(report(&out).records[0].error.as_ref().unwrap().kind, "capacity");
}

#[test]
fn odd_type_splits() {
    let out = run(&["obstruction", "--type", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out).records[0].summary, "splits: yes (canonical section)");
}

#[test]
fn type_two_squared_matches_golden_report() {
    let out = run(&["obstruction", "--type", "2,2"]);
    assert_eq!(out.status.code(), Some(0));
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/obstruction_2_2.json");
    let actual = String::from_utf8(out.stdout).unwrap();
    if std::env::var_os("THETAOBS_BLESS").is_some() {
        std::fs::write(&path, &actual).unwrap();
    }
    assert_eq!(actual, std::fs::read_to_string(&path).unwrap());
    let r = Report::from_json(&actual).unwrap();
    assert_eq!(r.records[0].summary, "c_D nonzero (full solve)");
}

#[test]
fn negligibility_report_for_g_four() {
    let out = run(&["obstruction", "--type", "2,2,2,2", "--report-negligibility"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let names: Vec<&str> = r.records.iter().map(|x| x.name.as_str()).collect();
    assert_eq!(names, ["obstruction.class", "obstruction.negligibility"]);
    assert!(r.records.iter().all(|x| x.verdict == Verdict::Recorded));
    assert_eq!(r.records[0].summary, "c_D nonzero (cited, not recomputed)");
    assert_eq!(r.records[1].summary, "all φ_m vanish; not negligible");
}

#[test]
fn subgroup_lifting_decisions() {
    let out = run(&["obstruction", "--type", "2", "--subgroup", &data("sl2_f2.txt")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out).records[0].summary.starts_with("lifts"));

    let d = TypeD::homogeneous(2, 2).unwrap();
    let path = std::env::temp_dir().join(format!("thetaobs-sp4-{}.txt", std::process::id()));
    std::fs::write(&path, SpGroup::full(&d, 1).unwrap().to_text()).unwrap();
    let out = run(&["obstruction", "--type", "2,2", "--subgroup", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out).records[0].summary.starts_with("does not lift"));
}

#[test]
fn out_flag_writes_the_report_and_table_goes_to_stderr() {
    let path = std::env::temp_dir().join(format!("thetaobs-out-{}.json", std::process::id()));
    let out = run(&["--table", "--out", path.to_str().unwrap(), "obstruction", "--type", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("obstruction.splitting"));
    let r = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(r.records.len(), 1);
}

#[test]
fn paramod_command_runs_one_shape() {
    let out = run(&["paramod", "--n", "2", "--k", "1", "--trials", "50", "--modulus-exponent", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    assert!(r.records.iter().all(|x| x.name.starts_with("paramod.n2k1.mod8")), "{:?}", r.records[0].name);
    assert_eq!(r.totals.fail, 0);
}

#[test]
fn verify_all_single_criterion_is_deterministic() {
    let a = run(&["verify-all", "--criterion", "10", "--seed", "5"]);
    let b = run(&["verify-all", "--criterion", "10", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r.level.as_deref(), Some("quick"));
    assert!(r.records.iter().all(|x| x.name.starts_with("c10.")));
}
