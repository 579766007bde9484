use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SWEEP_HEADER: &str =
    "n,rho,policy,seed,horizon_slots,mean_total_queue,max_total_queue,waste_slots,idle_slots,batches_with_positive_U,mean_B";

fn switchsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_switchsim"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_writes_one_row_and_traces() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let trace = dir.path().join("trace.csv");
    let args = [
        "simulate",
        "--policy",
        "standard-batching",
        "--n",
        "4",
        "--rho",
        "0.6",
        "--horizon-batches",
        "3",
        "--seed",
        "9",
        "--mode",
        "adaptive",
        "--trace",
        path(&trace),
        "--out",
        path(&out),
    ];
    let res = switchsim(&args);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], SWEEP_HEADER);
    assert!(lines[1].starts_with("4,0.6,standard-batching,9,"));

    let slots = fs::read_to_string(&trace).unwrap();
    assert!(slots.starts_with("slot,total_queue,wasted,idle\n"));
    let batches = fs::read_to_string(dir.path().join("trace.batches.csv")).unwrap();
    assert!(batches.starts_with("batch,U_k,B_k,max_row_sum,max_col_sum\n"));

    // same seed, same bytes
    let again = dir.path().join("again.csv");
    let mut args2 = args;
    args2[args2.len() - 1] = path(&again);
    assert!(switchsim(&args2).status.success());
    assert_eq!(text, fs::read_to_string(&again).unwrap());
}

#[test]
fn invalid_regime_falls_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let res = switchsim(&[
        "simulate",
        "--policy",
        "lower-envelope",
        "--n",
        "4",
        "--rho",
        "0.7",
        "--horizon-batches",
        "1",
        "--seed",
        "1",
        "--mode",
        "theoretical",
        "--out",
        path(&out),
    ]);
    assert!(res.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.lines().nth(1).unwrap().contains(",max-weight(fallback),"));
}

#[test]
fn constants_file_selects_desk_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let constants = dir.path().join("desk.constants");
    fs::write(
        &constants,
        "# desk\nmode = adaptive\nc_b = 12\nc_d = 20\nc_s = 6\nc_f = 1\n",
    )
    .unwrap();
    let out = dir.path().join("run.csv");
    let res = switchsim(&[
        "simulate",
        "--policy",
        "lower-envelope",
        "--n",
        "16",
        "--rho",
        "0.85",
        "--horizon-batches",
        "1",
        "--seed",
        "4",
        "--constants",
        path(&constants),
        "--out",
        path(&out),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let row = fs::read_to_string(&out).unwrap();
    // horizon = b + d = 1479 + 696
    assert!(row
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("16,0.85,lower-envelope,4,2175,"));
}

#[test]
fn sweep_with_empty_grid_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("s.toml");
    fs::write(&config, "policy = \"max-weight\"\nhorizon_batches = 1\n").unwrap();
    let out = dir.path().join("s.csv");
    let res = switchsim(&["sweep", "--config", path(&config), "--out", path(&out)]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert_eq!(fs::read_to_string(&out).unwrap(), format!("{SWEEP_HEADER}\n"));
}

#[test]
fn factor_writes_trial_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    let res = switchsim(&[
        "factor",
        "--n",
        "6",
        "--m",
        "10",
        "--p",
        "1",
        "--f",
        "6",
        "--trials",
        "3",
        "--seed",
        "2",
        "--out",
        path(&out),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "n,m,p,trial,seed,beta_star,beta0,success");
    assert_eq!(lines.len(), 4);
    // p = 1: every entry is m, so the largest envelope has degree mn = 60
    for (t, line) in lines[1..].iter().enumerate() {
        let fields: Vec<_> = line.split(',').collect();
        assert_eq!(fields[3], t.to_string());
        assert_eq!(fields[5], "60");
        assert_eq!(fields[7], "true");
    }
}

#[test]
fn clear_emits_gamma_schedules() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("q.txt");
    fs::write(&matrix, "3\n2 1 0\n0 1 2\n1 1 1\n").unwrap();
    let out = dir.path().join("plan.txt");
    let res = switchsim(&["clear", "--matrix", path(&matrix), "--out", path(&out)]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let plan = fs::read_to_string(&out).unwrap();
    assert_eq!(plan.lines().count(), 3);
    let mut served = [[0u32; 3]; 3];
    for line in plan.lines() {
        for pair in line.split_whitespace() {
            let (i, j) = pair.split_once(':').unwrap();
            served[i.parse::<usize>().unwrap()][j.parse::<usize>().unwrap()] += 1;
        }
    }
    assert_eq!(served, [[2, 1, 0], [0, 1, 2], [1, 1, 1]]);
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("q.txt");
    fs::write(&matrix, "2\n1 2 3\n").unwrap();
    let res = switchsim(&["clear", "--matrix", path(&matrix), "--out", path(&dir.path().join("o"))]);
    assert!(!res.status.success());
    assert!(!res.stderr.is_empty());

    let res = switchsim(&[
        "simulate",
        "--policy",
        "max-weight",
        "--n",
        "4",
        "--rho",
        "1.5",
        "--horizon-batches",
        "1",
        "--seed",
        "1",
        "--mode",
        "adaptive",
        "--out",
        path(&dir.path().join("x.csv")),
    ]);
    assert!(!res.status.success());
}
