use std::io::Write;
use std::process::{Command, Output, Stdio};

use knotoid::{parse_pd, print_em, print_pd};

fn knotoid(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_knotoid"))
        .args(args)
        .env_remove("KNOTOID_WORKERS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

const K2_1: &str = "[0],[0,1,2,3],[1,3,4,2],[4]";
const K3_1: &str = "[0],[0,1,2,3],[1,4,5,2],[3,5,4,6],[6]";

#[test]
fn invariants_of_k2_1() {
    let out = stdout(&knotoid(&["invariants"], &format!("{K2_1}\n")));
    assert_eq!(
        out,
        "bracket\tA^8 + A^6 - A^2\n\
         arrow\tA^-4 + A^-6*L1 - A^-10*L1\n\
         mock\tw^2 + w - w^-1\n\
         affine\tt - 2 + t^-1\n\
         yamada\t-A^12 - A^11 - A^10 - A^9 - A^8 - A^6 - A^4 + 1\n"
    );
}

#[test]
fn canonical_codes_ignore_labels() {
    let d = parse_pd(K3_1).unwrap();
    let mut input = String::new();
    for (perm, shift) in [([0, 1, 2, 3, 4], [0; 5]), ([4, 2, 0, 3, 1], [0, 1, 2, 3, 0]), ([1, 3, 4, 0, 2], [0, 3, 3, 1, 0])] {
        let e = d.relabel(&perm, &shift);
        input.push_str(&print_em(&e));
        input.push('\n');
        input.push_str(&print_pd(&e));
        input.push('\n');
    }
    let out = stdout(&knotoid(&["codes", "--canonical"], &input));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|l| *l == lines[0]));
    // Canonical codes are fixed points.
    assert_eq!(stdout(&knotoid(&["codes", "--to", "canonical"], &out)), out);
}

#[test]
fn simplify_undoes_a_kink() {
    let out = stdout(&knotoid(&["simplify"], "[0],[0,1,1,2],[2]\n"));
    assert_eq!(out, "B0,A0\n");
}

#[test]
fn classify_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("census.jsonl");
    let o = knotoid(&["classify", "--max-n", "3", "--out", path.to_str().unwrap()], "");
    assert!(o.status.success());
    let report = stdout(&knotoid(&["report", "--in", path.to_str().unwrap(), "--table", "1"], ""));
    assert_eq!(
        report,
        "crossings\ttotal\tchiral_yes\tchiral_no\trotatable_yes\trotatable_no\tpossible_duplicates\n\
         0\t1\t0\t1\t1\t0\t0\n\
         1\t0\t0\t0\t0\t0\t0\n\
         2\t1\t1\t0\t0\t1\t0\n\
         3\t2\t2\t0\t1\t1\t0\n\
         total\t4\t3\t1\t2\t2\t0\n"
    );
    let t2 = stdout(&knotoid(&["report", "--table", "2"], &std::fs::read_to_string(&path).unwrap()));
    assert!(t2.starts_with("invariant\tunique\tnon_unique\nbracket\t"));
}

#[test]
fn worker_count_does_not_change_output() {
    let one = stdout(&knotoid(&["--workers", "1", "classify", "--max-n", "3"], ""));
    let many = stdout(&knotoid(&["--workers", "8", "classify", "--max-n", "3"], ""));
    assert_eq!(one, many);
    assert_eq!(one.lines().count(), 4);
}

#[test]
fn equivalent_reports_distinct_invariants() {
    assert_eq!(stdout(&knotoid(&["equivalent", K2_1, K3_1], "")), "distinct\n");
    let e = print_em(&parse_pd(K3_1).unwrap());
    assert_eq!(stdout(&knotoid(&["equivalent", K3_1, &e], "")), "equivalent\n");
}

#[test]
fn exit_codes() {
    assert_eq!(knotoid(&["invariants"], "[0],[0,1,2,3]\n").status.code(), Some(1));
    assert_eq!(knotoid(&["no-such-command"], "").status.code(), Some(2));
    assert_eq!(knotoid(&["--workers", "0", "codes"], "").status.code(), Some(2));
    assert_eq!(knotoid(&["report", "--table", "3"], "").status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fx.jsonl");
    let good = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/appendix.jsonl")).unwrap();
    let first = good.lines().take(4).collect::<Vec<_>>().join("\n");
    std::fs::write(&path, &first).unwrap();
    assert_eq!(knotoid(&["verify", "--fixtures", path.to_str().unwrap()], "").status.code(), Some(0));
    std::fs::write(&path, first.replace("t - 2 + 1/t", "t - 3 + 1/t")).unwrap();
    let o = knotoid(&["verify", "--fixtures", path.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("mismatch\tK2_1\taffine"));
}
