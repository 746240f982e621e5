use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn walkbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walkbound"))
        .args(args)
        .env_remove("WALKBOUND_CACHE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_row<'a>(csv: &'a str, first: &str) -> Vec<&'a str> {
    csv.lines()
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|cols| cols[0] == first)
        .unwrap()
}

#[test]
fn reconstruct_from_argument_and_stdin() {
    let o = walkbound(&["reconstruct", "8 4 6 4 4 0 2 0 0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "785649231");

    let mut child = Command::new(env!("CARGO_BIN_EXE_walkbound"))
        .arg("reconstruct")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"{0, 0, 1}\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim().len(), 3);
}

#[test]
fn malformed_multiset_names_the_token() {
    let o = walkbound(&["reconstruct", "8 4 six"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("\"six\""), "{}", stderr(&o));
}

#[test]
fn enumerate_counts() {
    let o = walkbound(&["enumerate", "--pattern", "1324", "--cutoff", "7"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert_eq!(csv.lines().next(), Some("n,avoiders,walks"));
    assert_eq!(csv_row(&csv, "7"), ["7", "2762", "2762"]);
}

#[test]
fn weighted_enumeration() {
    let o = walkbound(&["enumerate", "--weighted", "--cutoff", "14"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert_eq!(csv.lines().next(), Some("n,Wtilde,avoiders"));
    assert_eq!(csv_row(&csv, "7"), ["7", "2762.0000", "2762"]);
    let w14: f64 = csv_row(&csv, "14")[1].parse().unwrap();
    assert!((w14 - 1205205579.0).abs() / 1205205579.0 < 5e-4);
    assert_eq!(csv_row(&csv, "14")[2], "");
}

#[test]
fn caps_are_refused() {
    let o = walkbound(&["bound", "--pattern", "1324", "--cutoff", "100000"]);
    assert_eq!(o.status.code(), Some(2));
    let o = walkbound(&[
        "graph",
        "--pattern",
        "1324",
        "--cutoff",
        "20",
        "--cache",
        ".",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = walkbound(&[
        "bound",
        "--pattern",
        "1324",
        "--quotient",
        "run",
        "--cutoff",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = walkbound(&["bound", "--pattern", "1234", "--cutoff", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bound_writes_verifiable_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = walkbound(&[
        "bound",
        "--pattern",
        "2134",
        "--cutoff",
        "10,20",
        "--arith",
        "float",
        "--out",
        out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("bounds.csv")).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("pattern,quotient,N,lambda,rho,iterations")
    );
    assert_eq!(csv.lines().count(), 3);
    let cert = dir.path().join("2134-run-20.cert");
    let o = walkbound(&["verify", cert.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("verified"));

    // a changed bound no longer verifies
    let text = fs::read_to_string(&cert).unwrap();
    let bumped: String = text
        .lines()
        .map(|l| match l.strip_prefix("rho_num=") {
            Some(n) => format!("rho_num={}1\n", n),
            None => format!("{l}\n"),
        })
        .collect();
    fs::write(&cert, bumped).unwrap();
    let o = walkbound(&["verify", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn short_count_certificates_are_conditional() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = walkbound(&[
        "bound",
        "--quotient",
        "short",
        "--cutoff",
        "12",
        "--out",
        out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let cert = fs::read_to_string(dir.path().join("1324-short-12.cert")).unwrap();
    assert!(cert.contains("conditional=true"));
    assert!(cert
        .lines()
        .any(|l| l.starts_with("condition=") && l != "condition=none"));
}

#[test]
fn analytic_chain_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = walkbound(&[
        "bound",
        "--analytic",
        "--pattern",
        "213",
        "--cutoff",
        "30",
        "--out",
        out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("closed form"));
    let cert = dir.path().join("213-chain-30.cert");
    let o = walkbound(&["verify", cert.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().into_string().unwrap(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

#[test]
fn deterministic_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = dir.path().to_str().unwrap();
        let o = walkbound(&[
            "bound",
            "--deterministic",
            "--pattern",
            "3124",
            "--cutoff",
            "6,7",
            "--out",
            out,
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let o = walkbound(&[
            "graph",
            "--deterministic",
            "--pattern",
            "1324",
            "--quotient",
            "short",
            "--cutoff",
            "6",
            "--cache",
            out,
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let fa = files(a.path());
    assert_eq!(fa.len(), 7);
    assert_eq!(fa, files(b.path()));
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_walkbound"))
        .args([
            "graph",
            "--pattern",
            "2134",
            "--cutoff",
            "5",
            "--edge-rule",
            "v1",
            "--quotient",
            "run",
        ])
        .env("WALKBOUND_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("2134-v1-5.graph").exists());
    assert!(dir.path().join("2134-run-v1-5.quot").exists());
    let o = walkbound(&["graph", "--pattern", "2134", "--cutoff", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn conjecture_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ratios.csv");
    let o = walkbound(&[
        "conjecture",
        "--cutoff",
        "6",
        "--kmax",
        "12",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().next(), Some("n,k,W,Wtilde,ratio"));
    assert_eq!(csv.lines().count(), 1 + 6 * 12);
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let k: usize = cols[1].parse().unwrap();
        let ratio: f64 = cols[4].parse().unwrap();
        assert!(ratio <= 1.0);
        if k <= 7 {
            assert_eq!(cols[4], "1.000000", "{line}");
        }
    }
}

#[test]
fn stationary_diagnostic() {
    let o = walkbound(&[
        "stationary",
        "--pattern",
        "1324",
        "--cutoff",
        "6",
        "--step",
        "inverse-length",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = stdout(&o);
    assert_eq!(csv.lines().next(), Some("n,f,members,mean,min,max"));
    assert!(stderr(&o).contains("residual"));
}
