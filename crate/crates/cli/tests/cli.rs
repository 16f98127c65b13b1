use std::path::Path;
use std::process::{Command, Output};

fn permloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permloc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bounds_record() {
    let o = permloc(&["bounds", "--n", "4", "--d", "1"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim(),
        "n=4 d=1 upper_general=12 upper_d1=8 lower=3/2 adapted=false lrc_rate_bound=1/2"
    );
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 6] = [
        (&["block-concat", "--n", "4", "--h", "2"], "bc"),
        (&["range-restricted", "--n", "6", "--h", "2"], "rr"),
        (&["inf-ball", "--n", "6", "--r", "1"], "ib"),
        (&["media", "--n", "6"], "media"),
        (
            &[
                "extend",
                "--n",
                "8",
                "--t",
                "6",
                "--m",
                "3",
                "--inner",
                "block-concat:h=2",
            ],
            "ext",
        ),
        (&["multiperm", "--n", "6", "--t", "2"], "mp"),
    ];
    for (args, name) in cases {
        let file = dir.path().join(format!("{name}.pset"));
        let mut full = vec!["construct"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["--out", path(&file)]);
        let o = permloc(&full);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        let v = permloc(&["verify", path(&file)]);
        assert!(v.status.success(), "{name}: {}", stdout(&v));
        assert!(stdout(&v).contains("verify=ok"), "{name}");
    }
    let bc = dir.path().join("bc.pset");
    let v = permloc(&["verify", "--d", "0", path(&bc)]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).contains("verify=fail position=0"));
}

#[test]
fn usage_errors() {
    let o = permloc(&["bounds", "--n", "4", "--d", "1", "--frobnicate"]);
    assert!(!o.status.success());
    assert!(stderr(&o).starts_with("error=UsageError"), "{}", stderr(&o));
    let o = permloc(&["construct", "extend", "--n", "8", "--inner", "media"]);
    assert!(!o.status.success());
    assert!(stderr(&o).starts_with("error=UsageError"));
}

#[test]
fn library_errors_are_named() {
    let o = permloc(&["coset-census", "--n", "5", "--d", "1"]);
    assert!(!o.status.success());
    assert!(stderr(&o).starts_with("error=DivisibilityViolation"));
    let o = permloc(&["pp-count", "--m", "4", "--modulus", "21"]);
    assert!(stderr(&o).starts_with("error=ReducibleModulus"));
}

#[test]
fn cap_override_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_permloc"))
        .args(["construct", "block-concat", "--n", "8", "--h", "2"])
        .env("PERMLOC_CAP", "materialize=100")
        .output()
        .unwrap();
    assert!(!o.status.success());
    assert!(stderr(&o).starts_with("error=CapExceeded"));
}

#[test]
fn repair_and_query() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bc.pset");
    assert!(permloc(&[
        "construct",
        "block-concat",
        "--n",
        "8",
        "--h",
        "2",
        "--out",
        path(&file)
    ])
    .status
    .success());
    let o = permloc(&[
        "repair-sim",
        "--pset",
        path(&file),
        "--member",
        "5",
        "--erase",
        "0,3",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.lines().all(|l| l.contains("accesses=1")));
    let o = permloc(&[
        "repair-sim",
        "--pset",
        path(&file),
        "--member",
        "5",
        "--erase",
        "2,3",
    ]);
    assert!(stderr(&o).starts_with("error=SameBlockDoubleErasure"));
    let o = permloc(&["repair-sim", "--pset", path(&file), "--sweep"]);
    assert!(stdout(&o).contains("max_accesses=1"));
    let o = permloc(&["query", "--pset", path(&file), "--member", "0", "--q1", "4"]);
    assert!(stdout(&o).contains("queries=1"));
    let o = permloc(&[
        "query",
        "--pset",
        path(&file),
        "--member",
        "0",
        "--q2",
        "4",
        "--block-probe",
    ]);
    assert!(o.status.success());
}

#[test]
fn seeded_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("m.pset");
    assert!(
        permloc(&["construct", "media", "--n", "7", "--out", path(&file)])
            .status
            .success()
    );
    let run = |seed: &str| {
        stdout(&permloc(&[
            "--seed",
            seed,
            "repair-sim",
            "--pset",
            path(&file),
            "--erase",
            "3",
        ]))
    };
    assert_eq!(run("7"), run("7"));
    assert!(run("7").starts_with("member="));
}

#[test]
fn polynomial_listing_and_rates() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pp.txt");
    let o = permloc(&["pp-list", "--m", "3", "--out", path(&file)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&file).unwrap();
    assert_eq!(text.lines().count(), 1792);
    assert!(text.lines().any(|l| l == "0 1 0 0 0"));
    let o = permloc(&["pp-count", "--m", "4"]);
    assert_eq!(
        stdout(&o).trim(),
        "m=4 n=16 max_deg=4 count=21120 bound=21120"
    );
    let o = permloc(&["rates", "multiperm", "--n", "6", "--t", "1"]);
    assert!(stdout(&o).starts_with("n=6 t=1 size=48 rate="));
}
