//! Byte-exact output for pinned command lines. Set `UPDATE_GOLDEN=1` to
//! rewrite the expected files after an intentional change.

use std::path::{Path, PathBuf};
use std::process::Command;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check(name: &str, args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_csdecay"))
        .args(args)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
        return;
    }
    let expected = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    if out.stdout != expected {
        let got = String::from_utf8_lossy(&out.stdout);
        let want = String::from_utf8_lossy(&expected);
        let line = got.lines().zip(want.lines()).position(|(a, b)| a != b);
        panic!("{name} differs from golden file (first differing line: {line:?})");
    }
}

#[test]
fn scan_csv() {
    check(
        "scan_n2.csv",
        &[
            "scan",
            "--n",
            "2",
            "--lambda",
            "0,0.5,1",
            "--t",
            "log:0.01:100:12",
        ],
    );
}

#[test]
fn scan_json() {
    check(
        "scan_n1.json",
        &[
            "scan",
            "--n",
            "1",
            "--lambda",
            "0",
            "--t",
            "lin:0:2:5",
            "--format",
            "json",
        ],
    );
}

#[test]
fn scan_tabulated_protocol() {
    let table = golden_dir().join("ramp.csv");
    let protocol = format!("table:{}", table.display());
    check(
        "scan_ramp.csv",
        &[
            "scan",
            "--n",
            "2",
            "--lambda",
            "1",
            "--protocol",
            &protocol,
            "--t",
            "lin:0:4:9",
        ],
    );
}

#[test]
fn decompose_csv() {
    check(
        "decompose_n3_l1.csv",
        &[
            "decompose",
            "--n",
            "3",
            "--lambda",
            "1",
            "--tau-count",
            "11",
        ],
    );
}

#[test]
fn observables_csv() {
    check(
        "observables_n2_l1.csv",
        &[
            "observables",
            "--n",
            "2",
            "--lambda",
            "1",
            "--a",
            "1",
            "--t",
            "log:10:1000:9",
        ],
    );
}
