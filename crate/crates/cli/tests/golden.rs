//! Reports for fixed invocations must match the checked-in JSON byte for byte.
//! Set `UPDATE_GOLDEN=1` to rewrite the files.

use std::path::PathBuf;
use std::process::Command;

const CASES: [(&str, &[&str]); 3] = [
    ("classify_qp2_pow2", &["classify", "Qp:2", "pow(2)", "--trials", "200", "--seed", "1"]),
    ("ax_qp5", &["ax", "Qp:5", "x=1/5"]),
    ("vtop_qp2_pow2", &["vtop", "Qp:2", "pow(2)", "--trials", "200", "--seed", "7"]),
];

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

#[test]
fn reports_match_golden_files() {
    for (name, args) in CASES {
        let out = Command::new(env!("CARGO_BIN_EXE_valring")).args(args).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let path = golden(name);
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let want = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(out.stdout == want, "{name} differs from {}", path.display());
    }
}
