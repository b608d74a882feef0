//! Shared helpers for running the binary against golden files.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

/// `(golden file stem, arguments)`, covering every subcommand.
pub const GOLDEN_CASES: &[(&str, &[&str])] = &[
    (
        "eval_a3_n5_r2",
        &["eval", "--order", "3", "--index", "5", "--resolution", "2"],
    ),
    ("kernel_a3_n3", &["kernel", "--order", "3", "--n", "3"]),
    ("kernel_a2_n5", &["kernel", "--order", "2", "--n", "5"]),
    ("lebesgue_a2_n5", &["lebesgue", "--order", "2", "--n", "5"]),
    (
        "lebesgue_a2_list",
        &["lebesgue", "--order", "2", "--n-list", "n_list.txt"],
    ),
    ("lemma_a2_k6", &["lemma", "--order", "2", "--k-max", "6"]),
    ("lemma_a3_k4", &["lemma", "--order", "3", "--k-max", "4"]),
    (
        "transform_a2",
        &["transform", "--order", "2", "--input", "function_a2.csv"],
    ),
    (
        "transform_a3_json_input",
        &["transform", "--order", "3", "--input", "function_a3.json"],
    ),
    (
        "transform_inverse_a3",
        &[
            "transform",
            "--order",
            "3",
            "--input",
            "spectrum_a3.csv",
            "--inverse",
        ],
    ),
    (
        "greedy_a2_m2",
        &[
            "greedy",
            "--coeffs",
            "block_a2.csv",
            "--m",
            "2",
            "--resolution",
            "2",
        ],
    ),
    (
        "greedy_a3_m2",
        &[
            "greedy",
            "--coeffs",
            "spectrum_a3.csv",
            "--m",
            "2",
            "--resolution",
            "2",
        ],
    ),
    ("gap_a2_k3", &["gap", "--order", "2", "--k", "3"]),
    (
        "coeffs_a2_i20",
        &["coeffs", "--order", "2", "--max-index", "20"],
    ),
    ("norms_a2_k2", &["norms", "--order", "2", "--blocks", "2"]),
];

/// Invocations whose bound is deliberately tightened past the truth.
pub const TAMPERED_CASES: &[&[&str]] = &[
    &[
        "lemma",
        "--order",
        "2",
        "--k-max",
        "6",
        "--bound-scale",
        "2",
    ],
    &["gap", "--order", "2", "--k", "4", "--bound-scale", "10"],
    &[
        "norms",
        "--order",
        "2",
        "--blocks",
        "2",
        "--bound-scale",
        "0.1",
    ],
];

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn chrestenson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chrestenson"))
        .args(args)
        .current_dir(golden_dir().join("inputs"))
        .output()
        .expect("binary runs")
}

pub fn exit_code(args: &[&str]) -> i32 {
    chrestenson(args).status.code().expect("exited normally")
}

/// Runs one case in both formats and compares against the golden files.
/// With `BLESS` set in the environment the files are rewritten instead.
pub fn check_golden(name: &str, args: &[&str]) -> Result<(), String> {
    for format in ["csv", "json"] {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--format", format]);
        let out = chrestenson(&full);
        if out.status.code() != Some(0) {
            return Err(format!(
                "{name} {format}: exit {:?}: {}",
                out.status.code(),
                String::from_utf8_lossy(&out.stderr)
            ));
        }
        let path = golden_dir().join(format!("{name}.{format}"));
        let got = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
        if std::env::var_os("BLESS").is_some() {
            std::fs::write(&path, &got).map_err(|e| e.to_string())?;
            continue;
        }
        let want = std::fs::read_to_string(&path)
            .map_err(|e| format!("{}: {e} (run with BLESS=1)", path.display()))?;
        if got != want {
            return Err(format!("{name} {format} differs from {}", path.display()));
        }
    }
    Ok(())
}

pub fn check_cases(prefix: &str) {
    let mut seen = false;
    for (name, args) in GOLDEN_CASES.iter().filter(|(_, a)| a[0] == prefix) {
        seen = true;
        check_golden(name, args).unwrap();
    }
    assert!(seen, "no golden case for {prefix}");
}
