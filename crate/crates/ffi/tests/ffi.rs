use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use chrestenson_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ch_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn copy_function(f: *const ChStepFunction) -> (Vec<f64>, Vec<f64>) {
    let len = unsafe { ch_step_function_len(f) };
    let (mut re, mut im) = (vec![0.0; len], vec![0.0; len]);
    let st = unsafe { ch_step_function_copy_values(f, re.as_mut_ptr(), im.as_mut_ptr(), len) };
    assert_eq!(st, ChStatus::Ok);
    (re, im)
}

#[test]
fn walsh_samples_and_exponents() {
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { ch_step_function_walsh(3, 5, 2, 0, &mut f) },
        ChStatus::Ok
    );
    assert_eq!(unsafe { ch_step_function_resolution(f) }, 2);
    let (re, im) = copy_function(f);
    assert_eq!(re.len(), 9);
    for m in 0..9u64 {
        let mut e = 0;
        assert_eq!(
            unsafe { ch_walsh_exponent(3, 5, 2, m, &mut e) },
            ChStatus::Ok
        );
        // 5 = 2 + 1*3, so the exponent is 2 x_1 + x_2 with x_1 = m / 3, x_2 = m % 3.
        assert_eq!(u64::from(e), (2 * (m / 3) + m % 3) % 3);
        let angle = 2.0 * std::f64::consts::PI * f64::from(e) / 3.0;
        assert!((re[m as usize] - angle.cos()).abs() < 1e-15);
        assert!((im[m as usize] - angle.sin()).abs() < 1e-15);
    }
    unsafe { ch_step_function_free(f) };
}

#[test]
fn transform_round_trip() {
    let re = [0.875, -0.875, 0.125, -0.125];
    let im = [0.0; 4];
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { ch_step_function_from_values(2, re.as_ptr(), im.as_ptr(), 4, &mut f) },
        ChStatus::Ok
    );
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ch_forward(f, &mut s) }, ChStatus::Ok);
    assert_eq!(unsafe { ch_spectrum_len(s) }, 4);
    let (mut cr, mut ci) = ([0.0; 4], [0.0; 4]);
    assert_eq!(
        unsafe { ch_spectrum_copy_values(s, cr.as_mut_ptr(), ci.as_mut_ptr(), 4) },
        ChStatus::Ok
    );
    assert_eq!(cr, [0.0, 0.0, 0.5, 0.375]);
    assert_eq!(ci, [0.0; 4]);

    let mut back = ptr::null_mut();
    assert_eq!(unsafe { ch_inverse(s, 2, 0, &mut back) }, ChStatus::Ok);
    assert_eq!(copy_function(back).0, re);
    unsafe {
        ch_step_function_free(back);
        ch_spectrum_free(s);
        ch_step_function_free(f);
    }
}

#[test]
fn spectrum_from_values_and_coarse_inverse() {
    let re = [1.0, 0.0, 0.0, 0.0, 0.0];
    let im = [0.0; 5];
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { ch_spectrum_from_values(2, re.as_ptr(), im.as_ptr(), 5, &mut s) },
        ChStatus::Ok
    );
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { ch_inverse(s, 2, 0, &mut f) },
        ChStatus::InvalidArgument
    );
    assert!(f.is_null());
    assert!(last_error().contains("too coarse"));
    assert_eq!(unsafe { ch_inverse(s, 3, 0, &mut f) }, ChStatus::Ok);
    assert_eq!(copy_function(f).0, vec![1.0; 8]);
    unsafe {
        ch_step_function_free(f);
        ch_spectrum_free(s);
    }
}

#[test]
fn scalar_results() {
    let (mut value, mut err) = (0.0, 0.0);
    assert_eq!(
        unsafe { ch_lebesgue_constant(2, 5, 0, &mut value, &mut err) },
        ChStatus::Ok
    );
    assert_eq!(value, 1.75);
    assert!(err > 0.0 && err < 1e-12);
    assert_eq!(
        unsafe { ch_lebesgue_constant(2, 0, 0, &mut value, ptr::null_mut()) },
        ChStatus::InvalidArgument
    );

    let mut pass = false;
    assert_eq!(unsafe { ch_verify_lemma(3, 6, 0, &mut pass) }, ChStatus::Ok);
    assert!(pass);
    assert_eq!(
        unsafe { ch_verify_lemma(2, 10, 1000, &mut pass) },
        ChStatus::Infeasible
    );

    let mut g = std::mem::MaybeUninit::<ChGapSummary>::uninit();
    assert_eq!(
        unsafe { ch_block_gap(2, 4, 0, g.as_mut_ptr()) },
        ChStatus::Ok
    );
    let g = unsafe { g.assume_init() };
    assert_eq!((g.block_start, g.m_k, g.resolution), (512, 682, 11));
    assert!(g.gap >= 0.125 && g.pass);
    assert_eq!(g.final_bound, 0.125);
    assert_eq!(g.j2_bound_log2, -511);

    let mut g = std::mem::MaybeUninit::<ChGapSummary>::uninit();
    assert_eq!(
        unsafe { ch_block_gap(2, 2, 0, g.as_mut_ptr()) },
        ChStatus::Ok
    );
    let g = unsafe { g.assume_init() };
    assert_eq!(g.gap, 0.5);
    assert!(g.final_bound.is_nan());
}

#[test]
fn error_codes() {
    assert!(ch_order_is_valid(16));
    assert!(!ch_order_is_valid(17));

    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { ch_step_function_walsh(2, 1, 30, 1 << 20, &mut f) },
        ChStatus::MemoryGuard
    );
    assert_eq!(
        unsafe { ch_step_function_walsh(2, 1, 70, 0, &mut f) },
        ChStatus::Overflow
    );
    assert_eq!(
        unsafe { ch_step_function_walsh(2, 1, 1, 0, ptr::null_mut()) },
        ChStatus::NullPointer
    );
    assert_eq!(
        unsafe { ch_step_function_from_values(2, ptr::null(), ptr::null(), 3, &mut f) },
        ChStatus::NullPointer
    );
    let re = [1.0; 3];
    assert_eq!(
        unsafe { ch_step_function_from_values(2, re.as_ptr(), re.as_ptr(), 3, &mut f) },
        ChStatus::InvalidArgument
    );
    assert!(last_error().contains("not a power"));

    assert_eq!(
        unsafe { ch_step_function_walsh(2, 1, 2, 0, &mut f) },
        ChStatus::Ok
    );
    assert!(last_error().is_empty());
    let mut small = [0.0; 2];
    let st = unsafe { ch_step_function_copy_values(f, small.as_mut_ptr(), small.as_mut_ptr(), 2) };
    assert_eq!(st, ChStatus::BufferTooSmall);
    assert_eq!(unsafe { ch_step_function_len(ptr::null()) }, 0);
    assert_eq!(
        unsafe {
            ch_step_function_copy_values(ptr::null(), small.as_mut_ptr(), small.as_mut_ptr(), 2)
        },
        ChStatus::NullPointer
    );
    unsafe {
        ch_step_function_free(f);
        ch_step_function_free(ptr::null_mut());
        ch_spectrum_free(ptr::null_mut());
    }
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/chrestenson.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    let src =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(text.contains(&format!("{name}(")), "header lacks {name}");
    }
    for ty in [
        "typedef struct ChStepFunction ChStepFunction;",
        "typedef struct ChSpectrum ChSpectrum;",
        "CH_STATUS_OK = 0",
    ] {
        assert!(text.contains(ty), "header lacks {ty}");
    }
}

const C_SMOKE: &str = r#"
#include <math.h>
#include <stdio.h>
#include "chrestenson.h"

int main(void) {
    double re[4] = {0.875, -0.875, 0.125, -0.125};
    double im[4] = {0.0, 0.0, 0.0, 0.0};
    ChStepFunction *f = NULL;
    ChSpectrum *s = NULL;
    if (ch_step_function_from_values(2, re, im, 4, &f) != CH_STATUS_OK) return 10;
    if (ch_forward(f, &s) != CH_STATUS_OK) return 11;
    double cr[4], ci[4];
    if (ch_spectrum_copy_values(s, cr, ci, 4) != CH_STATUS_OK) return 12;
    if (cr[2] != 0.5 || cr[3] != 0.375) return 13;
    ch_spectrum_free(s);
    ch_step_function_free(f);

    double lebesgue = 0.0;
    if (ch_lebesgue_constant(2, 5, 0, &lebesgue, NULL) != CH_STATUS_OK || lebesgue != 1.75) return 14;

    ChGapSummary gap;
    if (ch_block_gap(2, 4, 0, &gap) != CH_STATUS_OK || !gap.pass || gap.gap < 0.125) return 15;

    if (ch_order_is_valid(1)) return 16;
    uint32_t e = 0;
    if (ch_walsh_exponent(1, 0, 1, 0, &e) != CH_STATUS_INVALID_ARGUMENT) return 17;
    printf("%s|%s\n", ch_version(), ch_last_error_message());
    return 0;
}
"#;

#[test]
fn c_program_links_against_staticlib() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler on PATH");
        return;
    }
    let deps = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = [
        deps.join("libchrestenson_ffi.a"),
        deps.parent().unwrap().join("libchrestenson_ffi.a"),
    ]
    .into_iter()
    .find(|p| p.exists())
    .expect("staticlib built next to the test binary");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(&src, C_SMOKE).unwrap();
    let out = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-I"])
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let run = Command::new(&exe).output().unwrap();
    assert_eq!(
        run.status.code(),
        Some(0),
        "smoke exited {:?}",
        run.status.code()
    );
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.starts_with(env!("CARGO_PKG_VERSION")));
    assert!(stdout.contains("order must satisfy"));
}
