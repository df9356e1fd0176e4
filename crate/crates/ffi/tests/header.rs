//! Compiles and runs a small C program against the generated header and
//! the shared library.

use std::path::{Path, PathBuf};
use std::process::Command;

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "cantor_toolkit.h"

int main(void) {
    CtCover *cover = NULL;
    if (ct_cover_new("1/2", 2, 4, &cover) != CT_STATUS_OK) return 1;
    if (ct_cover_len(cover) != 8) return 2;
    double lo, hi;
    if (ct_cover_interval(cover, 0, &lo, &hi) != CT_STATUS_OK) return 3;
    printf("%.6f %.6f\n", lo, hi);
    ct_cover_free(cover);
    if (ct_cover_new("2", 2, 4, &cover) != CT_STATUS_DOMAIN) return 4;
    if (strlen(ct_last_error()) == 0) return 5;
    CtVerdict v;
    if (ct_membership("1/2", "1/3", 2, 64, &v) != CT_STATUS_OK || v != CT_VERDICT_MEMBER) return 6;
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_header() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include").join("cantor_toolkit.h");
    assert!(header.exists(), "header not generated");
    let lib_dir = target_dir();
    let so = lib_dir.join("libcantor_toolkit_ffi.so");
    if !cfg!(target_os = "linux") || Command::new("cc").arg("--version").output().is_err() || !so.exists() {
        eprintln!("skipping: needs Linux, a C compiler and {}", so.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lcantor_toolkit_ffi")
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0.333333 0.336197\n");
}
