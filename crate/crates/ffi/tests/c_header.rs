//! Compiles a small C program against the generated header and the static
//! library. Skipped when no C compiler or archive is around.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "ffgeom.h"

int main(void) {
    FfgeomLattice *lat = NULL;
    if (ffgeom_lattice_parse("q 5\nd 2\nrow x 1\nrow 0 1/x\n", &lat) != FFGEOM_STATUS_OK) return 1;
    int64_t mins[2];
    if (ffgeom_lattice_minima(lat, mins, 2) != FFGEOM_STATUS_OK) return 2;
    ffgeom_lattice_free(lat);
    FfgeomAbs mu;
    if (ffgeom_mu_exact(3, "1/x+1/x^2+1/x^4", "1/x+1/x^2+1/x^3+1/x^4+1/x^5+1/x^6+1/x^7+1/x^8+1/x^9+1/x^10", &mu, NULL)
        != FFGEOM_STATUS_OK) return 3;
    if (ffgeom_lattice_parse("q 5\n", &lat) != FFGEOM_STATUS_PARSE) return 4;
    if (ffgeom_last_error() == NULL) return 5;
    printf("%lld %lld %d %lld\n", (long long)mins[0], (long long)mins[1], (int)mu.is_zero, (long long)mu.exponent);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap();
    let archive = profile_dir.join("libffgeom_ffi.a");
    if !archive.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no archive at {} or no cc", archive.display());
        return;
    }
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("smoke.c");
    let bin = dir.join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "0 0 0 -3\n");
}
