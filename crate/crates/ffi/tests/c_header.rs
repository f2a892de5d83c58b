//! Compiles a small C program against the generated header and the static
//! library, then runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include "shor_ffi.h"
#include <stdio.h>

int main(void) {
    ShorCircuit *c = NULL;
    if (shor_order_finding_circuit(15, 7, 0, &c) != SHOR_STATUS_OK) return 1;
    if (shor_circuit_num_qubits(c) != 11) return 2;
    char *json = NULL;
    if (shor_circuit_to_json(c, &json) != SHOR_STATUS_OK) return 3;
    shor_string_free(json);
    shor_circuit_free(c);
    c = NULL;
    if (shor_order_finding_circuit(15, 5, 0, &c) != SHOR_STATUS_NOT_COPRIME || c != NULL) return 4;
    printf("%s\n", shor_last_error());
    ShorResources r;
    if (shor_resources(4, 0, &r) != SHOR_STATUS_OK || r.qubits != 11) return 5;
    ShorOrderResult o;
    if (shor_order_find(15, 7, 0, 3, &o) != SHOR_STATUS_OK || o.num_bits != 8) return 6;
    printf("m=%llu\n", (unsigned long long)o.measured);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps/
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler on PATH; skipping");
        return;
    }
    let lib = target_dir().join("libshor_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();

    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");

    let out = Command::new(&bin).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("gcd = 5"));
    assert!(stdout.contains("m="));
}
