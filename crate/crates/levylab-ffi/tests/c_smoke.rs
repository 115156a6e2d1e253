//! Compiles and runs tests/smoke.c against the generated header and the
//! static library, proving the ABI from the C side. Skips when no C
//! compiler or no staticlib is available (e.g. custom target layouts).

use std::path::PathBuf;
use std::process::Command;

#[test]
fn c_consumer_builds_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    let source = manifest.join("tests").join("smoke.c");

    // The default layout puts the staticlib two levels up from the crate.
    let profile_dir = manifest
        .parent()
        .and_then(|p| p.parent())
        .map(|root| root.join("target").join(if cfg!(debug_assertions) { "debug" } else { "release" }));
    let Some(staticlib) = profile_dir
        .map(|d| d.join("liblevylab_ffi.a"))
        .filter(|p| p.exists())
    else {
        eprintln!("skipping: liblevylab_ffi.a not found in the default target layout");
        return;
    };
    let Ok(cc) = which_cc() else {
        eprintln!("skipping: no C compiler on PATH");
        return;
    };

    let out_dir = std::env::temp_dir().join(format!("levylab-c-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let binary = out_dir.join("smoke");

    let compile = Command::new(cc)
        .arg(&source)
        .arg(&staticlib)
        .arg(format!("-I{}", include.display()))
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&binary)
        .output()
        .expect("compiler runs");
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&binary).output().expect("smoke binary runs");
    assert!(
        run.status.success(),
        "smoke binary failed: {}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout), "c smoke ok\n");
}

fn which_cc() -> Result<&'static str, ()> {
    for candidate in ["cc", "gcc", "clang"] {
        if Command::new(candidate)
            .arg("--version")
            .output()
            .is_ok_and(|o| o.status.success())
        {
            return Ok(candidate);
        }
    }
    Err(())
}
