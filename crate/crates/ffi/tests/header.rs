use std::path::Path;
use std::process::Command;

fn header() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/maxlab.h")).expect("generated header")
}

#[test]
fn header_declares_every_export() {
    let h = header();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.trim().strip_prefix("pub unsafe extern \"C\" fn ").or_else(|| l.trim().strip_prefix("pub extern \"C\" fn ")))
        .filter_map(|l| l.split('(').next())
        .collect();
    assert!(exports.len() >= 20, "found {} exports", exports.len());
    for name in exports {
        assert!(h.contains(&format!("{name}(")), "header lacks {name}");
    }
    for ty in ["MaxlabStatus", "MaxlabSymmetry", "MaxlabFit", "MaxlabGrid", "MaxlabWaveSim", "MaxlabPriceSim"] {
        assert!(h.contains(ty), "header lacks {ty}");
    }
    assert!(h.contains("MAXLAB_STATUS_OK = 0"));
}

#[test]
fn header_compiles_as_c() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let probe = std::env::temp_dir().join(format!("maxlab_header_{}.c", std::process::id()));
    std::fs::write(&probe, "#include \"maxlab.h\"\nint main(void) { MaxlabFit f = {0}; (void)f; return MAXLAB_STATUS_OK; }\n").unwrap();
    let status = Command::new(&cc).arg("-fsyntax-only").arg("-Wall").arg("-Werror").arg("-I").arg(&dir).arg(&probe).status();
    std::fs::remove_file(&probe).ok();
    match status {
        Ok(s) => assert!(s.success(), "{cc} rejected maxlab.h"),
        Err(_) => eprintln!("no C compiler ({cc}); syntax check skipped"),
    }
}
