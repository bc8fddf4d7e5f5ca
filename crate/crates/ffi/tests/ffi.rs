use posetcohom_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn open(name: &str) -> (PcStatus, *mut PcSpecies) {
    let c = CString::new(name).unwrap();
    let mut sp = ptr::null_mut();
    let st = unsafe { pc_species_open(c.as_ptr(), &mut sp) };
    (st, sp)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(pc_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn mobius_and_zeta() {
    let (st, sp) = open("right:perm");
    assert_eq!(st, PcStatus::Ok);
    let mut mu = 0i64;
    assert_eq!(unsafe { pc_mobius(sp, 5, PcVariant::Max, &mut mu) }, PcStatus::Ok);
    assert_eq!(mu, 256);
    let mut z = 0i64;
    assert_eq!(unsafe { pc_zeta(sp, 5, PcVariant::Max, -1, &mut z) }, PcStatus::Ok);
    assert_eq!(z, mu);
    let mut size = 0usize;
    assert_eq!(unsafe { pc_level_size(sp, 3, &mut size) }, PcStatus::Ok);
    assert_eq!(size, 10);
    unsafe { pc_species_free(sp) };
}

#[test]
fn cohomology_handle() {
    let (_, sp) = open("right:as");
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { pc_cohomology(sp, 5, PcVariant::Max, &mut h) }, PcStatus::Ok);
    let (mut deg, mut r3, mut r4, mut t) = (0usize, 0usize, 0usize, 9usize);
    unsafe {
        pc_cohomology_degrees(h, &mut deg);
        pc_cohomology_rank(h, 3, &mut r3);
        pc_cohomology_rank(h, 4, &mut r4);
        pc_cohomology_torsion_len(h, 4, &mut t);
    }
    assert_eq!((deg, r3, r4, t), (5, 43, 24, 0));
    let mut js = ptr::null_mut();
    assert_eq!(unsafe { pc_cohomology_json(h, &mut js) }, PcStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(js) }.to_str().unwrap()).unwrap();
    assert_eq!(v["betti"], serde_json::json!([0, 0, 0, 43, 24]));
    unsafe {
        pc_string_free(js);
        pc_cohomology_free(h);
        pc_species_free(sp);
    }
}

#[test]
fn errors() {
    let (st, sp) = open("nonsense");
    assert_eq!(st, PcStatus::UnknownName);
    assert!(sp.is_null());
    assert!(last_error().contains("nonsense"));

    let (st, _) = open("left:perm");
    assert_eq!(st, PcStatus::InvalidArgument);

    assert_eq!(unsafe { pc_species_open(ptr::null(), &mut ptr::null_mut()) }, PcStatus::NullPointer);
    let mut mu = 0;
    assert_eq!(unsafe { pc_mobius(ptr::null(), 3, PcVariant::Full, &mut mu) }, PcStatus::NullPointer);

    let (_, sp) = open("left:as");
    assert_eq!(unsafe { pc_mobius(sp, 6, PcVariant::Min, &mut mu) }, PcStatus::Budget);
    assert_eq!(unsafe { pc_mobius(sp, 0, PcVariant::Min, &mut mu) }, PcStatus::InvalidArgument);
    assert_eq!(unsafe { pc_species_set_unsafe_large(sp, 1) }, PcStatus::Ok);
    assert_eq!(unsafe { pc_mobius(sp, 6, PcVariant::Min, &mut mu) }, PcStatus::Ok);
    assert_eq!(mu, -1);
    assert!(last_error().is_empty());
    unsafe { pc_species_free(sp) };
    unsafe { pc_species_free(ptr::null_mut()) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(pc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

/// Compiles and runs `tests/smoke.c` against the static library and header.
#[test]
fn c_program_links_against_header() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = root.join("include/posetcohom.h");
    assert!(header.exists(), "header was not generated");
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping the C smoke test");
        return;
    };
    // the test binary sits in target/<profile>/deps next to the library
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let lib = [deps.join("libposetcohom_ffi.a"), deps.parent().unwrap().join("libposetcohom_ffi.a")]
        .into_iter()
        .find(|p| p.exists())
        .expect("static library was not built");
    let out = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("ffi_smoke");
    let status = std::process::Command::new(cc)
        .arg(root.join("tests/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = std::process::Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n");
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}
