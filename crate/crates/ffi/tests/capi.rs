use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use tamari_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = tamari_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    tamari_string_free(p);
    s
}

#[test]
fn cubillage_to_triangulation() {
    unsafe {
        let mut q = ptr::null_mut();
        assert_eq!(tamari_cubillage_from_inversion_set(4, 1, cstr("123").as_ptr(), &mut q), TamariStatus::Ok);
        let (mut n, mut dim, mut len) = (0, 0, 0);
        assert_eq!(tamari_cubillage_shape(q, &mut n, &mut dim, &mut len), TamariStatus::Ok);
        assert_eq!((n, dim, len), (4, 2, 11));

        let mut t = ptr::null_mut();
        assert_eq!(tamari_g(q, &mut t), TamariStatus::Ok);
        let mut js = ptr::null_mut();
        assert_eq!(tamari_triangulation_to_json(t, &mut js), TamariStatus::Ok);
        assert_eq!(take_string(js), "{\"delta\":1,\"n\":4,\"simplices\":[[1,3],[3,4]]}\n");

        let mut valid = false;
        assert_eq!(tamari_triangulation_validate(t, &mut valid), TamariStatus::Ok);
        assert!(valid);

        let mut tb = ptr::null_mut();
        assert_eq!(tamari_g_bar(q, &mut tb), TamariStatus::Ok);
        tamari_triangulation_free(tb);

        let mut js = ptr::null_mut();
        assert_eq!(tamari_cubillage_to_json(q, &mut js), TamariStatus::Ok);
        let text = take_string(js);
        let mut q2 = ptr::null_mut();
        assert_eq!(tamari_cubillage_from_json(cstr(&text).as_ptr(), &mut q2), TamariStatus::Ok);
        let mut t2 = ptr::null_mut();
        assert_eq!(tamari_g(q2, &mut t2), TamariStatus::Ok);
        let mut eq = false;
        assert_eq!(tamari_triangulation_equal(t, t2, &mut eq), TamariStatus::Ok);
        assert!(eq);

        tamari_triangulation_free(t2);
        tamari_cubillage_free(q2);
        tamari_triangulation_free(t);
        tamari_cubillage_free(q);
    }
}

#[test]
fn preimages_round_trip() {
    unsafe {
        for (n, d, lits) in [(6, 2, "123 135 156 345"), (5, 3, "1234 1245 2345")] {
            let mut t = ptr::null_mut();
            assert_eq!(tamari_triangulation_parse(n, d, cstr(lits).as_ptr(), &mut t), TamariStatus::Ok, "{}", last_error());
            let mut q = ptr::null_mut();
            assert_eq!(tamari_preimage(t, &mut q), TamariStatus::Ok, "{}", last_error());
            let mut back = ptr::null_mut();
            assert_eq!(tamari_g(q, &mut back), TamariStatus::Ok);
            let mut eq = false;
            tamari_triangulation_equal(t, back, &mut eq);
            assert!(eq, "{lits}");
            tamari_triangulation_free(back);
            tamari_cubillage_free(q);
            tamari_triangulation_free(t);
        }
    }
}

#[test]
fn enumeration_and_verify() {
    unsafe {
        let mut e = ptr::null_mut();
        assert_eq!(tamari_enumerate_hst(6, 2, 0, &mut e), TamariStatus::Ok);
        let (mut k, mut c) = (0, 0);
        tamari_enumeration_size(e, &mut k, &mut c);
        assert_eq!(k, 14);
        assert_eq!(c, 21);
        let mut js = ptr::null_mut();
        assert_eq!(tamari_enumeration_to_json(e, &mut js), TamariStatus::Ok);
        assert!(take_string(js).starts_with("{\"delta\":2,\"elements\":"));
        tamari_enumeration_free(e);

        let mut e = ptr::null_mut();
        assert_eq!(tamari_enumerate_bruhat(4, 1, 0, &mut e), TamariStatus::Ok);
        tamari_enumeration_size(e, &mut k, ptr::null_mut());
        assert_eq!(k, 8);
        tamari_enumeration_free(e);

        let mut e = ptr::null_mut();
        assert_eq!(tamari_enumerate_bruhat(6, 1, 100, &mut e), TamariStatus::LimitExceeded);
        assert!(e.is_null());
        assert!(last_error().contains("100"));

        let mut pass = false;
        assert_eq!(tamari_verify(6, 2, 0, &mut pass), TamariStatus::Ok);
        assert!(pass);
    }
}

#[test]
fn errors_set_the_message() {
    unsafe {
        tamari_clear_last_error();
        assert!(tamari_last_error_message().is_null());

        let mut q = ptr::null_mut();
        assert_eq!(tamari_cubillage_from_json(ptr::null(), &mut q), TamariStatus::NullOrInvalidArgument);
        assert!(last_error().contains("json"));

        assert_eq!(tamari_cubillage_from_json(cstr("{not json").as_ptr(), &mut q), TamariStatus::InvalidInput);
        let bad = cstr("{\"n\":4,\"dim\":2,\"spectrum\":[[1]]}");
        assert_eq!(tamari_cubillage_from_json(bad.as_ptr(), &mut q), TamariStatus::InvalidInput);
        assert!(q.is_null());

        let mut t = ptr::null_mut();
        assert_eq!(tamari_triangulation_parse(6, 2, cstr("12 135").as_ptr(), &mut t), TamariStatus::InvalidInput);
        assert_eq!(tamari_triangulation_parse(6, 2, cstr("123 135").as_ptr(), &mut t), TamariStatus::Ok);
        let mut valid = true;
        tamari_triangulation_validate(t, &mut valid);
        assert!(!valid);
        tamari_triangulation_free(t);
        assert_eq!(tamari_g(ptr::null(), &mut t), TamariStatus::NullOrInvalidArgument);
        assert_eq!(tamari_cubillage_from_inversion_set(4, 1, cstr("123").as_ptr(), ptr::null_mut()), TamariStatus::NullOrInvalidArgument);

        let mut t = ptr::null_mut();
        tamari_triangulation_parse(6, 2, cstr("123 135 156 345").as_ptr(), &mut t);
        let mut q = ptr::null_mut();
        tamari_preimage(t, &mut q);
        assert_eq!(tamari_triangulation_validate(t, &mut valid), TamariStatus::Ok);
        assert!(valid);
        tamari_cubillage_free(q);
        tamari_triangulation_free(t);

        tamari_cubillage_free(ptr::null_mut());
        tamari_triangulation_free(ptr::null_mut());
        tamari_enumeration_free(ptr::null_mut());
        tamari_string_free(ptr::null_mut());

        let v = CStr::from_ptr(tamari_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn header_is_valid_c() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = root.join("include/tamari.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "typedef struct TamariCubillage TamariCubillage;",
        "TAMARI_STATUS_OK = 0",
        "tamari_last_error_message(void)",
        "tamari_enumeration_free(TamariEnumeration *e)",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        return;
    };
    if !cc.status.success() {
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"tamari.h\"\nint main(void) { TamariCubillage *q = 0; TamariStatus s = tamari_cubillage_from_inversion_set(4, 1, \"123\", &q); tamari_cubillage_free(q); return s == TAMARI_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let r = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(root.join("include"))
        .arg(&src)
        .output()
        .unwrap();
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
}
