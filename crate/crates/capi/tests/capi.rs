//! Exercise the C surface exactly as a foreign caller would: through raw
//! pointers, status codes, and the thread-local error message.

use std::ffi::{c_double, c_uint, CStr, CString};
use std::ptr;

use tpctf_capi::*;

fn c_path(p: &std::path::Path) -> CString {
    CString::new(p.to_str().unwrap()).unwrap()
}

#[test]
fn end_to_end_through_the_c_surface() {
    let dir = tempfile::tempdir().unwrap();
    unsafe {
        // build a 64x64 gradient through the buffer constructor
        let n = 64usize;
        let pixels: Vec<f64> = (0..n * n)
            .map(|p| 255.0 * ((p / n + p % n) as f64) / (2.0 * n as f64 - 2.0))
            .collect();
        let mut img: *mut TpctfImage = ptr::null_mut();
        assert_eq!(
            tpctf_image_from_pixels(n as c_uint, n as c_uint, pixels.as_ptr(), &mut img),
            TpctfStatus::Ok
        );
        assert_eq!(tpctf_image_width(img), 64);
        assert_eq!(tpctf_image_height(img), 64);

        let mut mask: *mut TpctfMask = ptr::null_mut();
        assert_eq!(
            tpctf_mask_random(64, 64, 0.4, 11, &mut mask),
            TpctfStatus::Ok
        );
        let ratio = tpctf_mask_missing_ratio(mask);
        assert!((0.3..0.5).contains(&ratio));

        let mut restored: *mut TpctfImage = ptr::null_mut();
        let mut iterations: c_uint = 0;
        assert_eq!(
            tpctf_inpaint(img, mask, 0.0, 0, 0, &mut restored, &mut iterations),
            TpctfStatus::Ok
        );
        assert!(iterations > 0);

        let mut db: c_double = 0.0;
        assert_eq!(tpctf_psnr(img, restored, &mut db), TpctfStatus::Ok);
        assert!(db > 30.0, "psnr {db}");

        // noise is reproducible and nontrivial
        let mut noisy: *mut TpctfImage = ptr::null_mut();
        assert_eq!(
            tpctf_add_gaussian_noise(img, 10.0, 3, &mut noisy),
            TpctfStatus::Ok
        );
        let mut noisy_db: c_double = 0.0;
        assert_eq!(tpctf_psnr(img, noisy, &mut noisy_db), TpctfStatus::Ok);
        assert!((noisy_db - 28.13).abs() < 1.0, "noisy psnr {noisy_db}");

        // file round trip
        let path = dir.path().join("restored.pgm");
        assert_eq!(
            tpctf_image_save_pgm(restored, c_path(&path).as_ptr()),
            TpctfStatus::Ok
        );
        let mut back: *mut TpctfImage = ptr::null_mut();
        assert_eq!(
            tpctf_image_load_pgm(c_path(&path).as_ptr(), &mut back),
            TpctfStatus::Ok
        );
        assert_eq!(tpctf_image_width(back), 64);

        let mut buf = vec![0.0_f64; 64 * 64];
        assert_eq!(
            tpctf_image_copy_pixels(back, buf.as_mut_ptr(), buf.len()),
            TpctfStatus::Ok
        );
        assert!(buf.iter().all(|v| (0.0..=255.0).contains(v)));
        assert_eq!(
            tpctf_image_copy_pixels(back, buf.as_mut_ptr(), 17),
            TpctfStatus::InvalidArgument
        );

        // mask file round trip
        let mpath = dir.path().join("mask.pgm");
        assert_eq!(
            tpctf_mask_save_pgm(mask, c_path(&mpath).as_ptr()),
            TpctfStatus::Ok
        );
        let mut mask2: *mut TpctfMask = ptr::null_mut();
        assert_eq!(
            tpctf_mask_load_pgm(c_path(&mpath).as_ptr(), &mut mask2),
            TpctfStatus::Ok
        );
        assert!((tpctf_mask_missing_ratio(mask2) - ratio).abs() < 1e-12);

        tpctf_image_free(img);
        tpctf_image_free(restored);
        tpctf_image_free(noisy);
        tpctf_image_free(back);
        tpctf_mask_free(mask);
        tpctf_mask_free(mask2);
    }
}

#[test]
fn error_paths_set_codes_and_messages() {
    unsafe {
        let mut img: *mut TpctfImage = ptr::null_mut();
        let missing = CString::new("/nonexistent/nope.pgm").unwrap();
        assert_eq!(
            tpctf_image_load_pgm(missing.as_ptr(), &mut img),
            TpctfStatus::IoError
        );
        let msg = CStr::from_ptr(tpctf_last_error()).to_str().unwrap();
        assert!(!msg.is_empty());

        assert_eq!(
            tpctf_image_load_pgm(ptr::null(), &mut img),
            TpctfStatus::NullArgument
        );

        let mut mask: *mut TpctfMask = ptr::null_mut();
        assert_eq!(
            tpctf_mask_random(8, 8, 1.5, 0, &mut mask),
            TpctfStatus::InvalidArgument
        );

        // malformed file -> parse error with the offending detail
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.pgm");
        std::fs::write(&bad, b"P5\n4 4\n77\n").unwrap();
        assert_eq!(
            tpctf_image_load_pgm(c_path(&bad).as_ptr(), &mut img),
            TpctfStatus::ParseError
        );
        let msg = CStr::from_ptr(tpctf_last_error()).to_str().unwrap();
        assert!(msg.contains("maxval"), "{msg}");

        // structural error: psnr on mismatched shapes
        let a_pixels = [0.0; 16];
        let b_pixels = vec![0.0; 64];
        let mut a: *mut TpctfImage = ptr::null_mut();
        let mut b: *mut TpctfImage = ptr::null_mut();
        assert_eq!(
            tpctf_image_from_pixels(4, 4, a_pixels.as_ptr(), &mut a),
            TpctfStatus::Ok
        );
        assert_eq!(
            tpctf_image_from_pixels(8, 8, b_pixels.as_ptr(), &mut b),
            TpctfStatus::Ok
        );
        let mut db: c_double = 0.0;
        assert_eq!(tpctf_psnr(a, b, &mut db), TpctfStatus::StructureError);
        tpctf_image_free(a);
        tpctf_image_free(b);
    }
}

#[test]
fn verify_bank_through_c_surface() {
    unsafe {
        let mut dev: c_double = 1.0;
        assert_eq!(tpctf_verify_bank(64, &mut dev), TpctfStatus::Ok);
        assert!(dev <= 1e-12, "deviation {dev}");
        assert_eq!(tpctf_verify_bank(5, &mut dev), TpctfStatus::InvalidArgument);
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/tpctf.h");
    for symbol in [
        "tpctf_last_error",
        "tpctf_image_load_pgm",
        "tpctf_image_save_pgm",
        "tpctf_image_from_pixels",
        "tpctf_image_width",
        "tpctf_image_height",
        "tpctf_image_copy_pixels",
        "tpctf_image_free",
        "tpctf_mask_load_pgm",
        "tpctf_mask_save_pgm",
        "tpctf_mask_random",
        "tpctf_mask_missing_ratio",
        "tpctf_mask_free",
        "tpctf_add_gaussian_noise",
        "tpctf_psnr",
        "tpctf_inpaint",
        "tpctf_verify_bank",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
}
