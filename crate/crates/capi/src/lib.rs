//! C ABI for the framelet inpainting toolkit.
//!
//! Objects cross the boundary as opaque handles (`TpctfImage`,
//! `TpctfMask`); every fallible call returns a `tpctf_status` code and
//! leaves a human-readable message retrievable with `tpctf_last_error()`.
//! The matching header is maintained by hand at `include/tpctf.h`.

use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, c_uint, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use tpctf::harness::{
    add_gaussian_noise, gen_random_mask, load_mask_pgm, load_pgm, psnr, save_mask_pgm, save_pgm,
    Image,
};
use tpctf::inpaint::{inpaint, InpaintConfig, Mask};
use tpctf::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TpctfStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    IoError = 3,
    ParseError = 4,
    StructureError = 5,
    Internal = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> TpctfStatus {
    match err {
        Error::Config(_) => TpctfStatus::InvalidArgument,
        Error::Structure(_) => TpctfStatus::StructureError,
        Error::Parse { .. } => TpctfStatus::ParseError,
        Error::Io(_) => TpctfStatus::IoError,
    }
}

fn fail(err: &Error) -> TpctfStatus {
    set_error(&err.to_string());
    status_of(err)
}

fn guard(body: impl FnOnce() -> TpctfStatus) -> TpctfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            TpctfStatus::Internal
        }
    }
}

unsafe fn path_from(ptr: *const c_char) -> Result<PathBuf, TpctfStatus> {
    if ptr.is_null() {
        set_error("null path");
        return Err(TpctfStatus::NullArgument);
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(PathBuf::from(s)),
        Err(_) => {
            set_error("path is not valid UTF-8");
            Err(TpctfStatus::InvalidArgument)
        }
    }
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tpctf_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

// ---------------------------------------------------------------- images

/// Opaque greyscale image handle.
pub struct TpctfImage(Image);

/// Opaque mask handle.
pub struct TpctfMask(Mask);

/// # Safety
/// `path` must be a valid C string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpctf_image_load_pgm(
    path: *const c_char,
    out: *mut *mut TpctfImage,
) -> TpctfStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output handle");
            return TpctfStatus::NullArgument;
        }
        let path = match path_from(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match load_pgm(path) {
            Ok(image) => {
                *out = Box::into_raw(Box::new(TpctfImage(image)));
                TpctfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `image` must be a live handle; `path` a valid C string.
#[no_mangle]
pub unsafe extern "C" fn tpctf_image_save_pgm(
    image: *const TpctfImage,
    path: *const c_char,
) -> TpctfStatus {
    guard(|| {
        if image.is_null() {
            set_error("null image");
            return TpctfStatus::NullArgument;
        }
        let path = match path_from(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match save_pgm(&(*image).0, path) {
            Ok(()) => TpctfStatus::Ok,
            Err(e) => fail(&e),
        }
    })
}

/// Build an image from a row-major `width * height` buffer of doubles.
///
/// # Safety
/// `pixels` must point to at least `width * height` doubles.
#[no_mangle]
pub unsafe extern "C" fn tpctf_image_from_pixels(
    width: c_uint,
    height: c_uint,
    pixels: *const c_double,
    out: *mut *mut TpctfImage,
) -> TpctfStatus {
    guard(|| {
        if pixels.is_null() || out.is_null() {
            set_error("null buffer or output handle");
            return TpctfStatus::NullArgument;
        }
        if width == 0 || height == 0 {
            set_error("zero image dimension");
            return TpctfStatus::InvalidArgument;
        }
        let (w, h) = (width as usize, height as usize);
        let data = std::slice::from_raw_parts(pixels, w * h);
        let grid = ndarray::Array2::from_shape_fn((h, w), |(i, j)| data[i * w + j]);
        match Image::new(grid) {
            Ok(image) => {
                *out = Box::into_raw(Box::new(TpctfImage(image)));
                TpctfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `image` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tpctf_image_width(image: *const TpctfImage) -> c_uint {
    if image.is_null() {
        return 0;
    }
    (*image).0.width() as c_uint
}

/// # Safety
/// `image` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tpctf_image_height(image: *const TpctfImage) -> c_uint {
    if image.is_null() {
        return 0;
    }
    (*image).0.height() as c_uint
}

/// Copy pixels row-major into `out`; `len` must equal `width * height`.
///
/// # Safety
/// `out` must point to at least `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn tpctf_image_copy_pixels(
    image: *const TpctfImage,
    out: *mut c_double,
    len: usize,
) -> TpctfStatus {
    guard(|| {
        if image.is_null() || out.is_null() {
            set_error("null image or buffer");
            return TpctfStatus::NullArgument;
        }
        let pixels = &(*image).0.pixels;
        if len != pixels.len() {
            set_error("buffer length does not match image size");
            return TpctfStatus::InvalidArgument;
        }
        let dst = std::slice::from_raw_parts_mut(out, len);
        for (d, s) in dst.iter_mut().zip(pixels.iter()) {
            *d = *s;
        }
        TpctfStatus::Ok
    })
}

/// # Safety
/// `image` must be a handle from this library (or null); it is consumed.
#[no_mangle]
pub unsafe extern "C" fn tpctf_image_free(image: *mut TpctfImage) {
    if !image.is_null() {
        drop(Box::from_raw(image));
    }
}

// ----------------------------------------------------------------- masks

/// # Safety
/// `path` must be a valid C string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpctf_mask_load_pgm(
    path: *const c_char,
    out: *mut *mut TpctfMask,
) -> TpctfStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output handle");
            return TpctfStatus::NullArgument;
        }
        let path = match path_from(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match load_mask_pgm(path) {
            Ok(mask) => {
                *out = Box::into_raw(Box::new(TpctfMask(mask)));
                TpctfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `mask` must be a live handle; `path` a valid C string.
#[no_mangle]
pub unsafe extern "C" fn tpctf_mask_save_pgm(
    mask: *const TpctfMask,
    path: *const c_char,
) -> TpctfStatus {
    guard(|| {
        if mask.is_null() {
            set_error("null mask");
            return TpctfStatus::NullArgument;
        }
        let path = match path_from(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match save_mask_pgm(&(*mask).0, path) {
            Ok(()) => TpctfStatus::Ok,
            Err(e) => fail(&e),
        }
    })
}

/// Random missing-pixel mask; each pixel is missing with probability
/// `rate` under the pinned counter-based generator.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpctf_mask_random(
    width: c_uint,
    height: c_uint,
    rate: c_double,
    seed: u64,
    out: *mut *mut TpctfMask,
) -> TpctfStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output handle");
            return TpctfStatus::NullArgument;
        }
        match gen_random_mask(width as usize, height as usize, rate, seed) {
            Ok(mask) => {
                *out = Box::into_raw(Box::new(TpctfMask(mask)));
                TpctfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `mask` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tpctf_mask_missing_ratio(mask: *const TpctfMask) -> c_double {
    if mask.is_null() {
        return f64::NAN;
    }
    (*mask).0.missing_ratio()
}

/// # Safety
/// `mask` must be a handle from this library (or null); it is consumed.
#[no_mangle]
pub unsafe extern "C" fn tpctf_mask_free(mask: *mut TpctfMask) {
    if !mask.is_null() {
        drop(Box::from_raw(mask));
    }
}

// ------------------------------------------------------------ operations

/// Add zero-mean Gaussian noise of deviation `sigma` (reproducible from
/// `seed`), returning a new image handle.
///
/// # Safety
/// `image` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpctf_add_gaussian_noise(
    image: *const TpctfImage,
    sigma: c_double,
    seed: u64,
    out: *mut *mut TpctfImage,
) -> TpctfStatus {
    guard(|| {
        if image.is_null() || out.is_null() {
            set_error("null image or output handle");
            return TpctfStatus::NullArgument;
        }
        match add_gaussian_noise(&(*image).0, sigma, seed) {
            Ok(noisy) => {
                *out = Box::into_raw(Box::new(TpctfImage(noisy)));
                TpctfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Peak signal-to-noise ratio in dB; identical images report +infinity.
///
/// # Safety
/// All handles must be live; `out_db` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpctf_psnr(
    reference: *const TpctfImage,
    test: *const TpctfImage,
    out_db: *mut c_double,
) -> TpctfStatus {
    guard(|| {
        if reference.is_null() || test.is_null() || out_db.is_null() {
            set_error("null argument");
            return TpctfStatus::NullArgument;
        }
        match psnr(&(*reference).0, &(*test).0) {
            Ok(v) => {
                *out_db = v;
                TpctfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Inpaint `observed` under `mask`. `levels == 0` picks the default depth;
/// `paste_observed != 0` copies observed pixels into the result verbatim.
/// `out_iterations` may be null.
///
/// # Safety
/// Handles must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpctf_inpaint(
    observed: *const TpctfImage,
    mask: *const TpctfMask,
    sigma: c_double,
    levels: c_uint,
    paste_observed: c_int,
    out: *mut *mut TpctfImage,
    out_iterations: *mut c_uint,
) -> TpctfStatus {
    guard(|| {
        if observed.is_null() || mask.is_null() || out.is_null() {
            set_error("null argument");
            return TpctfStatus::NullArgument;
        }
        let config = InpaintConfig {
            sigma,
            levels: if levels == 0 { None } else { Some(levels) },
            paste_observed: paste_observed != 0,
            ..InpaintConfig::default()
        };
        match inpaint(&(*observed).0.pixels, &(*mask).0, &config) {
            Ok(outcome) => {
                if !out_iterations.is_null() {
                    *out_iterations = outcome.iterations as c_uint;
                }
                match Image::new(outcome.image) {
                    Ok(image) => {
                        *out = Box::into_raw(Box::new(TpctfImage(image)));
                        TpctfStatus::Ok
                    }
                    Err(e) => fail(&e),
                }
            }
            Err(e) => fail(&e),
        }
    })
}

/// Verify the directional bank's defining identities on an `n x n` grid;
/// writes the maximum deviation.
///
/// # Safety
/// `out_max_deviation` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpctf_verify_bank(
    n: c_uint,
    out_max_deviation: *mut c_double,
) -> TpctfStatus {
    guard(|| {
        if out_max_deviation.is_null() {
            set_error("null output");
            return TpctfStatus::NullArgument;
        }
        let bank = tpctf::filterbank::tpctf6_bank();
        match tpctf::filterbank::sample_bank(&bank, n as usize, 0) {
            Ok(sampled) => {
                let report = tpctf::filterbank::verify_bank_identities(&sampled);
                *out_max_deviation = report.max_deviation();
                TpctfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}
