#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0)` deliberately rejects NaN

//! Directional tensor-product complex tight framelet (TP-CTF) toolkit:
//! filter-bank construction, multilevel tight-frame transforms, iterative
//! thresholding inpainting, and numerical verification of the grouping
//! effect of the balanced convex-minimization model.

pub mod balanced;
pub mod error;
pub mod fft;
pub mod filterbank;
pub mod harness;
pub mod inpaint;
pub mod shrinkage;
pub mod transform;

pub use error::{Error, Result};
