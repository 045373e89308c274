//! Spectral analysis of two-dimensional Dirac operators with singular
//! shell interactions supported on unbounded curves with straight ends.

pub mod bands;
pub mod bsop;
pub mod certify;
pub mod curve;
pub mod dirac;
pub mod linalg;
pub mod quad;
pub mod roots;
pub mod schrodinger;
pub mod special;
