//! Shared numerical primitives: quadrature rules, the special functions
//! needed by radial Fourier transforms, monotone interpolation, and small
//! least-squares fits.

pub mod fit;
pub mod interp;
pub mod quadrature;
pub mod special;
