//! Small linear least-squares fits via normal equations.

use nalgebra::{DMatrix, DVector};

/// Least-squares coefficients c minimising ‖Φc - y‖ where Φ_{ij} = basis_j(x_i).
///
/// Intended for a handful of basis functions (slope extrapolation, tail
/// fits); solved densely with column pivoting.
pub fn least_squares(xs: &[f64], ys: &[f64], basis: &[&dyn Fn(f64) -> f64]) -> Vec<f64> {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= basis.len(), "underdetermined fit");
    let m = xs.len();
    let p = basis.len();
    let phi = DMatrix::from_fn(m, p, |i, j| basis[j](xs[i]));
    let y = DVector::from_column_slice(ys);
    let sol = phi
        .clone()
        .svd(true, true)
        .solve(&y, 1e-14)
        .expect("svd solve");
    (0..p).map(|j| sol[j]).collect()
}

/// Fit y ≈ c0 + c1 u + c2 u² in the variable u = 1/x², returning (c0, c1, c2).
/// This is the large-coupling slope model E/α² = c0 + c1/α² + c2/α⁴.
pub fn inverse_square_poly_fit(alphas: &[f64], values: &[f64]) -> (f64, f64, f64) {
    let us: Vec<f64> = alphas.iter().map(|a| 1.0 / (a * a)).collect();
    let one = |_: f64| 1.0;
    let lin = |u: f64| u;
    let quad = |u: f64| u * u;
    let c = least_squares(&us, values, &[&one, &lin, &quad]);
    (c[0], c[1], c[2])
}
