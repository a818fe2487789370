//! Jacobi coordinates for N equal-mass particles.
//!
//! The transform Y = TX maps positions X = (x_1, …, x_N) to the centre of
//! mass x_c = (1/N) Σ x_j followed by the relative coordinates
//! y_j = x_{j+1} - (1/j) Σ_{i≤j} x_i.  Both T and T⁻¹ are built from their
//! closed forms (not by numerical inversion), so identities like
//! x_3 - x_2 = y_2 - y_1/2 hold to machine precision and can be tested
//! against the printed matrices directly.  In these coordinates the kinetic
//! form splits as
//!
//! ```text
//! Σ |p_j|²/2m  =  |P|²/(2Nm) + Σ_j |q_j|²/(2μ_j) ,   μ_j = j m/(j+1).
//! ```

use crate::error::CoreError;
use crate::Result;
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Closed-form Jacobi transform pair with reduced masses.
#[derive(Debug, Clone)]
pub struct JacobiTransform {
    pub n: usize,
    pub mass: f64,
    pub t: DMatrix<f64>,
    pub t_inv: DMatrix<f64>,
    /// μ_j = j·m/(j+1), j = 1..N-1.
    pub reduced_masses: Vec<f64>,
}

/// Build the N-body Jacobi transform for equal masses.
pub fn jacobi_matrix(n: usize, mass: f64) -> Result<JacobiTransform> {
    if n < 2 {
        return Err(CoreError::Domain(format!(
            "Jacobi coordinates need N >= 2 particles, got {n}"
        )));
    }
    if mass <= 0.0 {
        return Err(CoreError::Domain("mass must be positive".into()));
    }
    let mut t = DMatrix::zeros(n, n);
    for j in 0..n {
        t[(0, j)] = 1.0 / n as f64;
    }
    for i in 1..n {
        for j in 0..i {
            t[(i, j)] = -1.0 / i as f64;
        }
        t[(i, i)] = 1.0;
    }
    let mut t_inv = DMatrix::zeros(n, n);
    for i in 0..n {
        t_inv[(i, 0)] = 1.0;
    }
    for c in 1..n {
        for i in 0..c {
            t_inv[(i, c)] = -1.0 / (c + 1) as f64;
        }
        t_inv[(c, c)] = c as f64 / (c + 1) as f64;
    }
    let reduced_masses = (1..n)
        .map(|j| j as f64 * mass / (j + 1) as f64)
        .collect();
    Ok(JacobiTransform {
        n,
        mass,
        t,
        t_inv,
        reduced_masses,
    })
}

impl JacobiTransform {
    /// x_j(Y) = (T⁻¹Y)_j, acting blockwise on d-vectors.  `y` is the flat
    /// Jacobi vector (x_c, y_1, …, y_{N-1}), length N·d.
    pub fn positions_from_jacobi(&self, y: &[f64], d: usize) -> Result<Vec<f64>> {
        if y.len() != self.n * d {
            return Err(CoreError::Shape(format!(
                "Jacobi vector length {} != N·d = {}",
                y.len(),
                self.n * d
            )));
        }
        let mut x = vec![0.0; self.n * d];
        for i in 0..self.n {
            for c in 0..self.n {
                let m = self.t_inv[(i, c)];
                if m == 0.0 {
                    continue;
                }
                for a in 0..d {
                    x[i * d + a] += m * y[c * d + a];
                }
            }
        }
        Ok(x)
    }

    /// Y = TX blockwise.
    pub fn jacobi_from_positions(&self, x: &[f64], d: usize) -> Result<Vec<f64>> {
        if x.len() != self.n * d {
            return Err(CoreError::Shape(format!(
                "position vector length {} != N·d = {}",
                x.len(),
                self.n * d
            )));
        }
        let mut y = vec![0.0; self.n * d];
        for i in 0..self.n {
            for c in 0..self.n {
                let m = self.t[(i, c)];
                if m == 0.0 {
                    continue;
                }
                for a in 0..d {
                    y[i * d + a] += m * x[c * d + a];
                }
            }
        }
        Ok(y)
    }

    /// Max |T·T⁻¹ - I| entry.
    pub fn inverse_residual(&self) -> f64 {
        let prod = &self.t * &self.t_inv;
        let mut max = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                let target = if i == j { 1.0 } else { 0.0 };
                max = max.max((prod[(i, j)] - target).abs());
            }
        }
        max
    }
}

/// Verify the kinetic quadratic-form identity on random momenta and return
/// the maximum residual over the trials.
pub fn kinetic_split_check(n: usize, mass: f64, trials: usize, seed: u64) -> Result<f64> {
    let tf = jacobi_matrix(n, mass)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let p: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        // momenta conjugate to Y: q = (T⁻¹)ᵀ p
        let mut q = vec![0.0; n];
        for c in 0..n {
            for i in 0..n {
                q[c] += tf.t_inv[(i, c)] * p[i];
            }
        }
        let lhs: f64 = p.iter().map(|pi| pi * pi / (2.0 * mass)).sum();
        let mut rhs = q[0] * q[0] / (2.0 * n as f64 * mass);
        for j in 1..n {
            rhs += q[j] * q[j] / (2.0 * tf.reduced_masses[j - 1]);
        }
        worst = worst.max((lhs - rhs).abs() / lhs.max(1e-300));
    }
    Ok(worst)
}
