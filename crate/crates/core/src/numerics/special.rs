//! Special functions for radial Fourier transforms: the sine integral,
//! Bessel functions J_ν of integer and half-integer order, their zeros,
//! and sphere surface areas.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Sine integral Si(x) = ∫_0^x sin t / t dt.
///
/// Power series below x = 16, complex continued fraction (Lentz) above;
/// both branches agree to ~1e-14 in the overlap.
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x <= 16.0 {
        // Si(x) = Σ (-1)^n x^(2n+1) / ((2n+1)(2n+1)!)
        let mut term = x;
        let mut sum = x;
        let x2 = x * x;
        let mut n = 1u32;
        loop {
            let tn = 2 * n;
            term *= -x2 / ((tn * (tn + 1)) as f64);
            sum += term / (tn + 1) as f64;
            if term.abs() < 1e-17 * sum.abs().max(1.0) || n > 80 {
                break;
            }
            n += 1;
        }
        sum
    } else {
        // Continued fraction for E1(ix); Si(x) = π/2 + Im[e^{-ix} CF].
        let eps = 1e-16;
        let fpmin = 1e-300;
        let b0 = Complex64::new(1.0, x);
        let mut c = Complex64::new(1.0 / fpmin, 0.0);
        let mut d = 1.0 / b0;
        let mut h = d;
        let mut b = b0;
        for i in 1..200 {
            let a = -((i * i) as f64);
            b += Complex64::new(2.0, 0.0);
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - Complex64::new(1.0, 0.0)).norm() < eps {
                break;
            }
        }
        let phase = Complex64::new(x.cos(), -x.sin());
        let hh = phase * h;
        FRAC_PI_2 + hh.im
    }
}

fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 12.0 {
        // Power series in (x/2)^2.
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..60 {
            term *= -q / ((n * n) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1.0) {
                break;
            }
        }
        sum
    } else {
        // Hankel asymptotic expansion.
        let z = 8.0 / ax;
        let z2 = z * z;
        let p = 1.0 + z2 * (-0.1098628627e-2 + z2 * (0.2734510407e-4 + z2 * (-0.2073370639e-5 + z2 * 0.2093887211e-6)));
        let q = z * (-0.1562499995e-1 + z2 * (0.1430488765e-3 + z2 * (-0.6911147651e-5 + z2 * (0.7621095161e-6 + z2 * -0.934935152e-7))));
        let chi = ax - FRAC_PI_4;
        (2.0 / (PI * ax)).sqrt() * (p * chi.cos() - q * chi.sin())
    }
}

fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let val = if ax <= 12.0 {
        let q = 0.25 * x * x;
        let mut term = 0.5 * ax;
        let mut sum = term;
        for n in 1..60 {
            term *= -q / ((n * (n + 1)) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1.0) {
                break;
            }
        }
        sum
    } else {
        let z = 8.0 / ax;
        let z2 = z * z;
        let p = 1.0 + z2 * (0.183105e-2 + z2 * (-0.3516396496e-4 + z2 * (0.2457520174e-5 + z2 * -0.240337019e-6)));
        let q = z * (0.04687499995 + z2 * (-0.2002690873e-3 + z2 * (0.8449199096e-5 + z2 * (-0.88228987e-6 + z2 * 0.105787412e-6))));
        let chi = ax - 3.0 * FRAC_PI_4;
        (2.0 / (PI * ax)).sqrt() * (p * chi.cos() - q * chi.sin())
    };
    if x < 0.0 {
        -val
    } else {
        val
    }
}

/// Bessel J of order ν = (d-2)/2 — the kernel of the d-dimensional radial
/// Fourier transform. `d` up to 4 covers every in-scope dimension.
///
/// Half-integer orders use their closed forms; the x → 0 behaviour
/// (J_ν ~ (x/2)^ν / Γ(ν+1)) is kept accurate so callers can divide by
/// x^ν safely.
pub fn radial_bessel_j(d: usize, x: f64) -> f64 {
    match d {
        1 => {
            // ν = -1/2: sqrt(2/πx) cos x
            (2.0 / (PI * x)).sqrt() * x.cos()
        }
        2 => j0(x),
        3 => {
            // ν = 1/2: sqrt(2/πx) sin x
            if x.abs() < 1e-4 {
                // sin x / x ≈ 1 - x²/6 keeps the removable limit accurate
                (2.0 * x / PI).sqrt() * (1.0 - x * x / 6.0 + x.powi(4) / 120.0)
            } else {
                (2.0 / (PI * x)).sqrt() * x.sin()
            }
        }
        4 => j1(x),
        _ => panic!("radial Bessel kernel implemented for d = 1..4, got d = {d}"),
    }
}

/// n-th positive zero (n = 1, 2, ...) of the order-(d-2)/2 Bessel function,
/// used to split oscillatory quadrature into sign-coherent panels.
/// McMahon's expansion is plenty for panel boundaries.
pub fn radial_bessel_zero(d: usize, n: usize) -> f64 {
    let nf = n as f64;
    match d {
        1 => (nf - 0.5) * PI,
        3 => nf * PI,
        2 | 4 => {
            let nu = 0.5 * (d as f64 - 2.0);
            let mu = 4.0 * nu * nu;
            let beta = (nf + 0.5 * nu - 0.25) * PI;
            let b8 = 8.0 * beta;
            beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3))
        }
        _ => panic!("radial Bessel zeros implemented for d = 1..4, got d = {d}"),
    }
}

/// Γ(k/2) for positive integer k.
pub fn gamma_half(k: usize) -> f64 {
    assert!(k >= 1);
    let mut val = if k % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut arg = if k % 2 == 0 { 1.0 } else { 0.5 };
    while 2.0 * arg < k as f64 {
        val *= arg;
        arg += 1.0;
    }
    val
}

/// Surface area of the unit sphere S^{d-1} ⊂ R^d: 2 π^{d/2} / Γ(d/2).
pub fn surface_area(d: usize) -> f64 {
    2.0 * PI.powf(0.5 * d as f64) / gamma_half(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sine_integral_reference_values() {
        // Abramowitz & Stegun table values.
        assert_relative_eq!(sine_integral(1.0), 0.9460830703671830, epsilon = 1e-12);
        assert_relative_eq!(sine_integral(2.0), 1.6054129768026948, epsilon = 1e-12);
        assert_relative_eq!(sine_integral(10.0), 1.6583475942188740, epsilon = 1e-12);
        assert_relative_eq!(sine_integral(-1.0), -0.9460830703671830, epsilon = 1e-12);
    }

    #[test]
    fn sine_integral_branches_agree() {
        // Series and continued fraction must match where they hand over.
        for &x in &[15.5, 16.0] {
            let series = {
                let mut term = x;
                let mut sum = x;
                let x2: f64 = x * x;
                for n in 1..90u32 {
                    let tn = 2 * n;
                    term *= -x2 / ((tn * (tn + 1)) as f64);
                    sum += term / (tn + 1) as f64;
                }
                sum
            };
            assert_relative_eq!(series, sine_integral(x), epsilon = 1e-11);
        }
        // tail behaviour: Si(x) → π/2 - cos x / x + O(1/x²)
        let x = 200.0;
        let approx_tail = FRAC_PI_2 - x.cos() / x - x.sin() / (x * x);
        assert_relative_eq!(sine_integral(x), approx_tail, epsilon = 1e-4);
    }

    #[test]
    fn bessel_reference_values() {
        assert_relative_eq!(radial_bessel_j(2, 1.0), 0.7651976865579666, epsilon = 1e-10);
        assert_relative_eq!(radial_bessel_j(2, 20.0), 0.1670246643405831, epsilon = 1e-9);
        assert_relative_eq!(radial_bessel_j(4, 1.0), 0.4400505857449335, epsilon = 1e-10);
        assert_relative_eq!(radial_bessel_j(4, 20.0), 0.0668331241757585, epsilon = 1e-8);
        // half-integer closed forms
        let x = 2.3;
        assert_relative_eq!(
            radial_bessel_j(3, x),
            (2.0 / (PI * x)).sqrt() * x.sin(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn bessel_zeros_bracket_sign_changes() {
        for d in 1..=4usize {
            for n in 1..8usize {
                let z = radial_bessel_zero(d, n);
                let before = radial_bessel_j(d, z - 0.05);
                let after = radial_bessel_j(d, z + 0.05);
                assert!(
                    before * after < 0.0,
                    "zero {n} of d={d} kernel not bracketed: J({}) = {before}, J({}) = {after}",
                    z - 0.05,
                    z + 0.05
                );
            }
        }
    }

    #[test]
    fn gamma_and_surface() {
        assert_relative_eq!(gamma_half(1), PI.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(gamma_half(2), 1.0, epsilon = 1e-15);
        assert_relative_eq!(gamma_half(3), 0.5 * PI.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(gamma_half(4), 1.0, epsilon = 1e-15);
        assert_relative_eq!(surface_area(1), 2.0, epsilon = 1e-14);
        assert_relative_eq!(surface_area(2), 2.0 * PI, epsilon = 1e-14);
        assert_relative_eq!(surface_area(3), 4.0 * PI, epsilon = 1e-14);
    }
}
