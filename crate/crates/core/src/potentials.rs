//! Field-induced effective pair potentials.
//!
//! A scalar Bose field with dispersion ω(k) = |k| and ultraviolet cutoff
//! form factors λ̂_j mediates, in the weak-coupling limit, the pair
//! interaction
//!
//! ```text
//! V_eff,ij(x) = -(α_i α_j / 4) ∫ λ̂_i(-k) λ̂_j(k) / ω(k) · e^{-ik·x} dk ,
//! ```
//!
//! together with the coupling-independent self-energy constant
//! `G = -(1/4) Σ_j ∫ λ̂_j²/ω dk`.  For rotation-invariant real profiles the
//! Fourier integral reduces to a one-dimensional Hankel-type transform with
//! kernel J_{(d-2)/2}, which this module evaluates by splitting the
//! integration range at the kernel's sign changes.  For the shell profile
//! ρ̂ = 1/√((2π)³) on κ < |k| < Λ in d = 3 the transform collapses to the
//! sine-integral closed form
//!
//! ```text
//! V_eff,ij(r) = -(α_i α_j / 8π² r) ∫_{κr}^{Λr} sin t / t dt ,
//! ```
//!
//! giving two independent evaluation routes that are cross-checked in the
//! tests.
//!
//! The scaling parameter and the infrared shell radius are distinct
//! quantities here (`scale_kappa` in the binding report vs. `ir_cut`), even
//! though the literature reuses one symbol for both.

use crate::error::CoreError;
use crate::numerics::interp::{linear_interp, MonotoneCubic};
use crate::numerics::quadrature::{adaptive_simpson, gauss_legendre_cached};
use crate::numerics::special::{radial_bessel_j, radial_bessel_zero, sine_integral, surface_area};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Whether tabulated/analytic profile values are the form factor λ̂ itself
/// or ρ̂ with λ̂ = ρ̂ / √ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileForm {
    LambdaHat,
    RhoOverSqrtOmega,
}

/// Radial shape of the ultraviolet cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// `amplitude / √((2π)^d)` on `ir_cut < |k| < uv_cut`, zero elsewhere.
    Shell,
    /// `amplitude / √((2π)^d) · exp(-k²/(2 uv_cut²))` for `|k| > ir_cut`.
    Gaussian,
    /// Monotone-cubic interpolation of `(|k|, value)` samples; zero outside
    /// the tabulated range.
    Tabulated,
}

/// Rotation-invariant real ultraviolet cutoff profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffProfile {
    pub kind: ProfileKind,
    /// Spatial dimension d of the field momenta.
    pub d: usize,
    /// Infrared edge κ ≥ 0 (inner shell radius).
    pub ir_cut: f64,
    /// Ultraviolet edge Λ > κ (shell) or Gaussian width scale.
    pub uv_cut: f64,
    /// Dimensionless overall amplitude.
    pub amplitude: f64,
    /// Radial samples for `Tabulated` profiles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<(f64, f64)>>,
    pub form: ProfileForm,
}

impl CutoffProfile {
    /// The d = 3 shell example with ρ̂ = 1/√((2π)³) between κ and Λ.
    pub fn shell(d: usize, ir_cut: f64, uv_cut: f64, amplitude: f64) -> Self {
        CutoffProfile {
            kind: ProfileKind::Shell,
            d,
            ir_cut,
            uv_cut,
            amplitude,
            table: None,
            form: ProfileForm::RhoOverSqrtOmega,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.d > 4 {
            return Err(CoreError::InvalidProfile(format!(
                "dimension d = {} outside supported range 1..=4",
                self.d
            )));
        }
        if self.ir_cut < 0.0 {
            return Err(CoreError::InvalidProfile(format!(
                "ir_cut = {} must be nonnegative",
                self.ir_cut
            )));
        }
        if self.uv_cut <= self.ir_cut {
            return Err(CoreError::InvalidProfile(format!(
                "uv_cut = {} must exceed ir_cut = {}",
                self.uv_cut, self.ir_cut
            )));
        }
        if let ProfileKind::Tabulated = self.kind {
            let table = self.table.as_ref().ok_or_else(|| {
                CoreError::InvalidProfile("tabulated profile without a table".into())
            })?;
            if table.len() < 2 {
                return Err(CoreError::InvalidProfile(
                    "tabulated profile needs at least two samples".into(),
                ));
            }
            if !table.windows(2).all(|w| w[1].0 > w[0].0) {
                return Err(CoreError::InvalidProfile(
                    "table wavenumbers must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }

    /// Stored radial value (ρ̂ or λ̂ depending on `form`) at |k| = k.
    pub fn raw_value(&self, k: f64) -> f64 {
        if k < 0.0 {
            return 0.0;
        }
        let norm = self.amplitude / ((2.0 * PI).powf(0.5 * self.d as f64)).sqrt();
        match self.kind {
            ProfileKind::Shell => {
                if k > self.ir_cut && k < self.uv_cut {
                    norm
                } else {
                    0.0
                }
            }
            ProfileKind::Gaussian => {
                if k > self.ir_cut {
                    norm * (-0.5 * (k / self.uv_cut).powi(2)).exp()
                } else {
                    0.0
                }
            }
            ProfileKind::Tabulated => {
                let table = self.table.as_ref().expect("validated");
                let lo = table.first().unwrap().0;
                let hi = table.last().unwrap().0;
                if k < lo || k > hi {
                    return 0.0;
                }
                let xs: Vec<f64> = table.iter().map(|p| p.0).collect();
                let ys: Vec<f64> = table.iter().map(|p| p.1).collect();
                self.amplitude * MonotoneCubic::new(xs, ys).eval(k)
            }
        }
    }

    /// Form factor λ̂(|k|).
    pub fn lambda_hat(&self, k: f64) -> f64 {
        match self.form {
            ProfileForm::LambdaHat => self.raw_value(k),
            ProfileForm::RhoOverSqrtOmega => {
                if k <= 0.0 {
                    0.0
                } else {
                    self.raw_value(k) / k.sqrt()
                }
            }
        }
    }

    /// Lower edge of the radial support.
    pub fn support_lo(&self) -> f64 {
        match self.kind {
            ProfileKind::Shell | ProfileKind::Gaussian => self.ir_cut,
            ProfileKind::Tabulated => self
                .table
                .as_ref()
                .map(|t| t.first().unwrap().0)
                .unwrap_or(0.0)
                .max(self.ir_cut),
        }
    }

    /// Upper edge of the (effective) radial support.
    pub fn support_hi(&self) -> f64 {
        match self.kind {
            ProfileKind::Shell => self.uv_cut,
            // e^{-50} ≈ 2e-22 — negligible beyond ten widths
            ProfileKind::Gaussian => 10.0 * self.uv_cut,
            ProfileKind::Tabulated => self.table.as_ref().map(|t| t.last().unwrap().0).unwrap_or(0.0),
        }
    }

    /// The three ground-state integrability integrals ∫λ̂² dk, ∫λ̂²/ω dk,
    /// ∫λ̂²/ω² dk, with divergence flags from dyadic refinement near k = 0.
    pub fn integrability(&self) -> Result<IntegrabilityReport> {
        self.validate()?;
        let d = self.d;
        let l2 = self.radial_integral(|k| self.lambda_hat(k).powi(2) * k.powf(d as f64 - 1.0));
        let over_sqrt = self.radial_integral(|k| self.lambda_hat(k).powi(2) * k.powf(d as f64 - 2.0));
        let over = self.radial_integral(|k| self.lambda_hat(k).powi(2) * k.powf(d as f64 - 3.0));
        let s = surface_area(d);
        Ok(IntegrabilityReport {
            l2: QuadOutcome::scaled(l2, s),
            l2_over_sqrt_omega: QuadOutcome::scaled(over_sqrt, s),
            l2_over_omega: QuadOutcome::scaled(over, s),
        })
    }

    /// ∫_0^∞ g(k) dk with divergence detection at the infrared end.
    fn radial_integral<F: Fn(f64) -> f64>(&self, g: F) -> (f64, bool) {
        let lo = self.support_lo();
        let hi = self.support_hi();
        if hi <= lo {
            return (0.0, true);
        }
        if lo > 0.0 {
            return (adaptive_simpson(&g, lo, hi, 1e-12), true);
        }
        // dyadic panels toward k = 0; non-decaying panel sums mean divergence
        let mut total = adaptive_simpson(&g, hi * 0.5, hi, 1e-13);
        let mut upper = hi * 0.5;
        let mut prev = f64::INFINITY;
        for j in 0..60 {
            let lower = upper * 0.5;
            let t = adaptive_simpson(&g, lower, upper, 1e-13);
            total += t;
            if t.abs() < 1e-15 * total.abs().max(1e-300) {
                return (total, true);
            }
            if j > 6 && t.abs() > 0.98 * prev.abs() {
                return (total, false);
            }
            prev = t;
            upper = lower;
        }
        // panels kept shrinking but never became negligible: treat the
        // remainder as a geometric tail if it is decaying, else divergent
        let decaying = prev.abs() < 0.9 * total.abs();
        (total, decaying)
    }
}

/// Value/finiteness pair for a quadrature outcome.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadOutcome {
    pub value: f64,
    pub finite: bool,
}

impl QuadOutcome {
    fn scaled((value, finite): (f64, bool), s: f64) -> Self {
        QuadOutcome {
            value: value * s,
            finite,
        }
    }
}

/// Integrability of a profile: λ̂ ∈ L², λ̂/√ω ∈ L², λ̂/ω ∈ L².
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IntegrabilityReport {
    pub l2: QuadOutcome,
    pub l2_over_sqrt_omega: QuadOutcome,
    pub l2_over_omega: QuadOutcome,
}

impl IntegrabilityReport {
    pub fn all_finite(&self) -> bool {
        self.l2.finite && self.l2_over_sqrt_omega.finite && self.l2_over_omega.finite
    }
}

/// Analytic radial potential descriptors for external wells and explicit
/// pair interactions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialPotential {
    Zero,
    /// -depth for r < radius, 0 beyond.
    FiniteWell { depth: f64, radius: f64 },
    /// -depth · exp(-r²/(2 width²)).
    GaussianWell { depth: f64, width: f64 },
    /// Σ amplitude_i · exp(-r²/(2 width_i²)); signs free, so shallow wells
    /// with repulsive skirts are expressible.
    GaussianSum { terms: Vec<(f64, f64)> },
    /// amplitude / max(r, core_radius): a bounded core with an exact
    /// Coulomb 1/r tail.
    CoulombLike { amplitude: f64, core_radius: f64 },
    /// Radial tabulation with interpolation rule.
    Tabulated { table: PairPotential },
}

impl RadialPotential {
    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        match self {
            RadialPotential::Zero => 0.0,
            RadialPotential::FiniteWell { depth, radius } => {
                if r < *radius {
                    -depth
                } else {
                    0.0
                }
            }
            RadialPotential::GaussianWell { depth, width } => {
                -depth * (-0.5 * (r / width).powi(2)).exp()
            }
            RadialPotential::GaussianSum { terms } => terms
                .iter()
                .map(|(a, w)| a * (-0.5 * (r / w).powi(2)).exp())
                .sum(),
            RadialPotential::CoulombLike {
                amplitude,
                core_radius,
            } => amplitude / r.max(*core_radius),
            RadialPotential::Tabulated { table } => table.eval(r),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RadialPotential::Zero)
    }
}

/// N particles with masses, couplings, cutoff profiles, and external wells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleSystem {
    pub n: usize,
    pub d: usize,
    pub masses: Vec<f64>,
    pub couplings: Vec<f64>,
    pub profiles: Vec<CutoffProfile>,
    pub external: Vec<RadialPotential>,
}

impl ParticleSystem {
    /// Fully symmetric system: one mass, coupling, profile, and well
    /// shared by all N particles.
    pub fn symmetric(
        n: usize,
        d: usize,
        mass: f64,
        coupling: f64,
        profile: CutoffProfile,
        external: RadialPotential,
    ) -> Self {
        ParticleSystem {
            n,
            d,
            masses: vec![mass; n],
            couplings: vec![coupling; n],
            profiles: vec![profile; n],
            external: vec![external; n],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(CoreError::Shape("particle count must be >= 1".into()));
        }
        if self.masses.len() != self.n
            || self.couplings.len() != self.n
            || self.profiles.len() != self.n
            || self.external.len() != self.n
        {
            return Err(CoreError::Shape(format!(
                "per-particle arrays must all have length N = {}",
                self.n
            )));
        }
        if self.masses.iter().any(|m| *m <= 0.0) {
            return Err(CoreError::Shape("all masses must be strictly positive".into()));
        }
        for p in &self.profiles {
            p.validate()?;
            if p.d != self.d {
                return Err(CoreError::Shape(format!(
                    "profile dimension {} != system dimension {}",
                    p.d, self.d
                )));
            }
        }
        Ok(())
    }

    /// True when masses, couplings, profiles, and external wells coincide,
    /// so particle exchange is a symmetry and cluster enumeration may be
    /// pruned by subset size.
    pub fn is_fully_symmetric(&self) -> bool {
        self.masses.windows(2).all(|w| w[0] == w[1])
            && self.couplings.windows(2).all(|w| w[0] == w[1])
            && self.profiles.windows(2).all(|w| w[0] == w[1])
            && self.external.windows(2).all(|w| w[0] == w[1])
    }

    pub fn equal_masses(&self) -> Option<f64> {
        let m = self.masses[0];
        if self.masses.iter().all(|x| *x == m) {
            Some(m)
        } else {
            None
        }
    }
}

/// Interpolation rule for pair-potential tabulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpRule {
    Linear,
    Cubic,
}

/// Tail handling beyond the tabulated range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayTail {
    ZeroBeyondRange,
    /// Fit c/r^p to the outermost samples and extrapolate.
    PowerFit,
}

/// Radial tabulation of one effective pair potential W.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairPotential {
    /// Strictly increasing separations, all > 0.
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// W(0), evaluated from the analytic kernel limit rather than by
    /// extrapolation — condition (W2) needs it exactly.
    pub value_at_zero: f64,
    pub interp: InterpRule,
    pub decay_tail: DecayTail,
}

impl PairPotential {
    pub fn new(
        radii: Vec<f64>,
        values: Vec<f64>,
        value_at_zero: f64,
        interp: InterpRule,
        decay_tail: DecayTail,
    ) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 2 {
            return Err(CoreError::Shape(
                "pair potential needs matching radii/values with >= 2 samples".into(),
            ));
        }
        if radii[0] <= 0.0 || !radii.windows(2).all(|w| w[1] > w[0]) {
            return Err(CoreError::Shape(
                "radii must be strictly increasing and positive".into(),
            ));
        }
        if !value_at_zero.is_finite() {
            return Err(CoreError::Domain("W(0) must be finite".into()));
        }
        Ok(PairPotential {
            radii,
            values,
            value_at_zero,
            interp,
            decay_tail,
        })
    }

    /// Evaluate W(r); r = 0 returns the stored kernel-limit value.
    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        if r == 0.0 {
            return self.value_at_zero;
        }
        let last = *self.radii.last().unwrap();
        if r > last {
            return match self.decay_tail {
                DecayTail::ZeroBeyondRange => 0.0,
                DecayTail::PowerFit => {
                    let (c, p) = self.tail_fit();
                    c * r.powf(-p)
                }
            };
        }
        // include (0, W(0)) as an interpolation anchor
        let mut xs = Vec::with_capacity(self.radii.len() + 1);
        let mut ys = Vec::with_capacity(self.radii.len() + 1);
        xs.push(0.0);
        ys.push(self.value_at_zero);
        xs.extend_from_slice(&self.radii);
        ys.extend_from_slice(&self.values);
        match self.interp {
            InterpRule::Linear => linear_interp(&xs, &ys, r),
            InterpRule::Cubic => MonotoneCubic::new(xs, ys).eval(r),
        }
    }

    /// Log-log fit of |W| ≈ c r^{-p} over the outer samples (sign taken
    /// from the last sample).
    fn tail_fit(&self) -> (f64, f64) {
        let n = self.radii.len();
        let take = 4.min(n);
        let pts: Vec<(f64, f64)> = (n - take..n)
            .filter(|&i| self.values[i] != 0.0)
            .map(|i| (self.radii[i].ln(), self.values[i].abs().ln()))
            .collect();
        if pts.len() < 2 {
            return (0.0, 1.0);
        }
        let m = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        let intercept = (sy - slope * sx) / m;
        let sign = self.values[n - 1].signum();
        (sign * intercept.exp(), -slope)
    }

    /// Is the tail small: |W| at the largest tabulated radius below
    /// `tol · |W(0)|` (Riemann–Lebesgue decay check).
    pub fn tail_is_small(&self, tol: f64) -> bool {
        let last = self.values.last().unwrap().abs();
        last <= tol * self.value_at_zero.abs().max(f64::MIN_POSITIVE)
    }

    /// Tabulate W_ij(r) = V_eff,ij(r)/(α_i α_j) (unit couplings) from two
    /// cutoff profiles by Bessel quadrature.
    pub fn tabulate_from_profiles(
        pi: &CutoffProfile,
        pj: &CutoffProfile,
        r_max: f64,
        samples: usize,
    ) -> Result<Self> {
        if r_max <= 0.0 || samples < 8 {
            return Err(CoreError::Domain(
                "tabulation needs r_max > 0 and at least 8 samples".into(),
            ));
        }
        // resolve the fastest oscillation cos(uv_cut · r): several samples
        // per half period, with a floor for smooth cases
        let hi = pi.support_hi().min(pj.support_hi());
        let needed = (8.0 * hi * r_max / PI).ceil() as usize;
        let n = samples.max(needed).max(64);
        let radii: Vec<f64> = (1..=n).map(|i| r_max * i as f64 / n as f64).collect();
        let mut values = Vec::with_capacity(n);
        for &r in &radii {
            values.push(veff_pair_quadrature(pi, pj, r, 1.0, 1.0)?);
        }
        let value_at_zero = veff_pair_quadrature(pi, pj, 0.0, 1.0, 1.0)?;
        PairPotential::new(
            radii,
            values,
            value_at_zero,
            InterpRule::Cubic,
            DecayTail::ZeroBeyondRange,
        )
    }
}

/// Closed-form shell-profile pair potential in d = 3 (unit amplitude):
///
/// ```text
/// V(r) = -(α_i α_j / 8π² r) [Si(Λ r) - Si(κ r)] ,   V(0) = -(α_i α_j/8π²)(Λ - κ).
/// ```
pub fn veff_pair_closed_form(r: f64, ai: f64, aj: f64, ir_cut: f64, uv_cut: f64) -> Result<f64> {
    if uv_cut - ir_cut <= 0.0 {
        return Err(CoreError::InvalidProfile(format!(
            "uv_cut - ir_cut = {} must be positive",
            uv_cut - ir_cut
        )));
    }
    if ir_cut < 0.0 {
        return Err(CoreError::InvalidProfile("ir_cut must be nonnegative".into()));
    }
    if r < 0.0 {
        return Err(CoreError::Domain(format!("separation r = {r} must be >= 0")));
    }
    let pref = -ai * aj / (8.0 * PI * PI);
    // integrand sin t / t → 1: limit value (Λ-κ) at r = 0, kept analytic
    // rather than extrapolated
    if r == 0.0 || r * uv_cut < 1e-8 {
        return Ok(pref * (uv_cut - ir_cut));
    }
    Ok(pref / r * (sine_integral(uv_cut * r) - sine_integral(ir_cut * r)))
}

/// Pair potential by d-dimensional radial Fourier (Hankel) transform:
///
/// ```text
/// V(r) = -(α_i α_j/4) (2π)^{d/2} r^{1-d/2} ∫_0^∞ λ̂_i λ̂_j / k · k^{d/2} J_{(d-2)/2}(k r) dk .
/// ```
///
/// The range is split at the Bessel kernel's zeros and each sign-coherent
/// panel integrated with a 24-point Gauss rule; since every in-scope
/// profile has (effectively) compact support the panel sum is finite and
/// exact to quadrature accuracy even for large r, where plain adaptive
/// quadrature fails.
pub fn veff_pair_quadrature(
    pi: &CutoffProfile,
    pj: &CutoffProfile,
    r: f64,
    ai: f64,
    aj: f64,
) -> Result<f64> {
    pi.validate()?;
    pj.validate()?;
    if pi.d != pj.d {
        return Err(CoreError::Shape(format!(
            "profile dimensions differ: {} vs {}",
            pi.d, pj.d
        )));
    }
    if r < 0.0 {
        return Err(CoreError::Domain(format!("separation r = {r} must be >= 0")));
    }
    let d = pi.d;
    if ai == 0.0 || aj == 0.0 {
        return Ok(0.0);
    }
    let lo = pi.support_lo().max(pj.support_lo());
    let hi = pi.support_hi().min(pj.support_hi());
    if hi <= lo {
        // disjoint supports: the effective potential vanishes
        return Ok(0.0);
    }
    check_pair_infrared(pi, pj, lo, hi)?;
    let pref = -ai * aj / 4.0;
    let product = |k: f64| pi.lambda_hat(k) * pj.lambda_hat(k) / k;

    if r == 0.0 || r * hi < 1e-8 {
        // kernel limit: plain radial integral against the surface measure
        let s = surface_area(d);
        let val = panel_integrate(&|k| product(k) * k.powf(d as f64 - 1.0), lo, hi, &[]);
        return Ok(pref * s * val);
    }

    let kernel_pow = 0.5 * d as f64;
    let integrand = |k: f64| product(k) * k.powf(kernel_pow) * radial_bessel_j(d, k * r);
    // split at kernel zeros k = z_n / r inside (lo, hi)
    let mut cuts = Vec::new();
    let mut n = 1;
    loop {
        let z = radial_bessel_zero(d, n) / r;
        if z >= hi {
            break;
        }
        if z > lo {
            cuts.push(z);
        }
        n += 1;
        if n > 4_000_000 {
            return Err(CoreError::Resolution(
                "oscillatory quadrature panel count exploded".into(),
            ));
        }
    }
    let val = panel_integrate(&integrand, lo, hi, &cuts);
    Ok(pref * (2.0 * PI).powf(0.5 * d as f64) * r.powf(1.0 - 0.5 * d as f64) * val)
}

/// Sum of 24-point Gauss panels over [lo, hi] with interior cut points.
fn panel_integrate<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, cuts: &[f64]) -> f64 {
    let (nodes, weights) = gauss_legendre_cached(24);
    let mut acc = 0.0;
    let mut a = lo;
    let mut next = |a: f64, b: f64, acc: &mut f64| {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut panel = 0.0;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            panel += w * f(mid + half * x);
        }
        *acc += panel * half;
    };
    for &c in cuts {
        next(a, c, &mut acc);
        a = c;
    }
    next(a, hi, &mut acc);
    acc
}

/// Infrared integrability of the pair kernel λ̂_i λ̂_j / ω near k = 0.
fn check_pair_infrared(pi: &CutoffProfile, pj: &CutoffProfile, lo: f64, hi: f64) -> Result<()> {
    if lo > 0.0 {
        return Ok(());
    }
    let d = pi.d;
    let g = |k: f64| (pi.lambda_hat(k) * pj.lambda_hat(k)).abs() / k * k.powf(d as f64 - 1.0);
    let mut upper = hi * 0.5;
    let mut prev = f64::INFINITY;
    let mut total: f64 = adaptive_simpson(&g, upper, hi, 1e-12);
    for j in 0..60 {
        let lower = 0.5 * upper;
        let t = adaptive_simpson(&g, lower, upper, 1e-12);
        total += t;
        if t.abs() < 1e-15 * total.abs().max(1e-300) {
            return Ok(());
        }
        if j > 6 && t.abs() > 0.98 * prev.abs() {
            return Err(CoreError::InfraredDivergence(
                "pair kernel λ̂_i λ̂_j / ω is not integrable near k = 0".into(),
            ));
        }
        prev = t;
        upper = lower;
    }
    Ok(())
}

/// Total effective potential at particle positions x (flat slice, length
/// N·d): sum over ordered pairs i ≠ j, i.e. twice the unordered-pair sum
/// for the real radial profiles in scope.
pub fn veff_total(x: &[f64], sys: &ParticleSystem) -> Result<f64> {
    sys.validate()?;
    if x.len() != sys.n * sys.d {
        return Err(CoreError::Shape(format!(
            "positions length {} != N·d = {}",
            x.len(),
            sys.n * sys.d
        )));
    }
    let mut total = 0.0;
    for i in 0..sys.n {
        for j in i + 1..sys.n {
            let mut dist2 = 0.0;
            for a in 0..sys.d {
                let diff = x[i * sys.d + a] - x[j * sys.d + a];
                dist2 += diff * diff;
            }
            let r = dist2.sqrt();
            let pair = veff_pair_quadrature(
                &sys.profiles[i],
                &sys.profiles[j],
                r,
                sys.couplings[i],
                sys.couplings[j],
            )?;
            total += 2.0 * pair;
        }
    }
    Ok(total)
}

/// Per-particle field norms entering the self-energy and the κ-correction
/// terms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParticleFieldNorms {
    /// ‖λ̂_j‖² = ∫ λ̂_j² dk.
    pub l2_sq: f64,
    /// ‖λ̂_j/√ω‖² = ∫ λ̂_j²/ω dk.
    pub l2_over_sqrt_omega_sq: f64,
}

/// Self-energy constant G with the per-particle norms used by the binding
/// margin.  G contains no coupling constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelfEnergy {
    /// G = -(1/4) Σ_j ∫ λ̂_j²/ω dk.
    pub g: f64,
    pub per_particle: Vec<ParticleFieldNorms>,
}

/// Self-energy constant of the system; errors if any profile fails the
/// infrared condition λ̂/√ω ∈ L².
pub fn self_energy_constant(sys: &ParticleSystem) -> Result<SelfEnergy> {
    sys.validate()?;
    let mut per_particle = Vec::with_capacity(sys.n);
    let mut g = 0.0;
    for p in &sys.profiles {
        let rep = p.integrability()?;
        if !rep.l2_over_sqrt_omega.finite {
            return Err(CoreError::InfraredDivergence(
                "λ̂/√ω ∉ L²: self-energy integral diverges".into(),
            ));
        }
        g -= 0.25 * rep.l2_over_sqrt_omega.value;
        per_particle.push(ParticleFieldNorms {
            l2_sq: rep.l2.value,
            l2_over_sqrt_omega_sq: rep.l2_over_sqrt_omega.value,
        });
    }
    Ok(SelfEnergy { g, per_particle })
}

/// One ε row of a condition-(W2) check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct W2Entry {
    pub epsilon: f64,
    pub inf_inside: f64,
    pub inf_outside: f64,
    /// Strict inequality W(0) = inf_{|x|<ε} W < inf_{|x|>ε} W.
    pub passes: bool,
}

/// Report of `check_w_conditions`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WConditionReport {
    pub entries: Vec<W2Entry>,
    /// (R, sup_{|x|>R} |W|) decay table over the tabulated range.
    pub decay: Vec<(f64, f64)>,
    pub all_pass: bool,
}

/// Check condition (W2) — the minimum of W sits strictly at the origin —
/// for each ε, and report the decay of the tail.
pub fn check_w_conditions(w: &PairPotential, eps_list: &[f64]) -> Result<WConditionReport> {
    let eps_min = eps_list
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let inside_count = w.radii.iter().filter(|r| **r < eps_min).count();
    if inside_count < 3 {
        return Err(CoreError::Resolution(format!(
            "only {inside_count} tabulated radii below the smallest ε = {eps_min}; need at least 3"
        )));
    }
    let r_max = *w.radii.last().unwrap();
    let mut entries = Vec::new();
    let mut all_pass = true;
    for &eps in eps_list {
        if eps >= r_max {
            return Err(CoreError::Domain(format!(
                "ε = {eps} is not inside the tabulated range (r_max = {r_max})"
            )));
        }
        let inf_inside = w
            .radii
            .iter()
            .zip(w.values.iter())
            .filter(|(r, _)| **r < eps)
            .map(|(_, v)| *v)
            .fold(w.value_at_zero, f64::min);
        let inf_outside = w
            .radii
            .iter()
            .zip(w.values.iter())
            .filter(|(r, _)| **r >= eps)
            .map(|(_, v)| *v)
            .fold(f64::INFINITY, f64::min);
        let passes = (w.value_at_zero - inf_inside).abs() <= 1e-12 * w.value_at_zero.abs().max(1.0)
            && inf_inside < inf_outside;
        all_pass &= passes;
        entries.push(W2Entry {
            epsilon: eps,
            inf_inside,
            inf_outside,
            passes,
        });
    }
    // decay samples at dyadic fractions of the range
    let mut decay = Vec::new();
    for frac in [0.125, 0.25, 0.5, 0.75] {
        let cut = frac * r_max;
        let sup = w
            .radii
            .iter()
            .zip(w.values.iter())
            .filter(|(r, _)| **r > cut)
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max);
        decay.push((cut, sup));
    }
    Ok(WConditionReport {
        entries,
        decay,
        all_pass,
    })
}

/// Truncate to |x| < radius, cap at |V| ≤ cap, and mollify with a Gaussian
/// of width sigma, returning a radial tabulation.  Increasing
/// (radius, cap, 1/sigma) yields approximations converging to V in the
/// sense used by the threshold-convergence harness.
pub fn mollify_potential(
    v: &RadialPotential,
    d: usize,
    radius: f64,
    cap: f64,
    sigma: f64,
) -> Result<RadialPotential> {
    if radius <= 0.0 || sigma <= 0.0 {
        return Err(CoreError::Domain(
            "mollification needs radius > 0 and sigma > 0".into(),
        ));
    }
    if cap <= 0.0 {
        return Err(CoreError::Domain("cap must be positive".into()));
    }
    if !(d == 1 || d == 3) {
        return Err(CoreError::Domain(format!(
            "mollification convolution implemented for d = 1 and d = 3, got {d}"
        )));
    }
    let raw = |r: f64| -> f64 {
        let r = r.abs();
        if r > radius {
            0.0
        } else {
            v.eval(r).clamp(-cap, cap)
        }
    };
    let r_out = radius + 6.0 * sigma;
    let n = 1400usize;
    let radii: Vec<f64> = (1..=n).map(|i| r_out * i as f64 / n as f64).collect();
    let gauss_norm = 1.0 / (sigma * (2.0 * PI).sqrt());
    // integration windows track the narrow Gaussian kernel so the adaptive
    // rule cannot step over it
    let smooth = |r: f64| -> f64 {
        match d {
            1 => {
                // 1-d convolution over the symmetric extension
                let lo = (r - 8.0 * sigma).max(-radius);
                let hi = (r + 8.0 * sigma).min(radius);
                if hi <= lo {
                    return 0.0;
                }
                adaptive_simpson(
                    &|y: f64| raw(y) * gauss_norm * (-0.5 * ((r - y) / sigma).powi(2)).exp(),
                    lo,
                    hi,
                    1e-10,
                )
            }
            3 => {
                // radial 3-d convolution:
                // (V*φ)(r) = (1/r) ∫ s V(s) [φ(r-s) - φ(r+s)] ds
                let lo = (r - 8.0 * sigma).max(0.0);
                let hi = (r + 8.0 * sigma).min(radius);
                if hi <= lo {
                    return 0.0;
                }
                if r < 1e-9 {
                    adaptive_simpson(
                        &|s: f64| {
                            raw(s) * gauss_norm * (s * s / (sigma * sigma))
                                * (-0.5 * (s / sigma).powi(2)).exp()
                        },
                        lo,
                        hi,
                        1e-10,
                    )
                } else {
                    adaptive_simpson(
                        &|s: f64| {
                            let km = (-0.5 * ((r - s) / sigma).powi(2)).exp();
                            let kp = (-0.5 * ((r + s) / sigma).powi(2)).exp();
                            raw(s) * s * gauss_norm * (km - kp)
                        },
                        lo,
                        hi,
                        1e-10,
                    ) / r
                }
            }
            _ => unreachable!(),
        }
    };
    let values: Vec<f64> = radii.iter().map(|&r| smooth(r)).collect();
    let value_at_zero = smooth(0.0);
    Ok(RadialPotential::Tabulated {
        table: PairPotential::new(
            radii,
            values,
            value_at_zero,
            InterpRule::Cubic,
            DecayTail::ZeroBeyondRange,
        )?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn shell3(ir: f64, uv: f64) -> CutoffProfile {
        CutoffProfile::shell(3, ir, uv, 1.0)
    }

    #[test]
    fn closed_form_zero_coupling_and_limits() {
        assert_eq!(veff_pair_closed_form(1.3, 0.0, 2.0, 0.0, 5.0).unwrap(), 0.0);
        // r = 0 limit: -(αα/8π²)(Λ-κ)
        let v0 = veff_pair_closed_form(0.0, 1.0, 1.0, 0.5, 5.0).unwrap();
        assert_relative_eq!(v0, -(4.5) / (8.0 * PI * PI), epsilon = 1e-14);
        assert!(veff_pair_closed_form(1.0, 1.0, 1.0, 2.0, 2.0).is_err());
        assert!(veff_pair_closed_form(-1.0, 1.0, 1.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn dirichlet_tail_reproduces_coulomb() {
        // κ = 0, Λ → ∞: r·V(r) → -αiαj/(16π) because ∫_0^∞ sin t/t = π/2.
        let r = 2.0;
        let v = veff_pair_closed_form(r, 1.0, 1.0, 0.0, 4000.0).unwrap();
        assert_relative_eq!(r * v, -1.0 / (16.0 * PI), max_relative = 1e-3);
    }

    #[test]
    fn quadrature_matches_closed_form_shell_d3() {
        let p = shell3(0.5, 5.0);
        for &r in &[0.01, 0.3, 1.0, 4.0, 17.0, 80.0] {
            let q = veff_pair_quadrature(&p, &p, r, 1.2, 0.7).unwrap();
            let c = veff_pair_closed_form(r, 1.2, 0.7, 0.5, 5.0).unwrap();
            assert_relative_eq!(q, c, max_relative = 1e-8);
        }
        // r = 0 kernel limit agrees too
        let q0 = veff_pair_quadrature(&p, &p, 0.0, 1.0, 1.0).unwrap();
        let c0 = veff_pair_closed_form(0.0, 1.0, 1.0, 0.5, 5.0).unwrap();
        assert_relative_eq!(q0, c0, max_relative = 1e-10);
    }

    #[test]
    fn disjoint_supports_vanish_and_symmetry() {
        let p1 = shell3(0.5, 1.0);
        let p2 = shell3(2.0, 3.0);
        assert_eq!(veff_pair_quadrature(&p1, &p2, 1.0, 1.0, 1.0).unwrap(), 0.0);
        let p3 = shell3(0.4, 2.5);
        let a = veff_pair_quadrature(&p1, &p3, 0.8, 1.0, 1.0).unwrap();
        let b = veff_pair_quadrature(&p3, &p1, 0.8, 1.0, 1.0).unwrap();
        assert_relative_eq!(a, b, epsilon = 1e-15);
    }

    #[test]
    fn infrared_divergent_profile_is_rejected() {
        // d = 1 shell reaching k = 0 in ρ̂ form: λ̂²/ω ~ 1/k² not integrable
        let p = CutoffProfile::shell(1, 0.0, 2.0, 1.0);
        let err = veff_pair_quadrature(&p, &p, 1.0, 1.0, 1.0);
        assert!(matches!(err, Err(CoreError::InfraredDivergence(_))));
        let rep = p.integrability().unwrap();
        assert!(!rep.l2_over_omega.finite);
    }

    #[test]
    fn veff_total_cases() {
        let p = shell3(0.5, 5.0);
        let sys1 = ParticleSystem::symmetric(1, 3, 1.0, 1.0, p.clone(), RadialPotential::Zero);
        assert_eq!(veff_total(&[0.0, 0.0, 0.0], &sys1).unwrap(), 0.0);

        let sys2 = ParticleSystem::symmetric(2, 3, 1.0, 1.0, p.clone(), RadialPotential::Zero);
        let x = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0];
        let tot = veff_total(&x, &sys2).unwrap();
        let pair = veff_pair_quadrature(&p, &p, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(tot, 2.0 * pair, epsilon = 1e-14);

        // translation invariance
        let shifted = [3.0, -1.0, 2.0, 4.0, -1.0, 2.0];
        assert_relative_eq!(veff_total(&shifted, &sys2).unwrap(), tot, epsilon = 1e-12);
    }

    #[test]
    fn self_energy_shell_closed_form() {
        // d = 3 shell, ρ̂ form: ∫λ̂²/ω dk = 4π A² (Λ-κ) with A² = 1/(2π)³,
        // so G_per_particle = -(Λ-κ)/(8π²)·(1/2)... directly:
        // G_j = -(1/4)·(Λ-κ)/(2π²).
        let (ir, uv) = (0.5, 5.0);
        let sys = ParticleSystem::symmetric(
            2,
            3,
            1.0,
            0.7,
            shell3(ir, uv),
            RadialPotential::Zero,
        );
        let se = self_energy_constant(&sys).unwrap();
        let gj = -(uv - ir) / (2.0 * PI * PI) / 4.0;
        assert_relative_eq!(se.g, 2.0 * gj, max_relative = 1e-9);
        assert!(se.g < 0.0);
        // ‖λ̂‖² = (Λ²-κ²)/(4π²)
        let l2 = (uv * uv - ir * ir) / (4.0 * PI * PI);
        assert_relative_eq!(se.per_particle[0].l2_sq, l2, max_relative = 1e-9);

        // G is coupling-independent
        let mut sys2 = sys.clone();
        sys2.couplings = vec![3.0, -1.0];
        let se2 = self_energy_constant(&sys2).unwrap();
        assert_eq!(se.g, se2.g);
    }

    #[test]
    fn zero_profiles_give_zero_self_energy() {
        let mut p = shell3(0.5, 5.0);
        p.amplitude = 0.0;
        let sys = ParticleSystem::symmetric(3, 3, 1.0, 1.0, p, RadialPotential::Zero);
        let se = self_energy_constant(&sys).unwrap();
        assert_eq!(se.g, 0.0);
    }

    #[test]
    fn w2_check_shell_attractive_passes_repulsive_fails() {
        let p = shell3(0.5, 5.0);
        let w = PairPotential::tabulate_from_profiles(&p, &p, 20.0, 1024).unwrap();
        let rep = check_w_conditions(&w, &[0.1, 0.5, 1.0]).unwrap();
        assert!(rep.all_pass, "attractive shell V_eff must satisfy (W2): {rep:?}");

        // repulsive sign: flip the tabulation
        let mut flipped = w.clone();
        flipped.values.iter_mut().for_each(|v| *v = -*v);
        flipped.value_at_zero = -flipped.value_at_zero;
        let rep2 = check_w_conditions(&flipped, &[0.1, 0.5, 1.0]).unwrap();
        assert!(!rep2.all_pass);

        // identically zero W fails the strict inequality
        let radii: Vec<f64> = (1..=64).map(|i| i as f64 * 0.1).collect();
        let zeros = vec![0.0; 64];
        let wz = PairPotential::new(radii, zeros, 0.0, InterpRule::Linear, DecayTail::ZeroBeyondRange)
            .unwrap();
        let rep3 = check_w_conditions(&wz, &[0.5]).unwrap();
        assert!(!rep3.all_pass);
    }

    #[test]
    fn w2_resolution_error() {
        let radii: Vec<f64> = (1..=32).map(|i| i as f64 * 0.5).collect();
        let values: Vec<f64> = radii.iter().map(|r| -(-r).exp()).collect();
        let w = PairPotential::new(radii, values, -1.0, InterpRule::Linear, DecayTail::ZeroBeyondRange)
            .unwrap();
        assert!(matches!(
            check_w_conditions(&w, &[0.1]),
            Err(CoreError::Resolution(_))
        ));
    }

    #[test]
    fn mollify_coulomb_tail_bound_and_cap() {
        let v = RadialPotential::CoulombLike {
            amplitude: -1.0,
            core_radius: 0.5,
        };
        let rt = 8.0;
        let out = mollify_potential(&v, 1, rt, 100.0, 0.05).unwrap();
        // beyond the truncation radius the original tail survives untouched:
        // sup_{|x|>R} |V - V_R| = 1/R (exact for the 1/r tail)
        let err_at = |r: f64| (v.eval(r) - out.eval(r)).abs();
        assert_relative_eq!(err_at(rt + 1.0), 1.0 / (rt + 1.0), max_relative = 1e-2);
        assert!(err_at(2.0 * rt) <= 1.0 / rt + 1e-9);

        // capping bounds the output
        let capped = mollify_potential(&v, 1, rt, 1.2, 0.05).unwrap();
        if let RadialPotential::Tabulated { table } = &capped {
            assert!(table.values.iter().all(|v| v.abs() <= 1.2 + 1e-6));
            assert!(table.value_at_zero.abs() <= 1.2 + 1e-6);
        } else {
            panic!("expected tabulated output");
        }

        // smooth compactly supported input far inside the truncation radius
        // is reproduced up to smoothing tolerance
        let g = RadialPotential::GaussianWell { depth: 1.0, width: 1.0 };
        let out2 = mollify_potential(&g, 1, 12.0, 100.0, 0.02).unwrap();
        for &r in &[0.0, 0.5, 1.0, 2.0] {
            assert_relative_eq!(out2.eval(r), g.eval(r), epsilon = 2e-3);
        }
        assert!(matches!(
            mollify_potential(&g, 1, -1.0, 1.0, 0.1),
            Err(CoreError::Domain(_))
        ));
        assert!(matches!(
            mollify_potential(&g, 1, 1.0, 1.0, 0.0),
            Err(CoreError::Domain(_))
        ));
    }

    #[test]
    fn pair_potential_eval_and_tail() {
        let radii = vec![0.5, 1.0, 2.0, 4.0, 8.0];
        let values: Vec<f64> = radii.iter().map(|r| -1.0 / r).collect();
        let w = PairPotential::new(radii, values, -3.0, InterpRule::Cubic, DecayTail::PowerFit)
            .unwrap();
        assert_eq!(w.eval(0.0), -3.0);
        assert_relative_eq!(w.eval(1.0), -1.0, epsilon = 1e-12);
        // power tail extrapolates ~ -1/r
        assert_relative_eq!(w.eval(16.0), -1.0 / 16.0, max_relative = 1e-6);
        let wz = PairPotential::new(
            w.radii.clone(),
            w.values.clone(),
            -3.0,
            InterpRule::Linear,
            DecayTail::ZeroBeyondRange,
        )
        .unwrap();
        assert_eq!(wz.eval(16.0), 0.0);
    }
}
