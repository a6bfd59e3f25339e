//! The shifted disk `Ω_γ`, coefficient series about its center and the
//! coefficient bound satisfied by functions bounded by one.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Slack absorbed by coefficient checks against bounds that hold exactly.
pub const BOUND_SLACK: f64 = 1e-9;

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && (0.0..1.0).contains(&gamma) {
        Ok(())
    } else {
        Err(Error::domain("gamma", gamma, "0 <= gamma < 1"))
    }
}

/// The disk `|z + γ/(1-γ)| < 1/(1-γ)`.
///
/// Every member contains the unit disk and has `z = 1` as its rightmost
/// boundary point. `γ = 0` is the unit disk itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftedDisk {
    gamma: f64,
    center: f64,
    radius: f64,
}

impl ShiftedDisk {
    pub fn new(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self {
            gamma,
            center: -gamma / (1.0 - gamma),
            radius: 1.0 / (1.0 - gamma),
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Center of the disk; always real and nonpositive.
    pub fn center(&self) -> Complex64 {
        Complex64::new(self.center, 0.0)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center()).norm() < self.radius
    }

    /// Affine map `z ↦ γ + (1-γ) z` carrying `Ω_γ` onto the unit disk.
    ///
    /// Total on the plane: `|w| < 1` exactly when `z` lies in the disk.
    pub fn map_to_unit_disk(&self, z: Complex64) -> Complex64 {
        self.gamma + (1.0 - self.gamma) * z
    }

    /// Inverse of [`map_to_unit_disk`](Self::map_to_unit_disk).
    pub fn map_from_unit_disk(&self, w: Complex64) -> Complex64 {
        (w - self.gamma) / (1.0 - self.gamma)
    }

    /// Point of the boundary circle at angle `theta` about the center.
    pub fn boundary_point(&self, theta: f64) -> Complex64 {
        self.center() + Complex64::from_polar(self.radius, theta)
    }
}

/// Bound `(1-γ)^n (1-|a_0|^2)` on the `n`-th coefficient, `n >= 1`, of a
/// function bounded by one on `Ω_γ` expanded about the disk's center.
pub fn coefficient_bound(a0_mod: f64, gamma: f64, n: usize) -> Result<f64> {
    check_gamma(gamma)?;
    if !(0.0..=1.0).contains(&a0_mod) {
        return Err(Error::domain("|a_0|", a0_mod, "0 <= |a_0| <= 1"));
    }
    if n == 0 {
        return Err(Error::Contract(
            "coefficient bound holds for n >= 1 only".into(),
        ));
    }
    Ok(pow_scale(1.0 - gamma, n) * (1.0 - a0_mod * a0_mod))
}

/// How coefficient moduli are scaled by powers of `1-γ` inside a prefix sum.
///
/// `PerIndex` divides `|a_k|` by `(1-γ)^k`, which turns the coefficients back
/// into those of the unit-disk function `f ∘ Φ⁻¹`. `PerOuter` leaves `|a_k|`
/// alone; the caller divides the whole prefix sum at level `n` by `(1-γ)^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    #[default]
    PerIndex,
    PerOuter,
}

/// Truncated expansion `Σ a_n (z + γ/(1-γ))^n` about the center of `Ω_γ`.
///
/// `tail_cap` bounds the normalized moduli `|a_n|/(1-γ)^n` of every
/// coefficient beyond `order`. A cap of zero means the expansion is an exact
/// polynomial. Series tagged `bounded` come from a function bounded by one
/// and satisfy `|a_n| <= (1-γ)^n` for every stored index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSeries {
    gamma: f64,
    coeffs: Vec<Complex64>,
    tail_cap: f64,
    bounded: bool,
}

impl CoefficientSeries {
    /// Exact polynomial: coefficients past the last stored one vanish.
    pub fn polynomial(gamma: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        check_gamma(gamma)?;
        if coeffs.is_empty() {
            return Err(Error::Contract("a series needs at least a_0".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Numeric("non-finite coefficient".into()));
        }
        Ok(Self {
            gamma,
            coeffs,
            tail_cap: 0.0,
            bounded: false,
        })
    }

    /// Truncated expansion of a function bounded by one on `Ω_γ`.
    ///
    /// The unstored tail is capped by `1 - |a_0|^2`, which the coefficient
    /// bound guarantees for every `n >= 1`.
    pub fn bounded(gamma: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        let mut series = Self::polynomial(gamma, coeffs)?;
        for (n, c) in series.coeffs.iter().enumerate() {
            let limit = pow_scale(1.0 - gamma, n) + BOUND_SLACK;
            if c.norm() > limit {
                return Err(Error::Contract(format!(
                    "|a_{n}| = {} exceeds (1-gamma)^{n} for a function bounded by one",
                    c.norm()
                )));
            }
        }
        let a0 = series.coeffs[0].norm().min(1.0);
        series.tail_cap = 1.0 - a0 * a0;
        series.bounded = true;
        Ok(series)
    }

    /// Replace the tail cap with a tighter (or looser) known bound.
    pub fn with_tail_cap(mut self, cap: f64) -> Result<Self> {
        if !(cap.is_finite() && cap >= 0.0) {
            return Err(Error::domain("tail_cap", cap, "finite and >= 0"));
        }
        self.tail_cap = cap;
        Ok(self)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail_cap(&self) -> f64 {
        self.tail_cap
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    /// Modulus of `a_n` under the given normalization.
    pub fn normalized_modulus(&self, n: usize, scheme: Normalization) -> Result<f64> {
        let c = self
            .coeffs
            .get(n)
            .ok_or_else(|| Error::Contract(format!("index {n} beyond order {}", self.order())))?;
        Ok(match scheme {
            Normalization::PerIndex => scale_down(c.norm(), 1.0 - self.gamma, n),
            Normalization::PerOuter => c.norm(),
        })
    }

    /// All moduli `|a_n|/(1-γ)^n`.
    pub fn normalized_moduli(&self) -> Vec<f64> {
        let base = 1.0 - self.gamma;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| scale_down(c.norm(), base, n))
            .collect()
    }
}

/// `base^n` for `base` in `(0, 1]`.
pub(crate) fn pow_scale(base: f64, n: usize) -> f64 {
    match i32::try_from(n) {
        Ok(k) => base.powi(k),
        Err(_) => (n as f64 * base.ln()).exp(),
    }
}

/// `value / base^n` without underflowing the divisor.
pub(crate) fn scale_down(value: f64, base: f64, n: usize) -> f64 {
    if value == 0.0 || n == 0 {
        return value;
    }
    let scale = pow_scale(base, n);
    if scale > 1e-280 {
        value / scale
    } else {
        (value.ln() - n as f64 * base.ln()).exp()
    }
}
