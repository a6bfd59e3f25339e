//! Bounded test functions: finite Blaschke products, their Taylor
//! coefficients, and their pullbacks to `Ω_γ` through the affine map.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::disk::{self, check_gamma, CoefficientSeries};
use crate::error::{Error, Result};

/// Zeros must stay this far inside the unit circle.
pub const ZERO_MARGIN: f64 = 1e-6;

/// Radius of the disk random zeros are drawn from.
pub const RANDOM_ZERO_RADIUS: f64 = 0.9;

/// Largest degree of a randomly drawn product.
pub const RANDOM_MAX_DEGREE: usize = 6;

/// `rotation · Π (a_j - z)/(1 - conj(a_j) z)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlaschkeSpec {
    zeros: Vec<Complex64>,
    rotation: Complex64,
}

impl BlaschkeSpec {
    pub fn new(zeros: Vec<Complex64>, rotation: Complex64) -> Result<Self> {
        for z in &zeros {
            if z.norm().is_nan() || z.norm() >= 1.0 - ZERO_MARGIN {
                return Err(Error::domain("|zero|", z.norm(), "|zero| < 1 - 1e-6"));
            }
        }
        let drift = (rotation.norm() - 1.0).abs();
        if drift.is_nan() || drift >= 1e-12 {
            return Err(Error::domain(
                "|rotation|",
                rotation.norm(),
                "|rotation| = 1",
            ));
        }
        Ok(Self { zeros, rotation })
    }

    /// Single Möbius factor `(a - z)/(1 - a z)` with real `a`.
    pub fn single(a: f64) -> Result<Self> {
        Self::new(vec![Complex64::new(a, 0.0)], Complex64::new(1.0, 0.0))
    }

    /// Random product with `1..=6` zeros drawn uniformly from the disk of
    /// radius 0.9 and a uniformly distributed rotation.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let degree = rng.gen_range(1..=RANDOM_MAX_DEGREE);
        let zeros = (0..degree)
            .map(|_| {
                let r = RANDOM_ZERO_RADIUS * rng.gen::<f64>().sqrt();
                let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(r, theta)
            })
            .collect();
        let rotation = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        Self { zeros, rotation }
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn rotation(&self) -> Complex64 {
        self.rotation
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Direct evaluation of the product.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(self.rotation, |acc, a| acc * (a - z) / (1.0 - a.conj() * z))
    }
}

/// Taylor coefficients about the origin through `order`.
///
/// Each factor multiplies the running series by `a - z` and then divides by
/// `1 - conj(a) z` through the recurrence `y_n = x_n + conj(a) y_{n-1}`.
pub fn blaschke_taylor(spec: &BlaschkeSpec, order: usize) -> Result<CoefficientSeries> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[0] = spec.rotation;
    for a in &spec.zeros {
        for n in (0..=order).rev() {
            let prev = if n > 0 {
                coeffs[n - 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            coeffs[n] = a * coeffs[n] - prev;
        }
        let ac = a.conj();
        for n in 1..=order {
            let carry = ac * coeffs[n - 1];
            coeffs[n] += carry;
        }
    }
    CoefficientSeries::bounded(0.0, coeffs)
}

/// Expansion of `g ∘ Φ` about the center of `Ω_γ`, where `Φ(z) = γ + (1-γ) z`
/// and `g` is given by its unit-disk series: `a_n ↦ a_n (1-γ)^n`.
pub fn compose_affine_pullback(
    series: &CoefficientSeries,
    gamma: f64,
) -> Result<CoefficientSeries> {
    check_gamma(gamma)?;
    if series.gamma() != 0.0 {
        return Err(Error::Contract(format!(
            "pullback expects a unit-disk series, got gamma = {}",
            series.gamma()
        )));
    }
    let base = 1.0 - gamma;
    let coeffs = series
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c * disk::pow_scale(base, n))
        .collect();
    let out = if series.is_bounded() {
        CoefficientSeries::bounded(gamma, coeffs)?
    } else {
        CoefficientSeries::polynomial(gamma, coeffs)?
    };
    out.with_tail_cap(series.tail_cap())
}

/// Worst excess of `|a_n|` over its coefficient bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientReport {
    /// `max_n (|a_n| - (1-γ)^n (1-|a_0|^2))` over `1 <= n <= order`; zero
    /// when the series has no such index.
    pub max_violation: f64,
    pub worst_index: Option<usize>,
}

pub fn check_coefficient_lemma(series: &CoefficientSeries) -> CoefficientReport {
    let a0 = series.coeffs()[0].norm().min(1.0);
    let mut report = CoefficientReport {
        max_violation: 0.0,
        worst_index: None,
    };
    for (n, c) in series.coeffs().iter().enumerate().skip(1) {
        let bound = disk::pow_scale(1.0 - series.gamma(), n) * (1.0 - a0 * a0);
        let excess = c.norm() - bound;
        if report.worst_index.is_none() || excess > report.max_violation {
            report = CoefficientReport {
                max_violation: excess,
                worst_index: Some(n),
            };
        }
    }
    report
}

/// Derivative bound at the origin for the unit-disk function behind the
/// series: `|g^(n)(0)|/n! <= 1 - |g(0)|^2`. Returns the worst excess.
pub fn check_derivative_bound_at_origin(series: &CoefficientSeries) -> CoefficientReport {
    let moduli = series.normalized_moduli();
    let bound = 1.0 - moduli[0].min(1.0).powi(2);
    moduli.iter().enumerate().skip(1).fold(
        CoefficientReport {
            max_violation: 0.0,
            worst_index: None,
        },
        |best, (n, m)| {
            let excess = m - bound;
            if best.worst_index.is_none() || excess > best.max_violation {
                CoefficientReport {
                    max_violation: excess,
                    worst_index: Some(n),
                }
            } else {
                best
            }
        },
    )
}

/// `count` seeded Blaschke products pulled back to `Ω_γ`, cycling through
/// `gammas` in order.
pub fn random_pullbacks(
    seed: u64,
    count: usize,
    gammas: &[f64],
    order: usize,
) -> Result<Vec<(BlaschkeSpec, CoefficientSeries)>> {
    if gammas.is_empty() {
        return Err(Error::Contract("at least one gamma is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let spec = BlaschkeSpec::random(&mut rng);
            let unit = blaschke_taylor(&spec, order)?;
            let pulled = compose_affine_pullback(&unit, gammas[i % gammas.len()])?;
            Ok((spec, pulled))
        })
        .collect()
}
