//! Majorant series of the plain Bohr sum and of the Cesàro, Bernardi and
//! discrete-Fourier transforms, evaluated on the circle `|γ + (1-γ) z| = ρ`.
//!
//! Every evaluation is a truncated sum together with a certified bound on
//! what was left out, so the true value lies in `[value, value + tail_bound]`.
//! The bound combines two sources: outer terms past the truncation order, and
//! coefficients past the stored order of the series, whose normalized moduli
//! are at most the series' `tail_cap`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disk::{CoefficientSeries, Normalization};
use crate::error::{Error, Result};

/// Upper limit on outer summation length.
pub const MAX_TERMS: usize = 1 << 26;

/// Which transformed majorant, and which bound it is compared to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "operator", rename_all = "kebab-case")]
pub enum BoundKind {
    Cesaro,
    Bernardi { beta: f64 },
    Dft,
    PlainBohr,
}

impl BoundKind {
    pub fn bernardi(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(BoundKind::Bernardi { beta })
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::Cesaro => "cesaro",
            BoundKind::Bernardi { .. } => "bernardi",
            BoundKind::Dft => "dft",
            BoundKind::PlainBohr => "bohr",
        }
    }
}

/// A truncated majorant sum with a certified bound on the omitted part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MajorantValue {
    pub value: f64,
    pub truncation_order: usize,
    pub tail_bound: f64,
}

impl MajorantValue {
    /// Upper end of the enclosure of the infinite sum.
    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if rho.is_nan() || rho < 0.0 {
        Err(Error::domain("rho", rho, "0 <= rho < 1"))
    } else if rho >= 1.0 {
        Err(Error::Divergence { rho })
    } else {
        Ok(())
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::domain("beta", beta, "beta > 0"))
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::domain("tol", tol, "tol > 0"))
    }
}

/// The bound each operator's majorant is compared against.
pub fn target_bound(kind: BoundKind, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(match kind {
        BoundKind::Cesaro => cesaro_bound(rho),
        BoundKind::Bernardi { beta } => {
            check_beta(beta)?;
            1.0 / beta
        }
        BoundKind::Dft => 1.0 / (1.0 - rho),
        BoundKind::PlainBohr => 1.0,
    })
}

/// `(1/ρ) log(1/(1-ρ))`, continued by its limit 1 at `ρ = 0`.
pub(crate) fn cesaro_bound(rho: f64) -> f64 {
    if rho == 0.0 {
        1.0
    } else {
        -(-rho).ln_1p() / rho
    }
}

/// Dispatch on `kind`; the DFT majorant uses the per-index normalization.
pub fn majorant(
    kind: BoundKind,
    series: &CoefficientSeries,
    rho: f64,
    tol: f64,
) -> Result<MajorantValue> {
    match kind {
        BoundKind::Cesaro => cesaro_majorant(series, rho, tol),
        BoundKind::Bernardi { beta } => bernardi_majorant(series, beta, rho, tol),
        BoundKind::Dft => dft_majorant(series, rho, tol),
        BoundKind::PlainBohr => bohr_majorant(series, rho, tol),
    }
}

/// `Σ |a_n| (ρ/(1-γ))^n`.
pub fn bohr_majorant(series: &CoefficientSeries, rho: f64, tol: f64) -> Result<MajorantValue> {
    check_rho(rho)?;
    check_tol(tol)?;
    within_tol(bohr_at_order(series, rho, series.order())?, series, tol)
}

/// `Σ_n 1/(n+1) (Σ_{k<=n} |a_k|/(1-γ)^k) ρ^n`.
pub fn cesaro_majorant(series: &CoefficientSeries, rho: f64, tol: f64) -> Result<MajorantValue> {
    check_rho(rho)?;
    check_tol(tol)?;
    let m = Moduli::per_index(series);
    let fixed = m.cap * pow(rho, m.order() + 1) / (1.0 - rho);
    let outer = |n: usize| m.prefix_total() * pow(rho, n + 1) / ((n as f64 + 2.0) * (1.0 - rho));
    let n = choose_outer_order(m.order(), fixed, outer, tol)?;
    cesaro_at_order(series, rho, n)
}

/// `Σ |a_n| ρ^n / ((n+β)(1-γ)^n)` for `β > 0`.
pub fn bernardi_majorant(
    series: &CoefficientSeries,
    beta: f64,
    rho: f64,
    tol: f64,
) -> Result<MajorantValue> {
    check_beta(beta)?;
    check_rho(rho)?;
    check_tol(tol)?;
    within_tol(
        bernardi_at_order(series, beta, rho, series.order())?,
        series,
        tol,
    )
}

/// `Σ_n (Σ_{k<=n} |a_k|/(1-γ)^k) ρ^n`, bounded by `1/(1-ρ)` below `ρ = 1/3`.
pub fn dft_majorant(series: &CoefficientSeries, rho: f64, tol: f64) -> Result<MajorantValue> {
    dft_majorant_with(series, rho, tol, Normalization::PerIndex)
}

/// DFT majorant under an explicit normalization.
///
/// `PerOuter` evaluates `Σ_n (Σ_{k<=n} |a_k|) ρ^n/(1-γ)^n`, which converges
/// only for `ρ < 1-γ` unless the series vanishes identically.
pub fn dft_majorant_with(
    series: &CoefficientSeries,
    rho: f64,
    tol: f64,
    scheme: Normalization,
) -> Result<MajorantValue> {
    check_rho(rho)?;
    check_tol(tol)?;
    let (m, q) = dft_parts(series, rho, scheme)?;
    if m.prefix_total() == 0.0 && m.cap == 0.0 {
        return dft_at_order(series, rho, m.order(), scheme);
    }
    let fixed = m.cap * pow(rho, m.order() + 1) / ((1.0 - q) * (1.0 - q));
    let outer = |n: usize| m.prefix_total() * pow(q, n + 1) / (1.0 - q);
    let n = choose_outer_order(m.order(), fixed, outer, tol)?;
    dft_at_order(series, rho, n, scheme)
}

/// Majorant truncated at outer order `n`, with its tail bound.
pub fn majorant_at_order(
    kind: BoundKind,
    series: &CoefficientSeries,
    rho: f64,
    n: usize,
) -> Result<MajorantValue> {
    check_rho(rho)?;
    match kind {
        BoundKind::Cesaro => cesaro_at_order(series, rho, n),
        BoundKind::Bernardi { beta } => {
            check_beta(beta)?;
            bernardi_at_order(series, beta, rho, n)
        }
        BoundKind::Dft => dft_at_order(series, rho, n, Normalization::PerIndex),
        BoundKind::PlainBohr => bohr_at_order(series, rho, n),
    }
}

/// `b_n = Σ_{k<=n} a_k exp(-2πi n k/(n+1))`.
pub fn dft_coefficient_transform(coeffs: &[Complex64]) -> Vec<Complex64> {
    (0..coeffs.len())
        .map(|n| {
            let period = (n + 1) as u128;
            coeffs[..=n]
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    let turns = ((n as u128 * k as u128) % period) as f64 / period as f64;
                    a * Complex64::from_polar(1.0, -TAU * turns)
                })
                .sum()
        })
        .collect()
}

fn pow(x: f64, n: usize) -> f64 {
    crate::disk::pow_scale(x, n)
}

struct Moduli {
    values: Vec<f64>,
    cap: f64,
}

impl Moduli {
    fn per_index(series: &CoefficientSeries) -> Self {
        Self {
            values: series.normalized_moduli(),
            cap: series.tail_cap(),
        }
    }

    fn raw(series: &CoefficientSeries) -> Self {
        Self {
            values: series.coeffs().iter().map(|c| c.norm()).collect(),
            cap: series.tail_cap(),
        }
    }

    fn order(&self) -> usize {
        self.values.len() - 1
    }

    fn prefix_total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Largest modulus an index past `n` may have.
    fn max_beyond(&self, n: usize) -> f64 {
        self.values
            .iter()
            .skip(n + 1)
            .fold(self.cap, |acc, &v| acc.max(v))
    }
}

/// Smallest outer order `>= order` with `fixed + outer(n) <= tol`.
fn choose_outer_order(
    order: usize,
    fixed: f64,
    outer: impl Fn(usize) -> f64,
    tol: f64,
) -> Result<usize> {
    if fixed >= tol {
        return Err(Error::InsufficientOrder {
            order,
            tail: fixed,
            tol,
        });
    }
    let budget = tol - fixed;
    let mut n = order;
    while outer(n) > budget {
        n += 1;
        if n > MAX_TERMS {
            return Err(Error::Numeric(format!(
                "more than {MAX_TERMS} outer terms needed for tolerance {tol:e}"
            )));
        }
    }
    Ok(n)
}

fn within_tol(v: MajorantValue, series: &CoefficientSeries, tol: f64) -> Result<MajorantValue> {
    if v.tail_bound > tol {
        Err(Error::InsufficientOrder {
            order: series.order(),
            tail: v.tail_bound,
            tol,
        })
    } else {
        Ok(v)
    }
}

fn bohr_at_order(series: &CoefficientSeries, rho: f64, n: usize) -> Result<MajorantValue> {
    let m = Moduli::per_index(series);
    let value = m
        .values
        .iter()
        .take(n + 1)
        .enumerate()
        .map(|(k, c)| c * pow(rho, k))
        .sum();
    let tail_bound = m.max_beyond(n) * pow(rho, n + 1) / (1.0 - rho);
    Ok(MajorantValue {
        value,
        truncation_order: n,
        tail_bound,
    })
}

fn bernardi_at_order(
    series: &CoefficientSeries,
    beta: f64,
    rho: f64,
    n: usize,
) -> Result<MajorantValue> {
    let m = Moduli::per_index(series);
    let value = m
        .values
        .iter()
        .take(n + 1)
        .enumerate()
        .map(|(k, c)| c * pow(rho, k) / (k as f64 + beta))
        .sum();
    let tail_bound = m.max_beyond(n) * pow(rho, n + 1) / ((n as f64 + 1.0 + beta) * (1.0 - rho));
    Ok(MajorantValue {
        value,
        truncation_order: n,
        tail_bound,
    })
}

fn cesaro_at_order(series: &CoefficientSeries, rho: f64, n: usize) -> Result<MajorantValue> {
    let m = Moduli::per_index(series);
    let mut prefix = 0.0;
    let mut power = 1.0;
    let mut value = 0.0;
    for j in 0..=n {
        if let Some(c) = m.values.get(j) {
            prefix += c;
        }
        value += prefix * power / (j as f64 + 1.0);
        power *= rho;
    }
    let tail_bound = m.prefix_total() * pow(rho, n + 1) / ((n as f64 + 2.0) * (1.0 - rho))
        + m.cap * pow(rho, m.order() + 1) / (1.0 - rho);
    Ok(MajorantValue {
        value,
        truncation_order: n,
        tail_bound,
    })
}

/// Moduli and the effective ratio of the outer geometric factor.
fn dft_parts(series: &CoefficientSeries, rho: f64, scheme: Normalization) -> Result<(Moduli, f64)> {
    match scheme {
        Normalization::PerIndex => Ok((Moduli::per_index(series), rho)),
        Normalization::PerOuter => {
            let m = Moduli::raw(series);
            let q = rho / (1.0 - series.gamma());
            if q >= 1.0 && (m.prefix_total() > 0.0 || m.cap > 0.0) {
                return Err(Error::Divergence { rho });
            }
            Ok((m, q))
        }
    }
}

fn dft_at_order(
    series: &CoefficientSeries,
    rho: f64,
    n: usize,
    scheme: Normalization,
) -> Result<MajorantValue> {
    let (m, q) = dft_parts(series, rho, scheme)?;
    if m.prefix_total() == 0.0 && m.cap == 0.0 {
        return Ok(MajorantValue {
            value: 0.0,
            truncation_order: n,
            tail_bound: 0.0,
        });
    }
    let mut prefix = 0.0;
    let mut power = 1.0;
    let mut value = 0.0;
    for j in 0..=n {
        if let Some(c) = m.values.get(j) {
            prefix += c;
        }
        value += prefix * power;
        power *= q;
    }
    let tail_bound = m.prefix_total() * pow(q, n + 1) / (1.0 - q)
        + m.cap * pow(rho, m.order() + 1) / ((1.0 - q) * (1.0 - q));
    Ok(MajorantValue {
        value,
        truncation_order: n,
        tail_bound,
    })
}
