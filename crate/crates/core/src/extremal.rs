//! The Möbius extremal family `f = ψ ∘ Φ`, with `ψ(w) = (a - w)/(1 - a w)`
//! and `Φ(z) = γ + (1-γ) z`, and the machinery showing that each radius is
//! best possible.
//!
//! Writing each extremal majorant as `bound + (1-a)·D(ρ) + G(a, ρ)` with
//! `G = O((1-a)^2)`, the sign of `D` decides the sign of the margin as
//! `a → 1⁻`, and `D` changes sign exactly at the radius.

use rayon::prelude::*;
use serde::Serialize;

use crate::disk::{check_gamma, pow_scale, CoefficientSeries};
use crate::error::{Error, Result};
use crate::operators::{self, cesaro_bound, check_beta, check_rho, BoundKind};
use crate::Complex64;

/// Truncation tolerance used for sharpness margins.
pub const MARGIN_TOL: f64 = 1e-12;

/// The "a near 1" grid used in sharpness sweeps.
pub const NEAR_ONE: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];

const SERIES_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremalParams {
    a: f64,
    gamma: f64,
}

impl ExtremalParams {
    pub fn new(a: f64, gamma: f64) -> Result<Self> {
        check_a(a)?;
        check_gamma(gamma)?;
        Ok(Self { a, gamma })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("a", a, "0 < a < 1"))
    }
}

fn check_open_rho(rho: f64) -> Result<()> {
    check_rho(rho)?;
    if rho > 0.0 {
        Ok(())
    } else {
        Err(Error::domain("rho", rho, "0 < rho < 1"))
    }
}

/// Coefficient moduli `A_0 = a`, `A_n = a^{n-1}(1-a^2)(1-γ)^n`.
///
/// Signs are dropped; every majorant only sees moduli. Normalized moduli
/// past `order` are at most `a^order (1-a^2)`, which becomes the tail cap.
pub fn extremal_coeffs(params: ExtremalParams, order: usize) -> CoefficientSeries {
    let ExtremalParams { a, gamma } = params;
    let lead = 1.0 - a * a;
    let coeffs = (0..=order)
        .map(|n| {
            let modulus = if n == 0 {
                a
            } else {
                pow_scale(a, n - 1) * lead * pow_scale(1.0 - gamma, n)
            };
            Complex64::new(modulus, 0.0)
        })
        .collect();
    CoefficientSeries::polynomial(gamma, coeffs)
        .and_then(|s| s.with_tail_cap(pow_scale(a, order) * lead))
        .expect("extremal parameters were validated")
}

/// Extremal series long enough for every operator majorant at `rho` to be
/// certified within `tol`.
pub fn extremal_series_for(
    params: ExtremalParams,
    rho: f64,
    tol: f64,
) -> Result<CoefficientSeries> {
    check_rho(rho)?;
    let lead = 1.0 - params.a * params.a;
    let fixed =
        |m: usize| pow_scale(params.a, m) * lead * pow_scale(rho, m + 1) / (1.0 - rho).powi(2);
    let mut order = 0;
    while fixed(order) > 0.5 * tol {
        order += 1;
        if order > operators::MAX_TERMS {
            return Err(Error::Numeric(format!("no feasible order for rho = {rho}")));
        }
    }
    Ok(extremal_coeffs(params, order))
}

/// Closed form of the Cesàro majorant of the extremal family:
/// `-(1+2a) log(1-ρ)/ρ + (1+a) log(1-aρ)/(aρ)`. Independent of `γ`.
pub fn extremal_cesaro_closed_form(a: f64, rho: f64) -> Result<f64> {
    check_a(a)?;
    check_open_rho(rho)?;
    Ok((1.0 + 2.0 * a) * cesaro_bound(rho) + (1.0 + a) * log_over(a, rho))
}

/// `log(1 - aρ)/(aρ)`, with a series branch for tiny `a`.
fn log_over(a: f64, rho: f64) -> f64 {
    let t = a * rho;
    if a < 1e-4 {
        -(1.0 + t / 2.0 + t * t / 3.0)
    } else {
        (-t).ln_1p() / t
    }
}

/// Which residual term of the sharpness decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "residual", rename_all = "kebab-case")]
pub enum ResidualKind {
    /// Cesàro: `-(3-a) log(1-ρ)/ρ - 2(1-a)/(1-ρ) + (1+a) log(1-aρ)/(aρ)`.
    G1,
    /// Bernardi: `Σ_{n>=1} ((1-a^2) a^{n-1} - 2(1-a)) ρ^n/(n+β)`.
    G2 { beta: f64 },
    /// DFT: `2a - (1+a)(1-ρ)/(1-aρ)`.
    G3,
}

pub fn residual_g(kind: ResidualKind, a: f64, rho: f64) -> Result<f64> {
    check_a(a)?;
    check_open_rho(rho)?;
    Ok(match kind {
        ResidualKind::G1 => {
            (3.0 - a) * cesaro_bound(rho) - 2.0 * (1.0 - a) / (1.0 - rho)
                + (1.0 + a) * log_over(a, rho)
        }
        ResidualKind::G2 { beta } => {
            check_beta(beta)?;
            g2_sum(a, beta, rho)
        }
        ResidualKind::G3 => 2.0 * a - (1.0 + a) * (1.0 - rho) / (1.0 - a * rho),
    })
}

/// `(1-a) Σ ((1+a) a^{n-1} - 2) ρ^n/(n+β)`; each bracket lies in `[-2, 0]`.
fn g2_sum(a: f64, beta: f64, rho: f64) -> f64 {
    let one_minus_a = 1.0 - a;
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut a_power = 1.0;
    let mut n = 0usize;
    loop {
        n += 1;
        power *= rho;
        sum += ((1.0 + a) * a_power - 2.0) * power / (n as f64 + beta);
        a_power *= a;
        let tail = 2.0 * one_minus_a * power * rho / ((n as f64 + 1.0 + beta) * (1.0 - rho));
        if tail < SERIES_TOL || n >= operators::MAX_TERMS {
            return one_minus_a * sum;
        }
    }
}

/// `Σ_{n>=1} ρ^n/(n+β)` to within `SERIES_TOL`.
pub(crate) fn shifted_log_series(rho: f64, beta: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut n = 0usize;
    loop {
        n += 1;
        power *= rho;
        sum += power / (n as f64 + beta);
        let tail = power * rho / ((n as f64 + 1.0 + beta) * (1.0 - rho));
        if tail < SERIES_TOL || n >= operators::MAX_TERMS {
            return sum;
        }
    }
}

/// The two factors of the upper envelope `φ(a, ρ) = a·lead + (1-a^2)·tail`
/// that bounds a majorant over all functions with `|a_0| = a`.
pub fn envelope_factors(kind: BoundKind, rho: f64) -> Result<(f64, f64)> {
    check_rho(rho)?;
    Ok(match kind {
        BoundKind::Cesaro => {
            let lead = cesaro_bound(rho);
            (lead, 1.0 / (1.0 - rho) - lead)
        }
        BoundKind::Bernardi { beta } => {
            check_beta(beta)?;
            (1.0 / beta, shifted_log_series(rho, beta))
        }
        BoundKind::Dft => (1.0 / (1.0 - rho), rho / ((1.0 - rho) * (1.0 - rho))),
        BoundKind::PlainBohr => (1.0, rho / (1.0 - rho)),
    })
}

/// `φ(a, ρ)` for `a` in `[0, 1]`.
pub fn upper_envelope(kind: BoundKind, a: f64, rho: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::domain("a", a, "0 <= a <= 1"));
    }
    let (lead, tail) = envelope_factors(kind, rho)?;
    Ok(a * lead + (1.0 - a * a) * tail)
}

/// Extremal majorant minus the operator's bound at `rho`.
pub fn sharpness_margin(kind: BoundKind, params: ExtremalParams, rho: f64) -> Result<f64> {
    let series = extremal_series_for(params, rho, MARGIN_TOL)?;
    let value = operators::majorant(kind, &series, rho, MARGIN_TOL)?;
    Ok(value.value - operators::target_bound(kind, rho)?)
}

/// Grid of sharpness margins, rows indexed by `a` and columns by `ρ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginTable {
    pub operator: BoundKind,
    pub gamma: f64,
    pub a_grid: Vec<f64>,
    pub rho_grid: Vec<f64>,
    pub margins: Vec<Vec<f64>>,
}

impl MarginTable {
    pub fn max_margin(&self) -> f64 {
        self.margins
            .iter()
            .flatten()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest margin in column `j`.
    pub fn column_max(&self, j: usize) -> f64 {
        self.margins
            .iter()
            .map(|row| row[j])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) fn check_grid(name: &'static str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Contract(format!("{name} grid is empty")));
    }
    if let Some(bad) = grid.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
        return Err(Error::domain(name, *bad, "grid points inside (0, 1)"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Contract(format!(
            "{name} grid is not strictly increasing"
        )));
    }
    Ok(())
}

pub fn sweep_margins(
    kind: BoundKind,
    gamma: f64,
    a_grid: &[f64],
    rho_grid: &[f64],
) -> Result<MarginTable> {
    check_gamma(gamma)?;
    check_grid("a", a_grid)?;
    check_grid("rho", rho_grid)?;
    let margins = a_grid
        .par_iter()
        .map(|&a| {
            let params = ExtremalParams::new(a, gamma)?;
            rho_grid
                .iter()
                .map(|&rho| sharpness_margin(kind, params, rho))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MarginTable {
        operator: kind,
        gamma,
        a_grid: a_grid.to_vec(),
        rho_grid: rho_grid.to_vec(),
        margins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{cesaro_majorant, dft_majorant, majorant};
    use crate::radius::{radius_for, RadiusProblem};

    fn params(a: f64, gamma: f64) -> ExtremalParams {
        ExtremalParams::new(a, gamma).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let s = extremal_coeffs(params(0.5, 0.0), 3);
        assert_eq!(s.coeffs()[1].re, 0.75);
        assert_eq!(s.coeffs()[2].re, 0.375);
        let s = extremal_coeffs(params(1.0 - 1e-12, 0.4), 5);
        assert!(s.coeffs()[1..].iter().all(|c| c.norm() < 1e-11));
        assert!(ExtremalParams::new(1.0, 0.0).is_err());
        assert!(ExtremalParams::new(0.0, 0.0).is_err());
    }

    #[test]
    fn closed_form_matches_series() {
        for gamma in [0.0, 0.3, 0.7] {
            let s = extremal_series_for(params(0.5, gamma), 0.4, 1e-13).unwrap();
            let v = cesaro_majorant(&s, 0.4, 1e-13).unwrap();
            let closed = extremal_cesaro_closed_form(0.5, 0.4).unwrap();
            assert!((v.value - closed).abs() < 1e-10);
        }
    }

    #[test]
    fn closed_form_limits() {
        for rho in [0.1, 0.5, 0.9] {
            let v = extremal_cesaro_closed_form(1.0 - 1e-10, rho).unwrap();
            assert!((v - cesaro_bound(rho)).abs() < 1e-8);
        }
        let rho = 1e-6;
        let a = 0.3;
        let s = extremal_series_for(params(a, 0.0), rho, 1e-14).unwrap();
        let series = cesaro_majorant(&s, rho, 1e-14).unwrap().value;
        assert!((extremal_cesaro_closed_form(a, rho).unwrap() - series).abs() < 1e-8);
        // Tiny a switches to the series branch; both sides must agree.
        let near = extremal_cesaro_closed_form(1.0001e-4, 0.7).unwrap();
        let below = extremal_cesaro_closed_form(0.9999e-4, 0.7).unwrap();
        assert!((near - below).abs() < 1e-7);
        assert!(extremal_cesaro_closed_form(0.5, 1.0).is_err());
    }

    #[test]
    fn g1_matches_its_summation_form() {
        for (a, rho) in [(0.2f64, 0.3f64), (0.7, 0.6), (0.95, 0.85)] {
            let mut sum = 0.0;
            for n in 1..4000 {
                let n_f = n as f64;
                sum += ((3.0 - a) / n_f - 2.0 * (1.0 - a) - (1.0 + a) * a.powi(n - 1) / n_f)
                    * rho.powi(n - 1);
            }
            let g = residual_g(ResidualKind::G1, a, rho).unwrap();
            assert!((g - sum).abs() < 1e-10, "{a} {rho}: {g} vs {sum}");
        }
    }

    #[test]
    fn decompositions_reassemble_majorants() {
        let (a, rho, beta) = (0.8, 0.45, 1.5);
        let s = extremal_series_for(params(a, 0.2), rho, 1e-14).unwrap();

        let d1 = 2.0 / (1.0 - rho) + 3.0 * (-rho).ln_1p() / rho;
        let g1 = residual_g(ResidualKind::G1, a, rho).unwrap();
        let c = majorant(BoundKind::Cesaro, &s, rho, 1e-14).unwrap().value;
        assert!((c - (cesaro_bound(rho) + (1.0 - a) * d1 + g1)).abs() < 1e-12);

        let big_s = shifted_log_series(rho, beta);
        let g2 = residual_g(ResidualKind::G2 { beta }, a, rho).unwrap();
        let b = majorant(BoundKind::Bernardi { beta }, &s, rho, 1e-14)
            .unwrap()
            .value;
        assert!((b - (1.0 / beta + (1.0 - a) * (2.0 * big_s - 1.0 / beta) + g2)).abs() < 1e-12);

        let g3 = residual_g(ResidualKind::G3, a, rho).unwrap();
        let d = dft_majorant(&s, rho, 1e-14).unwrap().value;
        assert!((d - (1.0 + g3) / (1.0 - rho)).abs() < 1e-12);
    }

    #[test]
    fn g3_examples() {
        let g = residual_g(ResidualKind::G3, 0.5, 1.0 / 3.0).unwrap();
        assert!((g + 0.2).abs() < 1e-15);
        for rho in [0.1, 0.5, 0.9] {
            assert!(
                residual_g(ResidualKind::G3, 1.0 - 1e-12, rho)
                    .unwrap()
                    .abs()
                    < 1e-10
            );
        }
    }

    #[test]
    fn g1_decays_quadratically() {
        let at = |a: f64| residual_g(ResidualKind::G1, a, 0.6).unwrap() / (1.0 - a).powi(2);
        assert!(at(0.99).abs() <= 4.0 * at(0.9).abs());
    }

    #[test]
    fn g3_is_linear_in_one_minus_a_away_from_one_third() {
        // Only at ρ = 1/3 does the linear coefficient (3ρ-1)/(1-ρ) vanish.
        let ratio = |a: f64| residual_g(ResidualKind::G3, a, 0.6).unwrap() / (1.0 - a);
        let limit = (3.0 * 0.6 - 1.0) / (1.0 - 0.6);
        assert!((ratio(0.9999) - limit).abs() < 1e-3);
    }

    #[test]
    fn g3_increases_in_rho() {
        for a in [0.1, 0.5, 0.9, 0.999] {
            let h = 1e-3;
            let mut rho = h;
            while rho + h < 1.0 {
                let lo = residual_g(ResidualKind::G3, a, rho).unwrap();
                let hi = residual_g(ResidualKind::G3, a, rho + h).unwrap();
                assert!(hi > lo);
                rho += h;
            }
        }
    }

    #[test]
    fn envelope_is_concave_in_a() {
        for kind in [
            BoundKind::Cesaro,
            BoundKind::Bernardi { beta: 1.0 },
            BoundKind::Dft,
        ] {
            for rho in [0.05, 0.3, 0.6, 0.95] {
                let h = 0.05;
                for i in 1..20 {
                    let a = i as f64 * h;
                    let second = upper_envelope(kind, a + h, rho).unwrap()
                        - 2.0 * upper_envelope(kind, a, rho).unwrap()
                        + upper_envelope(kind, a - h, rho).unwrap();
                    assert!(second <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn envelope_matches_saturated_series() {
        // c_0 = a, c_n = 1 - a^2: the coefficient bound with equality.
        let (a, rho) = (0.6, 0.4);
        let mut coeffs = vec![Complex64::new(a, 0.0)];
        coeffs.extend(std::iter::repeat_n(Complex64::new(1.0 - a * a, 0.0), 200));
        let s = CoefficientSeries::polynomial(0.0, coeffs)
            .unwrap()
            .with_tail_cap(1.0 - a * a)
            .unwrap();
        for kind in [
            BoundKind::Cesaro,
            BoundKind::Bernardi { beta: 2.0 },
            BoundKind::Dft,
        ] {
            let v = majorant(kind, &s, rho, 1e-12).unwrap();
            let phi = upper_envelope(kind, a, rho).unwrap();
            assert!(
                v.value <= phi + 1e-12 && phi <= v.upper() + 1e-12,
                "{kind:?}"
            );
        }
    }

    #[test]
    fn margin_examples() {
        let rho0 = radius_for(RadiusProblem::Cesaro).unwrap().root;
        let m = sharpness_margin(BoundKind::Cesaro, params(0.999, 0.3), rho0 - 0.01).unwrap();
        assert!(m <= 0.0);
        let m = sharpness_margin(BoundKind::Cesaro, params(0.9999, 0.3), rho0 + 0.02).unwrap();
        assert!(m > 0.0);
        let m = sharpness_margin(BoundKind::Dft, params(0.9999, 0.0), 0.35).unwrap();
        assert!(m > 0.0);
    }

    #[test]
    fn sweep_shapes_and_signs() {
        let one = sweep_margins(BoundKind::Cesaro, 0.2, &[0.5], &[0.3]).unwrap();
        assert_eq!(
            one.margins,
            vec![vec![sharpness_margin(
                BoundKind::Cesaro,
                params(0.5, 0.2),
                0.3
            )
            .unwrap()]]
        );

        let rho0 = radius_for(RadiusProblem::Cesaro).unwrap().root;
        let rho_grid = [rho0 - 0.05, rho0 - 0.01, rho0 + 0.01, rho0 + 0.05];
        let t = sweep_margins(BoundKind::Cesaro, 0.3, &NEAR_ONE, &rho_grid).unwrap();
        assert!(t.column_max(0) <= 0.0 && t.column_max(1) <= 0.0);
        assert!(t.column_max(2) > 0.0 && t.column_max(3) > 0.0);
        assert!(t.margins[3][2] > 0.0);

        let rho1 = radius_for(RadiusProblem::Bernardi { beta: 1.0 })
            .unwrap()
            .root;
        assert!((rho1 - 0.5830).abs() < 1e-3);
        let t = sweep_margins(
            BoundKind::Bernardi { beta: 1.0 },
            0.0,
            &NEAR_ONE,
            &[rho1 - 0.01, rho1 + 0.01],
        )
        .unwrap();
        assert!(t.column_max(0) <= 0.0 && t.column_max(1) > 0.0);
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        assert!(sweep_margins(BoundKind::Dft, 0.0, &[], &[0.3]).is_err());
        assert!(sweep_margins(BoundKind::Dft, 0.0, &[0.5, 0.4], &[0.3]).is_err());
        assert!(sweep_margins(BoundKind::Dft, 0.0, &[0.5], &[1.0]).is_err());
        assert!(sweep_margins(BoundKind::Dft, 1.0, &[0.5], &[0.3]).is_err());
    }
}
