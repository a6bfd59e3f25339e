//! Radius equations and a bracket-preserving bisection solver.
//!
//! Each [`RadiusProblem`] has a residual that is positive below its radius
//! and negative above it. Series residuals are summed directly with the
//! geometric tail bound `x^{N+1}/((N+1+s)(1-x))`, where `s` is the shift in
//! the denominators `n + s`.

use serde::{Deserialize, Serialize};

use crate::disk::check_gamma;
use crate::error::{Error, Result};

pub const BRACKET_LO: f64 = 1e-9;
pub const BRACKET_HI: f64 = 1.0 - 1e-9;
/// Final bracket width.
pub const ROOT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 200;
/// Tail tolerance for series residuals.
pub const SERIES_TAIL_TOL: f64 = 1e-14;
/// Beyond this many terms a series residual falls back to a one-sided bound.
pub const MAX_SERIES_TERMS: usize = 1 << 24;

/// A radius equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "kebab-case")]
pub enum RadiusProblem {
    /// `3(1-x) log(1/(1-x)) = 2x`: Cesàro majorant on the shifted disk.
    #[serde(rename = "cesaro-th1")]
    Cesaro,
    /// `(3+γ)(1-x) log(1/(1-x)) = 2x`: Cesàro majorant of the unit-disk
    /// expansion of a function bounded on `Ω_γ`.
    #[serde(rename = "cesaro-omega")]
    CesaroUnitDisk { gamma: f64 },
    /// `1/β = 2 Σ_{n>=1} x^n/(n+β)`.
    #[serde(rename = "bernardi-th2")]
    Bernardi { beta: f64 },
    /// `x^m/(m+β) = 2 Σ_{n>m} x^n/(n+β)` for functions vanishing to order `m`.
    #[serde(rename = "bernardi-thc")]
    BernardiVanishing { beta: f64, m: u32 },
    /// `1/β = (2/(1+γ)) Σ_{n>=1} x^n/(n+β)`.
    #[serde(rename = "bernardi-omega")]
    BernardiUnitDisk { gamma: f64, beta: f64 },
    /// `3x = 1`.
    Dft,
}

impl RadiusProblem {
    /// Command-line name of the problem.
    pub fn slug(&self) -> &'static str {
        match self {
            RadiusProblem::Cesaro => "cesaro-th1",
            RadiusProblem::CesaroUnitDisk { .. } => "cesaro-omega",
            RadiusProblem::Bernardi { .. } => "bernardi-th2",
            RadiusProblem::BernardiVanishing { .. } => "bernardi-thc",
            RadiusProblem::BernardiUnitDisk { .. } => "bernardi-omega",
            RadiusProblem::Dft => "dft",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            RadiusProblem::Cesaro | RadiusProblem::Dft => Ok(()),
            RadiusProblem::CesaroUnitDisk { gamma } => check_gamma(gamma),
            RadiusProblem::Bernardi { beta } => check_positive_beta(beta),
            RadiusProblem::BernardiVanishing { beta, m } => {
                if beta.is_finite() && beta > -(m as f64) {
                    Ok(())
                } else {
                    Err(Error::domain("beta", beta, "beta > -m"))
                }
            }
            RadiusProblem::BernardiUnitDisk { gamma, beta } => {
                check_gamma(gamma)?;
                check_positive_beta(beta)
            }
        }
    }
}

fn check_positive_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::domain("beta", beta, "beta > 0"))
    }
}

/// A sign-change bracket around a computed root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootCertificate {
    pub root: f64,
    pub bracket: (f64, f64),
    pub residual_at_root: f64,
    pub iterations: usize,
}

impl RootCertificate {
    pub fn width(&self) -> f64 {
        self.bracket.1 - self.bracket.0
    }
}

/// Residual of `problem` at `x` in `(0, 1)`; positive below the radius.
///
/// Close to `x = 1` the Bernardi series cannot be summed to full accuracy;
/// there the partial sum gives a certified upper bound on the residual, which
/// is returned when it is already negative.
pub fn defining_residual(problem: RadiusProblem, x: f64) -> Result<f64> {
    problem.validate()?;
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain("x", x, "0 < x < 1"));
    }
    match problem {
        RadiusProblem::Cesaro => Ok(log_residual(3.0, x)),
        RadiusProblem::CesaroUnitDisk { gamma } => Ok(log_residual(3.0 + gamma, x)),
        RadiusProblem::Bernardi { beta } => series_residual(1.0 / beta, 2.0, beta, x),
        // Divided through by x^m; the zero set in (0, 1) is unchanged.
        RadiusProblem::BernardiVanishing { beta, m } => {
            let shift = m as f64 + beta;
            series_residual(1.0 / shift, 2.0, shift, x)
        }
        RadiusProblem::BernardiUnitDisk { gamma, beta } => {
            series_residual(1.0 / beta, 2.0 / (1.0 + gamma), beta, x)
        }
        RadiusProblem::Dft => Ok(1.0 - 3.0 * x),
    }
}

/// `k (1-x) log(1/(1-x)) - 2x`.
fn log_residual(k: f64, x: f64) -> f64 {
    -k * (1.0 - x) * (-x).ln_1p() - 2.0 * x
}

/// `lead - weight · Σ_{n>=1} x^n/(n+shift)`.
fn series_residual(lead: f64, weight: f64, shift: f64, x: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut n = 0usize;
    loop {
        n += 1;
        power *= x;
        sum += power / (n as f64 + shift);
        let tail = power * x / ((n as f64 + 1.0 + shift) * (1.0 - x));
        if weight * tail < SERIES_TAIL_TOL {
            // Compensate half the remaining tail; the error is then below
            // half the tolerance either way.
            return Ok(lead - weight * (sum + 0.5 * tail));
        }
        if n >= MAX_SERIES_TERMS {
            let upper = lead - weight * sum;
            let lower = upper - weight * tail;
            return if upper < 0.0 {
                Ok(upper)
            } else if lower > 0.0 {
                Ok(lower)
            } else {
                Err(Error::Numeric(format!(
                    "sign of series residual undetermined at x = {x}"
                )))
            };
        }
    }
}

/// Bisection for a root of `f` inside `[lo, hi]`, down to width `tol`.
pub fn solve_bracketed_root(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<RootCertificate> {
    try_solve_bracketed_root(|x| Ok(f(x)), lo, hi, tol)
}

/// [`solve_bracketed_root`] for residuals that can fail.
pub fn try_solve_bracketed_root(
    f: impl Fn(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<RootCertificate> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Contract(format!("invalid bracket [{lo}, {hi}]")));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::domain("tol", tol, "tol > 0"));
    }
    let eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numeric(format!("residual is {v} at x = {x}")))
        }
    };
    let mut flo = eval(lo)?;
    let fhi = eval(hi)?;
    let product = flo * fhi;
    if product.is_nan() || product >= 0.0 {
        return Err(Error::Bracket { lo, hi, flo, fhi });
    }
    let mut iterations = 0;
    while hi - lo > tol {
        if iterations == MAX_ITERATIONS {
            return Err(Error::Numeric(format!(
                "bisection did not reach width {tol:e} in {MAX_ITERATIONS} steps"
            )));
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let fmid = eval(mid)?;
        if fmid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (fmid < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    let root = lo + 0.5 * (hi - lo);
    Ok(RootCertificate {
        root,
        bracket: (lo, hi),
        residual_at_root: eval(root)?,
        iterations,
    })
}

/// Solve `problem` on `[1e-9, 1 - 1e-9]`. The DFT radius is exactly `1/3`.
pub fn radius_for(problem: RadiusProblem) -> Result<RootCertificate> {
    problem.validate()?;
    if problem == RadiusProblem::Dft {
        let root = 1.0 / 3.0;
        return Ok(RootCertificate {
            root,
            bracket: (root - 1e-13, root + 1e-13),
            residual_at_root: defining_residual(problem, root)?,
            iterations: 0,
        });
    }
    try_solve_bracketed_root(
        |x| defining_residual(problem, x),
        BRACKET_LO,
        BRACKET_HI,
        ROOT_TOL,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent roots, computed in extended precision.
    const CESARO_ROOT: f64 = 0.5335892339199949;
    const CESARO_HALF_ROOT: f64 = 0.6434789567977547;
    const BERNARDI_ROOTS: [(f64, f64); 4] = [
        (0.5, 0.7371246496675983),
        (1.0, 0.5828116438658113),
        (2.0, 0.4742779627424644),
        (5.0, 0.3949088694164933),
    ];

    fn assert_certificate(cert: &RootCertificate, problem: RadiusProblem) {
        let (lo, hi) = cert.bracket;
        assert!(cert.width() <= ROOT_TOL, "{cert:?}");
        assert!(cert.residual_at_root.abs() <= 1e-10, "{cert:?}");
        assert!(lo <= cert.root && cert.root <= hi);
        let (flo, fhi) = (
            defining_residual(problem, lo).unwrap(),
            defining_residual(problem, hi).unwrap(),
        );
        assert!(flo * fhi <= 0.0, "{problem:?}: {flo} {fhi}");
    }

    #[test]
    fn linear_residual() {
        let cert = solve_bracketed_root(|x| 1.0 - 3.0 * x, 0.1, 0.9, 1e-12).unwrap();
        assert!((cert.root - 1.0 / 3.0).abs() <= 1e-12);
    }

    #[test]
    fn solver_errors() {
        assert!(matches!(
            solve_bracketed_root(|x| x * x + 1.0, 0.0, 1.0, 1e-12),
            Err(Error::Bracket { .. })
        ));
        assert!(matches!(
            solve_bracketed_root(
                |x| if x > 0.6 { f64::NAN } else { 1.0 - x },
                0.0,
                1.0,
                1e-12
            ),
            Err(Error::Numeric(_))
        ));
        assert!(solve_bracketed_root(|x| x, 1.0, 0.0, 1e-12).is_err());
    }

    #[test]
    fn cesaro_root() {
        let cert = radius_for(RadiusProblem::Cesaro).unwrap();
        assert!((cert.root - 0.533589).abs() <= 5e-6);
        assert!((cert.root - CESARO_ROOT).abs() <= 1e-10);
        assert!(
            defining_residual(RadiusProblem::Cesaro, 0.533589)
                .unwrap()
                .abs()
                < 1e-5
        );
        assert_certificate(&cert, RadiusProblem::Cesaro);
    }

    #[test]
    fn cesaro_unit_disk_roots() {
        let at_zero = radius_for(RadiusProblem::CesaroUnitDisk { gamma: 0.0 }).unwrap();
        let th1 = radius_for(RadiusProblem::Cesaro).unwrap();
        assert!((at_zero.root - th1.root).abs() <= 1e-10);
        let half = RadiusProblem::CesaroUnitDisk { gamma: 0.5 };
        let cert = radius_for(half).unwrap();
        assert!((cert.root - CESARO_HALF_ROOT).abs() <= 1e-10);
        assert_certificate(&cert, half);

        let roots: Vec<f64> = (0..10)
            .map(|i| {
                radius_for(RadiusProblem::CesaroUnitDisk {
                    gamma: i as f64 / 10.0,
                })
                .unwrap()
                .root
            })
            .collect();
        assert!(roots.windows(2).all(|w| w[0] < w[1]));
    }

    fn bisect_closed_form() -> f64 {
        let f = |x: f64| 3.0 * x + 2.0 * (-x).ln_1p();
        let (mut lo, mut hi) = (0.1, 0.99);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn bernardi_roots() {
        let oracle = bisect_closed_form();
        let cert = radius_for(RadiusProblem::Bernardi { beta: 1.0 }).unwrap();
        assert!((cert.root - oracle).abs() <= 1e-8);
        for (beta, expected) in BERNARDI_ROOTS {
            let problem = RadiusProblem::Bernardi { beta };
            let cert = radius_for(problem).unwrap();
            assert!(
                (cert.root - expected).abs() <= 1e-10,
                "{beta}: {}",
                cert.root
            );
            assert_certificate(&cert, problem);
            let vanishing = radius_for(RadiusProblem::BernardiVanishing { beta, m: 0 }).unwrap();
            assert!((vanishing.root - cert.root).abs() <= 1e-10);
            let unit = radius_for(RadiusProblem::BernardiUnitDisk { gamma: 0.0, beta }).unwrap();
            assert!((unit.root - cert.root).abs() <= 1e-10);
        }
    }

    #[test]
    fn vanishing_order_roots() {
        for (beta, m, expected) in [
            (1.0, 1, 0.4742779627424644),
            (1.0, 2, 0.431771791731992),
            (-0.5, 1, 0.7371246496675983),
            (0.5, 3, 0.4189237434137295),
        ] {
            let problem = RadiusProblem::BernardiVanishing { beta, m };
            let cert = radius_for(problem).unwrap();
            assert!(
                (cert.root - expected).abs() <= 1e-10,
                "{problem:?}: {}",
                cert.root
            );
            assert_certificate(&cert, problem);
        }
        assert!(radius_for(RadiusProblem::BernardiVanishing { beta: -1.0, m: 1 }).is_err());
    }

    #[test]
    fn bernardi_unit_disk_roots() {
        for (gamma, beta, expected) in [
            (0.5, 1.0, 0.7126980857149483),
            (0.3, 2.0, 0.5532944229035316),
        ] {
            let cert = radius_for(RadiusProblem::BernardiUnitDisk { gamma, beta }).unwrap();
            assert!((cert.root - expected).abs() <= 1e-10);
        }
    }

    #[test]
    fn dft_root_is_one_third() {
        let cert = radius_for(RadiusProblem::Dft).unwrap();
        assert_eq!(cert.root, 1.0 / 3.0);
        assert_eq!(
            defining_residual(RadiusProblem::Dft, 1.0 / 3.0).unwrap(),
            0.0
        );
        assert_certificate(&cert, RadiusProblem::Dft);
    }

    #[test]
    fn residual_signs_around_roots() {
        for problem in [
            RadiusProblem::Cesaro,
            RadiusProblem::CesaroUnitDisk { gamma: 0.7 },
            RadiusProblem::Bernardi { beta: 0.5 },
            RadiusProblem::BernardiVanishing { beta: 0.5, m: 2 },
            RadiusProblem::BernardiUnitDisk {
                gamma: 0.4,
                beta: 3.0,
            },
            RadiusProblem::Dft,
        ] {
            let r = radius_for(problem).unwrap().root;
            assert!(defining_residual(problem, r / 2.0).unwrap() > 0.0);
            assert!(defining_residual(problem, (1.0 + r) / 2.0).unwrap() < 0.0);
        }
    }

    #[test]
    fn residual_domain() {
        assert!(defining_residual(RadiusProblem::Cesaro, 0.0).is_err());
        assert!(defining_residual(RadiusProblem::Cesaro, 1.0).is_err());
        assert!(defining_residual(RadiusProblem::Bernardi { beta: 0.0 }, 0.5).is_err());
        assert!(defining_residual(RadiusProblem::CesaroUnitDisk { gamma: 1.0 }, 0.5).is_err());
    }

    #[test]
    fn series_residual_near_one_is_negative() {
        let v = defining_residual(RadiusProblem::Bernardi { beta: 1.0 }, BRACKET_HI).unwrap();
        assert!(v < 0.0);
    }
}
