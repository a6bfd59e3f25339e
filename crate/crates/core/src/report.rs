//! Output records, figure data and the verification suite.
//!
//! CSV output writes a header row followed by data rows, with every number
//! printed to 15 significant digits. JSON output is a single object whose
//! fields mirror the record.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use serde::Serialize;

use crate::disk::{Normalization, ShiftedDisk};
use crate::error::Result;
use crate::extremal::{self, ExtremalParams, MarginTable, ResidualKind, NEAR_ONE};
use crate::operators::{self, target_bound, BoundKind, MajorantValue};
use crate::radius::{self, RadiusProblem, RootCertificate};
use crate::testfn;
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Decimal rendering with 15 significant digits; scientific notation only
/// for very large or very small magnitudes.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.14e}");
    let exponent: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    if (-6..15).contains(&exponent) {
        format!("{:.*}", (14 - exponent) as usize, v)
    } else {
        sci
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_sig).unwrap_or_default()
}

/// Something that can be written as CSV or JSON.
pub trait Table {
    fn to_csv(&self) -> String;
    fn to_json(&self) -> serde_json::Value;

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json())
                    .expect("records serialize to JSON");
                s.push('\n');
                s
            }
        }
    }
}

pub fn emit_table(table: &impl Table, format: Format, path: &Path) -> io::Result<()> {
    std::fs::write(path, table.render(format))
}

/// A solved radius problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootRecord {
    #[serde(flatten)]
    pub problem: RadiusProblem,
    #[serde(flatten)]
    pub certificate: RootCertificate,
}

impl Table for RootRecord {
    fn to_csv(&self) -> String {
        let (gamma, beta, m) = match self.problem {
            RadiusProblem::CesaroUnitDisk { gamma } => (Some(gamma), None, None),
            RadiusProblem::Bernardi { beta } => (None, Some(beta), None),
            RadiusProblem::BernardiVanishing { beta, m } => (None, Some(beta), Some(m)),
            RadiusProblem::BernardiUnitDisk { gamma, beta } => (Some(gamma), Some(beta), None),
            RadiusProblem::Cesaro | RadiusProblem::Dft => (None, None, None),
        };
        let c = &self.certificate;
        format!(
            "problem,gamma,beta,m,root,lo,hi,residual_at_root,iterations\n{},{},{},{},{},{},{},{},{}\n",
            self.problem.slug(),
            opt(gamma),
            opt(beta),
            m.map(|m| m.to_string()).unwrap_or_default(),
            fmt_sig(c.root),
            fmt_sig(c.bracket.0),
            fmt_sig(c.bracket.1),
            fmt_sig(c.residual_at_root),
            c.iterations
        )
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// A majorant of the extremal family at one point, with its bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MajorantRecord {
    #[serde(flatten)]
    pub operator: BoundKind,
    pub normalization: Normalization,
    pub gamma: f64,
    pub a: f64,
    pub rho: f64,
    #[serde(flatten)]
    pub majorant: MajorantValue,
    pub bound: f64,
}

impl MajorantRecord {
    /// Evaluate `kind` on the extremal series with parameters `(a, γ)`.
    pub fn evaluate(
        kind: BoundKind,
        params: ExtremalParams,
        rho: f64,
        tol: f64,
        normalization: Normalization,
    ) -> Result<Self> {
        let series = extremal::extremal_series_for(params, rho, tol)?;
        let majorant = match (kind, normalization) {
            (BoundKind::Dft, scheme) => operators::dft_majorant_with(&series, rho, tol, scheme)?,
            _ => operators::majorant(kind, &series, rho, tol)?,
        };
        Ok(Self {
            operator: kind,
            normalization,
            gamma: params.gamma(),
            a: params.a(),
            rho,
            majorant,
            bound: target_bound(kind, rho)?,
        })
    }
}

impl Table for MajorantRecord {
    fn to_csv(&self) -> String {
        let beta = match self.operator {
            BoundKind::Bernardi { beta } => Some(beta),
            _ => None,
        };
        let normalization = match self.normalization {
            Normalization::PerIndex => "per-index",
            Normalization::PerOuter => "per-outer",
        };
        format!(
            "operator,beta,normalization,gamma,a,rho,value,truncation_order,tail_bound,bound\n{},{},{},{},{},{},{},{},{},{}\n",
            self.operator.name(),
            opt(beta),
            normalization,
            fmt_sig(self.gamma),
            fmt_sig(self.a),
            fmt_sig(self.rho),
            fmt_sig(self.majorant.value),
            self.majorant.truncation_order,
            fmt_sig(self.majorant.tail_bound),
            fmt_sig(self.bound)
        )
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

impl Table for MarginTable {
    fn to_csv(&self) -> String {
        let mut out = String::from("a,rho,margin\n");
        for (a, row) in self.a_grid.iter().zip(&self.margins) {
            for (rho, m) in self.rho_grid.iter().zip(row) {
                let _ = writeln!(out, "{},{},{}", fmt_sig(*a), fmt_sig(*rho), fmt_sig(*m));
            }
        }
        out
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Numeric columns for one figure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureData {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table for FigureData {
    fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt_sig(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

pub const FIGURE_GAMMAS: [f64; 5] = [0.0, 0.2, 0.4, 0.5, 0.7];
pub const CIRCLE_SAMPLES: usize = 512;

/// Boundary circles of the shifted disks, `(γ, θ, Re z, Im z)` per row.
pub fn figure_circles() -> FigureData {
    let mut rows = Vec::with_capacity(FIGURE_GAMMAS.len() * CIRCLE_SAMPLES);
    for gamma in FIGURE_GAMMAS {
        let disk = ShiftedDisk::new(gamma).expect("figure gammas are valid");
        for j in 0..CIRCLE_SAMPLES {
            let theta = TAU * j as f64 / CIRCLE_SAMPLES as f64;
            let z = disk.boundary_point(theta);
            rows.push(vec![gamma, theta, z.re, z.im]);
        }
    }
    FigureData {
        name: "circles",
        columns: vec!["gamma", "theta", "re", "im"],
        rows,
    }
}

fn grid(samples: usize) -> impl Iterator<Item = f64> {
    (0..samples).map(move |j| j as f64 / samples as f64)
}

/// `-2(1/(1-ρ) + log(1-ρ)/ρ)` on `ρ = j/samples`, which is 0 at `ρ = 0`.
pub fn figure_concavity(samples: usize) -> FigureData {
    let rows = grid(samples)
        .map(|rho| {
            let (_, tail) =
                extremal::envelope_factors(BoundKind::Cesaro, rho).expect("grid lies in [0, 1)");
            vec![rho, -2.0 * tail]
        })
        .collect();
    FigureData {
        name: "concavity",
        columns: vec!["rho", "second_derivative"],
        rows,
    }
}

/// `3(1-ρ) log(1-ρ) + 2ρ` on `ρ = j/samples`.
pub fn figure_radius_equation(samples: usize) -> FigureData {
    let rows = grid(samples)
        .map(|rho| vec![rho, 3.0 * (1.0 - rho) * (-rho).ln_1p() + 2.0 * rho])
        .collect();
    FigureData {
        name: "radius_equation",
        columns: vec!["rho", "value"],
        rows,
    }
}

/// Indices `j` where `values[j]` and `values[j+1]` have strictly opposite signs.
pub fn sign_changes(values: &[f64]) -> Vec<usize> {
    values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] * w[1] < 0.0)
        .map(|(j, _)| j)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">")]
    Exceeds,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: Relation::AtMost,
            threshold,
            passed: value <= threshold,
        }
    }

    pub fn exceeds(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: Relation::Exceeds,
            threshold,
            passed: value > threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Table for VerificationReport {
    fn to_csv(&self) -> String {
        let mut out = String::from("check,value,relation,threshold,passed\n");
        for c in &self.checks {
            let relation = match c.relation {
                Relation::AtMost => "<=",
                Relation::Exceeds => ">",
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.name,
                fmt_sig(c.value),
                relation,
                fmt_sig(c.threshold),
                c.passed
            );
        }
        out
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

pub const VERIFY_GAMMAS: [f64; 4] = [0.0, 0.25, 0.5, 0.75];
pub const VERIFY_BETAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const LEMMA_SAMPLES: usize = 1000;
pub const INEQUALITY_SAMPLES: usize = 200;
pub const RHO_POINTS: usize = 20;
pub const TAYLOR_ORDER: usize = 200;
pub const PROPERTY_SLACK: f64 = 1e-9;
pub const ATTAINMENT_TOL: f64 = 1e-12;

/// Operators paired with the radius each is proved up to.
pub fn operator_radii() -> Result<Vec<(BoundKind, f64)>> {
    let mut out = vec![
        (BoundKind::PlainBohr, 1.0 / 3.0),
        (
            BoundKind::Cesaro,
            radius::radius_for(RadiusProblem::Cesaro)?.root,
        ),
    ];
    for beta in VERIFY_BETAS {
        out.push((
            BoundKind::Bernardi { beta },
            radius::radius_for(RadiusProblem::Bernardi { beta })?.root,
        ));
    }
    out.push((BoundKind::Dft, radius::radius_for(RadiusProblem::Dft)?.root));
    Ok(out)
}

fn label(kind: BoundKind) -> String {
    match kind {
        BoundKind::Bernardi { beta } => format!("bernardi(beta={beta})"),
        other => other.name().to_string(),
    }
}

/// Run the full property suite for `seed`.
pub fn run_verification(seed: u64) -> Result<VerificationReport> {
    let mut checks = Vec::new();

    let samples = testfn::random_pullbacks(seed, LEMMA_SAMPLES, &VERIFY_GAMMAS, TAYLOR_ORDER)?;
    let lemma = samples
        .iter()
        .map(|(_, s)| testfn::check_coefficient_lemma(s).max_violation)
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check::at_most("coefficient-bound", lemma, PROPERTY_SLACK));
    let origin = samples
        .iter()
        .map(|(_, s)| testfn::check_derivative_bound_at_origin(s).max_violation)
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check::at_most(
        "derivative-bound-at-origin",
        origin,
        PROPERTY_SLACK,
    ));

    let radii = operator_radii()?;

    for &(kind, _) in &radii {
        if kind == BoundKind::PlainBohr {
            continue;
        }
        let mut worst: f64 = 0.0;
        for rho in [0.1, 0.3, 0.5, 0.9] {
            let unimodular =
                crate::CoefficientSeries::bounded(0.0, vec![Complex64::new(1.0, 0.0)])?;
            let v = operators::majorant(kind, &unimodular, rho, 1e-14)?;
            worst = worst.max((v.value - target_bound(kind, rho)?).abs());
        }
        checks.push(Check::at_most(
            format!("attainment:{}", label(kind)),
            worst,
            ATTAINMENT_TOL,
        ));
    }

    let functions = testfn::random_pullbacks(
        seed.wrapping_add(1),
        INEQUALITY_SAMPLES,
        &VERIFY_GAMMAS,
        TAYLOR_ORDER,
    )?;
    for &(kind, radius) in &radii {
        let mut worst = f64::NEG_INFINITY;
        for (_, series) in &functions {
            for j in 0..RHO_POINTS {
                let rho = radius * j as f64 / (RHO_POINTS - 1) as f64;
                let v = operators::majorant(kind, series, rho, 1e-12)?;
                worst = worst.max(v.upper() - target_bound(kind, rho)?);
            }
        }
        checks.push(Check::at_most(
            format!("inequality:{}", label(kind)),
            worst,
            PROPERTY_SLACK,
        ));
    }

    for &(kind, radius) in &radii {
        for gamma in [0.0, 0.3, 0.6] {
            let below = extremal::sweep_margins(kind, gamma, &NEAR_ONE, &[radius - 0.01])?;
            checks.push(Check::at_most(
                format!("below-radius:{}:gamma={gamma}", label(kind)),
                below.max_margin(),
                PROPERTY_SLACK,
            ));
            let above =
                extremal::sweep_margins(kind, gamma, &NEAR_ONE, &[radius + 0.01, radius + 0.05])?;
            for j in 0..2 {
                checks.push(Check::exceeds(
                    format!(
                        "above-radius:{}:gamma={gamma}:rho={}",
                        label(kind),
                        fmt_sig(above.rho_grid[j])
                    ),
                    above.column_max(j),
                    1e-6,
                ));
            }
        }
    }

    let mut closed = 0.0_f64;
    for i in 1..=10 {
        for j in 1..=10 {
            let (a, rho) = (i as f64 / 11.0, j as f64 / 11.0);
            let params = ExtremalParams::new(a, 0.4)?;
            let series = extremal::extremal_series_for(params, rho, 1e-13)?;
            let v = operators::cesaro_majorant(&series, rho, 1e-13)?;
            closed = closed.max((extremal::extremal_cesaro_closed_form(a, rho)? - v.value).abs());
        }
    }
    checks.push(Check::at_most("cesaro-closed-form", closed, 1e-10));

    let mut g3 = 0.0_f64;
    for i in 1..=9 {
        let a = i as f64 / 10.0;
        let expected = 2.0 * (1.0 - a).powi(2) / (a - 3.0);
        g3 = g3.max((extremal::residual_g(ResidualKind::G3, a, 1.0 / 3.0)? - expected).abs());
    }
    checks.push(Check::at_most("g3-at-one-third", g3, 1e-12));

    let fig3 = figure_radius_equation(1000);
    let values: Vec<f64> = fig3.rows.iter().skip(1).map(|r| r[1]).collect();
    checks.push(Check::at_most(
        "figure-radius-equation-sign-changes",
        (sign_changes(&values).len() as f64 - 1.0).abs(),
        0.0,
    ));
    let fig2 = figure_concavity(1000);
    checks.push(Check::at_most(
        "figure-concavity-max",
        fig2.rows
            .iter()
            .map(|r| r[1])
            .fold(f64::NEG_INFINITY, f64::max),
        0.0,
    ));

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        seed,
        passed,
        checks,
    })
}

/// Record of a radius solve, for `radius` output.
pub fn solve_record(problem: RadiusProblem) -> Result<RootRecord> {
    Ok(RootRecord {
        problem,
        certificate: radius::radius_for(problem)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.5), "0.500000000000000");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_sig(-12.5), "-12.5000000000000");
        assert_eq!(fmt_sig(9.9999999999999999), "10.0000000000000");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.5e-20), "1.50000000000000e-20");
        for v in [0.5335892339199949, 123.456, 1e-5, 7.0e14] {
            let back: f64 = fmt_sig(v).parse().unwrap();
            assert!(((back - v) / v).abs() < 1e-14);
        }
    }

    #[test]
    fn single_cell_margin_table_is_two_lines() {
        let t = extremal::sweep_margins(BoundKind::Dft, 0.0, &[0.5], &[0.2]).unwrap();
        let csv = t.to_csv();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.starts_with("a,rho,margin\n0.500000000000000,0.200000000000000,"));
    }

    #[test]
    fn dft_root_json() {
        let rec = solve_record(RadiusProblem::Dft).unwrap();
        let s = rec.render(Format::Json);
        assert!(s.contains("\"root\": 0.3333333333333333"), "{s}");
        assert!(s.contains("\"problem\": \"dft\""));
        let csv = rec.to_csv();
        assert!(csv.starts_with("problem,gamma,beta,m,root"));
        assert!(csv
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("dft,,,,0.333333333333333,"));
    }

    #[test]
    fn circle_samples() {
        let fig = figure_circles();
        assert_eq!(fig.rows.len(), 5 * 512);
        for row in &fig.rows {
            let disk = ShiftedDisk::new(row[0]).unwrap();
            let z = Complex64::new(row[2], row[3]);
            assert!(((z - disk.center()).norm() - disk.radius()).abs() < 1e-12);
        }
        assert_eq!(fig.rows[0][2], 1.0);
    }

    #[test]
    fn radius_equation_changes_sign_once_at_root() {
        let fig = figure_radius_equation(1000);
        let values: Vec<f64> = fig.rows.iter().skip(1).map(|r| r[1]).collect();
        let changes = sign_changes(&values);
        assert_eq!(changes.len(), 1);
        let root = radius::radius_for(RadiusProblem::Cesaro).unwrap().root;
        let j = changes[0] + 1;
        assert!(fig.rows[j][0] < root && root < fig.rows[j + 1][0]);
    }

    #[test]
    fn concavity_figure_is_nonpositive() {
        let fig = figure_concavity(1000);
        assert_eq!(fig.rows[0], vec![0.0, 0.0]);
        assert!(fig.rows.iter().all(|r| r[1] <= 0.0));
    }
}
