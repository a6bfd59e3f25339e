//! Numerical laboratory for sharp Bohr-type inequalities on shifted disks.
//!
//! The shifted disk `Ω_γ = { z : |z + γ/(1-γ)| < 1/(1-γ) }` contains the unit
//! disk and touches it at `z = 1`. For functions bounded by one on `Ω_γ` this
//! crate evaluates the majorant series of the Cesàro, Bernardi and
//! discrete-Fourier transforms with certified truncation, solves the radius
//! equations that delimit the inequalities, and reproduces the extremal
//! constructions showing those radii cannot be enlarged.
//!
//! Module map:
//!
//! * [`disk`]: the shifted disk, its affine map to the unit disk, coefficient
//!   series and the coefficient bound for bounded functions.
//! * [`testfn`]: finite Blaschke products pulled back to `Ω_γ`.
//! * [`operators`]: majorant series of the three operators and their bounds.
//! * [`radius`]: radius equations and a certified bisection solver.
//! * [`extremal`]: the Möbius extremal family, residual functions and
//!   sharpness sweeps.
//! * [`report`]: tables, figure data and the verification suite used by the
//!   command line front end.

pub mod disk;
pub mod error;
pub mod extremal;
pub mod operators;
pub mod radius;
pub mod report;
pub mod testfn;

pub use disk::{CoefficientSeries, Normalization, ShiftedDisk};
pub use error::{Error, Result};
pub use extremal::{ExtremalParams, MarginTable};
pub use operators::{BoundKind, MajorantValue};
pub use radius::{RadiusProblem, RootCertificate};
pub use testfn::BlaschkeSpec;

pub use num_complex::Complex64;
