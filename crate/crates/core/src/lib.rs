//! Numerical laboratory for energy-critical equivariant wave maps from
//! `R^{1+2}` into surfaces of revolution.
//!
//! The crate evolves radial Cauchy data `(psi, psi_t)` for
//!
//! ```text
//! psi_tt - psi_rr - psi_r / r + l^2 f(psi) / r^2 = 0,      f = g * g',
//! ```
//!
//! measures the associated energy and `H x L^2` functionals, fits the
//! concentration scale of collapsing bubbles, and probes the exterior-energy
//! behaviour of the linearized flow in general ambient dimension.
//!
//! Module map:
//! - [`grid`], [`target`], [`field`]: grids, target geometries, sampled states
//! - [`functionals`]: energies, norms, degree, Bogomolny split
//! - [`profile`]: harmonic-map ground states `Q` and their certificates
//! - [`evolve`]: leapfrog evolution of the full and 4d-reduced equations
//! - [`linwave`]: free radial waves and exterior-energy (channel) probes
//! - [`modulation`]: scale fitting, radiation surgery, bubbling extraction
//! - [`diagnostics`]: virial balance, cone-energy decay, time selection

pub mod diagnostics;
pub mod error;
pub mod evolve;
pub mod field;
pub mod functionals;
pub mod grid;
pub mod linwave;
pub mod modulation;
pub mod numerics;
pub mod profile;
pub mod regression;
pub mod target;

pub use error::{Error, Result};
pub use field::{EnergyReport, FieldState};
pub use grid::{GridSpacing, RadialGrid};
pub use target::{TargetGeometry, TargetKind};
