//! Bose-Hubbard parameters for two ultracold bosons in a three-well optical
//! lattice, from first principles.
//!
//! The pipeline: Bloch bands of the sinusoidal lattice ([`bands`]) feed a
//! finite-boundary Wannier construction ([`wannier`]), from which hopping,
//! onsite and interaction parameters are computed ([`bhparams`]). The
//! interaction parameter is improved through the analytic two-body spectrum
//! of a harmonic trap ([`busch`]) and an anharmonicity correction factor.
//! The resulting six-level two-boson models ([`bhmodel`]) are validated by
//! fitting against a 1D exact-diagonalization reference ([`oracle1d`])
//! through the two-step optimal-parameter fit ([`fit`]).
//!
//! Everything internal uses lattice units `hbar = m = k0 = 1` (recoil energy
//! `E_r = 1/2`, lattice constant `a = pi`); [`lattice::LatticeConfig`]
//! carries the SI anchors for conversions.
//!
//! The `hubfit` binary drives batch sweeps and CSV emission; each major
//! capability also has a runnable example under `examples/`.

pub mod bands;
pub mod bhmodel;
pub mod bhparams;
pub mod busch;
pub mod config;
pub mod driver;
pub mod error;
pub mod fit;
pub mod lattice;
pub mod linalg;
pub mod oracle1d;
pub mod output;
pub mod wannier;

pub use error::{Error, Result};
pub use lattice::{DepthUnit, LatticeConfig, PotentialKind};
pub use wannier::BoundaryChoice;
