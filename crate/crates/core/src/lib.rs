//! Geometric description of low-energy scattering of two spin-½ fermions.
//!
//! The two s-wave phase shifts (φ, θ) = (2δ₀, 2δ₁) live on a flat torus.
//! This crate builds the spin-space S-matrix from effective-range models,
//! samples their torus trajectories, checks the momentum-inversion (UV/IR)
//! symmetries, verifies the exactly solvable geometric potentials, audits
//! causality (Wigner) constraints and locates S-matrix poles, in three and
//! two spatial dimensions.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod causality;
pub mod cli;
pub mod config;
pub mod ere;
pub mod error;
pub mod geometry;
pub mod integrate;
pub mod poles;
pub mod report;
pub mod spin;
pub mod symmetry;
pub mod torus;

pub use ere::{make_symmetric_model, make_symmetric_model_2d, Channel2D, Channel3D, Family, Table, TwoChannelModel};
pub use error::{Result, ScatterError};
pub use spin::{build_s_operator, build_swap, ComplexOperator4, DensityMatrix4, ProductState, SpinSector};
pub use torus::{Quadrant, TorusPoint, Trajectory};
