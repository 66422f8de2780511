//! Subspace perturbation toolkit: involutions, direct rotations, numerical
//! ranges and a priori bounds for off-diagonal perturbations of Hermitian
//! matrices.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! bottom of this file fix `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod bounds;
pub mod config;
pub mod error;
pub mod matrix;
pub mod numrange;
pub mod rotation;
pub mod scalar;
pub mod spectral;
pub mod scenarios;
pub mod split;
pub mod sweep;
pub mod verify;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, ComplexVector, HermitianOperator, MatrixJson};
pub use scalar::Real;
pub use spectral::{EigenSystem, Interval, Involution, PolarParts};
pub use split::{Disposition, Side, SpectralSplit, SplitJson};

pub type Mat = ComplexMatrix<f64>;
pub type Vector = ComplexVector<f64>;
pub type Hermitian = HermitianOperator<f64>;
pub type Eigen = EigenSystem<f64>;
pub type Inv = Involution<f64>;
pub type Polar = PolarParts<f64>;
pub type Split = SpectralSplit<f64>;
