//! Entropic uncertainty bounds for two-qubit states in the presence of
//! quantum memory.
//!
//! The crate computes both sides of the quantum-memory entropic uncertainty
//! relation (the Berta bound `log2(1/c) + S(A|B)`) together with the
//! fine-grained bound `H(p_d^R) + min_S H(p_d^S)` obtained by optimizing the
//! discordance probability over all projective spin measurements on the Bloch
//! sphere. It also evaluates CHSH-type game values and the derived key-rate
//! bounds, and ships a CLI (`uncq`) exposing all of it.
//!
//! Core math is generic over the scalar type through the [`Real`] trait;
//! concrete `f64` aliases live at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

pub mod bounds;
pub mod cli;
pub mod entropy;
pub mod linalg;
pub mod measure;
pub mod states;
pub mod verify;

/// Scalar type the numerical kernels are generic over: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + 'static {}
impl<T: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + 'static> Real for T {}

/// Lossy conversion from an `f64` literal into the working scalar type.
#[inline]
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must convert into the scalar type")
}

pub type ComplexMatrix64 = linalg::ComplexMatrix<f64>;
pub type EigenDecomposition64 = linalg::EigenDecomposition<f64>;
pub type TwoQubitState64 = states::TwoQubitState<f64>;
pub type CorrelationData64 = states::CorrelationData<f64>;
pub type BlochDirection64 = measure::BlochDirection<f64>;
pub type MeasurementPair64 = measure::MeasurementPair<f64>;
pub type BoundReport64 = bounds::BoundReport<f64>;
pub type GameSpec64 = bounds::GameSpec<f64>;

pub type ComplexMatrix32 = linalg::ComplexMatrix<f32>;
pub type TwoQubitState32 = states::TwoQubitState<f32>;
pub type BlochDirection32 = measure::BlochDirection<f32>;
