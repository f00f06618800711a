//! Floating-point layer used by the spectral computations.

use nalgebra::RealField;
use num_traits::Float;

/// Real scalars accepted by the numeric routines.
pub trait Scalar: RealField + Float + Copy {}

impl<T: RealField + Float + Copy> Scalar for T {}

/// Default working precision.
pub type Real = f64;
pub type Real32 = f32;
