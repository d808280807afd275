//! Maxwell's equations for inhomogeneous media in complex-quaternion form,
//! with a harness that checks, point by point, that every formulation of the
//! system agrees with the classical one.
//!
//! Layers, bottom up:
//!
//! * [`biquat`]: the algebra `H(C)` and its multiplication operators.
//! * [`jet`]: first-order space-time jets and the operator `D = sum i_k d_k`.
//! * [`dsl`]: a small expression language for fields and media.
//! * [`medium`]: `eps`, `mu`, `c`, `W` and their logarithmic gradients.
//! * [`forms`]: residual evaluators for each formulation.
//! * [`harness`]: scenarios, reports and property suites.

pub mod biquat;
pub mod dsl;
pub mod forms;
pub mod harness;
pub mod jet;
pub mod medium;

pub use biquat::{Biquaternion, Complex, Vec3, Vec3C};
pub use jet::{Jet4, Point4, VecFieldSample};
