//! Partial E-derivations, Jacobians, Khovanskii systems and derivative
//! propagation.

mod jacobian;
mod khovanskii;
mod partial;
mod propagate;
mod rational;
mod torsor;

pub use jacobian::{adjugate, det, jacobian, jacobian_det, Matrix};
pub use khovanskii::{khovanskii_build, KhovanskiiSystem};
pub(crate) use partial::check_slice;
pub use partial::{delta_shift, gradient_slice, parameter_delta, partial_derivative, variables_of};
pub use propagate::propagate_symbolic;
pub use rational::ERational;
pub use torsor::{solve_dependent_jet, torsor_residual, TorsorReport};
