//! Evaluation over ℝ and ℚ_p, linear algebra, implicit solving and
//! tolerance-based checks.

mod backend;
mod check;
mod eval;
mod jet;
pub mod linalg;
pub mod padic;
mod propagate;
mod solve;
mod tolerance;

pub use backend::{Backend, PadicBackend, RealBackend};
pub use check::{khovanskii_check, neighborhood_check, regular_point_check, KhovanskiiReport};
pub use eval::{eval, eval_all, eval_matrix, eval_poly, eval_rational};
pub use jet::{parse_point, Jet, Point};
pub use padic::Padic;
pub use propagate::propagate_numeric;
pub use solve::{hensel_solve, newton_solve};
pub use tolerance::ToleranceSpec;
