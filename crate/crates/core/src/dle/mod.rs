//! Khovanskii formulas, the cleared systems `φ*_H`, rendering of axiom
//! instances, instance files and the numeric jet search.

mod build;
pub mod catalog;
mod formula;
mod io;
mod render;
mod search;

pub use build::{build_phi_star_h, successor_clauses, Clause, DLEInstance, PhiStarH};
pub use formula::{DependentSystem, KhovanskiiFormula};
pub use io::{read_instance, read_instance_source, write_instance};
pub use render::{instance_cores, parse_rendered_cores, render_instance};
pub use search::{jet_search, JetSolution, SearchOptions};
