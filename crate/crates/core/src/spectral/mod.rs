//! The characteristic polynomial of the class-count recurrence and the
//! growth rate it predicts.

pub mod growth;
pub mod poly;
pub mod roots;

pub use growth::{growth_estimate, growth_report, GrowthReport, GrowthTrace};
pub use poly::{build_growth_poly, eisenstein_check, squarefree_multiplicity, IntPoly, Sqrt2Value};
pub use roots::{all_roots, dominant_root, ComplexRoot, RootEnclosure};
