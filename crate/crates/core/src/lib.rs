//! Exact computation of SL(2,C) Casson invariants and sheaf-theoretic
//! SL(2,C) Floer cohomology of Dehn surgeries on trefoils, two-bridge knots,
//! and the granny and square knots.

pub mod casson;
pub mod census;
pub mod error;
pub mod floer;
pub mod graded;
pub mod polys;
pub mod roots;
pub mod selftest;
pub mod slope;

pub use casson::{casson_invariant, hp_small_knot, hp_two_bridge, total_seminorm, KnotRecord, SeminormSpec};
pub use census::{granny_census, square_census, ComponentCensus, ComponentType, QuadExt};
pub use error::{AdmissibilityReason, Error, Result};
pub use floer::{
    hp_consistency, hp_from_census, hp_granny, hp_sharp, hp_square, limit_rank, triangle_check, ContributionTable,
    Family, TriangleVerdict,
};
pub use graded::{cohomology, Coeff, GradedGroup, SpaceType};
pub use polys::{compose_connected_sum, cyclotomic, FactoredAPoly, IntPoly, LaurentPoly2, SummandSpec};
pub use roots::{count_conjugacy_classes, trefoil_surgery_count, Chirality, RootCountSpec, Sign};
pub use slope::Slope;
