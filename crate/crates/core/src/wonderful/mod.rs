//! Wonderful models in the product embedding `V × ∏_{U ∈ B} P(V/U)`.
//!
//! A point is a base vector together with one line per building-set member.
//! Points are produced as leading-term limits of polynomial arcs, which is
//! enough to reach every point of the closure in the linear model.

mod arc;
mod building;
mod stabilizer;

pub use arc::{
    adapted_arc, arc_through_flag, limit_point, random_in, realize, sample_generic, seeded_rng, Arc, EmbeddedPoint,
    ARC_RETRY_BUDGET,
};
pub use building::{
    building_set_max, building_set_min, chains, for_each_nested_set, is_building_set, nested_sets, BuildingSet,
    BuildingSetKind, Chain, NestedSet,
};
pub use stabilizer::{
    fixes_point, forget_point, generic_chain_stabilizer, nonabelian_fixed_point_search, passes_chain_conditions,
    point_stabilizer, point_stabilizer_with, BuildingSetAction, SearchOutcome, StabReport, ASSIGNMENT_CAP,
};
