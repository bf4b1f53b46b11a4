//! Whirling knight's tours: the counter-clockwise knight digraph about the
//! board centre, closed-form Farkas certificates ruling out `c = n/2` coils
//! for `n = 4, 6 (mod 8)`, exact cycle-cover LP decisions, and tour search.

pub mod certificates;
pub mod digraph;
pub mod error;
pub mod geometry;
pub mod polytope;
pub mod render;
pub mod tours;

pub use certificates::{
    build_n3_certificate, build_t1, build_t2, check_facts_abc, parity_census, verify_certificate,
    FarkasCertificate, SupportSets, VerificationReport,
};
pub use digraph::{build_digraph, Arc, WhirlDigraph};
pub use error::{Result, WhirlError};
pub use geometry::{
    crossing_height, crossing_weight, is_ccw, knight_steps, BoardGeometry, Cell, KnightStep, Ray,
};
pub use polytope::{
    check_reduction, coil_interval, coil_of_cover, lp_feasible, CoilInterval, CycleCover,
    FractionalAssignment, LpDecision,
};
pub use tours::{
    enumerate_cycle_covers, search_tour, verify_tour, winding_by_ray, SearchOptions, SearchOutcome,
    Tour,
};
