//! Ising-Vannimenus model on the Cayley tree: Hamiltonian, p-adic measures,
//! the compatibility condition and boundary fields.

mod model;
mod periodic;
mod pipeline;
mod solve;
mod tree;

pub use model::{
    check_compatibility, check_compatibility_to, hamiltonian, hamiltonian_coeffs, measure,
    measure_weight, partition_fn, weights, CompatibilityReport, Configuration, Couplings,
    EdgeField, GibbsField, ResidualEntry, Weights,
};
pub use periodic::{
    is_h_periodic, orbit_levels, periodic_field_from_orbit, Component, PeriodicField, Placement,
    PlacementDiagnostic, PlacementScan,
};
pub use pipeline::{compatibility_lift, periodic_gibbs, PeriodicGibbsReport, PlacementOutcome};
pub use solve::{solve_boundary_equations, BoundaryConstants, Solution};
pub use tree::CayleyTree;
