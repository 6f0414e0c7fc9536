//! Explicit constants, displacement bounds, certificates and tower construction.

mod certificate;
mod closed;
mod constants;
mod displacement;
mod noncompact;
mod radius_growth;

pub use certificate::{
    certificate_from_norms, genus_ball_certificate, principal_volume_constant, radius_chain, BoundCertificate,
    CeilingCheck, DepthSemantics, ExponentClaim, SurjectivityStatus,
};
pub use closed::{build_tower_closed, chaining_check, closed_exponents, ChainingCheck, ClosedExponents, ClosedLevel, ClosedTower};
pub use constants::{compute_c3, displacement_bound, ExplicitC3, DisplacementBound, C3_MARGIN};
pub use displacement::{verify_displacement, DisplacementReport, Witness, DISPLACEMENT_TOLERANCE};
pub use noncompact::{build_tower_noncompact, noncompact_threshold, single_prime_slack, NoncompactTower, TowerLevel};
pub use radius_growth::{radius_growth_bounds, RadiusGrowthReport, ThresholdSearch, C1_FLOOR_RANGE, DEFAULT_C1};
