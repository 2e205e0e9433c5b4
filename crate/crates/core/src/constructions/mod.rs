//! Explicit spectra-shaping constructions: Bessel-matched wells, the L¹
//! potential whose essential spectrum covers the spectral axis, and the two
//! transient-regime certificates (infinitely many eigenvalues from large
//! inverse-square spots; an empty negative spectrum from small sparse bumps).

mod ess_spec;
mod sparse;
mod spots;
mod well;

pub use ess_spec::{
    build_ess_spec_potential, weyl_sequence_residual, EssSpecEntry, EssSpecPotential,
    LambdaSequence,
};
pub use sparse::{
    beta_divergence_check, sparse_bump_certificate, BetaDivergence, SparseBumpCertificate, Verdict,
};
pub use spots::{quartic_bump, spots_threshold, SpotProfile, SpotsThreshold};
pub use well::{
    well_eigenfunction_residual, well_match, well_match_batch, WellResidual, WellSolution,
};
