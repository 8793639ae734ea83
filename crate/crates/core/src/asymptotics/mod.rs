//! Long-time behaviour: Gaussian profiles, decay sweeps, lemma verifiers and
//! scaling limits.

pub mod decay;
pub mod inequalities;
pub mod limits;
pub mod profile;
pub mod tail;
pub mod testfn;

pub use decay::{decay_sweep, decay_sweep_with, dyadic_times, DecayReport, DecayRow, SweepOptions};
pub use inequalities::{
    inequality_table, nonlocal_to_local, operator_limit_error, sup_norm_refined, verify_dirichlet_bound,
    verify_laplacian_bound, verify_symmetrization, InequalityCheck,
};
pub use limits::{operator_limit_sweep, verify_delta_source, DeltaSourceReport, OperatorLimitReport};
pub use profile::{heat_profile, rescale, rescaled_grid, rescaling_identity, HeatProfile};
pub use tail::{tail_mass, verify_tail_bound, TailReport, TailRow};
pub use testfn::BandLimitedNoise;
