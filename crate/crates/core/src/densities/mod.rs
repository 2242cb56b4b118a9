//! Closed-form and finite-`N` densities.

pub mod finite;
pub mod joint;
pub mod limit;
pub mod pair;
pub mod potentials;

pub use finite::{
    conditional_density_fd, conditional_density_finite_n, conditional_total_mass, flat_log_integral,
    unscaled_constant, unscaled_correction, unscaled_correction_multi, unscaled_target,
};
pub use joint::joint_zero_density_unnormalized;
pub use pair::pair_correlation_finite_n;
pub use limit::{kappa_cond, limit_density_kkm, pair_correlation_limit, RadialProfile};
pub use potentials::{bipotential, variance_quadrature, YFunctions};
