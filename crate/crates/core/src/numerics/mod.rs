//! Shared numerical primitives.

pub mod quadrature;
pub mod radial;
pub mod rng;
pub mod special;
pub mod stats;

pub use radial::{uniform_edges, RadialCurve, RadialHistogram};
pub use rng::{sample_std_complex_gaussian, trial_rng, TrialRng};
pub use special::{dilog, zeta_value};
pub use stats::{MomentStat, StreamingStat};

/// Tolerance table. Every special-function and identity check in the crate
/// refers to one of these.
pub mod tolerances {
    /// Absolute accuracy of `dilog` and `zeta_value`.
    pub const SPECIAL_FUNCTION_ABS: f64 = 1e-12;
    /// Euler reflection identity for `dilog`.
    pub const DILOG_REFLECTION: f64 = 1e-10;
    /// Relative agreement of closed-form kernels with direct basis sums.
    pub const KERNEL_CLOSED_FORM_REL: f64 = 1e-10;
    /// Successive-refinement agreement used by adaptive quadrature.
    pub const QUADRATURE_REL: f64 = 1e-8;
    /// Gram condition number above which conditioning is refused.
    pub const CONDITIONING_LIMIT: f64 = 1e12;
    /// Below this `t = r^2` the conditional density coefficient uses its
    /// Taylor series.
    pub const KAPPA_SERIES_CUTOFF: f64 = 1e-3;
    /// Normalized residual accepted after Newton polishing of a root.
    pub const ROOT_RESIDUAL: f64 = 1e-8;
    /// Scaled radius below which a root is the conditioned root itself.
    pub const CONDITIONED_ROOT_RADIUS: f64 = 1e-9;
}
