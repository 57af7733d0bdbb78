//! Numerical thresholds shared by the checks and solvers. Every value can be
//! overridden per call through [`Tolerances`].

/// Relative margin required between `|s1 r1'|` and `|s1' r1|`.
pub const INDEPENDENCE_REL: f64 = 1e-9;
/// Absolute guard added to the independence scale so all-zero products fail.
pub const INDEPENDENCE_ABS: f64 = 1e-300;
/// Smallest eigenvalue the convergence form must exceed.
pub const CONVERGENCE_ABS: f64 = 1e-12;
/// Inner products below this magnitude count as orthogonal.
pub const ORTHOGONALITY_ABS: f64 = 1e-10;
/// Condition numbers above this mark a direct solve as ill-conditioned.
pub const CONDITION_WARN: f64 = 1e12;
/// Eigenvalues below this fraction of the largest are reported as zero frame bound.
pub const FRAME_SINGULAR_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub independence_rel: f64,
    pub independence_abs: f64,
    pub convergence: f64,
    pub orthogonality: f64,
    pub condition_warn: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            independence_rel: INDEPENDENCE_REL,
            independence_abs: INDEPENDENCE_ABS,
            convergence: CONVERGENCE_ABS,
            orthogonality: ORTHOGONALITY_ABS,
            condition_warn: CONDITION_WARN,
        }
    }
}
