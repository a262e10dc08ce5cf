//! The proof parameter chain and its feasibility check.

use serde::{Deserialize, Serialize};

/// Concrete values for the analysis constants.
///
/// Serialized as a flat numeric object so reports and `--schedule FILE`
/// share the same shape.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantSchedule {
    /// Balance radius of the input strings.
    pub rho: f64,
    /// Balance radius of the (unknown) LCS.
    pub rho_prime: f64,
    /// Deviation parameter of the binary case analysis.
    pub beta: f64,
    /// Gain of the balanced-input solver over `1/s`.
    pub gamma: f64,
    /// Slack allowed between `0(Y)` and `1(X)`.
    pub delta: f64,
    /// Gain of the binary solver over `1/2`.
    pub epsilon_prime: f64,
    /// Gain of the s-ary solver over `1/s`.
    pub epsilon: f64,
    /// Approximation ratio of the plugged edit-distance estimator.
    pub c: f64,
}

const REL_TOL: f64 = 1e-12;

/// Upper bound on `gamma` for the balanced-input solver:
/// `(s - 1 - c s^2 rho) / (s (1 + c s))`.
pub fn gamma_bound(s: usize, c: f64, rho: f64) -> f64 {
    let s = s as f64;
    (s - 1.0 - c * s * s * rho) / (s * (1.0 + c * s))
}

/// Derive a feasible schedule for alphabet size `s` and ED ratio `c`.
///
/// `rho = (s-1)/(2cs^2)` halves the numerator of the gamma bound, and every
/// other constant is taken strictly inside its inequality.
pub fn derive_schedule(s: usize, c: f64) -> ConstantSchedule {
    assert!(s >= 2, "alphabet size must be at least 2");
    assert!(c >= 1.0, "edit distance ratio must be at least 1");
    let sf = s as f64;
    let rho = (sf - 1.0) / (2.0 * c * sf * sf);
    let gamma = (sf - 1.0) / (2.0 * sf * (1.0 + c * sf));
    let beta = rho / 40.0;
    let delta = (2.0 * rho).min(beta / 4.0);
    let epsilon_prime = beta / 4.0;
    ConstantSchedule {
        rho,
        rho_prime: beta / 4.0,
        beta,
        gamma,
        delta,
        epsilon_prime,
        epsilon: epsilon_prime / sf,
        c,
    }
}

/// True iff every schedule invariant holds for alphabet size `s`.
pub fn validate_schedule(sc: &ConstantSchedule, s: usize) -> bool {
    let fields = [
        sc.rho,
        sc.rho_prime,
        sc.beta,
        sc.gamma,
        sc.delta,
        sc.epsilon_prime,
        sc.epsilon,
        sc.c,
    ];
    if s < 2 || fields.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return false;
    }
    let bound = gamma_bound(s, sc.c, sc.rho);
    sc.rho < 1.0
        && sc.c >= 1.0
        && sc.beta < sc.rho / 20.0
        && sc.delta <= 2.0 * sc.rho
        && sc.gamma <= bound + REL_TOL * bound.abs()
        && (sc.epsilon - sc.epsilon_prime / s as f64).abs() <= REL_TOL * sc.epsilon
}
