//! Operator parameters and the constants appearing in the kernel estimates.
//!
//! The operator is
//!
//! ```text
//! L u = u_t - eps u_xx + a u + b ∫_0^t exp(-beta (t - tau)) u(x, tau) dtau
//! ```
//!
//! with `eps, a, b, beta > 0`. Everything downstream reads its constants from
//! here so that the estimate checks and the solvers agree on one set of values.

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative gap `|a - beta| / max(a, beta)` below which `E(t)` switches to its
/// removable-singularity limit `t exp(-a t)`.
pub const E_LIMIT_SWITCH: f64 = 1e-8;

/// The four constants of the operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorParams {
    epsilon: f64,
    a: f64,
    b: f64,
    beta: f64,
    strict: bool,
    omega: f64,
    beta0: f64,
    beta1: f64,
    sigma0: f64,
}

impl OperatorParams {
    /// Validated constructor: all four constants must be finite and strictly positive.
    pub fn new(epsilon: f64, a: f64, b: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("epsilon", epsilon), ("a", a), ("b", b), ("beta", beta)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(Self::build(epsilon, a, b, beta, true))
    }

    /// Parameters for limiting-case analysis: `epsilon > 0`, while `a`, `b` and
    /// `beta` may be zero. Kernel evaluation works; the estimate constants that
    /// need strict positivity are reported as infinite.
    pub fn limiting(epsilon: f64, a: f64, b: f64, beta: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be finite and > 0, got {epsilon}"
            )));
        }
        for (name, v) in [("a", a), ("b", b), ("beta", beta)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        let strict = a > 0.0 && b > 0.0 && beta > 0.0;
        Ok(Self::build(epsilon, a, b, beta, strict))
    }

    fn build(epsilon: f64, a: f64, b: f64, beta: f64, strict: bool) -> Self {
        let omega = a.min(beta);
        let (beta0, beta1, sigma0) = if a > 0.0 && beta > 0.0 {
            let ab = a * beta;
            (
                1.0 / a + std::f64::consts::PI * b.sqrt() * (a + beta) / (2.0 * ab.powf(1.5)),
                1.0 / ab,
                ((a + b / beta) / epsilon).sqrt(),
            )
        } else {
            (f64::INFINITY, f64::INFINITY, f64::NAN)
        };
        Self {
            epsilon,
            a,
            b,
            beta,
            strict,
            omega,
            beta0,
            beta1,
            sigma0,
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Whether all four constants are strictly positive.
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// `min(a, beta)`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Bound on the space-time mass of `K0`.
    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    /// `1 / (a beta)`.
    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    /// Steady spatial decay rate `sqrt((a + b/beta) / eps)`.
    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    /// True when `a` and `beta` are close enough that `E(t)` uses its limit form.
    pub fn a_equals_beta(&self) -> bool {
        let scale = self.a.max(self.beta);
        scale == 0.0 || (self.a - self.beta).abs() / scale < E_LIMIT_SWITCH
    }

    /// `E(t) = (exp(-beta t) - exp(-a t)) / (a - beta)`, or `t exp(-a t)` when `a = beta`.
    pub fn eval_e(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("E(t) needs t >= 0, got {t}")));
        }
        Ok(self.e_unchecked(t))
    }

    pub(crate) fn e_unchecked(&self, t: f64) -> f64 {
        if self.a_equals_beta() {
            return t * (-self.a * t).exp();
        }
        let d = self.a - self.beta;
        // exp(-beta t) (1 - exp(-d t)) / d without cancellation
        -(-self.beta * t).exp() * (-d * t).exp_m1() / d
    }
}

/// Constants derived from [`OperatorParams`], optionally for a strip of width `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    pub omega: f64,
    pub beta0: f64,
    pub beta1: f64,
    pub sigma0: f64,
    /// `2 eps pi^2 / (6 e L^2)`; present when a strip width was given.
    pub c: Option<f64>,
    /// Bound on the time integral of `|theta|`; absent without `L` or when `a = beta`.
    pub c0: Option<f64>,
}

/// Evaluates the estimate constants. `length` is the strip width `L`.
pub fn derive_constants(p: &OperatorParams, length: Option<f64>) -> Result<DerivedConstants> {
    if !p.is_strict() {
        return Err(Error::InvalidParameter(
            "estimate constants need strictly positive a, b, beta".into(),
        ));
    }
    let (c, c0) = match length {
        None => (None, None),
        Some(l) if !(l.is_finite() && l > 0.0) => {
            return Err(Error::InvalidParameter(format!("L must be > 0, got {l}")))
        }
        Some(l) => {
            let c = 2.0 * p.epsilon * std::f64::consts::PI.powi(2) / (6.0 * std::f64::consts::E * l * l);
            let c0 = if p.a_equals_beta() {
                None
            } else {
                Some(c0_formula(p, c))
            };
            (Some(c), c0)
        }
    };
    Ok(DerivedConstants {
        omega: p.omega(),
        beta0: p.beta0(),
        beta1: p.beta1(),
        sigma0: p.sigma0(),
        c,
        c0,
    })
}

fn c0_formula(p: &OperatorParams, c: f64) -> f64 {
    let w = p.omega();
    let gap = (p.a - p.beta).abs();
    let se = p.epsilon.sqrt();
    1.0 / (2.0 * (p.epsilon * w).sqrt()) + p.b * w.powf(-1.5) / (4.0 * se * gap) * (1.0 + c / p.b * gap + 1.5 * c / w)
}

/// `C0`, failing when it is undefined (`a = beta`).
pub fn require_c0(p: &OperatorParams, length: f64) -> Result<f64> {
    derive_constants(p, Some(length))?
        .c0
        .ok_or_else(|| Error::Undefined("C0 is undefined at a = beta".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_non_positive() {
        assert!(OperatorParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(OperatorParams::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(OperatorParams::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(OperatorParams::new(1.0, 1.0, 1.0, f64::NAN).is_err());
        assert!(OperatorParams::limiting(1.0, 0.0, 0.0, 1.0).is_ok());
        assert!(OperatorParams::limiting(-1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn simple_constants() {
        let p = OperatorParams::new(1.0, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(p.omega(), 1.0);
        assert_eq!(p.beta1(), 0.5);
        let q = OperatorParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(q.sigma0(), 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn beta0_closed_form() {
        // 1/2 + pi*3/(2*2^{3/2}) evaluated in extended precision
        let p = OperatorParams::new(1.0, 2.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(p.beta0(), 2.166_081_101_809_387, max_relative = 1e-14);
    }

    #[test]
    fn e_values() {
        let p = OperatorParams::new(1.0, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(p.eval_e(0.0).unwrap(), 0.0);
        assert_relative_eq!(p.eval_e(1.0).unwrap(), 0.232_544_157_934_829_6, max_relative = 1e-14);
        let q = OperatorParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(q.eval_e(2.0).unwrap(), 2.0 * (-2f64).exp(), max_relative = 1e-15);
        assert!(p.eval_e(-1.0).is_err());
    }

    #[test]
    fn c0_requires_distinct_rates() {
        let q = OperatorParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let d = derive_constants(&q, Some(1.0)).unwrap();
        assert!(d.c.is_some() && d.c0.is_none());
        assert!(matches!(require_c0(&q, 1.0), Err(Error::Undefined(_))));
        let p = OperatorParams::new(1.0, 2.0, 1.0, 1.0).unwrap();
        assert!(require_c0(&p, 1.0).unwrap() > 0.0);
        assert!(derive_constants(&p, Some(-1.0)).is_err());
    }
}
