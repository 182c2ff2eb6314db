//! Long-time limits of convolutions.
//!
//! For `chi`, `h` continuous with limits at infinity and `h'` integrable,
//!
//! ```text
//! ∫_0^t chi(t - tau) h'(tau) dtau  ->  chi(inf) [h(inf) - h(0)]
//! ```
//!
//! and for boundary data `g` with limit `g_inf`,
//!
//! ```text
//! ∫_0^t theta_x(x, tau) g(t - tau) dtau  ->  g_inf sinh(s0 (x - L)) / (2 eps sinh(s0 L))
//! ```
//!
//! with the `cosh` analogues for `theta*_x` and `theta`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::greensolve::{compute_boundary_response, Edge};
use crate::params::OperatorParams;
use crate::problem::{BcKind, TimeFn};
use crate::quad::{integrate_with_breaks, KernelConfig};
use crate::report::{Check, Status, VerificationReport};
use crate::theta::{grade_sequence, theta_time_integral_limits, StripGeometry};

/// Default tolerance of the boundary limits.
pub const BOUNDARY_LIMIT_TOL: f64 = 1e-3;

/// Default tolerance of the convolution limits.
pub const CONVOLUTION_LIMIT_TOL: f64 = 1e-4;

/// A data function with its declared limit.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitFunction {
    pub f: TimeFn,
    pub limit: f64,
    /// Asserts that `f'` is integrable on `[0, inf)`.
    pub derivative_integrable: bool,
}

impl LimitFunction {
    pub fn new(f: TimeFn, limit: f64, derivative_integrable: bool) -> Self {
        Self {
            f,
            limit,
            derivative_integrable,
        }
    }

    /// Limit taken from a built-in function; every built-in with a limit has
    /// a monotone or damped tail, hence an integrable derivative.
    pub fn from_builtin(f: TimeFn) -> Result<Self> {
        let limit = f
            .limit()
            .ok_or_else(|| Error::Config("time function has no limit at infinity".into()))?;
        Ok(Self::new(f, limit, true))
    }

    /// Advisory: `|f(t) - limit|` non-increasing over `[T/2, T]`.
    pub fn tail_settles(&self, horizon: f64) -> bool {
        let devs: Vec<f64> = (0..=20)
            .map(|i| (self.f.eval(horizon * (0.5 + 0.025 * i as f64)) - self.limit).abs())
            .collect();
        devs.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-15)
    }

    /// `f'(t)` and whether it came from the analytic form.
    fn derivative(&self, t: f64, step: f64) -> (f64, bool) {
        if let Some(d) = self.f.derivative(t) {
            return (d, true);
        }
        let f = |s: f64| self.f.eval(s);
        let d = if t >= 2.0 * step {
            (f(t - 2.0 * step) - 8.0 * f(t - step) + 8.0 * f(t + step) - f(t + 2.0 * step)) / (12.0 * step)
        } else {
            (-25.0 * f(t) + 48.0 * f(t + step) - 36.0 * f(t + 2.0 * step) + 16.0 * f(t + 3.0 * step)
                - 3.0 * f(t + 4.0 * step))
                / (12.0 * step)
        };
        (d, false)
    }
}

/// One evaluation at one horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitSample {
    pub x: Option<f64>,
    pub horizon: f64,
    pub numeric: f64,
    pub closed_form: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitStudy {
    pub report: VerificationReport,
    pub samples: Vec<LimitSample>,
    /// Some derivative was taken by finite differences (lower confidence).
    pub numerical_derivative: bool,
}

fn check_horizons(horizons: &[f64]) -> Result<()> {
    if horizons.is_empty() || horizons.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
        return Err(Error::Config("horizons must be positive and finite".into()));
    }
    if horizons.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("horizons must increase".into()));
    }
    Ok(())
}

fn warn_unsettled(name: &str, f: &LimitFunction, horizon: f64) {
    if !f.tail_settles(horizon) {
        log::warn!("{name}: |f(t) - limit| is not monotone on [T/2, T]; the declared limit may be wrong");
    }
}

/// Evaluates `∫_0^T chi(T - tau) h'(tau) dtau` at each horizon and grades the
/// deviations from `chi(inf) [h(inf) - h(0)]`: pass when they never increase and
/// the last is within `tol`, inconclusive when still decreasing above `tol`.
pub fn convolution_limit_check(
    chi: &LimitFunction,
    h: &LimitFunction,
    horizons: &[f64],
    tol: f64,
    cfg: &KernelConfig,
) -> Result<LimitStudy> {
    cfg.validate()?;
    check_horizons(horizons)?;
    if !h.derivative_integrable {
        return Err(Error::Config(
            "the convolution limit needs h' integrable on [0, inf); refusing to certify".into(),
        ));
    }
    let last = *horizons.last().unwrap_or(&1.0);
    warn_unsettled("chi", chi, last);
    warn_unsettled("h", h, last);
    let target = chi.limit * (h.limit - h.f.eval(0.0));
    let mut numerical = false;
    let mut samples = Vec::new();
    for &big_t in horizons {
        let step = 1e-4 * big_t;
        let breaks: Vec<f64> = [0.01, 0.1, 1.0, 10.0]
            .iter()
            .flat_map(|&b| [b, big_t - b])
            .filter(|&b| b > 0.0 && b < big_t)
            .collect();
        let mut sorted = breaks;
        sorted.sort_by(f64::total_cmp);
        let q = integrate_with_breaks(
            |tau| {
                let (d, analytic) = h.derivative(tau, step);
                numerical |= !analytic;
                chi.f.eval(big_t - tau) * d
            },
            0.0,
            big_t,
            &sorted,
            cfg,
        )?;
        samples.push(LimitSample {
            x: None,
            horizon: big_t,
            numeric: q.value,
            closed_form: target,
            deviation: (q.value - target).abs(),
        });
    }
    let devs: Vec<f64> = samples.iter().map(|s| s.deviation).collect();
    let final_value = samples.last().map_or(f64::NAN, |s| s.numeric);
    let mut report = VerificationReport::new("convolution limit");
    let name = if numerical {
        "convolution_limit_fd_derivative"
    } else {
        "convolution_limit"
    };
    report.push(
        Check::agreement(name, final_value, target, tol)
            .at_t(last)
            .with_status(grade_sequence(&devs, tol)),
    );
    Ok(LimitStudy {
        report,
        samples,
        numerical_derivative: numerical,
    })
}

/// Closed-form limit of `∫_0^t k(x, tau) g(t - tau) dtau` for the kernel of
/// the left wall: `theta_x` (Dirichlet), `theta*_x` (mixed), `theta` (Neumann).
pub fn boundary_limit(p: &OperatorParams, geom: &StripGeometry, bc: BcKind, x: f64, g_inf: f64) -> f64 {
    let s0 = p.sigma0();
    let l = geom.length();
    let two_eps = 2.0 * p.epsilon();
    g_inf
        * match bc {
            BcKind::Dirichlet => (s0 * (x - l)).sinh() / (two_eps * (s0 * l).sinh()),
            BcKind::Mixed => -(s0 * (l - x)).cosh() / (two_eps * (s0 * l).cosh()),
            BcKind::Neumann => (s0 * (l - x)).cosh() / (two_eps * s0 * (s0 * l).sinh()),
        }
}

/// Numerical boundary convolutions of the left-wall kernel against `g` at each
/// `x` and horizon, graded against [`boundary_limit`] per `x`.
pub fn boundary_limit_check(
    p: &OperatorParams,
    geom: &StripGeometry,
    bc: BcKind,
    g: &LimitFunction,
    x_samples: &[f64],
    horizons: &[f64],
    tol: f64,
    cfg: &KernelConfig,
) -> Result<LimitStudy> {
    cfg.validate()?;
    check_horizons(horizons)?;
    if !p.is_strict() {
        return Err(Error::InvalidParameter(
            "boundary limits need strictly positive a, b, beta".into(),
        ));
    }
    let l = geom.length();
    if x_samples.iter().any(|&x| !(x > 0.0 && x < l)) {
        return Err(Error::Domain(
            "boundary limits are checked at interior points only".into(),
        ));
    }
    let last = *horizons.last().unwrap_or(&1.0);
    warn_unsettled("g", g, last);
    let mut report = VerificationReport::new(format!("{bc} boundary limit"));
    // the closed forms must agree with the theta integral limits
    for &x in x_samples {
        let (lim, lim_x, lim_star_x) = theta_time_integral_limits(p, geom, x);
        let theta_side = match bc {
            BcKind::Dirichlet => lim_x,
            BcKind::Mixed => lim_star_x,
            BcKind::Neumann => lim,
        };
        let here = boundary_limit(p, geom, bc, x, 1.0);
        report.push(Check::relative_agreement("closed_form_consistency", here, theta_side, 1e-12).at_x(x));
    }
    let scale = -2.0 * p.epsilon();
    let mut per_horizon = Vec::with_capacity(horizons.len());
    for &t in horizons {
        let r = compute_boundary_response(p, geom, bc, &g.f, Edge::Left, x_samples, t, cfg)?;
        per_horizon.push(r.into_iter().map(|v| v / scale).collect::<Vec<f64>>());
    }
    let mut samples = Vec::new();
    for (ix, &x) in x_samples.iter().enumerate() {
        let target = boundary_limit(p, geom, bc, x, g.limit);
        let devs: Vec<f64> = horizons
            .iter()
            .zip(&per_horizon)
            .map(|(&t, vals)| {
                let v = vals[ix];
                samples.push(LimitSample {
                    x: Some(x),
                    horizon: t,
                    numeric: v,
                    closed_form: target,
                    deviation: (v - target).abs(),
                });
                (v - target).abs()
            })
            .collect();
        let final_value = per_horizon.last().map_or(f64::NAN, |v| v[ix]);
        report.push(
            Check::agreement("boundary_limit", final_value, target, tol)
                .at_x(x)
                .at_t(last)
                .with_status(grade_sequence(&devs, tol)),
        );
    }
    Ok(LimitStudy {
        report,
        samples,
        numerical_derivative: false,
    })
}

/// Horizons `{10, 20, 30} / omega`.
pub fn default_horizons(p: &OperatorParams) -> [f64; 3] {
    let w = p.omega();
    [10.0 / w, 20.0 / w, 30.0 / w]
}

impl LimitStudy {
    pub fn status(&self) -> Status {
        if self.report.has_failures() {
            Status::Fail
        } else if self.report.is_inconclusive() {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp_to_one() -> LimitFunction {
        LimitFunction::from_builtin(TimeFn::Exponential {
            offset: 1.0,
            amplitude: -1.0,
            rate: 1.0,
        })
        .unwrap()
    }

    #[test]
    fn constant_chi() {
        let chi = LimitFunction::from_builtin(TimeFn::constant(3.0)).unwrap();
        let s = convolution_limit_check(
            &chi,
            &ramp_to_one(),
            &[25.0, 50.0, 100.0],
            1e-4,
            &KernelConfig::default(),
        )
        .unwrap();
        assert_eq!(s.status(), Status::Pass);
        assert!((s.samples[2].numeric - 3.0).abs() < 1e-12);
    }

    #[test]
    fn constant_h_has_zero_limit() {
        let chi = ramp_to_one();
        let h = LimitFunction::from_builtin(TimeFn::constant(2.0)).unwrap();
        let s = convolution_limit_check(&chi, &h, &[10.0], 1e-12, &KernelConfig::default()).unwrap();
        assert_eq!(s.samples[0].numeric, 0.0);
        assert_eq!(s.samples[0].closed_form, 0.0);
    }

    #[test]
    fn unset_hypothesis_is_refused() {
        let h = LimitFunction::new(TimeFn::constant(1.0), 1.0, false);
        let r = convolution_limit_check(&ramp_to_one(), &h, &[10.0], 1e-4, &KernelConfig::default());
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn arctan_converges_slowly() {
        // chi = exp(-t) + 2, h = arctan t: the deviation decays like 2/T
        let chi = LimitFunction::from_builtin(TimeFn::Sum {
            terms: vec![TimeFn::Exponential {
                offset: 2.0,
                amplitude: 1.0,
                rate: 1.0,
            }],
        })
        .unwrap();
        let h = LimitFunction::from_builtin(TimeFn::Arctan {
            amplitude: 1.0,
            rate: 1.0,
        })
        .unwrap();
        let s = convolution_limit_check(&chi, &h, &[25.0, 50.0, 100.0], 1e-4, &KernelConfig::default()).unwrap();
        assert_eq!(s.status(), Status::Inconclusive);
        let d = s.samples[2].deviation;
        assert!((d - 2.0 / 100.0).abs() < 1e-3, "{d}");
    }

    #[test]
    fn numerical_derivative_is_flagged() {
        let h = LimitFunction::new(TimeFn::custom(|t| 1.0 - (-t).exp()), 1.0, true);
        let chi = LimitFunction::from_builtin(TimeFn::constant(1.0)).unwrap();
        let s = convolution_limit_check(&chi, &h, &[20.0, 40.0], 1e-4, &KernelConfig::default()).unwrap();
        assert!(s.numerical_derivative);
        assert_eq!(s.report.checks[0].name, "convolution_limit_fd_derivative");
        assert_eq!(s.status(), Status::Pass);
    }
}
