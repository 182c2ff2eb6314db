//! The fundamental solution `K0` on the whole line and the iterated kernels
//! `K1`, `K2` (exponentially weighted time convolutions of `K0`).
//!
//! `K0` is the heat kernel with decay `a` minus a Bessel memory correction:
//!
//! ```text
//! K0 = 1/(2 sqrt(pi eps)) [ exp(-r^2/4t - a t)/sqrt(t)
//!      - sqrt(b) ∫_0^t exp(-r^2/4y - a y)/sqrt(t-y) exp(-beta (t-y)) J1(2 sqrt(b y (t-y))) dy ]
//! ```
//!
//! with `r = |x| / sqrt(eps)`. Exchanging the order of integration collapses
//! the convolutions defining `K1` and `K2` into single integrals of the same
//! shape, with `J0` and `J1` weights respectively:
//!
//! ```text
//! K1 = 1/(2 sqrt(pi eps)) ∫_0^t exp(-r^2/4s - a s - beta (t-s)) J0(2 sqrt(b s (t-s))) / sqrt(s) ds
//! K2 = 1/(2 sqrt(pi eps)) ∫_0^t exp(-r^2/4s - a s - beta (t-s)) sqrt(t-s) J1(2 sqrt(b s (t-s))) / (sqrt(b) s) ds
//! ```

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::params::OperatorParams;
use crate::quad::{gauss_legendre, try_integrate, try_integrate_with_breaks, KernelConfig, Quadrature};
use crate::report::{Check, VerificationReport};
use crate::special::{bessel_j0, bessel_j1, erfc, j1_over_z};

/// Exponent beyond which `exp(-v)` is treated as zero.
pub(crate) const UNDERFLOW_EXPONENT: f64 = 745.0;

/// Relative tolerance of [`laplace_transform_check`].
pub const LAPLACE_REL_TOL: f64 = 1e-6;

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("kernels need t > 0, got {t}")))
    }
}

#[inline]
pub(crate) fn norm(p: &OperatorParams) -> f64 {
    1.0 / (2.0 * (PI * p.epsilon()).sqrt())
}

/// `exp(-x^2/(4 eps t) - a t) / (2 sqrt(pi eps t))`.
pub fn heat_kernel(p: &OperatorParams, x: f64, t: f64) -> f64 {
    norm(p) * (-x * x / (4.0 * p.epsilon() * t) - p.a() * t).exp() / t.sqrt()
}

/// A real point of the Laplace variable with the associated square roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplacePoint {
    pub s: f64,
    /// `sqrt(s + a + b/(s + beta))`
    pub sigma: f64,
    /// `sigma / sqrt(eps)`
    pub sigma_tilde: f64,
}

impl LaplacePoint {
    pub fn new(p: &OperatorParams, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > -p.a() && s > -p.beta()) {
            return Err(Error::Domain(format!(
                "Laplace variable must satisfy s > max(-a, -beta), got {s}"
            )));
        }
        let sigma = (s + p.a() + p.b() / (s + p.beta())).sqrt();
        Ok(Self {
            s,
            sigma,
            sigma_tilde: sigma / p.epsilon().sqrt(),
        })
    }

    /// Transform of `K0(x, .)`: `exp(-|x| sigma_tilde) / (2 sqrt(eps) sigma)`.
    pub fn k0_transform(&self, p: &OperatorParams, x: f64) -> f64 {
        (-x.abs() * self.sigma_tilde).exp() / (2.0 * p.epsilon().sqrt() * self.sigma)
    }
}

/// Integrand of the memory part in the variable `y = t sin^2(phi)`, which
/// removes the `1/sqrt(t-y)` endpoint singularity. Returns the integrand and `y`.
#[inline]
fn memory_phi(p: &OperatorParams, big_a: f64, t: f64, phi: f64) -> (f64, f64) {
    let (s, c) = phi.sin_cos();
    let y = t * s * s;
    if y <= 0.0 {
        return (0.0, 0.0);
    }
    let expo = big_a / y + p.a() * y + p.beta() * t * c * c;
    if expo > UNDERFLOW_EXPONENT {
        return (0.0, y);
    }
    let j = bessel_j1(2.0 * p.b().sqrt() * t * s * c);
    (2.0 * t.sqrt() * s * (-expo).exp() * j, y)
}

fn k0_impl(p: &OperatorParams, x: f64, t: f64, cfg: &KernelConfig, deriv: bool) -> Result<Quadrature> {
    check_time(t)?;
    let eps = p.epsilon();
    let big_a = x * x / (4.0 * eps);
    let zero = Quadrature {
        value: 0.0,
        abs_err: 0.0,
        evaluations: 0,
    };
    if big_a / t > UNDERFLOW_EXPONENT || (deriv && x == 0.0) {
        return Ok(zero);
    }
    let dfac = |y: f64| if deriv { -x / (2.0 * eps * y) } else { 1.0 };
    let heat = (-big_a / t - p.a() * t).exp() / t.sqrt() * dfac(t);
    let mem = if p.b() > 0.0 {
        try_integrate(
            |phi| {
                let (v, y) = memory_phi(p, big_a, t, phi);
                Ok(if v == 0.0 { 0.0 } else { v * dfac(y) })
            },
            0.0,
            FRAC_PI_2,
            cfg,
        )
        .map_err(|e| e.at(|| format!("K0 memory integral at x={x}, t={t}")))?
    } else {
        zero
    };
    let sb = p.b().sqrt();
    Ok(Quadrature {
        value: norm(p) * (heat - sb * mem.value),
        abs_err: norm(p) * sb * mem.abs_err,
        evaluations: mem.evaluations,
    })
}

/// `K0(x, t)` with its quadrature error estimate.
pub fn eval_k0_quad(p: &OperatorParams, x: f64, t: f64, cfg: &KernelConfig) -> Result<Quadrature> {
    k0_impl(p, x, t, cfg, false)
}

/// `dK0/dx (x, t)` with its quadrature error estimate.
pub fn eval_k0_dx_quad(p: &OperatorParams, x: f64, t: f64, cfg: &KernelConfig) -> Result<Quadrature> {
    k0_impl(p, x, t, cfg, true)
}

/// The fundamental solution `K0(x, t)`, `t > 0`.
pub fn eval_k0(p: &OperatorParams, x: f64, t: f64, cfg: &KernelConfig) -> Result<f64> {
    eval_k0_quad(p, x, t, cfg).map(|q| q.value)
}

/// `dK0/dx (x, t)`, odd in `x`.
pub fn eval_k0_dx(p: &OperatorParams, x: f64, t: f64, cfg: &KernelConfig) -> Result<f64> {
    eval_k0_dx_quad(p, x, t, cfg).map(|q| q.value)
}

/// Weight of the iterated kernels in the variable `s = t w^2`, without the Gaussian factor.
#[inline]
fn iterated_weight(p: &OperatorParams, order: u8, t: f64, w: f64) -> f64 {
    let w2 = w * w;
    let rest = 1.0 - w2;
    let expo = p.a() * t * w2 + p.beta() * t * rest;
    if expo > UNDERFLOW_EXPONENT {
        return 0.0;
    }
    let q = 2.0 * t * w * rest.max(0.0).sqrt();
    let z = p.b().sqrt() * q;
    let damp = (-expo).exp();
    match order {
        1 => 2.0 * t.sqrt() * damp * bessel_j0(z),
        _ => 4.0 * t * t.sqrt() * rest * damp * j1_over_z(z),
    }
}

fn iterated(p: &OperatorParams, order: u8, x: f64, t: f64, cfg: &KernelConfig) -> Result<Quadrature> {
    check_time(t)?;
    let big_a = x * x / (4.0 * p.epsilon());
    if big_a / t > UNDERFLOW_EXPONENT {
        return Ok(Quadrature {
            value: 0.0,
            abs_err: 0.0,
            evaluations: 0,
        });
    }
    // the Gaussian switches on near w = sqrt(A/t); a breakpoint there helps the first pass
    let knee = (big_a / t).sqrt();
    let breaks: Vec<f64> = [knee, 2.0 * knee].into_iter().filter(|&k| k > 0.0 && k < 1.0).collect();
    let q = try_integrate_with_breaks(
        |w| {
            if w <= 0.0 {
                return Ok(0.0);
            }
            let g = big_a / (t * w * w);
            if g > UNDERFLOW_EXPONENT {
                return Ok(0.0);
            }
            Ok((-g).exp() * iterated_weight(p, order, t, w))
        },
        0.0,
        1.0,
        &breaks,
        cfg,
    )
    .map_err(|e| e.at(|| format!("K{order} at x={x}, t={t}")))?;
    Ok(Quadrature {
        value: norm(p) * q.value,
        abs_err: norm(p) * q.abs_err,
        evaluations: q.evaluations,
    })
}

/// `K1(x, t) = ∫_0^t exp(-beta (t - tau)) K0(x, tau) dtau`.
pub fn eval_k1(p: &OperatorParams, x: f64, t: f64, cfg: &KernelConfig) -> Result<f64> {
    iterated(p, 1, x, t, cfg).map(|q| q.value)
}

/// `K2(x, t) = ∫_0^t exp(-beta (t - tau)) K1(x, tau) dtau`.
pub fn eval_k2(p: &OperatorParams, x: f64, t: f64, cfg: &KernelConfig) -> Result<f64> {
    iterated(p, 2, x, t, cfg).map(|q| q.value)
}

pub fn eval_k1_quad(p: &OperatorParams, x: f64, t: f64, cfg: &KernelConfig) -> Result<Quadrature> {
    iterated(p, 1, x, t, cfg)
}

pub fn eval_k2_quad(p: &OperatorParams, x: f64, t: f64, cfg: &KernelConfig) -> Result<Quadrature> {
    iterated(p, 2, x, t, cfg)
}

/// A kernel at fixed time written as a finite Gaussian mixture
/// `sum_q c_q exp(-x^2 / (4 eps v_q))`, obtained by applying a fixed
/// composite Gauss rule to the time-like integration variable.
///
/// Evaluation is a few hundred exponentials with no Bessel calls, which makes
/// spatial integrals and grid tables cheap. Accuracy is that of the fixed rule
/// (about 1e-11 relative to the kernel peak for the default resolution).
#[derive(Debug, Clone)]
pub struct KernelProfile {
    t: f64,
    /// `(1 / (4 eps v_q), c_q)`
    terms: Vec<(f64, f64)>,
}

/// Composite Gauss nodes on `[0, 1]`: geometric panels toward 0 down to
/// `2^-depth`, then `uniform` equal panels on `[1/8, 1]`.
fn graded_nodes(uniform: usize, order: usize, depth: i32) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(order);
    let mut edges = vec![0.0];
    edges.extend((3..=depth).rev().map(|k| 2f64.powi(-k)));
    let h = (1.0 - 0.125) / uniform as f64;
    edges.extend((1..=uniform).map(|i| 0.125 + i as f64 * h));
    let mut x = Vec::new();
    let mut w = Vec::new();
    for e in edges.windows(2) {
        let (c, r) = (0.5 * (e[0] + e[1]), 0.5 * (e[1] - e[0]));
        for (xi, wi) in gx.iter().zip(&gw) {
            x.push(c + r * xi);
            w.push(r * wi);
        }
    }
    (x, w)
}

/// Panel count resolving the Bessel oscillation and the exponential concentration at time `t`.
fn panel_count(p: &OperatorParams, t: f64) -> usize {
    let osc = (p.b().sqrt() * t / 2.0).ceil();
    let conc = ((p.a() - p.beta()).abs() * t).sqrt().ceil();
    8 + osc as usize + conc as usize
}

impl KernelProfile {
    /// Profile of `K0(., t)`.
    pub fn k0(p: &OperatorParams, t: f64) -> Result<Self> {
        Self::k0_with(p, t, 1)
    }

    /// Profile of `K1(., t)` (`order = 1`) or `K2(., t)` (`order = 2`).
    pub fn iterated(p: &OperatorParams, order: u8, t: f64) -> Result<Self> {
        Self::iterated_with(p, order, t, 1, 10)
    }

    fn k0_with(p: &OperatorParams, t: f64, refine: usize) -> Result<Self> {
        check_time(t)?;
        let eps = p.epsilon();
        let mut terms = vec![(1.0 / (4.0 * eps * t), norm(p) * (-p.a() * t).exp() / t.sqrt())];
        if p.b() > 0.0 {
            // the Gaussian factor exp(-x^2/(4 eps t sin^2 phi)) is flat to all orders at phi = 0
            let (us, ws) = graded_nodes(refine * panel_count(p, t), 8, 16);
            let scale = -p.b().sqrt() * norm(p) * FRAC_PI_2;
            for (u, w) in us.into_iter().zip(ws) {
                let (v, y) = memory_phi(p, 0.0, t, FRAC_PI_2 * u);
                if v != 0.0 && y > 0.0 {
                    terms.push((1.0 / (4.0 * eps * y), scale * w * v));
                }
            }
        }
        Ok(Self { t, terms })
    }

    fn iterated_with(p: &OperatorParams, order: u8, t: f64, refine: usize, gauss_order: usize) -> Result<Self> {
        check_time(t)?;
        if !(order == 1 || order == 2) {
            return Err(Error::InvalidParameter(format!(
                "iterated kernel order must be 1 or 2, got {order}"
            )));
        }
        let eps = p.epsilon();
        let (ws, wts) = graded_nodes(refine * panel_count(p, t), gauss_order, 26);
        let terms = ws
            .into_iter()
            .zip(wts)
            .filter_map(|(w, wt)| {
                let c = norm(p) * wt * iterated_weight(p, order, t, w);
                (c != 0.0).then(|| (1.0 / (4.0 * eps * t * w * w), c))
            })
            .collect();
        Ok(Self { t, terms })
    }

    /// Same kernel on a rule with twice the panels, for error estimation.
    fn refined(p: &OperatorParams, order: u8, t: f64) -> Result<Self> {
        match order {
            0 => Self::k0_with(p, t, 2),
            _ => Self::iterated_with(p, order, t, 2, 14),
        }
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// The `K0` profile without its heat term (the memory contribution alone).
    pub(crate) fn heat_part(&self) -> Self {
        Self {
            t: self.t,
            terms: self.terms.get(..1).unwrap_or_default().to_vec(),
        }
    }

    pub(crate) fn memory_part(&self) -> Self {
        Self {
            t: self.t,
            terms: self.terms.get(1..).unwrap_or_default().to_vec(),
        }
    }

    /// The mixture terms `(1 / (4 eps v_q), c_q)`.
    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x2 = x * x;
        self.terms
            .iter()
            .map(|&(k, c)| {
                let e = x2 * k;
                if e > UNDERFLOW_EXPONENT {
                    0.0
                } else {
                    c * (-e).exp()
                }
            })
            .sum()
    }

    pub fn eval_dx(&self, x: f64) -> f64 {
        let x2 = x * x;
        self.terms
            .iter()
            .map(|&(k, c)| {
                let e = x2 * k;
                if e > UNDERFLOW_EXPONENT {
                    0.0
                } else {
                    -2.0 * x * k * c * (-e).exp()
                }
            })
            .sum()
    }

    /// Signed integral over the line.
    pub fn mass(&self) -> f64 {
        self.terms.iter().map(|&(k, c)| c * (PI / k).sqrt()).sum()
    }

    /// Largest Gaussian variance parameter `2 eps v_q` among the terms.
    fn widest(&self) -> f64 {
        self.terms.iter().map(|&(k, _)| 1.0 / (2.0 * k)).fold(0.0, f64::max)
    }

    /// Bound on `∫_{|x|>y} |profile|`.
    fn tail_bound(&self, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(k, c)| c.abs() * (PI / k).sqrt() * erfc(y * k.sqrt()))
            .sum()
    }

    /// `∫_R |profile(x)| dx` with an error estimate covering quadrature and tail truncation.
    pub fn l1_norm(&self, cfg: &KernelConfig) -> Result<Quadrature> {
        let y = cfg.tail_cutoff_sigmas * self.widest().sqrt();
        let q = try_integrate(|x| Ok(self.eval(x).abs()), 0.0, y, cfg)
            .map_err(|e| e.at(|| format!("spatial L1 norm at t={}", self.t)))?;
        Ok(Quadrature {
            value: 2.0 * q.value,
            abs_err: 2.0 * q.abs_err + self.tail_bound(y),
            evaluations: q.evaluations,
        })
    }
}

/// The pointwise envelope `exp(-r^2/4t)/(2 sqrt(pi eps t)) [exp(-a t) + b t E(t)]`.
pub fn pointwise_envelope(p: &OperatorParams, x: f64, t: f64) -> f64 {
    let g = (-x * x / (4.0 * p.epsilon() * t)).exp() * norm(p) / t.sqrt();
    g * ((-p.a() * t).exp() + p.b() * t * p.e_unchecked(t))
}

fn time_integrated_l1(t: f64, cfg: &KernelConfig, build: impl Fn(f64) -> Result<KernelProfile>) -> Result<Quadrature> {
    let inner_cfg = cfg.tightened(0.1);
    let outer_cfg = KernelConfig {
        quad_rel_tol: cfg.quad_rel_tol.max(1e-9),
        ..*cfg
    };
    let mut inner_err: f64 = 0.0;
    let q = try_integrate(
        |tau| {
            if tau <= 0.0 {
                return Ok(0.0);
            }
            let n = build(tau)?.l1_norm(&inner_cfg)?;
            inner_err = inner_err.max(n.abs_err);
            Ok(n.value)
        },
        0.0,
        t,
        &outer_cfg,
    )?;
    Ok(Quadrature {
        value: q.value,
        abs_err: q.abs_err + inner_err * t,
        evaluations: q.evaluations,
    })
}

/// Error of the fixed-rule profile, estimated from a second profile at doubled resolution.
fn profile_l1_with_refinement(coarse: &KernelProfile, fine: &KernelProfile, cfg: &KernelConfig) -> Result<Quadrature> {
    let c = coarse.l1_norm(cfg)?;
    let f = fine.l1_norm(cfg)?;
    Ok(Quadrature {
        value: f.value,
        abs_err: f.abs_err + (f.value - c.value).abs(),
        evaluations: c.evaluations + f.evaluations,
    })
}

/// Checks the kernel estimates at each sample time:
///
/// * `∫|K0| <= exp(-a t) + sqrt(b) pi t exp(-omega t)`
/// * `|K0| <= exp(-r^2/4t)/(2 sqrt(pi eps t)) [exp(-a t) + b t E(t)]` pointwise
/// * `∫_0^t ∫|K0| <= beta0`
/// * `∫|K1| <= E(t)` and `∫_0^t ∫|K1| <= beta1`
/// * `∫|K2| <= t E(t)`
///
/// Spatial integrals run over the whole line; the pointwise check is reported
/// as the largest ratio `|K0| / envelope` over a grid reaching eight decades
/// below the peak.
pub fn check_kernel_bounds(p: &OperatorParams, t_samples: &[f64], cfg: &KernelConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let mut report = VerificationReport::new("kernel estimates");
    let omega = p.omega();
    for &t in t_samples {
        check_time(t)?;
        let e_t = p.e_unchecked(t);

        let k0 = profile_l1_with_refinement(&KernelProfile::k0(p, t)?, &KernelProfile::refined(p, 0, t)?, cfg)?;
        let rhs = (-p.a() * t).exp() + p.b().sqrt() * PI * t * (-omega * t).exp();
        report.push(Check::inequality("K0_mass", k0.value, rhs, k0.abs_err).at_t(t));

        let reach = (4.0 * p.epsilon() * t * 8.0 * std::f64::consts::LN_10).sqrt();
        let mut worst = (f64::NEG_INFINITY, 0.0, 0.0);
        for i in 0..=40 {
            let x = reach * i as f64 / 40.0;
            let q = eval_k0_quad(p, x, t, cfg)?;
            let env = pointwise_envelope(p, x, t);
            let ratio = q.value.abs() / env;
            if ratio > worst.0 {
                worst = (ratio, x, q.abs_err / env);
            }
        }
        report.push(
            Check::inequality("K0_pointwise", worst.0, 1.0, worst.2)
                .at_t(t)
                .at_x(worst.1),
        );

        let st = time_integrated_l1(t, cfg, |tau| KernelProfile::k0(p, tau))?;
        report.push(Check::inequality("K0_spacetime", st.value, p.beta0(), st.abs_err).at_t(t));

        let k1 = profile_l1_with_refinement(
            &KernelProfile::iterated(p, 1, t)?,
            &KernelProfile::refined(p, 1, t)?,
            cfg,
        )?;
        report.push(Check::inequality("K1_mass", k1.value, e_t, k1.abs_err).at_t(t));

        let st1 = time_integrated_l1(t, cfg, |tau| KernelProfile::iterated(p, 1, tau))?;
        report.push(Check::inequality("K1_spacetime", st1.value, p.beta1(), st1.abs_err).at_t(t));

        let k2 = profile_l1_with_refinement(
            &KernelProfile::iterated(p, 2, t)?,
            &KernelProfile::refined(p, 2, t)?,
            cfg,
        )?;
        report.push(Check::inequality("K2_mass", k2.value, t * e_t, k2.abs_err).at_t(t));
    }
    Ok(report)
}

/// `∫_T^inf (1 + b tau^2) exp(-k tau) dtau`.
pub(crate) fn envelope_time_tail(b: f64, k: f64, big_t: f64) -> f64 {
    let ek = (-k * big_t).exp();
    ek * (1.0 / k + b * (big_t * big_t / k + 2.0 * big_t / (k * k) + 2.0 / (k * k * k)))
}

/// Upper bound on `∫_T^inf exp(-s tau) |K0(x, tau)| dtau` from the pointwise envelope
/// `|K0| <= (1 + b tau^2) exp(-omega tau) / (2 sqrt(pi eps tau))`.
fn laplace_tail(p: &OperatorParams, s: f64, big_t: f64) -> f64 {
    norm(p) / big_t.sqrt() * envelope_time_tail(p.b(), s + p.omega(), big_t)
}

/// Numerical Laplace transform `∫_0^inf exp(-s t) K0(x, t) dt`.
pub fn numerical_k0_transform(p: &OperatorParams, x: f64, s: f64, cfg: &KernelConfig) -> Result<Quadrature> {
    LaplacePoint::new(p, s)?;
    laplace_numeric(
        s,
        cfg,
        |t| laplace_tail(p, s, t),
        |t, inner| eval_k0_quad(p, x, t, inner),
    )
}

/// `∫_0^inf exp(-s t) f(t) dt` for a kernel-like `f` obeying the `K0` envelope,
/// using `t = w^2` to absorb the `t^{-1/2}` behaviour at the origin.
pub(crate) fn laplace_numeric(
    s: f64,
    cfg: &KernelConfig,
    tail: impl Fn(f64) -> f64,
    f: impl Fn(f64, &KernelConfig) -> Result<Quadrature>,
) -> Result<Quadrature> {
    let mut big_t = 1.0;
    while tail(big_t) > cfg.quad_abs_tol {
        big_t *= 1.5;
        if big_t > 1e6 {
            return Err(Error::Accuracy {
                context: format!("Laplace transform tail at s={s}"),
                estimate: tail(big_t),
            });
        }
    }
    let inner = cfg.tightened(0.1);
    let w_max = big_t.sqrt();
    // panel breaks keep the adaptive rule from missing late-time structure
    let breaks: Vec<f64> = (1..8).map(|i| w_max * i as f64 / 8.0).collect();
    let q = try_integrate_with_breaks(
        |w| {
            if w <= 0.0 {
                return Ok(0.0);
            }
            let t = w * w;
            Ok(2.0 * w * (-s * t).exp() * f(t, &inner)?.value)
        },
        0.0,
        w_max,
        &breaks,
        cfg,
    )?;
    Ok(Quadrature {
        value: q.value,
        abs_err: q.abs_err + tail(big_t),
        evaluations: q.evaluations,
    })
}

/// Compares the numerical transform of `K0(x, .)` with `exp(-|x| sigma/sqrt(eps)) / (2 sqrt(eps) sigma)`
/// at each `s`, to relative accuracy [`LAPLACE_REL_TOL`].
pub fn laplace_transform_check(
    p: &OperatorParams,
    x: f64,
    s_samples: &[f64],
    cfg: &KernelConfig,
) -> Result<VerificationReport> {
    cfg.validate()?;
    let mut report = VerificationReport::new("Laplace transform of K0");
    for &s in s_samples {
        let lp = LaplacePoint::new(p, s)?;
        let num = numerical_k0_transform(p, x, s, cfg)?;
        let exact = lp.k0_transform(p, x);
        report.push(Check::relative_agreement(format!("laplace_K0(s={s})"), num.value, exact, LAPLACE_REL_TOL).at_x(x));
    }
    Ok(report)
}
