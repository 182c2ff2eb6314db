//! FitzHugh–Nagumo system
//!
//! ```text
//! u_t = eps u_xx - v + f(u),   v_t = b u - beta v,   f(u) = -a u + u^2 (a + 1 - u)
//! ```
//!
//! on `0 <= x <= L` with Dirichlet data. Eliminating `v` gives the memory
//! operator with source `F = phi(u) - v0(x) exp(-beta t)`, `phi(u) = u^2 (a + 1 - u)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::greensolve::{compute_boundary_response, solve_dirichlet, Edge, SolveReport};
use crate::oracle::memory_quadrature;
use crate::params::OperatorParams;
use crate::problem::{cubic, BcKind, GridConfig, ProblemSpec, SourceFn, SourceSpec, SpaceFn, TimeFn};
use crate::quad::{integrate_with_breaks, try_integrate_with_breaks, KernelConfig};
use crate::report::{Check, VerificationReport};
use crate::theta::{StripGeometry, ThetaProfile};

const SUP_SAMPLES: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct FhnSpec {
    /// `a` doubles as the threshold of the cubic.
    pub params: OperatorParams,
    pub geometry: StripGeometry,
    pub horizon: f64,
    pub u0: SpaceFn,
    pub v0: SpaceFn,
    pub left: TimeFn,
    pub right: TimeFn,
    /// Overrides the data-derived working radius for the cubic's Lipschitz constant.
    pub working_radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FhnSolution {
    pub u: Field,
    pub v: Field,
    pub report: SolveReport,
    pub radius: f64,
}

impl FhnSpec {
    pub fn new(params: OperatorParams, geometry: StripGeometry, horizon: f64) -> Self {
        Self {
            params,
            geometry,
            horizon,
            u0: SpaceFn::zero(),
            v0: SpaceFn::zero(),
            left: TimeFn::zero(),
            right: TimeFn::zero(),
            working_radius: None,
        }
    }

    pub fn with_initial(mut self, u0: SpaceFn, v0: SpaceFn) -> Self {
        self.u0 = u0;
        self.v0 = v0;
        self
    }

    pub fn with_boundary(mut self, left: TimeFn, right: TimeFn) -> Self {
        self.left = left;
        self.right = right;
        self
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.working_radius = Some(radius);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Config(format!("horizon must be positive, got {}", self.horizon)));
        }
        self.u0.validate()?;
        self.v0.validate()?;
        self.left.validate()?;
        self.right.validate()?;
        if let Some(r) = self.working_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Config(format!("working radius must be positive, got {r}")));
            }
        }
        if self.params.a() >= 1.0 {
            log::warn!("threshold a = {} is outside the usual range 0 < a < 1", self.params.a());
        }
        Ok(())
    }

    fn data_norms(&self) -> (f64, f64) {
        let l = self.geometry.length();
        (self.u0.sup_on(l, SUP_SAMPLES), self.v0.sup_on(l, SUP_SAMPLES))
    }

    /// A bound on `|u|` from the data alone: the `u0` and `v0` terms of the FHN
    /// estimate plus the largest boundary value. The `||phi||` term is left out
    /// since it depends on the solution.
    pub fn a_priori_bound(&self) -> f64 {
        let p = &self.params;
        let (u0n, v0n) = self.data_norms();
        let mut b0: f64 = 0.0;
        let mut gmax: f64 = 0.0;
        for j in 0..=SUP_SAMPLES {
            let t = self.horizon * j as f64 / SUP_SAMPLES as f64;
            let h = 2.0 * (u0n * (1.0 + PI * p.b().sqrt() * t) * (-p.omega() * t).exp() + v0n * p.e_unchecked(t));
            b0 = b0.max(h);
            gmax = gmax.max(self.left.eval(t).abs()).max(self.right.eval(t).abs());
        }
        b0 + gmax
    }

    pub fn working_radius(&self) -> f64 {
        self.working_radius
            .unwrap_or_else(|| (2.0 * self.a_priori_bound()).max(1e-6))
    }

    /// The equivalent scalar Dirichlet problem.
    pub fn to_problem(&self) -> Result<ProblemSpec> {
        let p = &self.params;
        let source = SourceSpec::new(
            SourceFn::CubicFhn {
                a: p.a(),
                beta: p.beta(),
                v0: self.v0.clone(),
            },
            Some(self.working_radius()),
        )?;
        Ok(ProblemSpec::new(self.geometry, self.horizon, BcKind::Dirichlet)
            .with_boundary(self.left.clone(), self.right.clone())
            .with_initial(self.u0.clone())
            .with_source(source))
    }
}

/// `sup |phi(u)|` over `lo <= u <= hi`.
fn cubic_sup(a: f64, lo: f64, hi: f64) -> f64 {
    // phi'(u) = u (2 (a + 1) - 3 u)
    [lo, hi, 0.0, 2.0 * (a + 1.0) / 3.0]
        .into_iter()
        .filter(|u| (lo..=hi).contains(u))
        .map(|u| cubic(a, u).abs())
        .fold(0.0, f64::max)
}

/// `F(x, t, u) = u^2 (a + 1 - u) - v0(x) exp(-beta t)`
pub fn fhn_source(spec: &FhnSpec, x: f64, t: f64, u: f64) -> f64 {
    let p = &spec.params;
    cubic(p.a(), u) - spec.v0.eval(x) * (-p.beta() * t).exp()
}

/// `v0 exp(-beta t) + b ∫_0^t exp(-beta (t - tau)) u dtau` by the trapezoidal rule.
pub fn recover_v(p: &OperatorParams, v0: &SpaceFn, u: &Field) -> Field {
    let mut v = memory_quadrature(p, u);
    for j in 0..=u.nt() {
        let decay = (-p.beta() * u.t(j)).exp();
        for i in 0..=u.nx() {
            let w = v.get(i, j);
            v.set(i, j, w + v0.eval(u.x(i)) * decay);
        }
    }
    v
}

/// Solves for `u` with the Green-function solver and recovers `v`.
pub fn fhn_solve(spec: &FhnSpec, grid: &GridConfig, cfg: &KernelConfig) -> Result<FhnSolution> {
    spec.validate()?;
    let problem = spec.to_problem()?;
    let radius = spec.working_radius();
    let (u, report) = solve_dirichlet(&spec.params, &problem, grid, cfg)?;
    let v = recover_v(&spec.params, &spec.v0, &u);
    Ok(FhnSolution { u, v, report, radius })
}

/// `∫_0^L G(x, xi, t) f(xi) dxi` with the Dirichlet Green function.
fn green_integral(
    p: &OperatorParams,
    geom: &StripGeometry,
    f: &SpaceFn,
    x: f64,
    t: f64,
    cfg: &KernelConfig,
) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let l = geom.length();
    let prof = ThetaProfile::new(p, geom, t)?;
    let spread = (p.epsilon() * t).sqrt();
    let mut breaks: Vec<f64> = [-6.0, -2.0, 0.0, 2.0, 6.0]
        .iter()
        .map(|c| x + c * spread)
        .filter(|&s| s > 0.0 && s < l)
        .collect();
    breaks.dedup();
    integrate_with_breaks(
        |xi| (prof.theta((x - xi).abs()) - prof.theta(x + xi)) * f.eval(xi),
        0.0,
        l,
        &breaks,
        cfg,
    )
    .map(|q| q.value)
}

/// The data part of the solution:
///
/// ```text
/// N = -2 eps g1 * theta_x(x, .) + 2 eps g2 * theta_x(x - L, .)
///     + ∫ G(x, xi, t) u0(xi) dxi - exp(-beta .) * ∫ G(x, xi, .) v0(xi) dxi
/// ```
///
/// which is also the solution of the problem with the cubic switched off.
pub fn fhn_n_data_term(spec: &FhnSpec, x: f64, t: f64, cfg: &KernelConfig) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("N(x, t) needs t > 0, got {t}")));
    }
    let p = &spec.params;
    let geom = &spec.geometry;
    let l = geom.length();
    if !(0.0..=l).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, {l}]")));
    }
    let mut n = 0.0;
    for (g, edge) in [(&spec.left, Edge::Left), (&spec.right, Edge::Right)] {
        if !g.is_zero() {
            n += compute_boundary_response(p, geom, BcKind::Dirichlet, g, edge, &[x], t, cfg)?[0];
        }
    }
    n += green_integral(p, geom, &spec.u0, x, t, cfg)?;
    if !spec.v0.is_zero() {
        let beta = p.beta();
        let q = try_integrate_with_breaks(
            |s| {
                if s <= 0.0 {
                    return Ok((-beta * t).exp() * spec.v0.eval(x));
                }
                Ok((-beta * (t - s)).exp() * green_integral(p, geom, &spec.v0, x, s, cfg)?)
            },
            0.0,
            t,
            &[t.min(0.01), t.min(0.1)],
            cfg,
        )?;
        n -= q.value;
    }
    Ok(n)
}

/// Pointwise check of
///
/// ```text
/// |u| <= 2 [||u0|| (1 + pi sqrt(b) t) exp(-omega t) + ||v0|| E(t) + beta0 ||phi||]
/// |v| <= ||v0|| exp(-beta t) + 2 [b (||u0|| + t ||v0||) E(t) + b beta1 ||phi||]
/// ```
///
/// on a homogeneous-boundary solution, with `||phi||` the sup of `|phi|` over the
/// range of the computed `u`. One check per time row and component, at the
/// node with the least margin.
pub fn fhn_check_estimates(spec: &FhnSpec, solution: &FhnSolution) -> Result<VerificationReport> {
    if !spec.left.is_zero() || !spec.right.is_zero() {
        return Err(Error::Config("the FHN estimates need homogeneous boundary data".into()));
    }
    let p = &spec.params;
    let (u, v) = (&solution.u, &solution.v);
    let (u0n, v0n) = spec.data_norms();
    let (lo, hi) = u
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let phi = cubic_sup(p.a(), lo, hi);
    let mut report = VerificationReport::new("FHN estimates");
    let worst = |row: &[f64]| {
        row.iter()
            .enumerate()
            .map(|(i, x)| (i, x.abs()))
            .fold((0, 0.0), |acc, (i, x)| if x > acc.1 { (i, x) } else { acc })
    };
    for j in 0..=u.nt() {
        let t = u.t(j);
        let e = p.e_unchecked(t);
        let ub = 2.0 * (u0n * (1.0 + PI * p.b().sqrt() * t) * (-p.omega() * t).exp() + v0n * e + p.beta0() * phi);
        let vb = v0n * (-p.beta() * t).exp() + 2.0 * (p.b() * (u0n + t * v0n) * e + p.b() * p.beta1() * phi);
        let (iu, lu) = worst(u.row(j));
        let (iv, lv) = worst(v.row(j));
        report.push(
            Check::inequality("fhn_u_bound", lu, ub, 1e-12 * (1.0 + ub))
                .at_t(t)
                .at_x(u.x(iu)),
        );
        report.push(
            Check::inequality("fhn_v_bound", lv, vb, 1e-12 * (1.0 + vb))
                .at_t(t)
                .at_x(u.x(iv)),
        );
    }
    Ok(report)
}

/// Closed-form long-time profiles for constant boundary values with `u0 = 0`,
/// `F = 0`:
/// `u = g1 sinh(s0 (L - x)) / sinh(s0 L) + g2 sinh(s0 x) / sinh(s0 L)`, `v = (b / beta) u`.
pub fn fhn_steady_boundary(
    p: &OperatorParams,
    geom: &StripGeometry,
    g1: f64,
    g2: f64,
    x_samples: &[f64],
) -> Vec<(f64, f64)> {
    let s0 = p.sigma0();
    let l = geom.length();
    let d = (s0 * l).sinh();
    x_samples
        .iter()
        .map(|&x| {
            let u = g1 * (s0 * (l - x)).sinh() / d + g2 * (s0 * x).sinh() / d;
            (u, p.b() / p.beta() * u)
        })
        .collect()
}

/// Solves the linear boundary-driven problem to `T = horizon_factor / omega`
/// and compares the final row of `u` and `v` with [`fhn_steady_boundary`] at all
/// interior nodes.
pub fn check_fhn_steady(
    p: &OperatorParams,
    geom: &StripGeometry,
    g1: f64,
    g2: f64,
    horizon_factor: f64,
    grid: &GridConfig,
    tol: f64,
    cfg: &KernelConfig,
) -> Result<VerificationReport> {
    let horizon = horizon_factor / p.omega();
    let spec =
        ProblemSpec::new(*geom, horizon, BcKind::Dirichlet).with_boundary(TimeFn::constant(g1), TimeFn::constant(g2));
    let (u, _) = solve_dirichlet(p, &spec, grid, cfg)?;
    let v = recover_v(p, &SpaceFn::zero(), &u);
    let xs: Vec<f64> = (1..u.nx()).map(|i| u.x(i)).collect();
    let target = fhn_steady_boundary(p, geom, g1, g2, &xs);
    let nt = u.nt();
    let mut report = VerificationReport::new("FHN steady state");
    for (k, (tu, tv)) in target.into_iter().enumerate() {
        let x = xs[k];
        report.push(
            Check::agreement("steady_u", u.get(k + 1, nt), tu, tol)
                .at_x(x)
                .at_t(horizon),
        );
        report.push(
            Check::agreement("steady_v", v.get(k + 1, nt), tv, tol)
                .at_x(x)
                .at_t(horizon),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> FhnSpec {
        let p = OperatorParams::new(1.0, 0.5, 1.0, 1.0).unwrap();
        FhnSpec::new(p, StripGeometry::new(1.0).unwrap(), 1.0)
    }

    #[test]
    fn source_at_roots() {
        let s = spec().with_initial(SpaceFn::zero(), SpaceFn::constant(0.3));
        let a = s.params.a();
        for u in [0.0, a + 1.0] {
            assert_eq!(fhn_source(&s, 0.2, 0.7, u), -0.3 * (-0.7f64).exp());
        }
        let s = spec();
        assert_eq!(fhn_source(&s, 0.2, 0.0, 1.0), 0.5);
        assert_eq!(fhn_source(&s, 0.2, 0.0, 0.0), 0.0);
    }

    #[test]
    fn rest_state() {
        let sol = fhn_solve(&spec(), &GridConfig::new(16, 20), &KernelConfig::default()).unwrap();
        assert_eq!(sol.u.sup_norm(), 0.0);
        assert_eq!(sol.v.sup_norm(), 0.0);
        let r = fhn_check_estimates(&spec(), &sol).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn cubic_sup_scans_critical_points() {
        // phi(u) = u^2 (1.5 - u) peaks at u = 1 on [0, 1.2]
        assert!((cubic_sup(0.5, 0.0, 1.2) - 0.5).abs() < 1e-15);
        assert!((cubic_sup(0.5, -1.0, 0.5) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn steady_profile_values() {
        let p = OperatorParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let geom = StripGeometry::new(1.0).unwrap();
        let r = fhn_steady_boundary(&p, &geom, 1.0, 0.0, &[0.5]);
        assert!((r[0].0 - 0.396_639_090_873_193_4).abs() < 1e-15, "{}", r[0].0);
        assert_eq!(r[0].0, r[0].1);
        let s = fhn_steady_boundary(&p, &geom, 1.0, 1.0, &[0.2, 0.8]);
        assert!((s[0].0 - s[1].0).abs() < 1e-14);
        assert!(fhn_steady_boundary(&p, &geom, 0.0, 0.0, &[0.3])[0] == (0.0, 0.0));
    }
}
