//! Finite-difference reference solver.
//!
//! The memory term is localized through `w(x,t) = b ∫_0^t exp(-beta (t - tau)) u dtau`,
//! which turns the problem into the reaction-diffusion system
//!
//! ```text
//! u_t = eps u_xx - a u - w + F(x, t, u),    w_t = b u - beta w,    w(., 0) = 0
//! ```
//!
//! integrated by the method of lines on central differences. Nothing here
//! touches the kernel or quadrature code, so agreement with the Green-function
//! solver is evidence for both.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::params::OperatorParams;
use crate::problem::{BcKind, ProblemSpec, TimeFn};
use crate::report::{Check, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FdScheme {
    /// Heun's method on the whole semi-discrete system; needs `dt <= safety dx^2 / (2 eps)`.
    Explicit,
    /// Crank–Nicolson diffusion with Heun predictor-corrector reaction and memory terms.
    SemiImplicitCn,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdConfig {
    pub nx: usize,
    pub nt: usize,
    #[serde(default = "FdConfig::default_scheme")]
    pub scheme: FdScheme,
    /// Also solve on the half-resolution grid and report the difference.
    #[serde(default)]
    pub richardson: bool,
    /// Fraction of the explicit stability limit allowed.
    #[serde(default = "FdConfig::default_safety")]
    pub safety: f64,
}

impl FdConfig {
    fn default_scheme() -> FdScheme {
        FdScheme::SemiImplicitCn
    }

    fn default_safety() -> f64 {
        0.9
    }

    pub fn new(nx: usize, nt: usize) -> Self {
        Self {
            nx,
            nt,
            scheme: FdScheme::SemiImplicitCn,
            richardson: false,
            safety: Self::default_safety(),
        }
    }

    pub fn validate(&self, p: &OperatorParams, length: f64, horizon: f64) -> Result<()> {
        if self.nx < 16 {
            return Err(Error::Config(format!("the oracle needs nx >= 16, got {}", self.nx)));
        }
        if self.nt < 1 {
            return Err(Error::Config("the oracle needs nt >= 1".into()));
        }
        if !(self.safety > 0.0 && self.safety <= 1.0) {
            return Err(Error::Config(format!("safety must lie in (0, 1], got {}", self.safety)));
        }
        if self.richardson && (!self.nx.is_multiple_of(2) || !self.nt.is_multiple_of(2) || self.nx < 32) {
            return Err(Error::Config("richardson pairs need even nx >= 32 and even nt".into()));
        }
        if self.scheme == FdScheme::Explicit {
            let dx = length / self.nx as f64;
            let dt = horizon / self.nt as f64;
            let limit = self.safety * dx * dx / (2.0 * p.epsilon());
            if dt > limit {
                return Err(Error::Config(format!(
                    "explicit scheme unstable: dt = {dt:.3e} exceeds {limit:.3e}; raise nt or use the semi-implicit scheme"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSolution {
    pub u: Field,
    /// The memory variable `w = b ∫ exp(-beta (t - tau)) u dtau`.
    pub w: Field,
    /// Sup-norm difference to the half-resolution run divided by 3 (second-order proxy).
    pub convergence_estimate: Option<f64>,
}

/// Right-hand side pieces `-a u - w + F` and `b u - beta w` at one time level.
fn reactions(p: &OperatorParams, spec: &ProblemSpec, x: &[f64], t: f64, u: &[f64], w: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let r = u
        .iter()
        .zip(w)
        .zip(x)
        .map(|((&ui, &wi), &xi)| -p.a() * ui - wi + spec.source.eval(xi, t, ui))
        .collect();
    let q = u.iter().zip(w).map(|(&ui, &wi)| p.b() * ui - p.beta() * wi).collect();
    (r, q)
}

/// Which walls carry prescribed values (left, right).
fn pinned(bc: BcKind) -> (bool, bool) {
    match bc {
        BcKind::Dirichlet => (true, true),
        BcKind::Mixed => (true, false),
        BcKind::Neumann => (false, false),
    }
}

/// `eps u_xx` with ghost nodes for flux walls; pinned wall rows are left at zero.
fn laplacian(eps: f64, h: f64, bc: BcKind, u: &[f64], left: f64, right: f64) -> Vec<f64> {
    let n = u.len() - 1;
    let c = eps / (h * h);
    let mut d = vec![0.0; n + 1];
    for i in 1..n {
        d[i] = c * (u[i - 1] - 2.0 * u[i] + u[i + 1]);
    }
    let (pl, pr) = pinned(bc);
    if !pl {
        // ghost u_{-1} = u_1 - 2 h psi1
        d[0] = c * (2.0 * u[1] - 2.0 * u[0] - 2.0 * h * left);
    }
    if !pr {
        // ghost u_{n+1} = u_{n-1} + 2 h psi2
        d[n] = c * (2.0 * u[n - 1] - 2.0 * u[n] + 2.0 * h * right);
    }
    d
}

/// Solves a tridiagonal system by the Thomas algorithm (no pivoting; the
/// matrices here are diagonally dominant).
fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = diag[0];
    c[0] = upper[0] / d;
    rhs[0] /= d;
    for i in 1..n {
        d = diag[i] - lower[i] * c[i - 1];
        if i + 1 < n {
            c[i] = upper[i] / d;
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / d;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

struct Stepper<'a> {
    p: &'a OperatorParams,
    spec: &'a ProblemSpec,
    nx: usize,
    h: f64,
    k: f64,
    x: Vec<f64>,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl<'a> Stepper<'a> {
    fn new(p: &'a OperatorParams, spec: &'a ProblemSpec, nx: usize, nt: usize) -> Self {
        let l = spec.length();
        let h = l / nx as f64;
        let k = spec.horizon / nt as f64;
        let x = (0..=nx).map(|i| if i == nx { l } else { i as f64 * h }).collect();
        // I - (k/2) eps D
        let r = 0.5 * k * p.epsilon() / (h * h);
        let mut lower = vec![-r; nx + 1];
        let mut diag = vec![1.0 + 2.0 * r; nx + 1];
        let mut upper = vec![-r; nx + 1];
        let (pl, pr) = pinned(spec.bc);
        if pl {
            diag[0] = 1.0;
            upper[0] = 0.0;
        } else {
            upper[0] = -2.0 * r;
        }
        if pr {
            diag[nx] = 1.0;
            lower[nx] = 0.0;
        } else {
            lower[nx] = -2.0 * r;
        }
        lower[0] = 0.0;
        upper[nx] = 0.0;
        Self {
            p,
            spec,
            nx,
            h,
            k,
            x,
            lower,
            diag,
            upper,
        }
    }

    fn wall(&self, t: f64) -> (f64, f64) {
        (self.spec.left.eval(t), self.spec.right.eval(t))
    }

    /// `(I - k/2 eps D)^{-1} [(I + k/2 eps D) u + k * forcing]` with wall data at `t0`, `t1`.
    fn cn_solve(&self, u: &[f64], forcing: &[f64], t0: f64, t1: f64) -> Vec<f64> {
        let eps = self.p.epsilon();
        let (l0, r0) = self.wall(t0);
        let (l1, r1) = self.wall(t1);
        let lap = laplacian(eps, self.h, self.spec.bc, u, l0, r0);
        let mut rhs: Vec<f64> = (0..=self.nx)
            .map(|i| u[i] + 0.5 * self.k * lap[i] + self.k * forcing[i])
            .collect();
        let (pl, pr) = pinned(self.spec.bc);
        let c = eps / (self.h * self.h);
        if pl {
            rhs[0] = l1;
        } else {
            // implicit half of the ghost flux
            rhs[0] -= 0.5 * self.k * c * 2.0 * self.h * l1;
        }
        if pr {
            rhs[self.nx] = r1;
        } else {
            rhs[self.nx] += 0.5 * self.k * c * 2.0 * self.h * r1;
        }
        thomas(&self.lower, &self.diag, &self.upper, &mut rhs);
        rhs
    }

    fn pin(&self, u: &mut [f64], t: f64) {
        let (pl, pr) = pinned(self.spec.bc);
        let (l, r) = self.wall(t);
        if pl {
            u[0] = l;
        }
        if pr {
            u[self.nx] = r;
        }
    }

    fn step(&self, scheme: FdScheme, u: &[f64], w: &[f64], t0: f64) -> (Vec<f64>, Vec<f64>) {
        let k = self.k;
        let t1 = t0 + k;
        let (r0, q0) = reactions(self.p, self.spec, &self.x, t0, u, w);
        let w_pred: Vec<f64> = w.iter().zip(&q0).map(|(a, b)| a + k * b).collect();
        match scheme {
            FdScheme::SemiImplicitCn => {
                let u_pred = self.cn_solve(u, &r0, t0, t1);
                let (r1, q1) = reactions(self.p, self.spec, &self.x, t1, &u_pred, &w_pred);
                let avg: Vec<f64> = r0.iter().zip(&r1).map(|(a, b)| 0.5 * (a + b)).collect();
                let u_new = self.cn_solve(u, &avg, t0, t1);
                let w_new = w
                    .iter()
                    .zip(q0.iter().zip(&q1))
                    .map(|(a, (b, c))| a + 0.5 * k * (b + c))
                    .collect();
                (u_new, w_new)
            }
            FdScheme::Explicit => {
                let eps = self.p.epsilon();
                let (l0, rr0) = self.wall(t0);
                let lap0 = laplacian(eps, self.h, self.spec.bc, u, l0, rr0);
                let mut u_pred: Vec<f64> = (0..=self.nx).map(|i| u[i] + k * (lap0[i] + r0[i])).collect();
                self.pin(&mut u_pred, t1);
                let (r1, q1) = reactions(self.p, self.spec, &self.x, t1, &u_pred, &w_pred);
                let (l1, rr1) = self.wall(t1);
                let lap1 = laplacian(eps, self.h, self.spec.bc, &u_pred, l1, rr1);
                let mut u_new: Vec<f64> = (0..=self.nx)
                    .map(|i| u[i] + 0.5 * k * (lap0[i] + r0[i] + lap1[i] + r1[i]))
                    .collect();
                self.pin(&mut u_new, t1);
                let w_new = w
                    .iter()
                    .zip(q0.iter().zip(&q1))
                    .map(|(a, (b, c))| a + 0.5 * k * (b + c))
                    .collect();
                (u_new, w_new)
            }
        }
    }
}

fn run(p: &OperatorParams, spec: &ProblemSpec, nx: usize, nt: usize, scheme: FdScheme) -> Result<(Field, Field)> {
    let stepper = Stepper::new(p, spec, nx, nt);
    let mut uf = Field::zeros(spec.length(), spec.horizon, nx, nt)?;
    let mut wf = Field::zeros(spec.length(), spec.horizon, nx, nt)?;
    let mut u: Vec<f64> = stepper.x.iter().map(|&x| spec.initial.eval(x)).collect();
    let mut w = vec![0.0; nx + 1];
    uf.row_mut(0).copy_from_slice(&u);
    for j in 0..nt {
        let (un, wn) = stepper.step(scheme, &u, &w, uf.t(j));
        if un.iter().chain(&wn).any(|v| !v.is_finite()) {
            return Err(Error::BlowUp { step: j + 1 });
        }
        u = un;
        w = wn;
        uf.row_mut(j + 1).copy_from_slice(&u);
        wf.row_mut(j + 1).copy_from_slice(&w);
    }
    Ok((uf, wf))
}

/// Method-of-lines solution of `spec`.
pub fn fd_solve(p: &OperatorParams, spec: &ProblemSpec, fd: &FdConfig) -> Result<OracleSolution> {
    spec.validate()?;
    fd.validate(p, spec.length(), spec.horizon)?;
    let (u, w) = run(p, spec, fd.nx, fd.nt, fd.scheme)?;
    let convergence_estimate = if fd.richardson {
        let (uc, _) = run(p, spec, fd.nx / 2, fd.nt / 2, fd.scheme)?;
        let mut d: f64 = 0.0;
        for j in 0..=fd.nt / 2 {
            for i in 0..=fd.nx / 2 {
                d = d.max((u.get(2 * i, 2 * j) - uc.get(i, j)).abs());
            }
        }
        Some(d / 3.0)
    } else {
        None
    };
    Ok(OracleSolution {
        u,
        w,
        convergence_estimate,
    })
}

/// A time series of the spatially uniform problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarSeries {
    pub t: Vec<f64>,
    pub u: Vec<f64>,
    pub w: Vec<f64>,
}

/// Classical RK4 for `u' = -a u - w + F(t)`, `w' = b u - beta w`, `u(0) = u0`, `w(0) = 0`.
pub fn fd_solve_scalar_memory(
    p: &OperatorParams,
    u0: f64,
    forcing: &TimeFn,
    horizon: f64,
    steps: usize,
) -> Result<ScalarSeries> {
    if !(horizon > 0.0 && horizon.is_finite()) || steps == 0 {
        return Err(Error::Config(format!(
            "scalar integrator needs horizon > 0 and steps >= 1, got {horizon}, {steps}"
        )));
    }
    let k = horizon / steps as f64;
    let rhs = |t: f64, u: f64, w: f64| (-p.a() * u - w + forcing.eval(t), p.b() * u - p.beta() * w);
    let mut out = ScalarSeries {
        t: vec![0.0],
        u: vec![u0],
        w: vec![0.0],
    };
    let (mut u, mut w) = (u0, 0.0);
    for j in 0..steps {
        let t = j as f64 * k;
        let (a1, b1) = rhs(t, u, w);
        let (a2, b2) = rhs(t + 0.5 * k, u + 0.5 * k * a1, w + 0.5 * k * b1);
        let (a3, b3) = rhs(t + 0.5 * k, u + 0.5 * k * a2, w + 0.5 * k * b2);
        let (a4, b4) = rhs(t + k, u + k * a3, w + k * b3);
        u += k / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        w += k / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        out.t.push(if j + 1 == steps { horizon } else { (j + 1) as f64 * k });
        out.u.push(u);
        out.w.push(w);
    }
    Ok(out)
}

/// Trapezoidal `b ∫_0^t exp(-beta (t - tau)) u(x, tau) dtau` on the grid of `u`.
pub fn memory_quadrature(p: &OperatorParams, u: &Field) -> Field {
    let mut w = u.clone();
    let k = u.dt();
    let decay = (-p.beta() * k).exp();
    let nx = u.nx();
    w.row_mut(0).fill(0.0);
    for j in 1..=u.nt() {
        for i in 0..=nx {
            let prev = w.get(i, j - 1);
            let v = decay * prev + 0.5 * p.b() * k * (decay * u.get(i, j - 1) + u.get(i, j));
            w.set(i, j, v);
        }
    }
    w
}

/// Nodes excluded near the corners `(0, 0)` and `(L, 0)`.
fn masked(i: usize, j: usize, nx: usize, cells: usize) -> bool {
    cells > 0 && j <= cells && (i <= cells || i + cells >= nx)
}

/// Relative sup-norm and L2 differences between a Green-function solution and
/// the oracle, skipping a `mask_corner_cells`-wide block at each initial corner.
///
/// Different grids are reconciled by interpolating the oracle onto the grid of
/// `green` when `interpolate` is set.
pub fn cross_validate(
    green: &Field,
    oracle: &OracleSolution,
    mask_corner_cells: usize,
    tolerance: f64,
    interpolate: bool,
) -> Result<VerificationReport> {
    let oracle = &oracle.u;
    let resampled;
    let reference = if green.same_grid(oracle) {
        oracle
    } else if interpolate {
        resampled = oracle.resample_like(green)?;
        &resampled
    } else {
        return Err(Error::Grid(format!(
            "{}x{} vs {}x{} and interpolation disabled",
            green.nx(),
            green.nt(),
            oracle.nx(),
            oracle.nt()
        )));
    };
    let (mut sup_d, mut sup_r, mut l2_d, mut l2_r) = (0.0f64, 0.0f64, 0.0, 0.0);
    for j in 0..=green.nt() {
        for i in 0..=green.nx() {
            if masked(i, j, green.nx(), mask_corner_cells) {
                continue;
            }
            let (a, b) = (green.get(i, j), reference.get(i, j));
            sup_d = sup_d.max((a - b).abs());
            sup_r = sup_r.max(b.abs());
            l2_d += (a - b).powi(2);
            l2_r += b * b;
        }
    }
    let rel = |d: f64, r: f64| if r > 0.0 { d / r } else { d };
    let mut report = VerificationReport::new("green vs oracle");
    report.push(Check::agreement("sup_relative", rel(sup_d, sup_r), 0.0, tolerance));
    report.push(Check::agreement(
        "l2_relative",
        rel(l2_d.sqrt(), l2_r.sqrt()),
        0.0,
        tolerance,
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::SpaceFn;
    use crate::theta::StripGeometry;
    use std::f64::consts::PI;

    #[test]
    fn thomas_solves_small_system() {
        let (lo, di, up) = ([0.0, 1.0, 1.0], [4.0, 4.0, 4.0], [1.0, 1.0, 0.0]);
        let mut rhs = [5.0, 6.0, 5.0];
        thomas(&lo, &di, &up, &mut rhs);
        for v in rhs {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn separable_heat_mode() {
        let p = OperatorParams::limiting(1.0, 1.0, 0.0, 1.0).unwrap();
        let geom = StripGeometry::new(1.0).unwrap();
        let spec = ProblemSpec::new(geom, 0.5, BcKind::Dirichlet).with_initial(SpaceFn::Sine {
            amplitude: 1.0,
            wavenumber: PI,
            phase: 0.0,
        });
        for scheme in [FdScheme::SemiImplicitCn, FdScheme::Explicit] {
            let fd = FdConfig {
                scheme,
                ..FdConfig::new(40, 2000)
            };
            let sol = fd_solve(&p, &spec, &fd).unwrap();
            // decay of the discrete mode
            let lam = 4.0 * 1600.0 * (PI / 80.0).sin().powi(2);
            let decay = (-(lam + 1.0) * 0.5f64).exp();
            let err = (sol.u.get(20, 2000) - decay).abs();
            assert!(err < 1e-4 * decay, "{scheme:?}: {err}");
        }
    }

    #[test]
    fn explicit_stability_is_enforced() {
        let p = OperatorParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let fd = FdConfig {
            scheme: FdScheme::Explicit,
            ..FdConfig::new(100, 100)
        };
        assert!(matches!(fd.validate(&p, 1.0, 1.0), Err(Error::Config(_))));
    }

    #[test]
    fn scalar_memory_damped_cosine() {
        let p = OperatorParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let s = fd_solve_scalar_memory(&p, 1.0, &TimeFn::zero(), 3.0, 600).unwrap();
        for (t, u) in s.t.iter().zip(&s.u) {
            assert!((u - (-t).exp() * t.cos()).abs() < 1e-9);
        }
    }

    #[test]
    fn identical_fields_have_zero_gap() {
        let f = Field::from_fn(1.0, 1.0, 20, 20, |x, t| x * t + 1.0).unwrap();
        let o = OracleSolution {
            u: f.clone(),
            w: f.clone(),
            convergence_estimate: None,
        };
        let r = cross_validate(&f, &o, 5, 1e-12, false).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks[0].lhs, 0.0);
    }
}
