//! Grid solvers for the strip problems through their Green-function integral
//! equations, iterated by Picard substitution.
//!
//! With `G` the Green function of the boundary condition family, the solution
//! is the fixed point of
//!
//! ```text
//! u = ∫_0^L G(x, xi, t) u0(xi) dxi + B(x, t) + ∫_0^t ∫_0^L G(x, xi, t - tau) F(xi, tau, u) dxi dtau
//! ```
//!
//! where `B` collects the boundary convolutions (`-2 eps g1 * theta_x(x)` and
//! so on). Data and source terms are spatial convolutions of the periodized
//! kernel with an odd/even extension of the data, so every time lag reduces to
//! one table of Fourier multipliers. The time integral uses the trapezoidal
//! rule; the heat part of the boundary kernels is integrated exactly against
//! piecewise-linear boundary data.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::kernel::{norm, KernelProfile};
use crate::params::OperatorParams;
use crate::problem::{BcKind, GridConfig, ProblemSpec, TimeFn};
use crate::quad::{try_integrate_with_breaks, KernelConfig};
use crate::report::{Check, VerificationReport};
use crate::special::{gaussian_hat_average, half_order_moments, half_order_moments_undamped, HalfOrderMoments};
use crate::theta::{StripGeometry, ThetaProfile};

/// Gaussian factors below `exp(-SPECTRAL_REACH)` are dropped.
const SPECTRAL_REACH: f64 = 46.0;

/// Terms narrower than this many grid cells are tabulated in physical space.
const NARROW_CELLS: f64 = 3.0;

/// The heat part of the boundary kernels is integrated exactly over lags below
/// `max(L^2 / eps, HEAT_SMOOTH_STEPS dt)`.
const HEAT_SMOOTH_STEPS: f64 = 50.0;

/// History blocks up to this size are summed directly rather than by FFT.
const DIRECT_BLOCK: usize = 32;

/// Outcome of a grid solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub bc: BcKind,
    /// Picard iterations summed over all windows.
    pub iterations: usize,
    /// Largest final update over the windows.
    pub final_delta: f64,
    pub window_count: usize,
    /// Steps per Picard window.
    pub window_steps: usize,
    /// A priori contraction factor of one window.
    pub contraction_bound: f64,
    /// Largest deviation of the tabulated kernel mass from its exact value.
    pub quadrature_error_estimate: f64,
    /// Update sup-norms, per window.
    pub window_history: Vec<Vec<f64>>,
    /// Largest mismatch between the wall data and the interior solution
    /// extrapolated to the wall, over `t >= 10 dt` (pinned walls only).
    pub wall_error: Option<f64>,
}

impl SolveReport {
    /// Largest ratio of successive updates after the second iteration, per window
    /// (`None` when a window converged too fast to measure one).
    pub fn contraction_ratios(&self) -> Vec<Option<f64>> {
        self.window_history
            .iter()
            .map(|h| {
                h.windows(2)
                    .skip(1)
                    .filter(|w| w[0] > 0.0 && w[1] > 0.0)
                    .map(|w| w[1] / w[0])
                    .reduce(f64::max)
            })
            .collect()
    }
}

/// Spatial mass of `K0(., t)`: the solution of `m' = -a m - w`, `w' = b m - beta w`, `m(0) = 1`.
pub(crate) fn line_mass(p: &OperatorParams, t: f64) -> f64 {
    let (a, b, beta) = (p.a(), p.b(), p.beta());
    let disc = Complex64::new((a - beta).powi(2) - 4.0 * b, 0.0).sqrt();
    let mid = Complex64::new(-(a + beta) / 2.0, 0.0);
    if disc.norm() <= 1e-7 * (a + beta).max(1e-300) {
        let l = mid.re;
        return (l * t).exp() * (1.0 + (l + beta) * t);
    }
    let (lp, lm) = (mid + disc / 2.0, mid - disc / 2.0);
    let v = ((lp + beta) * (lp * t).exp() - (lm + beta) * (lm * t).exp()) / (lp - lm);
    v.re
}

/// Number of extended grid points for a boundary family.
fn period_points(bc: BcKind, nx: usize) -> usize {
    match bc {
        BcKind::Neumann | BcKind::Dirichlet => 2 * nx,
        BcKind::Mixed => 4 * nx,
    }
}

/// Extension of nodal values to one period: odd at `x = 0` for Dirichlet and
/// mixed, even at `x = 0` for Neumann, odd (Dirichlet) or even (otherwise) at `x = L`.
fn extend(bc: BcKind, row: &[f64], np: usize) -> Vec<Complex64> {
    let nx = row.len() - 1;
    let mut e = vec![Complex64::new(0.0, 0.0); np];
    match bc {
        BcKind::Neumann => {
            for i in 0..=nx {
                e[i].re = row[i];
            }
            for i in 1..nx {
                e[np - i].re = row[i];
            }
        }
        BcKind::Dirichlet => {
            for i in 1..nx {
                e[i].re = row[i];
                e[np - i].re = -row[i];
            }
        }
        BcKind::Mixed => {
            for i in 1..=nx {
                e[i].re = row[i];
            }
            for i in 1..nx {
                e[2 * nx - i].re = row[i];
            }
            for i in 1..2 * nx {
                e[np - i].re = -e[i].re;
            }
        }
    }
    e
}

struct Spatial {
    np: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Spatial {
    fn new(np: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            np,
            fwd: planner.plan_fft_forward(np),
            inv: planner.plan_fft_inverse(np),
        }
    }

    fn half(&self) -> usize {
        self.np / 2
    }

    fn forward(&self, mut e: Vec<Complex64>) -> Vec<Complex64> {
        self.fwd.process(&mut e);
        e.truncate(self.half() + 1);
        e
    }

    /// Inverse transform of a Hermitian spectrum given on `0..=np/2`; returns nodes `0..=nx`.
    fn inverse(&self, half_spec: &[Complex64], nodes: usize) -> Vec<f64> {
        let np = self.np;
        let mut full = vec![Complex64::new(0.0, 0.0); np];
        full[..half_spec.len()].copy_from_slice(half_spec);
        for q in half_spec.len()..np {
            full[q] = half_spec[np - q].conj();
        }
        self.inv.process(&mut full);
        full[..nodes].iter().map(|c| c.re / np as f64).collect()
    }
}

/// Fourier multipliers of the hat-averaged, periodized `K0(., s)` on the extended grid.
fn lag_spectrum(p: &OperatorParams, s: f64, h: f64, sp: &Spatial, sinc2: &[f64]) -> Result<Vec<f64>> {
    let np = sp.np;
    let half = sp.half();
    let period = np as f64 * h;
    let prof = KernelProfile::k0(p, s)?;
    let mut spec = vec![0.0; half + 1];
    let mut real = vec![Complex64::new(0.0, 0.0); np];
    let mut any_narrow = false;
    let dq = 2.0 * PI / period;
    for &(k, c) in prof.terms() {
        let sd = (0.5 / k).sqrt();
        let amp = c * (PI / k).sqrt();
        if sd >= NARROW_CELLS * h {
            // exp(-q_j^2 / 4k) by the recurrence g_{j+1} = g_j r_j, r_{j+1} = r_j r^2
            let alpha = dq * dq / (4.0 * k);
            let (mut g, mut r) = (1.0, (-alpha).exp());
            let r2 = r * r;
            for (j, s2) in sinc2.iter().enumerate() {
                if (j * j) as f64 * alpha > SPECTRAL_REACH {
                    break;
                }
                spec[j] += amp * g * s2;
                g *= r;
                r *= r2;
            }
        } else {
            any_narrow = true;
            let reach = (SPECTRAL_REACH / k).sqrt() + h;
            let dmax = (reach / h).ceil() as i64;
            for d in -dmax..=dmax {
                let v = amp * h * gaussian_hat_average(d as f64 * h, sd, h);
                real[d.rem_euclid(np as i64) as usize].re += v;
            }
        }
    }
    if any_narrow {
        sp.fwd.process(&mut real);
        for (j, v) in spec.iter_mut().enumerate() {
            *v += real[j].re;
        }
    }
    Ok(spec)
}

/// One boundary convolution term: `factor * sum_n s_n kern(y + 2nL, s)` with the
/// heat kernel part `norm d s^{-3/2} e^{..}` (derivative type) or `norm s^{-1/2} e^{..}`.
#[derive(Debug, Clone, Copy)]
struct EdgeKernel {
    derivative: bool,
    alternating: bool,
    factor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    Left,
    Right,
}

fn edge_kernel(p: &OperatorParams, bc: BcKind, edge: Edge) -> EdgeKernel {
    let two_eps = 2.0 * p.epsilon();
    let (derivative, alternating, factor) = match (bc, edge) {
        (BcKind::Dirichlet, Edge::Left) => (true, false, 1.0),
        (BcKind::Dirichlet, Edge::Right) => (true, false, -1.0),
        (BcKind::Neumann, Edge::Left) => (false, false, -two_eps),
        (BcKind::Neumann, Edge::Right) => (false, false, two_eps),
        (BcKind::Mixed, Edge::Left) => (true, true, 1.0),
        (BcKind::Mixed, Edge::Right) => (false, true, two_eps),
    };
    EdgeKernel {
        derivative,
        alternating,
        factor,
    }
}

/// Distance argument of the edge kernel at `x`.
fn edge_argument(bc: BcKind, edge: Edge, x: f64, l: f64) -> f64 {
    match (bc, edge) {
        (_, Edge::Left) => x,
        (BcKind::Mixed, Edge::Right) => l - x,
        (_, Edge::Right) => x - l,
    }
}

impl EdgeKernel {
    /// Memory part from a memory-only theta profile: `-2 eps theta_x` or `theta` (times `factor`).
    fn memory(&self, prof: &ThetaProfile, y: f64, eps: f64) -> f64 {
        let v = match (self.derivative, self.alternating) {
            (true, false) => -2.0 * eps * prof.theta_dx(y),
            (true, true) => -2.0 * eps * prof.theta_star_dx(y),
            (false, false) => prof.theta(y),
            (false, true) => prof.theta_star(y),
        };
        self.factor * v
    }
}

/// Convolution weights of one edge at one node: `B^j = sum_r w[r] g_{j-r} - end[j] g_0`.
#[derive(Debug, Clone)]
struct EdgeWeights {
    w: Vec<f64>,
    end: Vec<f64>,
}

fn moments(p: &OperatorParams, big_a: f64, s: f64) -> HalfOrderMoments {
    if p.a() > 0.0 {
        half_order_moments(big_a, p.a(), s)
    } else {
        half_order_moments_undamped(big_a, s)
    }
}

/// Product-integration weights of the heat part of an edge kernel at argument `y`.
fn heat_edge_weights(p: &OperatorParams, ek: &EdgeKernel, y: f64, l: f64, k: f64, nt: usize, out: &mut EdgeWeights) {
    let eps = p.epsilon();
    let horizon = k * nt as f64;
    let reach = (4.0 * eps * horizon * 50.0).sqrt();
    let nmax = ((reach + l) / (2.0 * l)).ceil() as i64;
    let c0 = ek.factor * norm(p);
    for n in -nmax..=nmax {
        let d = y + 2.0 * n as f64 * l;
        if d.abs() > reach {
            continue;
        }
        let sign = if ek.alternating && n.rem_euclid(2) == 1 {
            -1.0
        } else {
            1.0
        };
        let big_a = d * d / (4.0 * eps);
        let coef = if ek.derivative {
            if d == 0.0 {
                continue;
            }
            sign * c0 * d
        } else {
            sign * c0
        };
        // cumulative integrals of s^nu and s^{nu+1} against exp(-A/s - a s)
        let mut prev = (0.0, 0.0);
        for m in 0..nt {
            let s1 = (m + 1) as f64 * k;
            let mo = moments(p, big_a, s1);
            let cur = if ek.derivative {
                (mo.m32, mo.m12)
            } else {
                (mo.m12, mo.p12)
            };
            let m0 = cur.0 - prev.0;
            let m1 = (cur.1 - prev.1) - m as f64 * k * m0;
            prev = cur;
            let alpha = coef * (m0 - m1 / k);
            let gamma = coef * m1 / k;
            out.w[m] += alpha;
            out.w[m + 1] += gamma;
            out.end[m] += alpha;
        }
    }
}

/// Causal convolution `c_j = sum_{r<=j} a_r b_{j-r}` for `j < n`.
fn causal_convolve(planner: &mut FftPlanner<f64>, a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let len = (2 * n).next_power_of_two();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let mut fa: Vec<Complex64> = (0..len)
        .map(|i| Complex64::new(a.get(i).copied().filter(|_| i < n).unwrap_or(0.0), 0.0))
        .collect();
    let mut fb: Vec<Complex64> = (0..len)
        .map(|i| Complex64::new(b.get(i).copied().filter(|_| i < n).unwrap_or(0.0), 0.0))
        .collect();
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);
    fa[..n].iter().map(|c| c.re / len as f64).collect()
}

/// A discretized solution operator for one parameter set, strip, horizon,
/// boundary family and grid; reusable across data and sources.
pub struct GreenSolver {
    p: OperatorParams,
    geom: StripGeometry,
    bc: BcKind,
    horizon: f64,
    nx: usize,
    nt: usize,
    spatial: Spatial,
    /// `[lag][q]`, `q = 0..=np/2`; lag 0 is the identity.
    lag_spec: Vec<Vec<f64>>,
    /// `[edge][node]`
    edges: [Vec<EdgeWeights>; 2],
    mass_defect: f64,
}

impl GreenSolver {
    pub fn new(p: &OperatorParams, geom: &StripGeometry, bc: BcKind, horizon: f64, grid: &GridConfig) -> Result<Self> {
        grid.validate()?;
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::Config(format!("horizon must be > 0, got {horizon}")));
        }
        let (nx, nt) = (grid.nx, grid.nt);
        let l = geom.length();
        let h = l / nx as f64;
        let k = horizon / nt as f64;
        let np = period_points(bc, nx);
        let spatial = Spatial::new(np);
        let sinc2: Vec<f64> = (0..=np / 2)
            .map(|j| {
                let z = PI * j as f64 / np as f64;
                if j == 0 {
                    1.0
                } else {
                    (z.sin() / z).powi(2)
                }
            })
            .collect();
        let mut lag_spec = vec![vec![1.0; np / 2 + 1]];
        let tables: Result<Vec<Vec<f64>>> = (1..=nt)
            .into_par_iter()
            .map(|m| lag_spectrum(p, m as f64 * k, h, &spatial, &sinc2))
            .collect();
        lag_spec.extend(tables?);
        let mass_defect = (1..=nt)
            .map(|m| (lag_spec[m][0] - line_mass(p, m as f64 * k)).abs())
            .fold(0.0, f64::max);

        // the heat part of the edge kernels is product-integrated up to lag
        // m_c and joins the trapezoid rule of the memory part beyond it
        let eps = p.epsilon();
        let m_c = ((l * l / eps).max(HEAT_SMOOTH_STEPS * k) / k).ceil().min(nt as f64) as usize;
        let x_of = |i: usize| if i == nx { l } else { i as f64 * h };
        let smooth: Result<Vec<[Vec<f64>; 2]>> = (1..=nt)
            .into_par_iter()
            .map(|m| {
                let k0 = KernelProfile::k0(p, m as f64 * k)?;
                let mem = ThetaProfile::from_kernel(&k0.memory_part(), geom);
                let heat = (m >= m_c).then(|| ThetaProfile::from_kernel(&k0.heat_part(), geom));
                let heat_weight = if m == m_c { 0.5 } else { 1.0 };
                let mut out = [vec![0.0; nx + 1], vec![0.0; nx + 1]];
                for (e, edge) in [Edge::Left, Edge::Right].into_iter().enumerate() {
                    let ek = edge_kernel(p, bc, edge);
                    for (i, v) in out[e].iter_mut().enumerate() {
                        let y = edge_argument(bc, edge, x_of(i), l);
                        *v = ek.memory(&mem, y, eps);
                        if let Some(hp) = &heat {
                            *v += heat_weight * ek.memory(hp, y, eps);
                        }
                    }
                }
                Ok(out)
            })
            .collect();
        let smooth = smooth?;
        let heat_end: Vec<[f64; 2]> = {
            let hp = ThetaProfile::from_kernel(&KernelProfile::k0(p, m_c as f64 * k)?.heat_part(), geom);
            (0..=nx)
                .map(|i| {
                    let mut r = [0.0; 2];
                    for (e, edge) in [Edge::Left, Edge::Right].into_iter().enumerate() {
                        r[e] = edge_kernel(p, bc, edge).memory(&hp, edge_argument(bc, edge, x_of(i), l), eps);
                    }
                    r
                })
                .collect()
        };
        let build_edge = |e: usize, edge: Edge| -> Vec<EdgeWeights> {
            let ek = edge_kernel(p, bc, edge);
            (0..=nx)
                .into_par_iter()
                .map(|i| {
                    let mut wts = EdgeWeights {
                        w: vec![0.0; nt + 1],
                        end: vec![0.0; nt + 1],
                    };
                    heat_edge_weights(p, &ek, edge_argument(bc, edge, x_of(i), l), l, k, m_c, &mut wts);
                    for m in 1..=nt {
                        let v = smooth[m - 1][e][i];
                        wts.w[m] += k * v;
                        wts.end[m] += 0.5 * k * v;
                    }
                    // the halved heat value at m_c enters `end` at a quarter; the empty
                    // trapezoid at t_j = s_c needs half
                    wts.end[m_c] += 0.25 * k * heat_end[i][e];
                    wts
                })
                .collect()
        };
        let edges = [build_edge(0, Edge::Left), build_edge(1, Edge::Right)];
        Ok(Self {
            p: *p,
            geom: *geom,
            bc,
            horizon,
            nx,
            nt,
            spatial,
            lag_spec,
            edges,
            mass_defect,
        })
    }

    pub fn bc(&self) -> BcKind {
        self.bc
    }

    fn dt(&self) -> f64 {
        self.horizon / self.nt as f64
    }

    fn dx(&self) -> f64 {
        self.geom.length() / self.nx as f64
    }

    /// Nodes whose values are prescribed (left, right).
    fn pinned(&self) -> (bool, bool) {
        match self.bc {
            BcKind::Dirichlet => (true, true),
            BcKind::Mixed => (true, false),
            BcKind::Neumann => (false, false),
        }
    }

    /// Contraction bound `C * 2 ∫_0^T (1 + pi sqrt(b) s) exp(-omega s) ds` of a window of length `T`.
    fn window_bound(&self, lipschitz: f64, len: f64) -> f64 {
        let w = self.p.omega();
        let e = (-w * len).exp();
        let first = if w > 0.0 { (1.0 - e) / w } else { len };
        let second = if w > 0.0 {
            (1.0 - e * (1.0 + w * len)) / (w * w)
        } else {
            len * len / 2.0
        };
        lipschitz * 2.0 * (first + PI * self.p.b().sqrt() * second)
    }

    /// Steps per window: the whole horizon if it contracts, else the largest
    /// power of two meeting `target` (at least one step).
    fn window_steps(&self, lipschitz: f64, target: f64) -> usize {
        let k = self.dt();
        if self.window_bound(lipschitz, self.horizon) <= target {
            return self.nt;
        }
        let mut w = 1usize;
        while 2 * w < self.nt && self.window_bound(lipschitz, (2 * w) as f64 * k) <= target {
            w *= 2;
        }
        w
    }

    /// Adds the contribution of the finished source rows `e - s..e` to the
    /// targets `e + 1..=e + s` (lags `1..=2s`).
    fn push_history(
        &self,
        planner: &mut FftPlanner<f64>,
        fhat: &[Vec<Complex64>],
        acc: &mut [Vec<Complex64>],
        e: usize,
        s: usize,
    ) {
        let nt = self.nt;
        let last = (e + s).min(nt);
        if last <= e {
            return;
        }
        let lag = |d: usize, q: usize| if d <= nt { self.lag_spec[d][q] } else { 0.0 };
        if s <= DIRECT_BLOCK {
            acc.par_iter_mut().enumerate().for_each(|(q, a)| {
                for j in e + 1..=last {
                    a[j] += (e - s..e).map(|l| fhat[l][q] * lag(j - l, q)).sum::<Complex64>();
                }
            });
            return;
        }
        let n = 4 * s;
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        acc.par_iter_mut().enumerate().for_each(|(q, a)| {
            let zero = Complex64::new(0.0, 0.0);
            let mut x = vec![zero; n];
            for (i, v) in x.iter_mut().take(s).enumerate() {
                *v = fhat[e - s + i][q];
            }
            let mut y = vec![zero; n];
            for (d, v) in y.iter_mut().enumerate().take(2 * s + 1).skip(1) {
                v.re = lag(d, q);
            }
            fwd.process(&mut x);
            fwd.process(&mut y);
            for (u, v) in x.iter_mut().zip(&y) {
                *u *= v;
            }
            inv.process(&mut x);
            // target j sits at index j - e + s
            for j in e + 1..=last {
                a[j] += x[j - e + s] / n as f64;
            }
        });
    }

    /// Boundary-term contribution of one edge for data sampled at the time nodes.
    fn edge_response(&self, e: usize, g: &[f64]) -> Vec<Vec<f64>> {
        let n = self.nt + 1;
        self.edges[e]
            .par_iter()
            .map_init(FftPlanner::new, |planner, wts| {
                let mut c = causal_convolve(planner, &wts.w, g, n);
                for (j, v) in c.iter_mut().enumerate() {
                    *v -= wts.end[j] * g[0];
                }
                c
            })
            .collect()
    }

    /// Data part of the solution (initial data and boundary terms), row-major.
    fn data_terms(&self, spec: &ProblemSpec) -> Vec<Vec<f64>> {
        let (nx, nt) = (self.nx, self.nt);
        let u0: Vec<f64> = (0..=nx).map(|i| spec.initial.eval(self.node_x(i))).collect();
        let u0_hat = self.spatial.forward(extend(self.bc, &u0, self.spatial.np));
        let mut rows: Vec<Vec<f64>> = (0..=nt)
            .into_par_iter()
            .map(|j| {
                if j == 0 {
                    return u0.clone();
                }
                let spec_j: Vec<Complex64> = u0_hat.iter().zip(&self.lag_spec[j]).map(|(a, b)| a * b).collect();
                self.spatial.inverse(&spec_j, nx + 1)
            })
            .collect();
        for (e, data) in [&spec.left, &spec.right].into_iter().enumerate() {
            let g: Vec<f64> = (0..=nt).map(|j| data.eval(self.node_t(j))).collect();
            if g.iter().all(|v| *v == 0.0) {
                continue;
            }
            let resp = self.edge_response(e, &g);
            for (i, col) in resp.iter().enumerate() {
                for j in 1..=nt {
                    rows[j][i] += col[j];
                }
            }
        }
        rows
    }

    fn node_x(&self, i: usize) -> f64 {
        if i == self.nx {
            self.geom.length()
        } else {
            i as f64 * self.dx()
        }
    }

    fn node_t(&self, j: usize) -> f64 {
        if j == self.nt {
            self.horizon
        } else {
            j as f64 * self.dt()
        }
    }

    fn pin(&self, spec: &ProblemSpec, j: usize, row: &mut [f64]) {
        if j == 0 {
            return;
        }
        let (left, right) = self.pinned();
        let t = self.node_t(j);
        if left {
            row[0] = spec.left.eval(t);
        }
        if right {
            row[self.nx] = spec.right.eval(t);
        }
    }

    fn source_row(&self, spec: &ProblemSpec, j: usize, row: &[f64]) -> Vec<Complex64> {
        let t = self.node_t(j);
        let f: Vec<f64> = row
            .iter()
            .enumerate()
            .map(|(i, &u)| spec.source.eval(self.node_x(i), t, u))
            .collect();
        let mut hat = self.spatial.forward(extend(self.bc, &f, self.spatial.np));
        if j == 0 {
            // trapezoid end weight at tau = 0
            for v in hat.iter_mut() {
                *v *= 0.5;
            }
        }
        hat
    }

    /// Solves `spec` on this solver's grid.
    pub fn solve(&self, spec: &ProblemSpec, grid: &GridConfig) -> Result<(Field, SolveReport)> {
        spec.validate()?;
        grid.validate()?;
        if spec.bc != self.bc {
            return Err(Error::Config(format!(
                "solver built for {} data, problem is {}",
                self.bc, spec.bc
            )));
        }
        if grid.nx != self.nx
            || grid.nt != self.nt
            || (spec.horizon - self.horizon).abs() > 1e-12 * self.horizon
            || (spec.length() - self.geom.length()).abs() > 1e-12 * self.geom.length()
        {
            return Err(Error::Grid("problem grid differs from the solver grid".into()));
        }
        spec.warn_incompatible();
        let (nx, nt) = (self.nx, self.nt);
        let k = self.dt();
        let half = self.spatial.half();
        let base = self.data_terms(spec);
        let mut u = base.clone();
        for (j, row) in u.iter_mut().enumerate() {
            self.pin(spec, j, row);
        }

        let source_free = spec.source.f.is_zero();
        let spw = self.window_steps(spec.source.lipschitz, grid.window_contraction);
        let bound = self.window_bound(spec.source.lipschitz, spw as f64 * k);
        let nwin = if source_free { 1 } else { nt.div_ceil(spw) };
        let mut history = Vec::with_capacity(nwin);
        let mut iterations = 0;
        let mut final_delta: f64 = 0.0;

        if !source_free {
            // time spectra of the in-window lags, a_0 = 1/2 for the trapezoid end weight
            let nfft = (2 * spw + 2).next_power_of_two();
            let mut planner = FftPlanner::<f64>::new();
            let tfwd = planner.plan_fft_forward(nfft);
            let tinv = planner.plan_fft_inverse(nfft);
            let a_spec: Vec<Vec<Complex64>> = (0..=half)
                .into_par_iter()
                .map(|q| {
                    let mut a = vec![Complex64::new(0.0, 0.0); nfft];
                    a[0].re = 0.5;
                    for m in 1..=spw {
                        a[m].re = self.lag_spec[m][q];
                    }
                    tfwd.process(&mut a);
                    a
                })
                .collect();
            let mut fhat: Vec<Vec<Complex64>> = Vec::with_capacity(nt + 1);
            fhat.push(self.source_row(spec, 0, &u[0]));
            let radius = spec.source.radius;
            // source contributions from earlier windows, by spatial mode and target row
            let mut acc = vec![vec![Complex64::new(0.0, 0.0); nt + 1]; half + 1];

            for win in 0..nwin {
                let j0 = win * spw;
                let j1 = ((win + 1) * spw).min(nt);
                let nw = j1 - j0;
                let mut deltas = Vec::new();
                loop {
                    // spectra of the window rows j0..=j1 under the current iterate
                    let rows_hat: Vec<Vec<Complex64>> = (j0..=j1)
                        .into_par_iter()
                        .map(|j| {
                            if j == j0 {
                                fhat[j0].clone()
                            } else {
                                self.source_row(spec, j, &u[j])
                            }
                        })
                        .collect();
                    let conv: Vec<Vec<Complex64>> = (0..=half)
                        .into_par_iter()
                        .map(|q| {
                            let mut b = vec![Complex64::new(0.0, 0.0); nfft];
                            for (r, row) in rows_hat.iter().enumerate() {
                                b[r] = row[q];
                            }
                            tfwd.process(&mut b);
                            for (x, y) in b.iter_mut().zip(&a_spec[q]) {
                                *x *= y;
                            }
                            tinv.process(&mut b);
                            (1..=nw).map(|r| (b[r] / nfft as f64 + acc[q][j0 + r]) * k).collect()
                        })
                        .collect();
                    let new_rows: Vec<Vec<f64>> = (1..=nw)
                        .into_par_iter()
                        .map(|r| {
                            let j = j0 + r;
                            let spec_row: Vec<Complex64> = (0..=half).map(|q| conv[q][r - 1]).collect();
                            let s = self.spatial.inverse(&spec_row, nx + 1);
                            let mut row: Vec<f64> = base[j].iter().zip(&s).map(|(a, b)| a + b).collect();
                            self.pin(spec, j, &mut row);
                            row
                        })
                        .collect();
                    let mut delta: f64 = 0.0;
                    let mut peak: f64 = 0.0;
                    for (r, row) in new_rows.into_iter().enumerate() {
                        let j = j0 + r + 1;
                        for (a, b) in row.iter().zip(&u[j]) {
                            delta = delta.max((a - b).abs());
                            peak = peak.max(a.abs());
                        }
                        u[j] = row;
                    }
                    iterations += 1;
                    deltas.push(delta);
                    if !delta.is_finite() {
                        return Err(Error::Divergence {
                            window: win,
                            history: deltas,
                        });
                    }
                    if let Some(r) = radius {
                        if peak > r {
                            return Err(Error::RegionExit { window: win, radius: r });
                        }
                    }
                    if delta <= grid.picard_tol {
                        break;
                    }
                    if deltas.len() >= grid.max_iter {
                        return Err(Error::Divergence {
                            window: win,
                            history: deltas,
                        });
                    }
                }
                final_delta = final_delta.max(*deltas.last().unwrap_or(&0.0));
                history.push(deltas);
                for j in j0 + 1..=j1 {
                    fhat.push(self.source_row(spec, j, &u[j]));
                }
                // pairs (source l, target j) in different windows are split by the
                // highest bit where l and j - 1 differ; each aligned source block
                // of size s >= spw feeds the next s targets once it is complete
                let mut s = spw;
                while j1 < nt && j1 % s == 0 {
                    if (j1 / s) % 2 == 1 {
                        self.push_history(&mut planner, &fhat, &mut acc, j1, s);
                    }
                    s *= 2;
                }
            }
        } else {
            history.push(vec![0.0]);
            iterations = 1;
        }

        let mut field = Field::zeros(self.geom.length(), self.horizon, nx, nt)?;
        for (j, row) in u.iter().enumerate() {
            field.row_mut(j).copy_from_slice(row);
        }
        let wall_error = self.wall_error(spec, &field);
        let report = SolveReport {
            bc: self.bc,
            iterations,
            final_delta,
            window_count: nwin,
            window_steps: spw,
            contraction_bound: bound,
            quadrature_error_estimate: self.mass_defect,
            window_history: history,
            wall_error,
        };
        Ok((field, report))
    }

    fn wall_error(&self, spec: &ProblemSpec, field: &Field) -> Option<f64> {
        let (left, right) = self.pinned();
        if !(left || right) || self.nx < 4 {
            return None;
        }
        let nx = self.nx;
        let mut worst: f64 = 0.0;
        for j in 10.min(self.nt)..=self.nt {
            let t = field.t(j);
            if left {
                let ext = 3.0 * field.get(1, j) - 3.0 * field.get(2, j) + field.get(3, j);
                worst = worst.max((ext - spec.left.eval(t)).abs());
            }
            if right {
                let ext = 3.0 * field.get(nx - 1, j) - 3.0 * field.get(nx - 2, j) + field.get(nx - 3, j);
                worst = worst.max((ext - spec.right.eval(t)).abs());
            }
        }
        Some(worst)
    }
}

/// Solves any boundary family on a fresh solver.
pub fn solve(
    p: &OperatorParams,
    spec: &ProblemSpec,
    grid: &GridConfig,
    cfg: &KernelConfig,
) -> Result<(Field, SolveReport)> {
    cfg.validate()?;
    spec.validate()?;
    GreenSolver::new(p, &spec.geometry, spec.bc, spec.horizon, grid)?.solve(spec, grid)
}

fn require_bc(spec: &ProblemSpec, bc: BcKind) -> Result<()> {
    if spec.bc != bc {
        return Err(Error::Config(format!("expected {bc} boundary data, got {}", spec.bc)));
    }
    Ok(())
}

/// Dirichlet problem: `u(0,t) = g1`, `u(L,t) = g2`.
pub fn solve_dirichlet(
    p: &OperatorParams,
    spec: &ProblemSpec,
    grid: &GridConfig,
    cfg: &KernelConfig,
) -> Result<(Field, SolveReport)> {
    require_bc(spec, BcKind::Dirichlet)?;
    solve(p, spec, grid, cfg)
}

/// Neumann problem: `u_x(0,t) = psi1`, `u_x(L,t) = psi2`.
pub fn solve_neumann(
    p: &OperatorParams,
    spec: &ProblemSpec,
    grid: &GridConfig,
    cfg: &KernelConfig,
) -> Result<(Field, SolveReport)> {
    require_bc(spec, BcKind::Neumann)?;
    solve(p, spec, grid, cfg)
}

/// Mixed problem: `u(0,t) = h1`, `u_x(L,t) = h2`.
pub fn solve_mixed(
    p: &OperatorParams,
    spec: &ProblemSpec,
    grid: &GridConfig,
    cfg: &KernelConfig,
) -> Result<(Field, SolveReport)> {
    require_bc(spec, BcKind::Mixed)?;
    solve(p, spec, grid, cfg)
}

/// Pointwise check of `|u| <= 2 [||F|| beta0 + ||u0|| (1 + pi sqrt(b) t) exp(-omega t)]`
/// for `t >= onset` (default `1/omega`) on a homogeneous Dirichlet solution.
///
/// `||F||` is the declared bound of the source, or the sup over the solution when
/// none is declared. One check per time row, at the node with the least margin.
pub fn check_decay_estimate(
    p: &OperatorParams,
    spec: &ProblemSpec,
    solution: &Field,
    onset: Option<f64>,
) -> Result<VerificationReport> {
    if spec.bc != BcKind::Dirichlet || !spec.left.is_zero() || !spec.right.is_zero() {
        return Err(Error::Config(
            "the decay estimate needs homogeneous Dirichlet data".into(),
        ));
    }
    let omega = p.omega();
    let onset = onset.unwrap_or(1.0 / omega);
    let u0_norm = (0..=solution.nx())
        .map(|i| spec.initial.eval(solution.x(i)).abs())
        .fold(0.0, f64::max);
    let f_norm = match spec.source.sup_bound {
        Some(b) => b,
        None => {
            let mut m: f64 = 0.0;
            for j in 0..=solution.nt() {
                for i in 0..=solution.nx() {
                    m = m.max(spec.source.eval(solution.x(i), solution.t(j), solution.get(i, j)).abs());
                }
            }
            m
        }
    };
    let mut report = VerificationReport::new("decay estimate");
    for j in 0..=solution.nt() {
        let t = solution.t(j);
        if t < onset {
            continue;
        }
        let (i, lhs) = solution
            .row(j)
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.abs()))
            .fold((0, 0.0), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
        let rhs = 2.0 * (f_norm * p.beta0() + u0_norm * (1.0 + PI * p.b().sqrt() * t) * (-omega * t).exp());
        report.push(
            Check::inequality("decay_estimate", lhs, rhs, 1e-12 * (1.0 + rhs))
                .at_t(t)
                .at_x(solution.x(i)),
        );
    }
    Ok(report)
}

/// The boundary term of one edge alone at time `t`: `∫_0^t kappa(x, s) g(t - s) ds` with
/// `kappa = -2 eps theta_x(x, .)` (Dirichlet left), `2 eps theta_x(x - L, .)` (Dirichlet right),
/// `-2 eps theta(x, .)`, `2 eps theta(x - L, .)` (Neumann), `-2 eps theta*_x(x, .)`,
/// `2 eps theta*(L - x, .)` (mixed).
///
/// Computed by adaptive quadrature in `s`; `x` must lie strictly inside the strip
/// for the derivative kernels.
pub fn compute_boundary_response(
    p: &OperatorParams,
    geom: &StripGeometry,
    bc: BcKind,
    g: &TimeFn,
    edge: Edge,
    x_samples: &[f64],
    t: f64,
    cfg: &KernelConfig,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("boundary response needs t > 0, got {t}")));
    }
    let l = geom.length();
    let ek = edge_kernel(p, bc, edge);
    let eps = p.epsilon();
    x_samples
        .par_iter()
        .map(|&x| {
            if !(0.0..=l).contains(&x) {
                return Err(Error::Domain(format!("x = {x} outside [0, {l}]")));
            }
            let y = edge_argument(bc, edge, x, l);
            if ek.derivative && y.abs() < 1e-12 * l {
                return Err(Error::Domain(
                    "derivative boundary kernels are singular at their own wall".into(),
                ));
            }
            let kernel = |s: f64| -> Result<f64> {
                let prof = ThetaProfile::new(p, geom, s)?;
                let v = match (ek.derivative, ek.alternating) {
                    (true, false) => -2.0 * eps * prof.theta_dx(y),
                    (true, true) => -2.0 * eps * prof.theta_star_dx(y),
                    (false, false) => prof.theta(y),
                    (false, true) => prof.theta_star(y),
                };
                Ok(ek.factor * v * g.eval(t - s))
            };
            // heat peak of the nearest image at s ~ y^2 / (6 eps)
            let d = y.abs().min(l);
            let peak = d * d / (6.0 * eps);
            let mut breaks: Vec<f64> = [0.1, 0.5, 2.0, 8.0]
                .iter()
                .map(|f| f * peak)
                .filter(|&s| s > 0.0 && s < t)
                .collect();
            breaks.extend([1.0, 5.0, 20.0].into_iter().filter(|&s| s < t));
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
            try_integrate_with_breaks(kernel, 0.0, t, &breaks, cfg)
                .map(|q| q.value)
                .map_err(|e| e.at(|| format!("boundary response at x={x}, t={t}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{SourceFn, SourceSpec, SpaceFn};

    fn params() -> OperatorParams {
        OperatorParams::new(1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn line_mass_matches_damped_oscillation() {
        // a = b = beta = 1: eigenvalues -1 +- i, m(t) = e^{-t} cos t
        let p = params();
        for &t in &[0.1, 1.0, 3.0] {
            assert!((line_mass(&p, t) - (-t).exp() * t.cos()).abs() < 1e-14);
        }
        // repeated eigenvalue: (a - beta)^2 = 4b
        let q = OperatorParams::new(1.0, 3.0, 1.0, 1.0).unwrap();
        let direct = |t: f64| (-2.0 * t).exp() * (1.0 - t);
        assert!((line_mass(&q, 0.7) - direct(0.7)).abs() < 1e-12);
    }

    #[test]
    fn extensions_have_the_right_symmetry() {
        let row = [1.0, 2.0, 3.0, 4.0, 5.0];
        let e = extend(BcKind::Dirichlet, &row, 8);
        let re: Vec<f64> = e.iter().map(|c| c.re).collect();
        assert_eq!(re, vec![0.0, 2.0, 3.0, 4.0, 0.0, -4.0, -3.0, -2.0]);
        let e = extend(BcKind::Neumann, &row, 8);
        let re: Vec<f64> = e.iter().map(|c| c.re).collect();
        assert_eq!(re, vec![1.0, 2.0, 3.0, 4.0, 5.0, 4.0, 3.0, 2.0]);
        let e = extend(BcKind::Mixed, &row, 16);
        let re: Vec<f64> = e.iter().map(|c| c.re).collect();
        assert_eq!(
            re,
            vec![0.0, 2.0, 3.0, 4.0, 5.0, 4.0, 3.0, 2.0, 0.0, -2.0, -3.0, -4.0, -5.0, -4.0, -3.0, -2.0]
        );
    }

    #[test]
    fn zero_data_gives_zero() {
        let p = params();
        let geom = StripGeometry::new(1.0).unwrap();
        for bc in [BcKind::Dirichlet, BcKind::Neumann, BcKind::Mixed] {
            let spec = ProblemSpec::new(geom, 0.5, bc);
            let (u, rep) = solve(&p, &spec, &GridConfig::new(16, 20), &KernelConfig::default()).unwrap();
            assert_eq!(u.sup_norm(), 0.0);
            assert_eq!(rep.final_delta, 0.0);
        }
    }

    #[test]
    fn uniform_neumann_follows_line_mass() {
        let p = params();
        let geom = StripGeometry::new(1.0).unwrap();
        let spec = ProblemSpec::new(geom, 2.0, BcKind::Neumann).with_initial(SpaceFn::constant(1.5));
        let (u, _) = solve(&p, &spec, &GridConfig::new(16, 40), &KernelConfig::default()).unwrap();
        for j in [5, 20, 40] {
            let target = 1.5 * line_mass(&p, u.t(j));
            for i in 0..=16 {
                assert!((u.get(i, j) - target).abs() < 1e-9, "node ({i},{j})");
            }
        }
    }

    #[test]
    fn constant_source_windows_agree() {
        let p = params();
        let geom = StripGeometry::new(1.0).unwrap();
        let src = SourceSpec::new(
            SourceFn::Polynomial {
                coefficients: vec![0.5, -0.8],
            },
            None,
        )
        .unwrap();
        let spec = ProblemSpec::new(geom, 1.0, BcKind::Dirichlet)
            .with_initial(SpaceFn::Sine {
                amplitude: 1.0,
                wavenumber: PI,
                phase: 0.0,
            })
            .with_source(src);
        let mut grid = GridConfig::new(20, 40);
        let (one, r1) = solve(&p, &spec, &grid, &KernelConfig::default()).unwrap();
        grid.window_contraction = 0.05;
        let (many, r2) = solve(&p, &spec, &grid, &KernelConfig::default()).unwrap();
        assert!(r2.window_count > r1.window_count);
        let diff = one
            .values()
            .iter()
            .zip(many.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff < 1e-9, "windowing changed the solution by {diff}");
    }
}
