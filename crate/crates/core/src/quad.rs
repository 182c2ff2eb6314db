//! Quadrature rules: globally adaptive Gauss-Kronrod (7/15 points) and
//! Gauss-Legendre nodes for fixed-order composite rules.

use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances shared by every adaptive integration in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    pub quad_rel_tol: f64,
    pub quad_abs_tol: f64,
    pub max_subdivisions: usize,
    /// Gaussian tail truncation radius for line integrals, in units of `sqrt(2 eps t)`.
    pub tail_cutoff_sigmas: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            quad_rel_tol: 1e-10,
            quad_abs_tol: 1e-13,
            max_subdivisions: 400,
            tail_cutoff_sigmas: 9.0,
        }
    }
}

impl KernelConfig {
    pub fn validate(&self) -> Result<()> {
        let in_unit = |v: f64| v > 0.0 && v < 1.0;
        if !in_unit(self.quad_rel_tol) || !in_unit(self.quad_abs_tol) {
            return Err(Error::InvalidParameter(
                "quadrature tolerances must lie in (0, 1)".into(),
            ));
        }
        if self.max_subdivisions < 8 {
            return Err(Error::InvalidParameter("max_subdivisions must be >= 8".into()));
        }
        if !(self.tail_cutoff_sigmas > 0.0) {
            return Err(Error::InvalidParameter("tail_cutoff_sigmas must be > 0".into()));
        }
        Ok(())
    }

    /// Copy with both tolerances scaled, for inner integrals of nested quadratures.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            quad_rel_tol: (self.quad_rel_tol * factor).max(1e-15),
            quad_abs_tol: (self.quad_abs_tol * factor).max(1e-300),
            ..*self
        }
    }
}

/// Value of an integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub abs_err: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * h;
    let resabs = resabs * h.abs();
    let resasc = resasc * h.abs();
    let mut err = ((resk - resg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive integration of `f` over `[a, b]`, bisecting the interval
/// with the largest error estimate until `err <= max(abs_tol, rel_tol |I|)`.
///
/// `breakpoints` are interior points where the integrand is known to be
/// non-smooth; they seed the initial partition.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &KernelConfig,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            abs_err: 0.0,
            evaluations: 0,
        });
    }
    let mut nodes = vec![a];
    nodes.extend(breakpoints.iter().copied().filter(|&p| p > a.min(b) && p < a.max(b)));
    nodes.push(b);
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut evals = 0;
    for w in nodes.windows(2) {
        let (v, e) = kronrod15(&mut f, w[0], w[1]);
        evals += 15;
        total += v;
        total_err += e;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value: v,
            err: e,
        });
    }
    let mut pieces = heap.len();
    loop {
        let tol = cfg.quad_abs_tol.max(cfg.quad_rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        if pieces >= cfg.max_subdivisions {
            return Err(Error::Accuracy {
                context: format!("adaptive quadrature on [{a}, {b}]"),
                estimate: total_err,
            });
        }
        let worst = heap.pop().expect("non-empty segment heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // interval exhausted at machine resolution; accept what we have
            heap.push(worst);
            break;
        }
        let (v1, e1) = kronrod15(&mut f, worst.a, mid);
        let (v2, e2) = kronrod15(&mut f, mid, worst.b);
        evals += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
        pieces += 1;
    }
    // re-sum to shed the drift of the running updates
    let value = heap.iter().map(|s| s.value).sum();
    let abs_err = heap.iter().map(|s| s.err).sum();
    Ok(Quadrature {
        value,
        abs_err,
        evaluations: evals,
    })
}

/// [`integrate_with_breaks`] for an integrand that can fail; the first error wins.
pub fn try_integrate_with_breaks<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &KernelConfig,
) -> Result<Quadrature> {
    let mut failure = None;
    let q = integrate_with_breaks(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        a,
        b,
        breakpoints,
        cfg,
    );
    match failure {
        Some(e) => Err(e),
        None => q,
    }
}

pub fn try_integrate<F: FnMut(f64) -> Result<f64>>(f: F, a: f64, b: f64, cfg: &KernelConfig) -> Result<Quadrature> {
    try_integrate_with_breaks(f, a, b, &[], cfg)
}

pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, cfg: &KernelConfig) -> Result<Quadrature> {
    integrate_with_breaks(f, a, b, &[], cfg)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Composite Gauss-Legendre rule: `panels` equal panels on `[a, b]`, `order` points each.
pub fn composite_gauss(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut x = Vec::with_capacity(panels * order);
    let mut w = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * h;
        for (xi, wi) in gx.iter().zip(&gw) {
            x.push(c + 0.5 * h * xi);
            w.push(0.5 * h * wi);
        }
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exact() {
        let cfg = KernelConfig::default();
        let q = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, &cfg).unwrap();
        assert_relative_eq!(q.value, 63.0 / 6.0 - 9.0, max_relative = 1e-14);
    }

    #[test]
    fn endpoint_singularity() {
        let cfg = KernelConfig::default();
        let q = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &cfg).unwrap();
        assert_relative_eq!(q.value, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn reports_accuracy_failure() {
        let cfg = KernelConfig {
            max_subdivisions: 8,
            ..KernelConfig::default()
        };
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &cfg);
        assert!(matches!(r, Err(Error::Accuracy { .. })));
    }

    #[test]
    fn legendre_weights() {
        for n in [1, 2, 5, 16, 33] {
            let (x, w) = gauss_legendre(n);
            assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
            let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
            if n >= 3 {
                assert_relative_eq!(m4, 0.4, max_relative = 1e-13);
            }
        }
        let (x, w) = composite_gauss(0.0, 3.0, 4, 8);
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.exp()).sum();
        assert_relative_eq!(v, 3f64.exp() - 1.0, max_relative = 1e-14);
    }
}
