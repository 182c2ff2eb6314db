#![allow(dead_code)]

use std::f64::consts::PI;

use memdiff::OperatorParams;

/// `exp(M t) e1` for `M = [[-p, -1], [b, -beta]]`: the response `(y, w)` of
/// `y' = -p y - w`, `w' = b y - beta w` started from `(1, 0)`.
pub fn mode_response(p_rate: f64, b: f64, beta: f64, t: f64) -> (f64, f64) {
    let mu = -(p_rate + beta) / 2.0;
    let half = (beta - p_rate) / 2.0;
    let d2 = half * half - b;
    if d2 > 1e-12 {
        // real eigenvalues mu +- d; y = A e^{+} + B e^{-}, each coefficient in a
        // cancellation-free form
        let d = d2.sqrt();
        let (ep, em) = (((mu + d) * t).exp(), ((mu - d) * t).exp());
        let (a, bb) = if half < 0.0 {
            (-b / (2.0 * d * (d - half)), (d - half) / (2.0 * d))
        } else {
            ((half + d) / (2.0 * d), -b / (2.0 * d * (d + half)))
        };
        (a * ep + bb * em, b / (2.0 * d) * (ep - em))
    } else {
        let e = (mu * t).exp();
        let (c, s) = if d2 < -1e-12 {
            let d = (-d2).sqrt();
            ((d * t).cos(), (d * t).sin() / d)
        } else {
            (1.0, t)
        };
        (e * (c + s * half), e * s * b)
    }
}

/// Fourier transform of `K0(., t)` at wavenumber `xi`.
pub fn k0_hat(p: &OperatorParams, xi: f64, t: f64) -> f64 {
    mode_response(p.a() + p.epsilon() * xi * xi, p.b(), p.beta(), t).0
}

/// `theta` from its cosine series on `[0, L]`.
pub fn theta_modal(p: &OperatorParams, l: f64, x: f64, t: f64, modes: usize) -> f64 {
    let mut s = k0_hat(p, 0.0, t);
    for k in 1..modes {
        let xi = k as f64 * PI / l;
        s += 2.0 * k0_hat(p, xi, t) * (xi * x).cos();
    }
    s / (2.0 * l)
}

/// `theta*` (alternating images) from its half-integer cosine series.
pub fn theta_star_modal(p: &OperatorParams, l: f64, x: f64, t: f64, modes: usize) -> f64 {
    let mut s = 0.0;
    for k in 0..modes {
        let xi = (k as f64 + 0.5) * PI / l;
        s += k0_hat(p, xi, t) * (xi * x).cos();
    }
    s / l
}

/// `J1` by its power series; fine for `|z| <= 20`.
pub fn j1_series(z: f64) -> f64 {
    let q = -z * z / 4.0;
    let mut term = z / 2.0;
    let mut sum = term;
    for k in 1..80 {
        term *= q / (k as f64 * (k + 1) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `K0(x, t)` by an `n`-point midpoint rule after `y = t (1 - s^2)`, which
/// removes the `1/sqrt(t - y)` endpoint singularity.
pub fn k0_midpoint(p: &OperatorParams, x: f64, t: f64, n: usize) -> f64 {
    let eps = p.epsilon();
    let r2 = x * x / eps;
    let heat = (-r2 / (4.0 * t) - p.a() * t).exp() / t.sqrt();
    let h = 1.0 / n as f64;
    let mut acc = 0.0;
    for k in 0..n {
        let s = (k as f64 + 0.5) * h;
        let y = t * (1.0 - s * s);
        let tmy = t * s * s;
        let expo = r2 / (4.0 * y) + p.a() * y + p.beta() * tmy;
        if expo > 700.0 {
            continue;
        }
        let z = 2.0 * (p.b() * y * tmy).sqrt();
        acc += 2.0 * t.sqrt() * (-expo).exp() * j1_series(z);
    }
    (heat - p.b().sqrt() * acc * h) / (2.0 * (PI * eps).sqrt())
}

/// Composite Gauss–Legendre (5 points per panel) on `[a, b]`.
pub fn gauss5(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.236_926_885_056_189_1,
        0.478_628_670_499_366_5,
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for k in 0..panels {
        let c = a + (k as f64 + 0.5) * h;
        for (x, w) in X.iter().zip(W) {
            s += w * f(c + 0.5 * h * x);
        }
    }
    0.5 * h * s
}

pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
