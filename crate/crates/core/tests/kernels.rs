mod common;

use common::*;
use memdiff::kernel::{eval_k0, eval_k0_dx, eval_k1, eval_k2, heat_kernel};
use memdiff::theta::{eval_theta, eval_theta_dx, eval_theta_star, eval_theta_star_dx, SeriesTruncation};
use memdiff::{KernelConfig, OperatorParams, StripGeometry};

fn params() -> Vec<OperatorParams> {
    vec![
        OperatorParams::new(1.0, 1.0, 1.0, 1.0).unwrap(),
        OperatorParams::new(0.25, 2.0, 0.5, 3.0).unwrap(),
        OperatorParams::new(2.0, 0.3, 4.0, 0.7).unwrap(),
    ]
}

#[test]
fn k0_against_million_point_rule() {
    let cfg = KernelConfig::default();
    for p in params() {
        for &(x, t) in &[(0.0, 0.2), (0.3, 0.5), (1.0, 1.0), (-0.7, 2.5), (2.0, 4.0)] {
            let lib = eval_k0(&p, x, t, &cfg).unwrap();
            let brute = k0_midpoint(&p, x, t, 1_000_000);
            assert!((lib - brute).abs() < 1e-10, "x={x} t={t}: {lib} vs {brute}");
        }
    }
}

#[test]
fn k0_reduces_to_heat_kernel_without_memory() {
    let p = OperatorParams::limiting(0.7, 1.3, 0.0, 2.0).unwrap();
    let cfg = KernelConfig::default();
    for &(x, t) in &[(0.0, 0.1), (0.5, 1.0), (2.0, 3.0)] {
        let k = eval_k0(&p, x, t, &cfg).unwrap();
        let exact = (-x * x / (4.0 * 0.7 * t) - 1.3 * t).exp() / (2.0 * (std::f64::consts::PI * 0.7 * t).sqrt());
        assert!((k - exact).abs() < 1e-12);
        assert!((heat_kernel(&p, x, t) - exact).abs() < 1e-14);
    }
}

#[test]
fn k0_derivative_matches_difference_quotient() {
    let p = OperatorParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
    let cfg = KernelConfig::default();
    let h = 1e-4;
    for &(x, t) in &[(0.3, 0.5), (1.0, 2.0)] {
        let fd = (eval_k0(&p, x + h, t, &cfg).unwrap() - eval_k0(&p, x - h, t, &cfg).unwrap()) / (2.0 * h);
        assert!((eval_k0_dx(&p, x, t, &cfg).unwrap() - fd).abs() < 1e-7);
    }
}

#[test]
fn iterated_kernels_as_nested_convolutions() {
    let cfg = KernelConfig::default();
    for p in params() {
        let beta = p.beta();
        for &(x, t) in &[(0.4, 0.8), (1.0, 2.0)] {
            // substitute tau = t u^2 so the Gaussian onset is resolved
            let k1 = gauss5(
                |u| {
                    let tau = t * u * u;
                    if tau <= 0.0 {
                        return 0.0;
                    }
                    2.0 * t * u * (-beta * (t - tau)).exp() * eval_k0(&p, x, tau, &cfg).unwrap()
                },
                0.0,
                1.0,
                40,
            );
            let lib1 = eval_k1(&p, x, t, &cfg).unwrap();
            assert!((lib1 - k1).abs() < 1e-9 * (1.0 + k1.abs()), "K1 {lib1} vs {k1}");

            let k2 = gauss5(
                |u| {
                    let tau = t * u * u;
                    if tau <= 0.0 {
                        return 0.0;
                    }
                    2.0 * t * u * (-beta * (t - tau)).exp() * eval_k1(&p, x, tau, &cfg).unwrap()
                },
                0.0,
                1.0,
                40,
            );
            let lib2 = eval_k2(&p, x, t, &cfg).unwrap();
            assert!((lib2 - k2).abs() < 1e-9 * (1.0 + k2.abs()), "K2 {lib2} vs {k2}");
        }
    }
}

#[test]
fn theta_against_modal_series() {
    let cfg = KernelConfig::default();
    let tr = SeriesTruncation::default();
    for p in params() {
        for &l in &[1.0, 2.5] {
            let geom = StripGeometry::new(l).unwrap();
            for &t in &[0.05, 0.5, 3.0] {
                for k in 0..=4 {
                    let x = l * k as f64 / 4.0;
                    let th = eval_theta(&p, &geom, x, t, &tr, &cfg).unwrap();
                    let ts = eval_theta_star(&p, &geom, x, t, &tr, &cfg).unwrap();
                    let th_m = theta_modal(&p, l, x, t, 20_000);
                    let ts_m = theta_star_modal(&p, l, x, t, 20_000);
                    assert!((th - th_m).abs() < 1e-9, "theta x={x} t={t}: {th} vs {th_m}");
                    assert!((ts - ts_m).abs() < 1e-9, "theta* x={x} t={t}: {ts} vs {ts_m}");
                }
            }
        }
    }
}

#[test]
fn theta_against_brute_force_images() {
    let cfg = KernelConfig::default();
    let tr = SeriesTruncation::default();
    let p = OperatorParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
    let l = 1.0;
    let geom = StripGeometry::new(l).unwrap();
    for &t in &[0.1, 1.0, 4.0] {
        for &x in &[0.0, 0.2, 0.6, 1.0] {
            let mut plain = 0.0;
            let mut alt = 0.0;
            let mut plain_dx = 0.0;
            let mut alt_dx = 0.0;
            for n in -30i32..=30 {
                let y = x + 2.0 * n as f64 * l;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let k = eval_k0(&p, y, t, &cfg).unwrap();
                let kx = eval_k0_dx(&p, y, t, &cfg).unwrap();
                plain += k;
                alt += sign * k;
                plain_dx += kx;
                alt_dx += sign * kx;
            }
            assert!((eval_theta(&p, &geom, x, t, &tr, &cfg).unwrap() - plain).abs() < 1e-11);
            assert!((eval_theta_star(&p, &geom, x, t, &tr, &cfg).unwrap() - alt).abs() < 1e-11);
            assert!((eval_theta_dx(&p, &geom, x, t, &tr, &cfg).unwrap() - plain_dx).abs() < 1e-10);
            assert!((eval_theta_star_dx(&p, &geom, x, t, &tr, &cfg).unwrap() - alt_dx).abs() < 1e-10);
        }
    }
}

#[test]
fn fourier_transform_matches_matrix_exponential() {
    // ∫ K0(x, t) dx equals the zero mode of the 2x2 system
    let p = OperatorParams::new(0.5, 0.8, 2.0, 1.5).unwrap();
    let cfg = KernelConfig::default();
    for &t in &[0.3, 1.0, 3.0] {
        let half_width = 12.0 * (2.0 * p.epsilon() * t).sqrt();
        let mass = 2.0 * gauss5(|x| eval_k0(&p, x, t, &cfg).unwrap(), 0.0, half_width, 60);
        assert!((mass - k0_hat(&p, 0.0, t)).abs() < 1e-9, "t={t}");
    }
}
