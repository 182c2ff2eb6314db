//! Special functions used by the kernels.

use std::f64::consts::PI;

/// Bessel function of the first kind, order one.
#[inline]
pub fn bessel_j1(x: f64) -> f64 {
    libm::j1(x)
}

/// Bessel function of the first kind, order zero.
#[inline]
pub fn bessel_j0(x: f64) -> f64 {
    libm::j0(x)
}

/// `J1(z) / z`, continuous at `z = 0`.
pub fn j1_over_z(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        0.5 - z * z / 16.0
    } else {
        libm::j1(z) / z
    }
}

#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Scaled complementary error function `exp(x^2) erfc(x)` for `x >= 0`.
pub fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 25.0 {
        (x * x).exp() * libm::erfc(x)
    } else {
        // asymptotic series; the sixth term is below 1e-17 here
        let inv = 1.0 / (2.0 * x * x);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..8 {
            term *= -((2 * n - 1) as f64) * inv;
            sum += term;
        }
        sum / (x * PI.sqrt())
    }
}

/// `exp(-2pq) erfc(p - q)` and `exp(2pq) erfc(p + q)` for `p, q >= 0`, without overflow.
fn erfc_pair(p: f64, q: f64) -> (f64, f64) {
    let damp = (-(p * p) - q * q).exp();
    let minus = if p >= q {
        damp * erfcx(p - q)
    } else {
        (-2.0 * p * q).exp() * libm::erfc(p - q)
    };
    let plus = damp * erfcx(p + q);
    (minus, plus)
}

/// Incomplete integrals `I_nu(S) = ∫_0^S s^nu exp(-A/s - k s) ds` for
/// `nu = -3/2, -1/2, 1/2`, with `A >= 0` and `k > 0`.
///
/// `I_{-3/2}` diverges at `A = 0` and is reported as infinite there.
#[derive(Debug, Clone, Copy)]
pub struct HalfOrderMoments {
    pub m32: f64,
    pub m12: f64,
    pub p12: f64,
}

pub fn half_order_moments(big_a: f64, k: f64, s: f64) -> HalfOrderMoments {
    debug_assert!(big_a >= 0.0 && k > 0.0);
    if s <= 0.0 {
        return HalfOrderMoments {
            m32: 0.0,
            m12: 0.0,
            p12: 0.0,
        };
    }
    let p = (big_a / s).sqrt();
    let q = (k * s).sqrt();
    let (minus, plus) = erfc_pair(p, q);
    let m12 = 0.5 * (PI / k).sqrt() * (minus - plus);
    let m32 = if big_a > 0.0 {
        0.5 * (PI / big_a).sqrt() * (minus + plus)
    } else {
        f64::INFINITY
    };
    let edge = s.sqrt() * (-big_a / s - k * s).exp();
    // k I_{1/2} = I_{-1/2}/2 + A I_{-3/2} - sqrt(S) exp(-A/S - kS)
    let a_m32 = if big_a > 0.0 { big_a * m32 } else { 0.0 };
    let p12 = (0.5 * m12 + a_m32 - edge) / k;
    HalfOrderMoments { m32, m12, p12 }
}

/// Same integrals for `k = 0` (no killing), used by the limiting parameter sets.
pub fn half_order_moments_undamped(big_a: f64, s: f64) -> HalfOrderMoments {
    if s <= 0.0 {
        return HalfOrderMoments {
            m32: 0.0,
            m12: 0.0,
            p12: 0.0,
        };
    }
    let p = (big_a / s).sqrt();
    let g = (-big_a / s).exp();
    let e = libm::erfc(p);
    let m32 = if big_a > 0.0 {
        (PI / big_a).sqrt() * e
    } else {
        f64::INFINITY
    };
    let m12 = 2.0 * s.sqrt() * g - 2.0 * (PI * big_a).sqrt() * e;
    // d/ds [s^{3/2} e^{-A/s}] = 3/2 s^{1/2} e + A s^{-1/2} e
    let p12 = (2.0 / 3.0) * (s.powf(1.5) * g - big_a * m12);
    HalfOrderMoments { m32, m12, p12 }
}

/// Integral of the normalized Gaussian density with standard deviation `sd`
/// centred at `c`, weighted by the unit hat function on `[-h, h]`, divided by `h`
/// (so that the result tends to the density value as `h -> 0`).
pub fn gaussian_hat_average(c: f64, sd: f64, h: f64) -> f64 {
    // second antiderivative of the density: z Phi(z) + sd^2 phi(z)
    let psi2 = |z: f64| {
        let u = z / (sd * std::f64::consts::SQRT_2);
        let cdf = 0.5 * libm::erfc(-u);
        let dens = (-u * u).exp() / (sd * (2.0 * PI).sqrt());
        z * cdf + sd * sd * dens
    };
    // use the mirror image for c > 0 to keep cdf values away from 1
    let c = -c.abs();
    (psi2(c + h) - 2.0 * psi2(c) + psi2(c - h)) / (h * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn j1_reference_values() {
        // Abramowitz & Stegun table 9.1
        assert_relative_eq!(bessel_j1(1.0), 0.440_050_585_744_933_5, max_relative = 1e-14);
        assert_relative_eq!(bessel_j1(10.0), 0.043_472_746_168_861_44, max_relative = 1e-12);
        assert_eq!(bessel_j1(0.0), 0.0);
    }

    #[test]
    fn j1_over_z_series_matches() {
        assert_relative_eq!(
            j1_over_z(1e-4 * 0.999),
            libm::j1(0.999e-4) / 0.999e-4,
            max_relative = 1e-14
        );
        assert_relative_eq!(j1_over_z(2.0), libm::j1(2.0) / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn erfcx_is_continuous_at_switch() {
        // the asymptotic branch at the switch point against the direct product
        let direct = 625f64.exp() * libm::erfc(25.0);
        assert_relative_eq!(erfcx(25.0), direct, max_relative = 1e-13);
        assert_relative_eq!(erfcx(0.0), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn moments_match_quadrature() {
        for &(a, k, s) in &[(0.3, 1.0, 2.0), (0.01, 2.0, 0.5), (1e-4, 0.5, 1e-3), (2.0, 0.7, 5.0)] {
            let m = half_order_moments(a, k, s);
            let sub = |nu: f64| {
                // s = S w^2 removes the endpoint behaviour at 0
                simpson(
                    |w: f64| {
                        if w == 0.0 {
                            return 0.0;
                        }
                        let x = s * w * w;
                        2.0 * s * w * x.powf(nu) * (-a / x - k * x).exp()
                    },
                    0.0,
                    1.0,
                    200_000,
                )
            };
            assert_relative_eq!(m.m12, sub(-0.5), max_relative = 1e-9);
            assert_relative_eq!(m.m32, sub(-1.5), max_relative = 1e-9);
            assert_relative_eq!(m.p12, sub(0.5), max_relative = 1e-8);
        }
    }

    #[test]
    fn moments_at_zero_distance() {
        let m = half_order_moments(0.0, 1.3, 0.7);
        assert!(m.m32.is_infinite());
        assert_relative_eq!(
            m.m12,
            (PI / 1.3).sqrt() * erf((1.3f64 * 0.7).sqrt()),
            max_relative = 1e-14
        );
        let u = half_order_moments_undamped(0.0, 0.7);
        assert_relative_eq!(u.m12, 2.0 * 0.7f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(u.p12, (2.0 / 3.0) * 0.7f64.powf(1.5), max_relative = 1e-14);
    }

    #[test]
    fn undamped_moments_match_quadrature() {
        let (a, s) = (0.05, 0.8);
        let m = half_order_moments_undamped(a, s);
        let f = |nu: f64| {
            simpson(
                |w: f64| {
                    if w == 0.0 {
                        return 0.0;
                    }
                    let x = s * w * w;
                    2.0 * s * w * x.powf(nu) * (-a / x).exp()
                },
                0.0,
                1.0,
                200_000,
            )
        };
        assert_relative_eq!(m.m12, f(-0.5), max_relative = 1e-9);
        assert_relative_eq!(m.m32, f(-1.5), max_relative = 1e-9);
        assert_relative_eq!(m.p12, f(0.5), max_relative = 1e-9);
    }

    #[test]
    fn hat_average_tends_to_density() {
        let sd = 0.3;
        let dens = |z: f64| (-z * z / (2.0 * sd * sd)).exp() / (sd * (2.0 * PI).sqrt());
        for &c in &[0.0, 0.2, -0.45, 1.1] {
            let h = 1e-3;
            assert_relative_eq!(gaussian_hat_average(c, sd, h), dens(c), max_relative = 1e-4);
            let h = 0.1;
            let direct = simpson(|e| dens(c - e) * (1.0 - e.abs() / h), -h, h, 20_000) / h;
            assert_relative_eq!(gaussian_hat_average(c, sd, h), direct, max_relative = 1e-9);
        }
    }
}
