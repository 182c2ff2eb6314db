//! Initial-boundary problems on the strip: data functions, sources and grids.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theta::StripGeometry;

/// Boundary condition family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BcKind {
    /// `u_x(0,t) = psi1(t)`, `u_x(L,t) = psi2(t)`.
    Neumann,
    /// `u(0,t) = g1(t)`, `u(L,t) = g2(t)`.
    Dirichlet,
    /// `u(0,t) = h1(t)`, `u_x(L,t) = h2(t)`.
    Mixed,
}

impl fmt::Display for BcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BcKind::Neumann => "neumann",
            BcKind::Dirichlet => "dirichlet",
            BcKind::Mixed => "mixed",
        })
    }
}

/// A user-supplied scalar function of one variable.
#[derive(Clone)]
pub struct CustomFn(pub Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl CustomFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }
}

impl fmt::Debug for CustomFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomFn")
    }
}

impl PartialEq for CustomFn {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

/// Boundary data and other functions of time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TimeFn {
    Constant {
        value: f64,
    },
    /// `value * min(t / duration, 1)`
    Ramp {
        value: f64,
        duration: f64,
    },
    /// `offset + amplitude exp(-rate t)`
    Exponential {
        #[serde(default)]
        offset: f64,
        amplitude: f64,
        rate: f64,
    },
    /// `offset + amplitude exp(-decay t) sin(frequency t + phase)`
    Sine {
        #[serde(default)]
        offset: f64,
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        decay: f64,
    },
    /// `amplitude t exp(-rate t)`
    TimeExponential {
        amplitude: f64,
        rate: f64,
    },
    /// `amplitude tanh(rate t)`
    Tanh {
        amplitude: f64,
        rate: f64,
    },
    /// `amplitude arctan(rate t)`
    Arctan {
        amplitude: f64,
        rate: f64,
    },
    Sum {
        terms: Vec<TimeFn>,
    },
    #[serde(skip)]
    Custom(CustomFn),
}

impl TimeFn {
    pub fn constant(value: f64) -> Self {
        TimeFn::Constant { value }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        TimeFn::Custom(CustomFn::new(f))
    }

    /// True for the literal zero constant (user functions are never treated as zero).
    pub fn is_zero(&self) -> bool {
        matches!(self, TimeFn::Constant { value } if *value == 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("time function: {what}")));
        match self {
            TimeFn::Ramp { duration, .. } if !(*duration > 0.0) => bad("ramp duration must be > 0"),
            TimeFn::Exponential { rate, .. } | TimeFn::TimeExponential { rate, .. } if !(*rate >= 0.0) => {
                bad("rate must be >= 0")
            }
            TimeFn::Sine { decay, .. } if !(*decay >= 0.0) => bad("decay must be >= 0"),
            TimeFn::Sum { terms } => terms.iter().try_for_each(TimeFn::validate),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TimeFn::Constant { value } => *value,
            TimeFn::Ramp { value, duration } => value * (t / duration).min(1.0),
            TimeFn::Exponential {
                offset,
                amplitude,
                rate,
            } => offset + amplitude * (-rate * t).exp(),
            TimeFn::Sine {
                offset,
                amplitude,
                frequency,
                phase,
                decay,
            } => offset + amplitude * (-decay * t).exp() * (frequency * t + phase).sin(),
            TimeFn::TimeExponential { amplitude, rate } => amplitude * t * (-rate * t).exp(),
            TimeFn::Tanh { amplitude, rate } => amplitude * (rate * t).tanh(),
            TimeFn::Arctan { amplitude, rate } => amplitude * (rate * t).atan(),
            TimeFn::Sum { terms } => terms.iter().map(|f| f.eval(t)).sum(),
            TimeFn::Custom(f) => (f.0)(t),
        }
    }

    /// Analytic derivative; `None` for user functions.
    pub fn derivative(&self, t: f64) -> Option<f64> {
        Some(match self {
            TimeFn::Constant { .. } => 0.0,
            TimeFn::Ramp { value, duration } => {
                if t < *duration {
                    value / duration
                } else {
                    0.0
                }
            }
            TimeFn::Exponential { amplitude, rate, .. } => -rate * amplitude * (-rate * t).exp(),
            TimeFn::Sine {
                amplitude,
                frequency,
                phase,
                decay,
                ..
            } => {
                let arg = frequency * t + phase;
                amplitude * (-decay * t).exp() * (frequency * arg.cos() - decay * arg.sin())
            }
            TimeFn::TimeExponential { amplitude, rate } => amplitude * (1.0 - rate * t) * (-rate * t).exp(),
            TimeFn::Tanh { amplitude, rate } => {
                let c = (rate * t).cosh();
                amplitude * rate / (c * c)
            }
            TimeFn::Arctan { amplitude, rate } => amplitude * rate / (1.0 + (rate * t).powi(2)),
            TimeFn::Sum { terms } => {
                let mut s = 0.0;
                for f in terms {
                    s += f.derivative(t)?;
                }
                s
            }
            TimeFn::Custom(_) => return None,
        })
    }

    /// Limit as `t -> inf` when it exists in closed form.
    pub fn limit(&self) -> Option<f64> {
        match self {
            TimeFn::Constant { value } | TimeFn::Ramp { value, .. } => Some(*value),
            TimeFn::Exponential {
                offset,
                amplitude,
                rate,
            } => {
                if *rate > 0.0 {
                    Some(*offset)
                } else {
                    Some(offset + amplitude)
                }
            }
            TimeFn::Sine {
                offset,
                amplitude,
                frequency,
                phase,
                decay,
            } => {
                if *decay > 0.0 || *amplitude == 0.0 {
                    Some(*offset)
                } else if *frequency == 0.0 {
                    Some(offset + amplitude * phase.sin())
                } else {
                    None
                }
            }
            TimeFn::TimeExponential { rate, amplitude } => (*rate > 0.0 || *amplitude == 0.0).then_some(0.0),
            TimeFn::Tanh { amplitude, rate } => Some(amplitude * rate.signum()),
            TimeFn::Arctan { amplitude, rate } => Some(amplitude * rate.signum() * PI / 2.0),
            TimeFn::Sum { terms } => terms.iter().map(TimeFn::limit).sum(),
            TimeFn::Custom(_) => None,
        }
    }
}

/// Initial profiles and other functions of `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceFn {
    Constant {
        value: f64,
    },
    /// `amplitude exp(-((x - center) / width)^2)`
    GaussianBump {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// `amplitude sin(wavenumber x + phase)`
    Sine {
        amplitude: f64,
        wavenumber: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `sum_k c_k x^k`
    Polynomial {
        coefficients: Vec<f64>,
    },
    Sum {
        terms: Vec<SpaceFn>,
    },
    #[serde(skip)]
    Custom(CustomFn),
}

impl SpaceFn {
    pub fn constant(value: f64) -> Self {
        SpaceFn::Constant { value }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        SpaceFn::Custom(CustomFn::new(f))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceFn::GaussianBump { width, .. } if !(*width > 0.0) => {
                Err(Error::Config(format!("gaussian-bump width must be > 0, got {width}")))
            }
            SpaceFn::Sum { terms } => terms.iter().try_for_each(SpaceFn::validate),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SpaceFn::Constant { value } => *value,
            SpaceFn::GaussianBump {
                amplitude,
                center,
                width,
            } => amplitude * (-((x - center) / width).powi(2)).exp(),
            SpaceFn::Sine {
                amplitude,
                wavenumber,
                phase,
            } => amplitude * (wavenumber * x + phase).sin(),
            SpaceFn::Polynomial { coefficients } => coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c),
            SpaceFn::Sum { terms } => terms.iter().map(|f| f.eval(x)).sum(),
            SpaceFn::Custom(f) => (f.0)(x),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SpaceFn::Constant { value } => *value == 0.0,
            SpaceFn::GaussianBump { amplitude, .. } | SpaceFn::Sine { amplitude, .. } => *amplitude == 0.0,
            SpaceFn::Polynomial { coefficients } => coefficients.iter().all(|c| *c == 0.0),
            SpaceFn::Sum { terms } => terms.iter().all(SpaceFn::is_zero),
            SpaceFn::Custom(_) => false,
        }
    }

    /// Sup of `|f|` on `[0, L]`, sampled on `n + 1` points.
    pub fn sup_on(&self, length: f64, n: usize) -> f64 {
        (0..=n)
            .map(|i| self.eval(length * i as f64 / n as f64).abs())
            .fold(0.0, f64::max)
    }
}

/// The right-hand side `F(x, t, u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SourceFn {
    None,
    Constant {
        value: f64,
    },
    /// `space(x) time(t)`, independent of `u`.
    Separable {
        space: SpaceFn,
        time: TimeFn,
    },
    /// `sum_k c_k u^k`
    Polynomial {
        coefficients: Vec<f64>,
    },
    /// `u^2 (a + 1 - u) - v0(x) exp(-beta t)`
    CubicFhn {
        a: f64,
        beta: f64,
        v0: SpaceFn,
    },
}

impl SourceFn {
    pub fn eval(&self, x: f64, t: f64, u: f64) -> f64 {
        match self {
            SourceFn::None => 0.0,
            SourceFn::Constant { value } => *value,
            SourceFn::Separable { space, time } => space.eval(x) * time.eval(t),
            SourceFn::Polynomial { coefficients } => coefficients.iter().rev().fold(0.0, |acc, c| acc * u + c),
            SourceFn::CubicFhn { a, beta, v0 } => cubic(*a, u) - v0.eval(x) * (-beta * t).exp(),
        }
    }

    /// True when `F` does not depend on `u`.
    pub fn is_linear_data(&self) -> bool {
        match self {
            SourceFn::None | SourceFn::Constant { .. } | SourceFn::Separable { .. } => true,
            SourceFn::Polynomial { coefficients } => coefficients.iter().skip(1).all(|c| *c == 0.0),
            SourceFn::CubicFhn { .. } => false,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SourceFn::None => true,
            SourceFn::Constant { value } => *value == 0.0,
            SourceFn::Separable { space, .. } => space.is_zero(),
            SourceFn::Polynomial { coefficients } => coefficients.iter().all(|c| *c == 0.0),
            SourceFn::CubicFhn { .. } => false,
        }
    }

    /// Lipschitz constant in `u` over `|u| <= radius` (`None`: unbounded region).
    pub fn lipschitz(&self, radius: Option<f64>) -> Result<f64> {
        let need = |what: &str| {
            radius.ok_or_else(|| {
                Error::Config(format!(
                    "{what} source needs a working radius for its Lipschitz constant"
                ))
            })
        };
        Ok(match self {
            SourceFn::None | SourceFn::Constant { .. } | SourceFn::Separable { .. } => 0.0,
            SourceFn::Polynomial { coefficients } => {
                if coefficients.len() <= 2 {
                    coefficients.get(1).map_or(0.0, |c| c.abs())
                } else {
                    let r = need("polynomial")?;
                    coefficients
                        .iter()
                        .enumerate()
                        .skip(1)
                        .map(|(k, c)| k as f64 * c.abs() * r.powi(k as i32 - 1))
                        .sum()
                }
            }
            SourceFn::CubicFhn { a, .. } => {
                let r = need("cubic")?;
                2.0 * r * (a + 1.0).abs() + 3.0 * r * r
            }
        })
    }
}

/// `phi(u) = u^2 (a + 1 - u)`
pub fn cubic(a: f64, u: f64) -> f64 {
    u * u * (a + 1.0 - u)
}

/// A source with its Lipschitz constant and optional working region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub f: SourceFn,
    /// `|F(x,t,u1) - F(x,t,u2)| <= lipschitz |u1 - u2|` on the working region.
    pub lipschitz: f64,
    /// Bound on `|F|` over the domain, for the estimate checks.
    #[serde(default)]
    pub sup_bound: Option<f64>,
    /// Iterates leaving `|u| <= radius` abort the solve.
    #[serde(default)]
    pub radius: Option<f64>,
}

impl SourceSpec {
    pub fn none() -> Self {
        Self {
            f: SourceFn::None,
            lipschitz: 0.0,
            sup_bound: Some(0.0),
            radius: None,
        }
    }

    /// Source with the Lipschitz constant derived from the formula.
    pub fn new(f: SourceFn, radius: Option<f64>) -> Result<Self> {
        let lipschitz = f.lipschitz(radius)?;
        Ok(Self {
            f,
            lipschitz,
            sup_bound: None,
            radius,
        })
    }

    pub fn with_sup_bound(mut self, bound: f64) -> Self {
        self.sup_bound = Some(bound);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lipschitz.is_finite() && self.lipschitz >= 0.0) {
            return Err(Error::Config(format!(
                "lipschitz constant must be >= 0, got {}",
                self.lipschitz
            )));
        }
        if let Some(r) = self.radius {
            if !(r > 0.0) {
                return Err(Error::Config(format!("working radius must be > 0, got {r}")));
            }
        }
        if self.radius.is_none() {
            // polynomial growth beyond degree one has no global Lipschitz constant
            self.f.lipschitz(None)?;
        }
        Ok(())
    }

    pub fn eval(&self, x: f64, t: f64, u: f64) -> f64 {
        self.f.eval(x, t, u)
    }

    /// Largest observed ratio `|F(u1) - F(u2)| / |u1 - u2| / lipschitz` over `samples`
    /// random pairs in the working region (unit region when unbounded); `<= 1` is consistent.
    pub fn spot_check_lipschitz(&self, length: f64, horizon: f64, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut next = move || rng.gen::<f64>();
        let r = self.radius.unwrap_or(1.0);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let x = length * next();
            let t = horizon * next();
            let u1 = r * (2.0 * next() - 1.0);
            let u2 = r * (2.0 * next() - 1.0);
            if u1 == u2 {
                continue;
            }
            let slope = (self.eval(x, t, u1) - self.eval(x, t, u2)).abs() / (u1 - u2).abs();
            let ratio = if self.lipschitz > 0.0 {
                slope / self.lipschitz
            } else if slope > 1e-12 {
                f64::INFINITY
            } else {
                0.0
            };
            worst = worst.max(ratio);
        }
        worst
    }
}

/// An initial-boundary problem on `[0, L] x [0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemSpec {
    pub geometry: StripGeometry,
    pub horizon: f64,
    pub bc: BcKind,
    /// `psi1`, `g1` or `h1`.
    pub left: TimeFn,
    /// `psi2`, `g2` or `h2`.
    pub right: TimeFn,
    pub initial: SpaceFn,
    pub source: SourceSpec,
}

impl ProblemSpec {
    pub fn new(geometry: StripGeometry, horizon: f64, bc: BcKind) -> Self {
        Self {
            geometry,
            horizon,
            bc,
            left: TimeFn::zero(),
            right: TimeFn::zero(),
            initial: SpaceFn::zero(),
            source: SourceSpec::none(),
        }
    }

    pub fn with_boundary(mut self, left: TimeFn, right: TimeFn) -> Self {
        self.left = left;
        self.right = right;
        self
    }

    pub fn with_initial(mut self, initial: SpaceFn) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_source(mut self, source: SourceSpec) -> Self {
        self.source = source;
        self
    }

    pub fn length(&self) -> f64 {
        self.geometry.length()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::Config(format!("horizon must be > 0, got {}", self.horizon)));
        }
        self.left.validate()?;
        self.right.validate()?;
        self.initial.validate()?;
        self.source.validate()
    }

    /// Mismatch between initial and boundary data at the corners (zero for compatible data).
    pub fn corner_mismatch(&self) -> (f64, f64) {
        let l = self.length();
        let h = 1e-6 * l;
        let left = match self.bc {
            BcKind::Dirichlet | BcKind::Mixed => self.left.eval(0.0) - self.initial.eval(0.0),
            BcKind::Neumann => self.left.eval(0.0) - (self.initial.eval(h) - self.initial.eval(0.0)) / h,
        };
        let right = match self.bc {
            BcKind::Dirichlet => self.right.eval(0.0) - self.initial.eval(l),
            BcKind::Neumann | BcKind::Mixed => {
                self.right.eval(0.0) - (self.initial.eval(l) - self.initial.eval(l - h)) / h
            }
        };
        (left, right)
    }

    pub(crate) fn warn_incompatible(&self) {
        let (left, right) = self.corner_mismatch();
        let scale = 1.0 + self.initial.sup_on(self.length(), 64);
        if left.abs() > 1e-6 * scale || right.abs() > 1e-6 * scale {
            log::warn!(
                "{} data incompatible at the corners (left mismatch {left:.3e}, right {right:.3e}); accuracy near t = 0 at the walls is reduced",
                self.bc
            );
        }
    }
}

/// Discretization and iteration controls for the grid solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    pub nt: usize,
    #[serde(default = "GridConfig::default_tol")]
    pub picard_tol: f64,
    #[serde(default = "GridConfig::default_max_iter")]
    pub max_iter: usize,
    /// Target contraction factor per Picard window.
    #[serde(default = "GridConfig::default_contraction")]
    pub window_contraction: f64,
}

impl GridConfig {
    fn default_tol() -> f64 {
        1e-10
    }

    fn default_max_iter() -> usize {
        200
    }

    fn default_contraction() -> f64 {
        0.5
    }

    pub fn new(nx: usize, nt: usize) -> Self {
        Self {
            nx,
            nt,
            picard_tol: Self::default_tol(),
            max_iter: Self::default_max_iter(),
            window_contraction: Self::default_contraction(),
        }
    }

    /// Both step counts doubled.
    pub fn refined(&self) -> Self {
        Self {
            nx: 2 * self.nx,
            nt: 2 * self.nt,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 4 || self.nt < 1 {
            return Err(Error::Config(format!(
                "grid too coarse: nx={}, nt={}",
                self.nx, self.nt
            )));
        }
        if !(self.picard_tol > 0.0) || self.max_iter == 0 {
            return Err(Error::Config("picard_tol must be > 0 and max_iter >= 1".into()));
        }
        if !(self.window_contraction > 0.0 && self.window_contraction < 1.0) {
            return Err(Error::Config(format!(
                "window_contraction must lie in (0, 1), got {}",
                self.window_contraction
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn central(f: &TimeFn, t: f64) -> f64 {
        let h = 1e-5;
        (f.eval(t + h) - f.eval(t - h)) / (2.0 * h)
    }

    #[test]
    fn time_derivatives_match_differences() {
        let fns = [
            TimeFn::Exponential {
                offset: 1.0,
                amplitude: -1.0,
                rate: 1.0,
            },
            TimeFn::Sine {
                offset: 2.0,
                amplitude: -1.0,
                frequency: 1.0,
                phase: PI / 2.0,
                decay: 1.0,
            },
            TimeFn::TimeExponential {
                amplitude: 1.0,
                rate: 1.0,
            },
            TimeFn::Tanh {
                amplitude: 1.0,
                rate: 2.0,
            },
            TimeFn::Arctan {
                amplitude: 1.0,
                rate: 1.0,
            },
            TimeFn::Sum {
                terms: vec![
                    TimeFn::constant(1.0),
                    TimeFn::TimeExponential {
                        amplitude: -1.0,
                        rate: 1.0,
                    },
                ],
            },
        ];
        for f in &fns {
            for &t in &[0.3, 1.7, 4.0] {
                assert!((f.derivative(t).unwrap() - central(f, t)).abs() < 1e-8, "{f:?} at {t}");
            }
        }
        assert_eq!(fns[1].limit(), Some(2.0));
        assert_eq!(fns[4].limit(), Some(PI / 2.0));
        assert!(TimeFn::custom(|t| t).derivative(1.0).is_none());
    }

    #[test]
    fn fhn_cubic_roots() {
        let v0 = SpaceFn::constant(0.7);
        let f = SourceFn::CubicFhn { a: 0.5, beta: 1.0, v0 };
        let tail = -0.7 * (-2.0f64).exp();
        assert_eq!(f.eval(0.3, 2.0, 0.0), tail);
        assert_eq!(f.eval(0.3, 2.0, 1.5), tail);
        assert_eq!(cubic(0.5, 1.0), 0.5);
    }

    #[test]
    fn lipschitz_constants_hold() {
        let s = SourceSpec::new(
            SourceFn::CubicFhn {
                a: 0.5,
                beta: 1.0,
                v0: SpaceFn::zero(),
            },
            Some(1.5),
        )
        .unwrap();
        assert!(s.spot_check_lipschitz(1.0, 1.0, 2000, 7) <= 1.0);
        let p = SourceSpec::new(
            SourceFn::Polynomial {
                coefficients: vec![0.0, -1.0, 0.0, -1.0],
            },
            Some(2.0),
        )
        .unwrap();
        assert_eq!(p.lipschitz, 1.0 + 12.0);
        assert!(p.spot_check_lipschitz(1.0, 1.0, 2000, 3) <= 1.0);
        assert!(SourceSpec::new(
            SourceFn::Polynomial {
                coefficients: vec![0.0, 0.0, 1.0]
            },
            None
        )
        .is_err());
    }

    #[test]
    fn config_round_trip() {
        let f: TimeFn = toml::from_str("kind = \"ramp\"\nvalue = 2.0\nduration = 0.5").unwrap();
        assert_eq!(f.eval(0.25), 1.0);
        assert!(toml::from_str::<TimeFn>("kind = \"ramp\"\nvalue = 2.0\nduration = 0.5\nextra = 1").is_err());
    }
}
