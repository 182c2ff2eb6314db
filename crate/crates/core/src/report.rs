//! Structured pass/fail records for bound, limit and identity checks.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Still converging at the largest horizon; neither pass nor failure.
    Inconclusive,
    /// Not evaluated (hypothesis not met, e.g. `C0` at `a = beta`).
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Skipped => "skipped",
        };
        f.write_str(s)
    }
}

/// One check: `lhs` compared against `rhs`.
///
/// For inequalities `lhs <= rhs` the margin is `rhs - lhs`. For agreement
/// checks `lhs` is the computed value, `rhs` the target, and the margin is
/// `tolerance - deviation`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub t: Option<f64>,
    pub x: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// Quadrature error estimate (inequalities) or accepted deviation (agreements).
    pub tolerance: f64,
    pub status: Status,
}

impl Check {
    /// `lhs <= rhs`, accepting violations smaller than the quadrature error `quad_err`.
    pub fn inequality(name: impl Into<String>, lhs: f64, rhs: f64, quad_err: f64) -> Self {
        let margin = rhs - lhs;
        let ok = lhs.is_finite() && rhs.is_finite() && margin >= -quad_err.abs();
        Self {
            name: name.into(),
            t: None,
            x: None,
            lhs,
            rhs,
            margin,
            tolerance: quad_err.abs(),
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    /// `|value - target| <= tol`, absolute deviation.
    pub fn agreement(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        let dev = (value - target).abs();
        Self::from_deviation(name, value, target, dev, tol)
    }

    /// `|value - target| / |target| <= tol`.
    pub fn relative_agreement(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        let dev = if target == 0.0 {
            value.abs()
        } else {
            ((value - target) / target).abs()
        };
        Self::from_deviation(name, value, target, dev, tol)
    }

    fn from_deviation(name: impl Into<String>, value: f64, target: f64, dev: f64, tol: f64) -> Self {
        let ok = dev.is_finite() && dev <= tol;
        Self {
            name: name.into(),
            t: None,
            x: None,
            lhs: value,
            rhs: target,
            margin: tol - dev,
            tolerance: tol,
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    pub fn skipped(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            t: None,
            x: None,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            tolerance: 0.0,
            status: Status::Skipped,
        }
    }

    pub fn at_t(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn at_x(mut self, x: f64) -> Self {
        self.x = Some(x);
        self
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    /// Absolute deviation for agreement checks (`tolerance - margin`).
    pub fn deviation(&self) -> f64 {
        self.tolerance - self.margin
    }

    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass | Status::Skipped)
    }
}

/// A named collection of checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub title: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    /// All checks passed or were skipped; inconclusive checks do not count as passes.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn is_inconclusive(&self) -> bool {
        !self.has_failures() && self.checks.iter().any(|c| c.status == Status::Inconclusive)
    }

    /// Check with the smallest margin, skipping unevaluated ones.
    pub fn worst(&self) -> Option<&Check> {
        self.checks
            .iter()
            .filter(|c| c.status != Status::Skipped)
            .min_by(|a, b| a.margin.total_cmp(&b.margin))
    }

    pub fn find(&self, name: &str) -> impl Iterator<Item = &Check> {
        let name = name.to_owned();
        self.checks.iter().filter(move |c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            write!(f, "  [{}] {}", c.status, c.name)?;
            if let Some(t) = c.t {
                write!(f, " t={t}")?;
            }
            if let Some(x) = c.x {
                write!(f, " x={x}")?;
            }
            writeln!(f, ": lhs={:.6e} rhs={:.6e} margin={:.3e}", c.lhs, c.rhs, c.margin)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inequality_tolerates_quadrature_noise() {
        assert!(Check::inequality("a", 1.0 + 1e-12, 1.0, 1e-11).passed());
        assert!(!Check::inequality("a", 1.0 + 1e-9, 1.0, 1e-11).passed());
        assert!(!Check::inequality("a", f64::NAN, 1.0, 1.0).passed());
    }

    #[test]
    fn report_status() {
        let mut r = VerificationReport::new("r");
        r.push(Check::agreement("x", 1.0, 1.0005, 1e-3));
        r.push(Check::skipped("c0"));
        assert!(r.passed());
        r.push(Check::agreement("y", 1.0, 2.0, 1e-3).with_status(Status::Inconclusive));
        assert!(!r.passed());
        assert!(r.is_inconclusive());
        assert_eq!(r.worst().unwrap().name, "y");
    }
}
