//! Scenario files: one TOML document per run, unknown keys rejected.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use memdiff::{
    oracle::FdConfig, BcKind, GridConfig, KernelConfig, OperatorParams, ProblemSpec, SourceFn, SourceSpec, SpaceFn,
    StripGeometry, TimeFn,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub params: ParamsSection,
    #[serde(default)]
    pub domain: DomainSection,
    #[serde(default)]
    pub seed: u64,
    pub grid: Option<GridConfig>,
    pub kernel: Option<KernelConfig>,
    pub problem: Option<ProblemSection>,
    pub oracle: Option<FdConfig>,
    pub fhn: Option<FhnSection>,
    #[serde(default)]
    pub sample: SampleSection,
    pub asympt: Option<AsymptSection>,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub epsilon: f64,
    pub a: f64,
    pub b: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    #[serde(default = "one")]
    pub length: f64,
    /// Absolute horizon. Mutually exclusive with `horizon_omega`.
    pub horizon: Option<f64>,
    /// Horizon in units of `1 / omega`.
    pub horizon_omega: Option<f64>,
}

impl Default for DomainSection {
    fn default() -> Self {
        Self {
            length: 1.0,
            horizon: None,
            horizon_omega: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub bc: BcKind,
    #[serde(default = "TimeFn::zero")]
    pub left: TimeFn,
    #[serde(default = "TimeFn::zero")]
    pub right: TimeFn,
    #[serde(default = "SpaceFn::zero")]
    pub initial: SpaceFn,
    #[serde(default = "no_source")]
    pub source: SourceFn,
    /// Working region `|u| <= radius` for nonlinear sources.
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FhnSection {
    #[serde(default = "SpaceFn::zero")]
    pub u0: SpaceFn,
    #[serde(default = "SpaceFn::zero")]
    pub v0: SpaceFn,
    #[serde(default)]
    pub left: f64,
    #[serde(default)]
    pub right: f64,
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSection {
    #[serde(default = "default_x")]
    pub x: Vec<f64>,
    #[serde(default = "default_t")]
    pub t: Vec<f64>,
    /// Laplace variables.
    #[serde(default = "default_s")]
    pub s: Vec<f64>,
}

impl Default for SampleSection {
    fn default() -> Self {
        Self {
            x: default_x(),
            t: default_t(),
            s: default_s(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptSection {
    /// Defaults to `{10, 20, 30} / omega`.
    pub horizons: Option<Vec<f64>>,
    #[serde(default = "default_limit_tol")]
    pub tolerance: f64,
    /// Convolution pairs; when empty the boundary limit of `[problem]` is studied.
    #[serde(default)]
    pub pairs: Vec<PairSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSection {
    pub chi: TimeFn,
    pub h: TimeFn,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    /// Relative tolerance for `compare`.
    #[serde(default = "default_compare_tol")]
    pub tolerance: f64,
    #[serde(default = "default_mask")]
    pub mask_cells: usize,
    #[serde(default = "yes")]
    pub interpolate: bool,
    /// Absolute tolerance for the steady-state check.
    #[serde(default = "default_steady_tol")]
    pub steady_tolerance: f64,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            tolerance: default_compare_tol(),
            mask_cells: default_mask(),
            interpolate: true,
            steady_tolerance: default_steady_tol(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

fn no_source() -> SourceFn {
    SourceFn::None
}

fn default_x() -> Vec<f64> {
    vec![0.1, 0.3, 0.5, 0.7, 0.9]
}

fn default_t() -> Vec<f64> {
    vec![0.1, 1.0, 5.0]
}

fn default_s() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}

fn default_limit_tol() -> f64 {
    memdiff::asympt::BOUNDARY_LIMIT_TOL
}

fn default_compare_tol() -> f64 {
    2e-2
}

fn default_mask() -> usize {
    2
}

fn default_steady_tol() -> f64 {
    1e-2
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Parses, checks and fills in defaults so that the result records everything a run used.
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut cfg: ScenarioConfig = toml::from_str(text)?;
        cfg.validate()?;
        cfg.grid.get_or_insert(GridConfig::new(101, 1001));
        cfg.kernel.get_or_insert_with(KernelConfig::default);
        let grid = cfg.grid.unwrap();
        cfg.oracle.get_or_insert(FdConfig::new(grid.nx, grid.nt));
        if cfg.domain.horizon.is_none() && cfg.domain.horizon_omega.is_none() {
            cfg.domain.horizon = Some(1.0);
        }
        Ok(cfg)
    }

    fn validate(&self) -> anyhow::Result<()> {
        let p = self.params()?;
        let geom = self.geometry()?;
        if self.domain.horizon.is_some() && self.domain.horizon_omega.is_some() {
            bail!("give at most one of domain.horizon and domain.horizon_omega");
        }
        let horizon = self.horizon_for(&p);
        if !(horizon.is_finite() && horizon > 0.0) {
            bail!("horizon must be > 0, got {horizon}");
        }
        if let Some(grid) = &self.grid {
            grid.validate()?;
        }
        if let Some(k) = &self.kernel {
            k.validate()?;
        }
        if let Some(fd) = &self.oracle {
            if fd.nx < 16 {
                bail!("oracle.nx must be >= 16");
            }
        }
        for (name, v) in [
            ("sample.x", &self.sample.x),
            ("sample.t", &self.sample.t),
            ("sample.s", &self.sample.s),
        ] {
            if v.iter().any(|z| !z.is_finite()) {
                bail!("{name} has non-finite entries");
            }
        }
        if self.sample.x.iter().any(|&x| x < 0.0) {
            bail!("sample.x must be >= 0");
        }
        if self.sample.t.iter().any(|&t| t <= 0.0) || self.sample.s.iter().any(|&s| s <= 0.0) {
            bail!("sample.t and sample.s must be > 0");
        }
        if let Some(prob) = &self.problem {
            self.build_problem(prob, &p, &geom, horizon)?;
        }
        if let Some(f) = &self.fhn {
            f.u0.validate()?;
            f.v0.validate()?;
        }
        if let Some(a) = &self.asympt {
            if !(a.tolerance > 0.0) {
                bail!("asympt.tolerance must be > 0");
            }
        }
        if !(self.verify.tolerance > 0.0) || !(self.verify.steady_tolerance > 0.0) {
            bail!("verify tolerances must be > 0");
        }
        Ok(())
    }

    pub fn params(&self) -> anyhow::Result<OperatorParams> {
        let s = &self.params;
        Ok(OperatorParams::new(s.epsilon, s.a, s.b, s.beta)?)
    }

    pub fn geometry(&self) -> anyhow::Result<StripGeometry> {
        Ok(StripGeometry::new(self.domain.length)?)
    }

    fn horizon_for(&self, p: &OperatorParams) -> f64 {
        match (self.domain.horizon, self.domain.horizon_omega) {
            (Some(h), _) => h,
            (None, Some(k)) => k / p.omega(),
            (None, None) => 1.0,
        }
    }

    pub fn horizon(&self) -> anyhow::Result<f64> {
        Ok(self.horizon_for(&self.params()?))
    }

    pub fn grid(&self) -> GridConfig {
        self.grid.unwrap_or(GridConfig::new(101, 1001))
    }

    pub fn kernel(&self) -> KernelConfig {
        self.kernel.unwrap_or_default()
    }

    pub fn fd(&self) -> FdConfig {
        let g = self.grid();
        self.oracle.unwrap_or(FdConfig::new(g.nx, g.nt))
    }

    pub fn problem(&self) -> anyhow::Result<ProblemSpec> {
        let prob = self
            .problem
            .as_ref()
            .context("this subcommand needs a [problem] section")?;
        let p = self.params()?;
        self.build_problem(prob, &p, &self.geometry()?, self.horizon_for(&p))
    }

    fn build_problem(
        &self,
        prob: &ProblemSection,
        _p: &OperatorParams,
        geom: &StripGeometry,
        horizon: f64,
    ) -> anyhow::Result<ProblemSpec> {
        let source = SourceSpec::new(prob.source.clone(), prob.radius)?;
        let spec = ProblemSpec::new(*geom, horizon, prob.bc)
            .with_boundary(prob.left.clone(), prob.right.clone())
            .with_initial(prob.initial.clone())
            .with_source(source);
        spec.validate()?;
        Ok(spec)
    }

    pub fn fhn_spec(&self) -> anyhow::Result<memdiff::fhn::FhnSpec> {
        let f = self.fhn.as_ref().context("this subcommand needs an [fhn] section")?;
        let p = self.params()?;
        let mut spec = memdiff::fhn::FhnSpec::new(p, self.geometry()?, self.horizon_for(&p))
            .with_initial(f.u0.clone(), f.v0.clone())
            .with_boundary(TimeFn::constant(f.left), TimeFn::constant(f.right));
        if let Some(r) = f.radius {
            spec = spec.with_radius(r);
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn output_dir(&self, flag: Option<&Path>) -> PathBuf {
        flag.map(Path::to_path_buf)
            .or_else(|| self.output.dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"))
    }
}
