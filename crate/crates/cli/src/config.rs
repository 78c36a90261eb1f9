//! Experiment configuration: TOML with flat sections, every key optional.
//!
//! ```toml
//! [model]
//! file = "model.txt"    # or inline: a_re = 0.3, a_im = 0.4
//! [grid]
//! t_min = 0.02
//! t_max = 0.2
//! t_points = 8
//! spacing = "geometric"  # or "linear"
//! n = 256
//! [truncation]
//! k_max = 16
//! m_max = 6
//! j_max = 8
//! [tolerances]
//! moment = 1e-12
//! [output]
//! dir = "discstat-out"
//! ```

use std::path::{Path, PathBuf};

use discstat::hypersurface::{parse_model, PreparedDefiningFunction};
use discstat::slice_polar::DEFAULT_T_MAX;
use discstat::{geometric_grid, linear_grid, Complex64};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub file: Option<PathBuf>,
    pub a_re: Option<f64>,
    pub a_im: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Geometric,
    Linear,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub t_min: f64,
    pub t_max: f64,
    pub t_points: usize,
    pub spacing: Spacing,
    pub n: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            t_min: 0.02,
            t_max: 0.2,
            t_points: 8,
            spacing: Spacing::Geometric,
            n: 256,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruncationSection {
    pub k_max: usize,
    pub m_max: usize,
    pub j_max: usize,
}

impl Default for TruncationSection {
    fn default() -> Self {
        Self {
            k_max: 16,
            m_max: 6,
            j_max: 8,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Moment residuals of a stationary disc family.
    pub moment: f64,
    /// Symbolic `t⁴` coefficient against `k(θ)`.
    pub coefficient: f64,
    /// Allowed shortfall of fitted decay orders.
    pub order_slack: f64,
    /// `|obstruction|` below which it counts as zero.
    pub obstruction: f64,
    /// Relative deviation of obstruction ratios across `A`.
    pub linearity: f64,
    /// Relative error of `Â`; for `A = 0` the absolute bound `1e-6` applies.
    pub estimate: f64,
    /// Moment and Cauchy-probe threshold of the extension test.
    pub extension: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            moment: 1e-12,
            coefficient: 1e-12,
            order_slack: 0.1,
            obstruction: 1e-12,
            linearity: 1e-10,
            estimate: 0.02,
            extension: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("discstat-out"),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub model: ModelSection,
    pub grid: GridSection,
    pub truncation: TruncationSection,
    pub tolerances: Tolerances,
    pub output: OutputSection,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub n: Option<usize>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_points: Option<usize>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Reads `path` (or uses defaults), resolves a relative model path
    /// against the config's directory, applies overrides and validates.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                let mut cfg = Self::parse(&text)?;
                if let (Some(file), Some(dir)) = (&cfg.model.file, p.parent()) {
                    if file.is_relative() {
                        cfg.model.file = Some(dir.join(file));
                    }
                }
                cfg
            }
            None => Self::default(),
        };
        cfg.apply(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(dir) = &o.out {
            self.output.dir = dir.clone();
        }
        if let Some(n) = o.n {
            self.grid.n = n;
        }
        if let Some(t) = o.t_min {
            self.grid.t_min = t;
        }
        if let Some(t) = o.t_max {
            self.grid.t_max = t;
        }
        if let Some(p) = o.t_points {
            self.grid.t_points = p;
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let g = &self.grid;
        if !(g.t_min > 0.0 && g.t_min <= g.t_max && g.t_max <= DEFAULT_T_MAX) {
            return Err(CliError::Config(format!(
                "t range [{}, {}] must lie in (0, {DEFAULT_T_MAX}]",
                g.t_min, g.t_max
            )));
        }
        if g.t_points == 0 || (g.t_points > 1 && g.t_min == g.t_max) {
            return Err(CliError::Config(
                "t grid needs distinct endpoints and t_points ≥ 1".into(),
            ));
        }
        if !g.n.is_power_of_two() || g.n < 16 {
            return Err(CliError::Config(format!(
                "n = {} must be a power of two ≥ 16",
                g.n
            )));
        }
        let t = &self.truncation;
        if t.k_max < 2 || t.m_max < 4 || t.j_max < 2 {
            return Err(CliError::Config(
                "truncation needs k_max ≥ 2, m_max ≥ 4, j_max ≥ 2".into(),
            ));
        }
        let tol = &self.tolerances;
        for (name, v) in [
            ("moment", tol.moment),
            ("coefficient", tol.coefficient),
            ("order_slack", tol.order_slack),
            ("obstruction", tol.obstruction),
            ("linearity", tol.linearity),
            ("estimate", tol.estimate),
            ("extension", tol.extension),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!(
                    "tolerance {name} = {v} must be positive"
                )));
            }
        }
        if self.model.file.is_some() && (self.model.a_re.is_some() || self.model.a_im.is_some()) {
            return Err(CliError::Config(
                "give either model.file or inline a_re/a_im, not both".into(),
            ));
        }
        Ok(())
    }

    pub fn t_grid(&self) -> Vec<f64> {
        let g = &self.grid;
        match g.spacing {
            Spacing::Geometric => geometric_grid(g.t_min, g.t_max, g.t_points),
            Spacing::Linear => linear_grid(g.t_min, g.t_max, g.t_points),
        }
    }

    pub fn model(&self) -> Result<PreparedDefiningFunction, CliError> {
        match &self.model.file {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read model {}: {e}", path.display()))
                })?;
                parse_model(&text)
                    .map_err(|e| CliError::Config(format!("model {}: {e}", path.display())))
            }
            None => Ok(PreparedDefiningFunction::with_umbilic(Complex64::new(
                self.model.a_re.unwrap_or(0.0),
                self.model.a_im.unwrap_or(0.0),
            ))),
        }
    }
}
