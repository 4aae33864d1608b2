//! Run configuration: a TOML file, optionally overridden from the command line.

use std::fmt;

use serde::{Deserialize, Serialize};

use cfs_core::dielectric::DielectricModel;
use cfs_core::elastic::{Dimensionality, FilmElasticParams};
use cfs_core::lifshitz::QuadratureSpec;
use cfs_core::stability::Method;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    ForceSweep,
    ThicknessScan,
    StabilityCheck,
    CriticalThickness,
    StabilityDiagram,
    ElasticReport,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::ForceSweep => "force-sweep",
            Command::ThicknessScan => "thickness-scan",
            Command::StabilityCheck => "stability-check",
            Command::CriticalThickness => "critical-thickness",
            Command::StabilityDiagram => "stability-diagram",
            Command::ElasticReport => "elastic-report",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    #[default]
    Retarded,
    #[serde(alias = "small-d")]
    Smalld,
}

impl From<MethodChoice> for Method {
    fn from(m: MethodChoice) -> Method {
        match m {
            MethodChoice::Retarded => Method::FullRetarded,
            MethodChoice::Smalld => Method::SmallD,
        }
    }
}

/// One layer of the stack.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Material {
    #[default]
    Vacuum,
    Plasma {
        omega_p: f64,
    },
    Drude {
        omega_p: f64,
        omega_tau: f64,
    },
    PerfectReflector,
}

impl Material {
    pub fn model(&self) -> Result<DielectricModel, cfs_core::Error> {
        match *self {
            Material::Vacuum => Ok(DielectricModel::Vacuum),
            Material::Plasma { omega_p } => DielectricModel::plasma(omega_p),
            Material::Drude { omega_p, omega_tau } => DielectricModel::drude(omega_p, omega_tau),
            Material::PerfectReflector => Ok(DielectricModel::PerfectReflector),
        }
    }

    pub fn omega_p(&self) -> Option<f64> {
        match *self {
            Material::Plasma { omega_p } | Material::Drude { omega_p, .. } => Some(omega_p),
            _ => None,
        }
    }

    pub fn omega_tau(&self) -> Option<f64> {
        match *self {
            Material::Plasma { .. } => Some(0.0),
            Material::Drude { omega_tau, .. } => Some(omega_tau),
            _ => None,
        }
    }

    /// Replaces the plasma frequency; `None` for models without one.
    pub fn with_omega_p(&self, value: f64) -> Option<Material> {
        match *self {
            Material::Plasma { .. } => Some(Material::Plasma { omega_p: value }),
            Material::Drude { omega_tau, .. } => Some(Material::Drude {
                omega_p: value,
                omega_tau,
            }),
            _ => None,
        }
    }

    /// Replaces the relaxation frequency, turning a plasma layer into Drude.
    pub fn with_omega_tau(&self, value: f64) -> Option<Material> {
        match *self {
            Material::Plasma { omega_p } | Material::Drude { omega_p, .. } => Some(Material::Drude {
                omega_p,
                omega_tau: value,
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    /// Film thickness, m.
    pub thickness: Option<f64>,
    /// Thickness interval for scans and critical-thickness searches, m.
    pub thickness_range: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Elastic {
    pub young: f64,
    pub poisson: f64,
    pub surface_energy: f64,
    pub mismatch_stress: f64,
    pub surface_stress: f64,
    pub hamaker: Option<f64>,
    pub three_d: bool,
}

impl Default for Elastic {
    fn default() -> Self {
        let p = FilmElasticParams::default();
        Elastic {
            young: p.young,
            poisson: p.poisson,
            surface_energy: p.surface_energy,
            mismatch_stress: p.mismatch_stress,
            surface_stress: p.surface_stress,
            hamaker: p.hamaker,
            three_d: false,
        }
    }
}

impl Elastic {
    pub fn params(&self) -> FilmElasticParams {
        FilmElasticParams {
            young: self.young,
            poisson: self.poisson,
            surface_energy: self.surface_energy,
            mismatch_stress: self.mismatch_stress,
            surface_stress: self.surface_stress,
            hamaker: self.hamaker,
        }
    }

    pub fn dimensionality(&self) -> Dimensionality {
        if self.three_d {
            Dimensionality::ThreeD
        } else {
            Dimensionality::TwoD
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub xi_scale: Option<f64>,
}

impl Default for Quadrature {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        Quadrature {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_subdivisions: q.max_subdivisions,
            xi_scale: q.xi_scale,
        }
    }
}

impl Quadrature {
    pub fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
            xi_scale: self.xi_scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "film.omega_p")]
    FilmOmegaP,
    #[serde(rename = "film.omega_tau")]
    FilmOmegaTau,
    #[serde(rename = "substrate.omega_p")]
    SubstrateOmegaP,
    #[serde(rename = "substrate.omega_tau")]
    SubstrateOmegaTau,
    /// Film and substrate relaxation frequency together.
    #[serde(rename = "omega_tau")]
    OmegaTau,
    #[serde(rename = "thickness")]
    Thickness,
}

impl Axis {
    pub fn column(self) -> &'static str {
        match self {
            Axis::FilmOmegaP => "film_omega_p_rad_s",
            Axis::FilmOmegaTau => "film_omega_tau_rad_s",
            Axis::SubstrateOmegaP => "substrate_omega_p_rad_s",
            Axis::SubstrateOmegaTau => "substrate_omega_tau_rad_s",
            Axis::OmegaTau => "omega_tau_rad_s",
            Axis::Thickness => "thickness_m",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Linear,
    #[default]
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub axis: Axis,
    pub range: [f64; 2],
    #[serde(default)]
    pub spacing: Spacing,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagramMode {
    /// Boundary points found by root solving in Ω₁.
    #[default]
    Boundary,
    /// Stable/unstable verdict on a full (Ω₃, Ω₁) grid.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diagram {
    #[serde(default)]
    pub mode: DiagramMode,
    pub omega3_range: [f64; 2],
    pub omega3_samples: usize,
    pub omega1_range: [f64; 2],
    /// Ω₁ samples in grid mode, bracketing grid size in boundary mode.
    #[serde(default = "default_omega1_samples")]
    pub omega1_samples: usize,
}

fn default_omega1_samples() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub path: Option<String>,
}

/// Everything a run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub command: Command,
    #[serde(default)]
    pub method: MethodChoice,
    #[serde(default)]
    pub film: Material,
    #[serde(default)]
    pub substrate: Material,
    #[serde(default)]
    pub ambient: Material,
    #[serde(default)]
    pub geometry: Geometry,
    #[serde(default)]
    pub elastic: Elastic,
    #[serde(default)]
    pub quadrature: Quadrature,
    pub sweep: Option<Sweep>,
    pub diagram: Option<Diagram>,
    #[serde(default, skip_serializing)]
    pub output: Output,
}

impl RunConfig {
    /// A configuration with library defaults and vacuum everywhere.
    pub fn new(command: Command) -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            command,
            method: MethodChoice::default(),
            film: Material::default(),
            substrate: Material::default(),
            ambient: Material::default(),
            geometry: Geometry::default(),
            elastic: Elastic::default(),
            quadrature: Quadrature::default(),
            sweep: None,
            diagram: None,
            output: Output::default(),
        }
    }

    /// Resolved configuration as TOML. The output path is left out so that
    /// the same run written to different files stays byte-identical.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configuration always serializes")
    }
}

/// A configuration file that failed to parse.
#[derive(Debug, thiserror::Error)]
#[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

/// 1-based line of a byte offset.
pub fn line_of(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

/// Line of `key = ...` inside `[section]` (or at top level when `section`
/// is empty), if present.
pub fn find_key_line(source: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') {
            current = line.trim_matches(|c| c == '[' || c == ']').trim().to_string();
            continue;
        }
        if current == section {
            if let Some((k, _)) = line.split_once('=') {
                if k.trim() == key {
                    return Some(i + 1);
                }
            }
        }
    }
    if key.is_empty() {
        return source
            .lines()
            .position(|l| l.trim().trim_matches(|c| c == '[' || c == ']').trim() == section)
            .map(|i| i + 1);
    }
    None
}

pub fn parse(source: &str) -> Result<RunConfig, ParseError> {
    toml::from_str(source).map_err(|e| {
        let mut line = e.span().map(|s| line_of(source, s.start));
        let message = e.message().to_string();
        // Errors inside tagged tables lose their span; point at the table.
        if line.is_none() {
            for section in ["film", "substrate", "ambient"] {
                if message.contains(section) {
                    line = find_key_line(source, section, "");
                }
            }
        }
        ParseError { line, message }
    })
}
