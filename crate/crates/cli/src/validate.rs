//! Static checks on a run configuration. Nothing here runs a computation.

use std::fmt;

use cfs_core::dielectric::DielectricModel;
use cfs_core::elastic::FilmElasticParams;

use crate::config::{find_key_line, Axis, Command, Material, MethodChoice, RunConfig, Spacing, SCHEMA_VERSION};

pub const MAX_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        match self.line {
            Some(l) => write!(f, "{tag}: line {l}: {}", self.message),
            None => write!(f, "{tag}: {}", self.message),
        }
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(|d| d.severity == Severity::Error)
}

struct Checker<'a> {
    source: Option<&'a str>,
    out: Vec<Diagnostic>,
}

impl Checker<'_> {
    fn push(&mut self, severity: Severity, section: &str, key: &str, message: String) {
        let line = self
            .source
            .and_then(|s| find_key_line(s, section, key).or_else(|| find_key_line(s, section, "")));
        self.out.push(Diagnostic {
            severity,
            line,
            message,
        });
    }

    fn error(&mut self, section: &str, key: &str, message: impl Into<String>) {
        self.push(Severity::Error, section, key, message.into());
    }

    fn warn(&mut self, section: &str, key: &str, message: impl Into<String>) {
        self.push(Severity::Warning, section, key, message.into());
    }

    fn range(&mut self, section: &str, key: &str, r: [f64; 2], spacing: Spacing) {
        let [lo, hi] = r;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            self.error(
                section,
                key,
                format!("{key} must be a non-empty interval [lo, hi] with lo < hi"),
            );
        } else if lo <= 0.0 && spacing == Spacing::Log {
            self.error(section, key, format!("{key} must be positive for log spacing"));
        } else if lo < 0.0 {
            self.error(section, key, format!("{key} must not be negative"));
        }
    }

    fn samples(&mut self, section: &str, key: &str, n: usize) {
        if !(2..=MAX_SAMPLES).contains(&n) {
            self.error(section, key, format!("{key} must lie in [2, {MAX_SAMPLES}]"));
        }
    }
}

/// Checks `config`. `source` is the original file text, used only to attach
/// line numbers.
pub fn validate(config: &RunConfig, source: Option<&str>) -> Vec<Diagnostic> {
    let mut c = Checker {
        source,
        out: Vec::new(),
    };

    if config.schema_version != SCHEMA_VERSION {
        c.error(
            "",
            "schema_version",
            format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                config.schema_version
            ),
        );
    }

    for (name, m) in [
        ("film", &config.film),
        ("substrate", &config.substrate),
        ("ambient", &config.ambient),
    ] {
        if let Err(e) = m.model() {
            c.error(name, "omega_p", format!("{name}: {e}"));
        }
    }
    if config.film == Material::PerfectReflector {
        c.error("film", "model", "the film cannot be a perfect reflector");
    }
    if let Err(e) = config.quadrature.spec().validate() {
        c.error("quadrature", "", format!("quadrature: {e}"));
    }
    let params: FilmElasticParams = config.elastic.params();
    if let Err(e) = params.validate() {
        c.error("elastic", "", format!("elastic: {e}"));
    }

    let geometry = config.geometry;
    if let Some(d) = geometry.thickness {
        if !(d > 0.0 && d.is_finite()) {
            c.error("geometry", "thickness", "thickness must be positive");
        }
    }
    if let Some(r) = geometry.thickness_range {
        c.range("geometry", "thickness_range", r, Spacing::Log);
    }

    if let Some(s) = config.sweep {
        c.range("sweep", "range", s.range, s.spacing);
        c.samples("sweep", "samples", s.samples);
        let target = match s.axis {
            Axis::FilmOmegaP | Axis::FilmOmegaTau => Some(("film", config.film)),
            Axis::SubstrateOmegaP | Axis::SubstrateOmegaTau => Some(("substrate", config.substrate)),
            Axis::OmegaTau => {
                if config.substrate.omega_p().is_none() {
                    c.error("sweep", "axis", "axis omega_tau needs a plasma or Drude substrate");
                }
                Some(("film", config.film))
            }
            Axis::Thickness => None,
        };
        if let Some((name, m)) = target {
            if m.omega_p().is_none() {
                c.error(
                    "sweep",
                    "axis",
                    format!("axis {:?} needs a plasma or Drude {name}", s.axis),
                );
            }
        }
    }

    let need_thickness = |c: &mut Checker, why: &str| {
        if geometry.thickness.is_none() {
            c.error("geometry", "thickness", format!("{why} needs geometry.thickness"));
        }
    };

    match config.command {
        Command::ForceSweep => match config.sweep {
            None => c.error("sweep", "", "force-sweep needs a [sweep] table"),
            Some(s) if s.axis != Axis::Thickness => need_thickness(&mut c, "force-sweep"),
            Some(_) => {}
        },
        Command::ThicknessScan => match config.sweep {
            Some(s) if s.axis != Axis::Thickness => {
                c.error("sweep", "axis", "thickness-scan sweeps axis \"thickness\"")
            }
            Some(_) => {}
            None if geometry.thickness_range.is_none() => c.error(
                "geometry",
                "thickness_range",
                "thickness-scan needs geometry.thickness_range or a thickness [sweep]",
            ),
            None => {}
        },
        Command::StabilityCheck => need_thickness(&mut c, "stability-check"),
        Command::CriticalThickness => {
            if geometry.thickness_range.is_none() {
                c.error(
                    "geometry",
                    "thickness_range",
                    "critical-thickness needs geometry.thickness_range",
                );
            }
            if matches!(config.sweep, Some(s) if s.axis == Axis::Thickness) {
                c.error("sweep", "axis", "critical-thickness cannot sweep the thickness");
            }
        }
        Command::StabilityDiagram => {
            need_thickness(&mut c, "stability-diagram");
            match config.diagram {
                None => c.error("diagram", "", "stability-diagram needs a [diagram] table"),
                Some(d) => {
                    c.range("diagram", "omega3_range", d.omega3_range, Spacing::Log);
                    c.range("diagram", "omega1_range", d.omega1_range, Spacing::Log);
                    c.samples("diagram", "omega3_samples", d.omega3_samples);
                    c.samples("diagram", "omega1_samples", d.omega1_samples);
                }
            }
            if config.film.omega_p().is_none() || config.substrate.omega_p().is_none() {
                c.error(
                    "substrate",
                    "model",
                    "stability-diagram needs plasma or Drude film and substrate",
                );
            }
        }
        Command::ElasticReport => {}
    }

    if config.method == MethodChoice::Smalld {
        check_small_d_domain(&mut c, config);
    }
    c.out
}

/// The small-d closed forms need `ω_τ < √2·Ω₃`; beyond it the radicals turn
/// imaginary. The integral route still works, so this is only a warning.
fn check_small_d_domain(c: &mut Checker, config: &RunConfig) {
    let Ok(DielectricModel::Drude { omega_p, omega_tau }) = config.film.model() else {
        return;
    };
    let (mut wp, mut wt) = ([omega_p, omega_p], [omega_tau, omega_tau]);
    if let Some(s) = config.sweep {
        match s.axis {
            Axis::FilmOmegaP => wp = s.range,
            Axis::FilmOmegaTau | Axis::OmegaTau => wt = s.range,
            _ => {}
        }
    }
    if wt[1] >= std::f64::consts::SQRT_2 * wp[0] {
        c.warn(
            "film",
            "omega_tau",
            "omega_tau >= sqrt(2)*omega_p: outside the domain of the small-d closed forms (imaginary radicals)",
        );
    }
}
