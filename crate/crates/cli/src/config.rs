//! Experiment configuration: the TOML schema and its resolution into
//! validated parameters.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use anyonic_core::walk::{LabelMap, WalkConfig, WalkHamiltonian};
use anyonic_core::{ComplexMatrix, ExchangePhase, Parity};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Largest register the state-generation mode simulates.
pub const MAX_QUDITS: usize = anyonic_core::stategen::MAX_REGISTER_QUDITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    TwoParticle,
    NParticle,
    EntangledSim,
    Distinguishable,
    Stategen,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::TwoParticle => "two_particle",
            Mode::NParticle => "n_particle",
            Mode::EntangledSim => "entangled_sim",
            Mode::Distinguishable => "distinguishable",
            Mode::Stategen => "stategen",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Structured,
}

/// A phase given either in radians or as an expression like `3pi/4`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PhaseSpec {
    Radians(f64),
    Expr(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub mode: Option<Mode>,
    #[serde(default)]
    pub phases: Vec<PhaseSpec>,
    pub mask: Option<String>,
    pub walk: Option<WalkSection>,
    pub matrix: Option<MatrixSection>,
    pub stategen: Option<StategenSection>,
    pub sample: Option<SampleSection>,
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkSection {
    pub sites: usize,
    pub beta: f64,
    pub coupling: f64,
    pub time: f64,
    /// Waveguide labels, centred on the middle site.
    pub inputs: Vec<i64>,
    /// Width of the central output window; the whole array if absent.
    pub window: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSection {
    /// `beamsplitter` or `identity`.
    pub builtin: Option<String>,
    pub size: Option<usize>,
    /// JSON matrix file, relative to the config file.
    pub path: Option<PathBuf>,
    pub inputs: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StategenSection {
    pub qudits: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSection {
    pub shots: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<Format>,
    pub dir: Option<PathBuf>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config {
            field: None,
            message: e.to_string().trim_end().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::parse(&text)?, base))
    }
}

/// Parses `0.5`, `pi`, `-pi/2`, `3pi/4` or `3*pi/4`.
pub fn parse_phase_expr(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (
            a.trim(),
            b.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad denominator in `{s}`"))?,
        ),
        None => (t, 1.0),
    };
    let coef = num
        .strip_suffix("pi")
        .or_else(|| num.strip_suffix('π'))
        .ok_or_else(|| format!("`{s}` is neither a number nor a multiple of pi"))?
        .trim()
        .trim_end_matches('*')
        .trim();
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| format!("bad coefficient in `{s}`"))?,
    };
    let x = coef * PI / den;
    if !x.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedPhase {
    /// As written by the user.
    pub label: String,
    /// File-name-safe form of the label.
    pub tag: String,
    pub phase: ExchangePhase,
}

impl NamedPhase {
    pub fn parse(label: &str) -> std::result::Result<Self, String> {
        let x = parse_phase_expr(label)?;
        let phase = ExchangePhase::new(x).map_err(|e| e.to_string())?;
        Ok(NamedPhase {
            label: label.trim().to_string(),
            tag: label.trim().replace(['/', ' '], "_").replace('*', ""),
            phase,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Walk {
        sites: usize,
        beta: f64,
        coupling: f64,
        time: f64,
    },
    Builtin(String),
    File(PathBuf),
}

/// The linear transformation and the modes in play.
#[derive(Debug, Clone)]
pub struct Transform {
    pub source: Source,
    pub unitary: ComplexMatrix,
    pub labels: LabelMap,
    /// Retained output modes, as indices into the full transformation.
    pub window: Vec<usize>,
    /// Input modes, as indices into the full transformation.
    pub inputs: Vec<usize>,
}

impl Transform {
    pub fn window_labels(&self) -> Vec<i64> {
        self.window.iter().map(|&i| self.labels.label(i)).collect()
    }

    pub fn input_labels(&self) -> Vec<i64> {
        self.inputs.iter().map(|&i| self.labels.label(i)).collect()
    }

    /// The process restricted to the window on both sides.
    pub fn block(&self) -> anyonic_core::Result<ComplexMatrix> {
        self.unitary.submatrix(&self.window, &self.window)
    }

    pub fn block_inputs(&self) -> Vec<usize> {
        self.inputs
            .iter()
            .map(|i| self.window.iter().position(|w| w == i).unwrap())
            .collect()
    }
}

/// Fully validated run parameters.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub mode: Mode,
    pub phases: Vec<NamedPhase>,
    pub mask: Parity,
    pub transform: Option<Transform>,
    pub qudits: Option<usize>,
    pub shots: Option<u64>,
    pub seed: u64,
    pub format: Format,
    pub out_dir: Option<PathBuf>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub phases: Vec<String>,
    pub mask: Option<String>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub shots: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub qudits: Option<usize>,
}

fn parse_mask(s: &str, field: &str) -> Result<Parity> {
    Parity::parse(s).ok_or_else(|| {
        CliError::config(field, format!("unknown mask `{s}`; expected none, odd, even or both"))
    })
}

fn resolve_walk(w: &WalkSection) -> Result<Transform> {
    let h = WalkHamiltonian::new(w.sites, w.beta, w.coupling)
        .map_err(|e| CliError::config("walk", e.to_string()))?;
    if !w.time.is_finite() {
        return Err(CliError::config("walk.time", "must be finite"));
    }
    let labels = LabelMap::centred(w.sites);
    if w.inputs.windows(2).any(|p| p[0] >= p[1]) {
        return Err(CliError::config("walk.inputs", "labels must be strictly increasing"));
    }
    let inputs = w
        .inputs
        .iter()
        .map(|&l| labels.index(l))
        .collect::<anyonic_core::Result<Vec<_>>>()
        .map_err(|e| CliError::config("walk.inputs", e.to_string()))?;
    let window = WalkConfig::central_window(w.sites, w.window.unwrap_or(w.sites))
        .map_err(|e| CliError::config("walk.window", e.to_string()))?;
    let cfg = WalkConfig {
        hamiltonian: h.clone(),
        time: w.time,
        window: window.clone(),
        inputs: inputs.clone(),
        phase: ExchangePhase::BOSON,
        mask: None,
    };
    cfg.validate()
        .map_err(|e| CliError::config("walk.window", e.to_string()))?;
    Ok(Transform {
        source: Source::Walk {
            sites: w.sites,
            beta: w.beta,
            coupling: w.coupling,
            time: w.time,
        },
        unitary: cfg.unitary()?,
        labels,
        window,
        inputs,
    })
}

fn resolve_matrix(m: &MatrixSection, base: &Path) -> Result<Transform> {
    let (source, unitary) = match (&m.builtin, &m.path) {
        (Some(name), None) => {
            let u = match name.as_str() {
                "beamsplitter" => ComplexMatrix::beamsplitter(),
                "identity" => ComplexMatrix::identity(
                    m.size
                        .ok_or_else(|| CliError::config("matrix.size", "required for identity"))?,
                ),
                other => {
                    return Err(CliError::config(
                        "matrix.builtin",
                        format!("unknown matrix `{other}`; expected beamsplitter or identity"),
                    ))
                }
            };
            (Source::Builtin(name.clone()), u)
        }
        (None, Some(p)) => {
            let path = base.join(p);
            let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            let u: ComplexMatrix = serde_json::from_str(&text)
                .map_err(|e| CliError::config("matrix.path", format!("{}: {e}", path.display())))?;
            (Source::File(p.clone()), u)
        }
        _ => {
            return Err(CliError::config(
                "matrix",
                "give exactly one of `builtin` or `path`",
            ))
        }
    };
    if unitary.rows() == 0 || !unitary.is_square() {
        return Err(CliError::config(
            "matrix",
            format!("expected a non-empty square matrix, got {}x{}", unitary.rows(), unitary.cols()),
        ));
    }
    if m.inputs.windows(2).any(|p| p[0] >= p[1]) {
        return Err(CliError::config("matrix.inputs", "indices must be strictly increasing"));
    }
    if let Some(&i) = m.inputs.iter().find(|&&i| i >= unitary.cols()) {
        return Err(CliError::config(
            "matrix.inputs",
            format!("input {i} beyond the {} columns", unitary.cols()),
        ));
    }
    let window: Vec<usize> = (0..unitary.rows()).collect();
    Ok(Transform {
        source,
        labels: LabelMap::plain(unitary.rows()),
        unitary,
        window,
        inputs: m.inputs.clone(),
    })
}

impl Experiment {
    /// Validates `file` against the schema and merges the overrides.
    /// `default_mode` applies when the file names none.
    pub fn resolve(
        file: &ConfigFile,
        base: &Path,
        ov: &Overrides,
        default_mode: impl Fn(Option<&Transform>) -> Mode,
    ) -> Result<Self> {
        let phases: Vec<NamedPhase> = if ov.phases.is_empty() {
            file.phases
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let text = match p {
                        PhaseSpec::Radians(x) => x.to_string(),
                        PhaseSpec::Expr(s) => s.clone(),
                    };
                    NamedPhase::parse(&text).map_err(|e| CliError::config(format!("phases[{i}]"), e))
                })
                .collect::<Result<_>>()?
        } else {
            ov.phases
                .iter()
                .map(|p| NamedPhase::parse(p).map_err(|e| CliError::config("--phase", e)))
                .collect::<Result<_>>()?
        };
        let mut phases = phases;
        dedup_tags(&mut phases);

        let mask = match (&ov.mask, &file.mask) {
            (Some(m), _) => parse_mask(m, "--mask")?,
            (None, Some(m)) => parse_mask(m, "mask")?,
            (None, None) => Parity::None,
        };

        let transform = match (&file.walk, &file.matrix) {
            (Some(w), None) => Some(resolve_walk(w)?),
            (None, Some(m)) => Some(resolve_matrix(m, base)?),
            (None, None) => None,
            (Some(_), Some(_)) => {
                return Err(CliError::config("walk", "give either [walk] or [matrix], not both"))
            }
        };

        let mode = file.mode.unwrap_or_else(|| default_mode(transform.as_ref()));
        let n_inputs = transform.as_ref().map(|t| t.inputs.len());
        let qudits = ov
            .qudits
            .or(file.stategen.as_ref().and_then(|s| s.qudits))
            .or(if mode == Mode::Stategen { n_inputs } else { None });

        match mode {
            Mode::Stategen => {
                let n = qudits.ok_or_else(|| {
                    CliError::config("stategen.qudits", "required when no transformation is given")
                })?;
                if !(2..=MAX_QUDITS).contains(&n) {
                    return Err(CliError::config(
                        "stategen.qudits",
                        format!("must lie in 2..={MAX_QUDITS}, got {n}"),
                    ));
                }
                if let Some(k) = n_inputs.filter(|&k| k != n) {
                    return Err(CliError::config(
                        "stategen.qudits",
                        format!("{n} qudits but {k} inputs"),
                    ));
                }
            }
            _ => {
                let t = transform.as_ref().ok_or_else(|| {
                    CliError::config("walk", format!("mode {} needs [walk] or [matrix]", mode.as_str()))
                })?;
                let n = t.inputs.len();
                let field = if file.walk.is_some() { "walk.inputs" } else { "matrix.inputs" };
                if mode == Mode::TwoParticle && n != 2 {
                    return Err(CliError::config(field, format!("two_particle needs 2 inputs, got {n}")));
                }
                let min = if mode == Mode::EntangledSim { 2 } else { 1 };
                if n < min {
                    return Err(CliError::config(field, format!("need at least {min} inputs")));
                }
            }
        }
        if phases.is_empty() && mode != Mode::Distinguishable {
            return Err(CliError::config("phases", "at least one phase is required"));
        }

        let sample = file.sample.as_ref();
        let output = file.output.as_ref();
        let shots = ov.shots.or(sample.and_then(|s| s.shots));
        if shots == Some(0) {
            return Err(CliError::config("sample.shots", "must be at least 1"));
        }
        Ok(Experiment {
            mode,
            phases,
            mask,
            transform,
            qudits,
            shots,
            seed: ov.seed.or(sample.and_then(|s| s.seed)).unwrap_or(0),
            format: ov
                .format
                .or(output.and_then(|o| o.format))
                .unwrap_or(Format::Csv),
            out_dir: ov
                .out_dir
                .clone()
                .or_else(|| output.and_then(|o| o.dir.as_ref()).map(|d| base.join(d))),
        })
    }
}

fn dedup_tags(phases: &mut [NamedPhase]) {
    for i in 1..phases.len() {
        if phases[..i].iter().any(|p| p.tag == phases[i].tag) {
            phases[i].tag = format!("{}_{i}", phases[i].tag);
        }
    }
}
