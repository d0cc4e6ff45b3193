//! Run configuration: one flat record that can come from a JSON file
//! (`--config`), from command-line flags, or both (flags win). Validation
//! turns it into a [`Plan`] before any computation starts.

use std::path::PathBuf;

use clap::ValueEnum;
use serde::Deserialize;
use spectre_core::generators::{BranchingParams, TessellationParams};
use spectre_core::math::parse_ratio;
use spectre_core::spectral::{LanczosOptions, SpectralOptions};
use spectre_core::Variant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Generate,
    Curvature,
    Cheeger,
    Spectrum,
    Sweep,
    Verify,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Generate => "generate",
            CommandKind::Curvature => "curvature",
            CommandKind::Cheeger => "cheeger",
            CommandKind::Spectrum => "spectrum",
            CommandKind::Sweep => "sweep",
            CommandKind::Verify => "verify",
        }
    }
}

/// Where the host graph comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// Complete graph K_n (`--n`).
    Complete,
    /// Regular tree (`--branching`, `--depth`).
    Tree,
    /// Rapidly branching graph G_{gamma,c} (`--gamma`, `--c`, `--k-max`).
    Branching,
    /// Regular {p,q} tessellation patch (`--p`, `--q`, `--layers`).
    Tessellation,
    /// A graph file in the JSON graph format (`--input`).
    File,
}

impl FamilyKind {
    fn name(self) -> &'static str {
        match self {
            FamilyKind::Complete => "complete",
            FamilyKind::Tree => "tree",
            FamilyKind::Branching => "branching",
            FamilyKind::Tessellation => "tessellation",
            FamilyKind::File => "file",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            FamilyKind::Complete => &["n"],
            FamilyKind::Tree => &["branching", "depth"],
            FamilyKind::Branching => &["gamma", "c", "k_max"],
            FamilyKind::Tessellation => &["p", "q", "layers"],
            FamilyKind::File => &["input"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

/// Which restrictions `spectrum` solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum VariantChoice {
    Delta,
    #[value(alias = "delta_tilde")]
    #[serde(alias = "delta-tilde")]
    DeltaTilde,
    #[value(alias = "delta_hat")]
    #[serde(alias = "delta-hat")]
    DeltaHat,
    All,
}

impl VariantChoice {
    pub fn variants(self) -> Vec<Variant> {
        match self {
            VariantChoice::Delta => vec![Variant::Delta],
            VariantChoice::DeltaTilde => vec![Variant::DeltaTilde],
            VariantChoice::DeltaHat => vec![Variant::DeltaHat],
            VariantChoice::All => Variant::ALL.to_vec(),
        }
    }
}

/// An integer or a string in a config file (`"1/2"`, `"0.5"`, `"1..4"`).
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Integer(u64),
    Text(String),
}

impl Scalar {
    fn text(&self) -> String {
        match self {
            Scalar::Integer(i) => i.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }
}

/// Every setting of a run. All fields are optional: a field may come from
/// the config file, from a flag, or fall back to its documented default.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandKind>,
    pub family: Option<FamilyKind>,
    pub n: Option<usize>,
    pub branching: Option<usize>,
    pub depth: Option<u32>,
    pub gamma: Option<Scalar>,
    pub c: Option<Scalar>,
    pub k_max: Option<u32>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub layers: Option<u32>,
    pub input: Option<PathBuf>,
    pub radius: Option<u32>,
    pub inner: Option<Scalar>,
    pub outer: Option<u32>,
    pub variant: Option<VariantChoice>,
    pub dump: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub tol: Option<f64>,
    pub dense_threshold: Option<usize>,
    pub max_iterations: Option<usize>,
    pub max_size: Option<usize>,
    pub max_vertices: Option<usize>,
    pub threads: Option<usize>,
}

macro_rules! fields {
    ($mac:ident) => {
        $mac!(
            command, family, n, branching, depth, gamma, c, k_max, p, q, layers, input, radius, inner, outer,
            variant, dump, output, format, tol, dense_threshold, max_iterations, max_size, max_vertices, threads
        )
    };
}

impl RunConfig {
    /// `self` with every field set in `flags` replaced.
    pub fn overlay(self, flags: RunConfig) -> RunConfig {
        macro_rules! merge {
            ($($f:ident),*) => { RunConfig { $($f: flags.$f.or(self.$f)),* } };
        }
        fields!(merge)
    }

    /// Names of the fields that are set.
    pub fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        macro_rules! collect {
            ($($f:ident),*) => { $(if self.$f.is_some() { out.push(stringify!($f)); })* };
        }
        fields!(collect);
        out
    }

    pub fn from_json(text: &str) -> Result<RunConfig, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError(format!("config line {}, column {}: {e}", e.line(), e.column())))
    }
}

/// An invalid configuration (exit status 2).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn fail<T>(message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(message.into()))
}

/// A fully specified host graph.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Complete(usize),
    Tree { branching: usize, depth: u32 },
    Branching(BranchingParams),
    Tessellation(TessellationParams),
    File(PathBuf),
}

/// Inner radii of a sweep, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InnerRange {
    pub first: u32,
    pub last: u32,
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub command: CommandKind,
    pub family: Option<FamilySpec>,
    pub radius: Option<u32>,
    pub inner: Option<InnerRange>,
    pub outer: Option<u32>,
    pub variants: Vec<Variant>,
    pub dump: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub spectral: SpectralOptions,
    pub max_size: usize,
    pub max_vertices: usize,
    pub threads: usize,
}

/// Default cap on enumerated subset sizes (`cheeger`).
pub const CHEEGER_MAX_SIZE: usize = 6;
/// Default cap on enumerated witness sizes (`sweep`).
pub const SWEEP_MAX_SIZE: usize = 4;
/// Default largest corpus graph of `verify`.
pub const VERIFY_MAX_VERTICES: usize = 400;

const COMMON_KEYS: [&str; 4] = ["command", "output", "format", "threads"];
const FAMILY_KEYS: [&str; 11] = ["family", "n", "branching", "depth", "gamma", "c", "k_max", "p", "q", "layers", "input"];
const SOLVER_KEYS: [&str; 3] = ["tol", "dense_threshold", "max_iterations"];

fn command_keys(command: CommandKind) -> Vec<&'static str> {
    let mut keys: Vec<&str> = COMMON_KEYS.to_vec();
    if command != CommandKind::Verify {
        keys.extend(FAMILY_KEYS);
    }
    match command {
        CommandKind::Generate => {}
        CommandKind::Curvature => keys.push("radius"),
        CommandKind::Cheeger => keys.extend(["radius", "max_size"]),
        CommandKind::Spectrum => {
            keys.extend(["inner", "outer", "variant", "dump"]);
            keys.extend(SOLVER_KEYS);
        }
        CommandKind::Sweep => {
            keys.extend(["inner", "outer", "max_size"]);
            keys.extend(SOLVER_KEYS);
        }
        CommandKind::Verify => {
            keys.extend(["max_vertices", "max_size"]);
            keys.extend(SOLVER_KEYS);
        }
    }
    keys
}

fn formats(command: CommandKind) -> &'static [Format] {
    match command {
        CommandKind::Generate | CommandKind::Cheeger => &[Format::Json],
        CommandKind::Curvature | CommandKind::Sweep => &[Format::Csv, Format::Json],
        CommandKind::Spectrum => &[Format::Json, Format::Csv],
        CommandKind::Verify => &[Format::Text, Format::Json],
    }
}

fn ratio(key: &str, value: &Scalar) -> Result<num_rational::Ratio<u64>, ConfigError> {
    let text = value.text();
    parse_ratio(&text).ok_or_else(|| ConfigError(format!("{key}: expected a nonnegative rational such as 1/2, got {text:?}")))
}

fn require<T: Clone>(value: &Option<T>, key: &str, family: FamilyKind) -> Result<T, ConfigError> {
    match value {
        Some(v) => Ok(v.clone()),
        None => fail(format!("family {} needs {}", family.name(), key.replace('_', "-"))),
    }
}

fn parse_inner(value: &Scalar) -> Result<InnerRange, ConfigError> {
    let text = value.text();
    let bad = || ConfigError(format!("inner: expected k or a..b, got {text:?}"));
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (text.trim(), text.trim()),
    };
    let first: u32 = a.parse().map_err(|_| bad())?;
    let last: u32 = b.parse().map_err(|_| bad())?;
    if first > last {
        return fail(format!("inner: empty range {text:?}"));
    }
    Ok(InnerRange { first, last })
}

impl RunConfig {
    /// Checks every setting and resolves the defaults.
    pub fn validate(&self) -> Result<Plan, ConfigError> {
        let Some(command) = self.command else {
            return fail("no command given: use a subcommand or set \"command\" in the config file");
        };
        let allowed = command_keys(command);
        let mut family_keys: &[&str] = &[];
        if let Some(f) = self.family {
            family_keys = f.keys();
        }
        for key in self.present() {
            if !allowed.contains(&key) {
                return fail(format!("{} does not apply to {}", key.replace('_', "-"), command.name()));
            }
            if FAMILY_KEYS.contains(&key) && key != "family" && !family_keys.contains(&key) {
                return match self.family {
                    Some(f) => fail(format!("{} does not apply to family {}", key.replace('_', "-"), f.name())),
                    None => fail(format!("{} needs a family", key.replace('_', "-"))),
                };
            }
        }

        let family = match (command, self.family) {
            (CommandKind::Verify, _) => None,
            (_, None) => return fail(format!("{} needs a family: complete, tree, branching, tessellation or file", command.name())),
            (_, Some(kind)) => Some(self.family_spec(kind)?),
        };

        let format = self.format.unwrap_or(formats(command)[0]);
        if !formats(command).contains(&format) {
            return fail(format!("{} does not write {}", command.name(), format.name()));
        }

        let mut spectral = SpectralOptions::default();
        if let Some(t) = self.dense_threshold {
            spectral.dense_threshold = t;
        }
        let mut lanczos = LanczosOptions::default();
        if let Some(tol) = self.tol {
            if !(tol.is_finite() && tol > 0.0) {
                return fail(format!("tol must be positive, got {tol}"));
            }
            lanczos.tol = tol;
        }
        if let Some(m) = self.max_iterations {
            if m == 0 {
                return fail("max-iterations must be at least 1");
            }
            lanczos.max_iterations = m;
        }
        spectral.lanczos = lanczos;

        let max_size = self.max_size.unwrap_or(match command {
            CommandKind::Sweep => SWEEP_MAX_SIZE,
            _ => CHEEGER_MAX_SIZE,
        });
        if max_size == 0 && command == CommandKind::Cheeger {
            return fail("max-size must be at least 1");
        }
        let inner = self.inner.as_ref().map(parse_inner).transpose()?;
        if let (CommandKind::Spectrum, Some(r)) = (command, inner) {
            if r.first != r.last {
                return fail("spectrum takes a single inner radius");
            }
        }
        if let (Some(r), Some(outer)) = (inner, self.outer) {
            if r.last >= outer {
                return fail(format!("inner radius {} must be below the outer radius {outer}", r.last));
            }
        }
        let threads = match self.threads {
            Some(0) => return fail("threads must be at least 1"),
            Some(t) => t,
            None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        };
        if let Some(0) = self.max_vertices {
            return fail("max-vertices must be at least 1");
        }

        Ok(Plan {
            command,
            family,
            radius: self.radius,
            inner,
            outer: self.outer,
            variants: self.variant.unwrap_or(VariantChoice::All).variants(),
            dump: self.dump.clone(),
            output: self.output.clone(),
            format,
            spectral,
            max_size,
            max_vertices: self.max_vertices.unwrap_or(VERIFY_MAX_VERTICES),
            threads,
        })
    }

    fn family_spec(&self, kind: FamilyKind) -> Result<FamilySpec, ConfigError> {
        let invalid = |e: spectre_core::Error| ConfigError(e.to_string());
        Ok(match kind {
            FamilyKind::Complete => {
                let n = require(&self.n, "n", kind)?;
                if n == 0 {
                    return fail("n must be at least 1");
                }
                FamilySpec::Complete(n)
            }
            FamilyKind::Tree => {
                let branching = require(&self.branching, "branching", kind)?;
                if branching == 0 {
                    return fail("branching must be at least 1");
                }
                FamilySpec::Tree { branching, depth: require(&self.depth, "depth", kind)? }
            }
            FamilyKind::Branching => {
                let gamma = ratio("gamma", &require(&self.gamma, "gamma", kind)?)?;
                let c = ratio("c", &require(&self.c, "c", kind)?)?;
                let k_max = require(&self.k_max, "k_max", kind)?;
                FamilySpec::Branching(BranchingParams::new(gamma, c, k_max).map_err(invalid)?)
            }
            FamilyKind::Tessellation => {
                let (p, q, layers) =
                    (require(&self.p, "p", kind)?, require(&self.q, "q", kind)?, require(&self.layers, "layers", kind)?);
                FamilySpec::Tessellation(TessellationParams::new(p, q, layers).map_err(invalid)?)
            }
            FamilyKind::File => FamilySpec::File(require(&self.input, "input", kind)?),
        })
    }
}
