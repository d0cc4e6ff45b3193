//! Command-line flags. Every subcommand's flags fold into a [`RunConfig`],
//! which is laid over the `--config` file before validation.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{CommandKind, FamilyKind, Format, RunConfig, Scalar, VariantChoice};

const FORMATS: &str = "\
Numbers: CSV floats carry 17 significant digits with '.' as decimal
separator (\"inf\"/\"nan\" when not finite, scientific form outside
1e-5..1e17); JSON floats are the shortest round-trip form (null when not
finite); rationals are exact \"p/q\" strings in lowest terms (integers as \"p/1\").
An empty CSV field means \"not applicable to this host\".

Exit status: 0 success, 1 computation error or failed verification,
2 invalid configuration, flags or input file.";

#[derive(Debug, Parser)]
#[command(
    name = "spectre",
    version,
    about = "Essential spectra, Cheeger constants and curvature of rapidly branching graphs and tessellations",
    long_about = "Generates host graphs (complete graphs, regular trees, rapidly branching graphs G_{gamma,c}, \
                  regular {p,q} tessellation patches), computes curvature, Cheeger estimates and spectra of \
                  Dirichlet restrictions, runs annulus sweeps towards the bottom of the essential spectrum and \
                  verifies the full property suite on a built-in corpus.\n\n\
                  Settings may also come from a JSON file (--config) whose keys are the long flag names with \
                  '_' for '-' plus \"command\" and \"family\"; flags override the file, unknown keys are rejected.",
    after_help = FORMATS
)]
pub struct Cli {
    /// JSON file with default settings; flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads (default: all cores). Never changes any emitted value.
    #[arg(long, global = true, env = "SPECTRE_THREADS", value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a host graph in the JSON graph format.
    #[command(after_help = GENERATE_HELP)]
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Per-vertex combinatorial curvature of a tessellation patch.
    #[command(after_help = CURVATURE_HELP)]
    Curvature {
        #[command(flatten)]
        family: FamilyArgs,
        /// Exclude K = the vertices of level <= RADIUS (default: nothing).
        #[arg(long)]
        radius: Option<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cheeger-constant bounds outside a ball.
    #[command(after_help = CHEEGER_HELP)]
    Cheeger {
        #[command(flatten)]
        family: FamilyArgs,
        /// Exclude K = the vertices of level <= RADIUS (default: nothing).
        #[arg(long)]
        radius: Option<u32>,
        /// Largest connected subset enumerated for the witness [default: 6].
        #[arg(long)]
        max_size: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Extremal eigenvalues of Dirichlet restrictions to an annulus.
    #[command(after_help = SPECTRUM_HELP)]
    Spectrum {
        #[command(flatten)]
        family: FamilyArgs,
        /// Inner radius k: drop levels <= k (default: keep every level).
        #[arg(long)]
        inner: Option<u32>,
        /// Outer radius R: keep levels <= R (default: last fully interior level).
        #[arg(long)]
        outer: Option<u32>,
        /// Operator to solve [default: all].
        #[arg(long, value_enum)]
        variant: Option<VariantChoice>,
        /// Also write PREFIX.<variant>.mtx and PREFIX.<variant>.weights.
        #[arg(long, value_name = "PREFIX")]
        dump: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Annulus sweep B_R \ B_k over a range of inner radii.
    #[command(after_help = SWEEP_HELP)]
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        /// Inner radii: "k" or "a..b" (inclusive) [default: lowest level ..= R-1].
        #[arg(long, value_name = "RANGE")]
        inner: Option<String>,
        /// Outer radius R [default: last fully interior level].
        #[arg(long)]
        outer: Option<u32>,
        /// Largest connected subset enumerated for the witness, 0 to skip [default: 4].
        #[arg(long)]
        max_size: Option<usize>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the whole property suite over the built-in corpus.
    #[command(after_help = VERIFY_HELP)]
    Verify {
        /// Largest corpus graph [default: 400].
        #[arg(long)]
        max_vertices: Option<usize>,
        /// Largest subset for exhaustive Cheeger constants [default: 6].
        #[arg(long)]
        max_size: Option<usize>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Host graph family.
    #[arg(value_enum)]
    pub family: Option<FamilyKind>,
    /// Complete graph: number of vertices.
    #[arg(long, help_heading = "Family")]
    pub n: Option<usize>,
    /// Tree: children per vertex.
    #[arg(long, help_heading = "Family")]
    pub branching: Option<usize>,
    /// Tree: depth (root has depth 0).
    #[arg(long, help_heading = "Family")]
    pub depth: Option<u32>,
    /// Branching graph: exponent gamma (rational, e.g. 1/2).
    #[arg(long, help_heading = "Family")]
    pub gamma: Option<String>,
    /// Branching graph: factor c (rational).
    #[arg(long, help_heading = "Family")]
    pub c: Option<String>,
    /// Branching graph: number of generations.
    #[arg(long, help_heading = "Family")]
    pub k_max: Option<u32>,
    /// Tessellation: face degree p.
    #[arg(long, help_heading = "Family")]
    pub p: Option<u32>,
    /// Tessellation: vertex degree q.
    #[arg(long, help_heading = "Family")]
    pub q: Option<u32>,
    /// Tessellation: number of layers around the central face.
    #[arg(long, help_heading = "Family")]
    pub layers: Option<u32>,
    /// File family: graph in the JSON graph format.
    #[arg(long, help_heading = "Family", value_name = "FILE")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Lanczos residual tolerance [default: 1e-9].
    #[arg(long, help_heading = "Solver")]
    pub tol: Option<f64>,
    /// Largest dimension solved densely; above it Lanczos is used [default: 2048].
    #[arg(long, help_heading = "Solver")]
    pub dense_threshold: Option<usize>,
    /// Lanczos iteration cap [default: 600].
    #[arg(long, help_heading = "Solver")]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the result here instead of standard output.
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Output format (see the list of formats below).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

const GENERATE_HELP: &str = "\
Output (json): {\"n\": vertex count, \"edges\": [[u, v], ...] with u < v in
lexicographic order, \"faces\": [[v0, v1, ...], ...] (tessellations only,
cyclic order), \"generation\": per-vertex level (generation index for
branching graphs, which start at 1; distance from the centre for trees and
tessellations, which start at 0), \"interior\": per-vertex flag, true when
the full neighbourhood (and face fan) of the infinite graph is present}.

Families: complete --n N | tree --branching B --depth D |
branching --gamma G --c C --k-max K | tessellation --p P --q Q --layers L |
file --input FILE";

const CURVATURE_HELP: &str = "\
Output (csv, default): one row per interior vertex outside K, columns
  vertex            vertex id
  degree            deg(v)
  curvature         1 - deg(v)/2 + sum over faces f at v of 1/deg(f), exact p/q
  curvature_float   the same as a float
Output (json): {\"radius\": RADIUS or null, \"kappa\": sup of the curvature
outside K (p/q), \"kappa_float\": float, \"vertices\": [{vertex, degree,
curvature, curvature_float}, ...]}.";

const CHEEGER_HELP: &str = "\
Output (json):
  radius             K = levels <= radius, null for K empty
  lower_dka          shell-degree bound max(0, min (deg+ - deg-)/deg) over
                     interior v outside K (p/q; null without levels)
  lower_dka_certified  false when vertices outside K lie on the truncation
                     boundary: the bound then covers the generations present
  lower_tess         max(0, 1 - 6/min deg) over interior v outside K
                     (tessellations only, p/q; else null)
  lower              exact constant when the enumeration covered the whole
                     domain of an untruncated graph, else the larger of the
                     two bounds, else null (p/q)
  upper              best |dW|/A(W) found (p/q)
  upper_float        the same as a float
  witness            vertex ids of the set attaining upper
  method             how lower was obtained: exhaustive, shell-degrees,
                     tessellation or none
  exhaustive         whether every connected subset was enumerated
  max_size           enumeration cap
Witness candidates are unions of consecutive levels above K plus every
connected interior subset of at most max_size vertices (skipped when a
vertex outside K has more than 64 neighbours).";

const SPECTRUM_HELP: &str = "\
The restriction keeps the vertices with inner < level <= outer and imposes
zero boundary values elsewhere. delta = D - A, delta_tilde = I - D^-1 A
(solved through its symmetric similar form), delta_hat = I - D^-1/2 A D^-1/2.

Output (json): {\"inner\": k or null, \"outer\": R, \"spectra\": [{variant,
dimension, method (dense|lanczos), lambda_min, lambda_max, residual_min,
residual_max (residual norms of the eigenvectors), iterations (Lanczos
steps, 0 when dense), converged, eigenvalues (all, ascending, dense only;
else null)}, ...]}.
Output (csv): header
variant,dimension,method,lambda_min,lambda_max,residual_min,residual_max,iterations
Dump: PREFIX.<variant>.mtx is a MatrixMarket coordinate file (1-based rows
and columns, every stored entry, \"general\" symmetry);
PREFIX.<variant>.weights lists, per row, the host vertex id and the weight
of the inner product (1, or deg(v) for delta_tilde).";

const SWEEP_HELP: &str = "\
Output (csv, default): one row per inner radius, columns
  k                   inner radius (levels <= k form B_k)
  R                   outer radius
  m_K, M_K            min and max degree of interior vertices outside B_k
  kappa_K             sup curvature outside B_k (tessellations, p/q)
  alpha_dka           shell-degree Cheeger bound outside B_k (p/q)
  alpha_tess          tessellation Cheeger bound outside B_k (p/q)
  alpha_witness       best |dW|/A(W) found in the annulus (p/q)
  inf_delta           bottom of the spectrum of delta on B_R \\ B_k
  inf_hat, sup_hat    bottom and top of the spectrum of delta_hat there
  theory_alpha_lower  closed-form shell-degree ratio (branching graphs, p/q)
  theory_alpha_upper  closed-form ratio of the shell S_{k+1} (branching, p/q)
Output (json): {\"steps\": [{inner, outer, dimension, m_k, big_m_k,
annulus_min_degree, kappa, alpha_dka, alpha_tess, alpha_witness, witness,
inf_delta, sup_delta, inf_hat, sup_hat, delta and hat (solver summaries:
method, iterations, residual_min, residual_max), theory ({alpha_lower,
alpha_upper, alpha_limit} or null), outer_truncated (R below the last
interior level), bounds: [{name, lhs, rhs, margin, holds}]}]}.";

const VERIFY_HELP: &str = "\
Runs every property check over the built-in corpus (complete graphs,
regular trees, branching graphs and tessellation patches up to
--max-vertices vertices) with fixed seeds, and prints one line per named
inequality followed by up to five failing instances each.
Output (text, default): \"PASS|FAIL <inequality>: <instances> instances,
<failures> failures[, worst margin <m>]\" lines and a summary line.
Output (json): {\"graphs\": count, \"passed\": bool, \"inequalities\":
[{name, instances, failures, worst_margin, examples: [text, ...]}]}.
Exits 1 when any inequality fails.";

impl FamilyArgs {
    fn into_config(self, c: &mut RunConfig) {
        c.family = self.family;
        c.n = self.n;
        c.branching = self.branching;
        c.depth = self.depth;
        c.gamma = self.gamma.map(Scalar::Text);
        c.c = self.c.map(Scalar::Text);
        c.k_max = self.k_max;
        c.p = self.p;
        c.q = self.q;
        c.layers = self.layers;
        c.input = self.input;
    }
}

impl SolverArgs {
    fn into_config(self, c: &mut RunConfig) {
        c.tol = self.tol;
        c.dense_threshold = self.dense_threshold;
        c.max_iterations = self.max_iterations;
    }
}

impl OutputArgs {
    fn into_config(self, c: &mut RunConfig) {
        c.output = self.output;
        c.format = self.format;
    }
}

impl Cli {
    /// The settings given as flags (and through `SPECTRE_THREADS`).
    pub fn flags(self) -> RunConfig {
        let mut c = RunConfig { threads: self.threads, ..Default::default() };
        let Some(command) = self.command else { return c };
        match command {
            Command::Generate { family, output } => {
                c.command = Some(CommandKind::Generate);
                family.into_config(&mut c);
                output.into_config(&mut c);
            }
            Command::Curvature { family, radius, output } => {
                c.command = Some(CommandKind::Curvature);
                family.into_config(&mut c);
                c.radius = radius;
                output.into_config(&mut c);
            }
            Command::Cheeger { family, radius, max_size, output } => {
                c.command = Some(CommandKind::Cheeger);
                family.into_config(&mut c);
                c.radius = radius;
                c.max_size = max_size;
                output.into_config(&mut c);
            }
            Command::Spectrum { family, inner, outer, variant, dump, solver, output } => {
                c.command = Some(CommandKind::Spectrum);
                family.into_config(&mut c);
                c.inner = inner.map(|k| Scalar::Integer(k as u64));
                c.outer = outer;
                c.variant = variant;
                c.dump = dump;
                solver.into_config(&mut c);
                output.into_config(&mut c);
            }
            Command::Sweep { family, inner, outer, max_size, solver, output } => {
                c.command = Some(CommandKind::Sweep);
                family.into_config(&mut c);
                c.inner = inner.map(Scalar::Text);
                c.outer = outer;
                c.max_size = max_size;
                solver.into_config(&mut c);
                output.into_config(&mut c);
            }
            Command::Verify { max_vertices, max_size, solver, output } => {
                c.command = Some(CommandKind::Verify);
                c.max_vertices = max_vertices;
                c.max_size = max_size;
                solver.into_config(&mut c);
                output.into_config(&mut c);
            }
        }
        c
    }
}
