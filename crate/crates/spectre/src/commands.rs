//! The subcommands other than `verify`.

use std::io::Write;

use anyhow::{anyhow, bail, Context};
use rayon::prelude::*;
use serde::Serialize;
use spectre_core::curvature::CurvatureReport;
use spectre_core::generators::{branching_graph, complete_graph, regular_tree, tessellation_patch, BranchingParams};
use spectre_core::graph::{levels, UNREACHED};
use spectre_core::isoperimetry::{cheeger_lower_dka, cheeger_lower_tessellation, merge_candidates, CheegerSearch};
use spectre_core::math::to_f64;
use spectre_core::operators::LaplacianMatrix;
use spectre_core::spectral::{summarize, SpectralSummary};
use spectre_core::sweep::{
    bound_report, default_outer_radius, inner_schedule, shell_union_witness, sweep_step, StepTheory, SweepOptions,
    Verdict, WITNESS_DEGREE_LIMIT,
};
use spectre_core::{Graph, Rational, StepRecord};

use crate::config::{FamilySpec, Format, Plan};
use crate::format::{float, optional_rational, rational};
use crate::io::{read_graph, write_graph, MAX_FILE_EDGES};
use crate::RunError;

/// A host graph with the branching parameters it was built from.
pub struct Host {
    pub graph: Graph,
    pub params: Option<BranchingParams>,
}

pub fn build_host(spec: &FamilySpec) -> Result<Host, RunError> {
    let compute = |e: spectre_core::Error| RunError::Compute(anyhow!(e));
    Ok(match spec {
        FamilySpec::Complete(n) => Host { graph: complete_graph(*n).map_err(compute)?, params: None },
        FamilySpec::Tree { branching, depth } => {
            Host { graph: regular_tree(*branching, *depth).map_err(compute)?, params: None }
        }
        FamilySpec::Branching(p) => Host { graph: branching_graph(p).map_err(compute)?, params: Some(p.clone()) },
        FamilySpec::Tessellation(p) => Host { graph: tessellation_patch(p).map_err(compute)?, params: None },
        FamilySpec::File(path) => Host { graph: read_graph(path).map_err(|e| RunError::Config(e.to_string()))?, params: None },
    })
}

fn json(out: &mut Vec<u8>, value: &impl Serialize) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.push(b'\n');
    Ok(())
}

fn csv_writer(out: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

/// Vertices with level `<= radius`.
fn ball_members(g: &Graph, radius: Option<u32>) -> Vec<usize> {
    let Some(r) = radius else { return Vec::new() };
    let level = levels(g);
    (0..g.vertex_count()).filter(|&v| level[v] <= r).collect()
}

pub fn generate(host: &Host, out: &mut Vec<u8>) -> anyhow::Result<()> {
    let edges = host.graph.edge_count();
    if edges > MAX_FILE_EDGES {
        bail!("graph has {edges} edges, more than the {MAX_FILE_EDGES} written to a graph file");
    }
    write_graph(&host.graph, out)?;
    Ok(())
}

#[derive(Serialize)]
struct CurvatureRow {
    vertex: usize,
    degree: usize,
    curvature: String,
    curvature_float: f64,
}

#[derive(Serialize)]
struct CurvatureJson {
    radius: Option<u32>,
    kappa: String,
    kappa_float: f64,
    vertices: Vec<CurvatureRow>,
}

pub fn curvature(plan: &Plan, host: &Host, out: &mut Vec<u8>) -> anyhow::Result<()> {
    let g = &host.graph;
    let report = CurvatureReport::new(g, &ball_members(g, plan.radius))?;
    let rows: Vec<CurvatureRow> = report
        .vertices
        .iter()
        .map(|(v, c)| CurvatureRow { vertex: *v, degree: g.deg(*v), curvature: rational(c), curvature_float: to_f64(c) })
        .collect();
    match plan.format {
        Format::Json => json(
            out,
            &CurvatureJson { radius: plan.radius, kappa: rational(&report.kappa), kappa_float: report.kappa_f64(), vertices: rows },
        ),
        _ => {
            let mut w = csv_writer(out);
            w.write_record(["vertex", "degree", "curvature", "curvature_float"])?;
            for r in rows {
                w.write_record([r.vertex.to_string(), r.degree.to_string(), r.curvature, float(r.curvature_float)])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct CheegerJson {
    radius: Option<u32>,
    lower_dka: Option<String>,
    lower_dka_certified: Option<bool>,
    lower_tess: Option<String>,
    lower: Option<String>,
    upper: String,
    upper_float: f64,
    witness: Vec<usize>,
    method: &'static str,
    exhaustive: bool,
    max_size: usize,
}

type Witness = (Rational, Vec<usize>);

fn better(a: &Witness, b: &Witness) -> bool {
    a.0 < b.0 || (a.0 == b.0 && (a.1.len(), &a.1) < (b.1.len(), &b.1))
}

pub fn cheeger(plan: &Plan, host: &Host, out: &mut Vec<u8>) -> anyhow::Result<()> {
    let g = &host.graph;
    let k = ball_members(g, plan.radius);
    let level = levels(g);
    let low = match plan.radius {
        Some(r) => r + 1,
        None => level.iter().copied().min().unwrap_or(0),
    };
    let high = level.iter().copied().filter(|&l| l != UNREACHED).max().unwrap_or(0);

    let dka = match g.generation() {
        // every ratio is at most 1, so the centre (ratio 1) never lowers
        // the minimum and "nothing excluded" is the bound outside level 0
        Some(_) => cheeger_lower_dka(g, plan.radius.unwrap_or(low.saturating_sub(1))).ok(),
        None => None,
    };
    let tess = if g.faces().is_some() { cheeger_lower_tessellation(g, &k).ok() } else { None };

    let mut best: Option<Witness> = if low <= high { shell_union_witness(g, low..=high)? } else { None };
    let search = CheegerSearch::new(g, &k, plan.max_size)?;
    let bounded_degree = search.roots().iter().all(|&v| g.deg(v) <= WITNESS_DEGREE_LIMIT);
    let mut exact = None;
    let mut exhaustive = false;
    if bounded_degree {
        let found = search
            .roots()
            .par_iter()
            .map(|&r| search.search_root(r))
            .reduce(|| None, merge_candidates);
        let estimate = search.finish(found)?;
        exhaustive = estimate.exhaustive;
        exact = estimate.lower;
        let candidate = (estimate.upper, estimate.witness.members().to_vec());
        if best.as_ref().is_none_or(|b| better(&candidate, b)) {
            best = Some(candidate);
        }
    }
    let (upper, witness) = best.ok_or_else(|| anyhow!("no witness set outside K"))?;

    let (lower, method) = match exact {
        Some(a) => (Some(a), "exhaustive"),
        None => match (dka.as_ref().map(|d| d.value), tess) {
            (Some(d), Some(t)) if t > d => (Some(t), "tessellation"),
            (Some(d), _) => (Some(d), "shell-degrees"),
            (None, Some(t)) => (Some(t), "tessellation"),
            (None, None) => (None, "none"),
        },
    };
    json(
        out,
        &CheegerJson {
            radius: plan.radius,
            lower_dka: dka.as_ref().map(|d| rational(&d.value)),
            lower_dka_certified: dka.as_ref().map(|d| d.certified),
            lower_tess: tess.as_ref().map(rational),
            lower: lower.as_ref().map(rational),
            upper_float: to_f64(&upper),
            upper: rational(&upper),
            witness,
            method,
            exhaustive,
            max_size: plan.max_size,
        },
    )
}

#[derive(Serialize)]
struct SpectrumEntry {
    variant: &'static str,
    dimension: usize,
    method: &'static str,
    lambda_min: f64,
    lambda_max: f64,
    residual_min: f64,
    residual_max: f64,
    iterations: usize,
    converged: bool,
    eigenvalues: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct SpectrumJson {
    inner: Option<u32>,
    outer: u32,
    spectra: Vec<SpectrumEntry>,
}

pub fn spectrum(plan: &Plan, host: &Host, out: &mut Vec<u8>) -> anyhow::Result<()> {
    let g = &host.graph;
    let level = levels(g);
    let outer = match plan.outer {
        Some(r) => r,
        None => default_outer_radius(g)?,
    };
    let inner = plan.inner.map(|r| r.first);
    let members: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| level[v] <= outer && inner.is_none_or(|k| level[v] > k))
        .collect();
    let matrices = plan
        .variants
        .iter()
        .map(|&variant| LaplacianMatrix::restrict(g, variant, &members))
        .collect::<Result<Vec<_>, _>>()?;
    let summaries = matrices
        .par_iter()
        .map(|m| summarize(m, &plan.spectral))
        .collect::<Result<Vec<SpectralSummary>, _>>()?;
    if let Some(prefix) = &plan.dump {
        for m in &matrices {
            dump_matrix(m, prefix)?;
        }
    }
    let spectra: Vec<SpectrumEntry> = summaries
        .into_iter()
        .map(|s| SpectrumEntry {
            variant: s.variant.name(),
            dimension: s.dimension,
            method: s.method.name(),
            lambda_min: s.lambda_min,
            lambda_max: s.lambda_max,
            residual_min: s.residual_min,
            residual_max: s.residual_max,
            iterations: s.iterations,
            converged: s.converged,
            eigenvalues: s.full_spectrum,
        })
        .collect();
    match plan.format {
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record([
                "variant",
                "dimension",
                "method",
                "lambda_min",
                "lambda_max",
                "residual_min",
                "residual_max",
                "iterations",
            ])?;
            for s in &spectra {
                w.write_record([
                    s.variant.to_string(),
                    s.dimension.to_string(),
                    s.method.to_string(),
                    float(s.lambda_min),
                    float(s.lambda_max),
                    float(s.residual_min),
                    float(s.residual_max),
                    s.iterations.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
        _ => json(out, &SpectrumJson { inner, outer, spectra }),
    }
}

fn dump_matrix(m: &LaplacianMatrix, prefix: &std::path::Path) -> anyhow::Result<()> {
    let base = prefix.to_string_lossy();
    let name = m.variant().name();
    let entries: Vec<(usize, usize, f64)> = m.entries().collect();
    let mut text = Vec::new();
    writeln!(text, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(text, "% {name} restricted to {} vertices; host ids in {base}.{name}.weights", m.dimension())?;
    writeln!(text, "{} {} {}", m.dimension(), m.dimension(), entries.len())?;
    for (i, j, v) in entries {
        writeln!(text, "{} {} {}", i + 1, j + 1, float(v))?;
    }
    let path = format!("{base}.{name}.mtx");
    std::fs::write(&path, text).with_context(|| format!("cannot write {path}"))?;
    let mut text = Vec::new();
    for (v, w) in m.vertices().iter().zip(m.weights()) {
        writeln!(text, "{v} {}", float(w))?;
    }
    let path = format!("{base}.{name}.weights");
    std::fs::write(&path, text).with_context(|| format!("cannot write {path}"))?;
    Ok(())
}

/// Column header of the sweep CSV.
pub const SWEEP_COLUMNS: [&str; 13] = [
    "k",
    "R",
    "m_K",
    "M_K",
    "kappa_K",
    "alpha_dka",
    "alpha_tess",
    "alpha_witness",
    "inf_delta",
    "inf_hat",
    "sup_hat",
    "theory_alpha_lower",
    "theory_alpha_upper",
];

#[derive(Serialize)]
struct SolverJson {
    method: &'static str,
    iterations: usize,
    residual_min: f64,
    residual_max: f64,
}

impl From<&SpectralSummary> for SolverJson {
    fn from(s: &SpectralSummary) -> Self {
        SolverJson { method: s.method.name(), iterations: s.iterations, residual_min: s.residual_min, residual_max: s.residual_max }
    }
}

#[derive(Serialize)]
struct TheoryJson {
    alpha_lower: String,
    alpha_upper: String,
    alpha_limit: String,
}

impl From<&StepTheory> for TheoryJson {
    fn from(t: &StepTheory) -> Self {
        TheoryJson { alpha_lower: rational(&t.alpha_lower), alpha_upper: rational(&t.alpha_upper), alpha_limit: rational(&t.alpha_limit) }
    }
}

#[derive(Serialize)]
struct BoundJson {
    name: &'static str,
    lhs: f64,
    rhs: f64,
    margin: f64,
    holds: bool,
}

impl From<Verdict> for BoundJson {
    fn from(v: Verdict) -> Self {
        BoundJson { name: v.name, lhs: v.lhs, rhs: v.rhs, margin: v.margin, holds: v.holds }
    }
}

#[derive(Serialize)]
struct StepJson {
    inner: u32,
    outer: u32,
    dimension: usize,
    m_k: u64,
    big_m_k: u64,
    annulus_min_degree: u64,
    kappa: Option<String>,
    alpha_dka: Option<String>,
    alpha_tess: Option<String>,
    alpha_witness: Option<String>,
    witness: Vec<usize>,
    inf_delta: f64,
    sup_delta: f64,
    inf_hat: f64,
    sup_hat: f64,
    delta: SolverJson,
    hat: SolverJson,
    theory: Option<TheoryJson>,
    outer_truncated: bool,
    bounds: Vec<BoundJson>,
}

impl From<&StepRecord> for StepJson {
    fn from(s: &StepRecord) -> Self {
        StepJson {
            inner: s.inner,
            outer: s.outer,
            dimension: s.dimension,
            m_k: s.m_k,
            big_m_k: s.big_m_k,
            annulus_min_degree: s.annulus_min_degree,
            kappa: s.kappa.as_ref().map(rational),
            alpha_dka: s.alpha_dka.as_ref().map(rational),
            alpha_tess: s.alpha_tess.as_ref().map(rational),
            alpha_witness: s.alpha_witness.as_ref().map(rational),
            witness: s.witness.clone(),
            inf_delta: s.inf_delta(),
            sup_delta: s.delta.lambda_max,
            inf_hat: s.inf_hat(),
            sup_hat: s.sup_hat(),
            delta: (&s.delta).into(),
            hat: (&s.hat).into(),
            theory: s.theory.as_ref().map(Into::into),
            outer_truncated: s.outer_truncated,
            bounds: bound_report(s).into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Serialize)]
struct SweepJson {
    steps: Vec<StepJson>,
}

/// The steps of a sweep, measured in parallel and returned in order.
pub fn sweep_records(plan: &Plan, host: &Host) -> anyhow::Result<Vec<StepRecord>> {
    let g = &host.graph;
    let outer = match plan.outer {
        Some(r) => r,
        None => default_outer_radius(g)?,
    };
    let (first, last) = match plan.inner {
        Some(r) => (r.first, r.last),
        None => {
            let lowest = levels(g).into_iter().min().unwrap_or(0);
            if outer <= lowest {
                bail!("outer radius {outer} leaves no annulus");
            }
            (lowest, outer - 1)
        }
    };
    if last >= outer {
        bail!("inner radius {last} must be below the outer radius {outer}");
    }
    let options = SweepOptions { spectral: plan.spectral, witness_max_size: plan.max_size, theory: host.params.clone() };
    let schedule = inner_schedule(first..=last, outer);
    let records = schedule
        .par_iter()
        .map(|&step| sweep_step(g, step, &options).with_context(|| format!("step k = {}, R = {}", step.inner, step.outer)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(records)
}

pub fn sweep(plan: &Plan, host: &Host, out: &mut Vec<u8>) -> anyhow::Result<()> {
    let records = sweep_records(plan, host)?;
    match plan.format {
        Format::Json => json(out, &SweepJson { steps: records.iter().map(Into::into).collect() }),
        _ => {
            let mut w = csv_writer(out);
            w.write_record(SWEEP_COLUMNS)?;
            for s in &records {
                let theory = s.theory.as_ref();
                w.write_record([
                    s.inner.to_string(),
                    s.outer.to_string(),
                    s.m_k.to_string(),
                    s.big_m_k.to_string(),
                    optional_rational(s.kappa.as_ref()),
                    optional_rational(s.alpha_dka.as_ref()),
                    optional_rational(s.alpha_tess.as_ref()),
                    optional_rational(s.alpha_witness.as_ref()),
                    float(s.inf_delta()),
                    float(s.inf_hat()),
                    float(s.sup_hat()),
                    optional_rational(theory.map(|t| &t.alpha_lower)),
                    optional_rational(theory.map(|t| &t.alpha_upper)),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}
