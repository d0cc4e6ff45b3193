//! `verify`: every property check, run with fixed seeds over the built-in
//! corpus, aggregated into one verdict per named inequality.

use std::fmt::Write as _;

use anyhow::anyhow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use spectre_core::corpus::{generator_corpus, CorpusEntry, Family};
use spectre_core::curvature::vertex_curvature;
use spectre_core::generators::{check_tessellation, generation_sizes};
use spectre_core::graph::{levels, shell};
use spectre_core::isoperimetry::{
    cheeger_exact, cheeger_lower_dka, cheeger_lower_tessellation, face_sum_check, isoperimetric_check,
};
use spectre_core::math::to_f64;
use spectre_core::operators::{factorization_check, indicator_forms, quadratic_form, LaplacianMatrix};
use spectre_core::spectral::{full_spectrum_with, sandwich_check, shell_inequality_check, transition_norm_checks};
use spectre_core::sweep::{bound_report, default_outer_radius, sweep_step, Step, SweepOptions};
use spectre_core::{Graph, Rational, Variant, VertexSet};

use crate::config::{Format, Plan};

/// Seed of every random draw; graph `i` of the corpus uses `SEED + i`.
pub const SEED: u64 = 0x5EED;

/// Slack of floating-point comparisons.
const TOLERANCE: f64 = 1e-9;

/// Failing instances listed per inequality.
const EXAMPLES: usize = 5;

struct Observation {
    name: &'static str,
    holds: bool,
    margin: Option<f64>,
    detail: String,
}

struct Checks<'a> {
    entry: &'a CorpusEntry,
    out: Vec<Observation>,
}

impl Checks<'_> {
    fn push(&mut self, name: &'static str, holds: bool, margin: Option<f64>, detail: impl FnOnce() -> String) {
        let detail = if holds { String::new() } else { format!("{}: {}", self.entry.name, detail()) };
        self.out.push(Observation { name, holds, margin, detail });
    }

    fn error(&mut self, name: &'static str, e: impl std::fmt::Display) {
        let detail = format!("{}: {e}", self.entry.name);
        self.out.push(Observation { name, holds: false, margin: None, detail });
    }
}

/// A connected subset of `pool`-reachable vertices (those with
/// `allowed[v]`) with between 1 and `max_size` members, grown from a random
/// root by random frontier choices.
fn random_connected(rng: &mut ChaCha8Rng, g: &Graph, allowed: &[bool], pool: &[usize], max_size: usize) -> Vec<usize> {
    let target = rng.random_range(1..=max_size.max(1));
    let root = pool[rng.random_range(0..pool.len())];
    let mut state = vec![0u8; g.vertex_count()]; // 1 frontier, 2 member
    let mut members = vec![root];
    state[root] = 2;
    let mut frontier = Vec::new();
    let grow = |v: usize, state: &mut Vec<u8>, frontier: &mut Vec<usize>| {
        for u in g.neighbors(v) {
            if allowed[u] && state[u] == 0 {
                state[u] = 1;
                frontier.push(u);
            }
        }
    };
    grow(root, &mut state, &mut frontier);
    while members.len() < target && !frontier.is_empty() {
        let v = frontier.swap_remove(rng.random_range(0..frontier.len()));
        state[v] = 2;
        members.push(v);
        grow(v, &mut state, &mut frontier);
    }
    members.sort_unstable();
    members
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn check_entry(index: usize, entry: &CorpusEntry, plan: &Plan) -> Vec<Observation> {
    let mut c = Checks { entry, out: Vec::new() };
    let g = &entry.graph;
    let n = g.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + index as u64);
    let level = levels(g);
    let interior: Vec<usize> = (0..n).filter(|&v| g.is_interior(v)).collect();
    let allowed: Vec<bool> = (0..n).map(|v| g.is_interior(v)).collect();
    let boundary: Vec<usize> = (0..n).filter(|&v| !g.is_interior(v)).collect();
    let positive_degrees = interior.iter().all(|&v| g.deg(v) > 0);

    let degree_sum: u64 = (0..n).map(|v| g.deg(v) as u64).sum();
    c.push("handshake: sum of degrees = 2|E|", degree_sum == 2 * g.edge_count(), None, || {
        format!("sum {degree_sum}, |E| = {}", g.edge_count())
    });
    for _ in 0..10 {
        let w: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.3)).collect();
        match VertexSet::new(g, &w) {
            Ok(set) => {
                let (area, inner, outer) = (set.area(), set.internal_edges(), set.boundary_edges());
                c.push("A(W) = 2|E_W| + |dW|", area == 2 * inner + outer, None, || {
                    format!("|W| = {}: A = {area}, E_W = {inner}, dW = {outer}", w.len())
                });
            }
            Err(e) => c.error("A(W) = 2|E_W| + |dW|", e),
        }
    }
    if interior.is_empty() {
        return c.out;
    }

    // quadratic forms on functions supported in the interior
    let delta = LaplacianMatrix::restrict(g, Variant::Delta, &interior);
    for _ in 0..5 {
        let phi: Vec<f64> = interior.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut host_phi = vec![0.0; n];
        for (&v, &x) in interior.iter().zip(&phi) {
            host_phi[v] = x;
        }
        match (&delta, quadratic_form(g, &host_phi)) {
            (Ok(m), Ok(q)) => {
                let y = m.apply(&phi).expect("dimension");
                let form: f64 = y.iter().zip(&phi).map(|(a, b)| a * b).sum();
                c.push("<delta phi, phi> = sum over edges of (dphi)^2", close(form, q, 1e-12), None, || {
                    format!("{form} vs {q}")
                });
            }
            (Err(e), _) => c.error("<delta phi, phi> = sum over edges of (dphi)^2", e),
            (_, Err(e)) => c.error("<delta phi, phi> = sum over edges of (dphi)^2", e),
        }
        if positive_degrees {
            match factorization_check(g, &boundary, &phi) {
                Ok(f) => c.push("<delta phi, phi> = R(delta_hat, D^1/2 phi) <D phi, phi>", f.holds, None, || {
                    format!("{} vs {} (relative error {:e})", f.lhs, f.rhs, f.relative_error)
                }),
                Err(e) => c.error("<delta phi, phi> = R(delta_hat, D^1/2 phi) <D phi, phi>", e),
            }
        }
    }
    for _ in 0..20 {
        let w = random_connected(&mut rng, g, &allowed, &interior, 12);
        let set = VertexSet::new(g, &w).expect("vertices in range");
        match indicator_forms(g, &boundary, &w) {
            Ok((form, norm)) => c.push(
                "<delta chi_W, chi_W> = |dW| and |chi_W|^2_deg = A(W)",
                form == set.boundary_edges() as i128 && norm == set.area() as i128,
                None,
                || format!("W = {w:?}: ({form}, {norm}) vs ({}, {})", set.boundary_edges(), set.area()),
            ),
            Err(e) => c.error("<delta chi_W, chi_W> = |dW| and |chi_W|^2_deg = A(W)", e),
        }
    }

    let lowest = level.iter().copied().min().unwrap_or(0);
    let dka = g.generation().and_then(|_| cheeger_lower_dka(g, lowest).ok()).map(|b| b.value);
    let outside: Vec<usize> = (0..n).filter(|&v| level[v] <= lowest).collect();
    let tess = g.faces().and_then(|_| cheeger_lower_tessellation(g, &outside).ok());

    // spectra of the normalised restriction
    if positive_degrees && interior.len() <= plan.spectral.dense_threshold {
        match LaplacianMatrix::restrict(g, Variant::DeltaHat, &interior)
            .and_then(|m| full_spectrum_with(&m, plan.spectral.dense_threshold))
        {
            Ok(s) => {
                let (lo, hi) = (s[0], s[s.len() - 1]);
                c.push("spectrum of delta_hat in [0, 2]", lo >= -TOLERANCE && hi <= 2.0 + TOLERANCE, Some(lo.min(2.0 - hi)), || {
                    format!("[{lo}, {hi}]")
                });
            }
            Err(e) => c.error("spectrum of delta_hat in [0, 2]", e),
        }
        // a certified Cheeger lower bound and the domain it covers
        let exact = g.is_complete_host() && interior.len() <= 16;
        let (alpha, domain): (Option<Rational>, Vec<usize>) = if exact {
            (cheeger_exact(g, &[], interior.len()).ok().and_then(|e| e.lower), interior.clone())
        } else {
            let best = match (dka, tess) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            };
            (best, interior.iter().copied().filter(|&v| level[v] > lowest).collect())
        };
        if let Some(alpha) = alpha.filter(|_| !domain.is_empty()) {
            match LaplacianMatrix::restrict(g, Variant::DeltaHat, &domain)
                .and_then(|m| sandwich_check(&m, alpha, &plan.spectral))
            {
                Ok(s) => c.push(
                    "1 - sqrt(1 - alpha^2) <= spectrum of delta_hat <= 1 + sqrt(1 - alpha^2)",
                    s.holds,
                    Some(s.margin_low.min(s.margin_high)),
                    || format!("alpha = {}, spectrum [{}, {}], edges [{}, {}]", alpha, s.lambda_min, s.lambda_max, s.lower_edge, s.upper_edge),
                ),
                Err(e) => c.error("1 - sqrt(1 - alpha^2) <= spectrum of delta_hat <= 1 + sqrt(1 - alpha^2)", e),
            }
        }
        if g.is_complete_host() && (3..=24).contains(&n) {
            for k in [vec![], vec![0]] {
                match transition_norm_checks(g, &k) {
                    Ok(t) => c.push(
                        "1 - alpha_K <= |A_K| <= sqrt(1 - alpha_K^2)",
                        t.holds,
                        Some((t.norm - t.lower).min(t.upper - t.norm)),
                        || format!("K = {k:?}: alpha = {}, norm {}, bounds [{}, {}]", t.alpha, t.norm, t.lower, t.upper),
                    ),
                    Err(e) => c.error("1 - alpha_K <= |A_K| <= sqrt(1 - alpha_K^2)", e),
                }
            }
        }
    }

    if let Some(faces) = g.faces() {
        c.push("tessellation conditions", check_tessellation(g).is_ok(), None, || {
            format!("{:?}", check_tessellation(g).unwrap_err())
        });
        let euler = n as i64 - g.edge_count() as i64 + faces.len() as i64;
        c.push("Euler characteristic |V| - |E| + |F| = 1", euler == 1, None, || format!("{euler}"));
        if let Family::Tessellation(t) = &entry.family {
            let expected =
                Rational::from_integer(1) - Rational::new(t.q as i128, 2) + Rational::new(t.q as i128, t.p as i128);
            let wrong: Vec<usize> =
                interior.iter().copied().filter(|&v| vertex_curvature(g, v).ok() != Some(expected)).collect();
            c.push("curvature = 1 - q/2 + q/p", wrong.is_empty(), None, || format!("vertices {wrong:?}"));
        }
        let tess_all = cheeger_lower_tessellation(g, &[]).ok();
        for _ in 0..50 {
            let w = random_connected(&mut rng, g, &allowed, &interior, 30);
            match isoperimetric_check(g, &w) {
                Ok(i) => c.push("|dW| >= A(W) - 6(|W| + C(W) - 2)", i.holds, Some(i.slack as f64), || {
                    format!("W = {w:?}: {} < {}", i.lhs, i.rhs)
                }),
                Err(e) => c.error("|dW| >= A(W) - 6(|W| + C(W) - 2)", e),
            }
            match face_sum_check(g, &w) {
                Ok(f) => {
                    c.push("face-sum identity", f.holds, None, || {
                        format!(
                            "W = {w:?}: {} vs {} with C(W) = {}, holes = {}{}",
                            f.lhs,
                            f.rhs,
                            f.complement_components,
                            f.holes,
                            if f.pinched() { " (two complement components meet one face)" } else { "" }
                        )
                    });
                    c.push("face-sum identity, holes for C(W)", f.holds_with_holes(), None, || {
                        format!("W = {w:?}: {} vs {} with holes = {}", f.lhs, f.rhs, f.holes)
                    });
                    c.push("|d_F W| <= |dW|", f.boundary_faces_bounded(), None, || {
                        format!("W = {w:?}: {} > {}", f.boundary_faces, f.boundary_edges)
                    });
                }
                Err(e) => c.error("face-sum identity", e),
            }
            if let Some(bound) = tess_all {
                let set = VertexSet::new(g, &w).expect("vertices in range");
                if let Some(ratio) = set.cheeger_ratio() {
                    c.push("|dW|/A(W) >= max(0, 1 - 6/min deg)", ratio >= bound, Some(to_f64(&(ratio - bound))), || {
                        format!("W = {w:?}: {ratio} < {bound}")
                    });
                }
            }
        }
    }

    if let Some(bound) = dka {
        let pool: Vec<usize> = interior.iter().copied().filter(|&v| level[v] > lowest).collect();
        let outer_allowed: Vec<bool> = (0..n).map(|v| allowed[v] && level[v] > lowest).collect();
        for _ in 0..(if pool.is_empty() { 0 } else { 20 }) {
            let w = random_connected(&mut rng, g, &outer_allowed, &pool, 12);
            let set = VertexSet::new(g, &w).expect("vertices in range");
            if let Some(ratio) = set.cheeger_ratio() {
                c.push("|dW|/A(W) >= min (deg+ - deg-)/deg", ratio >= bound, Some(to_f64(&(ratio - bound))), || {
                    format!("W = {w:?}: {ratio} < {bound}")
                });
            }
        }
    }

    if let Family::Branching(params) = &entry.family {
        match generation_sizes(params) {
            Ok(sizes) => {
                let measured: Vec<u64> =
                    (1..=params.k_max).map(|k| shell(g, k).map(|s| s.len() as u64).unwrap_or(0)).collect();
                c.push("|S_k| = N_k", measured == sizes, None, || format!("{measured:?} vs {sizes:?}"));
            }
            Err(e) => c.error("|S_k| = N_k", e),
        }
        let last_interior = params.k_max.saturating_sub(1);
        for k in 2..=last_interior {
            let phi: Vec<f64> = (0..n)
                .map(|v| if level[v] >= k && g.is_interior(v) { rng.random_range(-1.0..1.0) } else { 0.0 })
                .collect();
            match shell_inequality_check(g, k, &phi) {
                Ok(s) => c.push("shell inequality", s.holds, Some(s.margin), || {
                    format!("k = {k}: {} < {}", s.lhs, s.rhs)
                }),
                Err(e) => c.error("shell inequality", e),
            }
        }
    }

    if positive_degrees {
        if let Ok(outer) = default_outer_radius(g) {
            if outer > lowest {
                let theory = match &entry.family {
                    Family::Branching(p) if p.k_max >= 3 => Some(p.clone()),
                    _ => None,
                };
                let options = SweepOptions { spectral: plan.spectral, witness_max_size: 0, theory };
                match sweep_step(g, Step { inner: lowest, outer }, &options) {
                    Ok(record) => {
                        for v in bound_report(&record) {
                            c.push(v.name, v.holds, Some(v.margin), || format!("{} vs {}", v.lhs, v.rhs));
                        }
                        if let (Some(t), Some(a)) = (&record.theory, record.alpha_dka) {
                            c.push("closed-form shell-degree ratio = measured", t.alpha_lower == a, None, || {
                                format!("{} vs {a}", t.alpha_lower)
                            });
                        }
                    }
                    Err(e) => c.error("annulus sweep", anyhow!(e)),
                }
            }
        }
    }
    c.out
}

/// Aggregated verdict for one named inequality.
#[derive(Debug, Clone, Serialize)]
pub struct Tally {
    pub name: &'static str,
    pub instances: usize,
    pub failures: usize,
    /// Smallest slack over the instances with a numeric margin.
    pub worst_margin: Option<f64>,
    pub examples: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub graphs: usize,
    pub passed: bool,
    pub inequalities: Vec<Tally>,
}

pub fn verify_report(plan: &Plan) -> anyhow::Result<Report> {
    let corpus = generator_corpus(plan.max_vertices)?;
    let observations: Vec<Vec<Observation>> =
        corpus.par_iter().enumerate().map(|(i, entry)| check_entry(i, entry, plan)).collect();
    let mut tallies: Vec<Tally> = Vec::new();
    for o in observations.into_iter().flatten() {
        let t = match tallies.iter().position(|t| t.name == o.name) {
            Some(i) => &mut tallies[i],
            None => {
                tallies.push(Tally { name: o.name, instances: 0, failures: 0, worst_margin: None, examples: Vec::new() });
                tallies.last_mut().unwrap()
            }
        };
        t.instances += 1;
        if let Some(m) = o.margin {
            t.worst_margin = Some(t.worst_margin.map_or(m, |w: f64| w.min(m)));
        }
        if !o.holds {
            t.failures += 1;
            if t.examples.len() < EXAMPLES {
                t.examples.push(o.detail);
            }
        }
    }
    let passed = tallies.iter().all(|t| t.failures == 0);
    Ok(Report { graphs: corpus.len(), passed, inequalities: tallies })
}

pub fn verify(plan: &Plan, out: &mut Vec<u8>) -> anyhow::Result<bool> {
    let report = verify_report(plan)?;
    match plan.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &report)?;
            out.push(b'\n');
        }
        _ => {
            let mut text = String::new();
            writeln!(text, "verify: {} corpus graphs with at most {} vertices", report.graphs, plan.max_vertices)?;
            for t in &report.inequalities {
                let status = if t.failures == 0 { "PASS" } else { "FAIL" };
                write!(text, "{status} {}: {} instances, {} failures", t.name, t.instances, t.failures)?;
                if let Some(m) = t.worst_margin {
                    write!(text, ", worst margin {}", crate::format::float(m))?;
                }
                writeln!(text)?;
                for e in &t.examples {
                    writeln!(text, "    {e}")?;
                }
            }
            let holding = report.inequalities.iter().filter(|t| t.failures == 0).count();
            writeln!(text, "verify: {holding} of {} inequalities hold", report.inequalities.len())?;
            out.extend_from_slice(text.as_bytes());
        }
    }
    Ok(report.passed)
}
