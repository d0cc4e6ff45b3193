//! Annulus sweeps: bottom and top of the spectrum of Dirichlet
//! restrictions to `B_R \ B_k` for a growing inner radius, together with
//! the degree, curvature and Cheeger quantities of the exterior `V \ B_k`.
//!
//! The edges of the essential spectrum are limits over growing excluded
//! balls. A sweep reports the finite sequences and, for the branching
//! family, the closed-form predictions next to them; it never extrapolates.
//!
//! Every step is independent of the others: [`sweep_step`] is the unit of
//! work, [`sweep`] runs a schedule in order.

use alloc::format;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::curvature::kappa_outside;
use crate::generators::{forward_multiplicity, generation_sizes, BranchingParams};
use crate::graph::{levels, Graph, Mask};
use crate::isoperimetry::{cheeger_exact, cheeger_lower_dka, cheeger_lower_tessellation};
use crate::math::{abs, sqrt, to_f64, widen, Rational};
use crate::operators::{annulus_vertices, quadratic_form, LaplacianMatrix, Variant};
use crate::spectral::{summarize, SpectralOptions, SpectralSummary};
use crate::{Error, Result};

/// Relative tolerance of the verdicts in [`bound_report`].
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// Witness enumeration is only attempted when no exterior vertex has more
/// neighbours than this.
pub const WITNESS_DEGREE_LIMIT: usize = 64;

/// One `(k, R)` pair: inner and outer radius of the annulus `B_R \ B_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub inner: u32,
    pub outer: u32,
}

/// Options of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub spectral: SpectralOptions,
    /// Largest connected subset enumerated for the Cheeger witness, on top
    /// of shells and unions of consecutive shells. `0` disables it.
    pub witness_max_size: usize,
    /// Parameters of the branching family the host was built from; enables
    /// the closed-form columns.
    pub theory: Option<BranchingParams>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { spectral: SpectralOptions::default(), witness_max_size: 4, theory: None }
    }
}

/// Closed-form predictions for the exterior of `B_k` in `G_{γ,c}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepTheory {
    /// Smallest construction ratio `([cN_j^γ]−1)/(N_j+[cN_j^γ])` over the
    /// interior generations `j > k`; equals the measured shell-degree bound.
    pub alpha_lower: Rational,
    /// `|∂_E S_{k+1}| / A(S_{k+1})`.
    pub alpha_upper: Rational,
    /// The `γ`-regime limit of the Cheeger constant at infinity.
    pub alpha_limit: Rational,
}

/// Everything measured on one step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub inner: u32,
    pub outer: u32,
    /// Vertices of the annulus.
    pub dimension: usize,
    /// Min and max degree of the interior vertices outside `B_k`.
    pub m_k: u64,
    pub big_m_k: u64,
    /// Smallest degree inside the annulus (single-vertex test bound).
    pub annulus_min_degree: u64,
    /// `κ_K` outside `B_k`, on tessellation patches.
    pub kappa: Option<Rational>,
    /// Shell-degree lower bound outside `B_k`, on labelled hosts.
    pub alpha_dka: Option<Rational>,
    /// Tessellation lower bound outside `B_k`, on patches.
    pub alpha_tess: Option<Rational>,
    /// Best `|∂_E W| / A(W)` over the witness candidates in the annulus.
    pub alpha_witness: Option<Rational>,
    pub witness: Vec<usize>,
    pub delta: SpectralSummary,
    pub hat: SpectralSummary,
    pub theory: Option<StepTheory>,
    /// The annulus stops before the last fully interior level, so its
    /// bottom eigenvalue sits above the one of the whole exterior: the
    /// truncation error is one-sided, upwards.
    pub outer_truncated: bool,
}

impl StepRecord {
    pub fn inf_delta(&self) -> f64 {
        self.delta.lambda_min
    }

    pub fn inf_hat(&self) -> f64 {
        self.hat.lambda_min
    }

    pub fn sup_hat(&self) -> f64 {
        self.hat.lambda_max
    }

    /// Largest certified Cheeger lower bound of the exterior.
    pub fn alpha_lower(&self) -> Option<Rational> {
        match (self.alpha_dka, self.alpha_tess) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Records of a whole schedule, in schedule order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub steps: Vec<StepRecord>,
}

impl SweepResult {
    pub fn schedule(&self) -> Vec<Step> {
        self.steps.iter().map(|s| Step { inner: s.inner, outer: s.outer }).collect()
    }
}

/// Largest `L` such that every vertex of level `≤ L` is interior.
pub fn default_outer_radius(g: &Graph) -> Result<u32> {
    let levels = levels(g);
    let first_open = (0..g.vertex_count())
        .filter(|&v| !g.is_interior(v))
        .map(|v| levels[v])
        .min();
    match first_open {
        Some(0) => Err(Error::EmptyDomain("the centre is not interior")),
        Some(l) => Ok(l - 1),
        None => levels.iter().copied().filter(|&l| l != u32::MAX).max().ok_or(Error::EmptyDomain("empty graph")),
    }
}

/// `(k, R)` for every `k` in `inner` with a common outer radius.
pub fn inner_schedule(inner: core::ops::RangeInclusive<u32>, outer: u32) -> Vec<Step> {
    inner.map(|k| Step { inner: k, outer }).collect()
}

/// Runs every step of `schedule` in order.
pub fn sweep(g: &Graph, schedule: &[Step], options: &SweepOptions) -> Result<SweepResult> {
    let steps = schedule.iter().map(|&s| sweep_step(g, s, options)).collect::<Result<_>>()?;
    Ok(SweepResult { steps })
}

/// Measures one annulus `B_R \ B_k`.
pub fn sweep_step(g: &Graph, step: Step, options: &SweepOptions) -> Result<StepRecord> {
    let Step { inner, outer } = step;
    let annulus = annulus_vertices(g, inner, outer)?;
    let level = levels(g);
    let ball: Vec<usize> = (0..g.vertex_count()).filter(|&v| level[v] <= inner).collect();

    let delta_matrix = LaplacianMatrix::restrict(g, Variant::Delta, &annulus)?;
    let hat_matrix = LaplacianMatrix::restrict(g, Variant::DeltaHat, &annulus)?;
    let delta = summarize(&delta_matrix, &options.spectral)?;
    let hat = summarize(&hat_matrix, &options.spectral)?;

    let exterior_degrees = (0..g.vertex_count()).filter(|&v| level[v] > inner && g.is_interior(v)).map(|v| g.deg(v) as u64);
    let (m_k, big_m_k) = exterior_degrees
        .fold(None, |acc: Option<(u64, u64)>, d| Some(acc.map_or((d, d), |(lo, hi)| (lo.min(d), hi.max(d)))))
        .ok_or(Error::EmptyDomain("no interior vertex outside the ball"))?;
    let annulus_min_degree = delta_matrix.degrees().iter().copied().min().unwrap_or(0);

    let tessellation = g.faces().is_some();
    let kappa = if tessellation { Some(kappa_outside(g, &ball)?) } else { None };
    let alpha_tess = if tessellation { Some(cheeger_lower_tessellation(g, &ball)?) } else { None };
    let alpha_dka = match g.generation() {
        Some(_) => Some(cheeger_lower_dka(g, inner)?.value),
        None => None,
    };

    let (alpha_witness, witness) = match best_witness(g, &level, inner, outer, options.witness_max_size)? {
        Some((r, w)) => (Some(r), w),
        None => (None, Vec::new()),
    };

    let theory = match &options.theory {
        Some(params) => Some(step_theory(params, inner)?),
        None => None,
    };
    let outer_truncated = default_outer_radius(g).map(|r| outer < r).unwrap_or(false);

    Ok(StepRecord {
        inner,
        outer,
        dimension: annulus.len(),
        m_k,
        big_m_k,
        annulus_min_degree,
        kappa,
        alpha_dka,
        alpha_tess,
        alpha_witness,
        witness,
        delta,
        hat,
        theory,
        outer_truncated,
    })
}

type Witness = Option<(Rational, Vec<usize>)>;

fn offer(ratio: Rational, members: Vec<usize>, best: &mut Witness) {
    let better = match best {
        None => true,
        Some((r, w)) => ratio < *r || (ratio == *r && (members.len(), &members) < (w.len(), w)),
    };
    if better {
        *best = Some((ratio, members));
    }
}

/// Best `|∂_E W| / A(W)` over the unions of consecutive levels `j..=j'`
/// with `j, j'` in `range` whose vertices are all interior, ties broken by
/// size and then lexicographically.
pub fn shell_union_witness(
    g: &Graph,
    range: core::ops::RangeInclusive<u32>,
) -> Result<Option<(Rational, Vec<usize>)>> {
    let level = levels(g);
    let mut best = None;
    let (low, high) = (*range.start(), *range.end());
    for first in low..=high {
        for last in first..=high {
            let members: Vec<usize> = (0..g.vertex_count()).filter(|&v| level[v] >= first && level[v] <= last).collect();
            if members.is_empty() || members.iter().any(|&v| !g.is_interior(v)) {
                continue;
            }
            let mask = Mask::new(g, &members)?;
            let area = mask.area(g);
            if area > 0 {
                offer(Rational::new(mask.boundary_count(g) as i128, area as i128), mask.members, &mut best);
            }
        }
    }
    Ok(best)
}

/// Shells `j..=j'` with `k < j ≤ j' ≤ R` and, on hosts of small degree,
/// every connected subset up to `max_size` vertices of the annulus.
fn best_witness(g: &Graph, level: &[u32], inner: u32, outer: u32, max_size: usize) -> Result<Witness> {
    let mut best = shell_union_witness(g, inner + 1..=outer)?;
    let small_degree = (0..g.vertex_count()).filter(|&v| level[v] > inner).all(|v| g.deg(v) <= WITNESS_DEGREE_LIMIT);
    if max_size > 0 && small_degree {
        // enumerate inside the annulus: exclude B_k and everything beyond R
        let excluded: Vec<usize> = (0..g.vertex_count()).filter(|&v| level[v] <= inner || level[v] > outer).collect();
        let estimate = cheeger_exact(g, &excluded, max_size)?;
        offer(estimate.upper, estimate.witness.members().to_vec(), &mut best);
    }
    Ok(best)
}

/// A named inequality with both sides and its margin.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs` for `lhs ≤ rhs`.
    pub margin: f64,
    pub holds: bool,
}

fn verdict(name: &'static str, lhs: f64, rhs: f64) -> Verdict {
    let margin = rhs - lhs;
    let holds = margin >= -BOUND_TOLERANCE * abs(lhs).max(abs(rhs)).max(1.0);
    Verdict { name, lhs, rhs, margin, holds }
}

/// Checks the finite-domain inequalities of one step:
///
/// - `m_K · inf σ(Δ̂) ≤ inf σ(Δ) ≤ M_K · inf σ(Δ̂)`;
/// - `inf σ(Δ) ≤ deg(v)` for the smallest degree in the annulus;
/// - with a certified Cheeger lower bound `α`:
///   `1 − √(1−α²) ≤ inf σ(Δ̂)`, `sup σ(Δ̂) ≤ 1 + √(1−α²)` and
///   `m_K (1 − √(1−α²)) ≤ inf σ(Δ)`.
pub fn bound_report(record: &StepRecord) -> Vec<Verdict> {
    let (low, high) = (record.m_k as f64, record.big_m_k as f64);
    let mut out = Vec::new();
    out.push(verdict("m_K inf(hat) <= inf(delta)", low * record.inf_hat(), record.inf_delta()));
    out.push(verdict("inf(delta) <= M_K inf(hat)", record.inf_delta(), high * record.inf_hat()));
    out.push(verdict("inf(delta) <= min degree", record.inf_delta(), record.annulus_min_degree as f64));
    if let Some(alpha) = record.alpha_lower() {
        let a = to_f64(&alpha);
        let width = sqrt((1.0 - a * a).max(0.0));
        out.push(verdict("1 - sqrt(1 - alpha^2) <= inf(hat)", 1.0 - width, record.inf_hat()));
        out.push(verdict("sup(hat) <= 1 + sqrt(1 - alpha^2)", record.sup_hat(), 1.0 + width));
        out.push(verdict("m_K (1 - sqrt(1 - alpha^2)) <= inf(delta)", low * (1.0 - width), record.inf_delta()));
    }
    out
}

/// Closed-form Cheeger quantities of generation `n` of `G_{γ,c}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GnTheory {
    pub n: u32,
    /// `N_n`.
    pub size: u64,
    /// `[c N_n^γ]` (`N_2` for the root).
    pub forward: u64,
    /// `(N_n [cN_n^γ] + N_n) / (N_n² + N_n [cN_n^γ])`: the ratio of `S_n`,
    /// an upper bound for the Cheeger constant outside `B_{n−1}`.
    pub upper: Rational,
    /// `([cN_n^γ] − 1) / (N_n + [cN_n^γ])`: the shell-degree ratio of a
    /// generation-`n` vertex, read off the construction.
    pub lower: Rational,
    /// `([cN_n^γ] − 1) / (1 + N_n + [cN_n^γ])`, the variant with one more
    /// in the denominator.
    pub lower_paper: Rational,
    /// `0` for `γ < 1`, `c/(1+c)` for `γ = 1`, `1` for `γ > 1`.
    pub limit: Rational,
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("closed-form ratio"))
}

/// Limit of the Cheeger constant at infinity in each `γ` regime.
pub fn regime_limit(params: &BranchingParams) -> Rational {
    if params.gamma < Ratio::one() {
        Rational::zero()
    } else if params.gamma == Ratio::one() {
        let c = widen(&params.c);
        c / (Rational::one() + c)
    } else {
        Rational::one()
    }
}

/// Predictions for generation `n ≤ k_max`.
pub fn gn_theory(params: &BranchingParams, n: u32) -> Result<GnTheory> {
    if n == 0 || n > params.k_max {
        return Err(Error::InvalidParameter(format!("generation {n} outside 1..={}", params.k_max)));
    }
    let sizes = generation_sizes(params)?;
    let size = sizes[n as usize - 1];
    let forward = forward_multiplicity(params, &sizes, n)?;
    let (big_n, b) = (size as i128, forward as i128);
    // the root has no parent and no siblings
    let (back, siblings) = if n == 1 { (0, 0) } else { (1, big_n - 1) };
    let upper = Rational::new(mul(big_n, b + back)?, mul(big_n, siblings + back + b)?);
    let lower = Rational::new(b - back, siblings + back + b);
    let lower_paper = Rational::new(b - back, 1 + siblings + back + b);
    Ok(GnTheory { n, size, forward, upper, lower, lower_paper, limit: regime_limit(params) })
}

fn step_theory(params: &BranchingParams, inner: u32) -> Result<StepTheory> {
    let last_interior = params.k_max - 1;
    if inner >= last_interior {
        return Err(Error::EmptyDomain("no interior generation outside the ball"));
    }
    let mut alpha_lower: Option<Rational> = None;
    for j in inner + 1..=last_interior {
        let r = gn_theory(params, j)?.lower;
        alpha_lower = Some(alpha_lower.map_or(r, |a| a.min(r)));
    }
    Ok(StepTheory {
        alpha_lower: alpha_lower.unwrap().max(Rational::zero()),
        alpha_upper: gn_theory(params, inner + 1)?.upper,
        alpha_limit: regime_limit(params),
    })
}

/// The Rayleigh quotient of the indicator of generations `k+1..=n` in the
/// `γ = 0` family, restricted outside `B_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorQuotient {
    /// `[c](N_k + N_n) / Σ_{i=k+1}^n N_i`.
    pub exact: Rational,
    /// `⟨Δ χ, χ⟩ / ⟨χ, χ⟩` evaluated on the constructed graph, when one was
    /// supplied.
    pub measured: Option<f64>,
    /// `[c]`.
    pub bracket_c: u64,
}

/// Exact quotient for `0 < k < n ≤ k_max`; with `g`, the host built from
/// `params`, also the quotient of the actual indicator (which needs
/// `n < k_max` so that the support is interior).
pub fn annulus_indicator_quotient(
    params: &BranchingParams,
    k: u32,
    n: u32,
    g: Option<&Graph>,
) -> Result<IndicatorQuotient> {
    if !params.gamma.is_zero() {
        return Err(Error::InvalidParameter("the indicator quotient is stated for gamma = 0".into()));
    }
    if k == 0 || k >= n || n > params.k_max {
        return Err(Error::InvalidParameter(format!(
            "need 0 < k < n <= {}, got k = {k}, n = {n}",
            params.k_max
        )));
    }
    let sizes = generation_sizes(params)?;
    let bracket_c = forward_multiplicity(params, &sizes, 2)?;
    let size = |i: u32| sizes[i as usize - 1] as i128;
    let numer = mul(bracket_c as i128, size(k) + size(n))?;
    let denom: i128 = (k + 1..=n).map(size).sum();
    let exact = Rational::new(numer, denom);
    let measured = match g {
        Some(g) => {
            let labels = g.generation().ok_or(Error::MissingGenerations)?;
            let phi: Vec<f64> = labels.iter().map(|&l| if l > k && l <= n { 1.0 } else { 0.0 }).collect();
            let norm: f64 = phi.iter().sum();
            Some(quadratic_form(g, &phi)? / norm)
        }
        None => None,
    };
    Ok(IndicatorQuotient { exact, measured, bracket_c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{branching_graph, tessellation_patch, TessellationParams};
    use crate::graph::GraphBuilder;
    use num_rational::Ratio;

    fn params(gamma: (u64, u64), c: (u64, u64), k_max: u32) -> BranchingParams {
        BranchingParams::new(Ratio::new(gamma.0, gamma.1), Ratio::new(c.0, c.1), k_max).unwrap()
    }

    #[test]
    fn theory_gamma_one() {
        // N = 1, 2, 6, 42, 1806; [1806] = 1807
        let t = gn_theory(&params((1, 1), (1, 1), 6), 5).unwrap();
        assert_eq!((t.size, t.forward), (1806, 1807));
        assert_eq!(t.upper, Rational::new(1808, 3613));
        assert_eq!(t.lower, Rational::new(1806, 3613));
        assert_eq!(t.lower_paper, Rational::new(1806, 3614));
        assert_eq!(t.limit, Rational::new(1, 2));
        assert_eq!(regime_limit(&params((0, 1), (2, 1), 4)), Rational::zero());
        assert_eq!(regime_limit(&params((2, 1), (1, 1), 4)), Rational::one());
    }

    #[test]
    fn indicator_quotient_formula() {
        // γ = 0, c = 2: [2] = 3 and N_i = 3^{i−1}
        let p = params((0, 1), (2, 1), 7);
        let g = branching_graph(&p).unwrap();
        let q = annulus_indicator_quotient(&p, 2, 5, Some(&g)).unwrap();
        assert_eq!(q.bracket_c, 3);
        // 3 (3 + 81) / (9 + 27 + 81)
        assert_eq!(q.exact, Rational::new(252, 117));
        assert!((q.measured.unwrap() - 252.0 / 117.0).abs() < 1e-12);
        assert!(annulus_indicator_quotient(&p, 3, 3, None).is_err());
        assert!(annulus_indicator_quotient(&params((1, 1), (1, 1), 4), 1, 2, None).is_err());
    }

    #[test]
    fn path_bound_report() {
        let mut b = GraphBuilder::new(3);
        b.add_edge(0, 1).add_edge(1, 2);
        let g = b.build().unwrap();
        let record = sweep_step(&g, Step { inner: 0, outer: 2 }, &SweepOptions::default()).unwrap();
        assert!((record.inf_delta() - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((record.inf_hat() - (1.0 - core::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-12);
        assert_eq!((record.m_k, record.big_m_k), (1, 2));
        let verdicts = bound_report(&record);
        assert!(verdicts.iter().all(|v| v.holds), "{verdicts:?}");
    }

    #[test]
    fn branching_sweep_matches_theory() {
        let p = params((1, 2), (1, 1), 7);
        let g = branching_graph(&p).unwrap();
        assert_eq!(default_outer_radius(&g).unwrap(), 6);
        let options = SweepOptions { theory: Some(p.clone()), ..Default::default() };
        let result = sweep(&g, &inner_schedule(1..=4, 6), &options).unwrap();
        for s in &result.steps {
            let t = s.theory.as_ref().unwrap();
            assert_eq!(s.alpha_dka, Some(t.alpha_lower));
            assert!(s.alpha_witness.unwrap() <= t.alpha_upper);
            assert!(bound_report(s).iter().all(|v| v.holds));
            assert!(!s.outer_truncated);
        }
        let inf: Vec<f64> = result.steps.iter().map(|s| s.inf_delta()).collect();
        assert!(inf.windows(2).all(|w| w[1] > w[0]), "{inf:?}");
    }

    #[test]
    fn tessellation_sweep() {
        let g = tessellation_patch(&TessellationParams::new(3, 7, 4).unwrap()).unwrap();
        let outer = default_outer_radius(&g).unwrap();
        let result = sweep(&g, &inner_schedule(0..=1, outer), &SweepOptions::default()).unwrap();
        for s in &result.steps {
            assert_eq!(s.alpha_tess, Some(Rational::new(1, 7)));
            assert_eq!(s.kappa, Some(Rational::new(-1, 6)));
            assert!(s.inf_hat() >= 1.0 - (1.0 - 1.0 / 49.0f64).sqrt() - 1e-12);
            assert!(bound_report(s).iter().all(|v| v.holds));
        }
    }
}
