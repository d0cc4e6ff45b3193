//! Spectral inequalities on Dirichlet restrictions: the Cheeger sandwich,
//! the transition-operator norm bounds and the shell inequality of the
//! branching family.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{full_spectrum, summarize, SpectralOptions};
use crate::graph::{deg_pm_with, Graph};
use crate::isoperimetry::cheeger_exact;
use crate::math::{abs, sqrt, to_f64, Rational};
use crate::operators::{assemble, quadratic_form, LaplacianMatrix, Variant};
use crate::{Error, Result};

/// Absolute slack allowed for floating-point comparisons in the checks.
pub const CHECK_TOLERANCE: f64 = 1e-9;

/// Largest domain on which [`transition_norm_checks`] computes the exact
/// Cheeger constant.
pub const EXACT_DOMAIN_LIMIT: usize = 24;

/// Spectrum of `Δ̂_K` (or `Δ̃_K`) against `[1 − √(1−α²), 1 + √(1−α²)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichCheck {
    pub holds: bool,
    pub alpha: Rational,
    pub lower_edge: f64,
    pub upper_edge: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `λ_min − lower_edge`; nonnegative when the lower side holds.
    pub margin_low: f64,
    /// `upper_edge − λ_max`; nonnegative when the upper side holds.
    pub margin_high: f64,
}

fn check_alpha(alpha: &Rational) -> Result<f64> {
    if *alpha < Rational::from_integer(0) || *alpha > Rational::from_integer(1) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} lies outside [0, 1]")));
    }
    Ok(to_f64(alpha))
}

/// Checks the Cheeger sandwich for a certified lower bound `alpha` of the
/// Cheeger constant of the restriction's exterior.
pub fn sandwich_check(m: &LaplacianMatrix, alpha: Rational, options: &SpectralOptions) -> Result<SandwichCheck> {
    if m.variant() == Variant::Delta {
        return Err(Error::InvalidParameter("the sandwich applies to delta_hat or delta_tilde".into()));
    }
    let a = check_alpha(&alpha)?;
    let s = summarize(m, options)?;
    let width = sqrt((1.0 - a * a).max(0.0));
    let (lower_edge, upper_edge) = (1.0 - width, 1.0 + width);
    let margin_low = s.lambda_min - lower_edge;
    let margin_high = upper_edge - s.lambda_max;
    Ok(SandwichCheck {
        holds: margin_low >= -CHECK_TOLERANCE && margin_high >= -CHECK_TOLERANCE,
        alpha,
        lower_edge,
        upper_edge,
        lambda_min: s.lambda_min,
        lambda_max: s.lambda_max,
        margin_low,
        margin_high,
    })
}

/// `1 − α_K ≤ ‖Â_K‖ ≤ √(1 − α_K²)` with the exact `α_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionNormReport {
    pub holds: bool,
    pub alpha: Rational,
    /// `max |eigenvalue of Â_K|`.
    pub norm: f64,
    pub lower: f64,
    pub upper: f64,
    pub witness: Vec<usize>,
}

/// Computes `α_K` exactly by enumeration and compares it with the norm of
/// the restricted transition operator.
pub fn transition_norm_checks(g: &Graph, k: &[usize]) -> Result<TransitionNormReport> {
    let hat = assemble(g, Variant::DeltaHat, k)?;
    let n = hat.dimension();
    if n > EXACT_DOMAIN_LIMIT || !g.is_complete_host() {
        return Err(Error::TooLarge(n as u64));
    }
    let estimate = cheeger_exact(g, k, n)?;
    let alpha = estimate.lower.ok_or(Error::TooLarge(n as u64))?;
    let a = check_alpha(&alpha)?;
    let spectrum = full_spectrum(&hat)?;
    // Â_K = I − Δ̂_K
    let norm = spectrum.iter().map(|l| abs(1.0 - l)).fold(0.0, f64::max);
    let lower = 1.0 - a;
    let upper = sqrt((1.0 - a * a).max(0.0));
    Ok(TransitionNormReport {
        holds: norm >= lower - CHECK_TOLERANCE && norm <= upper + CHECK_TOLERANCE,
        alpha,
        norm,
        lower,
        upper,
        witness: estimate.witness.members().to_vec(),
    })
}

/// `⟨Δ_{B_{k−1}}φ, φ⟩ ≥ Σ_{i=k}^{m} (√b_i‖φ^{(i)}‖ − ‖φ^{(i+1)}‖)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellCheck {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`.
    pub margin: f64,
    /// `‖φ^{(i)}‖` for shells `k..=m`.
    pub shell_norms: Vec<f64>,
}

/// Shell inequality for `φ` (indexed by host vertex) supported in shells
/// `k, k+1, …` of a branching graph. The forward multiplicities `b_i` are
/// read off the graph and must be constant on each shell.
pub fn shell_inequality_check(g: &Graph, k: u32, phi: &[f64]) -> Result<ShellCheck> {
    let labels = g.generation().ok_or(Error::MissingGenerations)?;
    let n = g.vertex_count();
    if phi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: phi.len() });
    }
    if k == 0 {
        return Err(Error::InvalidParameter("shells are numbered from 1".into()));
    }
    let support: Vec<usize> = (0..n).filter(|&v| phi[v] != 0.0).collect();
    if let Some(&v) = support.iter().find(|&&v| labels[v] < k) {
        return Err(Error::InvalidParameter(format!(
            "phi is nonzero at vertex {v} in shell {} < {k}",
            labels[v]
        )));
    }
    if let Some(&v) = support.iter().find(|&&v| !g.is_interior(v)) {
        return Err(Error::NotInterior(v));
    }
    let top = support.iter().map(|&v| labels[v]).max().unwrap_or(k);
    let shells = (top - k + 1) as usize;
    let mut sq = vec![0.0; shells + 1];
    let mut forward: Vec<Option<usize>> = vec![None; shells];
    for v in 0..n {
        let l = labels[v];
        if l < k || l > top {
            continue;
        }
        let i = (l - k) as usize;
        sq[i] += phi[v] * phi[v];
        let (_, b) = deg_pm_with(g, labels, v);
        match forward[i] {
            None => forward[i] = Some(b),
            Some(prev) if prev != b => {
                return Err(Error::InvalidParameter(format!(
                    "shell {l} has varying forward degrees {prev} and {b}"
                )))
            }
            _ => {}
        }
    }
    let shell_norms: Vec<f64> = sq.iter().map(|s| sqrt(*s)).collect();
    let mut rhs = 0.0;
    for i in 0..shells {
        let b = forward[i].unwrap_or(0) as f64;
        let term = sqrt(b) * shell_norms[i] - shell_norms[i + 1];
        rhs += term * term;
    }
    let lhs = quadratic_form(g, phi)?;
    let margin = lhs - rhs;
    Ok(ShellCheck {
        holds: margin >= -1e-10 * abs(rhs).max(1.0),
        lhs,
        rhs,
        margin,
        shell_norms: shell_norms[..shells].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{branching_graph, BranchingParams};
    use crate::graph::GraphBuilder;
    use num_rational::Ratio;

    fn path3() -> Graph {
        let mut b = GraphBuilder::new(3);
        b.add_edge(0, 1).add_edge(1, 2);
        b.build().unwrap()
    }

    #[test]
    fn path_sandwich_and_norm() {
        let g = path3();
        let hat = assemble(&g, Variant::DeltaHat, &[0]).unwrap();
        let c = sandwich_check(&hat, Rational::new(1, 3), &SpectralOptions::default()).unwrap();
        assert!(c.holds);
        assert!((c.lower_edge - (1.0 - 8f64.sqrt() / 3.0)).abs() < 1e-15);
        let r = transition_norm_checks(&g, &[0]).unwrap();
        assert_eq!(r.alpha, Rational::new(1, 3));
        assert!((r.norm - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert!(r.holds);
        assert!(sandwich_check(&hat, Rational::new(4, 3), &SpectralOptions::default()).is_err());
        let delta = assemble(&g, Variant::Delta, &[0]).unwrap();
        assert!(sandwich_check(&delta, Rational::new(1, 3), &SpectralOptions::default()).is_err());
    }

    #[test]
    fn isolated_exterior_vertex_is_tight() {
        // star: the centre alone outside K = leaves
        let mut b = GraphBuilder::new(4);
        b.add_edge(0, 1).add_edge(0, 2).add_edge(0, 3);
        let g = b.build().unwrap();
        let r = transition_norm_checks(&g, &[1, 2, 3]).unwrap();
        assert_eq!(r.alpha, Rational::from_integer(1));
        assert_eq!((r.norm, r.lower, r.upper), (0.0, 0.0, 0.0));
        assert!(r.holds);
    }

    #[test]
    fn shell_indicator() {
        let p = BranchingParams::new(Ratio::new(1, 2), Ratio::new(1, 1), 6).unwrap();
        let g = branching_graph(&p).unwrap();
        let labels = g.generation().unwrap();
        let phi: Vec<f64> = labels.iter().map(|&l| if l == 3 { 1.0 } else { 0.0 }).collect();
        let c = shell_inequality_check(&g, 3, &phi).unwrap();
        // S_3 has 4 vertices with b_3 = [√4] = 3: the form counts 12 forward
        // and 4 back edges, the bound keeps the forward ones
        assert!(c.holds);
        assert!((c.rhs - 12.0).abs() < 1e-12);
        assert!((c.lhs - 16.0).abs() < 1e-12);
        let bad: Vec<f64> = labels.iter().map(|&l| if l == 2 { 1.0 } else { 0.0 }).collect();
        assert!(shell_inequality_check(&g, 3, &bad).is_err());
    }
}
