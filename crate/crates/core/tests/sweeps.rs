//! Annulus sweeps, closed-form predictions and the step-wise bound report.

mod support;

use num_rational::Ratio;
use spectre_core::graph::shell;
use spectre_core::isoperimetry::cheeger_lower_dka;
use spectre_core::math::to_f64;
use spectre_core::sweep::{
    annulus_indicator_quotient, bound_report, default_outer_radius, gn_theory, inner_schedule, sweep, Step,
    SweepOptions,
};
use spectre_core::{branching_graph, tessellation_patch, BranchingParams, Rational, TessellationParams};

fn params(gamma: (u64, u64), c: (u64, u64), k_max: u32) -> BranchingParams {
    BranchingParams::new(Ratio::new(gamma.0, gamma.1), Ratio::new(c.0, c.1), k_max).unwrap()
}

fn theory_options(p: &BranchingParams) -> SweepOptions {
    SweepOptions { theory: Some(p.clone()), ..Default::default() }
}

#[test]
fn constant_branching_stays_below_bracket() {
    let p = params((0, 1), (2, 1), 11);
    let g = branching_graph(&p).unwrap();
    let result = sweep(&g, &inner_schedule(2..=4, 10), &theory_options(&p)).unwrap();
    for s in &result.steps {
        // [2] = 3
        assert!(s.inf_delta() <= 3.0, "k={} inf={}", s.inner, s.inf_delta());
        assert!(bound_report(s).iter().all(|v| v.holds));
    }
}

#[test]
fn half_power_branching_grows() {
    let p = params((1, 2), (1, 1), 8);
    let g = branching_graph(&p).unwrap();
    let result = sweep(&g, &inner_schedule(2..=5, 7), &theory_options(&p)).unwrap();
    let inf: Vec<f64> = result.steps.iter().map(|s| s.inf_delta()).collect();
    assert!(inf.windows(2).all(|w| w[1] > w[0]), "{inf:?}");
    for (s, k) in result.steps.iter().zip(2..) {
        let oracle = support::generation_quotient_bottom(&p, k, 7);
        assert!((s.inf_delta() - oracle).abs() <= 1e-8 * oracle, "{} {oracle}", s.inf_delta());
    }
    assert_eq!(result.schedule(), inner_schedule(2..=5, 7));
}

#[test]
fn heptagonal_patch_hat_bottom() {
    let g = tessellation_patch(&TessellationParams::new(3, 7, 6).unwrap()).unwrap();
    let outer = default_outer_radius(&g).unwrap();
    let result = sweep(&g, &inner_schedule(0..=2, outer), &SweepOptions::default()).unwrap();
    let edge = 1.0 - (1.0 - 1.0 / 49.0f64).sqrt();
    assert!((edge - 0.010257).abs() < 1e-6);
    for s in &result.steps {
        assert!(s.inf_hat() >= edge, "{}", s.inf_hat());
        assert_eq!(s.alpha_tess, Some(Rational::new(1, 7)));
        let w = s.alpha_witness.unwrap();
        assert!(w >= Rational::new(1, 7), "witness {w} below the certified bound");
        assert!(bound_report(s).iter().all(|v| v.holds));
    }
}

#[test]
fn degree_statistics_are_monotone() {
    for p in [params((1, 2), (1, 1), 7), params((1, 1), (1, 1), 5), params((0, 1), (2, 1), 8)] {
        let g = branching_graph(&p).unwrap();
        let result = sweep(&g, &inner_schedule(1..=p.k_max - 2, p.k_max - 1), &theory_options(&p)).unwrap();
        for w in result.steps.windows(2) {
            assert!(w[1].m_k >= w[0].m_k);
            assert!(w[1].big_m_k <= w[0].big_m_k);
            assert!(w[1].inf_delta() >= w[0].inf_delta() - 1e-10);
        }
        for s in &result.steps {
            let t = s.theory.as_ref().unwrap();
            assert_eq!(s.alpha_dka, Some(t.alpha_lower));
            let alpha = to_f64(&s.alpha_lower().unwrap());
            let bound = s.m_k as f64 * (1.0 - (1.0 - alpha * alpha).sqrt());
            assert!(bound <= s.inf_delta() + 1e-9 * s.inf_delta().max(1.0));
        }
    }
}

#[test]
fn generation_ratios_match_the_graph() {
    for p in [params((1, 1), (1, 1), 5), params((1, 2), (1, 1), 7), params((2, 1), (1, 1), 4), params((1, 1), (3, 2), 5)] {
        let g = branching_graph(&p).unwrap();
        for n in 2..p.k_max {
            let theory = gn_theory(&p, n).unwrap();
            // the witness S_n realises the upper formula exactly
            assert_eq!(shell(&g, n).unwrap().cheeger_ratio(), Some(theory.upper));
            // outside B_{n−1} the smallest shell-degree ratio sits in generation n
            if n + 1 == p.k_max {
                assert_eq!(cheeger_lower_dka(&g, n - 1).unwrap().value, theory.lower.max(Rational::from_integer(0)));
            }
            assert!(theory.lower_paper < theory.lower || theory.lower <= Rational::from_integer(0));
        }
    }
}

#[test]
fn closed_form_limits() {
    let p = params((0, 1), (2, 1), 30);
    let uppers: Vec<f64> = (2..=30).map(|n| to_f64(&gn_theory(&p, n).unwrap().upper)).collect();
    assert!(uppers.windows(2).all(|w| w[1] < w[0]));
    assert!(uppers.last().unwrap() < &1e-12);
    let t = gn_theory(&params((2, 1), (1, 1), 4), 4).unwrap();
    assert!(to_f64(&t.lower) > 0.998);
    assert_eq!(t.limit, Rational::from_integer(1));
}

#[test]
fn indicator_quotient_against_graph() {
    let p = params((0, 1), (2, 1), 9);
    let g = branching_graph(&p).unwrap();
    for k in 2..8 {
        for n in k + 1..=8 {
            let q = annulus_indicator_quotient(&p, k, n, Some(&g)).unwrap();
            let exact = to_f64(&q.exact);
            assert!((q.measured.unwrap() - exact).abs() <= 1e-12 * exact);
            // two or more generations keep the quotient at or below [c]
            if n >= k + 2 {
                assert!(q.exact <= Rational::from_integer(q.bracket_c as i128));
            }
        }
    }
}

#[test]
fn outer_radius_monotonicity() {
    let p = params((1, 2), (1, 1), 8);
    let g = branching_graph(&p).unwrap();
    let schedule: Vec<Step> = (3..=7).map(|r| Step { inner: 2, outer: r }).collect();
    let result = sweep(&g, &schedule, &SweepOptions::default()).unwrap();
    for w in result.steps.windows(2) {
        assert!(w[1].inf_delta() <= w[0].inf_delta() + 1e-10);
        assert!(w[1].outer > w[0].outer);
    }
    assert!(result.steps[0].outer_truncated && !result.steps[4].outer_truncated);
}

#[test]
fn rejects_bad_steps() {
    let p = params((1, 1), (1, 1), 4);
    let g = branching_graph(&p).unwrap();
    // the last generation is not interior
    assert!(sweep(&g, &[Step { inner: 1, outer: 4 }], &SweepOptions::default()).is_err());
    assert!(sweep(&g, &[Step { inner: 3, outer: 3 }], &SweepOptions::default()).is_err());
}
