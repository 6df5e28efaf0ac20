//! Special functions against independent series and continued-fraction oracles.

use bmie_core::stats::{integrate_dphi, norm_cdf, norm_quantile, t_quantile, QuadratureRule};
use proptest::prelude::*;

/// erf(x) = 2/√π · e^{−x²} · Σ 2ⁿ x^{2n+1} / (1·3·…·(2n+1)); every term is positive.
fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term.abs() > 1e-18 * sum.abs() {
        n += 1.0;
        term *= 2.0 * x * x / (2.0 * n + 1.0);
        sum += term;
    }
    2.0 / std::f64::consts::PI.sqrt() * (-x * x).exp() * sum
}

/// Upper tail Φ(−x) for x > 0 from the Laplace continued fraction of the Mills ratio.
fn upper_tail_cf(x: f64) -> f64 {
    let mut f = x;
    for k in (1..=400).rev() {
        f = x + k as f64 / f;
    }
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt() / f
}

fn phi_oracle(x: f64) -> f64 {
    if x < -2.0 {
        upper_tail_cf(-x)
    } else if x > 2.0 {
        1.0 - upper_tail_cf(x)
    } else {
        0.5 * (1.0 + erf_series(x / std::f64::consts::SQRT_2))
    }
}

#[test]
fn cdf_matches_series_on_a_grid() {
    for i in 0..=2400 {
        let x = -12.0 + i as f64 * 0.01;
        let (got, want) = (norm_cdf(x), phi_oracle(x));
        let err = (got - want).abs() / want.max(1e-300);
        assert!(err < 1e-13, "x={x}: {got} vs {want} (rel {err:e})");
    }
}

#[test]
fn quantile_inverts_cdf_on_a_dense_grid() {
    for i in 1..10_000 {
        let p = i as f64 / 10_000.0;
        let x = norm_quantile(p).unwrap();
        assert!((norm_cdf(x) - p).abs() <= 1e-12, "p={p}");
    }
    for p in [1e-300, 1e-100, 1e-20, 1e-10] {
        let x = norm_quantile(p).unwrap();
        assert!(((norm_cdf(x) - p) / p).abs() < 1e-10, "p={p}");
    }
}

#[test]
fn quantile_rejects_out_of_range() {
    for p in [0.0, 1.0, -0.1, 1.1, f64::NAN] {
        assert!(norm_quantile(p).is_err(), "p={p}");
    }
}

#[test]
fn t_quantile_approaches_normal() {
    for p in [0.6, 0.9, 0.975, 0.999, 0.999_995] {
        let t = t_quantile(p, 1e6).unwrap();
        let z = norm_quantile(p).unwrap();
        assert!((t - z).abs() < 1e-3, "p={p}: {t} vs {z}");
    }
}

#[test]
fn t_quantile_known_values() {
    // df 1: tan(π(p − ½)); df 2: a·√(2/(1 − a²)) with a = 2p − 1
    let want1 = (0.475 * std::f64::consts::PI).tan();
    assert!((t_quantile(0.975, 1.0).unwrap() - want1).abs() < 1e-9);
    let a: f64 = 2.0 * 0.975 - 1.0;
    let want2 = a * (2.0 / (1.0 - a * a)).sqrt();
    assert!((t_quantile(0.975, 2.0).unwrap() - want2).abs() < 1e-9);
}

#[test]
fn quadrature_integrates_normal_moments() {
    let rule = QuadratureRule::standard();
    let mass = integrate_dphi(|_| 1.0, f64::INFINITY, rule).unwrap();
    assert!((mass - 1.0).abs() < 1e-12);
    let var = integrate_dphi(|y| y * y, f64::INFINITY, rule).unwrap();
    assert!((var - 1.0).abs() < 1e-10);
    let half = integrate_dphi(|_| 1.0, 0.0, rule).unwrap();
    assert!((half - 0.5).abs() < 1e-12);
    // E[Φ(Y)] = 1/2 for Y standard normal
    let e = integrate_dphi(norm_cdf, f64::INFINITY, rule).unwrap();
    assert!((e - 0.5).abs() < 1e-12);
}

proptest! {
    #[test]
    fn quadrature_of_bounded_integrand_stays_in_range(a in -3.0f64..3.0, b in 0.1f64..4.0, lo in -1.0f64..0.0, hi in 0.0f64..1.0) {
        let f = |y: f64| lo + (hi - lo) * norm_cdf(a + b * y);
        let v = integrate_dphi(f, f64::INFINITY, QuadratureRule::standard()).unwrap();
        prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
    }

    #[test]
    fn cdf_symmetry(x in -30.0f64..30.0) {
        let s = norm_cdf(x) + norm_cdf(-x);
        prop_assert!((s - 1.0).abs() < 1e-15);
    }
}
