use bmie_core::measures::{
    bcp, bcp_d2nu, bcp_dnu, bel, btr, c_m, equispaced, global_measures, log_bfwcr, sidak_nu, CM_SATURATION,
};
use bmie_core::stats::norm_cdf;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monotone_in_threshold(nu in 0.3f64..4.5, sigma in 0.05f64..10.0, tau in 0.2f64..6.0) {
        let sigmas = [sigma, 0.5 * sigma + 0.1];
        let (mut last_bel, mut last_bcp, mut last_btr) = (0.0, 0.0, f64::INFINITY);
        for i in 0..100 {
            let c = i as f64 * 0.1;
            let (l, p, t) = (bel(nu, c, sigma, tau), bcp(nu, c, sigma, tau), btr(c, &sigmas, tau).unwrap());
            prop_assert!(l >= last_bel - 1e-12, "bel fell at C={}", c);
            prop_assert!(p >= last_bcp - 1e-12, "bcp fell at C={}", c);
            prop_assert!(t <= last_btr + 1e-15, "btr rose at C={}", c);
            prop_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&t));
            last_bel = l;
            last_bcp = p;
            last_btr = t;
        }
    }

    #[test]
    fn saturated_limits(nu in 0.3f64..4.5, tau in 0.5f64..5.0, ratio in 0.001f64..0.75) {
        let sigma = ratio * tau;
        let c = 10.0;
        prop_assume!(c_m(c, sigma, tau) >= CM_SATURATION);
        let full = 2.0 * nu * sigma;
        prop_assert!((bel(nu, c, sigma, tau) - full).abs() <= 1e-6 * full);
        prop_assert!((bcp(nu, c, sigma, tau) - (2.0 * norm_cdf(nu) - 1.0)).abs() <= 1e-6);
    }

    #[test]
    fn derivatives_match_finite_differences(nu in 0.3f64..4.5, c in 0.0f64..6.0, sigma in 0.05f64..10.0, tau in 0.2f64..6.0) {
        let h = 1e-4;
        let fd1 = (bcp(nu + h, c, sigma, tau) - bcp(nu - h, c, sigma, tau)) / (2.0 * h);
        prop_assert!((bcp_dnu(nu, c, sigma, tau) - fd1).abs() <= 1e-6);
        let fd2 = (bcp_dnu(nu + h, c, sigma, tau) - bcp_dnu(nu - h, c, sigma, tau)) / (2.0 * h);
        prop_assert!((bcp_d2nu(nu, c, sigma, tau) - fd2).abs() <= 1e-6);
    }

    #[test]
    fn log_space_product_matches_direct(m in 1usize..50, c in 0.0f64..6.0, tau in 0.2f64..6.0, seed in 0u64..1000) {
        let sigmas: Vec<f64> = (0..m).map(|i| 0.05 + ((i as u64 * 7919 + seed) % 1000) as f64 / 100.0).collect();
        let nus: Vec<f64> = (0..m).map(|i| 1.5 + ((i as u64 * 104_729 + seed) % 300) as f64 / 100.0).collect();
        let direct: f64 = nus.iter().zip(&sigmas).map(|(&nu, &s)| bcp(nu, c, s, tau)).product();
        let logged = log_bfwcr(&nus, c, &sigmas, tau).exp();
        prop_assert!((direct - logged).abs() <= 1e-12);
    }

    #[test]
    fn half_length_at_zero_threshold(m in 1usize..200, tau in 0.2f64..6.0) {
        let sigmas = equispaced(0.01, 10.0, m);
        let nus = vec![sidak_nu(0.1, m).unwrap(); m];
        let g = global_measures(&nus, 0.0, &sigmas, tau, 0.1).unwrap();
        prop_assert!((g.brel - 0.5).abs() <= 1e-12);
        prop_assert!((g.btr - 1.0).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&g.bfwcr));
    }
}

#[test]
fn brel_is_continuous_in_threshold() {
    let sigmas = equispaced(0.01, 10.0, 200);
    let nus = vec![sidak_nu(0.1, 200).unwrap(); 200];
    let mut prev = global_measures(&nus, 0.0, &sigmas, 2.0, 0.1).unwrap().brel;
    for i in 1..=600 {
        let brel = global_measures(&nus, i as f64 * 0.01, &sigmas, 2.0, 0.1).unwrap().brel;
        assert!((brel - prev).abs() < 5e-3, "jump at C={}", i as f64 * 0.01);
        prev = brel;
    }
    let inf = global_measures(&nus, f64::INFINITY, &sigmas, 2.0, 0.1).unwrap();
    assert!((inf.brel - 1.0).abs() < 1e-12);
    assert!((inf.bfwcr - 0.9).abs() < 1e-9);
}
