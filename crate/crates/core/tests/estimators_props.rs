use bmie_core::estimators::{bie_thres, credible_interval, normal_scores, z_interval, RankScope};
use bmie_core::measures::Prior;
use proptest::prelude::*;

proptest! {
    #[test]
    fn interval_shape(x in -20.0f64..20.0, sigma in 0.01f64..10.0, nu in 0.1f64..5.0, c in 0.0f64..8.0,
                      eta in -5.0f64..5.0, tau in 0.1f64..5.0) {
        let prior = Prior::new(eta, tau).unwrap();
        let iv = bie_thres(x, sigma, nu, c, &prior);
        prop_assert!(iv.lower <= iv.upper);
        prop_assert!(!(iv.thresholded_left && iv.thresholded_right));
        if iv.thresholded_left { prop_assert_eq!(iv.lower, x); }
        if iv.thresholded_right { prop_assert_eq!(iv.upper, x); }
        let inside = eta - c * tau < x && x < eta + c * tau;
        let want = nu * sigma * (1.0 + f64::from(u8::from(inside)));
        prop_assert!((iv.length() - want).abs() <= 1e-12 * want.max(1.0));
    }

    #[test]
    fn shift_equivariance(x in -20.0f64..20.0, sigma in 0.01f64..10.0, nu in 0.1f64..5.0, c in 0.0f64..8.0,
                          eta in -5.0f64..5.0, tau in 0.1f64..5.0, shift in -10.0f64..10.0) {
        let a = bie_thres(x, sigma, nu, c, &Prior::new(eta, tau).unwrap());
        let b = bie_thres(x + shift, sigma, nu, c, &Prior::new(eta + shift, tau).unwrap());
        prop_assert!((b.lower - a.lower - shift).abs() <= 1e-9);
        prop_assert!((b.upper - a.upper - shift).abs() <= 1e-9);
        prop_assert_eq!(a.is_one_sided(), b.is_one_sided());

        let ca = credible_interval(x, sigma, &Prior::new(eta, tau).unwrap(), nu);
        let cb = credible_interval(x + shift, sigma, &Prior::new(eta + shift, tau).unwrap(), nu);
        prop_assert!((cb.lower - ca.lower - shift).abs() <= 1e-9);
    }

    #[test]
    fn infinite_threshold_is_z_interval(x in -20.0f64..20.0, sigma in 0.01f64..10.0, nu in 0.1f64..5.0,
                                        eta in -5.0f64..5.0, tau in 0.1f64..5.0) {
        let prior = Prior::new(eta, tau).unwrap();
        prop_assert_eq!(bie_thres(x, sigma, nu, f64::INFINITY, &prior), z_interval(x, sigma, nu));
    }

    #[test]
    fn scores_invariant_under_increasing_maps(rows in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 5), 1..8),
                                              row_scope in any::<bool>()) {
        let scope = if row_scope { RankScope::Row } else { RankScope::Matrix };
        let mapped: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v.exp() * 3.0 + v.powi(3)).collect()).collect();
        let a = normal_scores(&rows, scope).unwrap();
        let b = normal_scores(&mapped, scope).unwrap();
        prop_assert_eq!(a, b);
    }
}
