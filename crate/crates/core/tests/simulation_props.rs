use bmie_core::estimators::MieFamily;
use bmie_core::{run_simulation, SimConfig, TrueDist};

fn small(seed: u64, n_rep: usize) -> SimConfig {
    SimConfig {
        m: 100,
        n_rep,
        prior_grid: vec![(0.0, 2.0), (4.0, 1.0)],
        families: vec![MieFamily::G0, MieFamily::G3, MieFamily::G4],
        seed,
        ..SimConfig::default()
    }
}

#[test]
fn identical_config_gives_identical_cells() {
    let cfg = small(5, 40);
    assert_eq!(run_simulation(&cfg).unwrap(), run_simulation(&cfg).unwrap());
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cfg = small(9, 30);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| run_simulation(&cfg).unwrap());
    let b = four.install(|| run_simulation(&cfg).unwrap());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn z_family_interval_coverage_matches_sidak_level() {
    let cfg = SimConfig { families: vec![MieFamily::G0], prior_grid: vec![(0.0, 1.0)], ..small(3, 400) };
    let out = run_simulation(&cfg).unwrap();
    let cell = &out.cells[0];
    let want = 0.9_f64.powf(1.0 / 100.0);
    assert!((cell.interval_coverage - want).abs() < 4.0 * cell.interval_coverage_se.max(1e-4));
}

#[test]
fn standard_errors_shrink_with_replications() {
    for dist in [TrueDist::Normal, TrueDist::Exponential] {
        let base = SimConfig { families: vec![MieFamily::G4], true_dist: dist, ..small(11, 100) };
        let a = run_simulation(&base).unwrap();
        let b = run_simulation(&SimConfig { n_rep: 400, ..base.clone() }).unwrap();
        for (x, y) in a.cells.iter().zip(&b.cells) {
            let ratio = x.content_se / y.content_se;
            assert!((1.5..2.7).contains(&ratio), "{dist}: se ratio {ratio}");
        }
    }
}

#[test]
fn proportions_and_content_are_in_range() {
    let out = run_simulation(&small(21, 20)).unwrap();
    assert!(out.failures.is_empty());
    for c in &out.cells {
        assert!((0.0..=1.0).contains(&c.familywise_coverage));
        assert!((0.0..=1.0).contains(&c.interval_coverage));
        assert!(c.content > 0.0);
        assert_eq!(c.replications, 20);
    }
}
