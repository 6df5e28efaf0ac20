#![allow(dead_code)]

use bmie_core::estimators::bie_thres;
use bmie_core::measures::Prior;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

/// Monte-Carlo (coverage, coverage se, mean length, length se) of one
/// thresholded interval under μ ~ N(0, τ²), X̄ | μ ~ N(μ, σ²).
pub fn mc_coverage_length(nu: f64, c: f64, sigma: f64, tau: f64, draws: usize, seed: u64) -> [f64; 4] {
    let prior = Prior::new(0.0, tau).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (mut hits, mut len, mut len_sq) = (0usize, 0.0, 0.0);
    for _ in 0..draws {
        let mu = tau * rng.sample::<f64, _>(StandardNormal);
        let x = mu + sigma * rng.sample::<f64, _>(StandardNormal);
        let iv = bie_thres(x, sigma, nu, c, &prior);
        hits += usize::from(iv.covers(mu));
        let l = iv.length();
        len += l;
        len_sq += l * l;
    }
    let n = draws as f64;
    let p = hits as f64 / n;
    let mean = len / n;
    let var = (len_sq / n - mean * mean).max(0.0);
    [p, (p * (1.0 - p) / n).sqrt(), mean, (var / n).sqrt()]
}

/// Random (ν, C, σ, τ) tuples covering the regimes the optimizer visits.
pub fn random_tuples(count: usize, seed: u64) -> Vec<(f64, f64, f64, f64)> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.gen_range(0.5..4.5), rng.gen_range(0.0..6.0), rng.gen_range(0.05..10.0), rng.gen_range(0.5..5.0)))
        .collect()
}
