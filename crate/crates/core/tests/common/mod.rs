//! Shared test utilities: an exact joint-probability oracle for the
//! zero-decoherence model, computed by brute-force 1-D quadrature over the
//! hidden phase, plus multinomial tolerance helpers.
//!
//! The oracle deliberately re-derives the physics from scratch — inline
//! cosine arithmetic on a fine grid, no calls into the library's
//! measurement path — so it can vouch for the engine independently.

use std::f64::consts::{FRAC_PI_2, PI};

/// Joint outcome probabilities `[pp, pm, mp, mm, discarded]` at analyzer
/// angles `(alpha, beta)` with shared dead-band half-width `threshold`,
/// no decoherence. Midpoint rule over the hidden phase on `[0, π)`.
pub fn joint_probabilities(alpha: f64, beta: f64, threshold: f64) -> [f64; 5] {
    const STEPS: usize = 2_000_000;
    let mut tallies = [0u64; 5];
    for k in 0..STEPS {
        let psi = (k as f64 + 0.5) * PI / STEPS as f64;
        // photon 1 carries the perpendicular plane
        let c1 = (psi + FRAC_PI_2 - alpha).cos().powi(2);
        let c2 = (psi - beta).cos().powi(2);
        let o1 = classify(c1, threshold);
        let o2 = classify(c2, threshold);
        let slot = match (o1, o2) {
            (1, 1) => 0,
            (1, -1) => 1,
            (-1, 1) => 2,
            (-1, -1) => 3,
            _ => 4,
        };
        tallies[slot] += 1;
    }
    tallies.map(|t| t as f64 / STEPS as f64)
}

fn classify(intensity: f64, threshold: f64) -> i8 {
    if intensity >= 0.5 + threshold {
        1
    } else if intensity <= 0.5 - threshold {
        -1
    } else {
        0
    }
}

/// Checks one category count against its expected probability at the given
/// sigma level; expectation zero demands an exact zero count.
pub fn within_binomial(count: u64, n: u64, p: f64, sigmas: f64) -> bool {
    if p <= 1e-9 {
        return count == 0;
    }
    let mean = n as f64 * p;
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    (count as f64 - mean).abs() <= sigmas * sigma
}

/// All five multinomial categories at once.
pub fn within_multinomial(counts: [u64; 5], n: u64, probs: [f64; 5], sigmas: f64) -> bool {
    counts
        .iter()
        .zip(probs.iter())
        .all(|(&c, &p)| within_binomial(c, n, p, sigmas))
}
