//! Per-trial random streams and complex Gaussian draws.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// Generator used for every trial.
pub type TrialRng = ChaCha12Rng;

/// Independent stream for `trial` under `master_seed`.
///
/// ChaCha's 64-bit stream id carries the trial index, so streams for
/// distinct trials are disjoint keystreams rather than offsets into one
/// sequence and the draw sequence of a trial never depends on scheduling.
pub fn trial_rng(master_seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Standard complex Gaussian: real and imaginary parts independent
/// `N(0, 1/2)`, so `E|a|^2 = 1` and `E[a a] = 0`.
pub fn sample_std_complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn golden_first_draw() {
        let mut rng = trial_rng(42, 0);
        let a = sample_std_complex_gaussian(&mut rng);
        // regression pin, recorded from this implementation
        assert_eq!((a.re, a.im), GOLDEN_42);
    }

    const GOLDEN_42: (f64, f64) = (0.04909295187741031, 0.09400144754025062);

    #[test]
    fn moments_of_a_million_draws() {
        let mut rng = trial_rng(7, 3);
        let n = 1_000_000;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut sum_abs2 = 0.0;
        let mut sum_sq = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            let a = sample_std_complex_gaussian(&mut rng);
            sum += a;
            sum_abs2 += a.norm_sqr();
            sum_sq += a * a;
        }
        let nf = n as f64;
        assert!((sum / nf).norm() < 4e-3);
        assert!((sum_abs2 / nf - 1.0).abs() < 4e-3);
        assert!((sum_sq / nf).norm() < 4e-3 * 2.0);
    }

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let mut a = trial_rng(1, 0);
        let mut b = trial_rng(1, 1);
        let mut a2 = trial_rng(1, 0);
        let xa: Vec<u64> = (0..64).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..64).map(|_| b.next_u64()).collect();
        let xa2: Vec<u64> = (0..64).map(|_| a2.next_u64()).collect();
        assert_eq!(xa, xa2);
        assert!(xa.iter().all(|v| !xb.contains(v)));
    }
}
