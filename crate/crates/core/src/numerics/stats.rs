//! Mergeable streaming moments.

use serde::{Deserialize, Serialize};

/// Welford accumulator for mean and variance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StreamingStat {
    pub count: u64,
    pub mean: f64,
    /// Sum of squared deviations from the running mean.
    pub m2: f64,
}

impl StreamingStat {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&mut self, other: &StreamingStat) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n_a = self.count as f64;
        let n_b = other.count as f64;
        let n = n_a + n_b;
        let delta = other.mean - self.mean;
        self.mean += delta * n_b / n;
        self.m2 += other.m2 + delta * delta * n_a * n_b / n;
        self.count += other.count;
    }

    /// Unbiased sample variance; zero with fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    /// Standard error of the mean.
    pub fn std_err(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

impl FromIterator<f64> for StreamingStat {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = StreamingStat::new();
        for x in iter {
            s.push(x);
        }
        s
    }
}

/// Central moments up to order four, used where the standard error of a
/// variance estimate is needed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MomentStat {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

impl MomentStat {
    pub fn push(&mut self, x: f64) {
        self.merge(&MomentStat {
            count: 1,
            mean: x,
            ..Default::default()
        });
    }

    /// Pebay's pairwise update for the third and fourth central sums.
    pub fn merge(&mut self, o: &MomentStat) {
        if o.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *o;
            return;
        }
        let na = self.count as f64;
        let nb = o.count as f64;
        let n = na + nb;
        let d = o.mean - self.mean;
        let d2 = d * d;
        let m2 = self.m2 + o.m2 + d2 * na * nb / n;
        let m3 = self.m3
            + o.m3
            + d * d2 * na * nb * (na - nb) / (n * n)
            + 3.0 * d * (na * o.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + o.m4
            + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * o.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * d * (na * o.m3 - nb * self.m3) / n;
        self.mean += d * nb / n;
        self.m2 = m2;
        self.m3 = m3;
        self.m4 = m4;
        self.count += o.count;
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    /// Large-sample standard error of [`MomentStat::variance`]:
    /// `sqrt((mu4 - sigma^4) / n)`.
    pub fn variance_std_err(&self) -> f64 {
        if self.count < 4 {
            return f64::INFINITY;
        }
        let n = self.count as f64;
        let mu2 = self.m2 / n;
        let mu4 = self.m4 / n;
        ((mu4 - mu2 * mu2).max(0.0) / n).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn single_pass_matches_two_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1 + 1e6).collect();
        let s: StreamingStat = xs.iter().copied().collect();
        let (mean, var) = naive(&xs);
        assert!((s.mean - mean).abs() < 1e-9);
        assert!((s.variance() - var).abs() / var < 1e-9);
    }

    #[test]
    fn empty_and_singleton() {
        let s = StreamingStat::new();
        assert_eq!(s.variance(), 0.0);
        assert_eq!(s.std_err(), 0.0);
        let s: StreamingStat = [3.0].into_iter().collect();
        assert_eq!(s.variance(), 0.0);
        assert_eq!(s.mean, 3.0);
    }

    #[test]
    fn moment_stat_fourth_moment() {
        let xs = [1.0, 2.0, 4.0, 8.0, 16.0];
        let mut m = MomentStat::default();
        for &x in &xs {
            m.push(x);
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let c4: f64 = xs.iter().map(|x| (x - mean).powi(4)).sum();
        let c3: f64 = xs.iter().map(|x| (x - mean).powi(3)).sum();
        assert!((m.mean - mean).abs() < 1e-12);
        assert!((m.m3 - c3).abs() < 1e-9 * c3.abs());
        assert!((m.m4 - c4).abs() < 1e-9 * c4);
    }

    proptest! {
        #[test]
        fn merge_equals_concatenation(
            a in prop::collection::vec(-1e3f64..1e3, 0..60),
            b in prop::collection::vec(-1e3f64..1e3, 0..60),
        ) {
            let mut sa: StreamingStat = a.iter().copied().collect();
            let sb: StreamingStat = b.iter().copied().collect();
            let all: StreamingStat = a.iter().chain(b.iter()).copied().collect();
            sa.merge(&sb);
            prop_assert_eq!(sa.count, all.count);
            let tol = |x: f64| 1e-12 * x.abs().max(1.0);
            prop_assert!((sa.mean - all.mean).abs() <= tol(all.mean) * 10.0);
            prop_assert!((sa.m2 - all.m2).abs() <= tol(all.m2) * 1e2);

            let mut ma = MomentStat::default();
            a.iter().for_each(|&x| ma.push(x));
            let mut mb = MomentStat::default();
            b.iter().for_each(|&x| mb.push(x));
            ma.merge(&mb);
            prop_assert!((ma.m2 - all.m2).abs() <= tol(all.m2) * 1e2);
        }

        #[test]
        fn merge_is_order_independent(
            a in prop::collection::vec(-10f64..10.0, 1..30),
            b in prop::collection::vec(-10f64..10.0, 1..30),
        ) {
            let sa: StreamingStat = a.iter().copied().collect();
            let sb: StreamingStat = b.iter().copied().collect();
            let mut ab = sa;
            ab.merge(&sb);
            let mut ba = sb;
            ba.merge(&sa);
            prop_assert!((ab.mean - ba.mean).abs() < 1e-12);
            prop_assert!((ab.m2 - ba.m2).abs() < 1e-9);
        }
    }
}
