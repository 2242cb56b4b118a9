//! Radial binning of Monte Carlo hits.

use serde::{Deserialize, Serialize};

use super::stats::StreamingStat;
use crate::error::{Error, Result};

/// Radial curve on a bin grid with per-bin standard errors.
///
/// `value[i]` is `None` for bins without hits, which the writers emit as an
/// empty field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialCurve {
    pub bin_edges: Vec<f64>,
    pub value: Vec<Option<f64>>,
    pub std_err: Vec<f64>,
    pub samples_per_bin: Vec<u64>,
}

impl RadialCurve {
    pub fn n_bins(&self) -> usize {
        self.bin_edges.len().saturating_sub(1)
    }

    pub fn bin(&self, i: usize) -> (f64, f64) {
        (self.bin_edges[i], self.bin_edges[i + 1])
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_bins();
        if self.value.len() != n || self.std_err.len() != n || self.samples_per_bin.len() != n {
            return Err(Error::Config("radial curve arrays disagree with bin grid".into()));
        }
        if !self.bin_edges.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("bin edges must be strictly increasing".into()));
        }
        if self.std_err.iter().any(|&s| !(s >= 0.0)) {
            return Err(Error::Config("negative or NaN standard error".into()));
        }
        Ok(())
    }
}

/// Equal-width bins over `[r_min, r_max]`.
pub fn uniform_edges(r_min: f64, r_max: f64, n_bins: usize) -> Result<Vec<f64>> {
    if !(r_min >= 0.0 && r_max > r_min && n_bins >= 1) {
        return Err(Error::Config(format!(
            "bad bin spec r_min={r_min}, r_max={r_max}, n_bins={n_bins}"
        )));
    }
    let h = (r_max - r_min) / n_bins as f64;
    let mut edges: Vec<f64> = (0..=n_bins).map(|i| r_min + h * i as f64).collect();
    edges[n_bins] = r_max;
    Ok(edges)
}

/// Per-bin hit counts, with per-trial count statistics so bin standard
/// errors account for within-trial correlation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialHistogram {
    pub edges: Vec<f64>,
    pub hits: Vec<u64>,
    pub per_trial: Vec<StreamingStat>,
    pub below: u64,
    pub above: u64,
    pub trials: u64,
}

impl RadialHistogram {
    pub fn new(edges: Vec<f64>) -> Self {
        let n = edges.len() - 1;
        Self {
            edges,
            hits: vec![0; n],
            per_trial: vec![StreamingStat::new(); n],
            below: 0,
            above: 0,
            trials: 0,
        }
    }

    pub fn n_bins(&self) -> usize {
        self.hits.len()
    }

    pub fn bin_of(&self, r: f64) -> Option<usize> {
        let n = self.n_bins();
        if !(r >= self.edges[0]) || r >= self.edges[n] {
            return None;
        }
        // last edge <= r
        let i = self.edges.partition_point(|&e| e <= r);
        Some(i - 1)
    }

    /// Record one trial's radii.
    pub fn record_trial(&mut self, radii: impl IntoIterator<Item = f64>) {
        let mut counts = vec![0u64; self.n_bins()];
        for r in radii {
            match self.bin_of(r) {
                Some(i) => counts[i] += 1,
                None if r < self.edges[0] => self.below += 1,
                None => self.above += 1,
            }
        }
        for (i, c) in counts.into_iter().enumerate() {
            self.hits[i] += c;
            self.per_trial[i].push(c as f64);
        }
        self.trials += 1;
    }

    pub fn merge(&mut self, other: &RadialHistogram) {
        debug_assert_eq!(self.edges, other.edges);
        for i in 0..self.n_bins() {
            self.hits[i] += other.hits[i];
            self.per_trial[i].merge(&other.per_trial[i]);
        }
        self.below += other.below;
        self.above += other.above;
        self.trials += other.trials;
    }

    pub fn total_recorded(&self) -> u64 {
        self.hits.iter().sum::<u64>() + self.below + self.above
    }

    /// Curve of `mean count per trial / norm[i]`.
    pub fn curve(&self, norm: &[f64]) -> RadialCurve {
        let n = self.n_bins();
        let mut value = Vec::with_capacity(n);
        let mut std_err = Vec::with_capacity(n);
        for i in 0..n {
            let s = &self.per_trial[i];
            if self.hits[i] == 0 {
                value.push(None);
                std_err.push(0.0);
            } else {
                value.push(Some(s.mean / norm[i]));
                std_err.push(s.std_err() / norm[i]);
            }
        }
        RadialCurve {
            bin_edges: self.edges.clone(),
            value,
            std_err,
            samples_per_bin: self.hits.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binning_and_conservation() {
        let mut h = RadialHistogram::new(uniform_edges(0.2, 1.0, 4).unwrap());
        h.record_trial([0.1, 0.2, 0.39, 0.4, 0.99, 1.0, 5.0]);
        assert_eq!(h.hits, vec![2, 1, 0, 1]);
        assert_eq!(h.below, 1);
        assert_eq!(h.above, 2);
        assert_eq!(h.total_recorded(), 7);
        let c = h.curve(&[1.0; 4]);
        c.validate().unwrap();
        assert_eq!(c.value[2], None);
    }

    #[test]
    fn merge_matches_sequential() {
        let edges = uniform_edges(0.0, 3.0, 3).unwrap();
        let trials: Vec<Vec<f64>> = vec![vec![0.5, 1.5], vec![2.5], vec![0.1, 0.2, 2.9]];
        let mut all = RadialHistogram::new(edges.clone());
        for t in &trials {
            all.record_trial(t.iter().copied());
        }
        let mut a = RadialHistogram::new(edges.clone());
        a.record_trial(trials[0].iter().copied());
        let mut b = RadialHistogram::new(edges);
        b.record_trial(trials[1].iter().copied());
        b.record_trial(trials[2].iter().copied());
        a.merge(&b);
        assert_eq!(a.hits, all.hits);
        assert_eq!(a.trials, 3);
        for i in 0..3 {
            assert!((a.per_trial[i].mean - all.per_trial[i].mean).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(uniform_edges(1.0, 0.5, 3).is_err());
        let c = RadialCurve {
            bin_edges: vec![0.0, 1.0, 0.5],
            value: vec![None, None],
            std_err: vec![0.0, 0.0],
            samples_per_bin: vec![0, 0],
        };
        assert!(c.validate().is_err());
    }
}
