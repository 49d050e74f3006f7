use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Right-censored observations `(t_i, δ_i)`; `events[i]` is true for an
/// observed failure and false for a censored time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensoredSample {
    times: Vec<f64>,
    events: Vec<bool>,
}

impl CensoredSample {
    pub fn new(times: Vec<f64>, events: Vec<bool>) -> Result<Self> {
        if times.len() != events.len() {
            return Err(Error::InvalidSample(format!(
                "times/events length mismatch: {} vs {}",
                times.len(),
                events.len()
            )));
        }
        if times.is_empty() {
            return Err(Error::InvalidSample("sample is empty".into()));
        }
        if let Some((i, t)) = times
            .iter()
            .enumerate()
            .find(|(_, t)| !(**t > 0.0 && t.is_finite()))
        {
            return Err(Error::InvalidSample(format!(
                "time at index {i} must be finite and positive, got {t}"
            )));
        }
        Ok(Self { times, events })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn events(&self) -> &[bool] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn n_events(&self) -> usize {
        self.events.iter().filter(|e| **e).count()
    }

    pub fn n_censored(&self) -> usize {
        self.len() - self.n_events()
    }

    pub fn censored_fraction(&self) -> f64 {
        self.n_censored() as f64 / self.len() as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, bool)> + '_ {
        self.times.iter().copied().zip(self.events.iter().copied())
    }
}

/// Name under which [`kersey1987`] is exposed to the command line.
pub const KERSEY1987: &str = "kersey1987";

// Leukemia-free survival (years) after autologous marrow transplant.
// A negative entry marks a censored time.
const KERSEY_RAW: [f64; 46] = [
    0.0301, 0.0384, 0.0630, 0.0849, 0.0877, 0.0959, 0.1397, 0.1616, //
    0.1699, 0.2137, 0.2137, 0.2164, 0.2384, 0.2712, 0.2740, 0.3863, //
    0.4384, 0.4548, 0.5918, 0.6000, 0.6438, 0.6849, 0.7397, 0.8575, //
    0.9096, 0.9644, 1.0082, 1.2822, 1.3452, 1.4000, 1.5260, -1.7205, //
    -1.9890, 2.2438, -2.5068, -2.6466, 3.0384, -3.1726, 3.4411, -4.4219, //
    -4.4356, -4.5863, -4.6904, -4.7808, -4.9863, -5.0000,
];

/// Leukemia-free survival times of 46 autologous transplant patients
/// (Kersey et al., 1987): 34 relapses and 12 censored follow-ups.
pub fn kersey1987() -> CensoredSample {
    let times = KERSEY_RAW.iter().map(|t| t.abs()).collect();
    let events = KERSEY_RAW.iter().map(|t| *t > 0.0).collect();
    CensoredSample::new(times, events).expect("embedded dataset is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kersey_counts() {
        let data = kersey1987();
        assert_eq!(data.len(), 46);
        assert_eq!(data.n_events(), 34);
        assert_eq!(data.n_censored(), 12);
        assert!(data.times().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn validation() {
        assert!(CensoredSample::new(vec![1.0], vec![true, false]).is_err());
        assert!(CensoredSample::new(vec![], vec![]).is_err());
        assert!(CensoredSample::new(vec![1.0, 0.0], vec![true, true]).is_err());
        assert!(CensoredSample::new(vec![1.0, f64::INFINITY], vec![true, true]).is_err());
        assert!(CensoredSample::new(vec![1.0, 2.0], vec![false, false]).is_ok());
    }
}
