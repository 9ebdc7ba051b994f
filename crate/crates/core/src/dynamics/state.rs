use serde::{Deserialize, Serialize};

use crate::circulant::{elongation, LocalSquareRoot};
use crate::error::{Error, Result};

/// Positions, momenta and elongations `r = Tq` of a chain on `ℤ/Nℤ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub time: f64,
}

impl ChainState {
    /// Builds a state and derives `r`; `p` and `q` must have equal length.
    pub fn new(p: Vec<f64>, q: Vec<f64>, sq: &LocalSquareRoot, time: f64) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::DimensionMismatch {
                expected: q.len(),
                got: p.len(),
            });
        }
        let r = elongation(&q, sq)?;
        Ok(Self { p, q, r, time })
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Recomputes `r` after `q` changed.
    pub fn refresh(&mut self, sq: &LocalSquareRoot) -> Result<()> {
        self.r = elongation(&self.q, sq)?;
        Ok(())
    }

    /// Projects onto `Σp = Σq = 0` by removing the means.
    pub fn center(&mut self) {
        for v in [&mut self.p, &mut self.q] {
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            v.iter_mut().for_each(|x| *x -= mean);
        }
    }

    /// Harmonic energy `½Σ(p² + r²)`.
    pub fn harmonic_energy(&self) -> f64 {
        0.5 * self
            .p
            .iter()
            .zip(&self.r)
            .map(|(p, r)| p * p + r * r)
            .sum::<f64>()
    }
}
