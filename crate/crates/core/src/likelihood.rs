//! Overlap score between an observed and a synthetic silhouette.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::SilhouetteImage;

/// Pixel tallies from comparing an observed mask with a synthetic one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PixelCounts {
    /// Foreground in both.
    pub n_common: u64,
    /// Observed foreground not covered by the model.
    pub n_sil_only: u64,
    /// Model foreground outside the observed silhouette.
    pub n_model_only: u64,
}

impl PixelCounts {
    /// Counts from the intersection size and each mask's foreground total.
    pub fn from_totals(n_common: u64, observed: u64, synthetic: u64) -> Self {
        PixelCounts {
            n_common,
            n_sil_only: observed - n_common,
            n_model_only: synthetic - n_common,
        }
    }

    pub fn weight(&self) -> f64 {
        weight(self)
    }
}

pub fn pixel_counts(observed: &SilhouetteImage, synthetic: &SilhouetteImage) -> Result<PixelCounts> {
    observed.same_size(synthetic)?;
    let mut c = PixelCounts::default();
    for (&o, &s) in observed.mask().iter().zip(synthetic.mask()) {
        match (o, s) {
            (true, true) => c.n_common += 1,
            (true, false) => c.n_sil_only += 1,
            (false, true) => c.n_model_only += 1,
            (false, false) => {}
        }
    }
    Ok(c)
}

/// `n_common / (n_sil_only + n_model_only)`.
///
/// A perfect match has a zero denominator; it scores `n_common`, which no
/// imperfect match of the same observation can exceed.
pub fn weight(counts: &PixelCounts) -> f64 {
    let mismatch = counts.n_sil_only + counts.n_model_only;
    if mismatch == 0 {
        counts.n_common as f64
    } else {
        counts.n_common as f64 / mismatch as f64
    }
}

/// Mean of the per-camera weights.
pub fn combine_cameras(weights: &[f64]) -> Result<f64> {
    if weights.is_empty() {
        return Err(Error::NoCameras);
    }
    if weights.iter().all(|&w| w == weights[0]) {
        return Ok(weights[0]);
    }
    Ok(weights.iter().sum::<f64>() / weights.len() as f64)
}
