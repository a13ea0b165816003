//! Standard-normal kernel and zone probabilities for a shifted process.
//!
//! Observations are modelled as independent `N(shift, 1)` variates: the
//! in-control mean is zero, the standard deviation is fixed at one, and a
//! shift is expressed in standard-deviation units.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::rules::ZoneLabel;

/// Standard normal cumulative distribution function `Φ(x)`.
///
/// Evaluated through the complementary error function, which keeps full
/// relative precision in both tails. Absolute error is below `1e-15` on the
/// whole real line; infinite arguments saturate to 0 or 1.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Upper tail `1 - Φ(x)`, computed without cancellation.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// A process whose observations are `N(shift, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedProcess {
    shift: f64,
}

impl ShiftedProcess {
    pub fn new(shift: f64) -> Result<Self> {
        if !shift.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "process shift must be finite, got {shift}"
            )));
        }
        Ok(Self { shift })
    }

    pub fn in_control() -> Self {
        Self { shift: 0.0 }
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }
}

/// Ordered cut points splitting the real line into labelled zones.
///
/// Zone `i` is the interval `(cuts[i-1], cuts[i]]`: right-closed and
/// left-open, with the leftmost zone `(-inf, cuts[0]]` and the rightmost
/// `(cuts[last], +inf)`. A value sitting exactly on a cut belongs to the zone
/// below it.
#[derive(Debug, Clone, PartialEq)]
pub struct ZonePartition {
    cuts: Vec<f64>,
    labels: Vec<ZoneLabel>,
}

impl ZonePartition {
    pub fn new(cuts: Vec<f64>, labels: Vec<ZoneLabel>) -> Result<Self> {
        if cuts.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPartition("cut points must be finite".into()));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(
                "cut points must be strictly increasing".into(),
            ));
        }
        if labels.len() != cuts.len() + 1 {
            return Err(Error::InvalidPartition(format!(
                "{} cut points need {} labels, got {}",
                cuts.len(),
                cuts.len() + 1,
                labels.len()
            )));
        }
        Ok(Self { cuts, labels })
    }

    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn labels(&self) -> &[ZoneLabel] {
        &self.labels
    }

    pub fn zone_count(&self) -> usize {
        self.labels.len()
    }

    /// Index of the zone containing `x` (ties go to the lower zone).
    #[inline]
    pub fn zone_index(&self, x: f64) -> usize {
        self.cuts.partition_point(|&c| c < x)
    }

    #[inline]
    pub fn classify(&self, x: f64) -> ZoneLabel {
        self.labels[self.zone_index(x)]
    }

    /// The partition reflected through zero, with labels in matching order.
    pub fn mirrored(&self) -> Self {
        Self {
            cuts: self.cuts.iter().rev().map(|c| -c).collect(),
            labels: self.labels.iter().rev().map(|l| l.mirrored()).collect(),
        }
    }
}

/// Probability of each zone under `process`, indexed like the partition's
/// labels.
///
/// Zones lying entirely above the process mean are computed from upper-tail
/// probabilities and the rest from lower-tail ones, so that tiny tail zones
/// keep their relative precision and mirrored inputs give mirrored outputs.
pub fn zone_probabilities(partition: &ZonePartition, process: ShiftedProcess) -> Vec<f64> {
    let delta = process.shift();
    let cuts = partition.cuts();
    let zones = partition.zone_count();
    (0..zones)
        .map(|i| {
            let lo = if i == 0 {
                f64::NEG_INFINITY
            } else {
                cuts[i - 1] - delta
            };
            let hi = if i == zones - 1 {
                f64::INFINITY
            } else {
                cuts[i] - delta
            };
            let p = if lo >= 0.0 {
                normal_sf(lo) - normal_sf(hi)
            } else if hi <= 0.0 {
                normal_cdf(hi) - normal_cdf(lo)
            } else {
                1.0 - (normal_cdf(lo) + normal_sf(hi))
            };
            p.max(0.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::Scheme;

    fn basic_partition(limit: f64) -> ZonePartition {
        Scheme::Basic { r: 1, m: 1 }.partition(limit)
    }

    #[test]
    fn cdf_anchor_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(3.0) - 0.998_650_101_968_369_9).abs() < 1e-15);
        assert!((normal_cdf(-3.0) - 0.001_349_898_031_630_095).abs() < 1e-15);
        assert_eq!(normal_cdf(f64::INFINITY), 1.0);
        assert_eq!(normal_cdf(f64::NEG_INFINITY), 0.0);
        assert!(normal_cdf(-40.0) >= 0.0);
    }

    #[test]
    fn tie_goes_to_lower_zone() {
        let p = basic_partition(1.5);
        assert_eq!(p.zone_index(-1.5), 0);
        assert_eq!(p.zone_index(0.0), 1);
        assert_eq!(p.zone_index(1.5), 2);
        assert_eq!(p.zone_index(1.500_000_1), 3);
    }

    #[test]
    fn three_sigma_zone_probabilities() {
        let probs = zone_probabilities(&basic_partition(3.0), ShiftedProcess::in_control());
        let expected = [0.001_349_9, 0.498_650_1, 0.498_650_1, 0.001_349_9];
        for (p, e) in probs.iter().zip(expected) {
            assert!((p - e).abs() < 1e-7, "{p} vs {e}");
        }
    }

    #[test]
    fn shifted_top_zone() {
        let process = ShiftedProcess::new(1.0).unwrap();
        let probs = zone_probabilities(&basic_partition(1.781), process);
        assert!((probs[3] - 0.2174).abs() < 5e-5);
    }

    #[test]
    fn rejects_bad_partitions() {
        let labels = Scheme::Basic { r: 1, m: 1 }.alphabet();
        assert!(ZonePartition::new(vec![1.0, 0.0, 2.0], labels.clone()).is_err());
        assert!(ZonePartition::new(vec![0.0, 1.0], labels.clone()).is_err());
        assert!(ZonePartition::new(vec![0.0, f64::NAN, 2.0], labels).is_err());
        assert!(ShiftedProcess::new(f64::INFINITY).is_err());
    }
}
