use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BinSpec {
    pub width: f64,
    pub min_count: usize,
}

impl Default for BinSpec {
    fn default() -> Self {
        BinSpec { width: 1.0, min_count: 10 }
    }
}

impl BinSpec {
    pub fn new(width: f64, min_count: usize) -> Result<Self> {
        let spec = BinSpec { width, min_count };
        spec.validate()?;
        Ok(spec)
    }

    /// `count` equal bins anchored at zero whose last one just contains
    /// `max_power`. Useful when the fitted power scale is only known up to a
    /// factor.
    pub fn spanning(max_power: f64, count: usize, min_count: usize) -> Result<Self> {
        if !max_power.is_finite() || max_power <= 0.0 {
            return Err(Error::invalid(alloc::format!("cannot span bins up to power {max_power}")));
        }
        if count == 0 {
            return Err(Error::invalid("bin count must be at least 1"));
        }
        BinSpec::new(max_power * (1.0 + 1e-9) / count as f64, min_count)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.width.is_finite() || self.width <= 0.0 {
            return Err(Error::invalid(alloc::format!("bin width must be positive, got {}", self.width)));
        }
        if self.min_count == 0 {
            return Err(Error::invalid("bin min_count must be at least 1"));
        }
        Ok(())
    }
}

/// Empirical accuracy of the runs whose power fell in one interval.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PowerBin {
    pub power_mid: f64,
    pub accuracy: f64,
    pub count: usize,
}

/// Bins plus the number of runs discarded with under-populated bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Binned {
    pub bins: Vec<PowerBin>,
    pub dropped: usize,
}

/// Groups `(power, correct)` pairs into `[i·w, (i+1)·w)` intervals anchored at
/// zero, keeping bins with at least `min_count` runs, ordered by power.
pub fn bin_by_power(records: &[(f64, bool)], spec: &BinSpec) -> Result<Vec<PowerBin>> {
    Ok(bin_by_power_counted(records, spec)?.bins)
}

pub fn bin_by_power_counted(records: &[(f64, bool)], spec: &BinSpec) -> Result<Binned> {
    spec.validate()?;
    if records.is_empty() {
        return Err(Error::invalid("no records to bin"));
    }
    let mut tally: BTreeMap<u64, (usize, usize)> = BTreeMap::new();
    for &(power, correct) in records {
        if !power.is_finite() || power < 0.0 {
            return Err(Error::invalid(alloc::format!("power must be finite and non-negative, got {power}")));
        }
        let idx = libm::floor(power / spec.width) as u64;
        let slot = tally.entry(idx).or_insert((0, 0));
        slot.0 += 1;
        slot.1 += correct as usize;
    }
    let mut bins = Vec::new();
    let mut dropped = 0;
    for (idx, (count, correct)) in tally {
        if count < spec.min_count {
            dropped += count;
            continue;
        }
        bins.push(PowerBin {
            power_mid: (idx as f64 + 0.5) * spec.width,
            accuracy: correct as f64 / count as f64,
            count,
        });
    }
    Ok(Binned { bins, dropped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn single_bin() {
        let recs: Vec<(f64, bool)> = (0..10).map(|i| (1.0 + i as f64 * 0.09, i < 7)).collect();
        let bins = bin_by_power(&recs, &BinSpec::default()).unwrap();
        assert_eq!(bins, vec![PowerBin { power_mid: 1.5, accuracy: 0.7, count: 10 }]);
    }

    #[test]
    fn threshold_and_split() {
        let nine: Vec<(f64, bool)> = (0..9).map(|_| (0.5, true)).collect();
        let out = bin_by_power_counted(&nine, &BinSpec::default()).unwrap();
        assert!(out.bins.is_empty());
        assert_eq!(out.dropped, 9);

        let mut recs: Vec<(f64, bool)> = (0..10).map(|i| (i as f64 * 0.1, true)).collect();
        recs.extend((0..10).map(|i| (1.0 + i as f64 * 0.1, true)));
        let bins = bin_by_power(&recs, &BinSpec::default()).unwrap();
        assert_eq!(bins.len(), 2);
        assert!(bins.iter().all(|b| b.accuracy == 1.0 && b.count == 10));
        assert_eq!((bins[0].power_mid, bins[1].power_mid), (0.5, 1.5));
    }

    #[test]
    fn errors() {
        assert!(bin_by_power(&[], &BinSpec::default()).is_err());
        assert!(bin_by_power(&[(-1.0, true)], &BinSpec::default()).is_err());
        assert!(bin_by_power(&[(1.0, true)], &BinSpec { width: 0.0, min_count: 1 }).is_err());
        assert!(BinSpec::new(1.0, 0).is_err());
        assert!(BinSpec::spanning(0.0, 5, 10).is_err());
        assert!(BinSpec::spanning(1.0, 0, 10).is_err());
    }

    #[test]
    fn spanning_puts_max_in_last_bin() {
        let spec = BinSpec::spanning(12.0, 6, 1).unwrap();
        let recs = [(0.0, true), (12.0, false)];
        let bins = bin_by_power(&recs, &spec).unwrap();
        assert_eq!(bins.len(), 2);
        assert!((bins[1].power_mid - 11.0).abs() < 1e-6);
    }
}
