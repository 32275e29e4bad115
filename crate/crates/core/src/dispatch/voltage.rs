use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::OperatingPoint;
use crate::grid::BusId;

/// Voltage bands in p.u.: Critical outside `[crit_lo, crit_hi]`, Warning
/// between a critical and a warning threshold, Normal inside
/// `[warn_lo, warn_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawThresholds")]
pub struct VoltageThresholds {
    crit_lo: f64,
    warn_lo: f64,
    warn_hi: f64,
    crit_hi: f64,
}

#[derive(Deserialize)]
struct RawThresholds {
    crit_lo: f64,
    warn_lo: f64,
    warn_hi: f64,
    crit_hi: f64,
}

impl TryFrom<RawThresholds> for VoltageThresholds {
    type Error = ThresholdError;
    fn try_from(r: RawThresholds) -> Result<Self, Self::Error> {
        VoltageThresholds::new(r.crit_lo, r.warn_lo, r.warn_hi, r.crit_hi)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("voltage thresholds must satisfy crit_lo < warn_lo < warn_hi < crit_hi, got {0:?}")]
pub struct ThresholdError(pub [f64; 4]);

impl VoltageThresholds {
    pub fn new(
        crit_lo: f64,
        warn_lo: f64,
        warn_hi: f64,
        crit_hi: f64,
    ) -> Result<Self, ThresholdError> {
        if crit_lo < warn_lo && warn_lo < warn_hi && warn_hi < crit_hi {
            Ok(VoltageThresholds {
                crit_lo,
                warn_lo,
                warn_hi,
                crit_hi,
            })
        } else {
            Err(ThresholdError([crit_lo, warn_lo, warn_hi, crit_hi]))
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.crit_lo, self.warn_lo, self.warn_hi, self.crit_hi]
    }

    pub fn classify(&self, v: f64) -> VoltageStatus {
        if v < self.crit_lo || v > self.crit_hi {
            VoltageStatus::Critical
        } else if v < self.warn_lo || v > self.warn_hi {
            VoltageStatus::Warning
        } else {
            VoltageStatus::Normal
        }
    }
}

impl Default for VoltageThresholds {
    fn default() -> Self {
        VoltageThresholds {
            crit_lo: 0.95,
            warn_lo: 0.97,
            warn_hi: 1.03,
            crit_hi: 1.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VoltageStatus {
    Normal,
    Warning,
    Critical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BusVoltageStatus {
    pub bus: BusId,
    pub v_mag: f64,
    pub status: VoltageStatus,
}

/// Classifies every energized bus of the operating point.
pub fn voltage_boundary_report(
    op: &OperatingPoint,
    thresholds: &VoltageThresholds,
) -> Vec<BusVoltageStatus> {
    let sol = &op.solution;
    (0..sol.bus_ids.len())
        .filter(|&i| sol.energized[i])
        .map(|i| BusVoltageStatus {
            bus: sol.bus_ids[i],
            v_mag: sol.v_mag[i],
            status: thresholds.classify(sol.v_mag[i]),
        })
        .collect()
}
