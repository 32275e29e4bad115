//! Electrical network data model.
//!
//! A [`GridCase`] is built once (usually by [`parse_case`]) and then treated
//! as immutable; every solver in this crate takes it by shared reference and
//! works on clones when it needs a modified network.
//!
//! Buses keep their original case-file ids ([`BusId`]) for all external
//! output. Solvers address buses by dense 0-based position in
//! [`GridCase::buses`], obtained through [`GridCase::bus_index`].

mod matpower;
mod topology;
mod validate;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use matpower::parse_case;
pub use topology::{component_labels, connected_components, hop_distances};
pub use validate::validate;

/// Original bus number as it appears in the case file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BusId(pub u32);

impl fmt::Display for BusId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BusKind {
    Slack,
    PV,
    PQ,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bus {
    pub id: BusId,
    pub kind: BusKind,
    /// MW
    pub p_demand: f64,
    /// MVAr
    pub q_demand: f64,
    /// MW consumed at 1.0 p.u. voltage
    pub shunt_g: f64,
    /// MVAr injected at 1.0 p.u. voltage
    pub shunt_b: f64,
    pub v_mag_init: f64,
    /// degrees
    pub v_ang_init: f64,
    pub base_kv: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Bus {
    pub fn has_demand(&self) -> bool {
        self.p_demand != 0.0 || self.q_demand != 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchStatus {
    InService,
    Out,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub from_bus: BusId,
    pub to_bus: BusId,
    pub r: f64,
    pub x: f64,
    /// Total line charging susceptance, p.u.
    pub b_charging: f64,
    /// MVA; 0 means unlimited.
    pub rate_mva: f64,
    pub status: BranchStatus,
    pub tap_ratio: f64,
    /// degrees
    pub phase_shift: f64,
    /// Time needed to re-energize the branch during restoration.
    pub restore_time: f64,
}

impl Branch {
    pub fn in_service(&self) -> bool {
        self.status == BranchStatus::InService
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenStatus {
    On,
    Off,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub bus: BusId,
    /// MW
    pub p_out: f64,
    /// MVAr
    pub q_out: f64,
    pub p_max: f64,
    pub p_min: f64,
    pub q_max: f64,
    pub q_min: f64,
    /// Voltage magnitude setpoint for the regulated bus, p.u.
    pub v_setpoint: f64,
    pub status: GenStatus,
    /// MW per time unit
    pub ramp_rate: f64,
}

impl Generator {
    pub fn is_on(&self) -> bool {
        self.status == GenStatus::On
    }
}

/// Convex quadratic cost `c2·P² + c1·P + c0` in currency per hour, P in MW.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostCurve {
    pub generator_index: usize,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl CostCurve {
    pub fn cost(&self, p: f64) -> f64 {
        (self.c2 * p + self.c1) * p + self.c0
    }

    pub fn marginal(&self, p: f64) -> f64 {
        2.0 * self.c2 * p + self.c1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCase {
    pub name: String,
    pub base_mva: f64,
    pub buses: Vec<Bus>,
    pub branches: Vec<Branch>,
    pub generators: Vec<Generator>,
    pub cost_curves: Vec<CostCurve>,
}

/// Maps bus ids onto dense positions in [`GridCase::buses`].
#[derive(Debug, Clone)]
pub struct BusIndex(HashMap<BusId, usize>);

impl BusIndex {
    pub fn get(&self, id: BusId) -> Option<usize> {
        self.0.get(&id).copied()
    }

    /// Panics on an unknown id; only use on validated cases.
    pub fn of(&self, id: BusId) -> usize {
        self.0[&id]
    }
}

impl GridCase {
    pub fn bus_index(&self) -> BusIndex {
        BusIndex(
            self.buses
                .iter()
                .enumerate()
                .map(|(i, b)| (b.id, i))
                .collect(),
        )
    }

    pub fn bus(&self, id: BusId) -> Option<&Bus> {
        self.buses.iter().find(|b| b.id == id)
    }

    pub fn total_p_demand(&self) -> f64 {
        self.buses.iter().map(|b| b.p_demand).sum()
    }

    /// Cost curve attached to generator `gen`, if any.
    pub fn cost_of(&self, gen: usize) -> Option<&CostCurve> {
        self.cost_curves.iter().find(|c| c.generator_index == gen)
    }

    /// Indices of generators with status On.
    pub fn online_generators(&self) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&g| self.generators[g].is_on())
            .collect()
    }

    /// Copy with every bus demand multiplied by `factor`.
    pub fn with_load_scale(&self, factor: f64) -> GridCase {
        let mut case = self.clone();
        for bus in &mut case.buses {
            bus.p_demand *= factor;
            bus.q_demand *= factor;
        }
        case
    }

    /// Stable structured-text form used for golden files.
    pub fn to_canonical(&self) -> String {
        serde_yaml::to_string(self).expect("grid case serializes")
    }

    pub fn from_canonical(text: &str) -> Result<GridCase, CaseError> {
        let case: GridCase = serde_yaml::from_str(text)?;
        let violations = validate(&case);
        if violations.is_empty() {
            Ok(case)
        } else {
            Err(CaseError::Invalid(violations))
        }
    }
}

#[derive(Debug, Error)]
pub enum CaseError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported feature: {0}")]
    UnsupportedFeature(String),
    #[error("case violates invariants: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("canonical document: {0}")]
    Canonical(#[from] serde_yaml::Error),
}

/// The four IEEE test systems shipped with the crate.
pub mod bundled {
    use super::{parse_case, GridCase};

    pub const CASE14: &str = include_str!("../../data/case14.m");
    pub const CASE30: &str = include_str!("../../data/case30.m");
    pub const CASE57: &str = include_str!("../../data/case57.m");
    pub const CASE118: &str = include_str!("../../data/case118.m");

    pub const NAMES: [&str; 4] = ["case14", "case30", "case57", "case118"];

    /// Raw case-file text for a bundled case name.
    pub fn text(name: &str) -> Option<&'static str> {
        match name {
            "case14" => Some(CASE14),
            "case30" => Some(CASE30),
            "case57" => Some(CASE57),
            "case118" => Some(CASE118),
            _ => None,
        }
    }

    pub fn load(name: &str) -> Option<GridCase> {
        text(name).map(|t| parse_case(t).expect("bundled case parses"))
    }

    pub fn case14() -> GridCase {
        load("case14").unwrap()
    }

    pub fn case30() -> GridCase {
        load("case30").unwrap()
    }

    pub fn case57() -> GridCase {
        load("case57").unwrap()
    }

    pub fn case118() -> GridCase {
        load("case118").unwrap()
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    pub fn bus(id: u32, kind: BusKind, pd: f64) -> Bus {
        Bus {
            id: BusId(id),
            kind,
            p_demand: pd,
            q_demand: 0.0,
            shunt_g: 0.0,
            shunt_b: 0.0,
            v_mag_init: 1.0,
            v_ang_init: 0.0,
            base_kv: 100.0,
            v_min: 0.9,
            v_max: 1.1,
        }
    }

    pub fn line(from: u32, to: u32, r: f64, x: f64) -> Branch {
        Branch {
            from_bus: BusId(from),
            to_bus: BusId(to),
            r,
            x,
            b_charging: 0.0,
            rate_mva: 0.0,
            status: BranchStatus::InService,
            tap_ratio: 1.0,
            phase_shift: 0.0,
            restore_time: 1.0,
        }
    }

    pub fn generator(bus: u32, p_max: f64) -> Generator {
        Generator {
            bus: BusId(bus),
            p_out: 0.0,
            q_out: 0.0,
            p_max,
            p_min: 0.0,
            q_max: 999.0,
            q_min: -999.0,
            v_setpoint: 1.0,
            status: GenStatus::On,
            ramp_rate: p_max.max(1.0),
        }
    }

    /// Slack bus 1 with a generator, load bus 2, one line.
    pub fn two_bus(load_mw: f64) -> GridCase {
        GridCase {
            name: "two_bus".into(),
            base_mva: 100.0,
            buses: vec![bus(1, BusKind::Slack, 0.0), bus(2, BusKind::PQ, load_mw)],
            branches: vec![line(1, 2, 0.01, 0.1)],
            generators: vec![generator(1, 200.0)],
            cost_curves: vec![CostCurve {
                generator_index: 0,
                c2: 0.01,
                c1: 10.0,
                c0: 0.0,
            }],
        }
    }
}
