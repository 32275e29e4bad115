//! Restoration planning after a total blackout.
//!
//! A permutation GA orders generator start-ups, multi-source Dijkstra
//! orders bus re-energization from the first (cranking) unit, and
//! [`merge_plans`] interleaves the two on a shared abstract clock: a branch
//! takes `restore_time` units to pick up and the k-th generator is not
//! started before time k.

mod fitness;
mod ga;
mod sssp;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fitness::{sequence_fitness, FitnessWeights};
pub use ga::{ga_optimize, ga_optimize_with_history, FitnessHistory, GAConfig};
pub use sssp::{sssp_restoration, NodeRestorationPlan};

use crate::grid::{BusId, GridCase};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorStartPlan {
    /// Indices into `GridCase::generators`, first to start first.
    pub order: Vec<usize>,
    pub fitness: f64,
    /// Priority score `s(g)` of each entry of `order`.
    pub per_generator_score: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum RestorationEvent {
    EnergizeBus {
        time: f64,
        bus: BusId,
    },
    StartGenerator {
        time: f64,
        generator: usize,
        bus: BusId,
    },
}

impl RestorationEvent {
    pub fn time(&self) -> f64 {
        match self {
            RestorationEvent::EnergizeBus { time, .. }
            | RestorationEvent::StartGenerator { time, .. } => *time,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestorationPlan {
    pub generator_plan: GeneratorStartPlan,
    pub node_plan: NodeRestorationPlan,
    pub merged: Vec<RestorationEvent>,
    /// Buses with no in-service path from the cranking unit.
    pub unreachable: Vec<BusId>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlackStartError {
    #[error("case has no online generator")]
    NoGenerators,
    #[error("no restoration source given")]
    NoSources,
    #[error("bus {0} is not in the case")]
    UnknownBus(BusId),
    #[error("buses unreachable from the sources: {unreachable:?}")]
    UnreachableBuses {
        plan: Box<NodeRestorationPlan>,
        unreachable: Vec<BusId>,
    },
    #[error("inconsistent plans: {0}")]
    InconsistentPlans(String),
    #[error("invalid GA configuration: {}", .0.join("; "))]
    InvalidConfig(Vec<String>),
}

/// Interleaves generator start-ups with bus energization.
///
/// Each generator starts at `max(rank, energization time of its bus)`.
/// Events are ordered by time; at equal times buses precede generators,
/// then plan order decides.
pub fn merge_plans(
    gen_plan: &GeneratorStartPlan,
    node_plan: &NodeRestorationPlan,
    case: &GridCase,
) -> Result<RestorationPlan, BlackStartError> {
    let first = gen_plan
        .order
        .first()
        .ok_or(BlackStartError::NoGenerators)?;
    let cranking_bus = case.generators[*first].bus;
    if node_plan.sources.first() != Some(&cranking_bus) {
        return Err(BlackStartError::InconsistentPlans(format!(
            "restoration source {:?} is not the cranking unit's bus {cranking_bus}",
            node_plan.sources
        )));
    }

    // (time, kind, sequence, event)
    let mut keyed: Vec<(f64, u8, usize, RestorationEvent)> = Vec::new();
    for (seq, (&bus, &time)) in node_plan
        .order
        .iter()
        .zip(&node_plan.cumulative_time)
        .enumerate()
    {
        keyed.push((time, 0, seq, RestorationEvent::EnergizeBus { time, bus }));
    }
    for (rank, &g) in gen_plan.order.iter().enumerate() {
        let bus = case.generators[g].bus;
        let energized = node_plan.time_of(bus).ok_or_else(|| {
            BlackStartError::InconsistentPlans(format!(
                "generator {} sits on bus {bus}, which is never energized",
                g + 1
            ))
        })?;
        let time = (rank as f64).max(energized);
        keyed.push((
            time,
            1,
            rank,
            RestorationEvent::StartGenerator {
                time,
                generator: g,
                bus,
            },
        ));
    }
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    Ok(RestorationPlan {
        generator_plan: gen_plan.clone(),
        node_plan: node_plan.clone(),
        merged: keyed.into_iter().map(|k| k.3).collect(),
        unreachable: Vec::new(),
    })
}

/// GA, restoration from the cranking unit's bus, and merge.
///
/// Buses cut off from the cranking unit are listed in
/// [`RestorationPlan::unreachable`]; a generator on such a bus makes the
/// plan inconsistent.
pub fn plan_black_start(
    case: &GridCase,
    cfg: &GAConfig,
) -> Result<RestorationPlan, BlackStartError> {
    let gen_plan = ga_optimize(case, cfg)?;
    let source = case.generators[gen_plan.order[0]].bus;
    let (node_plan, unreachable) = match sssp_restoration(case, &[source]) {
        Ok(plan) => (plan, Vec::new()),
        Err(BlackStartError::UnreachableBuses { plan, unreachable }) => (*plan, unreachable),
        Err(e) => return Err(e),
    };
    let mut plan = merge_plans(&gen_plan, &node_plan, case)?;
    plan.unreachable = unreachable;
    Ok(plan)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartupEntry {
    /// 1-based start position
    pub rank: usize,
    /// 1-based generator row
    pub generator: usize,
    pub bus: BusId,
    pub score: f64,
}

/// Serialized form of a plan with 1-based generator rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub case: String,
    pub fitness: f64,
    pub weights: FitnessWeights,
    pub startup: Vec<StartupEntry>,
    pub events: Vec<RestorationEvent>,
    pub unreachable: Vec<BusId>,
}

impl PlanDocument {
    pub fn new(case: &GridCase, cfg: &GAConfig, plan: &RestorationPlan) -> Self {
        let gp = &plan.generator_plan;
        let startup = gp
            .order
            .iter()
            .zip(&gp.per_generator_score)
            .enumerate()
            .map(|(rank, (&g, &score))| StartupEntry {
                rank: rank + 1,
                generator: g + 1,
                bus: case.generators[g].bus,
                score,
            })
            .collect();
        let events = plan
            .merged
            .iter()
            .map(|e| match e {
                RestorationEvent::StartGenerator {
                    time,
                    generator,
                    bus,
                } => RestorationEvent::StartGenerator {
                    time: *time,
                    generator: generator + 1,
                    bus: *bus,
                },
                other => other.clone(),
            })
            .collect();
        PlanDocument {
            case: case.name.clone(),
            fitness: gp.fitness,
            weights: cfg.weights,
            startup,
            events,
            unreachable: plan.unreachable.clone(),
        }
    }

    pub fn to_yaml(&self) -> String {
        serde_yaml::to_string(self).expect("plan documents serialize")
    }
}
