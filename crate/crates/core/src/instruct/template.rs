use std::fmt::Write;

use thiserror::Error;

use super::{InstructionRecord, RecordMeta, TaskKind};
use crate::black_start::RestorationEvent;
use crate::dispatch::{Binding, Element, OperatingPoint, ViolationKind, VoltageStatus, OPF_METHOD};
use crate::grid::{hop_distances, BusKind, GridCase};
use crate::power_flow::{loading_ratios, rank_by_loading};
use crate::scenario::{
    AdjustmentPost, AdjustmentScenario, BlackStartEpisode, MonitoringScenario, OperatingSnapshot,
    PostResult, SafetyLabel, UNLIMITED_RATING_MVA,
};

pub const TEMPLATE_VERSION: &str = "v1";

/// Scenario values a template can render.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Adjustment(AdjustmentScenario),
    Monitoring(MonitoringScenario),
    BlackStart(BlackStartEpisode),
    VoltageBoundary(OperatingSnapshot),
    GenerationCost(OperatingSnapshot),
}

impl Scenario {
    pub fn task(&self) -> TaskKind {
        match self {
            Scenario::Adjustment(_) => TaskKind::OperationAdjustment,
            Scenario::Monitoring(_) => TaskKind::OperationMonitoring,
            Scenario::BlackStart(_) => TaskKind::BlackStart,
            Scenario::VoltageBoundary(_) => TaskKind::VoltageBoundary,
            Scenario::GenerationCost(_) => TaskKind::GenerationCost,
        }
    }

    pub fn index(&self) -> u64 {
        match self {
            Scenario::Adjustment(s) => s.index,
            Scenario::Monitoring(s) => s.index,
            Scenario::BlackStart(s) => s.index,
            Scenario::VoltageBoundary(s) | Scenario::GenerationCost(s) => s.index,
        }
    }
}

/// Labeled blocks of the record input, in layout order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputField {
    CaseSummary,
    BusLoads,
    BusVoltages,
    GeneratorDispatch,
    GeneratorCosts,
    GeneratorParameters,
    BranchFlows,
    CapacityEvent,
    DisconnectedLine,
    VoltageBands,
    RestorationTimes,
}

/// Steps of the answer, in layout order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnswerStep {
    EventLoading,
    GeneratorAdjustments,
    PostEventLoading,
    CostChange,
    RemainingViolations,
    PreOutageFlow,
    OutageOutcome,
    PostOutageVoltages,
    PostOutageFlows,
    Verdict,
    StartupOrder,
    EnergizationOrder,
    RestorationSchedule,
    VoltageSummary,
    VoltageDeviations,
    VoltageActions,
    IncrementalCost,
    UnitCosts,
    TotalCost,
    LossBalance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Template {
    pub id: &'static str,
    pub task: TaskKind,
    pub instruction_text: &'static str,
    pub input_layout: &'static [InputField],
    pub answer_layout: &'static [AnswerStep],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("template {template} renders {expected:?} scenarios, got {got:?}")]
    TemplateMismatch {
        template: &'static str,
        expected: TaskKind,
        got: TaskKind,
    },
}

const ADJUSTMENT: Template = Template {
    id: "operation_adjustment.v1",
    task: TaskKind::OperationAdjustment,
    instruction_text: "Task: operation adjustment. You are a power system dispatch expert. The grid below was running at \
the listed least-cost operating point when the transfer capacity of its most loaded lines was reduced. Work through \
the event step by step: check which reduced lines are now overloaded, redispatch the generators to clear the \
overloads while keeping supply and demand balanced, and report the output change of every unit, the resulting line \
loadings and the change in generation cost.",
    input_layout: &[
        InputField::CaseSummary,
        InputField::BusLoads,
        InputField::GeneratorDispatch,
        InputField::BranchFlows,
        InputField::CapacityEvent,
    ],
    answer_layout: &[
        AnswerStep::EventLoading,
        AnswerStep::GeneratorAdjustments,
        AnswerStep::PostEventLoading,
        AnswerStep::CostChange,
        AnswerStep::RemainingViolations,
    ],
};

const MONITORING: Template = Template {
    id: "operation_monitoring.v1",
    task: TaskKind::OperationMonitoring,
    instruction_text: "Task: operation monitoring. You are a power system dispatch expert supervising real-time \
operation. The dispatcher is about to disconnect the heavily loaded line named below while generator schedules stay \
fixed. Assess the action step by step: state the line's pre-outage flow, determine whether the network stays \
connected and whether the post-outage power flow converges, check that every bus voltage remains inside the normal \
operating range, and give a final verdict of SAFE or UNSAFE.",
    input_layout: &[
        InputField::CaseSummary,
        InputField::BusLoads,
        InputField::GeneratorDispatch,
        InputField::BusVoltages,
        InputField::BranchFlows,
        InputField::VoltageBands,
        InputField::DisconnectedLine,
    ],
    answer_layout: &[
        AnswerStep::PreOutageFlow,
        AnswerStep::OutageOutcome,
        AnswerStep::PostOutageVoltages,
        AnswerStep::PostOutageFlows,
        AnswerStep::Verdict,
    ],
};

const BLACK_START: Template = Template {
    id: "black_start.v1",
    task: TaskKind::BlackStart,
    instruction_text: "Task: black start. You are a power system restoration expert. The grid below has suffered a \
complete blackout. Using each generator's capacity, its ramp rate and its electrical distance to load buses, determine \
the start-up sequence of the generators. Then, starting from the first (cranking) unit and using the listed line \
restoration times, determine the order in which buses are re-energized, restoring critical load buses first, and \
merge both sequences into one timed restoration schedule.",
    input_layout: &[
        InputField::CaseSummary,
        InputField::GeneratorParameters,
        InputField::BusLoads,
        InputField::RestorationTimes,
    ],
    answer_layout: &[AnswerStep::StartupOrder, AnswerStep::EnergizationOrder, AnswerStep::RestorationSchedule],
};

const VOLTAGE_BOUNDARY: Template = Template {
    id: "voltage_boundary.v1",
    task: TaskKind::VoltageBoundary,
    instruction_text: "Task: voltage boundary check. You are a power system dispatch expert responsible for voltage \
control. For the operating point below, classify every bus voltage against the given warning and critical bands, \
list the buses that leave the normal range, and recommend corrective actions that bring them back inside it, such as \
adjusting generator voltage setpoints or reactive power support near the affected buses.",
    input_layout: &[
        InputField::CaseSummary,
        InputField::BusLoads,
        InputField::GeneratorDispatch,
        InputField::BusVoltages,
        InputField::VoltageBands,
    ],
    answer_layout: &[AnswerStep::VoltageSummary, AnswerStep::VoltageDeviations, AnswerStep::VoltageActions],
};

const GENERATION_COST: Template = Template {
    id: "generation_cost.v1",
    task: TaskKind::GenerationCost,
    instruction_text: "Task: generation cost calculation. You are a power system dispatch expert. Given the quadratic \
cost curve and output limits of every generator and the bus loads below, determine the least-cost dispatch that \
covers the demand plus network losses. Show the calculation step by step: the system incremental cost, the output \
and marginal cost of each unit with any limits that bind, the cost of each unit and the total hourly generation cost.",
    input_layout: &[
        InputField::CaseSummary,
        InputField::BusLoads,
        InputField::GeneratorCosts,
        InputField::BranchFlows,
    ],
    answer_layout: &[AnswerStep::IncrementalCost, AnswerStep::UnitCosts, AnswerStep::TotalCost, AnswerStep::LossBalance],
};

/// The frozen template of each dispatch task.
pub fn template_for(task: TaskKind) -> Option<&'static Template> {
    match task {
        TaskKind::OperationAdjustment => Some(&ADJUSTMENT),
        TaskKind::OperationMonitoring => Some(&MONITORING),
        TaskKind::BlackStart => Some(&BLACK_START),
        TaskKind::VoltageBoundary => Some(&VOLTAGE_BOUNDARY),
        TaskKind::GenerationCost => Some(&GENERATION_COST),
        TaskKind::Knowledge => None,
    }
}

/// Four decimals with an explicit sign.
fn signed4(x: f64) -> String {
    let s = f4(x);
    if s.starts_with('-') {
        s
    } else {
        format!("+{s}")
    }
}

/// Four decimals, without a negative sign on zero.
fn f4(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

struct Ctx<'a> {
    base: &'a GridCase,
    /// Case as the scenario saw it (sampled loads, episode restore times).
    case: GridCase,
    scenario: &'a Scenario,
    point: Option<&'a OperatingPoint>,
}

impl Ctx<'_> {
    fn branch_label(&self, k: usize) -> String {
        let br = &self.case.branches[k];
        format!("L{} ({}-{})", k + 1, br.from_bus, br.to_bus)
    }

    fn unit_label(&self, g: usize) -> String {
        format!("G{} @ bus {}", g + 1, self.case.generators[g].bus)
    }
}

/// Renders one scenario into an instruction record.
///
/// `case` is the unmodified case the scenario was generated from and
/// `seed` the scenario configuration seed.
pub fn render(
    template: &Template,
    case: &GridCase,
    scenario: &Scenario,
    seed: u64,
) -> Result<InstructionRecord, TemplateError> {
    if template.task != scenario.task() {
        return Err(TemplateError::TemplateMismatch {
            template: template.id,
            expected: template.task,
            got: scenario.task(),
        });
    }
    let (scenario_case, point) = match scenario {
        Scenario::Adjustment(s) => (s.sample.apply(case), Some(&s.pre)),
        Scenario::Monitoring(s) => (s.sample.apply(case), Some(&s.pre)),
        Scenario::BlackStart(s) => (s.episode_case(case), None),
        Scenario::VoltageBoundary(s) | Scenario::GenerationCost(s) => {
            (s.sample.apply(case), Some(&s.point))
        }
    };
    let ctx = Ctx {
        base: case,
        case: scenario_case,
        scenario,
        point,
    };
    let mut input = String::new();
    for field in template.input_layout {
        render_field(&ctx, *field, &mut input);
    }
    let mut output = String::new();
    for step in template.answer_layout {
        render_step(&ctx, *step, &mut output);
    }
    Ok(InstructionRecord {
        instruction: template.instruction_text.to_string(),
        input: input.trim_end().to_string(),
        output: output.trim_end().to_string(),
        meta: RecordMeta {
            task: template.task,
            case_name: case.name.clone(),
            seed,
            sample_index: scenario.index(),
            opf_method: OPF_METHOD.to_string(),
            template_version: TEMPLATE_VERSION.to_string(),
        },
    })
}

fn render_field(ctx: &Ctx, field: InputField, out: &mut String) {
    let case = &ctx.case;
    match field {
        InputField::CaseSummary => {
            let q: f64 = case.buses.iter().map(|b| b.q_demand).sum();
            let _ = writeln!(
                out,
                "System: {}, {} buses, {} branches, {} generators, base {} MVA, total load {} MW / {} MVAr",
                case.name,
                case.buses.len(),
                case.branches.len(),
                case.generators.len(),
                f4(case.base_mva),
                f4(case.total_p_demand()),
                f4(q)
            );
        }
        InputField::BusLoads => {
            out.push_str("Bus loads (bus: P MW, Q MVAr):\n");
            for b in case.buses.iter().filter(|b| b.has_demand()) {
                let _ = writeln!(out, "- {}: {}, {}", b.id, f4(b.p_demand), f4(b.q_demand));
            }
        }
        InputField::BusVoltages => {
            let Some(op) = ctx.point else { return };
            out.push_str("Bus voltages (bus: |V| p.u., angle deg):\n");
            let sol = &op.solution;
            for i in (0..sol.bus_ids.len()).filter(|&i| sol.energized[i]) {
                let _ = writeln!(
                    out,
                    "- {}: {}, {}",
                    sol.bus_ids[i],
                    f4(sol.v_mag[i]),
                    f4(sol.v_ang[i].to_degrees())
                );
            }
        }
        InputField::GeneratorDispatch => {
            let Some(op) = ctx.point else { return };
            out.push_str("Generator dispatch (unit: P MW, Q MVAr, limits MW):\n");
            let sol = &op.solution;
            for (j, &g) in op.generators.iter().enumerate() {
                let gen = &case.generators[g];
                let q = sol
                    .q_gen
                    .iter()
                    .find(|r| r.bus == gen.bus)
                    .map_or(0.0, |r| r.q_mvar);
                let _ = writeln!(
                    out,
                    "- {}: {}, {}, {}-{}",
                    ctx.unit_label(g),
                    f4(op.dispatch.p_out[j]),
                    f4(q),
                    f4(gen.p_min),
                    f4(gen.p_max)
                );
            }
        }
        InputField::GeneratorCosts => {
            out.push_str(
                "Generator cost curves (unit: c2 $/MW^2h, c1 $/MWh, c0 $/h, limits MW):\n",
            );
            for g in case.online_generators() {
                let gen = &case.generators[g];
                if let Some(c) = case.cost_of(g) {
                    let _ = writeln!(
                        out,
                        "- {}: {}, {}, {}, {}-{}",
                        ctx.unit_label(g),
                        f4(c.c2),
                        f4(c.c1),
                        f4(c.c0),
                        f4(gen.p_min),
                        f4(gen.p_max)
                    );
                }
            }
        }
        InputField::GeneratorParameters => {
            out.push_str(
                "Generator parameters (unit: capacity MW, ramp MW/period, hops to nearest load):\n",
            );
            let idx = case.bus_index();
            let loads: Vec<usize> = (0..case.buses.len())
                .filter(|&i| case.buses[i].p_demand > 0.0)
                .collect();
            let hops = hop_distances(case, &loads);
            for g in case.online_generators() {
                let gen = &case.generators[g];
                let d = hops[idx.of(gen.bus)].map_or("none".to_string(), |d| d.to_string());
                let _ = writeln!(
                    out,
                    "- {}: {}, {}, {}",
                    ctx.unit_label(g),
                    f4(gen.p_max),
                    f4(gen.ramp_rate),
                    d
                );
            }
        }
        InputField::BranchFlows => {
            let Some(op) = ctx.point else { return };
            out.push_str("Branch flows (branch: P MW, Q MVAr at the from end, rating MVA):\n");
            let sol = &op.solution;
            for (k, br) in case
                .branches
                .iter()
                .enumerate()
                .filter(|(_, b)| b.in_service())
            {
                let s = sol.branch_from_flow[k];
                let _ = writeln!(
                    out,
                    "- {}: {}, {}, {}",
                    ctx.branch_label(k),
                    f4(s.re),
                    f4(s.im),
                    rating(br.rate_mva)
                );
            }
        }
        InputField::CapacityEvent => {
            let Scenario::Adjustment(s) = ctx.scenario else {
                return;
            };
            out.push_str("Capacity event (branch: rating before -> after MVA):\n");
            for r in &s.reduced_lines {
                let _ = writeln!(
                    out,
                    "- {}: {} -> {}",
                    ctx.branch_label(r.branch),
                    rating(r.old_rate),
                    f4(r.new_rate)
                );
            }
        }
        InputField::DisconnectedLine => {
            let Scenario::Monitoring(s) = ctx.scenario else {
                return;
            };
            let _ = writeln!(
                out,
                "Dispatcher action: disconnect {}",
                ctx.branch_label(s.disconnected_line)
            );
        }
        InputField::VoltageBands => {
            let t = match ctx.scenario {
                Scenario::Monitoring(s) => s.thresholds,
                Scenario::VoltageBoundary(s) => s.thresholds,
                _ => return,
            };
            let [cl, wl, wh, ch] = t.as_array();
            let _ = writeln!(
                out,
                "Voltage bands (p.u.): normal {}-{}, critical below {} or above {}",
                f4(wl),
                f4(wh),
                f4(cl),
                f4(ch)
            );
        }
        InputField::RestorationTimes => {
            out.push_str("Line restoration times (branch: periods):\n");
            for (k, br) in case
                .branches
                .iter()
                .enumerate()
                .filter(|(_, b)| b.in_service())
            {
                let _ = writeln!(out, "- {}: {}", ctx.branch_label(k), f4(br.restore_time));
            }
        }
    }
}

fn rating(rate: f64) -> String {
    if rate <= 0.0 || rate >= UNLIMITED_RATING_MVA {
        "unlimited".into()
    } else {
        f4(rate)
    }
}

fn loading_verdict(ratio: f64) -> &'static str {
    if ratio > 1.0 {
        "overloaded"
    } else {
        "within rating"
    }
}

fn render_step(ctx: &Ctx, step: AnswerStep, out: &mut String) {
    match (step, ctx.scenario) {
        (AnswerStep::EventLoading, Scenario::Adjustment(s)) => {
            out.push_str("1. Loading after the capacity reduction:\n");
            for r in &s.reduced_lines {
                let ratio = r.pre_flow_mva / r.new_rate;
                let _ = writeln!(
                    out,
                    "- {}: {} / {} MVA = {}, {}",
                    ctx.branch_label(r.branch),
                    f4(r.pre_flow_mva),
                    f4(r.new_rate),
                    f4(ratio),
                    loading_verdict(ratio)
                );
            }
        }
        (AnswerStep::GeneratorAdjustments, Scenario::Adjustment(s)) => {
            match &s.required_adjustments {
                Some(adj) => {
                    out.push_str("2. Output adjustments (unit: before -> after MW, change):\n");
                    for a in adj {
                        let _ = writeln!(
                            out,
                            "- {}: {} -> {}, {}",
                            ctx.unit_label(a.generator),
                            f4(a.pre_mw),
                            f4(a.post_mw),
                            signed4(a.delta_mw)
                        );
                    }
                }
                None => out
                    .push_str("2. No feasible redispatch was found for the post-event network.\n"),
            }
        }
        (AnswerStep::PostEventLoading, Scenario::Adjustment(s)) => {
            let AdjustmentPost::Solved { point } = &s.post else {
                let _ = writeln!(out, "3. Post-event power flow: {}", post_failure(&s.post));
                return;
            };
            let case = s.post_case(ctx.base);
            let ratios = loading_ratios(&case, &point.solution);
            out.push_str("3. Loading after redispatch:\n");
            for r in &s.reduced_lines {
                let _ = writeln!(
                    out,
                    "- {}: {}, {}",
                    ctx.branch_label(r.branch),
                    f4(ratios[r.branch]),
                    loading_verdict(ratios[r.branch])
                );
            }
        }
        (AnswerStep::CostChange, Scenario::Adjustment(s)) => {
            if let AdjustmentPost::Solved { point } = &s.post {
                let before = s.pre.dispatch.total_cost;
                let after = point.dispatch.total_cost;
                let _ = writeln!(
                    out,
                    "4. Generation cost: {} -> {} $/h ({} $/h)",
                    f4(before),
                    f4(after),
                    signed4(after - before)
                );
            }
        }
        (AnswerStep::RemainingViolations, Scenario::Adjustment(s)) => {
            if let AdjustmentPost::Solved { point } = &s.post {
                let remaining = describe_violations(ctx, point);
                if remaining.is_empty() {
                    out.push_str("5. Remaining violations: none.\n");
                } else {
                    let _ = writeln!(out, "5. Remaining violations: {}.", remaining.join("; "));
                }
            }
        }
        (AnswerStep::PreOutageFlow, Scenario::Monitoring(s)) => {
            let f = s.pre.solution.branch_from_flow[s.disconnected_line];
            let _ = writeln!(
                out,
                "1. Before the outage {} carries {} MW and {} MVAr; it is one of the {} most loaded lines.",
                ctx.branch_label(s.disconnected_line),
                f4(f.re),
                f4(f.im),
                s.pool.len()
            );
        }
        (AnswerStep::OutageOutcome, Scenario::Monitoring(s)) => {
            let text = match &s.post_result {
                PostResult::Converged { point } => format!(
                    "the network stays connected and the power flow converges in {} iterations; \
the slack unit now supplies {} MW",
                    point.solution.iterations,
                    f4(point.solution.p_slack)
                ),
                PostResult::Diverged { iterations, .. } => {
                    format!("the network stays connected but the power flow diverges after {iterations} iterations")
                }
                PostResult::Islanded { buses } => format!(
                    "the network splits and load buses {} lose every source of generation",
                    buses
                        .iter()
                        .map(|b| b.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            };
            let _ = writeln!(out, "2. After the outage {text}.");
        }
        (AnswerStep::PostOutageVoltages, Scenario::Monitoring(s)) => {
            let PostResult::Converged { point } = &s.post_result else {
                out.push_str("3. No post-outage voltages exist.\n");
                return;
            };
            let sol = &point.solution;
            let live: Vec<usize> = (0..sol.bus_ids.len())
                .filter(|&i| sol.energized[i])
                .collect();
            let lo = *live
                .iter()
                .min_by(|&&a, &&b| sol.v_mag[a].total_cmp(&sol.v_mag[b]))
                .expect("energized bus");
            let hi = *live
                .iter()
                .max_by(|&&a, &&b| sol.v_mag[a].total_cmp(&sol.v_mag[b]))
                .expect("energized bus");
            let _ = write!(
                out,
                "3. Post-outage voltages range from {} p.u. at bus {} to {} p.u. at bus {}",
                f4(sol.v_mag[lo]),
                sol.bus_ids[lo],
                f4(sol.v_mag[hi]),
                sol.bus_ids[hi]
            );
            if s.critical_buses.is_empty() {
                out.push_str("; no bus is in the critical band.\n");
            } else {
                let list: Vec<String> = s.critical_buses.iter().map(|b| b.to_string()).collect();
                let _ = writeln!(out, "; critical buses: {}.", list.join(", "));
            }
        }
        (AnswerStep::PostOutageFlows, Scenario::Monitoring(s)) => {
            let PostResult::Converged { point } = &s.post_result else {
                return;
            };
            let case = {
                let mut c = ctx.case.clone();
                c.branches[s.disconnected_line].status = crate::grid::BranchStatus::Out;
                c
            };
            let sol = &point.solution;
            let mags: Vec<f64> = (0..case.branches.len())
                .map(|k| {
                    sol.branch_from_flow[k]
                        .norm()
                        .max(sol.branch_to_flow[k].norm())
                })
                .collect();
            let ranked = rank_by_loading(&case, &mags);
            out.push_str("4. Heaviest post-outage flows:\n");
            for &k in ranked.iter().take(3) {
                let _ = writeln!(
                    out,
                    "- {}: {} MW, {} MVA",
                    ctx.branch_label(k),
                    f4(sol.branch_from_flow[k].re),
                    f4(mags[k])
                );
            }
        }
        (AnswerStep::Verdict, Scenario::Monitoring(s)) => {
            let (word, why) = match (&s.label, &s.post_result) {
                (SafetyLabel::Safe, _) => (
                    "SAFE",
                    "the post-outage state is solvable with all voltages in range",
                ),
                (SafetyLabel::Unsafe, PostResult::Islanded { .. }) => {
                    ("UNSAFE", "the outage disconnects load from generation")
                }
                (SafetyLabel::Unsafe, PostResult::Diverged { .. }) => {
                    ("UNSAFE", "the post-outage power flow has no solution")
                }
                (SafetyLabel::Unsafe, PostResult::Converged { .. }) => {
                    ("UNSAFE", "bus voltages leave the critical band")
                }
            };
            let _ = writeln!(out, "Verdict: {word}, because {why}.");
        }
        (AnswerStep::StartupOrder, Scenario::BlackStart(s)) => {
            let gp = &s.plan.generator_plan;
            let seq: Vec<String> = gp
                .order
                .iter()
                .zip(&gp.per_generator_score)
                .map(|(&g, &score)| {
                    format!(
                        "G{} (bus {}, score {})",
                        g + 1,
                        ctx.case.generators[g].bus,
                        f4(score)
                    )
                })
                .collect();
            let _ = writeln!(
                out,
                "1. Generator start-up order: {}; sequence fitness {}.",
                seq.join(", "),
                f4(gp.fitness)
            );
        }
        (AnswerStep::EnergizationOrder, Scenario::BlackStart(s)) => {
            let seq: Vec<String> = s
                .plan
                .node_plan
                .order
                .iter()
                .map(|b| b.to_string())
                .collect();
            let _ = writeln!(out, "2. Bus energization order: {}.", seq.join(", "));
            if !s.plan.unreachable.is_empty() {
                let un: Vec<String> = s.plan.unreachable.iter().map(|b| b.to_string()).collect();
                let _ = writeln!(out, "Buses without a restoration path: {}.", un.join(", "));
            }
        }
        (AnswerStep::RestorationSchedule, Scenario::BlackStart(s)) => {
            out.push_str("3. Restoration schedule:\n");
            for e in &s.plan.merged {
                match e {
                    RestorationEvent::EnergizeBus { time, bus } => {
                        let _ = writeln!(out, "- t={}: energize bus {bus}", f4(*time));
                    }
                    RestorationEvent::StartGenerator {
                        time,
                        generator,
                        bus,
                    } => {
                        let _ = writeln!(
                            out,
                            "- t={}: start G{} at bus {bus}",
                            f4(*time),
                            generator + 1
                        );
                    }
                }
            }
        }
        (AnswerStep::VoltageSummary, Scenario::VoltageBoundary(s)) => {
            let count = |st: VoltageStatus| s.voltage.iter().filter(|v| v.status == st).count();
            let _ = writeln!(
                out,
                "1. Of {} energized buses, {} are normal, {} in the warning band and {} critical.",
                s.voltage.len(),
                count(VoltageStatus::Normal),
                count(VoltageStatus::Warning),
                count(VoltageStatus::Critical)
            );
        }
        (AnswerStep::VoltageDeviations, Scenario::VoltageBoundary(s)) => {
            let off: Vec<_> = s
                .voltage
                .iter()
                .filter(|v| v.status != VoltageStatus::Normal)
                .collect();
            if off.is_empty() {
                out.push_str("2. Every bus voltage is inside the normal range.\n");
                return;
            }
            out.push_str("2. Buses outside the normal range:\n");
            for v in off {
                let status = if v.status == VoltageStatus::Critical {
                    "critical"
                } else {
                    "warning"
                };
                let _ = writeln!(out, "- bus {}: {} p.u., {status}", v.bus, f4(v.v_mag));
            }
        }
        (AnswerStep::VoltageActions, Scenario::VoltageBoundary(s)) => {
            let [_, warn_lo, warn_hi, _] = s.thresholds.as_array();
            let actions = voltage_actions(ctx, s, warn_lo, warn_hi);
            if actions.is_empty() {
                out.push_str("3. No corrective action is needed.\n");
            } else {
                out.push_str("3. Recommended actions:\n");
                for a in actions {
                    let _ = writeln!(out, "- {a}");
                }
            }
        }
        (AnswerStep::IncrementalCost, Scenario::GenerationCost(s)) => {
            let _ = writeln!(
                out,
                "1. Dispatching {} MW (load {} MW plus losses) gives a system incremental cost of {} $/MWh.",
                f4(s.point.total_generation()),
                f4(ctx.case.total_p_demand()),
                f4(s.point.dispatch.lambda)
            );
        }
        (AnswerStep::UnitCosts, Scenario::GenerationCost(s)) => {
            out.push_str("2. Unit outputs (unit: P MW, marginal $/MWh, cost $/h):\n");
            let op = &s.point;
            for (j, &g) in op.generators.iter().enumerate() {
                let p = op.dispatch.p_out[j];
                let c = ctx.case.cost_of(g).expect("dispatched units have costs");
                let bind = match op.dispatch.binding[j] {
                    Binding::Interior => "",
                    Binding::AtMin => ", at minimum",
                    Binding::AtMax => ", at maximum",
                };
                let _ = writeln!(
                    out,
                    "- {}: {}, {}, {}{bind}",
                    ctx.unit_label(g),
                    f4(p),
                    f4(c.marginal(p)),
                    f4(c.cost(p))
                );
            }
        }
        (AnswerStep::TotalCost, Scenario::GenerationCost(s)) => {
            let _ = writeln!(
                out,
                "3. Total generation cost: {} $/h.",
                f4(s.point.dispatch.total_cost)
            );
        }
        (AnswerStep::LossBalance, Scenario::GenerationCost(s)) => {
            let sol = &s.point.solution;
            let _ = writeln!(
                out,
                "4. Network losses are {} MW; the slack unit supplies {} MW in the power flow.",
                f4(sol.total_losses()),
                f4(sol.p_slack)
            );
        }
        _ => {}
    }
}

fn post_failure(post: &AdjustmentPost) -> String {
    match post {
        AdjustmentPost::Solved { .. } => "solved".into(),
        AdjustmentPost::Diverged { iterations, .. } => {
            format!("diverged after {iterations} iterations")
        }
        AdjustmentPost::Infeasible { reason } => format!("infeasible ({reason})"),
    }
}

fn describe_violations(ctx: &Ctx, op: &OperatingPoint) -> Vec<String> {
    op.violations
        .iter()
        .map(|v| match (&v.element, v.kind) {
            (Element::Branch { index, .. }, _) => {
                format!("{} loaded at {}", ctx.branch_label(*index), f4(v.magnitude))
            }
            (Element::Bus { id }, ViolationKind::VoltageHigh) => {
                format!("bus {id} {} p.u. above its limit", f4(v.magnitude))
            }
            (Element::Bus { id }, _) => {
                format!("bus {id} {} p.u. below its limit", f4(v.magnitude))
            }
        })
        .collect()
}

fn voltage_actions(ctx: &Ctx, s: &OperatingSnapshot, warn_lo: f64, warn_hi: f64) -> Vec<String> {
    let case = &ctx.case;
    let idx = case.bus_index();
    let mut out = Vec::new();
    let (mut absorb, mut support) = (Vec::new(), Vec::new());
    for v in s
        .voltage
        .iter()
        .filter(|v| v.status != VoltageStatus::Normal)
    {
        let bus = &case.buses[idx.of(v.bus)];
        let regulated =
            bus.kind != BusKind::PQ && case.generators.iter().any(|g| g.bus == v.bus && g.is_on());
        let high = v.v_mag > warn_hi;
        match (regulated, high) {
            (true, true) => out.push(format!(
                "lower the setpoint at bus {} from {} to {} p.u.",
                v.bus,
                f4(v.v_mag),
                f4(warn_hi)
            )),
            (true, false) => out.push(format!(
                "raise the setpoint at bus {} from {} to {} p.u.",
                v.bus,
                f4(v.v_mag),
                f4(warn_lo)
            )),
            (false, true) => absorb.push(v.bus.to_string()),
            (false, false) => support.push(v.bus.to_string()),
        }
    }
    if !absorb.is_empty() {
        out.push(format!(
            "absorb reactive power near buses {} once nearby setpoints are lowered",
            absorb.join(", ")
        ));
    }
    if !support.is_empty() {
        out.push(format!(
            "add reactive support (shunt capacitance) near buses {}",
            support.join(", ")
        ));
    }
    out
}
