#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::HashSet;

use super::{component_labels, BusKind, GridCase};

/// Lists every broken invariant of `case`; empty means valid.
///
/// Generators and branches are named by their 1-based row number, buses by
/// id.
pub fn validate(case: &GridCase) -> Vec<String> {
    let mut out = Vec::new();
    let idx = case.bus_index();

    if !(case.base_mva > 0.0) {
        out.push(format!("base_mva {} must be positive", case.base_mva));
    }
    let mut ids = HashSet::new();
    for bus in &case.buses {
        if !ids.insert(bus.id) {
            out.push(format!("bus {}: duplicate id", bus.id));
        }
        if !(bus.v_min > 0.0) {
            out.push(format!(
                "bus {}: v_min {} must be positive",
                bus.id, bus.v_min
            ));
        }
        if !(bus.v_min < bus.v_max) {
            out.push(format!(
                "bus {}: v_min {} not below v_max {}",
                bus.id, bus.v_min, bus.v_max
            ));
        }
    }

    for (n, br) in case.branches.iter().enumerate() {
        let name = format!("branch {}", n + 1);
        for end in [br.from_bus, br.to_bus] {
            if idx.get(end).is_none() {
                out.push(format!("{name}: unknown bus {end}"));
            }
        }
        if br.from_bus == br.to_bus {
            out.push(format!("{name}: both ends on bus {}", br.from_bus));
        }
        if br.r == 0.0 && br.x == 0.0 {
            out.push(format!("{name}: zero impedance"));
        }
        if !(br.rate_mva >= 0.0) {
            out.push(format!("{name}: negative rating {}", br.rate_mva));
        }
        if !(br.tap_ratio > 0.0) {
            out.push(format!(
                "{name}: tap ratio {} must be positive",
                br.tap_ratio
            ));
        }
        if !(br.restore_time > 0.0) {
            out.push(format!(
                "{name}: restore time {} must be positive",
                br.restore_time
            ));
        }
    }

    for (n, g) in case.generators.iter().enumerate() {
        let name = format!("gen {}", n + 1);
        if idx.get(g.bus).is_none() {
            out.push(format!("{name}: unknown bus {}", g.bus));
        }
        if !(g.p_min <= g.p_max) {
            out.push(format!(
                "{name}: p_min {} exceeds p_max {}",
                g.p_min, g.p_max
            ));
        }
        if !(g.q_min <= g.q_max) {
            out.push(format!(
                "{name}: q_min {} exceeds q_max {}",
                g.q_min, g.q_max
            ));
        }
        if !(g.ramp_rate > 0.0) {
            out.push(format!(
                "{name}: ramp rate {} must be positive",
                g.ramp_rate
            ));
        }
    }

    for (n, c) in case.cost_curves.iter().enumerate() {
        if c.generator_index >= case.generators.len() {
            out.push(format!(
                "cost curve {}: unknown generator index {}",
                n + 1,
                c.generator_index
            ));
        }
        if !(c.c2 >= 0.0) {
            out.push(format!(
                "cost curve {}: negative quadratic coefficient {}",
                n + 1,
                c.c2
            ));
        }
    }

    // Slack rule: one slack per energized component that carries generation.
    let (labels, count) = component_labels(case, true);
    let mut slacks = vec![Vec::new(); count];
    let mut has_gen = vec![false; count];
    for (i, bus) in case.buses.iter().enumerate() {
        if bus.kind == BusKind::Slack {
            slacks[labels[i]].push(bus.id);
        }
    }
    for g in case.generators.iter().filter(|g| g.is_on()) {
        if let Some(i) = idx.get(g.bus) {
            has_gen[labels[i]] = true;
        }
    }
    for c in 0..count {
        match slacks[c].len() {
            0 if has_gen[c] => {
                let first = case
                    .buses
                    .iter()
                    .zip(&labels)
                    .find(|(_, &l)| l == c)
                    .unwrap()
                    .0
                    .id;
                out.push(format!(
                    "component containing bus {first}: generation but no slack bus"
                ));
            }
            0 | 1 => {}
            _ => {
                let list: Vec<String> = slacks[c].iter().map(|b| b.to_string()).collect();
                out.push(format!(
                    "component with slack buses {}: more than one slack",
                    list.join(", ")
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::bundled;
    use crate::grid::testing::two_bus;

    #[test]
    fn bundled_cases_are_valid() {
        for name in bundled::NAMES {
            assert!(validate(&bundled::load(name).unwrap()).is_empty(), "{name}");
        }
    }

    #[test]
    fn names_offending_generator() {
        let mut case = bundled::case14();
        case.generators[1].p_min = 500.0;
        let v = validate(&case);
        assert_eq!(v.len(), 1);
        assert!(v[0].starts_with("gen 2:"), "{}", v[0]);
    }

    #[test]
    fn two_slacks_in_one_component() {
        let mut case = two_bus(5.0);
        case.buses[1].kind = BusKind::Slack;
        let v = validate(&case);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("more than one slack"));
    }

    #[test]
    fn separate_islands_may_each_have_a_slack() {
        let mut case = two_bus(5.0);
        case.buses[1].kind = BusKind::Slack;
        case.branches[0].status = crate::grid::BranchStatus::Out;
        assert!(validate(&case).is_empty());
    }

    #[test]
    fn flags_branch_defects() {
        let mut case = two_bus(5.0);
        case.branches[0].r = 0.0;
        case.branches[0].x = 0.0;
        case.branches[0].tap_ratio = 0.0;
        assert_eq!(validate(&case).len(), 2);
    }
}
