use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::BlackStartError;
use crate::grid::{BusId, GridCase};

/// Bus re-energization sequence. `order`, `path_edges` and
/// `cumulative_time` are aligned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRestorationPlan {
    pub sources: Vec<BusId>,
    pub order: Vec<BusId>,
    /// Branch indices from a source to the bus, source side first.
    pub path_edges: Vec<Vec<usize>>,
    pub cumulative_time: Vec<f64>,
}

impl NodeRestorationPlan {
    pub fn time_of(&self, bus: BusId) -> Option<f64> {
        self.order
            .iter()
            .position(|&b| b == bus)
            .map(|i| self.cumulative_time[i])
    }
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multi-source Dijkstra over in-service branches weighted by
/// `restore_time`. Buses are ordered by arrival time; among equal times,
/// buses with positive demand come first, then ascending id.
///
/// When some buses cannot be reached the error carries the plan for the
/// reachable part.
pub fn sssp_restoration(
    case: &GridCase,
    sources: &[BusId],
) -> Result<NodeRestorationPlan, BlackStartError> {
    let idx = case.bus_index();
    let n = case.buses.len();
    if sources.is_empty() {
        return Err(BlackStartError::NoSources);
    }
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, br) in case.branches.iter().enumerate() {
        if br.in_service() {
            let (f, t) = (idx.of(br.from_bus), idx.of(br.to_bus));
            adjacency[f].push((t, k));
            adjacency[t].push((f, k));
        }
    }

    let mut dist = vec![f64::INFINITY; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        let i = idx.get(s).ok_or(BlackStartError::UnknownBus(s))?;
        dist[i] = 0.0;
        heap.push(Entry(0.0, i));
    }
    while let Some(Entry(d, u)) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        for &(v, k) in &adjacency[u] {
            let nd = d + case.branches[k].restore_time;
            if nd < dist[v] {
                dist[v] = nd;
                parent[v] = Some((u, k));
                heap.push(Entry(nd, v));
            }
        }
    }

    let mut reached: Vec<usize> = (0..n).filter(|&i| settled[i]).collect();
    reached.sort_by(|&a, &b| {
        dist[a]
            .total_cmp(&dist[b])
            .then_with(|| (case.buses[b].p_demand > 0.0).cmp(&(case.buses[a].p_demand > 0.0)))
            .then_with(|| case.buses[a].id.cmp(&case.buses[b].id))
    });
    let path_edges = reached
        .iter()
        .map(|&i| {
            let mut path = Vec::new();
            let mut cur = i;
            while let Some((p, k)) = parent[cur] {
                path.push(k);
                cur = p;
            }
            path.reverse();
            path
        })
        .collect();
    let plan = NodeRestorationPlan {
        sources: sources.to_vec(),
        order: reached.iter().map(|&i| case.buses[i].id).collect(),
        path_edges,
        cumulative_time: reached.iter().map(|&i| dist[i]).collect(),
    };
    let unreachable: Vec<BusId> = (0..n)
        .filter(|&i| !settled[i])
        .map(|i| case.buses[i].id)
        .collect();
    if unreachable.is_empty() {
        Ok(plan)
    } else {
        Err(BlackStartError::UnreachableBuses {
            plan: Box::new(plan),
            unreachable,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::testing::{bus, line};
    use crate::grid::{BranchStatus, BusKind};

    fn path3() -> GridCase {
        let mut case = crate::grid::testing::two_bus(0.0);
        case.buses.push(bus(3, BusKind::PQ, 0.0));
        case.branches.push(line(2, 3, 0.01, 0.1));
        case
    }

    #[test]
    fn path_graph() {
        let plan = sssp_restoration(&path3(), &[BusId(1)]).unwrap();
        assert_eq!(plan.order, vec![BusId(1), BusId(2), BusId(3)]);
        assert_eq!(plan.cumulative_time, vec![0.0, 1.0, 2.0]);
        assert_eq!(plan.path_edges, vec![vec![], vec![0], vec![0, 1]]);
    }

    #[test]
    fn critical_loads_break_ties() {
        let mut case = path3();
        case.branches[1] = line(1, 3, 0.01, 0.1);
        case.buses[1].p_demand = 0.0;
        case.buses[2].p_demand = 5.0;
        let plan = sssp_restoration(&case, &[BusId(1)]).unwrap();
        assert_eq!(plan.order, vec![BusId(1), BusId(3), BusId(2)]);
    }

    #[test]
    fn unreachable_buses_are_listed() {
        let mut case = path3();
        case.branches[1].status = BranchStatus::Out;
        match sssp_restoration(&case, &[BusId(1)]) {
            Err(BlackStartError::UnreachableBuses { plan, unreachable }) => {
                assert_eq!(unreachable, vec![BusId(3)]);
                assert_eq!(plan.order, vec![BusId(1), BusId(2)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_bus_source() {
        let mut case = path3();
        case.buses.truncate(1);
        case.branches.clear();
        let plan = sssp_restoration(&case, &[BusId(1)]).unwrap();
        assert_eq!(plan.order, vec![BusId(1)]);
        assert_eq!(plan.cumulative_time, vec![0.0]);
    }
}
