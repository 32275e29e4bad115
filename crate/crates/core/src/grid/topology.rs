use std::collections::VecDeque;

use super::{BusId, GridCase};

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Component label per bus position. Labels are dense, numbered in order of
/// each component's first bus position. Returns `(labels, component_count)`.
pub fn component_labels(case: &GridCase, respect_status: bool) -> (Vec<usize>, usize) {
    let idx = case.bus_index();
    let n = case.buses.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for br in &case.branches {
        if respect_status && !br.in_service() {
            continue;
        }
        let (Some(f), Some(t)) = (idx.get(br.from_bus), idx.get(br.to_bus)) else {
            continue;
        };
        let (rf, rt) = (find(&mut parent, f), find(&mut parent, t));
        if rf != rt {
            parent[rf.max(rt)] = rf.min(rt);
        }
    }
    let mut label_of_root = vec![usize::MAX; n];
    let mut count = 0;
    let labels = (0..n)
        .map(|i| {
            let root = find(&mut parent, i);
            if label_of_root[root] == usize::MAX {
                label_of_root[root] = count;
                count += 1;
            }
            label_of_root[root]
        })
        .collect();
    (labels, count)
}

/// Partition of all bus ids into maximal connected sets. Each set is sorted
/// ascending and sets are ordered by their smallest id.
pub fn connected_components(case: &GridCase, respect_status: bool) -> Vec<Vec<BusId>> {
    let (labels, count) = component_labels(case, respect_status);
    let mut parts = vec![Vec::new(); count];
    for (bus, &label) in case.buses.iter().zip(&labels) {
        parts[label].push(bus.id);
    }
    for part in &mut parts {
        part.sort();
    }
    parts.sort_by_key(|p| p[0]);
    parts
}

/// Unweighted hop distance from the nearest of `sources` (bus positions) over
/// in-service branches; `None` for unreachable buses.
pub fn hop_distances(case: &GridCase, sources: &[usize]) -> Vec<Option<usize>> {
    let idx = case.bus_index();
    let n = case.buses.len();
    let mut adj = vec![Vec::new(); n];
    for br in case.branches.iter().filter(|b| b.in_service()) {
        let (f, t) = (idx.of(br.from_bus), idx.of(br.to_bus));
        adj[f].push(t);
        adj[t].push(f);
    }
    let mut dist = vec![None; n];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s].is_none() {
            dist[s] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}
