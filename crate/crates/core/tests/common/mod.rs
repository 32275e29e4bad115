//! Independent oracles shared by the integration and acceptance suites.
#![allow(dead_code)]

use std::collections::BinaryHeap;

use dispatchgen::grid::{
    Branch, BranchStatus, Bus, BusId, BusKind, CostCurve, GenStatus, Generator, GridCase,
};
use dispatchgen::rng::{Family, Substream};

/// A random economic dispatch instance with limits and demand on a 0.01 MW grid.
pub struct DispatchProblem {
    pub costs: Vec<CostCurve>,
    pub limits: Vec<(f64, f64)>,
    pub demand: f64,
    /// Limits and demand in hundredths of a MW.
    pub grid_limits: Vec<(i64, i64)>,
    pub grid_demand: i64,
}

pub fn random_dispatch_problem(seed: u64) -> DispatchProblem {
    let mut rng = Substream::new(seed, Family::Corpus, 9_000);
    let n = 2 + rng.below(3);
    let mut costs = Vec::new();
    let mut grid_limits = Vec::new();
    for g in 0..n {
        costs.push(CostCurve {
            generator_index: g,
            c2: rng.uniform(0.001, 0.1),
            c1: rng.uniform(5.0, 40.0),
            c0: rng.uniform(0.0, 50.0),
        });
        let lo = rng.below(501) as i64;
        let hi = lo + 500 + rng.below(2001) as i64;
        grid_limits.push((lo, hi));
    }
    let sum_lo: i64 = grid_limits.iter().map(|l| l.0).sum();
    let sum_hi: i64 = grid_limits.iter().map(|l| l.1).sum();
    let grid_demand = sum_lo + rng.below((sum_hi - sum_lo + 1) as usize) as i64;
    DispatchProblem {
        limits: grid_limits
            .iter()
            .map(|&(a, b)| (a as f64 / 100.0, b as f64 / 100.0))
            .collect(),
        demand: grid_demand as f64 / 100.0,
        costs,
        grid_limits,
        grid_demand,
    }
}

/// Minimum cost over every dispatch on the 0.01 MW grid that meets demand
/// exactly, by exhaustive min-plus recursion over generators.
pub fn grid_search_cost(p: &DispatchProblem) -> f64 {
    let n = p.costs.len();
    let d = p.grid_demand;
    let cost = |g: usize, units: i64| p.costs[g].cost(units as f64 / 100.0);
    // best[x - lo] = cheapest way to produce x with the generators so far.
    let (mut lo, mut hi) = p.grid_limits[0];
    let mut best: Vec<f64> = (lo..=hi).map(|x| cost(0, x)).collect();
    for g in 1..n {
        let (a, b) = p.grid_limits[g];
        let rest_lo: i64 = p.grid_limits[g + 1..].iter().map(|l| l.0).sum();
        let rest_hi: i64 = p.grid_limits[g + 1..].iter().map(|l| l.1).sum();
        let new_lo = (lo + a).max(d - rest_hi);
        let new_hi = (hi + b).min(d - rest_lo);
        let mut next = vec![f64::INFINITY; (new_hi - new_lo + 1).max(0) as usize];
        for x in new_lo..=new_hi {
            let mut m = f64::INFINITY;
            for q in a..=b {
                let prev = x - q;
                if prev < lo || prev > hi {
                    continue;
                }
                let c = cost(g, q) + best[(prev - lo) as usize];
                if c < m {
                    m = c;
                }
            }
            next[(x - new_lo) as usize] = m;
        }
        best = next;
        lo = new_lo;
        hi = new_hi;
    }
    best[(d - lo) as usize]
}

/// Random connected graph: a random spanning tree plus extra edges, weights
/// integral in 1..=10.
pub fn random_connected_graph(seed: u64, max_nodes: usize) -> (usize, Vec<(usize, usize, f64)>) {
    let mut rng = Substream::new(seed, Family::Corpus, 9_100);
    let n = 2 + rng.below(max_nodes - 1);
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.below(v);
        edges.push((u, v, (1 + rng.below(10)) as f64));
    }
    for _ in 0..rng.below(2 * n) {
        let (u, v) = (rng.below(n), rng.below(n));
        if u != v {
            edges.push((u, v, (1 + rng.below(10)) as f64));
        }
    }
    (n, edges)
}

/// Multi-source Bellman-Ford distances on an undirected graph.
pub fn bellman_ford(
    n: usize,
    edges: &[(usize, usize, f64)],
    sources: &[usize],
) -> Vec<Option<f64>> {
    let mut dist = vec![f64::INFINITY; n];
    for &s in sources {
        dist[s] = 0.0;
    }
    for _ in 0..n {
        let mut changed = false;
        for &(u, v, w) in edges {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                changed = true;
            }
            if dist[v] + w < dist[u] {
                dist[u] = dist[v] + w;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    dist.into_iter()
        .map(|d| d.is_finite().then_some(d))
        .collect()
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i)
            } else {
                a.swap(c[i], i)
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Optimal k-center radius by trying every k-subset.
pub fn brute_force_k_center(points: &[Vec<f64>], k: usize) -> f64 {
    fn dist(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }
    fn rec(points: &[Vec<f64>], k: usize, start: usize, chosen: &mut Vec<usize>, best: &mut f64) {
        if chosen.len() == k {
            let r = points
                .iter()
                .map(|p| {
                    chosen
                        .iter()
                        .map(|&c| dist(p, &points[c]))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max);
            if r < *best {
                *best = r;
            }
            return;
        }
        for i in start..points.len() {
            chosen.push(i);
            rec(points, k, i + 1, chosen, best);
            chosen.pop();
        }
    }
    let mut best = f64::INFINITY;
    rec(points, k, 0, &mut Vec::new(), &mut best);
    best
}

/// Dijkstra reference kept only to cross-check the oracle itself.
pub fn dijkstra_reference(
    n: usize,
    edges: &[(usize, usize, f64)],
    source: usize,
) -> Vec<Option<f64>> {
    #[derive(PartialEq)]
    struct Item(f64, usize);
    impl Eq for Item {}
    impl PartialOrd for Item {
        fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Item {
        fn cmp(&self, o: &Self) -> std::cmp::Ordering {
            o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
        }
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v, w) in edges {
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    let mut dist = vec![None; n];
    let mut heap = BinaryHeap::from([Item(0.0, source)]);
    while let Some(Item(d, u)) = heap.pop() {
        if dist[u].is_some() {
            continue;
        }
        dist[u] = Some(d);
        for &(v, w) in &adj[u] {
            if dist[v].is_none() {
                heap.push(Item(d + w, v));
            }
        }
    }
    dist
}

/// A case whose buses are `1..=n` and whose branches are `edges` with the
/// weights as restore times. Bus 1 is the slack with a generator.
pub fn graph_case(n: usize, edges: &[(usize, usize, f64)]) -> GridCase {
    let buses = (0..n)
        .map(|i| Bus {
            id: BusId(i as u32 + 1),
            kind: if i == 0 { BusKind::Slack } else { BusKind::PQ },
            p_demand: if i % 3 == 1 { 10.0 } else { 0.0 },
            q_demand: 0.0,
            shunt_g: 0.0,
            shunt_b: 0.0,
            v_mag_init: 1.0,
            v_ang_init: 0.0,
            base_kv: 100.0,
            v_min: 0.9,
            v_max: 1.1,
        })
        .collect();
    let branches = edges
        .iter()
        .map(|&(u, v, w)| Branch {
            from_bus: BusId(u as u32 + 1),
            to_bus: BusId(v as u32 + 1),
            r: 0.01,
            x: 0.1,
            b_charging: 0.0,
            rate_mva: 0.0,
            status: BranchStatus::InService,
            tap_ratio: 1.0,
            phase_shift: 0.0,
            restore_time: w,
        })
        .collect();
    let generators = vec![Generator {
        bus: BusId(1),
        p_out: 0.0,
        q_out: 0.0,
        p_max: 100.0,
        p_min: 0.0,
        q_max: 100.0,
        q_min: -100.0,
        v_setpoint: 1.0,
        status: GenStatus::On,
        ramp_rate: 10.0,
    }];
    GridCase {
        name: "graph".into(),
        base_mva: 100.0,
        buses,
        branches,
        generators,
        cost_curves: Vec::new(),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
