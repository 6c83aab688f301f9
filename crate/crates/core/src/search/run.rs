//! Single executions of the four planning algorithms.
//!
//! Run-time units, fixed here and covered by hand-trace tests:
//! random walk = trace length in states; BFS = dequeue iterations up to and
//! including the iteration that visits the subgoal (the subgoal is recognized
//! when discovered, so intervening queue entries are not simulated); DFS and
//! IDDFS = recursive invocations, root call included, cumulative across
//! depth-limited passes for IDDFS.

use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::seq::SliceRandom;
use rand::Rng;

/// One plan together with the work spent finding it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub plan: Vec<usize>,
    pub runtime: u64,
}

impl SearchOutcome {
    /// One sampled reward: plan utility -|pi| minus run-time.
    pub fn reward(&self) -> f64 {
        -(self.plan.len() as f64) - self.runtime as f64
    }
}

/// Per-state work counter for expansion heat maps; counting must never
/// change the run itself.
trait Visit {
    fn visit(&mut self, state: usize);
}

struct NoVisit;
impl Visit for NoVisit {
    #[inline(always)]
    fn visit(&mut self, _: usize) {}
}

impl Visit for &mut [u64] {
    #[inline(always)]
    fn visit(&mut self, state: usize) {
        self[state] += 1;
    }
}

pub const RW_STEP_CAP: u64 = 10_000_000;

/// Uniform random walk from `s` until first arrival at `z`. The plan is the
/// full trace; the step cap guards pathological inputs.
pub fn run_random_walk<R: Rng>(g: &Graph, s: usize, z: usize, rng: &mut R) -> Result<SearchOutcome> {
    walk(g, s, z, rng, RW_STEP_CAP, &mut NoVisit)
}

pub fn run_random_walk_capped<R: Rng>(
    g: &Graph,
    s: usize,
    z: usize,
    rng: &mut R,
    step_cap: u64,
) -> Result<SearchOutcome> {
    walk(g, s, z, rng, step_cap, &mut NoVisit)
}

/// As `run_random_walk`, also counting state occupancies into `counts`.
pub fn run_random_walk_counted<R: Rng>(
    g: &Graph,
    s: usize,
    z: usize,
    rng: &mut R,
    counts: &mut [u64],
) -> Result<SearchOutcome> {
    walk(g, s, z, rng, RW_STEP_CAP, &mut &mut *counts)
}

fn walk<R: Rng, V: Visit>(
    g: &Graph,
    s: usize,
    z: usize,
    rng: &mut R,
    step_cap: u64,
    sink: &mut V,
) -> Result<SearchOutcome> {
    let mut plan = vec![s];
    sink.visit(s);
    let mut cur = s;
    while cur != z {
        if plan.len() as u64 > step_cap {
            return Err(Error::Numeric(format!(
                "random walk exceeded {step_cap} steps from {s} to {z}"
            )));
        }
        let nb = g.neighbors(cur);
        if nb.is_empty() {
            return Err(Error::Unreachable { from: s, to: z });
        }
        cur = nb[rng.gen_range(0..nb.len())] as usize;
        plan.push(cur);
        sink.visit(cur);
    }
    Ok(SearchOutcome { runtime: plan.len() as u64, plan })
}

/// Breadth-first search with per-dequeue neighbor shuffling. Each state is
/// enqueued at most once; the subgoal is recognized when discovered and its
/// visit counts as the final iteration, so runtime never exceeds n.
pub fn run_bfs<R: Rng>(g: &Graph, s: usize, z: usize, rng: &mut R) -> Result<SearchOutcome> {
    bfs(g, s, z, rng, &mut NoVisit)
}

pub fn run_bfs_counted<R: Rng>(
    g: &Graph,
    s: usize,
    z: usize,
    rng: &mut R,
    counts: &mut [u64],
) -> Result<SearchOutcome> {
    bfs(g, s, z, rng, &mut &mut *counts)
}

fn bfs<R: Rng, V: Visit>(g: &Graph, s: usize, z: usize, rng: &mut R, sink: &mut V) -> Result<SearchOutcome> {
    let n = g.n();
    if s == z {
        sink.visit(s);
        return Ok(SearchOutcome { plan: vec![s], runtime: 1 });
    }
    let mut visited = vec![false; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::with_capacity(n);
    visited[s] = true;
    queue.push_back(s);
    let mut dequeues = 0u64;
    let mut order: Vec<u16> = Vec::new();
    while let Some(u) = queue.pop_front() {
        dequeues += 1;
        sink.visit(u);
        order.clear();
        order.extend_from_slice(g.neighbors(u));
        order.shuffle(rng);
        for &v in &order {
            let v = v as usize;
            if !visited[v] {
                visited[v] = true;
                parent[v] = u;
                if v == z {
                    sink.visit(z);
                    let mut plan = vec![z];
                    let mut cur = z;
                    while cur != s {
                        cur = parent[cur];
                        plan.push(cur);
                    }
                    plan.reverse();
                    return Ok(SearchOutcome { plan, runtime: dequeues + 1 });
                }
                queue.push_back(v);
            }
        }
    }
    Err(Error::Unreachable { from: s, to: z })
}

/// Depth-first search: neighbors are shuffled at every call, a neighbor is
/// followed only if it is not already on the current plan, and the algorithm
/// backtracks when no extension exists. The returned plan is a simple path.
pub fn run_dfs<R: Rng>(g: &Graph, s: usize, z: usize, rng: &mut R) -> Result<SearchOutcome> {
    dfs_engine(g, s, z, usize::MAX, rng, &mut NoVisit).map(|(outcome, _)| outcome)
}

pub fn run_dfs_counted<R: Rng>(
    g: &Graph,
    s: usize,
    z: usize,
    rng: &mut R,
    counts: &mut [u64],
) -> Result<SearchOutcome> {
    dfs_engine(g, s, z, usize::MAX, rng, &mut &mut *counts).map(|(outcome, _)| outcome)
}

/// Iterative deepening: depth-limited DFS at limits 1, 2, ... until the
/// subgoal is found. Depth counts plan edges; a node at the limit is
/// goal-tested on entry but not expanded. Runtime accumulates the recursive
/// calls of every pass.
pub fn run_iddfs<R: Rng>(g: &Graph, s: usize, z: usize, rng: &mut R) -> Result<SearchOutcome> {
    iddfs(g, s, z, rng, &mut NoVisit)
}

pub fn run_iddfs_counted<R: Rng>(
    g: &Graph,
    s: usize,
    z: usize,
    rng: &mut R,
    counts: &mut [u64],
) -> Result<SearchOutcome> {
    iddfs(g, s, z, rng, &mut &mut *counts)
}

fn iddfs<R: Rng, V: Visit>(g: &Graph, s: usize, z: usize, rng: &mut R, sink: &mut V) -> Result<SearchOutcome> {
    if s == z {
        sink.visit(s);
        return Ok(SearchOutcome { plan: vec![s], runtime: 1 });
    }
    let mut calls = 0u64;
    for limit in 1..g.n() {
        match dls(g, s, z, limit, rng, sink, &mut calls) {
            Some(plan) => return Ok(SearchOutcome { plan, runtime: calls }),
            None => continue,
        }
    }
    Err(Error::Unreachable { from: s, to: z })
}

fn dfs_engine<R: Rng, V: Visit>(
    g: &Graph,
    s: usize,
    z: usize,
    limit: usize,
    rng: &mut R,
    sink: &mut V,
) -> Result<(SearchOutcome, u64)> {
    let mut calls = 0u64;
    if s == z {
        sink.visit(s);
        return Ok((SearchOutcome { plan: vec![s], runtime: 1 }, 1));
    }
    match dls(g, s, z, limit.min(g.n()), rng, sink, &mut calls) {
        Some(plan) => Ok((SearchOutcome { plan, runtime: calls }, calls)),
        None => Err(Error::Unreachable { from: s, to: z }),
    }
}

/// One depth-limited pass. Returns the plan when the subgoal was reached.
fn dls<R: Rng, V: Visit>(
    g: &Graph,
    s: usize,
    z: usize,
    limit: usize,
    rng: &mut R,
    sink: &mut V,
    calls: &mut u64,
) -> Option<Vec<usize>> {
    struct Ctx<'a, R: Rng, V: Visit> {
        g: &'a Graph,
        z: usize,
        limit: usize,
        rng: &'a mut R,
        sink: &'a mut V,
        calls: &'a mut u64,
        plan: Vec<usize>,
        on_path: Vec<bool>,
        // Per-depth scratch for shuffled neighbor orders; reused across calls
        // so deep passes do not allocate.
        pool: Vec<Vec<u16>>,
    }

    fn rec<R: Rng, V: Visit>(ctx: &mut Ctx<R, V>, u: usize, depth: usize) -> bool {
        *ctx.calls += 1;
        ctx.sink.visit(u);
        if u == ctx.z {
            return true;
        }
        if depth == ctx.limit {
            return false;
        }
        let mut order = std::mem::take(&mut ctx.pool[depth]);
        order.clear();
        order.extend_from_slice(ctx.g.neighbors(u));
        order.shuffle(ctx.rng);
        let mut found = false;
        for &v in &order {
            let v = v as usize;
            if !ctx.on_path[v] {
                ctx.plan.push(v);
                ctx.on_path[v] = true;
                if rec(ctx, v, depth + 1) {
                    found = true;
                    break;
                }
                ctx.plan.pop();
                ctx.on_path[v] = false;
            }
        }
        ctx.pool[depth] = order;
        found
    }

    let n = g.n();
    let mut ctx = Ctx {
        g,
        z,
        limit,
        rng,
        sink,
        calls,
        plan: Vec::with_capacity(n.min(limit + 1)),
        on_path: vec![false; n],
        pool: vec![Vec::new(); limit.min(n)],
    };
    ctx.plan.push(s);
    ctx.on_path[s] = true;
    if rec(&mut ctx, s, 0) {
        Some(ctx.plan)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::cell_rng;
    use crate::search::Alg;
    use rand_chacha::ChaCha12Rng;
    use rand_chacha::rand_core::SeedableRng;

    fn rng(i: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(i)
    }

    fn p3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn k2() -> Graph {
        Graph::from_edges(2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn rw_k2_is_forced() {
        for i in 0..10 {
            let out = run_random_walk(&k2(), 0, 1, &mut rng(i)).unwrap();
            assert_eq!(out.plan, vec![0, 1]);
            assert_eq!(out.runtime, 2);
        }
    }

    #[test]
    fn rw_mean_steps_match_hitting_time() {
        // P3 0 -> 2 has H = 4; K3 0 -> 1 has H = 2.
        let k3 = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        for (g, s, z, expect) in [(p3(), 0usize, 2usize, 4.0f64), (k3, 0, 1, 2.0)] {
            let runs = 100_000u64;
            let mut rng = cell_rng(11, "rw-oracle", Alg::Rw, s, z, 0);
            let (mut sum, mut sumsq) = (0.0f64, 0.0f64);
            for _ in 0..runs {
                let steps = (run_random_walk(&g, s, z, &mut rng).unwrap().runtime - 1) as f64;
                sum += steps;
                sumsq += steps * steps;
            }
            let mean = sum / runs as f64;
            let var = (sumsq - runs as f64 * mean * mean) / (runs as f64 - 1.0);
            let se = (var / runs as f64).sqrt();
            assert!((mean - expect).abs() < 3.0 * se, "mean {mean} expect {expect} se {se}");
        }
    }

    #[test]
    fn rw_step_cap_aborts() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            run_random_walk_capped(&g, 0, 2, &mut rng(0), 1),
            Err(Error::Numeric(_))
        ));
    }

    #[test]
    fn bfs_hand_traces() {
        // P3 0 -> 2: dequeue 0 and 1, then the iteration visiting 2.
        let out = run_bfs(&p3(), 0, 2, &mut rng(0)).unwrap();
        assert_eq!(out.plan, vec![0, 1, 2]);
        assert_eq!(out.runtime, 3);
        // K2 is immediate.
        let out = run_bfs(&k2(), 0, 1, &mut rng(0)).unwrap();
        assert_eq!(out.runtime, 2);
        assert_eq!(out.plan, vec![0, 1]);
    }

    #[test]
    fn bfs_star_leaf_to_leaf_runtime_is_shuffle_independent() {
        // Star: center 0, leaves 1..=4. From one leaf to another the only
        // dequeues are the leaf and the center, then the subgoal's visit.
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        for i in 0..200 {
            let out = run_bfs(&star, 1, 3, &mut rng(i)).unwrap();
            assert_eq!(out.runtime, 3, "seed {i}");
            assert_eq!(out.plan, vec![1, 0, 3]);
        }
    }

    #[test]
    fn bfs_runtime_bounded_by_n_and_plans_optimal() {
        let g = Graph::grid(3, 3).unwrap();
        for i in 0..100 {
            for s in 0..9 {
                for z in 0..9 {
                    let out = run_bfs(&g, s, z, &mut rng(i * 100 + (s * 9 + z) as u64)).unwrap();
                    assert!(out.runtime <= 9);
                    let d = g.shortest_distance(s, z).unwrap() as usize;
                    assert_eq!(out.plan.len(), d + 1, "plan must be optimal");
                }
            }
        }
    }

    #[test]
    fn dfs_hand_traces() {
        let out = run_dfs(&k2(), 0, 1, &mut rng(0)).unwrap();
        assert_eq!((out.plan, out.runtime), (vec![0, 1], 2));
        let out = run_dfs(&p3(), 0, 2, &mut rng(1)).unwrap();
        assert_eq!((out.plan, out.runtime), (vec![0, 1, 2], 3));
    }

    #[test]
    fn dfs_c4_always_finds_a_three_state_path() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        for i in 0..200 {
            let out = run_dfs(&c4, 0, 2, &mut rng(i)).unwrap();
            assert_eq!(out.plan.len(), 3);
            assert_eq!(out.runtime, 3);
            // Plans are simple paths.
            let mut seen = std::collections::HashSet::new();
            assert!(out.plan.iter().all(|&v| seen.insert(v)));
        }
    }

    #[test]
    fn iddfs_hand_traces() {
        // K2: the limit-1 pass reaches the goal; calls = root + neighbor.
        let out = run_iddfs(&k2(), 0, 1, &mut rng(0)).unwrap();
        assert_eq!((out.plan, out.runtime), (vec![0, 1], 2));
        // P3 0 -> 2: limit 1 spends 2 calls, limit 2 spends 3 more.
        for i in 0..50 {
            let out = run_iddfs(&p3(), 0, 2, &mut rng(i)).unwrap();
            assert_eq!(out.plan, vec![0, 1, 2]);
            assert_eq!(out.runtime, 5);
        }
    }

    #[test]
    fn iddfs_plans_are_always_optimal() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 4)]).unwrap();
        for i in 0..100 {
            for s in 0..6 {
                for z in 0..6 {
                    if s == z {
                        continue;
                    }
                    let out = run_iddfs(&g, s, z, &mut rng(i * 64 + (s * 8 + z) as u64)).unwrap();
                    let d = g.shortest_distance(s, z).unwrap() as usize;
                    assert_eq!(out.plan.len(), d + 1);
                }
            }
        }
    }

    #[test]
    fn unreachable_targets_error() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(run_bfs(&g, 0, 3, &mut rng(0)), Err(Error::Unreachable { .. })));
        assert!(matches!(run_dfs(&g, 0, 3, &mut rng(0)), Err(Error::Unreachable { .. })));
        assert!(matches!(run_iddfs(&g, 0, 3, &mut rng(0)), Err(Error::Unreachable { .. })));
    }

    #[test]
    fn counted_runs_accumulate_visits() {
        let g = p3();
        let mut counts = vec![0u64; 3];
        let out = run_bfs_counted(&g, 0, 2, &mut rng(0), &mut counts).unwrap();
        // Dequeues of 0 and 1 plus the terminal visit of 2.
        assert_eq!(counts, vec![1, 1, 1]);
        assert_eq!(counts.iter().sum::<u64>(), out.runtime);
        let mut counts = vec![0u64; 3];
        let out = run_iddfs_counted(&g, 0, 2, &mut rng(0), &mut counts).unwrap();
        assert_eq!(counts.iter().sum::<u64>(), out.runtime);
        let mut counts = vec![0u64; 3];
        let out = run_random_walk_counted(&g, 0, 2, &mut rng(0), &mut counts).unwrap();
        assert_eq!(counts.iter().sum::<u64>(), out.runtime);
    }
}
