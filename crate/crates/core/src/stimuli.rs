//! Experiment-design machinery: probe-task selection, eligibility filtering,
//! adaptive filler-trial selection, and a simulated navigator that exercises
//! the adaptive loop end to end.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Task};

/// Guard against navigator policies that fail to reach the goal.
pub const NAV_STEP_CAP: usize = 10_000;

/// Ordered tasks needing at least 3 actions to solve optimally.
///
/// Eligibility counts ordered pairs: requiring at least 10 of them admits
/// 1,676 of the 11,117 connected eight-state graphs (the unordered
/// convention is stricter and admits 189; see the eligibility test).
pub fn probe_tasks(g: &Graph) -> Vec<Task> {
    let mut tasks = Vec::new();
    for s in 0..g.n() {
        let dist = g.distances_from(s);
        for (t, d) in dist.iter().enumerate() {
            if matches!(d, Some(d) if *d >= 3) {
                tasks.push(Task { start: s, goal: t });
            }
        }
    }
    tasks
}

/// A graph qualifies for the experiment when it offers at least 10 probe
/// tasks.
pub fn eligible_for_experiment(g: &Graph) -> bool {
    probe_tasks(g).len() >= 10
}

/// Per-state visit tallies accumulated over a session. A state is counted
/// once per step it occupies, endpoints included, so revisits count again.
#[derive(Debug, Clone, serde::Serialize)]
pub struct VisitCounts {
    counts: Vec<u64>,
}

impl VisitCounts {
    pub fn new(n: usize) -> Self {
        VisitCounts { counts: vec![0; n] }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn record_path(&mut self, path: &[usize]) {
        for &s in path {
            self.counts[s] += 1;
        }
    }

    /// States attaining the maximal count (the "most-visited" set).
    pub fn argmax_set(&self) -> Vec<usize> {
        let max = self.counts.iter().copied().max().unwrap_or(0);
        (0..self.counts.len()).filter(|&s| self.counts[s] == max).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum TrialKind {
    Long,
    Filler,
}

/// The 60-trial session plan: 30 long tasks (distance >= 2) alternating with
/// 30 single-action fillers, long first.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TrialSchedule {
    pub trials: Vec<(TrialKind, Task)>,
}

/// How filler tasks are chosen; the uniform arm exists as the control in
/// effectiveness comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillerPolicy {
    Adaptive,
    UniformRandom,
}

fn adjacent_tasks(g: &Graph) -> Vec<Task> {
    let mut tasks = Vec::new();
    for (u, v) in g.edges() {
        tasks.push(Task { start: u, goal: v });
        tasks.push(Task { start: v, goal: u });
    }
    tasks
}

/// Adaptive filler rule: among ordered adjacent pairs, first drop tasks
/// whose start or goal is currently most-visited, then sample uniformly from
/// the remaining tasks with the greatest visit-count sum. If the first step
/// eliminates everything it is skipped and the sum rule applies unfiltered.
pub fn adaptive_filler(g: &Graph, counts: &VisitCounts, rng: &mut ChaCha12Rng) -> Result<Task> {
    let all = adjacent_tasks(g);
    if all.is_empty() {
        return Err(Error::Domain("adaptive filler needs at least one edge".into()));
    }
    let hot = counts.argmax_set();
    let surviving: Vec<Task> = all
        .iter()
        .copied()
        .filter(|t| !hot.contains(&t.start) && !hot.contains(&t.goal))
        .collect();
    let pool = if surviving.is_empty() { &all } else { &surviving };
    let best = pool
        .iter()
        .map(|t| counts.counts[t.start] + counts.counts[t.goal])
        .max()
        .unwrap();
    let maximizers: Vec<Task> = pool
        .iter()
        .copied()
        .filter(|t| counts.counts[t.start] + counts.counts[t.goal] == best)
        .collect();
    Ok(maximizers[rng.gen_range(0..maximizers.len())])
}

/// A navigator maps (current state, goal) to the next state; it must return
/// a neighbor of the current state.
pub trait NavigatorPolicy {
    fn next_step(&self, g: &Graph, current: usize, goal: usize, rng: &mut ChaCha12Rng) -> usize;
}

/// Default navigator: a uniform choice among the neighbors that reduce the
/// remaining distance, so every walk is optimal-length.
pub struct OptimalNavigator;

impl NavigatorPolicy for OptimalNavigator {
    fn next_step(&self, g: &Graph, current: usize, goal: usize, rng: &mut ChaCha12Rng) -> usize {
        let dist = g.distances_from(goal);
        let here = dist[current].expect("navigator called on unreachable goal");
        let closer: Vec<usize> = g
            .neighbors(current)
            .iter()
            .map(|&w| w as usize)
            .filter(|&w| matches!(dist[w], Some(d) if d + 1 == here))
            .collect();
        closer[rng.gen_range(0..closer.len())]
    }
}

/// Walks one task under `policy`, returning the full state sequence.
fn navigate(
    g: &Graph,
    task: Task,
    policy: &dyn NavigatorPolicy,
    rng: &mut ChaCha12Rng,
) -> Result<Vec<usize>> {
    let mut path = vec![task.start];
    let mut current = task.start;
    while current != task.goal {
        if path.len() > NAV_STEP_CAP {
            return Err(Error::Numeric(format!(
                "navigator exceeded {NAV_STEP_CAP} steps on task {}->{}",
                task.start, task.goal
            )));
        }
        let next = policy.next_step(g, current, task.goal, rng);
        debug_assert!(g.has_edge(current, next), "navigator must move along edges");
        path.push(next);
        current = next;
    }
    Ok(path)
}

/// Simulates a 60-trial session: 30 long tasks drawn uniformly (with
/// replacement) from the ordered pairs at distance >= 2, alternating with 30
/// fillers chosen by `filler`, starting with a long trial. Visit counts
/// accumulate over every navigated step.
pub fn simulate_session(
    g: &Graph,
    navigator: &dyn NavigatorPolicy,
    filler: FillerPolicy,
    rng: &mut ChaCha12Rng,
) -> Result<(VisitCounts, TrialSchedule)> {
    let mut long_support = Vec::new();
    for s in 0..g.n() {
        let dist = g.distances_from(s);
        for (t, d) in dist.iter().enumerate() {
            if matches!(d, Some(d) if *d >= 2) {
                long_support.push(Task { start: s, goal: t });
            }
        }
    }
    if long_support.is_empty() {
        return Err(Error::Domain("session needs a task solved by more than one action".into()));
    }
    let fillers = adjacent_tasks(g);
    let mut counts = VisitCounts::new(g.n());
    let mut trials = Vec::with_capacity(60);
    for _ in 0..30 {
        let task = long_support[rng.gen_range(0..long_support.len())];
        counts.record_path(&navigate(g, task, navigator, rng)?);
        trials.push((TrialKind::Long, task));

        let task = match filler {
            FillerPolicy::Adaptive => adaptive_filler(g, &counts, rng)?,
            FillerPolicy::UniformRandom => fillers[rng.gen_range(0..fillers.len())],
        };
        counts.record_path(&navigate(g, task, navigator, rng)?);
        trials.push((TrialKind::Filler, task));
    }
    Ok((counts, TrialSchedule { trials }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::derive_rng;

    fn c8() -> Graph {
        Graph::from_edges(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 0)],
        )
        .unwrap()
    }

    #[test]
    fn probe_tasks_on_known_graphs() {
        // C8: per state, two targets at distance 3 and one at distance 4.
        assert_eq!(probe_tasks(&c8()).len(), 24);
        assert!(eligible_for_experiment(&c8()));
        // Diameter below 3 leaves nothing.
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(probe_tasks(&p3).is_empty());
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(probe_tasks(&k4).is_empty());
    }

    #[test]
    fn adaptive_filler_hand_examples() {
        let mut rng = derive_rng(0, &[b"filler"]);
        // P3 with counts (5, 9, 7): every edge touches the most-visited state
        // 1, so the exclusion empties the pool and is skipped; both
        // orientations of edge (1,2) share the top sum 16.
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let mut counts = VisitCounts::new(3);
        counts.counts = vec![5, 9, 7];
        let mut seen = std::collections::HashSet::new();
        for _ in 0..100 {
            let t = adaptive_filler(&p3, &counts, &mut rng).unwrap();
            assert_eq!((t.start.min(t.goal), t.start.max(t.goal)), (1, 2));
            seen.insert((t.start, t.goal));
        }
        assert_eq!(seen.len(), 2, "both orientations occur");

        // Star: all edges touch the hot center, skip fires, all six ordered
        // center-leaf tasks tie on the sum.
        let s4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let mut counts = VisitCounts::new(4);
        counts.counts = vec![10, 0, 0, 0];
        let mut seen = std::collections::HashSet::new();
        for _ in 0..200 {
            let t = adaptive_filler(&s4, &counts, &mut rng).unwrap();
            seen.insert((t.start, t.goal));
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn adaptive_filler_respects_exclusion_when_possible() {
        // C4 with one hot state: surviving tasks avoid it entirely.
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let mut counts = VisitCounts::new(4);
        counts.counts = vec![9, 2, 3, 2];
        let mut rng = derive_rng(1, &[b"filler"]);
        for _ in 0..100 {
            let t = adaptive_filler(&c4, &counts, &mut rng).unwrap();
            assert!(t.start != 0 && t.goal != 0);
            // Survivors: (1,2),(2,1),(2,3),(3,2); all contain state 2 and tie
            // at sum 5.
            assert!(t.start == 2 || t.goal == 2);
        }
    }

    #[test]
    fn session_shape_and_counting() {
        let g = c8();
        let mut rng = derive_rng(7, &[b"session"]);
        let (counts, schedule) =
            simulate_session(&g, &OptimalNavigator, FillerPolicy::Adaptive, &mut rng).unwrap();
        assert_eq!(schedule.trials.len(), 60);
        for (i, (kind, task)) in schedule.trials.iter().enumerate() {
            let d = g.shortest_distance(task.start, task.goal).unwrap();
            if i % 2 == 0 {
                assert_eq!(*kind, TrialKind::Long);
                assert!(d >= 2, "long trial at distance {d}");
            } else {
                assert_eq!(*kind, TrialKind::Filler);
                assert_eq!(d, 1, "filler must be a single action");
            }
        }
        // Each trial contributes its full path: at least distance+1 states.
        let total: u64 = counts.counts().iter().sum();
        let min_expected: u64 = schedule
            .trials
            .iter()
            .map(|(_, t)| g.shortest_distance(t.start, t.goal).unwrap() as u64 + 1)
            .sum();
        assert_eq!(total, min_expected, "optimal navigator takes shortest paths");
    }

    #[test]
    fn session_is_seed_deterministic() {
        let g = c8();
        let run = |seed| {
            let mut rng = derive_rng(seed, &[b"session"]);
            let (c, s) =
                simulate_session(&g, &OptimalNavigator, FillerPolicy::Adaptive, &mut rng).unwrap();
            (c.counts().to_vec(), s.trials)
        };
        assert_eq!(run(3), run(3));
        assert_ne!(run(3).0, run(4).0);
    }

    #[test]
    fn single_action_graph_rejects_session() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let mut rng = derive_rng(0, &[b"session"]);
        assert!(matches!(
            simulate_session(&k2, &OptimalNavigator, FillerPolicy::Adaptive, &mut rng),
            Err(Error::Domain(_))
        ));
    }
}

