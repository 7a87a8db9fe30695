//! Auction scheduler: agents bid for tasks, a conflict-free set of
//! winners is chosen greedily by bid density, winners run in parallel and
//! their deltas are applied in order.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use holboard_core::tptp::SzsStatus;

use crate::agents::{Agent, AgentError, Task};
use crate::blackboard::{Blackboard, Delta, Event, EventKind};

/// Two tasks conflict if one writes what the other reads or writes.
pub fn conflicts(a: &Task, b: &Task) -> bool {
    !a.writes.is_disjoint(&b.writes) || !a.writes.is_disjoint(&b.reads) || !a.reads.is_disjoint(&b.writes)
}

/// `bid / √|writes|`, with an empty write set counted as one resource.
pub fn density(t: &Task) -> f64 {
    t.bid / (t.writes.len().max(1) as f64).sqrt()
}

/// Greedy winner determination: tasks in decreasing density (ties by
/// arrival), each admitted if it conflicts with no admitted task. Returns
/// indices into `tasks` in admission order.
pub fn select_winners(tasks: &[Task]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..tasks.len()).collect();
    order.sort_by(|&i, &j| {
        density(&tasks[j])
            .partial_cmp(&density(&tasks[i]))
            .unwrap_or(Ordering::Equal)
            .then(i.cmp(&j))
    });
    let mut won: Vec<usize> = Vec::new();
    for i in order {
        if won.iter().all(|&w| !conflicts(&tasks[w], &tasks[i])) {
            won.push(i);
        }
    }
    won
}

/// Total bid of the selected tasks.
pub fn value(tasks: &[Task], chosen: &[usize]) -> f64 {
    chosen.iter().map(|&i| tasks[i].bid).sum()
}

#[derive(Clone, Debug)]
pub struct SchedulerConfig {
    /// Winners run at most this many at a time.
    pub max_parallel: usize,
    /// Deadline for the whole run.
    pub timeout: Duration,
    /// Root statuses that end the run.
    pub termination: BTreeSet<SzsStatus>,
    pub max_rounds: usize,
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        SchedulerConfig {
            max_parallel: 4,
            timeout: Duration::from_secs(60),
            termination: SzsStatus::ALL.into_iter().filter(|s| s.is_success()).collect(),
            max_rounds: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub status: SzsStatus,
    pub rounds: usize,
    /// One line per round plus a final line; free of timing data.
    pub trace: Vec<String>,
}

/// Events announcing what is already on the board, so agents see data
/// inserted before the run started.
fn snapshot(bb: &Blackboard) -> Vec<Event> {
    bb.contents()
        .into_iter()
        .map(|(store, datum, context)| Event {
            seq: 0,
            kind: EventKind::Inserted,
            store: Some(store),
            context,
            datum: Some(datum),
            status: None,
        })
        .collect()
}

/// Filters every event through every interested agent, agents in
/// parallel. Arrival order is by event, then by agent registration.
fn collect_tasks(bb: &Blackboard, agents: &[Arc<dyn Agent>], events: &[Event]) -> Vec<Task> {
    let per_agent: Vec<Vec<(usize, Task)>> = std::thread::scope(|s| {
        let handles: Vec<_> = agents
            .iter()
            .map(|a| {
                s.spawn(move || {
                    let stores = a.stores();
                    let view = bb.view();
                    let mut out = Vec::new();
                    for (i, e) in events.iter().enumerate() {
                        if e.store.as_ref().is_some_and(|st| !stores.contains(st)) {
                            continue;
                        }
                        out.extend(
                            a.filter(e, view)
                                .into_iter()
                                .filter(|t| t.bid >= 0.0 && t.bid.is_finite())
                                .map(|t| (i, t)),
                        );
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_default()).collect()
    });
    let mut tagged: Vec<(usize, usize, Task)> = per_agent
        .into_iter()
        .enumerate()
        .flat_map(|(a, ts)| ts.into_iter().map(move |(e, t)| (e, a, t)))
        .collect();
    tagged.sort_by_key(|(e, a, _)| (*e, *a));
    tagged.into_iter().map(|(_, _, t)| t).collect()
}

type Outcome = Result<Result<Delta, AgentError>, String>;

fn execute(bb: &Blackboard, agents: &[Arc<dyn Agent>], tasks: &[Task], winners: &[usize], max_parallel: usize) -> Vec<Outcome> {
    let mut out = Vec::with_capacity(winners.len());
    for chunk in winners.chunks(max_parallel.max(1)) {
        let results: Vec<Outcome> = std::thread::scope(|s| {
            let handles: Vec<_> = chunk
                .iter()
                .map(|&i| {
                    let task = &tasks[i];
                    let agent = agents.iter().find(|a| a.name() == task.agent);
                    s.spawn(move || {
                        let Some(agent) = agent else {
                            return Err(format!("no agent named {}", task.agent));
                        };
                        catch_unwind(AssertUnwindSafe(|| agent.run(task, bb.view()))).map_err(|p| {
                            p.downcast_ref::<String>()
                                .cloned()
                                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                                .unwrap_or_else(|| "panic".to_owned())
                        })
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().unwrap_or_else(|_| Err("worker died".to_owned())))
                .collect()
        });
        out.extend(results);
    }
    out
}

/// Runs auction rounds until the root status is a termination status, a
/// round offers no task, the deadline passes or the round limit is hit.
/// A still-open root is reported as GaveUp; a failing task ends the run
/// with Error.
pub fn run_loop(bb: &Blackboard, agents: &[Arc<dyn Agent>], config: &SchedulerConfig) -> RunReport {
    let start = Instant::now();
    let rx = bb.subscribe();
    let mut pending = snapshot(bb);
    let mut trace = Vec::new();
    let mut rounds = 0;
    let root = bb.root();
    let root_status = || bb.status(root).expect("root exists");
    let finish = |status: SzsStatus, rounds: usize, mut trace: Vec<String>, why: &str| {
        trace.push(format!("end after {rounds} rounds: {why}, root {status}"));
        RunReport { status, rounds, trace }
    };
    loop {
        let status = root_status();
        if config.termination.contains(&status) {
            return finish(status, rounds, trace, "root settled");
        }
        if start.elapsed() > config.timeout {
            return finish(SzsStatus::Timeout, rounds, trace, "deadline");
        }
        if rounds >= config.max_rounds {
            return finish(SzsStatus::ResourceOut, rounds, trace, "round limit");
        }
        let tasks = collect_tasks(bb, agents, &pending);
        if tasks.is_empty() {
            let status = if status == SzsStatus::Open { SzsStatus::GaveUp } else { status };
            return finish(status, rounds, trace, "no tasks");
        }
        rounds += 1;
        let winners = select_winners(&tasks);
        let names: Vec<String> = winners.iter().map(|&i| tasks[i].to_string()).collect();
        trace.push(format!(
            "round {rounds}: offered {}, winners [{}], value {}",
            tasks.len(),
            names.join(", "),
            value(&tasks, &winners)
        ));
        let outcomes = execute(bb, agents, &tasks, &winners, config.max_parallel);
        let mut failed = false;
        for (&i, outcome) in winners.iter().zip(outcomes) {
            match outcome {
                Ok(Ok(delta)) => {
                    if let Err(e) = bb.apply(delta) {
                        trace.push(format!("  {} rejected: {e}", tasks[i]));
                    }
                }
                Ok(Err(e)) => {
                    trace.push(format!("  {} failed: {e}", tasks[i]));
                    failed = true;
                }
                Err(e) => {
                    trace.push(format!("  {} panicked: {e}", tasks[i]));
                    failed = true;
                }
            }
        }
        if failed {
            return finish(SzsStatus::Error, rounds, trace, "task failure");
        }
        pending = rx.try_iter().collect();
    }
}
