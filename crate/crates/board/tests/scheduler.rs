use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Duration;

use holboard_board::agents::{Agent, AgentError, Formula, Resource, Rewrite, RewriteAgent, Task, FORMULAS};
use holboard_board::blackboard::{Blackboard, BoardView, ContextId, DatumId, Delta, Event};
use holboard_board::scheduler::{conflicts, run_loop, select_winners, value, SchedulerConfig};
use holboard_board::transform::is_nnf;
use holboard_core::tptp::{Role, SzsStatus};
use holboard_core::Kernel;
use holboard_testkit::auction::{self, Bundle};
use holboard_testkit::logic::FormulaGen;
use holboard_testkit::rng;
use proptest::prelude::*;

fn resources(bits: u32) -> BTreeSet<Resource> {
    (0..32).filter(|b| bits & (1 << b) != 0).map(|b| Resource::Datum(DatumId(b))).collect()
}

fn task(name: &str, bid: f64, reads: u32, writes: u32) -> Task {
    Task {
        agent: name.to_owned(),
        context: ContextId(0),
        reads: resources(reads),
        writes: resources(writes),
        bid,
        target: None,
        aux: None,
    }
}

fn tasks(bundles: &[Bundle]) -> Vec<Task> {
    bundles.iter().enumerate().map(|(i, b)| task(&format!("t{i}"), b.bid, b.reads, b.writes)).collect()
}

#[test]
fn small_auctions() {
    let ts = vec![task("A", 5.0, 0, 0b01), task("B", 3.0, 0, 0b10), task("C", 4.0, 0, 0b11)];
    let won = select_winners(&ts);
    assert_eq!(won, vec![0, 1]);
    assert_eq!(value(&ts, &won), 8.0);

    assert_eq!(select_winners(&[task("only", 0.0, 0, 1)]), vec![0]);

    let clash = vec![task("a", 2.0, 0, 1), task("b", 7.0, 1, 1), task("c", 7.0, 0, 1)];
    assert_eq!(select_winners(&clash), vec![1]);
    assert!(select_winners(&[]).is_empty());
}

#[test]
fn conflict_relation() {
    let w = task("w", 1.0, 0, 1);
    let r = task("r", 1.0, 1, 2);
    let q = task("q", 1.0, 1, 4);
    assert!(conflicts(&w, &r) && conflicts(&r, &w));
    assert!(!conflicts(&r, &q), "shared reads do not conflict");
}

/// Greedy value against the exhaustive optimum; returns the worst ratio
/// `value·√m / OPT` seen.
fn approximation(seed: u64, reads: bool) -> f64 {
    let mut rng = rng(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let bundles = auction::random_auction(&mut rng, 12, 6, reads);
        let ts = tasks(&bundles);
        let won = select_winners(&ts);
        assert!(auction::conflict_free(&bundles, &won), "{bundles:?} {won:?}");
        let (opt, _) = auction::optimum(&bundles);
        if opt > 0.0 {
            let m = f64::from(auction::written_resources(&bundles));
            worst = worst.min(value(&ts, &won) * m.sqrt() / opt);
        }
    }
    worst
}

#[test]
fn greedy_is_within_root_m_of_optimal() {
    let worst = approximation(5, false);
    assert!(worst >= 1.0 - 1e-9, "{worst}");
}

#[test]
fn read_sets_keep_winners_conflict_free() {
    approximation(6, true);
}

#[test]
fn read_sets_can_break_the_bound() {
    let mut bundles = vec![Bundle { bid: 1.01, reads: 0, writes: 1 }];
    bundles.extend((1..=5).map(|i| Bundle { bid: 1.0, reads: 1, writes: 1 << i }));
    let ts = tasks(&bundles);
    let won = select_winners(&ts);
    assert_eq!(won, vec![0]);
    let (opt, _) = auction::optimum(&bundles);
    assert_eq!(opt, 5.0);
    assert!(value(&ts, &won) < opt / 6f64.sqrt());
}

proptest! {
    #[test]
    fn winners_are_deterministic(seed in any::<u64>()) {
        let bundles = auction::random_auction(&mut rng(seed), 12, 6, true);
        let ts = tasks(&bundles);
        let won = select_winners(&ts);
        prop_assert_eq!(select_winners(&ts.clone()), won.clone());
        prop_assert!(won.iter().all(|&i| ts[i].bid >= 0.0));
        prop_assert!(auction::conflict_free(&bundles, &won));
        let losers: Vec<usize> = (0..ts.len()).filter(|i| !won.contains(i)).collect();
        for l in losers {
            prop_assert!(won.iter().any(|&w| conflicts(&ts[w], &ts[l])), "loser {} could have been added", l);
        }
    }
}

fn formulas_board() -> Blackboard {
    let bb = Blackboard::new();
    bb.register_store::<Formula>(FORMULAS).unwrap();
    bb
}

#[test]
fn no_agents_gives_up() {
    let bb = formulas_board();
    let report = run_loop(&bb, &[], &SchedulerConfig::default());
    assert_eq!(report.status, SzsStatus::GaveUp);
    assert_eq!(report.rounds, 0);
    assert_eq!(report.trace, vec!["end after 0 rounds: no tasks, root GaveUp".to_owned()]);
}

#[test]
fn nnf_agent_reaches_quiescence() {
    let k = Kernel::shared();
    let bb = formulas_board();
    let mut g = FormulaGen::new(&k, rng(9));
    let mut inserted = 0;
    while inserted < 20 {
        let f = g.formula();
        if !is_nnf(&k, &f) {
            let name = format!("f{inserted}");
            bb.insert(FORMULAS, Formula { name, role: Role::Axiom, term: f }, bb.root()).unwrap();
            inserted += 1;
        }
    }
    let agents: Vec<Arc<dyn Agent>> = vec![Arc::new(RewriteAgent::new(k.clone(), Rewrite::Nnf))];
    for max_parallel in [1, 4] {
        let board = formulas_board();
        for (_, f) in bb.query::<Formula>(FORMULAS, bb.root()).unwrap() {
            board.insert(FORMULAS, f, board.root()).unwrap();
        }
        let config = SchedulerConfig { max_parallel, ..SchedulerConfig::default() };
        let report = run_loop(&board, &agents, &config);
        assert_eq!(report.status, SzsStatus::GaveUp);
        assert_eq!(report.rounds, 1, "{:?}", report.trace);
        let fs = board.query::<Formula>(FORMULAS, board.root()).unwrap();
        assert_eq!(fs.len(), 20);
        assert!(fs.iter().all(|(_, f)| is_nnf(&k, &f.term)));
        assert!(report.trace[0].starts_with("round 1: offered 20, winners ["));
    }
}

/// Proposes one task per round until its counter runs out.
struct Counter {
    name: String,
    panic: bool,
    fail: bool,
}

impl Agent for Counter {
    fn name(&self) -> &str {
        &self.name
    }

    fn stores(&self) -> Vec<String> {
        vec!["ticks".to_owned()]
    }

    fn filter(&self, event: &Event, _view: BoardView<'_>) -> Vec<Task> {
        let mut t = task(&self.name, 1.0, 0, 1);
        t.context = event.context;
        vec![t]
    }

    fn run(&self, task: &Task, view: BoardView<'_>) -> Result<Delta, AgentError> {
        if self.panic {
            panic!("boom");
        }
        if self.fail {
            return Err(AgentError::Board(holboard_board::BoardError::UnknownStore("nowhere".into())));
        }
        let n = view.query::<u32>("ticks", task.context)?.len() as u32;
        Ok(Delta::new().insert("ticks", n, task.context))
    }
}

fn ticking(panic: bool, fail: bool) -> (Blackboard, Vec<Arc<dyn Agent>>) {
    let bb = Blackboard::new();
    bb.register_store::<u32>("ticks").unwrap();
    bb.insert("ticks", 0u32, bb.root()).unwrap();
    let agent: Arc<dyn Agent> = Arc::new(Counter { name: "tick".into(), panic, fail });
    (bb, vec![agent])
}

#[test]
fn round_limit_and_deadline() {
    let (bb, agents) = ticking(false, false);
    let config = SchedulerConfig { max_rounds: 5, ..SchedulerConfig::default() };
    let report = run_loop(&bb, &agents, &config);
    assert_eq!(report.status, SzsStatus::ResourceOut);
    assert_eq!(report.rounds, 5);
    assert_eq!(bb.query::<u32>("ticks", bb.root()).unwrap().len(), 6);
    assert_eq!(report.trace[1], "round 2: offered 1, winners [tick@c0], value 1");

    let (bb, agents) = ticking(false, false);
    let config = SchedulerConfig { timeout: Duration::from_millis(50), max_rounds: usize::MAX, ..SchedulerConfig::default() };
    assert_eq!(run_loop(&bb, &agents, &config).status, SzsStatus::Timeout);
}

#[test]
fn failing_tasks_end_the_run_with_error() {
    for (panic, fail, word) in [(true, false, "panicked: boom"), (false, true, "failed")] {
        let (bb, agents) = ticking(panic, fail);
        let report = run_loop(&bb, &agents, &SchedulerConfig::default());
        assert_eq!(report.status, SzsStatus::Error);
        assert!(report.trace[1].contains(word), "{:?}", report.trace);
    }
}

#[test]
fn transcripts_are_reproducible() {
    let run = || {
        let (bb, agents) = ticking(false, false);
        run_loop(&bb, &agents, &SchedulerConfig { max_rounds: 3, ..SchedulerConfig::default() })
    };
    assert_eq!(run(), run());
}
