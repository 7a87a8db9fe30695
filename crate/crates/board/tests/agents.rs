use std::sync::Arc;

use holboard_board::agents::{Agent, ExternalAgent, Formula, ParamodulationAgent, Rewrite, RewriteAgent, FORMULAS};
use holboard_board::blackboard::{Blackboard, SplitKind};
use holboard_board::external::ProverSpec;
use holboard_board::scheduler::{run_loop, SchedulerConfig};
use holboard_board::transform::{existentials, is_nnf, is_prenex};
use holboard_board::{Event, EventKind};
use holboard_core::tptp::{self, Dialect, Role, SzsStatus};
use holboard_core::Kernel;
use holboard_testkit::logic::FormulaGen;
use holboard_testkit::rng;

const PROBLEM: &str = "
thf(decls_a, type, a: $i).
thf(decls_b, type, b: $i).
thf(decls_f, type, f: $i > $i).
thf(decls_p, type, p: $i > $o).
thf(decls_q, type, q: $i > $i > $o).
thf(fa, axiom, (f @ a) = b).
thf(pfa, axiom, p @ (f @ a)).
thf(ex, axiom, ~ (! [X: $i]: ? [Y: $i]: (q @ X @ Y))).
thf(goal, conjecture, ? [Y: $i]: (p @ Y)).
";

fn board(k: &Kernel) -> Blackboard {
    let bb = Blackboard::new();
    bb.register_store::<Formula>(FORMULAS).unwrap();
    for f in Formula::from_tptp(k, &tptp::parse(PROBLEM).unwrap()).unwrap() {
        bb.insert(FORMULAS, f, bb.root()).unwrap();
    }
    bb
}

fn inserted(bb: &Blackboard) -> Vec<Event> {
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

fn all_agents(k: &Arc<Kernel>) -> Vec<Arc<dyn Agent>> {
    let mut out: Vec<Arc<dyn Agent>> = [Rewrite::Simplify, Rewrite::Nnf, Rewrite::Prenex, Rewrite::Skolemize]
        .into_iter()
        .map(|r| Arc::new(RewriteAgent::new(k.clone(), r)) as Arc<dyn Agent>)
        .collect();
    out.push(Arc::new(ParamodulationAgent::new(k.clone())));
    out.push(Arc::new(ExternalAgent::new(k.clone(), ProverSpec::remote("x", "http://127.0.0.1:9/", 1, Dialect::Thf))));
    out
}

#[test]
fn filters_leave_the_board_untouched() {
    let k = Kernel::shared();
    let bb = board(&k);
    let mut g = FormulaGen::new(&k, rng(3));
    let kids = bb.split(bb.root(), SplitKind::And, 2).unwrap();
    for i in 0..40 {
        let f = Formula { name: format!("g{i}"), role: Role::Axiom, term: g.formula() };
        bb.insert(FORMULAS, f, kids[i % 2]).unwrap();
    }
    let rx = bb.subscribe();
    let before = (bb.dump(), bb.contents());
    let events = inserted(&bb);
    for a in all_agents(&k) {
        let first: Vec<_> = events.iter().map(|e| a.filter(e, bb.view())).collect();
        let second: Vec<_> = events.iter().map(|e| a.filter(e, bb.view())).collect();
        assert_eq!(first, second, "{}", a.name());
        assert!(first.iter().flatten().all(|t| t.bid >= 0.0 && t.agent == a.name()));
    }
    assert_eq!((bb.dump(), bb.contents()), before);
    assert_eq!(rx.try_iter().count(), 0);
}

#[test]
fn normal_form_pipeline() {
    let k = Kernel::shared();
    let bb = board(&k);
    let agents: Vec<Arc<dyn Agent>> = [Rewrite::Nnf, Rewrite::Prenex, Rewrite::Skolemize]
        .into_iter()
        .map(|r| Arc::new(RewriteAgent::new(k.clone(), r)) as Arc<dyn Agent>)
        .collect();
    let report = run_loop(&bb, &agents, &SchedulerConfig::default());
    assert_eq!(report.status, SzsStatus::GaveUp);
    let fs = bb.query::<Formula>(FORMULAS, bb.root()).unwrap();
    assert_eq!(fs.len(), 4);
    for (_, f) in &fs {
        assert!(is_nnf(&k, &f.term) && is_prenex(&k, &f.term), "{}", f.name);
        if f.role == Role::Conjecture {
            assert_eq!(existentials(&f.term), 1);
        } else {
            assert_eq!(existentials(&f.term), 0, "{}", f.name);
        }
    }
    let ex = fs.iter().find(|(_, f)| f.name == "ex").unwrap();
    let text = tptp::printer::formula(&tptp::from_kernel(&k, &ex.1.term, Dialect::Thf).unwrap(), Dialect::Thf);
    assert_eq!(text, "(! [X1: $i]: ~ (q @ sk1 @ X1))");
}

#[test]
fn paramodulation_derives_each_consequence_once() {
    let k = Kernel::shared();
    let bb = board(&k);
    let agents: Vec<Arc<dyn Agent>> = vec![Arc::new(ParamodulationAgent::new(k.clone()))];
    let report = run_loop(&bb, &agents, &SchedulerConfig::default());
    assert_eq!(report.status, SzsStatus::GaveUp);
    assert_eq!(report.rounds, 1, "{:?}", report.trace);
    let fs = bb.query::<Formula>(FORMULAS, bb.root()).unwrap();
    let derived: Vec<_> = fs.iter().filter(|(_, f)| f.role == Role::Plain).collect();
    assert_eq!(derived.len(), 1);
    assert_eq!(derived[0].1.name, "pfa_fa");
    let text = tptp::printer::formula(&tptp::from_kernel(&k, &derived[0].1.term, Dialect::Thf).unwrap(), Dialect::Thf);
    assert_eq!(text, "(p @ b)");
}
