use std::sync::Arc;
use std::time::{Duration, Instant};

use holboard_board::agents::{Agent, ExternalAgent, Formula, FORMULAS};
use holboard_board::blackboard::{Blackboard, SplitKind};
use holboard_board::external::{problem_text, render_problem, submit, ProverSpec, GRACE};
use holboard_board::mock::{Behavior, MockProver};
use holboard_board::scheduler::{run_loop, SchedulerConfig};
use holboard_core::tptp::{self, Dialect, Role, SzsStatus, TptpError};
use holboard_core::{Kernel, TermRef};

const PROBLEM: &str = "
thf(a_type, type, a: $i).
thf(p_type, type, p: $i > $o).
thf(goal, conjecture, p @ a).
thf(all_p, axiom, ! [X: $i]: (p @ X)).
";

fn entries(k: &Kernel) -> Vec<(String, Role, TermRef)> {
    Formula::from_tptp(k, &tptp::parse(PROBLEM).unwrap())
        .unwrap()
        .into_iter()
        .map(|f| (f.name, f.role, f.term))
        .collect()
}

fn problem(dialect: Dialect) -> Vec<tptp::AnnotatedFormula> {
    let k = Kernel::new();
    render_problem(&k, &entries(&k), dialect).unwrap()
}

#[test]
fn problems_put_declarations_first_and_conjectures_last() {
    for dialect in [Dialect::Thf, Dialect::Tff, Dialect::Fof] {
        let p = problem(dialect);
        let roles: Vec<Role> = p.iter().map(|f| f.role).collect();
        let decls = if dialect == Dialect::Fof { 0 } else { 2 };
        assert_eq!(roles.len(), decls + 2);
        assert!(roles[..decls].iter().all(|r| *r == Role::Type));
        assert_eq!(&roles[decls..], &[Role::Axiom, Role::Conjecture]);
        assert!(p.iter().all(|f| f.dialect == dialect));

        let text = problem_text(&p);
        let k2 = Kernel::new();
        let again: Vec<_> = Formula::from_tptp(&k2, &tptp::parse(&text).unwrap())
            .unwrap()
            .into_iter()
            .map(|f| (f.name, f.role, f.term))
            .collect();
        assert_eq!(problem_text(&render_problem(&k2, &again, dialect).unwrap()), text, "{dialect}");
    }
}

#[test]
fn higher_order_problems_do_not_fit_first_order_dialects() {
    let k = Kernel::new();
    let fs = Formula::from_tptp(&k, &tptp::parse("thf(h, axiom, ! [F: $i > $o, X: $i]: ((F @ X) | ~ (F @ X))).").unwrap()).unwrap();
    let entries: Vec<_> = fs.into_iter().map(|f| (f.name, f.role, f.term)).collect();
    for dialect in [Dialect::Fof, Dialect::Cnf, Dialect::Tff] {
        assert!(matches!(render_problem(&k, &entries, dialect), Err(TptpError::DialectMismatch { .. })), "{dialect}");
    }
    assert!(render_problem(&k, &entries, Dialect::Thf).is_ok());
}

#[test]
fn remote_theorem_and_request_fields() {
    let mock = MockProver::start(Behavior::Status(SzsStatus::Theorem)).unwrap();
    let spec = ProverSpec::remote("mockp", &mock.url(), 5, Dialect::Thf);
    let p = problem(Dialect::Thf);
    let result = submit(&p, &spec);
    assert_eq!(result.status, SzsStatus::Theorem, "{}", result.raw_output);
    let requests = mock.requests();
    assert_eq!(requests.len(), 1);
    let field = |name: &str| requests[0].iter().find(|(k, _)| k == name).map(|(_, v)| v.clone());
    assert_eq!(field("FORMULAEProblem"), Some(problem_text(&p)));
    assert_eq!(field("System___mockp").as_deref(), Some("mockp"));
    assert_eq!(field("TimeLimit___mockp").as_deref(), Some("5"));
}

#[test]
fn remote_hang_times_out() {
    let mock = MockProver::start(Behavior::Hang).unwrap();
    let spec = ProverSpec::remote("slow", &mock.url(), 1, Dialect::Thf);
    let start = Instant::now();
    let result = submit(&problem(Dialect::Thf), &spec);
    assert_eq!(result.status, SzsStatus::Timeout, "{}", result.raw_output);
    assert!(start.elapsed() < Duration::from_secs(3));
    assert!(result.wall_time >= Duration::from_secs(1));
}

#[test]
fn remote_garbage_and_unreachable() {
    let mock = MockProver::start(Behavior::Reply("<html>busy, try later</html>".into())).unwrap();
    let spec = ProverSpec::remote("junk", &mock.url(), 2, Dialect::Thf);
    let result = submit(&problem(Dialect::Thf), &spec);
    assert_eq!(result.status, SzsStatus::Unknown);
    assert!(result.raw_output.contains("busy"));

    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    drop(listener);
    let spec = ProverSpec::remote("gone", &format!("http://{addr}/x"), 2, Dialect::Thf);
    assert_eq!(submit(&problem(Dialect::Thf), &spec).status, SzsStatus::Error);

    let bad = ProverSpec::remote("bad", "ftp://example.org", 2, Dialect::Thf);
    assert_eq!(submit(&problem(Dialect::Thf), &bad).status, SzsStatus::Error);
}

#[test]
fn local_provers() {
    let p = problem(Dialect::Thf);
    let sh = |name: &str, script: &str, limit: u64| ProverSpec::local(name, &["sh", "-c", script, "{problem}"], limit, Dialect::Thf);

    let checks_file = sh("grep", "grep -q 'conjecture' \"$0\" && echo '% SZS status Theorem for x'", 5);
    assert_eq!(submit(&p, &checks_file).status, SzsStatus::Theorem);

    let appended = ProverSpec::local("cat", &["cat"], 5, Dialect::Thf);
    let r = submit(&p, &appended);
    assert_eq!(r.status, SzsStatus::Unknown);
    assert_eq!(r.raw_output, problem_text(&p));

    let limit = ProverSpec::local("limit", &["sh", "-c", "echo \"% SZS status GaveUp after $1s\"", "{problem}", "{timelimit}"], 7, Dialect::Thf);
    let r = submit(&p, &limit);
    assert_eq!(r.status, SzsStatus::GaveUp);
    assert!(r.raw_output.contains("after 7s"));

    let start = Instant::now();
    let slow = sh("sleepy", "sleep 30", 1);
    assert_eq!(submit(&p, &slow).status, SzsStatus::Timeout);
    assert!(start.elapsed() < Duration::from_secs(1) + GRACE + Duration::from_secs(2));

    assert_eq!(submit(&p, &sh("crash", "echo oops >&2; exit 3", 2)).status, SzsStatus::Error);
    let missing = ProverSpec::local("missing", &["/nonexistent/prover"], 2, Dialect::Thf);
    assert_eq!(submit(&p, &missing).status, SzsStatus::Error);
    assert_eq!(submit(&p, &ProverSpec::local("empty", &[], 2, Dialect::Thf)).status, SzsStatus::Error);
}

fn demo_board(k: &Kernel) -> Blackboard {
    let bb = Blackboard::new();
    bb.register_store::<Formula>(FORMULAS).unwrap();
    for f in Formula::from_tptp(k, &tptp::parse(PROBLEM).unwrap()).unwrap() {
        bb.insert(FORMULAS, f, bb.root()).unwrap();
    }
    bb
}

#[test]
fn external_agent_tasks() {
    let k = Kernel::shared();
    let bb = demo_board(&k);
    let kids = bb.split(bb.root(), SplitKind::Or, 2).unwrap();
    let spec = ProverSpec::remote("m", "http://127.0.0.1:9/", 1, Dialect::Thf);
    let free = ExternalAgent::new(k.clone(), spec.clone());
    let bound = ExternalAgent::new(k.clone(), spec).bound_to(kids[1]);
    assert_eq!(bound.name(), "m/c2");
    let events: Vec<_> = bb
        .contents()
        .into_iter()
        .map(|(store, datum, context)| holboard_board::Event {
            seq: 0,
            kind: holboard_board::EventKind::Inserted,
            store: Some(store),
            context,
            datum: Some(datum),
            status: None,
        })
        .collect();
    let count = |a: &ExternalAgent| events.iter().map(|e| a.filter(e, bb.view()).len()).sum::<usize>();
    assert_eq!(count(&free), 2);
    assert_eq!(count(&bound), 1);
}

#[test]
fn or_split_with_theorem_and_timeout_proves_the_root() {
    let theorem = MockProver::start(Behavior::Status(SzsStatus::Theorem)).unwrap();
    let hang = MockProver::start(Behavior::Hang).unwrap();
    let run = || {
        let k = Kernel::shared();
        let bb = demo_board(&k);
        let kids = bb.split(bb.root(), SplitKind::Or, 2).unwrap();
        let agents: Vec<Arc<dyn Agent>> = vec![
            Arc::new(ExternalAgent::new(k.clone(), ProverSpec::remote("good", &theorem.url(), 5, Dialect::Thf)).bound_to(kids[0])),
            Arc::new(ExternalAgent::new(k.clone(), ProverSpec::remote("slow", &hang.url(), 1, Dialect::Thf)).bound_to(kids[1])),
        ];
        let report = run_loop(&bb, &agents, &SchedulerConfig::default());
        (report, bb.dump())
    };
    let start = Instant::now();
    let (report, dump) = run();
    assert!(start.elapsed() < Duration::from_secs(10));
    assert_eq!(report.status, SzsStatus::Theorem);
    assert_eq!(
        report.trace,
        vec![
            "round 1: offered 2, winners [good/c1@c1, slow/c2@c2], value 20".to_owned(),
            "end after 1 rounds: root settled, root Theorem".to_owned(),
        ]
    );
    assert_eq!(dump, "c0 OR Theorem [2 data]\n  c1 LEAF Theorem\n  c2 LEAF Timeout\n");
    assert_eq!(run(), (report, dump));
}
