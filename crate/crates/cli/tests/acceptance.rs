//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use holboard_board::blackboard::{Blackboard, ContextId, DatumId, SplitKind};
use holboard_board::agents::{Resource, Task};
use holboard_board::scheduler::{select_winners, value};
use holboard_board::transform::{existentials, nnf, prenex, simplify, skolemize};
use holboard_cli::{run_script, Session};
use holboard_core::index::TermIndex;
use holboard_core::normalize::{beta_normalize, eta_long, is_normal_eta_long};
use holboard_core::pretty::term_string;
use holboard_core::term::{node_visits, reset_node_visits};
use holboard_core::tptp::{self, printer, Dialect, SzsStatus};
use holboard_core::{Head, Kernel, Strategy, Style};
use holboard_testkit::auction::{self, Bundle};
use holboard_testkit::examples::polymorphic_example;
use holboard_testkit::gen::{type_depth, GenConfig, TermGen};
use holboard_testkit::logic::{equivalent, quantifier_count, satisfiable, FormulaGen};
use holboard_testkit::status::{self, Kind, Shape, LEAF_STATUSES};
use holboard_testkit::tptp_gen::TptpGen;
use holboard_testkit::{named, rng, scan};
use rand::seq::SliceRandom;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

fn core_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests")
}

fn example_fidelity() -> Outcome {
    let start = Instant::now();
    let golden = std::fs::read_to_string(core_dir().join("golden/polymorphic_example.txt")).map_err(|e| e.to_string())?;
    let lines: Vec<&str> = golden.lines().collect();
    ensure(lines.len() >= 2, || "golden file has fewer than two lines".into())?;
    let k = Kernel::new();
    let t = polymorphic_example(&k);
    let nameless = term_string(&k, &t, Style::Nameless);
    let spine = term_string(&k, &t, Style::Spine);
    ensure(nameless == lines[0], || format!("nameless form {nameless}"))?;
    ensure(spine == lines[1], || format!("spine form {spine}"))?;
    let took = within(start, Duration::from_secs(1))?;
    Ok(format!("nameless and spine forms match the golden file exactly ({took:.2?})"))
}

fn normalization_oracle() -> Outcome {
    let start = Instant::now();
    let k = Kernel::new();
    let mut g = TermGen::new(&k, rng(2), GenConfig::default());
    let mut redexes = 0;
    for n in 0..10_000 {
        let t = g.term();
        ensure(t.size() <= 40 && type_depth(t.ty()) <= 4, || format!("term {n} out of bounds"))?;
        redexes += usize::from(!t.is_beta_normal());
        let reference = named::reference_normal_form(&k, &t);
        for s in Strategy::ALL {
            let (nf, _) = beta_normalize(&k, &t, s).map_err(|e| format!("term {n}, {s}: {e}"))?;
            ensure(nf == reference, || format!("term {n}: {s} disagrees with the named normalizer"))?;
        }
    }
    let took = within(start, Duration::from_secs(300))?;
    Ok(format!("10000 terms ({redexes} with redexes), 5 strategies agree with the named normalizer ({took:.2?})"))
}

fn sharing() -> Outcome {
    let k = Kernel::new();
    let mut g = TermGen::new(&k, rng(3), GenConfig::default());
    for n in 0..10_000 {
        let t = g.term();
        let rebuilt = named::to_kernel(&k, &named::from_kernel(&k, &t));
        ensure(rebuilt.id() == t.id(), || format!("trial {n}: rebuilt id {} != {}", rebuilt.id(), t.id()))?;
    }
    let i = k.types().individual();
    let f = k.declare("succ", k.types().arrow(i.clone(), i.clone())).map_err(|e| e.to_string())?;
    let zero = k.declare("zero", i).map_err(|e| e.to_string())?;
    let chain = |depth: usize| {
        let mut t = zero.clone();
        for _ in 1..depth {
            t = k.apply(&f, &[t]).expect("typed");
        }
        t
    };
    let mut visits = Vec::new();
    for depth in [10, 100, 1000] {
        let (a, b) = (chain(depth), chain(depth));
        reset_node_visits();
        let same = k.equal(&a, &b) && a == b;
        visits.push(node_visits());
        ensure(same, || format!("depth {depth}: duplicates differ"))?;
    }
    ensure(visits.iter().all(|&v| v == 0), || format!("node visits {visits:?}"))?;
    Ok("10000/10000 duplicate builds share ids; equality visits 0 nodes at depths 10/100/1000".into())
}

fn eta_preservation() -> Outcome {
    let k = Kernel::new();
    let config = GenConfig { arrow_type_args: false, ..GenConfig::default() };
    let mut g = TermGen::new(&k, rng(4), config);
    let mut reduced = 0;
    for n in 0..1000 {
        let t = eta_long(&k, &g.term());
        for s in Strategy::ALL {
            let (nf, stats) = beta_normalize(&k, &t, s).map_err(|e| e.to_string())?;
            reduced += usize::from(s == Strategy::SS && stats.reduction_steps > 0);
            ensure(is_normal_eta_long(&nf) && named::is_normal_eta_long(&k, &nf), || format!("term {n}: {s} output is not η-long"))?;
        }
    }
    Ok(format!("1000/1000 η-long terms stay η-long under every strategy ({reduced} needed reduction)"))
}

fn index_scan() -> Outcome {
    let k = Kernel::new();
    let mut g = TermGen::new(&k, rng(5), GenConfig::default());
    let idx = TermIndex::new();
    while idx.len() < 1000 {
        let t = g.term();
        idx.insert(&k, &t).map_err(|e| e.to_string())?;
    }
    let terms = idx.terms();
    ensure(terms.len() == 1000, || format!("{} indexed terms", terms.len()))?;
    let (subs, heads) = scan::universe(&terms);
    let mut hits = 0;
    for q in 0..100 {
        let h: Head = heads.choose(g.rng()).expect("heads").clone();
        let got: BTreeSet<_> = idx.by_head(&h).into_iter().collect();
        ensure(got == scan::by_head(&terms, &h), || format!("by-head query {q} differs from the scan"))?;
        let s = subs.choose(g.rng()).expect("subterms").clone();
        let got: BTreeSet<_> = idx.occurrences(&s).into_iter().collect();
        hits += got.len();
        ensure(got == scan::occurrences(&terms, &s), || format!("occurrence query {q} differs from the scan"))?;
    }
    Ok(format!("{} indexed terms, 100 head and 100 occurrence queries equal the scan ({hits} occurrences)", terms.len()))
}

fn build(bb: &Blackboard, shape: &Shape, at: ContextId, pre: &mut Vec<ContextId>, leaves: &mut Vec<ContextId>) {
    pre.push(at);
    match shape {
        Shape::Leaf => leaves.push(at),
        Shape::Node(kind, cs) => {
            let kind = match kind {
                Kind::And => SplitKind::And,
                Kind::Or => SplitKind::Or,
            };
            let kids = bb.split(at, kind, cs.len()).expect("leaf");
            for (c, s) in kids.into_iter().zip(cs) {
                build(bb, s, c, pre, leaves);
            }
        }
    }
}

fn check_shape(shape: &Shape) -> Result<usize, String> {
    let bb = Blackboard::new();
    let (mut pre, mut leaves) = (Vec::new(), Vec::new());
    build(&bb, shape, bb.root(), &mut pre, &mut leaves);
    let n = leaves.len();
    let top = LEAF_STATUSES.len() - 1;
    let mut digits = vec![top; n];
    let mut current = vec![SzsStatus::Open; n];
    let mut checks = 0;
    loop {
        for i in 0..n {
            let s = LEAF_STATUSES[digits[i]];
            if current[i] != s {
                bb.set_status(leaves[i], s).map_err(|e| e.to_string())?;
                current[i] = s;
                let want = status::recompute(shape, &current);
                let got: Vec<SzsStatus> = pre.iter().map(|&c| bb.status(c).expect("context")).collect();
                ensure(got == want, || format!("{shape:?} with leaves {current:?}"))?;
                checks += 1;
            }
        }
        let mut i = 0;
        while i < n && digits[i] == 0 {
            digits[i] = top;
            i += 1;
        }
        if i == n {
            return Ok(checks);
        }
        digits[i] -= 1;
    }
}

fn szs_propagation() -> Outcome {
    let shapes = status::shapes(4, 3, 5);
    let mut checks = 0;
    for s in &shapes {
        checks += check_shape(s)?;
    }
    let bb = Blackboard::new();
    let mut chain = vec![bb.root()];
    for (i, kind) in [SplitKind::Or, SplitKind::And, SplitKind::Or].into_iter().enumerate() {
        chain.extend(bb.split(chain[i], kind, 1).map_err(|e| e.to_string())?);
    }
    for s in LEAF_STATUSES {
        bb.set_status(chain[3], s).map_err(|e| e.to_string())?;
        ensure(chain.iter().all(|&c| bb.status(c) == Ok(s)), || format!("unary chain with {s}"))?;
    }
    Ok(format!("{} trees (depth ≤ 4, branching ≤ 3, ≤ 5 leaves), {checks} incremental updates equal recomputation; unary chains pass through", shapes.len()))
}

fn auction_tasks(bundles: &[Bundle]) -> Vec<Task> {
    let set = |bits: u32| (0..32).filter(|b| bits & (1 << b) != 0).map(|b| Resource::Datum(DatumId(b))).collect();
    bundles
        .iter()
        .enumerate()
        .map(|(i, b)| Task {
            agent: format!("t{i}"),
            context: ContextId(0),
            reads: set(b.reads),
            writes: set(b.writes),
            bid: b.bid,
            target: None,
            aux: None,
        })
        .collect()
}

fn scheduler_approximation() -> Outcome {
    let start = Instant::now();
    let mut r = rng(7);
    let mut worst = f64::INFINITY;
    for n in 0..1000 {
        let bundles = auction::random_auction(&mut r, 12, 6, false);
        let ts = auction_tasks(&bundles);
        let won = select_winners(&ts);
        ensure(auction::conflict_free(&bundles, &won), || format!("auction {n}: winners conflict"))?;
        let (opt, _) = auction::optimum(&bundles);
        if opt > 0.0 {
            let m = f64::from(auction::written_resources(&bundles));
            let ratio = value(&ts, &won) * m.sqrt() / opt;
            ensure(ratio >= 1.0 - 1e-9, || format!("auction {n}: value·√m/OPT = {ratio}"))?;
            worst = worst.min(ratio);
        }
    }
    let took = within(start, Duration::from_secs(60))?;
    Ok(format!("1000 auctions conflict-free, min value·√m/OPT = {worst:.3} ≥ 1 ({took:.2?})"))
}

fn transformation_soundness() -> Outcome {
    let k = Kernel::new();
    let mut g = FormulaGen::new(&k, rng(8));
    let mut skolemized = 0;
    for n in 0..1000 {
        let f = g.formula();
        ensure(quantifier_count(&f) <= 2, || format!("formula {n} has too many quantifiers"))?;
        let s = simplify(&k, &f).map_err(|e| e.to_string())?;
        let nf = nnf(&k, &f).map_err(|e| e.to_string())?;
        let p = prenex(&k, &nf).map_err(|e| e.to_string())?;
        for (name, t) in [("simplify", &s), ("nnf", &nf), ("prenex", &p)] {
            ensure(equivalent(&f, t), || format!("formula {n}: {name} changes a truth value"))?;
        }
        let (sk, fresh) = skolemize(&k, &nf).map_err(|e| e.to_string())?;
        skolemized += usize::from(!fresh.is_empty());
        ensure(existentials(&sk) == 0, || format!("formula {n}: existentials remain"))?;
        ensure(satisfiable(&f) == satisfiable(&sk), || format!("formula {n}: skolemize changes satisfiability"))?;
    }
    Ok(format!("1000 formulas: simplify/nnf/prenex equivalent, skolemize equisatisfiable ({skolemized} with witnesses) over 2 elements"))
}

fn parser_round_trip() -> Outcome {
    let mut g = TptpGen::new(rng(9));
    for dialect in [Dialect::Cnf, Dialect::Fof, Dialect::Tff, Dialect::Thf] {
        for n in 0..500 {
            let f = g.annotated(dialect);
            let printed = printer::annotated(&f);
            let parsed = tptp::parse(&printed).map_err(|e| format!("{dialect} {n}: {e}"))?;
            ensure(parsed == vec![f], || format!("{dialect} {n}: {printed}"))?;
        }
    }
    let mut count = 0;
    for name in ["dreadbury.cnf.p", "dreadbury.fof.p", "lists.tff.p", "cantor.thf.p"] {
        let text = std::fs::read_to_string(core_dir().join("fixtures").join(name)).map_err(|e| e.to_string())?;
        let fs = tptp::parse(&text).map_err(|e| format!("{name}: {e}"))?;
        for f in fs {
            let printed = printer::annotated(&f);
            let again = tptp::parse(&printed).map_err(|e| format!("{name}: {e}"))?;
            ensure(again == vec![f], || format!("{name}: {printed}"))?;
            count += 1;
        }
    }
    Ok(format!("500 generated formulas per dialect and {count} fixture formulas (4 dialects) reach a fixpoint"))
}

const E2E: &str = "
parse thf(a_type, type, a: $i). thf(p_type, type, p: $i > $o). thf(all_p, axiom, ! [X: $i]: (p @ X)). thf(goal, conjecture, p @ a).
split c0 or 2
provers mock good Theorem
provers mock slow Timeout
provers bind good c1
provers bind slow c2
run
context
";

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let first = run_script(&mut Session::new(), E2E);
    let second = run_script(&mut Session::new(), E2E);
    ensure(first == second, || format!("transcripts differ:\n{first}\n---\n{second}"))?;
    ensure(first.contains("\nresult: Theorem\n"), || first.clone())?;
    ensure(first.contains("c0 OR Theorem [2 data]\n  c1 LEAF Theorem\n  c2 LEAF Timeout\n"), || first.clone())?;
    let took = within(start, Duration::from_secs(10))?;
    Ok(format!("OR split with Theorem and Timeout provers ends with root Theorem, identical transcripts ({took:.2?} for two runs)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("example fidelity", example_fidelity),
        ("normalization oracle", normalization_oracle),
        ("sharing invariants", sharing),
        ("η-long preservation", eta_preservation),
        ("index/scan equivalence", index_scan),
        ("SZS propagation", szs_propagation),
        ("scheduler approximation", scheduler_approximation),
        ("transformation soundness", transformation_soundness),
        ("parser round-trip", parser_round_trip),
        ("end-to-end", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
