use holboard_board::transform::{existentials, is_nnf, is_prenex, nnf, prenex, simplify, skolemize};
use holboard_core::{Arg, ConstId, Head, Kernel, TermNode, TermRef};
use holboard_testkit::logic::{equivalent, quantifier_count, satisfiable, symbols, FormulaGen};
use holboard_testkit::rng;

/// Negation normal form checked on raw term structure: no `⇒`, no `=` on
/// formulas, `¬` only above atoms.
fn raw_nnf(t: &TermRef, under_not: bool) -> bool {
    match t.node() {
        TermNode::Root(Head::Const(c, _), sp) => {
            let args: Vec<&TermRef> = sp.iter().filter_map(Arg::as_term).collect();
            match *c {
                ConstId::IMPLIES => false,
                ConstId::EQ => !holboard_board::logic::is_bool(args[0]),
                ConstId::NOT => !under_not && raw_nnf(args[0], true),
                ConstId::AND | ConstId::OR | ConstId::PI | ConstId::SIGMA => !under_not && args.iter().all(|a| raw_nnf(a, false)),
                ConstId::TRUE | ConstId::FALSE => !under_not,
                _ => true,
            }
        }
        TermNode::Abs(_, b) => raw_nnf(b, under_not),
        _ => true,
    }
}

fn corpus(k: &Kernel, seed: u64, n: usize) -> Vec<TermRef> {
    let mut g = FormulaGen::new(k, rng(seed));
    (0..n).map(|_| g.formula()).collect()
}

#[test]
fn generated_formulas_stay_small() {
    let k = Kernel::new();
    let fs = corpus(&k, 1, 1000);
    let individuals = [k.head_const(&k.const_named("a").unwrap()).unwrap(), k.head_const(&k.const_named("b").unwrap()).unwrap()];
    for f in fs {
        assert!(quantifier_count(&f) <= 2);
        let preds = symbols(&[&f]).into_keys().filter(|c| !individuals.contains(c)).count();
        assert!(preds <= 3);
    }
}

#[test]
fn rewrites_preserve_truth_values() {
    let k = Kernel::new();
    for f in corpus(&k, 2, 1000) {
        let s = simplify(&k, &f).unwrap();
        assert!(equivalent(&f, &s), "simplify {f:?}");
        let n = nnf(&k, &f).unwrap();
        assert!(equivalent(&f, &n), "nnf {f:?}");
        assert!(is_nnf(&k, &n) && raw_nnf(&n, false), "{n:?}");
        let p = prenex(&k, &n).unwrap();
        assert!(equivalent(&f, &p), "prenex {f:?}");
        assert!(is_prenex(&k, &p) && is_nnf(&k, &p));
        assert_eq!(quantifier_count(&p), quantifier_count(&n));
    }
}

#[test]
fn skolemization_preserves_satisfiability() {
    let k = Kernel::new();
    let mut with_witnesses = 0;
    for f in corpus(&k, 3, 1000) {
        let n = nnf(&k, &f).unwrap();
        let (s, fresh) = skolemize(&k, &n).unwrap();
        assert_eq!(fresh.len(), existentials(&n));
        assert_eq!(existentials(&s), 0);
        assert_eq!(satisfiable(&f), satisfiable(&s), "{f:?}");
        with_witnesses += !fresh.is_empty() as usize;
    }
    assert!(with_witnesses > 100, "{with_witnesses}");
}

#[test]
fn rewrites_are_idempotent() {
    let k = Kernel::new();
    for f in corpus(&k, 4, 300) {
        let s = simplify(&k, &f).unwrap();
        assert_eq!(simplify(&k, &s).unwrap(), s);
        let n = nnf(&k, &f).unwrap();
        assert_eq!(nnf(&k, &n).unwrap(), n);
        let p = prenex(&k, &n).unwrap();
        assert_eq!(prenex(&k, &p).unwrap(), p);
    }
}
