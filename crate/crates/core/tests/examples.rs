use holboard_core::index::TermIndex;
use holboard_core::normalize::{benchmark_strategies, beta_normalize, eta_long, is_normal_eta_long, type_beta_normalize};
use holboard_core::pretty::{term_string, type_nameless};
use holboard_core::{Arg, Head, Kernel, Strategy, Style};
use holboard_testkit::examples::{church, church_power, polymorphic_example};
use holboard_testkit::named;

#[test]
fn polymorphic_example_matches_golden() {
    let golden = include_str!("golden/polymorphic_example.txt");
    let lines: Vec<&str> = golden.lines().collect();
    let k = Kernel::new();
    let t = polymorphic_example(&k);
    assert_eq!(term_string(&k, &t, Style::Nameless), lines[0]);
    assert_eq!(term_string(&k, &t, Style::Spine), lines[1]);
    assert_eq!(type_nameless(&k, t.ty()), lines[2]);
    assert_eq!(polymorphic_example(&k), t);
}

#[test]
fn polymorphic_example_is_already_normal() {
    let k = Kernel::new();
    let t = polymorphic_example(&k);
    for s in Strategy::ALL {
        let (nf, stats) = beta_normalize(&k, &t, s).unwrap();
        assert_eq!(nf, t);
        assert_eq!(stats.reduction_steps, 0);
    }
}

#[test]
fn identity_and_k_combinator() {
    let k = Kernel::new();
    let tb = k.types();
    let i = tb.individual();
    let c = k.declare("c", i.clone()).unwrap();
    let a = k.declare("a", i.clone()).unwrap();
    let b = k.declare("b", i.clone()).unwrap();
    let id = k.abs(i.clone(), k.bound(1, i.clone()).unwrap());
    let kk = k.abs(i.clone(), k.abs(i.clone(), k.bound(2, i.clone()).unwrap()));
    let id_c = k.apply(&id, &[c.clone()]).unwrap();
    let k_ab = k.apply(&kk, &[a.clone(), b]).unwrap();
    for s in Strategy::ALL {
        assert_eq!(beta_normalize(&k, &id_c, s).unwrap().0, c);
        assert_eq!(beta_normalize(&k, &k_ab, s).unwrap().0, a);
    }
    assert_eq!(named::reference_normal_form(&k, &k_ab), a);
}

#[test]
fn polymorphic_identity_instantiation() {
    let k = Kernel::new();
    let tb = k.types();
    let i = tb.individual();
    let c = k.declare("c", i.clone()).unwrap();
    let pid = k.type_abs(k.abs(tb.var(1), k.bound(1, tb.var(1)).unwrap()));
    let at_i = k.app(&pid, vec![Arg::Type(i.clone())]).unwrap();
    let expected = k.abs(i.clone(), k.bound(1, i.clone()).unwrap());
    assert_eq!(type_beta_normalize(&k, &at_i).unwrap(), expected);

    let applied = k.app(&pid, vec![Arg::Type(i), Arg::Term(c.clone())]).unwrap();
    let partly = type_beta_normalize(&k, &applied).unwrap();
    assert!(!partly.is_beta_normal());
    for s in Strategy::ALL {
        assert_eq!(beta_normalize(&k, &applied, s).unwrap().0, c);
    }
    assert_eq!(named::reference_normal_form(&k, &applied), c);
    assert_eq!(type_beta_normalize(&k, &c).unwrap(), c);
}

#[test]
fn church_exponentiation() {
    let k = Kernel::new();
    for (m, n, expected) in [(2, 2, 4), (3, 2, 9), (2, 3, 8)] {
        let t = church_power(&k, m, n);
        let want = church(&k, expected);
        assert_eq!(named::reference_normal_form(&k, &t), want);
        for s in Strategy::ALL {
            assert_eq!(beta_normalize(&k, &t, s).unwrap().0, want, "{s} on {m}^{n}");
        }
    }
}

#[test]
fn benchmark_table() {
    let k = Kernel::new();
    let empty = benchmark_strategies(&k, &[], &Strategy::ALL);
    assert!(empty.rows.is_empty() && empty.totals().is_empty());

    let c = k.declare("c", k.types().individual()).unwrap();
    let one = benchmark_strategies(&k, &[c], &Strategy::ALL);
    assert_eq!(one.rows.len(), 5);
    assert!(one.rows.iter().all(|r| r.stats.reduction_steps == 0));

    let corpus = [church_power(&k, 2, 2), church_power(&k, 3, 2)];
    let report = benchmark_strategies(&k, &corpus, &Strategy::ALL);
    assert!(report.disagreements.is_empty() && report.failures.is_empty());
    let totals = report.totals();
    assert_eq!(totals.len(), 5);
    let counters: Vec<(u64, u64, u64)> = totals
        .iter()
        .map(|(_, s)| (s.reduction_steps, s.closures_built, s.subst_compositions))
        .collect();
    assert!(counters.iter().any(|c| *c != counters[0]), "{counters:?}");

    let mut csv = Vec::new();
    report.write_csv(&mut csv).unwrap();
    let csv = String::from_utf8(csv).unwrap();
    assert!(csv.starts_with("strategy,corpusItem,steps,closures,compositions,nanoseconds\n"));
    assert_eq!(csv.lines().count(), 11);
}

#[test]
fn eta_expansion_examples() {
    let k = Kernel::new();
    let tb = k.types();
    let i = tb.individual();
    let ii = tb.arrow(i.clone(), i.clone());
    let f = k.declare("f", ii.clone()).unwrap();
    let c = k.declare("c", i.clone()).unwrap();
    let g = k.declare("g", tb.arrow(ii.clone(), i.clone())).unwrap();

    let x = k.bound(1, i.clone()).unwrap();
    assert_eq!(eta_long(&k, &f), k.abs(i.clone(), k.apply(&f, &[x.clone()]).unwrap()));
    assert_eq!(eta_long(&k, &c), c);

    let g_long = eta_long(&k, &g);
    let inner = k.abs(i.clone(), k.apply(&k.bound(2, ii.clone()).unwrap(), &[x]).unwrap());
    let expected = k.abs(ii, k.apply(&g, &[inner]).unwrap());
    assert_eq!(g_long, expected);
    assert_eq!(term_string(&k, &g_long, Style::Spine), "λ_{ι→ι} g · (λ_ι 2 · (1))");
    assert!(named::is_normal_eta_long(&k, &g_long));
    assert!(!named::is_normal_eta_long(&k, &g));
    assert!(is_normal_eta_long(&g_long));
}

#[test]
fn index_examples() {
    let k = Kernel::new();
    let tb = k.types();
    let i = tb.individual();
    let c = k.declare("c", i.clone()).unwrap();
    let idx = TermIndex::new();
    let c_head = Head::Const(k.head_const(&c).unwrap(), i.clone());
    assert!(idx.by_head(&c_head).is_empty());
    idx.insert(&k, &c).unwrap();
    assert_eq!(idx.by_head(&c_head), vec![c.clone()]);

    let t = polymorphic_example(&k);
    idx.insert(&k, &t).unwrap();
    let f = k.const_named("f").unwrap();
    let f_head = Head::Const(k.head_const(&f).unwrap(), f.ty().clone());
    let hits = idx.by_head(&f_head);
    assert_eq!(hits.len(), 1);
    assert_eq!(term_string(&k, &hits[0], Style::Spine), "f · (1̲; λ_1̲ 2 · (1); T)");

    let p = k.declare("p", tb.arrow(i.clone(), tb.bool())).unwrap();
    let a = k.declare("a", i.clone()).unwrap();
    let b = k.declare("b", i).unwrap();
    let pa = k.apply(&p, &[a]).unwrap();
    let pb = k.apply(&p, &[b]).unwrap();
    idx.insert(&k, &pa).unwrap();
    idx.insert(&k, &pb).unwrap();
    let p_head = Head::Const(k.head_const(&p).unwrap(), p.ty().clone());
    let mut got = idx.by_head(&p_head);
    got.sort();
    let mut want = vec![pa.clone(), pb];
    want.sort();
    assert_eq!(got, want);

    let size = idx.len();
    idx.insert(&k, &pa).unwrap();
    assert_eq!(idx.len(), size);
}
