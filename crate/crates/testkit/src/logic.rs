//! Random first-order-style formulas and a brute-force evaluator over the
//! two-element domain.

use std::collections::BTreeMap;

use holboard_core::{Arg, ConstId, Head, Kernel, TermNode, TermRef, TypeNode, TypeRef};
use rand::Rng;

/// Predicates `p1 : ι→o`, `q2 : ι→ι→o`, `r0 : o` and individuals `a`, `b`.
pub struct FormulaVocab {
    pub p1: TermRef,
    pub q2: TermRef,
    pub r0: TermRef,
    pub a: TermRef,
    pub b: TermRef,
}

impl FormulaVocab {
    pub fn install(k: &Kernel) -> FormulaVocab {
        let tb = k.types();
        let i = tb.individual();
        let o = tb.bool();
        let get = |name: &str, ty: TypeRef| match k.const_named(name) {
            Some(c) => c,
            None => k.declare(name, ty).expect("fresh constant"),
        };
        FormulaVocab {
            p1: get("p1", tb.arrow(i.clone(), o.clone())),
            q2: get("q2", tb.arrows([i.clone(), i.clone()], o.clone())),
            r0: get("r0", o),
            a: get("a", i.clone()),
            b: get("b", i),
        }
    }
}

pub struct FormulaGen<'k, R> {
    k: &'k Kernel,
    v: FormulaVocab,
    rng: R,
    pub max_quantifiers: u32,
}

impl<'k, R: Rng> FormulaGen<'k, R> {
    pub fn new(k: &'k Kernel, rng: R) -> Self {
        FormulaGen {
            k,
            v: FormulaVocab::install(k),
            rng,
            max_quantifiers: 2,
        }
    }

    /// A closed formula with at most `max_quantifiers` quantifiers.
    pub fn formula(&mut self) -> TermRef {
        let mut quants = self.max_quantifiers;
        let depth = self.rng.gen_range(1..=4);
        self.gen(0, &mut quants, depth)
    }

    fn c(&self, id: ConstId) -> TermRef {
        self.k.constant(id)
    }

    fn term(&mut self, scope: u32) -> TermRef {
        let i = self.k.types().individual();
        if scope > 0 && self.rng.gen_bool(0.7) {
            let idx = self.rng.gen_range(1..=scope);
            return self.k.bound(idx, i).expect("index ≥ 1");
        }
        if self.rng.gen_bool(0.5) {
            self.v.a.clone()
        } else {
            self.v.b.clone()
        }
    }

    fn atom(&mut self, scope: u32) -> TermRef {
        let k = self.k;
        match self.rng.gen_range(0..7) {
            0 | 1 => {
                let t = self.term(scope);
                k.apply(&self.v.p1, &[t]).expect("typed")
            }
            2 | 3 => {
                let t1 = self.term(scope);
                let t2 = if self.rng.gen_bool(0.2) { t1.clone() } else { self.term(scope) };
                k.apply(&self.v.q2, &[t1, t2]).expect("typed")
            }
            4 => self.v.r0.clone(),
            5 => {
                let t1 = self.term(scope);
                let t2 = if self.rng.gen_bool(0.3) { t1.clone() } else { self.term(scope) };
                equality(k, k.types().individual(), t1, t2)
            }
            _ => {
                if self.rng.gen_bool(0.5) {
                    self.c(ConstId::TRUE)
                } else {
                    self.c(ConstId::FALSE)
                }
            }
        }
    }

    fn gen(&mut self, scope: u32, quants: &mut u32, depth: u32) -> TermRef {
        if depth == 0 {
            return self.atom(scope);
        }
        let k = self.k;
        match self.rng.gen_range(0..12) {
            0 => self.atom(scope),
            1 | 2 => {
                let a = self.gen(scope, quants, depth - 1);
                k.apply(&self.c(ConstId::NOT), &[a]).expect("typed")
            }
            3..=7 => {
                let op = [ConstId::AND, ConstId::OR, ConstId::IMPLIES][self.rng.gen_range(0..3)];
                let a = self.gen(scope, quants, depth - 1);
                let b = if self.rng.gen_bool(0.15) && quantifier_count(&a) <= *quants as usize {
                    *quants -= quantifier_count(&a) as u32;
                    a.clone()
                } else {
                    self.gen(scope, quants, depth - 1)
                };
                k.apply(&self.c(op), &[a, b]).expect("typed")
            }
            8 => {
                let a = self.gen(scope, quants, depth - 1);
                let b = self.gen(scope, quants, depth - 1);
                equality(k, k.types().bool(), a, b)
            }
            _ if *quants > 0 => {
                *quants -= 1;
                let body = self.gen(scope + 1, quants, depth - 1);
                let q = if self.rng.gen_bool(0.5) { ConstId::PI } else { ConstId::SIGMA };
                quantify(k, q, k.types().individual(), body)
            }
            _ => self.atom(scope),
        }
    }
}

/// `l =_ty r`.
pub fn equality(k: &Kernel, ty: TypeRef, l: TermRef, r: TermRef) -> TermRef {
    k.app(
        &k.constant(ConstId::EQ),
        vec![Arg::Type(ty), Arg::Term(l), Arg::Term(r)],
    )
    .expect("well-typed equation")
}

/// `Π_ty (λ_ty body)` or `Σ_ty (λ_ty body)`.
pub fn quantify(k: &Kernel, q: ConstId, ty: TypeRef, body: TermRef) -> TermRef {
    k.app(
        &k.constant(q),
        vec![Arg::Type(ty.clone()), Arg::Term(k.abs(ty, body))],
    )
    .expect("well-typed quantification")
}

// ---- evaluation -----------------------------------------------------------

/// Interpretation of user constants over {0, 1}: a truth table per symbol,
/// indexed by the binary encoding of the arguments.
#[derive(Clone, Debug, Default)]
pub struct Interpretation {
    pub tables: BTreeMap<ConstId, Vec<u8>>,
}

fn arity(ty: &TypeRef) -> usize {
    match ty.node() {
        TypeNode::Arrow(a, b) => {
            assert!(!a.is_arrow(), "first-order symbols only");
            1 + arity(b)
        }
        TypeNode::Forall(_) => panic!("polymorphic user symbol"),
        _ => 0,
    }
}

/// Non-logical constants of `terms` with their arities.
pub fn symbols(terms: &[&TermRef]) -> BTreeMap<ConstId, usize> {
    let mut out = BTreeMap::new();
    for t in terms {
        collect(t, &mut out);
    }
    out
}

fn collect(t: &TermRef, out: &mut BTreeMap<ConstId, usize>) {
    match t.node() {
        TermNode::Root(h, sp) => {
            if let Head::Const(c, ty) = h {
                if !c.is_logical() {
                    out.insert(*c, arity(ty));
                }
            }
            for a in sp.iter() {
                if let Arg::Term(u) = a {
                    collect(u, out);
                }
            }
        }
        TermNode::Abs(_, b) | TermNode::TypeAbs(b) => collect(b, out),
        TermNode::Redex(..) | TermNode::Closure(..) => panic!("evaluator expects β-normal input"),
    }
}

/// Calls `f` on every interpretation of `syms`; stops early when `f`
/// returns `false`. Returns whether the enumeration ran to completion.
pub fn for_each_interpretation(syms: &BTreeMap<ConstId, usize>, mut f: impl FnMut(&Interpretation) -> bool) -> bool {
    let sizes: Vec<(ConstId, usize)> = syms.iter().map(|(c, n)| (*c, 1usize << n)).collect();
    let bits: usize = sizes.iter().map(|(_, s)| s).sum();
    assert!(bits <= 24, "too many interpretations ({bits} bits)");
    let mut interp = Interpretation::default();
    for code in 0u64..(1u64 << bits) {
        let mut shift = 0;
        for (c, size) in &sizes {
            let table = (0..*size).map(|j| ((code >> (shift + j)) & 1) as u8).collect();
            interp.tables.insert(*c, table);
            shift += size;
        }
        if !f(&interp) {
            return false;
        }
    }
    true
}

/// Truth value of a closed formula.
pub fn eval(t: &TermRef, interp: &Interpretation) -> bool {
    value(t, &mut Vec::new(), interp) == 1
}

fn value(t: &TermRef, env: &mut Vec<u8>, interp: &Interpretation) -> u8 {
    match t.node() {
        TermNode::Root(h, sp) => apply(h, sp.args(), &[], env, interp),
        other => panic!("cannot evaluate {other:?}"),
    }
}

fn apply(h: &Head, args: &[Arg], extra: &[u8], env: &mut Vec<u8>, interp: &Interpretation) -> u8 {
    let terms: Vec<&TermRef> = args.iter().filter_map(Arg::as_term).collect();
    match h {
        Head::Bound(i, _) => {
            assert!(terms.is_empty() && extra.is_empty(), "first-order variables only");
            env[env.len() - *i as usize]
        }
        Head::Const(c, _) if c.is_logical() => {
            let vals = |n: usize, env: &mut Vec<u8>| -> Vec<u8> {
                let mut v: Vec<u8> = terms.iter().take(n).map(|u| value(u, env, interp)).collect();
                v.extend_from_slice(extra);
                v
            };
            match *c {
                ConstId::TRUE => 1,
                ConstId::FALSE => 0,
                ConstId::NOT => 1 - vals(1, env)[0],
                ConstId::AND => {
                    let v = vals(2, env);
                    v[0] & v[1]
                }
                ConstId::OR => {
                    let v = vals(2, env);
                    v[0] | v[1]
                }
                ConstId::IMPLIES => {
                    let v = vals(2, env);
                    (1 - v[0]) | v[1]
                }
                ConstId::EQ => {
                    let v = vals(2, env);
                    (v[0] == v[1]) as u8
                }
                ConstId::PI | ConstId::SIGMA => {
                    let body = terms[0];
                    let mut results = [0u8; 2];
                    for d in 0..2u8 {
                        results[d as usize] = match body.node() {
                            TermNode::Abs(_, b) => {
                                env.push(d);
                                let r = value(b, env, interp);
                                env.pop();
                                r
                            }
                            TermNode::Root(h2, sp2) => apply(h2, sp2.args(), &[d], env, interp),
                            other => panic!("unexpected quantifier body {other:?}"),
                        };
                    }
                    if *c == ConstId::PI {
                        results[0] & results[1]
                    } else {
                        results[0] | results[1]
                    }
                }
                _ => unreachable!("logical constant"),
            }
        }
        Head::Const(c, _) => {
            let mut idx = 0usize;
            let mut n = 0;
            for u in &terms {
                idx |= (value(u, env, interp) as usize) << n;
                n += 1;
            }
            for d in extra {
                idx |= (*d as usize) << n;
                n += 1;
            }
            interp.tables.get(c).expect("interpreted symbol")[idx]
        }
    }
}

/// Same truth value under every two-element interpretation.
pub fn equivalent(a: &TermRef, b: &TermRef) -> bool {
    let syms = symbols(&[a, b]);
    for_each_interpretation(&syms, |i| eval(a, i) == eval(b, i))
}

/// True under some two-element interpretation.
pub fn satisfiable(t: &TermRef) -> bool {
    let syms = symbols(&[t]);
    !for_each_interpretation(&syms, |i| !eval(t, i))
}

/// Number of quantifier occurrences.
pub fn quantifier_count(t: &TermRef) -> usize {
    match t.node() {
        TermNode::Root(h, sp) => {
            let own = matches!(h, Head::Const(c, _) if *c == ConstId::PI || *c == ConstId::SIGMA) as usize;
            own + sp
                .iter()
                .filter_map(Arg::as_term)
                .map(quantifier_count)
                .sum::<usize>()
        }
        TermNode::Abs(_, b) | TermNode::TypeAbs(b) => quantifier_count(b),
        _ => 0,
    }
}
