//! Reading and building formulas in the standard HOL encoding:
//! connectives are constants, quantifiers are `Π`/`Σ` applied to a type
//! and an abstraction.

use holboard_core::normalize::subst::apply_direct;
use holboard_core::{Arg, ConstId, Front, Head, Kernel, TermNode, TermRef, TypeNode, TypeRef};

/// Top-level shape of a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    True,
    False,
    Not(TermRef),
    And(TermRef, TermRef),
    Or(TermRef, TermRef),
    Implies(TermRef, TermRef),
    Eq(TypeRef, TermRef, TermRef),
    /// Binder type and body (under one more bound variable).
    Forall(TypeRef, TermRef),
    Exists(TypeRef, TermRef),
    Atom,
}

pub fn shape(k: &Kernel, t: &TermRef) -> Shape {
    let TermNode::Root(Head::Const(c, _), sp) = t.node() else {
        return Shape::Atom;
    };
    let args = sp.args();
    let term = |i: usize| args.get(i).and_then(Arg::as_term).cloned();
    let ty = |i: usize| match args.get(i) {
        Some(Arg::Type(t)) => Some(t.clone()),
        _ => None,
    };
    match (*c, args.len()) {
        (ConstId::TRUE, 0) => Shape::True,
        (ConstId::FALSE, 0) => Shape::False,
        (ConstId::NOT, 1) => Shape::Not(term(0).expect("typed")),
        (ConstId::AND, 2) => Shape::And(term(0).expect("typed"), term(1).expect("typed")),
        (ConstId::OR, 2) => Shape::Or(term(0).expect("typed"), term(1).expect("typed")),
        (ConstId::IMPLIES, 2) => Shape::Implies(term(0).expect("typed"), term(1).expect("typed")),
        (ConstId::EQ, 3) => Shape::Eq(ty(0).expect("typed"), term(1).expect("typed"), term(2).expect("typed")),
        (q @ (ConstId::PI | ConstId::SIGMA), 2) => {
            let ty = ty(0).expect("typed");
            let body = binder_body(k, &ty, &term(1).expect("typed"));
            if q == ConstId::PI {
                Shape::Forall(ty, body)
            } else {
                Shape::Exists(ty, body)
            }
        }
        _ => Shape::Atom,
    }
}

/// Body of the predicate `p` under a fresh binder: the abstraction's body,
/// or `p` shifted and applied to the new variable.
fn binder_body(k: &Kernel, ty: &TypeRef, p: &TermRef) -> TermRef {
    match p.node() {
        TermNode::Abs(_, body) => body.clone(),
        _ => {
            let shifted = shift(k, p, 1);
            let x = k.bound(1, ty.clone()).expect("index ≥ 1");
            k.apply(&shifted, &[x]).expect("typed")
        }
    }
}

pub fn is_bool(t: &TermRef) -> bool {
    t.ty().node() == &TypeNode::Base(holboard_core::BaseId::BOOL)
}

pub fn top(k: &Kernel) -> TermRef {
    k.constant(ConstId::TRUE)
}

pub fn bot(k: &Kernel) -> TermRef {
    k.constant(ConstId::FALSE)
}

pub fn not(k: &Kernel, a: TermRef) -> TermRef {
    k.apply(&k.constant(ConstId::NOT), &[a]).expect("typed")
}

pub fn and(k: &Kernel, a: TermRef, b: TermRef) -> TermRef {
    k.apply(&k.constant(ConstId::AND), &[a, b]).expect("typed")
}

pub fn or(k: &Kernel, a: TermRef, b: TermRef) -> TermRef {
    k.apply(&k.constant(ConstId::OR), &[a, b]).expect("typed")
}

pub fn implies(k: &Kernel, a: TermRef, b: TermRef) -> TermRef {
    k.apply(&k.constant(ConstId::IMPLIES), &[a, b]).expect("typed")
}

pub fn eq(k: &Kernel, ty: TypeRef, a: TermRef, b: TermRef) -> TermRef {
    k.app(&k.constant(ConstId::EQ), vec![Arg::Type(ty), Arg::Term(a), Arg::Term(b)])
        .expect("typed")
}

pub fn forall(k: &Kernel, ty: TypeRef, body: TermRef) -> TermRef {
    quantify(k, ConstId::PI, ty, body)
}

pub fn exists(k: &Kernel, ty: TypeRef, body: TermRef) -> TermRef {
    quantify(k, ConstId::SIGMA, ty, body)
}

fn quantify(k: &Kernel, q: ConstId, ty: TypeRef, body: TermRef) -> TermRef {
    let lam = k.abs(ty.clone(), body);
    k.app(&k.constant(q), vec![Arg::Type(ty), Arg::Term(lam)])
        .expect("typed")
}

/// Shifts every loose term index of `t` by `d`.
pub fn shift(k: &Kernel, t: &TermRef, d: u32) -> TermRef {
    if d == 0 {
        return t.clone();
    }
    apply_direct(k, t, &k.shift_subst(d))
}

/// Shifts the loose indices of `t` above `cutoff` by `d`.
pub fn shift_above(k: &Kernel, t: &TermRef, cutoff: u32, d: u32) -> TermRef {
    if d == 0 {
        return t.clone();
    }
    let mut sigma = k.shift_subst(cutoff + d);
    for i in (1..=cutoff).rev() {
        sigma = k.cons_subst(Front::Index(i), &sigma);
    }
    apply_direct(k, t, &sigma)
}

/// `body` with index 1 replaced by `s` and the other loose indices
/// lowered by one.
pub fn instantiate(k: &Kernel, body: &TermRef, s: &TermRef) -> TermRef {
    apply_direct(k, body, &k.single_subst(s.clone()))
}

/// Whether loose index `i` occurs in `t`.
pub fn occurs(t: &TermRef, i: u32) -> bool {
    if t.loose_term() < i {
        return false;
    }
    match t.node() {
        TermNode::Root(h, sp) => {
            matches!(h, Head::Bound(j, _) if *j == i) || sp.iter().any(|a| matches!(a, Arg::Term(u) if occurs(u, i)))
        }
        TermNode::Abs(_, b) => occurs(b, i + 1),
        TermNode::TypeAbs(b) => occurs(b, i),
        TermNode::Redex(f, sp) => occurs(f, i) || sp.iter().any(|a| matches!(a, Arg::Term(u) if occurs(u, i))),
        TermNode::Closure(..) => true,
    }
}

/// Number of `Σ` occurrences (existential quantifiers).
pub fn count_const(t: &TermRef, c: ConstId) -> usize {
    let mut n = 0;
    let mut stack = vec![t.clone()];
    while let Some(u) = stack.pop() {
        match u.node() {
            TermNode::Root(h, sp) => {
                if matches!(h, Head::Const(d, _) if *d == c) {
                    n += 1;
                }
                stack.extend(sp.iter().filter_map(Arg::as_term).cloned());
            }
            TermNode::Abs(_, b) | TermNode::TypeAbs(b) => stack.push(b.clone()),
            TermNode::Redex(f, sp) => {
                stack.push(f.clone());
                stack.extend(sp.iter().filter_map(Arg::as_term).cloned());
            }
            TermNode::Closure(b, _) => stack.push(b.clone()),
        }
    }
    n
}
