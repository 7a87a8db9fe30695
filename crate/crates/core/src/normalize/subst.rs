//! Eager substitution on terms.
//!
//! Two independent routes live here: classic depth-indexed shifting and
//! instantiation (used by the reference strategy and by η-expansion), and
//! [`apply_direct`], which evaluates an arbitrary explicit substitution
//! without performing any β-step.

use crate::kernel::Kernel;
use crate::term::{Arg, Front, Head, Subst, TermNode, TermRef, TermSubst, TermSubstNode};
use crate::types::{TypeRef, TypeSubst};

/// Adds `term_delta` to every dangling term index and `type_delta` to every
/// dangling type index.
pub fn shift(k: &Kernel, t: &TermRef, term_delta: u32, type_delta: u32) -> TermRef {
    if term_delta == 0 && type_delta == 0 {
        return t.clone();
    }
    let mut cache = TypeShiftCache::new(k, type_delta);
    shift_at(k, t, term_delta, 0, 0, &mut cache)
}

/// `lift^cutoff(shift(delta))` for each cutoff, built on demand.
struct TypeShiftCache<'k> {
    k: &'k Kernel,
    by_cutoff: Vec<TypeSubst>,
}

impl<'k> TypeShiftCache<'k> {
    fn new(k: &'k Kernel, delta: u32) -> Self {
        TypeShiftCache {
            k,
            by_cutoff: vec![k.types().shift(delta)],
        }
    }

    fn at(&mut self, cutoff: u32) -> TypeSubst {
        while self.by_cutoff.len() <= cutoff as usize {
            let last = self.by_cutoff.last().expect("non-empty").clone();
            self.by_cutoff.push(self.k.types().lift(&last));
        }
        self.by_cutoff[cutoff as usize].clone()
    }

    fn apply(&mut self, ty: &TypeRef, cutoff: u32) -> TypeRef {
        if ty.loose_bound() <= cutoff {
            return ty.clone();
        }
        let s = self.at(cutoff);
        self.k.types().substitute(ty, &s)
    }
}

fn shift_at(
    k: &Kernel,
    t: &TermRef,
    delta: u32,
    cut_term: u32,
    cut_type: u32,
    types: &mut TypeShiftCache<'_>,
) -> TermRef {
    if t.loose_term() <= cut_term && t.loose_type() <= cut_type {
        return t.clone();
    }
    match t.node() {
        TermNode::Root(head, spine) => {
            let head = match head {
                Head::Bound(i, ty) => {
                    let i = if *i > cut_term { i + delta } else { *i };
                    Head::Bound(i, types.apply(ty, cut_type))
                }
                h @ Head::Const(..) => h.clone(),
            };
            let args = spine
                .iter()
                .map(|a| match a {
                    Arg::Term(s) => Arg::Term(shift_at(k, s, delta, cut_term, cut_type, types)),
                    Arg::Type(ty) => Arg::Type(types.apply(ty, cut_type)),
                })
                .collect();
            k.root(head, args).expect("shifting preserves typing")
        }
        TermNode::Abs(ty, body) => {
            let ty = types.apply(ty, cut_type);
            let body = shift_at(k, body, delta, cut_term + 1, cut_type, types);
            k.abs(ty, body)
        }
        TermNode::TypeAbs(body) => {
            let body = shift_at(k, body, delta, cut_term, cut_type + 1, types);
            k.type_abs(body)
        }
        TermNode::Redex(fun, spine) => {
            let fun = shift_at(k, fun, delta, cut_term, cut_type, types);
            let args = spine
                .iter()
                .map(|a| match a {
                    Arg::Term(s) => Arg::Term(shift_at(k, s, delta, cut_term, cut_type, types)),
                    Arg::Type(ty) => Arg::Type(types.apply(ty, cut_type)),
                })
                .collect();
            k.app(&fun, args).expect("shifting preserves typing")
        }
        TermNode::Closure(body, sigma) => {
            let expanded = apply_direct(k, body, sigma);
            shift_at(k, &expanded, delta, cut_term, cut_type, types)
        }
    }
}

/// `body[arg/1]`: replaces term index 1 by `arg` and decrements the other
/// dangling indices. Substituting into a head position produces a redex
/// when `arg` is an abstraction.
pub fn instantiate(k: &Kernel, body: &TermRef, arg: &TermRef) -> TermRef {
    inst_at(k, body, arg, 0, 0)
}

fn inst_at(k: &Kernel, t: &TermRef, arg: &TermRef, depth: u32, type_depth: u32) -> TermRef {
    if t.loose_term() <= depth {
        return t.clone();
    }
    match t.node() {
        TermNode::Root(head, spine) => {
            let args: Vec<Arg> = spine
                .iter()
                .map(|a| match a {
                    Arg::Term(s) => Arg::Term(inst_at(k, s, arg, depth, type_depth)),
                    Arg::Type(ty) => Arg::Type(ty.clone()),
                })
                .collect();
            match head {
                Head::Bound(i, _) if *i == depth + 1 => {
                    let replacement = shift(k, arg, depth, type_depth);
                    k.app(&replacement, args)
                        .expect("instantiation preserves typing")
                }
                Head::Bound(i, ty) if *i > depth + 1 => k
                    .root(Head::Bound(i - 1, ty.clone()), args)
                    .expect("instantiation preserves typing"),
                h => k.root(h.clone(), args).expect("instantiation preserves typing"),
            }
        }
        TermNode::Abs(ty, b) => k.abs(ty.clone(), inst_at(k, b, arg, depth + 1, type_depth)),
        TermNode::TypeAbs(b) => k.type_abs(inst_at(k, b, arg, depth, type_depth + 1)),
        TermNode::Redex(fun, spine) => {
            let fun = inst_at(k, fun, arg, depth, type_depth);
            let args = spine
                .iter()
                .map(|a| match a {
                    Arg::Term(s) => Arg::Term(inst_at(k, s, arg, depth, type_depth)),
                    Arg::Type(ty) => Arg::Type(ty.clone()),
                })
                .collect();
            k.app(&fun, args).expect("instantiation preserves typing")
        }
        TermNode::Closure(body, sigma) => {
            let expanded = apply_direct(k, body, sigma);
            inst_at(k, &expanded, arg, depth, type_depth)
        }
    }
}

/// `body[ty/1̲]` on the type sort: instantiates type index 1 throughout the
/// annotations of `body`.
pub fn instantiate_type(k: &Kernel, body: &TermRef, ty: &TypeRef) -> TermRef {
    let mut substs = vec![k.types().single(ty.clone())];
    inst_type_at(k, body, 0, &mut substs)
}

fn type_subst_at(k: &Kernel, substs: &mut Vec<TypeSubst>, depth: u32) -> TypeSubst {
    while substs.len() <= depth as usize {
        let last = substs.last().expect("non-empty").clone();
        substs.push(k.types().lift(&last));
    }
    substs[depth as usize].clone()
}

fn inst_type_at(k: &Kernel, t: &TermRef, depth: u32, substs: &mut Vec<TypeSubst>) -> TermRef {
    if t.loose_type() <= depth {
        return t.clone();
    }
    let s = type_subst_at(k, substs, depth);
    let sub = |ty: &TypeRef| k.types().substitute(ty, &s);
    match t.node() {
        TermNode::Root(head, spine) => {
            let head = match head {
                Head::Bound(i, ty) => Head::Bound(*i, sub(ty)),
                h => h.clone(),
            };
            let args = spine
                .iter()
                .map(|a| match a {
                    Arg::Term(u) => Arg::Term(inst_type_at(k, u, depth, substs)),
                    Arg::Type(ty) => Arg::Type(sub(ty)),
                })
                .collect();
            k.root(head, args).expect("type instantiation preserves typing")
        }
        TermNode::Abs(ty, b) => {
            let ty = sub(ty);
            k.abs(ty, inst_type_at(k, b, depth, substs))
        }
        TermNode::TypeAbs(b) => k.type_abs(inst_type_at(k, b, depth + 1, substs)),
        TermNode::Redex(fun, spine) => {
            let fun = inst_type_at(k, fun, depth, substs);
            let args = spine
                .iter()
                .map(|a| match a {
                    Arg::Term(u) => Arg::Term(inst_type_at(k, u, depth, substs)),
                    Arg::Type(ty) => Arg::Type(sub(ty)),
                })
                .collect();
            k.app(&fun, args)
                .expect("type instantiation preserves typing")
        }
        TermNode::Closure(body, sigma) => {
            let expanded = apply_direct(k, body, sigma);
            inst_type_at(k, &expanded, depth, substs)
        }
    }
}

/// Evaluates `t[sigma]` completely, including nested closures, without
/// contracting any redex.
pub fn apply_direct(k: &Kernel, t: &TermRef, sigma: &Subst) -> TermRef {
    if t.is_closed() || (sigma.is_identity() && t.is_beta_normal()) {
        return t.clone();
    }
    let types = k.types();
    match t.node() {
        TermNode::Root(head, spine) => {
            let args = direct_args(k, spine.args(), sigma);
            match head {
                Head::Const(..) => k.root(head.clone(), args),
                Head::Bound(i, ty) => match lookup(k, &sigma.term, *i) {
                    Front::Index(j) => {
                        k.root(Head::Bound(j, types.substitute(ty, &sigma.ty)), args)
                    }
                    Front::Term(s) => k.app(&s, args),
                },
            }
            .expect("substitution preserves typing")
        }
        TermNode::Abs(ty, body) => {
            let ty = types.substitute(ty, &sigma.ty);
            let body = apply_direct(k, body, &lift(k, sigma));
            k.abs(ty, body)
        }
        TermNode::TypeAbs(body) => k.type_abs(apply_direct(k, body, &lift_type(k, sigma))),
        TermNode::Redex(fun, spine) => {
            let fun = apply_direct(k, fun, sigma);
            let args = direct_args(k, spine.args(), sigma);
            k.app(&fun, args).expect("substitution preserves typing")
        }
        TermNode::Closure(body, rho) => {
            let inner = apply_direct(k, body, rho);
            apply_direct(k, &inner, sigma)
        }
    }
}

fn direct_args(k: &Kernel, args: &[Arg], sigma: &Subst) -> Vec<Arg> {
    args.iter()
        .map(|a| match a {
            Arg::Term(s) => Arg::Term(apply_direct(k, s, sigma)),
            Arg::Type(ty) => Arg::Type(k.types().substitute(ty, &sigma.ty)),
        })
        .collect()
}

fn lookup(k: &Kernel, sigma: &TermSubst, i: u32) -> Front {
    match sigma.node() {
        TermSubstNode::Shift(n) => Front::Index(i + n),
        TermSubstNode::Cons(front, rest) => {
            if i == 1 {
                front.clone()
            } else {
                lookup(k, rest, i - 1)
            }
        }
        TermSubstNode::Compose(inner, outer) => apply_front(k, lookup(k, inner, i), outer),
    }
}

fn apply_front(k: &Kernel, front: Front, sigma: &Subst) -> Front {
    match front {
        Front::Index(j) => lookup(k, &sigma.term, j),
        Front::Term(s) => Front::Term(apply_direct(k, &s, sigma)),
    }
}

/// Term part of `tau ∘ sigma` (first `tau`, then `sigma`).
fn compose_term(k: &Kernel, tau: &TermSubst, sigma: &Subst) -> TermSubst {
    if sigma.is_identity() {
        return tau.clone();
    }
    match tau.node() {
        TermSubstNode::Shift(n) => drop_entries(k, &sigma.term, *n),
        TermSubstNode::Cons(front, rest) => {
            let front = apply_front(k, front.clone(), sigma);
            let rest = compose_term(k, rest, sigma);
            k.term_subst(TermSubstNode::Cons(front, rest))
        }
        TermSubstNode::Compose(inner, outer) => {
            let outer = compose(k, outer, sigma);
            compose_term(k, inner, &outer)
        }
    }
}

fn compose(k: &Kernel, tau: &Subst, sigma: &Subst) -> Subst {
    Subst {
        term: compose_term(k, &tau.term, sigma),
        ty: k.types().compose(&tau.ty, &sigma.ty),
    }
}

pub(crate) fn drop_entries(k: &Kernel, sigma: &TermSubst, n: u32) -> TermSubst {
    if n == 0 {
        return sigma.clone();
    }
    match sigma.node() {
        TermSubstNode::Shift(m) => k.term_subst(TermSubstNode::Shift(m + n)),
        TermSubstNode::Cons(_, rest) => drop_entries(k, rest, n - 1),
        TermSubstNode::Compose(inner, outer) => {
            let inner = drop_entries(k, inner, n);
            k.term_subst(TermSubstNode::Compose(inner, outer.clone()))
        }
    }
}

fn lift(k: &Kernel, sigma: &Subst) -> Subst {
    if sigma.is_identity() {
        return sigma.clone();
    }
    let shifted = compose_term(k, &sigma.term, &k.shift_subst(1));
    Subst {
        term: k.term_subst(TermSubstNode::Cons(Front::Index(1), shifted)),
        ty: sigma.ty.clone(),
    }
}

fn lift_type(k: &Kernel, sigma: &Subst) -> Subst {
    if sigma.is_identity() {
        return sigma.clone();
    }
    Subst {
        term: compose_term(k, &sigma.term, &k.type_shift_subst(1)),
        ty: k.types().lift(&sigma.ty),
    }
}
