//! Brute-force index queries by structural walk.

use std::collections::BTreeSet;

use holboard_core::index::{Position, Step};
use holboard_core::{Arg, Head, TermNode, TermRef};

fn walk(t: &TermRef, path: &mut Vec<Step>, visit: &mut impl FnMut(&TermRef, &[Step])) {
    visit(t, path);
    match t.node() {
        TermNode::Abs(_, b) => {
            path.push(Step::IntoAbstractionBody);
            walk(b, path, visit);
            path.pop();
        }
        TermNode::TypeAbs(b) => {
            path.push(Step::IntoTypeAbstractionBody);
            walk(b, path, visit);
            path.pop();
        }
        TermNode::Root(_, sp) | TermNode::Redex(_, sp) => {
            for (i, a) in sp.iter().enumerate() {
                if let Arg::Term(u) = a {
                    path.push(Step::SpineArg(i as u32 + 1));
                    walk(u, path, visit);
                    path.pop();
                }
            }
        }
        TermNode::Closure(..) => {}
    }
}

/// All subterms of `terms` that are applications of `head`.
pub fn by_head(terms: &[TermRef], head: &Head) -> BTreeSet<TermRef> {
    let mut out = BTreeSet::new();
    for t in terms {
        walk(t, &mut Vec::new(), &mut |s, _| {
            if let TermNode::Root(h, _) = s.node() {
                if h == head {
                    out.insert(s.clone());
                }
            }
        });
    }
    out
}

/// All `(term, position)` pairs where `sub` occurs.
pub fn occurrences(terms: &[TermRef], sub: &TermRef) -> BTreeSet<(TermRef, Position)> {
    let mut out = BTreeSet::new();
    for t in terms {
        walk(t, &mut Vec::new(), &mut |s, path| {
            if s == sub {
                out.insert((t.clone(), Position(path.to_vec())));
            }
        });
    }
    out
}

/// Every distinct subterm and every distinct root head of `terms`.
pub fn universe(terms: &[TermRef]) -> (Vec<TermRef>, Vec<Head>) {
    let mut subs = BTreeSet::new();
    let mut heads = Vec::new();
    for t in terms {
        walk(t, &mut Vec::new(), &mut |s, _| {
            subs.insert(s.clone());
            if let TermNode::Root(h, _) = s.node() {
                if !heads.contains(h) {
                    heads.push(h.clone());
                }
            }
        });
    }
    (subs.into_iter().collect(), heads)
}
