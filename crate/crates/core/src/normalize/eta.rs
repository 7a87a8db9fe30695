use crate::kernel::Kernel;
use crate::term::{Arg, TermNode, TermRef};

use super::subst::{apply_direct, shift};

/// η-long expansion: every maximal application of arrow type `a → b` is
/// wrapped as `λ_a (t' x)` with `x` itself expanded, until every
/// non-abstraction subterm has a non-arrow type. Closures are evaluated
/// first. The result is β-normal iff the input is.
pub fn eta_long(k: &Kernel, t: &TermRef) -> TermRef {
    match t.node() {
        TermNode::Abs(ty, b) => k.abs(ty.clone(), eta_long(k, b)),
        TermNode::TypeAbs(b) => k.type_abs(eta_long(k, b)),
        TermNode::Closure(b, sigma) => eta_long(k, &apply_direct(k, b, sigma)),
        TermNode::Root(h, sp) => {
            let r = k
                .root(h.clone(), eta_args(k, sp.args()))
                .expect("η-expansion preserves typing");
            expand(k, r)
        }
        TermNode::Redex(fun, sp) => {
            let r = k
                .app(&eta_long(k, fun), eta_args(k, sp.args()))
                .expect("η-expansion preserves typing");
            expand(k, r)
        }
    }
}

fn eta_args(k: &Kernel, args: &[Arg]) -> Vec<Arg> {
    args.iter()
        .map(|a| match a {
            Arg::Term(u) => Arg::Term(eta_long(k, u)),
            Arg::Type(ty) => Arg::Type(ty.clone()),
        })
        .collect()
}

fn expand(k: &Kernel, r: TermRef) -> TermRef {
    let Some((dom, _)) = r.ty().as_arrow() else {
        return r;
    };
    let dom = dom.clone();
    let var = eta_long(k, &k.bound(1, dom.clone()).expect("index 1"));
    let body = k
        .apply(&shift(k, &r, 1, 0), &[var])
        .expect("η-expansion preserves typing");
    k.abs(dom, expand(k, body))
}

/// True iff no application or variable occurrence in `t` has arrow type
/// outside function position, and `t` contains no closure.
pub fn is_eta_long(t: &TermRef) -> bool {
    match t.node() {
        TermNode::Abs(_, b) | TermNode::TypeAbs(b) => is_eta_long(b),
        TermNode::Closure(..) => false,
        TermNode::Root(_, sp) => !t.ty().is_arrow() && args_eta_long(sp.args()),
        TermNode::Redex(fun, sp) => {
            !t.ty().is_arrow() && is_eta_long(fun) && args_eta_long(sp.args())
        }
    }
}

fn args_eta_long(args: &[Arg]) -> bool {
    args.iter().all(|a| match a {
        Arg::Term(u) => is_eta_long(u),
        Arg::Type(_) => true,
    })
}

/// β-normal and η-long.
pub fn is_normal_eta_long(t: &TermRef) -> bool {
    t.is_beta_normal() && is_eta_long(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expands_function_constant() {
        let k = Kernel::new();
        let ty = k.types();
        let i = ty.individual();
        let f = k.declare("f", ty.arrows([i.clone(), i.clone()], i.clone())).unwrap();
        let e = eta_long(&k, &f);
        let body = k
            .apply(&f, &[k.bound(2, i.clone()).unwrap(), k.bound(1, i.clone()).unwrap()])
            .unwrap();
        assert_eq!(e, k.abs(i.clone(), k.abs(i, body)));
        assert!(is_normal_eta_long(&e));
        assert!(!is_eta_long(&f));
    }

    #[test]
    fn expands_higher_order_variable_argument() {
        let k = Kernel::new();
        let ty = k.types();
        let i = ty.individual();
        let ii = ty.arrow(i.clone(), i.clone());
        let g = k.declare("g", ty.arrow(ii.clone(), i.clone())).unwrap();
        // λ_{ι→ι} g 1   becomes   λ_{ι→ι} g (λ_ι 2 1)
        let t = k.abs(ii.clone(), k.apply(&g, &[k.bound(1, ii.clone()).unwrap()]).unwrap());
        let e = eta_long(&k, &t);
        let inner = k.abs(
            i.clone(),
            k.apply(&k.bound(2, ii.clone()).unwrap(), &[k.bound(1, i).unwrap()])
                .unwrap(),
        );
        assert_eq!(e, k.abs(ii, k.apply(&g, &[inner]).unwrap()));
        assert_eq!(eta_long(&k, &e), e);
    }
}
