//! Hand-built terms with known renderings and normal forms.

use holboard_core::{Arg, Head, Kernel, TermRef, TypeRef};

/// `Λ λ_{1̲→o} f · (1̲; λ_1̲ 2 · (1); T)` with `f : ∀α. (α→o)→o→o` and
/// `T : o`. Declares `f` and `T` if needed.
pub fn polymorphic_example(k: &Kernel) -> TermRef {
    let tb = k.types();
    let o = tb.bool();
    let a = tb.var(1);
    let a_o = tb.arrow(a.clone(), o.clone());
    let f_ty = tb.forall(tb.arrows([a_o.clone(), o.clone()], o.clone()));
    let f = k.const_named("f").unwrap_or_else(|| k.declare("f", f_ty).expect("fresh f"));
    let t = k.const_named("T").unwrap_or_else(|| k.declare("T", o).expect("fresh T"));
    let x = k.bound(1, a.clone()).expect("index 1");
    let inner = k.abs(
        a.clone(),
        k.root(Head::Bound(2, a_o.clone()), vec![Arg::Term(x)]).expect("typed"),
    );
    let body = k
        .app(&f, vec![Arg::Type(a), Arg::Term(inner), Arg::Term(t)])
        .expect("typed");
    k.type_abs(k.abs(a_o, body))
}

/// `∀α. (α→α)→α→α`.
pub fn church_type(k: &Kernel) -> TypeRef {
    let tb = k.types();
    let a = tb.var(1);
    let aa = tb.arrow(a.clone(), a.clone());
    tb.forall(tb.arrows([aa, a.clone()], a))
}

/// Polymorphic Church numeral `Λ λ_{1̲→1̲} λ_{1̲} 2 (2 (… 1))`.
pub fn church(k: &Kernel, n: u32) -> TermRef {
    let tb = k.types();
    let a = tb.var(1);
    let aa = tb.arrow(a.clone(), a.clone());
    let mut body = k.bound(1, a.clone()).expect("index 1");
    let f = k.bound(2, aa.clone()).expect("index 2");
    for _ in 0..n {
        body = k.apply(&f, &[body]).expect("typed");
    }
    k.type_abs(k.abs(aa, k.abs(a, body)))
}

/// `λm λn Λ. n [1̲→1̲] (m [1̲])`, computing `m^n`.
pub fn church_exp(k: &Kernel) -> TermRef {
    let tb = k.types();
    let nat = church_type(k);
    let a = tb.var(1);
    let aa = tb.arrow(a.clone(), a.clone());
    let m = k.bound(2, nat.clone()).expect("index 2");
    let n = k.bound(1, nat.clone()).expect("index 1");
    let m_a = k.app(&m, vec![Arg::Type(a)]).expect("typed");
    let body = k.app(&n, vec![Arg::Type(aa), Arg::Term(m_a)]).expect("typed");
    k.abs(nat.clone(), k.abs(nat, k.type_abs(body)))
}

/// `m^n` as an unreduced term.
pub fn church_power(k: &Kernel, m: u32, n: u32) -> TermRef {
    k.apply(&church_exp(k), &[church(k, m), church(k, n)]).expect("typed")
}
