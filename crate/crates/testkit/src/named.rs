//! Named-variable System F terms with textbook capture-avoiding
//! substitution. Used as a reference normalizer; shares nothing with the
//! kernel's machinery except the conversion boundary.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use holboard_core::{Arg, Head, Kernel, TermNode, TermRef, TypeNode, TypeRef};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NType {
    Base(u32),
    Var(String),
    Arrow(Box<NType>, Box<NType>),
    Forall(String, Box<NType>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NTerm {
    Var(String, NType),
    Const(String, NType),
    App(Box<NTerm>, Box<NTerm>),
    TApp(Box<NTerm>, NType),
    Lam(String, NType, Box<NTerm>),
    TLam(String, Box<NTerm>),
}

static FRESH: AtomicU64 = AtomicU64::new(0);

fn fresh(base: &str) -> String {
    let n = FRESH.fetch_add(1, Ordering::Relaxed);
    let stem = base.split('\'').next().unwrap_or(base);
    format!("{stem}'{n}")
}

// ---- types --------------------------------------------------------------

impl NType {
    pub fn arrow(a: NType, b: NType) -> NType {
        NType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn free_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            NType::Base(_) => {}
            NType::Var(a) => {
                out.insert(a.clone());
            }
            NType::Arrow(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
            NType::Forall(a, b) => {
                let mut inner = BTreeSet::new();
                b.free_vars(&mut inner);
                inner.remove(a);
                out.extend(inner);
            }
        }
    }

    /// `self[alpha := nu]`.
    pub fn subst(&self, alpha: &str, nu: &NType) -> NType {
        match self {
            NType::Base(_) => self.clone(),
            NType::Var(a) if a == alpha => nu.clone(),
            NType::Var(_) => self.clone(),
            NType::Arrow(a, b) => NType::arrow(a.subst(alpha, nu), b.subst(alpha, nu)),
            NType::Forall(b, _) if b == alpha => self.clone(),
            NType::Forall(b, body) => {
                let mut fv = BTreeSet::new();
                nu.free_vars(&mut fv);
                if fv.contains(b) {
                    let b2 = fresh(b);
                    let renamed = body.subst(b, &NType::Var(b2.clone()));
                    NType::Forall(b2, Box::new(renamed.subst(alpha, nu)))
                } else {
                    NType::Forall(b.clone(), Box::new(body.subst(alpha, nu)))
                }
            }
        }
    }

    /// Equality up to renaming of bound type variables.
    pub fn alpha_eq(&self, other: &NType) -> bool {
        match (self, other) {
            (NType::Base(a), NType::Base(b)) => a == b,
            (NType::Var(a), NType::Var(b)) => a == b,
            (NType::Arrow(a1, b1), NType::Arrow(a2, b2)) => a1.alpha_eq(a2) && b1.alpha_eq(b2),
            (NType::Forall(a, b1), NType::Forall(c, b2)) => {
                if a == c {
                    b1.alpha_eq(b2)
                } else {
                    let v = NType::Var(fresh("γ"));
                    b1.subst(a, &v).alpha_eq(&b2.subst(c, &v))
                }
            }
            _ => false,
        }
    }
}

// ---- terms --------------------------------------------------------------

impl NTerm {
    pub fn app(f: NTerm, a: NTerm) -> NTerm {
        NTerm::App(Box::new(f), Box::new(a))
    }

    fn free_vars(&self, terms: &mut BTreeSet<String>, types: &mut BTreeSet<String>) {
        match self {
            NTerm::Var(x, ty) => {
                terms.insert(x.clone());
                ty.free_vars(types);
            }
            NTerm::Const(_, ty) => ty.free_vars(types),
            NTerm::App(f, a) => {
                f.free_vars(terms, types);
                a.free_vars(terms, types);
            }
            NTerm::TApp(f, ty) => {
                f.free_vars(terms, types);
                ty.free_vars(types);
            }
            NTerm::Lam(x, ty, b) => {
                ty.free_vars(types);
                let mut inner = BTreeSet::new();
                b.free_vars(&mut inner, types);
                inner.remove(x);
                terms.extend(inner);
            }
            NTerm::TLam(a, b) => {
                let mut inner = BTreeSet::new();
                b.free_vars(terms, &mut inner);
                inner.remove(a);
                types.extend(inner);
            }
        }
    }

    /// `self[x := s]`, renaming binders that would capture free variables
    /// of `s`.
    pub fn subst(&self, x: &str, s: &NTerm) -> NTerm {
        let mut fv = BTreeSet::new();
        let mut ftv = BTreeSet::new();
        s.free_vars(&mut fv, &mut ftv);
        self.subst_with(x, s, &fv, &ftv)
    }

    fn subst_with(&self, x: &str, s: &NTerm, fv: &BTreeSet<String>, ftv: &BTreeSet<String>) -> NTerm {
        match self {
            NTerm::Var(y, _) if y == x => s.clone(),
            NTerm::Var(..) | NTerm::Const(..) => self.clone(),
            NTerm::App(f, a) => NTerm::app(f.subst_with(x, s, fv, ftv), a.subst_with(x, s, fv, ftv)),
            NTerm::TApp(f, ty) => NTerm::TApp(Box::new(f.subst_with(x, s, fv, ftv)), ty.clone()),
            NTerm::Lam(y, _, _) if y == x => self.clone(),
            NTerm::Lam(y, ty, b) => {
                if fv.contains(y) {
                    let y2 = fresh(y);
                    let b = b.subst(y, &NTerm::Var(y2.clone(), ty.clone()));
                    NTerm::Lam(y2, ty.clone(), Box::new(b.subst_with(x, s, fv, ftv)))
                } else {
                    NTerm::Lam(y.clone(), ty.clone(), Box::new(b.subst_with(x, s, fv, ftv)))
                }
            }
            NTerm::TLam(a, b) => {
                if ftv.contains(a) {
                    let a2 = fresh(a);
                    let b = b.subst_type(a, &NType::Var(a2.clone()));
                    NTerm::TLam(a2, Box::new(b.subst_with(x, s, fv, ftv)))
                } else {
                    NTerm::TLam(a.clone(), Box::new(b.subst_with(x, s, fv, ftv)))
                }
            }
        }
    }

    /// `self[alpha := nu]` in every type annotation.
    pub fn subst_type(&self, alpha: &str, nu: &NType) -> NTerm {
        match self {
            NTerm::Var(x, ty) => NTerm::Var(x.clone(), ty.subst(alpha, nu)),
            NTerm::Const(c, ty) => NTerm::Const(c.clone(), ty.subst(alpha, nu)),
            NTerm::App(f, a) => NTerm::app(f.subst_type(alpha, nu), a.subst_type(alpha, nu)),
            NTerm::TApp(f, ty) => NTerm::TApp(Box::new(f.subst_type(alpha, nu)), ty.subst(alpha, nu)),
            NTerm::Lam(x, ty, b) => NTerm::Lam(x.clone(), ty.subst(alpha, nu), Box::new(b.subst_type(alpha, nu))),
            NTerm::TLam(a, _) if a == alpha => self.clone(),
            NTerm::TLam(a, b) => {
                let mut fv = BTreeSet::new();
                nu.free_vars(&mut fv);
                if fv.contains(a) {
                    let a2 = fresh(a);
                    let b = b.subst_type(a, &NType::Var(a2.clone()));
                    NTerm::TLam(a2, Box::new(b.subst_type(alpha, nu)))
                } else {
                    NTerm::TLam(a.clone(), Box::new(b.subst_type(alpha, nu)))
                }
            }
        }
    }

    /// Type of a well-typed term.
    pub fn type_of(&self) -> NType {
        match self {
            NTerm::Var(_, ty) | NTerm::Const(_, ty) => ty.clone(),
            NTerm::App(f, _) => match f.type_of() {
                NType::Arrow(_, b) => *b,
                other => panic!("applying a term of type {other:?}"),
            },
            NTerm::TApp(f, nu) => match f.type_of() {
                NType::Forall(a, b) => b.subst(&a, nu),
                other => panic!("type-applying a term of type {other:?}"),
            },
            NTerm::Lam(_, ty, b) => NType::arrow(ty.clone(), b.type_of()),
            NTerm::TLam(a, b) => NType::Forall(a.clone(), Box::new(b.type_of())),
        }
    }

    /// Normal-order β-normal form. Terminates on well-typed terms.
    pub fn normalize(&self) -> NTerm {
        match self {
            NTerm::Var(..) | NTerm::Const(..) => self.clone(),
            NTerm::Lam(x, ty, b) => NTerm::Lam(x.clone(), ty.clone(), Box::new(b.normalize())),
            NTerm::TLam(a, b) => NTerm::TLam(a.clone(), Box::new(b.normalize())),
            NTerm::App(f, a) => match f.normalize() {
                NTerm::Lam(x, _, body) => body.subst(&x, a).normalize(),
                g => NTerm::app(g, a.normalize()),
            },
            NTerm::TApp(f, nu) => match f.normalize() {
                NTerm::TLam(alpha, body) => body.subst_type(&alpha, nu).normalize(),
                g => NTerm::TApp(Box::new(g), nu.clone()),
            },
        }
    }

    pub fn is_beta_normal(&self) -> bool {
        match self {
            NTerm::Var(..) | NTerm::Const(..) => true,
            NTerm::Lam(_, _, b) | NTerm::TLam(_, b) => b.is_beta_normal(),
            NTerm::App(f, a) => !matches!(**f, NTerm::Lam(..)) && f.is_beta_normal() && a.is_beta_normal(),
            NTerm::TApp(f, _) => !matches!(**f, NTerm::TLam(..)) && f.is_beta_normal(),
        }
    }

    /// η-long check: every maximal application not in function position
    /// has a non-arrow type.
    pub fn is_eta_long(&self) -> bool {
        match self {
            NTerm::Lam(_, _, b) | NTerm::TLam(_, b) => b.is_eta_long(),
            _ => !matches!(self.type_of(), NType::Arrow(..)) && self.spine_eta_long(),
        }
    }

    fn spine_eta_long(&self) -> bool {
        match self {
            NTerm::Var(..) | NTerm::Const(..) => true,
            NTerm::App(f, a) => f.spine_eta_long() && a.is_eta_long(),
            NTerm::TApp(f, _) => f.spine_eta_long(),
            NTerm::Lam(..) | NTerm::TLam(..) => self.is_eta_long(),
        }
    }
}

// ---- conversion ---------------------------------------------------------

/// Kernel type to named type. `type_names[len - i]` names index `i`.
pub fn type_from_kernel(ty: &TypeRef, type_names: &mut Vec<String>) -> NType {
    match ty.node() {
        TypeNode::Base(b) => NType::Base(b.index()),
        TypeNode::Var(i) => NType::Var(lookup(type_names, *i, "free_ty")),
        TypeNode::Arrow(a, b) => NType::arrow(type_from_kernel(a, type_names), type_from_kernel(b, type_names)),
        TypeNode::Forall(b) => {
            let name = format!("α{}", type_names.len());
            type_names.push(name.clone());
            let body = type_from_kernel(b, type_names);
            type_names.pop();
            NType::Forall(name, Box::new(body))
        }
    }
}

fn lookup(names: &[String], i: u32, free: &str) -> String {
    let i = i as usize;
    if i <= names.len() {
        names[names.len() - i].clone()
    } else {
        format!("{free}{}", i - names.len())
    }
}

/// Kernel term to named term. The term must contain no closures.
pub fn from_kernel(k: &Kernel, t: &TermRef) -> NTerm {
    let mut terms = Vec::new();
    let mut types = Vec::new();
    conv(k, t, &mut terms, &mut types)
}

fn conv(k: &Kernel, t: &TermRef, terms: &mut Vec<String>, types: &mut Vec<String>) -> NTerm {
    match t.node() {
        TermNode::Root(head, spine) => {
            let h = match head {
                Head::Bound(i, ty) => NTerm::Var(lookup(terms, *i, "free"), type_from_kernel(ty, types)),
                Head::Const(c, ty) => {
                    NTerm::Const(k.signature().name(*c).to_owned(), type_from_kernel(ty, types))
                }
            };
            spine_conv(k, h, spine.args(), terms, types)
        }
        TermNode::Redex(f, spine) => {
            let h = conv(k, f, terms, types);
            spine_conv(k, h, spine.args(), terms, types)
        }
        TermNode::Abs(ty, b) => {
            let nty = type_from_kernel(ty, types);
            let name = format!("x{}", terms.len());
            terms.push(name.clone());
            let body = conv(k, b, terms, types);
            terms.pop();
            NTerm::Lam(name, nty, Box::new(body))
        }
        TermNode::TypeAbs(b) => {
            let name = format!("α{}", types.len());
            types.push(name.clone());
            let body = conv(k, b, terms, types);
            types.pop();
            NTerm::TLam(name, Box::new(body))
        }
        TermNode::Closure(..) => panic!("closures are not supported by the reference normalizer"),
    }
}

fn spine_conv(k: &Kernel, mut h: NTerm, args: &[Arg], terms: &mut Vec<String>, types: &mut Vec<String>) -> NTerm {
    for a in args {
        h = match a {
            Arg::Term(u) => NTerm::app(h, conv(k, u, terms, types)),
            Arg::Type(ty) => NTerm::TApp(Box::new(h), type_from_kernel(ty, types)),
        };
    }
    h
}

/// Named type back to a kernel type; free names must not occur.
pub fn type_to_kernel(k: &Kernel, ty: &NType, type_names: &mut Vec<String>) -> TypeRef {
    let tb = k.types();
    match ty {
        NType::Base(b) => {
            let sig = k.signature();
            let id = sig
                .base_types()
                .map(|(id, _)| id)
                .find(|id| id.index() == *b)
                .expect("known base type");
            tb.base(id)
        }
        NType::Var(a) => tb.var(index_of(type_names, a)),
        NType::Arrow(a, b) => {
            let a = type_to_kernel(k, a, type_names);
            let b = type_to_kernel(k, b, type_names);
            tb.arrow(a, b)
        }
        NType::Forall(a, b) => {
            type_names.push(a.clone());
            let body = type_to_kernel(k, b, type_names);
            type_names.pop();
            tb.forall(body)
        }
    }
}

fn index_of(names: &[String], x: &str) -> u32 {
    let pos = names
        .iter()
        .rposition(|n| n == x)
        .unwrap_or_else(|| panic!("unbound name {x}"));
    (names.len() - pos) as u32
}

/// Named term back to an interned kernel term.
pub fn to_kernel(k: &Kernel, t: &NTerm) -> TermRef {
    let mut terms = Vec::new();
    let mut types = Vec::new();
    back(k, t, &mut terms, &mut types)
}

fn back(k: &Kernel, t: &NTerm, terms: &mut Vec<String>, types: &mut Vec<String>) -> TermRef {
    match t {
        NTerm::Var(x, ty) => {
            let ty = type_to_kernel(k, ty, types);
            k.bound(index_of(terms, x), ty).expect("well-typed variable")
        }
        NTerm::Const(c, _) => k.const_named(c).expect("declared constant"),
        NTerm::App(f, a) => {
            let f = back(k, f, terms, types);
            let a = back(k, a, terms, types);
            k.app(&f, vec![Arg::Term(a)]).expect("well-typed application")
        }
        NTerm::TApp(f, ty) => {
            let f = back(k, f, terms, types);
            let ty = type_to_kernel(k, ty, types);
            k.app(&f, vec![Arg::Type(ty)]).expect("well-typed type application")
        }
        NTerm::Lam(x, ty, b) => {
            let ty = type_to_kernel(k, ty, types);
            terms.push(x.clone());
            let body = back(k, b, terms, types);
            terms.pop();
            k.abs(ty, body)
        }
        NTerm::TLam(a, b) => {
            types.push(a.clone());
            let body = back(k, b, terms, types);
            types.pop();
            k.type_abs(body)
        }
    }
}

/// Reference β-normal form of a closed kernel term.
pub fn reference_normal_form(k: &Kernel, t: &TermRef) -> TermRef {
    to_kernel(k, &from_kernel(k, t).normalize())
}

/// Independent β-normal η-long check.
pub fn is_normal_eta_long(k: &Kernel, t: &TermRef) -> bool {
    let n = from_kernel(k, t);
    n.is_beta_normal() && n.is_eta_long()
}
