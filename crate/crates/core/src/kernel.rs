//! The term bank: perfectly shared terms, type checking at construction,
//! and the explicit-substitution constructors.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::{RwLock, RwLockReadGuard, RwLockWriteGuard};
use thiserror::Error;

use crate::intern::Interner;
use crate::pretty;
use crate::signature::{ConstId, Signature, SignatureError};
use crate::term::{
    Arg, Front, Head, HeadSymbol, Spine, Subst, TermData, TermInfo, TermNode, TermRef, TermSubst,
    TermSubstData, TermSubstNode,
};
use crate::types::{TypeBank, TypeNode, TypeRef};

/// Sentinel for "unknown free indices" on closures, whose free variables
/// depend on the substitution.
const OPEN: u32 = u32::MAX / 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("cannot apply a term of type {ty} to a term argument")]
    NotAFunction { ty: String },
    #[error("cannot apply a term of type {ty} to a type argument")]
    NotPolymorphic { ty: String },
    #[error("argument of type {found} where {expected} was expected")]
    ArgumentMismatch { expected: String, found: String },
    #[error("constant `{name}` used at type {found} but declared as {declared}")]
    ConstantType {
        name: String,
        declared: String,
        found: String,
    },
    #[error("redex function must be an abstraction or closure")]
    NotARedex,
    #[error("redex with an empty spine")]
    EmptyRedex,
    #[error("de Bruijn index 0 is not a variable")]
    ZeroIndex,
    #[error("expected a term of type {expected}, found {found}")]
    Expected { expected: String, found: String },
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// Statistics of the term bank.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BankStats {
    pub terms: usize,
    pub types: usize,
    pub substitutions: usize,
    /// Construction requests served.
    pub requests: u64,
}

impl BankStats {
    /// Construction requests per distinct stored term.
    pub fn sharing_ratio(&self) -> f64 {
        if self.terms == 0 {
            0.0
        } else {
            self.requests as f64 / self.terms as f64
        }
    }
}

/// Shared state of the term language: type bank, term bank, substitutions
/// and the signature. Thread-safe; usually held in an `Arc`.
pub struct Kernel {
    types: TypeBank,
    terms: Interner<TermData>,
    substs: Interner<TermSubstData>,
    signature: RwLock<Signature>,
    requests: AtomicU64,
}

impl Default for Kernel {
    fn default() -> Self {
        Self::new()
    }
}

impl Kernel {
    pub fn new() -> Self {
        let types = TypeBank::new();
        let signature = Signature::new(&types);
        Kernel {
            types,
            terms: Interner::new(),
            substs: Interner::new(),
            signature: RwLock::new(signature),
            requests: AtomicU64::new(0),
        }
    }

    pub fn shared() -> Arc<Self> {
        Arc::new(Self::new())
    }

    pub fn types(&self) -> &TypeBank {
        &self.types
    }

    pub fn signature(&self) -> RwLockReadGuard<'_, Signature> {
        self.signature.read()
    }

    pub fn signature_mut(&self) -> RwLockWriteGuard<'_, Signature> {
        self.signature.write()
    }

    pub fn stats(&self) -> BankStats {
        BankStats {
            terms: self.terms.len(),
            types: self.types.len(),
            substitutions: self.substs.len(),
            requests: self.requests.load(Ordering::Relaxed),
        }
    }

    // ---- construction -------------------------------------------------

    /// Returns the unique [`TermRef`] for `node`, type-checking it first.
    pub fn intern(&self, node: TermNode) -> Result<TermRef, TypeError> {
        self.requests.fetch_add(1, Ordering::Relaxed);
        self.terms
            .intern_with(node, |node| self.derive(node))
            .map(TermRef)
    }

    fn derive(&self, node: &TermNode) -> Result<TermInfo, TypeError> {
        Ok(match node {
            TermNode::Root(head, spine) => {
                let (loose_term, head_ty) = match head {
                    Head::Bound(0, _) => return Err(TypeError::ZeroIndex),
                    Head::Bound(i, ty) => (*i, ty.clone()),
                    Head::Const(c, ty) => {
                        let declared = self.signature.read().type_of(*c).clone();
                        if &declared != ty {
                            let name = self.signature.read().name(*c).to_owned();
                            return Err(TypeError::ConstantType {
                                name,
                                declared: self.show_type(&declared),
                                found: self.show_type(ty),
                            });
                        }
                        (0, ty.clone())
                    }
                };
                let ty = self.consume_spine(head_ty.clone(), spine)?;
                let (lt, lty, size, normal) = spine_info(spine);
                TermInfo {
                    ty,
                    loose_term: loose_term.max(lt),
                    loose_type: head_ty.loose_bound().max(lty),
                    size: 1 + size,
                    normal,
                }
            }
            TermNode::Abs(var_ty, body) => TermInfo {
                ty: self.types.arrow(var_ty.clone(), body.ty().clone()),
                loose_term: body.loose_term().saturating_sub(1),
                loose_type: var_ty.loose_bound().max(body.loose_type()),
                size: 1 + body.size(),
                normal: body.is_beta_normal(),
            },
            TermNode::TypeAbs(body) => TermInfo {
                ty: self.types.forall(body.ty().clone()),
                loose_term: body.loose_term(),
                loose_type: body.loose_type().saturating_sub(1),
                size: 1 + body.size(),
                normal: body.is_beta_normal(),
            },
            TermNode::Redex(fun, spine) => {
                if spine.is_empty() {
                    return Err(TypeError::EmptyRedex);
                }
                match fun.0.node_untracked() {
                    TermNode::Abs(..) | TermNode::TypeAbs(_) | TermNode::Closure(..) => {}
                    _ => return Err(TypeError::NotARedex),
                }
                let ty = self.consume_spine(fun.ty().clone(), spine)?;
                let (lt, lty, size, _) = spine_info(spine);
                TermInfo {
                    ty,
                    loose_term: fun.loose_term().max(lt),
                    loose_type: fun.loose_type().max(lty),
                    size: 1 + fun.size() + size,
                    normal: false,
                }
            }
            TermNode::Closure(body, sigma) => TermInfo {
                ty: self.types.substitute(body.ty(), &sigma.ty),
                loose_term: OPEN,
                loose_type: OPEN,
                size: 1 + body.size(),
                normal: false,
            },
        })
    }

    fn consume_spine(&self, mut ty: TypeRef, spine: &Spine) -> Result<TypeRef, TypeError> {
        for arg in spine {
            ty = self.apply_type(&ty, arg)?;
        }
        Ok(ty)
    }

    /// Type of a term of type `ty` applied to one argument.
    pub fn apply_type(&self, ty: &TypeRef, arg: &Arg) -> Result<TypeRef, TypeError> {
        match (ty.node(), arg) {
            (TypeNode::Arrow(dom, cod), Arg::Term(a)) => {
                if a.ty() == dom {
                    Ok(cod.clone())
                } else {
                    Err(TypeError::ArgumentMismatch {
                        expected: self.show_type(dom),
                        found: self.show_type(a.ty()),
                    })
                }
            }
            (_, Arg::Term(_)) => Err(TypeError::NotAFunction {
                ty: self.show_type(ty),
            }),
            (TypeNode::Forall(body), Arg::Type(nu)) => Ok(self.types.instantiate(body, nu)),
            (_, Arg::Type(_)) => Err(TypeError::NotPolymorphic {
                ty: self.show_type(ty),
            }),
        }
    }

    fn show_type(&self, ty: &TypeRef) -> String {
        pretty::type_nameless(self, ty)
    }

    pub(crate) fn mk(&self, node: TermNode) -> TermRef {
        self.intern(node)
            .expect("internal construction produced an ill-typed term")
    }

    /// Bare bound variable.
    pub fn bound(&self, index: u32, ty: TypeRef) -> Result<TermRef, TypeError> {
        self.intern(TermNode::Root(Head::Bound(index, ty), Spine::nil()))
    }

    /// Bare constant.
    pub fn constant(&self, id: ConstId) -> TermRef {
        let ty = self.signature.read().type_of(id).clone();
        self.mk(TermNode::Root(Head::Const(id, ty), Spine::nil()))
    }

    /// Looks up a constant by name.
    pub fn const_named(&self, name: &str) -> Option<TermRef> {
        let id = self.signature.read().lookup(name)?;
        Some(self.constant(id))
    }

    /// Declares `name : ty` and returns the constant term.
    pub fn declare(&self, name: &str, ty: TypeRef) -> Result<TermRef, TypeError> {
        let id = self.signature.write().declare(name, ty)?;
        Ok(self.constant(id))
    }

    pub fn root(&self, head: Head, args: Vec<Arg>) -> Result<TermRef, TypeError> {
        self.intern(TermNode::Root(head, Spine::new(args)))
    }

    pub fn abs(&self, var_ty: TypeRef, body: TermRef) -> TermRef {
        self.mk(TermNode::Abs(var_ty, body))
    }

    pub fn type_abs(&self, body: TermRef) -> TermRef {
        self.mk(TermNode::TypeAbs(body))
    }

    /// Application with spine flattening: a `Root` or `Redex` function gets
    /// its spine extended, an abstraction or closure becomes a `Redex`.
    pub fn app(&self, fun: &TermRef, args: Vec<Arg>) -> Result<TermRef, TypeError> {
        if args.is_empty() {
            return Ok(fun.clone());
        }
        let extra = Spine::new(args);
        match fun.node() {
            TermNode::Root(h, sp) => self.intern(TermNode::Root(h.clone(), sp.concat(&extra))),
            TermNode::Redex(f, sp) => self.intern(TermNode::Redex(f.clone(), sp.concat(&extra))),
            TermNode::Abs(..) | TermNode::TypeAbs(_) | TermNode::Closure(..) => {
                self.intern(TermNode::Redex(fun.clone(), extra))
            }
        }
    }

    /// Application to term arguments only.
    pub fn apply(&self, fun: &TermRef, args: &[TermRef]) -> Result<TermRef, TypeError> {
        self.app(fun, args.iter().cloned().map(Arg::Term).collect())
    }

    /// Lazy substitution: builds `Closure(t, sigma)` without evaluating it.
    /// Identity substitutions and closed terms short-circuit to `t`.
    pub fn apply_subst(&self, t: &TermRef, sigma: &Subst) -> TermRef {
        if sigma.is_identity() || t.is_closed() {
            return t.clone();
        }
        self.mk(TermNode::Closure(t.clone(), sigma.clone()))
    }

    // ---- queries ------------------------------------------------------

    /// Syntactic equality; compares identities only.
    pub fn equal(&self, a: &TermRef, b: &TermRef) -> bool {
        a == b
    }

    pub fn type_of(&self, t: &TermRef) -> TypeRef {
        t.ty().clone()
    }

    pub fn head_symbol(&self, t: &TermRef) -> HeadSymbol {
        match t.node() {
            TermNode::Root(h, _) => HeadSymbol::Head(h.clone()),
            TermNode::Abs(..) => HeadSymbol::Abstraction,
            TermNode::TypeAbs(_) => HeadSymbol::TypeAbstraction,
            TermNode::Redex(..) | TermNode::Closure(..) => HeadSymbol::Unresolved,
        }
    }

    /// Constant id of a `Root` term's head, if it is a constant.
    pub fn head_const(&self, t: &TermRef) -> Option<ConstId> {
        match t.node() {
            TermNode::Root(Head::Const(c, _), _) => Some(*c),
            _ => None,
        }
    }

    // ---- substitutions --------------------------------------------------

    pub fn term_subst(&self, node: TermSubstNode) -> TermSubst {
        let data = self
            .substs
            .intern_with::<std::convert::Infallible>(node, |_| Ok(()))
            .unwrap_or_else(|e| match e {});
        TermSubst(data)
    }

    pub fn id_subst(&self) -> Subst {
        Subst {
            term: self.term_subst(TermSubstNode::Shift(0)),
            ty: self.types.identity(),
        }
    }

    /// Shifts term indices by `n`, leaves type indices alone.
    pub fn shift_subst(&self, n: u32) -> Subst {
        Subst {
            term: self.term_subst(TermSubstNode::Shift(n)),
            ty: self.types.identity(),
        }
    }

    /// Shifts type indices by `n`, leaves term indices alone.
    pub fn type_shift_subst(&self, n: u32) -> Subst {
        Subst {
            term: self.term_subst(TermSubstNode::Shift(0)),
            ty: self.types.shift(n),
        }
    }

    /// `cons(front, rest)` on the term sort; the type part is `rest`'s.
    pub fn cons_subst(&self, front: Front, rest: &Subst) -> Subst {
        Subst {
            term: self.term_subst(TermSubstNode::Cons(front, rest.term.clone())),
            ty: rest.ty.clone(),
        }
    }

    /// `cons(ty, rest)` on the type sort; the term part is `rest`'s.
    pub fn cons_type_subst(&self, ty: TypeRef, rest: &Subst) -> Subst {
        Subst {
            term: rest.term.clone(),
            ty: self.types.cons(ty, rest.ty.clone()),
        }
    }

    /// The substitution instantiating term index 1 with `t`.
    pub fn single_subst(&self, t: TermRef) -> Subst {
        self.cons_subst(Front::Term(t), &self.id_subst())
    }
}

fn spine_info(spine: &Spine) -> (u32, u32, u32, bool) {
    let mut loose_term = 0;
    let mut loose_type = 0;
    let mut size = 0;
    let mut normal = true;
    for arg in spine {
        match arg {
            Arg::Term(t) => {
                loose_term = loose_term.max(t.loose_term());
                loose_type = loose_type.max(t.loose_type());
                size += t.size();
                normal &= t.is_beta_normal();
            }
            Arg::Type(ty) => loose_type = loose_type.max(ty.loose_bound()),
        }
    }
    (loose_term, loose_type, size, normal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{node_visits, reset_node_visits};

    #[test]
    fn constants_are_shared() {
        let k = Kernel::new();
        let c1 = k.declare("c", k.types().individual()).unwrap();
        let c2 = k.const_named("c").unwrap();
        assert_eq!(c1, c2);
        assert!(k.equal(&c1, &c2));
    }

    #[test]
    fn binder_types_distinguish_abstractions() {
        let k = Kernel::new();
        let i = k.types().individual();
        let o = k.types().bool();
        let id_i = k.abs(i.clone(), k.bound(1, i).unwrap());
        let id_o = k.abs(o.clone(), k.bound(1, o).unwrap());
        assert!(!k.equal(&id_i, &id_o));
    }

    #[test]
    fn app_flattens_spines() {
        let k = Kernel::new();
        let i = k.types().individual();
        let f = k
            .declare("f", k.types().arrows([i.clone(), i.clone()], i.clone()))
            .unwrap();
        let a = k.declare("a", i.clone()).unwrap();
        let b = k.declare("b", i.clone()).unwrap();
        let fa = k.apply(&f, &[a.clone()]).unwrap();
        let fab = k.apply(&fa, &[b.clone()]).unwrap();
        let direct = k.apply(&f, &[a, b]).unwrap();
        assert_eq!(fab, direct);
        match fab.node() {
            TermNode::Root(_, sp) => assert_eq!(sp.len(), 2),
            _ => panic!("expected root"),
        }
    }

    #[test]
    fn app_on_abstraction_builds_redex() {
        let k = Kernel::new();
        let i = k.types().individual();
        let id = k.abs(i.clone(), k.bound(1, i.clone()).unwrap());
        let c = k.declare("c", i).unwrap();
        let r = k.apply(&id, &[c]).unwrap();
        assert!(matches!(r.node(), TermNode::Redex(..)));
        assert_eq!(k.head_symbol(&r), HeadSymbol::Unresolved);
        assert!(!r.is_beta_normal());
    }

    #[test]
    fn applying_non_function_is_type_error() {
        let k = Kernel::new();
        let i = k.types().individual();
        let c = k.declare("c", i.clone()).unwrap();
        let d = k.declare("d", i).unwrap();
        assert!(matches!(
            k.apply(&c, &[d]),
            Err(TypeError::NotAFunction { .. })
        ));
    }

    #[test]
    fn argument_type_mismatch() {
        let k = Kernel::new();
        let i = k.types().individual();
        let o = k.types().bool();
        let p = k.declare("p", k.types().arrow(i, o.clone())).unwrap();
        let q = k.declare("q", o).unwrap();
        assert!(matches!(
            k.apply(&p, &[q]),
            Err(TypeError::ArgumentMismatch { .. })
        ));
    }

    #[test]
    fn constant_with_wrong_type_is_rejected() {
        let k = Kernel::new();
        let i = k.types().individual();
        let c = k.declare("c", i).unwrap();
        let id = k.head_const(&c).unwrap();
        let bad = k.root(Head::Const(id, k.types().bool()), vec![]);
        assert!(matches!(bad, Err(TypeError::ConstantType { .. })));
    }

    #[test]
    fn polymorphic_identity_instantiation() {
        let k = Kernel::new();
        let ty = k.types();
        let poly_id = k.type_abs(k.abs(ty.var(1), k.bound(1, ty.var(1)).unwrap()));
        assert_eq!(poly_id.ty(), &ty.forall(ty.arrow(ty.var(1), ty.var(1))));
        let inst = k.app(&poly_id, vec![Arg::Type(ty.individual())]).unwrap();
        assert_eq!(
            inst.ty(),
            &ty.arrow(ty.individual(), ty.individual())
        );
    }

    #[test]
    fn apply_subst_short_circuits() {
        let k = Kernel::new();
        let i = k.types().individual();
        let c = k.declare("c", i.clone()).unwrap();
        let x = k.bound(1, i).unwrap();
        let sigma = k.single_subst(c.clone());
        assert_eq!(k.apply_subst(&x, &k.id_subst()), x);
        assert_eq!(k.apply_subst(&c, &sigma), c);
        let clo = k.apply_subst(&x, &sigma);
        assert!(matches!(clo.node(), TermNode::Closure(..)));
        assert_eq!(clo.ty(), c.ty());
        assert_eq!(k.head_symbol(&clo), HeadSymbol::Unresolved);
    }

    #[test]
    fn equality_does_not_traverse() {
        let k = Kernel::new();
        let i = k.types().individual();
        let f = k.declare("f", k.types().arrow(i.clone(), i.clone())).unwrap();
        let mut t = k.declare("a", i).unwrap();
        for _ in 0..50 {
            t = k.apply(&f, &[t]).unwrap();
        }
        let u = t.clone();
        reset_node_visits();
        assert!(k.equal(&t, &u));
        assert_eq!(node_visits(), 0);
    }
}
