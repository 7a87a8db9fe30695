//! Types of the second-order polymorphic λ-calculus, interned in a
//! [`TypeBank`] so that structural equality is pointer equality.
//!
//! Bound type variables are de Bruijn indices starting at 1: index 1 refers
//! to the innermost enclosing `∀`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::intern::{Interned, Interner};

/// Identifier of a base type in the signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseId(pub(crate) u32);

impl BaseId {
    /// `$o`, the type of truth values.
    pub const BOOL: BaseId = BaseId(0);
    /// `$i`, the type of individuals.
    pub const INDIVIDUAL: BaseId = BaseId(1);

    pub fn index(self) -> u32 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeNode {
    Base(BaseId),
    /// Bound type variable, de Bruijn index ≥ 1.
    Var(u32),
    Arrow(TypeRef, TypeRef),
    Forall(TypeRef),
}

pub(crate) struct TypeData {
    id: u32,
    node: TypeNode,
    loose: u32,
    size: u32,
}

#[derive(Clone, Copy)]
pub(crate) struct TypeInfo {
    loose: u32,
    size: u32,
}

impl Interned for TypeData {
    type Key = TypeNode;
    type Derived = TypeInfo;

    fn assemble(id: u32, node: TypeNode, info: TypeInfo) -> Self {
        TypeData {
            id,
            node,
            loose: info.loose,
            size: info.size,
        }
    }
}

/// Handle to an interned type. Equality and hashing are by identity.
#[derive(Clone)]
pub struct TypeRef(Arc<TypeData>);

impl TypeRef {
    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn node(&self) -> &TypeNode {
        &self.0.node
    }

    /// Largest dangling de Bruijn index, 0 when the type is closed.
    pub fn loose_bound(&self) -> u32 {
        self.0.loose
    }

    pub fn is_closed(&self) -> bool {
        self.0.loose == 0
    }

    pub fn size(&self) -> u32 {
        self.0.size
    }

    pub fn as_arrow(&self) -> Option<(&TypeRef, &TypeRef)> {
        match self.node() {
            TypeNode::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn is_arrow(&self) -> bool {
        self.as_arrow().is_some()
    }

    pub fn as_forall(&self) -> Option<&TypeRef> {
        match self.node() {
            TypeNode::Forall(b) => Some(b),
            _ => None,
        }
    }

    /// Splits `a1 → … → an → r` into its argument types and final codomain.
    pub fn unfold_arrows(&self) -> (Vec<TypeRef>, TypeRef) {
        let mut args = Vec::new();
        let mut cur = self.clone();
        while let Some((a, b)) = cur.as_arrow() {
            args.push(a.clone());
            let next = b.clone();
            cur = next;
        }
        (args, cur)
    }
}

impl PartialEq for TypeRef {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for TypeRef {}

impl Hash for TypeRef {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl PartialOrd for TypeRef {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TypeRef {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

impl fmt::Debug for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            TypeNode::Base(b) => write!(f, "base{}", b.0),
            TypeNode::Var(i) => write!(f, "#{i}"),
            TypeNode::Arrow(a, b) => write!(f, "({a:?} -> {b:?})"),
            TypeNode::Forall(b) => write!(f, "(all. {b:?})"),
        }
    }
}

/// Explicit substitution on type indices: `shift(n)` maps `i ↦ i + n`,
/// `cons(τ, σ)` maps `1 ↦ τ` and `i + 1 ↦ σ(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeSubstNode {
    Shift(u32),
    Cons(TypeRef, TypeSubst),
}

pub(crate) struct TypeSubstData {
    id: u32,
    node: TypeSubstNode,
}

impl Interned for TypeSubstData {
    type Key = TypeSubstNode;
    type Derived = ();

    fn assemble(id: u32, node: TypeSubstNode, _: ()) -> Self {
        TypeSubstData { id, node }
    }
}

#[derive(Clone)]
pub struct TypeSubst(Arc<TypeSubstData>);

impl TypeSubst {
    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn node(&self) -> &TypeSubstNode {
        &self.0.node
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.node(), TypeSubstNode::Shift(0))
    }
}

impl PartialEq for TypeSubst {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for TypeSubst {}

impl Hash for TypeSubst {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl fmt::Debug for TypeSubst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            TypeSubstNode::Shift(n) => write!(f, "↑{n}"),
            TypeSubstNode::Cons(t, rest) => write!(f, "{t:?}·{rest:?}"),
        }
    }
}

/// Bank of perfectly shared types and type substitutions.
pub struct TypeBank {
    types: Interner<TypeData>,
    substs: Interner<TypeSubstData>,
}

impl Default for TypeBank {
    fn default() -> Self {
        Self::new()
    }
}

impl TypeBank {
    pub fn new() -> Self {
        TypeBank {
            types: Interner::new(),
            substs: Interner::new(),
        }
    }

    /// Returns the unique [`TypeRef`] for `node`.
    pub fn intern(&self, node: TypeNode) -> TypeRef {
        let data = self
            .types
            .intern_with::<std::convert::Infallible>(node, |node| {
                Ok(match node {
                    TypeNode::Base(_) => TypeInfo { loose: 0, size: 1 },
                    TypeNode::Var(i) => TypeInfo { loose: *i, size: 1 },
                    TypeNode::Arrow(a, b) => TypeInfo {
                        loose: a.loose_bound().max(b.loose_bound()),
                        size: 1 + a.size() + b.size(),
                    },
                    TypeNode::Forall(b) => TypeInfo {
                        loose: b.loose_bound().saturating_sub(1),
                        size: 1 + b.size(),
                    },
                })
            })
            .unwrap_or_else(|e| match e {});
        TypeRef(data)
    }

    pub fn base(&self, id: BaseId) -> TypeRef {
        self.intern(TypeNode::Base(id))
    }

    pub fn bool(&self) -> TypeRef {
        self.base(BaseId::BOOL)
    }

    pub fn individual(&self) -> TypeRef {
        self.base(BaseId::INDIVIDUAL)
    }

    /// Bound type variable; panics on index 0.
    pub fn var(&self, index: u32) -> TypeRef {
        assert!(index >= 1, "type de Bruijn indices start at 1");
        self.intern(TypeNode::Var(index))
    }

    pub fn arrow(&self, dom: TypeRef, cod: TypeRef) -> TypeRef {
        self.intern(TypeNode::Arrow(dom, cod))
    }

    /// `a1 → … → an → cod`
    pub fn arrows(&self, args: impl IntoIterator<Item = TypeRef>, cod: TypeRef) -> TypeRef {
        let args: Vec<TypeRef> = args.into_iter().collect();
        args.into_iter()
            .rev()
            .fold(cod, |acc, a| self.arrow(a, acc))
    }

    pub fn forall(&self, body: TypeRef) -> TypeRef {
        self.intern(TypeNode::Forall(body))
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn subst_node(&self, node: TypeSubstNode) -> TypeSubst {
        let data = self
            .substs
            .intern_with::<std::convert::Infallible>(node, |_| Ok(()))
            .unwrap_or_else(|e| match e {});
        TypeSubst(data)
    }

    pub fn identity(&self) -> TypeSubst {
        self.shift(0)
    }

    pub fn shift(&self, n: u32) -> TypeSubst {
        self.subst_node(TypeSubstNode::Shift(n))
    }

    pub fn cons(&self, front: TypeRef, rest: TypeSubst) -> TypeSubst {
        self.subst_node(TypeSubstNode::Cons(front, rest))
    }

    /// The substitution instantiating index 1 with `ty`: `cons(ty, shift(0))`.
    pub fn single(&self, ty: TypeRef) -> TypeSubst {
        self.cons(ty, self.identity())
    }

    /// Image of index `i` under `sigma`.
    pub fn lookup(&self, sigma: &TypeSubst, mut i: u32) -> TypeRef {
        let mut cur = sigma.clone();
        loop {
            match cur.node() {
                TypeSubstNode::Shift(n) => return self.var(i + n),
                TypeSubstNode::Cons(front, rest) => {
                    if i == 1 {
                        return front.clone();
                    }
                    i -= 1;
                    let next = rest.clone();
                    cur = next;
                }
            }
        }
    }

    /// Capture-free simultaneous substitution over the type's de Bruijn indices.
    pub fn substitute(&self, ty: &TypeRef, sigma: &TypeSubst) -> TypeRef {
        if sigma.is_identity() || ty.is_closed() {
            return ty.clone();
        }
        match ty.node() {
            TypeNode::Base(_) => ty.clone(),
            TypeNode::Var(i) => self.lookup(sigma, *i),
            TypeNode::Arrow(a, b) => {
                let a2 = self.substitute(a, sigma);
                let b2 = self.substitute(b, sigma);
                self.arrow(a2, b2)
            }
            TypeNode::Forall(b) => {
                let lifted = self.lift(sigma);
                let b2 = self.substitute(b, &lifted);
                self.forall(b2)
            }
        }
    }

    /// `body[ty/1]`, the result of instantiating a `∀` body.
    pub fn instantiate(&self, body: &TypeRef, ty: &TypeRef) -> TypeRef {
        self.substitute(body, &self.single(ty.clone()))
    }

    /// Adds `d` to every dangling index.
    pub fn shift_type(&self, ty: &TypeRef, d: u32) -> TypeRef {
        self.substitute(ty, &self.shift(d))
    }

    /// Pushes `sigma` under one `∀` binder: `cons(1, sigma ∘ shift(1))`.
    pub fn lift(&self, sigma: &TypeSubst) -> TypeSubst {
        if sigma.is_identity() {
            return sigma.clone();
        }
        let shifted = self.compose(sigma, &self.shift(1));
        self.cons(self.var(1), shifted)
    }

    /// Composition in diagrammatic order: applying `compose(sigma, rho)`
    /// equals applying `sigma` and then `rho`.
    pub fn compose(&self, sigma: &TypeSubst, rho: &TypeSubst) -> TypeSubst {
        if rho.is_identity() {
            return sigma.clone();
        }
        match sigma.node() {
            TypeSubstNode::Shift(n) => self.drop(rho, *n),
            TypeSubstNode::Cons(front, rest) => {
                let front = self.substitute(front, rho);
                let rest = self.compose(rest, rho);
                self.cons(front, rest)
            }
        }
    }

    /// `shift(n) ∘ rho`: discards the first `n` entries of `rho`.
    pub fn drop(&self, rho: &TypeSubst, n: u32) -> TypeSubst {
        if n == 0 {
            return rho.clone();
        }
        match rho.node() {
            TypeSubstNode::Shift(m) => self.shift(m + n),
            TypeSubstNode::Cons(_, rest) => self.drop(rest, n - 1),
        }
    }

    /// Whether the variable with outer index `index` occurs in `ty`.
    pub fn occurs(&self, ty: &TypeRef, index: u32) -> bool {
        if index > ty.loose_bound() {
            return false;
        }
        match ty.node() {
            TypeNode::Base(_) => false,
            TypeNode::Var(i) => *i == index,
            TypeNode::Arrow(a, b) => self.occurs(a, index) || self.occurs(b, index),
            TypeNode::Forall(b) => self.occurs(b, index + 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_idempotent() {
        let bank = TypeBank::new();
        let a = bank.bool();
        let b = bank.bool();
        assert_eq!(a, b);
        let f1 = bank.arrow(bank.individual(), bank.bool());
        let f2 = bank.arrow(bank.individual(), bank.bool());
        assert_eq!(f1, f2);
        assert_eq!(f1.id(), f2.id());
        assert_ne!(f1, bank.arrow(bank.bool(), bank.bool()));
    }

    #[test]
    fn single_variable_instantiation() {
        let bank = TypeBank::new();
        let ty = bank.arrow(bank.var(1), bank.bool());
        let sigma = bank.single(bank.individual());
        assert_eq!(
            bank.substitute(&ty, &sigma),
            bank.arrow(bank.individual(), bank.bool())
        );
        assert_eq!(bank.substitute(&bank.bool(), &sigma), bank.bool());
    }

    #[test]
    fn substitution_under_forall() {
        // ∀. 1 → 2  with  cons(ι, shift 0)  gives  ∀. 1 → ι
        let bank = TypeBank::new();
        let ty = bank.forall(bank.arrow(bank.var(1), bank.var(2)));
        let out = bank.substitute(&ty, &bank.single(bank.individual()));
        assert_eq!(out, bank.forall(bank.arrow(bank.var(1), bank.individual())));
    }

    #[test]
    fn identity_returns_same_ref() {
        let bank = TypeBank::new();
        let ty = bank.forall(bank.arrow(bank.var(1), bank.var(3)));
        assert_eq!(bank.substitute(&ty, &bank.identity()), ty);
    }

    #[test]
    fn occurs_adjusts_under_binders() {
        let bank = TypeBank::new();
        assert!(bank.occurs(&bank.arrow(bank.var(1), bank.bool()), 1));
        assert!(!bank.occurs(&bank.arrow(bank.bool(), bank.bool()), 1));
        let ty = bank.forall(bank.arrow(bank.var(2), bank.var(1)));
        assert!(bank.occurs(&ty, 1));
        assert!(!bank.occurs(&ty, 2));
    }

    #[test]
    fn loose_bound_tracks_binders() {
        let bank = TypeBank::new();
        let ty = bank.forall(bank.arrow(bank.var(1), bank.var(3)));
        assert_eq!(ty.loose_bound(), 2);
        assert!(bank.forall(bank.var(1)).is_closed());
    }
}
