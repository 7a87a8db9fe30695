//! Spine-form terms with locally nameless variables and explicit
//! substitution closures.
//!
//! Term nodes only ever exist inside a [`Kernel`](crate::Kernel) term bank;
//! a [`TermRef`] is a pointer to the unique physical representation of its
//! structure, so equality is a pointer comparison.

use std::cell::Cell;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::intern::Interned;
use crate::signature::ConstId;
use crate::types::{TypeRef, TypeSubst};

thread_local! {
    static NODE_VISITS: Cell<u64> = const { Cell::new(0) };
}

/// Per-thread count of term nodes inspected through [`TermRef::node`].
pub fn node_visits() -> u64 {
    NODE_VISITS.with(|c| c.get())
}

pub fn reset_node_visits() {
    NODE_VISITS.with(|c| c.set(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Head {
    /// Bound term variable with its de Bruijn index (≥ 1) and type.
    Bound(u32, TypeRef),
    Const(ConstId, TypeRef),
}

impl Head {
    pub fn ty(&self) -> &TypeRef {
        match self {
            Head::Bound(_, ty) | Head::Const(_, ty) => ty,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Arg {
    Term(TermRef),
    Type(TypeRef),
}

impl Arg {
    pub fn as_term(&self) -> Option<&TermRef> {
        match self {
            Arg::Term(t) => Some(t),
            Arg::Type(_) => None,
        }
    }
}

/// Argument list of an application; `;` in the spine notation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Spine(Arc<[Arg]>);

impl Spine {
    pub fn nil() -> Self {
        static NIL: OnceLock<Spine> = OnceLock::new();
        NIL.get_or_init(|| Spine(Arc::from(Vec::new()))).clone()
    }

    pub fn new(args: Vec<Arg>) -> Self {
        if args.is_empty() {
            return Self::nil();
        }
        Spine(Arc::from(args))
    }

    pub fn args(&self) -> &[Arg] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation of two spines.
    pub fn concat(&self, other: &Spine) -> Spine {
        if other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        Spine::new(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Arg> {
        self.0.iter()
    }
}

impl fmt::Debug for Spine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a Spine {
    type Item = &'a Arg;
    type IntoIter = std::slice::Iter<'a, Arg>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TermNode {
    Root(Head, Spine),
    /// λ-abstraction over a variable of the given type.
    Abs(TypeRef, TermRef),
    /// Λ-abstraction over a type variable.
    TypeAbs(TermRef),
    /// Abstraction or closure applied to a non-empty spine.
    Redex(TermRef, Spine),
    Closure(TermRef, Subst),
}

pub(crate) struct TermData {
    id: u32,
    node: TermNode,
    pub(crate) info: TermInfo,
}

#[derive(Clone)]
pub(crate) struct TermInfo {
    pub(crate) ty: TypeRef,
    pub(crate) loose_term: u32,
    pub(crate) loose_type: u32,
    pub(crate) size: u32,
    pub(crate) normal: bool,
}

impl TermData {
    /// Node access for bank internals that must not count as a traversal.
    pub(crate) fn node_untracked(&self) -> &TermNode {
        &self.node
    }
}

impl Interned for TermData {
    type Key = TermNode;
    type Derived = TermInfo;

    fn assemble(id: u32, node: TermNode, info: TermInfo) -> Self {
        TermData { id, node, info }
    }
}

/// Handle to an interned term; equality inspects identities only.
#[derive(Clone)]
pub struct TermRef(pub(crate) Arc<TermData>);

impl TermRef {
    pub fn id(&self) -> u32 {
        self.0.id
    }

    /// The node behind this reference. Counted by [`node_visits`].
    pub fn node(&self) -> &TermNode {
        NODE_VISITS.with(|c| c.set(c.get() + 1));
        &self.0.node
    }

    pub fn ty(&self) -> &TypeRef {
        &self.0.info.ty
    }

    /// Largest dangling term index, 0 if the term has no free bound variables.
    pub fn loose_term(&self) -> u32 {
        self.0.info.loose_term
    }

    /// Largest dangling type index.
    pub fn loose_type(&self) -> u32 {
        self.0.info.loose_type
    }

    /// Closed terms are invariant under every substitution.
    pub fn is_closed(&self) -> bool {
        self.loose_term() == 0 && self.loose_type() == 0
    }

    /// Number of nodes of the term viewed as a tree (types excluded).
    pub fn size(&self) -> u32 {
        self.0.info.size
    }

    /// True iff the term contains no `Redex` and no `Closure` node.
    pub fn is_beta_normal(&self) -> bool {
        self.0.info.normal
    }
}

impl PartialEq for TermRef {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for TermRef {}

impl Hash for TermRef {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl PartialOrd for TermRef {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TermRef {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

impl fmt::Debug for TermRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.node {
            TermNode::Root(Head::Bound(i, _), sp) if sp.is_empty() => write!(f, "{i}"),
            TermNode::Root(Head::Const(c, _), sp) if sp.is_empty() => write!(f, "c{}", c.0),
            TermNode::Root(h, sp) => write!(f, "{h:?}·{sp:?}"),
            TermNode::Abs(ty, b) => write!(f, "λ{ty:?}.{b:?}"),
            TermNode::TypeAbs(b) => write!(f, "Λ.{b:?}"),
            TermNode::Redex(fun, sp) => write!(f, "({fun:?})·{sp:?}"),
            TermNode::Closure(b, s) => write!(f, "[{b:?}]{s:?}"),
        }
    }
}

/// What a term-variable lookup in a substitution yields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Front {
    /// Renaming to another bound index.
    Index(u32),
    Term(TermRef),
}

/// Term-sort part of an explicit substitution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TermSubstNode {
    Shift(u32),
    Cons(Front, TermSubst),
    /// Deferred composition: first the inner part, then the whole `Subst`.
    /// Only produced by lazy-composition strategies.
    Compose(TermSubst, Subst),
}

pub(crate) struct TermSubstData {
    id: u32,
    node: TermSubstNode,
}

impl Interned for TermSubstData {
    type Key = TermSubstNode;
    type Derived = ();

    fn assemble(id: u32, node: TermSubstNode, _: ()) -> Self {
        TermSubstData { id, node }
    }
}

#[derive(Clone)]
pub struct TermSubst(pub(crate) Arc<TermSubstData>);

impl TermSubst {
    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn node(&self) -> &TermSubstNode {
        &self.0.node
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.node(), TermSubstNode::Shift(0))
    }
}

impl PartialEq for TermSubst {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for TermSubst {}

impl Hash for TermSubst {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl fmt::Debug for TermSubst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            TermSubstNode::Shift(n) => write!(f, "↑{n}"),
            TermSubstNode::Cons(Front::Index(i), rest) => write!(f, "{i}·{rest:?}"),
            TermSubstNode::Cons(Front::Term(t), rest) => write!(f, "{t:?}·{rest:?}"),
            TermSubstNode::Compose(a, b) => write!(f, "({a:?} ∘ {b:?})"),
        }
    }
}

/// Two-sorted explicit substitution acting on term and type indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subst {
    pub term: TermSubst,
    pub ty: TypeSubst,
}

impl Subst {
    pub fn is_identity(&self) -> bool {
        self.term.is_identity() && self.ty.is_identity()
    }
}

impl fmt::Debug for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{:?} | {:?}⟩", self.term, self.ty)
    }
}

/// Result of a head-symbol query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeadSymbol {
    Head(Head),
    Abstraction,
    TypeAbstraction,
    /// Redexes and closures have no determined head before normalization.
    Unresolved,
}
