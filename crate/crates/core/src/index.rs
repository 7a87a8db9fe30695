//! Term index for head-symbol and subterm-occurrence retrieval.
//!
//! Terms are stored in β-normal η-long form. Because terms are perfectly
//! shared, a subterm is its own exact key.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use parking_lot::RwLock;

use crate::kernel::Kernel;
use crate::normalize::{eta_long, NormalizeError, Normalizer, Strategy};
use crate::term::{Arg, Head, TermNode, TermRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    IntoAbstractionBody,
    IntoTypeAbstractionBody,
    /// 1-based spine position; type arguments are counted.
    SpineArg(u32),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<Step>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    fn child(&self, step: Step) -> Position {
        let mut path = self.0.clone();
        path.push(step);
        Position(path)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, step) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            match step {
                Step::IntoAbstractionBody => f.write_str("λ")?,
                Step::IntoTypeAbstractionBody => f.write_str("Λ")?,
                Step::SpineArg(n) => write!(f, "{n}")?,
            }
        }
        Ok(())
    }
}

/// The subterm of `t` at `pos`, or `None` if the path does not fit `t`.
/// Type arguments have no term to return.
pub fn subterm_at(t: &TermRef, pos: &Position) -> Option<TermRef> {
    let mut cur = t.clone();
    for step in &pos.0 {
        let next = match (cur.node(), step) {
            (TermNode::Abs(_, b), Step::IntoAbstractionBody) => b.clone(),
            (TermNode::TypeAbs(b), Step::IntoTypeAbstractionBody) => b.clone(),
            (TermNode::Root(_, sp), Step::SpineArg(n)) | (TermNode::Redex(_, sp), Step::SpineArg(n)) => {
                match sp.args().get((*n as usize).checked_sub(1)?)? {
                    Arg::Term(u) => u.clone(),
                    Arg::Type(_) => return None,
                }
            }
            _ => return None,
        };
        cur = next;
    }
    Some(cur)
}

/// Every term-valued subterm of `t` with its position, in preorder.
pub fn subterms(t: &TermRef) -> Vec<(TermRef, Position)> {
    let mut out = Vec::new();
    collect(t, Position::root(), &mut out);
    out
}

fn collect(t: &TermRef, pos: Position, out: &mut Vec<(TermRef, Position)>) {
    out.push((t.clone(), pos.clone()));
    match t.node() {
        TermNode::Abs(_, b) => collect(b, pos.child(Step::IntoAbstractionBody), out),
        TermNode::TypeAbs(b) => collect(b, pos.child(Step::IntoTypeAbstractionBody), out),
        TermNode::Root(_, sp) | TermNode::Redex(_, sp) => {
            for (i, a) in sp.iter().enumerate() {
                if let Arg::Term(u) = a {
                    collect(u, pos.child(Step::SpineArg(i as u32 + 1)), out);
                }
            }
        }
        TermNode::Closure(..) => {}
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IndexStats {
    pub terms: usize,
    pub distinct_heads: usize,
    pub distinct_subterms: usize,
    pub occurrences: usize,
}

#[derive(Default)]
struct Inner {
    terms: Vec<TermRef>,
    members: HashSet<TermRef>,
    by_head: HashMap<Head, BTreeSet<TermRef>>,
    occurrences: HashMap<TermRef, BTreeSet<(TermRef, Position)>>,
    occurrence_count: usize,
}

/// Index over β-normal η-long terms. Inserts are serialized; readers see
/// either none or all of an insertion.
#[derive(Default)]
pub struct TermIndex {
    inner: RwLock<Inner>,
}

impl TermIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Normalizes `t` (β, then η-long) and registers it with all of its
    /// subterms. Returns the indexed form.
    pub fn insert(&self, k: &Kernel, t: &TermRef) -> Result<TermRef, NormalizeError> {
        let (normal, _) = Normalizer::new(k, Strategy::SS).beta_normalize(t)?;
        let long = eta_long(k, &normal);
        if self.inner.read().members.contains(&long) {
            return Ok(long);
        }
        let subs = subterms(&long);
        let mut inner = self.inner.write();
        if !inner.members.insert(long.clone()) {
            return Ok(long);
        }
        inner.terms.push(long.clone());
        for (sub, pos) in subs {
            if let TermNode::Root(h, _) = sub.node() {
                inner.by_head.entry(h.clone()).or_default().insert(sub.clone());
            }
            if inner
                .occurrences
                .entry(sub)
                .or_default()
                .insert((long.clone(), pos))
            {
                inner.occurrence_count += 1;
            }
        }
        Ok(long)
    }

    pub fn contains(&self, t: &TermRef) -> bool {
        self.inner.read().members.contains(t)
    }

    /// Indexed top-level terms in insertion order.
    pub fn terms(&self) -> Vec<TermRef> {
        self.inner.read().terms.clone()
    }

    pub fn len(&self) -> usize {
        self.inner.read().terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Indexed terms and subterms whose head is `head`, by ascending id.
    pub fn by_head(&self, head: &Head) -> Vec<TermRef> {
        self.inner
            .read()
            .by_head
            .get(head)
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default()
    }

    /// All `(indexed term, position)` pairs at which `sub` occurs.
    pub fn occurrences(&self, sub: &TermRef) -> Vec<(TermRef, Position)> {
        self.inner
            .read()
            .occurrences
            .get(sub)
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default()
    }

    pub fn stats(&self) -> IndexStats {
        let inner = self.inner.read();
        IndexStats {
            terms: inner.terms.len(),
            distinct_heads: inner.by_head.len(),
            distinct_subterms: inner.occurrences.len(),
            occurrences: inner.occurrence_count,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn head_query_and_duplicate_arguments() {
        let k = Kernel::new();
        let ty = k.types();
        let i = ty.individual();
        let p = k.declare("p", ty.arrows([i.clone(), i.clone()], ty.bool())).unwrap();
        let a = k.declare("a", i).unwrap();
        let paa = k.apply(&p, &[a.clone(), a.clone()]).unwrap();
        let idx = TermIndex::new();
        assert!(idx.by_head(&Head::Const(k.head_const(&p).unwrap(), p.ty().clone())).is_empty());
        idx.insert(&k, &paa).unwrap();
        let head = Head::Const(k.head_const(&p).unwrap(), p.ty().clone());
        assert_eq!(idx.by_head(&head), vec![paa.clone()]);
        let occ = idx.occurrences(&a);
        assert_eq!(
            occ,
            vec![
                (paa.clone(), Position(vec![Step::SpineArg(1)])),
                (paa.clone(), Position(vec![Step::SpineArg(2)])),
            ]
        );
        assert_eq!(idx.occurrences(&paa), vec![(paa.clone(), Position::root())]);
        for (parent, pos) in occ {
            assert_eq!(subterm_at(&parent, &pos), Some(a.clone()));
        }
        let before = idx.stats();
        idx.insert(&k, &paa).unwrap();
        assert_eq!(idx.stats(), before);
    }
}
