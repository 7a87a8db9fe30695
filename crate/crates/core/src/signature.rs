//! Base types and typed constants.

use std::collections::HashMap;

use thiserror::Error;

use crate::types::{BaseId, TypeBank, TypeRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstId(pub(crate) u32);

impl ConstId {
    pub const TRUE: ConstId = ConstId(0);
    pub const FALSE: ConstId = ConstId(1);
    pub const NOT: ConstId = ConstId(2);
    pub const AND: ConstId = ConstId(3);
    pub const OR: ConstId = ConstId(4);
    pub const IMPLIES: ConstId = ConstId(5);
    pub const EQ: ConstId = ConstId(6);
    pub const PI: ConstId = ConstId(7);
    pub const SIGMA: ConstId = ConstId(8);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_logical(self) -> bool {
        self.0 <= Self::SIGMA.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstKind {
    Logical,
    User,
    Skolem,
}

#[derive(Clone, Debug)]
pub struct ConstEntry {
    pub name: String,
    /// Rendering used by the λ-calculus pretty-printers.
    pub display: String,
    pub ty: TypeRef,
    pub kind: ConstKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("symbol `{name}` is already declared with a different type")]
    Redeclared { name: String },
    #[error("type constant `{0}` clashes with an existing declaration")]
    TypeRedeclared(String),
}

/// Symbol table for base types and constants.
///
/// `$o` and `$i` and the logical constants ⊤, ⊥, ¬, ∧, ∨, ⇒, =, Π, Σ are
/// preinstalled with fixed ids.
#[derive(Clone, Debug)]
pub struct Signature {
    bases: Vec<(String, String)>,
    base_by_name: HashMap<String, BaseId>,
    consts: Vec<ConstEntry>,
    const_by_name: HashMap<String, ConstId>,
    skolem_counter: u32,
}

impl Signature {
    pub(crate) fn new(types: &TypeBank) -> Self {
        let mut sig = Signature {
            bases: Vec::new(),
            base_by_name: HashMap::new(),
            consts: Vec::new(),
            const_by_name: HashMap::new(),
            skolem_counter: 0,
        };
        sig.push_base("$o", "o");
        sig.push_base("$i", "ι");

        let o = types.bool();
        let o_o = types.arrow(o.clone(), o.clone());
        let o_o_o = types.arrow(o.clone(), o_o.clone());
        let alpha = types.var(1);
        let eq_ty = types.forall(types.arrows([alpha.clone(), alpha.clone()], o.clone()));
        let quant_ty = types.forall(types.arrow(types.arrow(alpha, o.clone()), o.clone()));
        let logical = [
            ("$true", "⊤", o.clone()),
            ("$false", "⊥", o),
            ("~", "¬", o_o),
            ("&", "∧", o_o_o.clone()),
            ("|", "∨", o_o_o.clone()),
            ("=>", "⇒", o_o_o),
            ("=", "=", eq_ty),
            ("!!", "Π", quant_ty.clone()),
            ("??", "Σ", quant_ty),
        ];
        for (name, display, ty) in logical {
            sig.push_const(name, display, ty, ConstKind::Logical);
        }
        sig
    }

    fn push_base(&mut self, name: &str, display: &str) -> BaseId {
        let id = BaseId(self.bases.len() as u32);
        self.bases.push((name.to_owned(), display.to_owned()));
        self.base_by_name.insert(name.to_owned(), id);
        id
    }

    fn push_const(&mut self, name: &str, display: &str, ty: TypeRef, kind: ConstKind) -> ConstId {
        let id = ConstId(self.consts.len() as u32);
        self.consts.push(ConstEntry {
            name: name.to_owned(),
            display: display.to_owned(),
            ty,
            kind,
        });
        self.const_by_name.insert(name.to_owned(), id);
        id
    }

    /// Declares a base type; re-declaring an existing one is a no-op.
    pub fn declare_base(&mut self, name: &str) -> Result<BaseId, SignatureError> {
        if let Some(id) = self.base_by_name.get(name) {
            return Ok(*id);
        }
        if self.const_by_name.contains_key(name) {
            return Err(SignatureError::TypeRedeclared(name.to_owned()));
        }
        Ok(self.push_base(name, name))
    }

    /// Declares a constant; re-declaring with the identical type is a no-op.
    pub fn declare(&mut self, name: &str, ty: TypeRef) -> Result<ConstId, SignatureError> {
        debug_assert!(ty.is_closed(), "constant types must be closed");
        if let Some(id) = self.const_by_name.get(name) {
            return if self.consts[id.0 as usize].ty == ty {
                Ok(*id)
            } else {
                Err(SignatureError::Redeclared {
                    name: name.to_owned(),
                })
            };
        }
        if self.base_by_name.contains_key(name) {
            return Err(SignatureError::TypeRedeclared(name.to_owned()));
        }
        Ok(self.push_const(name, name, ty, ConstKind::User))
    }

    /// Adds a fresh Skolem symbol `sk<N>` of the given type.
    pub fn fresh_skolem(&mut self, ty: TypeRef) -> ConstId {
        loop {
            self.skolem_counter += 1;
            let name = format!("sk{}", self.skolem_counter);
            if !self.const_by_name.contains_key(&name) && !self.base_by_name.contains_key(&name) {
                return self.push_const(&name, &name, ty, ConstKind::Skolem);
            }
        }
    }

    pub fn lookup(&self, name: &str) -> Option<ConstId> {
        self.const_by_name.get(name).copied()
    }

    pub fn lookup_base(&self, name: &str) -> Option<BaseId> {
        self.base_by_name.get(name).copied()
    }

    pub fn entry(&self, id: ConstId) -> &ConstEntry {
        &self.consts[id.0 as usize]
    }

    pub fn name(&self, id: ConstId) -> &str {
        &self.entry(id).name
    }

    pub fn type_of(&self, id: ConstId) -> &TypeRef {
        &self.entry(id).ty
    }

    pub fn base_name(&self, id: BaseId) -> &str {
        &self.bases[id.0 as usize].0
    }

    pub fn base_display(&self, id: BaseId) -> &str {
        &self.bases[id.0 as usize].1
    }

    pub fn constants(&self) -> impl Iterator<Item = (ConstId, &ConstEntry)> {
        self.consts
            .iter()
            .enumerate()
            .map(|(i, e)| (ConstId(i as u32), e))
    }

    pub fn base_types(&self) -> impl Iterator<Item = (BaseId, &str)> {
        self.bases
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (BaseId(i as u32), n.as_str()))
    }

    pub fn len(&self) -> usize {
        self.consts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.consts.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preinstalled_symbols() {
        let types = TypeBank::new();
        let sig = Signature::new(&types);
        assert_eq!(sig.lookup("&"), Some(ConstId::AND));
        assert_eq!(sig.lookup("!!"), Some(ConstId::PI));
        assert_eq!(sig.lookup_base("$o"), Some(BaseId::BOOL));
        assert_eq!(sig.lookup_base("$i"), Some(BaseId::INDIVIDUAL));
        assert_eq!(sig.type_of(ConstId::TRUE), &types.bool());
        for (id, entry) in sig.constants() {
            assert_eq!(sig.lookup(&entry.name), Some(id));
        }
    }

    #[test]
    fn redeclaration_rules() {
        let types = TypeBank::new();
        let mut sig = Signature::new(&types);
        let a = sig.declare("a", types.individual()).unwrap();
        assert_eq!(sig.declare("a", types.individual()).unwrap(), a);
        assert!(sig.declare("a", types.bool()).is_err());
        assert!(sig.declare_base("a").is_err());
    }

    #[test]
    fn skolem_names_skip_taken_symbols() {
        let types = TypeBank::new();
        let mut sig = Signature::new(&types);
        sig.declare("sk1", types.individual()).unwrap();
        let sk = sig.fresh_skolem(types.individual());
        assert_eq!(sig.name(sk), "sk2");
        assert_eq!(sig.entry(sk).kind, ConstKind::Skolem);
    }
}
