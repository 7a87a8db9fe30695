//! Hash-consing tables backing the type, term and substitution banks.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use parking_lot::RwLock;

/// A value stored in an [`Interner`]: its structural key plus whatever the
/// bank derives from it at construction time.
pub(crate) trait Interned {
    type Key: Hash + Eq + Clone;
    type Derived;

    fn assemble(id: u32, key: Self::Key, derived: Self::Derived) -> Self;
}

pub(crate) struct Interner<V: Interned> {
    table: RwLock<HashMap<V::Key, Arc<V>>>,
}

impl<V: Interned> Interner<V> {
    pub(crate) fn new() -> Self {
        Interner {
            table: RwLock::new(HashMap::new()),
        }
    }

    pub(crate) fn lookup(&self, key: &V::Key) -> Option<Arc<V>> {
        self.table.read().get(key).cloned()
    }

    /// Returns the unique node for `key`, deriving its cached data with
    /// `derive` only when the key has not been seen before.
    ///
    /// `derive` runs without holding the table lock, so it may intern other
    /// nodes. Two threads racing on the same key both derive, but only the
    /// first insertion is kept.
    pub(crate) fn intern_with<E>(
        &self,
        key: V::Key,
        derive: impl FnOnce(&V::Key) -> Result<V::Derived, E>,
    ) -> Result<Arc<V>, E> {
        if let Some(found) = self.lookup(&key) {
            return Ok(found);
        }
        let derived = derive(&key)?;
        let mut table = self.table.write();
        let id = table.len() as u32;
        let node = table
            .entry(key.clone())
            .or_insert_with(|| Arc::new(V::assemble(id, key, derived)));
        Ok(node.clone())
    }

    pub(crate) fn len(&self) -> usize {
        self.table.read().len()
    }
}
