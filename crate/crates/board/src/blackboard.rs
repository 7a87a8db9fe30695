//! Shared data stores, an event bus and the and-or context tree.
//!
//! Everything lives behind one lock, so each operation (and each
//! [`Delta`]) is atomic. Listeners get events over channels; an event is
//! sent while the lock is held, after the mutation it reports.

use std::any::{Any, TypeId};
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::Arc;

use holboard_core::tptp::SzsStatus;
use parking_lot::Mutex;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextId(pub u32);

impl fmt::Display for ContextId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DatumId(pub u64);

impl fmt::Display for DatumId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitKind {
    And,
    Or,
    Leaf,
}

impl fmt::Display for SplitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitKind::And => "AND",
            SplitKind::Or => "OR",
            SplitKind::Leaf => "LEAF",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    pub id: ContextId,
    pub parent: Option<ContextId>,
    pub kind: SplitKind,
    pub children: Vec<ContextId>,
    pub status: SzsStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    Inserted,
    Removed,
    StatusChanged,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    /// Position in the blackboard's global mutation order.
    pub seq: u64,
    pub kind: EventKind,
    pub store: Option<String>,
    pub context: ContextId,
    pub datum: Option<DatumId>,
    pub status: Option<SzsStatus>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoardError {
    #[error("store `{0}` already exists")]
    DuplicateStore(String),
    #[error("no store `{0}`")]
    UnknownStore(String),
    #[error("no context {0}")]
    UnknownContext(ContextId),
    #[error("no datum {0} in store `{1}`")]
    UnknownDatum(DatumId, String),
    #[error("store `{store}` holds {expected}, not {found}")]
    KindMismatch {
        store: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("context {0} is already split")]
    AlreadySplit(ContextId),
    #[error("context {0} is closed")]
    ClosedContext(ContextId),
    #[error("context {0} is not a leaf; its status is derived")]
    NotALeaf(ContextId),
    #[error("a split needs at least one child")]
    EmptySplit,
    #[error("a context can only be split into AND or OR children")]
    LeafSplit,
}

type Datum = Arc<dyn Any + Send + Sync>;

#[derive(Clone)]
struct Store {
    kind: TypeId,
    kind_name: &'static str,
    items: BTreeMap<DatumId, (Datum, ContextId)>,
}

#[derive(Clone)]
struct Data {
    stores: BTreeMap<String, Store>,
    contexts: Vec<Context>,
    next_datum: u64,
}

struct State {
    data: Data,
    seq: u64,
    listeners: Vec<Sender<Event>>,
}

/// One atomic blackboard transaction.
#[derive(Clone, Default)]
pub struct Delta {
    pub changes: Vec<Change>,
}

#[derive(Clone)]
pub enum Change {
    Insert {
        store: String,
        datum: Datum,
        kind_name: &'static str,
        context: ContextId,
    },
    Remove {
        store: String,
        datum: DatumId,
    },
    SetStatus {
        context: ContextId,
        status: SzsStatus,
    },
}

impl fmt::Debug for Change {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Change::Insert { store, kind_name, context, .. } => write!(f, "insert {kind_name} into {store} at {context}"),
            Change::Remove { store, datum } => write!(f, "remove {datum} from {store}"),
            Change::SetStatus { context, status } => write!(f, "set {context} {status}"),
        }
    }
}

impl fmt::Debug for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.changes).finish()
    }
}

impl Delta {
    pub fn new() -> Self {
        Delta::default()
    }

    pub fn insert<T: Any + Send + Sync>(mut self, store: &str, datum: T, context: ContextId) -> Self {
        self.changes.push(Change::Insert {
            store: store.to_owned(),
            datum: Arc::new(datum),
            kind_name: std::any::type_name::<T>(),
            context,
        });
        self
    }

    pub fn remove(mut self, store: &str, datum: DatumId) -> Self {
        self.changes.push(Change::Remove {
            store: store.to_owned(),
            datum,
        });
        self
    }

    pub fn set_status(mut self, context: ContextId, status: SzsStatus) -> Self {
        self.changes.push(Change::SetStatus { context, status });
        self
    }

    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }
}

const FAILURE_ORDER: [SzsStatus; 5] = [
    SzsStatus::CounterSatisfiable,
    SzsStatus::Unknown,
    SzsStatus::Timeout,
    SzsStatus::GaveUp,
    SzsStatus::Error,
];

fn failure_rank(s: SzsStatus) -> usize {
    match FAILURE_ORDER.iter().position(|&f| f == s) {
        Some(i) => i,
        None => FAILURE_ORDER.len() + SzsStatus::ALL.iter().position(|&f| f == s).unwrap_or(0),
    }
}

/// Status of an AND or OR context from its children's statuses.
///
/// OR: Theorem if any child is, else Open if any child is, else the first
/// failure in the order CounterSatisfiable, Unknown, Timeout, GaveUp,
/// Error (remaining statuses follow in ontology order). AND: Theorem if
/// all children are, else CounterSatisfiable if any child is, else Open
/// if any child is, else the first failure in the same order.
pub fn combine(kind: SplitKind, children: &[SzsStatus]) -> SzsStatus {
    let any = |s| children.contains(&s);
    match kind {
        SplitKind::Leaf => SzsStatus::Open,
        SplitKind::Or if any(SzsStatus::Theorem) => SzsStatus::Theorem,
        SplitKind::And if children.iter().all(|&s| s == SzsStatus::Theorem) => SzsStatus::Theorem,
        SplitKind::And if any(SzsStatus::CounterSatisfiable) => SzsStatus::CounterSatisfiable,
        _ if any(SzsStatus::Open) => SzsStatus::Open,
        _ => children
            .iter()
            .copied()
            .filter(|&s| s != SzsStatus::Theorem)
            .min_by_key(|&s| failure_rank(s))
            .unwrap_or(SzsStatus::Open),
    }
}

impl Data {
    fn ctx(&self, id: ContextId) -> Result<&Context, BoardError> {
        self.contexts.get(id.0 as usize).ok_or(BoardError::UnknownContext(id))
    }

    fn store(&self, name: &str) -> Result<&Store, BoardError> {
        self.stores.get(name).ok_or_else(|| BoardError::UnknownStore(name.to_owned()))
    }

    fn is_visible(&self, from: ContextId, at: ContextId) -> bool {
        let mut cur = Some(at);
        while let Some(c) = cur {
            if c == from {
                return true;
            }
            cur = self.contexts[c.0 as usize].parent;
        }
        false
    }

    fn insert(&mut self, store: &str, datum: Datum, kind_name: &'static str, context: ContextId) -> Result<DatumId, BoardError> {
        self.ctx(context)?;
        let id = DatumId(self.next_datum);
        let s = self
            .stores
            .get_mut(store)
            .ok_or_else(|| BoardError::UnknownStore(store.to_owned()))?;
        if (*datum).type_id() != s.kind {
            return Err(BoardError::KindMismatch {
                store: store.to_owned(),
                expected: s.kind_name,
                found: kind_name,
            });
        }
        s.items.insert(id, (datum, context));
        self.next_datum += 1;
        Ok(id)
    }

    fn remove(&mut self, store: &str, datum: DatumId) -> Result<ContextId, BoardError> {
        let s = self
            .stores
            .get_mut(store)
            .ok_or_else(|| BoardError::UnknownStore(store.to_owned()))?;
        s.items
            .remove(&datum)
            .map(|(_, c)| c)
            .ok_or_else(|| BoardError::UnknownDatum(datum, store.to_owned()))
    }

    /// Sets a leaf status and recomputes its ancestors. Returns every
    /// context whose status changed, bottom-up.
    fn set_status(&mut self, id: ContextId, status: SzsStatus) -> Result<Vec<(ContextId, SzsStatus)>, BoardError> {
        let c = self.ctx(id)?;
        if c.kind != SplitKind::Leaf {
            return Err(BoardError::NotALeaf(id));
        }
        let mut changed = Vec::new();
        if c.status == status {
            return Ok(changed);
        }
        self.contexts[id.0 as usize].status = status;
        changed.push((id, status));
        let mut cur = self.contexts[id.0 as usize].parent;
        while let Some(p) = cur {
            let node = &self.contexts[p.0 as usize];
            let statuses: Vec<SzsStatus> = node.children.iter().map(|c| self.contexts[c.0 as usize].status).collect();
            let s = combine(node.kind, &statuses);
            if s == node.status {
                break;
            }
            self.contexts[p.0 as usize].status = s;
            changed.push((p, s));
            cur = self.contexts[p.0 as usize].parent;
        }
        Ok(changed)
    }
}

/// The shared blackboard.
pub struct Blackboard {
    state: Mutex<State>,
}

impl Default for Blackboard {
    fn default() -> Self {
        Blackboard::new()
    }
}

impl Blackboard {
    /// A blackboard with no stores and a single open root context.
    pub fn new() -> Self {
        let root = Context {
            id: ContextId(0),
            parent: None,
            kind: SplitKind::Leaf,
            children: Vec::new(),
            status: SzsStatus::Open,
        };
        Blackboard {
            state: Mutex::new(State {
                data: Data {
                    stores: BTreeMap::new(),
                    contexts: vec![root],
                    next_datum: 0,
                },
                seq: 0,
                listeners: Vec::new(),
            }),
        }
    }

    pub fn root(&self) -> ContextId {
        ContextId(0)
    }

    pub fn register_store<T: Any + Send + Sync>(&self, store: &str) -> Result<(), BoardError> {
        let mut st = self.state.lock();
        if st.data.stores.contains_key(store) {
            return Err(BoardError::DuplicateStore(store.to_owned()));
        }
        st.data.stores.insert(
            store.to_owned(),
            Store {
                kind: TypeId::of::<T>(),
                kind_name: std::any::type_name::<T>(),
                items: BTreeMap::new(),
            },
        );
        Ok(())
    }

    pub fn has_store(&self, store: &str) -> bool {
        self.state.lock().data.stores.contains_key(store)
    }

    /// A new listener. Every later mutation sends it exactly one event per
    /// affected datum or context, in mutation order.
    pub fn subscribe(&self) -> Receiver<Event> {
        let (tx, rx) = channel();
        self.state.lock().listeners.push(tx);
        rx
    }

    pub fn insert<T: Any + Send + Sync>(&self, store: &str, datum: T, context: ContextId) -> Result<Event, BoardError> {
        let mut events = self.apply(Delta::new().insert(store, datum, context))?;
        Ok(events.remove(0))
    }

    pub fn remove(&self, store: &str, datum: DatumId) -> Result<Event, BoardError> {
        let mut events = self.apply(Delta::new().remove(store, datum))?;
        Ok(events.remove(0))
    }

    /// Sets a leaf's status; returns one event per context whose status
    /// changed (none if the status was already `status`).
    pub fn set_status(&self, context: ContextId, status: SzsStatus) -> Result<Vec<Event>, BoardError> {
        self.apply(Delta::new().set_status(context, status))
    }

    /// Turns an open leaf into an AND or OR node with `n` open leaves.
    pub fn split(&self, context: ContextId, kind: SplitKind, n: usize) -> Result<Vec<ContextId>, BoardError> {
        if kind == SplitKind::Leaf {
            return Err(BoardError::LeafSplit);
        }
        if n == 0 {
            return Err(BoardError::EmptySplit);
        }
        let mut st = self.state.lock();
        let data = &mut st.data;
        let c = data.ctx(context)?;
        if c.kind != SplitKind::Leaf {
            return Err(BoardError::AlreadySplit(context));
        }
        if c.status != SzsStatus::Open {
            return Err(BoardError::ClosedContext(context));
        }
        let first = data.contexts.len() as u32;
        let ids: Vec<ContextId> = (first..first + n as u32).map(ContextId).collect();
        for &id in &ids {
            data.contexts.push(Context {
                id,
                parent: Some(context),
                kind: SplitKind::Leaf,
                children: Vec::new(),
                status: SzsStatus::Open,
            });
        }
        let c = &mut data.contexts[context.0 as usize];
        c.kind = kind;
        c.children = ids.clone();
        Ok(ids)
    }

    /// Applies all changes or none of them.
    pub fn apply(&self, delta: Delta) -> Result<Vec<Event>, BoardError> {
        let mut st = self.state.lock();
        let mut data = st.data.clone();
        let mut pending = Vec::new();
        for change in delta.changes {
            match change {
                Change::Insert {
                    store,
                    datum,
                    kind_name,
                    context,
                } => {
                    let id = data.insert(&store, datum, kind_name, context)?;
                    pending.push((EventKind::Inserted, Some(store), context, Some(id), None));
                }
                Change::Remove { store, datum } => {
                    let context = data.remove(&store, datum)?;
                    pending.push((EventKind::Removed, Some(store), context, Some(datum), None));
                }
                Change::SetStatus { context, status } => {
                    for (c, s) in data.set_status(context, status)? {
                        pending.push((EventKind::StatusChanged, None, c, None, Some(s)));
                    }
                }
            }
        }
        st.data = data;
        let mut events = Vec::with_capacity(pending.len());
        for (kind, store, context, datum, status) in pending {
            st.seq += 1;
            events.push(Event {
                seq: st.seq,
                kind,
                store,
                context,
                datum,
                status,
            });
        }
        st.listeners.retain(|l| events.iter().all(|e| l.send(e.clone()).is_ok()));
        Ok(events)
    }

    pub fn view(&self) -> BoardView<'_> {
        BoardView { board: self }
    }

    /// Data of `store` visible at `context`, that is inserted at `context`
    /// or one of its ancestors, in insertion order.
    pub fn query<T: Any + Clone>(&self, store: &str, context: ContextId) -> Result<Vec<(DatumId, T)>, BoardError> {
        let st = self.state.lock();
        let data = &st.data;
        data.ctx(context)?;
        let s = data.store(store)?;
        check_kind::<T>(store, s)?;
        Ok(s.items
            .iter()
            .filter(|(_, (_, c))| data.is_visible(*c, context))
            .map(|(id, (d, _))| (*id, d.downcast_ref::<T>().expect("kind checked").clone()))
            .collect())
    }

    /// A datum and the context it was inserted at.
    pub fn get<T: Any + Clone>(&self, store: &str, datum: DatumId) -> Result<Option<(T, ContextId)>, BoardError> {
        let st = self.state.lock();
        let s = st.data.store(store)?;
        check_kind::<T>(store, s)?;
        Ok(s.items
            .get(&datum)
            .map(|(d, c)| (d.downcast_ref::<T>().expect("kind checked").clone(), *c)))
    }

    pub fn context(&self, id: ContextId) -> Result<Context, BoardError> {
        self.state.lock().data.ctx(id).cloned()
    }

    pub fn contexts(&self) -> Vec<Context> {
        self.state.lock().data.contexts.clone()
    }

    pub fn status(&self, id: ContextId) -> Result<SzsStatus, BoardError> {
        Ok(self.state.lock().data.ctx(id)?.status)
    }

    /// `context` followed by its ancestors up to the root.
    pub fn lineage(&self, context: ContextId) -> Result<Vec<ContextId>, BoardError> {
        let st = self.state.lock();
        st.data.ctx(context)?;
        let mut out = vec![context];
        while let Some(p) = st.data.contexts[out.last().expect("non-empty").0 as usize].parent {
            out.push(p);
        }
        Ok(out)
    }

    /// Open leaves in the subtree rooted at `context`, left to right.
    pub fn open_leaves(&self, context: ContextId) -> Result<Vec<ContextId>, BoardError> {
        let st = self.state.lock();
        st.data.ctx(context)?;
        let mut out = Vec::new();
        let mut stack = vec![context];
        while let Some(c) = stack.pop() {
            let node = &st.data.contexts[c.0 as usize];
            match node.kind {
                SplitKind::Leaf if node.status == SzsStatus::Open => out.push(c),
                SplitKind::Leaf => {}
                _ => stack.extend(node.children.iter().rev()),
            }
        }
        Ok(out)
    }

    /// Name, element kind and size of every store.
    pub fn stores(&self) -> Vec<(String, &'static str, usize)> {
        let st = self.state.lock();
        st.data
            .stores
            .iter()
            .map(|(n, s)| (n.clone(), s.kind_name, s.items.len()))
            .collect()
    }

    /// Every datum of every store with the context it lives in.
    pub fn contents(&self) -> Vec<(String, DatumId, ContextId)> {
        let st = self.state.lock();
        let mut out = Vec::new();
        for (name, s) in &st.data.stores {
            for (id, (_, c)) in &s.items {
                out.push((name.clone(), *id, *c));
            }
        }
        out.sort_by_key(|(_, id, _)| *id);
        out
    }

    /// Indented dump of the context tree, one context per line:
    /// `c0 OR Theorem [2 data]`.
    pub fn dump(&self) -> String {
        let st = self.state.lock();
        let mut counts: BTreeMap<ContextId, usize> = BTreeMap::new();
        for s in st.data.stores.values() {
            for (_, c) in s.items.values() {
                *counts.entry(*c).or_default() += 1;
            }
        }
        let mut out = String::new();
        let mut stack = vec![(ContextId(0), 0usize)];
        while let Some((c, depth)) = stack.pop() {
            let node = &st.data.contexts[c.0 as usize];
            let _ = write!(out, "{}{} {} {}", "  ".repeat(depth), c, node.kind, node.status);
            match counts.get(&c) {
                Some(1) => out.push_str(" [1 datum]"),
                Some(n) => {
                    let _ = write!(out, " [{n} data]");
                }
                None => {}
            }
            out.push('\n');
            stack.extend(node.children.iter().rev().map(|&ch| (ch, depth + 1)));
        }
        out
    }
}

fn check_kind<T: Any>(store: &str, s: &Store) -> Result<(), BoardError> {
    if s.kind != TypeId::of::<T>() {
        return Err(BoardError::KindMismatch {
            store: store.to_owned(),
            expected: s.kind_name,
            found: std::any::type_name::<T>(),
        });
    }
    Ok(())
}

/// Read-only access handed to agents' filters.
#[derive(Clone, Copy)]
pub struct BoardView<'a> {
    board: &'a Blackboard,
}

impl BoardView<'_> {
    pub fn root(&self) -> ContextId {
        self.board.root()
    }

    pub fn query<T: Any + Clone>(&self, store: &str, context: ContextId) -> Result<Vec<(DatumId, T)>, BoardError> {
        self.board.query(store, context)
    }

    pub fn get<T: Any + Clone>(&self, store: &str, datum: DatumId) -> Result<Option<(T, ContextId)>, BoardError> {
        self.board.get(store, datum)
    }

    pub fn context(&self, id: ContextId) -> Result<Context, BoardError> {
        self.board.context(id)
    }

    pub fn status(&self, id: ContextId) -> Result<SzsStatus, BoardError> {
        self.board.status(id)
    }

    pub fn lineage(&self, context: ContextId) -> Result<Vec<ContextId>, BoardError> {
        self.board.lineage(context)
    }

    pub fn open_leaves(&self, context: ContextId) -> Result<Vec<ContextId>, BoardError> {
        self.board.open_leaves(context)
    }
}
