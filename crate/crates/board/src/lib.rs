//! Blackboard architecture on top of the term kernel: shared stores with
//! an and-or context tree, agents that bid for transformations, an
//! auction scheduler and a client for external TPTP provers.

pub mod agents;
pub mod blackboard;
pub mod config;
pub mod external;
pub mod logic;
pub mod mock;
pub mod scheduler;
pub mod transform;

pub use blackboard::{Blackboard, BoardError, BoardView, Context, ContextId, DatumId, Delta, Event, EventKind, SplitKind};
