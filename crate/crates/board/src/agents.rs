//! The agent contract and the stock agents.
//!
//! An agent looks at blackboard events through a read-only view and
//! proposes [`Task`]s with bids. Winning tasks are run and return a
//! [`Delta`] that the scheduler applies atomically.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use holboard_core::index::Position;
use holboard_core::tptp::{AnnotatedFormula, Elaborated, Elaborator, Role, SzsStatus, TptpError};
use holboard_core::{Kernel, TermRef};
use thiserror::Error;

use crate::blackboard::{BoardError, BoardView, ContextId, DatumId, Delta, Event, EventKind};
use crate::external::{self, ProverSpec};
use crate::transform::{self, TransformError};

/// Store holding the problem's formulas.
pub const FORMULAS: &str = "formulas";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub name: String,
    pub role: Role,
    pub term: TermRef,
}

impl Formula {
    /// Elaborates annotated formulas into `k`, declaring their symbols;
    /// type declarations produce no formula.
    pub fn from_tptp(k: &Kernel, input: &[AnnotatedFormula]) -> Result<Vec<Formula>, TptpError> {
        let el = Elaborator::new(k);
        let mut out = Vec::new();
        for f in input {
            if let Elaborated::Formula(term) = el.elaborate(f)? {
                out.push(Formula {
                    name: f.name.clone(),
                    role: f.role,
                    term,
                });
            }
        }
        Ok(out)
    }
}

/// Something a task reads or writes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Resource {
    Datum(DatumId),
    Context(ContextId),
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resource::Datum(d) => d.fmt(f),
            Resource::Context(c) => c.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Task {
    pub agent: String,
    pub context: ContextId,
    pub reads: BTreeSet<Resource>,
    pub writes: BTreeSet<Resource>,
    pub bid: f64,
    /// Datum the task works on, if any.
    pub target: Option<DatumId>,
    /// Agent-specific detail, e.g. the equation used for a rewrite.
    pub aux: Option<DatumId>,
}

impl Task {
    fn new(agent: &str, context: ContextId, bid: f64) -> Self {
        Task {
            agent: agent.to_owned(),
            context,
            reads: BTreeSet::new(),
            writes: BTreeSet::new(),
            bid,
            target: None,
            aux: None,
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.agent, self.context)?;
        if let Some(t) = self.target {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum AgentError {
    #[error(transparent)]
    Board(#[from] BoardError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

pub trait Agent: Send + Sync {
    fn name(&self) -> &str;

    /// Stores whose events the agent wants; context events always reach it.
    fn stores(&self) -> Vec<String>;

    /// Tasks this event suggests. Must not mutate anything.
    fn filter(&self, event: &Event, view: BoardView<'_>) -> Vec<Task>;

    fn run(&self, task: &Task, view: BoardView<'_>) -> Result<Delta, AgentError>;
}

/// The inserted formula an event reports, if it is still present.
fn inserted_formula(event: &Event, view: BoardView<'_>) -> Option<(DatumId, Formula, ContextId)> {
    if event.kind != EventKind::Inserted || event.store.as_deref() != Some(FORMULAS) {
        return None;
    }
    let id = event.datum?;
    let (f, c) = view.get::<Formula>(FORMULAS, id).ok()??;
    Some((id, f, c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rewrite {
    Simplify,
    Nnf,
    Prenex,
    Skolemize,
}

impl Rewrite {
    pub fn name(self) -> &'static str {
        match self {
            Rewrite::Simplify => "simplify",
            Rewrite::Nnf => "nnf",
            Rewrite::Prenex => "prenex",
            Rewrite::Skolemize => "skolemize",
        }
    }
}

/// Replaces a formula by its normal form under one transformation.
/// Bids `weight × max(1, size reduction)`; Skolemization bids
/// `weight × number of existentials` since its result is only known
/// after fresh symbols are created.
pub struct RewriteAgent {
    kernel: Arc<Kernel>,
    kind: Rewrite,
    pub weight: f64,
}

impl RewriteAgent {
    pub fn new(kernel: Arc<Kernel>, kind: Rewrite) -> Self {
        RewriteAgent {
            kernel,
            kind,
            weight: 1.0,
        }
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    /// The rewritten term if the transformation applies and changes `f`.
    fn preview(&self, f: &Formula) -> Option<TermRef> {
        let k = &*self.kernel;
        let out = match self.kind {
            Rewrite::Simplify => transform::simplify(k, &f.term).ok()?,
            Rewrite::Nnf => {
                if transform::is_nnf(k, &f.term) {
                    return None;
                }
                transform::nnf(k, &f.term).ok()?
            }
            Rewrite::Prenex => {
                if !transform::is_nnf(k, &f.term) || transform::is_prenex(k, &f.term) {
                    return None;
                }
                transform::prenex(k, &f.term).ok()?
            }
            Rewrite::Skolemize => unreachable!("no preview for Skolemization"),
        };
        (out != f.term).then_some(out)
    }
}

impl Agent for RewriteAgent {
    fn name(&self) -> &str {
        self.kind.name()
    }

    fn stores(&self) -> Vec<String> {
        vec![FORMULAS.to_owned()]
    }

    fn filter(&self, event: &Event, view: BoardView<'_>) -> Vec<Task> {
        let Some((id, f, c)) = inserted_formula(event, view) else {
            return Vec::new();
        };
        let bid = if self.kind == Rewrite::Skolemize {
            let k = &*self.kernel;
            if f.role == Role::Conjecture || !transform::is_nnf(k, &f.term) {
                return Vec::new();
            }
            match transform::existentials(&f.term) {
                0 => return Vec::new(),
                n => self.weight * n as f64,
            }
        } else {
            let Some(out) = self.preview(&f) else {
                return Vec::new();
            };
            let saved = f.term.size().saturating_sub(out.size());
            self.weight * f64::from(saved.max(1))
        };
        let mut task = Task::new(self.name(), c, bid);
        task.target = Some(id);
        task.writes.insert(Resource::Datum(id));
        vec![task]
    }

    fn run(&self, task: &Task, view: BoardView<'_>) -> Result<Delta, AgentError> {
        let id = task.target.expect("rewrite tasks have a target");
        let Some((f, c)) = view.get::<Formula>(FORMULAS, id)? else {
            return Ok(Delta::new());
        };
        let term = match self.kind {
            Rewrite::Skolemize => transform::skolemize(&self.kernel, &f.term)?.0,
            _ => match self.preview(&f) {
                Some(t) => t,
                None => return Ok(Delta::new()),
            },
        };
        let new = Formula { term, ..f };
        Ok(Delta::new().remove(FORMULAS, id).insert(FORMULAS, new, c))
    }
}

/// Rewrites with unit equations `l = r` (left to right) whose left side
/// occurs in another visible non-conjecture formula. Derived formulas are added, never
/// replace their parents, and are only proposed when not already present.
pub struct ParamodulationAgent {
    kernel: Arc<Kernel>,
    pub bid: f64,
}

impl ParamodulationAgent {
    pub fn new(kernel: Arc<Kernel>) -> Self {
        ParamodulationAgent { kernel, bid: 0.5 }
    }

    pub fn with_bid(mut self, bid: f64) -> Self {
        self.bid = bid;
        self
    }

    fn equation(&self, f: &Formula) -> Option<(TermRef, TermRef)> {
        if !f.role.is_assumption() {
            return None;
        }
        let (_, l, r) = transform::equation_sides(&self.kernel, &f.term)?;
        (l != r && !crate::logic::is_bool(&l)).then_some((l, r))
    }

    fn rewrite(&self, eq: &Formula, target: &Formula) -> Option<TermRef> {
        if eq.term == target.term || target.role == Role::Conjecture {
            return None;
        }
        let (l, _) = self.equation(eq)?;
        let pos: Position = transform::occurrences_of(&target.term, &l).into_iter().next()?;
        transform::paramodulate(&self.kernel, &eq.term, &target.term, &pos).ok()
    }

    fn task(&self, c: ContextId, eq: DatumId, target: DatumId) -> Task {
        let mut task = Task::new(self.name(), c, self.bid);
        task.target = Some(target);
        task.aux = Some(eq);
        task.reads.insert(Resource::Datum(eq));
        task.reads.insert(Resource::Datum(target));
        task.writes.insert(Resource::Context(c));
        task
    }
}

impl Agent for ParamodulationAgent {
    fn name(&self) -> &str {
        "paramodulation"
    }

    fn stores(&self) -> Vec<String> {
        vec![FORMULAS.to_owned()]
    }

    fn filter(&self, event: &Event, view: BoardView<'_>) -> Vec<Task> {
        let Some((id, f, c)) = inserted_formula(event, view) else {
            return Vec::new();
        };
        let Ok(visible) = view.query::<Formula>(FORMULAS, c) else {
            return Vec::new();
        };
        let present = |t: &TermRef| visible.iter().any(|(_, g)| &g.term == t);
        let mut tasks = Vec::new();
        for (gid, g) in &visible {
            if *gid == id {
                continue;
            }
            if let Some(t) = self.rewrite(&f, g) {
                if !present(&t) {
                    tasks.push(self.task(c, id, *gid));
                }
            }
            if let Some(t) = self.rewrite(g, &f) {
                if !present(&t) {
                    tasks.push(self.task(c, *gid, id));
                }
            }
        }
        tasks
    }

    fn run(&self, task: &Task, view: BoardView<'_>) -> Result<Delta, AgentError> {
        let (Some(eq), Some(target)) = (task.aux, task.target) else {
            return Ok(Delta::new());
        };
        let (Some((e, _)), Some((t, _))) = (view.get::<Formula>(FORMULAS, eq)?, view.get::<Formula>(FORMULAS, target)?) else {
            return Ok(Delta::new());
        };
        let Some(term) = self.rewrite(&e, &t) else {
            return Ok(Delta::new());
        };
        if view.query::<Formula>(FORMULAS, task.context)?.iter().any(|(_, g)| g.term == term) {
            return Ok(Delta::new());
        }
        let derived = Formula {
            name: format!("{}_{}", t.name, e.name),
            role: Role::Plain,
            term,
        };
        Ok(Delta::new().insert(FORMULAS, derived, task.context))
    }
}

/// Hands the problem visible in a leaf to an external prover and sets the
/// leaf's status from the answer. Triggers on conjecture insertion at the
/// leaf or one of its ancestors; an agent bound to a context only serves
/// that leaf.
pub struct ExternalAgent {
    kernel: Arc<Kernel>,
    name: String,
    pub spec: ProverSpec,
    pub bid: f64,
    pub context: Option<ContextId>,
}

impl ExternalAgent {
    pub fn new(kernel: Arc<Kernel>, spec: ProverSpec) -> Self {
        ExternalAgent {
            kernel,
            name: spec.name.clone(),
            spec,
            bid: 10.0,
            context: None,
        }
    }

    pub fn with_bid(mut self, bid: f64) -> Self {
        self.bid = bid;
        self
    }

    pub fn bound_to(mut self, context: ContextId) -> Self {
        self.name = format!("{}/{}", self.spec.name, context);
        self.context = Some(context);
        self
    }
}

impl Agent for ExternalAgent {
    fn name(&self) -> &str {
        &self.name
    }

    fn stores(&self) -> Vec<String> {
        vec![FORMULAS.to_owned()]
    }

    fn filter(&self, event: &Event, view: BoardView<'_>) -> Vec<Task> {
        let Some((_, f, c)) = inserted_formula(event, view) else {
            return Vec::new();
        };
        if f.role != Role::Conjecture {
            return Vec::new();
        }
        let Ok(leaves) = view.open_leaves(c) else {
            return Vec::new();
        };
        leaves
            .into_iter()
            .filter(|l| self.context.is_none_or(|b| b == *l))
            .map(|l| {
                let mut task = Task::new(&self.name, l, self.bid);
                task.writes.insert(Resource::Context(l));
                task
            })
            .collect()
    }

    fn run(&self, task: &Task, view: BoardView<'_>) -> Result<Delta, AgentError> {
        let formulas = view.query::<Formula>(FORMULAS, task.context)?;
        let entries: Vec<(String, Role, TermRef)> = formulas
            .into_iter()
            .map(|(_, f)| (f.name, f.role, f.term))
            .collect();
        let status = match external::render_problem(&self.kernel, &entries, self.spec.dialect) {
            Ok(problem) => external::submit(&problem, &self.spec).status,
            Err(_) => SzsStatus::Error,
        };
        Ok(Delta::new().set_status(task.context, status))
    }
}
