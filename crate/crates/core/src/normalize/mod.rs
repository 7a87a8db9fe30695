//! β-normalization strategies, type-level β-normalization and η-long
//! expansion.

mod base;
mod bench;
mod eta;
mod machine;
pub mod subst;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::kernel::Kernel;
use crate::term::{Arg, TermNode, TermRef};

pub use bench::{benchmark_strategies, BenchmarkReport, BenchmarkRow, CSV_HEADER};
pub use eta::{eta_long, is_eta_long, is_normal_eta_long};

/// Default bound on the number of β-steps of a single normalization.
pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Composition {
    /// Composed substitutions are computed entry by entry when built.
    Strict,
    /// Compositions are recorded and resolved on lookup.
    Lazy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClosureMode {
    /// Substituted arguments are normalized when they enter a substitution.
    Eager,
    /// Substituted arguments are kept as closures until looked up.
    Lazy,
}

/// A normalization strategy. The explicit-substitution strategies are named
/// by two letters: composition (strict/lazy), then closure handling
/// (eager `S` / lazy `L`). `Base` is plain leftmost-outermost reduction
/// with eager substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    SS,
    SL,
    LS,
    LL,
    Base,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::SS,
        Strategy::SL,
        Strategy::LS,
        Strategy::LL,
        Strategy::Base,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::SS => "SS",
            Strategy::SL => "SL",
            Strategy::LS => "LS",
            Strategy::LL => "LL",
            Strategy::Base => "BASE",
        }
    }

    pub fn composition(self) -> Option<Composition> {
        match self {
            Strategy::SS | Strategy::SL => Some(Composition::Strict),
            Strategy::LS | Strategy::LL => Some(Composition::Lazy),
            Strategy::Base => None,
        }
    }

    pub fn closures(self) -> Option<ClosureMode> {
        match self {
            Strategy::SS | Strategy::LS => Some(ClosureMode::Eager),
            Strategy::SL | Strategy::LL => Some(ClosureMode::Lazy),
            Strategy::Base => None,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown strategy `{s}` (expected SS, SL, LS, LL or BASE)"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NormalizationStats {
    pub reduction_steps: u64,
    pub closures_built: u64,
    pub subst_compositions: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("normalization exceeded the budget of {steps} reduction steps")]
    ResourceLimit { steps: u64 },
}

/// Normalizer bound to a kernel, a strategy and a step budget.
#[derive(Clone, Copy)]
pub struct Normalizer<'k> {
    kernel: &'k Kernel,
    strategy: Strategy,
    budget: u64,
}

impl<'k> Normalizer<'k> {
    pub fn new(kernel: &'k Kernel, strategy: Strategy) -> Self {
        Normalizer {
            kernel,
            strategy,
            budget: DEFAULT_STEP_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn beta_normalize(
        &self,
        t: &TermRef,
    ) -> Result<(TermRef, NormalizationStats), NormalizeError> {
        let start = Instant::now();
        let (out, mut stats) = if t.is_beta_normal() {
            (t.clone(), NormalizationStats::default())
        } else if self.strategy == Strategy::Base {
            let mut b = base::Base::new(self.kernel, self.budget);
            let out = b.normalize(t)?;
            (out, b.stats)
        } else {
            let mut m = machine::Machine::new(self.kernel, self.strategy, self.budget);
            let out = m.normalize(t, &self.kernel.id_subst())?;
            (out, m.stats)
        };
        stats.wall_time = start.elapsed();
        Ok((out, stats))
    }

    /// Contracts the type-level redexes `(Λ. t) τ` exposed in `t`, leaving
    /// term-level redexes in place. The strategy plays no role here.
    pub fn type_beta_normalize(&self, t: &TermRef) -> Result<TermRef, NormalizeError> {
        let mut steps = 0;
        type_beta(self.kernel, t, &mut steps, self.budget)
    }
}

/// β-normal form of `t` under `strategy`.
pub fn beta_normalize(
    k: &Kernel,
    t: &TermRef,
    strategy: Strategy,
) -> Result<(TermRef, NormalizationStats), NormalizeError> {
    Normalizer::new(k, strategy).beta_normalize(t)
}

pub fn type_beta_normalize(k: &Kernel, t: &TermRef) -> Result<TermRef, NormalizeError> {
    Normalizer::new(k, Strategy::SS).type_beta_normalize(t)
}

fn type_beta(k: &Kernel, t: &TermRef, steps: &mut u64, budget: u64) -> Result<TermRef, NormalizeError> {
    if t.is_beta_normal() {
        return Ok(t.clone());
    }
    let args = |sp: &[Arg], steps: &mut u64| -> Result<Vec<Arg>, NormalizeError> {
        sp.iter()
            .map(|a| match a {
                Arg::Term(u) => type_beta(k, u, steps, budget).map(Arg::Term),
                Arg::Type(ty) => Ok(Arg::Type(ty.clone())),
            })
            .collect()
    };
    Ok(match t.node() {
        TermNode::Root(h, sp) => k
            .root(h.clone(), args(sp.args(), steps)?)
            .expect("type β preserves typing"),
        TermNode::Abs(ty, b) => k.abs(ty.clone(), type_beta(k, b, steps, budget)?),
        TermNode::TypeAbs(b) => k.type_abs(type_beta(k, b, steps, budget)?),
        TermNode::Closure(b, sigma) => {
            let expanded = subst::apply_direct(k, b, sigma);
            type_beta(k, &expanded, steps, budget)?
        }
        TermNode::Redex(fun, sp) => {
            let fun = type_beta(k, fun, steps, budget)?;
            let args = args(sp.args(), steps)?;
            let r = k.app(&fun, args).expect("type β preserves typing");
            let contracted = match r.node() {
                TermNode::Redex(f, sp) => match (f.node(), sp.args().first()) {
                    (TermNode::TypeAbs(body), Some(Arg::Type(nu))) => {
                        *steps += 1;
                        if *steps > budget {
                            return Err(NormalizeError::ResourceLimit { steps: budget });
                        }
                        let inst = subst::instantiate_type(k, body, nu);
                        Some(
                            k.app(&inst, sp.args()[1..].to_vec())
                                .expect("type β preserves typing"),
                        )
                    }
                    _ => None,
                },
                _ => None,
            };
            match contracted {
                Some(c) => type_beta(k, &c, steps, budget)?,
                None => r,
            }
        }
    })
}
