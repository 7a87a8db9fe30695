//! Reference strategy: leftmost-outermost reduction with eager,
//! depth-indexed substitution and no explicit environments.

use crate::kernel::Kernel;
use crate::term::{Arg, TermNode, TermRef};

use super::subst::{apply_direct, instantiate, instantiate_type};
use super::{NormalizationStats, NormalizeError};

pub(super) struct Base<'k> {
    k: &'k Kernel,
    budget: u64,
    pub(super) stats: NormalizationStats,
}

impl<'k> Base<'k> {
    pub(super) fn new(k: &'k Kernel, budget: u64) -> Self {
        Base {
            k,
            budget,
            stats: NormalizationStats::default(),
        }
    }

    pub(super) fn normalize(&mut self, t: &TermRef) -> Result<TermRef, NormalizeError> {
        let k = self.k;
        let mut t = t.clone();
        loop {
            if t.is_beta_normal() {
                return Ok(t);
            }
            match t.node() {
                TermNode::Closure(b, sigma) => {
                    t = apply_direct(k, b, sigma);
                }
                TermNode::Abs(ty, b) => return Ok(k.abs(ty.clone(), self.normalize(b)?)),
                TermNode::TypeAbs(b) => return Ok(k.type_abs(self.normalize(b)?)),
                TermNode::Root(h, sp) => {
                    let mut args = Vec::with_capacity(sp.len());
                    for a in sp {
                        args.push(match a {
                            Arg::Term(u) => Arg::Term(self.normalize(u)?),
                            Arg::Type(ty) => Arg::Type(ty.clone()),
                        });
                    }
                    return Ok(k.root(h.clone(), args).expect("β preserves typing"));
                }
                TermNode::Redex(fun, sp) => {
                    let fun = match fun.node() {
                        TermNode::Closure(b, sigma) => apply_direct(k, b, sigma),
                        _ => fun.clone(),
                    };
                    let rest = sp.args()[1..].to_vec();
                    let contracted = match (fun.node(), &sp.args()[0]) {
                        (TermNode::Abs(_, body), Arg::Term(a)) => instantiate(k, body, a),
                        (TermNode::TypeAbs(body), Arg::Type(nu)) => instantiate_type(k, body, nu),
                        _ => {
                            // the closure expanded to a non-abstraction
                            t = k.app(&fun, sp.args().to_vec()).expect("β preserves typing");
                            continue;
                        }
                    };
                    self.step()?;
                    t = k.app(&contracted, rest).expect("β preserves typing");
                }
            }
        }
    }

    fn step(&mut self) -> Result<(), NormalizeError> {
        self.stats.reduction_steps += 1;
        if self.stats.reduction_steps > self.budget {
            return Err(NormalizeError::ResourceLimit { steps: self.budget });
        }
        Ok(())
    }
}
