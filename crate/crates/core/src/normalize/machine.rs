//! Environment machine for β-normalization with explicit substitutions.
//!
//! `reduce(t, σ, stack)` computes the normal form of `t[σ]` applied to the
//! pending arguments on `stack`. How substitutions are composed and whether
//! substituted arguments are normalized eagerly or kept as closures depends
//! on the [`Strategy`].

use crate::kernel::Kernel;
use crate::term::{Arg, Front, Head, Subst, TermNode, TermRef, TermSubst, TermSubstNode};
use crate::types::TypeRef;

use super::subst::drop_entries;
use super::{ClosureMode, Composition, NormalizationStats, NormalizeError, Strategy};

enum Pending {
    Term(TermRef, Subst),
    Type(TypeRef),
}

pub(super) struct Machine<'k> {
    k: &'k Kernel,
    composition: Composition,
    closures: ClosureMode,
    budget: u64,
    pub(super) stats: NormalizationStats,
}

impl<'k> Machine<'k> {
    pub(super) fn new(k: &'k Kernel, strategy: Strategy, budget: u64) -> Self {
        Machine {
            k,
            composition: strategy.composition().unwrap_or(Composition::Strict),
            closures: strategy.closures().unwrap_or(ClosureMode::Eager),
            budget,
            stats: NormalizationStats::default(),
        }
    }

    pub(super) fn normalize(&mut self, t: &TermRef, sigma: &Subst) -> Result<TermRef, NormalizeError> {
        if t.is_beta_normal() && (sigma.is_identity() || t.is_closed()) {
            return Ok(t.clone());
        }
        self.reduce(t.clone(), sigma.clone(), Vec::new())
    }

    fn step(&mut self) -> Result<(), NormalizeError> {
        self.stats.reduction_steps += 1;
        if self.stats.reduction_steps > self.budget {
            return Err(NormalizeError::ResourceLimit {
                steps: self.budget,
            });
        }
        Ok(())
    }

    fn reduce(
        &mut self,
        mut t: TermRef,
        mut sigma: Subst,
        mut stack: Vec<Pending>,
    ) -> Result<TermRef, NormalizeError> {
        let k = self.k;
        loop {
            match t.node().clone() {
                TermNode::Closure(body, rho) => {
                    sigma = self.compose(&rho, &sigma)?;
                    t = body;
                }
                TermNode::Redex(fun, spine) => {
                    for arg in spine.iter().rev() {
                        stack.push(self.pending(arg, &sigma));
                    }
                    t = fun;
                }
                TermNode::Abs(ty, body) => match stack.pop() {
                    Some(Pending::Term(arg, tau)) => {
                        self.step()?;
                        let front = self.front(&arg, &tau)?;
                        sigma = k.cons_subst(front, &sigma);
                        t = body;
                    }
                    Some(Pending::Type(_)) => unreachable!("type argument applied to a λ"),
                    None => {
                        let ty = k.types().substitute(&ty, &sigma.ty);
                        let lifted = self.lift(&sigma)?;
                        let body = self.normalize(&body, &lifted)?;
                        return Ok(k.abs(ty, body));
                    }
                },
                TermNode::TypeAbs(body) => match stack.pop() {
                    Some(Pending::Type(nu)) => {
                        self.step()?;
                        sigma = k.cons_type_subst(nu, &sigma);
                        t = body;
                    }
                    Some(Pending::Term(..)) => unreachable!("term argument applied to a Λ"),
                    None => {
                        let lifted = self.lift_type(&sigma)?;
                        let body = self.normalize(&body, &lifted)?;
                        return Ok(k.type_abs(body));
                    }
                },
                TermNode::Root(head, spine) => {
                    for arg in spine.iter().rev() {
                        stack.push(self.pending(arg, &sigma));
                    }
                    match head {
                        Head::Const(..) => return self.finish(head, stack),
                        Head::Bound(i, ty) => match self.lookup(&sigma.term, i)? {
                            Front::Index(j) => {
                                let ty = k.types().substitute(&ty, &sigma.ty);
                                return self.finish(Head::Bound(j, ty), stack);
                            }
                            Front::Term(s) => {
                                t = s;
                                sigma = k.id_subst();
                            }
                        },
                    }
                }
            }
        }
    }

    /// Builds `head · args` after normalizing the remaining arguments.
    fn finish(&mut self, head: Head, mut stack: Vec<Pending>) -> Result<TermRef, NormalizeError> {
        let mut args = Vec::with_capacity(stack.len());
        while let Some(p) = stack.pop() {
            args.push(match p {
                Pending::Term(a, tau) => Arg::Term(self.normalize(&a, &tau)?),
                Pending::Type(ty) => Arg::Type(ty),
            });
        }
        Ok(self
            .k
            .root(head, args)
            .expect("normalization preserves typing"))
    }

    fn pending(&self, arg: &Arg, sigma: &Subst) -> Pending {
        match arg {
            Arg::Term(a) => Pending::Term(a.clone(), sigma.clone()),
            Arg::Type(ty) => Pending::Type(self.k.types().substitute(ty, &sigma.ty)),
        }
    }

    /// The substitution entry standing for `a[tau]`.
    fn front(&mut self, a: &TermRef, tau: &Subst) -> Result<Front, NormalizeError> {
        if tau.is_identity() || a.is_closed() {
            return Ok(Front::Term(a.clone()));
        }
        match self.closures {
            ClosureMode::Eager => Ok(Front::Term(self.normalize(a, tau)?)),
            ClosureMode::Lazy => {
                self.stats.closures_built += 1;
                Ok(Front::Term(self.k.apply_subst(a, tau)))
            }
        }
    }

    fn lookup(&mut self, sigma: &TermSubst, i: u32) -> Result<Front, NormalizeError> {
        match sigma.node() {
            TermSubstNode::Shift(n) => Ok(Front::Index(i + n)),
            TermSubstNode::Cons(front, rest) => {
                if i == 1 {
                    Ok(front.clone())
                } else {
                    self.lookup(rest, i - 1)
                }
            }
            TermSubstNode::Compose(inner, outer) => {
                let f = self.lookup(inner, i)?;
                self.apply_front(f, outer)
            }
        }
    }

    fn apply_front(&mut self, front: Front, sigma: &Subst) -> Result<Front, NormalizeError> {
        match front {
            Front::Index(j) => self.lookup(&sigma.term, j),
            Front::Term(s) => self.front(&s, sigma),
        }
    }

    /// `tau ∘ sigma`: first `tau`, then `sigma`.
    fn compose(&mut self, tau: &Subst, sigma: &Subst) -> Result<Subst, NormalizeError> {
        if sigma.is_identity() {
            return Ok(tau.clone());
        }
        if tau.is_identity() {
            return Ok(sigma.clone());
        }
        Ok(Subst {
            term: self.compose_term(&tau.term, sigma)?,
            ty: self.k.types().compose(&tau.ty, &sigma.ty),
        })
    }

    fn compose_term(&mut self, tau: &TermSubst, sigma: &Subst) -> Result<TermSubst, NormalizeError> {
        if sigma.is_identity() {
            return Ok(tau.clone());
        }
        if tau.is_identity() {
            return Ok(sigma.term.clone());
        }
        self.stats.subst_compositions += 1;
        let k = self.k;
        match self.composition {
            Composition::Lazy => Ok(k.term_subst(TermSubstNode::Compose(tau.clone(), sigma.clone()))),
            Composition::Strict => match tau.node() {
                TermSubstNode::Shift(n) => Ok(drop_entries(k, &sigma.term, *n)),
                TermSubstNode::Cons(front, rest) => {
                    let front = self.apply_front(front.clone(), sigma)?;
                    let rest = self.compose_term(rest, sigma)?;
                    Ok(k.term_subst(TermSubstNode::Cons(front, rest)))
                }
                TermSubstNode::Compose(inner, outer) => {
                    let outer = self.compose(outer, sigma)?;
                    self.compose_term(inner, &outer)
                }
            },
        }
    }

    fn lift(&mut self, sigma: &Subst) -> Result<Subst, NormalizeError> {
        if sigma.is_identity() {
            return Ok(sigma.clone());
        }
        let shifted = self.compose_term(&sigma.term, &self.k.shift_subst(1))?;
        Ok(Subst {
            term: self
                .k
                .term_subst(TermSubstNode::Cons(Front::Index(1), shifted)),
            ty: sigma.ty.clone(),
        })
    }

    fn lift_type(&mut self, sigma: &Subst) -> Result<Subst, NormalizeError> {
        if sigma.is_identity() {
            return Ok(sigma.clone());
        }
        let term = self.compose_term(&sigma.term, &self.k.type_shift_subst(1))?;
        Ok(Subst {
            term,
            ty: self.k.types().lift(&sigma.ty),
        })
    }
}
