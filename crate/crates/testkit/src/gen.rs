//! Random well-typed System F terms over a fixed vocabulary.

use holboard_core::{Arg, Head, Kernel, TermRef, TypeNode, TypeRef};
use rand::seq::SliceRandom;
use rand::Rng;

/// Constants available to generated terms.
pub struct Vocabulary {
    pub consts: Vec<TermRef>,
}

impl Vocabulary {
    /// Declares the generator's constants in `k` (idempotent per kernel).
    pub fn install(k: &Kernel) -> Vocabulary {
        let tb = k.types();
        let i = tb.individual();
        let o = tb.bool();
        let ii = tb.arrow(i.clone(), i.clone());
        let a1 = tb.var(1);
        let decls = [
            ("c", i.clone()),
            ("d", i.clone()),
            ("b", o.clone()),
            ("f", ii.clone()),
            ("p", tb.arrow(i.clone(), o.clone())),
            ("h", tb.arrows([i.clone(), i.clone()], i.clone())),
            ("g", tb.arrow(ii.clone(), i.clone())),
            ("q", tb.arrow(o.clone(), o.clone())),
            ("r", tb.arrow(tb.arrow(i.clone(), o.clone()), o.clone())),
            ("pid", tb.forall(tb.arrow(a1.clone(), a1.clone()))),
            (
                "twice",
                tb.forall(tb.arrows([tb.arrow(a1.clone(), a1.clone()), a1.clone()], a1.clone())),
            ),
        ];
        let consts = decls
            .into_iter()
            .map(|(name, ty)| match k.const_named(name) {
                Some(c) => c,
                None => k.declare(name, ty).expect("fresh constant"),
            })
            .collect();
        Vocabulary { consts }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    /// Upper bound on term size.
    pub max_size: u32,
    /// Allow arrow types as type arguments.
    pub arrow_type_args: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_size: 40,
            arrow_type_args: true,
        }
    }
}

/// Nesting depth of a type.
pub fn type_depth(ty: &TypeRef) -> u32 {
    match ty.node() {
        TypeNode::Base(_) | TypeNode::Var(_) => 1,
        TypeNode::Arrow(a, b) => 1 + type_depth(a).max(type_depth(b)),
        TypeNode::Forall(b) => 1 + type_depth(b),
    }
}

pub struct TermGen<'k, R> {
    k: &'k Kernel,
    vocab: Vocabulary,
    rng: R,
    config: GenConfig,
}

impl<'k, R: Rng> TermGen<'k, R> {
    pub fn new(k: &'k Kernel, rng: R, config: GenConfig) -> Self {
        TermGen {
            k,
            vocab: Vocabulary::install(k),
            rng,
            config,
        }
    }

    pub fn rng(&mut self) -> &mut R {
        &mut self.rng
    }

    fn closed_types(&self, allow_arrows: bool) -> Vec<TypeRef> {
        let tb = self.k.types();
        let i = tb.individual();
        let o = tb.bool();
        let mut out = vec![i.clone(), o.clone()];
        if allow_arrows {
            let ii = tb.arrow(i.clone(), i.clone());
            out.push(ii.clone());
            out.push(tb.arrow(i.clone(), o.clone()));
            out.push(tb.arrow(o.clone(), o.clone()));
            out.push(tb.arrow(ii.clone(), i.clone()));
            out.push(tb.arrows([i.clone(), i.clone()], i));
        }
        out
    }

    /// Random top-level type, depth at most 4.
    pub fn random_type(&mut self) -> TypeRef {
        let tb = self.k.types();
        let mut pool = self.closed_types(true);
        let a1 = tb.var(1);
        pool.push(tb.forall(tb.arrow(a1.clone(), a1.clone())));
        pool.push(tb.forall(tb.arrows([tb.arrow(a1.clone(), a1.clone()), a1.clone()], a1)));
        let i = tb.individual();
        pool.push(tb.arrows([tb.arrow(i.clone(), i.clone()), i.clone()], i));
        pool.choose(&mut self.rng).expect("non-empty pool").clone()
    }

    /// A closed term of type `ty`, size at most `max_size`.
    pub fn term_of(&mut self, ty: &TypeRef) -> TermRef {
        loop {
            let fuel = self.rng.gen_range(3..=self.config.max_size);
            if let Some(t) = self.gen(&[], ty, fuel, 0) {
                if t.size() <= self.config.max_size {
                    return t;
                }
            }
        }
    }

    /// A closed term of a random type.
    pub fn term(&mut self) -> TermRef {
        let ty = self.random_type();
        self.term_of(&ty)
    }

    fn gen(&mut self, ctx: &[TypeRef], ty: &TypeRef, fuel: u32, depth: u32) -> Option<TermRef> {
        if depth > 12 {
            return None;
        }
        if let TypeNode::Forall(body) = ty.node() {
            let ctx2 = self.shift_ctx(ctx);
            return Some(self.k.type_abs(self.gen(&ctx2, body, fuel.saturating_sub(1), depth + 1)?));
        }
        if fuel <= 1 {
            return self.minimal(ctx, ty, depth);
        }
        for _ in 0..4 {
            let choice = self.rng.gen_range(0..10);
            let r = match choice {
                0..=1 => self.intro(ctx, ty, fuel, depth),
                2..=3 => self.redex(ctx, ty, fuel, depth),
                4 => self.type_redex(ctx, ty, fuel, depth),
                _ => self.head_app(ctx, ty, fuel, depth),
            };
            if r.is_some() {
                return r;
            }
        }
        self.minimal(ctx, ty, depth)
    }

    fn shift_ctx(&self, ctx: &[TypeRef]) -> Vec<TypeRef> {
        ctx.iter().map(|t| self.k.types().shift_type(t, 1)).collect()
    }

    fn intro(&mut self, ctx: &[TypeRef], ty: &TypeRef, fuel: u32, depth: u32) -> Option<TermRef> {
        let (dom, cod) = ty.as_arrow()?;
        let mut ctx2 = ctx.to_vec();
        ctx2.push(dom.clone());
        let body = self.gen(&ctx2, cod, fuel - 1, depth + 1)?;
        Some(self.k.abs(dom.clone(), body))
    }

    fn pick_arg_type(&mut self, ctx: &[TypeRef]) -> TypeRef {
        let mut pool = self.closed_types(true);
        for t in ctx {
            if !t.is_closed() && self.rng.gen_bool(0.5) {
                pool.push(t.clone());
            }
        }
        pool.choose(&mut self.rng).expect("non-empty pool").clone()
    }

    fn redex(&mut self, ctx: &[TypeRef], ty: &TypeRef, fuel: u32, depth: u32) -> Option<TermRef> {
        let sigma = self.pick_arg_type(ctx);
        let (f1, f2) = self.split(fuel - 1);
        let mut ctx2 = ctx.to_vec();
        ctx2.push(sigma.clone());
        let body = self.gen(&ctx2, ty, f1, depth + 1)?;
        let arg = self.gen(ctx, &sigma, f2, depth + 1)?;
        let lam = self.k.abs(sigma, body);
        Some(self.k.app(&lam, vec![Arg::Term(arg)]).expect("well-typed redex"))
    }

    fn type_redex(&mut self, ctx: &[TypeRef], ty: &TypeRef, fuel: u32, depth: u32) -> Option<TermRef> {
        let nu = self
            .closed_types(self.config.arrow_type_args)
            .choose(&mut self.rng)
            .expect("non-empty pool")
            .clone();
        let (f1, f2) = self.split(fuel - 1);
        let tb = self.k.types();
        let mut ctx2 = self.shift_ctx(ctx);
        ctx2.push(tb.var(1));
        let body = self.gen(&ctx2, &tb.shift_type(ty, 1), f1, depth + 1)?;
        let arg = self.gen(ctx, &nu, f2, depth + 1)?;
        let tlam = self.k.type_abs(self.k.abs(tb.var(1), body));
        Some(
            self.k
                .app(&tlam, vec![Arg::Type(nu), Arg::Term(arg)])
                .expect("well-typed type redex"),
        )
    }

    fn split(&mut self, fuel: u32) -> (u32, u32) {
        if fuel <= 1 {
            return (fuel, 0);
        }
        let a = self.rng.gen_range(1..fuel);
        (a, fuel - a)
    }

    /// Heads whose type, after some arguments, is `ty`: bound variables
    /// (weighted up) and constants, polymorphic ones instantiated at `ty`.
    fn heads(&mut self, ctx: &[TypeRef], ty: &TypeRef) -> Vec<(TermRef, Vec<Arg>, Vec<TypeRef>)> {
        let mut out = Vec::new();
        let n = ctx.len();
        let mut heads: Vec<(TermRef, Vec<Arg>)> = Vec::new();
        for (pos, vty) in ctx.iter().enumerate() {
            let v = self.k.bound((n - pos) as u32, vty.clone()).expect("index ≥ 1");
            for _ in 0..6 {
                heads.push((v.clone(), Vec::new()));
            }
        }
        for c in &self.vocab.consts {
            match c.ty().node() {
                TypeNode::Forall(_) => {
                    let (_, target) = ty.unfold_arrows();
                    let instance = if self.config.arrow_type_args { ty.clone() } else { target };
                    if !self.config.arrow_type_args && instance.is_arrow() {
                        continue;
                    }
                    heads.push((c.clone(), vec![Arg::Type(instance)]));
                }
                _ => heads.push((c.clone(), Vec::new())),
            }
        }
        for (h, pre) in heads {
            let mut hty = h.ty().clone();
            for a in &pre {
                hty = self.k.apply_type(&hty, a).expect("instantiation");
            }
            let mut args = Vec::new();
            let mut cur = hty;
            loop {
                if &cur == ty {
                    out.push((h.clone(), pre.clone(), args.clone()));
                }
                match cur.as_arrow() {
                    Some((a, b)) => {
                        args.push(a.clone());
                        cur = b.clone();
                    }
                    None => break,
                }
            }
        }
        out
    }

    fn head_app(&mut self, ctx: &[TypeRef], ty: &TypeRef, fuel: u32, depth: u32) -> Option<TermRef> {
        let heads = self.heads(ctx, ty);
        let (h, pre, arg_tys) = heads.choose(&mut self.rng)?.clone();
        let mut args = pre;
        let mut budget = fuel - 1;
        for aty in &arg_tys {
            let share = if arg_tys.len() > 1 { budget / 2 } else { budget };
            let a = self.gen(ctx, aty, share.max(1), depth + 1)?;
            budget = budget.saturating_sub(a.size());
            args.push(Arg::Term(a));
        }
        Some(self.k.app(&h, args).expect("well-typed application"))
    }

    fn minimal(&mut self, ctx: &[TypeRef], ty: &TypeRef, depth: u32) -> Option<TermRef> {
        if depth > 12 {
            return None;
        }
        match ty.node() {
            TypeNode::Arrow(..) if self.rng.gen_bool(0.7) => return self.intro(ctx, ty, 1, depth),
            TypeNode::Forall(_) => return self.gen(ctx, ty, 1, depth),
            _ => {}
        }
        let mut heads = self.heads(ctx, ty);
        heads.sort_by_key(|(_, _, args)| args.len());
        let Some(fewest) = heads.first().map(|(_, _, a)| a.len()) else {
            return if ty.is_arrow() { self.intro(ctx, ty, 1, depth) } else { None };
        };
        heads.retain(|(_, _, a)| a.len() == fewest);
        let (h, pre, arg_tys) = heads.choose(&mut self.rng)?.clone();
        let mut args = pre;
        for aty in &arg_tys {
            args.push(Arg::Term(self.minimal(ctx, aty, depth + 1)?));
        }
        Some(self.k.app(&h, args).expect("well-typed application"))
    }
}

/// Head of a Root term, if any.
pub fn root_head(t: &TermRef) -> Option<Head> {
    match t.node() {
        holboard_core::TermNode::Root(h, _) => Some(h.clone()),
        _ => None,
    }
}
