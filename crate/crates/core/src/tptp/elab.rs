//! Conversion between TPTP syntax and kernel terms.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::kernel::{Kernel, TypeError};
use crate::pretty;
use crate::signature::{ConstId, ConstKind, Signature};
use crate::term::{Arg, Head, TermNode, TermRef};
use crate::types::{BaseId, TypeNode, TypeRef};

use super::ast::*;
use super::printer;
use super::TptpError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElabError {
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("`{0}` is not a type")]
    NotAType(String),
    #[error("`{0}` is a type, not a term")]
    NotATerm(String),
    #[error("`{expr}` has type {found} but {expected} was expected")]
    Mismatch {
        expr: String,
        expected: String,
        found: String,
    },
    #[error("ill-typed application of `{symbol}`: {error}")]
    Type { symbol: String, error: TypeError },
}

/// Result of elaborating one annotated formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elaborated {
    /// A type or constant declaration, now in the signature.
    Declaration(String),
    Formula(TermRef),
}

enum Binder {
    Term {
        name: String,
        ty: TypeRef,
        type_depth: u32,
    },
    Type {
        name: String,
    },
}

#[derive(Default)]
struct Scope {
    binders: Vec<Binder>,
}

enum Bound {
    Term(u32, TypeRef),
    Type(u32),
}

impl Scope {
    fn type_depth(&self) -> u32 {
        self.binders
            .iter()
            .filter(|b| matches!(b, Binder::Type { .. }))
            .count() as u32
    }

    fn lookup(&self, k: &Kernel, name: &str) -> Option<Bound> {
        let mut terms = 0;
        let mut types = 0;
        let depth = self.type_depth();
        for b in self.binders.iter().rev() {
            match b {
                Binder::Term {
                    name: n,
                    ty,
                    type_depth,
                } => {
                    terms += 1;
                    if n == name {
                        let ty = k.types().shift_type(ty, depth - type_depth);
                        return Some(Bound::Term(terms, ty));
                    }
                }
                Binder::Type { name: n } => {
                    types += 1;
                    if n == name {
                        return Some(Bound::Type(types));
                    }
                }
            }
        }
        None
    }
}

/// Maps a symbol's TPTP spelling to its signature name: `'abc'` and `abc`
/// denote the same symbol.
pub fn symbol_name(raw: &str) -> String {
    if raw.starts_with('\'') && raw.len() >= 2 {
        return super::parser::unquote(raw);
    }
    raw.to_owned()
}

fn is_lower_word(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// TPTP spelling of a signature name, quoting when needed.
pub fn quote_symbol(name: &str) -> String {
    if is_lower_word(name) || name.starts_with('$') || name.starts_with('"') {
        name.to_owned()
    } else {
        let escaped = name.replace('\\', "\\\\").replace('\'', "\\'");
        format!("'{escaped}'")
    }
}

/// Elaborates TPTP formulas into kernel terms over a shared signature.
///
/// In strict mode, symbols of the typed dialects must be declared before
/// use. Otherwise, and always in FOF and CNF, an undeclared symbol is
/// declared on first use with the type its position demands: `$o` in
/// formula position, `$i` for terms, argument types taken from the actual
/// arguments.
pub struct Elaborator<'k> {
    k: &'k Kernel,
    strict: bool,
    definitions: Option<&'k BTreeMap<String, TermRef>>,
}

impl<'k> Elaborator<'k> {
    pub fn new(k: &'k Kernel) -> Self {
        Elaborator {
            k,
            strict: false,
            definitions: None,
        }
    }

    /// Closed terms that a lowercase name stands for, taking precedence
    /// over the signature.
    pub fn with_definitions(mut self, definitions: &'k BTreeMap<String, TermRef>) -> Self {
        self.definitions = Some(definitions);
        self
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn elaborate(&self, f: &AnnotatedFormula) -> Result<Elaborated, TptpError> {
        self.elaborate_inner(f).map_err(|error| TptpError::Elaboration {
            formula: f.name.clone(),
            error,
        })
    }

    fn elaborate_inner(&self, f: &AnnotatedFormula) -> Result<Elaborated, ElabError> {
        let strict = self.strict && f.dialect.is_typed();
        let cx = Cx {
            k: self.k,
            strict,
            definitions: self.definitions,
        };
        match &f.statement {
            Statement::Typing { symbol, ty } => {
                let name = symbol_name(symbol);
                if *ty == Expr::atom("$tType") {
                    self.k
                        .signature_mut()
                        .declare_base(&name)
                        .map_err(|e| ElabError::Type {
                            symbol: name.clone(),
                            error: e.into(),
                        })?;
                } else {
                    let ty = cx.ty(ty, &mut Scope::default())?;
                    self.k.declare(&name, ty).map_err(|error| ElabError::Type {
                        symbol: name.clone(),
                        error,
                    })?;
                }
                Ok(Elaborated::Declaration(name))
            }
            Statement::Logic(e) => {
                let mut free = Vec::new();
                free_vars(e, &mut Vec::new(), &mut free);
                let closed;
                let e = if free.is_empty() {
                    e
                } else if strict {
                    return Err(ElabError::UnboundVariable(free[0].clone()));
                } else {
                    let vars = free.into_iter().map(|name| TypedVar { name, ty: None }).collect();
                    closed = Expr::quantified(Quantifier::Forall, vars, e.clone());
                    &closed
                };
                let o = self.k.types().bool();
                if !is_schematic(e) {
                    return Ok(Elaborated::Formula(cx.term(e, Some(&o), &mut Scope::default())?));
                }
                let t = cx.infer(e, Some(&o), &mut Scope::default())?;
                let mut body = t.ty().clone();
                while let Some(b) = body.as_forall() {
                    body = b.clone();
                }
                if body != o {
                    return Err(ElabError::Mismatch {
                        expr: show(e),
                        expected: cx.show_type(&o),
                        found: cx.show_type(t.ty()),
                    });
                }
                Ok(Elaborated::Formula(t))
            }
        }
    }

    /// Elaborates a standalone closed term or formula.
    pub fn term(&self, e: &Expr, dialect: Dialect, expected: Option<&TypeRef>) -> Result<TermRef, ElabError> {
        let cx = Cx {
            k: self.k,
            strict: self.strict && dialect.is_typed(),
            definitions: self.definitions,
        };
        cx.term(e, expected, &mut Scope::default())
    }

    pub fn ty(&self, e: &Expr) -> Result<TypeRef, ElabError> {
        let cx = Cx {
            k: self.k,
            strict: self.strict,
            definitions: self.definitions,
        };
        cx.ty(e, &mut Scope::default())
    }
}

fn is_type_var(v: &TypedVar) -> bool {
    v.ty.as_ref() == Some(&Expr::atom("$tType"))
}

/// A formula opening with `! [A: $tType, ...]`: a schema over types,
/// elaborated as a type abstraction of type `∀…o`.
fn is_schematic(e: &Expr) -> bool {
    matches!(e, Expr::Quantified(Quantifier::Forall, vars, _) if vars.first().is_some_and(is_type_var))
}

fn free_vars(e: &Expr, bound: &mut Vec<String>, out: &mut Vec<String>) {
    match e {
        Expr::Var(v) => {
            if !bound.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        }
        Expr::Atom(_) | Expr::Number(_) | Expr::Distinct(_) => {}
        Expr::Apply(h, args) => {
            free_vars(h, bound, out);
            for a in args {
                free_vars(a, bound, out);
            }
        }
        Expr::Not(x) => free_vars(x, bound, out),
        Expr::Binary(_, l, r) => {
            free_vars(l, bound, out);
            free_vars(r, bound, out);
        }
        Expr::Quantified(_, vars, body) => {
            let n = bound.len();
            for v in vars {
                if let Some(ty) = &v.ty {
                    free_vars(ty, bound, out);
                }
                bound.push(v.name.clone());
            }
            free_vars(body, bound, out);
            bound.truncate(n);
        }
    }
}

struct Cx<'k> {
    k: &'k Kernel,
    strict: bool,
    definitions: Option<&'k BTreeMap<String, TermRef>>,
}

fn show(e: &Expr) -> String {
    printer::formula(e, Dialect::Thf)
}

impl Cx<'_> {
    fn definition(&self, name: &str) -> Option<TermRef> {
        self.definitions?.get(name).cloned()
    }

    fn show_type(&self, ty: &TypeRef) -> String {
        pretty::type_nameless(self.k, ty)
    }

    fn ty(&self, e: &Expr, sc: &mut Scope) -> Result<TypeRef, ElabError> {
        let types = self.k.types();
        match e {
            Expr::Atom(a) => match a.as_str() {
                "$o" => Ok(types.bool()),
                "$i" => Ok(types.individual()),
                "$tType" => Err(ElabError::NotAType(a.clone())),
                "$int" | "$rat" | "$real" => Err(ElabError::Unsupported(format!("arithmetic type {a}"))),
                _ => {
                    let name = symbol_name(a);
                    let found = self.k.signature().lookup_base(&name);
                    match found {
                        Some(b) => Ok(types.base(b)),
                        None if self.strict => Err(ElabError::UndeclaredSymbol(name)),
                        None => {
                            let b = self
                                .k
                                .signature_mut()
                                .declare_base(&name)
                                .map_err(|e| ElabError::Type {
                                    symbol: name.clone(),
                                    error: e.into(),
                                })?;
                            Ok(types.base(b))
                        }
                    }
                }
            },
            Expr::Var(v) => match sc.lookup(self.k, v) {
                Some(Bound::Type(i)) => Ok(types.var(i)),
                Some(Bound::Term(..)) => Err(ElabError::NotAType(v.clone())),
                None => Err(ElabError::UnboundVariable(v.clone())),
            },
            Expr::Binary(BinOp::Arrow, l, r) => {
                let mut doms = Vec::new();
                self.product(l, sc, &mut doms)?;
                let cod = self.ty(r, sc)?;
                Ok(types.arrows(doms, cod))
            }
            Expr::Quantified(Quantifier::TypeForall, vars, body) => {
                let n = sc.binders.len();
                for v in vars {
                    if v.ty.as_ref().is_some_and(|t| *t != Expr::atom("$tType")) {
                        sc.binders.truncate(n);
                        return Err(ElabError::Unsupported(format!(
                            "type quantifier over non-$tType variable {}",
                            v.name
                        )));
                    }
                    sc.binders.push(Binder::Type { name: v.name.clone() });
                }
                let body = self.ty(body, sc);
                sc.binders.truncate(n);
                let mut out = body?;
                for _ in vars {
                    out = types.forall(out);
                }
                Ok(out)
            }
            Expr::Apply(..) => Err(ElabError::Unsupported(format!(
                "type constructor application {}",
                show(e)
            ))),
            _ => Err(ElabError::NotAType(show(e))),
        }
    }

    fn product(&self, e: &Expr, sc: &mut Scope, out: &mut Vec<TypeRef>) -> Result<(), ElabError> {
        match e {
            Expr::Binary(BinOp::Product, l, r) => {
                self.product(l, sc, out)?;
                self.product(r, sc, out)
            }
            _ => {
                out.push(self.ty(e, sc)?);
                Ok(())
            }
        }
    }

    fn looks_like_type(&self, e: &Expr, sc: &Scope) -> bool {
        match e {
            Expr::Atom(a) => {
                matches!(a.as_str(), "$i" | "$o" | "$tType")
                    || (self.k.signature().lookup_base(&symbol_name(a)).is_some()
                        && self.k.signature().lookup(&symbol_name(a)).is_none())
            }
            Expr::Var(v) => matches!(sc.lookup(self.k, v), Some(Bound::Type(_))),
            Expr::Binary(BinOp::Arrow | BinOp::Product, ..) => true,
            Expr::Quantified(Quantifier::TypeForall, ..) => true,
            _ => false,
        }
    }

    fn term(&self, e: &Expr, expected: Option<&TypeRef>, sc: &mut Scope) -> Result<TermRef, ElabError> {
        let t = self.infer(e, expected, sc)?;
        match expected {
            Some(ex) if t.ty() != ex => Err(ElabError::Mismatch {
                expr: show(e),
                expected: self.show_type(ex),
                found: self.show_type(t.ty()),
            }),
            _ => Ok(t),
        }
    }

    fn app(&self, symbol: &str, f: &TermRef, args: Vec<Arg>) -> Result<TermRef, ElabError> {
        self.k.app(f, args).map_err(|error| ElabError::Type {
            symbol: symbol.to_owned(),
            error,
        })
    }

    fn logical(&self, c: ConstId, args: Vec<TermRef>) -> TermRef {
        let f = self.k.constant(c);
        self.k.apply(&f, &args).expect("well-typed connective")
    }

    fn equality(&self, ty: &TypeRef, l: TermRef, r: TermRef) -> TermRef {
        let eq = self.k.constant(ConstId::EQ);
        self.k
            .app(&eq, vec![Arg::Type(ty.clone()), Arg::Term(l), Arg::Term(r)])
            .expect("well-typed equation")
    }

    fn infer(&self, e: &Expr, expected: Option<&TypeRef>, sc: &mut Scope) -> Result<TermRef, ElabError> {
        let k = self.k;
        let o = k.types().bool();
        match e {
            Expr::Var(v) => match sc.lookup(k, v) {
                Some(Bound::Term(i, ty)) => Ok(k.bound(i, ty).expect("index ≥ 1")),
                Some(Bound::Type(_)) => Err(ElabError::NotATerm(v.clone())),
                None => Err(ElabError::UnboundVariable(v.clone())),
            },
            Expr::Atom(a) => self.atom(a, expected, &[]),
            Expr::Number(n) => Err(ElabError::Unsupported(format!("arithmetic literal {n}"))),
            Expr::Distinct(d) => self.atom(d, Some(&k.types().individual()), &[]),
            Expr::Apply(h, args) => self.application(h, args, expected, sc),
            Expr::Not(x) => {
                let x = self.term(x, Some(&o), sc)?;
                Ok(self.logical(ConstId::NOT, vec![x]))
            }
            Expr::Binary(op, l, r) => match op {
                BinOp::Arrow | BinOp::Product => Err(ElabError::NotATerm(show(e))),
                BinOp::Eq | BinOp::Neq => {
                    let lt = self.infer(l, None, sc)?;
                    let ty = lt.ty().clone();
                    let rt = self.term(r, Some(&ty), sc)?;
                    let eq = self.equality(&ty, lt, rt);
                    Ok(if *op == BinOp::Neq {
                        self.logical(ConstId::NOT, vec![eq])
                    } else {
                        eq
                    })
                }
                _ => {
                    let lt = self.term(l, Some(&o), sc)?;
                    let rt = self.term(r, Some(&o), sc)?;
                    Ok(match op {
                        BinOp::Or => self.logical(ConstId::OR, vec![lt, rt]),
                        BinOp::And => self.logical(ConstId::AND, vec![lt, rt]),
                        BinOp::Implies => self.logical(ConstId::IMPLIES, vec![lt, rt]),
                        BinOp::RevImplies => self.logical(ConstId::IMPLIES, vec![rt, lt]),
                        BinOp::Iff => self.equality(&o, lt, rt),
                        BinOp::Xor => {
                            let eq = self.equality(&o, lt, rt);
                            self.logical(ConstId::NOT, vec![eq])
                        }
                        BinOp::Nor => {
                            let d = self.logical(ConstId::OR, vec![lt, rt]);
                            self.logical(ConstId::NOT, vec![d])
                        }
                        BinOp::Nand => {
                            let c = self.logical(ConstId::AND, vec![lt, rt]);
                            self.logical(ConstId::NOT, vec![c])
                        }
                        _ => unreachable!(),
                    })
                }
            },
            Expr::Quantified(q, vars, body) => self.quantified(*q, vars, body, expected, sc),
        }
    }

    fn quantified(
        &self,
        q: Quantifier,
        vars: &[TypedVar],
        body: &Expr,
        expected: Option<&TypeRef>,
        sc: &mut Scope,
    ) -> Result<TermRef, ElabError> {
        let k = self.k;
        let types = k.types();
        let o = types.bool();
        if q == Quantifier::TypeForall {
            return Err(ElabError::Unsupported(
                "type quantification in a formula".to_owned(),
            ));
        }
        let n = sc.binders.len();
        let result = (|| {
            // (is_type_binder, variable type)
            let mut made: Vec<Option<TypeRef>> = Vec::new();
            let mut expect = expected.cloned();
            for (i, v) in vars.iter().enumerate() {
                let is_type = is_type_var(v);
                if is_type {
                    let schematic = q == Quantifier::Forall && n == 0 && vars[..i].iter().all(is_type_var);
                    if q != Quantifier::Lambda && !schematic {
                        return Err(ElabError::Unsupported(
                            "quantification over types in a formula".to_owned(),
                        ));
                    }
                    sc.binders.push(Binder::Type { name: v.name.clone() });
                    made.push(None);
                    expect = expect.and_then(|t| t.as_forall().cloned());
                } else {
                    let ty = match &v.ty {
                        Some(t) => self.ty(t, sc)?,
                        None => types.individual(),
                    };
                    sc.binders.push(Binder::Term {
                        name: v.name.clone(),
                        ty: ty.clone(),
                        type_depth: sc.type_depth(),
                    });
                    expect = expect.and_then(|t| t.as_arrow().map(|(_, c)| c.clone()));
                    made.push(Some(ty));
                }
            }
            let mut t = match q {
                Quantifier::Lambda => self.term(body, expect.as_ref(), sc)?,
                _ => self.term(body, Some(&o), sc)?,
            };
            for ty in made.into_iter().rev() {
                t = match (q, ty) {
                    (_, None) => k.type_abs(t),
                    (Quantifier::Lambda, Some(ty)) => k.abs(ty, t),
                    (q, Some(ty)) => {
                        let c = if q == Quantifier::Forall {
                            ConstId::PI
                        } else {
                            ConstId::SIGMA
                        };
                        let lam = k.abs(ty.clone(), t);
                        k.app(&k.constant(c), vec![Arg::Type(ty), Arg::Term(lam)])
                            .expect("well-typed quantifier")
                    }
                };
            }
            Ok(t)
        })();
        sc.binders.truncate(n);
        result
    }

    /// A constant by TPTP spelling; undeclared symbols are declared with
    /// the argument types and the expected (or default) result type.
    fn atom(&self, raw: &str, expected: Option<&TypeRef>, arg_types: &[TypeRef]) -> Result<TermRef, ElabError> {
        let k = self.k;
        let types = k.types();
        let logical = match raw {
            "$true" => Some(k.constant(ConstId::TRUE)),
            "$false" => Some(k.constant(ConstId::FALSE)),
            "~" => Some(k.constant(ConstId::NOT)),
            "&" => Some(k.constant(ConstId::AND)),
            "|" => Some(k.constant(ConstId::OR)),
            "=>" => Some(k.constant(ConstId::IMPLIES)),
            "=" => Some(k.constant(ConstId::EQ)),
            "!!" => Some(k.constant(ConstId::PI)),
            "??" => Some(k.constant(ConstId::SIGMA)),
            "<=>" => Some(
                k.app(&k.constant(ConstId::EQ), vec![Arg::Type(types.bool())])
                    .expect("well-typed"),
            ),
            "<=" | "<~>" | "~|" | "~&" | "!=" => {
                return Err(ElabError::Unsupported(format!("bare connective ({raw})")))
            }
            _ => None,
        };
        if let Some(c) = logical {
            return Ok(c);
        }
        if raw.starts_with('$') && k.signature().lookup(raw).is_none() {
            return Err(ElabError::Unsupported(format!("defined symbol {raw}")));
        }
        let name = symbol_name(raw);
        if let Some(t) = self.definition(&name) {
            return Ok(t);
        }
        let found = k.signature().lookup(&name);
        if let Some(id) = found {
            return Ok(k.constant(id));
        }
        if self.strict {
            return Err(ElabError::UndeclaredSymbol(name));
        }
        let cod = expected.cloned().unwrap_or_else(|| types.individual());
        let ty = types.arrows(arg_types.iter().cloned(), cod);
        if !ty.is_closed() {
            return Err(ElabError::Unsupported(format!(
                "cannot infer a closed type for `{name}`"
            )));
        }
        k.declare(&name, ty).map_err(|error| ElabError::Type { symbol: name, error })
    }

    fn application(
        &self,
        head: &Expr,
        args: &[Expr],
        expected: Option<&TypeRef>,
        sc: &mut Scope,
    ) -> Result<TermRef, ElabError> {
        let k = self.k;
        let symbol = show(head);
        // undeclared function symbol: arguments first, then declare
        if let Expr::Atom(a) = head {
            let name = symbol_name(a);
            let is_logical = matches!(
                a.as_str(),
                "$true" | "$false" | "~" | "&" | "|" | "=>" | "=" | "!!" | "??" | "<=>"
            );
            if !is_logical
                && !self.strict
                && self.definition(&name).is_none()
                && k.signature().lookup(&name).is_none()
                && !a.starts_with('$')
            {
                let mut targs = Vec::new();
                for arg in args {
                    targs.push(self.infer(arg, None, sc)?);
                }
                let tys: Vec<TypeRef> = targs.iter().map(|t| t.ty().clone()).collect();
                let f = self.atom(a, expected, &tys)?;
                return self.app(&symbol, &f, targs.into_iter().map(Arg::Term).collect());
            }
        }
        let mut f = self.infer(head, None, sc)?;
        for arg in args {
            let fty = f.ty().clone();
            let a = match fty.node() {
                TypeNode::Forall(body) => {
                    if self.looks_like_type(arg, sc) {
                        Arg::Type(self.ty(arg, sc)?)
                    } else {
                        // implicit instantiation from the argument's type
                        let t = self.infer(arg, None, sc)?;
                        let Some(inst) = body
                            .as_arrow()
                            .and_then(|(dom, _)| match_var(k, dom, t.ty(), 1))
                        else {
                            return Err(ElabError::Type {
                                symbol,
                                error: TypeError::NotAFunction {
                                    ty: self.show_type(&fty),
                                },
                            });
                        };
                        f = self.app(&symbol, &f, vec![Arg::Type(inst)])?;
                        Arg::Term(t)
                    }
                }
                TypeNode::Arrow(dom, _) => Arg::Term(self.term(arg, Some(dom), sc)?),
                _ => {
                    return Err(ElabError::Type {
                        symbol,
                        error: TypeError::NotAFunction {
                            ty: self.show_type(&fty),
                        },
                    })
                }
            };
            f = self.app(&symbol, &f, vec![a])?;
        }
        Ok(f)
    }
}

/// The type `ty` that makes `pattern[ty/index] = actual`, if `index` occurs.
fn match_var(k: &Kernel, pattern: &TypeRef, actual: &TypeRef, index: u32) -> Option<TypeRef> {
    fn go(k: &Kernel, p: &TypeRef, a: &TypeRef, index: u32, depth: u32, out: &mut Option<TypeRef>) -> bool {
        match (p.node(), a.node()) {
            (TypeNode::Var(i), _) if *i == index + depth => {
                if a.loose_bound() > 0 && depth > 0 {
                    return false;
                }
                match out {
                    Some(prev) => prev == a,
                    None => {
                        *out = Some(a.clone());
                        true
                    }
                }
            }
            (TypeNode::Arrow(p1, p2), TypeNode::Arrow(a1, a2)) => {
                go(k, p1, a1, index, depth, out) && go(k, p2, a2, index, depth, out)
            }
            (TypeNode::Forall(pb), TypeNode::Forall(ab)) => go(k, pb, ab, index, depth + 1, out),
            _ => p == a,
        }
    }
    let mut out = None;
    if go(k, pattern, actual, index, 0, &mut out) {
        let ty = out?;
        (k.types().instantiate(pattern, &ty) == *actual).then_some(ty)
    } else {
        None
    }
}

// ---- kernel to TPTP ---------------------------------------------------------

struct Back<'a> {
    k: &'a Kernel,
    sig: &'a Signature,
    dialect: Dialect,
    term_names: Vec<String>,
    type_names: Vec<String>,
}

fn mismatch<T>(dialect: Dialect, reason: impl Into<String>) -> Result<T, TptpError> {
    Err(TptpError::DialectMismatch {
        dialect,
        reason: reason.into(),
    })
}

/// Renders a kernel term as a TPTP expression in `dialect`. Higher-order
/// constructs are rejected outside THF. In CNF the term must be a clause:
/// a disjunction of literals under a prefix of universal quantifiers over
/// `$i`, which become the clause's free variables.
pub fn from_kernel(k: &Kernel, t: &TermRef, dialect: Dialect) -> Result<Expr, TptpError> {
    let sig = k.signature();
    let mut b = Back {
        k,
        sig: &sig,
        dialect: if dialect == Dialect::Cnf { Dialect::Fof } else { dialect },
        term_names: Vec::new(),
        type_names: Vec::new(),
    };
    if dialect == Dialect::Thf && matches!(t.node(), TermNode::TypeAbs(_)) {
        let mut vars = Vec::new();
        let mut body = t.clone();
        while let TermNode::TypeAbs(inner) = body.node() {
            let name = format!("T{}", b.type_names.len() + 1);
            b.type_names.push(name.clone());
            vars.push(TypedVar {
                name,
                ty: Some(Expr::atom("$tType")),
            });
            body = inner.clone();
        }
        if body.ty().node() == &TypeNode::Base(BaseId::BOOL) {
            return Ok(Expr::quantified(Quantifier::Forall, vars, b.term(&body)?));
        }
        b.type_names.clear();
    }
    if dialect != Dialect::Cnf {
        return b.term(t);
    }
    let mut body = t.clone();
    loop {
        let next = match body.node() {
            TermNode::Root(Head::Const(ConstId::PI, _), sp) if sp.len() == 2 => match &sp.args()[1] {
                Arg::Term(lam) => match lam.node() {
                    TermNode::Abs(ty, inner) if ty.node() == &TypeNode::Base(BaseId::INDIVIDUAL) => inner.clone(),
                    _ => break,
                },
                Arg::Type(_) => break,
            },
            _ => break,
        };
        b.term_names.push(format!("X{}", b.term_names.len() + 1));
        body = next;
    }
    let e = b.term(&body).map_err(|e| match e {
        TptpError::DialectMismatch { reason, .. } => TptpError::DialectMismatch { dialect, reason },
        other => other,
    })?;
    let mut lits = Vec::new();
    clause_literals(e, &mut lits)?;
    let mut lits = lits.into_iter();
    let first = lits.next().expect("a clause has a literal");
    Ok(lits.fold(first, |acc, l| Expr::binary(BinOp::Or, acc, l)))
}

fn clause_literals(e: Expr, out: &mut Vec<Expr>) -> Result<(), TptpError> {
    match e {
        Expr::Binary(BinOp::Or, l, r) => {
            clause_literals(*l, out)?;
            clause_literals(*r, out)
        }
        Expr::Not(inner) => match *inner {
            Expr::Binary(BinOp::Eq, l, r) => {
                out.push(Expr::Binary(BinOp::Neq, l, r));
                Ok(())
            }
            a if is_atomic(&a) => {
                out.push(Expr::not(a));
                Ok(())
            }
            _ => mismatch(Dialect::Cnf, "negation of a non-atomic formula"),
        },
        Expr::Binary(BinOp::Eq | BinOp::Neq, ..) => {
            out.push(e);
            Ok(())
        }
        a if is_atomic(&a) => {
            out.push(a);
            Ok(())
        }
        _ => mismatch(Dialect::Cnf, "formula is not a clause"),
    }
}

fn is_atomic(e: &Expr) -> bool {
    matches!(e, Expr::Atom(_) | Expr::Apply(..))
}

/// Renders a closed kernel type.
pub fn type_to_expr(k: &Kernel, ty: &TypeRef) -> Expr {
    let sig = k.signature();
    let mut b = Back {
        k,
        sig: &sig,
        dialect: Dialect::Thf,
        term_names: Vec::new(),
        type_names: Vec::new(),
    };
    b.ty(ty)
}

impl Back<'_> {
    fn ho(&self) -> bool {
        self.dialect == Dialect::Thf
    }

    fn ty(&mut self, ty: &TypeRef) -> Expr {
        match ty.node() {
            TypeNode::Base(b) => Expr::Atom(quote_symbol(self.sig.base_name(*b))),
            TypeNode::Var(i) => {
                let i = *i as usize;
                if i <= self.type_names.len() {
                    Expr::Var(self.type_names[self.type_names.len() - i].clone())
                } else {
                    Expr::Var(format!("T_free{i}"))
                }
            }
            TypeNode::Arrow(a, b) => {
                let a = self.ty(a);
                let b = self.ty(b);
                Expr::binary(BinOp::Arrow, a, b)
            }
            TypeNode::Forall(b) => {
                let name = format!("T{}", self.type_names.len() + 1);
                self.type_names.push(name.clone());
                let body = self.ty(b);
                self.type_names.pop();
                Expr::quantified(
                    Quantifier::TypeForall,
                    vec![TypedVar {
                        name,
                        ty: Some(Expr::atom("$tType")),
                    }],
                    body,
                )
            }
        }
    }

    fn first_order_type(&self, ty: &TypeRef) -> Result<(), TptpError> {
        match ty.node() {
            TypeNode::Base(b) if self.dialect == Dialect::Tff || *b == BaseId::INDIVIDUAL || *b == BaseId::BOOL => Ok(()),
            _ => mismatch(self.dialect, format!("type {} is not first-order", pretty::type_nameless(self.k, ty))),
        }
    }

    fn var_decl(&mut self, ty: &TypeRef) -> Result<TypedVar, TptpError> {
        let name = format!("X{}", self.term_names.len() + 1);
        let ann = match self.dialect {
            Dialect::Fof => {
                if ty.node() != &TypeNode::Base(BaseId::INDIVIDUAL) {
                    return mismatch(self.dialect, "quantification over a non-individual type");
                }
                None
            }
            Dialect::Tff => {
                self.first_order_type(ty)?;
                if ty.node() == &TypeNode::Base(BaseId::BOOL) {
                    return mismatch(self.dialect, "quantification over $o");
                }
                Some(self.ty(ty))
            }
            _ => Some(self.ty(ty)),
        };
        Ok(TypedVar { name, ty: ann })
    }

    fn term(&mut self, t: &TermRef) -> Result<Expr, TptpError> {
        match t.node() {
            TermNode::Closure(b, sigma) => {
                let e = crate::normalize::subst::apply_direct(self.k, b, sigma);
                self.term(&e)
            }
            TermNode::Abs(ty, body) => {
                if !self.ho() {
                    return mismatch(self.dialect, "λ-abstraction");
                }
                let v = self.var_decl(ty)?;
                self.term_names.push(v.name.clone());
                let body = self.term(body);
                self.term_names.pop();
                Ok(Expr::quantified(Quantifier::Lambda, vec![v], body?))
            }
            TermNode::TypeAbs(body) => {
                if !self.ho() {
                    return mismatch(self.dialect, "type abstraction");
                }
                let name = format!("T{}", self.type_names.len() + 1);
                self.type_names.push(name.clone());
                let body = self.term(body);
                self.type_names.pop();
                Ok(Expr::quantified(
                    Quantifier::Lambda,
                    vec![TypedVar {
                        name,
                        ty: Some(Expr::atom("$tType")),
                    }],
                    body?,
                ))
            }
            TermNode::Redex(f, sp) => {
                if !self.ho() {
                    return mismatch(self.dialect, "β-redex");
                }
                let head = self.term(f)?;
                let args = self.args(sp.args())?;
                Ok(Expr::apply(head, args))
            }
            TermNode::Root(Head::Bound(i, ty), sp) => {
                let i = *i as usize;
                let name = if i <= self.term_names.len() {
                    self.term_names[self.term_names.len() - i].clone()
                } else {
                    return mismatch(self.dialect, "term with a dangling bound variable");
                };
                if !self.ho() {
                    if !sp.is_empty() {
                        return mismatch(self.dialect, "applied variable");
                    }
                    self.first_order_type(ty)?;
                }
                let args = self.args(sp.args())?;
                Ok(Expr::apply(Expr::Var(name), args))
            }
            TermNode::Root(Head::Const(c, _), sp) => self.constant(*c, sp.args()),
        }
    }

    fn args(&mut self, args: &[Arg]) -> Result<Vec<Expr>, TptpError> {
        args.iter()
            .map(|a| match a {
                Arg::Term(u) => self.term(u),
                Arg::Type(ty) => Ok(self.ty(ty)),
            })
            .collect()
    }

    fn constant(&mut self, c: ConstId, args: &[Arg]) -> Result<Expr, TptpError> {
        let terms: Vec<&TermRef> = args.iter().filter_map(Arg::as_term).collect();
        let full = |n: usize| terms.len() == n && args.len() == n;
        match c {
            ConstId::TRUE => return Ok(Expr::atom("$true")),
            ConstId::FALSE => return Ok(Expr::atom("$false")),
            ConstId::NOT if full(1) => return Ok(Expr::not(self.term(terms[0])?)),
            ConstId::AND | ConstId::OR | ConstId::IMPLIES if full(2) => {
                let op = match c {
                    ConstId::AND => BinOp::And,
                    ConstId::OR => BinOp::Or,
                    _ => BinOp::Implies,
                };
                let l = self.term(terms[0])?;
                let r = self.term(terms[1])?;
                return Ok(Expr::binary(op, l, r));
            }
            ConstId::EQ if args.len() == 3 && terms.len() == 2 => {
                let is_bool = terms[0].ty().node() == &TypeNode::Base(BaseId::BOOL);
                if !self.ho() && !is_bool {
                    self.first_order_type(terms[0].ty())?;
                }
                let op = if is_bool && !self.ho() { BinOp::Iff } else { BinOp::Eq };
                let l = self.term(terms[0])?;
                let r = self.term(terms[1])?;
                return Ok(Expr::binary(op, l, r));
            }
            ConstId::PI | ConstId::SIGMA if args.len() == 2 && terms.len() == 1 => {
                if let TermNode::Abs(ty, body) = terms[0].node() {
                    let q = if c == ConstId::PI {
                        Quantifier::Forall
                    } else {
                        Quantifier::Exists
                    };
                    let v = self.var_decl(ty)?;
                    self.term_names.push(v.name.clone());
                    let body = self.term(body);
                    self.term_names.pop();
                    return Ok(Expr::quantified(q, vec![v], body?));
                }
            }
            _ => {}
        }
        let entry = self.sig.entry(c);
        if entry.kind == ConstKind::Logical {
            if !self.ho() {
                return mismatch(self.dialect, format!("partially applied connective {}", entry.display));
            }
            // TH0 style: type arguments of logical constants are implicit
            let head = Expr::Atom(entry.name.clone());
            let args = terms.into_iter().map(|t| self.term(t)).collect::<Result<_, _>>()?;
            return Ok(Expr::apply(head, args));
        }
        let head = Expr::Atom(quote_symbol(&entry.name));
        if !self.ho() {
            let ty = entry.ty.clone();
            let (doms, cod) = ty.unfold_arrows();
            if terms.len() != args.len() || doms.len() != terms.len() {
                return mismatch(self.dialect, format!("partial application of {}", entry.name));
            }
            for d in doms.iter().chain(std::iter::once(&cod)) {
                self.first_order_type(d)?;
            }
            if doms.iter().any(|d| d.node() == &TypeNode::Base(BaseId::BOOL)) {
                return mismatch(self.dialect, format!("{} takes a formula argument", entry.name));
            }
        }
        let args = self.args(args)?;
        Ok(Expr::apply(head, args))
    }
}

/// User constants and base types occurring in `terms`.
pub fn used_symbols(terms: &[TermRef]) -> (BTreeSet<ConstId>, BTreeSet<BaseId>) {
    fn ty(t: &TypeRef, bases: &mut BTreeSet<BaseId>) {
        match t.node() {
            TypeNode::Base(b) => {
                bases.insert(*b);
            }
            TypeNode::Var(_) => {}
            TypeNode::Arrow(a, b) => {
                ty(a, bases);
                ty(b, bases);
            }
            TypeNode::Forall(b) => ty(b, bases),
        }
    }
    fn spine(args: &[Arg], consts: &mut BTreeSet<ConstId>, bases: &mut BTreeSet<BaseId>) {
        for a in args {
            match a {
                Arg::Term(u) => go(u, consts, bases),
                Arg::Type(t) => ty(t, bases),
            }
        }
    }
    fn go(t: &TermRef, consts: &mut BTreeSet<ConstId>, bases: &mut BTreeSet<BaseId>) {
        match t.node() {
            TermNode::Root(h, sp) => {
                if let Head::Const(c, _) = h {
                    if !c.is_logical() {
                        consts.insert(*c);
                    }
                }
                ty(h.ty(), bases);
                spine(sp.args(), consts, bases);
            }
            TermNode::Redex(f, sp) => {
                go(f, consts, bases);
                spine(sp.args(), consts, bases);
            }
            TermNode::Abs(vty, b) => {
                ty(vty, bases);
                go(b, consts, bases);
            }
            TermNode::TypeAbs(b) | TermNode::Closure(b, _) => go(b, consts, bases),
        }
    }
    let mut consts = BTreeSet::new();
    let mut bases = BTreeSet::new();
    for t in terms {
        go(t, &mut consts, &mut bases);
    }
    bases.remove(&BaseId::BOOL);
    bases.remove(&BaseId::INDIVIDUAL);
    (consts, bases)
}

/// Type declarations for every user symbol in `terms` (empty for the
/// untyped dialects).
pub fn declarations(k: &Kernel, terms: &[TermRef], dialect: Dialect) -> Vec<AnnotatedFormula> {
    if !dialect.is_typed() {
        return Vec::new();
    }
    let (consts, bases) = used_symbols(terms);
    let sig = k.signature();
    let mut out = Vec::new();
    for b in bases {
        let name = quote_symbol(sig.base_name(b));
        out.push(AnnotatedFormula {
            dialect,
            name: format!("{}_type", sanitize(&name)),
            role: Role::Type,
            statement: Statement::Typing {
                symbol: name,
                ty: Expr::atom("$tType"),
            },
            annotations: Vec::new(),
        });
    }
    let entries: Vec<(String, TypeRef)> = consts
        .into_iter()
        .map(|c| (sig.name(c).to_owned(), sig.type_of(c).clone()))
        .collect();
    drop(sig);
    for (name, ty) in entries {
        let symbol = quote_symbol(&name);
        let ty = if dialect == Dialect::Tff {
            let (doms, cod) = ty.unfold_arrows();
            let cod = type_to_expr(k, &cod);
            let mut doms = doms.iter().map(|d| type_to_expr(k, d));
            match doms.next() {
                None => cod,
                Some(first) => {
                    let dom = doms.fold(first, |acc, d| Expr::binary(BinOp::Product, acc, d));
                    Expr::binary(BinOp::Arrow, dom, cod)
                }
            }
        } else {
            type_to_expr(k, &ty)
        };
        out.push(AnnotatedFormula {
            dialect,
            name: format!("{}_decl", sanitize(&symbol)),
            role: Role::Type,
            statement: Statement::Typing { symbol, ty },
            annotations: Vec::new(),
        });
    }
    out
}

fn sanitize(s: &str) -> String {
    let mut out: String = s
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if !out.starts_with(|c: char| c.is_ascii_lowercase()) {
        out.insert_str(0, "s_");
    }
    out
}
