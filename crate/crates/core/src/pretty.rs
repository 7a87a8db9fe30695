//! Renderings of types and terms.
//!
//! * nameless: de Bruijn indices, type indices underlined with U+0332
//!   (`1̲`), constants annotated with their type (`f_{∀(1̲→o)→o→o}`);
//! * spine: heads applied to `·`-separated spines, arguments joined by `;`;
//! * named: generated variable names.

use std::fmt::Write;

use crate::kernel::Kernel;
use crate::signature::Signature;
use crate::term::{Arg, Head, TermNode, TermRef};
use crate::types::{TypeNode, TypeRef};

const COMBINING_LOW_LINE: char = '\u{332}';

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Named,
    Nameless,
    Spine,
}

impl std::str::FromStr for Style {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "named" => Ok(Style::Named),
            "nameless" => Ok(Style::Nameless),
            "spine" => Ok(Style::Spine),
            other => Err(format!("unknown style `{other}`")),
        }
    }
}

/// `12` rendered as `1̲2̲`.
pub fn underline(index: u32) -> String {
    let mut out = String::new();
    for ch in index.to_string().chars() {
        out.push(ch);
        out.push(COMBINING_LOW_LINE);
    }
    out
}

fn type_var_name(level: usize) -> String {
    const GREEK: [&str; 8] = ["α", "β", "γ", "δ", "ε", "ζ", "η", "θ"];
    let base = GREEK[level % GREEK.len()];
    match level / GREEK.len() {
        0 => base.to_owned(),
        n => format!("{base}{n}"),
    }
}

fn term_var_name(level: usize) -> String {
    const LATIN: [&str; 6] = ["X", "Y", "Z", "U", "V", "W"];
    let base = LATIN[level % LATIN.len()];
    match level / LATIN.len() {
        0 => base.to_owned(),
        n => format!("{base}{n}"),
    }
}

pub fn type_string(k: &Kernel, ty: &TypeRef, style: Style) -> String {
    match style {
        Style::Named => type_named(k, ty),
        Style::Nameless | Style::Spine => type_nameless(k, ty),
    }
}

/// Spaced nameless form, e.g. `∀. (1̲ → o) → o → o`.
pub fn type_nameless(k: &Kernel, ty: &TypeRef) -> String {
    let sig = k.signature();
    let mut out = String::new();
    spaced_type(&sig, ty, &mut Vec::new(), false, &mut out);
    out
}

/// Spaced named form, e.g. `∀α. α → o`.
pub fn type_named(k: &Kernel, ty: &TypeRef) -> String {
    let sig = k.signature();
    let mut out = String::new();
    spaced_type(&sig, ty, &mut Vec::new(), true, &mut out);
    out
}

fn spaced_type(sig: &Signature, ty: &TypeRef, names: &mut Vec<String>, named: bool, out: &mut String) {
    match ty.node() {
        TypeNode::Base(b) => out.push_str(sig.base_display(*b)),
        TypeNode::Var(i) => out.push_str(&var_label(names, *i, named)),
        TypeNode::Arrow(a, b) => {
            let wrap = !matches!(a.node(), TypeNode::Base(_) | TypeNode::Var(_));
            if wrap {
                out.push('(');
            }
            spaced_type(sig, a, names, named, out);
            if wrap {
                out.push(')');
            }
            out.push_str(" → ");
            spaced_type(sig, b, names, named, out);
        }
        TypeNode::Forall(b) => {
            out.push('∀');
            if named {
                let name = type_var_name(names.len());
                out.push_str(&name);
                names.push(name);
            }
            out.push_str(". ");
            spaced_type(sig, b, names, named, out);
            if named {
                names.pop();
            }
        }
    }
}

fn var_label(names: &[String], index: u32, named: bool) -> String {
    if named && (index as usize) <= names.len() {
        names[names.len() - index as usize].clone()
    } else {
        underline(index)
    }
}

/// Compact form used for binder and constant annotations: `∀(1̲→o)→o→o`.
fn compact_type(sig: &Signature, ty: &TypeRef, names: &mut Vec<String>, named: bool, out: &mut String) {
    match ty.node() {
        TypeNode::Base(b) => out.push_str(sig.base_display(*b)),
        TypeNode::Var(i) => out.push_str(&var_label(names, *i, named)),
        TypeNode::Arrow(a, b) => {
            let wrap = !is_atomic_type(a);
            if wrap {
                out.push('(');
            }
            compact_type(sig, a, names, named, out);
            if wrap {
                out.push(')');
            }
            out.push('→');
            compact_type(sig, b, names, named, out);
        }
        TypeNode::Forall(b) => {
            out.push('∀');
            if named {
                let name = type_var_name(names.len());
                out.push_str(&name);
                out.push('.');
                names.push(name);
            }
            compact_type(sig, b, names, named, out);
            if named {
                names.pop();
            }
        }
    }
}

fn is_atomic_type(ty: &TypeRef) -> bool {
    matches!(ty.node(), TypeNode::Base(_) | TypeNode::Var(_))
}

/// `_o`, `_1̲` or `_{1̲→o}`.
fn subscript(sig: &Signature, ty: &TypeRef, names: &mut Vec<String>, named: bool) -> String {
    let mut body = String::new();
    compact_type(sig, ty, names, named, &mut body);
    if is_atomic_type(ty) {
        format!("_{body}")
    } else {
        format!("_{{{body}}}")
    }
}

pub fn term_string(k: &Kernel, t: &TermRef, style: Style) -> String {
    let sig = k.signature();
    let mut p = Printer {
        sig: &sig,
        style,
        term_names: Vec::new(),
        type_names: Vec::new(),
    };
    let mut out = String::new();
    p.term(t, &mut out);
    out
}

struct Printer<'a> {
    sig: &'a Signature,
    style: Style,
    term_names: Vec<String>,
    type_names: Vec<String>,
}

impl Printer<'_> {
    fn named(&self) -> bool {
        self.style == Style::Named
    }

    fn annot(&mut self, ty: &TypeRef) -> String {
        let named = self.named();
        subscript(self.sig, ty, &mut self.type_names, named)
    }

    fn compact(&mut self, ty: &TypeRef) -> String {
        let named = self.named();
        let mut s = String::new();
        compact_type(self.sig, ty, &mut self.type_names, named, &mut s);
        s
    }

    fn term(&mut self, t: &TermRef, out: &mut String) {
        match t.node() {
            TermNode::TypeAbs(body) => {
                out.push('Λ');
                if self.named() {
                    let name = type_var_name(self.type_names.len());
                    out.push_str(&name);
                    out.push('.');
                    self.type_names.push(name);
                }
                out.push(' ');
                self.term(body, out);
                if self.named() {
                    self.type_names.pop();
                }
            }
            TermNode::Abs(ty, body) => {
                if self.named() {
                    let name = term_var_name(self.term_names.len());
                    let ty = self.compact(ty);
                    let _ = write!(out, "λ{name}:{ty}. ");
                    self.term_names.push(name);
                    self.term(body, out);
                    self.term_names.pop();
                } else {
                    let ann = self.annot(ty);
                    let _ = write!(out, "λ{ann} ");
                    self.term(body, out);
                }
            }
            TermNode::Root(head, spine) => {
                let h = self.head(head);
                match self.style {
                    Style::Spine if !spine.is_empty() => {
                        out.push_str(&h);
                        self.spine_args(spine.args(), out);
                    }
                    _ => self.curried(h, spine.args(), out),
                }
            }
            TermNode::Redex(fun, spine) => {
                let mut f = String::from("(");
                self.term(fun, &mut f);
                f.push(')');
                match self.style {
                    Style::Spine => {
                        out.push_str(&f);
                        self.spine_args(spine.args(), out);
                    }
                    _ => self.curried(f, spine.args(), out),
                }
            }
            TermNode::Closure(body, sigma) => {
                out.push('[');
                self.term(body, out);
                let _ = write!(out, "]{sigma:?}");
            }
        }
    }

    fn head(&mut self, head: &Head) -> String {
        match head {
            Head::Bound(i, _) => {
                let i = *i as usize;
                if self.named() && i <= self.term_names.len() {
                    self.term_names[self.term_names.len() - i].clone()
                } else {
                    i.to_string()
                }
            }
            Head::Const(c, ty) => {
                let name = self.sig.entry(*c).display.clone();
                match self.style {
                    Style::Nameless => format!("{name}{}", self.annot(ty)),
                    _ => name,
                }
            }
        }
    }

    fn spine_args(&mut self, args: &[Arg], out: &mut String) {
        out.push_str(" · (");
        for (i, arg) in args.iter().enumerate() {
            if i > 0 {
                out.push_str("; ");
            }
            match arg {
                Arg::Type(ty) => {
                    let s = self.compact(ty);
                    out.push_str(&s);
                }
                Arg::Term(t) => self.term(t, out),
            }
        }
        out.push(')');
    }

    /// Curried application with explicit left nesting: `((f a) b) c`.
    fn curried(&mut self, head: String, args: &[Arg], out: &mut String) {
        let mut acc = head;
        for (i, arg) in args.iter().enumerate() {
            let rendered = match arg {
                Arg::Type(ty) => {
                    let s = self.compact(ty);
                    if is_atomic_type(ty) {
                        s
                    } else {
                        format!("({s})")
                    }
                }
                Arg::Term(t) => {
                    let mut s = String::new();
                    self.term(t, &mut s);
                    if is_compound(t) {
                        format!("({s})")
                    } else {
                        s
                    }
                }
            };
            let nest = i > 0 && !self.named();
            acc = if nest {
                format!("({acc}) {rendered}")
            } else {
                format!("{acc} {rendered}")
            };
        }
        out.push_str(&acc);
    }
}

fn is_compound(t: &TermRef) -> bool {
    match t.node() {
        TermNode::Root(_, sp) => !sp.is_empty(),
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn underline_multi_digit() {
        assert_eq!(underline(12), "1\u{332}2\u{332}");
    }

    #[test]
    fn type_styles() {
        let k = Kernel::new();
        let ty = k.types();
        assert_eq!(type_nameless(&k, &ty.bool()), "o");
        let a = ty.arrow(ty.var(1), ty.bool());
        assert_eq!(type_nameless(&k, &a), "1̲ → o");
        assert_eq!(type_named(&k, &ty.forall(a.clone())), "∀α. α → o");
        let f = ty.forall(ty.arrows([a, ty.bool()], ty.bool()));
        assert_eq!(type_nameless(&k, &f), "∀. (1̲ → o) → o → o");
    }

    #[test]
    fn bound_variable_spine() {
        let k = Kernel::new();
        let ty = k.types();
        let i = ty.individual();
        let f = k.declare("g", ty.arrow(ty.arrow(i.clone(), i.clone()), i.clone())).unwrap();
        let inner = k.abs(
            i.clone(),
            k.app(&k.bound(2, ty.arrow(i.clone(), i.clone())).unwrap(), vec![Arg::Term(k.bound(1, i.clone()).unwrap())])
                .unwrap(),
        );
        let t = k.abs(ty.arrow(i.clone(), i.clone()), k.apply(&f, &[inner]).unwrap());
        assert_eq!(term_string(&k, &t, Style::Spine), "λ_{ι→ι} g · (λ_ι 2 · (1))");
        assert_eq!(term_string(&k, &t, Style::Named), "λX:ι→ι. g (λY:ι. X Y)");
    }
}
