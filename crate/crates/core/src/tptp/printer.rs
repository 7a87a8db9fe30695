//! TPTP output. Every binary subformula is parenthesized, so printing and
//! re-parsing yields the same tree.

use super::ast::*;

pub fn annotated(f: &AnnotatedFormula) -> String {
    let body = match &f.statement {
        Statement::Logic(e) => top(e, f.dialect),
        Statement::Typing { symbol, ty } => format!("{symbol}: {}", unit(ty, f.dialect)),
    };
    let mut out = format!("{}({}, {}, {}", f.dialect, f.name, f.role, body);
    for a in &f.annotations {
        out.push_str(", ");
        out.push_str(&general(a));
    }
    out.push_str(").");
    out
}

/// A whole formula in `dialect` syntax.
pub fn formula(e: &Expr, dialect: Dialect) -> String {
    top(e, dialect)
}

/// A type without redundant outer parentheses, e.g. `$i > $o`.
pub fn type_text(e: &Expr, dialect: Dialect) -> String {
    match e {
        Expr::Binary(op, l, r) => format!("{} {} {}", unit(l, dialect), op.symbol(), unit(r, dialect)),
        _ => unit(e, dialect),
    }
}

fn top(e: &Expr, dialect: Dialect) -> String {
    if dialect == Dialect::Cnf {
        if let Expr::Binary(BinOp::Or, ..) = e {
            let mut lits = Vec::new();
            flatten_or(e, &mut lits);
            let parts: Vec<String> = lits.iter().map(|l| literal(l)).collect();
            return format!("({})", parts.join(" | "));
        }
        return literal(e);
    }
    unit(e, dialect)
}

fn flatten_or<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
    match e {
        Expr::Binary(BinOp::Or, l, r) => {
            flatten_or(l, out);
            out.push(r);
        }
        other => out.push(other),
    }
}

fn literal(e: &Expr) -> String {
    match e {
        Expr::Binary(op @ (BinOp::Eq | BinOp::Neq), l, r) => format!(
            "{} {} {}",
            operand(l, Dialect::Cnf),
            op.symbol(),
            operand(r, Dialect::Cnf)
        ),
        _ => unit(e, Dialect::Cnf),
    }
}

fn vars(vs: &[TypedVar], dialect: Dialect) -> String {
    let parts: Vec<String> = vs
        .iter()
        .map(|v| match &v.ty {
            Some(ty) => format!("{}: {}", v.name, unit(ty, dialect)),
            None => v.name.clone(),
        })
        .collect();
    parts.join(", ")
}

fn unit(e: &Expr, dialect: Dialect) -> String {
    match e {
        Expr::Var(s) | Expr::Number(s) | Expr::Distinct(s) => s.clone(),
        Expr::Atom(s) => {
            if is_bare_connective(s) {
                format!("({s})")
            } else {
                s.clone()
            }
        }
        Expr::Apply(h, args) => {
            if dialect == Dialect::Thf {
                let mut out = format!("({}", operand(h, dialect));
                for a in args {
                    out.push_str(" @ ");
                    out.push_str(&operand(a, dialect));
                }
                out.push(')');
                out
            } else {
                let parts: Vec<String> = args.iter().map(|a| unit(a, dialect)).collect();
                format!("{}({})", unit(h, dialect), parts.join(","))
            }
        }
        Expr::Not(inner) => format!("~ {}", unit(inner, dialect)),
        Expr::Binary(op @ (BinOp::Eq | BinOp::Neq), l, r) => {
            format!("({} {} {})", operand(l, dialect), op.symbol(), operand(r, dialect))
        }
        Expr::Binary(op, l, r) => format!("({} {} {})", unit(l, dialect), op.symbol(), unit(r, dialect)),
        Expr::Quantified(q, vs, body) => format!(
            "({} [{}]: {})",
            q.symbol(),
            vars(vs, dialect),
            unit(body, dialect)
        ),
    }
}

/// A negation's operand extends over `@` and `=`, so a negation in
/// those positions needs its own parentheses.
fn operand(e: &Expr, dialect: Dialect) -> String {
    match e {
        Expr::Not(_) => format!("({})", unit(e, dialect)),
        _ => unit(e, dialect),
    }
}

fn is_bare_connective(s: &str) -> bool {
    matches!(
        s,
        "|" | "&" | "=>" | "<=" | "<=>" | "<~>" | "~|" | "~&" | "~" | "=" | "!="
    )
}

pub fn general(g: &GeneralTerm) -> String {
    match g {
        GeneralTerm::Word { name, args } => {
            if args.is_empty() {
                name.clone()
            } else {
                let parts: Vec<String> = args.iter().map(general).collect();
                format!("{name}({})", parts.join(","))
            }
        }
        GeneralTerm::Var(s) | GeneralTerm::Number(s) | GeneralTerm::Distinct(s) => s.clone(),
        GeneralTerm::List(items) => {
            let parts: Vec<String> = items.iter().map(general).collect();
            format!("[{}]", parts.join(","))
        }
        GeneralTerm::Colon(a, b) => format!("{}:{}", general(a), general(b)),
        GeneralTerm::Formula(d, e) => format!("${d}({})", formula(e, *d)),
    }
}
