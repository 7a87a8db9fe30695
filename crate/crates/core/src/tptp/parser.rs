//! Recursive-descent parser over the token stream.
//!
//! Precedence, tightest first: `@`, `*`, `>` (right-associative), `=` and
//! `!=`, then the binary connectives. Quantifier bodies and operands of `~`
//! extend over applications and infix equations but stop at binary
//! connectives.

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::TptpError;

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    dialect: Dialect,
}

pub(crate) fn parse_items(src: &str) -> Result<Vec<Item>, TptpError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        dialect: Dialect::Thf,
    };
    let mut items = Vec::new();
    while p.peek() != &Tok::Eof {
        items.push(p.item()?);
    }
    Ok(items)
}

/// Parses a single formula of the given dialect (no surrounding
/// `fof(...)`).
pub(crate) fn parse_expr(src: &str, dialect: Dialect) -> Result<Expr, TptpError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        dialect,
    };
    let e = p.formula()?;
    p.expect_eof()?;
    Ok(e)
}

const CONNECTIVES: &[(&str, BinOp)] = &[
    ("|", BinOp::Or),
    ("&", BinOp::And),
    ("=>", BinOp::Implies),
    ("<=", BinOp::RevImplies),
    ("<=>", BinOp::Iff),
    ("<~>", BinOp::Xor),
    ("~|", BinOp::Nor),
    ("~&", BinOp::Nand),
];

/// Symbols that may appear as bare constants in THF when parenthesized.
const BARE_CONNECTIVES: &[&str] = &["|", "&", "=>", "<=", "<=>", "<~>", "~|", "~&", "~", "=", "!="];

impl Parser {
    fn at(&self, i: usize) -> &Token {
        &self.toks[i.min(self.toks.len() - 1)]
    }

    fn peek(&self) -> &Tok {
        &self.at(self.pos).tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.at(self.pos + n).tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek().clone();
        self.pos += 1;
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, TptpError> {
        let t = self.at(self.pos);
        Err(TptpError::Syntax {
            line: t.line,
            col: t.col,
            expected: format!("{expected}, found {}", t.tok.describe()),
        })
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(s) if *s == sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), TptpError> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.error(&format!("`{sym}`"))
        }
    }

    fn expect_eof(&self) -> Result<(), TptpError> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            self.error("end of input")
        }
    }

    fn item(&mut self) -> Result<Item, TptpError> {
        let kw = match self.bump() {
            Tok::Lower(w) => w,
            _ => {
                self.pos -= 1;
                return self.error("`thf`, `tff`, `fof`, `cnf` or `include`");
            }
        };
        if kw == "include" {
            self.expect("(")?;
            let path = match self.bump() {
                Tok::Quoted(q) => unquote(&q),
                _ => {
                    self.pos -= 1;
                    return self.error("a quoted file name");
                }
            };
            let selection = if self.eat(",") {
                self.expect("[")?;
                let mut names = Vec::new();
                if !self.eat("]") {
                    loop {
                        names.push(self.name()?);
                        if self.eat("]") {
                            break;
                        }
                        self.expect(",")?;
                    }
                }
                Some(names)
            } else {
                None
            };
            self.expect(")")?;
            self.expect(".")?;
            return Ok(Item::Include(Include { path, selection }));
        }
        let Some(dialect) = Dialect::from_keyword(&kw) else {
            self.pos -= 1;
            return self.error("`thf`, `tff`, `fof`, `cnf` or `include`");
        };
        self.dialect = dialect;
        self.expect("(")?;
        let name = self.name()?;
        self.expect(",")?;
        let role = match self.bump() {
            Tok::Lower(r) => match r.parse::<Role>() {
                Ok(role) => role,
                Err(_) => {
                    self.pos -= 1;
                    return self.error("a formula role");
                }
            },
            _ => {
                self.pos -= 1;
                return self.error("a formula role");
            }
        };
        self.expect(",")?;
        let statement = if role == Role::Type && dialect.is_typed() {
            self.typing()?
        } else {
            Statement::Logic(self.formula()?)
        };
        let mut annotations = Vec::new();
        while self.eat(",") {
            annotations.push(self.general_term()?);
        }
        self.expect(")")?;
        self.expect(".")?;
        Ok(Item::Formula(AnnotatedFormula {
            dialect,
            name,
            role,
            statement,
            annotations,
        }))
    }

    fn name(&mut self) -> Result<String, TptpError> {
        match self.bump() {
            Tok::Lower(w) | Tok::Quoted(w) | Tok::Number(w) => Ok(w),
            _ => {
                self.pos -= 1;
                self.error("a formula name")
            }
        }
    }

    fn typing(&mut self) -> Result<Statement, TptpError> {
        if self.eat("(") {
            let s = self.typing()?;
            self.expect(")")?;
            return Ok(s);
        }
        let symbol = match self.bump() {
            Tok::Lower(w) | Tok::Quoted(w) | Tok::Dollar(w) | Tok::Upper(w) => w,
            _ => {
                self.pos -= 1;
                return self.error("a symbol to declare");
            }
        };
        self.expect(":")?;
        let ty = self.formula()?;
        Ok(Statement::Typing { symbol, ty })
    }

    pub(crate) fn formula(&mut self) -> Result<Expr, TptpError> {
        let mut lhs = self.equation()?;
        loop {
            let op = match self.peek() {
                Tok::Sym(s) => CONNECTIVES.iter().find(|(sym, _)| sym == s).map(|(_, op)| *op),
                _ => None,
            };
            let Some(op) = op else { break };
            self.bump();
            let rhs = self.equation()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn equation(&mut self) -> Result<Expr, TptpError> {
        let lhs = self.mapping()?;
        let op = if self.eat("=") {
            BinOp::Eq
        } else if self.eat("!=") {
            BinOp::Neq
        } else {
            return Ok(lhs);
        };
        let rhs = self.mapping()?;
        Ok(Expr::binary(op, lhs, rhs))
    }

    fn mapping(&mut self) -> Result<Expr, TptpError> {
        let lhs = self.product()?;
        if self.eat(">") {
            let rhs = self.mapping()?;
            return Ok(Expr::binary(BinOp::Arrow, lhs, rhs));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, TptpError> {
        let mut lhs = self.application()?;
        while self.eat("*") {
            let rhs = self.application()?;
            lhs = Expr::binary(BinOp::Product, lhs, rhs);
        }
        Ok(lhs)
    }

    fn application(&mut self) -> Result<Expr, TptpError> {
        let head = self.unit()?;
        let mut args = Vec::new();
        while self.eat("@") {
            args.push(self.unit()?);
        }
        Ok(Expr::apply(head, args))
    }

    fn unit(&mut self) -> Result<Expr, TptpError> {
        if self.eat("~") {
            return Ok(Expr::not(self.equation()?));
        }
        let quant = match self.peek() {
            Tok::Sym("!") => Some(Quantifier::Forall),
            Tok::Sym("?") => Some(Quantifier::Exists),
            Tok::Sym("^") => Some(Quantifier::Lambda),
            Tok::Sym("!>") => Some(Quantifier::TypeForall),
            _ => None,
        };
        if let Some(q) = quant {
            if self.peek_at(1) == &Tok::Sym("[") {
                self.bump();
                self.bump();
                let mut vars = Vec::new();
                loop {
                    let name = match self.bump() {
                        Tok::Upper(v) => v,
                        _ => {
                            self.pos -= 1;
                            return self.error("a variable");
                        }
                    };
                    let ty = if self.eat(":") { Some(self.mapping()?) } else { None };
                    vars.push(TypedVar { name, ty });
                    if self.eat("]") {
                        break;
                    }
                    self.expect(",")?;
                }
                self.expect(":")?;
                let body = self.equation()?;
                return Ok(Expr::quantified(q, vars, body));
            }
        }
        if self.eat("(") {
            if let Tok::Sym(s) = self.peek().clone() {
                if BARE_CONNECTIVES.contains(&s) && self.peek_at(1) == &Tok::Sym(")") {
                    self.bump();
                    self.bump();
                    return Ok(Expr::Atom(s.to_owned()));
                }
            }
            let e = self.formula()?;
            self.expect(")")?;
            return Ok(e);
        }
        match self.bump() {
            Tok::Upper(v) => Ok(Expr::Var(v)),
            Tok::Number(n) => Ok(Expr::Number(n)),
            Tok::Distinct(d) => Ok(Expr::Distinct(d)),
            Tok::Sym(s @ ("!!" | "??")) => Ok(Expr::Atom(s.to_owned())),
            Tok::Lower(w) | Tok::Quoted(w) | Tok::Dollar(w) => {
                let head = Expr::Atom(w);
                if self.dialect != Dialect::Thf && self.eat("(") {
                    let mut args = vec![self.formula()?];
                    while self.eat(",") {
                        args.push(self.formula()?);
                    }
                    self.expect(")")?;
                    Ok(Expr::Apply(Box::new(head), args))
                } else {
                    Ok(head)
                }
            }
            _ => {
                self.pos -= 1;
                self.error("a formula")
            }
        }
    }

    fn general_term(&mut self) -> Result<GeneralTerm, TptpError> {
        let data = self.general_data()?;
        if self.eat(":") {
            let rest = self.general_term()?;
            return Ok(GeneralTerm::Colon(Box::new(data), Box::new(rest)));
        }
        Ok(data)
    }

    fn general_data(&mut self) -> Result<GeneralTerm, TptpError> {
        if self.eat("[") {
            let mut items = Vec::new();
            if !self.eat("]") {
                loop {
                    items.push(self.general_term()?);
                    if self.eat("]") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            return Ok(GeneralTerm::List(items));
        }
        match self.bump() {
            Tok::Dollar(w) if Dialect::from_keyword(&w[1..]).is_some() && self.peek() == &Tok::Sym("(") => {
                let dialect = Dialect::from_keyword(&w[1..]).expect("checked");
                self.bump();
                let saved = self.dialect;
                self.dialect = dialect;
                let e = self.formula();
                self.dialect = saved;
                let e = e?;
                self.expect(")")?;
                Ok(GeneralTerm::Formula(dialect, e))
            }
            Tok::Lower(w) | Tok::Quoted(w) | Tok::Dollar(w) => {
                let mut args = Vec::new();
                if self.eat("(") {
                    loop {
                        args.push(self.general_term()?);
                        if self.eat(")") {
                            break;
                        }
                        self.expect(",")?;
                    }
                }
                Ok(GeneralTerm::Word { name: w, args })
            }
            Tok::Upper(v) => Ok(GeneralTerm::Var(v)),
            Tok::Number(n) => Ok(GeneralTerm::Number(n)),
            Tok::Distinct(d) => Ok(GeneralTerm::Distinct(d)),
            _ => {
                self.pos -= 1;
                self.error("an annotation term")
            }
        }
    }
}

/// Contents of a single-quoted token with escapes resolved.
pub(crate) fn unquote(q: &str) -> String {
    let inner = &q[1..q.len() - 1];
    let mut out = String::new();
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(n) = chars.next() {
                out.push(n);
            }
        } else {
            out.push(c);
        }
    }
    out
}
