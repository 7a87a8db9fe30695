//! Random TPTP syntax trees in the canonical shape the parser produces.

use holboard_core::tptp::{AnnotatedFormula, BinOp, Dialect, Expr, GeneralTerm, Quantifier, Role, Statement, TypedVar};
use rand::seq::SliceRandom;
use rand::Rng;

const FUNCTORS: &[&str] = &["f", "g", "h", "p", "q", "r", "succ", "'odd one'", "$true", "$false"];
const VARS: &[&str] = &["X", "Y", "Z", "X1", "Y_2"];
const CONNECTIVES: &[BinOp] = &[
    BinOp::Or,
    BinOp::And,
    BinOp::Implies,
    BinOp::RevImplies,
    BinOp::Iff,
    BinOp::Xor,
    BinOp::Nor,
    BinOp::Nand,
];
const ROLES: &[Role] = &[
    Role::Axiom,
    Role::Hypothesis,
    Role::Definition,
    Role::Lemma,
    Role::Conjecture,
    Role::NegatedConjecture,
    Role::Plain,
];

pub struct TptpGen<R> {
    rng: R,
    counter: usize,
}

impl<R: Rng> TptpGen<R> {
    pub fn new(rng: R) -> Self {
        TptpGen { rng, counter: 0 }
    }

    fn pick<T: Clone>(&mut self, xs: &[T]) -> T {
        xs.choose(&mut self.rng).expect("non-empty").clone()
    }

    /// One annotated formula of `dialect`.
    pub fn annotated(&mut self, dialect: Dialect) -> AnnotatedFormula {
        self.counter += 1;
        let name = format!("ax{}", self.counter);
        let typed = dialect.is_typed();
        let (role, statement) = if typed && self.rng.gen_bool(0.2) {
            let symbol = self.pick(&["p", "f", "c", "'t y'"]).to_owned();
            (Role::Type, Statement::Typing { symbol, ty: self.ty(dialect, 2) })
        } else {
            let e = match dialect {
                Dialect::Cnf => self.clause(),
                _ => self.formula(dialect, 3),
            };
            (self.pick(ROLES), Statement::Logic(e))
        };
        let annotations = match self.rng.gen_range(0..4) {
            0 => vec![self.general(2)],
            1 => vec![self.general(2), self.general(2)],
            _ => Vec::new(),
        };
        AnnotatedFormula {
            dialect,
            name,
            role,
            statement,
            annotations,
        }
    }

    fn clause(&mut self) -> Expr {
        let n = self.rng.gen_range(1..=4);
        let mut e = self.literal();
        for _ in 1..n {
            let l = self.literal();
            e = Expr::binary(BinOp::Or, e, l);
        }
        e
    }

    fn literal(&mut self) -> Expr {
        match self.rng.gen_range(0..4) {
            0 => Expr::not(self.fo_atom()),
            1 => {
                let op = if self.rng.gen_bool(0.5) { BinOp::Eq } else { BinOp::Neq };
                Expr::binary(op, self.fo_term(2), self.fo_term(2))
            }
            _ => self.fo_atom(),
        }
    }

    fn fo_atom(&mut self) -> Expr {
        let head = Expr::atom(self.pick(FUNCTORS));
        let n = self.rng.gen_range(0..3);
        let args = (0..n).map(|_| self.fo_term(2)).collect();
        Expr::apply(head, args)
    }

    fn fo_term(&mut self, depth: u32) -> Expr {
        match self.rng.gen_range(0..6) {
            0 | 1 => Expr::var(self.pick(VARS)),
            2 => Expr::Number(self.rng.gen_range(0..100).to_string()),
            3 if depth > 0 => {
                let head = Expr::atom(self.pick(&["f", "g", "h"]));
                let n = self.rng.gen_range(1..3);
                let args = (0..n).map(|_| self.fo_term(depth - 1)).collect();
                Expr::Apply(Box::new(head), args)
            }
            4 => Expr::Distinct("\"str\"".to_owned()),
            _ => Expr::atom(self.pick(&["a", "b", "c"])),
        }
    }

    fn ty(&mut self, dialect: Dialect, depth: u32) -> Expr {
        let base = |g: &mut Self| Expr::atom(g.pick(&["$i", "$o", "nat", "$tType"][..3]));
        if depth == 0 {
            return base(self);
        }
        match self.rng.gen_range(0..4) {
            0 => base(self),
            1 if dialect == Dialect::Tff => {
                let dom = Expr::binary(BinOp::Product, base(self), base(self));
                Expr::binary(BinOp::Arrow, dom, base(self))
            }
            2 if dialect == Dialect::Thf => Expr::quantified(
                Quantifier::TypeForall,
                vec![TypedVar {
                    name: "A".to_owned(),
                    ty: Some(Expr::atom("$tType")),
                }],
                Expr::binary(BinOp::Arrow, Expr::var("A"), base(self)),
            ),
            _ => {
                let dom = if dialect == Dialect::Thf { self.ty(dialect, depth - 1) } else { base(self) };
                Expr::binary(BinOp::Arrow, dom, self.ty(dialect, depth - 1))
            }
        }
    }

    fn vars(&mut self, dialect: Dialect) -> Vec<TypedVar> {
        let n = self.rng.gen_range(1..=2);
        (0..n)
            .map(|_| TypedVar {
                name: self.pick(VARS).to_owned(),
                ty: match dialect {
                    Dialect::Fof | Dialect::Cnf => None,
                    _ if self.rng.gen_bool(0.2) => None,
                    _ => Some(self.ty(dialect, 1)),
                },
            })
            .collect()
    }

    fn formula(&mut self, dialect: Dialect, depth: u32) -> Expr {
        if depth == 0 {
            return self.atomic(dialect);
        }
        match self.rng.gen_range(0..8) {
            0 => self.atomic(dialect),
            1 => Expr::not(self.formula(dialect, depth - 1)),
            2 | 3 => {
                let op = self.pick(CONNECTIVES);
                Expr::binary(op, self.formula(dialect, depth - 1), self.formula(dialect, depth - 1))
            }
            4 => {
                let q = if dialect == Dialect::Thf && self.rng.gen_bool(0.3) {
                    Quantifier::Lambda
                } else if self.rng.gen_bool(0.5) {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                let vars = self.vars(dialect);
                Expr::quantified(q, vars, self.formula(dialect, depth - 1))
            }
            5 => {
                let op = if self.rng.gen_bool(0.5) { BinOp::Eq } else { BinOp::Neq };
                if dialect == Dialect::Thf {
                    Expr::binary(op, self.formula(dialect, depth - 1), self.formula(dialect, depth - 1))
                } else {
                    Expr::binary(op, self.fo_term(2), self.fo_term(2))
                }
            }
            6 if dialect == Dialect::Thf => {
                let head = self.formula(dialect, depth - 1);
                let n = self.rng.gen_range(1..=3);
                let args = (0..n).map(|_| self.formula(dialect, depth - 1)).collect();
                Expr::Apply(Box::new(head), args)
            }
            _ => self.atomic(dialect),
        }
    }

    fn atomic(&mut self, dialect: Dialect) -> Expr {
        if dialect != Dialect::Thf {
            return self.fo_atom();
        }
        match self.rng.gen_range(0..6) {
            0 => Expr::var(self.pick(VARS)),
            1 => Expr::atom(self.pick(&["&", "|", "~", "=", "!!", "??", "=>"])),
            2 => {
                let head = Expr::atom(self.pick(FUNCTORS));
                let n = self.rng.gen_range(1..=3);
                let args = (0..n).map(|_| self.atomic(dialect)).collect();
                Expr::Apply(Box::new(head), args)
            }
            3 => Expr::Number(self.rng.gen_range(0..10).to_string()),
            _ => Expr::atom(self.pick(FUNCTORS)),
        }
    }

    fn general(&mut self, depth: u32) -> GeneralTerm {
        match self.rng.gen_range(0..7) {
            0 if depth > 0 => {
                let n = self.rng.gen_range(0..3);
                GeneralTerm::List((0..n).map(|_| self.general(depth - 1)).collect())
            }
            1 if depth > 0 => {
                let n = self.rng.gen_range(1..3);
                GeneralTerm::Word {
                    name: self.pick(&["inference", "file", "status", "introduced"]).to_owned(),
                    args: (0..n).map(|_| self.general(depth - 1)).collect(),
                }
            }
            2 if depth > 0 => GeneralTerm::Colon(
                Box::new(GeneralTerm::Word {
                    name: "info".to_owned(),
                    args: Vec::new(),
                }),
                Box::new(self.general(depth - 1)),
            ),
            3 => GeneralTerm::Var(self.pick(VARS).to_owned()),
            4 => GeneralTerm::Number(self.rng.gen_range(0..1000).to_string()),
            5 => {
                let d = self.pick(&[Dialect::Fof, Dialect::Thf, Dialect::Cnf]);
                let e = match d {
                    Dialect::Cnf => self.clause(),
                    _ => self.formula(d, 1),
                };
                GeneralTerm::Formula(d, e)
            }
            _ => GeneralTerm::Word {
                name: self.pick(&["thm", "esa", "unknown", "'quoted word'"]).to_owned(),
                args: Vec::new(),
            },
        }
    }
}
