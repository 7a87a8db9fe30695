use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dialect {
    Thf,
    Tff,
    Fof,
    Cnf,
}

impl Dialect {
    pub const ALL: [Dialect; 4] = [Dialect::Thf, Dialect::Tff, Dialect::Fof, Dialect::Cnf];

    pub fn keyword(self) -> &'static str {
        match self {
            Dialect::Thf => "thf",
            Dialect::Tff => "tff",
            Dialect::Fof => "fof",
            Dialect::Cnf => "cnf",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Dialect> {
        Dialect::ALL.into_iter().find(|d| d.keyword() == s)
    }

    pub fn is_typed(self) -> bool {
        matches!(self, Dialect::Thf | Dialect::Tff)
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Axiom,
    Hypothesis,
    Definition,
    Assumption,
    Lemma,
    Theorem,
    Corollary,
    Conjecture,
    NegatedConjecture,
    Plain,
    Type,
    Interpretation,
    FiDomain,
    FiFunctors,
    FiPredicates,
    Logic,
    Unknown,
}

impl Role {
    pub const ALL: [Role; 17] = [
        Role::Axiom,
        Role::Hypothesis,
        Role::Definition,
        Role::Assumption,
        Role::Lemma,
        Role::Theorem,
        Role::Corollary,
        Role::Conjecture,
        Role::NegatedConjecture,
        Role::Plain,
        Role::Type,
        Role::Interpretation,
        Role::FiDomain,
        Role::FiFunctors,
        Role::FiPredicates,
        Role::Logic,
        Role::Unknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Axiom => "axiom",
            Role::Hypothesis => "hypothesis",
            Role::Definition => "definition",
            Role::Assumption => "assumption",
            Role::Lemma => "lemma",
            Role::Theorem => "theorem",
            Role::Corollary => "corollary",
            Role::Conjecture => "conjecture",
            Role::NegatedConjecture => "negated_conjecture",
            Role::Plain => "plain",
            Role::Type => "type",
            Role::Interpretation => "interpretation",
            Role::FiDomain => "fi_domain",
            Role::FiFunctors => "fi_functors",
            Role::FiPredicates => "fi_predicates",
            Role::Logic => "logic",
            Role::Unknown => "unknown",
        }
    }

    /// Roles whose formulas are assumed true when proving a conjecture.
    pub fn is_assumption(self) -> bool {
        matches!(
            self,
            Role::Axiom
                | Role::Hypothesis
                | Role::Definition
                | Role::Assumption
                | Role::Lemma
                | Role::Theorem
                | Role::Corollary
                | Role::NegatedConjecture
                | Role::Plain
        )
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Role::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown role `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Or,
    And,
    Implies,
    RevImplies,
    Iff,
    Xor,
    Nor,
    Nand,
    Eq,
    Neq,
    /// `>` in types.
    Arrow,
    /// `*` in types.
    Product,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Or => "|",
            BinOp::And => "&",
            BinOp::Implies => "=>",
            BinOp::RevImplies => "<=",
            BinOp::Iff => "<=>",
            BinOp::Xor => "<~>",
            BinOp::Nor => "~|",
            BinOp::Nand => "~&",
            BinOp::Eq => "=",
            BinOp::Neq => "!=",
            BinOp::Arrow => ">",
            BinOp::Product => "*",
        }
    }

    pub fn is_connective(self) -> bool {
        !matches!(self, BinOp::Eq | BinOp::Neq | BinOp::Arrow | BinOp::Product)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
    Lambda,
    /// `!>`, quantification over types.
    TypeForall,
}

impl Quantifier {
    pub fn symbol(self) -> &'static str {
        match self {
            Quantifier::Forall => "!",
            Quantifier::Exists => "?",
            Quantifier::Lambda => "^",
            Quantifier::TypeForall => "!>",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypedVar {
    pub name: String,
    pub ty: Option<Expr>,
}

/// Formula, term and type syntax of all four dialects.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    /// Plain, quoted (`'a b'`, quotes kept), `$`-defined or `$$`-system
    /// word. Bare connectives such as `&` or `!!` in higher-order
    /// positions are atoms too.
    Atom(String),
    Number(String),
    /// `"..."`, quotes kept.
    Distinct(String),
    /// `f(a, b)` in first-order dialects, `f @ a @ b` in THF.
    Apply(Box<Expr>, Vec<Expr>),
    Not(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Quantified(Quantifier, Vec<TypedVar>, Box<Expr>),
}

impl Expr {
    pub fn atom(s: &str) -> Expr {
        Expr::Atom(s.to_owned())
    }

    pub fn var(s: &str) -> Expr {
        Expr::Var(s.to_owned())
    }

    pub fn apply(head: Expr, args: Vec<Expr>) -> Expr {
        if args.is_empty() {
            head
        } else {
            Expr::Apply(Box::new(head), args)
        }
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn quantified(q: Quantifier, vars: Vec<TypedVar>, body: Expr) -> Expr {
        Expr::Quantified(q, vars, Box::new(body))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Statement {
    Logic(Expr),
    /// `symbol : type` under role `type`.
    Typing { symbol: String, ty: Expr },
}

/// Annotation syntax (`source`, `useful_info`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GeneralTerm {
    Word { name: String, args: Vec<GeneralTerm> },
    Var(String),
    Number(String),
    Distinct(String),
    List(Vec<GeneralTerm>),
    Colon(Box<GeneralTerm>, Box<GeneralTerm>),
    Formula(Dialect, Expr),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AnnotatedFormula {
    pub dialect: Dialect,
    pub name: String,
    pub role: Role,
    pub statement: Statement,
    /// Source followed by optional useful info.
    pub annotations: Vec<GeneralTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Include {
    pub path: String,
    pub selection: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Formula(AnnotatedFormula),
    Include(Include),
}
