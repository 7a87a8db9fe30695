//! TPTP problem syntax: THF, TFF, FOF and CNF.
//!
//! Problems parse into one dialect-neutral AST ([`ast`]), print back with
//! [`printer`], and convert to and from kernel terms with [`elab`]. The
//! supported grammar is the core of the current TPTP syntax (v9): the four
//! dialects, `include` directives, annotations, and TH1 type quantifiers.

pub mod ast;
pub mod elab;
mod lexer;
mod parser;
pub mod printer;
pub mod szs;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use ast::{AnnotatedFormula, BinOp, Dialect, Expr, GeneralTerm, Include, Item, Quantifier, Role, Statement, TypedVar};
pub use elab::{from_kernel, ElabError, Elaborated, Elaborator};
pub use szs::{find_szs, parse_szs, SzsStatus};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TptpError {
    #[error("syntax error at {line}:{col}: expected {expected}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("include file `{}` not found", .0.display())]
    IncludeNotFound(PathBuf),
    #[error("cannot read `{}`: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("in formula `{formula}`: {error}")]
    Elaboration { formula: String, error: ElabError },
    #[error("not expressible in {dialect}: {reason}")]
    DialectMismatch { dialect: Dialect, reason: String },
}

/// Where `include` directives are looked up: first relative to the
/// including file, then in each directory of `dirs` in order.
#[derive(Clone, Debug, Default)]
pub struct IncludeConfig {
    pub dirs: Vec<PathBuf>,
}

impl IncludeConfig {
    pub fn new(dirs: Vec<PathBuf>) -> Self {
        IncludeConfig { dirs }
    }

    fn resolve(&self, base: Option<&Path>, file: &str) -> Option<PathBuf> {
        let candidates = base
            .into_iter()
            .map(Path::to_path_buf)
            .chain(self.dirs.iter().cloned());
        for dir in candidates {
            let p = dir.join(file);
            if p.is_file() {
                return Some(p);
            }
        }
        let p = PathBuf::from(file);
        (base.is_none() && p.is_file()).then_some(p)
    }
}

const MAX_INCLUDE_DEPTH: usize = 32;

/// Parses a problem, resolving includes against `config` only.
pub fn parse(input: &str) -> Result<Vec<AnnotatedFormula>, TptpError> {
    parse_with(input, &IncludeConfig::default(), None)
}

/// Parses a problem whose includes resolve relative to `base_dir` and then
/// the configured directories.
pub fn parse_with(
    input: &str,
    config: &IncludeConfig,
    base_dir: Option<&Path>,
) -> Result<Vec<AnnotatedFormula>, TptpError> {
    let mut out = Vec::new();
    expand(input, config, base_dir, None, 0, &mut out)?;
    Ok(out)
}

pub fn parse_file(path: &Path, config: &IncludeConfig) -> Result<Vec<AnnotatedFormula>, TptpError> {
    let text = read(path)?;
    parse_with(&text, config, path.parent())
}

/// Parses without resolving includes.
pub fn parse_items(input: &str) -> Result<Vec<Item>, TptpError> {
    parser::parse_items(input)
}

/// Parses a bare formula, term or type in `dialect` syntax.
pub fn parse_expr(input: &str, dialect: Dialect) -> Result<Expr, TptpError> {
    parser::parse_expr(input, dialect)
}

fn read(path: &Path) -> Result<String, TptpError> {
    std::fs::read_to_string(path).map_err(|e| TptpError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn expand(
    input: &str,
    config: &IncludeConfig,
    base: Option<&Path>,
    selection: Option<&[String]>,
    depth: usize,
    out: &mut Vec<AnnotatedFormula>,
) -> Result<(), TptpError> {
    for item in parser::parse_items(input)? {
        match item {
            Item::Formula(f) => {
                if selection.is_none_or(|names| names.contains(&f.name)) {
                    out.push(f);
                }
            }
            Item::Include(inc) => {
                let path = config
                    .resolve(base, &inc.path)
                    .ok_or_else(|| TptpError::IncludeNotFound(PathBuf::from(&inc.path)))?;
                if depth >= MAX_INCLUDE_DEPTH {
                    return Err(TptpError::Io {
                        path,
                        message: "includes nested too deeply".to_owned(),
                    });
                }
                let text = read(&path)?;
                expand(
                    &text,
                    config,
                    path.parent(),
                    inc.selection.as_deref(),
                    depth + 1,
                    out,
                )?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnf_clause() {
        let fs = parse("cnf(c1, axiom, (p(X) | ~q(X))).").unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].name, "c1");
        assert_eq!(fs[0].role, Role::Axiom);
        assert_eq!(fs[0].dialect, Dialect::Cnf);
        let printed = printer::annotated(&fs[0]);
        assert_eq!(printed, "cnf(c1, axiom, (p(X) | ~ q(X))).");
        assert_eq!(parse(&printed).unwrap(), fs);
    }

    #[test]
    fn empty_input() {
        assert!(parse("").unwrap().is_empty());
        assert!(parse("% only a comment\n").unwrap().is_empty());
    }

    #[test]
    fn thf_declaration_and_axiom() {
        let fs = parse("thf(ty, type, p: $i > $o). thf(a1, axiom, ! [X:$i]: (p @ X)).").unwrap();
        assert_eq!(fs.len(), 2);
        assert!(matches!(fs[0].statement, Statement::Typing { .. }));
        match &fs[1].statement {
            Statement::Logic(Expr::Quantified(Quantifier::Forall, vars, _)) => assert_eq!(vars.len(), 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn quoted_atoms_survive_printing() {
        let fs = parse("fof(f, axiom, p('weird name')).").unwrap();
        let printed = printer::annotated(&fs[0]);
        assert!(printed.contains("'weird name'"));
        assert_eq!(parse(&printed).unwrap(), fs);
    }

    #[test]
    fn syntax_error_position() {
        match parse("fof(a, axiom, p(X).\n") {
            Err(TptpError::Syntax { line, col, .. }) => assert_eq!((line, col), (1, 19)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("fof(a, bogus, p)."), Err(TptpError::Syntax { .. })));
    }

    #[test]
    fn missing_include() {
        assert!(matches!(
            parse("include('Axioms/NOPE000-0.ax')."),
            Err(TptpError::IncludeNotFound(_))
        ));
    }

    #[test]
    fn annotations_are_kept() {
        let src = "fof(f, plain, p, inference(res, [status(thm)], [a, b]), [useful:info]).";
        let fs = parse(src).unwrap();
        assert_eq!(fs[0].annotations.len(), 2);
        let printed = printer::annotated(&fs[0]);
        assert_eq!(parse(&printed).unwrap(), fs);
    }
}
