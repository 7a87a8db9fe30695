use super::TptpError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Lower(String),
    Upper(String),
    Dollar(String),
    Quoted(String),
    Distinct(String),
    Number(String),
    /// Punctuation and operators.
    Sym(&'static str),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) | Tok::Dollar(s) | Tok::Quoted(s) | Tok::Number(s) | Tok::Distinct(s) => {
                format!("`{s}`")
            }
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_owned(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub(crate) tok: Tok,
    pub(crate) line: usize,
    pub(crate) col: usize,
}

/// Operators, longest first.
const SYMBOLS: &[&str] = &[
    "<=>", "<~>", "@@+", "@@-", "=>", "<=", "~|", "~&", "!=", "!>", "?*", "!!", "??", "@+", "@-", "@=", "(", ")",
    "[", "]", "{", "}", ",", ".", ":", "|", "&", "~", "=", "!", "?", "^", "@", ">", "*", "+", "<",
];

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, TptpError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    macro_rules! advance {
        ($n:expr) => {
            for _ in 0..$n {
                if chars[i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
        };
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance!(1);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                advance!(1);
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            let (l0, c0) = (line, col);
            advance!(2);
            loop {
                if i + 1 >= chars.len() {
                    return Err(TptpError::Syntax {
                        line: l0,
                        col: c0,
                        expected: "end of block comment".to_owned(),
                    });
                }
                if chars[i] == '*' && chars[i + 1] == '/' {
                    advance!(2);
                    break;
                }
                advance!(1);
            }
            continue;
        }
        let (tl, tc) = (line, col);
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '$' {
            let mut j = i;
            while j < chars.len() && chars[j] == '$' {
                j += 1;
            }
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[start..j].iter().collect();
            advance!(j - start);
            if c == '$' {
                Tok::Dollar(word)
            } else if c.is_ascii_uppercase() {
                Tok::Upper(word)
            } else {
                Tok::Lower(word)
            }
        } else if c == '\'' || c == '"' {
            let mut j = i + 1;
            loop {
                match chars.get(j) {
                    None | Some('\n') => {
                        return Err(TptpError::Syntax {
                            line: tl,
                            col: tc,
                            expected: format!("closing {c}"),
                        })
                    }
                    Some('\\') => j += 2,
                    Some(&ch) if ch == c => {
                        j += 1;
                        break;
                    }
                    Some(_) => j += 1,
                }
            }
            let text: String = chars[start..j].iter().collect();
            advance!(j - start);
            if c == '\'' {
                Tok::Quoted(text)
            } else {
                Tok::Distinct(text)
            }
        } else if c.is_ascii_digit()
            || ((c == '-' || c == '+') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            let mut j = i + 1;
            while j < chars.len() {
                let d = chars[j];
                let exp_sign = (d == '-' || d == '+') && matches!(chars[j - 1], 'e' | 'E');
                if d.is_ascii_digit() || d == '.' || d == '/' || d == 'e' || d == 'E' || exp_sign {
                    j += 1;
                } else {
                    break;
                }
            }
            let text: String = chars[start..j].iter().collect();
            advance!(j - start);
            Tok::Number(text)
        } else {
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    advance!(s.chars().count());
                    Tok::Sym(s)
                }
                None => {
                    return Err(TptpError::Syntax {
                        line: tl,
                        col: tc,
                        expected: format!("a token, found `{c}`"),
                    })
                }
            }
        };
        out.push(Token {
            tok,
            line: tl,
            col: tc,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators_and_words() {
        let toks: Vec<Tok> = tokenize("p(X) <=> ~q & $true % c\n'a b' \"d\" -12")
            .unwrap()
            .into_iter()
            .map(|t| t.tok)
            .collect();
        assert_eq!(
            toks,
            vec![
                Tok::Lower("p".into()),
                Tok::Sym("("),
                Tok::Upper("X".into()),
                Tok::Sym(")"),
                Tok::Sym("<=>"),
                Tok::Sym("~"),
                Tok::Lower("q".into()),
                Tok::Sym("&"),
                Tok::Dollar("$true".into()),
                Tok::Quoted("'a b'".into()),
                Tok::Distinct("\"d\"".into()),
                Tok::Number("-12".into()),
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn positions_are_tracked() {
        let toks = tokenize("a\n  /* x\n */ b").unwrap();
        assert_eq!((toks[1].line, toks[1].col), (3, 5));
    }
}
