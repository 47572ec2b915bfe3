//! Line-oriented tokenizer shared by the domain, state and model formats.

use super::{ParseDiagnostic, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Sym(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    pub len: usize,
}

impl Token {
    pub fn ident(&self) -> Option<&str> {
        match &self.tok {
            Tok::Ident(s) => Some(s),
            Tok::Sym(_) => None,
        }
    }

    pub fn is_sym(&self, sym: &str) -> bool {
        matches!(self.tok, Tok::Sym(s) if s == sym)
    }

    pub fn text(&self) -> &str {
        match &self.tok {
            Tok::Ident(s) => s,
            Tok::Sym(s) => s,
        }
    }
}

const SYMBOLS: &[&str] = &["!=", "->", "(", ")", "{", "}", ",", ":", ";", "&", "!", "=", "?"];

fn ident_start(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Tokenizes one line; `#` starts a comment. Columns are 1-based.
pub fn lex_line(file: &str, line: usize, text: &str) -> Result<Vec<Token>, ParseDiagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if ident_start(c) {
            let start = i;
            while i < chars.len() {
                let d = chars[i];
                let dash = d == '-' && chars.get(i + 1).is_some_and(|n| *n != '>');
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' || dash {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line,
                col: start + 1,
                len: i - start,
            });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(sym) => {
                out.push(Token { tok: Tok::Sym(sym), line, col: i + 1, len: sym.len() });
                i += sym.len();
            }
            None => {
                return Err(ParseDiagnostic::error(
                    SourceSpan::new(file, line, i + 1, 1),
                    format!("unexpected character `{c}`"),
                ))
            }
        }
    }
    Ok(out)
}

/// A cursor over one line's tokens.
pub struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    file: &'a str,
    line: usize,
    line_len: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(file: &'a str, line: usize, line_len: usize, toks: &'a [Token]) -> Self {
        Cursor { toks, pos: 0, file, line, line_len }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    pub fn peek_at(&self, k: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + k)
    }

    pub fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn reset(&mut self, pos: usize) {
        self.pos = pos;
    }

    pub fn span_of(&self, t: &Token) -> SourceSpan {
        SourceSpan::new(self.file, t.line, t.col, t.len)
    }

    /// Span of the current token, or just past the end of the line.
    pub fn here(&self) -> SourceSpan {
        match self.peek() {
            Some(t) => self.span_of(t),
            None => SourceSpan::new(self.file, self.line, self.line_len + 1, 1),
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic::error(self.here(), message)
    }

    pub fn eat_sym(&mut self, sym: &str) -> bool {
        if self.peek().is_some_and(|t| t.is_sym(sym)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.peek().and_then(Token::ident) == Some(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, sym: &str) -> Result<&'a Token, ParseDiagnostic> {
        match self.peek() {
            Some(t) if t.is_sym(sym) => {
                self.pos += 1;
                Ok(t)
            }
            Some(t) => Err(self.error(format!("expected `{sym}`, found `{}`", t.text()))),
            None => Err(self.error(format!("expected `{sym}` before end of line"))),
        }
    }

    pub fn expect_ident(&mut self, what: &str) -> Result<&'a Token, ParseDiagnostic> {
        match self.peek() {
            Some(t) if t.ident().is_some() => {
                self.pos += 1;
                Ok(t)
            }
            Some(t) => Err(self.error(format!("expected {what}, found `{}`", t.text()))),
            None => Err(self.error(format!("expected {what} before end of line"))),
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<&'a Token, ParseDiagnostic> {
        match self.peek() {
            Some(t) if t.ident() == Some(kw) => {
                self.pos += 1;
                Ok(t)
            }
            Some(t) => Err(self.error(format!("expected `{kw}`, found `{}`", t.text()))),
            None => Err(self.error(format!("expected `{kw}` before end of line"))),
        }
    }

    pub fn expect_end(&self) -> Result<(), ParseDiagnostic> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error(format!("unexpected `{}` at end of declaration", t.text()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_columns() {
        let toks = lex_line("f", 3, "pre move(x,y) clear(x) & x != y  # note").unwrap();
        let texts: Vec<_> = toks.iter().map(Token::text).collect();
        assert_eq!(
            texts,
            ["pre", "move", "(", "x", ",", "y", ")", "clear", "(", "x", ")", "&", "x", "!=", "y"]
        );
        assert_eq!(toks[1].col, 5);
        assert_eq!(toks[13].len, 2);
    }

    #[test]
    fn dashes_inside_names_but_not_arrows() {
        let toks = lex_line("f", 1, "act a s0->s1 seq-diff").unwrap();
        let texts: Vec<_> = toks.iter().map(Token::text).collect();
        assert_eq!(texts, ["act", "a", "s0", "->", "s1", "seq-diff"]);
    }

    #[test]
    fn bad_character_spanned() {
        let err = lex_line("f", 2, "fluent on(x,y) $").unwrap_err();
        assert_eq!((err.span.line, err.span.col), (2, 16));
    }
}
