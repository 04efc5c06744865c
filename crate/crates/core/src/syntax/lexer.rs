use crate::error::{ParseError, ParseErrorKind, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    At,
    Bang,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Amp,
    Pipe,
    Arrow,
    LParen,
    RParen,
    Dot,
    Plus,
    Star,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::At => "@",
            Tok::Bang => "!",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Dot => ".",
            Tok::Plus => "+",
            Tok::Star => "*",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = |tok: Tok| Token { tok, span: SourceSpan::new(start, start + 1) };
        match c {
            b'@' => out.push(single(Tok::At)),
            b'!' => out.push(single(Tok::Bang)),
            b'[' => out.push(single(Tok::LBracket)),
            b']' => out.push(single(Tok::RBracket)),
            b'<' => out.push(single(Tok::Lt)),
            b'>' => out.push(single(Tok::Gt)),
            b'&' => out.push(single(Tok::Amp)),
            b'|' => out.push(single(Tok::Pipe)),
            b'(' => out.push(single(Tok::LParen)),
            b')' => out.push(single(Tok::RParen)),
            b'.' => out.push(single(Tok::Dot)),
            b'+' => out.push(single(Tok::Plus)),
            b'*' => out.push(single(Tok::Star)),
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push(Token { tok: Tok::Arrow, span: SourceSpan::new(i, i + 2) });
                i += 1;
            }
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..=i];
                let value = digits.parse::<u64>().map_err(|_| {
                    ParseError::syntax(SourceSpan::new(start, i + 1), "integer literal too large")
                })?;
                out.push(Token { tok: Tok::Int(value), span: SourceSpan::new(start, i + 1) });
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(text[start..=i].to_string()), span: SourceSpan::new(start, i + 1) });
            }
            _ => {
                let width = text[start..].chars().next().map_or(1, char::len_utf8);
                return Err(ParseError {
                    kind: ParseErrorKind::Syntax(format!("unexpected character {:?}", &text[start..start + width])),
                    span: SourceSpan::new(start, start + width),
                });
            }
        }
        i += 1;
    }
    out.push(Token { tok: Tok::Eof, span: SourceSpan::new(text.len(), text.len()) });
    Ok(out)
}

/// Token cursor shared by the formula, LTL and TCL parsers.
pub struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Cursor, ParseError> {
        Ok(Cursor { tokens: tokenize(text)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    pub fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span
    }

    pub fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<Token, ParseError> {
        if self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&format!("expected {}", tok.describe())))
        }
    }

    pub fn unexpected(&self, what: &str) -> ParseError {
        ParseError::syntax(self.span(), format!("{what}, found {}", self.peek().describe()))
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("expected end of input"))
        }
    }
}
