use crate::error::{ParseError, ParseErrorKind};
use crate::translate::{AllenKind, Tcl};

use super::lexer::{Cursor, Tok};

/// TCL text: Allen operators `A L B E D O` as left-associative infix
/// keywords binding tighter than `&`, plus `!`, `&`, `|`, parentheses.
pub fn parse_tcl(text: &str) -> Result<Tcl, ParseError> {
    let mut cur = Cursor::new(text)?;
    let f = disjunction(&mut cur)?;
    cur.finish()?;
    Ok(f)
}

fn disjunction(cur: &mut Cursor) -> Result<Tcl, ParseError> {
    let mut lhs = conjunction(cur)?;
    while cur.eat(&Tok::Pipe) {
        lhs = Tcl::Or(Box::new(lhs), Box::new(conjunction(cur)?));
    }
    Ok(lhs)
}

fn conjunction(cur: &mut Cursor) -> Result<Tcl, ParseError> {
    let mut lhs = allen(cur)?;
    while cur.eat(&Tok::Amp) {
        lhs = Tcl::And(Box::new(lhs), Box::new(allen(cur)?));
    }
    Ok(lhs)
}

fn kind_of(tok: &Tok) -> Option<AllenKind> {
    match tok {
        Tok::Ident(k) => AllenKind::from_letter(k),
        _ => None,
    }
}

fn allen(cur: &mut Cursor) -> Result<Tcl, ParseError> {
    let mut lhs = unary(cur)?;
    while let Some(kind) = kind_of(cur.peek()) {
        cur.bump();
        let rhs = unary(cur)?;
        lhs = Tcl::Allen(kind, Box::new(lhs), Box::new(rhs));
    }
    Ok(lhs)
}

fn unary(cur: &mut Cursor) -> Result<Tcl, ParseError> {
    let span = cur.span();
    match cur.peek().clone() {
        Tok::Bang => {
            cur.bump();
            Ok(Tcl::Not(Box::new(unary(cur)?)))
        }
        Tok::LParen => {
            cur.bump();
            let f = disjunction(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(f)
        }
        ref t if kind_of(t).is_some() => Err(cur.unexpected("expected an operand")),
        Tok::Ident(a) => {
            cur.bump();
            if a.starts_with('_') {
                return Err(ParseError { kind: ParseErrorKind::UnknownSymbol(a), span });
            }
            Ok(Tcl::Atom(a))
        }
        _ => Err(cur.unexpected("expected a TCL formula")),
    }
}
