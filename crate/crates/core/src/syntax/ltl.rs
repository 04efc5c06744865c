use crate::error::{ParseError, ParseErrorKind};
use crate::translate::Ltl;

use super::lexer::{Cursor, Tok};

const UNARY: [&str; 3] = ["X", "F", "G"];
const BINARY: [&str; 4] = ["U", "W", "M", "R"];

/// LTL text: `X F G` prefix, `U W M R` infix (right associative, binding
/// tighter than `&`), `!`, `&`, `|`, `->`, parentheses.
pub fn parse_ltl(text: &str) -> Result<Ltl, ParseError> {
    let mut cur = Cursor::new(text)?;
    let f = implication(&mut cur)?;
    cur.finish()?;
    Ok(f)
}

fn implication(cur: &mut Cursor) -> Result<Ltl, ParseError> {
    let lhs = disjunction(cur)?;
    if cur.eat(&Tok::Arrow) {
        let rhs = implication(cur)?;
        return Ok(Ltl::Or(Box::new(Ltl::Not(Box::new(lhs))), Box::new(rhs)));
    }
    Ok(lhs)
}

fn disjunction(cur: &mut Cursor) -> Result<Ltl, ParseError> {
    let mut lhs = conjunction(cur)?;
    while cur.eat(&Tok::Pipe) {
        lhs = Ltl::Or(Box::new(lhs), Box::new(conjunction(cur)?));
    }
    Ok(lhs)
}

fn conjunction(cur: &mut Cursor) -> Result<Ltl, ParseError> {
    let mut lhs = binary(cur)?;
    while cur.eat(&Tok::Amp) {
        lhs = Ltl::And(Box::new(lhs), Box::new(binary(cur)?));
    }
    Ok(lhs)
}

fn binary(cur: &mut Cursor) -> Result<Ltl, ParseError> {
    let lhs = unary(cur)?;
    let op = match cur.peek() {
        Tok::Ident(k) if BINARY.contains(&k.as_str()) => k.clone(),
        _ => return Ok(lhs),
    };
    cur.bump();
    let (l, r) = (Box::new(lhs), Box::new(binary(cur)?));
    Ok(match op.as_str() {
        "U" => Ltl::Until(l, r),
        "W" => Ltl::WeakUntil(l, r),
        "M" => Ltl::StrongRelease(l, r),
        _ => Ltl::Release(l, r),
    })
}

fn unary(cur: &mut Cursor) -> Result<Ltl, ParseError> {
    let span = cur.span();
    match cur.peek().clone() {
        Tok::Bang => {
            cur.bump();
            Ok(Ltl::Not(Box::new(unary(cur)?)))
        }
        Tok::LParen => {
            cur.bump();
            let f = implication(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(f)
        }
        Tok::Ident(k) if UNARY.contains(&k.as_str()) => {
            cur.bump();
            let body = Box::new(unary(cur)?);
            Ok(match k.as_str() {
                "X" => Ltl::Next(body),
                "F" => Ltl::Finally(body),
                _ => Ltl::Globally(body),
            })
        }
        Tok::Ident(k) if BINARY.contains(&k.as_str()) => Err(cur.unexpected("expected an operand")),
        Tok::Ident(a) => {
            cur.bump();
            if a.starts_with('_') {
                return Err(ParseError { kind: ParseErrorKind::UnknownSymbol(a), span });
            }
            Ok(Ltl::Atom(a))
        }
        _ => Err(cur.unexpected("expected an LTL formula")),
    }
}
