use crate::alphabet::{is_identifier, Alphabet};
use crate::error::{ParseError, ParseErrorKind, SourceSpan};
use crate::formula::{FreshNames, Formula};
use crate::term::TimeTerm;

use super::lexer::{Cursor, Tok};

/// What identifiers a parse accepts.
#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Atoms must belong to this alphabet when set.
    pub alphabet: Option<Alphabet>,
    /// Free variables allowed in terms; any name is accepted when unset.
    pub free_vars: Option<Vec<String>>,
}

impl ParseOptions {
    pub fn with_alphabet(alphabet: &Alphabet) -> ParseOptions {
        ParseOptions { alphabet: Some(alphabet.clone()), free_vars: Some(Vec::new()) }
    }
}

pub(crate) const KEYWORDS: [&str; 2] = ["exists", "forall"];

/// Parses formula text. With an alphabet, atoms are checked against it and
/// no free variables are accepted.
pub fn parse_formula(text: &str, alphabet: Option<&Alphabet>) -> Result<Formula, ParseError> {
    let opts = match alphabet {
        Some(a) => ParseOptions::with_alphabet(a),
        None => ParseOptions::default(),
    };
    parse_formula_with(text, &opts)
}

pub fn parse_formula_with(text: &str, opts: &ParseOptions) -> Result<Formula, ParseError> {
    let mut p = FormulaParser { cur: Cursor::new(text)?, opts, bound: Vec::new() };
    let f = p.formula()?;
    p.cur.finish()?;
    Ok(f)
}

/// Parses a time term; variables must be declared when `vars` is given.
pub fn parse_term(text: &str, vars: Option<&[String]>) -> Result<TimeTerm, ParseError> {
    let opts = ParseOptions { alphabet: None, free_vars: vars.map(|v| v.to_vec()) };
    let mut p = FormulaParser { cur: Cursor::new(text)?, opts: &opts, bound: Vec::new() };
    let t = p.term()?;
    p.cur.finish()?;
    Ok(t)
}

struct FormulaParser<'a> {
    cur: Cursor,
    opts: &'a ParseOptions,
    bound: Vec<String>,
}

impl FormulaParser<'_> {
    fn formula(&mut self) -> Result<Formula, ParseError> {
        if self.at_quantifier() {
            return self.quantifier();
        }
        let lhs = self.disjunction()?;
        if self.cur.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn at_quantifier(&self) -> bool {
        matches!(self.cur.peek(), Tok::Ident(k) if KEYWORDS.contains(&k.as_str()))
    }

    fn quantifier(&mut self) -> Result<Formula, ParseError> {
        let kw = match self.cur.bump().tok {
            Tok::Ident(k) => k,
            _ => unreachable!("checked by at_quantifier"),
        };
        let span = self.cur.span();
        let var = match self.cur.bump().tok {
            Tok::Ident(v) if !KEYWORDS.contains(&v.as_str()) => v,
            other => return Err(ParseError::syntax(span, format!("expected a variable, found {}", other.describe()))),
        };
        self.cur.expect(&Tok::Dot)?;
        self.bound.push(var.clone());
        let body = self.formula();
        self.bound.pop();
        let body = body?;
        Ok(if kw == "exists" { Formula::exists(var, body) } else { Formula::forall(var, body) })
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.cur.eat(&Tok::Pipe) {
            let rhs = self.conjunction()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.cur.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.at_quantifier() {
            return self.quantifier();
        }
        match self.cur.peek() {
            Tok::Bang => {
                self.cur.bump();
                Ok(self.unary()?.not())
            }
            Tok::LBracket => {
                self.cur.bump();
                if self.cur.eat(&Tok::RBracket) {
                    let body = self.unary()?;
                    return Ok(self.unbounded(body, true));
                }
                let t = self.term()?;
                self.cur.expect(&Tok::RBracket)?;
                Ok(Formula::always(t, self.unary()?))
            }
            Tok::Lt => {
                self.cur.bump();
                if self.cur.eat(&Tok::Gt) {
                    let body = self.unary()?;
                    return Ok(self.unbounded(body, false));
                }
                let t = self.term()?;
                self.cur.expect(&Tok::Gt)?;
                Ok(Formula::sometime(t, self.unary()?))
            }
            _ => self.postfix(),
        }
    }

    /// Expands `[] φ` / `<> φ` with a variable fresh for the body and for
    /// every enclosing binder.
    fn unbounded(&mut self, body: Formula, is_box: bool) -> Formula {
        let mut names = FreshNames::for_formula(&body);
        for b in &self.bound {
            names.reserve(b);
        }
        let x = names.next_name();
        let shifted = body.clone().shift(TimeTerm::var(x.clone()));
        if is_box {
            body.and(Formula::forall(x, shifted))
        } else {
            body.or(Formula::exists(x, shifted))
        }
    }

    fn postfix(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.primary()?;
        while self.cur.eat(&Tok::At) {
            let t = self.term()?;
            f = Formula::Shift(Box::new(f), t);
        }
        Ok(f)
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.cur.peek().clone() {
            Tok::LParen => {
                self.cur.bump();
                let f = self.formula()?;
                self.cur.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => {
                let span = self.cur.span();
                self.cur.bump();
                self.check_atom(&name, span)?;
                Ok(Formula::Atom(name))
            }
            _ => Err(self.cur.unexpected("expected a formula")),
        }
    }

    fn check_atom(&self, name: &str, span: SourceSpan) -> Result<(), ParseError> {
        if name.starts_with('_') {
            return Err(ParseError { kind: ParseErrorKind::UnknownSymbol(name.to_string()), span });
        }
        if let Some(alpha) = &self.opts.alphabet {
            if !alpha.contains(name) {
                return Err(ParseError { kind: ParseErrorKind::UnknownSymbol(name.to_string()), span });
            }
        }
        Ok(())
    }

    fn term(&mut self) -> Result<TimeTerm, ParseError> {
        let mut t = self.factor()?;
        while self.cur.eat(&Tok::Plus) {
            let rhs = self.factor()?;
            t = TimeTerm::sum(t, rhs);
        }
        Ok(t)
    }

    fn factor(&mut self) -> Result<TimeTerm, ParseError> {
        let span = self.cur.span();
        match self.cur.peek().clone() {
            Tok::Int(n) => {
                self.cur.bump();
                if n == 0 {
                    return Err(ParseError { kind: ParseErrorKind::ZeroConstant, span });
                }
                if self.cur.eat(&Tok::Star) {
                    let inner = self.term_atom()?;
                    return Ok(TimeTerm::repeat(n, &inner));
                }
                Ok(TimeTerm::Const(n))
            }
            _ => self.term_atom(),
        }
    }

    fn term_atom(&mut self) -> Result<TimeTerm, ParseError> {
        let span = self.cur.span();
        match self.cur.peek().clone() {
            Tok::Int(0) => Err(ParseError { kind: ParseErrorKind::ZeroConstant, span }),
            Tok::Int(n) => {
                self.cur.bump();
                Ok(TimeTerm::Const(n))
            }
            Tok::Ident(v) if !KEYWORDS.contains(&v.as_str()) => {
                self.cur.bump();
                self.check_var(&v, span)?;
                Ok(TimeTerm::Var(v))
            }
            Tok::LParen => {
                self.cur.bump();
                let t = self.term()?;
                self.cur.expect(&Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.cur.unexpected("expected a time term")),
        }
    }

    fn check_var(&self, v: &str, span: SourceSpan) -> Result<(), ParseError> {
        if self.bound.iter().any(|b| b == v) {
            return Ok(());
        }
        let declared = match &self.opts.free_vars {
            Some(vars) => vars.iter().any(|f| f == v),
            None => !v.starts_with('_') && is_identifier(v),
        };
        if declared {
            Ok(())
        } else {
            Err(ParseError { kind: ParseErrorKind::UnknownSymbol(v.to_string()), span })
        }
    }
}
