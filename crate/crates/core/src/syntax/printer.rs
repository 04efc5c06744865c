use crate::formula::Formula;
use crate::term::TimeTerm;

// Binding strength, loosest first.
const OR: u8 = 1;
const AND: u8 = 2;
const PREFIX: u8 = 3;
const SHIFT: u8 = 4;

pub fn print_term(t: &TimeTerm) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_term(t: &TimeTerm, out: &mut String) {
    match t {
        TimeTerm::Const(c) => out.push_str(&c.to_string()),
        TimeTerm::Var(v) => out.push_str(v),
        TimeTerm::Sum(l, r) => {
            write_term(l, out);
            out.push_str(" + ");
            if matches!(**r, TimeTerm::Sum(..)) {
                out.push('(');
                write_term(r, out);
                out.push(')');
            } else {
                write_term(r, out);
            }
        }
    }
}

/// Minimal-parenthesis rendering that reparses to the same tree.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write(f, 0, true, &mut out);
    out
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Exists(..) | Formula::Forall(..) => 0,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Not(_) | Formula::Box(..) | Formula::Diamond(..) => PREFIX,
        Formula::Shift(..) => SHIFT,
        Formula::Atom(_) => SHIFT + 1,
    }
}

/// `min` is the weakest binding allowed without parentheses; `last` says
/// nothing follows, so a quantifier may extend to the right.
fn write(f: &Formula, min: u8, last: bool, out: &mut String) {
    let p = precedence(f);
    let quantifier_ok = p == 0 && last;
    if p < min && !quantifier_ok {
        out.push('(');
        write(f, 0, true, out);
        out.push(')');
        return;
    }
    match f {
        Formula::Atom(a) => out.push_str(a),
        Formula::Shift(body, t) => {
            write(body, SHIFT, false, out);
            out.push_str(" @ ");
            if matches!(t, TimeTerm::Sum(..)) {
                out.push('(');
                write_term(t, out);
                out.push(')');
            } else {
                write_term(t, out);
            }
        }
        Formula::Not(body) => {
            out.push('!');
            write(body, PREFIX, last, out);
        }
        Formula::Box(t, body) => {
            out.push('[');
            write_term(t, out);
            out.push_str("] ");
            write(body, PREFIX, last, out);
        }
        Formula::Diamond(t, body) => {
            out.push('<');
            write_term(t, out);
            out.push_str("> ");
            write(body, PREFIX, last, out);
        }
        Formula::And(l, r) => {
            write(l, AND, false, out);
            out.push_str(" & ");
            write(r, AND + 1, last, out);
        }
        Formula::Or(l, r) => {
            write(l, OR, false, out);
            out.push_str(" | ");
            write(r, OR + 1, last, out);
        }
        Formula::Exists(x, body) | Formula::Forall(x, body) => {
            out.push_str(if matches!(f, Formula::Exists(..)) { "exists " } else { "forall " });
            out.push_str(x);
            out.push_str(" . ");
            write(body, 0, true, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn shift_of_sum_is_parenthesised() {
        let f = Formula::exists("x", Formula::atom("a").shift(TimeTerm::var("x").plus(1)));
        assert_eq!(print_formula(&f), "exists x . a @ (x + 1)");
    }

    #[test]
    fn canonicalisation() {
        let f = parse_formula("( (a) & b )", None).unwrap();
        assert_eq!(print_formula(&f), "a & b");
    }

    #[test]
    fn parenthesis_placement() {
        for (text, printed) in [
            ("a & (b & c)", "a & (b & c)"),
            ("(a & b) & c", "a & b & c"),
            ("(a | b) & c", "(a | b) & c"),
            ("!(a @ 2)", "!a @ 2"),
            ("(!a) @ 2", "(!a) @ 2"),
            ("(a @ 1) @ 2", "a @ 1 @ 2"),
            ("(exists x . a @ x) & b", "(exists x . a @ x) & b"),
            ("b & (exists x . a @ x)", "b & exists x . a @ x"),
            ("!(exists x . a @ x)", "!exists x . a @ x"),
            ("(!exists x . a @ x) | b", "!(exists x . a @ x) | b"),
            ("[x + (y + 1)] a", "[x + (y + 1)] a"),
            ("<2> [3] (a | b)", "<2> [3] (a | b)"),
        ] {
            let f = parse_formula(text, None).unwrap();
            assert_eq!(print_formula(&f), printed, "{text}");
            assert_eq!(parse_formula(printed, None).unwrap(), f);
        }
    }
}
