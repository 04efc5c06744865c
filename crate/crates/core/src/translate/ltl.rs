use std::fmt;

use crate::formula::{Formula, FreshNames};
use crate::term::TimeTerm;
use crate::words::LassoWord;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ltl {
    Atom(String),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Finally(Box<Ltl>),
    Globally(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    WeakUntil(Box<Ltl>, Box<Ltl>),
    StrongRelease(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    pub fn atom(name: impl Into<String>) -> Ltl {
        Ltl::Atom(name.into())
    }

    fn is_tight(&self) -> bool {
        matches!(self, Ltl::Atom(_) | Ltl::Not(_) | Ltl::Next(_) | Ltl::Finally(_) | Ltl::Globally(_))
    }
}

struct Operand<'a>(&'a Ltl);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_tight() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ltl::Atom(a) => f.write_str(a),
            Ltl::Not(g) => write!(f, "!{}", Operand(g)),
            Ltl::Next(g) => write!(f, "X {}", Operand(g)),
            Ltl::Finally(g) => write!(f, "F {}", Operand(g)),
            Ltl::Globally(g) => write!(f, "G {}", Operand(g)),
            Ltl::And(l, r) => write!(f, "{} & {}", Operand(l), Operand(r)),
            Ltl::Or(l, r) => write!(f, "{} | {}", Operand(l), Operand(r)),
            Ltl::Until(l, r) => write!(f, "{} U {}", Operand(l), Operand(r)),
            Ltl::WeakUntil(l, r) => write!(f, "{} W {}", Operand(l), Operand(r)),
            Ltl::StrongRelease(l, r) => write!(f, "{} M {}", Operand(l), Operand(r)),
            Ltl::Release(l, r) => write!(f, "{} R {}", Operand(l), Operand(r)),
        }
    }
}

/// Truth of `φ` at every canonical position `1..=ℓ+p` (index 0 is position 1).
fn vector(w: &LassoWord, phi: &Ltl) -> Vec<bool> {
    let n = w.canonical_positions();
    let first_loop = w.prefix_len();
    let succ = |i: usize| if i + 1 < n { i + 1 } else { first_loop };
    // Fixpoint of v(i) = base(i) ∨ (step(i) ∧ v(succ i)), from `init`.
    let fix = |base: &[bool], step: &[bool], init: bool| {
        let mut v = vec![init; n];
        loop {
            let next: Vec<bool> = (0..n).map(|i| base[i] || (step[i] && v[succ(i)])).collect();
            if next == v {
                return v;
            }
            v = next;
        }
    };
    let all = vec![true; n];
    let none = vec![false; n];
    let zip = |a: &[bool], b: &[bool], op: fn(bool, bool) -> bool| -> Vec<bool> {
        a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect()
    };
    match phi {
        Ltl::Atom(a) => {
            let id = w.alphabet().id(a);
            (1..=n as u64).map(|i| id.is_some_and(|id| w.letter_at(i).contains(id))).collect()
        }
        Ltl::Not(g) => vector(w, g).into_iter().map(|b| !b).collect(),
        Ltl::And(l, r) => zip(&vector(w, l), &vector(w, r), |x, y| x && y),
        Ltl::Or(l, r) => zip(&vector(w, l), &vector(w, r), |x, y| x || y),
        Ltl::Next(g) => {
            let v = vector(w, g);
            (0..n).map(|i| v[succ(i)]).collect()
        }
        Ltl::Finally(g) => fix(&vector(w, g), &all, false),
        // G φ = ¬F¬φ; the greatest fixpoint of φ ∧ X(G φ).
        Ltl::Globally(g) => fix(&none, &vector(w, g), true),
        Ltl::Until(l, r) => fix(&vector(w, r), &vector(w, l), false),
        Ltl::WeakUntil(l, r) => fix(&vector(w, r), &vector(w, l), true),
        Ltl::StrongRelease(l, r) | Ltl::Release(l, r) => {
            let (vl, vr) = (vector(w, l), vector(w, r));
            let both = zip(&vl, &vr, |x, y| x && y);
            fix(&both, &vr, matches!(phi, Ltl::Release(..)))
        }
    }
}

/// Exact LTL satisfaction at position `i ≥ 1`.
pub fn ltl_eval(w: &LassoWord, i: u64, phi: &Ltl) -> bool {
    let c = w.canonical_position(i) as usize;
    vector(w, phi)[c - 1]
}

/// Structural translation into TEL; every introduced quantifier gets its
/// own variable.
pub fn ltl_to_tel(phi: &Ltl) -> Formula {
    translate(phi, &mut FreshNames::new())
}

fn translate(phi: &Ltl, fresh: &mut FreshNames) -> Formula {
    let mut tr = |g: &Ltl| translate(g, fresh);
    match phi {
        Ltl::Atom(a) => Formula::atom(a.clone()),
        Ltl::Not(g) => tr(g).not(),
        Ltl::And(l, r) => tr(l).and(tr(r)),
        Ltl::Or(l, r) => tr(l).or(tr(r)),
        Ltl::Next(g) => tr(g).at(1),
        Ltl::Finally(g) => {
            let g = tr(g);
            let x = fresh.next_name();
            g.clone().or(Formula::exists(x.clone(), g.shift(TimeTerm::var(x))))
        }
        Ltl::Globally(g) => {
            let g = tr(g);
            let x = fresh.next_name();
            g.clone().and(Formula::forall(x.clone(), g.shift(TimeTerm::var(x))))
        }
        Ltl::Until(l, r) => {
            let (l, r) = (tr(l), tr(r));
            until_like(r, l, fresh)
        }
        Ltl::StrongRelease(l, r) => {
            let (l, r) = (tr(l), tr(r));
            until_like(l.and(r.clone()), r, fresh)
        }
        Ltl::WeakUntil(l, r) => {
            let g = translate(&Ltl::Globally(l.clone()), fresh);
            g.or(translate(&Ltl::Until(l.clone(), r.clone()), fresh))
        }
        Ltl::Release(l, r) => {
            let g = translate(&Ltl::Globally(r.clone()), fresh);
            g.or(translate(&Ltl::StrongRelease(l.clone(), r.clone()), fresh))
        }
    }
}

/// `goal ∨ ∃x (goal_x ∧ □_x hold)`.
fn until_like(goal: Formula, hold: Formula, fresh: &mut FreshNames) -> Formula {
    let x = fresh.next_name();
    let body = goal.clone().shift(TimeTerm::var(x.clone())).and(Formula::always(TimeTerm::var(x.clone()), hold));
    goal.or(Formula::exists(x, body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::syntax::{parse_formula, parse_ltl};

    fn word(text: &str) -> LassoWord {
        LassoWord::parse(text, &Alphabet::letters(["a", "b", "c"]).unwrap()).unwrap()
    }

    fn holds(w: &str, i: u64, phi: &str) -> bool {
        ltl_eval(&word(w), i, &parse_ltl(phi).unwrap())
    }

    #[test]
    fn reference_semantics() {
        assert!(holds("a;b | b", 2, "G b"));
        assert!(!holds("a;b | b", 1, "G b"));
        assert!(holds("a | b", 1, "F b"));
        assert!(holds("a;a;b | c", 1, "a U b"));
        assert!(!holds("a;a;b | c", 4, "a U b"));
        assert!(holds("a;a;b | c", 3, "a U b"), "k = 0 is allowed");
        assert!(holds("a | c", 1, "a W b") == holds("a | c", 1, "G a"));
        assert!(holds("| a", 1, "b R a"));
        assert!(!holds("| a", 1, "b M a"));
        assert!(holds("a;a | c", 1, "X a & X X c"));
    }

    #[test]
    fn translations() {
        let tr = |s: &str| ltl_to_tel(&parse_ltl(s).unwrap());
        let f = |s: &str| parse_formula(s, None).unwrap();
        assert_eq!(tr("X a"), f("a @ 1"));
        assert_eq!(tr("F a"), f("a | exists _v0 . a @ _v0"));
        assert_eq!(tr("G a"), f("a & forall _v0 . a @ _v0"));
        assert_eq!(tr("a U b"), f("b | exists _v0 . b @ _v0 & [_v0] a"));
        assert_eq!(tr("a M b"), f("a & b | exists _v0 . (a & b) @ _v0 & [_v0] b"));
        assert_eq!(tr("F a | F b"), f("(a | exists _v0 . a @ _v0) | (b | exists _v1 . b @ _v1)"));
    }
}
