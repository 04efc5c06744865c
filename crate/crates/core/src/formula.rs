//! Formula abstract syntax, binding structure and substitution.

use std::collections::BTreeSet;
use std::fmt;

use crate::term::TimeTerm;

/// A TEL formula. Unbounded modalities and implication are derived forms and
/// are expanded by their constructors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Shift(Box<Formula>, TimeTerm),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Box(TimeTerm, Box<Formula>),
    Diamond(TimeTerm, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    /// `φ_t`; a shift by the literal constant 0 is the formula itself.
    pub fn shift(self, t: impl Into<TimeTerm>) -> Formula {
        let t = t.into();
        if t == TimeTerm::Const(0) {
            self
        } else {
            Formula::Shift(Box::new(self), t)
        }
    }

    /// Shift by a constant, eliding zero.
    pub fn at(self, k: u64) -> Formula {
        self.shift(TimeTerm::Const(k))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    /// `¬φ ∨ ψ`.
    pub fn implies(self, other: Formula) -> Formula {
        self.not().or(other)
    }

    pub fn always(t: impl Into<TimeTerm>, body: Formula) -> Formula {
        Formula::Box(t.into(), Box::new(body))
    }

    pub fn sometime(t: impl Into<TimeTerm>, body: Formula) -> Formula {
        Formula::Diamond(t.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    /// Left-associated conjunction; `None` for an empty input.
    pub fn and_all<I: IntoIterator<Item = Formula>>(parts: I) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    pub fn or_all<I: IntoIterator<Item = Formula>>(parts: I) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    /// `a ∨ ¬a`.
    pub fn top(a: impl Into<String>) -> Formula {
        let a = Formula::atom(a);
        a.clone().or(a.not())
    }

    /// `a ∧ ¬a`.
    pub fn bottom(a: impl Into<String>) -> Formula {
        let a = Formula::atom(a);
        a.clone().and(a.not())
    }

    /// `□φ ≡ φ ∧ ∀x φ_x` with `x` fresh for `φ`.
    pub fn box_inf(body: Formula) -> Formula {
        let x = FreshNames::for_formula(&body).next_name();
        let shifted = body.clone().shift(TimeTerm::var(x.clone()));
        body.and(Formula::forall(x, shifted))
    }

    /// `◇φ ≡ φ ∨ ∃x φ_x` with `x` fresh for `φ`.
    pub fn diamond_inf(body: Formula) -> Formula {
        let x = FreshNames::for_formula(&body).next_name();
        let shifted = body.clone().shift(TimeTerm::var(x.clone()));
        body.or(Formula::exists(x, shifted))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add_term = |t: &TimeTerm, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Atom(_) => {}
            Formula::Shift(f, t) => {
                add_term(t, bound, out);
                f.collect_free(bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Box(t, f) | Formula::Diamond(t, f) => {
                add_term(t, bound, out);
                f.collect_free(bound, out);
            }
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, name: &str) -> bool {
        match self {
            Formula::Atom(_) => false,
            Formula::Shift(f, t) | Formula::Box(t, f) | Formula::Diamond(t, f) => {
                t.mentions(name) || f.has_free(name)
            }
            Formula::Not(f) => f.has_free(name),
            Formula::And(l, r) | Formula::Or(l, r) => l.has_free(name) || r.has_free(name),
            Formula::Exists(x, f) | Formula::Forall(x, f) => x != name && f.has_free(name),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Shift(_, t) | Formula::Box(t, _) | Formula::Diamond(t, _) => {
                t.collect_vars(&mut out)
            }
            Formula::Exists(x, _) | Formula::Forall(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                out.insert(a.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) => vec![],
            Formula::Shift(f, _)
            | Formula::Not(f)
            | Formula::Box(_, f)
            | Formula::Diamond(_, f)
            | Formula::Exists(_, f)
            | Formula::Forall(_, f) => vec![f],
            Formula::And(l, r) | Formula::Or(l, r) => vec![l, r],
        }
    }

    pub(crate) fn children_mut(&mut self) -> Vec<&mut Formula> {
        match self {
            Formula::Atom(_) => vec![],
            Formula::Shift(f, _)
            | Formula::Not(f)
            | Formula::Box(_, f)
            | Formula::Diamond(_, f)
            | Formula::Exists(_, f)
            | Formula::Forall(_, f) => vec![f.as_mut()],
            Formula::And(l, r) | Formula::Or(l, r) => vec![l.as_mut(), r.as_mut()],
        }
    }

    /// Subformula reached by following child indices.
    pub fn get_at(&self, path: &[usize]) -> Option<&Formula> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i)?.get_at(rest),
        }
    }

    /// Replaces the subformula at `path`; `false` when the path is invalid.
    pub fn replace_at(&mut self, path: &[usize], with: Formula) -> bool {
        match path.split_first() {
            None => {
                *self = with;
                true
            }
            Some((&i, rest)) => match self.children_mut().into_iter().nth(i) {
                Some(child) => child.replace_at(rest, with),
                None => false,
            },
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn is_quantifier_free(&self) -> bool {
        let mut qf = true;
        self.visit(&mut |f| {
            if matches!(f, Formula::Exists(..) | Formula::Forall(..)) {
                qf = false;
            }
        });
        qf
    }

    pub fn count_not(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            if matches!(f, Formula::Not(_)) {
                n += 1;
            }
        });
        n
    }

    /// Capture-avoiding substitution of the free occurrences of `x` by `t`.
    pub fn subst(&self, x: &str, t: &TimeTerm) -> Formula {
        let mut fresh = FreshNames::for_formula(self);
        for v in t.vars() {
            fresh.reserve(&v);
        }
        fresh.reserve(x);
        self.subst_with(x, t, &mut fresh)
    }

    pub(crate) fn subst_with(&self, x: &str, t: &TimeTerm, fresh: &mut FreshNames) -> Formula {
        if !self.has_free(x) {
            return self.clone();
        }
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::Shift(f, u) => Formula::Shift(Box::new(f.subst_with(x, t, fresh)), u.replace_var(x, t)),
            Formula::Not(f) => f.subst_with(x, t, fresh).not(),
            Formula::And(l, r) => l.subst_with(x, t, fresh).and(r.subst_with(x, t, fresh)),
            Formula::Or(l, r) => l.subst_with(x, t, fresh).or(r.subst_with(x, t, fresh)),
            Formula::Box(u, f) => Formula::Box(u.replace_var(x, t), Box::new(f.subst_with(x, t, fresh))),
            Formula::Diamond(u, f) => {
                Formula::Diamond(u.replace_var(x, t), Box::new(f.subst_with(x, t, fresh)))
            }
            Formula::Exists(y, f) | Formula::Forall(y, f) => {
                let (y, body) = if t.mentions(y) {
                    let y2 = fresh.next_name();
                    let renamed = f.subst_with(y, &TimeTerm::var(y2.clone()), fresh);
                    (y2, renamed)
                } else {
                    (y.clone(), (**f).clone())
                };
                let body = body.subst_with(x, t, fresh);
                if matches!(self, Formula::Exists(..)) {
                    Formula::exists(y, body)
                } else {
                    Formula::forall(y, body)
                }
            }
        }
    }

    /// Renames the binder of a quantifier-rooted formula to `to`.
    pub(crate) fn rename_binder(&self, to: &str) -> Formula {
        match self {
            Formula::Exists(y, f) => Formula::exists(to, f.subst(y, &TimeTerm::var(to))),
            Formula::Forall(y, f) => Formula::forall(to, f.subst(y, &TimeTerm::var(to))),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_formula(self))
    }
}

/// Generator of variable names `_v0`, `_v1`, … avoiding a reserved set.
#[derive(Debug, Clone, Default)]
pub struct FreshNames {
    used: BTreeSet<String>,
    next: usize,
}

impl FreshNames {
    pub fn new() -> FreshNames {
        FreshNames::default()
    }

    pub fn for_formula(f: &Formula) -> FreshNames {
        let mut names = FreshNames::new();
        names.reserve_formula(f);
        names
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    pub fn reserve_formula(&mut self, f: &Formula) {
        self.used.extend(f.all_vars());
    }

    pub fn next_name(&mut self) -> String {
        loop {
            let candidate = format!("_v{}", self.next);
            self.next += 1;
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
        }
    }
}
