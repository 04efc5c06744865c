//! Time terms: positive integer constants, variables and sums.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::TermError;

/// A time-length term. Evaluates to a positive integer under a total
/// variable assignment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TimeTerm {
    Const(u64),
    Var(String),
    Sum(Box<TimeTerm>, Box<TimeTerm>),
}

impl TimeTerm {
    pub fn constant(value: u64) -> TimeTerm {
        TimeTerm::Const(value)
    }

    pub fn var(name: impl Into<String>) -> TimeTerm {
        TimeTerm::Var(name.into())
    }

    pub fn sum(left: TimeTerm, right: TimeTerm) -> TimeTerm {
        TimeTerm::Sum(Box::new(left), Box::new(right))
    }

    /// `n` copies of `t` joined by `+`, left associated. `n` must be at least 1.
    pub fn repeat(n: u64, t: &TimeTerm) -> TimeTerm {
        assert!(n >= 1, "a repeated term needs at least one copy");
        let mut acc = t.clone();
        for _ in 1..n {
            acc = TimeTerm::sum(acc, t.clone());
        }
        acc
    }

    /// Adds `k` to the term, eliding a zero increment.
    pub fn plus(self, k: u64) -> TimeTerm {
        if k == 0 {
            self
        } else {
            TimeTerm::sum(self, TimeTerm::Const(k))
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            TimeTerm::Const(_) => {}
            TimeTerm::Var(v) => {
                out.insert(v.clone());
            }
            TimeTerm::Sum(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            TimeTerm::Const(_) => false,
            TimeTerm::Var(v) => v == name,
            TimeTerm::Sum(l, r) => l.mentions(name) || r.mentions(name),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            TimeTerm::Const(_) => true,
            TimeTerm::Var(_) => false,
            TimeTerm::Sum(l, r) => l.is_ground() && r.is_ground(),
        }
    }

    /// The value of a variable-free term.
    pub fn ground_value(&self) -> Option<u64> {
        match self {
            TimeTerm::Const(c) => Some(*c),
            TimeTerm::Var(_) => None,
            TimeTerm::Sum(l, r) => Some(l.ground_value()?.checked_add(r.ground_value()?)?),
        }
    }

    /// Replaces every occurrence of `name` by `by`.
    pub fn replace_var(&self, name: &str, by: &TimeTerm) -> TimeTerm {
        match self {
            TimeTerm::Const(_) => self.clone(),
            TimeTerm::Var(v) if v == name => by.clone(),
            TimeTerm::Var(_) => self.clone(),
            TimeTerm::Sum(l, r) => TimeTerm::sum(l.replace_var(name, by), r.replace_var(name, by)),
        }
    }

    /// Checks that every constant is positive.
    pub fn validate(&self) -> Result<(), TermError> {
        match self {
            TimeTerm::Const(0) => Err(TermError::ZeroConstant),
            TimeTerm::Const(_) | TimeTerm::Var(_) => Ok(()),
            TimeTerm::Sum(l, r) => {
                l.validate()?;
                r.validate()
            }
        }
    }

    pub fn linear(&self) -> LinearTerm {
        let mut lin = LinearTerm::default();
        self.accumulate(&mut lin);
        lin
    }

    fn accumulate(&self, lin: &mut LinearTerm) {
        match self {
            TimeTerm::Const(c) => lin.constant += c,
            TimeTerm::Var(v) => *lin.coefficients.entry(v.clone()).or_insert(0) += 1,
            TimeTerm::Sum(l, r) => {
                l.accumulate(lin);
                r.accumulate(lin);
            }
        }
    }

    /// Canonical form: variables in name order (repeated by multiplicity),
    /// then the folded constant.
    pub fn folded(&self) -> TimeTerm {
        self.linear().to_term()
    }

    /// Number of `Sum` nodes plus leaves.
    pub fn size(&self) -> usize {
        match self {
            TimeTerm::Const(_) | TimeTerm::Var(_) => 1,
            TimeTerm::Sum(l, r) => 1 + l.size() + r.size(),
        }
    }
}

impl fmt::Display for TimeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}

impl From<u64> for TimeTerm {
    fn from(value: u64) -> Self {
        TimeTerm::Const(value)
    }
}

impl From<&str> for TimeTerm {
    fn from(value: &str) -> Self {
        TimeTerm::Var(value.to_string())
    }
}

/// A term in the form `c + Σ n_v · v`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearTerm {
    pub constant: u64,
    pub coefficients: BTreeMap<String, u64>,
}

impl LinearTerm {
    pub fn to_term(&self) -> TimeTerm {
        let mut parts: Vec<TimeTerm> = Vec::new();
        for (v, n) in &self.coefficients {
            for _ in 0..*n {
                parts.push(TimeTerm::Var(v.clone()));
            }
        }
        if self.constant > 0 || parts.is_empty() {
            parts.push(TimeTerm::Const(self.constant));
        }
        let mut iter = parts.into_iter();
        let first = iter.next().expect("at least one part");
        iter.fold(first, TimeTerm::sum)
    }
}

/// A variable assignment into ℕ⁺.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Env {
    bindings: BTreeMap<String, u64>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    /// Binds `name` to `value`, rejecting zero.
    pub fn bind(&mut self, name: impl Into<String>, value: u64) -> Result<(), TermError> {
        let name = name.into();
        if value == 0 {
            return Err(TermError::NonPositiveBinding(name));
        }
        self.bindings.insert(name, value);
        Ok(())
    }

    pub fn with(mut self, name: impl Into<String>, value: u64) -> Result<Env, TermError> {
        self.bind(name, value)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<u64> {
        self.bindings.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.bindings.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

impl<S: Into<String>> FromIterator<(S, u64)> for Env {
    /// Collects bindings; zero values are dropped.
    fn from_iter<I: IntoIterator<Item = (S, u64)>>(iter: I) -> Self {
        let mut env = Env::new();
        for (k, v) in iter {
            let _ = env.bind(k, v);
        }
        env
    }
}

/// Evaluates `t` homomorphically under `env`.
pub fn term_eval(t: &TimeTerm, env: &Env) -> Result<u64, TermError> {
    match t {
        TimeTerm::Const(c) => Ok(*c),
        TimeTerm::Var(v) => env.get(v).ok_or_else(|| TermError::UnboundVariable(v.clone())),
        TimeTerm::Sum(l, r) => {
            let a = term_eval(l, env)?;
            let b = term_eval(r, env)?;
            a.checked_add(b).ok_or(TermError::Overflow)
        }
    }
}
