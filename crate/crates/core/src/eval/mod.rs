//! Three-valued model checking on lasso words.
//!
//! Quantifiers range over all of ℕ⁺, which cannot be enumerated, so a
//! quantifier is evaluated for `x = 1..=B` and reports `Unknown` when that
//! sample does not settle it. Two sound closure rules (see `closure`) turn
//! many of those into definite answers. Quantifier-free formulas are always
//! evaluated exactly: windows longer than one loop only repeat positions.

mod closure;
mod compile;
mod engine;
mod exact;

use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::formula::Formula;
use crate::term::Env;
use crate::words::LassoWord;

pub use compile::CompiledFormula;
pub use exact::eval_exact_qf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth3 {
    True,
    False,
    Unknown,
}

impl Truth3 {
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Truth3 {
        match self {
            Truth3::True => Truth3::False,
            Truth3::False => Truth3::True,
            Truth3::Unknown => Truth3::Unknown,
        }
    }

    pub fn and(self, other: Truth3) -> Truth3 {
        match (self, other) {
            (Truth3::False, _) | (_, Truth3::False) => Truth3::False,
            (Truth3::True, Truth3::True) => Truth3::True,
            _ => Truth3::Unknown,
        }
    }

    pub fn or(self, other: Truth3) -> Truth3 {
        self.not().and(other.not()).not()
    }

    pub fn is_definite(self) -> bool {
        self != Truth3::Unknown
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Truth3::True => Some(true),
            Truth3::False => Some(false),
            Truth3::Unknown => None,
        }
    }
}

impl From<bool> for Truth3 {
    fn from(b: bool) -> Truth3 {
        if b {
            Truth3::True
        } else {
            Truth3::False
        }
    }
}

impl std::fmt::Display for Truth3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Truth3::True => "true",
            Truth3::False => "false",
            Truth3::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// `None` picks `ℓ + 2p + 8` for each word.
    pub quant_bound: Option<u64>,
    /// Collapse a quantifier whose sample was uniformly non-settling to the
    /// non-settling value. Unsound in general.
    pub assume_complete: bool,
    pub memo_enabled: bool,
    pub step_limit: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { quant_bound: None, assume_complete: false, memo_enabled: true, step_limit: 10_000_000 }
    }
}

impl EvalConfig {
    pub fn with_bound(mut self, bound: u64) -> Self {
        self.quant_bound = Some(bound.max(1));
        self
    }

    pub fn assuming_complete(mut self, on: bool) -> Self {
        self.assume_complete = on;
        self
    }

    pub fn with_memo(mut self, on: bool) -> Self {
        self.memo_enabled = on;
        self
    }

    pub fn with_step_limit(mut self, limit: u64) -> Self {
        self.step_limit = limit;
        self
    }

    /// The bound used for `w`.
    pub fn bound_for(&self, w: &LassoWord) -> u64 {
        self.quant_bound.unwrap_or((w.prefix_len() + 2 * w.loop_len() + 8) as u64)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalStats {
    pub steps: u64,
    pub atom_visits: u64,
    pub memo_hits: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub truth: Truth3,
    /// For a definite result of a formula led by quantifiers: the least value
    /// of each leading `∃` that makes it true, or of each leading `∀` that
    /// makes it false.
    pub witness: Vec<(String, u64)>,
    pub stats: EvalStats,
}

impl CompiledFormula {
    fn machine<'a>(&'a self, w: &LassoWord, i: u64, env: &Env, cfg: &EvalConfig) -> Result<engine::Machine<'a>, EvalError> {
        if i == 0 {
            return Err(EvalError::BadPosition);
        }
        if w.alphabet() != &self.alphabet {
            return Err(EvalError::AlphabetMismatch);
        }
        let values = self
            .free
            .iter()
            .map(|v| env.get(v).ok_or_else(|| EvalError::UnboundVariable(v.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(engine::Machine::new(self, w, &values, cfg))
    }

    /// Truth at position `i`.
    pub fn check(&self, w: &LassoWord, i: u64, env: &Env, cfg: &EvalConfig) -> Result<Truth3, EvalError> {
        self.machine(w, i, env, cfg)?.run(i)
    }

    /// Truth at each of `positions`. One memo table serves them all, so this
    /// is much cheaper than separate [`check`](Self::check) calls.
    pub fn check_many(&self, w: &LassoWord, positions: &[u64], env: &Env, cfg: &EvalConfig) -> Result<Vec<Truth3>, EvalError> {
        let Some(&first) = positions.first() else { return Ok(vec![]) };
        if positions.contains(&0) {
            return Err(EvalError::BadPosition);
        }
        let mut m = self.machine(w, first, env, cfg)?;
        positions.iter().map(|&i| m.run(i)).collect()
    }

    /// Truth at position `i`, with witness and counters.
    pub fn evaluate(&self, w: &LassoWord, i: u64, env: &Env, cfg: &EvalConfig) -> Result<Evaluation, EvalError> {
        let mut m = self.machine(w, i, env, cfg)?;
        let truth = m.run(i)?;
        let stats = m.stats;
        let witness = m.witness(i, truth)?;
        Ok(Evaluation { truth, witness, stats })
    }
}

/// Truth of `f` at position `i` of `w`.
pub fn eval(w: &LassoWord, i: u64, f: &Formula, env: &Env, cfg: &EvalConfig) -> Result<Truth3, EvalError> {
    CompiledFormula::compile(f, w.alphabet())?.check(w, i, env, cfg)
}

pub fn eval_with_stats(w: &LassoWord, i: u64, f: &Formula, env: &Env, cfg: &EvalConfig) -> Result<(Truth3, EvalStats), EvalError> {
    let e = evaluate(w, i, f, env, cfg)?;
    Ok((e.truth, e.stats))
}

/// [`eval`] together with a witness for the leading quantifiers.
pub fn evaluate(w: &LassoWord, i: u64, f: &Formula, env: &Env, cfg: &EvalConfig) -> Result<Evaluation, EvalError> {
    CompiledFormula::compile(f, w.alphabet())?.evaluate(w, i, env, cfg)
}

/// Whether `w` belongs to the language of the closed formula `f`.
pub fn language_member(w: &LassoWord, f: &Formula, cfg: &EvalConfig) -> Result<Truth3, EvalError> {
    let free: Vec<String> = f.free_vars().into_iter().collect();
    if !free.is_empty() {
        return Err(EvalError::OpenFormula(free));
    }
    eval(w, 1, f, &Env::new(), cfg)
}

/// Whether some letter of `atoms` occurs infinitely often in `w`.
pub fn holds_infinitely_often<S: AsRef<str>>(w: &LassoWord, atoms: &[S]) -> bool {
    let ids: Vec<u32> = atoms.iter().filter_map(|a| w.alphabet().id(a.as_ref())).collect();
    w.cycle().iter().any(|letter| ids.iter().any(|&id| letter.contains(id)))
}
