//! Directed rewriting with the equational axioms of the deductive system.
//!
//! Every rule is an instance of an equality of the system, oriented towards
//! a smaller or more canonical form; inequalities are never used as
//! rewrites. Rules are applied top-down in bounded sweeps and each
//! application can be recorded in a replayable [`RewriteTrace`].

mod rules;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::alphabet::Alphabet;
use crate::error::RewriteError;
use crate::formula::{Formula, FreshNames};

pub const DEFAULT_SWEEPS: usize = 8;
pub const DEFAULT_SIZE_GUARD: usize = 256;

/// Which axiom group justifies a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RuleGroup {
    Sigma,
    Negation,
    Future,
    Box,
    Diamond,
    Mono,
    ExistsUnfold,
    ForallUnfold,
    Boolean,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: RuleGroup,
    /// Child indices from the root to the rewritten subformula.
    pub path: Vec<usize>,
    pub before: Formula,
    pub after: Formula,
}

impl Serialize for RewriteStep {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RewriteStep", 4)?;
        st.serialize_field("rule", &self.rule)?;
        st.serialize_field("path", &self.path)?;
        st.serialize_field("before", &self.before.to_string())?;
        st.serialize_field("after", &self.after.to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
}

impl RewriteTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-applies the recorded steps to `input`, checking that each one
    /// finds its `before` subformula in place.
    pub fn replay(&self, input: &Formula) -> Result<Formula, RewriteError> {
        let mut f = input.clone();
        for (step, s) in self.steps.iter().enumerate() {
            match f.get_at(&s.path) {
                Some(found) if *found == s.before => {}
                Some(_) => return Err(RewriteError::Replay { step, reason: "subformula differs".into() }),
                None => return Err(RewriteError::Replay { step, reason: "path does not exist".into() }),
            }
            f.replace_at(&s.path, s.after.clone());
        }
        Ok(f)
    }
}

/// A formula together with the steps that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewritten {
    pub formula: Formula,
    pub trace: RewriteTrace,
}

type Rule<'a> = dyn Fn(&Formula, &mut FreshNames) -> Option<(RuleGroup, Formula)> + 'a;

struct Engine<'a> {
    rule: &'a Rule<'a>,
    fresh: FreshNames,
    trace: RewriteTrace,
}

const MAX_LOCAL_STEPS: usize = 64;

impl Engine<'_> {
    fn walk(&mut self, node: &mut Formula, path: &mut Vec<usize>) -> bool {
        let mut changed = false;
        for _ in 0..MAX_LOCAL_STEPS {
            let Some((rule, after)) = (self.rule)(node, &mut self.fresh) else { break };
            self.fresh.reserve_formula(&after);
            self.trace.steps.push(RewriteStep { rule, path: path.clone(), before: node.clone(), after: after.clone() });
            *node = after;
            changed = true;
        }
        for (i, child) in node.children_mut().into_iter().enumerate() {
            path.push(i);
            changed |= self.walk(child, path);
            path.pop();
        }
        changed
    }
}

fn run(f: &Formula, sweeps: usize, rule: &Rule<'_>) -> Rewritten {
    let mut engine = Engine { rule, fresh: FreshNames::for_formula(f), trace: RewriteTrace::default() };
    let mut out = f.clone();
    for _ in 0..sweeps.max(1) {
        if !engine.walk(&mut out, &mut Vec::new()) {
            break;
        }
    }
    Rewritten { formula: out, trace: engine.trace }
}

/// Pushes negations inward. In letters mode a negated letter becomes the
/// disjunction of the other letters, so no `¬` remains (except `¬a` over a
/// one-letter alphabet, which has no negation-free form); in props mode
/// negations stop at atoms.
pub fn negation_free(f: &Formula, alphabet: &Alphabet) -> Formula {
    negation_free_traced(f, alphabet).formula
}

pub fn negation_free_traced(f: &Formula, alphabet: &Alphabet) -> Rewritten {
    run(f, DEFAULT_SWEEPS, &|g, _| rules::negation(g, alphabet))
}

/// Moves shifts down to the atoms, merging nested shifts and folding
/// constant sums.
pub fn normalize_shifts(f: &Formula) -> Formula {
    normalize_shifts_traced(f).formula
}

pub fn normalize_shifts_traced(f: &Formula) -> Rewritten {
    run(f, DEFAULT_SWEEPS, &|g, fresh| rules::shift(g, fresh).or_else(|| rules::fold_bounds(g)))
}

/// Replaces `□_k φ` / `◇_k φ` with constant `k` by the finite conjunction /
/// disjunction of `φ_0 … φ_{k−1}` when that has at most `size_guard` atom
/// occurrences.
pub fn expand_constant_modalities(f: &Formula, size_guard: usize) -> Formula {
    expand_constant_modalities_traced(f, size_guard).formula
}

pub fn expand_constant_modalities_traced(f: &Formula, size_guard: usize) -> Rewritten {
    run(f, DEFAULT_SWEEPS, &|g, _| rules::expand(g, size_guard))
}

/// `∃x φ = φ[x:=1] ∨ ∃y φ[x:=y+1]`.
pub fn unfold_exists(f: &Formula) -> Result<Formula, RewriteError> {
    unfold_exists_traced(f).map(|r| r.formula)
}

pub fn unfold_exists_traced(f: &Formula) -> Result<Rewritten, RewriteError> {
    if !matches!(f, Formula::Exists(..)) {
        return Err(RewriteError::NotExistsRooted);
    }
    Ok(unfold_root(f, RuleGroup::ExistsUnfold))
}

/// `∀x φ = φ[x:=1] ∧ ∀y φ[x:=y+1]`.
pub fn unfold_forall(f: &Formula) -> Result<Formula, RewriteError> {
    unfold_forall_traced(f).map(|r| r.formula)
}

pub fn unfold_forall_traced(f: &Formula) -> Result<Rewritten, RewriteError> {
    if !matches!(f, Formula::Forall(..)) {
        return Err(RewriteError::NotForallRooted);
    }
    Ok(unfold_root(f, RuleGroup::ForallUnfold))
}

fn unfold_root(f: &Formula, rule: RuleGroup) -> Rewritten {
    let mut fresh = FreshNames::for_formula(f);
    let after = rules::unfold(f, &mut fresh).expect("quantifier-rooted");
    let step = RewriteStep { rule, path: Vec::new(), before: f.clone(), after: after.clone() };
    Rewritten { formula: after, trace: RewriteTrace { steps: vec![step] } }
}

/// Identity-based clean-up: unit windows, window composition for constant
/// bounds, Boolean identities, shift normalisation and constant folding.
pub fn simplify(f: &Formula) -> Formula {
    simplify_traced(f).formula
}

pub fn simplify_traced(f: &Formula) -> Rewritten {
    run(f, DEFAULT_SWEEPS, &|g, fresh| {
        rules::unit_window(g)
            .or_else(|| rules::compose_windows(g))
            .or_else(|| rules::boolean(g))
            .or_else(|| rules::shift(g, fresh))
            .or_else(|| rules::fold_bounds(g))
    })
}
