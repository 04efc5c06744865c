//! Static facts that let a bounded quantifier loop stop with a definite
//! answer.
//!
//! Two sound rules are used:
//!
//! * If the bound variable occurs only in shift subscripts, the body's value
//!   at `x = k` and `x = k + p` agree for `k ≥ ℓ` (every position that depends
//!   on `x` lies in the loop and moves by a multiple of the period), so
//!   `k = 1..=ℓ+p` is exhaustive.
//! * A "guard" is a formula implied by the body (for `∃`) or implying it
//!   (for `∀`) whose truth is monotone in the variable. Once an `∃` guard is
//!   false at `k` the body is false for every `k' ≥ k`; dually for `∀`.

use crate::formula::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mono {
    /// Does not depend on the variable.
    Const,
    /// Can only go from false to true as the variable grows.
    Inc,
    /// Can only go from true to false as the variable grows.
    Dec,
    Unknown,
}

impl Mono {
    fn flip(self) -> Mono {
        match self {
            Mono::Inc => Mono::Dec,
            Mono::Dec => Mono::Inc,
            m => m,
        }
    }

    fn join(self, other: Mono) -> Mono {
        match (self, other) {
            (Mono::Const, m) | (m, Mono::Const) => m,
            (a, b) if a == b => a,
            _ => Mono::Unknown,
        }
    }
}

/// Monotonicity of `f` in the free variable `x`.
pub(crate) fn monotonicity(f: &Formula, x: &str) -> Mono {
    if !f.has_free(x) {
        return Mono::Const;
    }
    match f {
        Formula::Atom(_) => Mono::Const,
        Formula::Not(g) => monotonicity(g, x).flip(),
        Formula::And(l, r) | Formula::Or(l, r) => monotonicity(l, x).join(monotonicity(r, x)),
        Formula::Shift(g, t) => {
            if t.mentions(x) {
                Mono::Unknown
            } else {
                monotonicity(g, x)
            }
        }
        Formula::Box(t, g) => {
            let inner = monotonicity(g, x);
            if !t.mentions(x) {
                inner
            } else if matches!(inner, Mono::Const | Mono::Dec) {
                Mono::Dec
            } else {
                Mono::Unknown
            }
        }
        Formula::Diamond(t, g) => {
            let inner = monotonicity(g, x);
            if !t.mentions(x) {
                inner
            } else if matches!(inner, Mono::Const | Mono::Inc) {
                Mono::Inc
            } else {
                Mono::Unknown
            }
        }
        Formula::Exists(y, g) | Formula::Forall(y, g) => {
            if y == x {
                Mono::Const
            } else {
                monotonicity(g, x)
            }
        }
    }
}

/// True when every free occurrence of `x` is inside a shift subscript.
pub(crate) fn shift_only(f: &Formula, x: &str) -> bool {
    match f {
        Formula::Atom(_) => true,
        Formula::Shift(g, _) | Formula::Not(g) => shift_only(g, x),
        Formula::And(l, r) | Formula::Or(l, r) => shift_only(l, x) && shift_only(r, x),
        Formula::Box(t, g) | Formula::Diamond(t, g) => !t.mentions(x) && shift_only(g, x),
        Formula::Exists(y, g) | Formula::Forall(y, g) => y == x || shift_only(g, x),
    }
}

/// Formulas `g` with `f ⊨ g` (when `conj`) or `g ⊨ f` (otherwise), at the
/// same position and assignment.
fn parts(f: &Formula, conj: bool, out: &mut Vec<Formula>) {
    if out.len() >= MAX_CANDIDATES {
        return;
    }
    out.push(f.clone());
    match f {
        Formula::And(l, r) if conj => {
            parts(l, conj, out);
            parts(r, conj, out);
        }
        Formula::Or(l, r) if !conj => {
            parts(l, conj, out);
            parts(r, conj, out);
        }
        // Window lengths are positive: □_t g ⊨ g and □_t g ⊨ □_t g' for g ⊨ g'.
        Formula::Box(t, g) if conj => {
            let mut inner = Vec::new();
            parts(g, conj, &mut inner);
            for p in inner {
                out.push(Formula::Box(t.clone(), Box::new(p.clone())));
                out.push(p);
            }
        }
        Formula::Diamond(t, g) if !conj => {
            let mut inner = Vec::new();
            parts(g, conj, &mut inner);
            for p in inner {
                out.push(Formula::Diamond(t.clone(), Box::new(p.clone())));
                out.push(p);
            }
        }
        Formula::Shift(g, t) => {
            let mut inner = Vec::new();
            parts(g, conj, &mut inner);
            out.extend(inner.into_iter().skip(1).map(|p| Formula::Shift(Box::new(p), t.clone())));
        }
        Formula::Exists(y, g) | Formula::Forall(y, g) => {
            let mut inner = Vec::new();
            parts(g, conj, &mut inner);
            out.extend(inner.into_iter().skip(1).filter(|p| !p.has_free(y)));
        }
        Formula::Not(g) => {
            let mut inner = Vec::new();
            parts(g, !conj, &mut inner);
            out.extend(inner.into_iter().skip(1).map(Formula::not));
        }
        _ => {}
    }
}

const MAX_GUARDS: usize = 4;
const MAX_CANDIDATES: usize = 64;

/// Guards for `∃x body` (when `exists`) or `∀x body`.
pub(crate) fn guards(body: &Formula, x: &str, exists: bool) -> Vec<Formula> {
    let mut candidates = Vec::new();
    parts(body, exists, &mut candidates);
    let wanted = if exists { Mono::Dec } else { Mono::Inc };
    let mut varying = Vec::new();
    let mut constant = Vec::new();
    for c in candidates {
        match monotonicity(&c, x) {
            m if m == wanted => varying.push(c),
            Mono::Const => constant.push(c),
            _ => {}
        }
    }
    let mut out: Vec<Formula> = Vec::new();
    for g in varying.into_iter().chain(constant) {
        if out.len() == MAX_GUARDS {
            break;
        }
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out
}
