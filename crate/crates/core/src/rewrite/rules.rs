use crate::alphabet::{Alphabet, Mode};
use crate::formula::{Formula, FreshNames};
use crate::term::TimeTerm;

use super::RuleGroup;

type Step = Option<(RuleGroup, Formula)>;

fn bx(f: Formula) -> Box<Formula> {
    Box::new(f)
}

pub(super) fn negation(f: &Formula, alphabet: &Alphabet) -> Step {
    let Formula::Not(g) = f else { return None };
    let neg = |h: &Formula| h.clone().not();
    Some(match &**g {
        Formula::Not(h) => (RuleGroup::Boolean, (**h).clone()),
        Formula::And(l, r) => (RuleGroup::Boolean, neg(l).or(neg(r))),
        Formula::Or(l, r) => (RuleGroup::Boolean, neg(l).and(neg(r))),
        Formula::Shift(h, u) => (RuleGroup::Negation, Formula::Shift(bx(neg(h)), u.clone())),
        Formula::Diamond(u, h) => (RuleGroup::Negation, Formula::Box(u.clone(), bx(neg(h)))),
        Formula::Box(u, h) => (RuleGroup::Negation, Formula::Diamond(u.clone(), bx(neg(h)))),
        Formula::Forall(x, h) => (RuleGroup::Negation, Formula::Exists(x.clone(), bx(neg(h)))),
        Formula::Exists(x, h) => (RuleGroup::Negation, Formula::Forall(x.clone(), bx(neg(h)))),
        Formula::Atom(a) => {
            if alphabet.mode() != Mode::Letters {
                return None;
            }
            let others = alphabet.symbols().iter().filter(|s| *s != a).map(|s| Formula::atom(s.clone()));
            (RuleGroup::Sigma, Formula::or_all(others)?)
        }
    })
}

fn folded(t: &TimeTerm) -> Option<TimeTerm> {
    let c = t.folded();
    (c != *t).then_some(c)
}

/// Future rules plus the quantifier rules `(Qx φ)_u = Qx (φ_u)`, renaming
/// the binder first when `u` mentions it.
pub(super) fn shift(f: &Formula, fresh: &mut FreshNames) -> Step {
    let Formula::Shift(g, u) = f else { return None };
    let sh = |h: &Formula| Formula::Shift(bx(h.clone()), u.clone());
    Some(match &**g {
        Formula::Atom(_) => (RuleGroup::Future, Formula::Shift(g.clone(), folded(u)?)),
        Formula::Shift(h, s) => (RuleGroup::Future, Formula::Shift(h.clone(), TimeTerm::sum(s.clone(), u.clone()).folded())),
        Formula::And(l, r) => (RuleGroup::Future, sh(l).and(sh(r))),
        Formula::Or(l, r) => (RuleGroup::Future, sh(l).or(sh(r))),
        Formula::Not(h) => (RuleGroup::Negation, sh(h).not()),
        Formula::Box(t, h) => (RuleGroup::Future, Formula::Box(t.clone(), bx(sh(h)))),
        Formula::Diamond(t, h) => (RuleGroup::Future, Formula::Diamond(t.clone(), bx(sh(h)))),
        Formula::Exists(..) | Formula::Forall(..) => {
            let exists = matches!(**g, Formula::Exists(..));
            let renamed;
            let q = match &**g {
                Formula::Exists(x, _) | Formula::Forall(x, _) if u.mentions(x) => {
                    renamed = g.rename_binder(&fresh.next_name());
                    &renamed
                }
                other => other,
            };
            let (Formula::Exists(x, h) | Formula::Forall(x, h)) = q else { unreachable!() };
            let body = bx(sh(h));
            if exists {
                (RuleGroup::ExistsUnfold, Formula::Exists(x.clone(), body))
            } else {
                (RuleGroup::ForallUnfold, Formula::Forall(x.clone(), body))
            }
        }
    })
}

pub(super) fn fold_bounds(f: &Formula) -> Step {
    match f {
        Formula::Box(t, h) => Some((RuleGroup::Box, Formula::Box(folded(t)?, h.clone()))),
        Formula::Diamond(t, h) => Some((RuleGroup::Diamond, Formula::Diamond(folded(t)?, h.clone()))),
        _ => None,
    }
}

fn leaves(f: &Formula) -> usize {
    let mut n = 0;
    f.visit(&mut |g| n += usize::from(matches!(g, Formula::Atom(_))));
    n
}

pub(super) fn expand(f: &Formula, size_guard: usize) -> Step {
    let (Formula::Box(t, h) | Formula::Diamond(t, h)) = f else { return None };
    let k = t.ground_value()?;
    if (k as usize).saturating_mul(leaves(h)) > size_guard {
        return None;
    }
    let copies = (0..k).map(|i| (**h).clone().shift(i));
    Some(if matches!(f, Formula::Box(..)) {
        (RuleGroup::Box, Formula::and_all(copies)?)
    } else {
        (RuleGroup::Diamond, Formula::or_all(copies)?)
    })
}

/// `∃x φ ↦ φ[x:=1] ∨ ∃y φ[x:=y+1]`, dually for `∀`.
pub(super) fn unfold(f: &Formula, fresh: &mut FreshNames) -> Option<Formula> {
    let (Formula::Exists(x, body) | Formula::Forall(x, body)) = f else { return None };
    let y = fresh.next_name();
    let first = body.subst(x, &TimeTerm::Const(1));
    let rest = body.subst(x, &TimeTerm::var(y.clone()).plus(1));
    Some(match f {
        Formula::Exists(..) => first.or(Formula::exists(y, rest)),
        _ => first.and(Formula::forall(y, rest)),
    })
}

pub(super) fn unit_window(f: &Formula) -> Step {
    match f {
        Formula::Box(t, h) if t.ground_value() == Some(1) => Some((RuleGroup::Box, (**h).clone())),
        Formula::Diamond(t, h) if t.ground_value() == Some(1) => Some((RuleGroup::Diamond, (**h).clone())),
        _ => None,
    }
}

/// `◇_{s+1} ◇_t φ = ◇_{s+t} φ` and `□_{s+1} □_t φ = □_{s+t} φ` for
/// constant bounds.
pub(super) fn compose_windows(f: &Formula) -> Step {
    match f {
        Formula::Box(outer, g) => match &**g {
            Formula::Box(inner, h) => {
                let u = outer.ground_value()? - 1 + inner.ground_value()?;
                Some((RuleGroup::Box, Formula::Box(TimeTerm::Const(u), h.clone())))
            }
            _ => None,
        },
        Formula::Diamond(outer, g) => match &**g {
            Formula::Diamond(inner, h) => {
                let u = outer.ground_value()? - 1 + inner.ground_value()?;
                Some((RuleGroup::Diamond, Formula::Diamond(TimeTerm::Const(u), h.clone())))
            }
            _ => None,
        },
        _ => None,
    }
}

/// `a ∨ ¬a` or `¬a ∨ a`.
fn is_top(f: &Formula) -> bool {
    match f {
        Formula::Or(l, r) => matches!((&**l, &**r), (a, Formula::Not(b)) | (Formula::Not(b), a) if a == &**b),
        _ => false,
    }
}

fn is_bottom(f: &Formula) -> bool {
    match f {
        Formula::And(l, r) => matches!((&**l, &**r), (a, Formula::Not(b)) | (Formula::Not(b), a) if a == &**b),
        _ => false,
    }
}

pub(super) fn boolean(f: &Formula) -> Step {
    let keep = |g: &Formula| Some((RuleGroup::Boolean, g.clone()));
    match f {
        Formula::Not(g) => match &**g {
            Formula::Not(h) => keep(h),
            _ => None,
        },
        Formula::And(l, r) => {
            if l == r || is_top(r) || is_bottom(l) {
                keep(l)
            } else if is_top(l) || is_bottom(r) {
                keep(r)
            } else {
                None
            }
        }
        Formula::Or(l, r) => {
            if l == r || is_bottom(r) || is_top(l) {
                keep(l)
            } else if is_bottom(l) || is_top(r) {
                keep(r)
            } else {
                None
            }
        }
        _ => None,
    }
}
