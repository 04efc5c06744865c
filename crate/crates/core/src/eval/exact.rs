use crate::error::EvalError;
use crate::formula::Formula;
use crate::term::{term_eval, Env};
use crate::words::LassoWord;

/// Two-valued truth of a quantifier-free formula, straight from the
/// semantic clauses. Independent of the compiled evaluator.
pub fn eval_exact_qf(w: &LassoWord, i: u64, f: &Formula, env: &Env) -> Result<bool, EvalError> {
    if i == 0 {
        return Err(EvalError::BadPosition);
    }
    if !f.is_quantifier_free() {
        return Err(EvalError::NotQuantifierFree);
    }
    go(w, i, f, env)
}

fn go(w: &LassoWord, i: u64, f: &Formula, env: &Env) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::Atom(a) => w.alphabet().id(a).is_some_and(|id| w.letter_at(i).contains(id)),
        Formula::Shift(g, t) => {
            let j = i.checked_add(term_eval(t, env)?).ok_or(EvalError::Overflow)?;
            go(w, j, g, env)?
        }
        Formula::Not(g) => !go(w, i, g, env)?,
        Formula::And(l, r) => go(w, i, l, env)? && go(w, i, r, env)?,
        Formula::Or(l, r) => go(w, i, l, env)? || go(w, i, r, env)?,
        Formula::Box(t, g) | Formula::Diamond(t, g) => {
            let universal = matches!(f, Formula::Box(..));
            let end = i.checked_add(term_eval(t, env)?).ok_or(EvalError::Overflow)?;
            // Beyond one full loop past the prefix the window only repeats.
            let stop = end.min(i.max(w.prefix_len() as u64 + 1) + w.loop_len() as u64);
            let mut result = universal;
            for j in i..stop {
                if go(w, j, g, env)? != universal {
                    result = !universal;
                    break;
                }
            }
            result
        }
        Formula::Exists(..) | Formula::Forall(..) => return Err(EvalError::NotQuantifierFree),
    })
}
