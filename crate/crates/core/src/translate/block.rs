use crate::error::TranslateError;
use crate::formula::{Formula, FreshNames};
use crate::term::TimeTerm;

/// `∃x₁…∃xₙ [□_{x₁}φ¹ ∧ (□_{x₂}φ²)_{x₁} ∧ … ∧ (□_{xₙ}φⁿ)_{x₁+…+xₙ₋₁}]`:
/// consecutive non-empty stretches where each part holds throughout.
pub fn block_closed(parts: &[Formula]) -> Result<Formula, TranslateError> {
    block(parts, false)
}

/// As [`block_closed`], but the last stretch is unbounded (`□φⁿ`).
pub fn block_open(parts: &[Formula]) -> Result<Formula, TranslateError> {
    block(parts, true)
}

fn block(parts: &[Formula], open: bool) -> Result<Formula, TranslateError> {
    if parts.is_empty() {
        return Err(TranslateError::EmptyBlock);
    }
    let mut fresh = FreshNames::new();
    parts.iter().for_each(|p| fresh.reserve_formula(p));
    let bounded = if open { parts.len() - 1 } else { parts.len() };
    let vars: Vec<String> = (0..bounded).map(|_| fresh.next_name()).collect();

    let mut conjuncts = Vec::with_capacity(parts.len());
    let mut offset: Option<TimeTerm> = None;
    for (i, part) in parts.iter().enumerate() {
        let stretch = match vars.get(i) {
            Some(x) => Formula::always(TimeTerm::var(x.clone()), part.clone()),
            None => {
                let y = fresh.next_name();
                part.clone().and(Formula::forall(y.clone(), part.clone().shift(TimeTerm::var(y))))
            }
        };
        conjuncts.push(match &offset {
            Some(t) => stretch.shift(t.clone()),
            None => stretch,
        });
        if let Some(x) = vars.get(i) {
            let x = TimeTerm::var(x.clone());
            offset = Some(match offset {
                Some(t) => TimeTerm::sum(t, x),
                None => x,
            });
        }
    }
    let body = Formula::and_all(conjuncts).expect("non-empty");
    Ok(vars.into_iter().rev().fold(body, |f, x| Formula::exists(x, f)))
}
