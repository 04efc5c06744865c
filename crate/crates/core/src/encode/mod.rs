//! Formula builders for automata runs, PCP instances and word-sequence
//! correspondence, with the matching witness words.
//!
//! Product letters are flat identifiers `top__bottom`; the logic's alphabet
//! has no structure, so the pairing lives only in the names.

mod buchi;
mod lemma;
mod pcp;

pub use buchi::BuchiAutomaton;
pub use lemma::{lemma_alphabet, lemma_correspondence, lemma_word, LemmaVariant};
pub use pcp::{pcp_alphabet, pcp_encode, pcp_encode_with_budget, pcp_witness, PcpInstance, DEFAULT_NODE_BUDGET};

use crate::error::EncodeError;
use crate::formula::Formula;
use crate::term::TimeTerm;

/// The identifier for the product letter with the given rows.
pub fn product_letter(top: &str, bottom: &str) -> String {
    format!("{top}__{bottom}")
}

/// `(w[1] ∧ (w[2])_1 ∧ … ∧ (w[κ])_{κ-1})_s`: holds at position 1 exactly on
/// the words `Σ^s w Σ^ω`.
pub fn word_block<S: AsRef<str>>(w: &[S], s: u64) -> Result<Formula, EncodeError> {
    let block = Formula::and_all(w.iter().enumerate().map(|(j, a)| Formula::atom(a.as_ref()).at(j as u64)))
        .ok_or(EncodeError::EmptyWord)?;
    Ok(block.at(s))
}

/// Disjunction of letter atoms; `⊥` (over `fallback`) when there are none.
pub(crate) fn any_of<I: IntoIterator<Item = String>>(letters: I, fallback: &str) -> Formula {
    Formula::or_all(letters.into_iter().map(Formula::atom)).unwrap_or_else(|| Formula::bottom(fallback))
}

pub(crate) fn check_budget(f: Formula, budget: usize) -> Result<Formula, EncodeError> {
    let nodes = f.size();
    if nodes > budget {
        return Err(EncodeError::TooLarge { nodes, budget });
    }
    Ok(f)
}

fn var(name: &str) -> TimeTerm {
    TimeTerm::var(name)
}

/// `Σ vars + k`.
fn offset(vars: &[&str], k: u64) -> TimeTerm {
    let sum = vars.iter().map(|v| var(v)).reduce(TimeTerm::sum).expect("at least one variable");
    if k == 0 {
        sum
    } else {
        sum.plus(k)
    }
}

/// The two-zone correspondence: with `¢` at `z+1`, the blocks `left[i]` in
/// the first zone and `right[i]` in the second zone (from `z+2`) appear in
/// matching order. A left block at `x` is answered by `right_target[i]`
/// somewhere in the second zone, and every later left block by a later
/// right target; symmetrically from the right.
///
/// With `*_target == *` this is exact correspondence; with targets that
/// accept any block it only matches counts.
pub(crate) fn correspondence(
    left: &[Formula],
    right: &[Formula],
    left_target: &[Formula],
    right_target: &[Formula],
    cent: &str,
) -> Formula {
    let all = |parts: Vec<Formula>| Formula::and_all(parts).expect("at least one block");
    let n = left.len();
    let first = all(
        (0..n)
            .map(|i| {
                let r = right[i].clone().shift(offset(&["z"], 1));
                let rt = right_target[i].clone().shift(offset(&["z"], 1));
                left[i].clone().implies(rt).and(r.implies(left_target[i].clone()))
            })
            .collect(),
    );
    let forward = all(
        (0..n)
            .map(|i| {
                let later = all(
                    (0..n)
                        .map(|j| {
                            let found = Formula::exists("t", right_target[j].clone().shift(offset(&["y", "t", "z"], 1)));
                            Formula::forall("s", left[j].clone().shift(offset(&["x", "s"], 0)).implies(found))
                        })
                        .collect(),
                );
                let answer = right_target[i].clone().shift(offset(&["y", "z"], 1)).and(later);
                Formula::forall("x", left[i].clone().shift(var("x")).implies(Formula::exists("y", answer)))
            })
            .collect(),
    );
    let backward = all(
        (0..n)
            .map(|i| {
                let later = all(
                    (0..n)
                        .map(|j| {
                            let found = Formula::exists("t", left_target[j].clone().shift(offset(&["t", "y"], 0)));
                            Formula::forall("s", right[j].clone().shift(offset(&["x", "s", "z"], 1)).implies(found))
                        })
                        .collect(),
                );
                let answer = left_target[i].clone().shift(var("y")).and(later);
                Formula::forall("x", right[i].clone().shift(offset(&["x", "z"], 1)).implies(Formula::exists("y", answer)))
            })
            .collect(),
    );
    Formula::exists("z", Formula::atom(cent).shift(var("z")).and(first).and(forward).and(backward))
}
