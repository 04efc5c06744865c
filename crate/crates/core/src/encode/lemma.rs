//! Word-sequence correspondence. A word `u₁⋯uₗ ¢ v₁⋯vₘ # #^ω` has every
//! `uᵢ` starting with a dotted letter `a_d` and every `vⱼ` with a
//! double-dotted one `a_dd`; the formulas compare the two sequences.

use std::collections::BTreeSet;

use crate::alphabet::Alphabet;
use crate::error::EncodeError;
use crate::formula::Formula;
use crate::words::LassoWord;

use super::{any_of, correspondence, offset, var, word_block};

const CENT: &str = "cent";
const HASH: &str = "hash";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LemmaVariant {
    /// Both zones hold the same sequence of words.
    Exact,
    /// Both zones hold the same number of words.
    CountOnly,
}

struct Marked {
    plain: Vec<String>,
    dotted: Vec<String>,
    doubled: Vec<String>,
    /// Each word with its leading letter dotted / double-dotted.
    first: Vec<Vec<String>>,
    second: Vec<Vec<String>>,
}

fn dot(a: &str) -> String {
    format!("{a}_d")
}

fn ddot(a: &str) -> String {
    format!("{a}_dd")
}

fn mark(word: &[String], lead: fn(&str) -> String) -> Vec<String> {
    word.iter().enumerate().map(|(j, a)| if j == 0 { lead(a) } else { a.clone() }).collect()
}

fn marked<S: AsRef<str>>(words: &[Vec<S>]) -> Result<Marked, EncodeError> {
    if words.is_empty() || words.iter().any(Vec::is_empty) {
        return Err(EncodeError::EmptyWordSet);
    }
    let words: Vec<Vec<String>> = words.iter().map(|w| w.iter().map(|a| a.as_ref().to_string()).collect()).collect();
    let mut plain: Vec<String> = vec![];
    for a in words.iter().flatten() {
        if !plain.contains(a) {
            plain.push(a.clone());
        }
    }
    let dotted: Vec<String> = plain.iter().map(|a| dot(a)).collect();
    let doubled: Vec<String> = plain.iter().map(|a| ddot(a)).collect();
    let mut seen = BTreeSet::new();
    for name in plain.iter().chain(&dotted).chain(&doubled).map(String::as_str).chain([CENT, HASH]) {
        if !seen.insert(name) {
            return Err(EncodeError::NameClash(name.to_string()));
        }
    }
    Ok(Marked {
        first: words.iter().map(|w| mark(w, dot)).collect(),
        second: words.iter().map(|w| mark(w, ddot)).collect(),
        plain,
        dotted,
        doubled,
    })
}

impl Marked {
    fn alphabet(&self) -> Result<Alphabet, EncodeError> {
        let names = self.plain.iter().chain(&self.dotted).chain(&self.doubled).cloned();
        Ok(Alphabet::letters(names.chain([CENT.to_string(), HASH.to_string()]))?)
    }
}

/// `Σ`, the dotted and double-dotted copies, `cent` and `hash`.
pub fn lemma_alphabet<S: AsRef<str>>(words: &[Vec<S>]) -> Result<Alphabet, EncodeError> {
    marked(words)?.alphabet()
}

/// `u ¢ v # #^ω` for 1-based index sequences into `words`.
pub fn lemma_word<S: AsRef<str>>(words: &[Vec<S>], u: &[usize], v: &[usize]) -> Result<LassoWord, EncodeError> {
    let m = marked(words)?;
    let pick = |zone: &[Vec<String>], seq: &[usize]| -> Result<Vec<String>, EncodeError> {
        let mut out = vec![];
        for &i in seq {
            out.extend(i.checked_sub(1).and_then(|k| zone.get(k)).ok_or(EncodeError::BadIndex(i))?.iter().cloned());
        }
        Ok(out)
    };
    let mut prefix = pick(&m.first, u)?;
    prefix.push(CENT.into());
    prefix.extend(pick(&m.second, v)?);
    prefix.push(HASH.into());
    Ok(LassoWord::from_symbols(m.alphabet()?, &prefix, &[HASH.to_string()]).expect("letters are generated from the alphabet"))
}

/// `φ¹ ∧ φ²`: the layout plus either exact correspondence of the two word
/// sequences or equality of their lengths.
pub fn lemma_correspondence<S: AsRef<str>>(words: &[Vec<S>], variant: LemmaVariant) -> Result<Formula, EncodeError> {
    let m = marked(words)?;
    let bottom = &m.plain[0];
    let block = |w: &Vec<String>| word_block(w, 0).expect("words are non-empty");
    let first: Vec<Formula> = m.first.iter().map(block).collect();
    let second: Vec<Formula> = m.second.iter().map(block).collect();
    let plain = any_of(m.plain.iter().cloned(), bottom);
    let dotted = any_of(m.dotted.iter().cloned(), bottom);
    let doubled = any_of(m.doubled.iter().cloned(), bottom);
    // A block followed by the next block's lead or the closing marker.
    let delimit = |blocks: &[Formula], next: &Formula, marker: &str| -> Vec<Formula> {
        blocks.iter().zip(words).map(|(b, w)| b.clone().and(next.clone().or(Formula::atom(marker)).at(w.len() as u64))).collect()
    };
    let first_delimited = delimit(&first, &dotted, CENT);
    let second_delimited = delimit(&second, &doubled, HASH);
    let chi_first = Formula::or_all(first_delimited.iter().cloned()).expect("word sets are non-empty");
    let chi_second = Formula::or_all(second_delimited.iter().cloned()).expect("word sets are non-empty");
    let layout = [
        Formula::atom(CENT).shift(var("x")),
        Formula::atom(HASH).shift(offset(&["x", "y"], 1)),
        Formula::always(var("x"), plain.clone().or(dotted.clone())),
        Formula::always(var("y"), plain.or(doubled.clone())).shift(offset(&["x"], 1)),
        Formula::box_inf(Formula::atom(HASH)).shift(offset(&["x", "y"], 1)),
        Formula::or_all(first.iter().cloned()).expect("non-empty").and(Formula::always(var("x"), dotted.implies(chi_first.clone()))),
        Formula::or_all(second.iter().cloned())
            .expect("non-empty")
            .and(Formula::always(var("y"), doubled.implies(chi_second.clone())))
            .shift(offset(&["x"], 1)),
    ];
    let phi1 = Formula::exists("x", Formula::exists("y", Formula::and_all(layout).expect("non-empty")));
    let phi2 = match variant {
        // Delimited blocks: a word never matches inside a longer one.
        LemmaVariant::Exact => correspondence(&first_delimited, &second_delimited, &first_delimited, &second_delimited, CENT),
        LemmaVariant::CountOnly => {
            let n = first.len();
            correspondence(&first, &second, &vec![chi_first; n], &vec![chi_second; n], CENT)
        }
    };
    Ok(phi1.and(phi2))
}
