//! Finite traces and ultimately periodic ω-words, 1-indexed.

use std::fmt;

use crate::alphabet::{Alphabet, Mode};
use crate::error::WordError;

/// The content of one position: a sorted set of symbol ids. In letters mode
/// it holds exactly one id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Letter(Vec<u32>);

impl Letter {
    pub fn single(id: u32) -> Letter {
        Letter(vec![id])
    }

    pub fn empty() -> Letter {
        Letter(Vec::new())
    }

    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Letter {
        let mut v: Vec<u32> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Letter(v)
    }

    pub fn contains(&self, id: u32) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn ids(&self) -> &[u32] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols<'a>(&'a self, alphabet: &'a Alphabet) -> impl Iterator<Item = &'a str> + 'a {
        self.0.iter().map(move |&i| alphabet.symbol(i))
    }

    fn render(&self, alphabet: &Alphabet) -> String {
        match alphabet.mode() {
            Mode::Letters => self.symbols(alphabet).collect::<Vec<_>>().join(","),
            Mode::Props => format!("{{{}}}", self.symbols(alphabet).collect::<Vec<_>>().join(",")),
        }
    }
}

fn check_letters(alphabet: &Alphabet, letters: &[Letter]) -> Result<(), WordError> {
    for (i, l) in letters.iter().enumerate() {
        if let Some(&id) = l.ids().iter().find(|&&id| id as usize >= alphabet.len()) {
            return Err(WordError::UnknownSymbol(format!("#{id}")));
        }
        if alphabet.mode() == Mode::Letters && l.ids().len() != 1 {
            return Err(WordError::NotALetter(i + 1));
        }
    }
    Ok(())
}

/// A non-empty finite sequence of positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTrace {
    alphabet: Alphabet,
    positions: Vec<Letter>,
}

impl FiniteTrace {
    pub fn new(alphabet: Alphabet, positions: Vec<Letter>) -> Result<FiniteTrace, WordError> {
        if positions.is_empty() {
            return Err(WordError::EmptyTrace);
        }
        check_letters(&alphabet, &positions)?;
        Ok(FiniteTrace { alphabet, positions })
    }

    /// Builds a props-mode trace from symbol sets.
    pub fn from_sets<S: AsRef<str>>(alphabet: Alphabet, sets: &[Vec<S>]) -> Result<FiniteTrace, WordError> {
        let positions = sets.iter().map(|s| letter_from_symbols(&alphabet, s)).collect::<Result<_, _>>()?;
        FiniteTrace::new(alphabet, positions)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn positions(&self) -> &[Letter] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The position `i` (1-indexed), if inside the trace.
    pub fn get(&self, i: usize) -> Option<&Letter> {
        i.checked_sub(1).and_then(|j| self.positions.get(j))
    }
}

fn letter_from_symbols<S: AsRef<str>>(alphabet: &Alphabet, symbols: &[S]) -> Result<Letter, WordError> {
    let ids = symbols
        .iter()
        .map(|s| alphabet.id(s.as_ref()).ok_or_else(|| WordError::UnknownSymbol(s.as_ref().to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Letter::from_ids(ids))
}

/// The ω-word `prefix · loop^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoWord {
    alphabet: Alphabet,
    prefix: Vec<Letter>,
    cycle: Vec<Letter>,
}

impl LassoWord {
    pub fn new(alphabet: Alphabet, prefix: Vec<Letter>, cycle: Vec<Letter>) -> Result<LassoWord, WordError> {
        if cycle.is_empty() {
            return Err(WordError::EmptyLoop);
        }
        check_letters(&alphabet, &prefix)?;
        check_letters(&alphabet, &cycle)?;
        Ok(LassoWord { alphabet, prefix, cycle })
    }

    /// Letters-mode word from symbol names.
    pub fn from_symbols<S: AsRef<str>>(alphabet: Alphabet, prefix: &[S], cycle: &[S]) -> Result<LassoWord, WordError> {
        let conv = |xs: &[S]| -> Result<Vec<Letter>, WordError> {
            xs.iter().map(|s| letter_from_symbols(&alphabet, std::slice::from_ref(s))).collect()
        };
        let (p, c) = (conv(prefix)?, conv(cycle)?);
        LassoWord::new(alphabet, p, c)
    }

    /// Embeds a props-mode trace as `trace · ∅^ω`.
    pub fn from_finite(trace: &FiniteTrace) -> Result<LassoWord, WordError> {
        if trace.alphabet.mode() != Mode::Props {
            return Err(WordError::ModeMismatch { expected: Mode::Props });
        }
        Ok(LassoWord { alphabet: trace.alphabet.clone(), prefix: trace.positions.clone(), cycle: vec![Letter::empty()] })
    }

    /// Parses `p1;p2;… | l1;…`. Letters-mode positions are symbol names;
    /// props-mode positions are `{p,q}` sets (a bare name is a singleton).
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<LassoWord, WordError> {
        let (prefix, cycle) = split_literal(text)?;
        let conv = |parts: Vec<Vec<String>>| -> Result<Vec<Letter>, WordError> {
            parts.iter().map(|syms| letter_from_symbols(alphabet, syms)).collect()
        };
        LassoWord::new(alphabet.clone(), conv(prefix)?, conv(cycle)?)
    }

    /// Parses a literal, taking symbols in order of first appearance as the
    /// alphabet. A literal using `{…}` sets is read in props mode.
    pub fn parse_inferring(text: &str, mode: Option<Mode>) -> Result<LassoWord, WordError> {
        let mode = mode.unwrap_or(if text.contains('{') { Mode::Props } else { Mode::Letters });
        let (prefix, cycle) = split_literal(text)?;
        let mut symbols: Vec<String> = Vec::new();
        for s in prefix.iter().chain(cycle.iter()).flatten() {
            if !symbols.contains(s) {
                symbols.push(s.clone());
            }
        }
        if symbols.is_empty() {
            symbols.push("p".to_string());
        }
        let alphabet = Alphabet::new(symbols, mode).map_err(|e| WordError::Literal(e.to_string()))?;
        LassoWord::parse(text, &alphabet)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Letter] {
        &self.cycle
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn loop_len(&self) -> usize {
        self.cycle.len()
    }

    /// `ℓ + p`: the number of distinct suffixes.
    pub fn canonical_positions(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// The letter at position `i ≥ 1`.
    pub fn letter_at(&self, i: u64) -> &Letter {
        let c = self.canonical_position(i) as usize;
        if c <= self.prefix.len() {
            &self.prefix[c - 1]
        } else {
            &self.cycle[c - self.prefix.len() - 1]
        }
    }

    /// The least position whose suffix equals the suffix at `i`.
    pub fn canonical_position(&self, i: u64) -> u64 {
        assert!(i >= 1, "positions start at 1");
        let l = self.prefix.len() as u64;
        let p = self.cycle.len() as u64;
        if i <= l + p {
            i
        } else {
            l + 1 + (i - l - 1) % p
        }
    }

    /// Same word with the alphabet replaced by a superset.
    pub fn with_alphabet(&self, alphabet: &Alphabet) -> Result<LassoWord, WordError> {
        let remap = |xs: &[Letter]| -> Result<Vec<Letter>, WordError> {
            xs.iter()
                .map(|l| {
                    let ids = l
                        .symbols(&self.alphabet)
                        .map(|s| alphabet.id(s).ok_or_else(|| WordError::UnknownSymbol(s.to_string())))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(Letter::from_ids(ids))
                })
                .collect()
        };
        LassoWord::new(alphabet.clone(), remap(&self.prefix)?, remap(&self.cycle)?)
    }

    /// Same word with position `i` (inside `1..=ℓ+p`) replaced.
    pub fn with_letter(&self, i: usize, letter: Letter) -> Result<LassoWord, WordError> {
        let mut w = self.clone();
        let l = w.prefix.len();
        if i == 0 || i > w.canonical_positions() {
            return Err(WordError::Literal(format!("position {i} outside 1..={}", w.canonical_positions())));
        }
        if i <= l {
            w.prefix[i - 1] = letter;
        } else {
            w.cycle[i - l - 1] = letter;
        }
        check_letters(&w.alphabet, &w.prefix)?;
        check_letters(&w.alphabet, &w.cycle)?;
        Ok(w)
    }

    pub fn to_literal(&self) -> String {
        let part = |xs: &[Letter]| xs.iter().map(|l| l.render(&self.alphabet)).collect::<Vec<_>>().join(";");
        let prefix = part(&self.prefix);
        if prefix.is_empty() {
            format!("| {}", part(&self.cycle))
        } else {
            format!("{prefix} | {}", part(&self.cycle))
        }
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

type Positions = Vec<Vec<String>>;

fn split_literal(text: &str) -> Result<(Positions, Positions), WordError> {
    let bar = find_top_level_bar(text).ok_or_else(|| WordError::Literal("missing `|` between prefix and loop".into()))?;
    let prefix = parse_positions(&text[..bar])?;
    let cycle = parse_positions(&text[bar + 1..])?;
    if cycle.is_empty() {
        return Err(WordError::EmptyLoop);
    }
    Ok((prefix, cycle))
}

fn find_top_level_bar(text: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in text.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            '|' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn parse_positions(text: &str) -> Result<Positions, WordError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(';')
        .map(|pos| {
            let pos = pos.trim();
            if let Some(inner) = pos.strip_prefix('{') {
                let inner = inner
                    .strip_suffix('}')
                    .ok_or_else(|| WordError::Literal(format!("unclosed set `{pos}`")))?;
                Ok(inner.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
            } else if pos.is_empty() {
                Err(WordError::Literal("empty position".into()))
            } else {
                Ok(vec![pos.to_string()])
            }
        })
        .collect()
}
