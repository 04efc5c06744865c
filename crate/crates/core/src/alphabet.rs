use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::AlphabetError;

/// How atoms are read at a position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Exactly one symbol holds at every position.
    Letters,
    /// Any subset of the symbols holds at a position.
    Props,
}

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    symbols: Vec<String>,
    index: HashMap<String, u32>,
    mode: Mode,
}

/// Ordered, non-empty set of unique symbols. Cheap to clone.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    inner: Arc<Inner>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I, mode: Mode) -> Result<Alphabet, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(AlphabetError::Empty);
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if !is_identifier(s) {
                return Err(AlphabetError::BadSymbol(s.clone()));
            }
            if index.insert(s.clone(), i as u32).is_some() {
                return Err(AlphabetError::Duplicate(s.clone()));
            }
        }
        Ok(Alphabet { inner: Arc::new(Inner { symbols, index, mode }) })
    }

    pub fn letters<I, S>(symbols: I) -> Result<Alphabet, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Alphabet::new(symbols, Mode::Letters)
    }

    pub fn props<I, S>(symbols: I) -> Result<Alphabet, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Alphabet::new(symbols, Mode::Props)
    }

    pub fn mode(&self) -> Mode {
        self.inner.mode
    }

    pub fn symbols(&self) -> &[String] {
        &self.inner.symbols
    }

    pub fn len(&self) -> usize {
        self.inner.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn id(&self, symbol: &str) -> Option<u32> {
        self.inner.index.get(symbol).copied()
    }

    pub fn symbol(&self, id: u32) -> &str {
        &self.inner.symbols[id as usize]
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.inner.index.contains_key(symbol)
    }

    /// The same symbols under a different mode.
    pub fn with_mode(&self, mode: Mode) -> Alphabet {
        if mode == self.mode() {
            return self.clone();
        }
        Alphabet::new(self.symbols().iter().cloned(), mode).expect("symbols already validated")
    }

    /// This alphabet followed by the symbols of `extra` it lacks.
    pub fn extended<'a, I: IntoIterator<Item = &'a str>>(&self, extra: I) -> Alphabet {
        let mut symbols = self.symbols().to_vec();
        let mut added = false;
        for s in extra {
            if !symbols.iter().any(|t| t == s) {
                symbols.push(s.to_string());
                added = true;
            }
        }
        if !added {
            return self.clone();
        }
        Alphabet::new(symbols, self.mode()).unwrap_or_else(|_| self.clone())
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Alphabet")
            .field("symbols", &self.inner.symbols)
            .field("mode", &self.inner.mode)
            .finish()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
