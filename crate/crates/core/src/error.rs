use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("variable `{0}` bound to 0; time values are positive")]
    NonPositiveBinding(String),
    #[error("the constant 0 is not a time value")]
    ZeroConstant,
    #[error("time value overflow")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("alphabet is empty")]
    Empty,
    #[error("duplicate symbol `{0}`")]
    Duplicate(String),
    #[error("`{0}` is not an identifier")]
    BadSymbol(String),
}

/// Byte offsets `[begin, end)` into parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub begin: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(begin: usize, end: usize) -> SourceSpan {
        SourceSpan { begin, end: end.max(begin) }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.begin, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownSymbol(String),
    ZeroConstant,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at {span}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

impl ParseError {
    pub fn syntax(span: SourceSpan, message: impl Into<String>) -> ParseError {
        ParseError { kind: ParseErrorKind::Syntax(message.into()), span }
    }
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            ParseErrorKind::ZeroConstant => f.write_str("the constant 0 is not a time value"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("loop must be non-empty")]
    EmptyLoop,
    #[error("trace must be non-empty")]
    EmptyTrace,
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("position {0} must hold exactly one letter")]
    NotALetter(usize),
    #[error("operation requires {expected:?} mode")]
    ModeMismatch { expected: crate::Mode },
    #[error("malformed word literal: {0}")]
    Literal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("evaluation exceeded the step limit of {0}")]
    StepLimitExceeded(u64),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("formula is not quantifier free")]
    NotQuantifierFree,
    #[error("formula has free variables: {0:?}")]
    OpenFormula(Vec<String>),
    #[error("position must be at least 1")]
    BadPosition,
    #[error("time value overflow")]
    Overflow,
    #[error("operation requires {expected:?} mode")]
    ModeMismatch { expected: crate::Mode },
    #[error("word and formula were built over different alphabets")]
    AlphabetMismatch,
    #[error(transparent)]
    Term(#[from] TermError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("formula is not rooted at an existential quantifier")]
    NotExistsRooted,
    #[error("formula is not rooted at a universal quantifier")]
    NotForallRooted,
    #[error("trace step {step} does not apply: {reason}")]
    Replay { step: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("block template needs at least one part")]
    EmptyBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("word is empty")]
    EmptyWord,
    #[error("word set is empty or contains an empty word")]
    EmptyWordSet,
    /// `BadIndex(0)` also reports an empty index sequence.
    #[error("index {0} does not name a pair (indices are 1-based, at least one is required)")]
    BadIndex(usize),
    #[error("generated formula has {nodes} nodes, above the budget of {budget}")]
    TooLarge { nodes: usize, budget: usize },
    #[error("invalid automaton: {0}")]
    Automaton(String),
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("symbol `{0}` clashes with a generated marker")]
    NameClash(String),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

#[derive(Debug, Error)]
pub enum CohortError {
    #[error("malformed row at line {0}: {1}")]
    MalformedRow(u64, String),
    #[error("non-positive time at line {0}")]
    NonPositiveTime(u64),
    #[error("file has no data rows")]
    EmptyFile,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Any error raised by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Cohort(#[from] CohortError),
}
