use std::fmt;

use crate::formula::Formula;
use crate::words::LassoWord;

use super::block::block_open;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AllenKind {
    Meets,
    Before,
    StartedBy,
    FinishedBy,
    Contains,
    Overlaps,
}

impl AllenKind {
    pub const ALL: [AllenKind; 6] = [
        AllenKind::Meets,
        AllenKind::Before,
        AllenKind::StartedBy,
        AllenKind::FinishedBy,
        AllenKind::Contains,
        AllenKind::Overlaps,
    ];

    pub fn from_letter(s: &str) -> Option<AllenKind> {
        AllenKind::ALL.into_iter().find(|k| k.letter() == s)
    }

    pub fn letter(self) -> &'static str {
        match self {
            AllenKind::Meets => "A",
            AllenKind::Before => "L",
            AllenKind::StartedBy => "B",
            AllenKind::FinishedBy => "E",
            AllenKind::Contains => "D",
            AllenKind::Overlaps => "O",
        }
    }

    /// The segments `(φ, ψ)` must follow from `s` on; the last one is
    /// co-finite.
    pub fn pattern(self) -> &'static [(bool, bool)] {
        const NEITHER: (bool, bool) = (false, false);
        match self {
            AllenKind::Meets => &[(true, false), (false, true), NEITHER],
            AllenKind::Before => &[(true, false), NEITHER, (false, true), NEITHER],
            AllenKind::StartedBy => &[(true, true), (true, false), NEITHER],
            AllenKind::FinishedBy => &[(true, false), (true, true), NEITHER],
            AllenKind::Contains => &[(true, false), (true, true), (true, false), NEITHER],
            AllenKind::Overlaps => &[(true, false), (true, true), (false, true), NEITHER],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tcl {
    Atom(String),
    Not(Box<Tcl>),
    And(Box<Tcl>, Box<Tcl>),
    Or(Box<Tcl>, Box<Tcl>),
    Allen(AllenKind, Box<Tcl>, Box<Tcl>),
}

impl Tcl {
    pub fn atom(name: impl Into<String>) -> Tcl {
        Tcl::Atom(name.into())
    }

    pub fn allen(kind: AllenKind, l: Tcl, r: Tcl) -> Tcl {
        Tcl::Allen(kind, Box::new(l), Box::new(r))
    }
}

struct Operand<'a>(&'a Tcl);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Tcl::Atom(_) | Tcl::Not(_) => write!(f, "{}", self.0),
            other => write!(f, "({other})"),
        }
    }
}

impl fmt::Display for Tcl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tcl::Atom(a) => f.write_str(a),
            Tcl::Not(g) => write!(f, "!{}", Operand(g)),
            Tcl::And(l, r) => write!(f, "{} & {}", Operand(l), Operand(r)),
            Tcl::Or(l, r) => write!(f, "{} | {}", Operand(l), Operand(r)),
            Tcl::Allen(k, l, r) => write!(f, "{} {} {}", Operand(l), k.letter(), Operand(r)),
        }
    }
}

/// Truth at canonical positions `1..=ℓ+p` (index 0 is position 1).
fn vector(w: &LassoWord, phi: &Tcl) -> Vec<bool> {
    let n = w.canonical_positions();
    match phi {
        Tcl::Atom(a) => {
            let id = w.alphabet().id(a);
            (1..=n as u64).map(|i| id.is_some_and(|id| w.letter_at(i).contains(id))).collect()
        }
        Tcl::Not(g) => vector(w, g).into_iter().map(|b| !b).collect(),
        Tcl::And(l, r) => vector(w, l).into_iter().zip(vector(w, r)).map(|(x, y)| x && y).collect(),
        Tcl::Or(l, r) => vector(w, l).into_iter().zip(vector(w, r)).map(|(x, y)| x || y).collect(),
        Tcl::Allen(kind, l, r) => {
            let (vl, vr) = (vector(w, l), vector(w, r));
            let class = |t: u64| {
                let c = w.canonical_position(t) as usize - 1;
                (vl[c], vr[c])
            };
            (1..=n as u64).map(|s| matches_pattern(w, s, kind.pattern(), &class)).collect()
        }
    }
}

/// Each position has exactly one class and consecutive segments have
/// different classes, so the boundaries are forced: every segment but the
/// last is the maximal run of its class.
fn matches_pattern(w: &LassoWord, s: u64, pattern: &[(bool, bool)], class: &dyn Fn(u64) -> (bool, bool)) -> bool {
    let (l, p) = (w.prefix_len() as u64, w.loop_len() as u64);
    let (last, segments) = pattern.split_last().expect("patterns are non-empty");
    let mut t = s;
    for &want in segments {
        let start = t;
        // A run that covers a whole loop never ends.
        let cap = start.max(l + 1) + p;
        while t < cap && class(t) == want {
            t += 1;
        }
        if t == start || t == cap {
            return false;
        }
    }
    (t..t.max(l + 1) + p).all(|j| class(j) == *last)
}

/// Exact TCL satisfaction at position `s ≥ 1`.
pub fn tcl_eval(w: &LassoWord, s: u64, phi: &Tcl) -> bool {
    let c = w.canonical_position(s) as usize;
    vector(w, phi)[c - 1]
}

fn literal(f: &Formula, positive: bool) -> Formula {
    if positive {
        f.clone()
    } else {
        f.clone().not()
    }
}

/// Each Allen operator becomes the open block of its segment pattern.
pub fn tcl_to_tel(phi: &Tcl) -> Formula {
    match phi {
        Tcl::Atom(a) => Formula::atom(a.clone()),
        Tcl::Not(g) => tcl_to_tel(g).not(),
        Tcl::And(l, r) => tcl_to_tel(l).and(tcl_to_tel(r)),
        Tcl::Or(l, r) => tcl_to_tel(l).or(tcl_to_tel(r)),
        Tcl::Allen(kind, l, r) => {
            let (fl, fr) = (tcl_to_tel(l), tcl_to_tel(r));
            let parts: Vec<Formula> =
                kind.pattern().iter().map(|&(a, b)| literal(&fl, a).and(literal(&fr, b))).collect();
            block_open(&parts).expect("patterns are non-empty")
        }
    }
}
