//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tel_core::encode::BuchiAutomaton;
use tel_core::translate::{AllenKind, Ltl, Tcl};
use tel_core::{Alphabet, Formula, LassoWord, Letter, TimeTerm};

pub const LETTERS: [&str; 3] = ["a", "b", "c"];
pub const PROPS: [&str; 2] = ["p", "q"];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn letters() -> Alphabet {
    Alphabet::letters(LETTERS).unwrap()
}

pub fn props() -> Alphabet {
    Alphabet::props(PROPS).unwrap()
}

/// Constants 1..=3, or — when variables are in scope — `x`, `x+k` or `2x`.
pub fn term(rng: &mut StdRng, vars: &[String]) -> TimeTerm {
    if vars.is_empty() || rng.random_bool(0.3) {
        return TimeTerm::constant(rng.random_range(1..=3));
    }
    let x = TimeTerm::var(vars[rng.random_range(0..vars.len())].clone());
    match rng.random_range(0..3) {
        0 => x,
        1 => x.plus(rng.random_range(1..=2)),
        _ => TimeTerm::repeat(2, &x),
    }
}

fn atom(rng: &mut StdRng, atoms: &[&str]) -> Formula {
    Formula::atom(atoms[rng.random_range(0..atoms.len())])
}

/// A formula of depth at most `depth` over `atoms`. At most `quants` more
/// quantifiers may be nested; bound variables are `x0`, `x1`, … by depth,
/// so the result is closed.
pub fn formula_over(rng: &mut StdRng, atoms: &[&str], depth: usize, quants: usize) -> Formula {
    gen(rng, atoms, depth, quants, &mut vec![])
}

pub fn formula(rng: &mut StdRng, depth: usize) -> Formula {
    formula_over(rng, &LETTERS, depth, 2)
}

/// Quantifier-free, constant terms only.
pub fn qf_formula(rng: &mut StdRng, atoms: &[&str], depth: usize) -> Formula {
    formula_over(rng, atoms, depth, 0)
}

fn gen(rng: &mut StdRng, atoms: &[&str], depth: usize, quants: usize, vars: &mut Vec<String>) -> Formula {
    if depth <= 1 || rng.random_bool(0.1) {
        return atom(rng, atoms);
    }
    let d = depth - 1;
    let kinds = if quants > 0 { 8 } else { 6 };
    match rng.random_range(0..kinds) {
        0 => gen(rng, atoms, d, quants, vars).not(),
        1 => gen(rng, atoms, d, quants, vars).and(gen(rng, atoms, d, quants, vars)),
        2 => gen(rng, atoms, d, quants, vars).or(gen(rng, atoms, d, quants, vars)),
        3 => {
            let t = term(rng, vars);
            gen(rng, atoms, d, quants, vars).shift(t)
        }
        4 => {
            let t = term(rng, vars);
            Formula::always(t, gen(rng, atoms, d, quants, vars))
        }
        5 => {
            let t = term(rng, vars);
            Formula::sometime(t, gen(rng, atoms, d, quants, vars))
        }
        k => {
            let x = format!("x{}", vars.len());
            vars.push(x.clone());
            let body = gen(rng, atoms, d, quants - 1, vars);
            vars.pop();
            if k == 6 {
                Formula::exists(x, body)
            } else {
                Formula::forall(x, body)
            }
        }
    }
}

/// Letters-mode lasso with `ℓ ≤ max_prefix` and `1 ≤ p ≤ max_loop`.
pub fn lasso(rng: &mut StdRng, alphabet: &Alphabet, max_prefix: usize, max_loop: usize) -> LassoWord {
    let l = rng.random_range(0..=max_prefix);
    let p = rng.random_range(1..=max_loop);
    let n = alphabet.len() as u32;
    let letter = |rng: &mut StdRng| match alphabet.mode() {
        tel_core::Mode::Letters => Letter::single(rng.random_range(0..n)),
        tel_core::Mode::Props => Letter::from_ids((0..n).filter(|_| rng.random_bool(0.5))),
    };
    let prefix = (0..l).map(|_| letter(rng)).collect();
    let cycle = (0..p).map(|_| letter(rng)).collect();
    LassoWord::new(alphabet.clone(), prefix, cycle).unwrap()
}

pub fn ltl(rng: &mut StdRng, depth: usize) -> Ltl {
    if depth <= 1 || rng.random_bool(0.2) {
        return Ltl::atom(PROPS[rng.random_range(0..PROPS.len())]);
    }
    let mut sub = || Box::new(ltl(rng, depth - 1));
    let (a, b) = (sub(), sub());
    match rng.random_range(0..11) {
        0 => Ltl::Not(a),
        1 => Ltl::And(a, b),
        2 => Ltl::Or(a, b),
        3 => Ltl::Next(a),
        4 => Ltl::Finally(a),
        5 => Ltl::Globally(a),
        6 => Ltl::Until(a, b),
        7 => Ltl::WeakUntil(a, b),
        8 => Ltl::StrongRelease(a, b),
        9 => Ltl::Release(a, b),
        _ => Ltl::atom(PROPS[rng.random_range(0..PROPS.len())]),
    }
}

/// A Boolean combination of `p` and `q`, used as an Allen operand.
pub fn tcl_operand(rng: &mut StdRng, depth: usize) -> Tcl {
    if depth <= 1 || rng.random_bool(0.5) {
        return Tcl::atom(PROPS[rng.random_range(0..PROPS.len())]);
    }
    let kind = rng.random_range(0..3);
    let mut sub = || Box::new(tcl_operand(rng, depth - 1));
    match kind {
        0 => Tcl::Not(sub()),
        1 => Tcl::And(sub(), sub()),
        _ => Tcl::Or(sub(), sub()),
    }
}

pub fn tcl_row(rng: &mut StdRng, kind: AllenKind) -> Tcl {
    Tcl::allen(kind, tcl_operand(rng, 2), tcl_operand(rng, 2))
}

/// Whether the tile word is a run: tile 1 carries the initial state and
/// every tile's `(state, letter)` steps to the next tile's state.
pub fn is_run(a: &BuchiAutomaton, w: &LassoWord) -> bool {
    let n = w.canonical_positions() as u64;
    let tile = |i: u64| -> (String, String) {
        let letter = w.letter_at(i);
        let name = w.alphabet().symbol(letter.ids()[0]);
        let (q, x) = name.split_once("__").expect("tiles are q__a");
        (q.to_string(), x.to_string())
    };
    if tile(1).0 != a.initial() {
        return false;
    }
    (1..=n).all(|i| {
        let ((p, x), (q, _)) = (tile(i), tile(i + 1));
        a.transitions().iter().any(|(f, l, t)| *f == p && *l == x && *t == q)
    })
}

/// Every lasso over `alphabet` with `ℓ + p ≤ max_total`.
pub fn all_lassos(alphabet: &Alphabet, max_total: usize) -> Vec<LassoWord> {
    let n = alphabet.len() as u32;
    let mut out = vec![];
    for total in 1..=max_total {
        for p in 1..=total {
            let l = total - p;
            let count = (n as usize).pow(total as u32);
            for mut code in 0..count {
                let mut letters = Vec::with_capacity(total);
                for _ in 0..total {
                    letters.push(Letter::single((code % n as usize) as u32));
                    code /= n as usize;
                }
                let cycle = letters.split_off(l);
                out.push(LassoWord::new(alphabet.clone(), letters, cycle).unwrap());
            }
        }
    }
    out
}
