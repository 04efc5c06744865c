use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::EncodeError;
use crate::formula::Formula;
use crate::term::TimeTerm;

use super::{any_of, product_letter};

#[derive(Deserialize)]
struct RawAutomaton {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: String,
    transitions: Vec<(String, String, String)>,
    accepting: Vec<String>,
}

/// `(Q, Σ, q₀, Δ, F)`. Runs are ω-words over the tiles `q__a`: the state a
/// tile carries is the one the automaton is in when it reads the letter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAutomaton")]
pub struct BuchiAutomaton {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: String,
    transitions: Vec<(String, String, String)>,
    accepting: Vec<String>,
}

impl TryFrom<RawAutomaton> for BuchiAutomaton {
    type Error = EncodeError;

    fn try_from(raw: RawAutomaton) -> Result<BuchiAutomaton, EncodeError> {
        BuchiAutomaton::new(raw.states, raw.alphabet, raw.initial, raw.transitions, raw.accepting)
    }
}

fn distinct(what: &str, items: &[String]) -> Result<(), EncodeError> {
    let mut seen = BTreeSet::new();
    if items.is_empty() {
        return Err(EncodeError::Automaton(format!("no {what}")));
    }
    match items.iter().find(|s| !seen.insert(s.as_str())) {
        Some(dup) => Err(EncodeError::Automaton(format!("duplicate {what} `{dup}`"))),
        None => Ok(()),
    }
}

impl BuchiAutomaton {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        initial: String,
        transitions: Vec<(String, String, String)>,
        accepting: Vec<String>,
    ) -> Result<BuchiAutomaton, EncodeError> {
        distinct("states", &states)?;
        distinct("letters", &alphabet)?;
        let state = |q: &String| {
            if states.contains(q) {
                Ok(())
            } else {
                Err(EncodeError::Automaton(format!("unknown state `{q}`")))
            }
        };
        state(&initial)?;
        for (p, a, q) in &transitions {
            state(p)?;
            state(q)?;
            if !alphabet.contains(a) {
                return Err(EncodeError::Automaton(format!("unknown letter `{a}`")));
            }
        }
        accepting.iter().try_for_each(state)?;
        let transitions: Vec<_> = transitions.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let accepting: Vec<_> = states.iter().filter(|q| accepting.contains(q)).cloned().collect();
        let automaton = BuchiAutomaton { states, alphabet, initial, transitions, accepting };
        automaton.product_alphabet()?;
        Ok(automaton)
    }

    pub fn from_json(text: &str) -> Result<BuchiAutomaton, EncodeError> {
        serde_json::from_str(text).map_err(|e| EncodeError::Automaton(e.to_string()))
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> &str {
        &self.initial
    }

    pub fn transitions(&self) -> &[(String, String, String)] {
        &self.transitions
    }

    pub fn accepting(&self) -> &[String] {
        &self.accepting
    }

    pub fn tile(q: &str, a: &str) -> String {
        product_letter(q, a)
    }

    /// All tiles `q__a`, state-major.
    pub fn product_alphabet(&self) -> Result<Alphabet, EncodeError> {
        let tiles = self.states.iter().flat_map(|q| self.alphabet.iter().map(move |a| Self::tile(q, a)));
        Ok(Alphabet::letters(tiles)?)
    }

    fn bottom_letter(&self) -> String {
        Self::tile(&self.states[0], &self.alphabet[0])
    }

    /// Tiles `q__b` for every successor `q` of `(p, a)` and every `b`.
    fn successor_tiles(&self, p: &str, a: &str) -> Vec<String> {
        self.transitions
            .iter()
            .filter(|(from, letter, _)| from == p && letter == a)
            .flat_map(|(_, _, q)| self.alphabet.iter().map(move |b| Self::tile(q, b)))
            .collect()
    }

    /// `φ⁰ ∧ φ¹`: the first tile carries `q₀`, and every tile is followed by
    /// one whose state is a `Δ`-successor.
    pub fn encode_runs(&self) -> Formula {
        let bottom = self.bottom_letter();
        let q0 = &self.initial;
        let initial = Formula::or_all(self.alphabet.iter().flat_map(|a| {
            let succ = self.successor_tiles(q0, a);
            succ.into_iter().map(move |t| Formula::atom(Self::tile(q0, a)).and(Formula::atom(t).at(1)))
        }))
        .unwrap_or_else(|| Formula::bottom(&bottom));
        let x = TimeTerm::var("x");
        let steps = self.states.iter().flat_map(|p| {
            self.alphabet.iter().map(move |a| (p, a))
        });
        let steps = steps.map(|(p, a)| {
            let next = any_of(self.successor_tiles(p, a), &bottom).shift(x.clone().plus(1));
            Formula::forall("x", Formula::atom(Self::tile(p, a)).shift(x.clone()).implies(next))
        });
        let steps = Formula::and_all(steps).expect("states and letters are non-empty");
        initial.and(steps)
    }

    /// `∀y ∃x ⋁_{p∈F, a∈Σ} (p__a)_{x+y}`: an accepting tile occurs
    /// infinitely often.
    pub fn encode_acceptance(&self) -> Formula {
        let tiles = self.accepting.iter().flat_map(|p| self.alphabet.iter().map(move |a| Self::tile(p, a)));
        let at = TimeTerm::sum(TimeTerm::var("x"), TimeTerm::var("y"));
        let body = any_of(tiles, &self.bottom_letter()).shift(at);
        Formula::forall("y", Formula::exists("x", body))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{evaluate, language_member, EvalConfig, Truth3};
    use crate::term::Env;
    use crate::words::LassoWord;

    fn ping_pong() -> BuchiAutomaton {
        BuchiAutomaton::from_json(
            r#"{"states":["q0","q1"],"alphabet":["a","b"],"initial":"q0",
                "transitions":[["q0","a","q1"],["q1","b","q0"]],"accepting":["q1"]}"#,
        )
        .unwrap()
    }

    fn run_word(a: &BuchiAutomaton, prefix: &[&str], cycle: &[&str]) -> LassoWord {
        LassoWord::from_symbols(a.product_alphabet().unwrap(), prefix, cycle).unwrap()
    }

    fn cfg(w: &LassoWord) -> EvalConfig {
        let b = (w.prefix_len() + 2 * w.loop_len()) as u64;
        EvalConfig::default().with_bound(b).assuming_complete(true)
    }

    #[test]
    fn validation() {
        let bad = r#"{"states":["q0"],"alphabet":["a"],"initial":"q9","transitions":[],"accepting":[]}"#;
        assert!(matches!(BuchiAutomaton::from_json(bad), Err(EncodeError::Automaton(_))));
        let bad = r#"{"states":["q0"],"alphabet":["a"],"initial":"q0","transitions":[["q0","z","q0"]],"accepting":[]}"#;
        assert!(matches!(BuchiAutomaton::from_json(bad), Err(EncodeError::Automaton(_))));
        let a = ping_pong();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(BuchiAutomaton::from_json(&json).unwrap(), a);
    }

    #[test]
    fn runs() {
        let a = ping_pong();
        let phi = a.encode_runs();
        let good = run_word(&a, &[], &["q0__a", "q1__b"]);
        assert_eq!(language_member(&good, &phi, &cfg(&good)).unwrap(), Truth3::True);
        let bad_start = run_word(&a, &["q1__a"], &["q1__b", "q0__a"]);
        assert_eq!(language_member(&bad_start, &phi, &cfg(&bad_start)).unwrap(), Truth3::False);
    }

    #[test]
    fn the_failing_step_is_the_witness() {
        let a = ping_pong();
        // Position 3 holds q0__b, which has no successor at all.
        let w = run_word(&a, &["q0__a", "q1__b", "q0__b"], &["q1__b", "q0__a"]);
        let Formula::And(_, steps) = a.encode_runs() else { unreachable!() };
        let mut failing = vec![];
        let mut stack = vec![*steps];
        while let Some(f) = stack.pop() {
            match f {
                Formula::And(l, r) => stack.extend([*l, *r]),
                step => {
                    let e = evaluate(&w, 1, &step, &Env::new(), &cfg(&w)).unwrap();
                    if e.truth == Truth3::False {
                        failing.push(e.witness);
                    }
                }
            }
        }
        assert_eq!(failing, vec![vec![("x".to_string(), 2)]]);
    }

    #[test]
    fn acceptance() {
        let a = ping_pong();
        let phi = a.encode_acceptance();
        let w = run_word(&a, &[], &["q0__a", "q1__b"]);
        assert_eq!(language_member(&w, &phi, &cfg(&w)).unwrap(), Truth3::True);
        let w = run_word(&a, &["q1__a"], &["q0__b"]);
        assert_eq!(language_member(&w, &phi, &cfg(&w)).unwrap(), Truth3::False);
        let never = BuchiAutomaton::new(
            vec!["q0".into()],
            vec!["a".into()],
            "q0".into(),
            vec![("q0".into(), "a".into(), "q0".into())],
            vec![],
        )
        .unwrap();
        let w = run_word(&never, &[], &["q0__a"]);
        assert_eq!(language_member(&w, &never.encode_acceptance(), &cfg(&w)).unwrap(), Truth3::False);
    }
}
