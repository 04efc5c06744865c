//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Some criteria cannot hold as stated; they are run in full, reported as
//! FAIL with the evidence, and listed in `EXPECTED_FAILURES` so that the
//! target as a whole still succeeds. Any other failure, or an expected
//! failure that starts passing, fails the target.

mod common;

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::Rng;

use tel_core::cohort::{ingest_csv, run_query, Bin, IngestOptions, Positions};
use tel_core::encode::{pcp_alphabet, pcp_encode, pcp_witness, product_letter, BuchiAutomaton, PcpInstance};
use tel_core::eval::{eval, evaluate, holds_infinitely_often, CompiledFormula, EvalConfig, Truth3};
use tel_core::rewrite::{
    expand_constant_modalities, negation_free, normalize_shifts, simplify, unfold_exists, unfold_forall,
    DEFAULT_SIZE_GUARD,
};
use tel_core::syntax::parse_formula;
use tel_core::translate::{ltl_eval, ltl_to_tel, tcl_eval, tcl_to_tel, AllenKind, Tcl};
use tel_core::{Alphabet, Env, Formula, LassoWord, Letter, TimeTerm};

/// Criteria that fail for reasons recorded in their detail lines.
const EXPECTED_FAILURES: &[&str] = &["example-2", "identity-suite"];

const EXAMPLE_1: &str = "exists x . [x] a & ([x] b) @ x & ([x] c) @ (2*x) & ([x] a) @ (3*x)";
const EXAMPLE_2: &str = "forall x . a @ x -> ([x] b) @ (x + 1) & a @ (2*x + 1)";
const EXAMPLE_3: &str = "exists x . c @ (2*x + 1) & [x] ((a -> a @ x) & (b -> b @ x) & !c)";

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn f(text: &str) -> Formula {
    parse_formula(text, None).unwrap()
}

fn word(text: &str) -> LassoWord {
    LassoWord::parse(text, &common::letters()).unwrap()
}

/// `a³` style run-length literal: `[("a", 3), ("b", 1)]` → `a;a;a;b`.
fn runs(parts: &[(&str, usize)]) -> String {
    parts.iter().flat_map(|&(s, n)| std::iter::repeat_n(s, n)).collect::<Vec<_>>().join(";")
}

fn within(limit: Duration, started: Instant) -> (bool, String) {
    let took = started.elapsed();
    (took < limit, format!("{:.2}s (limit {}s)", took.as_secs_f64(), limit.as_secs()))
}

fn example_1() -> Outcome {
    let started = Instant::now();
    let phi = f(EXAMPLE_1);
    let cfg = EvalConfig::default();
    let mut bad = vec![];
    for n in 1..=5 {
        let good = format!("{} | a", runs(&[("a", n), ("b", n), ("c", n), ("a", n)]));
        let e = evaluate(&word(&good), 1, &phi, &Env::new(), &cfg).unwrap();
        if e.truth != Truth3::True || e.witness != vec![("x".to_string(), n as u64)] {
            bad.push(format!("n={n}: {:?} {:?}", e.truth, e.witness));
        }
        // First b, first c and last a of the fourth block, each replaced.
        for (pos, by) in [(n + 1, "c"), (2 * n + 1, "a"), (4 * n, "b")] {
            let w = word(&good).with_letter(pos, Letter::single(common::letters().id(by).unwrap())).unwrap();
            let t = eval(&w, 1, &phi, &Env::new(), &cfg).unwrap();
            if t != Truth3::False {
                bad.push(format!("n={n} corrupted at {pos}: {t}"));
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(1), started);
    outcome(bad.is_empty() && fast, format!("5 members, 15 corruptions; {time}; {}", bad.join("; ")))
}

fn example_2() -> Outcome {
    let phi = f(EXAMPLE_2);
    let cfg = EvalConfig::default().with_bound(64);
    let literal = runs(&[("b", 3), ("a", 1), ("b", 3), ("a", 1), ("b", 7), ("a", 1), ("b", 15), ("a", 1), ("b", 31)]);
    let w = word(&format!("{literal} | b"));
    let e = evaluate(&w, 1, &phi, &Env::new(), &cfg).unwrap();
    // The second a sits at position 8.
    let flipped = w.with_letter(8, Letter::single(common::letters().id("b").unwrap())).unwrap();
    let g = evaluate(&flipped, 1, &phi, &Env::new(), &cfg).unwrap();
    let flip_ok = g.truth == Truth3::False && !g.witness.is_empty();
    let literal_ok = e.truth != Truth3::False;
    let extended = word(&format!("{};a;{} | b", literal, runs(&[("b", 63), ("a", 1)])));
    let ext = eval(&extended, 1, &phi, &Env::new(), &cfg).unwrap();
    outcome(
        literal_ok && flip_ok,
        format!(
            "stated word: {} witness {:?} (the a after b^31 needs a at 2*31+1; the b-loop has none); \
             flipped second a: {} witness {:?}; same schedule continued with b^63 a: {}",
            e.truth, e.witness, g.truth, g.witness, ext
        ),
    )
}

fn example_3() -> Outcome {
    let phi = f(EXAMPLE_3);
    let cfg = EvalConfig::default();
    let same_length = |n: usize| -> Vec<String> {
        (0..1usize << n).map(|m| (0..n).map(|k| if m >> k & 1 == 0 { 'a' } else { 'b' }).collect()).collect()
    };
    let lit = |s: &str| s.chars().map(String::from).collect::<Vec<_>>().join(";");
    let mut bad = vec![];
    let mut negatives = 0;
    for w in ["ab", "ba", "aab"] {
        let t = eval(&word(&format!("{};{};c | c", lit(w), lit(w))), 1, &phi, &Env::new(), &cfg).unwrap();
        if t != Truth3::True {
            bad.push(format!("{w}{w}c: {t}"));
        }
        let mut others: Vec<String> = ["ab", "ba", "aab"].iter().map(|s| s.to_string()).collect();
        others.extend(same_length(w.len()));
        others.sort();
        others.dedup();
        for v in others.iter().filter(|v| v.as_str() != w) {
            negatives += 1;
            let t = eval(&word(&format!("{};{};c | c", lit(w), lit(v))), 1, &phi, &Env::new(), &cfg).unwrap();
            if t != Truth3::False {
                bad.push(format!("{w}{v}c: {t}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("3 members, {negatives} non-members; {}", bad.join("; ")))
}

fn truths(w: &LassoWord, f: &Formula, cfg: &EvalConfig) -> Vec<Truth3> {
    let c = CompiledFormula::compile(f, w.alphabet()).unwrap();
    let positions: Vec<u64> = (1..=w.canonical_positions() as u64).collect();
    c.check_many(w, &positions, &Env::new(), cfg).unwrap()
}

/// `∃z`/`∀z` over a random use of `z` in `body`.
fn quantified(rng: &mut StdRng, body: Formula, exists: bool) -> Formula {
    let z = TimeTerm::var("z");
    let body = match rng.random_range(0..4) {
        0 => body.shift(z),
        1 => Formula::always(z, body),
        2 => Formula::sometime(z, body),
        _ => body.shift(z.plus(1)).and(Formula::atom("a")),
    };
    if exists {
        Formula::exists("z", body)
    } else {
        Formula::forall("z", body)
    }
}

fn rewrite_soundness() -> Outcome {
    type Op = fn(&Formula, &Alphabet) -> Formula;
    let ops: [(&str, Op); 6] = [
        ("simplify", |f, _| simplify(f)),
        ("normalize_shifts", |f, _| normalize_shifts(f)),
        ("negation_free", negation_free),
        ("expand_constant_modalities", |f, _| expand_constant_modalities(f, DEFAULT_SIZE_GUARD)),
        ("unfold_exists", |f, _| unfold_exists(f).unwrap()),
        ("unfold_forall", |f, _| unfold_forall(f).unwrap()),
    ];
    let cfg = EvalConfig::default();
    let mut report = vec![];
    let mut failures = 0;
    for (k, (name, op)) in ops.iter().enumerate() {
        let mut rng = common::rng(400 + k as u64);
        let (mut flips, mut regressions, mut compared) = (0, 0, 0);
        for _ in 0..1000 {
            let mut phi = common::formula(&mut rng, 5);
            if name.starts_with("unfold") {
                let body = common::formula_over(&mut rng, &common::LETTERS, 4, 1);
                phi = quantified(&mut rng, body, *name == "unfold_exists");
            }
            let w = common::lasso(&mut rng, &common::letters(), 5, 5);
            let out = op(&phi, w.alphabet());
            for (b, a) in truths(&w, &phi, &cfg).into_iter().zip(truths(&w, &out, &cfg)) {
                compared += 1;
                match (b, a) {
                    (Truth3::True, Truth3::False) | (Truth3::False, Truth3::True) => flips += 1,
                    (Truth3::True | Truth3::False, Truth3::Unknown) => regressions += 1,
                    _ => {}
                }
            }
        }
        failures += flips + regressions;
        report.push(format!("{name}: {compared} positions, {flips} flips, {regressions} regressions"));
    }
    outcome(failures == 0, report.join("; "))
}

fn ltl_differential() -> Outcome {
    let started = Instant::now();
    let mut rng = common::rng(500);
    let alphabet = common::props();
    let mut mismatches = vec![];
    let mut compared = 0;
    for _ in 0..500 {
        let phi = common::ltl(&mut rng, 4);
        let compiled = CompiledFormula::compile(&ltl_to_tel(&phi), &alphabet).unwrap();
        for _ in 0..20 {
            let w = common::lasso(&mut rng, &alphabet, 5, 5);
            let b = (w.prefix_len() + 2 * w.loop_len()) as u64;
            let cfg = EvalConfig::default().with_bound(b).assuming_complete(true);
            let positions: Vec<u64> = (1..=w.canonical_positions() as u64).collect();
            let got = compiled.check_many(&w, &positions, &Env::new(), &cfg).unwrap();
            for (&i, t) in positions.iter().zip(got) {
                compared += 1;
                if t.as_bool() != Some(ltl_eval(&w, i, &phi)) {
                    mismatches.push(format!("{phi} at {i} on {}", w.to_literal()));
                }
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(30), started);
    let shown: Vec<&String> = mismatches.iter().take(3).collect();
    outcome(
        mismatches.is_empty() && fast,
        format!("{compared} positions, {} mismatches; {time} {shown:?}", mismatches.len()),
    )
}

/// A word following `kind`'s segment pattern for `p K q`, each segment
/// twice, ending in the empty loop.
fn allen_word(kind: AllenKind) -> String {
    let set = |(p, q): (bool, bool)| match (p, q) {
        (true, true) => "{p,q}",
        (true, false) => "{p}",
        (false, true) => "{q}",
        (false, false) => "{}",
    };
    let (_, segments) = kind.pattern().split_last().unwrap();
    let prefix: Vec<&str> = segments.iter().flat_map(|&c| [set(c), set(c)]).collect();
    format!("{} | {{}}", prefix.join(";"))
}

fn tcl_differential() -> Outcome {
    let alphabet = common::props();
    let cfg = EvalConfig::default().assuming_complete(true);
    let mut report = vec![];
    let mut bad = vec![];
    for (k, kind) in AllenKind::ALL.into_iter().enumerate() {
        let mut rng = common::rng(600 + k as u64);
        let mut mismatches = 0;
        for trial in 0..200 {
            let phi = if trial % 2 == 0 {
                Tcl::allen(kind, Tcl::atom("p"), Tcl::atom("q"))
            } else {
                common::tcl_row(&mut rng, kind)
            };
            let w = common::lasso(&mut rng, &alphabet, 5, 5);
            let got = truths(&w, &tcl_to_tel(&phi), &cfg);
            for (i, t) in (1..).zip(got) {
                if t.as_bool() != Some(tcl_eval(&w, i, &phi)) {
                    mismatches += 1;
                    if bad.len() < 3 {
                        bad.push(format!("{phi} at {i} on {}: {t}", w.to_literal()));
                    }
                }
            }
        }
        let phi = Tcl::allen(kind, Tcl::atom("p"), Tcl::atom("q"));
        let tel = tcl_to_tel(&phi);
        let positive = LassoWord::parse(&allen_word(kind), &alphabet).unwrap();
        // The tail must be empty forever; a loop holding both breaks it.
        let negative = LassoWord::parse(&allen_word(kind).replace("| {}", "| {p,q}"), &alphabet).unwrap();
        let pos = eval(&positive, 1, &tel, &Env::new(), &cfg).unwrap();
        let neg = eval(&negative, 1, &tel, &Env::new(), &cfg).unwrap();
        let oracle = (tcl_eval(&positive, 1, &phi), tcl_eval(&negative, 1, &phi));
        if pos != Truth3::True || neg != Truth3::False || oracle != (true, false) {
            bad.push(format!("{}: hand-built {pos}/{neg}, reference {oracle:?}", kind.letter()));
            mismatches += 1;
        }
        report.push(format!("{}: {mismatches}", kind.letter()));
    }
    outcome(bad.is_empty(), format!("mismatches per row {}; {}", report.join(", "), bad.join("; ")))
}

fn buchi_exhaustive() -> Outcome {
    let started = Instant::now();
    let sigma = ["a", "b"];
    let mut rng = common::rng(700);
    let (mut automata, mut checked) = (0, 0);
    let mut bad = vec![];
    for n in 1..=2usize {
        let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
        let triples: Vec<(String, String, String)> = states
            .iter()
            .flat_map(|p| sigma.iter().flat_map(move |a| (0..n).map(move |j| (p.clone(), a.to_string(), format!("q{j}")))))
            .collect();
        let subsets = 1u64 << triples.len();
        let deltas: Vec<u64> = if subsets <= 50 {
            (0..subsets).collect()
        } else {
            (0..50).map(|_| rng.random_range(0..subsets)).collect()
        };
        for delta in deltas {
            let transitions: Vec<_> =
                triples.iter().enumerate().filter(|(k, _)| delta >> k & 1 == 1).map(|(_, t)| t.clone()).collect();
            for accepting_mask in 0..1u32 << n {
                let accepting: Vec<String> =
                    states.iter().enumerate().filter(|(k, _)| accepting_mask >> k & 1 == 1).map(|(_, q)| q.clone()).collect();
                let a = BuchiAutomaton::new(
                    states.clone(),
                    sigma.iter().map(|s| s.to_string()).collect(),
                    "q0".into(),
                    transitions.clone(),
                    accepting.clone(),
                )
                .unwrap();
                automata += 1;
                let tiles = a.product_alphabet().unwrap();
                let runs = CompiledFormula::compile(&a.encode_runs(), &tiles).unwrap();
                let acceptance = CompiledFormula::compile(&a.encode_acceptance(), &tiles).unwrap();
                let accepting_tiles: Vec<String> =
                    accepting.iter().flat_map(|q| sigma.iter().map(move |x| BuchiAutomaton::tile(q, x))).collect();
                for w in common::all_lassos(&tiles, 4) {
                    checked += 1;
                    let b = (w.prefix_len() + 2 * w.loop_len()) as u64;
                    let cfg = EvalConfig::default().with_bound(b).assuming_complete(true);
                    let member = runs.check(&w, 1, &Env::new(), &cfg).unwrap();
                    if member.as_bool() != Some(common::is_run(&a, &w)) {
                        bad.push(format!("runs {:?} on {}: {member}", a.transitions(), w.to_literal()));
                    }
                    let acc = acceptance.check(&w, 1, &Env::new(), &cfg).unwrap();
                    if acc.as_bool() != Some(holds_infinitely_often(&w, &accepting_tiles)) {
                        bad.push(format!("acceptance {accepting:?} on {}: {acc}", w.to_literal()));
                    }
                }
            }
        }
    }
    let (_, time) = within(Duration::from_secs(600), started);
    let shown: Vec<&String> = bad.iter().take(3).collect();
    outcome(
        bad.is_empty(),
        format!("{automata} automata, {checked} (automaton, word) pairs, {} mismatches; {time} {shown:?}", bad.len()),
    )
}

/// Every word `(ḋ0/ḋ1)ⁿ ¢ z # #^ω` with `1 ≤ n ≤ 6` and `z` any agreeing
/// zone-2 string of length 1..=6 (top and bottom equal up to dots).
fn pcp_candidates(alphabet: &Alphabet) -> impl Iterator<Item = LassoWord> + '_ {
    let id = |s: &str| Letter::single(alphabet.id(s).unwrap());
    let mut zone2_letters = vec![];
    for bit in ["0", "1"] {
        for top in [format!("b{bit}"), format!("dd{bit}")] {
            for bottom in [format!("b{bit}"), format!("dd{bit}")] {
                zone2_letters.push(id(&product_letter(&top, &bottom)));
            }
        }
    }
    let (domino, cent, hash) = (id(&product_letter("d0", "d1")), id("cent"), id("hash"));
    (1..=6usize).flat_map(move |n| (1..=6u32).map(move |len| (n, len))).flat_map(move |(n, len)| {
        let (zone2_letters, domino, cent, hash) = (zone2_letters.clone(), domino.clone(), cent.clone(), hash.clone());
        (0..8usize.pow(len)).map(move |mut code| {
            let mut prefix = vec![domino.clone(); n];
            prefix.push(cent.clone());
            for _ in 0..len {
                prefix.push(zone2_letters[code % 8].clone());
                code /= 8;
            }
            prefix.push(hash.clone());
            LassoWord::new(alphabet.clone(), prefix, vec![hash.clone()]).unwrap()
        })
    })
}

fn pcp_constructive() -> Outcome {
    let started = Instant::now();
    let mut notes = vec![];
    let mut ok = true;
    let solvable = PcpInstance::from_json(r#"{"pairs":[["01","01"]]}"#).unwrap();
    let phi = pcp_encode(&solvable).unwrap();
    for indices in [vec![1], vec![1, 1]] {
        let w = pcp_witness(&solvable, &indices).unwrap();
        let t = eval(&w, 1, &phi, &Env::new(), &EvalConfig::default()).unwrap();
        ok &= t == Truth3::True;
        notes.push(format!("{{(01,01)}} {indices:?}: {t}"));
    }

    let unsolvable = PcpInstance::from_json(r#"{"pairs":[["0","1"]]}"#).unwrap();
    let alphabet = pcp_alphabet();
    let phi = CompiledFormula::compile(&pcp_encode(&unsolvable).unwrap(), &alphabet).unwrap();
    let cfg = EvalConfig::default();
    let (mut total, mut falses, mut others) = (0usize, 0usize, vec![]);
    for w in pcp_candidates(&alphabet) {
        total += 1;
        match phi.check(&w, 1, &Env::new(), &cfg).unwrap() {
            Truth3::False => falses += 1,
            t => {
                if others.len() < 3 {
                    others.push(format!("{}: {t}", w.to_literal()));
                }
            }
        }
    }
    ok &= falses == total;
    let (fast, time) = within(Duration::from_secs(60), started);
    notes.push(format!("{{(0,1)}}: {falses}/{total} candidates False {others:?}"));
    notes.push(time);
    outcome(ok && fast, notes.join("; "))
}

struct Instance {
    w: LassoWord,
    env: Env,
    phi: Formula,
    psi: Formula,
    /// Window lengths 1..=4, possibly through the free variable `z`.
    terms: [TimeTerm; 2],
    consts: [u64; 2],
}

fn instance(rng: &mut StdRng) -> Instance {
    let z = rng.random_range(1..=4);
    let term = |rng: &mut StdRng| {
        if rng.random_bool(0.3) {
            TimeTerm::var("z")
        } else {
            TimeTerm::constant(rng.random_range(1..=4))
        }
    };
    let terms = [term(rng), term(rng)];
    Instance {
        w: common::lasso(rng, &common::letters(), 5, 5),
        env: Env::new().with("z", z).unwrap(),
        phi: common::qf_formula(rng, &common::LETTERS, 3),
        psi: common::qf_formula(rng, &common::LETTERS, 3),
        terms,
        consts: [rng.random_range(1..=4), rng.random_range(1..=4)],
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Rel {
    Equal,
    /// Left entails right.
    Below,
}

type Identity = fn(&Instance) -> (Formula, Formula);

/// Positions `1..=ℓ+p` where `rel` fails between the two sides.
fn violations(inst: &Instance, rel: Rel, (l, r): (Formula, Formula)) -> Vec<u64> {
    let cfg = EvalConfig::default();
    (1..=inst.w.canonical_positions() as u64)
        .filter(|&i| {
            let a = eval(&inst.w, i, &l, &inst.env, &cfg).unwrap();
            let b = eval(&inst.w, i, &r, &inst.env, &cfg).unwrap();
            match rel {
                Rel::Equal => a != b,
                Rel::Below => a == Truth3::True && b != Truth3::True,
            }
        })
        .collect()
}

fn identity_suite() -> Outcome {
    let c = TimeTerm::constant;
    let bx = |t: TimeTerm, f: Formula| Formula::always(t, f);
    let dm = |t: TimeTerm, f: Formula| Formula::sometime(t, f);
    let identities: Vec<(&str, Rel, Identity)> = vec![
        ("box-1", Rel::Equal, |i| (Formula::always(1u64, i.phi.clone()), i.phi.clone())),
        ("diamond-1", Rel::Equal, |i| (Formula::sometime(1u64, i.phi.clone()), i.phi.clone())),
        ("diamond-2-3", Rel::Equal, |i| {
            (Formula::sometime(2u64, Formula::sometime(3u64, i.phi.clone())), Formula::sometime(4u64, i.phi.clone()))
        }),
        ("box-2-3", Rel::Equal, |i| {
            (Formula::always(2u64, Formula::always(3u64, i.phi.clone())), Formula::always(4u64, i.phi.clone()))
        }),
        ("not-diamond", Rel::Equal, |i| {
            let t = i.terms[0].clone();
            (Formula::sometime(t.clone(), i.phi.clone()).not(), Formula::always(t, i.phi.clone().not()))
        }),
        ("shift-folding", Rel::Equal, |i| {
            let [u, v] = i.terms.clone();
            (i.phi.clone().shift(u.clone()).shift(v.clone()), i.phi.clone().shift(TimeTerm::sum(u, v)))
        }),
        ("item-1", Rel::Below, |i| {
            let t = i.terms[0].clone();
            (Formula::always(t.clone(), i.phi.clone()), Formula::sometime(t, i.phi.clone()))
        }),
        ("item-2-box", Rel::Below, |i| {
            let (s, t) = (i.consts[0].min(i.consts[1]), i.consts[0].max(i.consts[1]));
            (Formula::always(t, i.phi.clone()), Formula::always(s, i.phi.clone()))
        }),
        ("item-2-diamond", Rel::Below, |i| {
            let (s, t) = (i.consts[0].min(i.consts[1]), i.consts[0].max(i.consts[1]));
            (Formula::sometime(s, i.phi.clone()), Formula::sometime(t, i.phi.clone()))
        }),
        ("item-3-diamond", Rel::Equal, |i| {
            let [u, v] = i.terms.clone();
            (
                Formula::sometime(u.clone(), Formula::sometime(v.clone(), i.phi.clone())),
                Formula::sometime(v, Formula::sometime(u, i.phi.clone())),
            )
        }),
        ("item-3-box", Rel::Equal, |i| {
            let [u, v] = i.terms.clone();
            (
                Formula::always(u.clone(), Formula::always(v.clone(), i.phi.clone())),
                Formula::always(v, Formula::always(u, i.phi.clone())),
            )
        }),
        ("item-4", Rel::Equal, |i| {
            let [s, t] = i.consts;
            (Formula::sometime(s + 1, Formula::sometime(t, i.phi.clone())), Formula::sometime(s + t, i.phi.clone()))
        }),
        ("item-5", Rel::Equal, |i| {
            let [s, t] = i.consts;
            (Formula::always(s + 1, Formula::always(t, i.phi.clone())), Formula::always(s + t, i.phi.clone()))
        }),
        ("item-6-shift", Rel::Equal, |i| {
            let [u, v] = i.terms.clone();
            (Formula::always(u.clone(), i.phi.clone().shift(v.clone())), Formula::always(u, i.phi.clone()).shift(v))
        }),
        ("item-6-and", Rel::Equal, |i| {
            let u = i.terms[0].clone();
            (
                Formula::always(u.clone(), i.phi.clone().and(i.psi.clone())),
                Formula::always(u.clone(), i.phi.clone()).and(Formula::always(u, i.psi.clone())),
            )
        }),
        ("item-7-shift", Rel::Equal, |i| {
            let [u, v] = i.terms.clone();
            (Formula::sometime(u.clone(), i.phi.clone().shift(v.clone())), Formula::sometime(u, i.phi.clone()).shift(v))
        }),
        ("item-7-or", Rel::Equal, |i| {
            let u = i.terms[0].clone();
            (
                Formula::sometime(u.clone(), i.phi.clone().or(i.psi.clone())),
                Formula::sometime(u.clone(), i.phi.clone()).or(Formula::sometime(u, i.psi.clone())),
            )
        }),
        ("item-8", Rel::Below, |i| {
            let t = i.terms[0].clone();
            (
                Formula::always(t.clone(), i.phi.clone().implies(i.psi.clone())),
                Formula::always(t.clone(), i.phi.clone()).implies(Formula::always(t, i.psi.clone())),
            )
        }),
        ("item-9", Rel::Below, |i| {
            let t = i.terms[0].clone();
            (
                Formula::sometime(t.clone(), i.phi.clone().implies(i.psi.clone())),
                Formula::sometime(t.clone(), i.phi.clone()).implies(Formula::sometime(t, i.psi.clone())),
            )
        }),
        ("item-10", Rel::Equal, |i| {
            let t = i.consts[0];
            (
                Formula::always(t, i.phi.clone().implies(i.phi.clone().at(1))),
                i.phi.clone().implies(Formula::always(t + 1, i.phi.clone())),
            )
        }),
    ];
    let mut failed = vec![];
    let mut lines = vec![];
    for (k, (name, rel, sides)) in identities.iter().enumerate() {
        let mut rng = common::rng(900 + k as u64);
        let mut bad_instances = 0;
        let mut example = None;
        for _ in 0..100 {
            let inst = instance(&mut rng);
            let v = violations(&inst, *rel, sides(&inst));
            if !v.is_empty() {
                bad_instances += 1;
                example.get_or_insert_with(|| {
                    let (l, r) = sides(&inst);
                    format!("{l} vs {r} at {} on {} (z={})", v[0], inst.w.to_literal(), inst.env.get("z").unwrap())
                });
            }
        }
        if bad_instances > 0 {
            failed.push(*name);
            lines.push(format!("{name}: {bad_instances}/100 instances fail, e.g. {}", example.unwrap()));
        }
    }

    // Fixed counterexamples for the two invalid items, and the directions
    // of them that do hold.
    let env = Env::new();
    let cfg = EvalConfig::default();
    let at1 = |w: &str, f: &Formula| eval(&word(w), 1, f, &env, &cfg).unwrap();
    let (a, b) = (Formula::atom("a"), Formula::atom("b"));
    let item9 = (
        dm(c(2), a.clone().implies(b.clone())),
        dm(c(2), a.clone()).implies(dm(c(2), b.clone())),
    );
    let w9 = "c;a | c";
    let item10 = (bx(c(2), a.clone().implies(a.clone().at(1))), a.clone().implies(bx(c(3), a.clone())));
    let w10 = "b;a;b | b";
    lines.push(format!(
        "counterexamples: item 9 on {w9}: {} vs {}; item 10 on {w10}: {} vs {}",
        at1(w9, &item9.0),
        at1(w9, &item9.1),
        at1(w10, &item10.0),
        at1(w10, &item10.1)
    ));
    let mut converse = 0;
    let mut rng = common::rng(990);
    for _ in 0..100 {
        let inst = instance(&mut rng);
        let t = inst.terms[0].clone();
        let (phi, psi) = (inst.phi.clone(), inst.psi.clone());
        let item9_converse = (
            Formula::sometime(t.clone(), phi.clone()).implies(Formula::sometime(t.clone(), psi.clone())),
            Formula::sometime(t, phi.clone().implies(psi)),
        );
        let item10_forward = (
            Formula::always(inst.consts[0], phi.clone().implies(phi.clone().at(1))),
            phi.clone().implies(Formula::always(inst.consts[0] + 1, phi)),
        );
        converse += violations(&inst, Rel::Below, item9_converse).len() + violations(&inst, Rel::Below, item10_forward).len();
    }
    lines.push(format!("valid directions (item 9 converse, item 10 left-to-right): {converse} violations"));
    let pass = failed.is_empty() && converse == 0;
    outcome(pass, format!("{} identities, failing {failed:?}; {}", identities.len(), lines.join("; ")))
}

fn cohort_pipeline() -> Outcome {
    let started = Instant::now();
    let mut rng = common::rng(1000);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cohort.csv");
    let mut csv = String::from("subject_id,time,code\n");
    let mut planted = std::collections::BTreeSet::new();
    for s in 0..1000 {
        let id = format!("s{s:04}");
        let events = rng.random_range(1..=190);
        let mut rows: Vec<(u64, &str)> =
            (0..events).map(|_| (rng.random_range(1..=300), ["p", "q", "r", "s"][rng.random_range(0..4)])).collect();
        // Outside the planted set no q may follow a p within 3 steps.
        let ps: Vec<u64> = rows.iter().filter(|r| r.1 == "p").map(|r| r.0).collect();
        rows.retain(|&(t, c)| c != "q" || !ps.iter().any(|&p| p < t && t <= p + 3));
        if s % 10 == 3 {
            let t = rng.random_range(1..=290);
            rows.push((t, "p"));
            rows.push((t + rng.random_range(1..=3), "q"));
            planted.insert(id.clone());
        }
        for (t, c) in rows {
            let _ = writeln!(csv, "{id},{t},{c}");
        }
    }
    std::fs::write(&path, csv).unwrap();
    let phi = Formula::diamond_inf(Formula::atom("p").and(Formula::sometime(3u64, Formula::atom("q")).at(1)));
    let opts = IngestOptions { bin: Bin::None, origin: None };
    let report = || {
        let cohort = ingest_csv(&path, &opts).unwrap();
        run_query(&phi, &cohort, &EvalConfig::default(), Positions::FirstOnly).unwrap()
    };
    let first = report();
    let second = report();
    let found: std::collections::BTreeSet<String> =
        first.subjects.iter().filter(|s| s.truth == Truth3::True).map(|s| s.id.clone()).collect();
    let deterministic = first.to_json() == second.to_json();
    let (fast, time) = within(Duration::from_secs(10), started);
    outcome(
        found == planted && deterministic && fast && first.summary.unknown == 0,
        format!(
            "{} planted, {} found, summary {:?}, deterministic {deterministic}; {time} (two full runs)",
            planted.len(),
            found.len(),
            first.summary
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("example-1", example_1),
        ("example-2", example_2),
        ("example-3", example_3),
        ("rewrite-soundness", rewrite_soundness),
        ("ltl-differential", ltl_differential),
        ("tcl-differential", tcl_differential),
        ("buchi-exhaustive", buchi_exhaustive),
        ("pcp-constructive", pcp_constructive),
        ("identity-suite", identity_suite),
        ("cohort-pipeline", cohort_pipeline),
    ];
    let mut surprises = vec![];
    for (name, run) in criteria {
        let o = run();
        let expected = EXPECTED_FAILURES.contains(&name);
        let tag = match (o.pass, expected) {
            (true, false) => "PASS",
            (false, true) => "FAIL (expected)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        println!("{tag} {name}: {}", o.detail);
        if o.pass == expected {
            surprises.push(name);
        }
    }
    if surprises.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcomes: {surprises:?}");
        ExitCode::FAILURE
    }
}
