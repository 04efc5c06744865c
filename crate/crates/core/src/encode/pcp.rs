//! PCP instances as TEL formulas.
//!
//! A solution is laid out in three zones: the chosen dominoes, `¢`, the
//! solution string with both rows written out, then `#` forever. Row
//! components are `b0`/`b1` (plain), `d0`/`d1` (dotted: first column of a
//! domino), `dd0`/`dd1` (double-dotted: start of a `uᵢ`/`vᵢ` in the
//! solution) and `f` (filler under the shorter row of a domino).

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::EncodeError;
use crate::formula::Formula;
use crate::words::LassoWord;

use super::{any_of, check_budget, correspondence, offset, product_letter, var, word_block};

pub const CENT: &str = "cent";
pub const HASH: &str = "hash";
const FILLER: &str = "f";
const COMPONENTS: [&str; 7] = ["b0", "b1", "d0", "d1", "dd0", "dd1", FILLER];
/// Plain and double-dotted: the letters of the solution zone.
const SOLUTION: [&str; 4] = ["b0", "b1", "dd0", "dd1"];

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Deserialize)]
struct RawInstance {
    pairs: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct PcpInstance {
    pairs: Vec<(String, String)>,
}

impl TryFrom<RawInstance> for PcpInstance {
    type Error = EncodeError;

    fn try_from(raw: RawInstance) -> Result<PcpInstance, EncodeError> {
        PcpInstance::new(raw.pairs)
    }
}

impl PcpInstance {
    pub fn new(pairs: Vec<(String, String)>) -> Result<PcpInstance, EncodeError> {
        if pairs.is_empty() {
            return Err(EncodeError::Instance("no pairs".into()));
        }
        for (u, v) in &pairs {
            for w in [u, v] {
                if w.is_empty() || !w.chars().all(|c| c == '0' || c == '1') {
                    return Err(EncodeError::Instance(format!("`{w}` is not a non-empty binary word")));
                }
            }
        }
        Ok(PcpInstance { pairs })
    }

    pub fn from_json(text: &str) -> Result<PcpInstance, EncodeError> {
        serde_json::from_str(text).map_err(|e| EncodeError::Instance(e.to_string()))
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    /// Whether the 1-based index sequence is a solution.
    pub fn solves(&self, indices: &[usize]) -> Result<bool, EncodeError> {
        let chosen = self.chosen(indices)?;
        let top: String = chosen.iter().map(|(u, _)| u.as_str()).collect();
        let bottom: String = chosen.iter().map(|(_, v)| v.as_str()).collect();
        Ok(top == bottom)
    }

    fn chosen(&self, indices: &[usize]) -> Result<Vec<&(String, String)>, EncodeError> {
        if indices.is_empty() {
            return Err(EncodeError::BadIndex(0));
        }
        indices.iter().map(|&i| i.checked_sub(1).and_then(|k| self.pairs.get(k)).ok_or(EncodeError::BadIndex(i))).collect()
    }

    /// The tiles of domino `i` (0-based): dotted first column, filler under
    /// the shorter row.
    fn domino(&self, i: usize) -> Vec<String> {
        let (u, v) = &self.pairs[i];
        let row = |w: &str, j: usize| match w.as_bytes().get(j) {
            None => FILLER.to_string(),
            Some(&c) if j == 0 => format!("d{}", c as char),
            Some(&c) => format!("b{}", c as char),
        };
        (0..u.len().max(v.len())).map(|j| product_letter(&row(u, j), &row(v, j))).collect()
    }
}

/// The 49 row pairs followed by `cent` and `hash`.
pub fn pcp_alphabet() -> Alphabet {
    let pairs = COMPONENTS.iter().flat_map(|t| COMPONENTS.iter().map(move |b| product_letter(t, b)));
    Alphabet::letters(pairs.chain([CENT.to_string(), HASH.to_string()])).expect("generated names are distinct identifiers")
}

fn pairs_over(tops: &[&str], bottoms: &[&str]) -> Vec<String> {
    tops.iter().flat_map(|t| bottoms.iter().map(move |b| product_letter(t, b))).collect()
}

/// `τ` (row `top`) or `λ`: one row spells `word` with a double-dotted first
/// letter, the other ranges over all plain and double-dotted letters. The
/// segment must end at the next double-dotted letter of that row or at `#`,
/// so that a word never matches inside a longer one it is a prefix of.
fn matcher(word: &str, top: bool, budget: usize) -> Result<Formula, EncodeError> {
    let len = word.len() as u32;
    let copies = 4usize.saturating_pow(len);
    let estimate = copies.saturating_mul(3 * word.len());
    if estimate > budget {
        return Err(EncodeError::TooLarge { nodes: estimate, budget });
    }
    let orient = |fixed: &str, other: &str| if top { product_letter(fixed, other) } else { product_letter(other, fixed) };
    let fixed: Vec<String> =
        word.chars().enumerate().map(|(j, c)| if j == 0 { format!("dd{c}") } else { format!("b{c}") }).collect();
    let decorations = (0..copies).map(|mut code| {
        let tiles: Vec<String> = fixed
            .iter()
            .map(|f| {
                let other = SOLUTION[code % 4];
                code /= 4;
                orient(f, other)
            })
            .collect();
        word_block(&tiles, 0).expect("pair words are non-empty")
    });
    let printed = Formula::or_all(decorations).expect("at least one decoration");
    let next = ["dd0", "dd1"].iter().flat_map(|f| SOLUTION.iter().map(move |o| orient(f, o)));
    let end = any_of(next.chain([HASH.to_string()]), HASH).at(word.len() as u64);
    Ok(printed.and(end))
}

pub fn pcp_encode(inst: &PcpInstance) -> Result<Formula, EncodeError> {
    pcp_encode_with_budget(inst, DEFAULT_NODE_BUDGET)
}

/// `φ¹ ∧ φ²τ ∧ φ²λ`; fails with `TooLarge` when the formula would exceed
/// `budget` nodes.
pub fn pcp_encode_with_budget(inst: &PcpInstance, budget: usize) -> Result<Formula, EncodeError> {
    let m = inst.pairs.len();
    let iota: Vec<Formula> = (0..m).map(|i| word_block(&inst.domino(i), 0).expect("dominoes are non-empty")).collect();
    let tau = inst.pairs.iter().map(|(u, _)| matcher(u, true, budget)).collect::<Result<Vec<_>, _>>()?;
    let lambda = inst.pairs.iter().map(|(_, v)| matcher(v, false, budget)).collect::<Result<Vec<_>, _>>()?;
    let dotted = dotted_pairs();
    // A domino followed by the next domino or `¢`.
    let tiles: Vec<Formula> = inst
        .pairs
        .iter()
        .zip(&iota)
        .map(|((u, v), b)| b.clone().and(dotted.clone().or(Formula::atom(CENT)).at(u.len().max(v.len()) as u64)))
        .collect();
    let phi1 = layout(&iota, &tiles);
    let phi_tau = correspondence(&tiles, &tau, &tiles, &tau, CENT);
    let phi_lambda = correspondence(&tiles, &lambda, &tiles, &lambda, CENT);
    check_budget(phi1.and(phi_tau).and(phi_lambda), budget)
}

/// `φ¹`: zone 1 is a tiling by dominoes, zone 2 a solution string whose
/// rows agree letter by letter, then `#` forever.
fn dotted_pairs() -> Formula {
    any_of(pairs_over(&["d0", "d1"], &["d0", "d1"]), CENT)
}

fn layout(iota: &[Formula], tiles: &[Formula]) -> Formula {
    let bottom = product_letter("b0", "b0");
    let zone1 = any_of(
        pairs_over(&["b0", "b1", FILLER], &["b0", "b1", FILLER]).into_iter().chain(pairs_over(&["d0", "d1"], &["d0", "d1"])),
        &bottom,
    );
    let zone2 = any_of(pairs_over(&SOLUTION, &SOLUTION), &bottom);
    let dotted = dotted_pairs();
    let agree = any_of(pairs_over(&["b0", "dd0"], &["b0", "dd0"]).into_iter().chain(pairs_over(&["b1", "dd1"], &["b1", "dd1"])), &bottom);
    let hash = Formula::atom(HASH);
    let tiling = Formula::or_all(tiles.iter().cloned()).expect("instances are non-empty");
    let parts = [
        Formula::atom(CENT).shift(var("x")),
        hash.clone().shift(offset(&["x", "y"], 1)),
        Formula::always(var("x"), zone1),
        Formula::always(var("y"), zone2).shift(offset(&["x"], 1)),
        Formula::box_inf(hash).shift(offset(&["x", "y"], 1)),
        Formula::or_all(iota.iter().cloned()).expect("instances are non-empty"),
        Formula::always(var("x"), dotted.implies(tiling)),
        Formula::always(var("y"), agree).shift(offset(&["x"], 1)),
    ];
    Formula::exists("x", Formula::exists("y", Formula::and_all(parts).expect("non-empty")))
}

/// The layout word of an index sequence (1-based). It satisfies
/// [`pcp_encode`] when the sequence solves the instance.
pub fn pcp_witness(inst: &PcpInstance, indices: &[usize]) -> Result<LassoWord, EncodeError> {
    inst.chosen(indices)?;
    let mut prefix: Vec<String> = indices.iter().flat_map(|&i| inst.domino(i - 1)).collect();
    prefix.push(CENT.into());
    let row = |pick: fn(&(String, String)) -> &String| -> Vec<String> {
        indices
            .iter()
            .flat_map(|&i| {
                pick(&inst.pairs[i - 1]).chars().enumerate().map(|(j, c)| if j == 0 { format!("dd{c}") } else { format!("b{c}") })
            })
            .collect()
    };
    let (top, bottom) = (row(|p| &p.0), row(|p| &p.1));
    for j in 0..top.len().max(bottom.len()) {
        let at = |r: &[String]| r.get(j).cloned().unwrap_or_else(|| FILLER.to_string());
        prefix.push(product_letter(&at(&top), &at(&bottom)));
    }
    prefix.push(HASH.into());
    Ok(LassoWord::from_symbols(pcp_alphabet(), &prefix, &[HASH.to_string()]).expect("witness letters are in the alphabet"))
}
