//! Lowering of formulas to a hash-consed node arena with variables resolved
//! to slots and time terms folded to linear forms.

use std::collections::{BTreeSet, HashMap};

use crate::alphabet::Alphabet;
use crate::error::EvalError;
use crate::formula::Formula;
use crate::term::TimeTerm;

use super::closure;
use super::Truth3;

pub(crate) type NodeId = u32;
pub(crate) type Slot = u32;

/// `constant + Σ coef · env[slot]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Lin {
    pub constant: u64,
    pub terms: Vec<(Slot, u64)>,
}

impl Lin {
    #[inline]
    pub fn eval(&self, env: &[u64]) -> Option<u64> {
        let mut v = self.constant;
        for &(s, c) in &self.terms {
            v = v.checked_add(env[s as usize].checked_mul(c)?)?;
        }
        Some(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Op {
    /// Symbol id; `None` for a symbol outside the alphabet, which never holds.
    Atom(Option<u32>),
    /// A disjunction of atoms as a bitmask over symbol ids, laid out like a
    /// row of the word's bit matrix.
    AnyOf(Vec<u64>),
    Shift(Lin, NodeId),
    Not(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Box(Lin, NodeId),
    Diamond(Lin, NodeId),
    Exists(Quant),
    Forall(Quant),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Quant {
    pub slot: Slot,
    pub body: NodeId,
    /// Monotone closure guards (see `closure`).
    pub guards: Vec<NodeId>,
    /// Conjuncts (or disjuncts) of the body that do not mention the
    /// variable; one of them evaluating to `settles_to` decides the body for
    /// every value at once.
    pub settling: Vec<NodeId>,
    pub settles_to: Truth3,
    /// Every occurrence of the variable is inside a shift.
    pub periodic: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub op: Op,
    /// Tree size, saturating; binary connectives evaluate the smaller side
    /// first so short-circuiting skips the larger one.
    pub weight: u64,
    /// Slots free in this node, sorted; the memo key restricts the
    /// assignment to these.
    pub free: Vec<Slot>,
}

/// A formula compiled against an alphabet, reusable across words.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    pub(crate) nodes: Vec<Node>,
    pub(crate) root: NodeId,
    pub(crate) alphabet: Alphabet,
    /// Free variables of the source formula, occupying slots `0..free.len()`.
    pub(crate) free: Vec<String>,
    pub(crate) slot_names: Vec<String>,
}

struct Compiler<'a> {
    alphabet: &'a Alphabet,
    nodes: Vec<Node>,
    interned: HashMap<Op, NodeId>,
    scope: Vec<(String, Slot)>,
    slot_names: Vec<String>,
}

impl CompiledFormula {
    pub fn compile(f: &Formula, alphabet: &Alphabet) -> Result<CompiledFormula, EvalError> {
        let free: Vec<String> = f.free_vars().into_iter().collect();
        let mut c = Compiler {
            alphabet,
            nodes: Vec::new(),
            interned: HashMap::new(),
            scope: Vec::new(),
            slot_names: Vec::new(),
        };
        for v in &free {
            let s = c.new_slot(v);
            c.scope.push((v.clone(), s));
        }
        let root = c.lower(f)?;
        Ok(CompiledFormula { nodes: c.nodes, root, alphabet: alphabet.clone(), free, slot_names: c.slot_names })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn free_vars(&self) -> &[String] {
        &self.free
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub(crate) fn slot_count(&self) -> usize {
        self.slot_names.len()
    }
}

/// The atoms of an `∨`-tree whose leaves are all atoms.
fn atom_disjunction(f: &Formula) -> Option<Vec<&str>> {
    let mut names = Vec::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        match g {
            Formula::Atom(a) => names.push(a.as_str()),
            Formula::Or(a, b) => stack.extend([b.as_ref(), a.as_ref()]),
            _ => return None,
        }
    }
    Some(names)
}

impl Compiler<'_> {
    fn new_slot(&mut self, name: &str) -> Slot {
        self.slot_names.push(name.to_string());
        (self.slot_names.len() - 1) as Slot
    }

    fn lookup(&self, name: &str) -> Result<Slot, EvalError> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|&(_, s)| s)
            .ok_or_else(|| EvalError::UnboundVariable(name.to_string()))
    }

    fn lin(&self, t: &TimeTerm) -> Result<Lin, EvalError> {
        t.validate().map_err(EvalError::Term)?;
        let linear = t.linear();
        let mut terms: Vec<(Slot, u64)> = Vec::new();
        for (v, c) in &linear.coefficients {
            let s = self.lookup(v)?;
            match terms.iter_mut().find(|(t, _)| *t == s) {
                Some(entry) => entry.1 += c,
                None => terms.push((s, *c)),
            }
        }
        terms.sort_unstable();
        Ok(Lin { constant: linear.constant, terms })
    }

    fn intern(&mut self, op: Op) -> NodeId {
        if let Some(&id) = self.interned.get(&op) {
            return id;
        }
        let weight_of = |id: &NodeId| self.nodes[*id as usize].weight;
        let weight = 1 + match &op {
            Op::Atom(_) | Op::AnyOf(_) => 0,
            Op::Shift(_, k) | Op::Box(_, k) | Op::Diamond(_, k) | Op::Not(k) => weight_of(k),
            Op::And(a, b) | Op::Or(a, b) => weight_of(a).saturating_add(weight_of(b)),
            Op::Exists(q) | Op::Forall(q) => q.guards.iter().chain([&q.body]).map(weight_of).fold(0, u64::saturating_add),
        };
        let op = match op {
            Op::And(a, b) if weight_of(&b) < weight_of(&a) => Op::And(b, a),
            Op::Or(a, b) if weight_of(&b) < weight_of(&a) => Op::Or(b, a),
            op => op,
        };
        let mut free: BTreeSet<Slot> = BTreeSet::new();
        let kid_free = |id: NodeId, free: &mut BTreeSet<Slot>, nodes: &[Node]| {
            free.extend(nodes[id as usize].free.iter().copied());
        };
        match &op {
            Op::Atom(_) | Op::AnyOf(_) => {}
            Op::Shift(l, k) | Op::Box(l, k) | Op::Diamond(l, k) => {
                free.extend(l.terms.iter().map(|&(s, _)| s));
                kid_free(*k, &mut free, &self.nodes);
            }
            Op::Not(k) => kid_free(*k, &mut free, &self.nodes),
            Op::And(a, b) | Op::Or(a, b) => {
                kid_free(*a, &mut free, &self.nodes);
                kid_free(*b, &mut free, &self.nodes);
            }
            Op::Exists(q) | Op::Forall(q) => {
                kid_free(q.body, &mut free, &self.nodes);
                free.remove(&q.slot);
            }
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(Node { op: op.clone(), weight, free: free.into_iter().collect() });
        self.interned.insert(op, id);
        id
    }

    fn lower(&mut self, f: &Formula) -> Result<NodeId, EvalError> {
        let op = match f {
            Formula::Atom(a) => Op::Atom(self.alphabet.id(a)),
            Formula::Shift(g, t) => {
                let l = self.lin(t)?;
                let k = self.lower(g)?;
                if l.terms.is_empty() && l.constant == 0 {
                    return Ok(k);
                }
                Op::Shift(l, k)
            }
            Formula::Not(g) => Op::Not(self.lower(g)?),
            Formula::And(a, b) => Op::And(self.lower(a)?, self.lower(b)?),
            Formula::Or(a, b) => match atom_disjunction(f) {
                Some(names) => {
                    let mut mask = vec![0u64; self.alphabet.len().div_ceil(64).max(1)];
                    for id in names.iter().filter_map(|n| self.alphabet.id(n)) {
                        mask[id as usize / 64] |= 1 << (id % 64);
                    }
                    Op::AnyOf(mask)
                }
                None => Op::Or(self.lower(a)?, self.lower(b)?),
            },
            Formula::Box(t, g) => Op::Box(self.lin(t)?, self.lower(g)?),
            Formula::Diamond(t, g) => Op::Diamond(self.lin(t)?, self.lower(g)?),
            Formula::Exists(x, g) | Formula::Forall(x, g) => {
                let exists = matches!(f, Formula::Exists(..));
                let slot = self.new_slot(x);
                self.scope.push((x.clone(), slot));
                let lowered = self.lower_quantified(g, x, exists);
                self.scope.pop();
                let (body, guards) = lowered?;
                let (settling, settles_to) = self.settling(body, slot);
                let q = Quant { slot, body, guards, settling, settles_to, periodic: closure::shift_only(g, x) };
                if exists {
                    Op::Exists(q)
                } else {
                    Op::Forall(q)
                }
            }
        };
        Ok(self.intern(op))
    }

    /// The maximal subtrees of `body`'s top-level `∧` (or `∨`) chain in
    /// which `slot` is not free.
    fn settling(&self, body: NodeId, slot: Slot) -> (Vec<NodeId>, Truth3) {
        let conjunctive = match self.nodes[body as usize].op {
            Op::And(..) => true,
            Op::Or(..) => false,
            _ => return (Vec::new(), Truth3::False),
        };
        let mut parts = Vec::new();
        let mut stack = vec![body];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            match node.op {
                _ if node.free.binary_search(&slot).is_err() => parts.push(id),
                Op::And(a, b) if conjunctive => stack.extend([b, a]),
                Op::Or(a, b) if !conjunctive => stack.extend([b, a]),
                _ => {}
            }
        }
        (parts, if conjunctive { Truth3::False } else { Truth3::True })
    }

    fn lower_quantified(&mut self, body: &Formula, x: &str, exists: bool) -> Result<(NodeId, Vec<NodeId>), EvalError> {
        let b = self.lower(body)?;
        let mut guards = Vec::new();
        for g in closure::guards(body, x, exists) {
            let id = self.lower(&g)?;
            if !guards.contains(&id) {
                guards.push(id);
            }
        }
        Ok((b, guards))
    }
}
