use rustc_hash::FxHashMap;

use crate::error::EvalError;
use crate::words::LassoWord;

use super::compile::{CompiledFormula, NodeId, Op, Quant};
use super::{EvalConfig, EvalStats, Truth3};

/// Letters at canonical positions `1..=ℓ+p` as one bitset row per position.
pub(crate) struct WordView {
    stride: usize,
    bits: Vec<u64>,
    prefix: u64,
    period: u64,
}

impl WordView {
    pub(crate) fn new(w: &LassoWord) -> WordView {
        let stride = w.alphabet().len().div_ceil(64).max(1);
        let rows = w.canonical_positions();
        let mut bits = vec![0u64; rows * stride];
        for (row, letter) in w.prefix().iter().chain(w.cycle()).enumerate() {
            for &id in letter.ids() {
                bits[row * stride + id as usize / 64] |= 1 << (id % 64);
            }
        }
        WordView { stride, bits, prefix: w.prefix_len() as u64, period: w.loop_len() as u64 }
    }

    #[inline]
    pub(crate) fn canon(&self, i: u64) -> u64 {
        if i <= self.prefix + self.period {
            i
        } else {
            self.prefix + 1 + (i - self.prefix - 1) % self.period
        }
    }

    #[inline]
    fn holds(&self, id: u32, canonical: u64) -> bool {
        let row = (canonical - 1) as usize * self.stride;
        self.bits[row + id as usize / 64] >> (id % 64) & 1 == 1
    }

    #[inline]
    fn holds_any(&self, mask: &[u64], canonical: u64) -> bool {
        let row = (canonical - 1) as usize * self.stride;
        self.bits[row..row + self.stride].iter().zip(mask).any(|(b, m)| b & m != 0)
    }
}

type MemoKey = [u64; 6];
const MEMO_SLOTS: usize = 5;
/// Cheaper subtrees are re-evaluated rather than looked up.
const MEMO_MIN_WEIGHT: u64 = 8;

pub(crate) struct Machine<'a> {
    prog: &'a CompiledFormula,
    view: WordView,
    env: Vec<u64>,
    bound: u64,
    span: u64,
    assume_complete: bool,
    step_limit: u64,
    /// Step count when the current run started; the limit is per run.
    run_start: u64,
    memo: Option<FxHashMap<MemoKey, Truth3>>,
    pub(crate) stats: EvalStats,
}

impl<'a> Machine<'a> {
    pub(crate) fn new(prog: &'a CompiledFormula, w: &LassoWord, free: &[u64], cfg: &EvalConfig) -> Machine<'a> {
        let mut env = vec![0; prog.slot_count()];
        env[..free.len()].copy_from_slice(free);
        let (l, p) = (w.prefix_len() as u64, w.loop_len() as u64);
        Machine {
            prog,
            view: WordView::new(w),
            env,
            bound: cfg.quant_bound.unwrap_or(l + 2 * p + 8),
            span: l + p,
            assume_complete: cfg.assume_complete,
            step_limit: cfg.step_limit,
            run_start: 0,
            memo: cfg.memo_enabled.then(FxHashMap::default),
            stats: EvalStats::default(),
        }
    }

    /// Values tried for a quantifier; shift-only variables are exhausted by
    /// one pass over the lasso when the bound allows it.
    fn range(&self, periodic: bool) -> (u64, bool) {
        if periodic && self.span <= self.bound {
            (self.span, true)
        } else {
            (self.bound, false)
        }
    }

    pub(crate) fn run(&mut self, pos: u64) -> Result<Truth3, EvalError> {
        let pos = self.view.canon(pos);
        self.run_start = self.stats.steps;
        self.eval(self.prog.root, pos)
    }

    /// Least values for the leading run of same-kind quantifiers that make
    /// the body agree with a definite result.
    pub(crate) fn witness(&mut self, pos: u64, truth: Truth3) -> Result<Vec<(String, u64)>, EvalError> {
        let pos = self.view.canon(pos);
        let prog = self.prog;
        let want_exists = match truth {
            Truth3::True => true,
            Truth3::False => false,
            Truth3::Unknown => return Ok(Vec::new()),
        };
        let mut out = Vec::new();
        let mut node = prog.root;
        loop {
            let (slot, body, periodic) = match &prog.nodes[node as usize].op {
                Op::Exists(q) if want_exists => (q.slot, q.body, q.periodic),
                Op::Forall(q) if !want_exists => (q.slot, q.body, q.periodic),
                _ => break,
            };
            let (limit, _) = self.range(periodic);
            let mut found = None;
            for k in 1..=limit {
                self.env[slot as usize] = k;
                if self.eval(body, pos)? == truth {
                    found = Some(k);
                    break;
                }
            }
            match found {
                Some(k) => out.push((prog.slot_names[slot as usize].clone(), k)),
                None => break,
            }
            node = body;
        }
        Ok(out)
    }

    fn memo_key(&self, node: NodeId, pos: u64) -> Option<MemoKey> {
        let free = &self.prog.nodes[node as usize].free;
        if free.len() > MEMO_SLOTS || self.prog.nodes[node as usize].weight < MEMO_MIN_WEIGHT {
            return None;
        }
        let mut key = [0u64; 6];
        key[0] = u64::from(node) | pos << 32;
        for (i, &s) in free.iter().enumerate() {
            key[i + 1] = self.env[s as usize];
        }
        Some(key)
    }

    fn eval(&mut self, node: NodeId, pos: u64) -> Result<Truth3, EvalError> {
        self.stats.steps += 1;
        if self.stats.steps - self.run_start > self.step_limit {
            return Err(EvalError::StepLimitExceeded(self.step_limit));
        }
        let prog = self.prog;
        let op = &prog.nodes[node as usize].op;
        match op {
            Op::Atom(id) => {
                self.stats.atom_visits += 1;
                return Ok(Truth3::from(id.is_some_and(|id| self.view.holds(id, pos))));
            }
            Op::AnyOf(mask) => {
                self.stats.atom_visits += 1;
                return Ok(Truth3::from(self.view.holds_any(mask, pos)));
            }
            Op::Shift(l, k) => {
                let t = l.eval(&self.env).ok_or(EvalError::Overflow)?;
                let target = pos.checked_add(t).ok_or(EvalError::Overflow)?;
                return self.eval(*k, self.view.canon(target));
            }
            Op::Not(k) => return Ok(self.eval(*k, pos)?.not()),
            Op::And(a, b) => {
                let l = self.eval(*a, pos)?;
                if l == Truth3::False {
                    return Ok(l);
                }
                return Ok(l.and(self.eval(*b, pos)?));
            }
            Op::Or(a, b) => {
                let l = self.eval(*a, pos)?;
                if l == Truth3::True {
                    return Ok(l);
                }
                return Ok(l.or(self.eval(*b, pos)?));
            }
            _ => {}
        }

        let key = if self.memo.is_some() { self.memo_key(node, pos) } else { None };
        if let Some(key) = &key {
            if let Some(&v) = self.memo.as_ref().and_then(|m| m.get(key)) {
                self.stats.memo_hits += 1;
                return Ok(v);
            }
        }
        let v = match op {
            Op::Box(l, k) => self.window(l.eval(&self.env).ok_or(EvalError::Overflow)?, *k, pos, Truth3::False)?,
            Op::Diamond(l, k) => self.window(l.eval(&self.env).ok_or(EvalError::Overflow)?, *k, pos, Truth3::True)?,
            Op::Exists(q) => self.quantifier(q, pos, Truth3::True)?,
            Op::Forall(q) => self.quantifier(q, pos, Truth3::False)?,
            _ => unreachable!("handled above"),
        };
        if let (Some(key), Some(memo)) = (key, self.memo.as_mut()) {
            memo.insert(key, v);
        }
        Ok(v)
    }

    /// Conjunction (`decisive = False`) or disjunction (`decisive = True`)
    /// over `[pos, pos + t)`. Positions past one full loop repeat.
    fn window(&mut self, t: u64, body: NodeId, pos: u64, decisive: Truth3) -> Result<Truth3, EvalError> {
        if t == 0 {
            return Ok(decisive.not());
        }
        let last = pos.saturating_add(t - 1);
        let cycle_end = pos.max(self.view.prefix + 1) + self.view.period - 1;
        let mut unknown = false;
        for j in pos..=last.min(cycle_end) {
            match self.eval(body, self.view.canon(j))? {
                Truth3::Unknown => unknown = true,
                v if v == decisive => return Ok(v),
                _ => {}
            }
        }
        Ok(if unknown { Truth3::Unknown } else { decisive.not() })
    }

    /// `hit` is the value that settles the quantifier: True for ∃, False for ∀.
    fn quantifier(&mut self, q: &Quant, pos: u64, hit: Truth3) -> Result<Truth3, EvalError> {
        for &part in &q.settling {
            if self.eval(part, pos)? == q.settles_to {
                return Ok(q.settles_to);
            }
        }
        let (slot, body, guards) = (q.slot, q.body, &q.guards);
        let miss = hit.not();
        let (limit, exact) = self.range(q.periodic);
        let saved = self.env[slot as usize];
        let mut unknown = false;
        let mut settled = None;
        'values: for k in 1..=limit {
            self.env[slot as usize] = k;
            for &g in guards {
                if self.eval(g, pos)? == miss {
                    settled = Some(if unknown { Truth3::Unknown } else { miss });
                    break 'values;
                }
            }
            match self.eval(body, pos)? {
                v if v == hit => {
                    settled = Some(hit);
                    break;
                }
                Truth3::Unknown => unknown = true,
                _ => {}
            }
        }
        self.env[slot as usize] = saved;
        Ok(settled.unwrap_or(if unknown {
            Truth3::Unknown
        } else if exact || self.assume_complete {
            miss
        } else {
            Truth3::Unknown
        }))
    }
}
