//! Relative area `Area^ℛ` by uniform-cost rewriting search.
//!
//! A filling is a sequence of relator insertions, each costing one, with free
//! reduction in `F` and cyclic conjugation in between at no cost. Peripheral
//! relations are applied implicitly by model arithmetic, so they never cost
//! anything.

mod profile;

pub use profile::{
    check_asymptotic_dominance, dehn_profile, linear_fit, linear_fit_with_escalation, rho_escalation, DehnProfile,
    EscalationReport, FitVerdict, LinearFit, ProfileCaps, ProfileEntry,
};

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::Group;
use crate::presentation::{Letter, RationalAbelianization, RelativePresentation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchCaps {
    pub max_area: usize,
    /// Intermediate words longer than this are discarded.
    pub max_len: usize,
    pub max_states: usize,
}

impl SearchCaps {
    pub const DEFAULT_MAX_STATES: usize = 2_000_000;

    pub fn new(max_area: usize, max_len: usize) -> Self {
        Self { max_area, max_len, max_states: Self::DEFAULT_MAX_STATES }
    }
}

/// One step of a filling trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// Inserts rotation `rotation` of relator `relator` (inverted first if `inverse`)
    /// before letter `position`. Costs one cell.
    RCell { relator: usize, rotation: usize, inverse: bool, position: usize },
    /// Free reduction in `F`: cancels inverse generators and multiplies adjacent
    /// syllables of the same model, dropping identities.
    Reduce,
    /// Cyclic reduction followed by a left rotation by `shift` letters.
    Conjugate { shift: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FillingCertificate {
    #[serde(skip)]
    pub loop_word: Word,
    pub area: usize,
    pub trace: Vec<Move>,
    /// Whether the search discarded over-long states; the area is then minimal
    /// only among fillings respecting the length cap.
    pub pruned: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(FillingCertificate),
    Unknown { explored: usize, pruned: bool, budget_hit: bool },
}

impl SearchOutcome {
    pub fn area(&self) -> Option<usize> {
        match self {
            SearchOutcome::Found(c) => Some(c.area),
            SearchOutcome::Unknown { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&FillingCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::Unknown { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Combine {
    Apart,
    Cancel,
    Merge(u32),
}

/// Letters interned as dense ids, with cached inverses and pairwise products.
struct Alphabet<'a> {
    p: &'a RelativePresentation,
    letters: Vec<Letter>,
    ids: HashMap<Letter, u32>,
    inverse: Vec<u32>,
    combos: HashMap<(u32, u32), Combine>,
}

impl<'a> Alphabet<'a> {
    fn new(p: &'a RelativePresentation) -> Self {
        Self { p, letters: Vec::new(), ids: HashMap::new(), inverse: Vec::new(), combos: HashMap::new() }
    }

    fn intern(&mut self, l: &Letter) -> u32 {
        if let Some(&id) = self.ids.get(l) {
            return id;
        }
        let id = self.letters.len() as u32;
        self.letters.push(l.clone());
        self.ids.insert(l.clone(), id);
        self.inverse.push(id);
        let li = self.p.invert_letter(l);
        if &li != l {
            let iid = self.letters.len() as u32;
            self.letters.push(li.clone());
            self.ids.insert(li, iid);
            self.inverse.push(id);
            self.inverse[id as usize] = iid;
        }
        id
    }

    fn word(&mut self, w: &Word) -> Vec<u32> {
        w.letters().iter().map(|l| self.intern(l)).collect()
    }

    fn combine(&mut self, a: u32, b: u32) -> Combine {
        if let Some(&c) = self.combos.get(&(a, b)) {
            return c;
        }
        let c = match self.p.combine(&self.letters[a as usize], &self.letters[b as usize]) {
            None => Combine::Apart,
            Some(None) => Combine::Cancel,
            Some(Some(l)) => Combine::Merge(self.intern(&l)),
        };
        self.combos.insert((a, b), c);
        c
    }

    fn reduce(&mut self, w: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::with_capacity(w.len());
        for &l in w {
            let mut cur = l;
            loop {
                let Some(&top) = out.last() else {
                    out.push(cur);
                    break;
                };
                match self.combine(top, cur) {
                    Combine::Apart => {
                        out.push(cur);
                        break;
                    }
                    Combine::Cancel => {
                        out.pop();
                        break;
                    }
                    Combine::Merge(m) => {
                        out.pop();
                        cur = m;
                    }
                }
            }
        }
        out
    }

    fn cyclic(&mut self, w: Vec<u32>) -> Vec<u32> {
        let (mut lo, mut hi) = (0usize, w.len());
        let mut head: Option<u32> = None;
        // Only the first letter can change (by merging), so track it separately.
        while hi - lo >= 2 {
            let first = head.unwrap_or(w[lo]);
            match self.combine(w[hi - 1], first) {
                Combine::Apart => break,
                Combine::Cancel => {
                    lo += 1;
                    hi -= 1;
                    head = None;
                }
                Combine::Merge(m) => {
                    hi -= 1;
                    head = Some(m);
                }
            }
        }
        let mut out = w[lo..hi].to_vec();
        if let Some(h) = head {
            out[0] = h;
        }
        out
    }
}

/// Least rotation in lexicographic order, with the left shift producing it.
fn least_rotation(w: &[u32]) -> (Vec<u32>, usize) {
    let n = w.len();
    let mut best = 0;
    for s in 1..n {
        for k in 0..n {
            let (a, b) = (w[(s + k) % n], w[(best + k) % n]);
            if a != b {
                if a < b {
                    best = s;
                }
                break;
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&w[best..]);
    out.extend_from_slice(&w[..best]);
    (out, best)
}

fn rotate<T: Clone>(w: &[T], k: usize) -> Vec<T> {
    let mut out = w[k..].to_vec();
    out.extend_from_slice(&w[..k]);
    out
}

struct Node {
    state: Vec<u32>,
    parent: usize,
    mv: (Move, usize),
}

/// Uniform-cost search for a minimal-area filling of `w` within `caps`.
pub fn search(p: &RelativePresentation, w: &Word, caps: SearchCaps) -> Result<SearchOutcome> {
    p.check_word(w)?;
    if RationalAbelianization::new(p).certifies_nontrivial(w) {
        // Every move preserves the rational exponent image, so no filling exists.
        return Ok(SearchOutcome::Unknown { explored: 0, pruned: false, budget_hit: false });
    }
    let mut alpha = Alphabet::new(p);
    let w0 = alpha.word(w);
    let reduced = alpha.reduce(&w0);
    let (start, shift0) = least_rotation(&alpha.cyclic(reduced));
    let prefix = [Move::Reduce, Move::Conjugate { shift: shift0 }];
    if start.is_empty() {
        return Ok(SearchOutcome::Found(FillingCertificate {
            loop_word: w.clone(),
            area: 0,
            trace: prefix.to_vec(),
            pruned: false,
        }));
    }

    // Rotated relators with their move metadata; duplicates keep the first label.
    let mut cells: Vec<(Vec<u32>, usize, usize, bool)> = Vec::new();
    for (ri, r) in p.relators().iter().enumerate() {
        for inverse in [false, true] {
            let base = if inverse { p.inverse(r) } else { r.clone() };
            let ids = alpha.word(&base);
            for rot in 0..ids.len() {
                let rotated = rotate(&ids, rot);
                if !cells.iter().any(|c| c.0 == rotated) {
                    cells.push((rotated, ri, rot, inverse));
                }
            }
        }
    }

    let mut nodes = vec![Node { state: start.clone(), parent: usize::MAX, mv: (Move::Reduce, 0) }];
    let mut visited: HashMap<Vec<u32>, usize> = HashMap::from([(start, 0)]);
    let mut layer = vec![0usize];
    let mut pruned = false;
    for _depth in 0..caps.max_area {
        let mut next = Vec::new();
        for &node in &layer {
            let state = nodes[node].state.clone();
            let positions = state.len().max(1);
            for pos in 0..positions {
                for (cell, ri, rot, inverse) in &cells {
                    let mut cand = Vec::with_capacity(state.len() + cell.len());
                    cand.extend_from_slice(&state[..pos]);
                    cand.extend_from_slice(cell);
                    cand.extend_from_slice(&state[pos..]);
                    let reduced = alpha.reduce(&cand);
                    let (canon, shift) = least_rotation(&alpha.cyclic(reduced));
                    if canon.len() > caps.max_len {
                        pruned = true;
                        continue;
                    }
                    if visited.contains_key(&canon) {
                        continue;
                    }
                    let id = nodes.len();
                    let mv = Move::RCell { relator: *ri, rotation: *rot, inverse: *inverse, position: pos };
                    let done = canon.is_empty();
                    visited.insert(canon.clone(), id);
                    nodes.push(Node { state: canon, parent: node, mv: (mv, shift) });
                    if done {
                        return Ok(SearchOutcome::Found(certificate(w, &prefix, &nodes, id, pruned)));
                    }
                    if nodes.len() > caps.max_states {
                        return Ok(SearchOutcome::Unknown { explored: nodes.len(), pruned, budget_hit: true });
                    }
                    next.push(id);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_by_key(|&i| (nodes[i].state.len(), i));
        layer = next;
    }
    Ok(SearchOutcome::Unknown { explored: nodes.len(), pruned, budget_hit: false })
}

fn certificate(w: &Word, prefix: &[Move], nodes: &[Node], last: usize, pruned: bool) -> FillingCertificate {
    let mut steps = Vec::new();
    let mut cur = last;
    while cur != 0 {
        steps.push(nodes[cur].mv);
        cur = nodes[cur].parent;
    }
    let area = steps.len();
    let mut trace = prefix.to_vec();
    for (mv, shift) in steps.into_iter().rev() {
        trace.extend([mv, Move::Reduce, Move::Conjugate { shift }]);
    }
    FillingCertificate { loop_word: w.clone(), area, trace, pruned }
}

/// Relative area of a loop. With an oracle, a nontrivial loop is a precondition error.
pub fn relative_area(
    p: &RelativePresentation,
    oracle: Option<&Group>,
    c: &Word,
    caps: SearchCaps,
) -> Result<SearchOutcome> {
    if let Some(g) = oracle {
        if !g.is_trivial(c)? {
            return Err(Error::Precondition(format!(
                "loop {} is nontrivial in the group",
                p.display_word(c)
            )));
        }
    }
    search(p, c, caps)
}

/// Replays a trace on its loop and returns the number of relator cells used.
/// Fails unless the replay ends at the empty word.
pub fn replay(p: &RelativePresentation, loop_word: &Word, trace: &[Move]) -> Result<usize> {
    let mut w = loop_word.clone();
    let mut cost = 0;
    for mv in trace {
        match *mv {
            Move::RCell { relator, rotation, inverse, position } => {
                let r = p
                    .relators()
                    .get(relator)
                    .ok_or_else(|| Error::Invalid(format!("trace names unknown relator {relator}")))?;
                let base = if inverse { p.inverse(r) } else { r.clone() };
                if rotation >= base.len() || position > w.len() {
                    return Err(Error::Invalid("trace move out of range".into()));
                }
                let cell = rotate(base.letters(), rotation);
                let mut letters = w.letters()[..position].to_vec();
                letters.extend(cell);
                letters.extend_from_slice(&w.letters()[position..]);
                w = Word::new(letters);
                cost += 1;
            }
            Move::Reduce => w = p.free_reduce(&w),
            Move::Conjugate { shift } => {
                let c = p.cyclic_reduce(&w);
                if shift > c.len() || (shift == c.len() && shift != 0) {
                    return Err(Error::Invalid("conjugation shift out of range".into()));
                }
                w = Word::new(if c.is_empty() { Vec::new() } else { rotate(c.letters(), shift) });
            }
        }
    }
    if !w.is_empty() {
        return Err(Error::Invalid(format!("trace ends at {} instead of the empty word", p.display_word(&w))));
    }
    Ok(cost)
}
