//! The relative Cayley graph `Γ(G, X ∪ 𝓗)`: truncated balls, relative length and
//! geodesic witnesses.
//!
//! When a peripheral model is infinite the graph is locally infinite, so balls
//! only instantiate peripheral letters of model length at most `ρ`. Lengths that
//! cannot be pinned down under truncation are reported as bounds.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{FiniteOracle, Group, OracleImpl};
use crate::presentation::{Elem, Letter, ModelKind, PeripheralModel, RelativePresentation, Word};

pub const DEFAULT_VERTEX_BUDGET: usize = 250_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallEdge {
    pub source: usize,
    pub letter: Letter,
    pub target: usize,
}

/// A BFS ball in `Γ(G, X ∪ 𝓗)`. Vertex 0 is the identity; vertices are oracle normal forms.
#[derive(Clone, Debug)]
pub struct BallGraph {
    pub vertices: Vec<Word>,
    pub distance: Vec<usize>,
    pub edges: Vec<BallEdge>,
    pub radius: usize,
    pub peripheral_bound: u64,
    index: HashMap<Word, usize>,
}

impl BallGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, normal_form: &Word) -> Option<usize> {
        self.index.get(normal_form).copied()
    }
}

pub fn truncated_ball(g: &Group, radius: usize, rho: u64) -> Result<BallGraph> {
    truncated_ball_with_budget(g, radius, rho, DEFAULT_VERTEX_BUDGET)
}

/// BFS ball of the given radius. Edges are recorded between any two ball vertices
/// joined by an instantiated letter, including edges leaving the outer sphere.
pub fn truncated_ball_with_budget(g: &Group, radius: usize, rho: u64, budget: usize) -> Result<BallGraph> {
    let letters = g.presentation().letters_up_to(rho);
    let mut ball = BallGraph {
        vertices: vec![Word::empty()],
        distance: vec![0],
        edges: Vec::new(),
        radius,
        peripheral_bound: rho,
        index: HashMap::from([(Word::empty(), 0)]),
    };
    let mut frontier = vec![0usize];
    let mut depth = 0;
    while !frontier.is_empty() {
        let batch: Vec<Word> = frontier
            .iter()
            .flat_map(|&v| letters.iter().map(move |l| (v, l)))
            .map(|(v, l)| {
                let mut w = ball.vertices[v].clone();
                w.push(l.clone());
                w
            })
            .collect();
        let forms = g.normal_forms(&batch)?;
        let mut next = Vec::new();
        for (k, nf) in forms.into_iter().enumerate() {
            let source = frontier[k / letters.len()];
            let letter = letters[k % letters.len()].clone();
            let target = match ball.index.get(&nf) {
                Some(&t) => t,
                None if depth < radius => {
                    let t = ball.vertices.len();
                    if t >= budget {
                        return Err(Error::Resource(format!(
                            "ball of radius {radius} at rho {rho} exceeds the vertex budget {budget}"
                        )));
                    }
                    ball.index.insert(nf.clone(), t);
                    ball.vertices.push(nf);
                    ball.distance.push(depth + 1);
                    next.push(t);
                    t
                }
                None => continue,
            };
            ball.edges.push(BallEdge { source, letter, target });
        }
        frontier = next;
        depth += 1;
    }
    Ok(ball)
}

/// Relative length `l_{X∪𝓗}` of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RelLength {
    Exact { value: u64 },
    Bounds { lower: u64, upper: u64 },
}

impl RelLength {
    pub fn exact(&self) -> Option<u64> {
        match *self {
            RelLength::Exact { value } => Some(value),
            RelLength::Bounds { lower, upper } if lower == upper => Some(lower),
            RelLength::Bounds { .. } => None,
        }
    }

    pub fn lower(&self) -> u64 {
        match *self {
            RelLength::Exact { value } => value,
            RelLength::Bounds { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> u64 {
        match *self {
            RelLength::Exact { value } => value,
            RelLength::Bounds { upper, .. } => upper,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LengthOptions {
    /// Peripheral bounds tried in turn when searching for shorter representatives.
    pub rho_schedule: Vec<u64>,
    /// Depth of same-model products taken over the candidate syllables.
    pub closure_depth: usize,
    pub vertex_budget: usize,
}

impl Default for LengthOptions {
    fn default() -> Self {
        Self { rho_schedule: vec![1, 2, 4, 8], closure_depth: 1, vertex_budget: 50_000 }
    }
}

/// Length together with a representative realizing the upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measured {
    pub length: RelLength,
    pub witness: Word,
    /// Largest peripheral bound used by the search (0 when no search was needed).
    pub rho: u64,
}

pub fn rel_length(g: &Group, w: &Word) -> Result<RelLength> {
    Ok(measure(g, w, &LengthOptions::default())?.length)
}

/// A word of minimal letter count representing the same element as `w`.
pub fn geodesic_witness(g: &Group, w: &Word) -> Result<Word> {
    geodesic_witness_with(g, w, &LengthOptions::default())
}

pub fn geodesic_witness_with(g: &Group, w: &Word, opts: &LengthOptions) -> Result<Word> {
    let m = measure(g, w, opts)?;
    match m.length {
        RelLength::Bounds { lower, upper } if lower < upper => Err(Error::NotFound(format!(
            "no geodesic certified under truncation rho={}: length in [{lower}, {upper}]",
            m.rho
        ))),
        _ => Ok(m.witness),
    }
}

pub fn measure(g: &Group, w: &Word, opts: &LengthOptions) -> Result<Measured> {
    let p = g.presentation();
    let nf = g.normal_form(w)?;
    if nf.is_empty() {
        return Ok(Measured { length: RelLength::Exact { value: 0 }, witness: Word::empty(), rho: 0 });
    }
    match &g.oracle {
        OracleImpl::FreeProduct => {
            let r = p.free_reduce(w);
            Ok(Measured { length: RelLength::Exact { value: r.len() as u64 }, witness: r, rho: 0 })
        }
        OracleImpl::Finite(o) => finite_geodesic(p, o, w),
        _ => search_geodesic(g, w, &nf, opts),
    }
}

/// `g^k` for a rank-one model with generator `gen`.
fn model_power(m: &PeripheralModel, gen: &Elem, k: i64) -> Elem {
    let base = if k < 0 { m.inverse(gen) } else { gen.clone() };
    (0..k.unsigned_abs()).fold(m.identity(), |acc, _| m.product(&acc, &base))
}

/// A single letter equal to `target` in an integer quotient, if one exists.
fn single_letter_integer(g: &Group, target: &[i64], opts: &LengthOptions) -> Option<Letter> {
    let OracleImpl::Integer(o) = &g.oracle else { return None };
    let p = g.presentation();
    for sym in 0..p.x_symbols().len() {
        for l in [Letter::x(sym), Letter::x_inv(sym)] {
            if o.letter_image(p, &l) == target {
                return Some(l);
            }
        }
    }
    for (i, m) in p.models().iter().enumerate() {
        let gens = m.generators();
        if gens.len() == 1 && !m.is_finite() {
            let img = o.letter_image(p, &Letter::h(i, gens[0].clone()));
            if let Some(k) = integer_multiple(target, &img) {
                return Some(Letter::h(i, model_power(m, &gens[0], k)));
            }
            continue;
        }
        let bound = opts.rho_schedule.iter().copied().max().unwrap_or(1);
        for e in m.elements_up_to(bound) {
            let l = Letter::h(i, e);
            if o.letter_image(p, &l) == target {
                return Some(l);
            }
        }
    }
    None
}

/// `k` with `target = k·v`, for nonzero `v`.
fn integer_multiple(target: &[i64], v: &[i64]) -> Option<i64> {
    let j = v.iter().position(|&c| c != 0)?;
    if target[j] % v[j] != 0 {
        return None;
    }
    let k = target[j] / v[j];
    (k != 0 && target.iter().zip(v).all(|(t, c)| *t == k * c)).then_some(k)
}

/// Lower bound for integer quotients whose peripheral images vanish: every letter
/// moves the image by at most the largest generator image in ℓ1.
fn integer_lower_bound(g: &Group, target: &[i64]) -> u64 {
    let OracleImpl::Integer(o) = &g.oracle else { return 1 };
    let p = g.presentation();
    let models_silent = p.models().iter().enumerate().all(|(i, m)| {
        m.generators().into_iter().all(|e| o.letter_image(p, &Letter::h(i, e)).iter().all(|&c| c == 0))
    });
    let step = (0..p.x_symbols().len())
        .map(|s| o.letter_image(p, &Letter::x(s)).iter().map(|c| c.unsigned_abs()).sum::<u64>())
        .max()
        .unwrap_or(0);
    if !models_silent || step == 0 {
        return 1;
    }
    let norm: u64 = target.iter().map(|c| c.unsigned_abs()).sum();
    norm.div_ceil(step).max(1)
}

/// Candidate letters for the geodesic search at peripheral bound `rho`.
fn candidate_letters(p: &RelativePresentation, rho: u64, extra: &[&Word], closure_depth: usize) -> Vec<Letter> {
    let mut out = p.letters_up_to(rho);
    let mut seen: HashSet<Letter> = out.iter().cloned().collect();
    let mut syllables: Vec<Letter> = Vec::new();
    for w in p.relators().iter().chain(extra.iter().copied()) {
        for l in w.letters().iter().filter(|l| !l.is_x()) {
            for c in [l.clone(), p.invert_letter(l)] {
                if seen.insert(c.clone()) {
                    syllables.push(c);
                }
            }
        }
    }
    let mut layer = syllables.clone();
    for _ in 0..closure_depth {
        let mut next = Vec::new();
        for a in &layer {
            for b in &syllables {
                if let Some(Some(c)) = p.combine(a, b) {
                    if seen.insert(c.clone()) {
                        next.push(c);
                    }
                }
            }
        }
        syllables.extend(next.iter().cloned());
        layer = next;
    }
    out.extend(syllables);
    out
}

fn search_geodesic(g: &Group, w: &Word, nf: &Word, opts: &LengthOptions) -> Result<Measured> {
    let p = g.presentation();
    let reduced = p.free_reduce(w);
    let (mut upper, mut witness) = if nf.len() <= reduced.len() {
        (nf.len() as u64, nf.clone())
    } else {
        (reduced.len() as u64, reduced.clone())
    };
    let mut lower = 1u64;
    if let OracleImpl::Integer(o) = &g.oracle {
        let target = o.image(p, nf);
        if let Some(l) = single_letter_integer(g, &target, opts) {
            return Ok(Measured { length: RelLength::Exact { value: 1 }, witness: Word::new(vec![l]), rho: 0 });
        }
        lower = integer_lower_bound(g, &target).max(2);
    }
    let complete_alphabet = p.models().iter().all(PeripheralModel::is_finite);
    let mut rho_used = 0;
    for &rho in &opts.rho_schedule {
        if upper <= lower {
            break;
        }
        rho_used = rho;
        let letters = candidate_letters(p, rho, &[nf, &reduced], opts.closure_depth);
        let (found, exhausted) = bfs_target(g, &letters, nf, upper - 1, opts.vertex_budget)?;
        if let Some(word) = found {
            upper = word.len() as u64;
            witness = word;
        }
        if exhausted && complete_alphabet {
            lower = upper;
        }
        if complete_alphabet {
            break;
        }
    }
    let length = if lower >= upper { RelLength::Exact { value: upper } } else { RelLength::Bounds { lower, upper } };
    Ok(Measured { length, witness, rho: rho_used })
}

/// Breadth-first search for `target` within `max_depth` steps over `letters`.
/// Returns the first representative found and whether the search finished
/// without hitting the vertex budget.
fn bfs_target(
    g: &Group,
    letters: &[Letter],
    target: &Word,
    max_depth: u64,
    budget: usize,
) -> Result<(Option<Word>, bool)> {
    let mut seen: HashSet<Word> = HashSet::from([Word::empty()]);
    let mut frontier: Vec<(Word, Word)> = vec![(Word::empty(), Word::empty())];
    for _ in 0..max_depth {
        let batch: Vec<Word> = frontier
            .iter()
            .flat_map(|(nf, _)| {
                letters.iter().map(move |l| {
                    let mut w = nf.clone();
                    w.push(l.clone());
                    w
                })
            })
            .collect();
        let forms = g.normal_forms(&batch)?;
        let mut next = Vec::new();
        for (k, nf) in forms.into_iter().enumerate() {
            if !seen.insert(nf.clone()) {
                continue;
            }
            let mut path = frontier[k / letters.len()].1.clone();
            path.push(letters[k % letters.len()].clone());
            if &nf == target {
                return Ok((Some(path), true));
            }
            if seen.len() > budget {
                return Ok((None, false));
            }
            next.push((nf, path));
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok((None, true))
}

/// Exact relative length in a finite quotient by BFS over the group table, with
/// each peripheral image subgroup contributing its elements as single letters.
fn finite_geodesic(p: &RelativePresentation, o: &FiniteOracle, w: &Word) -> Result<Measured> {
    let mut steps: Vec<(usize, Letter)> = Vec::new();
    for sym in 0..p.x_symbols().len() {
        for l in [Letter::x(sym), Letter::x_inv(sym)] {
            steps.push((o.letter_image(p, &l), l));
        }
    }
    for (i, m) in p.models().iter().enumerate() {
        for (img, e) in image_preimages(p, o, i, m) {
            steps.push((img, Letter::h(i, e)));
        }
    }
    let target = o.image(p, w);
    let id = o.table.identity();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; o.table.order()];
    let mut seen = vec![false; o.table.order()];
    seen[id] = true;
    let mut queue = VecDeque::from([id]);
    while let Some(cur) = queue.pop_front() {
        if cur == target {
            break;
        }
        for (k, (img, _)) in steps.iter().enumerate() {
            let next = o.table.table()[cur][*img];
            if !seen[next] {
                seen[next] = true;
                parent[next] = Some((cur, k));
                queue.push_back(next);
            }
        }
    }
    if !seen[target] {
        return Err(Error::Oracle(format!("finite_quotient element {target} is unreachable")));
    }
    let mut letters = Vec::new();
    let mut cur = target;
    while let Some((prev, k)) = parent[cur] {
        letters.push(steps[k].1.clone());
        cur = prev;
    }
    letters.reverse();
    Ok(Measured { length: RelLength::Exact { value: letters.len() as u64 }, witness: Word::new(letters), rho: 0 })
}

/// One model element per nonidentity element of the model's image subgroup.
fn image_preimages(p: &RelativePresentation, o: &FiniteOracle, model: usize, m: &PeripheralModel) -> Vec<(usize, Elem)> {
    let id = o.table.identity();
    let mut found: HashMap<usize, Elem> = HashMap::new();
    let mut order = Vec::new();
    let candidates: Box<dyn Iterator<Item = Elem>> = match &m.kind {
        ModelKind::FiniteTable(t) => Box::new((0..t.order()).map(Elem::Table)),
        _ => {
            // Breadth-first over model lengths until the image subgroup stops growing.
            let mut all = Vec::new();
            let mut last = 0;
            for bound in 1..=12 {
                all = m.elements_up_to(bound);
                let images: HashSet<usize> = all.iter().map(|e| o.elem_image(p, model, e)).collect();
                if images.len() == last {
                    break;
                }
                last = images.len();
            }
            Box::new(all.into_iter())
        }
    };
    for e in candidates {
        if m.is_identity(&e) {
            continue;
        }
        let img = o.elem_image(p, model, &e);
        if img != id && !found.contains_key(&img) {
            found.insert(img, e.clone());
            order.push((img, e));
        }
    }
    order
}
