//! Finite windows of the universal cover of the CW-pair `(K, L)`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde_json::{json, Value};

use crate::cayley::truncated_ball;
use crate::error::{Error, Result};
use crate::oracle::Group;
use crate::presentation::{elem_to_json, word_to_json, Elem, Letter, ModelKind, Word};

/// Orbit type of a cell of the universal cover.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellKind {
    /// `ẽ⁰`.
    Vertex,
    /// `ẽ⁰_λ`, the base vertex of the lifted `L_λ`.
    Peripheral { model: usize },
    /// `ẽ¹_x` with `∂ = x·ẽ⁰ − ẽ⁰`.
    XEdge { sym: usize },
    /// `ẽ¹_λ` with `∂ = ẽ⁰_λ − ẽ⁰`.
    LambdaEdge { model: usize },
    /// `ẽ¹_h` with `∂ = h·ẽ⁰_λ − ẽ⁰_λ`; lies in `L̄`.
    HEdge { model: usize, elem: Elem },
    /// `ẽ²_R` attached along the relator read from the base vertex.
    RCell { relator: usize },
    /// `ẽ²_S` for the model relation `a·b = (ab)`; lies in `L̄`.
    SCell { model: usize, a: Elem, b: Elem },
}

/// A cell `g·e` of the universal cover, `g` given by its normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub translate: Word,
    pub kind: CellKind,
}

impl Cell {
    pub fn new(translate: Word, kind: CellKind) -> Self {
        Self { translate, kind }
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            CellKind::Vertex | CellKind::Peripheral { .. } => 0,
            CellKind::XEdge { .. } | CellKind::LambdaEdge { .. } | CellKind::HEdge { .. } => 1,
            CellKind::RCell { .. } | CellKind::SCell { .. } => 2,
        }
    }

    pub fn in_lbar(&self) -> bool {
        matches!(self.kind, CellKind::Peripheral { .. } | CellKind::HEdge { .. } | CellKind::SCell { .. })
    }

    /// Edge length in the `L`-relative metric: 0 on `L̄`, 1/2 on `ẽ¹_λ` translates, 1 on `ẽ¹_x` translates.
    pub fn rel_weight(&self) -> f64 {
        match self.kind {
            CellKind::XEdge { .. } => 1.0,
            CellKind::LambdaEdge { .. } => 0.5,
            _ => 0.0,
        }
    }
}

/// A signed formal sum of cells.
pub type FormalChain = Vec<(Cell, i64)>;

fn collect(terms: impl IntoIterator<Item = (Cell, i64)>) -> FormalChain {
    let mut acc: BTreeMap<Cell, i64> = BTreeMap::new();
    for (c, k) in terms {
        *acc.entry(c).or_insert(0) += k;
    }
    acc.into_iter().filter(|(_, k)| *k != 0).collect()
}

/// Which translates a window is built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WindowSpec {
    /// All vertices of the truncated ball of the given radius.
    Ball { radius: usize, rho: u64 },
    /// The translates `step^0, ..., step^n`; only the 2-cells at `step^k`, `k < n`,
    /// can be interior.
    Strip { step: Word, n: usize, rho: u64 },
}

impl WindowSpec {
    pub fn label(&self) -> String {
        match self {
            WindowSpec::Ball { radius, rho } => format!("ball(radius={radius},rho={rho})"),
            WindowSpec::Strip { n, rho, .. } => format!("strip(n={n},rho={rho})"),
        }
    }
}

/// A finite subcomplex-like fragment of `K̃` with boundary data.
#[derive(Clone, Debug)]
pub struct Window {
    pub spec_label: String,
    pub cells: [Vec<Cell>; 3],
    index: [HashMap<Cell, usize>; 3],
    /// `(source, target)` 0-cell indices of each 1-cell.
    pub ends: Vec<(usize, usize)>,
    /// Boundary of each 2-cell as a formal chain (may leave the window).
    pub boundary2: Vec<FormalChain>,
    /// Boundary of each interior 2-cell in 1-cell indices; empty for non-interior cells.
    pub boundary2_idx: Vec<Vec<(usize, i64)>>,
    pub interior: Vec<bool>,
    /// Coset representative 0-cell for each `ẽ⁰_λ` translate (itself for `ẽ⁰` translates).
    pub coset_rep: Vec<usize>,
}

impl Window {
    pub fn index_of(&self, c: &Cell) -> Option<usize> {
        self.index[c.dim()].get(c).copied()
    }

    pub fn count(&self, dim: usize) -> usize {
        self.cells[dim].len()
    }

    pub fn interior_cells(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.cells[2].len()).filter(|&i| self.interior[i])
    }

    /// Largest ℓ1-norm of an interior 2-cell boundary.
    pub fn max_boundary_l1(&self) -> i64 {
        self.boundary2_idx.iter().map(|b| b.iter().map(|(_, k)| k.abs()).sum()).max().unwrap_or(0)
    }

    /// Sparse boundary of a 1-cell in 0-cell indices.
    pub fn boundary1(&self, e: usize) -> Vec<(usize, i64)> {
        let (s, t) = self.ends[e];
        if s == t {
            Vec::new()
        } else {
            vec![(t, 1), (s, -1)]
        }
    }

    /// JSON export: cell lists plus boundary matrices as `[row, col, value]` triplets.
    pub fn to_json(&self, g: &Group) -> Value {
        let p = g.presentation();
        let cell_json = |c: &Cell| {
            let kind = match &c.kind {
                CellKind::Vertex => json!({"type": "e0"}),
                CellKind::Peripheral { model } => json!({"type": "e0_lambda", "lambda": p.model(*model).label}),
                CellKind::XEdge { sym } => json!({"type": "e1_x", "x": p.x_symbols()[*sym]}),
                CellKind::LambdaEdge { model } => json!({"type": "e1_lambda", "lambda": p.model(*model).label}),
                CellKind::HEdge { model, elem } => {
                    let m = p.model(*model);
                    json!({"type": "e1_h", "lambda": m.label, "h": elem_to_json(m, elem)})
                }
                CellKind::RCell { relator } => json!({"type": "e2_R", "relator": relator}),
                CellKind::SCell { model, a, b } => {
                    let m = p.model(*model);
                    json!({"type": "e2_S", "lambda": m.label, "a": elem_to_json(m, a), "b": elem_to_json(m, b)})
                }
            };
            json!({"translate": word_to_json(p, &c.translate), "cell": kind})
        };
        let d1: Vec<Value> = (0..self.count(1))
            .flat_map(|e| self.boundary1(e).into_iter().map(move |(v, k)| json!([v, e, k])))
            .collect();
        let d2: Vec<Value> = self
            .boundary2_idx
            .iter()
            .enumerate()
            .flat_map(|(f, b)| b.iter().map(move |(e, k)| json!([e, f, k])))
            .collect();
        json!({
            "window": self.spec_label,
            "cells": {
                "0": self.cells[0].iter().map(cell_json).collect::<Vec<_>>(),
                "1": self.cells[1].iter().map(cell_json).collect::<Vec<_>>(),
                "2": self.cells[2].iter().map(cell_json).collect::<Vec<_>>(),
            },
            "interior": self.interior,
            "boundary_1": d1,
            "boundary_2": d2,
        })
    }
}

/// Formal boundary of a 1-cell: `(source, target)`.
fn edge_ends(g: &Group, c: &Cell) -> Result<(Cell, Cell)> {
    let t = &c.translate;
    Ok(match &c.kind {
        CellKind::XEdge { sym } => {
            (Cell::new(t.clone(), CellKind::Vertex), Cell::new(g.multiply(t, &Word::new(vec![Letter::x(*sym)]))?, CellKind::Vertex))
        }
        CellKind::LambdaEdge { model } => {
            (Cell::new(t.clone(), CellKind::Vertex), Cell::new(t.clone(), CellKind::Peripheral { model: *model }))
        }
        CellKind::HEdge { model, elem } => (
            Cell::new(t.clone(), CellKind::Peripheral { model: *model }),
            Cell::new(
                g.multiply(t, &Word::new(vec![Letter::h(*model, elem.clone())]))?,
                CellKind::Peripheral { model: *model },
            ),
        ),
        _ => unreachable!("edge_ends on a cell of dimension {}", c.dim()),
    })
}

/// Boundary of `g·ẽ²_R`: the relator read as an edge path from `g·ẽ⁰`.
pub fn relator_boundary(g: &Group, translate: &Word, relator: &Word) -> Result<FormalChain> {
    let mut terms = Vec::new();
    let mut cur = translate.clone();
    for l in relator.letters() {
        match l {
            Letter::X { sym, inv: false } => {
                terms.push((Cell::new(cur.clone(), CellKind::XEdge { sym: *sym }), 1));
                cur = g.multiply(&cur, &Word::new(vec![l.clone()]))?;
            }
            Letter::X { sym, inv: true } => {
                cur = g.multiply(&cur, &Word::new(vec![l.clone()]))?;
                terms.push((Cell::new(cur.clone(), CellKind::XEdge { sym: *sym }), -1));
            }
            Letter::H { model, elem } => {
                let next = g.multiply(&cur, &Word::new(vec![l.clone()]))?;
                terms.push((Cell::new(cur.clone(), CellKind::LambdaEdge { model: *model }), 1));
                terms.push((Cell::new(cur.clone(), CellKind::HEdge { model: *model, elem: elem.clone() }), 1));
                terms.push((Cell::new(next.clone(), CellKind::LambdaEdge { model: *model }), -1));
                cur = next;
            }
        }
    }
    Ok(collect(terms))
}

fn scell_boundary(g: &Group, translate: &Word, model: usize, a: &Elem, b: &Elem) -> Result<FormalChain> {
    let m = g.presentation().model(model);
    let ga = g.multiply(translate, &Word::new(vec![Letter::h(model, a.clone())]))?;
    let mut terms = vec![
        (Cell::new(translate.clone(), CellKind::HEdge { model, elem: a.clone() }), 1),
        (Cell::new(ga, CellKind::HEdge { model, elem: b.clone() }), 1),
    ];
    let ab = m.product(a, b);
    if !m.is_identity(&ab) {
        terms.push((Cell::new(translate.clone(), CellKind::HEdge { model, elem: ab }), -1));
    }
    Ok(collect(terms))
}

pub fn build_window(g: &Group, spec: &WindowSpec) -> Result<Window> {
    let (translates, rho) = match spec {
        WindowSpec::Ball { radius, rho } => (truncated_ball(g, *radius, *rho)?.vertices, *rho),
        WindowSpec::Strip { step, n, rho } => {
            let mut out = vec![Word::empty()];
            for _ in 0..*n {
                out.push(g.multiply(out.last().unwrap(), step)?);
            }
            (out, *rho)
        }
    };
    build_window_from(g, &translates, rho, spec.label())
}

/// Builds the window spanned by the given translates (normal forms). Every 0-, 1-
/// and 2-cell based at a translate is included, together with the endpoints of
/// the 1-cells; `ẽ¹_h` cells are limited to model length at most `rho`.
pub fn build_window_from(g: &Group, translates: &[Word], rho: u64, label: String) -> Result<Window> {
    let p = g.presentation();
    let mut c0: Vec<Cell> = Vec::new();
    let mut c1: Vec<Cell> = Vec::new();
    let mut c2: Vec<Cell> = Vec::new();
    let h_elems: Vec<Vec<Elem>> = p.models().iter().map(|m| m.elements_up_to(rho)).collect();
    for t in translates {
        c0.push(Cell::new(t.clone(), CellKind::Vertex));
        for (i, m) in p.models().iter().enumerate() {
            c0.push(Cell::new(t.clone(), CellKind::Peripheral { model: i }));
            c1.push(Cell::new(t.clone(), CellKind::LambdaEdge { model: i }));
            for h in &h_elems[i] {
                c1.push(Cell::new(t.clone(), CellKind::HEdge { model: i, elem: h.clone() }));
            }
            if let ModelKind::FiniteTable(_) = &m.kind {
                for a in &h_elems[i] {
                    for b in &h_elems[i] {
                        c2.push(Cell::new(t.clone(), CellKind::SCell { model: i, a: a.clone(), b: b.clone() }));
                    }
                }
            }
        }
        for sym in 0..p.x_symbols().len() {
            c1.push(Cell::new(t.clone(), CellKind::XEdge { sym }));
        }
        for r in 0..p.relators().len() {
            c2.push(Cell::new(t.clone(), CellKind::RCell { relator: r }));
        }
    }
    let mut ends_cells = Vec::with_capacity(c1.len());
    for e in &c1 {
        let (s, t) = edge_ends(g, e)?;
        c0.push(s.clone());
        c0.push(t.clone());
        ends_cells.push((s, t));
    }
    for v in [&mut c0, &mut c1, &mut c2] {
        let mut seen = std::collections::HashSet::new();
        v.retain(|c| seen.insert(c.clone()));
    }
    let index: [HashMap<Cell, usize>; 3] = [&c0, &c1, &c2].map(|v| v.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect());
    let mut ends_map: HashMap<Cell, (usize, usize)> = HashMap::new();
    for (e, (s, t)) in c1.iter().zip(ends_cells) {
        ends_map.insert(e.clone(), (index[0][&s], index[0][&t]));
    }
    let ends: Vec<(usize, usize)> = c1.iter().map(|e| ends_map[e]).collect();
    let mut boundary2 = Vec::with_capacity(c2.len());
    let mut boundary2_idx = Vec::with_capacity(c2.len());
    let mut interior = Vec::with_capacity(c2.len());
    for f in &c2 {
        let b = match &f.kind {
            CellKind::RCell { relator } => relator_boundary(g, &f.translate, &p.relators()[*relator])?,
            CellKind::SCell { model, a, b } => scell_boundary(g, &f.translate, *model, a, b)?,
            _ => unreachable!(),
        };
        let idx: Option<Vec<(usize, i64)>> = b.iter().map(|(c, k)| index[1].get(c).map(|&i| (i, *k))).collect();
        interior.push(idx.is_some());
        boundary2_idx.push(idx.unwrap_or_default());
        boundary2.push(b);
    }
    let coset_rep = coset_representatives(&c0, &c1, &ends);
    if c0.is_empty() {
        return Err(Error::Invalid("empty window".into()));
    }
    Ok(Window { spec_label: label, cells: [c0, c1, c2], index, ends, boundary2, boundary2_idx, interior, coset_rep })
}

/// Components of `ẽ⁰_λ` translates joined by `ẽ¹_h` edges, each represented by
/// the member with the least translate.
fn coset_representatives(c0: &[Cell], c1: &[Cell], ends: &[(usize, usize)]) -> Vec<usize> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); c0.len()];
    for (e, &(s, t)) in c1.iter().zip(ends) {
        if matches!(e.kind, CellKind::HEdge { .. }) {
            adj[s].push(t);
            adj[t].push(s);
        }
    }
    let mut rep: Vec<usize> = (0..c0.len()).collect();
    let mut done = vec![false; c0.len()];
    for start in 0..c0.len() {
        if done[start] || !matches!(c0[start].kind, CellKind::Peripheral { .. }) {
            continue;
        }
        let mut comp = vec![start];
        done[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !done[u] {
                    done[u] = true;
                    comp.push(u);
                    queue.push_back(u);
                }
            }
        }
        let best = *comp.iter().min_by(|&&a, &&b| c0[a].translate.cmp(&c0[b].translate)).unwrap();
        for v in comp {
            rep[v] = best;
        }
    }
    rep
}
