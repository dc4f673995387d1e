//! Window-scale versions of the maximizing-path function `ν`, the 0-cochain `d`
//! built from it, and `k = −m + δd`.
//!
//! The maxima here range over simple edge paths inside one window with a length
//! cap, so they are lower estimates of the maxima over all paths in the cover.

use serde::Serialize;

use super::chain::{coboundary, Cochain};
use super::window::{Cell, CellKind, Window};
use crate::error::{Error, Result};
use crate::presentation::Word;

/// An edge path: 1-cell indices with orientation `+1` (source to target) or `−1`.
pub type EdgePath = Vec<(usize, i8)>;

fn step_ends(w: &Window, (e, s): (usize, i8)) -> (usize, usize) {
    let (a, b) = w.ends[e];
    if s > 0 {
        (a, b)
    } else {
        (b, a)
    }
}

/// Checks that consecutive edges meet and returns `(start, end)` 0-cells, or `None`
/// for the empty path.
pub fn path_endpoints(w: &Window, path: &[(usize, i8)]) -> Result<Option<(usize, usize)>> {
    let mut ends: Option<(usize, usize)> = None;
    for &(e, s) in path {
        if e >= w.count(1) || (s != 1 && s != -1) {
            return Err(Error::Precondition(format!("edge ({e}, {s}) is not in the window")));
        }
        let (a, b) = step_ends(w, (e, s));
        ends = match ends {
            None => Some((a, b)),
            Some((start, cur)) if cur == a => Some((start, b)),
            Some(_) => return Err(Error::Precondition(format!("edge {e} does not continue the path"))),
        };
    }
    Ok(ends)
}

/// Relative length of a path: L̄ edges 0, `ẽ¹_λ` translates 1/2, `ẽ¹_x` translates 1.
pub fn path_rel_length(w: &Window, path: &[(usize, i8)]) -> f64 {
    path.iter().map(|&(e, _)| w.cells[1][e].rel_weight()).sum()
}

/// `ν(γ) = ⟨m, γ⟩ − C·‖z‖∞·l_rel(γ)`.
pub fn nu(w: &Window, path: &[(usize, i8)], m: &Cochain, z: &Cochain, c: f64) -> Result<f64> {
    path_endpoints(w, path)?;
    if m.dim != 1 || m.values.len() != w.count(1) {
        return Err(Error::Precondition("m must be a 1-cochain on the window".into()));
    }
    let pairing: f64 = path.iter().map(|&(e, s)| s as f64 * m.values[e]).sum();
    Ok(pairing - c * z.norm_inf() * path_rel_length(w, path))
}

fn incidence(w: &Window) -> Vec<Vec<(usize, i8, usize)>> {
    let mut adj = vec![Vec::new(); w.count(0)];
    for (e, &(a, b)) in w.ends.iter().enumerate() {
        adj[a].push((e, 1, b));
        adj[b].push((e, -1, a));
    }
    adj
}

/// Depth-first enumeration of simple paths from `from` with at most `cap` edges.
/// Calls `visit(end, ν, path)` for every path, including the empty one.
fn enumerate_simple_paths(
    w: &Window,
    from: usize,
    cap: usize,
    edge_gain: &[f64],
    edge_cost: &[f64],
    mut visit: impl FnMut(usize, f64, &EdgePath),
) {
    struct Frame<'a, F> {
        adj: Vec<Vec<(usize, i8, usize)>>,
        gain: &'a [f64],
        cost: &'a [f64],
        on_path: Vec<bool>,
        path: EdgePath,
        cap: usize,
        visit: F,
    }
    fn go<F: FnMut(usize, f64, &EdgePath)>(f: &mut Frame<'_, F>, v: usize, value: f64) {
        (f.visit)(v, value, &f.path);
        if f.path.len() == f.cap {
            return;
        }
        for i in 0..f.adj[v].len() {
            let (e, s, u) = f.adj[v][i];
            if f.on_path[u] {
                continue;
            }
            f.on_path[u] = true;
            f.path.push((e, s));
            let next = value + s as f64 * f.gain[e] - f.cost[e];
            go(f, u, next);
            f.path.pop();
            f.on_path[u] = false;
        }
    }
    let mut frame = Frame {
        adj: incidence(w),
        gain: edge_gain,
        cost: edge_cost,
        on_path: vec![false; w.count(0)],
        path: Vec::new(),
        cap,
        visit: &mut visit,
    };
    frame.on_path[from] = true;
    go(&mut frame, from, 0.0);
}

fn gains_and_costs(w: &Window, m: &Cochain, z: &Cochain, c: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if m.dim != 1 || m.values.len() != w.count(1) {
        return Err(Error::Precondition("m must be a 1-cochain on the window".into()));
    }
    let scale = c * z.norm_inf();
    Ok((m.values.clone(), w.cells[1].iter().map(|e| scale * e.rel_weight()).collect()))
}

/// Maximum of `ν` over simple paths from `from` to `to` with at most `cap` edges.
/// Ties keep the first path found in adjacency order.
pub fn windowed_max_nu(
    w: &Window,
    m: &Cochain,
    z: &Cochain,
    c: f64,
    from: usize,
    to: usize,
    cap: usize,
) -> Result<(f64, EdgePath)> {
    if from >= w.count(0) || to >= w.count(0) {
        return Err(Error::Precondition("path endpoints must be window 0-cells".into()));
    }
    let (gain, cost) = gains_and_costs(w, m, z, c)?;
    let mut best: Option<(f64, EdgePath)> = None;
    enumerate_simple_paths(w, from, cap, &gain, &cost, |v, value, path| {
        if v == to && best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, path.clone()));
        }
    });
    best.ok_or_else(|| Error::NotFound(format!("no path within {cap} edges between the endpoints")))
}

/// Data of the windowed construction `d`, `k = −m + δd`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrucialEcho {
    /// `d` on 0-cells; `ẽ⁰_λ` translates take the value of their coset representative.
    pub d: Vec<f64>,
    pub k: Vec<f64>,
    /// `k` vanishes on every L̄ 1-cell.
    pub relative: bool,
    pub k_norm: f64,
    /// `4C‖z‖∞`, reported for comparison only.
    pub reference_bound: f64,
}

/// Builds `d` from window-maximal `ν` values starting at the base vertex `ẽ⁰`,
/// then `k = −m + δd`. Every 0-cell (or coset representative) must be reachable
/// within `cap` edges.
pub fn crucial_echo(w: &Window, m: &Cochain, z: &Cochain, c: f64, cap: usize) -> Result<CrucialEcho> {
    let base = w
        .index_of(&Cell::new(Word::empty(), CellKind::Vertex))
        .ok_or_else(|| Error::Precondition("the window does not contain the base vertex".into()))?;
    let (gain, cost) = gains_and_costs(w, m, z, c)?;
    let mut best: Vec<Option<f64>> = vec![None; w.count(0)];
    enumerate_simple_paths(w, base, cap, &gain, &cost, |v, value, _| {
        if best[v].is_none_or(|b| value > b) {
            best[v] = Some(value);
        }
    });
    let d: Vec<f64> = (0..w.count(0))
        .map(|v| {
            let target = w.coset_rep[v];
            best[target].ok_or_else(|| Error::NotFound(format!("0-cell {target} is not reachable within {cap} edges")))
        })
        .collect::<Result<_>>()?;
    let dd = coboundary(w, &Cochain { dim: 0, values: d.clone() })?;
    let k: Vec<f64> = dd.values.iter().zip(&m.values).map(|(a, b)| a - b).collect();
    let relative = w.cells[1].iter().zip(&k).all(|(cell, v)| !cell.in_lbar() || *v == 0.0);
    let k_norm = k.iter().fold(0.0, |a: f64, v| a.max(v.abs()));
    Ok(CrucialEcho { d, k, relative, k_norm, reference_bound: 4.0 * c * z.norm_inf() })
}
