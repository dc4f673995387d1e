//! The corridor cocycle pairing: summing the horizontal geodesic lengths along an
//! `F_n`-geodesic, once directly and once through cell values of the cocycle.

use serde::Serialize;

use super::automorphism::{display_free, invert, is_reduced, reduce, FreeAction, FreeWord};
use super::Corridor;
use crate::cayley::{geodesic_witness, rel_length, RelLength};
use crate::error::{Error, Result};
use crate::oracle::Group;
use crate::presentation::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairingTerm {
    pub w: String,
    pub length: RelLength,
    /// Sum of cocycle values over the cells under `γ_g(w)`.
    pub cell_sum: Option<f64>,
    /// Whether every prefix of the geodesic witness has the expected length.
    pub telescopes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairingReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `None` when some length is only bounded.
    pub equal: Option<bool>,
    pub terms: Vec<PairingTerm>,
}

/// The vertices `w_1 = u, ..., w_n = v` of the geodesic from `u` to `v` in `F_n`.
pub fn free_geodesic(u: &[i32], v: &[i32]) -> Result<Vec<FreeWord>> {
    if !is_reduced(u) || !is_reduced(v) {
        return Err(Error::Precondition("pairing endpoints must be reduced".into()));
    }
    let step = reduce(invert(u).into_iter().chain(v.iter().copied()));
    let mut out = vec![u.to_vec()];
    for k in 1..=step.len() {
        out.push(reduce(u.iter().chain(&step[..k]).copied()));
    }
    Ok(out)
}

/// Cocycle value carried by the cells under one letter of a horizontal geodesic:
/// 1 for an `ẽ¹_x` bottom; for a peripheral letter, 1/2 for each of the two
/// `ẽ¹_λ` bottoms and 0 for the `ẽ¹_h` bottom.
fn letter_value(l: &Letter) -> f64 {
    match l {
        Letter::X { .. } => 1.0,
        Letter::H { .. } => 0.5 + 0.0 + 0.5,
    }
}

fn term(g: &Group, action: &FreeAction, elem: &Word, w: &FreeWord) -> Result<PairingTerm> {
    let p = g.presentation();
    let img = action.apply(p, &invert(w), elem)?;
    let length = rel_length(g, &img)?;
    let Some(exact) = length.exact() else {
        return Ok(PairingTerm { w: display_free(w), length, cell_sum: None, telescopes: false });
    };
    let witness = geodesic_witness(g, &img)?;
    let mut telescopes = witness.len() as u64 == exact;
    let mut cell_sum = 0.0;
    let mut prefix = Word::empty();
    for (j, l) in witness.letters().iter().enumerate() {
        cell_sum += letter_value(l);
        prefix.push(l.clone());
        telescopes &= rel_length(g, &prefix)?.exact() == Some(j as u64 + 1);
    }
    Ok(PairingTerm { w: display_free(w), length, cell_sum: Some(cell_sum), telescopes })
}

/// Compares `Σ_{i<n} l(γ_g(w_i))` over the `F_n`-geodesic `w_1..w_n` from `u` to `v`
/// against the sum of cocycle values over the cells under the same geodesics.
pub fn corridor_cocycle_pairing(
    g: &Group,
    action: &FreeAction,
    elem: &Word,
    u: &[i32],
    v: &[i32],
) -> Result<PairingReport> {
    let path = free_geodesic(u, v)?;
    let terms = path[..path.len() - 1]
        .iter()
        .map(|w| term(g, action, elem, w))
        .collect::<Result<Vec<_>>>()?;
    let rhs: f64 = terms.iter().map(|t| t.length.upper() as f64).sum();
    let lhs: f64 = terms.iter().filter_map(|t| t.cell_sum).sum();
    let determinate = terms.iter().all(|t| t.cell_sum.is_some());
    let equal = determinate.then(|| (lhs - rhs).abs() < 1e-9 && terms.iter().all(|t| t.telescopes));
    Ok(PairingReport { lhs, rhs, equal, terms })
}

/// For each pair of opposite directions at distance `N` from the base of a corridor,
/// the longer of the two geodesics relative to the base one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SidesReport {
    pub lambda_plus: f64,
    pub base: u64,
    pub pairs: usize,
    pub min_longer_ratio: Option<f64>,
    /// Every pair keeps one side at least `base / λ₊`.
    pub holds: bool,
}

pub fn sides_report(corridor: &Corridor, lambda_plus: f64) -> SidesReport {
    let base = corridor.base().upper();
    let n = corridor.radius;
    let sphere: Vec<_> = corridor.entries.iter().filter(|e| e.a.len() == n && n > 0).collect();
    let mut ratios = Vec::new();
    for (i, s) in sphere.iter().enumerate() {
        for t in &sphere[i + 1..] {
            if s.a[0] != t.a[0] && base > 0 {
                let longer = s.length.lower().max(t.length.lower()) as f64;
                ratios.push(longer / base as f64);
            }
        }
    }
    let min = ratios.iter().copied().reduce(f64::min);
    SidesReport {
        lambda_plus,
        base,
        pairs: ratios.len(),
        min_longer_ratio: min,
        holds: min.is_none_or(|r| r * lambda_plus >= 1.0),
    }
}
