//! Free groups acting by relative automorphisms: corridors, flare and separation
//! checks, and the corridor cocycle pairing.
//!
//! The corridor of `g` records, for each `a ∈ F_n`, the relative length of the
//! horizontal geodesic from `a·ẽ⁰` to `a·α_{a⁻¹}(g)·ẽ⁰`, which is `l(α_{a⁻¹}(g))`.

mod automorphism;
mod pairing;
mod separation;

pub use automorphism::{
    display_free, free_ball, invert, is_reduced, reduce, validate_relaut, FreeAction, FreeWord, RelAutomorphism,
    ValidationReport,
};
pub use pairing::{corridor_cocycle_pairing, free_geodesic, sides_report, PairingReport, PairingTerm, SidesReport};
pub use separation::{
    check_separated, check_uniform_flare, GSample, SeparationParams, SeparationReport, SeparationVerdict, Violation,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::cayley::{rel_length, RelLength};
use crate::error::Result;
use crate::oracle::Group;
use crate::presentation::Word;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorridorEntry {
    pub a: FreeWord,
    pub length: RelLength,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Corridor {
    #[serde(skip)]
    pub g: Word,
    pub radius: usize,
    /// One entry per reduced `a` with `|a| ≤ radius`, in [`free_ball`] order.
    pub entries: Vec<CorridorEntry>,
}

impl Corridor {
    pub fn get(&self, a: &[i32]) -> Option<RelLength> {
        self.entries.iter().find(|e| e.a == a).map(|e| e.length)
    }

    pub fn base(&self) -> RelLength {
        self.entries[0].length
    }

    /// Whether some entry is only bounded, not exact.
    pub fn has_bounds(&self) -> bool {
        self.entries.iter().any(|e| e.length.exact().is_none())
    }
}

pub fn build_corridor(g: &Group, action: &FreeAction, elem: &Word, radius: usize) -> Result<Corridor> {
    let p = g.presentation();
    let entries = free_ball(action.rank(), radius)
        .into_par_iter()
        .map(|a| {
            let img = action.apply(p, &invert(&a), elem)?;
            Ok(CorridorEntry { length: rel_length(g, &img)?, a })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Corridor { g: elem.clone(), radius, entries })
}
