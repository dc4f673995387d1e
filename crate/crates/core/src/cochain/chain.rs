//! Chains, cochains, `∂`, `δ` and the evaluation pairing on a window.

use std::collections::BTreeMap;

use super::window::Window;
use crate::error::{Error, Result};

/// A finitely supported chain over window cells of one dimension.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Chain {
    pub dim: usize,
    pub coeffs: BTreeMap<usize, f64>,
}

impl Chain {
    pub fn new(dim: usize) -> Self {
        Self { dim, coeffs: BTreeMap::new() }
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut c = Self::new(dim);
        for (i, k) in terms {
            c.add(i, k);
        }
        c
    }

    pub fn add(&mut self, cell: usize, k: f64) {
        let e = self.coeffs.entry(cell).or_insert(0.0);
        *e += k;
        if *e == 0.0 {
            self.coeffs.remove(&cell);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// A cochain: one value per window cell of its dimension. Values on 2-cells that
/// are not interior are carried but never produced by `δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    pub dim: usize,
    pub values: Vec<f64>,
}

impl Cochain {
    pub fn zero(w: &Window, dim: usize) -> Self {
        Self { dim, values: vec![0.0; w.count(dim)] }
    }

    pub fn from_fn(w: &Window, dim: usize, f: impl Fn(usize) -> f64) -> Self {
        Self { dim, values: (0..w.count(dim)).map(f).collect() }
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Whether the cochain vanishes on every `L̄` cell of its dimension.
    pub fn is_relative(&self, w: &Window) -> bool {
        w.cells[self.dim].iter().zip(&self.values).all(|(c, v)| !c.in_lbar() || *v == 0.0)
    }

    fn check(&self, w: &Window) -> Result<()> {
        if self.dim > 2 || self.values.len() != w.count(self.dim) {
            return Err(Error::Precondition(format!("cochain of dimension {} does not fit the window", self.dim)));
        }
        Ok(())
    }
}

/// `∂` of a 1- or 2-chain. A 2-chain must be supported on interior cells.
pub fn boundary(w: &Window, c: &Chain) -> Result<Chain> {
    let mut out = Chain::new(c.dim.wrapping_sub(1));
    match c.dim {
        1 => {
            for (&e, &k) in &c.coeffs {
                for (v, s) in w.boundary1(e) {
                    out.add(v, k * s as f64);
                }
            }
        }
        2 => {
            for (&f, &k) in &c.coeffs {
                if !w.interior[f] {
                    return Err(Error::Precondition(format!("2-cell {f} is not interior to the window")));
                }
                for &(e, s) in &w.boundary2_idx[f] {
                    out.add(e, k * s as f64);
                }
            }
        }
        d => return Err(Error::Precondition(format!("no boundary map on {d}-chains"))),
    }
    Ok(out)
}

/// `δc`, defined by `(δc)(e) = c(∂e)`. For 1-cochains the result is 0 on 2-cells
/// that are not interior.
pub fn coboundary(w: &Window, c: &Cochain) -> Result<Cochain> {
    c.check(w)?;
    match c.dim {
        0 => Ok(Cochain::from_fn(w, 1, |e| w.boundary1(e).iter().map(|&(v, s)| s as f64 * c.values[v]).sum())),
        1 => Ok(Cochain::from_fn(w, 2, |f| w.boundary2_idx[f].iter().map(|&(e, s)| s as f64 * c.values[e]).sum())),
        d => Err(Error::Precondition(format!("no coboundary on {d}-cochains in a 2-complex"))),
    }
}

/// The evaluation `⟨z, D⟩ = Σ z(e)·D(e)`.
pub fn pair(z: &Cochain, d: &Chain) -> Result<f64> {
    if z.dim != d.dim {
        return Err(Error::Precondition(format!("pairing a {}-cochain with a {}-chain", z.dim, d.dim)));
    }
    d.coeffs
        .iter()
        .map(|(&i, &k)| {
            z.values.get(i).map(|v| v * k).ok_or_else(|| Error::Precondition(format!("cell {i} outside the window")))
        })
        .sum()
}

/// Relative length of a 1-chain: `Σ |c(e)|·weight(e)`.
pub fn chain_rel_length(w: &Window, c: &Chain) -> f64 {
    c.coeffs.iter().map(|(&e, k)| k.abs() * w.cells[1][e].rel_weight()).sum()
}

/// The windowed inequality `⟨δh, D⟩ = ⟨h, ∂D⟩ ≤ 2·‖h‖∞·l_rel(∂D)` for a relative
/// 1-cochain `h` and an interior 2-chain `D`. Returns `(lhs, rhs)`.
pub fn evident_bound(w: &Window, h: &Cochain, d: &Chain) -> Result<(f64, f64)> {
    if h.dim != 1 || !h.is_relative(w) {
        return Err(Error::Precondition("the bound needs a relative 1-cochain".into()));
    }
    let z = coboundary(w, h)?;
    let lhs = pair(&z, d)?;
    let rhs = 2.0 * h.norm_inf() * chain_rel_length(w, &boundary(w, d)?);
    Ok((lhs, rhs))
}
