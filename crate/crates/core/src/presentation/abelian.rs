//! Rational abelianization `F^ab ⊗ ℚ / span(ℛ)`, used as a cheap triviality obstruction.
//!
//! Finite peripheral models contribute no coordinates (their abelian images are torsion),
//! so a nonzero image certifies nontriviality in `G` while a zero image says nothing.

use super::model::{Elem, ModelKind};
use super::{Letter, RelativePresentation, Word};

#[derive(Clone, Debug)]
pub struct RationalAbelianization {
    /// First coordinate of each model's block, or `None` for finite models.
    offsets: Vec<Option<usize>>,
    dim: usize,
    x_count: usize,
    /// Echelon basis of the relator span; `pivots[i]` is the pivot column of `rows[i]`.
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn normalize(row: &mut [i128]) {
    let g = row.iter().fold(0, |g, &c| gcd(g, c));
    if g > 1 {
        row.iter_mut().for_each(|c| *c /= g);
    }
}

impl RationalAbelianization {
    pub fn new(p: &RelativePresentation) -> Self {
        let x_count = p.x_symbols().len();
        let mut dim = x_count;
        let offsets = p
            .models()
            .iter()
            .map(|m| match m.kind {
                ModelKind::FreeAbelian { rank } | ModelKind::FreeGroup { rank } => {
                    let o = dim;
                    dim += rank;
                    Some(o)
                }
                ModelKind::FiniteTable(_) => None,
            })
            .collect();
        let mut ab = Self { offsets, dim, x_count, rows: Vec::new(), pivots: Vec::new() };
        for r in p.relators() {
            let v = ab.image(r);
            ab.insert(v);
        }
        ab
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exponent-sum image of a word.
    pub fn image(&self, w: &Word) -> Vec<i128> {
        let mut v = vec![0i128; self.dim];
        for l in w.letters() {
            match l {
                Letter::X { sym, inv } => v[*sym] += if *inv { -1 } else { 1 },
                Letter::H { model, elem } => {
                    let Some(off) = self.offsets[*model] else { continue };
                    match elem {
                        Elem::Abelian(c) => c.iter().enumerate().for_each(|(i, &k)| v[off + i] += k as i128),
                        Elem::Free(word) => word
                            .iter()
                            .for_each(|&g| v[off + g.unsigned_abs() as usize - 1] += g.signum() as i128),
                        Elem::Table(_) => {}
                    }
                }
            }
        }
        debug_assert!(self.x_count <= self.dim);
        v
    }

    fn reduce(&self, mut v: Vec<i128>) -> Vec<i128> {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if v[piv] != 0 {
                let (a, b) = (row[piv], v[piv]);
                let g = gcd(a, b);
                let (ma, mb) = (b / g, a / g);
                for (x, r) in v.iter_mut().zip(row) {
                    *x = *x * mb - *r * ma;
                }
                normalize(&mut v);
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<i128>) {
        let v = self.reduce(v);
        if let Some(piv) = v.iter().position(|&c| c != 0) {
            self.rows.push(v);
            self.pivots.push(piv);
        }
    }

    /// True when the word's image is nonzero, which certifies that it is nontrivial in `G`.
    pub fn certifies_nontrivial(&self, w: &Word) -> bool {
        self.reduce(self.image(w)).iter().any(|&c| c != 0)
    }
}
