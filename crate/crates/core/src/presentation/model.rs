//! Computable peripheral models: the concrete groups standing in for each `H_λ`.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// An element of a peripheral model.
///
/// `Abelian` holds the coordinate vector, `Table` an index into the
/// multiplication table and `Free` a freely reduced word of signed,
/// 1-based generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Abelian(Vec<i64>),
    Table(usize),
    Free(Vec<i32>),
}

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTable {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
    names: Vec<String>,
    generators: Option<Vec<usize>>,
    /// Word length of each element with respect to `generators`.
    lengths: Vec<u64>,
    /// A generator word (signed 1-based positions into the generator list) per element.
    words: Vec<Vec<i32>>,
}

impl FiniteTable {
    pub fn new(
        mul: Vec<Vec<usize>>,
        inv: Vec<usize>,
        identity: usize,
        names: Vec<String>,
        generators: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::Invalid("finite model with empty table".into()));
        }
        if mul.iter().any(|row| row.len() != n || row.iter().any(|&e| e >= n)) {
            return Err(Error::Invalid("finite model table is not a square table over its elements".into()));
        }
        if inv.len() != n || identity >= n {
            return Err(Error::Invalid("finite model inverse table or identity out of range".into()));
        }
        if !names.is_empty() && names.len() != n {
            return Err(Error::Invalid("finite model names must label every element".into()));
        }
        for a in 0..n {
            if mul[identity][a] != a || mul[a][identity] != a {
                return Err(Error::Invalid(format!("finite model: identity fails on element {a}")));
            }
            if mul[a][inv[a]] != identity || mul[inv[a]][a] != identity {
                return Err(Error::Invalid(format!("finite model: inverse table wrong at element {a}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a][b];
                for c in 0..n {
                    if mul[ab][c] != mul[a][mul[b][c]] {
                        return Err(Error::Invalid(format!(
                            "finite model: associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let gens: Vec<usize> = match &generators {
            Some(g) => {
                if g.iter().any(|&e| e >= n) {
                    return Err(Error::Invalid("finite model generator out of range".into()));
                }
                g.clone()
            }
            None => (0..n).filter(|&e| e != identity).collect(),
        };
        // BFS from the identity with generators and their inverses.
        let mut lengths = vec![u64::MAX; n];
        let mut words = vec![Vec::new(); n];
        lengths[identity] = 0;
        let mut queue = VecDeque::from([identity]);
        while let Some(cur) = queue.pop_front() {
            for (i, &g) in gens.iter().enumerate() {
                for (step, sign) in [(g, 1i32), (inv[g], -1)] {
                    let next = mul[cur][step];
                    if lengths[next] == u64::MAX {
                        lengths[next] = lengths[cur] + 1;
                        let mut w = words[cur].clone();
                        w.push(sign * (i as i32 + 1));
                        words[next] = w;
                        queue.push_back(next);
                    }
                }
            }
        }
        if lengths.contains(&u64::MAX) {
            return Err(Error::Invalid("finite model generators do not generate the table".into()));
        }
        Ok(Self { mul, inv, identity, names, generators, lengths, words })
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn inverse_table(&self) -> &[usize] {
        &self.inv
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn declared_generators(&self) -> Option<&[usize]> {
        self.generators.as_deref()
    }

    /// Generators used for model lengths (declared, or every nonidentity element).
    pub fn generators(&self) -> Vec<usize> {
        match &self.generators {
            Some(g) => g.clone(),
            None => (0..self.order()).filter(|&e| e != self.identity).collect(),
        }
    }

    /// A word in the generators (signed 1-based positions) representing `e`.
    pub fn generator_word(&self, e: usize) -> &[i32] {
        &self.words[e]
    }

    pub fn name_of(&self, e: usize) -> Option<&str> {
        self.names.get(e).map(String::as_str)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    FreeAbelian { rank: usize },
    FiniteTable(FiniteTable),
    FreeGroup { rank: usize },
}

/// A peripheral model `H_λ` together with its label `λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeripheralModel {
    pub label: i64,
    pub kind: ModelKind,
}

pub(crate) fn reduce_free(letters: impl IntoIterator<Item = i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl PeripheralModel {
    pub fn free_abelian(label: i64, rank: usize) -> Self {
        Self { label, kind: ModelKind::FreeAbelian { rank } }
    }

    pub fn free_group(label: i64, rank: usize) -> Self {
        Self { label, kind: ModelKind::FreeGroup { rank } }
    }

    pub fn identity(&self) -> Elem {
        match &self.kind {
            ModelKind::FreeAbelian { rank } => Elem::Abelian(vec![0; *rank]),
            ModelKind::FiniteTable(t) => Elem::Table(t.identity),
            ModelKind::FreeGroup { .. } => Elem::Free(Vec::new()),
        }
    }

    pub fn is_identity(&self, e: &Elem) -> bool {
        match (e, &self.kind) {
            (Elem::Abelian(v), _) => v.iter().all(|&c| c == 0),
            (Elem::Table(i), ModelKind::FiniteTable(t)) => *i == t.identity,
            (Elem::Free(w), _) => w.is_empty(),
            (Elem::Table(_), _) => false,
        }
    }

    /// Whether `e` is a well-formed element encoding for this model.
    pub fn contains(&self, e: &Elem) -> bool {
        match (&self.kind, e) {
            (ModelKind::FreeAbelian { rank }, Elem::Abelian(v)) => v.len() == *rank,
            (ModelKind::FiniteTable(t), Elem::Table(i)) => *i < t.order(),
            (ModelKind::FreeGroup { rank }, Elem::Free(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            _ => false,
        }
    }

    pub fn product(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.kind, a, b) {
            (ModelKind::FreeAbelian { .. }, Elem::Abelian(x), Elem::Abelian(y)) => {
                Elem::Abelian(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (ModelKind::FiniteTable(t), Elem::Table(x), Elem::Table(y)) => Elem::Table(t.mul[*x][*y]),
            (ModelKind::FreeGroup { .. }, Elem::Free(x), Elem::Free(y)) => {
                Elem::Free(reduce_free(x.iter().chain(y).copied()))
            }
            _ => panic!("element kind does not match model {}", self.label),
        }
    }

    pub fn inverse(&self, a: &Elem) -> Elem {
        match (&self.kind, a) {
            (_, Elem::Abelian(x)) => Elem::Abelian(x.iter().map(|c| -c).collect()),
            (ModelKind::FiniteTable(t), Elem::Table(x)) => Elem::Table(t.inv[*x]),
            (_, Elem::Free(w)) => Elem::Free(w.iter().rev().map(|l| -l).collect()),
            _ => panic!("element kind does not match model {}", self.label),
        }
    }

    /// Word length of `a` in the model's generators.
    pub fn length(&self, a: &Elem) -> u64 {
        match (&self.kind, a) {
            (_, Elem::Abelian(x)) => x.iter().map(|c| c.unsigned_abs()).sum(),
            (ModelKind::FiniteTable(t), Elem::Table(x)) => t.lengths[*x],
            (_, Elem::Free(w)) => w.len() as u64,
            _ => panic!("element kind does not match model {}", self.label),
        }
    }

    /// Model generators, in a fixed order.
    pub fn generators(&self) -> Vec<Elem> {
        match &self.kind {
            ModelKind::FreeAbelian { rank } => (0..*rank)
                .map(|i| {
                    let mut v = vec![0; *rank];
                    v[i] = 1;
                    Elem::Abelian(v)
                })
                .collect(),
            ModelKind::FiniteTable(t) => t.generators().into_iter().map(Elem::Table).collect(),
            ModelKind::FreeGroup { rank } => (1..=*rank as i32).map(|i| Elem::Free(vec![i])).collect(),
        }
    }

    /// Expresses `a` as a word in the model generators: signed 1-based positions into [`Self::generators`].
    pub fn generator_word(&self, a: &Elem) -> Vec<i32> {
        match (&self.kind, a) {
            (_, Elem::Abelian(x)) => {
                let mut out = Vec::new();
                for (i, &c) in x.iter().enumerate() {
                    let l = if c > 0 { i as i32 + 1 } else { -(i as i32 + 1) };
                    out.extend(std::iter::repeat_n(l, c.unsigned_abs() as usize));
                }
                out
            }
            (ModelKind::FiniteTable(t), Elem::Table(x)) => t.generator_word(*x).to_vec(),
            (_, Elem::Free(w)) => w.clone(),
            _ => panic!("element kind does not match model {}", self.label),
        }
    }

    /// Every nonidentity element of model length at most `bound`, in a deterministic order
    /// (by length, then by encoding).
    pub fn elements_up_to(&self, bound: u64) -> Vec<Elem> {
        let mut out = match &self.kind {
            ModelKind::FreeAbelian { rank } => {
                let mut acc = vec![Vec::<i64>::new()];
                for _ in 0..*rank {
                    let mut next = Vec::new();
                    for prefix in &acc {
                        let used: u64 = prefix.iter().map(|c| c.unsigned_abs()).sum();
                        let room = (bound - used.min(bound)) as i64;
                        for c in -room..=room {
                            let mut p = prefix.clone();
                            p.push(c);
                            next.push(p);
                        }
                    }
                    acc = next;
                }
                acc.into_iter().map(Elem::Abelian).collect::<Vec<_>>()
            }
            ModelKind::FiniteTable(t) => (0..t.order())
                .filter(|&e| t.lengths[e] <= bound)
                .map(Elem::Table)
                .collect(),
            ModelKind::FreeGroup { rank } => {
                let mut all = vec![Vec::<i32>::new()];
                let mut frontier = vec![Vec::<i32>::new()];
                for _ in 0..bound {
                    let mut next = Vec::new();
                    for w in &frontier {
                        for g in 1..=*rank as i32 {
                            for l in [g, -g] {
                                if w.last() != Some(&-l) {
                                    let mut v = w.clone();
                                    v.push(l);
                                    next.push(v);
                                }
                            }
                        }
                    }
                    all.extend(next.iter().cloned());
                    frontier = next;
                }
                all.into_iter().map(Elem::Free).collect()
            }
        };
        out.retain(|e| !self.is_identity(e));
        out.sort_by(|a, b| self.length(a).cmp(&self.length(b)).then_with(|| a.cmp(b)));
        out
    }

    /// Whether the model is finite (only finite tables are).
    pub fn is_finite(&self) -> bool {
        matches!(self.kind, ModelKind::FiniteTable(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_table() -> FiniteTable {
        FiniteTable::new(vec![vec![0, 1], vec![1, 0]], vec![0, 1], 0, vec![], None).unwrap()
    }

    #[test]
    fn abelian_arithmetic() {
        let m = PeripheralModel::free_abelian(1, 2);
        let a = Elem::Abelian(vec![1, -2]);
        let b = Elem::Abelian(vec![-1, 2]);
        assert!(m.is_identity(&m.product(&a, &b)));
        assert_eq!(m.length(&a), 3);
        assert_eq!(m.inverse(&a), b);
    }

    #[test]
    fn free_group_product_reduces() {
        let m = PeripheralModel::free_group(3, 2);
        let a = Elem::Free(vec![1, 2]);
        let b = Elem::Free(vec![-2, 1]);
        assert_eq!(m.product(&a, &b), Elem::Free(vec![1, 1]));
        assert!(m.contains(&Elem::Free(vec![1, -2])));
        assert!(!m.contains(&Elem::Free(vec![1, -1])));
        assert!(!m.contains(&Elem::Free(vec![3])));
    }

    #[test]
    fn table_validation_rejects_non_groups() {
        let bad = FiniteTable::new(vec![vec![0, 1], vec![1, 1]], vec![0, 1], 0, vec![], None);
        assert!(bad.is_err());
        let t = z2_table();
        assert_eq!(t.order(), 2);
    }

    #[test]
    fn cyclic_table_lengths_follow_generators() {
        // Z/4 generated by 1.
        let mul: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect();
        let t = FiniteTable::new(mul, vec![0, 3, 2, 1], 0, vec![], Some(vec![1])).unwrap();
        let m = PeripheralModel { label: 1, kind: ModelKind::FiniteTable(t) };
        assert_eq!(m.length(&Elem::Table(2)), 2);
        assert_eq!(m.length(&Elem::Table(3)), 1);
        assert_eq!(m.elements_up_to(1), vec![Elem::Table(1), Elem::Table(3)]);
    }

    #[test]
    fn enumeration_counts() {
        let z = PeripheralModel::free_abelian(1, 1);
        assert_eq!(z.elements_up_to(3).len(), 6);
        let z2 = PeripheralModel::free_abelian(1, 2);
        // l1-ball of radius 2 in Z^2 has 13 points, minus the origin.
        assert_eq!(z2.elements_up_to(2).len(), 12);
        let f2 = PeripheralModel::free_group(1, 2);
        assert_eq!(f2.elements_up_to(2).len(), 4 + 12);
    }
}
