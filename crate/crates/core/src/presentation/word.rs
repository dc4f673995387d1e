use std::fmt;

use super::model::Elem;

/// A letter of `X ∪ 𝓗`.
///
/// `X` letters carry a symbol index and an inversion bit; `H` letters carry the
/// index of their peripheral model (position in the presentation's model list,
/// not the label) and a nonidentity model element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X { sym: usize, inv: bool },
    H { model: usize, elem: Elem },
}

impl Letter {
    pub fn x(sym: usize) -> Self {
        Letter::X { sym, inv: false }
    }

    pub fn x_inv(sym: usize) -> Self {
        Letter::X { sym, inv: true }
    }

    pub fn h(model: usize, elem: Elem) -> Self {
        Letter::H { model, elem }
    }

    /// Shorthand for an element of a rank-one free abelian model.
    pub fn hz(model: usize, k: i64) -> Self {
        Letter::H { model, elem: Elem::Abelian(vec![k]) }
    }

    pub fn is_x(&self) -> bool {
        matches!(self, Letter::X { .. })
    }

    pub fn model(&self) -> Option<usize> {
        match self {
            Letter::H { model, .. } => Some(*model),
            Letter::X { .. } => None,
        }
    }
}

/// A finite sequence of letters over `X ∪ 𝓗`. Not necessarily reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of letters; every `H` letter counts once regardless of its model length.
    pub fn letter_count(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::X { sym, inv: false } => write!(f, "x{sym}"),
            Letter::X { sym, inv: true } => write!(f, "x{sym}^-1"),
            Letter::H { model, elem } => write!(f, "H{model}{elem:?}"),
        }
    }
}

/// Letter count of a word.
pub fn letter_count(w: &Word) -> usize {
    w.letter_count()
}
