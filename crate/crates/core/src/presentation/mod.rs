//! Finite relative presentations `⟨X, H_λ (λ ∈ Λ) | R = 1, R ∈ ℛ⟩` and words over `X ∪ 𝓗`.
//!
//! Words live in the free product `F = (∗ H̃_λ) ∗ F(X)`. The infinite relator
//! families of the peripheral models are never materialized: they are applied
//! implicitly through model arithmetic in [`RelativePresentation::free_reduce`].

mod abelian;
mod document;
mod literal;
mod model;
mod word;

pub use abelian::RationalAbelianization;
pub use document::{
    elem_from_json, elem_to_json, letter_from_json, letter_to_json, parse_document, parse_presentation,
    word_from_json, word_to_json, Document,
};
pub use literal::parse_loop_literal;
pub use model::{Elem, FiniteTable, ModelKind, PeripheralModel};
pub use word::{letter_count, Letter, Word};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativePresentation {
    x_symbols: Vec<String>,
    models: Vec<PeripheralModel>,
    relators: Vec<Word>,
}

impl RelativePresentation {
    /// Validates the data and stores every relator freely and cyclically reduced.
    pub fn new(x_symbols: Vec<String>, models: Vec<PeripheralModel>, relators: Vec<Word>) -> Result<Self> {
        for (i, s) in x_symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) || s.contains('^') {
                return Err(Error::Invalid(format!("bad generator symbol {s:?}")));
            }
            if x_symbols[..i].contains(s) {
                return Err(Error::Invalid(format!("duplicate generator symbol {s:?}")));
            }
        }
        for (i, m) in models.iter().enumerate() {
            if models[..i].iter().any(|o| o.label == m.label) {
                return Err(Error::Invalid(format!("duplicate model label {}", m.label)));
            }
        }
        let mut p = Self { x_symbols, models, relators: Vec::new() };
        let mut reduced = Vec::with_capacity(relators.len());
        for (i, r) in relators.iter().enumerate() {
            p.check_word(r).map_err(|e| Error::Invalid(format!("relator {i}: {e}")))?;
            if r.is_empty() {
                return Err(Error::Invalid(format!("relator {i} is empty")));
            }
            let c = p.cyclic_reduce(&p.free_reduce(r));
            if c.is_empty() {
                return Err(Error::Invalid(format!("relator {i} is freely trivial")));
            }
            reduced.push(c);
        }
        p.relators = reduced;
        Ok(p)
    }

    pub fn x_symbols(&self) -> &[String] {
        &self.x_symbols
    }

    pub fn models(&self) -> &[PeripheralModel] {
        &self.models
    }

    pub fn model(&self, index: usize) -> &PeripheralModel {
        &self.models[index]
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn model_index(&self, label: i64) -> Option<usize> {
        self.models.iter().position(|m| m.label == label)
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.x_symbols.iter().position(|s| s == name)
    }

    /// Checks that every letter references an existing symbol or model and that no
    /// peripheral letter is the identity.
    pub fn check_word(&self, w: &Word) -> Result<()> {
        for l in w.letters() {
            match l {
                Letter::X { sym, .. } => {
                    if *sym >= self.x_symbols.len() {
                        return Err(Error::Invalid(format!("unknown generator index {sym}")));
                    }
                }
                Letter::H { model, elem } => {
                    let m = self
                        .models
                        .get(*model)
                        .ok_or_else(|| Error::Invalid(format!("unknown model index {model}")))?;
                    if !m.contains(elem) {
                        return Err(Error::Invalid(format!("element {elem:?} does not belong to model {}", m.label)));
                    }
                    if m.is_identity(elem) {
                        return Err(Error::Invalid(format!("identity peripheral letter in model {}", m.label)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn invert_letter(&self, l: &Letter) -> Letter {
        match l {
            Letter::X { sym, inv } => Letter::X { sym: *sym, inv: !inv },
            Letter::H { model, elem } => Letter::H { model: *model, elem: self.models[*model].inverse(elem) },
        }
    }

    /// Formal inverse: reversed sequence with every letter inverted.
    pub fn inverse(&self, w: &Word) -> Word {
        w.letters().iter().rev().map(|l| self.invert_letter(l)).collect()
    }

    /// Combines two adjacent letters if they interact in `F`.
    ///
    /// Returns `None` if they do not interact, `Some(None)` if they cancel and
    /// `Some(Some(l))` if they merge into a single syllable.
    pub fn combine(&self, a: &Letter, b: &Letter) -> Option<Option<Letter>> {
        match (a, b) {
            (Letter::X { sym: s, inv: i }, Letter::X { sym: t, inv: j }) if s == t && i != j => Some(None),
            (Letter::H { model: m, elem: e }, Letter::H { model: n, elem: f }) if m == n => {
                let model = &self.models[*m];
                let p = model.product(e, f);
                if model.is_identity(&p) {
                    Some(None)
                } else {
                    Some(Some(Letter::H { model: *m, elem: p }))
                }
            }
            _ => None,
        }
    }

    /// Syllable normal form in `F`: adjacent same-model syllables multiplied
    /// (dropped when trivial), adjacent inverse generators cancelled.
    pub fn free_reduce(&self, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(w.len());
        for l in w.letters() {
            let mut cur = l.clone();
            loop {
                match out.last().and_then(|top| self.combine(top, &cur)) {
                    None => {
                        out.push(cur);
                        break;
                    }
                    Some(None) => {
                        out.pop();
                        break;
                    }
                    Some(Some(merged)) => {
                        out.pop();
                        cur = merged;
                    }
                }
            }
        }
        Word(out)
    }

    /// Cyclic reduction of a freely reduced word: repeatedly combines the last
    /// letter with the first. The result is conjugate to the input in `F`.
    pub fn cyclic_reduce(&self, w: &Word) -> Word {
        let mut v: std::collections::VecDeque<Letter> = w.letters().iter().cloned().collect();
        while v.len() >= 2 {
            let first = v.front().unwrap();
            let last = v.back().unwrap();
            match self.combine(last, first) {
                None => break,
                Some(None) => {
                    v.pop_front();
                    v.pop_back();
                }
                Some(Some(merged)) => {
                    v.pop_front();
                    v.pop_back();
                    v.push_front(merged);
                }
            }
        }
        Word(v.into_iter().collect())
    }

    pub fn is_freely_reduced(&self, w: &Word) -> bool {
        w.letters().windows(2).all(|p| self.combine(&p[0], &p[1]).is_none())
    }

    pub fn max_relator_len(&self) -> usize {
        self.relators.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Peripheral letters of model length in `1..=bound`, plus all generator letters,
    /// in a fixed order: `X` letters first, then models in index order.
    pub fn letters_up_to(&self, bound: u64) -> Vec<Letter> {
        let mut out = Vec::new();
        for sym in 0..self.x_symbols.len() {
            out.push(Letter::x(sym));
            out.push(Letter::x_inv(sym));
        }
        for (i, m) in self.models.iter().enumerate() {
            out.extend(m.elements_up_to(bound).into_iter().map(|e| Letter::h(i, e)));
        }
        out
    }

    /// Renders a word in the loop-literal grammar accepted by [`parse_loop_literal`].
    pub fn display_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.letters().iter().map(|l| self.display_letter(l)).collect::<Vec<_>>().join(" ")
    }

    pub fn display_letter(&self, l: &Letter) -> String {
        match l {
            Letter::X { sym, inv } => {
                let s = &self.x_symbols[*sym];
                if *inv {
                    format!("{s}^-1")
                } else {
                    s.clone()
                }
            }
            Letter::H { model, elem } => {
                let m = &self.models[*model];
                let e = match (elem, &m.kind) {
                    (Elem::Abelian(v), _) if v.len() == 1 => v[0].to_string(),
                    (Elem::Abelian(v), _) => {
                        format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
                    }
                    (Elem::Table(i), ModelKind::FiniteTable(t)) => match t.name_of(*i) {
                        Some(n) => n.to_string(),
                        None => format!("#{i}"),
                    },
                    (Elem::Table(i), _) => format!("#{i}"),
                    (Elem::Free(w), _) => {
                        format!("[{}]", w.iter().map(i32::to_string).collect::<Vec<_>>().join(","))
                    }
                };
                format!("h{}^{}", m.label, e)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_example() -> RelativePresentation {
        RelativePresentation::new(
            vec![],
            vec![PeripheralModel::free_abelian(1, 1), PeripheralModel::free_abelian(2, 1)],
            vec![Word::new(vec![Letter::hz(0, 1), Letter::hz(1, 1)])],
        )
        .unwrap()
    }

    fn with_x() -> RelativePresentation {
        RelativePresentation::new(vec!["x".into()], vec![PeripheralModel::free_abelian(1, 1)], vec![]).unwrap()
    }

    #[test]
    fn inverse_syllables_cancel() {
        let p = z_example();
        let w = Word::new(vec![Letter::hz(0, 2), Letter::hz(0, -2)]);
        assert!(p.free_reduce(&w).is_empty());
    }

    #[test]
    fn model_arithmetic_merges_syllables() {
        let p = z_example();
        let w = Word::new(vec![Letter::hz(0, 1), Letter::hz(1, 3), Letter::hz(1, -1)]);
        assert_eq!(p.free_reduce(&w), Word::new(vec![Letter::hz(0, 1), Letter::hz(1, 2)]));
    }

    #[test]
    fn free_cancellation() {
        let p = with_x();
        let w = Word::new(vec![Letter::x(0), Letter::x_inv(0), Letter::hz(0, 5)]);
        assert_eq!(p.free_reduce(&w), Word::new(vec![Letter::hz(0, 5)]));
    }

    #[test]
    fn cascading_reduction() {
        let p = with_x();
        // h(2) x x^-1 h(-2) -> empty
        let w = Word::new(vec![Letter::hz(0, 2), Letter::x(0), Letter::x_inv(0), Letter::hz(0, -2)]);
        assert!(p.free_reduce(&w).is_empty());
    }

    #[test]
    fn letter_counts() {
        assert_eq!(letter_count(&Word::empty()), 0);
        assert_eq!(letter_count(&Word::new(vec![Letter::hz(0, 7)])), 1);
        assert_eq!(letter_count(&Word::new(vec![Letter::x(0), Letter::hz(1, -4), Letter::x(0)])), 3);
    }

    #[test]
    fn relators_stored_cyclically_reduced() {
        let p = RelativePresentation::new(
            vec!["x".into(), "y".into()],
            vec![],
            vec![Word::new(vec![Letter::x_inv(1), Letter::x(0), Letter::x(0), Letter::x(1)])],
        )
        .unwrap();
        assert_eq!(p.relators()[0], Word::new(vec![Letter::x(0), Letter::x(0)]));
    }

    #[test]
    fn identity_letters_rejected() {
        let err = RelativePresentation::new(
            vec![],
            vec![PeripheralModel::free_abelian(1, 1)],
            vec![Word::new(vec![Letter::hz(0, 0)])],
        )
        .unwrap_err();
        assert!(err.to_string().contains("identity peripheral letter"));
    }

    #[test]
    fn cyclic_merge_of_end_syllables() {
        let p = z_example();
        let w = Word::new(vec![Letter::hz(0, 2), Letter::hz(1, 1), Letter::hz(0, 3)]);
        assert_eq!(p.cyclic_reduce(&w), Word::new(vec![Letter::hz(0, 5), Letter::hz(1, 1)]));
    }
}
