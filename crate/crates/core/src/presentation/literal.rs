//! Loop literals: whitespace-separated tokens such as `x`, `x^-1`, `x^3`, `h1^2`,
//! `h2^(1,-1)` (free abelian of rank > 1), `h3^[1,-2]` (free group word) and
//! `h4^s` or `h4^#1` (finite-table element by name or index). `1` denotes the empty word.

use super::model::{Elem, ModelKind};
use super::{Letter, RelativePresentation, Word};
use crate::error::{Error, Result};

fn parse_ints(body: &str) -> Option<Vec<i64>> {
    if body.trim().is_empty() {
        return Some(Vec::new());
    }
    body.split(',').map(|s| s.trim().parse().ok()).collect()
}

fn parse_elem(p: &RelativePresentation, model: usize, text: &str) -> Option<Elem> {
    let m = p.model(model);
    let elem = match &m.kind {
        ModelKind::FreeAbelian { rank } => {
            if let Some(body) = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
                Elem::Abelian(parse_ints(body)?)
            } else if *rank == 1 {
                Elem::Abelian(vec![text.parse().ok()?])
            } else {
                return None;
            }
        }
        ModelKind::FreeGroup { .. } => {
            let body = text.strip_prefix('[')?.strip_suffix(']')?;
            Elem::Free(parse_ints(body)?.into_iter().map(|c| i32::try_from(c).ok()).collect::<Option<_>>()?)
        }
        ModelKind::FiniteTable(t) => match text.strip_prefix('#') {
            Some(idx) => Elem::Table(idx.parse().ok()?),
            None => Elem::Table(t.index_of(text)?),
        },
    };
    m.contains(&elem).then_some(elem)
}

/// Parses a loop literal. Unreduced input is preserved letter for letter.
pub fn parse_loop_literal(p: &RelativePresentation, text: &str) -> Result<Word> {
    let mut out = Vec::new();
    let mut offset = 0;
    for token in text.split_whitespace() {
        let pos = offset + text[offset..].find(token).expect("token comes from the text");
        offset = pos + token.len();
        let err = |msg: &str| Error::Parse(format!("loop literal: {msg} in token {token:?} at offset {pos}"));
        if token == "1" {
            continue;
        }
        let (base, exp) = match token.split_once('^') {
            Some((b, e)) => (b, Some(e)),
            None => (token, None),
        };
        if let Some(sym) = p.symbol_index(base) {
            let k: i64 = match exp {
                None => 1,
                Some(e) => e.parse().map_err(|_| err("bad exponent"))?,
            };
            if k == 0 {
                return Err(err("zero exponent"));
            }
            let l = if k > 0 { Letter::x(sym) } else { Letter::x_inv(sym) };
            out.extend(std::iter::repeat_n(l, k.unsigned_abs() as usize));
            continue;
        }
        let label: i64 = base
            .strip_prefix('h')
            .and_then(|l| l.parse().ok())
            .ok_or_else(|| err("unknown symbol"))?;
        let model = p.model_index(label).ok_or_else(|| err("unknown model label"))?;
        let elem_text = exp.ok_or_else(|| err("peripheral letter needs an element after '^'"))?;
        let elem = parse_elem(p, model, elem_text).ok_or_else(|| err("bad element"))?;
        if p.model(model).is_identity(&elem) {
            return Err(err("identity peripheral letter"));
        }
        out.push(Letter::h(model, elem));
    }
    Ok(Word::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::PeripheralModel;

    fn pres() -> RelativePresentation {
        RelativePresentation::new(
            vec!["x".into()],
            vec![PeripheralModel::free_abelian(1, 1), PeripheralModel::free_abelian(2, 1)],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn peripheral_powers() {
        let w = parse_loop_literal(&pres(), "h1^2 h2^2").unwrap();
        assert_eq!(w, Word::new(vec![Letter::hz(0, 2), Letter::hz(1, 2)]));
    }

    #[test]
    fn unreduced_input_is_preserved() {
        let w = parse_loop_literal(&pres(), "x x^-1").unwrap();
        assert_eq!(w, Word::new(vec![Letter::x(0), Letter::x_inv(0)]));
    }

    #[test]
    fn identity_letter_is_an_error() {
        let err = parse_loop_literal(&pres(), "h1^0").unwrap_err();
        assert!(err.to_string().contains("identity"), "{err}");
    }

    #[test]
    fn errors_report_offsets() {
        let err = parse_loop_literal(&pres(), "x  h9^1").unwrap_err();
        assert!(err.to_string().contains("offset 3"), "{err}");
    }

    #[test]
    fn display_round_trips() {
        let p = pres();
        let w = parse_loop_literal(&p, "x^2 h1^-3 x^-1 h2^5").unwrap();
        assert_eq!(parse_loop_literal(&p, &p.display_word(&w)).unwrap(), w);
        assert_eq!(parse_loop_literal(&p, "1").unwrap(), Word::empty());
    }
}
