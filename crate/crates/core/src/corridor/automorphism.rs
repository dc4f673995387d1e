//! Relative automorphisms and free-group actions by them.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::oracle::Group;
use crate::presentation::{
    elem_from_json, elem_to_json, parse_loop_literal, word_from_json, word_to_json, Elem, Letter, RelativePresentation,
    Word,
};

/// An automorphism `α` with `α(H_λ) = g_λ⁻¹ H_{σ(λ)} g_λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelAutomorphism {
    pub x_images: Vec<Word>,
    /// Model index permutation.
    pub sigma: Vec<usize>,
    /// Images in model `σ(λ)` of the generators of model `λ`.
    pub peripheral_maps: Vec<Vec<Elem>>,
    pub conjugators: Vec<Word>,
    pub inverse: Option<Box<RelAutomorphism>>,
}

impl RelAutomorphism {
    pub fn identity(p: &RelativePresentation) -> Self {
        let forward = Self::identity_without_inverse(p);
        Self { inverse: Some(Box::new(forward.clone())), ..forward }
    }

    fn identity_without_inverse(p: &RelativePresentation) -> Self {
        Self {
            x_images: (0..p.x_symbols().len()).map(|s| Word::new(vec![Letter::x(s)])).collect(),
            sigma: (0..p.models().len()).collect(),
            peripheral_maps: p.models().iter().map(|m| m.generators()).collect(),
            conjugators: vec![Word::empty(); p.models().len()],
            inverse: None,
        }
    }

    /// An automorphism fixing every peripheral model pointwise, given by the images
    /// of the `X` generators and of their inverse.
    pub fn on_generators(p: &RelativePresentation, images: Vec<Word>, inverse_images: Vec<Word>) -> Self {
        let inv = Self { x_images: inverse_images, ..Self::identity_without_inverse(p) };
        Self { x_images: images, inverse: Some(Box::new(inv)), ..Self::identity_without_inverse(p) }
    }

    pub fn inverse(&self) -> Result<&RelAutomorphism> {
        self.inverse.as_deref().ok_or_else(|| Error::Invalid("automorphism has no inverse data".into()))
    }

    fn check_shape(&self, p: &RelativePresentation) -> Result<()> {
        let nm = p.models().len();
        if self.x_images.len() != p.x_symbols().len() {
            return Err(Error::Invalid("one image per X symbol is required".into()));
        }
        if self.sigma.len() != nm || self.peripheral_maps.len() != nm || self.conjugators.len() != nm {
            return Err(Error::Invalid("sigma, peripheral maps and conjugators need one entry per model".into()));
        }
        let mut seen = vec![false; nm];
        for &s in &self.sigma {
            if s >= nm || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Invalid("sigma is not a permutation of the models".into()));
            }
        }
        for (i, imgs) in self.peripheral_maps.iter().enumerate() {
            let target = p.model(self.sigma[i]);
            if imgs.len() != p.model(i).generators().len() || !imgs.iter().all(|e| target.contains(e)) {
                return Err(Error::Invalid(format!("peripheral map of model {} is malformed", p.model(i).label)));
            }
        }
        for w in self.x_images.iter().chain(&self.conjugators) {
            p.check_word(w)?;
        }
        Ok(())
    }

    /// `ι(h)` in model `σ(λ)`.
    fn peripheral_image(&self, p: &RelativePresentation, model: usize, h: &Elem) -> Elem {
        let source = p.model(model);
        let target = p.model(self.sigma[model]);
        let mut acc = target.identity();
        for g in source.generator_word(h) {
            let img = &self.peripheral_maps[model][g.unsigned_abs() as usize - 1];
            let img = if g > 0 { img.clone() } else { target.inverse(img) };
            acc = target.product(&acc, &img);
        }
        acc
    }

    /// `α(w)`, freely reduced.
    pub fn apply(&self, p: &RelativePresentation, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in w.letters() {
            match l {
                Letter::X { sym, inv } => {
                    let img = &self.x_images[*sym];
                    if *inv {
                        out.extend(p.inverse(img).letters().iter().cloned());
                    } else {
                        out.extend(img.letters().iter().cloned());
                    }
                }
                Letter::H { model, elem } => {
                    let c = &self.conjugators[*model];
                    out.extend(p.inverse(c).letters().iter().cloned());
                    let h = self.peripheral_image(p, *model, elem);
                    if !p.model(self.sigma[*model]).is_identity(&h) {
                        out.push(Letter::h(self.sigma[*model], h));
                    }
                    out.extend(c.letters().iter().cloned());
                }
            }
        }
        p.free_reduce(&Word::new(out))
    }

    pub fn to_json(&self, p: &RelativePresentation) -> Value {
        let mut x = Map::new();
        for (s, w) in self.x_images.iter().enumerate() {
            x.insert(p.x_symbols()[s].clone(), word_to_json(p, w));
        }
        let peripheral: Vec<Value> = (0..p.models().len())
            .map(|i| {
                let t = p.model(self.sigma[i]);
                json!({
                    "lambda": p.model(i).label,
                    "target": t.label,
                    "generators": self.peripheral_maps[i].iter().map(|e| elem_to_json(t, e)).collect::<Vec<_>>(),
                    "conjugator": word_to_json(p, &self.conjugators[i]),
                })
            })
            .collect();
        let mut doc = json!({"x_images": x, "peripheral": peripheral});
        if let Some(inv) = &self.inverse {
            doc["inverse"] = inv.to_json(p);
        }
        doc
    }

    /// Parses an automorphism document. Words may be JSON letter arrays or loop
    /// literals; omitted X images and models default to the identity.
    pub fn from_json(p: &RelativePresentation, v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("automorphism: {m}"));
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        for key in obj.keys() {
            if !["x_images", "peripheral", "inverse"].contains(&key.as_str()) {
                return Err(bad(&format!("unknown field {key:?}")));
            }
        }
        let mut a = Self::identity_without_inverse(p);
        if let Some(x) = obj.get("x_images") {
            let x = x.as_object().ok_or_else(|| bad("x_images must map symbols to words"))?;
            for (name, w) in x {
                let s = p.symbol_index(name).ok_or_else(|| bad(&format!("unknown symbol {name:?}")))?;
                a.x_images[s] = parse_word(p, w)?;
            }
        }
        if let Some(per) = obj.get("peripheral") {
            for entry in per.as_array().ok_or_else(|| bad("peripheral must be an array"))? {
                let label = entry["lambda"].as_i64().ok_or_else(|| bad("peripheral entry needs \"lambda\""))?;
                let i = p.model_index(label).ok_or_else(|| bad(&format!("unknown model {label}")))?;
                let target = match entry.get("target") {
                    Some(t) => {
                        let t = t.as_i64().ok_or_else(|| bad("target must be a model label"))?;
                        p.model_index(t).ok_or_else(|| bad(&format!("unknown model {t}")))?
                    }
                    None => i,
                };
                a.sigma[i] = target;
                a.peripheral_maps[i] = match entry.get("generators") {
                    Some(g) => g
                        .as_array()
                        .ok_or_else(|| bad("generators must be an array"))?
                        .iter()
                        .map(|e| elem_from_json(p.model(target), e))
                        .collect::<Result<_>>()?,
                    None => p.model(target).generators(),
                };
                if let Some(c) = entry.get("conjugator") {
                    a.conjugators[i] = parse_word(p, c)?;
                }
            }
        }
        if let Some(inv) = obj.get("inverse") {
            a.inverse = Some(Box::new(Self::from_json(p, inv)?));
        }
        a.check_shape(p)?;
        Ok(a)
    }
}

fn parse_word(p: &RelativePresentation, v: &Value) -> Result<Word> {
    match v {
        Value::String(s) => parse_loop_literal(p, s),
        _ => word_from_json(p, v),
    }
}

/// Outcome of the generator-level checks on a relative automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    /// Display form of the first generator failing a check.
    pub witness: Option<String>,
    pub failures: Vec<String>,
}

/// Checks well-formedness, that relators map to the identity, the conjugation
/// condition on peripheral generators, and that `α∘α⁻¹` and then `α⁻¹∘α` fix every
/// generator.
pub fn validate_relaut(g: &Group, a: &RelAutomorphism) -> Result<ValidationReport> {
    let p = g.presentation();
    let mut failures: Vec<(String, String)> = Vec::new();
    if let Err(e) = a.check_shape(p) {
        return Ok(ValidationReport { ok: false, witness: None, failures: vec![e.to_string()] });
    }
    let inv = match a.inverse() {
        Ok(inv) => inv,
        Err(e) => return Ok(ValidationReport { ok: false, witness: None, failures: vec![e.to_string()] }),
    };
    if let Err(e) = inv.check_shape(p) {
        return Ok(ValidationReport { ok: false, witness: None, failures: vec![format!("inverse: {e}")] });
    }
    let mut gens: Vec<Word> = (0..p.x_symbols().len()).map(|s| Word::new(vec![Letter::x(s)])).collect();
    for (i, m) in p.models().iter().enumerate() {
        gens.extend(m.generators().into_iter().map(|h| Word::new(vec![Letter::h(i, h)])));
    }
    for (i, r) in p.relators().iter().enumerate() {
        for (name, f) in [("alpha", a), ("inverse", inv)] {
            if !g.is_trivial(&f.apply(p, r))? {
                failures.push((p.display_word(r), format!("{name} does not kill relator {i}")));
            }
        }
    }
    for (i, m) in p.models().iter().enumerate() {
        for h in m.generators() {
            let w = Word::new(vec![Letter::h(i, h.clone())]);
            let c = &a.conjugators[i];
            let ih = a.peripheral_image(p, i, &h);
            let expected = p.inverse(c).concat(&Word::new(vec![Letter::h(a.sigma[i], ih)])).concat(c);
            if !g.equal(&a.apply(p, &w), &expected)? {
                failures.push((p.display_word(&w), "image is not the conjugated peripheral image".into()));
            }
        }
    }
    for (label, outer, inner) in [("alpha after inverse", a, inv), ("inverse after alpha", inv, a)] {
        for w in &gens {
            if !g.equal(&outer.apply(p, &inner.apply(p, w)), w)? {
                failures.push((p.display_word(w), format!("{label} moves the generator")));
            }
        }
    }
    Ok(ValidationReport {
        ok: failures.is_empty(),
        witness: failures.first().map(|(w, _)| w.clone()),
        failures: failures.into_iter().map(|(w, why)| format!("{w}: {why}")).collect(),
    })
}

/// A reduced word in the free group `F_n` on the action basis: signed 1-based letters.
pub type FreeWord = Vec<i32>;

pub fn is_reduced(a: &[i32]) -> bool {
    a.windows(2).all(|p| p[0] != -p[1]) && !a.contains(&0)
}

pub fn reduce(a: impl IntoIterator<Item = i32>) -> FreeWord {
    let mut out: FreeWord = Vec::new();
    for l in a {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn invert(a: &[i32]) -> FreeWord {
    a.iter().rev().map(|l| -l).collect()
}

/// Display form `a1 a2^-1`; the empty word is `1`.
pub fn display_free(a: &[i32]) -> String {
    if a.is_empty() {
        return "1".into();
    }
    a.iter()
        .map(|&l| if l > 0 { format!("a{l}") } else { format!("a{}^-1", -l) })
        .collect::<Vec<_>>()
        .join(" ")
}

/// All reduced words of length at most `n` over `rank` letters, shortest first,
/// then lexicographically in the letter order `1, -1, 2, -2, ...`.
pub fn free_ball(rank: usize, n: usize) -> Vec<FreeWord> {
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|i| [i, -i]).collect();
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<FreeWord> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if w.last() != Some(&-l) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// A free group `F_n` acting through relative automorphisms, one per basis letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAction {
    pub automorphisms: Vec<RelAutomorphism>,
}

impl FreeAction {
    pub fn new(automorphisms: Vec<RelAutomorphism>) -> Result<Self> {
        if automorphisms.is_empty() {
            return Err(Error::Invalid("an action needs at least one basis automorphism".into()));
        }
        for a in &automorphisms {
            a.inverse()?;
        }
        Ok(Self { automorphisms })
    }

    pub fn rank(&self) -> usize {
        self.automorphisms.len()
    }

    /// Parses `{"basis": n, "automorphisms": [...]}`.
    pub fn from_json(p: &RelativePresentation, v: &Value) -> Result<Self> {
        let n = v["basis"].as_u64().ok_or_else(|| Error::Parse("action needs an integer \"basis\"".into()))? as usize;
        let autos = v["automorphisms"]
            .as_array()
            .ok_or_else(|| Error::Parse("action needs an \"automorphisms\" array".into()))?
            .iter()
            .map(|a| RelAutomorphism::from_json(p, a))
            .collect::<Result<Vec<_>>>()?;
        if autos.len() != n {
            return Err(Error::Parse(format!("basis {n} but {} automorphisms", autos.len())));
        }
        Self::new(autos)
    }

    pub fn from_str(p: &RelativePresentation, text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("action document: {e}")))?;
        Self::from_json(p, &v)
    }

    pub fn to_json(&self, p: &RelativePresentation) -> Value {
        json!({
            "basis": self.rank(),
            "automorphisms": self.automorphisms.iter().map(|a| a.to_json(p)).collect::<Vec<_>>(),
        })
    }

    /// `α_a(w)` with `α_{aa'} = α_a ∘ α_{a'}`. Rejects unreduced `a`.
    pub fn apply(&self, p: &RelativePresentation, a: &[i32], w: &Word) -> Result<Word> {
        if !is_reduced(a) {
            return Err(Error::Precondition(format!("F_n word {a:?} is not reduced")));
        }
        let mut out = p.free_reduce(w);
        for &l in a.iter().rev() {
            let i = l.unsigned_abs() as usize;
            let base = self
                .automorphisms
                .get(i.wrapping_sub(1))
                .ok_or_else(|| Error::Precondition(format!("letter a{i} is outside the basis")))?;
            out = if l > 0 { base.apply(p, &out) } else { base.inverse()?.apply(p, &out) };
        }
        Ok(out)
    }
}
