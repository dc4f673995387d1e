//! Word-problem backends for `G = F / ⟨⟨ℛ⟩⟩`.
//!
//! A [`Group`] pairs a presentation with a normal-form oracle. Validity of an
//! oracle is checked on the relators only; faithfulness of integer and finite
//! quotients is the caller's assertion.

use std::collections::{HashMap, VecDeque};
use std::io::{BufRead, BufReader, Write};
use std::process::{Command, Stdio};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::filling::{self, SearchCaps, SearchOutcome};
use crate::presentation::{
    word_from_json, word_to_json, Elem, FiniteTable, Letter, ModelKind, RelativePresentation, Word,
};

/// Batches at least this large are normalized on the rayon pool.
const PAR_THRESHOLD: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelImage<T> {
    pub lambda: i64,
    /// Image of each model generator, in the model's generator order.
    pub generators: Vec<T>,
}

/// Oracle section of a presentation document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleSpec {
    FreeProduct,
    IntegerQuotient {
        dim: usize,
        #[serde(default)]
        x_images: Vec<Vec<i64>>,
        #[serde(default)]
        model_images: Vec<ModelImage<Vec<i64>>>,
    },
    FiniteQuotient {
        table: Vec<Vec<usize>>,
        #[serde(default)]
        identity: usize,
        #[serde(default)]
        x_images: Vec<usize>,
        #[serde(default)]
        model_images: Vec<ModelImage<usize>>,
    },
    Plugin {
        command: String,
        #[serde(default)]
        args: Vec<String>,
    },
}

impl OracleSpec {
    pub fn from_json(v: &Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("oracle section: {e}")))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            OracleSpec::FreeProduct => "free_product",
            OracleSpec::IntegerQuotient { .. } => "integer_quotient",
            OracleSpec::FiniteQuotient { .. } => "finite_quotient",
            OracleSpec::Plugin { .. } => "plugin",
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct IntegerOracle {
    pub(crate) dim: usize,
    x_images: Vec<Vec<i64>>,
    /// Per model, per generator.
    model_images: Vec<Vec<Vec<i64>>>,
    /// Canonical words for `+e_i` and `-e_i`.
    basis_words: Vec<(Word, Word)>,
}

#[derive(Clone, Debug)]
pub(crate) struct FiniteOracle {
    pub(crate) table: FiniteTable,
    x_images: Vec<usize>,
    model_images: Vec<Vec<usize>>,
    /// Canonical word per element (`None` if unreachable from the generator images).
    canonical: Vec<Option<Word>>,
}

#[derive(Clone, Debug)]
pub(crate) struct PluginOracle {
    command: String,
    args: Vec<String>,
}

#[derive(Clone, Debug)]
pub(crate) enum OracleImpl {
    FreeProduct,
    Integer(IntegerOracle),
    Finite(FiniteOracle),
    Plugin(PluginOracle),
}

/// A presentation together with a validated word-problem oracle.
#[derive(Clone, Debug)]
pub struct Group {
    pres: Arc<RelativePresentation>,
    spec: OracleSpec,
    pub(crate) oracle: OracleImpl,
}

fn model_hom<T: Clone>(
    p: &RelativePresentation,
    images: &[ModelImage<T>],
    zero: impl Fn() -> T,
) -> Result<Vec<Vec<T>>> {
    let mut out: Vec<Option<Vec<T>>> = vec![None; p.models().len()];
    for mi in images {
        let idx = p
            .model_index(mi.lambda)
            .ok_or_else(|| Error::Oracle(format!("model image for unknown label {}", mi.lambda)))?;
        let gens = p.model(idx).generators().len();
        if mi.generators.len() != gens {
            return Err(Error::Oracle(format!(
                "model {} has {gens} generators but {} images were given",
                mi.lambda,
                mi.generators.len()
            )));
        }
        out[idx] = Some(mi.generators.clone());
    }
    Ok(out
        .into_iter()
        .zip(p.models())
        .map(|(o, m)| o.unwrap_or_else(|| vec![zero(); m.generators().len()]))
        .collect())
}

impl IntegerOracle {
    fn new(p: &RelativePresentation, dim: usize, x_images: Vec<Vec<i64>>, images: &[ModelImage<Vec<i64>>]) -> Result<Self> {
        if x_images.len() != p.x_symbols().len() {
            return Err(Error::Oracle("integer_quotient needs one image per generator symbol".into()));
        }
        let model_images = model_hom(p, images, || vec![0; dim])?;
        if x_images.iter().chain(model_images.iter().flatten()).any(|v| v.len() != dim) {
            return Err(Error::Oracle(format!("integer_quotient images must have dimension {dim}")));
        }
        let mut o = Self { dim, x_images, model_images, basis_words: Vec::new() };
        // Homomorphism check for finite models: every image must be torsion, hence zero.
        for (i, m) in p.models().iter().enumerate() {
            if m.is_finite() && o.model_images[i].iter().any(|v| v.iter().any(|&c| c != 0)) {
                return Err(Error::Oracle(format!("finite model {} cannot map nontrivially to Z^{dim}", m.label)));
            }
        }
        o.basis_words = o.find_basis_words(p)?;
        Ok(o)
    }

    pub(crate) fn letter_image(&self, p: &RelativePresentation, l: &Letter) -> Vec<i64> {
        match l {
            Letter::X { sym, inv } => {
                let s = if *inv { -1 } else { 1 };
                self.x_images[*sym].iter().map(|c| s * c).collect()
            }
            Letter::H { model, elem } => {
                let mut v = vec![0; self.dim];
                for g in p.model(*model).generator_word(elem) {
                    let img = &self.model_images[*model][g.unsigned_abs() as usize - 1];
                    for (x, c) in v.iter_mut().zip(img) {
                        *x += g.signum() as i64 * c;
                    }
                }
                v
            }
        }
    }

    pub(crate) fn image(&self, p: &RelativePresentation, w: &Word) -> Vec<i64> {
        let mut v = vec![0; self.dim];
        for l in w.letters() {
            for (x, c) in v.iter_mut().zip(self.letter_image(p, l)) {
                *x += c;
            }
        }
        v
    }

    /// Generator letters and their inverses, in a fixed order.
    fn step_letters(p: &RelativePresentation) -> Vec<Letter> {
        let mut out = Vec::new();
        for sym in 0..p.x_symbols().len() {
            out.push(Letter::x(sym));
            out.push(Letter::x_inv(sym));
        }
        for (i, m) in p.models().iter().enumerate() {
            for g in m.generators() {
                out.push(Letter::h(i, m.inverse(&g)).clone());
                out.push(Letter::h(i, g));
            }
        }
        // Order: for each model generator, positive before negative.
        out
    }

    fn find_basis_words(&self, p: &RelativePresentation) -> Result<Vec<(Word, Word)>> {
        const MAX_DEPTH: usize = 8;
        let mut steps = Self::step_letters(p);
        // Positive generator first within each pair.
        for pair in steps.chunks_mut(2) {
            if let [a, b] = pair {
                if let (Letter::H { .. }, Letter::H { .. }) = (&*a, &*b) {
                    std::mem::swap(a, b);
                }
            }
        }
        let images: Vec<Vec<i64>> = steps.iter().map(|l| self.letter_image(p, l)).collect();
        let origin = vec![0i64; self.dim];
        let mut parent: HashMap<Vec<i64>, Option<(Vec<i64>, usize)>> = HashMap::from([(origin.clone(), None)]);
        let mut frontier = vec![origin];
        for _ in 0..MAX_DEPTH {
            let mut next = Vec::new();
            for v in &frontier {
                for (i, img) in images.iter().enumerate() {
                    let u: Vec<i64> = v.iter().zip(img).map(|(a, b)| a + b).collect();
                    if u.iter().any(|c| c.abs() > MAX_DEPTH as i64) || parent.contains_key(&u) {
                        continue;
                    }
                    parent.insert(u.clone(), Some((v.clone(), i)));
                    next.push(u);
                }
            }
            frontier = next;
        }
        let word_for = |target: &Vec<i64>| -> Option<Word> {
            let mut letters = Vec::new();
            let mut cur = target.clone();
            while let Some(Some((prev, i))) = parent.get(&cur) {
                letters.push(steps[*i].clone());
                cur = prev.clone();
            }
            parent.contains_key(target).then(|| p.free_reduce(&Word::new(letters.into_iter().rev().collect())))
        };
        (0..self.dim)
            .map(|i| {
                let mut e = vec![0; self.dim];
                e[i] = 1;
                let plus = word_for(&e);
                e[i] = -1;
                let minus = word_for(&e);
                match (plus, minus) {
                    (Some(a), Some(b)) => Ok((a, b)),
                    _ => Err(Error::Oracle(format!(
                        "integer_quotient: basis vector {i} is not reachable from the generator images"
                    ))),
                }
            })
            .collect()
    }

    fn canonical(&self, p: &RelativePresentation, v: &[i64]) -> Word {
        let mut letters = Vec::new();
        for (i, &c) in v.iter().enumerate() {
            let w = if c > 0 { &self.basis_words[i].0 } else { &self.basis_words[i].1 };
            for _ in 0..c.unsigned_abs() {
                letters.extend(w.letters().iter().cloned());
            }
        }
        p.free_reduce(&Word::new(letters))
    }
}

impl FiniteOracle {
    fn new(
        p: &RelativePresentation,
        table: Vec<Vec<usize>>,
        identity: usize,
        x_images: Vec<usize>,
        images: &[ModelImage<usize>],
    ) -> Result<Self> {
        let n = table.len();
        let inv = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a].get(b) == Some(&identity))
                    .ok_or_else(|| Error::Oracle(format!("finite_quotient: element {a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        let table = FiniteTable::new(table, inv, identity, Vec::new(), None)
            .map_err(|e| Error::Oracle(format!("finite_quotient table: {e}")))?;
        if x_images.len() != p.x_symbols().len() || x_images.iter().any(|&e| e >= n) {
            return Err(Error::Oracle("finite_quotient needs one in-range image per generator symbol".into()));
        }
        let model_images = model_hom(p, images, || identity)?;
        if model_images.iter().flatten().any(|&e| e >= n) {
            return Err(Error::Oracle("finite_quotient model image out of range".into()));
        }
        let mut o = Self { table, x_images, model_images, canonical: Vec::new() };
        for (i, m) in p.models().iter().enumerate() {
            if let ModelKind::FiniteTable(t) = &m.kind {
                for a in 0..t.order() {
                    for b in 0..t.order() {
                        let ab = t.table()[a][b];
                        let lhs = o.elem_image(p, i, &Elem::Table(ab));
                        let rhs = o.mul(o.elem_image(p, i, &Elem::Table(a)), o.elem_image(p, i, &Elem::Table(b)));
                        if lhs != rhs {
                            return Err(Error::Oracle(format!(
                                "finite_quotient: model {} map is not a homomorphism",
                                m.label
                            )));
                        }
                    }
                }
            }
        }
        o.canonical = o.canonical_words(p);
        Ok(o)
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table.table()[a][b]
    }

    fn inv(&self, a: usize) -> usize {
        self.table.inverse_table()[a]
    }

    pub(crate) fn elem_image(&self, p: &RelativePresentation, model: usize, e: &Elem) -> usize {
        p.model(model).generator_word(e).iter().fold(self.table.identity(), |acc, &g| {
            let img = self.model_images[model][g.unsigned_abs() as usize - 1];
            self.mul(acc, if g > 0 { img } else { self.inv(img) })
        })
    }

    pub(crate) fn letter_image(&self, p: &RelativePresentation, l: &Letter) -> usize {
        match l {
            Letter::X { sym, inv } => {
                let e = self.x_images[*sym];
                if *inv {
                    self.inv(e)
                } else {
                    e
                }
            }
            Letter::H { model, elem } => self.elem_image(p, *model, elem),
        }
    }

    pub(crate) fn image(&self, p: &RelativePresentation, w: &Word) -> usize {
        w.letters().iter().fold(self.table.identity(), |acc, l| self.mul(acc, self.letter_image(p, l)))
    }

    fn canonical_words(&self, p: &RelativePresentation) -> Vec<Option<Word>> {
        let mut steps = Vec::new();
        for sym in 0..p.x_symbols().len() {
            steps.push(Letter::x(sym));
            steps.push(Letter::x_inv(sym));
        }
        for (i, m) in p.models().iter().enumerate() {
            for g in m.generators() {
                steps.push(Letter::h(i, g.clone()));
                steps.push(Letter::h(i, m.inverse(&g)));
            }
        }
        let id = self.table.identity();
        let mut words: Vec<Option<Word>> = vec![None; self.table.order()];
        words[id] = Some(Word::empty());
        let mut queue = VecDeque::from([id]);
        while let Some(cur) = queue.pop_front() {
            for l in &steps {
                let next = self.mul(cur, self.letter_image(p, l));
                if words[next].is_none() {
                    let mut w = words[cur].clone().unwrap();
                    w.push(l.clone());
                    words[next] = Some(p.free_reduce(&w));
                    queue.push_back(next);
                }
            }
        }
        words
    }
}

impl PluginOracle {
    fn run(&self, p: &RelativePresentation, words: &[Word]) -> Result<Vec<Word>> {
        if words.is_empty() {
            return Ok(Vec::new());
        }
        let mut child = Command::new(&self.command)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::Oracle(format!("cannot start plugin {:?}: {e}", self.command)))?;
        {
            let mut stdin = child.stdin.take().expect("piped stdin");
            for w in words {
                writeln!(stdin, "{}", word_to_json(p, w))
                    .map_err(|e| Error::Oracle(format!("plugin write failed: {e}")))?;
            }
        }
        let stdout = child.stdout.take().expect("piped stdout");
        let mut out = Vec::with_capacity(words.len());
        for line in BufReader::new(stdout).lines() {
            let line = line.map_err(|e| Error::Oracle(format!("plugin read failed: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            let v: Value =
                serde_json::from_str(&line).map_err(|e| Error::Oracle(format!("plugin emitted bad JSON: {e}")))?;
            out.push(word_from_json(p, &v).map_err(|e| Error::Oracle(format!("plugin emitted bad word: {e}")))?);
        }
        let status = child.wait().map_err(|e| Error::Oracle(format!("plugin wait failed: {e}")))?;
        if !status.success() {
            return Err(Error::Oracle(format!("plugin exited with {status}")));
        }
        if out.len() != words.len() {
            return Err(Error::Oracle(format!("plugin answered {} of {} words", out.len(), words.len())));
        }
        Ok(out)
    }
}

impl Group {
    /// Builds the oracle and checks that every relator is trivial under it.
    pub fn new(pres: RelativePresentation, spec: OracleSpec) -> Result<Self> {
        let oracle = match &spec {
            OracleSpec::FreeProduct => {
                if !pres.relators().is_empty() {
                    return Err(Error::Oracle("free_product oracle requires an empty relator set".into()));
                }
                OracleImpl::FreeProduct
            }
            OracleSpec::IntegerQuotient { dim, x_images, model_images } => {
                OracleImpl::Integer(IntegerOracle::new(&pres, *dim, x_images.clone(), model_images)?)
            }
            OracleSpec::FiniteQuotient { table, identity, x_images, model_images } => OracleImpl::Finite(
                FiniteOracle::new(&pres, table.clone(), *identity, x_images.clone(), model_images)?,
            ),
            OracleSpec::Plugin { command, args } => {
                OracleImpl::Plugin(PluginOracle { command: command.clone(), args: args.clone() })
            }
        };
        let g = Self { pres: Arc::new(pres), spec, oracle };
        let forms = g.normal_forms(g.pres.relators())?;
        if let Some(i) = forms.iter().position(|f| !f.is_empty()) {
            return Err(Error::Oracle(format!(
                "relator {i} ({}) is nontrivial under the {} oracle",
                g.pres.display_word(&g.pres.relators()[i]),
                g.spec.kind_name()
            )));
        }
        Ok(g)
    }

    /// Builds a group from a parsed document; the oracle section is required.
    pub fn from_document(doc: &crate::presentation::Document) -> Result<Self> {
        let spec = doc
            .oracle
            .as_ref()
            .ok_or_else(|| Error::Oracle("document has no \"oracle\" section".into()))?;
        Self::new(doc.presentation.clone(), OracleSpec::from_json(spec)?)
    }

    pub fn presentation(&self) -> &RelativePresentation {
        &self.pres
    }

    pub fn spec(&self) -> &OracleSpec {
        &self.spec
    }

    pub fn is_free_product(&self) -> bool {
        matches!(self.oracle, OracleImpl::FreeProduct)
    }

    /// Canonical word: equal outputs exactly when the inputs are equal in `G`.
    pub fn normal_form(&self, w: &Word) -> Result<Word> {
        self.pres.check_word(w)?;
        let p = &*self.pres;
        Ok(match &self.oracle {
            OracleImpl::FreeProduct => p.free_reduce(w),
            OracleImpl::Integer(o) => o.canonical(p, &o.image(p, w)),
            OracleImpl::Finite(o) => {
                let e = o.image(p, w);
                o.canonical[e]
                    .clone()
                    .ok_or_else(|| Error::Oracle(format!("finite_quotient element {e} has no canonical word")))?
            }
            OracleImpl::Plugin(o) => o.run(p, std::slice::from_ref(w))?.pop().expect("one answer"),
        })
    }

    /// Batch form of [`Self::normal_form`]; the plugin backend is invoked once per batch.
    pub fn normal_forms(&self, words: &[Word]) -> Result<Vec<Word>> {
        match &self.oracle {
            OracleImpl::Plugin(o) => {
                for w in words {
                    self.pres.check_word(w)?;
                }
                o.run(&self.pres, words)
            }
            _ if words.len() >= PAR_THRESHOLD => words.par_iter().map(|w| self.normal_form(w)).collect(),
            _ => words.iter().map(|w| self.normal_form(w)).collect(),
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool> {
        let forms = self.normal_forms(&[u.clone(), v.clone()])?;
        Ok(forms[0] == forms[1])
    }

    pub fn is_trivial(&self, w: &Word) -> Result<bool> {
        Ok(self.normal_form(w)?.is_empty())
    }

    /// Normal form of the product `u · v`.
    pub fn multiply(&self, u: &Word, v: &Word) -> Result<Word> {
        self.normal_form(&u.concat(v))
    }
}

/// Outcome of a budgeted word-problem query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum WordProblemVerdict {
    Trivial { area: usize },
    NontrivialCertified,
    Unknown,
}

/// Semi-decides triviality of `w` by bounded filling search.
///
/// With an oracle attached, a nonempty normal form yields `NontrivialCertified`
/// without searching. Otherwise the search runs; `Unknown` means no filling
/// with at most `max_area` relator cells and intermediate length at most
/// `max_len` exists.
pub fn budgeted_word_problem(
    p: &RelativePresentation,
    oracle: Option<&Group>,
    w: &Word,
    max_area: usize,
    max_len: usize,
) -> Result<WordProblemVerdict> {
    if let Some(g) = oracle {
        if !g.is_trivial(w)? {
            return Ok(WordProblemVerdict::NontrivialCertified);
        }
    }
    let caps = SearchCaps::new(max_area, max_len);
    Ok(match filling::search(p, w, caps)? {
        SearchOutcome::Found(cert) => WordProblemVerdict::Trivial { area: cert.area },
        SearchOutcome::Unknown { .. } => WordProblemVerdict::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::PeripheralModel;

    fn z_example() -> RelativePresentation {
        RelativePresentation::new(
            vec![],
            vec![PeripheralModel::free_abelian(1, 1), PeripheralModel::free_abelian(2, 1)],
            vec![Word::new(vec![Letter::hz(0, 1), Letter::hz(1, 1)])],
        )
        .unwrap()
    }

    fn z_free() -> RelativePresentation {
        RelativePresentation::new(
            vec![],
            vec![PeripheralModel::free_abelian(1, 1), PeripheralModel::free_abelian(2, 1)],
            vec![],
        )
        .unwrap()
    }

    fn z_oracle() -> OracleSpec {
        OracleSpec::IntegerQuotient {
            dim: 1,
            x_images: vec![],
            model_images: vec![
                ModelImage { lambda: 1, generators: vec![vec![1]] },
                ModelImage { lambda: 2, generators: vec![vec![-1]] },
            ],
        }
    }

    fn z2() -> (RelativePresentation, OracleSpec) {
        let p = RelativePresentation::new(vec!["x".into()], vec![], vec![Word::new(vec![Letter::x(0), Letter::x(0)])])
            .unwrap();
        let spec = OracleSpec::FiniteQuotient {
            table: vec![vec![0, 1], vec![1, 0]],
            identity: 0,
            x_images: vec![1],
            model_images: vec![],
        };
        (p, spec)
    }

    #[test]
    fn free_product_normal_form_is_syllable_reduction() {
        let g = Group::new(z_free(), OracleSpec::FreeProduct).unwrap();
        let w = Word::new(vec![Letter::hz(0, 1), Letter::hz(1, 1), Letter::hz(1, -1)]);
        assert_eq!(g.normal_form(&w).unwrap(), Word::new(vec![Letter::hz(0, 1)]));
    }

    #[test]
    fn exponent_oracle_kills_balanced_words() {
        let g = Group::new(z_example(), z_oracle()).unwrap();
        let w = Word::new(vec![Letter::hz(0, 3), Letter::hz(1, 3)]);
        assert!(g.normal_form(&w).unwrap().is_empty());
    }

    #[test]
    fn finite_quotient_normal_form() {
        let (p, spec) = z2();
        let g = Group::new(p, spec).unwrap();
        let w = Word::new(vec![Letter::x(0); 3]);
        assert_eq!(g.normal_form(&w).unwrap(), Word::new(vec![Letter::x(0)]));
    }

    #[test]
    fn equality_examples() {
        let fp = Group::new(z_free(), OracleSpec::FreeProduct).unwrap();
        let a = Word::new(vec![Letter::hz(0, 1), Letter::hz(1, 1)]);
        let b = Word::new(vec![Letter::hz(1, 1), Letter::hz(0, 1)]);
        assert!(!fp.equal(&a, &b).unwrap());
        assert!(fp.equal(&a, &a).unwrap());
        let z = Group::new(z_example(), z_oracle()).unwrap();
        assert!(z
            .equal(&Word::new(vec![Letter::hz(0, 3)]), &Word::new(vec![Letter::hz(1, -3)]))
            .unwrap());
    }

    #[test]
    fn kind_mismatch_and_invalid_oracles_are_rejected() {
        assert!(matches!(Group::new(z_example(), OracleSpec::FreeProduct), Err(Error::Oracle(_))));
        let wrong = OracleSpec::IntegerQuotient {
            dim: 1,
            x_images: vec![],
            model_images: vec![
                ModelImage { lambda: 1, generators: vec![vec![1]] },
                ModelImage { lambda: 2, generators: vec![vec![1]] },
            ],
        };
        let err = Group::new(z_example(), wrong).unwrap_err();
        assert!(err.to_string().contains("nontrivial"), "{err}");
    }

    #[test]
    fn canonical_words_are_short() {
        let g = Group::new(z_example(), z_oracle()).unwrap();
        let w = Word::new(vec![Letter::hz(0, 2), Letter::hz(1, 1)]);
        assert_eq!(g.normal_form(&w).unwrap(), Word::new(vec![Letter::hz(0, 1)]));
        let w = Word::new(vec![Letter::hz(1, 4)]);
        assert_eq!(g.normal_form(&w).unwrap(), Word::new(vec![Letter::hz(0, -4)]));
    }

    #[test]
    fn budgeted_examples() {
        let p = z_example();
        let relator = Word::new(vec![Letter::hz(0, 1), Letter::hz(1, 1)]);
        assert_eq!(
            budgeted_word_problem(&p, None, &relator, 5, 10).unwrap(),
            WordProblemVerdict::Trivial { area: 1 }
        );
        let w = Word::new(vec![Letter::hz(0, 2), Letter::hz(1, 2)]);
        assert_eq!(budgeted_word_problem(&p, None, &w, 5, 10).unwrap(), WordProblemVerdict::Trivial { area: 2 });
        let fp = Group::new(z_free(), OracleSpec::FreeProduct).unwrap();
        assert_eq!(
            budgeted_word_problem(fp.presentation(), Some(&fp), &relator, 5, 10).unwrap(),
            WordProblemVerdict::NontrivialCertified
        );
    }

    #[test]
    fn plugin_protocol_round_trip() {
        // `cat` echoes each word back: a valid normal form on reduced input for a free product.
        let g = Group::new(z_free(), OracleSpec::Plugin { command: "cat".into(), args: vec![] }).unwrap();
        let w = Word::new(vec![Letter::hz(0, 2), Letter::hz(1, -1)]);
        assert_eq!(g.normal_form(&w).unwrap(), w);
        let batch = vec![w.clone(), Word::empty(), Word::new(vec![Letter::hz(1, 7)])];
        assert_eq!(g.normal_forms(&batch).unwrap(), batch);
    }

    #[test]
    fn missing_plugin_is_an_oracle_error() {
        let err = Group::new(
            z_example(),
            OracleSpec::Plugin { command: "/nonexistent/relhyp-plugin".into(), args: vec![] },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Oracle(_)));
    }

    #[test]
    fn oracle_spec_json() {
        let v: Value = serde_json::json!({"kind": "integer_quotient", "dim": 1,
            "model_images": [{"lambda": 1, "generators": [[1]]}, {"lambda": 2, "generators": [[-1]]}]});
        assert_eq!(OracleSpec::from_json(&v).unwrap(), z_oracle());
    }
}
