//! `(λ, N, M)`-separation and uniform flare checks over samples of `G`.

use std::collections::HashMap;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::automorphism::{display_free, free_ball, invert, reduce, FreeAction, FreeWord};
use crate::cayley::{rel_length, truncated_ball, RelLength};
use crate::error::{Error, Result};
use crate::oracle::Group;
use crate::presentation::Word;

/// Elements of `G` to test, with a note on whether they exhaust a ball.
#[derive(Clone, Debug, PartialEq)]
pub struct GSample {
    pub words: Vec<Word>,
    pub exhaustive: bool,
    pub description: String,
}

impl GSample {
    /// Every vertex of the truncated ball of the given radius.
    pub fn ball(g: &Group, radius: usize, rho: u64) -> Result<Self> {
        Ok(Self {
            words: truncated_ball(g, radius, rho)?.vertices,
            exhaustive: true,
            description: format!("ball(radius={radius},rho={rho})"),
        })
    }

    /// `count` random words of length at most `max_len` over the letters of model
    /// length at most `rho`, reduced to normal form.
    pub fn random(g: &Group, count: usize, max_len: usize, rho: u64, seed: u64) -> Result<Self> {
        let p = g.presentation();
        let letters = p.letters_up_to(rho);
        if letters.is_empty() {
            return Err(Error::Invalid("the presentation has no generators".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<Word> = (0..count)
            .map(|_| {
                let len = rng.random_range(0..=max_len);
                Word::new((0..len).map(|_| letters[rng.random_range(0..letters.len())].clone()).collect())
            })
            .collect();
        Ok(Self {
            words: g.normal_forms(&raw)?,
            exhaustive: false,
            description: format!("random(count={count},max_len={max_len},rho={rho},seed={seed})"),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeparationParams {
    pub lambda: f64,
    pub n: usize,
    pub m: u64,
}

impl SeparationParams {
    pub fn check(&self) -> Result<()> {
        if self.lambda.is_nan() || self.lambda <= 1.0 || self.n == 0 || self.m == 0 {
            return Err(Error::Precondition("separation needs lambda > 1 and N, M >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparationVerdict {
    Separated,
    Violated,
    Indeterminate,
}

/// A failing quadruple: `λ·l(base) > max(l(at_u), l(at_v))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub g: String,
    pub w: String,
    pub u: String,
    pub v: String,
    pub base: RelLength,
    pub at_u: RelLength,
    pub at_v: RelLength,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    pub check: &'static str,
    pub params: SeparationParams,
    /// Largest `|w|` of the tested base points.
    pub w_radius: usize,
    pub sample: String,
    pub exhaustive: bool,
    pub samples: usize,
    pub tested: usize,
    pub indeterminate: usize,
    pub verdict: SeparationVerdict,
    pub violations: Vec<Violation>,
}

enum Outcome {
    Pass,
    Fail,
    Unknown,
}

fn compare(lambda: f64, base: RelLength, a: RelLength, b: RelLength) -> Outcome {
    let hi = a.upper().max(b.upper()) as f64;
    let lo = a.lower().max(b.lower()) as f64;
    if lambda * base.lower() as f64 > hi {
        Outcome::Fail
    } else if lambda * base.upper() as f64 <= lo {
        Outcome::Pass
    } else {
        Outcome::Unknown
    }
}

/// Ordered pairs `(s, t)` of reduced words of length `n` with `|s⁻¹t| = 2n`, `s < t`.
fn opposite_pairs(rank: usize, n: usize) -> Vec<(FreeWord, FreeWord)> {
    let sphere: Vec<FreeWord> = free_ball(rank, n).into_iter().filter(|w| w.len() == n).collect();
    let mut out = Vec::new();
    for (i, s) in sphere.iter().enumerate() {
        for t in &sphere[i + 1..] {
            if s[0] != t[0] {
                out.push((s.clone(), t.clone()));
            }
        }
    }
    out
}

struct Lengths<'a> {
    g: &'a Group,
    action: &'a FreeAction,
    elem: &'a Word,
    cache: HashMap<FreeWord, RelLength>,
}

impl Lengths<'_> {
    /// `l(α_a(g))`.
    fn of(&mut self, a: &FreeWord) -> Result<RelLength> {
        if let Some(l) = self.cache.get(a) {
            return Ok(*l);
        }
        let img = self.action.apply(self.g.presentation(), a, self.elem)?;
        let l = rel_length(self.g, &img)?;
        self.cache.insert(a.clone(), l);
        Ok(l)
    }
}

#[derive(Default)]
struct Partial {
    tested: usize,
    indeterminate: usize,
    violations: Vec<Violation>,
}

fn finish(
    check: &'static str,
    params: SeparationParams,
    w_radius: usize,
    sample: &GSample,
    parts: Vec<Partial>,
) -> SeparationReport {
    let mut tested = 0;
    let mut indeterminate = 0;
    let mut violations = Vec::new();
    for p in parts {
        tested += p.tested;
        indeterminate += p.indeterminate;
        violations.extend(p.violations);
    }
    let verdict = if !violations.is_empty() {
        SeparationVerdict::Violated
    } else if indeterminate > 0 {
        SeparationVerdict::Indeterminate
    } else {
        SeparationVerdict::Separated
    };
    SeparationReport {
        check,
        params,
        w_radius,
        sample: sample.description.clone(),
        exhaustive: sample.exhaustive,
        samples: sample.words.len(),
        tested,
        indeterminate,
        verdict,
        violations,
    }
}

/// Uniform flare: for each sampled `g` with `l(g) ≥ M`, and each pair `a, b` with
/// `|a| = |b| = N`, `|a⁻¹b| = 2N`, requires `λ·l(g) ≤ max(l(α_a(g)), l(α_b(g)))`.
pub fn check_uniform_flare(
    g: &Group,
    action: &FreeAction,
    sample: &GSample,
    params: SeparationParams,
) -> Result<SeparationReport> {
    params.check()?;
    let p = g.presentation();
    let pairs = opposite_pairs(action.rank(), params.n);
    let parts = sample
        .words
        .par_iter()
        .map(|elem| {
            let mut lengths = Lengths { g, action, elem, cache: HashMap::new() };
            let mut part = Partial::default();
            let base = lengths.of(&Vec::new())?;
            if base.upper() < params.m {
                return Ok(part);
            }
            if base.lower() < params.m {
                part.indeterminate += 1;
                return Ok(part);
            }
            for (a, b) in &pairs {
                let la = lengths.of(a)?;
                let lb = lengths.of(b)?;
                part.tested += 1;
                match compare(params.lambda, base, la, lb) {
                    Outcome::Pass => {}
                    Outcome::Unknown => part.indeterminate += 1,
                    Outcome::Fail => part.violations.push(Violation {
                        g: p.display_word(elem),
                        w: "1".into(),
                        u: display_free(a),
                        v: display_free(b),
                        base,
                        at_u: la,
                        at_v: lb,
                    }),
                }
            }
            Ok(part)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish("uniform-flare", params, 0, sample, parts))
}

/// Separation along corridors: for each sampled `g` and each `w` with
/// `|w| ≤ w_radius` and `l(γ_g(w)) ≥ M`, and each pair `u, v` with
/// `|w⁻¹u| = |w⁻¹v| = N`, `|u⁻¹v| = 2N`, requires
/// `λ·l(γ_g(w)) ≤ max(l(γ_g(u)), l(γ_g(v)))`, where `l(γ_g(a)) = l(α_{a⁻¹}(g))`.
pub fn check_separated(
    g: &Group,
    action: &FreeAction,
    sample: &GSample,
    params: SeparationParams,
    w_radius: usize,
) -> Result<SeparationReport> {
    params.check()?;
    let p = g.presentation();
    let pairs = opposite_pairs(action.rank(), params.n);
    let bases = free_ball(action.rank(), w_radius);
    let parts = sample
        .words
        .par_iter()
        .map(|elem| {
            let mut lengths = Lengths { g, action, elem, cache: HashMap::new() };
            let mut part = Partial::default();
            for w in &bases {
                let base = lengths.of(&invert(w))?;
                if base.upper() < params.m {
                    continue;
                }
                if base.lower() < params.m {
                    part.indeterminate += 1;
                    continue;
                }
                for (s, t) in &pairs {
                    let u = reduce(w.iter().chain(s).copied());
                    let v = reduce(w.iter().chain(t).copied());
                    let lu = lengths.of(&invert(&u))?;
                    let lv = lengths.of(&invert(&v))?;
                    part.tested += 1;
                    match compare(params.lambda, base, lu, lv) {
                        Outcome::Pass => {}
                        Outcome::Unknown => part.indeterminate += 1,
                        Outcome::Fail => part.violations.push(Violation {
                            g: p.display_word(elem),
                            w: display_free(w),
                            u: display_free(&u),
                            v: display_free(&v),
                            base,
                            at_u: lu,
                            at_v: lv,
                        }),
                    }
                }
            }
            Ok(part)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish("separation", params, w_radius, sample, parts))
}
