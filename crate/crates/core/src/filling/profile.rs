//! Relative Dehn profiles over enumerated loops, asymptotic dominance and growth fits.

use std::ops::RangeInclusive;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{search, SearchCaps, SearchOutcome};
use crate::error::{Error, Result};
use crate::oracle::Group;
use crate::presentation::{Letter, RelativePresentation, Word};

#[derive(Clone, Debug)]
pub struct ProfileCaps {
    pub max_area: usize,
    /// Extra room granted to intermediate words beyond the loop length.
    /// Defaults to the longest relator.
    pub extra_len: Option<usize>,
    /// Above this many candidate loops per length, loops are sampled instead.
    pub max_loops: usize,
    pub seed: u64,
}

impl Default for ProfileCaps {
    fn default() -> Self {
        Self { max_area: 8, extra_len: None, max_loops: 200_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub n: usize,
    pub max_area: usize,
    pub loop_count: usize,
    pub exact: bool,
    pub sampled: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DehnProfile {
    pub rho: u64,
    pub entries: Vec<ProfileEntry>,
}

impl DehnProfile {
    /// A profile with prescribed exact values at `n = 0, 1, ...`.
    pub fn from_values(values: &[usize]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .map(|(n, &v)| ProfileEntry { n, max_area: v, loop_count: 0, exact: true, sampled: false })
            .collect();
        Self { rho: 0, entries }
    }

    pub fn get(&self, n: usize) -> Option<&ProfileEntry> {
        self.entries.get(n).filter(|e| e.n == n)
    }

    pub fn values(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.max_area).collect()
    }
}

/// Enumerates freely and cyclically reduced letter-index sequences of one length.
struct CyclicWords<'a> {
    p: &'a RelativePresentation,
    letters: &'a [Letter],
    len: usize,
    stack: Vec<usize>,
    started: bool,
}

impl<'a> CyclicWords<'a> {
    fn new(p: &'a RelativePresentation, letters: &'a [Letter], len: usize) -> Self {
        Self { p, letters, len, stack: Vec::new(), started: false }
    }

    fn apart(&self, a: usize, b: usize) -> bool {
        self.p.combine(&self.letters[a], &self.letters[b]).is_none()
    }

    /// Extends the current prefix with the smallest admissible letters from `from`.
    fn fill(&mut self, mut from: usize) -> bool {
        while self.stack.len() < self.len {
            let ok = (from..self.letters.len()).find(|&c| self.stack.last().is_none_or(|&t| self.apart(t, c)));
            match ok {
                Some(c) => {
                    self.stack.push(c);
                    from = 0;
                }
                None => match self.stack.pop() {
                    Some(t) => from = t + 1,
                    None => return false,
                },
            }
        }
        true
    }
}

impl Iterator for CyclicWords<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.len == 0 {
            if self.started {
                return None;
            }
            self.started = true;
            return Some(Vec::new());
        }
        loop {
            let ok = if !self.started {
                self.started = true;
                self.fill(0)
            } else {
                match self.stack.pop() {
                    Some(t) => self.fill(t + 1),
                    None => false,
                }
            };
            if !ok {
                return None;
            }
            let s = &self.stack;
            if s.len() < 2 || self.apart(s[s.len() - 1], s[0]) {
                return Some(self.stack.clone());
            }
        }
    }
}

fn to_word(letters: &[Letter], idx: &[usize]) -> Word {
    idx.iter().map(|&i| letters[i].clone()).collect()
}

fn least_rotation_key(idx: &[usize]) -> Vec<usize> {
    (0..idx.len().max(1))
        .map(|s| {
            let mut r = idx[s.min(idx.len())..].to_vec();
            r.extend_from_slice(&idx[..s.min(idx.len())]);
            r
        })
        .min()
        .unwrap_or_default()
}

/// Number of freely reduced words of length `k`, an upper bound for the cyclically
/// reduced ones.
fn count_estimate(p: &RelativePresentation, letters: &[Letter], k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let a = letters.len();
    let apart: Vec<Vec<bool>> =
        letters.iter().map(|x| letters.iter().map(|y| p.combine(x, y).is_none()).collect()).collect();
    let mut ending = vec![1.0f64; a];
    for _ in 1..k {
        ending = (0..a).map(|c| (0..a).filter(|&t| apart[t][c]).map(|t| ending[t]).sum()).collect();
    }
    ending.iter().sum()
}

fn sample_words(p: &RelativePresentation, letters: &[Letter], k: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count && attempts < count * 50 {
        attempts += 1;
        let mut w: Vec<usize> = Vec::with_capacity(k);
        while w.len() < k {
            let c = rng.random_range(0..letters.len());
            if w.last().is_none_or(|&t| p.combine(&letters[t], &letters[c]).is_none()) {
                w.push(c);
            }
        }
        if k < 2 || p.combine(&letters[w[k - 1]], &letters[w[0]]).is_none() {
            out.push(w);
        }
    }
    out
}

/// Relative Dehn profile: for each `n ≤ n_max`, the largest relative area among
/// trivial loops of at most `n` letters, all letters of model length at most `rho`.
pub fn dehn_profile(g: &Group, n_max: usize, rho: u64, caps: &ProfileCaps) -> Result<DehnProfile> {
    let p = g.presentation();
    let letters = p.letters_up_to(rho);
    let extra = caps.extra_len.unwrap_or_else(|| p.max_relator_len().max(2));
    let mut rng = ChaCha8Rng::seed_from_u64(caps.seed);
    let mut entries = Vec::with_capacity(n_max + 1);
    let (mut best, mut count, mut exact, mut sampled) = (0usize, 0usize, true, false);
    for k in 0..=n_max {
        let mut trivial: Vec<Vec<usize>> = Vec::new();
        let mut consider = |batch: &[Vec<usize>]| -> Result<()> {
            let words: Vec<Word> = batch.iter().map(|idx| to_word(&letters, idx)).collect();
            let forms = g.normal_forms(&words)?;
            trivial.extend(batch.iter().zip(forms).filter(|(_, f)| f.is_empty()).map(|(i, _)| i.clone()));
            Ok(())
        };
        if count_estimate(p, &letters, k) > caps.max_loops as f64 {
            sampled = true;
            consider(&sample_words(p, &letters, k, caps.max_loops, &mut rng))?;
        } else {
            let mut batch = Vec::with_capacity(4096);
            for w in CyclicWords::new(p, &letters, k) {
                batch.push(w);
                if batch.len() == 4096 {
                    consider(&batch)?;
                    batch.clear();
                }
            }
            consider(&batch)?;
        }
        count += trivial.len();
        let mut keys: Vec<Vec<usize>> = trivial.iter().map(|w| least_rotation_key(w)).collect();
        keys.sort();
        keys.dedup();
        let search_caps = SearchCaps::new(caps.max_area, k + extra);
        let areas: Vec<Result<SearchOutcome>> =
            keys.par_iter().map(|key| search(p, &to_word(&letters, key), search_caps)).collect();
        for a in areas {
            match a? {
                SearchOutcome::Found(c) => best = best.max(c.area),
                SearchOutcome::Unknown { .. } => exact = false,
            }
        }
        entries.push(ProfileEntry { n: k, max_area: best, loop_count: count, exact: exact && !sampled, sampled });
    }
    Ok(DehnProfile { rho, entries })
}

/// Checks `f(n) ≤ g(C·n + K) + L·n` for every `n` in `range`.
pub fn check_asymptotic_dominance(
    f: &DehnProfile,
    g: &DehnProfile,
    c: usize,
    k: usize,
    l: f64,
    range: RangeInclusive<usize>,
) -> Result<bool> {
    for n in range {
        let fv = f.get(n).ok_or_else(|| Error::Precondition(format!("profile f has no entry at {n}")))?;
        let m = c * n + k;
        let gv = g.get(m).ok_or_else(|| Error::Precondition(format!("profile g has no entry at {m}")))?;
        if fv.max_area as f64 > gv.max_area as f64 + l * n as f64 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitVerdict {
    LinearConsistent,
    SuperlinearWitness,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub verdict: FitVerdict,
}

/// Least-squares line through the exact entries. The verdict is superlinear when
/// the second differences over the latter half of the range are all positive.
pub fn linear_fit(profile: &DehnProfile) -> Result<LinearFit> {
    let pts: Vec<(f64, f64)> =
        profile.entries.iter().filter(|e| e.exact).map(|e| (e.n as f64, e.max_area as f64)).collect();
    if pts.len() < 3 {
        return Err(Error::Precondition(format!("linear fit needs 3 exact entries, found {}", pts.len())));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = pts.iter().map(|p| (p.1 - slope * p.0 - intercept).abs()).fold(0.0, f64::max);
    let second: Vec<f64> = pts.windows(3).map(|w| w[2].1 - 2.0 * w[1].1 + w[0].1).collect();
    let tail = &second[second.len() / 2..];
    let verdict = if tail.iter().all(|&d| d > 0.0) { FitVerdict::SuperlinearWitness } else { FitVerdict::LinearConsistent };
    Ok(LinearFit { slope, intercept, max_residual, verdict })
}

/// Profile values at one fixed loop length under increasing peripheral bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EscalationReport {
    pub n: usize,
    pub rows: Vec<(u64, ProfileEntry)>,
    /// True when the value grows strictly with every escalation step.
    pub unbounded: bool,
}

pub fn rho_escalation(g: &Group, n: usize, rhos: &[u64], caps: &ProfileCaps) -> Result<EscalationReport> {
    let rows = rhos
        .iter()
        .map(|&rho| {
            let prof = dehn_profile(g, n, rho, caps)?;
            Ok((rho, prof.entries[n].clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let unbounded = rows.len() >= 2 && rows.windows(2).all(|w| w[1].1.max_area > w[0].1.max_area);
    Ok(EscalationReport { n, rows, unbounded })
}

/// As [`linear_fit`], but a strictly growing escalation report forces the
/// superlinear verdict: no function of `n` alone bounds the area.
pub fn linear_fit_with_escalation(profile: &DehnProfile, escalation: &EscalationReport) -> Result<LinearFit> {
    let mut fit = linear_fit(profile)?;
    if escalation.unbounded {
        fit.verdict = FitVerdict::SuperlinearWitness;
    }
    Ok(fit)
}
