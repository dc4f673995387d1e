//! Acceptance checks: one PASS/FAIL line per criterion.
//!
//! Criterion 6 is known not to hold for the stated action and parameters; its line
//! reports FAIL with the witnesses, and the target exits nonzero only if an outcome
//! differs from the recorded expectation.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relhyp::cayley::{rel_length, truncated_ball};
use relhyp::cochain::{
    boundary, build_window, chain_rel_length, coboundary, evident_bound, growth_scan, min_linf_primitive, pair, Chain,
    CellKind, Cochain, CocycleFamily, GrowthVerdict, WindowFamily, WindowSpec,
};
use relhyp::corridor::{
    check_uniform_flare, corridor_cocycle_pairing, FreeAction, GSample, RelAutomorphism, SeparationParams,
    SeparationVerdict,
};
use relhyp::filling::{dehn_profile, relative_area, rho_escalation, ProfileCaps, SearchCaps};
use relhyp::oracle::budgeted_word_problem;
use relhyp::{Letter, Word, WordProblemVerdict};

use common::{action, data, group, word, EXAMPLES};

struct Outcome {
    pass: bool,
    detail: String,
}

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let t = start.elapsed();
    (t < limit, format!("{:.2}s of {}s", t.as_secs_f64(), limit.as_secs()))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let g = group("z-example.json");
    let step = word(&g, "h1^1");
    let mut worst: f64 = 0.0;
    for n in [4usize, 8, 12, 16] {
        let w = build_window(&g, &WindowSpec::Strip { step: step.clone(), n, rho: 1 }).unwrap();
        let z = CocycleFamily::RelatorIndicator.on(&w).unwrap();
        let norm = min_linf_primitive(&w, &z, "f").unwrap().norm().unwrap_or(f64::NAN);
        worst = worst.max((norm - n as f64 / 4.0).abs());
    }
    let fam = WindowFamily::Strip { step, rho: 1 };
    let scan = growth_scan(&g, &fam, &CocycleFamily::RelatorIndicator, &[4, 8, 12, 16]).unwrap();
    let (fast, t) = within(start, Duration::from_secs(10));
    let pass = worst <= 1e-6
        && scan.verdict == GrowthVerdict::LinearGrowthWitness
        && (scan.slope - 0.25).abs() <= 0.01
        && fast;
    Outcome { pass, detail: format!("max |norm - n/4| = {worst:.2e}, slope {:.6}, {:?}, {t}", scan.slope, scan.verdict) }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let g = group("z-example.json");
    let p = g.presentation();
    let mut areas = Vec::new();
    for n in 1..=4i64 {
        let c = Word::new(vec![Letter::hz(0, n), Letter::hz(1, n)]);
        areas.push(relative_area(p, Some(&g), &c, SearchCaps::new(12, 16)).unwrap().area());
    }
    let esc = rho_escalation(&g, 2, &[2, 4, 8], &ProfileCaps::default()).unwrap();
    let values: Vec<usize> = esc.rows.iter().map(|(_, e)| e.max_area).collect();
    let (fast, t) = within(start, Duration::from_secs(30));
    let pass = areas == [Some(1), Some(2), Some(3), Some(4)] && esc.unbounded && fast;
    Outcome { pass, detail: format!("areas {areas:?}, profile at n=2 for rho 2,4,8: {values:?}, {t}") }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut notes = Vec::new();
    for name in ["zz-free.json", "f2.json"] {
        let g = group(name);
        let prof = dehn_profile(&g, 10, 1, &ProfileCaps::default()).unwrap();
        let ok = prof.entries.iter().all(|e| e.max_area == 0 && e.exact && !e.sampled);
        let loops: usize = prof.entries.last().map_or(0, |e| e.loop_count);
        notes.push(format!("{name}: zero={ok} trivial loops={loops}"));
        pass &= ok && prof.entries.len() == 11;
    }
    let (fast, t) = within(start, Duration::from_secs(10));
    Outcome { pass: pass && fast, detail: format!("{}, {t}", notes.join("; ")) }
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut violations = 0usize;
    let mut triples = Vec::new();
    for name in EXAMPLES {
        let g = group(name);
        let rho = if name == "z-example.json" { 2 } else { 1 };
        let mut windows = vec![build_window(&g, &WindowSpec::Ball { radius: 2, rho }).unwrap()];
        if name == "z-example.json" {
            windows.push(build_window(&g, &WindowSpec::Strip { step: word(&g, "h1^1"), n: 6, rho: 1 }).unwrap());
        }
        let mut count = 0usize;
        for w in &windows {
            let interior: Vec<usize> = w.interior_cells().collect();
            for _ in 0..1000 {
                count += 1;
                let h = Cochain {
                    dim: 1,
                    values: w.cells[1]
                        .iter()
                        .map(|c| if c.in_lbar() { 0.0 } else { rng.random_range(-4..=4) as f64 / 4.0 })
                        .collect(),
                };
                let mut d = Chain::new(2);
                for &f in &interior {
                    let k = rng.random_range(-2..=2);
                    if k != 0 {
                        d.add(f, k as f64);
                    }
                }
                let d0 = Cochain {
                    dim: 0,
                    values: w
                        .cells[0]
                        .iter()
                        .map(|c| {
                            if matches!(c.kind, CellKind::Peripheral { .. }) {
                                0.0
                            } else {
                                rng.random_range(-8..=8) as f64
                            }
                        })
                        .collect(),
                };
                let dd0 = coboundary(w, &d0).unwrap();
                let ddd = coboundary(w, &dd0).unwrap();
                if interior.iter().any(|&f| ddd.values[f].abs() > 1e-9) {
                    violations += 1;
                }
                if !dd0.is_relative(w) || !coboundary(w, &h).unwrap().is_relative(w) {
                    violations += 1;
                }
                let z = coboundary(w, &h).unwrap();
                let loop_chain = boundary(w, &d).unwrap();
                let lhs = pair(&z, &d).unwrap();
                let rhs = pair(&h, &loop_chain).unwrap();
                if (lhs - rhs).abs() > 1e-9 {
                    violations += 1;
                }
                let (l, r) = evident_bound(w, &h, &d).unwrap();
                if l > r + 1e-9 || (r - 2.0 * h.norm_inf() * chain_rel_length(w, &loop_chain)).abs() > 1e-9 {
                    violations += 1;
                }
            }
        }
        triples.push(format!("{name}:{count}"));
    }
    Outcome { pass: violations == 0, detail: format!("{violations} violations over triples {}", triples.join(",")) }
        .timed(start)
}

impl Outcome {
    fn timed(mut self, start: Instant) -> Self {
        self.detail = format!("{}, {:.2}s", self.detail, start.elapsed().as_secs_f64());
        self
    }
}

fn random_reduced(rng: &mut ChaCha8Rng, rank: i32, max_len: usize) -> Vec<i32> {
    let len = rng.random_range(0..=max_len);
    let mut out: Vec<i32> = Vec::new();
    while out.len() < len {
        let l = rng.random_range(1..=rank) * if rng.random_range(0..2) == 0 { 1 } else { -1 };
        if out.last() != Some(&-l) {
            out.push(l);
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let g = group("f2.json");
    let act = action(&g, "fibonacci-action.json");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = 0;
    for _ in 0..100 {
        let gw: Vec<Letter> = random_reduced(&mut rng, 2, 5)
            .into_iter()
            .map(|l| if l > 0 { Letter::x(l as usize - 1) } else { Letter::x_inv((-l) as usize - 1) })
            .collect();
        let u = random_reduced(&mut rng, act.rank() as i32, 3);
        let v = random_reduced(&mut rng, act.rank() as i32, 3);
        let r = corridor_cocycle_pairing(&g, &act, &Word::new(gw), &u, &v).unwrap();
        if r.equal != Some(true) {
            bad += 1;
        }
    }
    let (fast, t) = within(start, Duration::from_secs(60));
    Outcome { pass: bad == 0 && fast, detail: format!("{bad} mismatches over 100 triples, {t}") }
}

fn criterion_6() -> (Outcome, bool) {
    let start = Instant::now();
    let g = group("f2.json");
    let ball = GSample::ball(&g, 6, 1).unwrap();
    let fib = check_uniform_flare(&g, &action(&g, "fibonacci-action.json"), &ball, SeparationParams {
        lambda: 1.2,
        n: 2,
        m: 3,
    })
    .unwrap();
    let id = FreeAction::new(vec![RelAutomorphism::identity(g.presentation())]).unwrap();
    let small = GSample::ball(&g, 4, 1).unwrap();
    let identity_violated = [1.0001, 1.2, 2.0, 10.0].into_iter().all(|lambda| {
        let r = check_uniform_flare(&g, &id, &small, SeparationParams { lambda, n: 2, m: 3 }).unwrap();
        r.verdict == SeparationVerdict::Violated && !r.violations.is_empty()
    });
    let (fast, t) = within(start, Duration::from_secs(120));
    let mut witnesses: Vec<String> = fib.violations.iter().map(|v| v.g.clone()).collect();
    witnesses.sort();
    let pass = fib.verdict == SeparationVerdict::Separated && fib.exhaustive && identity_violated && fast;
    let expected_failure = witnesses == ["x^-1 y^-1 x y", "y^-1 x^-1 y x"]
        && fib.violations.iter().all(|v| v.base.upper() == 4 && v.at_u.upper() == 4 && v.at_v.upper() == 4)
        && identity_violated
        && fast;
    let detail = format!(
        "fibonacci over {} elements: {:?}, {} violations {:?} (|a^2 g| = |a^-2 g| = 4 < 1.2*4); identity violated at all tested lambda: {identity_violated}, {t}",
        fib.samples,
        fib.verdict,
        fib.violations.len(),
        witnesses
    );
    (Outcome { pass, detail }, expected_failure)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let g = group("z-example.json");
    let p = g.presentation();
    let letters = p.letters_up_to(3);
    let mut words: Vec<Word> = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..4 {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                let mut v = w.clone();
                v.push(l.clone());
                next.push(v);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let forms = g.normal_forms(&words).unwrap();
    let mut disagreements = 0;
    let mut trivial = 0;
    for (w, f) in words.iter().zip(&forms) {
        let verdict = budgeted_word_problem(p, None, w, 12, 16).unwrap();
        let says_trivial = matches!(verdict, WordProblemVerdict::Trivial { .. });
        trivial += usize::from(f.is_empty());
        if says_trivial != f.is_empty() {
            disagreements += 1;
        }
    }
    let mut ball_mismatch = 0;
    let mut vertices = 0;
    for name in ["zz-free.json", "f2.json"] {
        let fg = group(name);
        let b = truncated_ball(&fg, 3, 2).unwrap();
        vertices += b.len();
        let fp = fg.presentation();
        let rho = b.peripheral_bound;
        for (v, &d) in b.vertices.iter().zip(&b.distance) {
            // Each syllable of model length l costs ceil(l / rho) truncated letters.
            let truncated: u64 = v
                .letters()
                .iter()
                .map(|l| match l {
                    Letter::X { .. } => 1,
                    Letter::H { model, elem } => fp.model(*model).length(elem).div_ceil(rho),
                })
                .sum();
            let syllables = rel_length(&fg, v).unwrap().exact();
            let short = v.letters().iter().all(|l| match l {
                Letter::X { .. } => true,
                Letter::H { model, elem } => fp.model(*model).length(elem) <= rho,
            });
            if syllables != Some(v.len() as u64) || truncated != d as u64 || (short && syllables != Some(d as u64)) {
                ball_mismatch += 1;
            }
        }
    }
    Outcome {
        pass: disagreements == 0 && ball_mismatch == 0,
        detail: format!(
            "{disagreements} disagreements over {} words ({trivial} trivial); {ball_mismatch} length mismatches over {vertices} ball vertices",
            words.len()
        ),
    }
    .timed(start)
}

fn run_cli(args: &[String]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_relhyp")).args(args).output().expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let d = |n: &str| data(n).to_string_lossy().into_owned();
    let runs: Vec<Vec<String>> = vec![
        vec!["parse".into(), "--input".into(), d("z-example.json")],
        vec!["ball".into(), "--input".into(), d("f2.json"), "--radius".into(), "3".into(), "--format".into(), "csv".into()],
        vec!["length".into(), "--input".into(), d("z-example.json"), "--word".into(), "h1^3 h2^1".into()],
        vec!["area".into(), "--input".into(), d("z-example.json"), "--loop".into(), "h1^2 h2^2".into()],
        vec!["dehn-profile".into(), "--input".into(), d("z-example.json"), "--n-max".into(), "3".into(), "--seed".into(), "7".into()],
        vec!["window-lp".into(), "--input".into(), d("z-example.json"), "--radii".into(), "4,8".into()],
        vec![
            "flare".into(), "--input".into(), d("f2.json"), "--action".into(), d("fibonacci-action.json"),
            "--lambda".into(), "1.2".into(), "--n".into(), "2".into(), "--m".into(), "3".into(),
            "--samples".into(), "200".into(), "--seed".into(), "11".into(),
        ],
        vec![
            "corridor".into(), "--input".into(), d("f2.json"), "--action".into(), d("fibonacci-action.json"),
            "--word".into(), "x y^-1".into(), "--radius".into(), "3".into(), "--pair-u=-1".into(), "--pair-v=1,1".into(),
        ],
    ];
    let mut differing = Vec::new();
    for args in &runs {
        let (a, ca) = run_cli(args);
        let (b, cb) = run_cli(args);
        if a != b || ca != 0 || cb != 0 || a.is_empty() {
            differing.push(args[0].clone());
        }
    }
    Outcome { pass: differing.is_empty(), detail: format!("{} subcommands, differing: {differing:?}", runs.len()) }
        .timed(start)
}

fn report(n: usize, o: &Outcome, expected_pass: bool) -> bool {
    println!("criterion {n}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    o.pass == expected_pass
}

fn main() -> ExitCode {
    let mut as_expected = true;
    as_expected &= report(1, &criterion_1(), true);
    as_expected &= report(2, &criterion_2(), true);
    as_expected &= report(3, &criterion_3(), true);
    as_expected &= report(4, &criterion_4(), true);
    as_expected &= report(5, &criterion_5(), true);
    let (c6, matches_analysis) = criterion_6();
    as_expected &= report(6, &c6, false);
    if !matches_analysis {
        println!("criterion 6: outcome differs from the recorded counterexample analysis");
        as_expected = false;
    }
    as_expected &= report(7, &criterion_7(), true);
    as_expected &= report(8, &criterion_8(), true);
    if as_expected {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
