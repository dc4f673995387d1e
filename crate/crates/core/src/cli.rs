//! Command-line front end. Every artifact embeds the tool version, the seed and an
//! echo of the parsed configuration; repeated runs with the same inputs produce
//! byte-identical output.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::{measure, truncated_ball_with_budget, LengthOptions, DEFAULT_VERTEX_BUDGET};
use crate::cochain::{growth_scan, CocycleFamily, WindowFamily};
use crate::corridor::{
    build_corridor, check_separated, check_uniform_flare, corridor_cocycle_pairing, display_free, sides_report,
    FreeAction, GSample, SeparationParams,
};
use crate::error::{Error, Result};
use crate::filling::{dehn_profile, linear_fit, relative_area, rho_escalation, ProfileCaps, SearchCaps, SearchOutcome};
use crate::oracle::Group;
use crate::presentation::{parse_document, parse_loop_literal, word_to_json, Document, RelativePresentation, Word};

#[derive(Debug, Parser)]
#[command(name = "relhyp", version, about = "Relative presentations, relative Dehn profiles, windowed cohomology and flare checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct Common {
    /// Presentation document (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Output format; each subcommand has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the artifact here instead of standard output.
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a document and print its canonical form.
    Parse(ParseArgs),
    /// Truncated ball of the relative Cayley graph.
    Ball(BallArgs),
    /// Relative length of an element.
    Length(LengthArgs),
    /// Relative area of a trivial loop.
    Area(AreaArgs),
    /// Relative Dehn profile, optionally with a peripheral-bound escalation.
    DehnProfile(DehnArgs),
    /// Minimal l-infinity primitives of a relative 2-cocycle on growing windows.
    WindowLp(WindowLpArgs),
    /// Uniform flare or corridor separation check for a free-group action.
    Flare(FlareArgs),
    /// Corridor of an element, with optional pairing and sides reports.
    Corridor(CorridorArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ParseArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct BallArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub radius: usize,
    #[arg(long, default_value_t = 1)]
    pub rho: u64,
    #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct LengthArgs {
    #[command(flatten)]
    pub common: Common,
    /// Element as a loop literal, e.g. "x h1^2".
    #[arg(long)]
    pub word: String,
    /// Comma-separated peripheral bounds tried in turn.
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 4, 8])]
    pub rho_schedule: Vec<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct AreaArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "loop")]
    pub loop_word: String,
    #[arg(long, default_value_t = 12)]
    pub max_area: usize,
    /// Longest intermediate word; defaults to loop length plus twice the longest relator.
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long, default_value_t = SearchCaps::DEFAULT_MAX_STATES)]
    pub max_states: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct DehnArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1)]
    pub rho: u64,
    #[arg(long, default_value_t = 8)]
    pub max_area: usize,
    #[arg(long, default_value_t = 200_000)]
    pub max_loops: usize,
    /// Extra intermediate length allowed beyond the loop length.
    #[arg(long)]
    pub extra_len: Option<usize>,
    /// Comma-separated peripheral bounds; reports the value at `--n-max` for each.
    #[arg(long, value_delimiter = ',')]
    pub escalate: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CocycleArg {
    RelatorIndicator,
    Zero,
    Coboundary,
}

#[derive(Debug, Args, Serialize)]
pub struct WindowLpArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',', required = true)]
    pub radii: Vec<usize>,
    #[arg(long, value_enum, default_value_t = CocycleArg::RelatorIndicator)]
    pub cocycle: CocycleArg,
    /// Window family: "strip" uses the document's window section, "ball" uses Cayley balls.
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long)]
    pub rho: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct FlareArgs {
    #[command(flatten)]
    pub common: Common,
    /// Action document: {"basis": n, "automorphisms": [...]}.
    #[arg(long)]
    pub action: PathBuf,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: u64,
    /// Radius of the exhaustive sample ball.
    #[arg(long, default_value_t = 4)]
    pub radius: usize,
    #[arg(long, default_value_t = 1)]
    pub rho: u64,
    /// Use this many random samples instead of the ball.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Check corridor separation at all base points within this F_n radius instead of the flare at 1.
    #[arg(long)]
    pub w_radius: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct CorridorArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub action: PathBuf,
    #[arg(long)]
    pub word: String,
    #[arg(long)]
    pub radius: usize,
    /// Pairing endpoints as signed basis letters, e.g. "-1" and "1,1".
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub pair_u: Option<Vec<i32>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub pair_v: Option<Vec<i32>>,
    /// Report the sides check with this constant.
    #[arg(long)]
    pub sides: Option<f64>,
}

/// A rendered artifact and where it goes.
pub struct Artifact {
    pub text: String,
    pub output: Option<PathBuf>,
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load(common: &Common) -> Result<(Document, Group)> {
    let doc = parse_document(&read(&common.input)?)?;
    let g = Group::from_document(&doc)?;
    Ok((doc, g))
}

fn envelope(command: &str, common: &Common, config: Value, result: Value) -> String {
    let v = json!({
        "tool": "relhyp",
        "version": crate::VERSION,
        "command": command,
        "seed": common.seed,
        "config": config,
        "result": result,
    });
    serde_json::to_string_pretty(&v).expect("artifacts serialize") + "\n"
}

fn csv_header(command: &str, common: &Common, config: &Value) -> String {
    format!("# relhyp {} {command} seed={} config={}\n", crate::VERSION, common.seed, config)
}

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

fn echo<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn literal(p: &RelativePresentation, text: &str) -> Result<Word> {
    parse_loop_literal(p, text)
}

pub fn run(cli: Cli) -> Result<Artifact> {
    let (text, output) = match &cli.command {
        Command::Parse(a) => (parse(a)?, a.common.output.clone()),
        Command::Ball(a) => (ball(a)?, a.common.output.clone()),
        Command::Length(a) => (length(a)?, a.common.output.clone()),
        Command::Area(a) => (area(a)?, a.common.output.clone()),
        Command::DehnProfile(a) => (dehn(a)?, a.common.output.clone()),
        Command::WindowLp(a) => (window_lp(a)?, a.common.output.clone()),
        Command::Flare(a) => (flare(a)?, a.common.output.clone()),
        Command::Corridor(a) => (corridor(a)?, a.common.output.clone()),
    };
    Ok(Artifact { text, output })
}

fn parse(a: &ParseArgs) -> Result<String> {
    if a.common.format == Some(Format::Csv) {
        return Err(Error::Parse("the parse command only produces JSON".into()));
    }
    let (doc, g) = load(&a.common)?;
    let p = g.presentation();
    let canonical: Value = serde_json::from_str(&doc.to_json()).expect("canonical JSON parses");
    let result = json!({
        "valid": true,
        "oracle": g.spec().kind_name(),
        "x_symbols": p.x_symbols().len(),
        "models": p.models().len(),
        "relators": p.relators().iter().map(|r| p.display_word(r)).collect::<Vec<_>>(),
        "document": canonical,
    });
    Ok(envelope("parse", &a.common, echo(a), result))
}

fn ball(a: &BallArgs) -> Result<String> {
    let (_, g) = load(&a.common)?;
    let p = g.presentation();
    let b = truncated_ball_with_budget(&g, a.radius, a.rho, a.budget)?;
    match a.common.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = csv_header("ball", &a.common, &echo(a));
            s.push_str("index,distance,word\n");
            for (i, (w, d)) in b.vertices.iter().zip(&b.distance).enumerate() {
                writeln!(s, "{i},{d},\"{}\"", p.display_word(w)).unwrap();
            }
            Ok(s)
        }
        Format::Json => {
            let mut spheres = vec![0usize; a.radius + 1];
            for &d in &b.distance {
                spheres[d] += 1;
            }
            let result = json!({
                "vertices": b.len(),
                "edges": b.edges.len(),
                "sphere_sizes": spheres,
                "words": b.vertices.iter().map(|w| p.display_word(w)).collect::<Vec<_>>(),
            });
            Ok(envelope("ball", &a.common, echo(a), result))
        }
    }
}

fn length(a: &LengthArgs) -> Result<String> {
    let (_, g) = load(&a.common)?;
    let p = g.presentation();
    let w = literal(p, &a.word)?;
    let opts = LengthOptions { rho_schedule: a.rho_schedule.clone(), ..LengthOptions::default() };
    let m = measure(&g, &w, &opts)?;
    if a.common.format == Some(Format::Csv) {
        let mut s = csv_header("length", &a.common, &echo(a));
        s.push_str("word,lower,upper,exact,rho,witness\n");
        writeln!(
            s,
            "\"{}\",{},{},{},{},\"{}\"",
            p.display_word(&w),
            m.length.lower(),
            m.length.upper(),
            m.length.exact().is_some(),
            m.rho,
            p.display_word(&m.witness)
        )
        .unwrap();
        return Ok(s);
    }
    let result = json!({
        "length": m.length,
        "exact": m.length.exact().is_some(),
        "witness": p.display_word(&m.witness),
        "witness_letters": word_to_json(p, &m.witness),
        "rho": m.rho,
    });
    Ok(envelope("length", &a.common, echo(a), result))
}

fn area(a: &AreaArgs) -> Result<String> {
    let (_, g) = load(&a.common)?;
    let p = g.presentation();
    let w = literal(p, &a.loop_word)?;
    let max_len = a.max_len.unwrap_or(w.len() + 2 * p.max_relator_len().max(1));
    let caps = SearchCaps { max_area: a.max_area, max_len, max_states: a.max_states };
    let outcome = relative_area(p, Some(&g), &w, caps)?;
    if a.common.format == Some(Format::Csv) {
        let mut s = csv_header("area", &a.common, &echo(a));
        s.push_str("loop,area,exact,pruned,explored\n");
        let row = match &outcome {
            SearchOutcome::Found(c) => format!("{},true,{},", c.area, c.pruned),
            SearchOutcome::Unknown { explored, pruned, .. } => format!(",false,{pruned},{explored}"),
        };
        writeln!(s, "\"{}\",{row}", p.display_word(&w)).unwrap();
        return Ok(s);
    }
    let result = match outcome {
        SearchOutcome::Found(c) => json!({
            "area": c.area,
            "exact": true,
            "pruned": c.pruned,
            "trace": c.trace,
        }),
        SearchOutcome::Unknown { explored, pruned, budget_hit } => json!({
            "area": null,
            "exact": false,
            "pruned": pruned,
            "explored": explored,
            "budget_hit": budget_hit,
        }),
    };
    Ok(envelope("area", &a.common, echo(a), result))
}

fn dehn(a: &DehnArgs) -> Result<String> {
    let (_, g) = load(&a.common)?;
    let caps = ProfileCaps { max_area: a.max_area, extra_len: a.extra_len, max_loops: a.max_loops, seed: a.common.seed };
    let profile = dehn_profile(&g, a.n_max, a.rho, &caps)?;
    let escalation = if a.escalate.is_empty() { None } else { Some(rho_escalation(&g, a.n_max, &a.escalate, &caps)?) };
    match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = csv_header("dehn-profile", &a.common, &echo(a));
            s.push_str("rho,n,max_area,loop_count,exact,sampled\n");
            for e in &profile.entries {
                writeln!(s, "{},{},{},{},{},{}", profile.rho, e.n, e.max_area, e.loop_count, e.exact, e.sampled).unwrap();
            }
            if let Some(esc) = &escalation {
                for (rho, e) in &esc.rows {
                    writeln!(s, "{rho},{},{},{},{},{}", e.n, e.max_area, e.loop_count, e.exact, e.sampled).unwrap();
                }
                writeln!(s, "# escalation unbounded={}", esc.unbounded).unwrap();
            }
            Ok(s)
        }
        Format::Json => {
            let fit = linear_fit(&profile).ok();
            let result = json!({"profile": profile, "fit": fit, "escalation": escalation});
            Ok(envelope("dehn-profile", &a.common, echo(a), result))
        }
    }
}

fn window_family(doc: &Document, a: &WindowLpArgs) -> Result<WindowFamily> {
    let p = &doc.presentation;
    let section = doc.window.clone().unwrap_or(Value::Null);
    let kind = a
        .window
        .clone()
        .or_else(|| section.get("kind").and_then(Value::as_str).map(str::to_string))
        .unwrap_or_else(|| "ball".into());
    let rho = a.rho.or_else(|| section.get("rho").and_then(Value::as_u64)).unwrap_or(1);
    match kind.as_str() {
        "ball" => Ok(WindowFamily::Ball { rho }),
        "strip" => {
            let step = match section.get("step") {
                Some(Value::String(s)) => literal(p, s)?,
                Some(v) => crate::presentation::word_from_json(p, v)?,
                None => return Err(Error::Parse("strip windows need a \"step\" in the window section".into())),
            };
            Ok(WindowFamily::Strip { step, rho })
        }
        other => Err(Error::Parse(format!("unknown window family {other:?}"))),
    }
}

fn window_lp(a: &WindowLpArgs) -> Result<String> {
    let (doc, g) = load(&a.common)?;
    let family = window_family(&doc, a)?;
    let cocycle = match a.cocycle {
        CocycleArg::RelatorIndicator => CocycleFamily::RelatorIndicator,
        CocycleArg::Zero => CocycleFamily::Zero,
        CocycleArg::Coboundary => CocycleFamily::Coboundary { seed: a.common.seed },
    };
    let scan = growth_scan(&g, &family, &cocycle, &a.radii)?;
    match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = csv_header("window-lp", &a.common, &echo(a));
            s.push_str("radius,norm,interior_cells\n");
            for r in &scan.rows {
                let norm = r.norm.map_or_else(|| "infeasible".to_string(), f6);
                writeln!(s, "{},{norm},{}", r.radius, r.interior_cells).unwrap();
            }
            let verdict = serde_json::to_value(scan.verdict).expect("verdict serializes");
            writeln!(s, "# slope={} verdict={}", f6(scan.slope), verdict.as_str().unwrap_or_default()).unwrap();
            Ok(s)
        }
        Format::Json => Ok(envelope("window-lp", &a.common, echo(a), json!({"cocycle": cocycle.name(), "scan": scan}))),
    }
}

fn load_action(g: &Group, path: &PathBuf) -> Result<FreeAction> {
    FreeAction::from_str(g.presentation(), &read(path)?)
}

fn flare(a: &FlareArgs) -> Result<String> {
    let (_, g) = load(&a.common)?;
    let action = load_action(&g, &a.action)?;
    let sample = match a.samples {
        Some(k) => GSample::random(&g, k, 2 * a.radius, a.rho, a.common.seed)?,
        None => GSample::ball(&g, a.radius, a.rho)?,
    };
    let params = SeparationParams { lambda: a.lambda, n: a.n, m: a.m };
    let report = match a.w_radius {
        Some(r) => check_separated(&g, &action, &sample, params, r)?,
        None => check_uniform_flare(&g, &action, &sample, params)?,
    };
    if a.common.format == Some(Format::Csv) {
        let mut s = csv_header("flare", &a.common, &echo(a));
        writeln!(
            s,
            "# verdict={} tested={} indeterminate={}",
            serde_json::to_value(report.verdict).expect("verdict serializes").as_str().unwrap_or(""),
            report.tested,
            report.indeterminate
        )
        .unwrap();
        s.push_str("g,w,u,v,base_upper,at_u_upper,at_v_upper\n");
        for v in &report.violations {
            writeln!(
                s,
                "\"{}\",\"{}\",\"{}\",\"{}\",{},{},{}",
                v.g,
                v.w,
                v.u,
                v.v,
                v.base.upper(),
                v.at_u.upper(),
                v.at_v.upper()
            )
            .unwrap();
        }
        return Ok(s);
    }
    Ok(envelope("flare", &a.common, echo(a), serde_json::to_value(report).expect("report serializes")))
}

fn corridor(a: &CorridorArgs) -> Result<String> {
    let (_, g) = load(&a.common)?;
    let p = g.presentation();
    let action = load_action(&g, &a.action)?;
    let w = literal(p, &a.word)?;
    let c = build_corridor(&g, &action, &w, a.radius)?;
    match a.common.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = csv_header("corridor", &a.common, &echo(a));
            s.push_str("a,lower,upper,exact\n");
            for e in &c.entries {
                let l = e.length;
                writeln!(s, "\"{}\",{},{},{}", display_free(&e.a), l.lower(), l.upper(), l.exact().is_some()).unwrap();
            }
            Ok(s)
        }
        Format::Json => {
            let entries: Vec<Value> =
                c.entries.iter().map(|e| json!({"a": display_free(&e.a), "length": e.length})).collect();
            let pairing = match (&a.pair_u, &a.pair_v) {
                (Some(u), Some(v)) => Some(corridor_cocycle_pairing(&g, &action, &w, u, v)?),
                (None, None) => None,
                _ => return Err(Error::Parse("--pair-u and --pair-v go together".into())),
            };
            let sides = a.sides.map(|l| sides_report(&c, l));
            let result = json!({
                "g": p.display_word(&w),
                "radius": c.radius,
                "bounds_only_entries": c.has_bounds(),
                "entries": entries,
                "pairing": pairing,
                "sides": sides,
            });
            Ok(envelope("corridor", &a.common, echo(a), result))
        }
    }
}

/// Applies `RELHYP_THREADS` to the global thread pool, if set.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("RELHYP_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| Error::Parse(format!("RELHYP_THREADS={v:?} is not a number")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
    }
    Ok(())
}
