//! Command-line front end: `classify`, `search`, `verify`, `reproduce`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::enumeration::{run_search, RunManifest, SearchError, SearchOptions, SearchResult, SearchTask};
use crate::fixtures::{curves, orbit_patterns, CurveFile, PatternEntry};
use crate::orbit_classification::{canonical_key, classify, locate_paper_representative, parse_pattern, OrbitTable};
use crate::point_counting::{weil_polynomial, WeilPoly};
use crate::polynomials::TernaryForm;
use crate::singularity::{
    multiplicity, non_special_check_with, point_report, singular_locus_seeded, Case, NonSpecialFailure, SingularConfig,
    SingularPointReport, DEFAULT_SEED,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERRUPTED: i32 = 3;

/// Default checkpoint directory for `search`.
pub const CHECKPOINT_ENV: &str = "GENUS5_CHECKPOINT_DIR";

static STOP: AtomicBool = AtomicBool::new(false);

/// Ctrl-C requests a clean stop; searches then exit with code 3.
pub fn install_interrupt_handler() {
    let _ = ctrlc::set_handler(|| STOP.store(true, Ordering::SeqCst));
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Parser)]
#[command(name = "genus5", version, about = "Non-special genus-5 curves over GF(3) via plane sextic models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify singular configurations up to PGL3(F3)
    Classify(ClassifyArgs),
    /// Enumerate sextics with a given configuration and many GF(9)-points
    Search(SearchArgs),
    /// Check one sextic and compute its Weil polynomial
    Verify(VerifyArgs),
    /// Re-verify the shipped curve fixtures
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Degree pattern such as 1,2,2 or 1,1,1,2-indep; all listed patterns if omitted
    #[arg(long)]
    pub pattern: Option<String>,
    #[arg(long)]
    pub case: Option<Case>,
    /// Compare against the shipped orbit counts; exit 1 on any difference
    #[arg(long)]
    pub expect_paper: bool,
    #[arg(long)]
    pub json: bool,
    /// Write one JSON table per pattern into this directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Pattern selector such as 1,1,1,2-indep
    #[arg(long)]
    pub pattern: Option<String>,
    /// Listed representative (1-based)
    #[arg(long, default_value_t = 1)]
    pub orbit: usize,
    #[arg(long)]
    pub case: Option<Case>,
    /// Explicit configuration, e.g. "(1:0:0) (0:1:0) (0:0:1) (1:ζ2^2:ζ2^2)"
    #[arg(long, conflicts_with = "pattern")]
    pub config: Option<String>,
    /// Point-count threshold on N1 = #C(F9)
    #[arg(long = "N", default_value_t = 32)]
    pub n: i64,
    /// Candidate index range START..END
    #[arg(long)]
    pub range: Option<String>,
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
    #[arg(long, env = CHECKPOINT_ENV)]
    pub checkpoint_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 1 << 15)]
    pub chunk_size: u64,
    /// Check that every survivor has a listed Weil polynomial
    #[arg(long)]
    pub expect_paper: bool,
    /// Print the dimension and candidate count only
    #[arg(long)]
    pub dry_run: bool,
    /// Discard an existing checkpoint directory
    #[arg(long)]
    pub force: bool,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Skip the Weil polynomial of survivors
    #[arg(long)]
    pub no_weil: bool,
    /// Search every listed configuration of both cases
    #[arg(long, conflicts_with_all = ["pattern", "config", "range"])]
    pub full: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// The sextic, e.g. "x^2y^4 + x^4yz + 2y^4z^2 + x^2z^4 + 2y^2z^4"
    pub sextic: Option<String>,
    /// Read the sextic from a file
    #[arg(long, conflicts_with = "sextic")]
    pub file: Option<PathBuf>,
    /// Verify a shipped fixture curve by name
    #[arg(long, conflicts_with_all = ["sextic", "file"])]
    pub fixture: Option<String>,
    /// Expected singular configuration; taken from the singular locus if omitted
    #[arg(long)]
    pub config: Option<String>,
    #[arg(long)]
    pub case: Option<Case>,
    #[arg(long)]
    pub expect_n1: Option<i64>,
    #[arg(long)]
    pub expect_weil: Option<String>,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let res = match cli.command {
        Command::Classify(a) => cmd_classify(&a, out),
        Command::Search(a) => cmd_search(&a, out, &STOP),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Reproduce(a) => cmd_reproduce(&a, out),
    };
    match res {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            eprintln!("genus5: {msg}");
            code
        }
    }
}

#[derive(Debug)]
pub struct Failure(pub i32, pub String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn io(e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_MISMATCH, e.to_string())
}

/// `1,1,1,2-indep` -> (`1,1,1,2`, Some(`indep`)).
fn split_selector(sel: &str) -> (String, Option<String>) {
    match sel.split_once('-') {
        Some((t, s)) => (t.replace(' ', ""), Some(s.to_string())),
        None => (sel.replace(' ', ""), None),
    }
}

fn pattern_entry(case: Option<Case>, selector: &str) -> Result<&'static PatternEntry, Failure> {
    let cases = match case {
        Some(c) => vec![c],
        None => vec![Case::I, Case::II],
    };
    cases
        .into_iter()
        .find_map(|c| orbit_patterns().find(c, selector))
        .ok_or_else(|| usage(format!("no listed configuration for pattern {selector}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyRow {
    pub case: Case,
    pub selector: String,
    pub configs: usize,
    pub orbits: usize,
    pub expected: Option<usize>,
    /// Whether the listed representatives land in pairwise distinct orbits.
    pub listed_distinct: Option<bool>,
}

impl ClassifyRow {
    pub fn matches(&self) -> bool {
        self.expected == Some(self.orbits) && self.listed_distinct == Some(true)
    }
}

/// Rows of the summary table for one orbit table; one per subclass when the
/// pattern has subclasses.
pub fn classify_rows(table: &OrbitTable) -> Vec<ClassifyRow> {
    let subs: BTreeSet<Option<String>> = table.orbits.iter().map(|o| o.subclass.clone()).collect();
    subs.into_iter()
        .map(|sub| {
            let selector = match &sub {
                Some(s) => format!("{}-{s}", table.pattern),
                None => table.pattern.clone(),
            };
            let entry = orbit_patterns().find(table.case, &selector);
            let listed_distinct = entry.map(|e| {
                let idx: Vec<Option<usize>> = (1..=e.reps.len())
                    .map(|i| e.representative(i).and_then(|r| locate_paper_representative(&r, table).ok()))
                    .collect();
                let set: BTreeSet<_> = idx.iter().collect();
                idx.iter().all(Option::is_some) && set.len() == idx.len()
            });
            ClassifyRow {
                case: table.case,
                selector,
                configs: table.orbits.iter().filter(|o| o.subclass == sub).map(|o| o.orbit_size).sum(),
                orbits: table.count(sub.as_deref()),
                expected: entry.map(|e| e.orbits),
                listed_distinct,
            }
        })
        .collect()
}

pub fn cmd_classify(a: &ClassifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut jobs: Vec<(Case, String)> = Vec::new();
    let mut only: Option<String> = None;
    if let Some(sel) = &a.pattern {
        let (tag, sub) = split_selector(sel);
        parse_pattern(&tag).map_err(|e| usage(e.to_string()))?;
        jobs.push((a.case.unwrap_or(Case::I), tag.clone()));
        only = sub.map(|s| format!("{tag}-{s}"));
    } else {
        for p in &orbit_patterns().patterns {
            if a.case.is_none_or(|c| c == p.case) && !jobs.contains(&(p.case, p.tag.clone())) {
                jobs.push((p.case, p.tag.clone()));
            }
        }
    }
    let results: Vec<Mutex<Option<Result<OrbitTable, String>>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..a.workers.clamp(1, jobs.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let (case, tag) = &jobs[i];
                let r = parse_pattern(tag).and_then(|p| classify(*case, &p)).map_err(|e| e.to_string());
                *results[i].lock().unwrap() = Some(r);
            });
        }
    });
    let mut tables = Vec::new();
    for r in results {
        tables.push(r.into_inner().unwrap().unwrap().map_err(usage)?);
    }
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir).map_err(io)?;
        for t in &tables {
            let name = format!("case-{}_{}.json", t.case, t.pattern.replace(',', "-"));
            std::fs::write(dir.join(name), t.to_json()).map_err(io)?;
        }
    }
    let rows: Vec<ClassifyRow> = tables
        .iter()
        .flat_map(classify_rows)
        .filter(|r| only.as_ref().is_none_or(|s| &r.selector == s))
        .collect();
    let mismatch = a.expect_paper && rows.iter().any(|r| !r.matches());
    if a.json {
        let doc = serde_json::json!({ "rows": rows, "tables": tables, "expect_paper": a.expect_paper, "mismatch": mismatch });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).map_err(io)?;
    } else {
        writeln!(out, "{:<5} {:<16} {:>8} {:>7}  {}", "case", "pattern", "configs", "orbits", "expected").map_err(io)?;
        for r in &rows {
            let listed = match (r.expected, r.listed_distinct) {
                (Some(e), Some(d)) => {
                    let flag = if r.matches() { "ok" } else { "MISMATCH" };
                    format!("{e}{}  {flag}", if d { "" } else { ", listed reps not distinct" })
                }
                _ => "-".into(),
            };
            writeln!(out, "{:<5} {:<16} {:>8} {:>7}  {}", r.case.to_string(), r.selector, r.configs, r.orbits, listed)
                .map_err(io)?;
        }
    }
    Ok(if mismatch { EXIT_MISMATCH } else { EXIT_OK })
}

fn parse_range(text: &str, total: u64) -> Result<[u64; 2], Failure> {
    let (a, b) = text
        .split_once("..")
        .or_else(|| text.split_once(':'))
        .ok_or_else(|| usage(format!("range {text} is not START..END")))?;
    let parse = |s: &str, dflt: u64| -> Result<u64, Failure> {
        if s.trim().is_empty() {
            Ok(dflt)
        } else {
            s.trim().replace('_', "").parse().map_err(|_| usage(format!("bad range bound {s}")))
        }
    };
    let r = [parse(a, 0)?, parse(b, total)?];
    if r[0] > r[1] || r[1] > total {
        return Err(usage(format!("range {}..{} is outside 0..{total}", r[0], r[1])));
    }
    Ok(r)
}

/// One configuration to search, resolved from the command line.
struct Target {
    selector: String,
    orbit: Option<usize>,
    config: SingularConfig,
    b_values: Option<Vec<[u8; 3]>>,
}

fn resolve_target(a: &SearchArgs) -> Result<Target, Failure> {
    if let Some(text) = &a.config {
        let case = a.case.unwrap_or(if text.contains("x3") { Case::II } else { Case::I });
        let config = SingularConfig::parse(case, text, "").map_err(|e| usage(e.to_string()))?;
        return Ok(Target { selector: config.pattern_tag(), orbit: None, config, b_values: None });
    }
    let sel = a.pattern.as_deref().ok_or_else(|| usage("one of --pattern, --config or --full is required"))?;
    let entry = pattern_entry(a.case, sel)?;
    let config = entry
        .representative(a.orbit)
        .ok_or_else(|| usage(format!("pattern {sel} lists {} representatives", entry.reps.len())))?;
    Ok(Target { selector: entry.selector(), orbit: Some(a.orbit), config, b_values: entry.b_values.clone() })
}

fn theorem_classes() -> Vec<WeilPoly> {
    curves().weil_classes.iter().map(|w| WeilPoly::parse(w).expect("listed class parses")).collect()
}

/// Survivors whose Weil polynomial is not a listed class.
fn unlisted(result: &SearchResult) -> Vec<u64> {
    let classes = theorem_classes();
    result
        .records
        .iter()
        .filter(|r| match r.weil.as_deref().map(WeilPoly::parse) {
            Some(Ok(w)) => !classes.contains(&w),
            _ => true,
        })
        .map(|r| r.index)
        .collect()
}

fn search_error(e: SearchError) -> Failure {
    match e {
        SearchError::Interrupted { .. } => Failure(EXIT_INTERRUPTED, e.to_string()),
        SearchError::ManifestMismatch | SearchError::AlreadyComplete(_) | SearchError::Range { .. } => usage(e.to_string()),
        other => io(other),
    }
}

fn print_search(out: &mut dyn Write, label: &str, r: &SearchResult) -> std::io::Result<()> {
    let c = &r.summary.counters;
    writeln!(out, "{label}")?;
    writeln!(
        out,
        "  visited {}  rejected: multiplicity {}, point count {}, irreducibility {}, singular locus {}  survivors {}  [{:.1}s]",
        c.visited, c.multiplicity, c.point_count, c.irreducibility, c.singular_locus, c.survivors, r.summary.elapsed_secs
    )?;
    for rec in &r.records {
        let w = rec.weil_factored.as_deref().unwrap_or("-");
        writeln!(out, "  #{:<8} N1={}  {}\n            W = {}", rec.index, rec.n1, rec.sextic, w)?;
    }
    Ok(())
}

pub fn cmd_search(a: &SearchArgs, out: &mut dyn Write, stop: &AtomicBool) -> Result<i32, Failure> {
    if a.full {
        return search_full(a, out, stop);
    }
    let target = resolve_target(a)?;
    let mut task = SearchTask::new(target.config, a.n, target.b_values.as_deref()).map_err(io)?;
    task.seed = a.seed;
    task.with_weil = !a.no_weil;
    let range = match &a.range {
        Some(r) => parse_range(r, task.total())?,
        None => [0, task.total()],
    };
    let manifest = RunManifest::for_task(&task, &target.selector, target.orbit, range, a.chunk_size);
    if a.dry_run {
        if a.json {
            writeln!(out, "{}", serde_json::to_string_pretty(&manifest).unwrap()).map_err(io)?;
        } else {
            writeln!(out, "configuration {}", task.config.render()).map_err(io)?;
            writeln!(out, "d = {}", task.dimension()).map_err(io)?;
            writeln!(out, "candidates = {}", task.total()).map_err(io)?;
            writeln!(out, "range = {}..{} ({} candidates)", range[0], range[1], range[1] - range[0]).map_err(io)?;
        }
        return Ok(EXIT_OK);
    }
    let opts = SearchOptions {
        workers: a.workers,
        checkpoint_dir: a.checkpoint_dir.clone(),
        force: a.force,
        progress: !a.json,
        ..Default::default()
    };
    let result = run_search(&task, &manifest, &opts, stop).map_err(search_error)?;
    let bad = if a.expect_paper { unlisted(&result) } else { Vec::new() };
    if a.json {
        let doc = serde_json::json!({ "summary": result.summary, "survivors": result.records, "unlisted_weil": bad });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).map_err(io)?;
    } else {
        print_search(out, &task.config.render(), &result).map_err(io)?;
        if !bad.is_empty() {
            writeln!(out, "survivors with an unlisted Weil polynomial: {bad:?}").map_err(io)?;
        }
    }
    Ok(if bad.is_empty() { EXIT_OK } else { EXIT_MISMATCH })
}

/// Every listed configuration of both cases, one checkpoint subdirectory each.
fn search_full(a: &SearchArgs, out: &mut dyn Write, stop: &AtomicBool) -> Result<i32, Failure> {
    let mut seen = BTreeSet::new();
    let mut summaries = Vec::new();
    let mut classes: BTreeMap<String, usize> = BTreeMap::new();
    let mut bad = 0;
    for entry in &orbit_patterns().patterns {
        for i in 1..=entry.reps.len() {
            let config = entry.representative(i).expect("listed representative");
            if !seen.insert(canonical_key(&config)) {
                continue;
            }
            let mut task = SearchTask::new(config, a.n, entry.b_values.as_deref()).map_err(io)?;
            task.seed = a.seed;
            task.with_weil = !a.no_weil;
            let manifest = RunManifest::for_task(&task, &entry.selector(), Some(i), [0, task.total()], a.chunk_size);
            let label = format!("case {} {} #{i}", entry.case, entry.selector());
            if a.dry_run {
                writeln!(out, "{label:<28} d = {:>2}  candidates = {}", task.dimension(), task.total()).map_err(io)?;
                continue;
            }
            let dir = a.checkpoint_dir.as_ref().map(|d| d.join(format!("case-{}_{}_{i}", entry.case, entry.selector())));
            let opts = SearchOptions { workers: a.workers, checkpoint_dir: dir, force: a.force, progress: !a.json, ..Default::default() };
            let result = match run_search(&task, &manifest, &opts, stop) {
                Err(SearchError::AlreadyComplete(d)) => load_completed(&d).map_err(io)?,
                other => other.map_err(search_error)?,
            };
            for r in &result.records {
                *classes.entry(r.weil_factored.clone().unwrap_or_default()).or_default() += 1;
            }
            if a.expect_paper {
                bad += unlisted(&result).len();
            }
            if !a.json {
                print_search(out, &label, &result).map_err(io)?;
            }
            summaries.push(serde_json::json!({ "label": label, "summary": result.summary, "survivors": result.records }));
        }
    }
    if a.json {
        let doc = serde_json::json!({ "runs": summaries, "weil_classes": classes });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).map_err(io)?;
    } else if !a.dry_run {
        writeln!(out, "Weil polynomials among survivors:").map_err(io)?;
        for (w, n) in &classes {
            writeln!(out, "  {n:>6}  {w}").map_err(io)?;
        }
    }
    Ok(if bad == 0 { EXIT_OK } else { EXIT_MISMATCH })
}

fn load_completed(dir: &Path) -> Result<SearchResult, Box<dyn std::error::Error>> {
    let summary = serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json"))?)?;
    let records = std::fs::read_to_string(dir.join("results.jsonl"))?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect::<Result<_, _>>()?;
    Ok(SearchResult { summary, records })
}

/// Full verification report of one sextic.
#[derive(Clone, Debug, Serialize)]
pub struct CurveReport {
    pub sextic: String,
    pub case: Option<Case>,
    pub config: Option<String>,
    pub pattern: Option<String>,
    pub singular_points: Vec<SingularPointReport>,
    pub non_special: bool,
    pub failure: Option<String>,
    pub counts: Option<Vec<i64>>,
    pub weil: Option<String>,
    pub weil_factored: Option<String>,
    pub functional_equation: Option<bool>,
    pub mismatches: Vec<String>,
}

impl CurveReport {
    pub fn pass(&self) -> bool {
        self.non_special && self.mismatches.is_empty()
    }

    pub fn n1(&self) -> Option<i64> {
        self.counts.as_ref().map(|c| c[0])
    }

    fn render(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "sextic   {}", self.sextic)?;
        if let Some(c) = &self.config {
            writeln!(out, "config   case {} ({})  {c}", self.case.unwrap(), self.pattern.as_deref().unwrap_or(""))?;
        }
        for p in &self.singular_points {
            write!(out, "  {}  degree {}  multiplicity {}  cone {}", p.point, p.field_degree, p.multiplicity, p.tangent_cone)?;
            if let Some(d) = &p.discriminant {
                write!(out, "  Δ = {d}")?;
            }
            writeln!(out, "  resolved: {}", if p.resolved_in_one_blowup { "yes" } else { "no" })?;
        }
        match &self.failure {
            Some(f) => writeln!(out, "fail: {f}")?,
            None => {
                let counts = self.counts.as_ref().unwrap();
                writeln!(out, "N1..N5   {counts:?}")?;
                writeln!(out, "Weil     {}", self.weil.as_deref().unwrap_or(""))?;
                writeln!(out, "         = {}", self.weil_factored.as_deref().unwrap_or(""))?;
            }
        }
        for m in &self.mismatches {
            writeln!(out, "mismatch: {m}")?;
        }
        writeln!(out, "{}", if self.pass() { "PASS" } else { "FAIL" })
    }
}

/// Configuration read off the singular locus of `f`.
pub fn infer_config(f: &TernaryForm, seed: u64) -> Result<SingularConfig, NonSpecialFailure> {
    let locus = singular_locus_seeded(f, seed).map_err(NonSpecialFailure::Locus)?;
    if locus.is_empty() {
        return Err(NonSpecialFailure::NoSingularPoints);
    }
    let mut reps = Vec::new();
    for o in &locus.orbits {
        let p = o.representative.ok_or_else(|| {
            NonSpecialFailure::LocusMismatch(format!("singular orbit of degree {} outside the field tower", o.degree))
        })?;
        reps.push((p, multiplicity(f, &p)));
    }
    let case = if reps.iter().any(|&(_, m)| m == 3) { Case::II } else { Case::I };
    SingularConfig::from_orbits(case, &reps, "").map_err(NonSpecialFailure::Locus)
}

pub fn verify_curve(
    f: &TernaryForm,
    config: Option<&SingularConfig>,
    seed: u64,
    expect_n1: Option<i64>,
    expect_weil: Option<&WeilPoly>,
) -> CurveReport {
    let mut report = CurveReport {
        sextic: f.render(),
        case: None,
        config: None,
        pattern: None,
        singular_points: Vec::new(),
        non_special: false,
        failure: None,
        counts: None,
        weil: None,
        weil_factored: None,
        functional_equation: None,
        mismatches: Vec::new(),
    };
    let config = match config {
        Some(c) => Ok(c.clone()),
        None => infer_config(f, seed),
    };
    let outcome = config.and_then(|cfg| {
        report.case = Some(cfg.case);
        report.config = Some(cfg.points_text());
        report.pattern = Some(cfg.pattern_tag());
        report.singular_points = cfg.orbit_representatives().iter().map(|cp| point_report(f, &cp.point)).collect();
        non_special_check_with(f, &cfg, true, seed).map(|_| cfg)
    });
    match outcome {
        Err(e) => report.failure = Some(e.to_string()),
        Ok(cfg) => match weil_polynomial(f, &cfg) {
            Err(e) => report.failure = Some(e.to_string()),
            Ok((cv, w)) => {
                report.non_special = true;
                report.functional_equation = Some(w.satisfies_functional_equation());
                report.weil = Some(w.expanded());
                report.weil_factored = Some(w.factored());
                if let Some(n) = expect_n1 {
                    if cv.n[0] != n {
                        report.mismatches.push(format!("N1 = {}, expected {n}", cv.n[0]));
                    }
                }
                if let Some(ew) = expect_weil {
                    if &w != ew {
                        report.mismatches.push(format!("Weil polynomial {}, expected {}", w.factored(), ew.factored()));
                    }
                }
                report.counts = Some(cv.n);
            }
        },
    }
    if !report.non_special {
        if expect_n1.is_some() || expect_weil.is_some() {
            report.mismatches.push("expectations not checked: the curve failed verification".into());
        }
    }
    report
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let (mut config_text, mut expect_n1, mut expect_weil, mut case) = (a.config.clone(), a.expect_n1, a.expect_weil.clone(), a.case);
    let text = if let Some(name) = &a.fixture {
        let fx = curves().curves.iter().find(|c| &c.name == name).ok_or_else(|| usage(format!("no fixture named {name}")))?;
        config_text = config_text.or(Some(fx.config.clone()));
        expect_n1 = expect_n1.or(Some(fx.n1));
        expect_weil = expect_weil.or(Some(fx.weil.clone()));
        case = case.or(Some(Case::I));
        fx.sextic.clone()
    } else if let Some(p) = &a.file {
        std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?
    } else {
        a.sextic.clone().ok_or_else(|| usage("give a sextic, --file or --fixture"))?
    };
    let f = TernaryForm::parse(text.trim(), 1).map_err(|e| usage(format!("cannot parse sextic: {e}")))?;
    let config = match &config_text {
        Some(t) => {
            let case = case.unwrap_or(if t.contains("x3") { Case::II } else { Case::I });
            Some(SingularConfig::parse(case, t, "").map_err(|e| usage(e.to_string()))?)
        }
        None => None,
    };
    let ew = match &expect_weil {
        Some(w) => Some(WeilPoly::parse(w).map_err(|e| usage(format!("cannot parse Weil polynomial: {e}")))?),
        None => None,
    };
    let report = verify_curve(&f, config.as_ref(), a.seed, expect_n1, ew.as_ref());
    if a.json {
        let doc = serde_json::json!({ "report": report, "pass": report.pass() });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).map_err(io)?;
    } else {
        report.render(out).map_err(io)?;
    }
    Ok(if report.pass() { EXIT_OK } else { EXIT_MISMATCH })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproduceRow {
    pub name: String,
    pub pattern: String,
    pub n1: Option<i64>,
    pub weil_factored: Option<String>,
    /// 1-based position of the Weil polynomial in the list of classes.
    pub class: Option<usize>,
    pub pass: bool,
    pub problems: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproduceReport {
    pub curves: Vec<ReproduceRow>,
    /// Class polynomial -> names of the curves realizing it.
    pub classes: Vec<(String, Vec<String>)>,
    pub all_classes_realized: bool,
    pub pass: bool,
}

/// Verifies every curve of `file` against its recorded N1 and Weil polynomial
/// and checks that exactly the listed classes occur.
pub fn reproduce(file: &CurveFile, seed: u64) -> ReproduceReport {
    let classes: Vec<WeilPoly> = file.weil_classes.iter().filter_map(|w| WeilPoly::parse(w).ok()).collect();
    let mut rows = Vec::new();
    for fx in &file.curves {
        let mut problems = Vec::new();
        let parsed = TernaryForm::parse(&fx.sextic, 1)
            .map_err(|e| e.to_string())
            .and_then(|f| SingularConfig::parse(Case::I, &fx.config, &fx.name).map(|c| (f, c)).map_err(|e| e.to_string()))
            .and_then(|fc| WeilPoly::parse(&fx.weil).map(|w| (fc, w)).map_err(|e| e.to_string()));
        let row = match parsed {
            Err(e) => {
                problems.push(format!("fixture {}: {e}", fx.name));
                ReproduceRow { name: fx.name.clone(), pattern: fx.pattern.clone(), n1: None, weil_factored: None, class: None, pass: false, problems }
            }
            Ok(((f, cfg), w)) => {
                let r = verify_curve(&f, Some(&cfg), seed, Some(fx.n1), Some(&w));
                if let Some(e) = &r.failure {
                    problems.push(format!("fixture {}: {e}", fx.name));
                }
                problems.extend(r.mismatches.iter().map(|m| format!("fixture {}: {m}", fx.name)));
                let class = r.weil.as_deref().and_then(|t| WeilPoly::parse(t).ok()).and_then(|w| classes.iter().position(|c| *c == w));
                if r.non_special && class.is_none() {
                    problems.push(format!("fixture {}: Weil polynomial is not a listed class", fx.name));
                }
                ReproduceRow {
                    name: fx.name.clone(),
                    pattern: fx.pattern.clone(),
                    n1: r.n1(),
                    weil_factored: r.weil_factored.clone(),
                    class: class.map(|c| c + 1),
                    pass: problems.is_empty(),
                    problems,
                }
            }
        };
        rows.push(row);
    }
    let by_class: Vec<(String, Vec<String>)> = classes
        .iter()
        .enumerate()
        .map(|(i, w)| (w.factored(), rows.iter().filter(|r| r.class == Some(i + 1)).map(|r| r.name.clone()).collect()))
        .collect();
    let all_classes_realized = classes.len() == file.weil_classes.len() && by_class.iter().all(|(_, v)| !v.is_empty());
    let pass = all_classes_realized && rows.iter().all(|r| r.pass);
    ReproduceReport { curves: rows, classes: by_class, all_classes_realized, pass }
}

pub fn cmd_reproduce(a: &ReproduceArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let report = reproduce(curves(), a.seed);
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report).unwrap()).map_err(io)?;
    } else {
        writeln!(out, "{:<28} {:<14} {:>3}  {:<5} weil", "curve", "pattern", "N1", "class").map_err(io)?;
        for r in &report.curves {
            let n1 = r.n1.map_or("-".into(), |n| n.to_string());
            let class = r.class.map_or("-".into(), |c| format!("({c})"));
            let w = r.weil_factored.as_deref().unwrap_or("-");
            writeln!(out, "{:<28} {:<14} {:>3}  {:<5} {w}", r.name, r.pattern, n1, class).map_err(io)?;
        }
        writeln!(out).map_err(io)?;
        for (i, (w, names)) in report.classes.iter().enumerate() {
            writeln!(out, "({}) {w}\n    {}", i + 1, if names.is_empty() { "-".into() } else { names.join(", ") }).map_err(io)?;
        }
        for r in &report.curves {
            for p in &r.problems {
                writeln!(out, "mismatch: {p}").map_err(io)?;
            }
        }
        let realized = report.classes.iter().filter(|(_, v)| !v.is_empty()).count();
        writeln!(out, "{} curves verified, {realized} distinct Weil polynomials: {}", report.curves.iter().filter(|r| r.pass).count(), if report.pass { "PASS" } else { "FAIL" })
            .map_err(io)?;
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_MISMATCH })
}
