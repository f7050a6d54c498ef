//! The three subcommands: exhaustive search, verification of candidates and
//! timing runs.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use planar_cc::classify::{classify, CCRecord};
use planar_cc::exclusion::Ordering;
use planar_cc::search::{initial_domain, search, SearchOutput};
use planar_cc::verify::{verify_candidate, Verified, VerifyError, VerifyOptions};
use planar_cc::{Masses, SearchConfig};

use crate::candidates::Candidate;
use crate::fmt::fmt_g;
use crate::report::{cc_body, not_a_proof_banner, LineCounters, SearchReport, SEPARATOR};
use crate::solutions::{self, SolutionRecord};
use crate::svg::render_svg;
use crate::CliError;

/// Largest n searched without `--allow-large`.
pub const MAX_SEARCH_N: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Search,
    Verify,
    Bench,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputPaths {
    pub report: Option<PathBuf>,
    pub solutions: Option<PathBuf>,
    pub svg_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: Command,
    pub config: SearchConfig,
    pub masses: Masses,
    pub candidates: Option<Vec<Candidate>>,
    pub verify: VerifyOptions,
    pub outputs: OutputPaths,
    pub allow_large: bool,
}

impl RunManifest {
    pub fn search(n: usize) -> Result<Self, CliError> {
        Ok(Self {
            command: Command::Search,
            config: SearchConfig::new(n),
            masses: Masses::equal(n).map_err(|e| CliError::Manifest(e.to_string()))?,
            candidates: None,
            verify: VerifyOptions::default(),
            outputs: OutputPaths::default(),
            allow_large: false,
        })
    }

    pub fn verify(candidates: Vec<Candidate>) -> Self {
        Self {
            command: Command::Verify,
            config: SearchConfig::new(3),
            masses: Masses::equal(3).expect("n = 3 is valid"),
            candidates: Some(candidates),
            verify: VerifyOptions::default(),
            outputs: OutputPaths::default(),
            allow_large: false,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match self.command {
            Command::Search => {
                let n = self.config.n;
                if n < 3 {
                    return Err(CliError::Manifest("search needs at least 3 bodies".into()));
                }
                if n > MAX_SEARCH_N && !self.allow_large {
                    return Err(CliError::Manifest(format!(
                        "search for n = {n} is far beyond desk scale; pass --allow-large to run it anyway"
                    )));
                }
                if self.masses.n() != n {
                    return Err(CliError::Manifest("mass count differs from n".into()));
                }
                self.config.validate()?;
            }
            Command::Verify => {
                if self.candidates.as_ref().is_none_or(|c| c.is_empty()) {
                    return Err(CliError::Manifest("verify needs at least one candidate".into()));
                }
                if !(self.verify.delta > 0.0 && self.verify.delta <= self.verify.max_delta) {
                    return Err(CliError::Manifest("delta must be positive and at most the maximum".into()));
                }
            }
            Command::Bench => {}
        }
        Ok(())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
}

fn write_svgs(dir: &Path, items: &[(String, String)]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.to_path_buf(), source: e })?;
    for (name, svg) in items {
        write_file(&dir.join(name), svg)?;
    }
    Ok(())
}

pub struct SearchRun {
    pub output: SearchOutput,
    pub records: Vec<CCRecord>,
    pub report: String,
    pub elapsed: Duration,
}

impl SearchRun {
    pub fn is_proof(&self) -> bool {
        self.output.is_proof()
    }
}

/// Search, merge, classify and write the requested outputs.
pub fn cmd_search(m: &RunManifest) -> Result<SearchRun, CliError> {
    m.validate()?;
    let cfg = &m.config;
    let domain = initial_domain(cfg)?;
    let start = Instant::now();
    let output = search(&domain, cfg, &m.masses)?;
    let records = classify(&output.solutions, &m.masses);
    let elapsed = start.elapsed();
    let report = SearchReport {
        cfg,
        masses: &m.masses,
        domain: &domain,
        output: &output,
        records: &records,
        elapsed,
    }
    .render();
    if let Some(p) = &m.outputs.report {
        write_file(p, &report)?;
    }
    if let Some(p) = &m.outputs.solutions {
        let mut recs = Vec::new();
        for (class, r) in records.iter().enumerate() {
            for s in &r.members {
                recs.push(SolutionRecord {
                    class,
                    enclosure: s.reduced.clone(),
                    region: s.region.clone(),
                });
            }
        }
        write_file(p, &solutions::save(&recs))?;
    }
    if let Some(dir) = &m.outputs.svg_dir {
        let items: Vec<(String, String)> = records
            .iter()
            .enumerate()
            .map(|(k, r)| {
                (
                    format!("cc{}-{k}.svg", cfg.n),
                    render_svg(&r.representative.full.full(&m.masses), &r.findings),
                )
            })
            .collect();
        write_svgs(dir, &items)?;
    }
    Ok(SearchRun {
        output,
        records,
        report,
        elapsed,
    })
}

pub struct VerifyRun {
    pub results: Vec<Result<Verified, VerifyError>>,
    pub report: String,
    pub elapsed: Duration,
}

impl VerifyRun {
    pub fn all_verified(&self) -> bool {
        self.results.iter().all(Result::is_ok)
    }
}

/// Certify each candidate independently; failures are reported and the run
/// continues.
pub fn cmd_verify(m: &RunManifest) -> Result<VerifyRun, CliError> {
    m.validate()?;
    let candidates = m.candidates.as_deref().unwrap_or_default();
    let start = Instant::now();
    let mut results = Vec::with_capacity(candidates.len());
    for c in candidates {
        let r = match Masses::equal(c.points.len()) {
            Ok(masses) => verify_candidate(&c.points, &masses, &m.verify),
            Err(_) => Err(VerifyError::WrongBodyCount {
                expected: 3,
                got: c.points.len(),
            }),
        };
        results.push(r);
    }
    let elapsed = start.elapsed();

    let mut out = String::new();
    let _ = writeln!(out, "Verification of candidate central configurations");
    let _ = writeln!(
        out,
        "delta = {}, maximal delta = {}\n",
        fmt_g(m.verify.delta, 10),
        fmt_g(m.verify.max_delta, 10)
    );
    let mut counters = LineCounters::default();
    for (k, (c, r)) in candidates.iter().zip(&results).enumerate() {
        let _ = writeln!(out, "{SEPARATOR}\ncandidate {k}");
        if let Some(l) = &c.label {
            let _ = writeln!(out, "label: {l}");
        }
        let _ = writeln!(out, "Number of bodies = {}", c.points.len());
        match r {
            Ok(v) => {
                let _ = writeln!(
                    out,
                    "unique zero certified in a box of half-width {}",
                    fmt_g(v.delta, 10)
                );
                let order: Vec<String> = v.order.iter().map(|i| i.to_string()).collect();
                let _ = writeln!(out, "candidate bodies in solution order: {}", order.join(", "));
                cc_body(&mut out, &v.solution, &v.masses, &v.findings, v.collinear, &mut counters);
            }
            Err(e) => {
                let _ = writeln!(out, "FAILED: {e}");
            }
        }
    }
    let ok = results.iter().filter(|r| r.is_ok()).count();
    let _ = writeln!(out, "\nNumber of verified candidates = {ok} of {}", results.len());
    let _ = writeln!(out, "Program computed {} minutes", fmt_g(elapsed.as_secs_f64() / 60.0, 5));

    if let Some(p) = &m.outputs.report {
        write_file(p, &out)?;
    }
    if let Some(p) = &m.outputs.solutions {
        let recs: Vec<SolutionRecord> = results
            .iter()
            .enumerate()
            .filter_map(|(k, r)| r.as_ref().ok().map(|v| (k, v)))
            .map(|(k, v)| SolutionRecord {
                class: k,
                enclosure: v.solution.reduced.clone(),
                region: v.solution.region.clone(),
            })
            .collect();
        write_file(p, &solutions::save(&recs))?;
    }
    if let Some(dir) = &m.outputs.svg_dir {
        let items: Vec<(String, String)> = results
            .iter()
            .enumerate()
            .filter_map(|(k, r)| r.as_ref().ok().map(|v| (k, v)))
            .map(|(k, v)| {
                (
                    format!("candidate{k}.svg"),
                    render_svg(&v.solution.full.full(&v.masses), &v.findings),
                )
            })
            .collect();
        write_svgs(dir, &items)?;
    }
    Ok(VerifyRun {
        results,
        report: out,
        elapsed,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchGrid {
    pub ns: Vec<usize>,
    pub biases: Vec<f64>,
    pub orderings: Vec<Ordering>,
    pub eps: f64,
    pub overlap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub bias: f64,
    pub ordering: Ordering,
    pub seconds: f64,
    pub stats: planar_cc::SearchStats,
    pub distinct: usize,
}

pub const BENCH_HEADER: [&str; 17] = [
    "n",
    "bias",
    "ordering",
    "seconds",
    "calls",
    "undecided",
    "zeros",
    "distinct",
    "apriori",
    "u_eq_i",
    "cluster",
    "distance",
    "check_zero",
    "krawczyk_failed",
    "krawczyk_unique",
    "krawczyk_no_zero",
    "threads",
];

fn ordering_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Increasing => "increasing",
        Ordering::Decreasing => "decreasing",
    }
}

/// Run the search over the product grid and write one CSV row per run.
pub fn cmd_bench<W: Write>(grid: &BenchGrid, sink: W) -> Result<Vec<BenchRow>, CliError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(BENCH_HEADER)?;
    let mut rows = Vec::new();
    for &n in &grid.ns {
        for &bias in &grid.biases {
            for &ordering in &grid.orderings {
                let mut cfg = SearchConfig::new(n);
                cfg.bias = bias;
                cfg.eps = grid.eps;
                cfg.overlap = grid.overlap;
                cfg.ordering = ordering;
                let masses = Masses::equal(n).map_err(|e| CliError::Manifest(e.to_string()))?;
                let start = Instant::now();
                let out = search(&initial_domain(&cfg)?, &cfg, &masses)?;
                let distinct = classify(&out.solutions, &masses).len();
                let seconds = start.elapsed().as_secs_f64();
                let s = &out.stats;
                w.write_record([
                    n.to_string(),
                    bias.to_string(),
                    ordering_name(ordering).to_string(),
                    format!("{seconds:.6}"),
                    s.calls.to_string(),
                    s.undecided.to_string(),
                    s.zeros_found.to_string(),
                    distinct.to_string(),
                    s.apriori.to_string(),
                    s.u_eq_i.to_string(),
                    s.cluster.to_string(),
                    s.distance.to_string(),
                    s.check_zero.to_string(),
                    s.krawczyk_failed.to_string(),
                    s.krawczyk_unique.to_string(),
                    s.krawczyk_no_zero.to_string(),
                    rayon::current_num_threads().to_string(),
                ])?;
                rows.push(BenchRow {
                    n,
                    bias,
                    ordering,
                    seconds,
                    stats: out.stats,
                    distinct,
                });
            }
        }
    }
    w.flush().map_err(|e| CliError::Io { path: PathBuf::from("<bench output>"), source: e })?;
    Ok(rows)
}

/// Banner printed to stderr when a search did not finish as a proof.
pub fn search_banner(run: &SearchRun) -> Option<String> {
    (!run.is_proof()).then(|| not_a_proof_banner(run.output.undecided.len(), run.output.not_proven.len()))
}
