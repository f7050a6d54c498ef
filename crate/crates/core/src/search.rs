//! Branch and prune over reduced boxes.
//!
//! Each box is first run through the exclusion battery. Small enough boxes
//! are handed to the Krawczyk operator; whatever survives is bisected along
//! its longest edge into two children that overlap slightly, so that every
//! point of the parent is interior to some child.

use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::time::Instant;

use thiserror::Error;

use crate::bounds::{compute_bounds, BoundSet};
use crate::exclusion::{run_battery, ExclusionVerdict, Ordering, TestName};
use crate::interval::{Interval, IntervalVector};
use crate::krawczyk::{krawczyk_iterate, KrawczykOutcome, DEFAULT_MAX_ITER};
use crate::model::{scalars, ConfigurationBox, Masses, ModelError, ScalarEnclosures};
use crate::reduced::{gauge_validity, ReducedBox, ReducedSystem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("at least 3 bodies are required")]
    TooFewBodies,
    #[error("the search requires equal masses")]
    UnequalMasses,
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("zero overlap leaves boundary points uncovered; only allowed outside proof mode")]
    ZeroOverlap,
    #[error("cannot bisect a coordinate of zero width")]
    ZeroWidth,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub n: usize,
    /// Boxes narrower than this in every coordinate are not split further.
    pub eps: f64,
    /// Krawczyk is attempted once every coordinate is at most this wide.
    pub bias: f64,
    /// Relative bisection margin.
    pub overlap: f64,
    pub ordering: Ordering,
    /// Subtrees above this depth run as parallel tasks.
    pub parallel_depth: usize,
    /// Proof mode; refuses settings that break coverage.
    pub rigorous: bool,
    pub max_krawczyk_iter: usize,
    /// Print progress to stderr.
    pub progress: bool,
}

impl SearchConfig {
    pub fn new(n: usize) -> Self {
        let threads = rayon::current_num_threads().max(1);
        Self {
            n,
            eps: 1e-5,
            bias: 1e-2,
            overlap: 1e-3,
            ordering: Ordering::Decreasing,
            parallel_depth: (4 * threads).next_power_of_two().trailing_zeros() as usize,
            rigorous: true,
            max_krawczyk_iter: DEFAULT_MAX_ITER,
            progress: false,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.n < 3 {
            return Err(SearchError::TooFewBodies);
        }
        if !(self.eps > 0.0) {
            return Err(SearchError::InvalidConfig("eps must be positive"));
        }
        if !(self.bias > self.eps) {
            return Err(SearchError::InvalidConfig("bias must exceed eps"));
        }
        if !(0.0..0.5).contains(&self.overlap) {
            return Err(SearchError::InvalidConfig("overlap must lie in [0, 0.5)"));
        }
        if self.rigorous && self.overlap == 0.0 {
            return Err(SearchError::ZeroOverlap);
        }
        Ok(())
    }
}

/// Summable counters; exclusion counters count boxes discarded by each test.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub calls: u64,
    pub undecided: u64,
    pub zeros_found: u64,
    pub apriori: u64,
    pub u_eq_i: u64,
    pub cluster: u64,
    pub distance: u64,
    pub check_zero: u64,
    pub krawczyk_failed: u64,
    pub krawczyk_unique: u64,
    pub krawczyk_no_zero: u64,
}

impl SearchStats {
    pub fn merge(&mut self, o: &SearchStats) {
        self.calls += o.calls;
        self.undecided += o.undecided;
        self.zeros_found += o.zeros_found;
        self.apriori += o.apriori;
        self.u_eq_i += o.u_eq_i;
        self.cluster += o.cluster;
        self.distance += o.distance;
        self.check_zero += o.check_zero;
        self.krawczyk_failed += o.krawczyk_failed;
        self.krawczyk_unique += o.krawczyk_unique;
        self.krawczyk_no_zero += o.krawczyk_no_zero;
    }

    fn count(&mut self, t: TestName) {
        match t {
            TestName::AprioriBounds => self.apriori += 1,
            TestName::UEqI => self.u_eq_i += 1,
            TestName::ClusterTest => self.cluster += 1,
            TestName::DistanceTest => self.distance += 1,
            TestName::CheckZero => self.check_zero += 1,
        }
    }

    pub fn excluded_by(&self, t: TestName) -> u64 {
        match t {
            TestName::AprioriBounds => self.apriori,
            TestName::UEqI => self.u_eq_i,
            TestName::ClusterTest => self.cluster,
            TestName::DistanceTest => self.distance,
            TestName::CheckZero => self.check_zero,
        }
    }
}

/// A certified zero of the reduced system.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionBox {
    /// Tight enclosure of the zero.
    pub reduced: ReducedBox,
    /// Box in which the zero is known to be the only one.
    pub region: ReducedBox,
    pub full: ConfigurationBox,
    pub scalars: ScalarEnclosures,
}

impl SolutionBox {
    pub fn new(enclosure: ReducedBox, region: ReducedBox, masses: &Masses) -> Result<Self, ModelError> {
        let full = enclosure.to_config();
        let sc = scalars(&full.full(masses), masses)?;
        Ok(Self {
            reduced: enclosure,
            region,
            full,
            scalars: sc,
        })
    }

    pub fn n(&self) -> usize {
        self.reduced.n()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchOutput {
    pub solutions: Vec<SolutionBox>,
    /// Certified zeros of the reduced system that fail the gauge check.
    pub not_proven: Vec<SolutionBox>,
    pub undecided: Vec<ReducedBox>,
    pub stats: SearchStats,
}

impl SearchOutput {
    fn merge(&mut self, o: SearchOutput) {
        self.solutions.extend(o.solutions);
        self.not_proven.extend(o.not_proven);
        self.undecided.extend(o.undecided);
        self.stats.merge(&o.stats);
    }

    pub fn is_proof(&self) -> bool {
        self.undecided.is_empty() && self.not_proven.is_empty()
    }
}

/// The normalized search domain, each bound padded outward by
/// `1e-3 (n - 1)`.
pub fn initial_domain(cfg: &SearchConfig) -> Result<ReducedBox, SearchError> {
    let n = cfg.n;
    if n < 3 {
        return Err(SearchError::TooFewBodies);
    }
    let l = (n - 1) as f64;
    let pad = 1e-3 * l;
    let padded = |lo: f64, hi: f64| Interval::new(lo, hi).inflate(pad);
    let mut coords = Vec::with_capacity(2 * n - 3);
    for i in 0..n - 2 {
        let (x, y) = match i {
            0 => (padded(-l, 0.0), padded(0.0, l)),
            1 => (padded(-l, l), padded(-l, 0.0)),
            _ => (padded(-l, l), padded(-l, l)),
        };
        coords.push(x);
        coords.push(y);
    }
    coords.push(padded(0.5, l));
    Ok(ReducedBox::new(IntervalVector(coords)))
}

/// Split coordinate `coord` at its midpoint; each child extends `overlap`
/// times the width past the midpoint.
pub fn bisect_with_overlap(
    b: &ReducedBox,
    coord: usize,
    overlap: f64,
    rigorous: bool,
) -> Result<(ReducedBox, ReducedBox), SearchError> {
    if rigorous && overlap <= 0.0 {
        return Err(SearchError::ZeroOverlap);
    }
    let iv = b.coords[coord];
    let w = iv.hi() - iv.lo();
    if !(w > 0.0) {
        return Err(SearchError::ZeroWidth);
    }
    let mid = iv.mid();
    let margin = w * overlap;
    let left_hi = (mid + margin).min(iv.hi());
    let right_lo = (mid - margin).max(iv.lo());
    let mut left = b.clone();
    let mut right = b.clone();
    left.coords[coord] = Interval::new(iv.lo(), left_hi);
    right.coords[coord] = Interval::new(right_lo, iv.hi());
    Ok((left, right))
}

/// Longest coordinate; ties go to the lowest index.
pub fn longest_edge(b: &ReducedBox) -> usize {
    let mut best = 0;
    let mut best_w = f64::NEG_INFINITY;
    for (i, iv) in b.coords.0.iter().enumerate() {
        let w = iv.width();
        if w > best_w {
            best = i;
            best_w = w;
        }
    }
    best
}

struct Context<'a> {
    cfg: &'a SearchConfig,
    masses: &'a Masses,
    bounds: BoundSet,
    system: ReducedSystem,
    calls: AtomicU64,
    start: Instant,
}

/// Find every zero of the reduced system in `root`.
pub fn search(root: &ReducedBox, cfg: &SearchConfig, masses: &Masses) -> Result<SearchOutput, SearchError> {
    cfg.validate()?;
    if masses.n() != cfg.n || root.n() != cfg.n {
        return Err(SearchError::InvalidConfig("body count mismatch"));
    }
    if !masses.all_equal() {
        return Err(SearchError::UnequalMasses);
    }
    let ctx = Context {
        cfg,
        masses,
        bounds: compute_bounds(cfg.n, masses),
        system: ReducedSystem::new(masses.clone()),
        calls: AtomicU64::new(0),
        start: Instant::now(),
    };
    Ok(search_box(&ctx, root.clone(), 0))
}

fn search_box(ctx: &Context<'_>, mut b: ReducedBox, depth: usize) -> SearchOutput {
    let mut out = SearchOutput::default();
    out.stats.calls = 1;
    if ctx.cfg.progress {
        let c = ctx.calls.fetch_add(1, AtomicOrdering::Relaxed) + 1;
        if c % (1 << 20) == 0 {
            eprintln!(
                "[search] {} boxes, {:.0} boxes/s, depth {}",
                c,
                c as f64 / ctx.start.elapsed().as_secs_f64().max(1e-9),
                depth
            );
        }
    }

    match run_battery(&b.to_config(), ctx.masses, &ctx.bounds, Some(ctx.cfg.ordering)) {
        ExclusionVerdict::Excluded(t) => {
            out.stats.count(t);
            return out;
        }
        ExclusionVerdict::Refined(c) => b = ReducedBox::from_config(&c),
        ExclusionVerdict::Unknown => {}
    }

    if b.max_width() <= ctx.cfg.bias {
        match krawczyk_iterate(&ctx.system, &b.coords, ctx.cfg.max_krawczyk_iter) {
            KrawczykOutcome::UniqueZero { enclosure, region } => {
                out.stats.krawczyk_unique += 1;
                out.stats.zeros_found += 1;
                let enclosure = ReducedBox::new(enclosure);
                let region = ReducedBox::new(region);
                match SolutionBox::new(enclosure, region.clone(), ctx.masses) {
                    Ok(s) if gauge_validity(&s.full, ctx.masses) => out.solutions.push(s),
                    Ok(s) => out.not_proven.push(s),
                    Err(_) => out.undecided.push(region),
                }
                return out;
            }
            KrawczykOutcome::NoZeroInSet => {
                out.stats.krawczyk_no_zero += 1;
                return out;
            }
            KrawczykOutcome::Failed(refined) => {
                out.stats.krawczyk_failed += 1;
                b = ReducedBox::new(refined);
            }
        }
    }

    if b.max_width() < ctx.cfg.eps {
        out.stats.undecided += 1;
        out.undecided.push(b);
        return out;
    }

    let coord = longest_edge(&b);
    let (left, right) = match bisect_with_overlap(&b, coord, ctx.cfg.overlap, ctx.cfg.rigorous) {
        Ok(children) => children,
        Err(_) => {
            out.stats.undecided += 1;
            out.undecided.push(b);
            return out;
        }
    };
    let (l, r) = if depth < ctx.cfg.parallel_depth {
        rayon::join(
            || search_box(ctx, left, depth + 1),
            || search_box(ctx, right, depth + 1),
        )
    } else {
        (search_box(ctx, left, depth + 1), search_box(ctx, right, depth + 1))
    };
    out.merge(l);
    out.merge(r);
    out
}
