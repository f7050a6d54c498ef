//! Text reports in the layout of the original enumeration program.

use std::fmt::Write;
use std::time::Duration;

use planar_cc::classify::{CCRecord, SymmetryFindings};
use planar_cc::model::derive_last_body;
use planar_cc::search::SearchOutput;
use planar_cc::{BodyBox, Masses, ReducedBox, SearchConfig, SolutionBox};

use crate::fmt::{fmt_g, fmt_interval};

pub const SEPARATOR: &str = "---------------------";

pub fn not_a_proof_banner(undecided: usize, not_proven: usize) -> String {
    format!(
        "*** NOT A PROOF: {undecided} undecided boxes, {not_proven} certified zeros outside the gauge; \
         the listing below may be incomplete ***"
    )
}

/// Running counters for the numbered symmetry lines.
#[derive(Debug, Default, Clone)]
pub struct LineCounters {
    collinear: usize,
    ox: usize,
    line: usize,
}

fn body_line(out: &mut String, i: usize, b: &BodyBox) {
    let _ = writeln!(out, "i: {i} X: {} Y: {}", fmt_interval(b.x), fmt_interval(b.y));
}

fn permutation_line(out: &mut String, p: &[usize]) {
    let items: Vec<String> = p.iter().map(|k| k.to_string()).collect();
    let _ = writeln!(out, "permutation: {},", items.join(", "));
}

/// Bodies, scalar invariants and symmetry lines of one configuration.
pub fn cc_body(
    out: &mut String,
    s: &SolutionBox,
    masses: &Masses,
    findings: &SymmetryFindings,
    collinear: bool,
    counters: &mut LineCounters,
) {
    for (i, b) in s.full.full(masses).iter().enumerate() {
        body_line(out, i, b);
    }
    let sc = &s.scalars;
    let _ = writeln!(out, "\nU = {}, I = {},", fmt_interval(sc.u), fmt_interval(sc.i));
    let _ = writeln!(out, "U*(I)^(1/2)/(M)^(5/2) = {}", fmt_interval(sc.j));
    let _ = writeln!(out, "Moeckel's potential = {}\n", fmt_interval(sc.p));
    if collinear {
        counters.collinear += 1;
        let _ = writeln!(out, "collinear solution no {}", counters.collinear);
    }
    let identity: Vec<usize> = (0..s.n()).collect();
    permutation_line(out, findings.ox.as_deref().unwrap_or(&identity));
    if findings.ox.is_some() {
        counters.ox += 1;
        let _ = writeln!(out, "symmetric with respect to OX no {}", counters.ox);
    } else {
        let _ = writeln!(out, "there is no symmetry with respect to OX");
    }
    if let Some(l) = &findings.line {
        counters.line += 1;
        permutation_line(out, &l.permutation);
        let _ = writeln!(out, "reflectional symmetry with respect to other line {}", counters.line);
    }
    if findings.asymmetric {
        let _ = writeln!(out, "proved asymmetric: no reflectional symmetry");
    } else if findings.ox.is_none() && findings.line.is_none() {
        let _ = writeln!(out, "symmetry undetermined");
    }
}

fn input_block(out: &mut String, domain: &ReducedBox, masses: &Masses) {
    let _ = writeln!(out, "Input data:");
    let free = domain.to_config();
    let mut bodies = free.bodies.clone();
    bodies.push(derive_last_body(&free.bodies, masses));
    for (i, b) in bodies.iter().enumerate() {
        let m = masses.interval(i);
        let _ = writeln!(
            out,
            "i: {i} X: {} Y: {} mass: {}",
            fmt_interval(b.x),
            fmt_interval(b.y),
            fmt_interval(m)
        );
    }
}

pub struct SearchReport<'a> {
    pub cfg: &'a SearchConfig,
    pub masses: &'a Masses,
    pub domain: &'a ReducedBox,
    pub output: &'a SearchOutput,
    pub records: &'a [CCRecord],
    pub elapsed: Duration,
}

impl SearchReport<'_> {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let o = self.output;
        if !o.is_proof() {
            let _ = writeln!(out, "{}\n", not_a_proof_banner(o.undecided.len(), o.not_proven.len()));
        }
        let _ = writeln!(out, "Number of bodies = {}", self.cfg.n);
        let _ = writeln!(
            out,
            "Accuracy eps = {}, bias = {}\n",
            fmt_g(self.cfg.eps, 10),
            fmt_g(self.cfg.bias, 10)
        );
        input_block(&mut out, self.domain, self.masses);
        let st = &o.stats;
        let _ = writeln!(out, "\n\nThe number of undecided cubes: {}", st.undecided);
        let _ = writeln!(out, "The number of zeros in the method: {}", st.zeros_found);
        let _ = writeln!(out, "The number of calls of the main search function: {}\n", st.calls);
        let _ = writeln!(
            out,
            "Program computed {} minutes\n",
            fmt_g(self.elapsed.as_secs_f64() / 60.0, 5)
        );
        let _ = writeln!(out, "Tests usage:");
        let _ = writeln!(out, "checkAprioriBounds -- {}", st.apriori);
        let _ = writeln!(out, "clusterTest -- {}", st.cluster);
        let _ = writeln!(out, "distanceTest -- {}", st.distance);
        let _ = writeln!(out, "checkZero -- {}", st.check_zero);
        let _ = writeln!(out, "krawczyk: methodFailed  -- {}", st.krawczyk_failed);
        let _ = writeln!(out, "krawczyk: zeroIside -- {}", st.krawczyk_unique);
        let _ = writeln!(out, "krawczyk: no zero inside -- {}", st.krawczyk_no_zero);
        let _ = writeln!(out, "U = I -- {}\n", st.u_eq_i);
        let _ = writeln!(out, "Different cc:");
        let mut counters = LineCounters::default();
        for (k, r) in self.records.iter().enumerate() {
            let _ = writeln!(out, "{SEPARATOR}\nposition {k}");
            cc_body(&mut out, &r.representative, self.masses, &r.findings, r.collinear, &mut counters);
        }
        let _ = writeln!(out, "\nNumber of different cc = {}", self.records.len());
        out
    }
}
