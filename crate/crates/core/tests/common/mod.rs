#![allow(dead_code)]

use std::path::PathBuf;

use planar_cc::krawczyk::{krawczyk_iterate, KrawczykOutcome};
use planar_cc::reduced::ReducedSystem;
use planar_cc::verify::newton_polish;
use planar_cc::{BodyBox, IntervalVector, Masses, ReducedBox};

/// A configuration transcribed from the published listings, with the
/// comment line above it.
pub struct Listed {
    pub header: String,
    pub points: Vec<(f64, f64)>,
}

impl Listed {
    /// Value of `key=...` in the header, e.g. `ox` or `collinear`.
    pub fn tag(&self, key: &str) -> Option<&str> {
        let pat = format!("{key}=");
        let start = self.header.find(&pat)? + pat.len();
        let rest = &self.header[start..];
        Some(rest.split_whitespace().next().unwrap_or(""))
    }
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn load(name: &str) -> Vec<Listed> {
    let text = std::fs::read_to_string(data_path(name)).expect("data file");
    let mut out: Vec<Listed> = Vec::new();
    let mut header = String::new();
    let mut open = false;
    for line in text.lines() {
        let line = line.trim();
        if let Some(h) = line.strip_prefix('#') {
            header = h.trim().to_string();
            open = false;
            continue;
        }
        if line.is_empty() {
            open = false;
            continue;
        }
        let mut it = line.split_whitespace().map(|t| t.parse::<f64>().unwrap());
        let p = (it.next().unwrap(), it.next().unwrap());
        if !open {
            out.push(Listed {
                header: header.clone(),
                points: Vec::new(),
            });
            open = true;
        }
        out.last_mut().unwrap().points.push(p);
    }
    out
}

/// The listed configurations with `n` bodies from the search reports.
pub fn listed_report(n: usize) -> Vec<Listed> {
    load(&format!("report_n{n}.txt"))
}

/// Reduced coordinates of a configuration already in the reduced gauge
/// (body `n-2` on the positive x-axis, last body derived).
pub fn reduced_coords(points: &[(f64, f64)]) -> Vec<f64> {
    let n = points.len();
    let mut v = Vec::with_capacity(2 * n - 3);
    for p in &points[..n - 2] {
        v.push(p.0);
        v.push(p.1);
    }
    v.push(points[n - 2].0);
    v
}

/// Newton-polished reduced point of a listed configuration, kept in the
/// listing's labelling, together with a certified tight enclosure of the
/// nearby zero.
pub fn polished(l: &Listed) -> (Vec<f64>, IntervalVector) {
    let n = l.points.len();
    let m = Masses::equal(n).unwrap();
    let x = newton_polish(reduced_coords(&l.points), &m);
    let sys = ReducedSystem::new(m);
    let b = IntervalVector(ReducedBox::from_points(&x).coords.0.iter().map(|iv| iv.inflate(1e-9)).collect());
    match krawczyk_iterate(&sys, &b, 16) {
        KrawczykOutcome::UniqueZero { enclosure, .. } => (x, enclosure),
        other => panic!("listed configuration {} not certified: {other:?}", l.header),
    }
}

pub fn inflate(x: &[f64], r: f64) -> ReducedBox {
    ReducedBox::new(IntervalVector(ReducedBox::from_points(x).coords.0.iter().map(|iv| iv.inflate(r)).collect()))
}

pub fn mids(full: &[BodyBox]) -> Vec<(f64, f64)> {
    full.iter().map(|b| b.mid()).collect()
}
