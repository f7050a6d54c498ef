#![allow(dead_code)]

use std::path::PathBuf;

use planar_cc::BodyBox;
use planar_cc_cli::candidates::{parse_candidates, Candidate};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn candidates(name: &str) -> Vec<Candidate> {
    let text = std::fs::read_to_string(data_path(name)).expect("data file");
    parse_candidates(&text).expect("well-formed data file")
}

/// `key=value` from a candidate label.
pub fn tag<'a>(c: &'a Candidate, key: &str) -> Option<&'a str> {
    let label = c.label.as_deref()?;
    let pat = format!("{key}=");
    let start = label.find(&pat)? + pat.len();
    label[start..].split_whitespace().next()
}

/// `[lo, hi]` after `key=` in a report-derived label.
pub fn tag_interval(c: &Candidate, key: &str) -> Option<(f64, f64)> {
    let label = c.label.as_deref()?;
    let pat = format!("{key}=[");
    let start = label.find(&pat)? + pat.len();
    let end = start + label[start..].find(']')?;
    let (lo, hi) = label[start..end].split_once(',')?;
    Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Whether `points` lies in `bodies` (each box widened by `tol`) after some
/// relabelling, reflection and, if `rotate`, the best-fitting rotation
/// about the origin. Points are centred first when rotating.
pub fn matches_up_to_symmetry(bodies: &[BodyBox], points: &[(f64, f64)], tol: f64, rotate: bool) -> bool {
    let n = bodies.len();
    if points.len() != n {
        return false;
    }
    let mut pts = points.to_vec();
    if rotate {
        let cx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
        let cy = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
        for p in &mut pts {
            *p = (p.0 - cx, p.1 - cy);
        }
    }
    let targets: Vec<(f64, f64)> = bodies.iter().map(|b| b.mid()).collect();
    for flip in [1.0, -1.0] {
        let reflected: Vec<(f64, f64)> = pts.iter().map(|p| (p.0, flip * p.1)).collect();
        for perm in permutations(n) {
            let mapped: Vec<(f64, f64)> = if rotate {
                let (mut dot, mut cross) = (0.0, 0.0);
                for (k, &j) in perm.iter().enumerate() {
                    let (p, t) = (reflected[k], targets[j]);
                    dot += p.0 * t.0 + p.1 * t.1;
                    cross += p.0 * t.1 - p.1 * t.0;
                }
                let th = cross.atan2(dot);
                let (s, c) = th.sin_cos();
                reflected.iter().map(|p| (c * p.0 - s * p.1, s * p.0 + c * p.1)).collect()
            } else {
                reflected.clone()
            };
            let ok = perm.iter().enumerate().all(|(k, &j)| {
                let b = &bodies[j];
                b.x.inflate(tol).contains(mapped[k].0) && b.y.inflate(tol).contains(mapped[k].1)
            });
            if ok {
                return true;
            }
        }
    }
    false
}

fn numeric(tok: &str) -> Option<f64> {
    tok.trim_matches(|c| matches!(c, '[' | ']' | ',' | ':')).parse().ok()
}

/// Compare two reports token by token: words must agree exactly, numbers to
/// within `tol` (absolute, or relative for large values). The line giving
/// the elapsed time is skipped. Returns the first difference.
pub fn compare_reports(actual: &str, golden: &str, tol: f64) -> Result<(), String> {
    let keep = |s: &str| -> Vec<String> {
        s.lines()
            .filter(|l| !l.starts_with("Program computed"))
            .map(str::to_string)
            .collect()
    };
    let (a, g) = (keep(actual), keep(golden));
    if a.len() != g.len() {
        return Err(format!("line counts differ: {} vs {}", a.len(), g.len()));
    }
    for (k, (la, lg)) in a.iter().zip(&g).enumerate() {
        let (ta, tg): (Vec<&str>, Vec<&str>) = (la.split_whitespace().collect(), lg.split_whitespace().collect());
        if ta.len() != tg.len() {
            return Err(format!("line {}: {la:?} vs {lg:?}", k + 1));
        }
        for (x, y) in ta.iter().zip(&tg) {
            let same = match (numeric(x), numeric(y)) {
                (Some(u), Some(v)) => (u - v).abs() <= tol * v.abs().max(1.0),
                _ => x == y,
            };
            if !same {
                return Err(format!("line {}: {la:?} vs {lg:?}", k + 1));
            }
        }
    }
    Ok(())
}
