//! Machine-readable solutions file. One record per line:
//!
//! ```text
//! cc <class> enclosure <lo>:<hi> ... region <lo>:<hi> ...
//! ```
//!
//! with every bound written as a hexadecimal float, so loading gives back
//! the exact bits.

use planar_cc::{Interval, IntervalVector, ReducedBox};

use crate::fmt::{from_hex, to_hex};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionRecord {
    /// Index of the distinct configuration this zero belongs to.
    pub class: usize,
    pub enclosure: ReducedBox,
    pub region: ReducedBox,
}

fn write_box(out: &mut String, b: &ReducedBox) {
    for iv in &b.coords.0 {
        out.push(' ');
        out.push_str(&to_hex(iv.lo()));
        out.push(':');
        out.push_str(&to_hex(iv.hi()));
    }
}

pub fn save(records: &[SolutionRecord]) -> String {
    let mut out = String::from("# reduced coordinates x0 y0 ... x(n-3) y(n-3) x(n-2); bounds are hexadecimal floats\n");
    for r in records {
        out.push_str(&format!("cc {} enclosure", r.class));
        write_box(&mut out, &r.enclosure);
        out.push_str(" region");
        write_box(&mut out, &r.region);
        out.push('\n');
    }
    out
}

pub fn load(text: &str) -> Result<Vec<SolutionRecord>, CliError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let perr = |msg: String| CliError::Parse { line: lineno + 1, msg };
        let mut toks = line.split_whitespace();
        if toks.next() != Some("cc") {
            return Err(perr("expected `cc`".into()));
        }
        let class = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| perr("missing class index".into()))?;
        if toks.next() != Some("enclosure") {
            return Err(perr("expected `enclosure`".into()));
        }
        let mut enclosure = Vec::new();
        let mut region = Vec::new();
        let mut target = &mut enclosure;
        for t in toks {
            if t == "region" {
                target = &mut region;
                continue;
            }
            let (lo, hi) = t.split_once(':').ok_or_else(|| perr(format!("bad bound pair {t:?}")))?;
            let lo = from_hex(lo).map_err(|e| perr(e.to_string()))?;
            let hi = from_hex(hi).map_err(|e| perr(e.to_string()))?;
            target.push(Interval::try_new(lo, hi).map_err(|e| perr(e.to_string()))?);
        }
        let dim = enclosure.len();
        if dim < 3 || dim % 2 == 0 || region.len() != dim {
            return Err(perr(format!("bad dimensions {} / {}", dim, region.len())));
        }
        out.push(SolutionRecord {
            class,
            enclosure: ReducedBox::new(IntervalVector(enclosure)),
            region: ReducedBox::new(IntervalVector(region)),
        });
    }
    Ok(out)
}
