//! Candidate configurations for verification: one body per line as `x y`,
//! configurations separated by blank lines, `#` starts a comment. A comment
//! line directly above a configuration becomes its label.

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub label: Option<String>,
    pub points: Vec<(f64, f64)>,
}

pub fn parse_candidates(text: &str) -> Result<Vec<Candidate>, CliError> {
    let mut out = Vec::new();
    let mut label: Option<String> = None;
    let mut points = Vec::new();
    let flush = |label: &mut Option<String>, points: &mut Vec<(f64, f64)>, out: &mut Vec<Candidate>| {
        if !points.is_empty() {
            out.push(Candidate {
                label: label.take(),
                points: std::mem::take(points),
            });
        }
    };
    for (lineno, raw) in text.lines().enumerate() {
        let (content, comment) = match raw.split_once('#') {
            Some((c, m)) => (c.trim(), Some(m.trim())),
            None => (raw.trim(), None),
        };
        if content.is_empty() {
            if comment.is_none() {
                flush(&mut label, &mut points, &mut out);
            } else if points.is_empty() {
                label = comment.filter(|m| !m.is_empty()).map(str::to_string);
            }
            continue;
        }
        let parse = |tok: Option<&str>| -> Result<f64, CliError> {
            let tok = tok.ok_or_else(|| CliError::Parse {
                line: lineno + 1,
                msg: "expected two coordinates".into(),
            })?;
            tok.parse().map_err(|_| CliError::Parse {
                line: lineno + 1,
                msg: format!("not a number: {tok:?}"),
            })
        };
        let mut toks = content.split_whitespace();
        let x = parse(toks.next())?;
        let y = parse(toks.next())?;
        if toks.next().is_some() {
            return Err(CliError::Parse {
                line: lineno + 1,
                msg: "more than two coordinates".into(),
            });
        }
        points.push((x, y));
    }
    flush(&mut label, &mut points, &mut out);
    Ok(out)
}
