//! Certifying a central configuration given approximately by its points.
//!
//! The candidate is moved into the reduced gauge (centre of mass at the
//! origin, scaled so that `U = I`, furthest body on the positive x-axis in
//! slot `n-2`), polished by a few Newton steps in floating point and then
//! surrounded by a small box on which the Krawczyk operator is run.

use nalgebra::{DMatrix, DVector};

use crate::classify::{detect_collinear, symmetry_findings, SymmetryFindings};
use crate::interval::IntervalVector;
use crate::krawczyk::{krawczyk_iterate, KrawczykOutcome, DEFAULT_MAX_ITER};
use crate::model::Masses;
use crate::reduced::{gauge_validity, reduced_jacobian, reduced_residual, ReducedBox, ReducedSystem};
use crate::search::SolutionBox;

const NEWTON_STEPS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Initial half-width of the box around the polished point.
    pub delta: f64,
    /// The half-width is doubled on failure until it exceeds this. Also
    /// bounds how far the Newton polish may move the candidate.
    pub max_delta: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            delta: 1e-6,
            max_delta: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("expected {expected} bodies, got {got}")]
    WrongBodyCount { expected: usize, got: usize },
    #[error("candidate is degenerate (coincident bodies or all at the centre of mass)")]
    Degenerate,
    #[error("no unique zero certified up to half-width {0}")]
    NotCertified(f64),
    #[error("Newton iteration moved {0} away from the candidate")]
    Drifted(f64),
    #[error("certified zero violates the gauge condition x_(n-2) != x_(n-1)")]
    GaugeViolated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verified {
    pub solution: SolutionBox,
    /// Masses in the order used by `solution` (the candidate may have been
    /// relabelled).
    pub masses: Masses,
    /// `order[k]` is the candidate index of body `k` of the solution.
    pub order: Vec<usize>,
    /// Half-width of the box that was certified.
    pub delta: f64,
    pub findings: SymmetryFindings,
    pub collinear: bool,
}

/// Move `points` into the reduced gauge. Returns the reduced coordinates and
/// the relabelling applied.
pub fn regauge(points: &[(f64, f64)], masses: &Masses) -> Result<(Vec<f64>, Vec<usize>), VerifyError> {
    let n = masses.n();
    if points.len() != n {
        return Err(VerifyError::WrongBodyCount {
            expected: n,
            got: points.len(),
        });
    }
    let m = masses.values();
    let total = masses.total();
    let cx = points.iter().zip(m).map(|(p, w)| p.0 * w).sum::<f64>() / total;
    let cy = points.iter().zip(m).map(|(p, w)| p.1 * w).sum::<f64>() / total;
    let mut q: Vec<(f64, f64)> = points.iter().map(|p| (p.0 - cx, p.1 - cy)).collect();

    let mut u = 0.0;
    let mut inertia = 0.0;
    for i in 0..n {
        inertia += m[i] * (q[i].0 * q[i].0 + q[i].1 * q[i].1);
        for j in i + 1..n {
            let r = (q[i].0 - q[j].0).hypot(q[i].1 - q[j].1);
            if r == 0.0 {
                return Err(VerifyError::Degenerate);
            }
            u += m[i] * m[j] / r;
        }
    }
    if inertia == 0.0 {
        return Err(VerifyError::Degenerate);
    }
    let scale = (u / inertia).cbrt();

    let far = (0..n)
        .max_by(|&a, &b| {
            let na = q[a].0.hypot(q[a].1);
            let nb = q[b].0.hypot(q[b].1);
            na.total_cmp(&nb)
        })
        .expect("n >= 3");
    let r = q[far].0.hypot(q[far].1);
    let (c, s) = (q[far].0 / r, q[far].1 / r);
    for p in &mut q {
        *p = ((c * p.0 + s * p.1) * scale, (c * p.1 - s * p.0) * scale);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.swap(far, n - 2);

    let mut coords = Vec::with_capacity(2 * n - 3);
    for &k in &order[..n - 2] {
        coords.push(q[k].0);
        coords.push(q[k].1);
    }
    coords.push(q[order[n - 2]].0);
    Ok((coords, order))
}

/// Newton iteration on the reduced system in floating point.
pub fn newton_polish(mut x: Vec<f64>, masses: &Masses) -> Vec<f64> {
    for _ in 0..NEWTON_STEPS {
        let b = ReducedBox::from_points(&x);
        let (Ok(f), Ok(jac)) = (reduced_residual(&b, masses), reduced_jacobian(&b, masses)) else {
            break;
        };
        let d = x.len();
        let a = DMatrix::from_fn(d, d, |i, j| jac[(i, j)].mid());
        let rhs = DVector::from_iterator(d, f.mid());
        let Some(step) = a.lu().solve(&rhs) else { break };
        let mut moved = 0.0f64;
        for (xi, si) in x.iter_mut().zip(step.iter()) {
            *xi -= si;
            moved = moved.max(si.abs());
        }
        if moved < 1e-15 {
            break;
        }
    }
    x
}

/// Certify the central configuration near `points`.
pub fn verify_candidate(points: &[(f64, f64)], masses: &Masses, opts: &VerifyOptions) -> Result<Verified, VerifyError> {
    let (coords, order) = regauge(points, masses)?;
    let masses = if masses.all_equal() {
        masses.clone()
    } else {
        Masses::new(order.iter().map(|&k| masses.get(k)).collect()).map_err(|_| VerifyError::Degenerate)?
    };
    let x = newton_polish(coords.clone(), &masses);
    let drift = x.iter().zip(&coords).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if !(drift <= opts.max_delta) {
        return Err(VerifyError::Drifted(drift));
    }
    let sys = ReducedSystem::new(masses.clone());
    let mut delta = opts.delta;
    while delta <= opts.max_delta {
        let xbox = IntervalVector(
            ReducedBox::from_points(&x)
                .coords
                .0
                .iter()
                .map(|iv| iv.inflate(delta))
                .collect(),
        );
        if let KrawczykOutcome::UniqueZero { enclosure, region } = krawczyk_iterate(&sys, &xbox, DEFAULT_MAX_ITER) {
            let enclosure = ReducedBox::new(enclosure);
            if !gauge_validity(&enclosure.to_config(), &masses) {
                return Err(VerifyError::GaugeViolated);
            }
            let solution = SolutionBox::new(enclosure, ReducedBox::new(region), &masses)
                .map_err(|_| VerifyError::Degenerate)?;
            let findings = symmetry_findings(&solution, &masses);
            let collinear = detect_collinear(&solution, &masses);
            return Ok(Verified {
                solution,
                masses,
                order,
                delta,
                findings,
                collinear,
            });
        }
        delta *= 2.0;
    }
    Err(VerifyError::NotCertified(opts.max_delta))
}
