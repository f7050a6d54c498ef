//! The Krawczyk operator
//! `K = x0 - C F(x0) + (I - C dF(X)) (X - x0)`
//! and its iteration.
//!
//! If `K` lies in the interior of `X`, then `X` contains exactly one zero of
//! `F`; if `K` and `X` are disjoint there is none; in any case every zero in
//! `X` lies in `K`.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::interval::{Interval, IntervalMatrix, IntervalVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("a collision may occur inside the box")]
    CollisionPossible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum KrawczykError {
    #[error("a collision may occur inside the box")]
    CollisionPossible,
    #[error("the midpoint Jacobian is numerically singular")]
    SingularMidpoint,
    #[error("dimension mismatch")]
    Shape,
}

impl From<SystemError> for KrawczykError {
    fn from(_: SystemError) -> Self {
        KrawczykError::CollisionPossible
    }
}

/// A square system with interval evaluation of the function and its
/// derivative.
pub trait IntervalSystem {
    fn dim(&self) -> usize;
    fn eval(&self, x: &IntervalVector) -> Result<IntervalVector, SystemError>;
    fn jacobian(&self, x: &IntervalVector) -> Result<IntervalMatrix, SystemError>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum KrawczykOutcome {
    /// Exactly one zero lies in `region`; it also lies in `enclosure`.
    UniqueZero {
        enclosure: IntervalVector,
        region: IntervalVector,
    },
    NoZeroInSet,
    /// Undecided; the box contains every zero of the input box.
    Failed(IntervalVector),
}

impl KrawczykOutcome {
    pub fn is_unique(&self) -> bool {
        matches!(self, KrawczykOutcome::UniqueZero { .. })
    }
}

const PIVOT_THRESHOLD: f64 = 1e-12;

/// Approximate inverse of the midpoint of `jac`, row-major.
pub fn midpoint_inverse(jac: &IntervalMatrix) -> Result<Vec<f64>, KrawczykError> {
    let n = jac.rows();
    if jac.cols() != n {
        return Err(KrawczykError::Shape);
    }
    let mid = DMatrix::from_row_slice(n, n, &jac.mid());
    let scale = mid.amax();
    if !(scale.is_finite() && scale > 0.0) {
        return Err(KrawczykError::SingularMidpoint);
    }
    let lu = mid.lu();
    let u = lu.u();
    if (0..n).any(|i| u[(i, i)].abs() < PIVOT_THRESHOLD * scale) {
        return Err(KrawczykError::SingularMidpoint);
    }
    let inv = lu.try_inverse().ok_or(KrawczykError::SingularMidpoint)?;
    if inv.iter().any(|v| !v.is_finite()) {
        return Err(KrawczykError::SingularMidpoint);
    }
    Ok(inv.transpose().as_slice().to_vec())
}

/// One application of the operator with an explicit preconditioner `c`
/// (row-major) and a precomputed Jacobian enclosure over `xbox`.
pub fn krawczyk_step_with<S: IntervalSystem + ?Sized>(
    sys: &S,
    x0: &[f64],
    xbox: &IntervalVector,
    jac: &IntervalMatrix,
    c: &[f64],
) -> Result<IntervalVector, KrawczykError> {
    let n = sys.dim();
    if x0.len() != n || xbox.len() != n || c.len() != n * n {
        return Err(KrawczykError::Shape);
    }
    let fx0 = sys.eval(&IntervalVector::from_points(x0))?;
    let diff: Vec<Interval> = (0..n).map(|j| xbox[j] - x0[j]).collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = Interval::point(x0[i]);
        for j in 0..n {
            acc -= Interval::point(c[i * n + j]) * fx0[j];
        }
        for j in 0..n {
            // (I - C J)_{ij}
            let mut cj = Interval::ZERO;
            for k in 0..n {
                cj += Interval::point(c[i * n + k]) * jac[(k, j)];
            }
            let entry = if i == j { Interval::ONE - cj } else { -cj };
            acc += entry * diff[j];
        }
        out.push(acc);
    }
    Ok(IntervalVector(out))
}

/// `K(x0, X)` with `C` the inverse of the midpoint Jacobian over `X`.
pub fn krawczyk_operator<S: IntervalSystem + ?Sized>(
    sys: &S,
    x0: &[f64],
    xbox: &IntervalVector,
) -> Result<IntervalVector, KrawczykError> {
    if !xbox.contains_point(x0) {
        return Err(KrawczykError::Shape);
    }
    let jac = sys.jacobian(xbox)?;
    let c = midpoint_inverse(&jac)?;
    krawczyk_step_with(sys, x0, xbox, &jac, &c)
}

pub const DEFAULT_MAX_ITER: usize = 16;
const MIN_REDUCTION: f64 = 0.05;
const RECOMPUTE_SHRINK: f64 = 0.5;
const TIGHTEN_ROUNDS: usize = 8;

/// Iterate the operator on `xbox`.
///
/// `observer` sees every `K` produced; used to test zero preservation.
pub fn krawczyk_iterate_observed<S, F>(
    sys: &S,
    xbox: &IntervalVector,
    max_iter: usize,
    mut observer: F,
) -> KrawczykOutcome
where
    S: IntervalSystem + ?Sized,
    F: FnMut(&IntervalVector),
{
    let mut x = xbox.clone();
    let mut precond: Option<(Vec<f64>, Vec<f64>)> = None; // (C, widths when computed)
    for _ in 0..max_iter {
        let jac = match sys.jacobian(&x) {
            Ok(j) => j,
            Err(_) => return KrawczykOutcome::Failed(x),
        };
        let widths = x.widths();
        let stale = match &precond {
            None => true,
            Some((_, w0)) => widths
                .iter()
                .zip(w0)
                .any(|(w, w0)| *w <= (1.0 - RECOMPUTE_SHRINK) * w0),
        };
        if stale {
            match midpoint_inverse(&jac) {
                Ok(c) => precond = Some((c, widths.clone())),
                Err(_) => return KrawczykOutcome::Failed(x),
            }
        }
        let c = &precond.as_ref().expect("set above").0;
        let x0 = x.mid();
        let k = match krawczyk_step_with(sys, &x0, &x, &jac, c) {
            Ok(k) => k,
            Err(_) => return KrawczykOutcome::Failed(x),
        };
        observer(&k);
        if k.subset_of_interior(&x) {
            // Every zero of the input box lies in x, so uniqueness in x is
            // uniqueness in the input box.
            let enclosure = tighten(sys, k, &mut observer);
            return KrawczykOutcome::UniqueZero {
                enclosure,
                region: xbox.clone(),
            };
        }
        let Some(y) = k.intersect(&x) else {
            return KrawczykOutcome::NoZeroInSet;
        };
        if x.subset_of(&k) {
            return KrawczykOutcome::Failed(x);
        }
        let reduction = y
            .widths()
            .iter()
            .zip(&widths)
            .map(|(wy, wx)| if *wx > 0.0 { 1.0 - wy / wx } else { 0.0 })
            .fold(0.0, f64::max);
        x = y;
        if reduction < MIN_REDUCTION {
            break;
        }
    }
    KrawczykOutcome::Failed(x)
}

/// Shrink a box known to contain the zero by further contractions.
fn tighten<S, F>(sys: &S, mut k: IntervalVector, observer: &mut F) -> IntervalVector
where
    S: IntervalSystem + ?Sized,
    F: FnMut(&IntervalVector),
{
    for _ in 0..TIGHTEN_ROUNDS {
        let Ok(jac) = sys.jacobian(&k) else { break };
        let Ok(c) = midpoint_inverse(&jac) else { break };
        let Ok(next) = krawczyk_step_with(sys, &k.mid(), &k, &jac, &c) else {
            break;
        };
        observer(&next);
        let Some(y) = next.intersect(&k) else { break };
        let before = k.max_width();
        let after = y.max_width();
        k = y;
        if after >= 0.9 * before {
            break;
        }
    }
    k
}

pub fn krawczyk_iterate<S: IntervalSystem + ?Sized>(
    sys: &S,
    xbox: &IntervalVector,
    max_iter: usize,
) -> KrawczykOutcome {
    krawczyk_iterate_observed(sys, xbox, max_iter, |_| {})
}
