//! Tight range bounds for the gravitational kernels `x^a / r^b`.
//!
//! Naive interval evaluation of `x / (x^2 + y^2)^{3/2}` suffers badly from the
//! dependency problem because `x` appears in numerator and denominator. The
//! exact range over an axis-aligned box that avoids the origin is attained at a
//! finite set of boundary points: the corners, the points where an edge crosses
//! a coordinate axis, and the points where an edge crosses one of the lines on
//! which the partial derivatives vanish. Each candidate is evaluated in interval
//! arithmetic and the hull of the results is intersected with the naive bound.

use std::sync::OnceLock;

use thiserror::Error;

use crate::interval::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("the box may contain the singular point (0, 0)")]
    SingularBox,
}

/// Which coordinate appears in the numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// A kernel `d^a / r^b` over the box `dx x dy`, with `d = dx` for
/// [`Axis::X`] and `d = dy` for [`Axis::Y`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelQuery {
    pub dx: Interval,
    pub dy: Interval,
    pub a: u32,
    pub b: u32,
    pub axis: Axis,
}

impl KernelQuery {
    pub fn eval(&self) -> Result<Interval, KernelError> {
        bound_kernel(self.dx, self.dy, self.a, self.b, self.axis)
    }
}

/// Enclosures of `sqrt(a / (b - a))` for the exponent pairs in use, indexed by
/// `(a, b)` with `1 <= a < b <= 5`.
fn slope(a: u32, b: u32) -> Interval {
    static TABLE: OnceLock<[[Option<Interval>; 6]; 6]> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = [[None; 6]; 6];
        for (a, row) in t.iter_mut().enumerate().skip(1) {
            for (b, cell) in row.iter_mut().enumerate().skip(a + 1) {
                let q = Interval::point(a as f64)
                    .try_div(Interval::point((b - a) as f64))
                    .expect("b > a");
                *cell = Some(q.sqrt().expect("positive"));
            }
        }
        t
    });
    table
        .get(a as usize)
        .and_then(|row| row.get(b as usize))
        .copied()
        .flatten()
        .unwrap_or_else(|| {
            Interval::point(a as f64)
                .try_div(Interval::point((b - a) as f64))
                .and_then(Interval::sqrt)
                .expect("b > a")
        })
}

/// `r^{-b}` from `r^2`; requires `r2 > 0`.
#[inline]
fn inv_r_pow(r2: Interval, b: u32) -> Result<Interval, KernelError> {
    let denom = if b % 2 == 0 {
        r2.powi(b / 2)
    } else {
        r2.powi(b / 2) * r2.sqrt_nonneg()
    };
    denom.recip().map_err(|_| KernelError::SingularBox)
}

/// Interval evaluation of `x^a / (x^2 + y^2)^{b/2}` with no dependency handling.
#[inline]
pub fn naive_kernel(x: Interval, y: Interval, a: u32, b: u32) -> Result<Interval, KernelError> {
    let r2 = x.square() + y.square();
    Ok(x.powi(a) * inv_r_pow(r2, b)?)
}

/// Enclosure of the range of `d^a / r^b` over `dx x dy` (see [`KernelQuery`]).
///
/// The result contains the exact range and is contained in the naive
/// interval evaluation.
pub fn bound_kernel(
    dx: Interval,
    dy: Interval,
    a: u32,
    b: u32,
    axis: Axis,
) -> Result<Interval, KernelError> {
    debug_assert!(a >= 1 && a < b);
    if dx.contains_zero() && dy.contains_zero() {
        return Err(KernelError::SingularBox);
    }
    // Work in coordinates where the numerator variable is `x`.
    let (x, y) = match axis {
        Axis::X => (dx, dy),
        Axis::Y => (dy, dx),
    };
    let naive = naive_kernel(x, y, a, b)?;
    if x.is_point() && y.is_point() {
        return Ok(naive);
    }

    let mut hull: Option<Interval> = None;
    let mut add = |cx: Interval, cy: Interval| -> Result<(), KernelError> {
        let v = naive_kernel(cx, cy, a, b)?;
        hull = Some(match hull {
            Some(h) => h.hull(v),
            None => v,
        });
        Ok(())
    };

    let xs = [x.lo(), x.hi()];
    let ys = [y.lo(), y.hi()];
    for &cx in &xs {
        for &cy in &ys {
            add(Interval::point(cx), Interval::point(cy))?;
        }
    }
    // Vertical edges x = const: the only interior critical point is y = 0.
    if y.contains_zero() {
        for &cx in &xs {
            add(Interval::point(cx), Interval::ZERO)?;
        }
    }
    // Horizontal edges y = const: critical points at x = 0 and
    // x = +-y sqrt(a / (b - a)).
    if x.contains_zero() {
        for &cy in &ys {
            add(Interval::ZERO, Interval::point(cy))?;
        }
    }
    let k = slope(a, b);
    for &cy in &ys {
        let t = k * cy;
        for cand in [t, -t] {
            if let Some(cx) = cand.intersect(x) {
                add(cx, Interval::point(cy))?;
            }
        }
    }

    let bound = hull.expect("corners always evaluated");
    Ok(bound.intersect(naive).unwrap_or(naive))
}
