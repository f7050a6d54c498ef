//! The gauge-fixed square system.
//!
//! Rotations are removed by putting body `n-2` on the positive x-axis
//! (`y_{n-2} = 0`) and translations by deriving body `n-1` from the centre of
//! mass. The unknowns are `(x_0, y_0, ..., x_{n-3}, y_{n-3}, x_{n-2})` and the
//! equations are the planar residuals of bodies `0..n-3` followed by the
//! x-residual of body `n-2`.

use crate::force::{bound_kernel, Axis};
use crate::interval::{Interval, IntervalMatrix, IntervalVector};
use crate::krawczyk::{IntervalSystem, SystemError};
use crate::model::{attraction, BodyBox, ConfigurationBox, Masses, PairTable};

/// A box in reduced coordinates, length `2n - 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedBox {
    pub coords: IntervalVector,
}

impl ReducedBox {
    pub fn new(coords: IntervalVector) -> Self {
        assert!(coords.len() >= 3 && coords.len() % 2 == 1, "reduced boxes have odd length >= 3");
        Self { coords }
    }

    pub fn from_points(p: &[f64]) -> Self {
        Self::new(IntervalVector::from_points(p))
    }

    /// Number of bodies including the derived one.
    pub fn n(&self) -> usize {
        (self.coords.len() + 3) / 2
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn to_config(&self) -> ConfigurationBox {
        let n = self.n();
        let mut bodies = Vec::with_capacity(n - 1);
        for i in 0..n - 2 {
            bodies.push(BodyBox::new(self.coords[2 * i], self.coords[2 * i + 1]));
        }
        bodies.push(BodyBox::new(self.coords[2 * (n - 2)], Interval::ZERO));
        ConfigurationBox {
            bodies,
            reduced_gauge: true,
        }
    }

    /// Inverse of [`ReducedBox::to_config`]; the y-component of body `n-2` is
    /// dropped.
    pub fn from_config(c: &ConfigurationBox) -> Self {
        let mut coords = Vec::with_capacity(2 * c.bodies.len() - 1);
        let last = c.bodies.len() - 1;
        for (i, b) in c.bodies.iter().enumerate() {
            coords.push(b.x);
            if i < last {
                coords.push(b.y);
            }
        }
        Self::new(IntervalVector(coords))
    }

    pub fn mid(&self) -> Vec<f64> {
        self.coords.mid()
    }

    pub fn max_width(&self) -> f64 {
        self.coords.max_width()
    }
}

fn full_bodies(coords: &IntervalVector, masses: &Masses) -> Vec<BodyBox> {
    ReducedBox::new(coords.clone()).to_config().full(masses)
}

/// Enclosure of the reduced residual.
pub fn reduced_residual(r: &ReducedBox, masses: &Masses) -> Result<IntervalVector, SystemError> {
    residual_from(&r.coords, masses)
}

fn residual_from(coords: &IntervalVector, masses: &Masses) -> Result<IntervalVector, SystemError> {
    let full = full_bodies(coords, masses);
    let n = full.len();
    let pairs = PairTable::new(&full);
    let mut out = Vec::with_capacity(coords.len());
    for (i, body) in full.iter().enumerate().take(n - 1) {
        let (sx, sy) = attraction(&pairs, masses, i).map_err(|_| SystemError::CollisionPossible)?;
        out.push(body.x - sx);
        if i < n - 2 {
            out.push(body.y - sy);
        }
    }
    Ok(IntervalVector(out))
}

/// `T(d) = I/r^3 - 3 d d^T / r^5` as `(xx, xy, yy)`.
fn tidal_block(pairs: &PairTable, i: usize, j: usize) -> Result<[Interval; 3], SystemError> {
    let dx = pairs.dx(i, j);
    let dy = pairs.dy(i, j);
    let err = |_| SystemError::CollisionPossible;
    let r2 = pairs.r2(i, j);
    let inv_r3 = (r2 * r2.sqrt_nonneg()).recip().map_err(|_| SystemError::CollisionPossible)?;
    let xx = bound_kernel(dx, dy, 2, 5, Axis::X).map_err(err)?;
    let yy = bound_kernel(dx, dy, 2, 5, Axis::Y).map_err(err)?;
    let x3 = bound_kernel(dx, dy, 1, 3, Axis::X).map_err(err)?;
    let y2 = bound_kernel(dx, dy, 1, 2, Axis::Y).map_err(err)?;
    let three = Interval::point(3.0);
    Ok([
        inv_r3 - three * xx,
        -(three * x3 * y2),
        inv_r3 - three * yy,
    ])
}

/// Enclosure of the Jacobian of the reduced residual.
pub fn reduced_jacobian(r: &ReducedBox, masses: &Masses) -> Result<IntervalMatrix, SystemError> {
    jacobian_from(&r.coords, masses)
}

fn jacobian_from(coords: &IntervalVector, masses: &Masses) -> Result<IntervalMatrix, SystemError> {
    let full = full_bodies(coords, masses);
    let n = full.len();
    let last = n - 1;
    let pairs = PairTable::new(&full);
    // tidal blocks for i in 0..n-1 and every j != i
    let mut t = vec![[Interval::ZERO; 3]; n * n];
    for i in 0..last {
        for j in 0..n {
            if j != i {
                t[i * n + j] = tidal_block(&pairs, i, j)?;
            }
        }
    }
    let m_last = masses.interval(last);
    // 2x2 block of dG_i/dq_k
    let block = |i: usize, k: usize| -> [Interval; 4] {
        let tn = t[i * n + last];
        if k != i {
            let mk = masses.interval(k);
            let tk = t[i * n + k];
            [
                mk * (tk[0] - tn[0]),
                mk * (tk[1] - tn[1]),
                mk * (tk[1] - tn[1]),
                mk * (tk[2] - tn[2]),
            ]
        } else {
            let mut s = [Interval::ZERO; 3];
            for j in 0..last {
                if j != i {
                    let mj = masses.interval(j);
                    for c in 0..3 {
                        s[c] += mj * t[i * n + j][c];
                    }
                }
            }
            let w = m_last + masses.interval(i);
            for c in 0..3 {
                s[c] += w * tn[c];
            }
            [Interval::ONE - s[0], -s[1], -s[1], Interval::ONE - s[2]]
        }
    };
    let dim = coords.len();
    let mut jac = IntervalMatrix::zeros(dim, dim);
    for i in 0..last {
        for k in 0..last {
            let b = block(i, k);
            let rows = if i < last - 1 { 2 } else { 1 };
            let cols = if k < last - 1 { 2 } else { 1 };
            for a in 0..rows {
                for c in 0..cols {
                    jac[(2 * i + a, 2 * k + c)] = b[2 * a + c];
                }
            }
        }
    }
    Ok(jac)
}

/// Single entry of the reduced Jacobian; `row` and `col` index the reduced
/// coordinates.
pub fn jacobian_entry(
    r: &ReducedBox,
    masses: &Masses,
    row: usize,
    col: usize,
) -> Result<Interval, SystemError> {
    Ok(reduced_jacobian(r, masses)?[(row, col)])
}

/// The reduced system as an [`IntervalSystem`] for the Krawczyk operator.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub masses: Masses,
}

impl ReducedSystem {
    pub fn new(masses: Masses) -> Self {
        Self { masses }
    }
}

impl IntervalSystem for ReducedSystem {
    fn dim(&self) -> usize {
        2 * self.masses.n() - 3
    }

    fn eval(&self, x: &IntervalVector) -> Result<IntervalVector, SystemError> {
        residual_from(x, &self.masses)
    }

    fn jacobian(&self, x: &IntervalVector) -> Result<IntervalMatrix, SystemError> {
        jacobian_from(x, &self.masses)
    }
}

/// A zero of the reduced system is a central configuration provided body
/// `n-2` and the derived body have different x-coordinates; this checks that
/// the enclosures are disjoint.
pub fn gauge_validity(c: &ConfigurationBox, masses: &Masses) -> bool {
    let full = c.full(masses);
    let n = full.len();
    full[n - 2].x.is_disjoint(full[n - 1].x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let r = ReducedBox::from_points(&[-0.3, 0.5, 0.1, -0.4, 0.9]);
        assert_eq!(ReducedBox::from_config(&r.to_config()), r);
        assert_eq!(r.n(), 4);
    }

    #[test]
    fn collinear_three_body_residual() {
        let d = (5.0f64 / 12.0).cbrt();
        let masses = Masses::equal(3).unwrap();
        let res = reduced_residual(&ReducedBox::from_points(&[-d, 0.0, d]), &masses).unwrap();
        for v in &res.0 {
            assert!(v.mag() < 1e-14, "{v:?}");
        }
    }

    #[test]
    fn gauge_violation() {
        let masses = Masses::equal(3).unwrap();
        // body 1 at (0.5, 0), derived body at (0.5, -0.5): same x
        let c = ReducedBox::from_points(&[-1.0, 0.5, 0.5]).to_config();
        assert!(!gauge_validity(&c, &masses));
    }
}
