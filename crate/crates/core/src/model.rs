//! Configurations of point masses in the plane.
//!
//! The last body is never stored: it is recovered from the centre of mass
//! condition `sum m_i q_i = 0`, so every configuration handled here is
//! centred by construction.

use thiserror::Error;

use crate::force::{bound_kernel, Axis, KernelError};
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("at least {0} bodies are required")]
    TooFewBodies(usize),
    #[error("masses must be positive and finite")]
    InvalidMass,
    #[error("a pair of bodies may collide inside the box")]
    SingularBox,
    #[error("expected {expected} bodies, got {got}")]
    WrongBodyCount { expected: usize, got: usize },
}

impl From<KernelError> for ModelError {
    fn from(_: KernelError) -> Self {
        ModelError::SingularBox
    }
}

/// Body masses together with their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Masses {
    values: Vec<f64>,
    enclosures: Vec<Interval>,
    total: f64,
    equal: bool,
}

impl Masses {
    pub fn new(values: Vec<f64>) -> Result<Self, ModelError> {
        if values.len() < 2 {
            return Err(ModelError::TooFewBodies(2));
        }
        if values.iter().any(|&m| !(m.is_finite() && m > 0.0)) {
            return Err(ModelError::InvalidMass);
        }
        let total = values.iter().sum();
        let equal = values.iter().all(|&m| m == values[0]);
        let enclosures = values.iter().map(|&m| Interval::point(m)).collect();
        Ok(Self {
            values,
            enclosures,
            total,
            equal,
        })
    }

    /// `n` bodies of mass `1/n`, so the total mass is one.
    pub fn equal(n: usize) -> Result<Self, ModelError> {
        if n < 2 {
            return Err(ModelError::TooFewBodies(2));
        }
        let m = 1.0 / n as f64;
        // 1/n is rarely exact; keep its enclosure
        let enc = Interval::ONE.try_div(Interval::point(n as f64)).expect("n > 0");
        Ok(Self {
            values: vec![m; n],
            enclosures: vec![enc; n],
            total: 1.0,
            equal: true,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Mass of body `i` as an enclosure.
    #[inline]
    pub fn interval(&self, i: usize) -> Interval {
        self.enclosures[i]
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn total_interval(&self) -> Interval {
        if self.equal {
            Interval::point(self.total)
        } else {
            self.values.iter().map(|&m| Interval::point(m)).sum()
        }
    }

    pub fn all_equal(&self) -> bool {
        self.equal
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Enclosure of one body's position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyBox {
    pub x: Interval,
    pub y: Interval,
}

impl BodyBox {
    pub fn new(x: Interval, y: Interval) -> Self {
        Self { x, y }
    }

    pub fn point(x: f64, y: f64) -> Self {
        Self {
            x: Interval::point(x),
            y: Interval::point(y),
        }
    }

    pub fn norm_sq(&self) -> Interval {
        self.x.square() + self.y.square()
    }

    pub fn norm(&self) -> Interval {
        self.norm_sq().sqrt_nonneg()
    }

    pub fn mid(&self) -> (f64, f64) {
        (self.x.mid(), self.y.mid())
    }

    pub fn intersect(&self, other: &BodyBox) -> Option<BodyBox> {
        Some(BodyBox {
            x: self.x.intersect(other.x)?,
            y: self.y.intersect(other.y)?,
        })
    }

    pub fn is_disjoint(&self, other: &BodyBox) -> bool {
        self.x.is_disjoint(other.x) || self.y.is_disjoint(other.y)
    }

    pub fn hull(&self, other: &BodyBox) -> BodyBox {
        BodyBox {
            x: self.x.hull(other.x),
            y: self.y.hull(other.y),
        }
    }

    pub fn subset_of(&self, other: &BodyBox) -> bool {
        self.x.subset_of(other.x) && self.y.subset_of(other.y)
    }
}

/// Positions of bodies `0..n-1`; body `n-1` is derived.
///
/// In the reduced gauge body `n-2` lies on the positive x-axis, so its
/// y-component is the exact zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigurationBox {
    pub bodies: Vec<BodyBox>,
    pub reduced_gauge: bool,
}

impl ConfigurationBox {
    pub fn new(bodies: Vec<BodyBox>, reduced_gauge: bool) -> Result<Self, ModelError> {
        if bodies.len() < 2 {
            return Err(ModelError::TooFewBodies(3));
        }
        Ok(Self {
            bodies,
            reduced_gauge,
        })
    }

    /// Number of bodies including the derived one.
    pub fn n(&self) -> usize {
        self.bodies.len() + 1
    }

    /// All `n` bodies, the last one recovered from the centre of mass.
    pub fn full(&self, masses: &Masses) -> Vec<BodyBox> {
        let mut all = self.bodies.clone();
        all.push(derive_last_body(&self.bodies, masses));
        all
    }
}

/// `q_{n-1} = -(1/m_{n-1}) sum_{i<n-1} m_i q_i`.
pub fn derive_last_body(free: &[BodyBox], masses: &Masses) -> BodyBox {
    if masses.all_equal() {
        // equal masses: q_{n-1} = -sum q_i, no rounding in the weights
        let mut x = Interval::ZERO;
        let mut y = Interval::ZERO;
        for b in free {
            x -= b.x;
            y -= b.y;
        }
        return BodyBox { x, y };
    }
    let last = free.len();
    let inv = Interval::point(masses.get(last)).recip().expect("positive mass");
    let mut x = Interval::ZERO;
    let mut y = Interval::ZERO;
    for (i, b) in free.iter().enumerate() {
        let m = Interval::point(masses.get(i));
        x -= m * b.x;
        y -= m * b.y;
    }
    BodyBox {
        x: x * inv,
        y: y * inv,
    }
}

/// Differences `q_i - q_j` and squared distances for every ordered pair.
pub struct PairTable {
    n: usize,
    dx: Vec<Interval>,
    dy: Vec<Interval>,
    r2: Vec<Interval>,
}

impl PairTable {
    pub fn new(full: &[BodyBox]) -> Self {
        let n = full.len();
        let mut dx = vec![Interval::ZERO; n * n];
        let mut dy = vec![Interval::ZERO; n * n];
        let mut r2 = vec![Interval::ZERO; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let ddx = full[i].x - full[j].x;
                let ddy = full[i].y - full[j].y;
                let rr = ddx.square() + ddy.square();
                dx[i * n + j] = ddx;
                dy[i * n + j] = ddy;
                dx[j * n + i] = -ddx;
                dy[j * n + i] = -ddy;
                r2[i * n + j] = rr;
                r2[j * n + i] = rr;
            }
        }
        Self { n, dx, dy, r2 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `x_i - x_j`.
    #[inline]
    pub fn dx(&self, i: usize, j: usize) -> Interval {
        self.dx[i * self.n + j]
    }

    /// `y_i - y_j`.
    #[inline]
    pub fn dy(&self, i: usize, j: usize) -> Interval {
        self.dy[i * self.n + j]
    }

    #[inline]
    pub fn r2(&self, i: usize, j: usize) -> Interval {
        self.r2[i * self.n + j]
    }

    #[inline]
    pub fn r(&self, i: usize, j: usize) -> Interval {
        self.r2(i, j).sqrt_nonneg()
    }

    /// The two bodies may coincide inside the box.
    #[inline]
    pub fn may_collide(&self, i: usize, j: usize) -> bool {
        self.dx(i, j).contains_zero() && self.dy(i, j).contains_zero()
    }

    pub fn any_collision(&self) -> bool {
        (0..self.n).any(|i| ((i + 1)..self.n).any(|j| self.may_collide(i, j)))
    }
}

/// Enclosure of the attraction `sum_{j != i} m_j (q_i - q_j) / r_ij^3` on body `i`.
pub fn attraction(
    pairs: &PairTable,
    masses: &Masses,
    i: usize,
) -> Result<(Interval, Interval), ModelError> {
    let mut sx = Interval::ZERO;
    let mut sy = Interval::ZERO;
    for j in 0..pairs.n() {
        if j == i {
            continue;
        }
        let (dx, dy) = (pairs.dx(i, j), pairs.dy(i, j));
        let m = masses.interval(j);
        sx += m * bound_kernel(dx, dy, 1, 3, Axis::X)?;
        sy += m * bound_kernel(dx, dy, 1, 3, Axis::Y)?;
    }
    Ok((sx, sy))
}

/// Componentwise enclosure of the central configuration residual
/// `F_i = q_i - sum_{j != i} m_j (q_i - q_j)/r_ij^3` for all bodies,
/// ordered `(x_0, y_0, x_1, y_1, ...)`.
pub fn residual(full: &[BodyBox], masses: &Masses) -> Result<Vec<Interval>, ModelError> {
    check_count(full, masses)?;
    let pairs = PairTable::new(full);
    let mut out = Vec::with_capacity(2 * full.len());
    for (i, b) in full.iter().enumerate() {
        let (sx, sy) = attraction(&pairs, masses, i)?;
        out.push(b.x - sx);
        out.push(b.y - sy);
    }
    Ok(out)
}

fn check_count(full: &[BodyBox], masses: &Masses) -> Result<(), ModelError> {
    if full.len() != masses.n() {
        return Err(ModelError::WrongBodyCount {
            expected: masses.n(),
            got: full.len(),
        });
    }
    Ok(())
}

/// Potential, moment of inertia and the derived invariants of a box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarEnclosures {
    pub u: Interval,
    pub i: Interval,
    /// `U sqrt(I) / M^{5/2}`, invariant under rotation and scaling.
    pub j: Interval,
    /// Moeckel's normalized potential, masses set to one.
    pub p: Interval,
}

/// `U = sum_{i<j} m_i m_j / r_ij` and `I = sum m_i |q_i|^2`.
///
/// For a centred configuration `I` also equals `sum_{i<j} m_i m_j r_ij^2 / M`;
/// both forms are evaluated and intersected.
pub fn scalars(full: &[BodyBox], masses: &Masses) -> Result<ScalarEnclosures, ModelError> {
    check_count(full, masses)?;
    let n = full.len();
    let pairs = PairTable::new(full);
    let mut u = Interval::ZERO;
    let mut inv_r_sum = Interval::ZERO;
    let mut i_pairs = Interval::ZERO;
    for a in 0..n {
        for b in (a + 1)..n {
            if pairs.may_collide(a, b) {
                return Err(ModelError::SingularBox);
            }
            let mm = masses.interval(a) * masses.interval(b);
            let inv_r = pairs.r(a, b).recip().map_err(|_| ModelError::SingularBox)?;
            u += mm * inv_r;
            inv_r_sum += inv_r;
            i_pairs += mm * pairs.r2(a, b);
        }
    }
    let total = masses.total_interval();
    let i_pairs = i_pairs.try_div(total).expect("positive mass");
    let mut i_direct = Interval::ZERO;
    let mut sum_sq = Interval::ZERO;
    for (k, b) in full.iter().enumerate() {
        let q2 = b.norm_sq();
        i_direct += masses.interval(k) * q2;
        sum_sq += q2;
    }
    let i = i_direct.intersect(i_pairs).unwrap_or(i_direct);
    let m52 = total.powi(5).sqrt_nonneg();
    let j = (u * i.sqrt_nonneg()).try_div(m52).expect("positive mass");
    let p = inv_r_sum * sum_sq.sqrt_nonneg();
    Ok(ScalarEnclosures { u, i, j, p })
}

/// Interval cross product `(a - c) x (b - c)`, positive for a
/// counter-clockwise turn.
pub fn cross(a: &BodyBox, b: &BodyBox, c: &BodyBox) -> Interval {
    (a.x - c.x) * (b.y - c.y) - (a.y - c.y) * (b.x - c.x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_body_recovers_centre_of_mass() {
        let masses = Masses::equal(3).unwrap();
        let free = vec![BodyBox::point(-1.0, 0.0), BodyBox::point(1.0, 0.0)];
        let last = derive_last_body(&free, &masses);
        assert_eq!(last, BodyBox::point(0.0, 0.0));
    }

    #[test]
    fn unequal_masses_derived_body() {
        let masses = Masses::new(vec![1.0, 2.0, 1.0]).unwrap();
        let free = vec![BodyBox::point(1.0, 0.0), BodyBox::point(0.0, 1.0)];
        let last = derive_last_body(&free, &masses);
        assert_eq!(last, BodyBox::point(-1.0, -2.0));
    }

    #[test]
    fn collision_is_reported() {
        let masses = Masses::equal(3).unwrap();
        let full = vec![
            BodyBox::new(Interval::new(-0.1, 0.1), Interval::new(-0.1, 0.1)),
            BodyBox::point(0.0, 0.0),
            BodyBox::point(1.0, 0.0),
        ];
        assert_eq!(residual(&full, &masses), Err(ModelError::SingularBox));
        assert_eq!(scalars(&full, &masses).unwrap_err(), ModelError::SingularBox);
    }

    #[test]
    fn invalid_masses() {
        assert_eq!(Masses::new(vec![1.0, -1.0]).unwrap_err(), ModelError::InvalidMass);
        assert_eq!(Masses::equal(1).unwrap_err(), ModelError::TooFewBodies(2));
    }
}
