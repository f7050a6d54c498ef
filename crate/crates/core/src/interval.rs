//! Closed real intervals with outward rounding.
//!
//! Every operation returns an enclosure of the exact real result. Rounding is
//! handled with error-free transformations: the floating-point result is
//! computed with round-to-nearest, the exact rounding error is recovered
//! (TwoSum for addition, fused multiply-add for products, quotients and
//! square roots), and the bound is moved one ulp outward only when that error
//! points the wrong way. Exact operations therefore stay exact, which keeps
//! point intervals degenerate under `+`, `-` and `*` whenever the float result
//! is representable.
//!
//! Results below `TINY` in magnitude are always widened because the recovered
//! error term may itself underflow there.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("square root of an interval with negative part")]
    DomainError,
    #[error("invalid interval bounds")]
    InvalidBounds,
    #[error("shape mismatch: {0}")]
    ShapeError(&'static str),
}

const TINY: f64 = 1.0e-289; // ~2^-960

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

/// Sum `a + b` rounded toward -inf (`dir < 0`) or +inf (`dir > 0`).
#[inline]
fn add_round(a: f64, b: f64, dir: i8) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    if s.abs() < TINY {
        if a == 0.0 || b == 0.0 || a == -b {
            return s;
        }
        return if dir < 0 { down(s) } else { up(s) };
    }
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    if dir < 0 && err < 0.0 {
        down(s)
    } else if dir > 0 && err > 0.0 {
        up(s)
    } else {
        s
    }
}

#[inline]
fn mul_round(a: f64, b: f64, dir: i8) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return p;
    }
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if p.abs() < TINY {
        // the sign of the exact product is known even when it underflows
        let positive = (a > 0.0) == (b > 0.0);
        return match (dir < 0, positive) {
            (true, true) => down(p).max(0.0),
            (true, false) => down(p),
            (false, true) => up(p),
            (false, false) => up(p).min(0.0),
        };
    }
    let err = a.mul_add(b, -p);
    if dir < 0 && err < 0.0 {
        down(p)
    } else if dir > 0 && err > 0.0 {
        up(p)
    } else {
        p
    }
}

#[inline]
fn div_round(a: f64, b: f64, dir: i8) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return q;
    }
    if a == 0.0 {
        return 0.0;
    }
    if q.abs() < TINY || b.abs() < TINY || b.is_infinite() {
        return if dir < 0 { down(q) } else { up(q) };
    }
    // r = a - q*b exactly; sign(a/b - q) = sign(r) * sign(b)
    let r = (-q).mul_add(b, a);
    let sign = if r == 0.0 {
        0.0
    } else if (r > 0.0) == (b > 0.0) {
        1.0
    } else {
        -1.0
    };
    if dir < 0 && sign < 0.0 {
        down(q)
    } else if dir > 0 && sign > 0.0 {
        up(q)
    } else {
        q
    }
}

#[inline]
fn sqrt_round(a: f64, dir: i8) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let s = a.sqrt();
    if !s.is_finite() {
        return s;
    }
    if a < TINY {
        return if dir < 0 { down(s).max(0.0) } else { up(s) };
    }
    let r = (-s).mul_add(s, a);
    if dir < 0 && r < 0.0 {
        down(s)
    } else if dir > 0 && r > 0.0 {
        up(s)
    } else {
        s
    }
}

/// A non-empty closed interval `[lo, hi]`.
///
/// Emptiness is represented outside the type: operations that can produce an
/// empty set (`intersect`) return `Option<Interval>`.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// Panics if `lo > hi` or either bound is NaN.
    #[inline]
    pub fn new(lo: f64, hi: f64) -> Self {
        Self::try_new(lo, hi).expect("invalid interval bounds")
    }

    #[inline]
    pub fn try_new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            Err(IntervalError::InvalidBounds)
        } else {
            Ok(Self { lo, hi })
        }
    }

    #[inline]
    pub const fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub const ZERO: Interval = Interval::point(0.0);
    pub const ONE: Interval = Interval::point(1.0);

    /// The smallest interval containing `x` and `y`.
    #[inline]
    pub fn hull_of(x: f64, y: f64) -> Self {
        Self::new(x.min(y), x.max(y))
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    /// A representable point inside the interval.
    #[inline]
    pub fn mid(self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Width rounded upward.
    #[inline]
    pub fn width(self) -> f64 {
        add_round(self.hi, -self.lo, 1)
    }

    /// Half-width rounded upward.
    #[inline]
    pub fn rad(self) -> f64 {
        let m = self.mid();
        add_round(self.hi, -m, 1).max(add_round(m, -self.lo, 1))
    }

    /// Largest absolute value in the interval.
    #[inline]
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value in the interval.
    #[inline]
    pub fn mig(self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    #[inline]
    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    #[inline]
    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_zero(self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.lo > 0.0
    }

    #[inline]
    pub fn is_negative(self) -> bool {
        self.hi < 0.0
    }

    #[inline]
    pub fn subset_of(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self` lies in the topological interior of `other`.
    #[inline]
    pub fn subset_of_interior(self, other: Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    #[inline]
    pub fn is_disjoint(self, other: Interval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    #[inline]
    pub fn intersect(self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    #[inline]
    pub fn hull(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Widen both ends outward by `r >= 0`.
    #[inline]
    pub fn inflate(self, r: f64) -> Interval {
        Interval {
            lo: add_round(self.lo, -r, -1),
            hi: add_round(self.hi, r, 1),
        }
    }

    /// Interval with the same midpoint and width scaled by `factor`.
    pub fn scale_width(self, factor: f64) -> Interval {
        let m = Interval::point(self.mid());
        let r = self.rad();
        let half = mul_round(r, factor, 1);
        Interval {
            lo: add_round(m.lo, -half, -1).min(self.lo),
            hi: add_round(m.hi, half, 1).max(self.hi),
        }
    }

    #[inline]
    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval {
                lo: 0.0,
                hi: (-self.lo).max(self.hi),
            }
        }
    }

    #[inline]
    pub fn square(self) -> Interval {
        let a = self.mig();
        let b = self.mag();
        Interval {
            lo: mul_round(a, a, -1),
            hi: mul_round(b, b, 1),
        }
    }

    /// Integer power by repeated squaring; even powers are non-negative.
    pub fn powi(self, k: u32) -> Interval {
        match k {
            0 => Interval::ONE,
            1 => self,
            2 => self.square(),
            _ => {
                if k % 2 == 0 {
                    self.powi(k / 2).square()
                } else if self.lo >= 0.0 {
                    // monotone increasing on the non-negative axis
                    let lo = Interval::point(self.lo).powi_pos(k).lo;
                    let hi = Interval::point(self.hi).powi_pos(k).hi;
                    Interval { lo, hi }
                } else if self.hi <= 0.0 {
                    -(-self).powi(k)
                } else {
                    let hi = Interval::point(self.hi).powi_pos(k).hi;
                    let lo = -Interval::point(-self.lo).powi_pos(k).hi;
                    Interval { lo, hi }
                }
            }
        }
    }

    fn powi_pos(self, k: u32) -> Interval {
        let mut acc = Interval::ONE;
        for _ in 0..k {
            acc = acc * self;
        }
        acc
    }

    pub fn sqrt(self) -> Result<Interval, IntervalError> {
        if self.lo < 0.0 {
            return Err(IntervalError::DomainError);
        }
        Ok(Interval {
            lo: sqrt_round(self.lo, -1),
            hi: sqrt_round(self.hi, 1),
        })
    }

    /// Square root of the non-negative part; the caller knows the exact
    /// quantity is non-negative (e.g. a sum of squares).
    #[inline]
    pub fn sqrt_nonneg(self) -> Interval {
        Interval {
            lo: sqrt_round(self.lo.max(0.0), -1),
            hi: sqrt_round(self.hi.max(0.0), 1),
        }
    }

    pub fn recip(self) -> Result<Interval, IntervalError> {
        Interval::ONE.try_div(self)
    }

    pub fn try_div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.contains_zero() {
            return Err(IntervalError::DivisionByZero);
        }
        let (a, b) = (self, rhs);
        let (lo, hi) = if b.lo > 0.0 {
            if a.lo >= 0.0 {
                ((a.lo, b.hi), (a.hi, b.lo))
            } else if a.hi <= 0.0 {
                ((a.lo, b.lo), (a.hi, b.hi))
            } else {
                ((a.lo, b.lo), (a.hi, b.lo))
            }
        } else if a.lo >= 0.0 {
            ((a.hi, b.hi), (a.lo, b.lo))
        } else if a.hi <= 0.0 {
            ((a.hi, b.lo), (a.lo, b.hi))
        } else {
            ((a.hi, b.hi), (a.lo, b.hi))
        };
        Ok(Interval {
            lo: div_round(lo.0, lo.1, -1),
            hi: div_round(hi.0, hi.1, 1),
        })
    }

    /// Multiply by an exact scalar.
    #[inline]
    pub fn scale(self, s: f64) -> Interval {
        self * Interval::point(s)
    }

    /// Bounds sum with rounding toward -inf; used for scalar lower bounds.
    #[inline]
    pub fn add_down(a: f64, b: f64) -> f64 {
        add_round(a, b, -1)
    }

    #[inline]
    pub fn add_up(a: f64, b: f64) -> f64 {
        add_round(a, b, 1)
    }

    #[inline]
    pub fn mul_down(a: f64, b: f64) -> f64 {
        mul_round(a, b, -1)
    }

    #[inline]
    pub fn mul_up(a: f64, b: f64) -> f64 {
        mul_round(a, b, 1)
    }

    #[inline]
    pub fn div_down(a: f64, b: f64) -> f64 {
        div_round(a, b, -1)
    }

    #[inline]
    pub fn div_up(a: f64, b: f64) -> f64 {
        div_round(a, b, 1)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_round(self.lo, rhs.lo, -1),
            hi: add_round(self.hi, rhs.hi, 1),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_round(self.lo, -rhs.hi, -1),
            hi: add_round(self.hi, -rhs.lo, 1),
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b) = (self, rhs);
        // endpoint pairs giving the lower and upper bound, by sign class
        let (lo, hi) = if a.lo >= 0.0 {
            if b.lo >= 0.0 {
                ((a.lo, b.lo), (a.hi, b.hi))
            } else if b.hi <= 0.0 {
                ((a.hi, b.lo), (a.lo, b.hi))
            } else {
                ((a.hi, b.lo), (a.hi, b.hi))
            }
        } else if a.hi <= 0.0 {
            if b.lo >= 0.0 {
                ((a.lo, b.hi), (a.hi, b.lo))
            } else if b.hi <= 0.0 {
                ((a.hi, b.hi), (a.lo, b.lo))
            } else {
                ((a.lo, b.hi), (a.lo, b.lo))
            }
        } else if b.lo >= 0.0 {
            ((a.lo, b.hi), (a.hi, b.hi))
        } else if b.hi <= 0.0 {
            ((a.hi, b.lo), (a.lo, b.lo))
        } else {
            let lo = mul_round(a.lo, b.hi, -1).min(mul_round(a.hi, b.lo, -1));
            let hi = mul_round(a.lo, b.lo, 1).max(mul_round(a.hi, b.hi, 1));
            return Interval { lo, hi };
        };
        Interval {
            lo: mul_round(lo.0, lo.1, -1),
            hi: mul_round(hi.0, hi.1, 1),
        }
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl AddAssign for Interval {
    #[inline]
    fn add_assign(&mut self, rhs: Interval) {
        *self = *self + rhs;
    }
}

impl SubAssign for Interval {
    #[inline]
    fn sub_assign(&mut self, rhs: Interval) {
        *self = *self - rhs;
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |a, b| a + b)
    }
}

/// Dense vector of intervals.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct IntervalVector(pub Vec<Interval>);

impl IntervalVector {
    pub fn new(v: Vec<Interval>) -> Self {
        Self(v)
    }

    pub fn from_points(p: &[f64]) -> Self {
        Self(p.iter().map(|&x| Interval::point(x)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Interval::ZERO; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mid(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.mid()).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.width()).collect()
    }

    pub fn max_width(&self) -> f64 {
        self.0.iter().map(|x| x.width()).fold(0.0, f64::max)
    }

    pub fn intersect(&self, other: &IntervalVector) -> Option<IntervalVector> {
        if self.len() != other.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.intersect(*b))
            .collect::<Option<Vec<_>>>()
            .map(IntervalVector)
    }

    pub fn hull(&self, other: &IntervalVector) -> IntervalVector {
        IntervalVector(self.0.iter().zip(&other.0).map(|(a, b)| a.hull(*b)).collect())
    }

    pub fn subset_of(&self, other: &IntervalVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.subset_of(*b))
    }

    pub fn subset_of_interior(&self, other: &IntervalVector) -> bool {
        self.len() == other.len()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(a, b)| a.subset_of_interior(*b))
    }

    pub fn contains_point(&self, p: &[f64]) -> bool {
        self.len() == p.len() && self.0.iter().zip(p).all(|(a, &x)| a.contains(x))
    }

    pub fn add(&self, other: &IntervalVector) -> Result<IntervalVector, IntervalError> {
        if self.len() != other.len() {
            return Err(IntervalError::ShapeError("vector add"));
        }
        Ok(IntervalVector(self.0.iter().zip(&other.0).map(|(a, b)| *a + *b).collect()))
    }

    pub fn sub(&self, other: &IntervalVector) -> Result<IntervalVector, IntervalError> {
        if self.len() != other.len() {
            return Err(IntervalError::ShapeError("vector sub"));
        }
        Ok(IntervalVector(self.0.iter().zip(&other.0).map(|(a, b)| *a - *b).collect()))
    }
}

impl std::ops::Index<usize> for IntervalVector {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for IntervalVector {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.0[i]
    }
}

/// Dense row-major matrix of intervals.
#[derive(Clone, PartialEq, Debug)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Interval::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Interval::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Interval>>) -> Result<Self, IntervalError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(IntervalError::ShapeError("ragged rows"));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_points(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self {
            rows,
            cols,
            data: data.iter().map(|&x| Interval::point(x)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major midpoints.
    pub fn mid(&self) -> Vec<f64> {
        self.data.iter().map(|x| x.mid()).collect()
    }

    pub fn mul_mat(&self, other: &IntervalMatrix) -> Result<IntervalMatrix, IntervalError> {
        if self.cols != other.rows {
            return Err(IntervalError::ShapeError("matrix product"));
        }
        let mut out = IntervalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Interval::ZERO;
                for k in 0..self.cols {
                    acc += self[(i, k)] * other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &IntervalVector) -> Result<IntervalVector, IntervalError> {
        if self.cols != v.len() {
            return Err(IntervalError::ShapeError("matrix-vector product"));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = Interval::ZERO;
            for k in 0..self.cols {
                acc += self[(i, k)] * v[k];
            }
            out.push(acc);
        }
        Ok(IntervalVector(out))
    }

    pub fn sub(&self, other: &IntervalMatrix) -> Result<IntervalMatrix, IntervalError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(IntervalError::ShapeError("matrix sub"));
        }
        Ok(IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a - *b).collect(),
        })
    }
}

impl std::ops::Index<(usize, usize)> for IntervalMatrix {
    type Output = Interval;
    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntervalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Interval {
        &mut self.data[i * self.cols + j]
    }
}

/// Smallest float `u` with `u^3 >= v` (verified in interval arithmetic).
pub fn cbrt_upper(v: f64) -> f64 {
    let mut u = v.cbrt();
    while Interval::point(u).powi(3).lo() < v {
        u = up(u);
    }
    u
}

/// Largest float `l` with `l^3 <= v` (verified in interval arithmetic).
pub fn cbrt_lower(v: f64) -> f64 {
    let mut l = v.cbrt();
    while Interval::point(l).powi(3).hi() > v {
        l = down(l);
    }
    l
}
