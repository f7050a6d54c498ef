//! A priori bounds satisfied by every normalized central configuration with
//! total mass one: a lower bound on each mutual distance, lower and upper
//! bounds on the radius `max |q_i|`, and the existence of a pair at distance
//! at least one.

use crate::interval::{cbrt_lower, cbrt_upper, Interval};
use crate::model::{BodyBox, ConfigurationBox, Masses};

#[derive(Debug, Clone, PartialEq)]
pub struct BoundSet {
    /// `m_i m_j / M`, rounded down; divided by `R^2` at check time.
    pair_numerators: Vec<f64>,
    n: usize,
    pub r_max: f64,
    /// `cbrt((n-1) M / (4n))`, only meaningful for equal masses.
    pub r_min_equal_mass: Option<f64>,
    pub r_min_general: f64,
    pub dist_one: f64,
}

impl BoundSet {
    /// Larger of the two radius lower bounds.
    pub fn r_min(&self) -> f64 {
        self.r_min_equal_mass.unwrap_or(0.0).max(self.r_min_general)
    }

    /// Lower bound for `r_ij` given an upper bound `radius` of every `|q_k|`.
    pub fn r_min_pair(&self, i: usize, j: usize, radius: f64) -> f64 {
        let num = self.pair_numerators[i * self.n + j];
        Interval::div_down(num, Interval::mul_up(radius, radius))
    }
}

/// Upper bound on the radius, rounded up.
pub fn r_max_upper(n: usize) -> f64 {
    r_max_directed(n, true)
}

/// The same bound rounded down; only used to check the rounding direction.
pub fn r_max_lower(n: usize) -> f64 {
    r_max_directed(n, false)
}

fn r_max_directed(n: usize, upward: bool) -> f64 {
    let trivial = (n - 1) as f64;
    if n <= 4 {
        return trivial;
    }
    // (2^{1/3} + 2^{-2/3}) (n-2)^{2/3} = cbrt(2 (n-2)^2) + cbrt((n-2)^2 / 4)
    let k = ((n - 2) * (n - 2)) as f64;
    let bound = if upward {
        Interval::add_up(cbrt_upper(2.0 * k), cbrt_upper(k / 4.0))
    } else {
        Interval::add_down(cbrt_lower(2.0 * k), cbrt_lower(k / 4.0))
    };
    bound.min(trivial)
}

/// Bounds for `n` bodies; assumes the masses sum to one.
pub fn compute_bounds(n: usize, masses: &Masses) -> BoundSet {
    assert_eq!(n, masses.n());
    let total = masses.total();
    let mut pair_numerators = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mm = masses.interval(i) * masses.interval(j);
                pair_numerators[i * n + j] = Interval::div_down(mm.lo(), total);
            }
        }
    }
    let r_min_equal_mass = masses.all_equal().then(|| {
        let v = Interval::div_down(Interval::mul_down((n - 1) as f64, total), (4 * n) as f64);
        cbrt_lower(v)
    });
    BoundSet {
        pair_numerators,
        n,
        r_max: r_max_upper(n),
        r_min_equal_mass,
        r_min_general: 0.5,
        dist_one: 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AprioriVerdict {
    Excluded,
    Possible,
}

/// Tests a box against the bounds; every check is valid on boxes that
/// contain collisions.
pub fn check_apriori(c: &ConfigurationBox, b: &BoundSet, masses: &Masses) -> AprioriVerdict {
    check_apriori_full(&c.full(masses), b)
}

pub fn check_apriori_full(full: &[BodyBox], b: &BoundSet) -> AprioriVerdict {
    let n = full.len();
    let norms: Vec<Interval> = full.iter().map(BodyBox::norm).collect();
    let radius_hi = norms.iter().map(|r| r.hi()).fold(0.0, f64::max);
    if radius_hi < b.r_min() {
        return AprioriVerdict::Excluded;
    }
    if norms.iter().any(|r| r.lo() > b.r_max) {
        return AprioriVerdict::Excluded;
    }
    let radius = radius_hi.min(b.r_max);
    let mut any_far = false;
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = full[i].x - full[j].x;
            let dy = full[i].y - full[j].y;
            let r = (dx.square() + dy.square()).sqrt_nonneg();
            if r.hi() < b.r_min_pair(i, j, radius) {
                return AprioriVerdict::Excluded;
            }
            if r.hi() >= b.dist_one {
                any_far = true;
            }
        }
    }
    if any_far {
        AprioriVerdict::Possible
    } else {
        AprioriVerdict::Excluded
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_max_values() {
        assert_eq!(r_max_upper(3), 2.0);
        assert_eq!(r_max_upper(4), 3.0);
        let r5 = r_max_upper(5);
        assert!((r5 - 3.931112).abs() < 1e-6 && r5 < 4.0);
        for n in 5..12 {
            let up = r_max_upper(n);
            let lo = r_max_lower(n);
            assert!(lo <= up);
            assert!(up - lo <= 4.0 * f64::EPSILON * up);
        }
    }

    #[test]
    fn minimal_ball() {
        let m = Masses::equal(3).unwrap();
        let b = compute_bounds(3, &m);
        assert!((b.r_min_equal_mass.unwrap() - 0.550321).abs() < 1e-6);
    }
}
