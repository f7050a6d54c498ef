//! Tests that prove a box contains no normalized central configuration, or
//! shrink it without losing any.

use thiserror::Error;

use crate::bounds::{check_apriori_full, AprioriVerdict, BoundSet};
use crate::force::{bound_kernel, Axis};
use crate::interval::Interval;
use crate::model::{scalars, BodyBox, ConfigurationBox, Masses, PairTable};

/// Names used in usage counters and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestName {
    AprioriBounds,
    UEqI,
    ClusterTest,
    DistanceTest,
    CheckZero,
}

impl TestName {
    pub fn report_name(self) -> &'static str {
        match self {
            TestName::AprioriBounds => "checkAprioriBounds",
            TestName::UEqI => "U = I",
            TestName::ClusterTest => "clusterTest",
            TestName::DistanceTest => "distanceTest",
            TestName::CheckZero => "checkZero",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExclusionVerdict {
    Excluded(TestName),
    Refined(ConfigurationBox),
    Unknown,
}

/// Outcome of a test that can only exclude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exclusion {
    Excluded,
    Unknown,
}

impl Exclusion {
    fn from_bool(excluded: bool) -> Self {
        if excluded {
            Exclusion::Excluded
        } else {
            Exclusion::Unknown
        }
    }
}

/// Body ordering imposed on the search domain to remove permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ordering {
    Increasing,
    #[default]
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("the ordering test assumes equal masses")]
pub struct RefusedUnequalMasses;

/// A set of bodies; no body outside is within `epsilon` of a member.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub members: Vec<usize>,
    pub epsilon: f64,
}

impl Cluster {
    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut k = i;
    while parent[k] != r {
        let next = parent[k];
        parent[k] = r;
        k = next;
    }
    r
}

/// Partition bodies by transitive linking of pairs whose distance lower
/// bound is at most `epsilon`. Clusters are ordered by smallest member.
pub fn cluster_partition(full: &[BodyBox], epsilon: f64) -> Vec<Cluster> {
    let pairs = PairTable::new(full);
    partition_with(&pairs, epsilon)
}

fn partition_with(pairs: &PairTable, epsilon: f64) -> Vec<Cluster> {
    let n = pairs.n();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if pairs.r(i, j).lo() <= epsilon {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut out: Vec<Cluster> = Vec::new();
    let mut root_index = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_index[r] == usize::MAX {
            root_index[r] = out.len();
            out.push(Cluster {
                members: Vec::new(),
                epsilon,
            });
        }
        out[root_index[r]].members.push(i);
    }
    out
}

fn cross_pairs_separated(pairs: &PairTable, cl: &Cluster) -> bool {
    (0..pairs.n()).all(|i| {
        !cl.contains(i) || (0..pairs.n()).all(|k| cl.contains(k) || !pairs.may_collide(i, k))
    })
}

/// Excludes the box when `sum_{i in C} m_i q_i - sum_{i in C, j not in C}
/// m_i m_j (q_i - q_j)/r_ij^3` provably avoids zero. Collisions inside the
/// cluster are allowed.
pub fn cluster_zero_test(full: &[BodyBox], cl: &Cluster, masses: &Masses) -> Exclusion {
    cluster_zero_with(full, &PairTable::new(full), cl, masses)
}

fn cluster_zero_with(full: &[BodyBox], pairs: &PairTable, cl: &Cluster, masses: &Masses) -> Exclusion {
    if !cross_pairs_separated(pairs, cl) {
        return Exclusion::Unknown;
    }
    let n = full.len();
    let mut ex = Interval::ZERO;
    let mut ey = Interval::ZERO;
    for &i in &cl.members {
        let mi = masses.interval(i);
        ex += mi * full[i].x;
        ey += mi * full[i].y;
        for j in (0..n).filter(|j| !cl.contains(*j)) {
            let mm = mi * masses.interval(j);
            let (dx, dy) = (pairs.dx(i, j), pairs.dy(i, j));
            let (Ok(kx), Ok(ky)) = (
                bound_kernel(dx, dy, 1, 3, Axis::X),
                bound_kernel(dx, dy, 1, 3, Axis::Y),
            ) else {
                return Exclusion::Unknown;
            };
            ex -= mm * kx;
            ey -= mm * ky;
        }
    }
    Exclusion::from_bool(!ex.contains_zero() || !ey.contains_zero())
}

/// Every central configuration satisfies `I_C = U_C + F_C` for any cluster
/// `C`, where `F_C` collects the radial part of the external forces. The box
/// is excluded when `sup I_C < inf U_C + inf F_C`; for the whole set
/// (`F = 0`) also when `sup U < inf I`.
pub fn cluster_fui_test(full: &[BodyBox], cl: &Cluster, masses: &Masses) -> Exclusion {
    cluster_fui_with(full, &PairTable::new(full), cl, masses)
}

fn cluster_fui_with(full: &[BodyBox], pairs: &PairTable, cl: &Cluster, masses: &Masses) -> Exclusion {
    if !cross_pairs_separated(pairs, cl) {
        return Exclusion::Unknown;
    }
    let n = full.len();
    let whole = cl.members.len() == n;
    let mut u_lo = 0.0f64;
    let mut u = Interval::ZERO;
    let mut collision = false;
    for (a, &i) in cl.members.iter().enumerate() {
        for &j in &cl.members[a + 1..] {
            let mm = masses.interval(i) * masses.interval(j);
            let r = pairs.r(i, j);
            u_lo = Interval::add_down(u_lo, Interval::div_down(mm.lo(), r.hi()));
            if pairs.may_collide(i, j) || r.lo() <= 0.0 {
                collision = true;
            } else {
                u += mm * r.recip().expect("positive distance");
            }
        }
    }
    let mut inertia = Interval::ZERO;
    for &i in &cl.members {
        inertia += masses.interval(i) * full[i].norm_sq();
    }
    let mut f = Interval::ZERO;
    if !whole {
        for &i in &cl.members {
            let mi = masses.interval(i);
            for k in (0..n).filter(|k| !cl.contains(*k)) {
                let (dx, dy) = (pairs.dx(i, k), pairs.dy(i, k));
                let (Ok(kx), Ok(ky)) = (
                    bound_kernel(dx, dy, 1, 3, Axis::X),
                    bound_kernel(dx, dy, 1, 3, Axis::Y),
                ) else {
                    return Exclusion::Unknown;
                };
                f += mi * masses.interval(k) * (full[i].x * kx + full[i].y * ky);
            }
        }
    }
    if inertia.hi() < Interval::add_down(u_lo, f.lo()) {
        return Exclusion::Excluded;
    }
    if whole && !collision && u.hi() < inertia.lo() {
        return Exclusion::Excluded;
    }
    Exclusion::Unknown
}

/// `U = I` at every normalized central configuration.
pub fn check_u_eq_i(full: &[BodyBox], masses: &Masses) -> Exclusion {
    match scalars(full, masses) {
        Ok(s) => Exclusion::from_bool(s.u.is_disjoint(s.i)),
        Err(_) => Exclusion::Unknown,
    }
}

/// Constraints of the normalized search domain: body `n-2` is the furthest
/// one and lies on the positive x-axis, body 0 is leftmost with `y_0 >= 0`,
/// body 1 is lowest, and the x-coordinates of the remaining bodies
/// (`2..n-3`, then the derived body) are monotone.
pub fn distance_order_test(
    full: &[BodyBox],
    masses: &Masses,
    ordering: Ordering,
) -> Result<Exclusion, RefusedUnequalMasses> {
    if !masses.all_equal() {
        return Err(RefusedUnequalMasses);
    }
    Ok(Exclusion::from_bool(order_violated(full, ordering)))
}

fn order_violated(full: &[BodyBox], ordering: Ordering) -> bool {
    let n = full.len();
    let lim = (n - 1) as f64;
    let far = full[n - 2].x;
    let x0 = full[0].x;
    if far.hi() < 0.5 || far.lo() > lim {
        return true;
    }
    if x0.lo() >= 0.0 || x0.hi() < -lim {
        return true;
    }
    if full[0].y.hi() < 0.0 {
        return true;
    }
    let far_sq = far.square().hi();
    for b in full {
        if b.x.hi() < x0.lo() || b.x.lo() > far.hi() {
            return true;
        }
        if b.norm_sq().lo() > far_sq {
            return true;
        }
    }
    if n >= 4 {
        let y1 = full[1].y;
        if y1.lo() > 0.0 || y1.hi() < -lim {
            return true;
        }
        if full.iter().any(|b| b.y.hi() < y1.lo() || b.y.lo() > lim) {
            return true;
        }
    }
    let chain: Vec<usize> = (2..n.saturating_sub(2)).chain(std::iter::once(n - 1)).collect();
    for w in chain.windows(2) {
        let (a, b) = (full[w[0]].x, full[w[1]].x);
        let bad = match ordering {
            Ordering::Increasing => a.lo() > b.hi(),
            Ordering::Decreasing => a.hi() < b.lo(),
        };
        if bad {
            return true;
        }
    }
    false
}

/// At a central configuration `q_i = sum_{j != i} m_j (q_i - q_j)/r_ij^3`.
/// Each body whose distances to all others are bounded away from zero is
/// intersected with the right-hand side, sequentially so later bodies see
/// the refined boxes. The derived body is only checked.
pub fn check_zero_refine(c: &ConfigurationBox, masses: &Masses) -> ExclusionVerdict {
    let mut cur = c.clone();
    let n = c.n();
    let mut tested = false;
    for i in 0..n {
        let full = cur.full(masses);
        let Some((sx, sy)) = attraction_if_separated(&full, masses, i) else {
            continue;
        };
        tested = true;
        let b = full[i];
        let (Some(nx), Some(ny)) = (b.x.intersect(sx), b.y.intersect(sy)) else {
            return ExclusionVerdict::Excluded(TestName::CheckZero);
        };
        if i == n - 1 {
            continue;
        }
        let body = &mut cur.bodies[i];
        body.x = nx;
        if !(cur.reduced_gauge && i == n - 2) {
            body.y = ny;
        }
    }
    if tested {
        ExclusionVerdict::Refined(cur)
    } else {
        ExclusionVerdict::Unknown
    }
}

fn attraction_if_separated(full: &[BodyBox], masses: &Masses, i: usize) -> Option<(Interval, Interval)> {
    let mut sx = Interval::ZERO;
    let mut sy = Interval::ZERO;
    for (j, bj) in full.iter().enumerate() {
        if j == i {
            continue;
        }
        let dx = full[i].x - bj.x;
        let dy = full[i].y - bj.y;
        let kx = bound_kernel(dx, dy, 1, 3, Axis::X).ok()?;
        let ky = bound_kernel(dx, dy, 1, 3, Axis::Y).ok()?;
        let m = masses.interval(j);
        sx += m * kx;
        sy += m * ky;
    }
    Some((sx, sy))
}

/// Both cluster partitions (collision linking and box-diameter linking),
/// each proper cluster tested with the zero and moment tests, plus the
/// whole-set moment test when a collision is possible.
pub fn cluster_battery(full: &[BodyBox], masses: &Masses) -> Exclusion {
    let n = full.len();
    let pairs = PairTable::new(full);
    let p0 = partition_with(&pairs, 0.0);
    let collision = p0.len() < n;
    let mut tried: Vec<Vec<usize>> = Vec::new();
    let diam = full
        .iter()
        .map(|b| b.x.width().max(b.y.width()))
        .fold(0.0, f64::max);
    let p1 = if diam > 0.0 { partition_with(&pairs, diam) } else { Vec::new() };
    for cl in p0.iter().chain(&p1) {
        let size = cl.members.len();
        if size < 2 || size == n || tried.contains(&cl.members) {
            continue;
        }
        tried.push(cl.members.clone());
        if cluster_zero_with(full, &pairs, cl, masses) == Exclusion::Excluded
            || cluster_fui_with(full, &pairs, cl, masses) == Exclusion::Excluded
        {
            return Exclusion::Excluded;
        }
    }
    if collision {
        let whole = Cluster {
            members: (0..n).collect(),
            epsilon: 0.0,
        };
        return cluster_fui_with(full, &pairs, &whole, masses);
    }
    Exclusion::Unknown
}

/// Runs the tests in order: a priori bounds, `U = I`, clusters, ordering,
/// zero checking. The first exclusion wins; otherwise the zero-checking
/// refinement (if any) is returned.
pub fn run_battery(
    c: &ConfigurationBox,
    masses: &Masses,
    bounds: &BoundSet,
    ordering: Option<Ordering>,
) -> ExclusionVerdict {
    let full = c.full(masses);
    if check_apriori_full(&full, bounds) == AprioriVerdict::Excluded {
        return ExclusionVerdict::Excluded(TestName::AprioriBounds);
    }
    if check_u_eq_i(&full, masses) == Exclusion::Excluded {
        return ExclusionVerdict::Excluded(TestName::UEqI);
    }
    if cluster_battery(&full, masses) == Exclusion::Excluded {
        return ExclusionVerdict::Excluded(TestName::ClusterTest);
    }
    if let Some(ord) = ordering {
        if distance_order_test(&full, masses, ord) == Ok(Exclusion::Excluded) {
            return ExclusionVerdict::Excluded(TestName::DistanceTest);
        }
    }
    check_zero_refine(c, masses)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight(x: f64, y: f64, r: f64) -> BodyBox {
        BodyBox::new(Interval::point(x).inflate(r), Interval::point(y).inflate(r))
    }

    #[test]
    fn partition_examples() {
        let full = vec![
            BodyBox::point(0.0, 0.0),
            BodyBox::point(1.0, 0.0),
            BodyBox::point(0.0, 1.0),
        ];
        assert_eq!(cluster_partition(&full, 0.1).len(), 3);
        assert_eq!(cluster_partition(&full, 10.0).len(), 1);
        let full = vec![tight(0.0, 0.0, 0.1), tight(0.05, 0.0, 0.1), BodyBox::point(3.0, 0.0)];
        let p = cluster_partition(&full, 0.0);
        assert_eq!(p[0].members, vec![0, 1]);
        assert_eq!(p[1].members, vec![2]);
    }

    #[test]
    fn u_eq_i_on_separated_line() {
        let m = Masses::equal(3).unwrap();
        let full = vec![tight(2.0, 0.0, 1e-9), tight(-2.0, 0.0, 1e-9), tight(0.0, 0.0, 1e-9)];
        assert_eq!(check_u_eq_i(&full, &m), Exclusion::Excluded);
        let whole = Cluster { members: vec![0, 1, 2], epsilon: 0.0 };
        assert_eq!(cluster_fui_test(&full, &whole, &m), Exclusion::Excluded);
    }

    #[test]
    fn unequal_masses_refused() {
        let m = Masses::new(vec![1.0, 2.0, 3.0]).unwrap();
        let full = vec![BodyBox::point(0.0, 0.0); 3];
        assert_eq!(distance_order_test(&full, &m, Ordering::Decreasing), Err(RefusedUnequalMasses));
    }
}
