//! Merging certified zeros into distinct central configurations and deciding
//! reflection symmetry.
//!
//! Two certified boxes describe the same configuration if an orthogonal map
//! and a relabelling send one zero into a box where the other is the only
//! zero. The orthogonal maps are enclosed by interval matrices built from the
//! body boxes themselves (`cos` and `sin` of a body's polar angle are
//! `x / |q|` and `y / |q|`), so no transcendental functions are needed.
//!
//! A map `T` that sends body `p` to the positive x-axis keeps the reduced
//! gauge, hence the image of a zero is again a zero of the reduced system.
//! If it lies in the uniqueness region of the target, the two coincide;
//! otherwise the interval hull of both is certified with the Krawczyk
//! operator, inflating it a few times if needed.

use crate::interval::{Interval, IntervalVector};
use crate::krawczyk::{krawczyk_iterate, KrawczykOutcome, DEFAULT_MAX_ITER};
use crate::model::{BodyBox, Masses};
use crate::reduced::{ReducedBox, ReducedSystem};
use crate::search::SolutionBox;

pub const BLOW_UP_FACTOR: f64 = 1.5;
pub const BLOW_UP_ROUNDS: usize = 8;
/// Bodies farther apart than this (midpoint distance) are never paired.
const MATCH_TOLERANCE: f64 = 1e-3;

/// A symmetry line through the origin other than the x-axis: the bisector
/// of the directions of body `n-2` and body `body`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSymmetry {
    pub body: usize,
    /// Enclosure of a unit vector along the line.
    pub direction: (Interval, Interval),
    pub permutation: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Symmetry {
    OXSymmetric { permutation: Vec<usize> },
    LineSymmetric(LineSymmetry),
    ProvedAsymmetric,
    Undetermined,
}

impl Symmetry {
    pub fn is_symmetric(&self) -> bool {
        matches!(self, Symmetry::OXSymmetric { .. } | Symmetry::LineSymmetric(_))
    }
}

/// Everything the symmetry search established about one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryFindings {
    /// Permutation certified for the reflection about the x-axis.
    pub ox: Option<Vec<usize>>,
    /// First certified symmetry line other than the x-axis.
    pub line: Option<LineSymmetry>,
    pub asymmetric: bool,
}

impl SymmetryFindings {
    pub fn verdict(&self) -> Symmetry {
        if let Some(p) = &self.ox {
            Symmetry::OXSymmetric { permutation: p.clone() }
        } else if let Some(l) = &self.line {
            Symmetry::LineSymmetric(l.clone())
        } else if self.asymmetric {
            Symmetry::ProvedAsymmetric
        } else {
            Symmetry::Undetermined
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CCRecord {
    pub representative: SolutionBox,
    pub members: Vec<SolutionBox>,
    pub findings: SymmetryFindings,
    pub symmetry: Symmetry,
    pub collinear: bool,
}

/// The orthogonal map `q -> R q` with `R = [[c, s], [-s, c]]` (rotation by
/// minus the angle of `(c, s)`), followed by `y -> -y` when `reflect`.
#[derive(Debug, Clone, Copy)]
struct Orthogonal {
    c: Interval,
    s: Interval,
    reflect: bool,
}

impl Orthogonal {
    /// Rotation taking `b` to the positive x-axis.
    fn aligning(b: &BodyBox, reflect: bool) -> Option<Self> {
        let r = b.norm();
        if !r.is_positive() {
            return None;
        }
        let c = b.x.try_div(r).ok()?.intersect(Interval::new(-1.0, 1.0))?;
        let s = b.y.try_div(r).ok()?.intersect(Interval::new(-1.0, 1.0))?;
        Some(Self { c, s, reflect })
    }

    fn x_axis_reflection() -> Self {
        Self {
            c: Interval::ONE,
            s: Interval::ZERO,
            reflect: true,
        }
    }

    fn apply(&self, b: &BodyBox) -> BodyBox {
        let x = self.c * b.x + self.s * b.y;
        let y = self.c * b.y - self.s * b.x;
        BodyBox::new(x, if self.reflect { -y } else { y })
    }
}

/// Map every body of `src` by `t`, pair the images with the bodies of
/// `target` and return the permutation (`perm[k]` = label of the image of
/// body `k`) and the image in reduced coordinates. `pivot` must be the body
/// sent to the positive x-axis; its image becomes body `n-2`.
fn image_in_gauge(
    src: &[BodyBox],
    target: &[BodyBox],
    t: &Orthogonal,
    pivot: usize,
) -> Option<(Vec<usize>, ReducedBox)> {
    let n = src.len();
    let images: Vec<BodyBox> = src.iter().map(|b| t.apply(b)).collect();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for (k, img) in images.iter().enumerate() {
        let (ix, iy) = img.mid();
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for (l, tb) in target.iter().enumerate() {
            let (tx, ty) = tb.mid();
            let d = (ix - tx).hypot(iy - ty);
            if d < best_d {
                best_d = d;
                best = Some(l);
            }
        }
        let l = best?;
        let slack = img.x.width().max(img.y.width()) + target[l].x.width().max(target[l].y.width());
        if best_d > MATCH_TOLERANCE + slack || used[l] {
            return None;
        }
        used[l] = true;
        perm[k] = l;
    }
    if perm[pivot] != n - 2 {
        return None;
    }
    let mut w = vec![BodyBox::point(0.0, 0.0); n];
    for (k, img) in images.into_iter().enumerate() {
        w[perm[k]] = img;
    }
    let r = src[pivot].norm();
    let x = w[n - 2].x.intersect(r)?;
    w[n - 2] = BodyBox::new(x, Interval::ZERO);
    let mut coords = Vec::with_capacity(2 * n - 3);
    for b in &w[..n - 2] {
        coords.push(b.x);
        coords.push(b.y);
    }
    coords.push(w[n - 2].x);
    Some((perm, ReducedBox::new(IntervalVector(coords))))
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlowUp {
    UniqueZero { enclosure: ReducedBox, rounds: usize },
    GiveUp,
}

/// Certify a unique zero in `hull`, widening it by [`BLOW_UP_FACTOR`] per
/// round (plus a small absolute floor so degenerate coordinates grow too).
pub fn blow_up(hull: &ReducedBox, masses: &Masses, max_rounds: usize) -> BlowUp {
    let sys = ReducedSystem::new(masses.clone());
    let mut factor = 1.0;
    for round in 0..=max_rounds {
        let coords = IntervalVector(
            hull.coords
                .0
                .iter()
                .map(|iv| iv.scale_width(factor).inflate(round as f64 * 1e-12 * (1.0 + iv.mag())))
                .collect(),
        );
        if let KrawczykOutcome::UniqueZero { enclosure, .. } = krawczyk_iterate(&sys, &coords, DEFAULT_MAX_ITER) {
            return BlowUp::UniqueZero {
                enclosure: ReducedBox::new(enclosure),
                rounds: round,
            };
        }
        factor *= BLOW_UP_FACTOR;
    }
    BlowUp::GiveUp
}

/// The image `w` of the zero of `a` is the zero of `a` itself.
fn certify_fixed(a: &SolutionBox, w: &ReducedBox, masses: &Masses) -> bool {
    if w.coords.subset_of(&a.region.coords) {
        return true;
    }
    let hull = ReducedBox::new(a.reduced.coords.hull(&w.coords));
    matches!(blow_up(&hull, masses, BLOW_UP_ROUNDS), BlowUp::UniqueZero { .. })
}

/// Whether `a` and `b` enclose the same configuration up to rotation,
/// reflection and relabelling.
pub fn same_solution(a: &SolutionBox, b: &SolutionBox, masses: &Masses) -> bool {
    if a.n() != b.n() || a.scalars.j.is_disjoint(b.scalars.j) {
        return false;
    }
    let fa = a.full.full(masses);
    let fb = b.full.full(masses);
    let n = fa.len();
    let ra = fa[n - 2].norm();
    for reflect in [false, true] {
        for j in 0..n {
            if fb[j].norm().is_disjoint(ra) {
                continue;
            }
            let Some(t) = Orthogonal::aligning(&fb[j], reflect) else {
                continue;
            };
            let Some((_, w)) = image_in_gauge(&fb, &fa, &t, j) else {
                continue;
            };
            if certify_fixed(a, &w, masses) {
                return true;
            }
        }
    }
    false
}

/// Reflection about the bisector of the directions of body `n-2` and body
/// `i`, i.e. the map sending `q_i` to the positive x-axis composed with
/// `y -> -y`.
fn bisector_reflection(full: &[BodyBox], i: usize) -> Option<Orthogonal> {
    Orthogonal::aligning(&full[i], true)
}

fn axis_direction(t: &Orthogonal) -> (Interval, Interval) {
    // (c, s) is the direction of body i, the axis bisects it and (1, 0).
    let (c, s) = (t.c, t.s);
    let (dx, dy) = if (Interval::ONE + c).lo() > 0.5 {
        (Interval::ONE + c, s)
    } else {
        (s, Interval::ONE - c)
    };
    let norm = (dx.square() + dy.square()).sqrt_nonneg();
    match (dx.try_div(norm), dy.try_div(norm)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => (Interval::new(-1.0, 1.0), Interval::new(-1.0, 1.0)),
    }
}

/// Candidate axes: the x-axis (`None`) and every bisector towards a body
/// whose distance from the origin may equal that of body `n-2`.
fn candidate_axes(full: &[BodyBox]) -> Vec<Option<usize>> {
    let n = full.len();
    let r = full[n - 2].norm();
    std::iter::once(None)
        .chain((0..n).filter(|&i| i != n - 2 && !full[i].norm().is_disjoint(r)).map(Some))
        .collect()
}

fn try_axis(s: &SolutionBox, full: &[BodyBox], axis: Option<usize>, masses: &Masses) -> Option<(Vec<usize>, Orthogonal)> {
    let n = full.len();
    let (t, pivot) = match axis {
        None => (Orthogonal::x_axis_reflection(), n - 2),
        Some(i) => (bisector_reflection(full, i)?, i),
    };
    let (perm, w) = image_in_gauge(full, full, &t, pivot)?;
    certify_fixed(s, &w, masses).then_some((perm, t))
}

/// Some reflected body is provably away from every body.
fn axis_refuted(full: &[BodyBox], axis: Option<usize>) -> bool {
    let t = match axis {
        None => Orthogonal::x_axis_reflection(),
        Some(i) => match bisector_reflection(full, i) {
            Some(t) => t,
            None => return false,
        },
    };
    full.iter()
        .map(|b| t.apply(b))
        .any(|img| full.iter().all(|b| img.is_disjoint(b)))
}

/// Try the x-axis and each bisector; record the first certified line of
/// each kind. If none is certified, try to refute every candidate axis.
pub fn symmetry_findings(s: &SolutionBox, masses: &Masses) -> SymmetryFindings {
    let full = s.full.full(masses);
    let axes = candidate_axes(&full);
    let mut ox = None;
    let mut line = None;
    for &axis in &axes {
        if (axis.is_none() && ox.is_some()) || (axis.is_some() && line.is_some()) {
            continue;
        }
        if let Some((perm, t)) = try_axis(s, &full, axis, masses) {
            match axis {
                None => ox = Some(perm),
                Some(i) => {
                    line = Some(LineSymmetry {
                        body: i,
                        direction: axis_direction(&t),
                        permutation: perm,
                    })
                }
            }
        }
    }
    let asymmetric = ox.is_none() && line.is_none() && axes.iter().all(|&a| axis_refuted(&full, a));
    SymmetryFindings { ox, line, asymmetric }
}

pub fn symmetry_check(s: &SolutionBox, masses: &Masses) -> Symmetry {
    symmetry_findings(s, masses).verdict()
}

/// All bodies on the x-axis: reflection about it fixes every body.
pub fn detect_collinear(s: &SolutionBox, masses: &Masses) -> bool {
    let full = s.full.full(masses);
    if !full.iter().all(|b| b.y.contains_zero()) {
        return false;
    }
    let n = full.len();
    match image_in_gauge(&full, &full, &Orthogonal::x_axis_reflection(), n - 2) {
        Some((perm, w)) => perm.iter().enumerate().all(|(k, &p)| k == p) && certify_fixed(s, &w, masses),
        None => false,
    }
}

/// Merge equivalent solutions (first occurrence is the representative) and
/// decide symmetry for each class.
pub fn classify(solutions: &[SolutionBox], masses: &Masses) -> Vec<CCRecord> {
    let mut classes: Vec<(SolutionBox, Vec<SolutionBox>)> = Vec::new();
    for s in solutions {
        match classes.iter_mut().find(|(rep, _)| same_solution(rep, s, masses)) {
            Some((_, members)) => members.push(s.clone()),
            None => classes.push((s.clone(), vec![s.clone()])),
        }
    }
    use rayon::prelude::*;
    classes
        .into_par_iter()
        .map(|(representative, members)| {
            let findings = symmetry_findings(&representative, masses);
            let collinear = detect_collinear(&representative, masses);
            CCRecord {
                symmetry: findings.verdict(),
                findings,
                collinear,
                representative,
                members,
            }
        })
        .collect()
}
