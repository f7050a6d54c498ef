//! `bound_kernel` against the range sampled on a dense grid.

use planar_cc::force::{bound_kernel, naive_kernel, Axis};
use planar_cc::Interval;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID: usize = 41;

fn kernel(x: f64, y: f64, a: u32, b: u32) -> f64 {
    x.powi(a as i32) / (x * x + y * y).powf(b as f64 / 2.0)
}

fn random_box(rng: &mut ChaCha8Rng) -> (Interval, Interval) {
    loop {
        let x0 = rng.gen_range(-2.0..2.0);
        let y0 = rng.gen_range(-2.0..2.0);
        let wx = rng.gen_range(0.0..1.0) * rng.gen_range(0.0..1.0);
        let wy = rng.gen_range(0.0..1.0) * rng.gen_range(0.0..1.0);
        let x = Interval::new(x0, x0 + wx);
        let y = Interval::new(y0, y0 + wy);
        if !(x.contains_zero() && y.contains_zero()) && x.mig().hypot(y.mig()) > 0.05 {
            return (x, y);
        }
    }
}

#[test]
fn grid_range_inside_bound_inside_naive() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let shapes = [(1, 2), (1, 3), (1, 5), (2, 3), (2, 5)];
    for trial in 0..1_000 {
        let (dx, dy) = random_box(&mut rng);
        let (a, b) = shapes[trial % shapes.len()];
        for axis in [Axis::X, Axis::Y] {
            let bound = bound_kernel(dx, dy, a, b, axis).unwrap();
            let (x, y) = match axis {
                Axis::X => (dx, dy),
                Axis::Y => (dy, dx),
            };
            let naive = naive_kernel(x, y, a, b).unwrap();
            assert!(bound.subset_of(naive), "{trial}: {bound:?} not in naive {naive:?}");
            assert!(bound.width() <= naive.width());
            for i in 0..GRID {
                for j in 0..GRID {
                    let px = x.lo() + (x.hi() - x.lo()) * i as f64 / (GRID - 1) as f64;
                    let py = y.lo() + (y.hi() - y.lo()) * j as f64 / (GRID - 1) as f64;
                    let v = kernel(px.min(x.hi()), py.min(y.hi()), a, b);
                    let tol = 1e-13 * v.abs().max(1e-300);
                    assert!(
                        bound.inflate(tol).contains(v),
                        "{trial}: x^{a}/r^{b} at ({px}, {py}) = {v} outside {bound:?}"
                    );
                }
            }
        }
    }
}

/// On `[1, 2] x [2, 2.5]` the maximum of `x / r^3` is attained where the
/// bottom edge crosses the line `y = x sqrt(2)`, away from every corner.
#[test]
fn interior_edge_maximum_is_found() {
    let x = Interval::new(1.0, 2.0);
    let y = Interval::new(2.0, 2.5);
    let bound = bound_kernel(x, y, 1, 3, Axis::X).unwrap();
    let corners = [(1.0, 2.0), (1.0, 2.5), (2.0, 2.0), (2.0, 2.5)];
    let corner_max = corners.iter().map(|&(a, b)| kernel(a, b, 1, 3)).fold(f64::MIN, f64::max);
    let edge_max = kernel(2f64.sqrt(), 2.0, 1, 3);
    assert!(edge_max > corner_max + 1e-3);
    assert!(bound.contains(edge_max));
    let naive = naive_kernel(x, y, 1, 3).unwrap();
    assert!(bound.width() < 0.5 * naive.width());
}
