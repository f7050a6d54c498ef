//! The interval Jacobian of the reduced system against central
//! differences.

use planar_cc::reduced::{reduced_jacobian, reduced_residual};
use planar_cc::{Masses, ReducedBox};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STEP: f64 = 1e-6;

fn collision_free(x: &[f64]) -> bool {
    let r = ReducedBox::from_points(x);
    let n = r.n();
    let m = Masses::equal(n).unwrap();
    let full = r.to_config().full(&m);
    let pts: Vec<(f64, f64)> = full.iter().map(|b| b.mid()).collect();
    (0..n).all(|i| (i + 1..n).all(|j| (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1) > 0.2))
}

#[test]
fn jacobian_contains_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut done = 0;
    while done < 100 {
        let n = 3 + done % 3;
        let x: Vec<f64> = (0..2 * n - 3).map(|_| rng.gen_range(-1.5..1.5)).collect();
        if !collision_free(&x) {
            continue;
        }
        let m = Masses::equal(n).unwrap();
        let jac = reduced_jacobian(&ReducedBox::from_points(&x), &m).unwrap();
        let d = x.len();
        for k in 0..d {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += STEP;
            xm[k] -= STEP;
            let fp = reduced_residual(&ReducedBox::from_points(&xp), &m).unwrap().mid();
            let fm = reduced_residual(&ReducedBox::from_points(&xm), &m).unwrap().mid();
            for i in 0..d {
                let fd = (fp[i] - fm[i]) / (2.0 * STEP);
                let e = jac[(i, k)];
                let dist = (e.lo() - fd).max(fd - e.hi()).max(0.0);
                assert!(dist <= 1e-5, "n={n} entry ({i},{k}): {fd} vs {e:?}");
            }
        }
        done += 1;
    }
}
