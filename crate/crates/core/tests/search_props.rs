//! Determinism and bookkeeping of the branch and prune search.

use planar_cc::search::{initial_domain, search, SearchConfig, SearchOutput};
use planar_cc::Masses;

fn run(n: usize, threads: usize) -> SearchOutput {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let cfg = SearchConfig::new(n);
    let m = Masses::equal(n).unwrap();
    pool.install(|| search(&initial_domain(&cfg).unwrap(), &cfg, &m).unwrap())
}

fn sorted_mids(o: &SearchOutput) -> Vec<Vec<u64>> {
    let mut v: Vec<Vec<u64>> = o
        .solutions
        .iter()
        .map(|s| s.reduced.mid().iter().map(|x| x.to_bits()).collect())
        .collect();
    v.sort();
    v
}

#[test]
fn runs_are_reproducible() {
    let a = run(3, 1);
    let b = run(3, 1);
    assert_eq!(a, b);
    let c = run(3, 4);
    assert_eq!(a.stats, c.stats);
    assert_eq!(sorted_mids(&a), sorted_mids(&c));
}

/// Each call ends in exactly one of: excluded, Krawczyk verdict, undecided
/// or bisection. The search tree is binary, so calls = 2 leaves - 1.
#[test]
fn calls_reconcile() {
    for n in [3, 4] {
        let o = run(n, 2);
        let s = &o.stats;
        let leaves = s.apriori
            + s.u_eq_i
            + s.cluster
            + s.distance
            + s.check_zero
            + s.krawczyk_unique
            + s.krawczyk_no_zero
            + s.undecided;
        assert_eq!(s.calls, 2 * leaves - 1, "n={n}: {s:?}");
        assert_eq!(s.zeros_found, s.krawczyk_unique);
        assert_eq!(s.zeros_found as usize, o.solutions.len() + o.not_proven.len());
        assert!(o.is_proof());
    }
}
