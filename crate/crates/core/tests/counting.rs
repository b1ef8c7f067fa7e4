use coverlab_core::bounds;
use coverlab_core::families;
use coverlab_core::verify::{self, VerifyConfig};
use coverlab_core::walks;
use num_rational::Ratio;

#[test]
fn snbc_trace_matches_enumeration_on_small_families() {
    let graphs = [
        families::complete(4),
        families::cycle(5),
        families::bouquet(2, 1),
        families::multi_edge(3),
        families::complete_bipartite(2, 3),
    ];
    for g in &graphs {
        for k in 1..=6 {
            let exact = walks::snbc_count(g, k).unwrap();
            assert_eq!(walks::count_snbc_brute(g, k, u64::MAX).unwrap(), exact);
            assert_eq!(walks::enumerate_snbc(g, k).unwrap().len() as u64, exact);
        }
    }
}

#[test]
fn cycle_counts_are_closed_form() {
    // A k-cycle has 2k SNBC walks of each length divisible by k.
    let g = families::cycle(4);
    assert_eq!(walks::snbc_count(&g, 4).unwrap(), 8);
    assert_eq!(walks::snbc_count(&g, 8).unwrap(), 8);
    assert_eq!(walks::snbc_count(&g, 6).unwrap(), 0);
}

#[test]
fn census_partitions_the_count() {
    let g = families::complete(4);
    for k in 3..=6 {
        let by_type = walks::snbc_by_type(&g, k, u64::MAX).unwrap();
        assert_eq!(by_type.values().sum::<u64>(), walks::snbc_count(&g, k).unwrap());
    }
}

#[test]
fn containment_probabilities_match_enumeration() {
    for n in 2..=6u64 {
        for w in 0..=n {
            for wp in w..=n {
                let exact = bounds::perm_containment_prob(n, w, wp).unwrap();
                for overlap in 0..=w {
                    if w + wp - overlap > n {
                        continue;
                    }
                    let seen = verify::perm_containment_enumerated(n as usize, w as usize, wp as usize, overlap as usize).unwrap();
                    assert_eq!(exact, seen, "n={n} w={w} w'={wp} overlap={overlap}");
                }
            }
        }
    }
}

#[test]
fn involution_bound_dominates_matchings() {
    for n in [4usize, 6, 8] {
        for w in 1..=n {
            for wp in w..=n {
                let seen = verify::matching_containment_enumerated(n, w, wp).unwrap();
                let bound = bounds::involution_containment_bound_exact(n as u64, w as u64, wp as u64).unwrap();
                assert!(seen <= bound, "n={n} w={w} w'={wp}");
            }
        }
    }
    assert_eq!(verify::matching_containment_enumerated(8, 4, 5).unwrap(), Ratio::new(9, 105));
}

#[test]
fn default_lemma_checks_pass() {
    let rows = verify::verify_lemmas_with(&VerifyConfig::capped(8));
    for r in &rows {
        assert!(r.passed, "{}: {}", r.name, r.detail);
    }
}
