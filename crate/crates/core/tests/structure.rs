use coverlab_core::families;
use coverlab_core::magnify::{self, Mode};
use coverlab_core::spectral;
use coverlab_core::tangles::{self, Claim, ScanCaps, TangleQuery};

#[test]
fn bouquets_have_the_expected_mu1() {
    for m in 1..=6usize {
        let mu = spectral::mu1(&families::bouquet(m, 0)).unwrap();
        assert!((mu - (2 * m - 1) as f64).abs() < 1e-9);
    }
}

#[test]
fn named_tangles_meet_their_claims() {
    for t in tangles::example_tangles() {
        assert_eq!(t.graph.order(), t.order, "{}", t.name);
        let mu = spectral::mu1(&t.graph).unwrap();
        match t.claim {
            Claim::AtLeast => assert!(mu >= t.mu1 - 1e-9, "{}", t.name),
            Claim::Greater => assert!(mu > t.mu1, "{}", t.name),
            Claim::Exact => assert!((mu - t.mu1).abs() < 1e-9, "{}", t.name),
        }
    }
}

#[test]
fn scan_finds_a_planted_bouquet() {
    // A 3-cycle with two whole-loops on one vertex: the loops alone have
    // order 1 and mu_1 = 3.
    let mut b = coverlab_core::GraphBuilder::new(3);
    b.edge(0, 1);
    b.edge(1, 2);
    b.edge(2, 0);
    b.whole_loop(0);
    b.whole_loop(0);
    let g = b.build();
    let rep = tangles::scan_tangles(&g, &TangleQuery { nu: 2.5, r: 2, strict: true }, ScanCaps::default());
    assert!(rep.has_tangles());
    assert!(rep.found.iter().all(|f| f.order < 2 && f.mu1 > 2.5));
    let none = tangles::scan_tangles(&families::cycle(6), &TangleQuery { nu: 1.5, r: 3, strict: false }, ScanCaps::default());
    assert!(!none.has_tangles() && !none.caps_hit);
}

#[test]
fn petersen_magnification() {
    let g = families::petersen();
    let (gamma, witness) = magnify::best_gamma(&g).unwrap().unwrap();
    let gamma = *gamma.numer() as f64 / *gamma.denom() as f64;
    assert!(magnify::is_magnifier(&g, gamma, Mode::Exhaustive).unwrap().holds);
    let above = magnify::is_magnifier(&g, gamma + 1e-9, Mode::Exhaustive).unwrap();
    assert!(!above.holds);
    assert_eq!(magnify::outer_boundary(&g, &witness.members).unwrap() as f64, gamma * witness.len() as f64);
    assert!(magnify::alon_gap_check(&g, gamma, 1e-9).unwrap());
}

#[test]
fn sampled_mode_never_contradicts_exhaustive() {
    let g = families::diamond_ring(3);
    let (gamma, _) = magnify::best_gamma(&g).unwrap().unwrap();
    let gamma = *gamma.numer() as f64 / *gamma.denom() as f64;
    let s = magnify::is_magnifier(&g, gamma, Mode::Sampled { trials: 2000, seed: 1 }).unwrap();
    assert!(s.holds);
}
