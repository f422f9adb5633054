use causalkit::classifier::{
    adversarial_family, causal_curve_intersections, classify, classify_spacelike_compact, default_curves,
    foliation_sandwich, leaf_checks, search_surface_refutation, verify_sc_certificate, Entry, Intersection, Sandwich,
    SearchBudget, Tri,
};
use causalkit::minkowski::{CompactCloud, Dim, Direction, Point};
use causalkit::setlib::{self, AnalyticSet};
use causalkit::surfaces::Foliation;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cloud(seed: u64, dim: Dim) -> CompactCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=5);
    let pts = (0..count)
        .map(|_| {
            let t = rng.gen_range(-3.0..3.0);
            match dim {
                Dim::One => Point::d1(t, rng.gen_range(-3.0..3.0)),
                Dim::Two => Point::d2(t, rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
            }
        })
        .collect();
    CompactCloud::minkowski(pts).unwrap()
}

#[test]
fn hulls_of_compact_clouds_are_spacelike_compact() {
    let b = SearchBudget::default();
    assert!(adversarial_family(Dim::One).len() >= 30);
    for seed in 0..10 {
        let k = random_cloud(seed, Dim::One);
        let a = AnalyticSet::causal_hull(k.clone(), Direction::Both);
        assert!(search_surface_refutation(&a, &b).is_none(), "seed {seed}");
        match classify_spacelike_compact(&a, &b) {
            Entry::Certificate(cert) => assert!(verify_sc_certificate(&a, &cert, &b).is_ok()),
            other => panic!("seed {seed}: {other:?}"),
        }
    }
}

#[test]
fn two_dimensional_hull_and_band() {
    let b = SearchBudget::default();
    let a = AnalyticSet::causal_hull(random_cloud(42, Dim::Two), Direction::Both);
    assert_eq!(classify_spacelike_compact(&a, &b).tri(), Tri::True);
    let band = setlib::gaussian_band_in(Dim::Two);
    let refutation = search_surface_refutation(&band, &b).expect("refuted in two dimensions");
    assert!(refutation.witnesses.iter().all(|w| band.witness_is_member(w)));
}

#[test]
fn per_leaf_boundedness_does_not_decide() {
    let b = SearchBudget::default();
    let a = setlib::gaussian_band();
    let leaves = leaf_checks(&a, &b);
    assert_eq!(leaves.len(), 50);
    assert!(leaves.iter().all(|(_, s)| s.is_bounded()));
    let r = classify_spacelike_compact(&a, &b);
    assert_eq!(r.refutation().unwrap().label, "gaussian_surface");
}

#[test]
fn point_and_surface_criteria_never_disagree() {
    let b = SearchBudget::default();
    let k = random_cloud(7, Dim::One);
    let sets = [
        setlib::gaussian_band(),
        setlib::hyperbola_band(),
        setlib::boost_plane(0.5).unwrap().0,
        setlib::boost_plane(-0.9).unwrap().0,
        AnalyticSet::cloud(&k),
        AnalyticSet::causal_hull(k.clone(), Direction::Future),
        AnalyticSet::causal_hull(k, Direction::Past),
    ];
    for a in sets.iter().flat_map(|a| [a.clone(), a.mirrored()]) {
        let v = classify(&a, &b);
        for entry in [&v.fc, &v.pc] {
            if let Entry::Inconclusive(why) = entry {
                assert!(!why.contains("both found"), "{}: {why}", a.label());
            }
        }
        if let Entry::Inconclusive(why) = &v.sc {
            assert!(!why.contains("both found"), "{}: {why}", a.label());
        }
    }
}

#[test]
fn compact_clouds_are_future_and_past_spacelike_compact() {
    let b = SearchBudget::default();
    for seed in 20..25 {
        let v = classify(&AnalyticSet::cloud(&random_cloud(seed, Dim::One)), &b);
        assert_eq!((v.fsc(), v.psc()), (Tri::True, Tri::True), "seed {seed}");
        assert_eq!(v.tc(), Tri::True);
    }
    let v = classify(&setlib::gaussian_band(), &b);
    assert_eq!(v.fsc().and(v.psc()), Tri::False);
}

#[test]
fn mirrored_hulls_swap_future_and_past() {
    let b = SearchBudget::default();
    for seed in 30..33 {
        let a = AnalyticSet::causal_hull(random_cloud(seed, Dim::One), Direction::Future);
        let (v, m) = (classify(&a, &b), classify(&a.mirrored(), &b));
        assert_eq!(v.sc.tri(), m.sc.tri());
        assert_eq!((v.fc.tri(), v.pc.tri()), (m.pc.tri(), m.fc.tri()));
        assert_eq!((v.fsc(), v.psc()), (m.psc(), m.fsc()));
        assert_eq!(v.tc(), m.tc());
    }
}

#[test]
fn sandwich_and_curve_examples() {
    let b = SearchBudget::default();
    let point = AnalyticSet::cloud(&CompactCloud::minkowski(vec![Point::d1(0.0, 0.0)]).unwrap());
    match foliation_sandwich(&point, &Foliation::standard(Dim::One), &b).unwrap() {
        Sandwich::Found { lower, upper } => assert!(lower < 0.0 && 0.0 < upper),
        other => panic!("{other:?}"),
    }
    let band = setlib::gaussian_band();
    for report in causal_curve_intersections(&band, &default_curves(Dim::One, &b), &b).unwrap() {
        assert!(report.intersection.is_bounded(), "{report:?}");
    }
    let hb = setlib::hyperbola_band();
    let reports = causal_curve_intersections(&hb, &default_curves(Dim::One, &b), &b).unwrap();
    let boosts: Vec<_> = reports.iter().filter(|r| matches!(r.curve, causalkit::classifier::CausalCurve::Boost { .. })).collect();
    assert!(!boosts.is_empty());
    assert!(boosts.iter().all(|r| r.intersection == Intersection::Empty));
}
