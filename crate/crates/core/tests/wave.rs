use causalkit::wavekit::{
    apply_p, discrete_energy, green_advanced, green_retarded, pairing, solve_cauchy, Grid, LatticeField, PairingGuard,
    SupportClass,
};
use causalkit::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_source(g: Grid, rng: &mut ChaCha8Rng, n_range: (i64, i64), j_range: (i64, i64)) -> LatticeField {
    let mut f = LatticeField::zeros(g, SupportClass::Compact);
    for _ in 0..rng.gen_range(1..=6) {
        let n = rng.gen_range(n_range.0..=n_range.1);
        let j = rng.gen_range(j_range.0..=j_range.1);
        f.set(n, j, rng.gen_range(-1.0..1.0)).unwrap();
    }
    f
}

/// Every nonzero value of `u` lies in the lattice cone of some nonzero of `f`.
fn outside_cone(u: &LatticeField, f: &LatticeField, future: bool) -> usize {
    let srcs: Vec<(i64, i64)> = support(f);
    support(u)
        .into_iter()
        .filter(|&(n, j)| {
            !srcs.iter().any(|&(m, k)| {
                let dn = if future { n - m } else { m - n };
                dn >= 1 && (j - k).abs() < dn
            })
        })
        .count()
}

fn support(u: &LatticeField) -> Vec<(i64, i64)> {
    let g = u.grid();
    (g.n_min..=g.n_max)
        .flat_map(|n| (-g.j_max..=g.j_max).map(move |j| (n, j)))
        .filter(|&(n, j)| u.get(n, j) != 0.0)
        .collect()
}

#[test]
fn retarded_and_advanced_supports_stay_in_their_cones() {
    let g = Grid::with_range(1.0, 1.0, 0, 120, 130).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let f = random_source(g, &mut rng, (1, 119), (-8, 8));
        let ret = green_retarded(&f).unwrap();
        assert_eq!(ret.class(), SupportClass::Psc);
        assert_eq!(outside_cone(&ret, &f, true), 0);
        let adv = green_advanced(&f).unwrap();
        assert_eq!(adv.class(), SupportClass::Fsc);
        assert_eq!(outside_cone(&adv, &f, false), 0);
    }
}

#[test]
fn fundamental_identity_on_interior_nodes() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for lambda in [1.0, 0.5] {
        let g = Grid::with_range(lambda * 0.1, 0.1, 0, 80, 200).unwrap();
        for _ in 0..5 {
            let f = random_source(g, &mut rng, (1, 70), (-10, 10));
            let scale = f.max_abs();
            for u in [green_retarded(&f).unwrap(), green_advanced(&f).unwrap()] {
                let pu = apply_p(&u).unwrap();
                let inner = pu.grid();
                for n in inner.n_min..=inner.n_max {
                    for j in -inner.j_max..=inner.j_max {
                        assert!((pu.get(n, j) - f.get(n, j)).abs() <= 1e-12 * scale, "λ={lambda} at ({n},{j})");
                    }
                }
            }
        }
    }
}

#[test]
fn adjointness_of_the_fundamental_operators() {
    let g = Grid::with_range(0.05, 0.05, 0, 150, 170).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let phi = random_source(g, &mut rng, (2, 148), (-10, 10));
        let f = random_source(g, &mut rng, (2, 148), (-10, 10));
        // compact sections also belong to the larger dual classes
        let lhs = pairing(&green_retarded(&phi).unwrap(), &f.clone().with_class(SupportClass::Fc).unwrap()).unwrap();
        let rhs = pairing(&phi.clone().with_class(SupportClass::Pc).unwrap(), &green_advanced(&f).unwrap()).unwrap();
        let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        assert!((lhs - rhs).abs() <= 1e-10 * scale, "{lhs} vs {rhs}");
    }
}

#[test]
fn advanced_is_the_exact_time_mirror() {
    let g = Grid::with_range(0.1, 0.1, -30, 40, 90).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let f = random_source(g, &mut rng, (-29, 39), (-5, 5));
        let mirrored = green_retarded(&f.mirrored()).unwrap().mirrored();
        assert_eq!(green_advanced(&f).unwrap(), mirrored);
    }
}

#[test]
fn source_class_transitions() {
    let g = Grid::with_range(1.0, 1.0, 0, 20, 40).unwrap();
    let mut f = LatticeField::zeros(g, SupportClass::Psc);
    f.set(20, 0, 1.0).unwrap();
    f.set(3, 1, 1.0).unwrap();
    assert_eq!(green_retarded(&f).unwrap().class(), SupportClass::Psc);
    let pc = f.clone().with_class(SupportClass::Pc).unwrap();
    assert_eq!(green_retarded(&pc).unwrap().class(), SupportClass::Pc);
    let tc = LatticeField::impulse(g, 5, 0).unwrap().with_class(SupportClass::Tc).unwrap();
    assert!(green_retarded(&tc).unwrap().class().is_subclass_of(SupportClass::Pc));
    for bad in [SupportClass::Fsc, SupportClass::Sc, SupportClass::Fc, SupportClass::Unrestricted] {
        let f = LatticeField::impulse(g, 5, 0).unwrap().with_class(bad).unwrap();
        assert!(matches!(green_retarded(&f), Err(Error::UnsupportedSourceClass(_))), "{bad}");
    }
}

#[test]
fn cauchy_slices_grow_one_cell_per_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (j, steps) = (80usize, 60i64);
    for _ in 0..5 {
        let mut u0 = vec![0.0; 2 * j + 1];
        let mut u1 = vec![0.0; 2 * j + 1];
        for k in j - 6..=j + 6 {
            u0[k] = rng.gen_range(-1.0..1.0);
            u1[k] = rng.gen_range(-1.0..1.0);
        }
        let u = solve_cauchy(1.0, 1.0, &u0, &u1, steps).unwrap();
        for (n, k) in support(&u) {
            // data sit on levels 0 and 1 over sites −6..=6
            let reach = if n >= 1 { n - 1 } else { -n };
            assert!(k.abs() <= 6 + reach, "({n},{k})");
        }
    }
}

#[test]
fn energy_is_conserved_at_half_courant() {
    let (j, steps) = (400usize, 300i64);
    let x = |k: usize| (k as f64 - j as f64) * 0.01;
    let u0: Vec<f64> = (0..=2 * j).map(|k| if x(k).abs() < 0.5 { (1.0 - (2.0 * x(k)).powi(2)).powi(3) } else { 0.0 }).collect();
    let u1 = u0.clone();
    let u = solve_cauchy(0.005, 0.01, &u0, &u1, steps).unwrap();
    let e0 = discrete_energy(&u, 0).unwrap();
    for n in [-steps, -100, 50, steps - 1] {
        let e = discrete_energy(&u, n).unwrap();
        assert!((e - e0).abs() <= 1e-8 * e0, "level {n}: {e} vs {e0}");
    }
}

#[test]
fn continuum_kernel_under_refinement() {
    // unit-mass source of height 1/(ΔtΔx); the continuum kernel ½H(t − |x|)
    // integrates to t over each time slice
    for h in [0.1, 0.05, 0.025] {
        let steps = (1.0 / h) as i64;
        let g = Grid::with_range(h, h, 0, steps + 1, steps + 3).unwrap();
        let mut f = LatticeField::zeros(g, SupportClass::Compact);
        f.set(1, 0, 1.0 / (h * h)).unwrap();
        let u = green_retarded(&f).unwrap();
        let n = steps + 1;
        let row_sum: f64 = (-g.j_max..=g.j_max).map(|j| u.get(n, j)).sum::<f64>() * h;
        let t = (n - 1) as f64 * h;
        assert!((row_sum - t).abs() <= 2.0 * h, "h={h}: {row_sum} vs {t}");
    }
}

#[test]
fn pairing_guard_enumeration() {
    let accepted: Vec<_> = SupportClass::ALL
        .into_iter()
        .flat_map(|a| SupportClass::ALL.into_iter().map(move |b| (a, b)))
        .filter(|&(a, b)| PairingGuard::permits(a, b))
        .collect();
    assert_eq!(accepted.len(), 8);
    let six = [SupportClass::Sc, SupportClass::Fsc, SupportClass::Psc, SupportClass::Tc, SupportClass::Fc, SupportClass::Pc];
    let within: Vec<_> = accepted.iter().filter(|(a, b)| six.contains(a) && six.contains(b)).collect();
    assert_eq!(within.len(), 6);
    assert!(accepted.contains(&(SupportClass::Compact, SupportClass::Unrestricted)));
    let err = PairingGuard::check(SupportClass::Fc, SupportClass::Fc).unwrap_err();
    assert!(err.to_string().contains("fc <-> psc"), "{err}");
}
