mod common;

use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use patchcalc::canon::are_isomorphic;
use patchcalc::rational::{int, rat, Rational};
use patchcalc::topo_density::*;
use patchcalc::{generators, Graph};

fn signs(seq: &ControlledSequence) -> String {
    seq.choices.iter().map(|s| s.to_string()).collect()
}

#[test]
fn excess_examples() {
    let k4 = generators::complete(4).unwrap();
    assert_eq!(psi_excess(&k4, &int(2)).unwrap(), int(0));
    assert_eq!(psi_oracle(&k4, &int(2)), int(0));
    let k3 = generators::complete(3).unwrap();
    assert_eq!(psi_excess(&k3, &rat(3, 2)).unwrap(), int(0));
    let edge = generators::path(2).unwrap();
    for d in [int(1), rat(3, 2), rat(7, 3)] {
        assert_eq!(psi_excess(&edge, &d).unwrap(), int(1) - &d);
    }
    // A long cycle suppresses down to a triangle.
    let c7 = generators::cycle(7).unwrap();
    let (steps, g) = max_suppression(&c7);
    assert_eq!(steps, 4);
    assert!(are_isomorphic(&g, &k3));
    assert!(psi_excess(&Graph::new(1), &int(2)).is_err());
    assert!(psi_excess(&generators::complete(11).unwrap(), &int(2)).is_err());
}

#[test]
fn pair_examples() {
    let p = construct_h_pm(&int(2)).unwrap();
    assert!(are_isomorphic(p.plus.graph(), &generators::complete(4).unwrap()));
    let mut k4e = generators::complete(4).unwrap();
    k4e.remove_edge(0, 1);
    assert!(are_isomorphic(p.minus.graph(), &k4e));
    assert_eq!((p.alpha.clone(), p.beta.clone()), (int(0), int(-1)));

    let p = construct_h_pm(&rat(3, 2)).unwrap();
    assert!(are_isomorphic(p.plus.graph(), &generators::complete(3).unwrap()));
    assert!(are_isomorphic(p.minus.graph(), &generators::path(2).unwrap()));
    assert_eq!((p.alpha.clone(), p.beta.clone()), (int(0), rat(-1, 2)));

    let p = construct_h_pm(&rat(5, 2)).unwrap();
    assert!(are_isomorphic(p.plus.graph(), &generators::complete(5).unwrap()));
    let mut k5e = generators::complete(5).unwrap();
    k5e.remove_edge(0, 1);
    assert!(are_isomorphic(p.minus.graph(), &k5e));
    assert_eq!(p.alpha, psi_oracle(p.plus.graph(), &rat(5, 2)));
    assert_eq!(p.beta, psi_oracle(p.minus.graph(), &rat(5, 2)));

    assert!(construct_h_pm(&rat(7, 5)).is_err());
}

#[test]
fn pair_conditions() {
    for d in [rat(3, 2), rat(5, 3), rat(7, 4), int(2), rat(9, 4), rat(5, 2), rat(8, 3), int(3)] {
        let p = construct_h_pm(&d).unwrap();
        assert!(p.alpha >= int(0) && p.beta < int(0), "delta {d}");
        assert!(&p.alpha - &p.beta <= &d - int(1), "delta {d}");
        for h in [&p.plus, &p.minus] {
            assert_eq!(h.q(), 1);
            assert_ne!(h.a()[0], h.b()[0]);
        }
    }
}

#[test]
fn sequence_examples() {
    let s = build_controlled_sequence(&rat(3, 2), 5).unwrap();
    assert_eq!(signs(&s), "-++++");
    assert!(s.prefix_sums.iter().all(|x| *x == rat(-1, 2)));
    let s = build_controlled_sequence(&int(2), 4).unwrap();
    assert_eq!(signs(&s), "-+++");
    assert!(s.prefix_sums.iter().all(|x| *x == int(-1)));
    for d in [rat(3, 2), int(2), int(3)] {
        assert_eq!(signs(&build_controlled_sequence(&d, 1).unwrap()), "-");
    }
    assert!(build_controlled_sequence(&int(2), 0).is_err());
}

#[test]
fn product_examples() {
    let s = build_controlled_sequence(&rat(3, 2), 10).unwrap();
    let p = controlled_product_graph(&s, 10).unwrap();
    assert_eq!((p.vertices, p.edges), (20, 28));
    assert_eq!(p.density(), rat(7, 5));
    assert!(int(28) <= rat(3, 2) * int(20) - int(1));
    let one = controlled_product_graph(&s, 1).unwrap();
    assert_eq!(&one.graph, s.pair.minus.graph());

    let table = density_table(&s, 10).unwrap();
    let last = table.last().unwrap();
    assert_eq!((last.vertices, last.edges, last.density_parts()), (20, 28, (28, 20)));
    assert!(table.iter().all(|r| r.within_bounds(&rat(3, 2), &rat(-1, 2))));
}

#[test]
fn upper_bound_sampling() {
    let s = build_controlled_sequence(&int(2), 6).unwrap();
    assert!(check_class_upper_bound(&s, 6, 100, 1).unwrap());
    let s = build_controlled_sequence(&rat(3, 2), 10).unwrap();
    assert!(check_class_upper_bound(&s, 10, 50, 2).unwrap());
}

#[test]
fn l_zero_values() {
    let tol = rat(1, 20);
    let expected = [(rat(3, 2), 21), (rat(5, 3), 14), (rat(7, 4), 11), (int(2), 20), (rat(5, 2), 18), (int(3), 16)];
    for (d, l0) in expected {
        let pair = construct_h_pm(&d).unwrap();
        assert_eq!(l_zero(&pair, &tol).unwrap(), l0, "delta {d}");
        let s = controlled_from_pair(pair, l0).unwrap();
        let rows = density_table(&s, l0).unwrap();
        let gap = (rows[l0 - 1].density() - &d).abs();
        assert!(gap < tol);
    }
}

#[test]
fn random_minors_are_topological_minors() {
    let g = generators::grid(3, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let h = random_topological_minor(&g, &mut rng);
        assert!(h.n() <= g.n() && h.m() <= g.m());
        assert!(patchcalc::find_topo_embedding(&g, &h).is_some());
    }
}

fn delta_strategy() -> impl Strategy<Value = Rational> {
    prop_oneof![
        Just(rat(3, 2)),
        Just(rat(5, 3)),
        Just(rat(7, 4)),
        Just(int(2)),
        Just(rat(7, 3)),
        Just(rat(5, 2)),
        Just(int(3)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn density_stays_within_bounds(d in delta_strategy(), l in 1usize..40) {
        let s = build_controlled_sequence(&d, l).unwrap();
        prop_assert!(s.validate().is_ok());
        let beta = s.pair.beta.clone();
        for row in density_table(&s, l).unwrap() {
            prop_assert!(row.within_bounds(&d, &beta));
            let gap = (row.density() - &d).abs();
            prop_assert!(gap <= (&d + beta.abs()) / int(row.vertices as i64));
        }
    }

    #[test]
    fn excess_matches_oracle(seed in any::<u64>(), n in 2usize..6, d in delta_strategy()) {
        let g = random_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, 0.5);
        prop_assert_eq!(psi_excess(&g, &d).unwrap(), psi_oracle(&g, &d));
    }
}
