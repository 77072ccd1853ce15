mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use patchcalc::canon::are_isomorphic;
use patchcalc::patch::*;
use patchcalc::rational::{int, Rational};
use patchcalc::{generators, Graph};

fn triangle_patch() -> Patch {
    Patch::new(generators::complete(3).unwrap(), vec![0], vec![1]).unwrap()
}

fn edge_patch() -> Patch {
    Patch::new(generators::path(2).unwrap(), vec![0], vec![1]).unwrap()
}

/// Anchored minor containment by trying every branch-set assignment.
fn brute_patch_minor(h: &Patch, g: &Patch) -> bool {
    let (n, k) = (g.n(), h.n());
    let mut owner = vec![0usize; n];
    loop {
        let sets: Vec<Vec<usize>> =
            (0..k).map(|v| (0..n).filter(|&x| owner[x] == v).collect()).collect();
        let anchored = (0..h.q())
            .all(|i| sets[h.a()[i]].contains(&g.a()[i]) && sets[h.b()[i]].contains(&g.b()[i]));
        if anchored && model_is_valid(g.graph(), h.graph(), &sets) {
            return true;
        }
        let mut i = 0;
        while i < n && owner[i] == k {
            owner[i] = 0;
            i += 1;
        }
        if i == n {
            return false;
        }
        owner[i] += 1;
    }
}

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

#[test]
fn identity_patches() {
    let i0 = identity_patch(0);
    assert_eq!((i0.n(), i0.graph().m()), (0, 0));
    let i3 = identity_patch(3);
    assert_eq!(i3.n(), 3);
    assert_eq!(i3.a(), &[0, 1, 2]);
    assert_eq!(i3.a(), i3.b());
    let p = strip_patch();
    assert_eq!(patch_product(&identity_patch(3), &p).unwrap(), p);
}

#[test]
fn strip_products() {
    let p = strip_patch();
    let p2 = patch_product(&p, &p).unwrap();
    assert_eq!((p2.n(), p2.graph().m()), (5, 8));
    for n in 1..=12 {
        let pn = patch_power(&p, n).unwrap();
        assert_eq!((pn.n(), pn.graph().m()), (n + 3, 3 * n + 2));
    }
    // A product is associative up to isomorphism of the underlying graphs.
    let left = patch_product(&p2, &p).unwrap();
    let right = patch_product(&p, &p2).unwrap();
    assert!(are_isomorphic(left.graph(), right.graph()));
}

#[test]
fn e_values() {
    assert_eq!(e_value(&strip_patch()), 3);
    assert_eq!(e_value(&triangle_patch()), 3);
    assert_eq!(e_value(&identity_patch(4)), 0);
}

#[test]
fn classification() {
    let c = classify(&identity_patch(3)).unwrap();
    assert!(c.degenerate && c.linked && !c.refined);
    // The strip's labelings overlap (b(1) = a(2)), so no disjoint linkage exists.
    let c = classify(&strip_patch()).unwrap();
    assert!(!c.degenerate && !c.linked && !c.refined);
    assert!(find_patch_linkage(&strip_patch()).unwrap().is_none());
    // Its cube with block labelings is refined.
    let p3 = patch_power(&strip_patch(), 3).unwrap();
    let block = Patch::new(p3.graph().clone(), vec![0, 1, 2], vec![3, 4, 5]).unwrap();
    let c = classify(&block).unwrap();
    assert!(!c.degenerate && c.linked && c.refined);
    let split = Patch::new(Graph::new(2), vec![0], vec![1]).unwrap();
    assert!(!classify(&split).unwrap().linked);
}

#[test]
fn phi_values() {
    let p = phi(&strip_patch(), &int(3));
    assert_eq!(p.value, int(0));
    assert_eq!(p.weight(), Weight::Balanced);
    assert_eq!(phi(&identity_patch(2), &r(7, 3)).value, int(0));
    assert_eq!(phi(&triangle_patch(), &r(3, 2)).value, int(0));
    assert_eq!(phi(&triangle_patch(), &int(1)).weight(), Weight::Heavy);
    assert_eq!(phi(&triangle_patch(), &int(2)).weight(), Weight::Light);
}

#[test]
fn patch_minor_examples() {
    let p = strip_patch();
    assert!(patch_minor(&p, &p).unwrap().is_some());
    let pp = patch_product(&p, &p).unwrap();
    let found = patch_minor(&p, &pp).unwrap();
    assert_eq!(found.is_some(), brute_patch_minor(&p, &pp));
    assert!(found.is_none());
    let t = triangle_patch();
    let tt = patch_product(&t, &t).unwrap();
    assert!(patch_minor(&t, &tt).unwrap().is_some());
    assert!(brute_patch_minor(&t, &tt));
    assert!(patch_minor(&identity_patch(2), &p).is_err());
    assert!(patch_topo_minor(&triangle_patch(), &edge_patch()).unwrap().is_none());
    assert!(patch_topo_minor(&edge_patch(), &triangle_patch()).unwrap().is_some());
}

#[test]
fn identity_below_iff_linked() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut linked = 0;
    for _ in 0..50 {
        let q = rng.gen_range(1..=3);
        let n = rng.gen_range(q..=7);
        let h = random_patch(&mut rng, q, n);
        let c = classify(&h).unwrap();
        assert_eq!(patch_minor(&identity_patch(q), &h).unwrap().is_some(), c.linked);
        linked += c.linked as usize;
    }
    assert!(linked > 5 && linked < 45, "sample too lopsided: {linked}");
}

#[test]
fn density_limits() {
    assert_eq!(power_density_limit(&strip_patch()).unwrap(), int(3));
    assert_eq!(power_density_limit(&triangle_patch()).unwrap(), r(3, 2));
    assert_eq!(power_density_limit(&edge_patch()).unwrap(), int(1));
    assert!(power_density_limit(&identity_patch(2)).is_err());
}

#[test]
fn z_extensions() {
    let h = z_extension(&Graph::new(1), 1).unwrap();
    assert_eq!((h.n(), h.graph().m()), (2, 1));
    assert_eq!(h, edge_patch());
    let h = z_extension(&generators::path(3).unwrap(), 3).unwrap();
    assert_eq!((h.n(), h.graph().m()), (6, 5));
    assert!(classify(&h).unwrap().refined);
    assert!(z_extension(&generators::cycle(3).unwrap(), 1).is_err());
    // Vertex 1 of a path is internal, so Z = {0} leaves an internal vertex outside Z.
    assert!(z_extension(&generators::path(3).unwrap(), 1).is_err());
}

#[test]
fn json_round_trip() {
    let p = strip_patch();
    assert_eq!(Patch::from_json(&p.to_json()).unwrap(), p);
}

fn patch_pair(seed: u64) -> (Patch, Patch) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = rng.gen_range(0..=3);
    let n1 = rng.gen_range(q..=7);
    let n2 = rng.gen_range(q..=7);
    (random_patch(&mut rng, q, n1), random_patch(&mut rng, q, n2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn vertex_law_and_superadditivity(seed in any::<u64>()) {
        let (h1, h2) = patch_pair(seed);
        let p = patch_product(&h1, &h2).unwrap();
        prop_assert_eq!(p.n(), h1.n() + h2.n() - h1.q());
        prop_assert!(e_value(&p) >= e_value(&h1) + e_value(&h2));
    }

    #[test]
    fn limit_dominates_single_density(seed in any::<u64>()) {
        let (h, _) = patch_pair(seed);
        prop_assume!(h.n() > h.q());
        let lim = power_density_limit(&h).unwrap();
        prop_assert!(lim >= r(e_value(&h), (h.n() - h.q()) as i64));
    }

    #[test]
    fn factor_below_product_when_other_linked(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = rng.gen_range(1..=3);
        let n = rng.gen_range(q..=6);
        let h = random_patch(&mut rng, q, n);
        let extra = rng.gen_range(0..=2);
        let linked = random_linked_patch(&mut rng, q, false, extra);
        prop_assert!(patch_minor(&h, &patch_product(&h, &linked).unwrap()).unwrap().is_some());
        prop_assert!(patch_minor(&h, &patch_product(&linked, &h).unwrap()).unwrap().is_some());
    }

    #[test]
    fn graph_phi_is_zero_patch_phi(seed in any::<u64>(), p in 1i64..8, q in 1i64..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(0..=8);
        let g = random_graph(&mut rng, n, 0.4);
        let delta = r(p, q);
        let h = Patch::new(g.clone(), vec![], vec![]).unwrap();
        prop_assert_eq!(phi(&h, &delta).value, graph_phi(&g, &delta));
        prop_assert_eq!(graph_phi(&g, &delta), int(g.m() as i64) - &delta * int(g.n() as i64));
    }
}

#[test]
fn product_monotonicity_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut checked = 0;
    for _ in 0..200 {
        let q = rng.gen_range(1..=2);
        let g1 = random_linked_patch(&mut rng, q, false, 2);
        let g2 = random_linked_patch(&mut rng, q, false, 2);
        // Sub-patches obtained by deleting one edge stay below their source.
        let shrink = |g: &Patch, rng: &mut ChaCha8Rng| {
            let mut graph = g.graph().clone();
            let edges = graph.edges();
            if !edges.is_empty() {
                let (u, v) = edges[rng.gen_range(0..edges.len())];
                graph.remove_edge(u, v);
            }
            Patch::new(graph, g.a().to_vec(), g.b().to_vec()).unwrap()
        };
        let h1 = shrink(&g1, &mut rng);
        let h2 = shrink(&g2, &mut rng);
        assert!(patch_minor(&h1, &g1).unwrap().is_some());
        let lhs = patch_product(&h1, &h2).unwrap();
        let rhs = patch_product(&g1, &g2).unwrap();
        assert!(patch_minor(&lhs, &rhs).unwrap().is_some());
        checked += 1;
    }
    assert_eq!(checked, 200);
}
