mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use patchcalc::canon::are_isomorphic;
use patchcalc::decomposition::{patchwork_from_path_decomposition, patchwork_with_spacing, PathDecomposition};
use patchcalc::patch::{e_value, graph_phi, patch_power, phi, strip_patch, Patch};
use patchcalc::patchwork::*;
use patchcalc::rational::{int, rat};
use patchcalc::{find_minor_model, Graph};

/// `l` copies of a 2-patch sharing the global vertex 0; copy `j` is the path
/// `x_j z_j y_j` with `a = (0, x_j)`, `b = (0, y_j)`; the host joins `y_j` to
/// `x_{j+1}` through two stitch vertices.
fn global_chain(l: usize) -> (Graph, Vec<Patch>, Vec<Vec<usize>>, StitchSet) {
    let local = Graph::from_edges(4, &[(1, 2), (2, 3)]).unwrap();
    let h = Patch::new(local, vec![0, 1], vec![0, 3]).unwrap();
    let mut host = Graph::new(5 * l - 1);
    let mut placements = Vec::new();
    for j in 0..l {
        let (x, z, y) = (1 + 5 * j, 2 + 5 * j, 3 + 5 * j);
        host.add_edge(x, z);
        host.add_edge(z, y);
        if j + 1 < l {
            host.add_edge(y, y + 1);
            host.add_edge(y + 1, y + 2);
            host.add_edge(y + 2, y + 3);
        }
        placements.push(vec![0, x, z, y]);
    }
    let stitches = StitchSet {
        paths: (0..l - 1).map(|j| vec![vec![0], (3 + 5 * j..=6 + 5 * j).collect()]).collect(),
    };
    (host, vec![h; l], placements, stitches)
}

/// Contraction computed directly: drop interior vertices and patch edges outside
/// the left boundary, then identify `b(i)` with `a(i)`.
fn manual_contract(host: &Graph, h: &Patch, placement: &[usize]) -> Graph {
    let n = host.n();
    let mut rep: Vec<usize> = (0..n).collect();
    for i in 0..h.q() {
        rep[placement[h.b()[i]]] = placement[h.a()[i]];
    }
    let boundary: Vec<usize> = h.boundary().iter().map(|&v| placement[v]).collect();
    let inside: Vec<usize> = placement.to_vec();
    let left: Vec<usize> = h.left_boundary().iter().map(|&v| placement[v]).collect();
    let keep: Vec<bool> = (0..n).map(|x| !inside.contains(&x) || boundary.contains(&x)).collect();
    let survivors: Vec<usize> = (0..n).filter(|&x| keep[x] && rep[x] == x).collect();
    let index = |x: usize| survivors.iter().position(|&s| s == rep[x]).unwrap();
    let mut g = Graph::new(survivors.len());
    for (u, v) in host.edges() {
        if !keep[u] || !keep[v] {
            continue;
        }
        if inside.contains(&u) && inside.contains(&v) && !(left.contains(&u) && left.contains(&v)) {
            continue;
        }
        let (a, b) = (index(u), index(v));
        if a != b {
            g.add_edge(a, b);
        }
    }
    g
}

fn block(g: &Graph, start: usize) -> (Patch, Vec<usize>) {
    let verts: Vec<usize> = (start..start + 6).collect();
    let h = Patch::new(g.induced_subgraph(&verts), vec![0, 1, 2], vec![3, 4, 5]).unwrap();
    (h, verts)
}

#[test]
fn embedded_patch_examples() {
    let p = strip_patch();
    assert!(validate_embedded_patch(p.graph(), &p, &[0, 1, 2, 3]).is_ok());

    let mut host = p.graph().clone();
    let extra = host.add_vertex();
    host.add_edge(extra, 0);
    host.add_edge(extra, 3);
    let rep = validate_embedded_patch(&host, &p, &[0, 1, 2, 3]);
    assert!(!rep.is_ok());

    // In P^3 the middle copy is not induced: edge 1-3 comes from the first copy.
    let p3 = patch_power(&p, 3).unwrap();
    assert!(p3.graph().has_edge(1, 3));
    assert!(!p.graph().has_edge(0, 2));
    assert!(!validate_embedded_patch(p3.graph(), &p, &[1, 2, 3, 4]).is_ok());

    // Block bags of P^9 are properly embedded.
    let g = patch_power(&p, 9).unwrap().graph().clone();
    for start in [0, 3, 6] {
        let (h, verts) = block(&g, start);
        assert!(validate_embedded_patch(&g, &h, &verts).is_ok(), "block at {start}");
    }
}

#[test]
fn patchwork_examples() {
    let (host, patches, placements, _) = global_chain(4);
    let emb = validate_embedded_patchwork(&host, &patches, &placements).unwrap();
    assert_eq!(emb.globals(), &[0]);
    assert_eq!(emb.len(), 4);

    // Two edge patches with an isolated interior vertex, sharing that vertex.
    let h = Patch::new(Graph::from_edges(3, &[(0, 1)]).unwrap(), vec![0], vec![1]).unwrap();
    let host = Graph::from_edges(5, &[(0, 1), (3, 4)]).unwrap();
    assert!(validate_embedded_patch(&host, &h, &[0, 1, 2]).is_ok());
    let err = validate_embedded_patchwork(&host, &[h.clone(), h], &[vec![0, 1, 2], vec![3, 4, 2]]).unwrap_err();
    assert!(err.violations.iter().any(|v| v.tag == "E2"), "{:?}", err.violations);
}

#[test]
fn decomposition_spacing() {
    let g = patch_power(&strip_patch(), 27).unwrap().graph().clone();
    let bags: Vec<Vec<usize>> = (0..9).map(|j| (3 * j..3 * j + 6).collect()).collect();
    let pd = PathDecomposition::new(bags);
    let (q, emb, stitches) = patchwork_with_spacing(&g, &pd, 4).unwrap();
    assert_eq!(q, 3);
    assert!(emb.len() >= 2);
    assert!(validate_stitched(&emb, &stitches).is_ok());
    let model = stitched_minor_model(&emb, &stitches).unwrap();
    assert!(model_is_valid(&g, &emb.product_graph(), &model.branch_sets));
    assert!(patchwork_from_path_decomposition(&g, &pd).is_err());
}

#[test]
fn stitching_examples() {
    let (host, patches, placements, stitches) = global_chain(3);
    let emb = validate_embedded_patchwork(&host, &patches, &placements).unwrap();
    assert!(validate_stitched(&emb, &stitches).is_ok());
    let model = stitched_minor_model(&emb, &stitches).unwrap();
    assert!(model_is_valid(&host, &emb.product_graph(), &model.branch_sets));

    let single = emb.restrict(&[1]).unwrap();
    assert!(validate_stitched(&single, &StitchSet::default()).is_ok());

    // Route the first stitch through the third patch: x_2, z_2, y_2.
    let mut detour = host.clone();
    let (u, v) = (detour.add_vertex(), detour.add_vertex());
    for (s, t) in [(4, u), (u, 11), (13, v), (v, 5)] {
        detour.add_edge(s, t);
    }
    let emb2 = validate_embedded_patchwork(&detour, &patches, &placements).unwrap();
    let mut bad = stitches.clone();
    bad.paths[0][1] = vec![3, 4, u, 11, 12, 13, v, 5, 6];
    assert!(detour.is_path(&bad.paths[0][1]));
    assert_eq!(validate_stitched(&emb2, &bad).first_tag(), Some("S2"));
}

#[test]
fn single_patch_model_is_identity() {
    let p = strip_patch();
    let emb = validate_embedded_patchwork(p.graph(), &[p.clone()], &[vec![0, 1, 2, 3]]).unwrap();
    let model = stitched_minor_model(&emb, &StitchSet::default()).unwrap();
    assert_eq!(model.branch_sets, vec![vec![0], vec![1], vec![2], vec![3]]);
}

#[test]
fn contraction_examples() {
    let g = patch_power(&strip_patch(), 9).unwrap().graph().clone();
    let (h, verts) = block(&g, 3);
    let c = contract_patch(&g, &h, &verts).unwrap();
    let p6 = patch_power(&strip_patch(), 6).unwrap();
    assert!(are_isomorphic(&c, p6.graph()));
    assert!(are_isomorphic(&c, &manual_contract(&g, &h, &verts)));
    assert_eq!(c.m() as i64, g.m() as i64 - e_value(&h));

    let (host, patches, placements, _) = global_chain(3);
    let emb = validate_embedded_patchwork(&host, &patches, &placements).unwrap();
    assert_eq!(contract_many(&emb, &[]).unwrap(), host);
    let all = contract_many(&emb, &[0, 1, 2]).unwrap();
    assert_eq!(all.m(), host.m() - 3 * 2);
    let d = rat(5, 3);
    let c = contract_many_phi(&emb, &[0, 2], &d).unwrap();
    assert_eq!(graph_phi(&c, &d), graph_phi(&host, &d) - phi(&patches[0], &d).value * int(2));
}

#[test]
fn contraction_order_independence() {
    let (host, patches, placements, _) = global_chain(4);
    let emb = validate_embedded_patchwork(&host, &patches, &placements).unwrap();
    let together = contract_many(&emb, &[0, 2]).unwrap();
    let (first, map) = contract_patch_mapped(&host, &patches[2], &placements[2]).unwrap();
    let moved: Vec<usize> = placements[0].iter().map(|&x| map[x].unwrap()).collect();
    let second = contract_patch(&first, &patches[0], &moved).unwrap();
    assert!(are_isomorphic(&together, &second));
}

#[test]
fn respectful_restrictions() {
    let (host, patches, placements, _) = global_chain(5);
    let emb = validate_embedded_patchwork(&host, &patches, &placements).unwrap();
    assert_eq!(respectful_restriction(&emb, &[]).unwrap(), emb);
    let r = respectful_restriction(&emb, &[placements[1][2]]).unwrap();
    assert_eq!(r.len(), 4);
    assert!(!r.vertex_set().contains(&placements[1][2]));
    assert_eq!(respectful_restriction(&emb, &[0]).unwrap(), emb);
    let s: Vec<usize> = vec![2, 7, 12, 17, 22];
    assert!(respectful_restriction(&emb, &s).is_err());
}

#[test]
fn json_round_trip() {
    let (host, patches, placements, stitches) = global_chain(3);
    let emb = validate_embedded_patchwork(&host, &patches, &placements).unwrap();
    let json = serde_json::to_string(&PatchworkJson::from_parts(&emb, Some(&stitches))).unwrap();
    let back: PatchworkJson = serde_json::from_str(&json).unwrap();
    assert_eq!(back.q, 2);
    assert_eq!(back.placements.unwrap(), placements);
    assert_eq!(back.stitches.unwrap(), stitches.paths);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn contraction_identities(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_patchwork(&mut rng, 16);
        let emb = validate_embedded_patchwork(&b.host, &b.patches, &b.placements).unwrap();
        let j = rng.gen_range(0..emb.len());
        let c = contract_patch(&b.host, &b.patches[j], &b.placements[j]).unwrap();
        prop_assert_eq!(c.m() as i64, b.host.m() as i64 - e_value(&b.patches[j]));
        prop_assert!(are_isomorphic(&c, &manual_contract(&b.host, &b.patches[j], &b.placements[j])));
        let set = random_subset(&mut rng, emb.len());
        let d = rat(rng.gen_range(0..=12), rng.gen_range(1..=4));
        let many = contract_many_phi(&emb, &set, &d).unwrap();
        let sum = set.iter().map(|&i| phi(&b.patches[i], &d).value).fold(int(0), |a, x| a + x);
        prop_assert_eq!(graph_phi(&many, &d), graph_phi(&b.host, &d) - sum);
    }

    #[test]
    fn restriction_is_a_minor(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_patchwork(&mut rng, 12);
        let emb = validate_embedded_patchwork(&b.host, &b.patches, &b.placements).unwrap();
        let j = random_subset(&mut rng, emb.len());
        let sub = emb.restrict(&j).unwrap();
        let (big, small) = (emb.product_graph(), sub.product_graph());
        let m = find_minor_model(&big, &small);
        prop_assert!(m.is_some());
        prop_assert!(model_is_valid(&big, &small, &m.unwrap().branch_sets));
    }

    #[test]
    fn restriction_keeps_enough(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_patchwork(&mut rng, 18);
        let emb = validate_embedded_patchwork(&b.host, &b.patches, &b.placements).unwrap();
        let k = rng.gen_range(0..emb.len());
        let s: Vec<usize> = (0..k).map(|_| rng.gen_range(0..b.host.n())).collect();
        let mut s_sorted = s.clone();
        s_sorted.sort_unstable();
        s_sorted.dedup();
        let r = respectful_restriction(&emb, &s_sorted).unwrap();
        prop_assert!(r.len() + s_sorted.len() >= emb.len());
        for x in &s_sorted {
            prop_assert!(!r.vertex_set().contains(x) || r.globals().contains(x));
        }
    }
}
