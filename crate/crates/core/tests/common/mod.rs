//! Brute-force oracles and random instance builders shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use patchcalc::enumerate::all_graphs;
use patchcalc::patch::{classify, Patch};
use patchcalc::rational::{int, Rational};
use patchcalc::{find_topo_embedding, Graph};

/// Adjacency masks, independent of the library's canonical forms.
fn masks(g: &Graph) -> Vec<u64> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Lexicographically smallest upper-triangle bit string over all relabellings.
pub fn brute_canon(adj: &[u64], perms: &[Vec<usize>]) -> (usize, u64) {
    let n = adj.len();
    let mut best = u64::MAX;
    for p in perms {
        let mut code = 0u64;
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if adj[p[i]] >> p[j] & 1 == 1 {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(code);
    }
    (n, best)
}

pub fn delete_vertex(adj: &[u64], v: usize) -> Vec<u64> {
    let low = (1u64 << v) - 1;
    adj.iter()
        .enumerate()
        .filter(|&(u, _)| u != v)
        .map(|(_, &m)| (m & low) | ((m >> 1) & !low))
        .collect()
}

pub fn contract(adj: &[u64], u: usize, v: usize) -> Vec<u64> {
    let mut a = adj.to_vec();
    let merged = (a[u] | a[v]) & !(1 << u) & !(1 << v);
    a[u] = merged;
    for w in 0..a.len() {
        if merged >> w & 1 == 1 {
            a[w] |= 1 << u;
        }
    }
    delete_vertex(&a, v)
}

/// Whether `K_t` is a minor of `g`, by exploring every minor up to isomorphism.
pub fn brute_has_complete_minor(g: &Graph, t: usize) -> bool {
    let perms: Vec<Vec<Vec<usize>>> = (0..=g.n()).map(permutations).collect();
    let start = masks(g);
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(brute_canon(&start, &perms[start.len()]));
    queue.push_back(start);
    while let Some(a) = queue.pop_front() {
        let n = a.len();
        if n < t {
            continue;
        }
        if n == t && a.iter().all(|m| m.count_ones() as usize == t - 1) {
            return true;
        }
        let mut next = Vec::new();
        for v in 0..n {
            next.push(delete_vertex(&a, v));
        }
        for u in 0..n {
            for v in u + 1..n {
                if a[u] >> v & 1 == 1 {
                    next.push(contract(&a, u, v));
                    let mut d = a.clone();
                    d[u] &= !(1 << v);
                    d[v] &= !(1 << u);
                    next.push(d);
                }
            }
        }
        for b in next {
            if seen.insert(brute_canon(&b, &perms[b.len()])) {
                queue.push_back(b);
            }
        }
    }
    false
}

/// `ex(n)` of Forb(K_t) by scanning every graph on `n` vertices.
pub fn brute_ex(n: usize, t: usize) -> usize {
    all_graphs(n, 6)
        .unwrap()
        .iter()
        .filter(|g| !brute_has_complete_minor(g, t))
        .map(Graph::m)
        .max()
        .unwrap()
}

/// Smallest vertex set meeting every X–Y path, by trying all subsets.
pub fn brute_min_separation(g: &Graph, x: &[usize], y: &[usize]) -> usize {
    let n = g.n();
    let mut best = n;
    for s in 0u64..(1 << n) {
        let size = s.count_ones() as usize;
        if size >= best {
            continue;
        }
        let allowed: Vec<bool> = (0..n).map(|v| s >> v & 1 == 0).collect();
        let mut reach = vec![false; n];
        let mut stack: Vec<usize> = x.iter().copied().filter(|&v| allowed[v]).collect();
        for &v in &stack {
            reach[v] = true;
        }
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if allowed[w] && !reach[w] {
                    reach[w] = true;
                    stack.push(w);
                }
            }
        }
        if !y.iter().any(|&v| reach[v]) {
            best = size;
        }
    }
    best
}

/// `best[k]`: most edges of a `k`-vertex topological minor of `g`, from a full
/// scan of all graphs up to isomorphism.
pub fn topo_minor_profile(g: &Graph) -> Vec<Option<usize>> {
    let mut best = vec![None; g.n() + 1];
    for k in 2..=g.n() {
        for h in all_graphs(k, 6).unwrap().iter().rev() {
            if h.m() > g.m() {
                continue;
            }
            if best[k].is_some_and(|b| b >= h.m()) {
                break;
            }
            if find_topo_embedding(g, h).is_some() {
                best[k] = Some(h.m());
            }
        }
    }
    best
}

pub fn psi_from_profile(profile: &[Option<usize>], delta: &Rational) -> Rational {
    profile
        .iter()
        .enumerate()
        .filter_map(|(k, m)| m.map(|m| int(m as i64) - delta * int(k as i64 - 1)))
        .max()
        .expect("at least one topological minor")
}

pub fn psi_oracle(g: &Graph, delta: &Rational) -> Rational {
    psi_from_profile(&topo_minor_profile(g), delta)
}

/// Disjoint non-empty connected branch sets realizing every pattern edge.
pub fn model_is_valid(host: &Graph, pattern: &Graph, branch_sets: &[Vec<usize>]) -> bool {
    if branch_sets.len() != pattern.n() {
        return false;
    }
    let mut owner = vec![usize::MAX; host.n()];
    for (v, set) in branch_sets.iter().enumerate() {
        if set.is_empty() {
            return false;
        }
        for &x in set {
            if owner[x] != usize::MAX {
                return false;
            }
            owner[x] = v;
        }
        let mut seen = vec![false; host.n()];
        let mut stack = vec![set[0]];
        seen[set[0]] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in host.neighbors(u) {
                if owner[w] == v && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count != set.len() {
            return false;
        }
    }
    pattern.edges().iter().all(|&(a, b)| {
        branch_sets[a]
            .iter()
            .any(|&x| host.neighbors(x).iter().any(|&y| owner[y] == b))
    })
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Any `q`-patch on `n ≥ q` vertices with random injective boundaries.
pub fn random_patch<R: Rng>(rng: &mut R, q: usize, n: usize) -> Patch {
    let g = random_graph(rng, n, 0.5);
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(rng);
    let a = verts[..q].to_vec();
    verts.shuffle(rng);
    let b = verts[..q].to_vec();
    Patch::new(g, a, b).unwrap()
}

/// A linked non-degenerate `q`-patch with `a(i) = i`; coordinate 0 has
/// `a(0) = b(0)` when `fixed`, every other `b(i)` is a fresh vertex.
pub fn random_linked_patch<R: Rng>(rng: &mut R, q: usize, fixed: bool, extra: usize) -> Patch {
    let moving = if fixed { q - 1 } else { q };
    let n = q + moving + extra;
    loop {
        let mut g = random_graph(rng, n, 0.55);
        if fixed {
            // A global vertex may only touch other global vertices.
            for w in g.neighbors(0).to_vec() {
                g.remove_edge(0, w);
            }
        }
        let a: Vec<usize> = (0..q).collect();
        let b: Vec<usize> = (0..q)
            .map(|i| if fixed && i == 0 { 0 } else { q + i - usize::from(fixed) })
            .collect();
        let h = Patch::new(g, a, b).unwrap();
        let c = classify(&h).unwrap();
        if c.linked && !c.degenerate {
            return h;
        }
    }
}

pub struct BuiltPatchwork {
    pub host: Graph,
    pub patches: Vec<Patch>,
    pub placements: Vec<Vec<usize>>,
}

/// Disjoint linked patches (sharing one global vertex when `q ≥ 2` and a coin
/// says so) joined by stitch paths with two interior vertices, plus pendant
/// vertices hanging off single boundary sides.
pub fn random_patchwork<R: Rng>(rng: &mut R, max_host: usize) -> BuiltPatchwork {
    loop {
        let q = rng.gen_range(1..=3);
        let fixed = q >= 2 && rng.gen_bool(0.4);
        let k = rng.gen_range(2..=4);
        let patches: Vec<Patch> = (0..k)
            .map(|_| {
                let extra = rng.gen_range(0..=2);
                random_linked_patch(rng, q, fixed, extra)
            })
            .collect();
        let moving = q - usize::from(fixed);
        let size = usize::from(fixed)
            + patches.iter().map(|h| h.n() - usize::from(fixed)).sum::<usize>()
            + 2 * moving * (k - 1);
        if size > max_host {
            continue;
        }
        let extras = rng.gen_range(0..=(max_host - size).min(2));
        let mut host = Graph::new(0);
        let global = fixed.then(|| host.add_vertex());
        let mut placements = Vec::new();
        for h in &patches {
            let pl: Vec<usize> = (0..h.n())
                .map(|v| match global {
                    Some(g) if v == 0 => g,
                    _ => host.add_vertex(),
                })
                .collect();
            for (u, v) in h.graph().edges() {
                host.add_edge(pl[u], pl[v]);
            }
            placements.push(pl);
        }
        for j in 0..k - 1 {
            for i in usize::from(fixed)..q {
                let from = placements[j][patches[j].b()[i]];
                let to = placements[j + 1][patches[j + 1].a()[i]];
                let s1 = host.add_vertex();
                let s2 = host.add_vertex();
                host.add_edge(from, s1);
                host.add_edge(s1, s2);
                host.add_edge(s2, to);
            }
        }
        for _ in 0..extras {
            let x = host.add_vertex();
            let j = rng.gen_range(0..k);
            let side = if rng.gen_bool(0.5) { patches[j].a() } else { patches[j].b() };
            for &v in side {
                if rng.gen_bool(0.6) {
                    host.add_edge(x, placements[j][v]);
                }
            }
        }
        return BuiltPatchwork { host, patches, placements };
    }
}

/// A random non-empty ascending subset of `0..k`.
pub fn random_subset<R: Rng>(rng: &mut R, k: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// Two disjoint paths `s1–t1` and `s2–t2`, by enumerating every simple `s1–t1` path.
pub fn brute_two_paths(g: &Graph, s1: usize, t1: usize, s2: usize, t2: usize) -> bool {
    fn connected_avoiding(g: &Graph, s: usize, t: usize, used: &[bool]) -> bool {
        let mut seen = used.to_vec();
        if seen[s] || seen[t] {
            return false;
        }
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            if u == t {
                return true;
            }
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }
    fn extend(g: &Graph, u: usize, t1: usize, s2: usize, t2: usize, used: &mut Vec<bool>) -> bool {
        if u == t1 {
            return connected_avoiding(g, s2, t2, used);
        }
        for &w in g.neighbors(u) {
            if !used[w] && w != s2 && w != t2 {
                used[w] = true;
                let found = extend(g, w, t1, s2, t2, used);
                used[w] = false;
                if found {
                    return true;
                }
            }
        }
        false
    }
    let mut used = vec![false; g.n()];
    used[s1] = true;
    extend(g, s1, t1, s2, t2, &mut used)
}

/// Minor containment by trying every assignment of host vertices to branch sets.
pub fn brute_minor(host: &Graph, pattern: &Graph) -> bool {
    let (n, k) = (host.n(), pattern.n());
    if k == 0 {
        return true;
    }
    if k > n {
        return false;
    }
    let mut owner = vec![k; n];
    fn rec(host: &Graph, pattern: &Graph, owner: &mut Vec<usize>, i: usize) -> bool {
        let k = pattern.n();
        if i == host.n() {
            let sets: Vec<Vec<usize>> = (0..k)
                .map(|v| (0..host.n()).filter(|&x| owner[x] == v).collect())
                .collect();
            return model_is_valid(host, pattern, &sets);
        }
        for c in 0..=k {
            owner[i] = c;
            if rec(host, pattern, owner, i + 1) {
                return true;
            }
        }
        false
    }
    rec(host, pattern, &mut owner, 0)
}
