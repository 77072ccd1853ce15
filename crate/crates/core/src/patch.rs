//! q-patches: graphs with two boundary labelings, glued by the patch product.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linkage::{prescribed_linkage, DEFAULT_SEARCH_BUDGET};
use crate::minor::{find_anchored_minor_model, Model};
use crate::rational::{int, Rational};
use crate::topo::{find_anchored_embedding, Embedding, DEFAULT_TOPO_BUDGET};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch {
    graph: Graph,
    a: Vec<usize>,
    b: Vec<usize>,
}

fn injective(map: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    map.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
}

impl Patch {
    pub fn new(graph: Graph, a: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::ArityMismatch(a.len(), b.len()));
        }
        if !injective(&a, graph.n()) || !injective(&b, graph.n()) {
            return Err(Error::InvalidParameter(
                "boundary labelings must be injective and in range".into(),
            ));
        }
        Ok(Patch { graph, a, b })
    }

    pub fn q(&self) -> usize {
        self.a.len()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn left_boundary(&self) -> Vec<usize> {
        let mut v = self.a.clone();
        v.sort_unstable();
        v
    }

    pub fn right_boundary(&self) -> Vec<usize> {
        let mut v = self.b.clone();
        v.sort_unstable();
        v
    }

    /// Union of both boundaries, sorted.
    pub fn boundary(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.a.iter().chain(&self.b).copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.a.contains(&v) || self.b.contains(&v)
    }

    /// A graph as a 0-patch.
    pub fn from_graph(g: Graph) -> Self {
        Patch {
            graph: g,
            a: Vec::new(),
            b: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchJson {
    pub q: usize,
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl From<&Patch> for PatchJson {
    fn from(h: &Patch) -> Self {
        PatchJson {
            q: h.q(),
            n: h.n(),
            edges: h.graph.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            a: h.a.clone(),
            b: h.b.clone(),
        }
    }
}

impl TryFrom<PatchJson> for Patch {
    type Error = Error;
    fn try_from(j: PatchJson) -> Result<Patch> {
        if j.a.len() != j.q || j.b.len() != j.q {
            return Err(Error::Parse("boundary length differs from q".into()));
        }
        let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        Patch::new(Graph::from_edges(j.n, &edges)?, j.a, j.b)
    }
}

impl Patch {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PatchJson::from(self)).expect("patch serializes")
    }

    pub fn from_json(s: &str) -> Result<Patch> {
        let j: PatchJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Patch::try_from(j)
    }
}

/// `q` isolated vertices with `a = b = identity`.
pub fn identity_patch(q: usize) -> Patch {
    let id: Vec<usize> = (0..q).collect();
    Patch {
        graph: Graph::new(q),
        a: id.clone(),
        b: id,
    }
}

/// The planar strip: vertices 0..4, edges 01, 12, 03, 13, 23, `a = (0,1,2)`, `b = (1,2,3)`.
pub fn strip_patch() -> Patch {
    let g = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 3), (1, 3), (2, 3)]).unwrap();
    Patch::new(g, vec![0, 1, 2], vec![1, 2, 3]).unwrap()
}

/// Product plus the vertex maps of both factors into it. `H1` keeps its indices;
/// `a_{H2}(i)` lands on `b_{H1}(i)` and the remaining vertices of `H2` follow in order.
pub fn product_with_maps(h1: &Patch, h2: &Patch) -> Result<(Patch, Vec<usize>, Vec<usize>)> {
    if h1.q() != h2.q() {
        return Err(Error::ArityMismatch(h1.q(), h2.q()));
    }
    let n1 = h1.n();
    let mut map2 = vec![usize::MAX; h2.n()];
    for i in 0..h2.q() {
        map2[h2.a[i]] = h1.b[i];
    }
    let mut next = n1;
    for m in map2.iter_mut() {
        if *m == usize::MAX {
            *m = next;
            next += 1;
        }
    }
    let mut g = h1.graph.clone();
    for _ in n1..next {
        g.add_vertex();
    }
    for (u, v) in h2.graph.edges() {
        g.add_edge(map2[u], map2[v]);
    }
    let b = h2.b.iter().map(|&v| map2[v]).collect();
    let p = Patch {
        graph: g,
        a: h1.a.clone(),
        b,
    };
    Ok((p, (0..n1).collect(), map2))
}

pub fn patch_product(h1: &Patch, h2: &Patch) -> Result<Patch> {
    Ok(product_with_maps(h1, h2)?.0)
}

/// Left-associated `n`-fold product.
pub fn patch_power(h: &Patch, n: usize) -> Result<Patch> {
    if n == 0 {
        return Err(Error::InvalidParameter("power needs n >= 1".into()));
    }
    let mut acc = h.clone();
    for _ in 1..n {
        acc = patch_product(&acc, h)?;
    }
    Ok(acc)
}

/// Product of a non-empty sequence, with each factor's vertex map into the result.
pub fn product_all(hs: &[Patch]) -> Result<(Patch, Vec<Vec<usize>>)> {
    let Some(first) = hs.first() else {
        return Err(Error::InvalidParameter("empty product".into()));
    };
    let mut acc = first.clone();
    let mut maps = vec![(0..first.n()).collect::<Vec<_>>()];
    for h in &hs[1..] {
        let (p, _, m2) = product_with_maps(&acc, h)?;
        acc = p;
        maps.push(m2);
    }
    Ok((acc, maps))
}

fn edges_within(g: &Graph, verts: &[usize]) -> usize {
    let mut c = 0;
    for (i, &u) in verts.iter().enumerate() {
        for &v in &verts[i + 1..] {
            if g.has_edge(u, v) {
                c += 1;
            }
        }
    }
    c
}

/// `|E(H)|` minus the edges induced by the left boundary.
pub fn e_value(h: &Patch) -> i64 {
    h.graph.m() as i64 - edges_within(&h.graph, &h.left_boundary()) as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatchClass {
    pub degenerate: bool,
    pub linked: bool,
    pub refined: bool,
    pub fan: bool,
}

/// Paths joining `a(i)` to `b(i)` for every `i`, pairwise disjoint.
pub fn find_patch_linkage(h: &Patch) -> Result<Option<Vec<Vec<usize>>>> {
    let pairs: Vec<(usize, usize)> = h.a.iter().copied().zip(h.b.iter().copied()).collect();
    prescribed_linkage(&h.graph, &pairs, &vec![false; h.n()], DEFAULT_SEARCH_BUDGET)
}

pub fn classify(h: &Patch) -> Result<PatchClass> {
    let degenerate = h.n() == h.q();
    let linked = find_patch_linkage(h)?.is_some();
    let fan = !degenerate && h.a == h.b && {
        let bd = h.boundary();
        let mut inner = vec![true; h.n()];
        for &v in &bd {
            inner[v] = false;
        }
        h.graph.components_within(&inner).len() == 1
            && bd
                .iter()
                .all(|&v| h.graph.neighbors(v).iter().any(|&w| inner[w]))
    };
    Ok(PatchClass {
        degenerate,
        linked,
        refined: linked && !degenerate,
        fan,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Heavy,
    Balanced,
    Light,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaWeight {
    pub delta: Rational,
    pub value: Rational,
}

impl DeltaWeight {
    pub fn weight(&self) -> Weight {
        use num_traits::{Signed, Zero};
        if self.value.is_zero() {
            Weight::Balanced
        } else if self.value.is_positive() {
            Weight::Heavy
        } else {
            Weight::Light
        }
    }
}

/// `e(H) − Δ(|V(H)| − q)`.
pub fn phi(h: &Patch, delta: &Rational) -> DeltaWeight {
    let value = int(e_value(h)) - delta * int((h.n() - h.q()) as i64);
    DeltaWeight {
        delta: delta.clone(),
        value,
    }
}

/// `|E(G)| − Δ|V(G)|`.
pub fn graph_phi(g: &Graph, delta: &Rational) -> Rational {
    int(g.m() as i64) - delta * int(g.n() as i64)
}

/// A model of `⟦H⟧` in `⟦G⟧` with `a_G(i) ∈ α(a_H(i))` and `b_G(i) ∈ α(b_H(i))`.
pub fn patch_minor(h: &Patch, g: &Patch) -> Result<Option<Model>> {
    if h.q() != g.q() {
        return Err(Error::ArityMismatch(h.q(), g.q()));
    }
    let mut req = vec![Vec::new(); h.n()];
    for i in 0..h.q() {
        req[h.a[i]].push(g.a[i]);
        req[h.b[i]].push(g.b[i]);
    }
    for r in &mut req {
        r.sort_unstable();
        r.dedup();
    }
    find_anchored_minor_model(&g.graph, &h.graph, &req)
}

/// An embedding of `⟦H⟧` in `⟦G⟧` mapping `a_H(i) ↦ a_G(i)` and `b_H(i) ↦ b_G(i)`.
pub fn patch_topo_minor(h: &Patch, g: &Patch) -> Result<Option<Embedding>> {
    if h.q() != g.q() {
        return Err(Error::ArityMismatch(h.q(), g.q()));
    }
    let mut fixed: Vec<Option<usize>> = vec![None; h.n()];
    for (hs, gs) in [(&h.a, &g.a), (&h.b, &g.b)] {
        for i in 0..h.q() {
            match fixed[hs[i]] {
                Some(x) if x != gs[i] => return Ok(None),
                _ => fixed[hs[i]] = Some(gs[i]),
            }
        }
    }
    find_anchored_embedding(&g.graph, &h.graph, &fixed, DEFAULT_TOPO_BUDGET)
}

pub const DEFAULT_POWER_HORIZON: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerLimit {
    pub limit: Rational,
    /// Per-copy edge increment once stable.
    pub delta: usize,
    /// Smallest `n` from which `|E(H^{n+1})| − |E(H^n)|` is certified constant.
    pub onset: usize,
    /// Highest power actually built.
    pub powers_built: usize,
    pub edge_counts: Vec<usize>,
}

fn right_pattern(h: &Patch) -> Vec<(usize, usize)> {
    let q = h.q();
    let mut out = Vec::new();
    for i in 0..q {
        for j in i + 1..q {
            if h.graph.has_edge(h.b[i], h.b[j]) {
                out.push((i, j));
            }
        }
    }
    out
}

/// `lim d(⟦H^n⟧)` computed exactly from the stabilized edge increment.
///
/// Certified at `n` once the labelled edge set among the right boundary of `H^n`
/// equals that of `H^{n+1}` and the increments at `n` and `n+1` agree.
pub fn power_density_limit_with_horizon(h: &Patch, horizon: usize) -> Result<PowerLimit> {
    if h.n() == h.q() {
        return Err(Error::DegeneratePatch);
    }
    let mut powers = vec![h.clone()];
    let mut edge_counts = vec![h.graph.m()];
    let mut patterns = vec![right_pattern(h)];
    while powers.len() < horizon.max(3) {
        let next = patch_product(powers.last().unwrap(), h)?;
        edge_counts.push(next.graph.m());
        patterns.push(right_pattern(&next));
        powers.push(next);
        let k = powers.len();
        if k >= 3 {
            // Candidate onset n = k - 2 (1-based), using H^n, H^{n+1}, H^{n+2}.
            let n = k - 2;
            let d1 = edge_counts[n] - edge_counts[n - 1];
            let d2 = edge_counts[n + 1] - edge_counts[n];
            if d1 == d2 && patterns[n - 1] == patterns[n] {
                let onset = first_onset(&edge_counts, &patterns);
                return Ok(PowerLimit {
                    limit: Rational::new(
                        (d1 as i64).into(),
                        ((h.n() - h.q()) as i64).into(),
                    ),
                    delta: d1,
                    onset,
                    powers_built: k,
                    edge_counts,
                });
            }
        }
    }
    Err(Error::NoStabilization(horizon))
}

fn first_onset(edge_counts: &[usize], patterns: &[Vec<(usize, usize)>]) -> usize {
    (1..edge_counts.len() - 1)
        .find(|&n| {
            edge_counts[n] - edge_counts[n - 1] == edge_counts[n + 1] - edge_counts[n]
                && patterns[n - 1] == patterns[n]
        })
        .unwrap_or(edge_counts.len() - 2)
}

pub fn power_density_limit(h: &Patch) -> Result<Rational> {
    Ok(power_density_limit_with_horizon(h, DEFAULT_POWER_HORIZON)?.limit)
}

/// The patch on `q + z` vertices built from a tree `T` on `0..q` and `Z = 0..z`:
/// each `i < z` gets a pendant copy `i + q`, `a(i) = i`, and `b(i) = i + q` for
/// `i < z`, `b(i) = i` otherwise.
pub fn z_extension(tree: &Graph, z: usize) -> Result<Patch> {
    let q = tree.n();
    if !tree.is_tree() {
        return Err(Error::Precondition("T must be a tree".into()));
    }
    if z == 0 || z > q {
        return Err(Error::Precondition("Z must be a non-empty prefix of [q]".into()));
    }
    if (z..q).any(|v| tree.degree(v) > 1) {
        return Err(Error::Precondition("vertices outside Z must be leaves".into()));
    }
    let mut g = tree.clone();
    for i in 0..z {
        let v = g.add_vertex();
        g.add_edge(i, v);
    }
    let a: Vec<usize> = (0..q).collect();
    let b: Vec<usize> = (0..q).map(|i| if i < z { i + q } else { i }).collect();
    Patch::new(g, a, b)
}
