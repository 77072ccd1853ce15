//! Patchworks embedded in and stitched to host graphs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphJson};
use crate::minor::Model;
use crate::patch::{classify, e_value, graph_phi, phi, product_all, Patch, PatchJson};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub tag: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.tag, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_tag(&self) -> Option<&'static str> {
        self.violations.first().map(|v| v.tag)
    }

    fn push(&mut self, tag: &'static str, detail: String) {
        self.violations.push(Violation { tag, detail });
    }
}

/// Checks that `placement` realizes `H` as an induced subgraph whose outside
/// neighbours each see only the left or only the right boundary.
pub fn validate_embedded_patch(host: &Graph, h: &Patch, placement: &[usize]) -> Report {
    let mut r = Report::default();
    check_embedded(host, h, placement, "E1", &mut r);
    r
}

fn check_embedded(host: &Graph, h: &Patch, placement: &[usize], tag: &'static str, r: &mut Report) {
    if placement.len() != h.n() {
        r.push(tag, format!("placement has {} entries for {} vertices", placement.len(), h.n()));
        return;
    }
    let mut pos = vec![usize::MAX; host.n()];
    for (v, &x) in placement.iter().enumerate() {
        if x >= host.n() || pos[x] != usize::MAX {
            r.push(tag, format!("placement not injective into host at patch vertex {v}"));
            return;
        }
        pos[x] = v;
    }
    for u in 0..h.n() {
        for v in u + 1..h.n() {
            if h.graph().has_edge(u, v) != host.has_edge(placement[u], placement[v]) {
                r.push(tag, format!("pair ({u},{v}) differs between patch and host"));
                return;
            }
        }
    }
    let left = h.left_boundary();
    let right = h.right_boundary();
    for w in 0..host.n() {
        if pos[w] != usize::MAX {
            continue;
        }
        let inside: Vec<usize> = host
            .neighbors(w)
            .iter()
            .filter(|&&x| pos[x] != usize::MAX)
            .map(|&x| pos[x])
            .collect();
        let all_left = inside.iter().all(|v| left.binary_search(v).is_ok());
        let all_right = inside.iter().all(|v| right.binary_search(v).is_ok());
        if !all_left && !all_right {
            r.push(tag, format!("host vertex {w} sees both boundary sides or the interior"));
            return;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedPatchwork {
    host: Graph,
    patches: Vec<Patch>,
    placements: Vec<Vec<usize>>,
    globals: Vec<usize>,
}

impl EmbeddedPatchwork {
    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn patches(&self) -> &[Patch] {
        &self.patches
    }

    pub fn placements(&self) -> &[Vec<usize>] {
        &self.placements
    }

    /// Host vertices lying in two or more patches.
    pub fn globals(&self) -> &[usize] {
        &self.globals
    }

    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    pub fn q(&self) -> usize {
        self.patches[0].q()
    }

    /// `V(𝓗)`, sorted.
    pub fn vertex_set(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.placements.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn host_a(&self, j: usize, i: usize) -> usize {
        self.placements[j][self.patches[j].a()[i]]
    }

    fn host_b(&self, j: usize, i: usize) -> usize {
        self.placements[j][self.patches[j].b()[i]]
    }

    /// `⟦𝓗⟧`: the product of the patches in order.
    pub fn product_graph(&self) -> Graph {
        product_all(&self.patches).expect("uniform q").0.graph().clone()
    }

    /// The sub-patchwork on indices `j` (ascending), revalidated in the same host.
    pub fn restrict(&self, j: &[usize]) -> std::result::Result<EmbeddedPatchwork, Report> {
        let patches: Vec<Patch> = j.iter().map(|&k| self.patches[k].clone()).collect();
        let placements: Vec<Vec<usize>> = j.iter().map(|&k| self.placements[k].clone()).collect();
        validate_embedded_patchwork(&self.host, &patches, &placements)
    }
}

/// Checks (E1)–(E4); on success returns the patchwork with its global vertices.
pub fn validate_embedded_patchwork(
    host: &Graph,
    patches: &[Patch],
    placements: &[Vec<usize>],
) -> std::result::Result<EmbeddedPatchwork, Report> {
    let mut r = Report::default();
    if patches.is_empty() {
        r.push("E1", "patchwork is empty".into());
        return Err(r);
    }
    if placements.len() != patches.len() {
        r.push("E1", "one placement per patch is required".into());
        return Err(r);
    }
    let q = patches[0].q();
    if patches.iter().any(|h| h.q() != q) {
        r.push("E1", "patches have different arity".into());
        return Err(r);
    }
    for (j, (h, p)) in patches.iter().zip(placements).enumerate() {
        let mut sub = Report::default();
        check_embedded(host, h, p, "E1", &mut sub);
        if let Some(v) = sub.violations.into_iter().next() {
            r.push("E1", format!("patch {j}: {}", v.detail));
            return Err(r);
        }
    }
    let n = host.n();
    let mut count = vec![0usize; n];
    let mut member: Vec<Vec<bool>> = vec![vec![false; n]; patches.len()];
    for (j, p) in placements.iter().enumerate() {
        for &x in p {
            count[x] += 1;
            member[j][x] = true;
        }
    }
    let globals: Vec<usize> = (0..n).filter(|&x| count[x] >= 2).collect();
    for &g in &globals {
        for (j, h) in patches.iter().enumerate() {
            let ok = h
                .a()
                .iter()
                .any(|&v| placements[j][v] == g)
                && h.b().iter().any(|&v| placements[j][v] == g);
            if !ok {
                r.push("E2", format!("shared vertex {g} is not in both boundaries of patch {j}"));
                return Err(r);
            }
        }
    }
    for v in (0..n).filter(|&x| count[x] > 0) {
        for (j, mem) in member.iter().enumerate() {
            if !mem[v] && host.neighbors(v).iter().any(|&w| mem[w]) {
                r.push("E3", format!("vertex {v} has a neighbour in patch {j} but is not in it"));
                return Err(r);
            }
        }
    }
    for v in (0..n).filter(|&x| count[x] == 0) {
        let nb: Vec<usize> = host.neighbors(v).iter().copied().filter(|&w| count[w] > 0).collect();
        let ok = patches.iter().enumerate().any(|(j, h)| {
            let left: Vec<usize> = h.a().iter().map(|&u| placements[j][u]).collect();
            let right: Vec<usize> = h.b().iter().map(|&u| placements[j][u]).collect();
            nb.iter().all(|w| left.contains(w)) || nb.iter().all(|w| right.contains(w))
        });
        if !ok {
            r.push("E4", format!("outside vertex {v} sees no single boundary side"));
            return Err(r);
        }
    }
    Ok(EmbeddedPatchwork {
        host: host.clone(),
        patches: patches.to_vec(),
        placements: placements.to_vec(),
        globals,
    })
}

/// `paths[j][i]` joins `b_{H_j}(i)` to `a_{H_{j+1}}(i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StitchSet {
    pub paths: Vec<Vec<Vec<usize>>>,
}

fn common_subpath_at(p: &[usize], q: &[usize], end: usize) -> bool {
    // `p` ends at `end`, `q` starts at `end`; the overlap must be a suffix of `p`
    // that reversed is a prefix of `q`.
    let shared: Vec<usize> = p.iter().copied().filter(|v| q.contains(v)).collect();
    if shared.is_empty() || p.last() != Some(&end) || q.first() != Some(&end) {
        return false;
    }
    let k = shared.len();
    let suffix = &p[p.len() - k..];
    let prefix: Vec<usize> = q[..k].iter().rev().copied().collect();
    suffix == prefix.as_slice()
}

/// Checks the three stitching conditions for an embedded patchwork.
pub fn validate_stitched(emb: &EmbeddedPatchwork, stitches: &StitchSet) -> Report {
    let mut r = Report::default();
    let l = emb.len();
    let q = emb.q();
    if stitches.paths.len() != l.saturating_sub(1) || stitches.paths.iter().any(|s| s.len() != q) {
        r.push("S1", format!("expected {} x {} stitch paths", l.saturating_sub(1), q));
        return r;
    }
    let mut in_h = vec![false; emb.host.n()];
    for x in emb.vertex_set() {
        in_h[x] = true;
    }
    for j in 0..l.saturating_sub(1) {
        for i in 0..q {
            let p = &stitches.paths[j][i];
            let (s, t) = (emb.host_b(j, i), emb.host_a(j + 1, i));
            if !emb.host.is_path(p) || p[0] != s || p[p.len() - 1] != t {
                r.push("S1", format!("path ({i},{j}) is not a host path from {s} to {t}"));
                return r;
            }
            if p.len() > 2 && p[1..p.len() - 1].iter().any(|&x| in_h[x]) {
                r.push("S2", format!("path ({i},{j}) meets the patchwork internally"));
                return r;
            }
        }
    }
    let all: Vec<(usize, usize)> = (0..l.saturating_sub(1))
        .flat_map(|j| (0..q).map(move |i| (j, i)))
        .collect();
    for (x, &(j, i)) in all.iter().enumerate() {
        for &(j2, i2) in &all[x + 1..] {
            let p = &stitches.paths[j][i];
            let p2 = &stitches.paths[j2][i2];
            if !p.iter().any(|v| p2.contains(v)) {
                continue;
            }
            let ok = i == i2
                && j2 == j + 1
                && emb.host_a(j2, i) == emb.host_b(j2, i)
                && common_subpath_at(p, p2, emb.host_a(j2, i));
            if !ok {
                r.push("S3", format!("paths ({i},{j}) and ({i2},{j2}) intersect illegally"));
                return r;
            }
        }
    }
    r
}

/// Model of `⟦𝓗⟧` in the host: each product vertex gets the host vertices placed
/// on it, plus every stitch path ending at it.
pub fn stitched_minor_model(emb: &EmbeddedPatchwork, stitches: &StitchSet) -> Result<Model> {
    let rep = validate_stitched(emb, stitches);
    if !rep.is_ok() {
        return Err(Error::NotEmbedded(rep.violations[0].to_string()));
    }
    let (prod, maps) = product_all(&emb.patches)?;
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); prod.n()];
    for (j, p) in emb.placements.iter().enumerate() {
        for (v, &x) in p.iter().enumerate() {
            sets[maps[j][v]].push(x);
        }
    }
    for (j, row) in stitches.paths.iter().enumerate() {
        for (i, path) in row.iter().enumerate() {
            let target = maps[j][emb.patches[j].b()[i]];
            sets[target].extend_from_slice(path);
        }
    }
    for s in &mut sets {
        s.sort_unstable();
        s.dedup();
    }
    let model = Model { branch_sets: sets };
    model
        .validate(&emb.host, prod.graph())
        .map_err(|e| Error::IdentityViolation(format!("stitched model invalid: {e}")))?;
    Ok(model)
}

/// `G/H`: delete the interior, delete patch edges not induced by the left boundary,
/// merge `b(i)` into `a(i)`. Returns the graph and the old→new vertex map
/// (deleted vertices map to `None`).
pub fn contract_patch_mapped(host: &Graph, h: &Patch, placement: &[usize]) -> Result<(Graph, Vec<Option<usize>>)> {
    let rep = validate_embedded_patch(host, h, placement);
    if !rep.is_ok() {
        return Err(Error::NotEmbedded(rep.violations[0].to_string()));
    }
    if !classify(h)?.linked {
        return Err(Error::NotLinked);
    }
    let n = host.n();
    let mut in_x = vec![false; n];
    for &x in placement {
        in_x[x] = true;
    }
    let a: Vec<usize> = h.a().iter().map(|&v| placement[v]).collect();
    let b: Vec<usize> = h.b().iter().map(|&v| placement[v]).collect();
    let mut boundary = vec![false; n];
    let mut left = vec![false; n];
    for &x in &a {
        boundary[x] = true;
        left[x] = true;
    }
    for &x in &b {
        boundary[x] = true;
    }
    let mut target: Vec<usize> = (0..n).collect();
    for i in 0..h.q() {
        target[b[i]] = a[i];
    }
    let mut removed = vec![false; n];
    for v in 0..n {
        if (in_x[v] && !boundary[v]) || target[v] != v {
            removed[v] = true;
        }
    }
    let mut map = vec![None; n];
    let mut next = 0;
    for v in 0..n {
        if !removed[v] {
            map[v] = Some(next);
            next += 1;
        }
    }
    for v in 0..n {
        if target[v] != v {
            map[v] = map[target[v]];
        }
    }
    let mut g = Graph::new(next);
    let mut kept = 0usize;
    for (u, v) in host.edges() {
        if in_x[u] && in_x[v] && !(left[u] && left[v]) {
            continue;
        }
        let (Some(nu), Some(nv)) = (map[u], map[v]) else {
            continue;
        };
        if nu == nv {
            return Err(Error::IdentityViolation(format!("edge ({u},{v}) became a loop")));
        }
        kept += 1;
        g.add_edge(nu, nv);
    }
    if g.m() != kept {
        return Err(Error::IdentityViolation("contraction created parallel edges".into()));
    }
    let expect = host.m() as i64 - e_value(h);
    if g.m() as i64 != expect {
        return Err(Error::IdentityViolation(format!(
            "|E(G/H)| = {} but |E(G)| - e(H) = {expect}",
            g.m()
        )));
    }
    Ok((g, map))
}

pub fn contract_patch(host: &Graph, h: &Patch, placement: &[usize]) -> Result<Graph> {
    Ok(contract_patch_mapped(host, h, placement)?.0)
}

/// Contracts the indexed patches one after another (ascending index), asserting the
/// summed edge identity and the vertex-count identity after every step.
pub fn contract_many(emb: &EmbeddedPatchwork, indices: &[usize]) -> Result<Graph> {
    let mut idx: Vec<usize> = indices.to_vec();
    idx.sort_unstable();
    idx.dedup();
    for &i in &idx {
        if i >= emb.len() {
            return Err(Error::InvalidParameter(format!("patch index {i} out of range")));
        }
        if !classify(&emb.patches[i])?.refined {
            return Err(Error::NotRefined(i));
        }
    }
    let mut g = emb.host.clone();
    let mut placements = emb.placements.clone();
    let mut e_sum = 0i64;
    let mut v_drop = 0usize;
    for &i in &idx {
        let h = &emb.patches[i];
        let (g2, map) = contract_patch_mapped(&g, h, &placements[i])?;
        e_sum += e_value(h);
        v_drop += h.n() - h.q();
        g = g2;
        for p in placements.iter_mut() {
            for x in p.iter_mut().filter(|x| **x != usize::MAX) {
                *x = map[*x].unwrap_or(usize::MAX);
            }
        }
        if g.m() as i64 != emb.host.m() as i64 - e_sum {
            return Err(Error::IdentityViolation("summed edge identity failed".into()));
        }
        if g.n() + v_drop != emb.host.n() {
            return Err(Error::IdentityViolation("vertex-count identity failed".into()));
        }
    }
    Ok(g)
}

/// `φ(G/(𝓗,I)) = φ(G) − Σ_{i∈I} φ(H_i)`, checked exactly for the given `Δ`.
pub fn contract_many_phi(emb: &EmbeddedPatchwork, indices: &[usize], delta: &Rational) -> Result<Graph> {
    let g = contract_many(emb, indices)?;
    let mut idx: Vec<usize> = indices.to_vec();
    idx.sort_unstable();
    idx.dedup();
    let sum: Rational = idx.iter().map(|&i| phi(&emb.patches[i], delta).value).sum();
    let lhs = graph_phi(&g, delta);
    let rhs = graph_phi(&emb.host, delta) - sum;
    if lhs != rhs {
        return Err(Error::IdentityViolation(format!("phi identity failed: {lhs} != {rhs}")));
    }
    Ok(g)
}

/// Drops every patch containing a non-global vertex of `s`.
pub fn respectful_restriction(emb: &EmbeddedPatchwork, s: &[usize]) -> Result<EmbeddedPatchwork> {
    if emb.len() <= s.len() {
        return Err(Error::Precondition(format!(
            "need more patches ({}) than vertices in S ({})",
            emb.len(),
            s.len()
        )));
    }
    let keep: Vec<usize> = (0..emb.len())
        .filter(|&j| {
            !emb.placements[j]
                .iter()
                .any(|x| s.contains(x) && emb.globals.binary_search(x).is_err())
        })
        .collect();
    emb.restrict(&keep)
        .map_err(|r| Error::IdentityViolation(format!("restriction not embedded: {}", r.violations[0])))
}

/// On-disk form of a patchwork, optionally with host, placements and stitches.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PatchworkJson {
    pub q: usize,
    pub patches: Vec<PatchJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub host: Option<GraphJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placements: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stitches: Option<Vec<Vec<Vec<usize>>>>,
}

impl PatchworkJson {
    pub fn from_parts(emb: &EmbeddedPatchwork, stitches: Option<&StitchSet>) -> Self {
        PatchworkJson {
            q: emb.q(),
            patches: emb.patches.iter().map(PatchJson::from).collect(),
            host: Some(GraphJson::from(&emb.host)),
            placements: Some(emb.placements.clone()),
            stitches: stitches.map(|s| s.paths.clone()),
        }
    }
}
