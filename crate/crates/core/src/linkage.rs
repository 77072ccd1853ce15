//! Disjoint paths: Menger flows, prescribed-ends linkages and zone linkages.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl Separation {
    pub fn order(&self) -> usize {
        self.a.iter().filter(|v| self.b.binary_search(v).is_ok()).count()
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        let n = g.n();
        let mut in_a = vec![false; n];
        let mut in_b = vec![false; n];
        for &v in &self.a {
            in_a[v] = true;
        }
        for &v in &self.b {
            in_b[v] = true;
        }
        if (0..n).any(|v| !in_a[v] && !in_b[v]) {
            return false;
        }
        g.edges().iter().all(|&(u, v)| {
            let bad = |x: usize, y: usize| in_a[x] && !in_b[x] && in_b[y] && !in_a[y];
            !bad(u, v) && !bad(v, u)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linkage {
    pub paths: Vec<Vec<usize>>,
}

impl Linkage {
    pub fn is_valid(&self, g: &Graph) -> bool {
        let mut seen = HashSet::new();
        self.paths
            .iter()
            .all(|p| g.is_path(p) && p.iter().all(|&v| seen.insert(v)))
    }
}

#[derive(Clone, Debug)]
pub struct MaxLinkage {
    pub k: usize,
    pub linkage: Linkage,
    pub certificate: Separation,
}

struct Flow {
    head: Vec<usize>,
    cap: Vec<i64>,
    out: Vec<Vec<usize>>,
}

impl Flow {
    fn new(nodes: usize) -> Self {
        Flow {
            head: Vec::new(),
            cap: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    fn arc(&mut self, u: usize, v: usize, c: i64) {
        self.out[u].push(self.head.len());
        self.head.push(v);
        self.cap.push(c);
        self.out[v].push(self.head.len());
        self.head.push(u);
        self.cap.push(0);
    }

    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut prev = vec![usize::MAX; self.out.len()];
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &a in &self.out[u] {
                let v = self.head[a];
                if self.cap[a] > 0 && !seen[v] {
                    seen[v] = true;
                    prev[v] = a;
                    if v == t {
                        let mut c = t;
                        while c != s {
                            let a = prev[c];
                            self.cap[a] -= 1;
                            self.cap[a ^ 1] += 1;
                            c = self.head[a ^ 1];
                        }
                        return true;
                    }
                    q.push_back(v);
                }
            }
        }
        false
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.out[u] {
                let v = self.head[a];
                if self.cap[a] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

/// Maximum number of vertex-disjoint `(X, Y)`-paths, a linkage realizing it, and a
/// separation `(A, B)` with `X ⊆ A`, `Y ⊆ B` of the same order.
///
/// Each returned path meets `X` only in its first vertex and `Y` only in its last.
pub fn max_linkage(g: &Graph, x: &[usize], y: &[usize]) -> MaxLinkage {
    let n = g.n();
    let big = (n + 1) as i64;
    let src = 2 * n;
    let snk = 2 * n + 1;
    let mut f = Flow::new(2 * n + 2);
    let mut in_x = vec![false; n];
    let mut in_y = vec![false; n];
    for &v in x {
        in_x[v] = true;
    }
    for &v in y {
        in_y[v] = true;
    }
    for v in 0..n {
        if in_x[v] {
            f.arc(src, 2 * v, big);
        }
    }
    for v in 0..n {
        f.arc(2 * v, 2 * v + 1, 1);
        for &w in g.neighbors(v) {
            f.arc(2 * v + 1, 2 * w, big);
        }
        if in_y[v] {
            f.arc(2 * v + 1, snk, big);
        }
    }
    let mut k = 0;
    while f.augment(src, snk) {
        k += 1;
    }

    // Walk flow-carrying arcs from each saturated vertex arc of an X vertex.
    let mut flow_next = vec![usize::MAX; n];
    for v in 0..n {
        for &a in &f.out[2 * v + 1] {
            let h = f.head[a];
            if a % 2 == 0 && h < 2 * n && h % 2 == 0 && f.cap[a] < big {
                flow_next[v] = h / 2;
            }
        }
    }
    let mut paths = Vec::new();
    for &a in &f.out[src] {
        if a % 2 == 0 && f.cap[a] < big {
            let mut v = f.head[a] / 2;
            let mut p = vec![v];
            let mut guard = 0;
            while !flow_ends_here(&f, v, snk, big) {
                v = flow_next[v];
                p.push(v);
                guard += 1;
                assert!(guard <= n, "flow decomposition cycled");
            }
            paths.push(trim_xy(p, &in_x, &in_y));
        }
    }
    paths.sort();

    let r = f.reachable(src);
    let mut a_side = Vec::new();
    let mut b_side = Vec::new();
    for v in 0..n {
        let vin = r[2 * v];
        let vout = r[2 * v + 1];
        if vin {
            a_side.push(v);
        }
        if !vin || !vout {
            b_side.push(v);
        }
    }
    MaxLinkage {
        k,
        linkage: Linkage { paths },
        certificate: Separation { a: a_side, b: b_side },
    }
}

fn flow_ends_here(f: &Flow, v: usize, snk: usize, big: i64) -> bool {
    f.out[2 * v + 1]
        .iter()
        .any(|&a| a % 2 == 0 && f.head[a] == snk && f.cap[a] < big)
}

fn trim_xy(p: Vec<usize>, in_x: &[bool], in_y: &[bool]) -> Vec<usize> {
    let start = p.iter().rposition(|&v| in_x[v]).unwrap_or(0);
    let p = &p[start..];
    let end = p.iter().position(|&v| in_y[v]).unwrap_or(p.len() - 1);
    p[..=end].to_vec()
}

pub fn kappa(g: &Graph, x: &[usize], y: &[usize]) -> usize {
    max_linkage(g, x, y).k
}

/// True iff no path of `G − Y` joins `X` to `Z`.
pub fn separates(g: &Graph, y: &[usize], x: &[usize], z: &[usize]) -> bool {
    let n = g.n();
    let mut allowed = vec![true; n];
    for &v in y {
        allowed[v] = false;
    }
    let mut comp = vec![usize::MAX; n];
    for (i, c) in g.components_within(&allowed).iter().enumerate() {
        for &v in c {
            comp[v] = i;
        }
    }
    let xs: HashSet<usize> = x.iter().filter(|&&v| allowed[v]).map(|&v| comp[v]).collect();
    !z.iter().any(|&v| allowed[v] && xs.contains(&comp[v]))
}

/// Node budget for exhaustive path searches.
pub const DEFAULT_SEARCH_BUDGET: u64 = 50_000_000;

struct Prescribed<'a> {
    g: &'a Graph,
    pairs: &'a [(usize, usize)],
    used: Vec<bool>,
    paths: Vec<Vec<usize>>,
    failed: HashSet<(usize, Vec<u64>)>,
    nodes: u64,
    budget: u64,
}

fn pack(used: &[bool]) -> Vec<u64> {
    let mut out = vec![0u64; used.len().div_ceil(64)];
    for (i, &u) in used.iter().enumerate() {
        if u {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

impl Prescribed<'_> {
    fn connected(&self, s: usize, t: usize) -> bool {
        let mut target = vec![false; self.g.n()];
        target[t] = true;
        let allowed: Vec<bool> = self.used.iter().map(|&u| !u).collect();
        self.g.bfs_path(s, &target, &allowed).is_some()
    }

    fn feasible(&self, from: usize, head: usize) -> bool {
        let (_, t) = self.pairs[from];
        if !self.connected(head, t) {
            return false;
        }
        self.pairs[from + 1..]
            .iter()
            .all(|&(s, t)| s == t || self.connected(s, t))
    }

    fn route(&mut self, i: usize) -> Result<bool> {
        if i == self.pairs.len() {
            return Ok(true);
        }
        let (s, t) = self.pairs[i];
        if s == t {
            self.paths.push(vec![s]);
            if self.route(i + 1)? {
                return Ok(true);
            }
            self.paths.pop();
            return Ok(false);
        }
        let key = (i, pack(&self.used));
        if self.failed.contains(&key) {
            return Ok(false);
        }
        if !self.feasible(i, s) {
            self.failed.insert(key);
            return Ok(false);
        }
        let mut path = vec![s];
        let ok = self.extend(i, &mut path)?;
        if !ok {
            self.failed.insert(key);
        }
        Ok(ok)
    }

    fn extend(&mut self, i: usize, path: &mut Vec<usize>) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::CapExceeded {
                name: "linkage_search_nodes",
                limit: self.budget as usize,
                requested: self.nodes as usize,
            });
        }
        let (_, t) = self.pairs[i];
        let head = *path.last().unwrap();
        if self.g.has_edge(head, t) {
            // A chordless path must finish here.
            path.push(t);
            self.paths.push(path.clone());
            let ok = self.route(i + 1)?;
            if !ok {
                self.paths.pop();
            }
            path.pop();
            return Ok(ok);
        }
        let g = self.g;
        for &w in g.neighbors(head) {
            if self.used[w] {
                continue;
            }
            let chord = g.neighbors(w).iter().any(|&x| x != head && path.contains(&x));
            if chord {
                continue;
            }
            self.used[w] = true;
            path.push(w);
            if self.feasible(i, w) && self.extend(i, path)? {
                return Ok(true);
            }
            path.pop();
            self.used[w] = false;
        }
        Ok(false)
    }
}

/// Vertex-disjoint paths joining each `(s, t)` pair, or `None` if impossible.
///
/// Interior vertices avoid every terminal and every vertex with `forbidden[v]`.
/// A pair with `s == t` is served by the one-vertex path.
pub fn prescribed_linkage(
    g: &Graph,
    pairs: &[(usize, usize)],
    forbidden: &[bool],
    budget: u64,
) -> Result<Option<Vec<Vec<usize>>>> {
    let mut terminals = HashSet::new();
    for &(s, t) in pairs {
        if !terminals.insert(s) || (s != t && !terminals.insert(t)) {
            return Ok(None);
        }
    }
    let mut used = forbidden.to_vec();
    for &v in &terminals {
        used[v] = true;
    }
    let mut st = Prescribed {
        g,
        pairs,
        used,
        paths: Vec::new(),
        failed: HashSet::new(),
        nodes: 0,
        budget,
    };
    Ok(st.route(0)?.then_some(st.paths))
}

struct Zones<'a> {
    g: &'a Graph,
    sources: &'a [usize],
    zones: &'a [Vec<bool>],
    pass: Vec<bool>,
    used: Vec<bool>,
    paths: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

impl Zones<'_> {
    fn free(&self) -> Vec<bool> {
        self.pass.iter().zip(&self.used).map(|(&p, &u)| p && !u).collect()
    }

    fn reach(&self, s: usize, zone: &[bool], free: &[bool]) -> bool {
        let target: Vec<bool> = zone.iter().zip(&self.used).map(|(&z, &u)| z && !u).collect();
        self.g.bfs_path(s, &target, free).is_some()
    }

    fn feasible(&self, from: usize, head: usize) -> bool {
        let free = self.free();
        self.reach(head, &self.zones[from], &free)
            && (from + 1..self.sources.len())
                .all(|j| self.reach(self.sources[j], &self.zones[j], &free))
    }

    fn route(&mut self, i: usize) -> Result<bool> {
        if i == self.sources.len() {
            return Ok(true);
        }
        let s = self.sources[i];
        if self.zones[i][s] {
            self.paths.push(vec![s]);
            if self.route(i + 1)? {
                return Ok(true);
            }
            self.paths.pop();
            return Ok(false);
        }
        if !self.feasible(i, s) {
            return Ok(false);
        }
        let free = self.free();
        let ends: Vec<usize> = (0..self.g.n())
            .filter(|&v| self.zones[i][v] && !self.used[v])
            .collect();
        let dist = self.g.bfs_distances(&ends, &free);
        let mut path = vec![s];
        self.extend(i, &mut path, &dist)
    }

    fn extend(&mut self, i: usize, path: &mut Vec<usize>, dist: &[usize]) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::CapExceeded {
                name: "zone_linkage_nodes",
                limit: self.budget as usize,
                requested: self.nodes as usize,
            });
        }
        let head = *path.last().unwrap();
        let g = self.g;
        let mut nbrs: Vec<usize> = g.neighbors(head).to_vec();
        nbrs.sort_by_key(|&w| (dist[w], w));
        for w in nbrs {
            if self.used[w] {
                continue;
            }
            if self.zones[i][w] {
                self.used[w] = true;
                path.push(w);
                self.paths.push(path.clone());
                if self.route(i + 1)? {
                    return Ok(true);
                }
                self.paths.pop();
                path.pop();
                self.used[w] = false;
                continue;
            }
            if !self.pass[w] || g.neighbors(w).iter().any(|&x| x != head && path.contains(&x)) {
                continue;
            }
            self.used[w] = true;
            path.push(w);
            if self.feasible(i, w) && self.extend(i, path, dist)? {
                return Ok(true);
            }
            path.pop();
            self.used[w] = false;
        }
        Ok(false)
    }
}

/// Disjoint paths, path `i` from `sources[i]` to a vertex of `zones[i]`.
///
/// Interior vertices avoid all sources and every vertex with `blocked[v]`.
/// Zone vertices may be blocked and still serve as ends.
pub fn zone_linkage(
    g: &Graph,
    sources: &[usize],
    zones: &[Vec<bool>],
    blocked: &[bool],
    budget: u64,
) -> Result<Option<Vec<Vec<usize>>>> {
    let mut used = vec![false; g.n()];
    for &s in sources {
        used[s] = true;
    }
    let pass: Vec<bool> = blocked.iter().map(|&b| !b).collect();
    let mut st = Zones {
        g,
        sources,
        zones,
        pass,
        used,
        paths: Vec::new(),
        nodes: 0,
        budget,
    };
    Ok(st.route(0)?.then_some(st.paths))
}
