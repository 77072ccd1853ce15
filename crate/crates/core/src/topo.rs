//! Topological minors: subdivision embeddings and degree-2 suppression.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `edge_paths[(u, v)]` (with `u < v`) runs from `vertex_map[u]` to `vertex_map[v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub vertex_map: Vec<usize>,
    pub edge_paths: BTreeMap<(usize, usize), Vec<usize>>,
}

impl Embedding {
    pub fn validate(&self, host: &Graph, pattern: &Graph) -> std::result::Result<(), String> {
        if self.vertex_map.len() != pattern.n() {
            return Err("vertex map has wrong length".into());
        }
        let mut owner = vec![usize::MAX; host.n()];
        for (u, &x) in self.vertex_map.iter().enumerate() {
            if x >= host.n() {
                return Err(format!("image of {u} out of range"));
            }
            if owner[x] != usize::MAX {
                return Err(format!("vertex map not injective at host {x}"));
            }
            owner[x] = u;
        }
        let edges = pattern.edges();
        if self.edge_paths.len() != edges.len() {
            return Err("edge path count differs from pattern edge count".into());
        }
        let mut interior = vec![false; host.n()];
        for (u, v) in edges {
            let Some(p) = self.edge_paths.get(&(u, v)) else {
                return Err(format!("no path for pattern edge ({u},{v})"));
            };
            if !host.is_path(p) || p.len() < 2 {
                return Err(format!("path for ({u},{v}) is not a host path"));
            }
            let (s, t) = (p[0], p[p.len() - 1]);
            let (a, b) = (self.vertex_map[u], self.vertex_map[v]);
            if !((s == a && t == b) || (s == b && t == a)) {
                return Err(format!("path for ({u},{v}) has wrong ends"));
            }
            for &x in &p[1..p.len() - 1] {
                if owner[x] != usize::MAX {
                    return Err(format!("path for ({u},{v}) passes a branch vertex"));
                }
                if std::mem::replace(&mut interior[x], true) {
                    return Err(format!("paths share interior vertex {x}"));
                }
            }
        }
        Ok(())
    }

    /// Host vertices used by the embedding: images plus path interiors.
    pub fn image_vertices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.vertex_map.clone();
        for p in self.edge_paths.values() {
            out.extend_from_slice(p);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        if u < v {
            self.edge_paths[&(u, v)].clone()
        } else {
            let mut p = self.edge_paths[&(v, u)].clone();
            p.reverse();
            p
        }
    }
}

struct Search<'a> {
    host: &'a Graph,
    pat: &'a Graph,
    order: Vec<usize>,
    fixed: &'a [Option<usize>],
    vmap: Vec<usize>,
    used: Vec<bool>,
    paths: BTreeMap<(usize, usize), Vec<usize>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::CapExceeded {
                name: "topo_search_nodes",
                limit: self.budget as usize,
                requested: self.nodes as usize,
            });
        }
        Ok(())
    }

    /// Every placed vertex must keep enough free host neighbours for its unrouted edges.
    fn degree_ok(&self, placed_upto: usize) -> bool {
        let placed = &self.order[..placed_upto];
        placed.iter().all(|&u| {
            let pending = self
                .pat
                .neighbors(u)
                .iter()
                .filter(|&&w| self.vmap[w] == usize::MAX)
                .count();
            let free = self
                .host
                .neighbors(self.vmap[u])
                .iter()
                .filter(|&&x| !self.used[x] || self.waiting_anchor(x))
                .count();
            free >= pending
        })
    }

    fn waiting_anchor(&self, x: usize) -> bool {
        self.fixed
            .iter()
            .enumerate()
            .any(|(w, f)| *f == Some(x) && self.vmap[w] == usize::MAX)
    }

    fn place(&mut self, idx: usize) -> Result<bool> {
        if idx == self.order.len() {
            return Ok(true);
        }
        self.tick()?;
        let u = self.order[idx];
        let cands: Vec<usize> = match self.fixed[u] {
            Some(x) => vec![x],
            None => (0..self.host.n())
                .filter(|&x| self.host.degree(x) >= self.pat.degree(u))
                .collect(),
        };
        let anchored = self.fixed[u].is_some();
        for x in cands {
            // Anchors are reserved up front, so only free vertices are checked.
            if (!anchored && self.used[x]) || self.host.degree(x) < self.pat.degree(u) {
                continue;
            }
            self.vmap[u] = x;
            self.used[x] = true;
            let edges: Vec<(usize, usize)> = self
                .pat
                .neighbors(u)
                .iter()
                .filter(|&&w| self.vmap[w] != usize::MAX && w != u)
                .map(|&w| (u, w))
                .collect();
            if self.route(idx, &edges, 0)? {
                return Ok(true);
            }
            self.used[x] = anchored;
            self.vmap[u] = usize::MAX;
        }
        Ok(false)
    }

    fn route(&mut self, idx: usize, edges: &[(usize, usize)], j: usize) -> Result<bool> {
        if j == edges.len() {
            if !self.degree_ok(idx + 1) {
                return Ok(false);
            }
            return self.place(idx + 1);
        }
        let (u, w) = edges[j];
        let mut path = vec![self.vmap[u]];
        self.walk(idx, edges, j, &mut path, self.vmap[w])
    }

    fn walk(
        &mut self,
        idx: usize,
        edges: &[(usize, usize)],
        j: usize,
        path: &mut Vec<usize>,
        target: usize,
    ) -> Result<bool> {
        self.tick()?;
        let head = *path.last().unwrap();
        let host = self.host;
        if host.has_edge(head, target) {
            path.push(target);
            let (u, w) = edges[j];
            let key = (u.min(w), u.max(w));
            let mut p = path.clone();
            if u > w {
                p.reverse();
            }
            self.paths.insert(key, p);
            if self.route(idx, edges, j + 1)? {
                return Ok(true);
            }
            self.paths.remove(&key);
            path.pop();
            return Ok(false);
        }
        if !self.reachable(head, target) {
            return Ok(false);
        }
        for &x in host.neighbors(head) {
            if self.used[x] {
                continue;
            }
            if host.neighbors(x).iter().any(|&y| y != head && path.contains(&y)) {
                continue;
            }
            self.used[x] = true;
            path.push(x);
            if self.walk(idx, edges, j, path, target)? {
                return Ok(true);
            }
            path.pop();
            self.used[x] = false;
        }
        Ok(false)
    }

    fn reachable(&self, from: usize, to: usize) -> bool {
        let mut target = vec![false; self.host.n()];
        target[to] = true;
        let allowed: Vec<bool> = self.used.iter().map(|&u| !u).collect();
        self.host.bfs_path(from, &target, &allowed).is_some()
    }
}

fn search_order(pattern: &Graph, fixed: &[Option<usize>]) -> Vec<usize> {
    let k = pattern.n();
    let mut placed = vec![false; k];
    let mut order = Vec::with_capacity(k);
    for _ in 0..k {
        let next = (0..k)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = pattern.neighbors(v).iter().filter(|&&w| placed[w]).count();
                (fixed[v].is_some(), links, pattern.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    order
}

/// An embedding of `pattern` into `host` with `vertex_map[u] == fixed[u]` wherever set.
pub fn find_anchored_embedding(
    host: &Graph,
    pattern: &Graph,
    fixed: &[Option<usize>],
    budget: u64,
) -> Result<Option<Embedding>> {
    let k = pattern.n();
    if k > host.n() || pattern.m() > host.m() {
        return Ok(None);
    }
    let mut images: Vec<usize> = fixed.iter().flatten().copied().collect();
    images.sort_unstable();
    if images.windows(2).any(|w| w[0] == w[1]) {
        return Ok(None);
    }
    let mut s = Search {
        host,
        pat: pattern,
        order: search_order(pattern, fixed),
        fixed,
        vmap: vec![usize::MAX; k],
        used: vec![false; host.n()],
        paths: BTreeMap::new(),
        nodes: 0,
        budget,
    };
    for &x in &images {
        s.used[x] = true;
    }
    let ok = s.place(0)?;
    Ok(ok.then(|| Embedding {
        vertex_map: s.vmap,
        edge_paths: s.paths,
    }))
}

pub const DEFAULT_TOPO_BUDGET: u64 = 200_000_000;

pub fn try_find_topo_embedding(host: &Graph, pattern: &Graph, budget: u64) -> Result<Option<Embedding>> {
    find_anchored_embedding(host, pattern, &vec![None; pattern.n()], budget)
}

/// An embedding witnessing that `pattern` is a topological minor of `host`.
pub fn find_topo_embedding(host: &Graph, pattern: &Graph) -> Option<Embedding> {
    try_find_topo_embedding(host, pattern, u64::MAX).expect("unbounded budget")
}

/// A degree-2 vertex whose neighbours are non-adjacent; suppressing it keeps the graph simple.
pub fn is_suppressible(g: &Graph, v: usize) -> bool {
    g.degree(v) == 2 && !g.has_edge(g.neighbors(v)[0], g.neighbors(v)[1])
}

/// Deletes `v` and joins its two neighbours. Vertices above `v` shift down by one.
pub fn suppress(g: &Graph, v: usize) -> Graph {
    assert!(is_suppressible(g, v), "vertex {v} is not suppressible");
    let (x, y) = (g.neighbors(v)[0], g.neighbors(v)[1]);
    let mut removed = vec![false; g.n()];
    removed[v] = true;
    let (mut h, map) = g.remove_vertices(&removed);
    h.add_edge(map[x].unwrap(), map[y].unwrap());
    h
}
