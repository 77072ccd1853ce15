//! Finite simple graphs on `0..n`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph, rejecting loops, out-of-range endpoints and repeated edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at {u}")));
            }
            if !g.add_edge(u, v) {
                return Err(Error::InvalidGraph(format!("repeated edge ({u},{v})")));
            }
        }
        Ok(g)
    }

    /// Like `from_edges` but silently merges repeated edges.
    pub fn from_edges_merged(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            assert!(u < n && v < n && u != v, "bad edge ({u},{v})");
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_null(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Returns false if the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v);
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let p2 = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(p2, u);
                self.m += 1;
                true
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        match self.adj[u].binary_search(&v) {
            Err(_) => false,
            Ok(pos) => {
                self.adj[u].remove(pos);
                let p2 = self.adj[v].binary_search(&u).unwrap();
                self.adj[v].remove(p2);
                self.m -= 1;
                true
            }
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Subgraph induced on `verts`; vertex `i` of the result is `verts[i]`.
    pub fn induced_subgraph(&self, verts: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Graph::new(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = pos[w];
                if j != usize::MAX && i < j {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Deletes the marked vertices; returns the graph and old→new index map.
    pub fn remove_vertices(&self, removed: &[bool]) -> (Graph, Vec<Option<usize>>) {
        let keep: Vec<usize> = (0..self.n()).filter(|&v| !removed[v]).collect();
        let mut map = vec![None; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            map[v] = Some(i);
        }
        (self.induced_subgraph(&keep), map)
    }

    /// Renames vertex `v` to `perm[v]`; `perm` must be a permutation.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::new(self.n());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut g = self.clone();
        for _ in 0..other.n() {
            g.add_vertex();
        }
        for (u, v) in other.edges() {
            g.add_edge(u + off, v + off);
        }
        g
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Adjacency rows as bit masks. Panics if `n > 64`.
    pub fn masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64, "bit-mask view needs n <= 64");
        self.adj
            .iter()
            .map(|nb| nb.iter().fold(0u64, |acc, &w| acc | (1u64 << w)))
            .collect()
    }

    pub fn from_masks(masks: &[u64]) -> Graph {
        let n = masks.len();
        let mut g = Graph::new(n);
        for u in 0..n {
            let mut rest = masks[u] >> (u + 1) << (u + 1);
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Connected components of the subgraph induced on vertices with `allowed[v]`.
    pub fn components_within(&self, allowed: &[bool]) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if !allowed[s] || seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if allowed[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_within(&vec![true; self.n()])
    }

    /// The null graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_tree(&self) -> bool {
        self.n() >= 1 && self.m + 1 == self.n() && self.is_connected()
    }

    /// Whether `verts` induces a connected subgraph (empty set: false).
    pub fn is_connected_set(&self, verts: &[usize]) -> bool {
        if verts.is_empty() {
            return false;
        }
        let mut allowed = vec![false; self.n()];
        for &v in verts {
            allowed[v] = true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![verts[0]];
        seen[verts[0]] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if allowed[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == verts.iter().filter(|&&v| allowed[v]).count()
    }

    /// Shortest path from `s` to any vertex with `target[v]`, moving only through
    /// vertices with `allowed[v]`. `s` itself need not be allowed.
    pub fn bfs_path(&self, s: usize, target: &[bool], allowed: &[bool]) -> Option<Vec<usize>> {
        if target[s] {
            return Some(vec![s]);
        }
        let n = self.n();
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &w in &self.adj[v] {
                if prev[w] != usize::MAX {
                    continue;
                }
                if target[w] {
                    prev[w] = v;
                    let mut path = vec![w];
                    let mut c = w;
                    while c != s {
                        c = prev[c];
                        path.push(c);
                    }
                    path.reverse();
                    return Some(path);
                }
                if allowed[w] {
                    prev[w] = v;
                    q.push_back(w);
                }
            }
        }
        None
    }

    /// BFS distances from `sources` through `allowed` vertices (sources always count).
    pub fn bfs_distances(&self, sources: &[usize], allowed: &[bool]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut q = VecDeque::new();
        for &s in sources {
            if dist[s] == usize::MAX {
                dist[s] = 0;
                q.push_back(s);
            }
        }
        while let Some(v) = q.pop_front() {
            for &w in &self.adj[v] {
                if allowed[w] && dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    /// A path: distinct vertices, consecutive ones adjacent, at least one vertex.
    pub fn is_path(&self, p: &[usize]) -> bool {
        if p.is_empty() || p.iter().any(|&v| v >= self.n()) {
            return false;
        }
        let mut seen = vec![false; self.n()];
        for &v in p {
            if std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        p.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }

    /// A cycle given as a closed vertex sequence without repeating the first vertex.
    pub fn is_cycle(&self, c: &[usize]) -> bool {
        c.len() >= 3 && self.is_path(c) && self.has_edge(c[0], c[c.len() - 1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;
    fn try_from(j: GraphJson) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(j.n, &edges)
    }
}

impl Graph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Graph> {
        let j: GraphJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Graph::try_from(j)
    }

    /// graph6 encoding, as published with nauty.
    pub fn to_graph6(&self) -> String {
        let n = self.n();
        let mut out: Vec<u8> = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else if n <= 258_047 {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        } else {
            out.extend([126, 126]);
            for shift in [30, 24, 18, 12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        }
        let mut acc = 0u8;
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | u8::from(self.has_edge(i, j));
                k += 1;
                if k == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    k = 0;
                }
            }
        }
        if k > 0 {
            out.push((acc << (6 - k)) + 63);
        }
        String::from_utf8(out).expect("graph6 is ascii")
    }

    pub fn from_graph6(s: &str) -> Result<Graph> {
        let bytes = s.trim_end_matches(['\n', '\r']).as_bytes();
        let bytes = bytes.strip_prefix(b">>graph6<<").unwrap_or(bytes);
        let bad = |m: &str| Error::Parse(format!("graph6: {m}"));
        if bytes.is_empty() {
            return Err(bad("empty input"));
        }
        if bytes.iter().any(|&c| !(63..=126).contains(&c)) {
            return Err(bad("byte out of range"));
        }
        let (n, rest) = if bytes[0] != 126 {
            (usize::from(bytes[0] - 63), &bytes[1..])
        } else if bytes.len() >= 2 && bytes[1] != 126 {
            if bytes.len() < 4 {
                return Err(bad("truncated size"));
            }
            let n = bytes[1..4].iter().fold(0usize, |a, &c| (a << 6) | usize::from(c - 63));
            (n, &bytes[4..])
        } else {
            if bytes.len() < 8 {
                return Err(bad("truncated size"));
            }
            let n = bytes[2..8].iter().fold(0usize, |a, &c| (a << 6) | usize::from(c - 63));
            (n, &bytes[8..])
        };
        let nbits = n * n.saturating_sub(1) / 2;
        if rest.len() != nbits.div_ceil(6) {
            return Err(bad("wrong body length"));
        }
        let mut g = Graph::new(n);
        let mut idx = 0;
        for j in 1..n {
            for i in 0..j {
                let byte = rest[idx / 6] - 63;
                if (byte >> (5 - idx % 6)) & 1 == 1 {
                    g.add_edge(i, j);
                }
                idx += 1;
            }
        }
        Ok(g)
    }
}

/// Standard graph families.
pub mod generators {
    use super::Graph;
    use crate::error::{Error, Result};

    fn positive(name: &str, v: usize) -> Result<()> {
        if v == 0 {
            Err(Error::InvalidParameter(format!("{name} must be positive")))
        } else {
            Ok(())
        }
    }

    pub fn complete(t: usize) -> Result<Graph> {
        positive("t", t)?;
        let mut g = Graph::new(t);
        for u in 0..t {
            for v in u + 1..t {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    /// Parts are `0..s` and `s..s+t`.
    pub fn complete_bipartite(s: usize, t: usize) -> Result<Graph> {
        positive("s", s)?;
        positive("t", t)?;
        let mut g = Graph::new(s + t);
        for u in 0..s {
            for v in s..s + t {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    /// Cartesian product of paths on `n` and `s` vertices; `(x, y)` is vertex `x*s + y`.
    pub fn grid(n: usize, s: usize) -> Result<Graph> {
        positive("n", n)?;
        positive("s", s)?;
        let mut g = Graph::new(n * s);
        for x in 0..n {
            for y in 0..s {
                let v = x * s + y;
                if y + 1 < s {
                    g.add_edge(v, v + 1);
                }
                if x + 1 < n {
                    g.add_edge(v, v + s);
                }
            }
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Graph> {
        positive("n", n)?;
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::InvalidParameter("cycle needs n >= 3".into()));
        }
        let mut g = path(n)?;
        g.add_edge(0, n - 1);
        Ok(g)
    }

    /// A path with `k` edges on `0..=k`, plus vertex `k+1+i` adjacent to both ends of edge `i`.
    pub fn robertson_chain(k: usize) -> Result<Graph> {
        positive("k", k)?;
        let mut g = Graph::new(2 * k + 1);
        for i in 0..k {
            g.add_edge(i, i + 1);
            g.add_edge(i, k + 1 + i);
            g.add_edge(i + 1, k + 1 + i);
        }
        Ok(g)
    }

    /// Path on `0..t-1` plus apex `t-1` adjacent to all of it.
    pub fn fan(t: usize) -> Result<Graph> {
        if t < 2 {
            return Err(Error::InvalidParameter("fan needs t >= 2".into()));
        }
        let mut g = Graph::new(t);
        for v in 0..t - 1 {
            if v + 1 < t - 1 {
                g.add_edge(v, v + 1);
            }
            g.add_edge(v, t - 1);
        }
        Ok(g)
    }
}
