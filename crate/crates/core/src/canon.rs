//! Canonical labelling by individualization and refinement.
//!
//! Limited to graphs on at most 64 vertices.

use crate::graph::Graph;

const MAX_AUTS: usize = 128;

struct Search<'a> {
    adj: &'a [u64],
    n: usize,
    best: Option<(Vec<u64>, Vec<usize>)>,
    auts: Vec<Vec<usize>>,
}

fn refine(adj: &[u64], cells: &mut Vec<u64>) {
    'outer: loop {
        for si in 0..cells.len() {
            let splitter = cells[si];
            let mut out: Vec<u64> = Vec::with_capacity(cells.len() + 4);
            let mut changed = false;
            for &c in cells.iter() {
                if c & (c - 1) == 0 {
                    out.push(c);
                    continue;
                }
                let mut buckets: Vec<(u32, u64)> = Vec::new();
                let mut rest = c;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let k = (adj[v] & splitter).count_ones();
                    match buckets.iter_mut().find(|b| b.0 == k) {
                        Some(b) => b.1 |= 1 << v,
                        None => buckets.push((k, 1 << v)),
                    }
                }
                if buckets.len() > 1 {
                    changed = true;
                    buckets.sort_unstable_by_key(|b| b.0);
                }
                out.extend(buckets.into_iter().map(|b| b.1));
            }
            *cells = out;
            if changed {
                continue 'outer;
            }
        }
        break;
    }
}

impl Search<'_> {
    fn leaf(&mut self, cells: &[u64]) {
        let order: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let mut pos = vec![0usize; self.n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let cert: Vec<u64> = order
            .iter()
            .map(|&v| {
                let mut row = 0u64;
                let mut rest = self.adj[v];
                while rest != 0 {
                    let w = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    row |= 1 << pos[w];
                }
                row
            })
            .collect();
        match &self.best {
            None => self.best = Some((cert, order)),
            Some((bc, bo)) => {
                if cert < *bc {
                    self.best = Some((cert, order));
                } else if cert == *bc && self.auts.len() < MAX_AUTS {
                    let mut gamma = vec![0usize; self.n];
                    for i in 0..self.n {
                        gamma[bo[i]] = order[i];
                    }
                    self.auts.push(gamma);
                }
            }
        }
    }

    fn same_orbit(&self, prefix: &[usize], explored: &[usize], v: usize) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let nx = p[c];
                p[c] = r;
                c = nx;
            }
            r
        }
        for g in &self.auts {
            if prefix.iter().all(|&p| g[p] == p) {
                for x in 0..self.n {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, g[x]));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&u| find(&mut parent, u) == rv)
    }

    fn go(&mut self, cells: Vec<u64>, prefix: &mut Vec<usize>) {
        let Some(ti) = cells.iter().position(|c| c & (c - 1) != 0) else {
            self.leaf(&cells);
            return;
        };
        let target = cells[ti];
        let mut explored: Vec<usize> = Vec::new();
        let mut rest = target;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if !explored.is_empty() && self.same_orbit(prefix, &explored, v) {
                continue;
            }
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..ti]);
            next.push(1u64 << v);
            next.push(target & !(1u64 << v));
            next.extend_from_slice(&cells[ti + 1..]);
            refine(self.adj, &mut next);
            prefix.push(v);
            self.go(next, prefix);
            prefix.pop();
            explored.push(v);
        }
    }
}

/// Returns `order` with `order[i]` = original vertex placed at position `i`.
pub fn canonical_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    assert!(n <= 64, "canonical labelling supports at most 64 vertices");
    if n == 0 {
        return Vec::new();
    }
    let adj = g.masks();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut cells = vec![full];
    refine(&adj, &mut cells);
    let mut s = Search {
        adj: &adj,
        n,
        best: None,
        auts: Vec::new(),
    };
    s.go(cells, &mut Vec::new());
    s.best.expect("at least one leaf").1
}

/// The canonically relabelled graph; isomorphic inputs give identical outputs.
pub fn canonical_graph(g: &Graph) -> Graph {
    let order = canonical_order(g);
    let mut perm = vec![0usize; g.n()];
    for (i, &v) in order.iter().enumerate() {
        perm[v] = i;
    }
    g.relabel(&perm)
}

/// graph6 bytes of the canonical relabelling.
pub fn canonical_form(g: &Graph) -> Vec<u8> {
    canonical_graph(g).to_graph6().into_bytes()
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.n() == h.n() && g.m() == h.m() && canonical_form(g) == canonical_form(h)
}

/// An isomorphism `g → h` as a vertex map, if one exists.
pub fn isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    if g.n() != h.n() || g.m() != h.m() {
        return None;
    }
    let og = canonical_order(g);
    let oh = canonical_order(h);
    let mut map = vec![0usize; g.n()];
    for i in 0..g.n() {
        map[og[i]] = oh[i];
    }
    g.edges()
        .iter()
        .all(|&(u, v)| h.has_edge(map[u], map[v]))
        .then_some(map)
}
