//! Minor containment by branch-set search.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `branch_sets[v]` is the host vertex set of pattern vertex `v`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub branch_sets: Vec<Vec<usize>>,
}

impl Model {
    /// Checks disjointness, connectivity and edge realization.
    pub fn validate(&self, host: &Graph, pattern: &Graph) -> std::result::Result<(), String> {
        if self.branch_sets.len() != pattern.n() {
            return Err(format!(
                "{} branch sets for {} pattern vertices",
                self.branch_sets.len(),
                pattern.n()
            ));
        }
        let mut owner = vec![usize::MAX; host.n()];
        for (v, set) in self.branch_sets.iter().enumerate() {
            if set.is_empty() {
                return Err(format!("branch set of {v} is empty"));
            }
            for &x in set {
                if x >= host.n() {
                    return Err(format!("host vertex {x} out of range"));
                }
                if owner[x] != usize::MAX {
                    return Err(format!("host vertex {x} in two branch sets"));
                }
                owner[x] = v;
            }
            if !host.is_connected_set(set) {
                return Err(format!("branch set of {v} is not connected"));
            }
        }
        for (u, v) in pattern.edges() {
            let ok = self.branch_sets[u]
                .iter()
                .any(|&x| host.neighbors(x).iter().any(|&y| owner[y] == v));
            if !ok {
                return Err(format!("pattern edge ({u},{v}) not realized"));
            }
        }
        Ok(())
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn nbhd(adj: &[u64], s: u64) -> u64 {
    bits(s).fold(0, |acc, v| acc | adj[v])
}

fn mask_components(adj: &[u64], region: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut left = region;
    while left != 0 {
        let mut comp = left & left.wrapping_neg();
        let mut frontier = comp;
        while frontier != 0 {
            let grow = nbhd(adj, frontier) & region & !comp;
            comp |= grow;
            frontier = grow;
        }
        out.push(comp);
        left &= !comp;
    }
    out
}

struct Search<'a> {
    adj: &'a [u64],
    full: u64,
    pat: Vec<u64>,
    order: Vec<usize>,
    required: Vec<u64>,
    sets: Vec<u64>,
    placed: u64,
}

impl Search<'_> {
    fn feasible(&self, idx: usize, used: u64) -> bool {
        let region = self.full & !used;
        let unplaced = self.order.len() - idx;
        if (region.count_ones() as usize) < unplaced {
            return false;
        }
        let comps = mask_components(self.adj, region);
        let touch: Vec<u64> = comps.iter().map(|&c| nbhd(self.adj, c)).collect();
        self.order[idx..].iter().all(|&w| {
            let req = self.required[w];
            if req & used != 0 {
                return false;
            }
            let pn: Vec<usize> = bits(self.pat[w] & self.placed).collect();
            comps.iter().zip(&touch).any(|(&c, &t)| {
                req & !c == 0 && pn.iter().all(|&p| t & self.sets[p] != 0)
            })
        })
    }

    fn place(&mut self, idx: usize, used: u64) -> bool {
        if idx == self.order.len() {
            return true;
        }
        let u = self.order[idx];
        let avail = self.full & !used;
        let req = self.required[u];
        let remaining = (self.order.len() - idx - 1) as u32;
        let max_size = avail.count_ones().saturating_sub(remaining);
        if max_size == 0 {
            return false;
        }
        let roots: Vec<(usize, u64)> = if req != 0 {
            vec![(req.trailing_zeros() as usize, avail)]
        } else {
            bits(avail).map(|r| (r, avail & !((1u64 << r) - 1))).collect()
        };
        for (root, allowed) in roots {
            let ctx = Slot {
                idx,
                u,
                used,
                allowed,
                max_size,
                links: bits(self.pat[u] & self.placed).collect(),
            };
            let s = 1u64 << root;
            if self.grow(&ctx, s, self.adj[root] & allowed & !s, 0) {
                return true;
            }
        }
        false
    }

    /// Enumerates each connected `S ⊆ allowed` containing the root exactly once.
    fn grow(&mut self, ctx: &Slot, s: u64, ext: u64, forb: u64) -> bool {
        if self.try_set(ctx, s) {
            return true;
        }
        if s.count_ones() >= ctx.max_size {
            return false;
        }
        let mut rest = ext;
        let mut done = 0u64;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            done |= 1 << v;
            let s2 = s | (1 << v);
            let f2 = forb | done;
            let ext2 = (rest | (self.adj[v] & ctx.allowed)) & !s2 & !f2;
            if self.grow(ctx, s2, ext2, f2) {
                return true;
            }
        }
        false
    }

    fn try_set(&mut self, ctx: &Slot, s: u64) -> bool {
        if self.required[ctx.u] & !s != 0 {
            return false;
        }
        let t = nbhd(self.adj, s);
        if !ctx.links.iter().all(|&p| t & self.sets[p] != 0) {
            return false;
        }
        self.sets[ctx.u] = s;
        self.placed |= 1 << ctx.u;
        let used2 = ctx.used | s;
        if self.feasible(ctx.idx + 1, used2) && self.place(ctx.idx + 1, used2) {
            return true;
        }
        self.placed &= !(1 << ctx.u);
        self.sets[ctx.u] = 0;
        false
    }
}

struct Slot {
    idx: usize,
    u: usize,
    used: u64,
    allowed: u64,
    max_size: u32,
    links: Vec<usize>,
}

fn search_order(pattern: &Graph, required: &[u64]) -> Vec<usize> {
    let k = pattern.n();
    let mut placed = vec![false; k];
    let mut order = Vec::with_capacity(k);
    for _ in 0..k {
        let next = (0..k)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = pattern.neighbors(v).iter().filter(|&&w| placed[w]).count();
                (
                    required[v] != 0,
                    links,
                    pattern.degree(v),
                    std::cmp::Reverse(v),
                )
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    order
}

fn run_search(host: &Graph, pattern: &Graph, required: &[u64]) -> Option<Vec<u64>> {
    let adj = host.masks();
    let mut s = Search {
        adj: &adj,
        full: full_mask(host.n()),
        pat: pattern.masks(),
        order: search_order(pattern, required),
        required: required.to_vec(),
        sets: vec![0; pattern.n()],
        placed: 0,
    };
    if !s.feasible(0, 0) {
        return None;
    }
    s.place(0, 0).then_some(s.sets)
}

/// Host reductions valid for patterns of minimum degree `pmin`.
/// Returns the reduced graph and, per reduced vertex, the host vertices it stands for.
fn reduce(host: &Graph, pmin: usize) -> (Graph, Vec<Vec<usize>>) {
    let n = host.n();
    let mut g = host.clone();
    let mut alive = vec![true; n];
    let mut orig: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    loop {
        let mut changed = false;
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let d = g.degree(v);
            let drop = (pmin >= 1 && d == 0) || (pmin >= 2 && d == 1);
            if drop {
                for w in g.neighbors(v).to_vec() {
                    g.remove_edge(v, w);
                }
                alive[v] = false;
                changed = true;
            } else if pmin >= 3 && d == 2 {
                let (x, y) = (g.neighbors(v)[0], g.neighbors(v)[1]);
                g.remove_edge(v, x);
                g.remove_edge(v, y);
                alive[v] = false;
                if !g.has_edge(x, y) {
                    g.add_edge(x, y);
                    let moved = std::mem::take(&mut orig[v]);
                    orig[x].extend(moved);
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let reduced = g.induced_subgraph(&keep);
    let sets = keep.iter().map(|&v| orig[v].clone()).collect();
    (reduced, sets)
}

/// A model of `pattern` in `host`, if `pattern` is a minor of `host`.
///
/// Fails with `CapExceeded` if the host still has more than 64 vertices after
/// degree reductions.
pub fn try_find_minor_model(host: &Graph, pattern: &Graph) -> Result<Option<Model>> {
    let k = pattern.n();
    if k == 0 {
        return Ok(Some(Model { branch_sets: Vec::new() }));
    }
    if k > host.n() || pattern.m() > host.m() {
        return Ok(None);
    }
    let (reduced, orig) = reduce(host, pattern.min_degree());
    if k > reduced.n() || pattern.m() > reduced.m() {
        return Ok(None);
    }
    if reduced.n() > 64 {
        return Err(Error::CapExceeded {
            name: "minor_search_vertices",
            limit: 64,
            requested: reduced.n(),
        });
    }
    let Some(sets) = run_search(&reduced, pattern, &vec![0; k]) else {
        return Ok(None);
    };
    let mut branch_sets: Vec<Vec<usize>> = sets
        .iter()
        .map(|&s| bits(s).flat_map(|v| orig[v].iter().copied()).collect())
        .collect();
    for b in &mut branch_sets {
        b.sort_unstable();
    }
    Ok(Some(Model { branch_sets }))
}

/// Panics if the reduced host exceeds 64 vertices; see [`try_find_minor_model`].
pub fn find_minor_model(host: &Graph, pattern: &Graph) -> Option<Model> {
    try_find_minor_model(host, pattern).expect("minor search within size cap")
}

/// A model in which `required[v]` ⊆ branch set of `v` for every pattern vertex.
pub fn find_anchored_minor_model(
    host: &Graph,
    pattern: &Graph,
    required: &[Vec<usize>],
) -> Result<Option<Model>> {
    if host.n() > 64 {
        return Err(Error::CapExceeded {
            name: "minor_search_vertices",
            limit: 64,
            requested: host.n(),
        });
    }
    let k = pattern.n();
    let mut req = vec![0u64; k];
    let mut seen = 0u64;
    for (v, set) in required.iter().enumerate() {
        for &x in set {
            if seen & (1 << x) != 0 && req[v] & (1 << x) == 0 {
                return Ok(None);
            }
            seen |= 1 << x;
            req[v] |= 1 << x;
        }
    }
    if k == 0 {
        return Ok(Some(Model { branch_sets: Vec::new() }));
    }
    if k > host.n() {
        return Ok(None);
    }
    Ok(run_search(host, pattern, &req).map(|sets| Model {
        branch_sets: sets.iter().map(|&s| bits(s).collect()).collect(),
    }))
}
