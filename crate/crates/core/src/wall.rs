//! Walls, wall embeddings, compasses, crosses and diamond patches.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linkage::{prescribed_linkage, separates, zone_linkage, DEFAULT_SEARCH_BUDGET};
use crate::minor::find_anchored_minor_model;
use crate::patch::Patch;
use crate::patchwork::validate_embedded_patch;
use crate::topo::Embedding;

/// Largest compass searched exhaustively for a cross.
pub const DEFAULT_CROSS_CAP: usize = 60;
/// Largest vertex set tried by [`find_diamond_patch`] beyond single edges.
pub const DEFAULT_DIAMOND_SIZE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corners {
    /// `c−−`: left end of the bottom.
    pub mm: usize,
    /// `c+−`: right end of the bottom.
    pub pm: usize,
    /// `c−+`: left end of the top.
    pub mp: usize,
    /// `c++`: right end of the top.
    pub pp: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub l: usize,
    pub h: usize,
    pub x0: i64,
    pub y0: i64,
    pub graph: Graph,
    /// Vertices are numbered by `(y, x)`.
    pub coords: Vec<(i64, i64)>,
    index: HashMap<(i64, i64), usize>,
    /// Counter-clockwise from `c−−`, starting along the bottom.
    pub outer_cycle: Vec<usize>,
    /// Left to right.
    pub bottom: Vec<usize>,
    pub top: Vec<usize>,
    /// Bottom to top.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub corners: Corners,
    pub pegs_left: Vec<usize>,
    pub pegs_right: Vec<usize>,
}

/// `{"l": …, "h": …, "x0": …, "y0": …}`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallSpec {
    pub l: usize,
    pub h: usize,
    #[serde(default)]
    pub x0: i64,
    #[serde(default)]
    pub y0: i64,
}

fn wall_edge(a: (i64, i64), b: (i64, i64)) -> bool {
    let (dx, dy) = ((a.0 - b.0).abs(), (a.1 - b.1).abs());
    (dx == 1 && dy == 0) || (dx == 0 && dy == 1 && (a.0 - a.1.max(b.1)).rem_euclid(2) == 0)
}

const DIRS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

fn dir_index(from: (i64, i64), to: (i64, i64)) -> usize {
    DIRS.iter()
        .position(|&d| d == (to.0 - from.0, to.1 - from.1))
        .expect("unit step")
}

/// The `(l, h)`-wall on `[x0+1, x0+2l] × [y0+1, y0+h]`.
///
/// Needs `l, h ≥ 2`: below that the construction leaves no cycle.
pub fn build_wall(l: usize, h: usize, x0: i64, y0: i64) -> Result<Wall> {
    if l < 2 || h < 2 {
        return Err(Error::InvalidParameter(format!(
            "degenerate wall: ({l},{h}) leaves no cycle, need l, h >= 2"
        )));
    }
    let mut pts: Vec<(i64, i64)> = Vec::new();
    for y in y0 + 1..=y0 + h as i64 {
        for x in x0 + 1..=x0 + 2 * l as i64 {
            pts.push((x, y));
        }
    }
    let inside: HashSet<(i64, i64)> = pts.iter().copied().collect();
    let nb = |p: (i64, i64)| -> Vec<(i64, i64)> {
        DIRS.iter()
            .map(|d| (p.0 + d.0, p.1 + d.1))
            .filter(|q| inside.contains(q) && wall_edge(p, *q))
            .collect()
    };
    let kept: Vec<(i64, i64)> = pts.iter().copied().filter(|&p| nb(p).len() != 1).collect();
    // Vertices numbered by (y, x).
    let index: HashMap<(i64, i64), usize> = kept.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut edges = Vec::new();
    for (i, &p) in kept.iter().enumerate() {
        for q in nb(p) {
            if let Some(&j) = index.get(&q) {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    let graph = Graph::from_edges(kept.len(), &edges)?;
    label_wall(l, h, x0, y0, graph, kept, index)
}

fn label_wall(
    l: usize,
    h: usize,
    x0: i64,
    y0: i64,
    graph: Graph,
    coords: Vec<(i64, i64)>,
    index: HashMap<(i64, i64), usize>,
) -> Result<Wall> {
    let start = (0..coords.len())
        .min_by_key(|&v| (coords[v].1, coords[v].0))
        .ok_or_else(|| Error::InvalidParameter("empty wall".into()))?;
    // Rightmost-turn walk keeps the outer face on the right.
    let step = |prev_back: usize, v: usize| -> Option<usize> {
        (1..=4).map(|k| (prev_back + k) % 4).find_map(|d| {
            let q = (coords[v].0 + DIRS[d].0, coords[v].1 + DIRS[d].1);
            index.get(&q).copied().filter(|&w| graph.has_edge(v, w))
        })
    };
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = step(2, start).ok_or_else(|| Error::InvalidParameter("isolated wall corner".into()))?;
    while cur != start {
        if cycle.len() > coords.len() {
            return Err(Error::InvalidParameter("outer face walk did not close".into()));
        }
        cycle.push(cur);
        let back = dir_index(coords[cur], coords[prev]);
        let next = step(back, cur).expect("wall vertices have degree >= 2");
        prev = cur;
        cur = next;
    }
    if !graph.is_cycle(&cycle) {
        return Err(Error::InvalidParameter("outer boundary is not a cycle".into()));
    }
    let row = |y: i64| -> Vec<usize> {
        let mut r: Vec<usize> = (0..coords.len()).filter(|&v| coords[v].1 == y).collect();
        r.sort_by_key(|&v| coords[v].0);
        r
    };
    let bottom = row(y0 + 1);
    let top = row(y0 + h as i64);
    let corners = Corners {
        mm: bottom[0],
        pm: *bottom.last().unwrap(),
        mp: top[0],
        pp: *top.last().unwrap(),
    };
    let pos = |v: usize| cycle.iter().position(|&x| x == v).unwrap();
    let right = cycle[pos(corners.pm)..=pos(corners.pp)].to_vec();
    let mut left: Vec<usize> = cycle[pos(corners.mp)..].to_vec();
    left.push(corners.mm);
    left.reverse();
    let pegs = |side: &[usize]| -> Vec<usize> {
        side[1..side.len() - 1]
            .iter()
            .copied()
            .filter(|&v| graph.degree(v) == 2)
            .collect()
    };
    let pegs_left = pegs(&left);
    let pegs_right = pegs(&right);
    Ok(Wall {
        l,
        h,
        x0,
        y0,
        graph,
        coords,
        index,
        outer_cycle: cycle,
        bottom,
        top,
        left,
        right,
        corners,
        pegs_left,
        pegs_right,
    })
}

impl Wall {
    pub fn from_spec(s: &WallSpec) -> Result<Wall> {
        build_wall(s.l, s.h, s.x0, s.y0)
    }

    pub fn spec(&self) -> WallSpec {
        WallSpec { l: self.l, h: self.h, x0: self.x0, y0: self.y0 }
    }

    pub fn vertex_at(&self, x: i64, y: i64) -> Option<usize> {
        self.index.get(&(x, y)).copied()
    }

    /// Pegs on the left then on the right, each bottom to top.
    pub fn pegs(&self) -> Vec<usize> {
        let mut p = self.pegs_left.clone();
        p.extend_from_slice(&self.pegs_right);
        p
    }

    /// Indices in `self` of the vertices of `other`, matched by coordinates, if
    /// `other` is a subgraph of `self`.
    pub fn locate(&self, other: &Wall) -> Option<Vec<usize>> {
        let map: Vec<usize> = other
            .coords
            .iter()
            .map(|&(x, y)| self.vertex_at(x, y))
            .collect::<Option<_>>()?;
        other
            .graph
            .edges()
            .iter()
            .all(|&(u, v)| self.graph.has_edge(map[u], map[v]))
            .then_some(map)
    }

    /// `W(X', Y')` with `X' = [xa, xb]`, `Y' = [ya, yb]` inside this wall's ranges.
    pub fn subwall(&self, xa: i64, xb: i64, ya: i64, yb: i64) -> Result<Wall> {
        let (x1, x2) = (self.x0 + 1, self.x0 + 2 * self.l as i64);
        let (y1, y2) = (self.y0 + 1, self.y0 + self.h as i64);
        if xa < x1 || xb > x2 || ya < y1 || yb > y2 || xb < xa || yb < ya {
            return Err(Error::InvalidParameter("subwall ranges leave the wall".into()));
        }
        let width = xb - xa + 1;
        if width % 2 != 0 {
            return Err(Error::InvalidParameter("subwall x-range must have even length".into()));
        }
        build_wall((width / 2) as usize, (yb - ya + 1) as usize, xa - 1, ya - 1)
    }

    /// The `i`-th nested wall `W([x0+2i+1, x0+2l−2i], [y0+i+1, y0+h−i])`.
    pub fn nested(&self, i: usize) -> Result<Wall> {
        let i64i = i as i64;
        self.subwall(
            self.x0 + 2 * i64i + 1,
            self.x0 + 2 * self.l as i64 - 2 * i64i,
            self.y0 + i64i + 1,
            self.y0 + self.h as i64 - i64i,
        )
    }
}

/// `sub ⊆ w` and `sub` avoids the outer cycle of `w`.
pub fn is_proper_subwall(sub: &Wall, w: &Wall) -> bool {
    let Some(map) = w.locate(sub) else {
        return false;
    };
    let on_cycle: HashSet<usize> = w.outer_cycle.iter().copied().collect();
    !map.iter().any(|v| on_cycle.contains(v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallEmbedding {
    pub wall: Wall,
    pub host: Graph,
    pub embedding: Embedding,
}

/// The part of a host inside an embedded wall cycle. `graph` vertex `i` is `vertices[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compass {
    pub vertices: Vec<usize>,
    pub graph: Graph,
}

impl Compass {
    pub fn local(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }
}

fn inside_polygon(poly: &[(i64, i64)], p: (i64, i64)) -> bool {
    // Lattice points never lie inside a unit edge, so only vertices are on the boundary.
    if poly.contains(&p) {
        return true;
    }
    let (px, py) = (2 * p.0, 2 * p.1);
    let mut inside = false;
    for k in 0..poly.len() {
        let (ax, ay) = (2 * poly[k].0, 2 * poly[k].1);
        let (bx, by) = (2 * poly[(k + 1) % poly.len()].0, 2 * poly[(k + 1) % poly.len()].1);
        if (ay > py) != (by > py) {
            // x-coordinate of the crossing, compared without division.
            let lhs = (px - ax) * (by - ay);
            let rhs = (bx - ax) * (py - ay);
            if (by > ay && lhs < rhs) || (by < ay && lhs > rhs) {
                inside = !inside;
            }
        }
    }
    inside
}

impl WallEmbedding {
    pub fn new(wall: Wall, host: Graph, embedding: Embedding) -> Result<Self> {
        embedding
            .validate(&host, &wall.graph)
            .map_err(|e| Error::InvalidParameter(format!("invalid wall embedding: {e}")))?;
        Ok(WallEmbedding { wall, host, embedding })
    }

    /// The wall embedded in itself.
    pub fn identity(wall: Wall) -> Self {
        let host = wall.graph.clone();
        Self::into_host(wall, host).expect("wall is a subgraph of itself")
    }

    /// The wall embedded edge-for-edge in a host containing it on the same indices.
    pub fn into_host(wall: Wall, host: Graph) -> Result<Self> {
        let vertex_map: Vec<usize> = (0..wall.graph.n()).collect();
        let edge_paths: BTreeMap<(usize, usize), Vec<usize>> =
            wall.graph.edges().into_iter().map(|(u, v)| ((u, v), vec![u, v])).collect();
        Self::new(wall, host, Embedding { vertex_map, edge_paths })
    }

    pub fn eta(&self, v: usize) -> usize {
        self.embedding.vertex_map[v]
    }

    pub fn corners(&self) -> Corners {
        let c = self.wall.corners;
        Corners { mm: self.eta(c.mm), pm: self.eta(c.pm), mp: self.eta(c.mp), pp: self.eta(c.pp) }
    }

    /// Image of a wall path, as a host vertex sequence.
    pub fn image_path(&self, p: &[usize]) -> Vec<usize> {
        let mut out = vec![self.eta(p[0])];
        for w in p.windows(2) {
            out.extend_from_slice(&self.embedding.path(w[0], w[1])[1..]);
        }
        out
    }

    /// Image of a wall cycle, as a cyclic host vertex sequence.
    pub fn image_cycle(&self, c: &[usize]) -> Vec<usize> {
        let mut closed = c.to_vec();
        closed.push(c[0]);
        let mut out = self.image_path(&closed);
        out.pop();
        out
    }

    /// `∂η`, sorted.
    pub fn boundary(&self) -> Vec<usize> {
        let mut b = self.image_cycle(&self.wall.outer_cycle);
        b.sort_unstable();
        b
    }

    pub fn bottom(&self) -> Vec<usize> {
        self.image_path(&self.wall.bottom)
    }

    pub fn top(&self) -> Vec<usize> {
        self.image_path(&self.wall.top)
    }

    pub fn left(&self) -> Vec<usize> {
        self.image_path(&self.wall.left)
    }

    pub fn right(&self) -> Vec<usize> {
        self.image_path(&self.wall.right)
    }

    pub fn pegs_left(&self) -> Vec<usize> {
        self.wall.pegs_left.iter().map(|&v| self.eta(v)).collect()
    }

    pub fn pegs_right(&self) -> Vec<usize> {
        self.wall.pegs_right.iter().map(|&v| self.eta(v)).collect()
    }

    /// Restriction to a subwall of the embedded wall.
    pub fn restrict(&self, sub: &Wall) -> Result<WallEmbedding> {
        let map = self
            .wall
            .locate(sub)
            .ok_or_else(|| Error::InvalidParameter("not a subwall".into()))?;
        let vertex_map = map.iter().map(|&v| self.eta(v)).collect();
        let edge_paths = sub
            .graph
            .edges()
            .into_iter()
            .map(|(u, v)| ((u, v), self.embedding.path(map[u], map[v])))
            .collect();
        WallEmbedding::new(sub.clone(), self.host.clone(), Embedding { vertex_map, edge_paths })
    }

    /// `↑(η, D)` for `D = η(d_prime)`, `d_prime` a cycle of the wall.
    pub fn compass_of(&self, d_prime: &[usize]) -> Result<Compass> {
        if !self.wall.graph.is_cycle(d_prime) {
            return Err(Error::InvalidParameter("D' is not a cycle of the wall".into()));
        }
        let d = self.image_cycle(d_prime);
        let poly: Vec<(i64, i64)> = d_prime.iter().map(|&v| self.wall.coords[v]).collect();
        let on_d: HashSet<usize> = d_prime.iter().copied().collect();
        let mut seeds = vec![false; self.host.n()];
        for v in 0..self.wall.graph.n() {
            if !on_d.contains(&v) && inside_polygon(&poly, self.wall.coords[v]) {
                seeds[self.eta(v)] = true;
            }
        }
        let mut allowed = vec![true; self.host.n()];
        for &x in &d {
            allowed[x] = false;
        }
        let mut vertices = d.clone();
        for comp in self.host.components_within(&allowed) {
            if comp.iter().any(|&x| seeds[x]) {
                vertices.extend(comp);
            }
        }
        vertices.sort_unstable();
        let graph = self.host.induced_subgraph(&vertices);
        Ok(Compass { vertices, graph })
    }

    /// `↑η`.
    pub fn compass(&self) -> Compass {
        self.compass_of(&self.wall.outer_cycle).expect("outer cycle is a wall cycle")
    }

    /// The compass adds nothing to `η(W)`, so it is a subdivided wall drawn with
    /// the corners in cyclic order on its outer face.
    fn compass_is_plain(&self, c: &Compass) -> bool {
        let img = self.embedding.image_vertices();
        let edges: usize = self.embedding.edge_paths.values().map(|p| p.len() - 1).sum();
        c.vertices == img && c.graph.m() == edges
    }
}

/// Two disjoint compass paths joining the two pairs of opposite corners.
///
/// Compasses up to `cap` vertices are searched exhaustively. Larger ones are only
/// decided when the compass is exactly the image of the wall (then no cross exists);
/// otherwise the cap error is returned.
pub fn find_cross(we: &WallEmbedding, cap: usize) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let c = we.compass();
    if c.vertices.len() > cap {
        if we.compass_is_plain(&c) {
            return Ok(None);
        }
        return Err(Error::CapExceeded {
            name: "cross_search_vertices",
            limit: cap,
            requested: c.vertices.len(),
        });
    }
    let k = we.corners();
    let loc = |v: usize| c.local(v).expect("corner in compass");
    let pairs = [(loc(k.mm), loc(k.pp)), (loc(k.mp), loc(k.pm))];
    let forbidden = vec![false; c.graph.n()];
    let found = prescribed_linkage(&c.graph, &pairs, &forbidden, DEFAULT_SEARCH_BUDGET)?;
    Ok(found.map(|paths| {
        let back = |p: &Vec<usize>| p.iter().map(|&v| c.vertices[v]).collect::<Vec<usize>>();
        (back(&paths[0]), back(&paths[1]))
    }))
}

pub fn is_crossless(we: &WallEmbedding, cap: usize) -> Result<bool> {
    Ok(find_cross(we, cap)?.is_none())
}

/// Pairwise disjoint cycles, each separating `x` from `z`.
pub fn is_filter(g: &Graph, cycles: &[Vec<usize>], x: &[usize], z: &[usize]) -> bool {
    let mut seen = HashSet::new();
    for c in cycles {
        if !c.iter().all(|&v| seen.insert(v)) {
            return false;
        }
    }
    cycles.iter().all(|c| separates(g, c, x, z))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiamondPatch {
    pub patch: Patch,
    /// `(S_1, T_1, S_2, …, S_q)` as patch vertex sets.
    pub witness: Vec<Vec<usize>>,
}

/// The pattern `S_1 T_1 S_2 … S_q`: `S_1 T_1` plus both joined to every `S_i`.
fn diamond_pattern(q: usize) -> Graph {
    let mut edges = vec![(0, 1)];
    for i in 2..=q {
        edges.push((0, i));
        edges.push((1, i));
    }
    Graph::from_edges(q + 1, &edges).expect("pattern")
}

/// A witness for the four diamond conditions, if `h` is a diamond patch.
pub fn is_diamond_patch(h: &Patch) -> Result<Option<DiamondPatch>> {
    let q = h.q();
    if !(1..=3).contains(&q) || !h.graph().is_connected() {
        return Ok(None);
    }
    if (0..q).any(|i| (h.a()[i] != h.b()[i]) != (i == 0)) {
        return Ok(None);
    }
    let mut required = vec![vec![h.a()[0]], vec![h.b()[0]]];
    required.extend((1..q).map(|i| vec![h.a()[i]]));
    let model = find_anchored_minor_model(h.graph(), &diamond_pattern(q), &required)?;
    Ok(model.map(|m| DiamondPatch { patch: h.clone(), witness: m.branch_sets }))
}

/// The linkage `(L_1, L'_1, L_2, …)` showing `h` (placed by `placement`) is properly set.
pub fn properly_set_linkage(
    we: &WallEmbedding,
    h: &Patch,
    placement: &[usize],
    budget: u64,
) -> Result<Option<Vec<Vec<usize>>>> {
    let q = h.q();
    if !(1..=3).contains(&q) || !validate_embedded_patch(&we.host, h, placement).is_ok() {
        return Ok(None);
    }
    let n = we.host.n();
    let boundary = we.boundary();
    let compass = we.compass();
    let interior_ok = placement
        .iter()
        .all(|&x| compass.local(x).is_some() && boundary.binary_search(&x).is_err());
    if !interior_ok {
        return Ok(None);
    }
    let zone = |vs: Vec<usize>| {
        let mut z = vec![false; n];
        for v in vs {
            z[v] = true;
        }
        z
    };
    let mut sources = vec![placement[h.a()[0]], placement[h.b()[0]]];
    let mut zones = vec![zone(we.pegs_left()), zone(we.pegs_right())];
    if q >= 2 {
        sources.push(placement[h.a()[1]]);
        zones.push(zone(we.bottom()));
    }
    if q == 3 {
        sources.push(placement[h.a()[2]]);
        zones.push(zone(we.top()));
    }
    // Paths need only be internally disjoint from the top and bottom.
    let mut blocked = vec![false; n];
    for x in we.bottom().into_iter().chain(we.top()) {
        blocked[x] = true;
    }
    zone_linkage(&we.host, &sources, &zones, &blocked, budget)
}

pub fn is_properly_set(we: &WallEmbedding, h: &Patch, placement: &[usize]) -> Result<bool> {
    Ok(properly_set_linkage(we, h, placement, DEFAULT_SEARCH_BUDGET)?.is_some())
}

fn try_candidate(
    we: &WallEmbedding,
    verts: &[usize],
    a: Vec<usize>,
    b: Vec<usize>,
) -> Result<Option<(DiamondPatch, Vec<usize>)>> {
    let h = Patch::new(we.host.induced_subgraph(verts), a, b)?;
    let Some(d) = is_diamond_patch(&h)? else {
        return Ok(None);
    };
    if is_properly_set(we, &h, verts)? {
        return Ok(Some((d, verts.to_vec())));
    }
    Ok(None)
}

/// Boundary assignments for a vertex set of size `k`: `a(1) ≠ b(1)` and up to two
/// shared boundary vertices.
fn assignments(k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for a1 in 0..k {
        for b1 in 0..k {
            if a1 == b1 {
                continue;
            }
            out.push((vec![a1], vec![b1]));
            for s2 in 0..k {
                if s2 == a1 || s2 == b1 {
                    continue;
                }
                out.push((vec![a1, s2], vec![b1, s2]));
                for s3 in 0..k {
                    if s3 == a1 || s3 == b1 || s3 == s2 {
                        continue;
                    }
                    out.push((vec![a1, s2, s3], vec![b1, s2, s3]));
                }
            }
        }
    }
    out
}

/// A diamond patch properly set in a crossless embedding.
///
/// Tries the edges of the deepest nested cycle first, then every other compass
/// edge, then connected vertex sets of up to `max_size` vertices.
pub fn find_diamond_patch(we: &WallEmbedding, max_size: usize) -> Result<Option<(DiamondPatch, Vec<usize>)>> {
    if !is_crossless(we, DEFAULT_CROSS_CAP)? {
        return Err(Error::Precondition("embedding has a cross".into()));
    }
    let boundary = we.boundary();
    let compass = we.compass();
    let interior: Vec<usize> = compass
        .vertices
        .iter()
        .copied()
        .filter(|x| boundary.binary_search(x).is_err())
        .collect();
    let is_interior = |x: usize| interior.binary_search(&x).is_ok();

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in (0..=7).rev() {
        let Ok(sub) = we.wall.nested(i) else {
            continue;
        };
        let cyc = we.restrict(&sub)?.image_cycle(&sub.outer_cycle);
        for k in 0..cyc.len() {
            edges.push((cyc[k], cyc[(k + 1) % cyc.len()]));
        }
    }
    for &u in &interior {
        for &v in we.host.neighbors(u) {
            edges.push((u, v));
        }
    }
    let mut tried = HashSet::new();
    for (u, v) in edges {
        if !is_interior(u) || !is_interior(v) || !tried.insert((u.min(v), u.max(v))) {
            continue;
        }
        let verts = vec![u.min(v), u.max(v)];
        for (a, b) in [(vec![0], vec![1]), (vec![1], vec![0])] {
            if let Some(found) = try_candidate(we, &verts, a, b)? {
                return Ok(Some(found));
            }
        }
    }

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut layer: Vec<Vec<usize>> = tried.iter().map(|&(u, v)| vec![u, v]).collect();
    layer.sort();
    for _size in 3..=max_size {
        let mut next = Vec::new();
        for set in &layer {
            for &x in set {
                for &y in we.host.neighbors(x) {
                    if !is_interior(y) || set.contains(&y) {
                        continue;
                    }
                    let mut s2 = set.clone();
                    s2.push(y);
                    s2.sort_unstable();
                    if seen.insert(s2.clone()) {
                        next.push(s2);
                    }
                }
            }
        }
        next.sort();
        for verts in &next {
            for (a, b) in assignments(verts.len()) {
                if let Some(found) = try_candidate(we, verts, a, b)? {
                    return Ok(Some(found));
                }
            }
        }
        layer = next;
    }
    Ok(None)
}

/// `{"vertex_map": {"v": x, …}, "edge_paths": {"u-v": [x, …], …}}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub vertex_map: BTreeMap<String, usize>,
    pub edge_paths: BTreeMap<String, Vec<usize>>,
}

impl From<&Embedding> for EmbeddingJson {
    fn from(e: &Embedding) -> Self {
        EmbeddingJson {
            vertex_map: e.vertex_map.iter().enumerate().map(|(v, &x)| (v.to_string(), x)).collect(),
            edge_paths: e
                .edge_paths
                .iter()
                .map(|(&(u, v), p)| (format!("{u}-{v}"), p.clone()))
                .collect(),
        }
    }
}

impl TryFrom<EmbeddingJson> for Embedding {
    type Error = Error;

    fn try_from(j: EmbeddingJson) -> Result<Self> {
        let bad = |s: &str| Error::Parse(format!("bad embedding key {s:?}"));
        let mut vm: Vec<(usize, usize)> = Vec::new();
        for (k, x) in &j.vertex_map {
            vm.push((k.parse().map_err(|_| bad(k))?, *x));
        }
        vm.sort_unstable();
        if vm.iter().enumerate().any(|(i, &(v, _))| v != i) {
            return Err(Error::Parse("vertex_map keys must be 0..n".into()));
        }
        let mut edge_paths = BTreeMap::new();
        for (k, p) in j.edge_paths {
            let (u, v) = k.split_once('-').ok_or_else(|| bad(&k))?;
            let (u, v): (usize, usize) = (u.parse().map_err(|_| bad(&k))?, v.parse().map_err(|_| bad(&k))?);
            let (key, path) = if u < v {
                ((u, v), p)
            } else {
                ((v, u), p.into_iter().rev().collect())
            };
            edge_paths.insert(key, path);
        }
        Ok(Embedding { vertex_map: vm.into_iter().map(|(_, x)| x).collect(), edge_paths })
    }
}
