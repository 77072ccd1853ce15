//! Tree and path decompositions.
//!
//! Width here is the largest bag size, one more than the usual treewidth.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linkage::max_linkage;
use crate::patch::{classify, Patch};
use crate::patchwork::{validate_embedded_patchwork, validate_stitched, EmbeddedPatchwork, StitchSet};

pub const TREEWIDTH_CAP: usize = 12;
pub const THETA_TREEWIDTH_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub tree: Graph,
    /// Sorted bag of each tree vertex.
    pub bags: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub valid: bool,
    pub width: usize,
    pub adhesion: usize,
    pub order: usize,
    pub problems: Vec<String>,
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|v| b.binary_search(v).is_ok()).collect()
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

impl TreeDecomposition {
    pub fn new(tree: Graph, mut bags: Vec<Vec<usize>>) -> Result<Self> {
        if bags.len() != tree.n() {
            return Err(Error::InvalidParameter(format!(
                "{} bags for {} tree vertices",
                bags.len(),
                tree.n()
            )));
        }
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        Ok(TreeDecomposition { tree, bags })
    }

    pub fn order(&self) -> usize {
        self.tree.n()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn adhesion_set(&self, s: usize, t: usize) -> Vec<usize> {
        intersect(&self.bags[s], &self.bags[t])
    }

    pub fn adhesion(&self) -> usize {
        self.tree
            .edges()
            .iter()
            .map(|&(s, t)| self.adhesion_set(s, t).len())
            .max()
            .unwrap_or(0)
    }

    /// No bag is contained in a neighbouring bag.
    pub fn is_proper(&self) -> bool {
        self.tree.edges().iter().all(|&(s, t)| {
            !is_subset(&self.bags[s], &self.bags[t]) && !is_subset(&self.bags[t], &self.bags[s])
        })
    }
}

pub fn validate_decomposition(g: &Graph, d: &TreeDecomposition) -> DecompositionReport {
    let mut r = DecompositionReport {
        valid: true,
        width: d.width(),
        adhesion: d.adhesion(),
        order: d.order(),
        problems: Vec::new(),
    };
    if d.bags.len() != d.tree.n() || !d.tree.is_tree() {
        r.valid = false;
        r.problems.push("decomposition tree is not a tree".into());
        return r;
    }
    if d.bags.iter().flatten().any(|&v| v >= g.n()) {
        r.valid = false;
        r.problems.push("bag vertex out of range".into());
        return r;
    }
    for (u, v) in g.edges() {
        if !d.bags.iter().any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok()) {
            r.valid = false;
            r.problems.push(format!("edge ({u},{v}) is in no bag"));
        }
    }
    for v in 0..g.n() {
        let trace: Vec<usize> = (0..d.tree.n()).filter(|&t| d.bags[t].binary_search(&v).is_ok()).collect();
        if trace.is_empty() || !d.tree.is_connected_set(&trace) {
            r.valid = false;
            r.problems.push(format!("bags containing {v} do not form a non-empty subtree"));
        }
    }
    r
}

/// Bags in path order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDecomposition {
    pub bags: Vec<Vec<usize>>,
}

impl PathDecomposition {
    pub fn new(mut bags: Vec<Vec<usize>>) -> Self {
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        PathDecomposition { bags }
    }

    pub fn order(&self) -> usize {
        self.bags.len()
    }

    pub fn to_tree(&self) -> TreeDecomposition {
        let k = self.bags.len();
        let edges: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
        TreeDecomposition {
            tree: Graph::from_edges(k, &edges).expect("path edges"),
            bags: self.bags.clone(),
        }
    }

    /// `β(e_i)` for the edge between bags `i` and `i + 1`.
    pub fn adhesion_sets(&self) -> Vec<Vec<usize>> {
        self.bags.windows(2).map(|w| intersect(&w[0], &w[1])).collect()
    }

    pub fn is_proper(&self) -> bool {
        self.to_tree().is_proper()
    }

    /// Every vertex lies in all bags or in at most two consecutive ones.
    pub fn is_appearance_universal(&self, g: &Graph) -> bool {
        (0..g.n()).all(|v| {
            let at: Vec<usize> = (0..self.bags.len())
                .filter(|&t| self.bags[t].binary_search(&v).is_ok())
                .collect();
            at.len() == self.bags.len() || at.len() == 1 || (at.len() == 2 && at[1] == at[0] + 1)
        })
    }

    /// Vertices appearing in every bag.
    pub fn global_vertices(&self) -> Vec<usize> {
        let mut it = self.bags.iter();
        let first = it.next().cloned().unwrap_or_default();
        it.fold(first, |acc, b| intersect(&acc, b))
    }
}

/// Any two adhesion sets are joined by a linkage of full order.
pub fn check_perfectly_linked(g: &Graph, pd: &PathDecomposition) -> bool {
    let sets = pd.adhesion_sets();
    let Some(q) = sets.first().map(Vec::len) else {
        return true;
    };
    if sets.iter().any(|s| s.len() != q) {
        return false;
    }
    (0..sets.len()).all(|i| (i + 1..sets.len()).all(|j| max_linkage(g, &sets[i], &sets[j]).k == q))
}

fn check_cap(name: &'static str, limit: usize, n: usize) -> Result<()> {
    if n > limit {
        return Err(Error::CapExceeded { name, limit, requested: n });
    }
    Ok(())
}

/// Minimum largest-bag size over all tree decompositions (standard treewidth + 1).
pub fn exact_treewidth(g: &Graph) -> Result<usize> {
    let n = g.n();
    check_cap("treewidth_vertices", TREEWIDTH_CAP, n)?;
    if n == 0 {
        return Ok(0);
    }
    let adj: Vec<u32> = g.masks().iter().map(|&m| m as u32).collect();
    let full = (1u32 << n) - 1;
    // q(s, v): vertices outside s ∪ {v} reachable from v through s.
    let q = |s: u32, v: usize| -> u32 {
        let mut seen = 1u32 << v;
        let mut frontier = seen;
        let mut out = 0u32;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let x = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[x];
            }
            next &= !seen;
            seen |= next;
            out |= next & !s;
            frontier = next & s;
        }
        out & !(1u32 << v)
    };
    let mut tw = vec![u32::MAX; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u32::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let val = tw[rest as usize].max(q(rest, v).count_ones());
            best = best.min(val);
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize] as usize + 1)
}

/// Minimum largest-bag size over tree decompositions with every adhesion below `theta`.
///
/// Rooted at a bag `R`, each component `C` of `G − R` hangs off a subtree whose
/// adhesion to `R` is exactly `N(C)`; the search recurses over those components.
pub fn theta_treewidth(g: &Graph, theta: usize) -> Result<usize> {
    let n = g.n();
    check_cap("theta_treewidth_vertices", THETA_TREEWIDTH_CAP, n)?;
    if n == 0 {
        return Ok(0);
    }
    let adj: Vec<u32> = g.masks().iter().map(|&m| m as u32).collect();
    let full = (1u32 << n) - 1;
    let mut memo: HashMap<u32, usize> = HashMap::new();
    Ok(best_root(&adj, full, 0, theta, &mut memo))
}

fn nbhd32(adj: &[u32], s: u32) -> u32 {
    let mut out = 0;
    let mut b = s;
    while b != 0 {
        out |= adj[b.trailing_zeros() as usize];
        b &= b - 1;
    }
    out & !s
}

fn comps32(adj: &[u32], region: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut left = region;
    while left != 0 {
        let mut c = left & left.wrapping_neg();
        loop {
            let grow = (nbhd32(adj, c) | c) & region;
            if grow == c {
                break;
            }
            c = grow;
        }
        out.push(c);
        left &= !c;
    }
    out
}

/// Best width for covering `c` with a root bag `base ∪ s` (`s ⊆ c`, non-empty).
fn best_root(adj: &[u32], c: u32, base: u32, theta: usize, memo: &mut HashMap<u32, usize>) -> usize {
    let mut best = usize::MAX;
    let mut s = c;
    while s != 0 {
        let bag = base | s;
        let size = bag.count_ones() as usize;
        if size < best {
            let mut worst = size;
            for comp in comps32(adj, c & !s) {
                if worst >= best {
                    break;
                }
                worst = worst.max(sub(adj, comp, theta, memo));
            }
            best = best.min(worst);
        }
        s = (s - 1) & c;
    }
    best
}

fn sub(adj: &[u32], comp: u32, theta: usize, memo: &mut HashMap<u32, usize>) -> usize {
    if let Some(&v) = memo.get(&comp) {
        return v;
    }
    let attach = nbhd32(adj, comp);
    let v = if attach.count_ones() as usize >= theta {
        usize::MAX
    } else {
        best_root(adj, comp, attach, theta, memo)
    };
    memo.insert(comp, v);
    v
}

/// A proper path decomposition of adhesion at most `theta` and order at least `l`
/// built from `d`, either around a high-degree tree vertex or along a long tree path.
pub fn extract_path_decomposition(
    g: &Graph,
    d: &TreeDecomposition,
    l: usize,
    theta: usize,
) -> Result<Option<PathDecomposition>> {
    let rep = validate_decomposition(g, d);
    if !rep.valid {
        return Err(Error::InvalidParameter(format!("invalid decomposition: {}", rep.problems[0])));
    }
    if !d.is_proper() || rep.adhesion > theta {
        return Err(Error::Precondition("decomposition must be proper with adhesion at most theta".into()));
    }
    let w = rep.width;
    let threshold = (l.saturating_sub(1)).saturating_mul(1usize.checked_shl(w as u32).unwrap_or(usize::MAX));
    let out = (0..d.order())
        .filter(|&z| d.tree.degree(z) >= threshold && l >= 1)
        .find_map(|z| degree_branch(d, z, l))
        .or_else(|| path_branch(d, l));
    Ok(out.filter(|pd| {
        let t = pd.to_tree();
        pd.order() >= l && t.is_proper() && t.adhesion() <= theta && validate_decomposition(g, &t).valid
    }))
}

fn union_bags(d: &TreeDecomposition, nodes: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = nodes.iter().flat_map(|&t| d.bags[t].iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn degree_branch(d: &TreeDecomposition, z: usize, l: usize) -> Option<PathDecomposition> {
    let mut allowed = vec![true; d.order()];
    allowed[z] = false;
    let comps = d.tree.components_within(&allowed);
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, c) in comps.iter().enumerate() {
        let r = intersect(&d.bags[z], &union_bags(d, c));
        groups.entry(r).or_default().push(i);
    }
    let chosen: Vec<usize> = groups
        .values()
        .find(|g| g.len() + 1 >= l)?
        .iter()
        .copied()
        .take(l - 1)
        .collect();
    let mut bags: Vec<Vec<usize>> = chosen.iter().map(|&i| union_bags(d, &comps[i])).collect();
    let rest: Vec<usize> = (0..d.order())
        .filter(|t| !chosen.iter().any(|&i| comps[i].contains(t)))
        .collect();
    bags.push(union_bags(d, &rest));
    Some(PathDecomposition::new(bags))
}

fn farthest(tree: &Graph, s: usize) -> (usize, Vec<usize>) {
    let dist = tree.bfs_distances(&[s], &vec![true; tree.n()]);
    let far = (0..tree.n()).max_by_key(|&v| (dist[v], std::cmp::Reverse(v))).unwrap();
    (far, dist)
}

fn path_branch(d: &TreeDecomposition, l: usize) -> Option<PathDecomposition> {
    let t = &d.tree;
    if t.n() == 0 {
        return None;
    }
    let (a, _) = farthest(t, 0);
    let (b, _) = farthest(t, a);
    let mut target = vec![false; t.n()];
    target[b] = true;
    let path = t.bfs_path(a, &target, &vec![true; t.n()])?;
    if path.len() < l {
        return None;
    }
    let mut allowed = vec![true; t.n()];
    for &z in &path {
        allowed[z] = false;
    }
    let bags = path
        .iter()
        .map(|&z| {
            allowed[z] = true;
            let comp = t
                .components_within(&allowed)
                .into_iter()
                .find(|c| c.contains(&z))
                .unwrap();
            allowed[z] = false;
            union_bags(d, &comp)
        })
        .collect();
    Some(PathDecomposition::new(bags))
}

/// Greedy attempt at the flags needed downstream: merges bags across adhesion sets
/// larger than the smallest one. Returns the result only if it is proper,
/// perfectly linked and appearance-universal.
pub fn refine_path_decomposition(g: &Graph, pd: &PathDecomposition) -> Option<PathDecomposition> {
    let mut bags = pd.bags.clone();
    loop {
        let cur = PathDecomposition::new(bags.clone());
        let sets = cur.adhesion_sets();
        let Some(q) = sets.iter().map(Vec::len).min() else {
            break;
        };
        let Some(i) = sets.iter().position(|s| s.len() > q) else {
            break;
        };
        let mut merged = bags[i].clone();
        merged.extend_from_slice(&bags[i + 1]);
        bags.splice(i..=i + 1, [merged]);
    }
    let out = PathDecomposition::new(bags);
    (out.is_proper() && out.is_appearance_universal(g) && check_perfectly_linked(g, &out)).then_some(out)
}

/// The refined patchwork stitched to `g` read off a good path decomposition with
/// `k ≥ 3` bags: patches sit on bags `1, 4, 7, …` and stitches follow a linkage
/// between the first and last adhesion sets.
///
/// A local vertex lying in both bags between two consecutive patches can see the
/// right boundary of one and the left boundary of the next; the (E4) check then
/// rejects the output. [`patchwork_with_spacing`] with spacing 4 avoids this.
pub fn patchwork_from_path_decomposition(
    g: &Graph,
    pd: &PathDecomposition,
) -> Result<(usize, EmbeddedPatchwork, StitchSet)> {
    patchwork_with_spacing(g, pd, 3)
}

/// As [`patchwork_from_path_decomposition`] with patches on bags `1, 1 + s, 1 + 2s, …`.
pub fn patchwork_with_spacing(
    g: &Graph,
    pd: &PathDecomposition,
    spacing: usize,
) -> Result<(usize, EmbeddedPatchwork, StitchSet)> {
    if spacing < 2 {
        return Err(Error::InvalidParameter("spacing must be at least 2".into()));
    }
    let k = pd.order();
    if k < 3 {
        return Err(Error::Precondition(format!("need at least 3 bags, got {k}")));
    }
    let rep = validate_decomposition(g, &pd.to_tree());
    if !rep.valid {
        return Err(Error::InvalidParameter(format!("invalid decomposition: {}", rep.problems[0])));
    }
    if !pd.is_proper() {
        return Err(Error::Precondition("path decomposition is not proper".into()));
    }
    if !pd.is_appearance_universal(g) {
        return Err(Error::Precondition("path decomposition is not appearance-universal".into()));
    }
    if !check_perfectly_linked(g, pd) {
        return Err(Error::Precondition("path decomposition is not perfectly linked".into()));
    }
    let sets = pd.adhesion_sets();
    let q = sets[0].len();
    let ml = max_linkage(g, &sets[0], &sets[k - 2]);
    if ml.k != q {
        return Err(Error::Precondition(format!("linkage of order {} found, {q} needed", ml.k)));
    }
    let paths = ml.linkage.paths;
    // v[i][j]: the vertex of Q_i in the adhesion set between bags j and j + 1.
    let mut v = vec![vec![0usize; k - 1]; q];
    let mut pos = vec![vec![0usize; k - 1]; q];
    for (i, p) in paths.iter().enumerate() {
        for (j, s) in sets.iter().enumerate() {
            let hits: Vec<usize> = (0..p.len()).filter(|&x| s.binary_search(&p[x]).is_ok()).collect();
            if hits.len() != 1 {
                return Err(Error::Precondition(format!("linkage path {i} meets adhesion set {j} {} times", hits.len())));
            }
            pos[i][j] = hits[0];
            v[i][j] = p[hits[0]];
        }
    }
    let l = (k - 3) / spacing + 1;
    let mut patches = Vec::with_capacity(l);
    let mut placements = Vec::with_capacity(l);
    for jj in 0..l {
        // Patch on bag s·jj + 1, between adhesion sets s·jj and s·jj + 1.
        let t = spacing * jj;
        let bag = &pd.bags[t + 1];
        let local = |x: usize| bag.binary_search(&x).expect("linkage vertex in bag");
        let a: Vec<usize> = (0..q).map(|i| local(v[i][t])).collect();
        let b: Vec<usize> = (0..q).map(|i| local(v[i][t + 1])).collect();
        let h = Patch::new(g.induced_subgraph(bag), a, b)?;
        if !classify(&h)?.refined {
            return Err(Error::NotRefined(jj));
        }
        patches.push(h);
        placements.push(bag.clone());
    }
    let emb = validate_embedded_patchwork(g, &patches, &placements)
        .map_err(|r| Error::NotEmbedded(r.violations[0].to_string()))?;
    let stitches = StitchSet {
        paths: (0..l.saturating_sub(1))
            .map(|jj| {
                (0..q)
                    .map(|i| paths[i][pos[i][spacing * jj + 1]..=pos[i][spacing * (jj + 1)]].to_vec())
                    .collect()
            })
            .collect(),
    };
    let srep = validate_stitched(&emb, &stitches);
    if !srep.is_ok() {
        return Err(Error::NotEmbedded(srep.violations[0].to_string()));
    }
    Ok((q, emb, stitches))
}

/// `{"tree_edges": [[s, t], …], "bags": {"t": [v, …]}}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub tree_edges: Vec<[usize; 2]>,
    pub bags: BTreeMap<String, Vec<usize>>,
}

impl From<&TreeDecomposition> for DecompositionJson {
    fn from(d: &TreeDecomposition) -> Self {
        DecompositionJson {
            tree_edges: d.tree.edges().iter().map(|&(s, t)| [s, t]).collect(),
            bags: d.bags.iter().enumerate().map(|(t, b)| (t.to_string(), b.clone())).collect(),
        }
    }
}

impl TryFrom<DecompositionJson> for TreeDecomposition {
    type Error = Error;

    fn try_from(j: DecompositionJson) -> Result<Self> {
        let mut bags: Vec<(usize, Vec<usize>)> = Vec::new();
        for (k, b) in j.bags {
            let t: usize = k.parse().map_err(|_| Error::Parse(format!("bad tree vertex {k:?}")))?;
            bags.push((t, b));
        }
        bags.sort();
        if bags.iter().enumerate().any(|(i, (t, _))| *t != i) {
            return Err(Error::Parse("tree vertices must be 0..k".into()));
        }
        let edges: Vec<(usize, usize)> = j.tree_edges.iter().map(|e| (e[0], e[1])).collect();
        let tree = Graph::from_edges(bags.len(), &edges)?;
        TreeDecomposition::new(tree, bags.into_iter().map(|(_, b)| b).collect())
    }
}

impl TreeDecomposition {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&DecompositionJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: DecompositionJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        j.try_into()
    }
}
