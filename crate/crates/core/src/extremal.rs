//! Extremal functions of forbidden-minor classes, periodicity and pruning.

use std::collections::{HashMap, HashSet};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_form;
use crate::enumerate::{DEFAULT_CAP, MAX_CAP};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::minor::try_find_minor_model;
use crate::patch::graph_phi;
use crate::rational::{int, Rational};
use crate::topo::{try_find_topo_embedding, DEFAULT_TOPO_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Minor,
    Topo,
}

/// `Forb(H_1, …, H_k)` under the minor or topological-minor order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSpec {
    pub forbidden: Vec<Graph>,
    pub relation: Relation,
}

impl ClassSpec {
    pub fn new(forbidden: Vec<Graph>, relation: Relation) -> Result<Self> {
        if forbidden.is_empty() {
            return Err(Error::InvalidParameter("at least one forbidden graph is required".into()));
        }
        if forbidden.iter().any(Graph::is_null) {
            return Err(Error::InvalidParameter("forbidden graphs must be non-null".into()));
        }
        Ok(ClassSpec { forbidden, relation })
    }

    /// Whether `g` avoids every forbidden graph.
    pub fn contains(&self, g: &Graph) -> Result<bool> {
        for h in &self.forbidden {
            let found = match self.relation {
                Relation::Minor => try_find_minor_model(g, h)?.is_some(),
                Relation::Topo => try_find_topo_embedding(g, h, DEFAULT_TOPO_BUDGET)?.is_some(),
            };
            if found {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalRow {
    pub n: usize,
    pub ex: usize,
    pub witness: Graph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalTable {
    pub spec: ClassSpec,
    /// Rows for `n = 1, …, n_max`.
    pub rows: Vec<ExtremalRow>,
}

/// Members of the class on `n` vertices with the most edges, one per isomorphism
/// class, generated edge by edge. The class is closed under edge deletion, so
/// every member is reached from a member with one edge fewer.
pub fn extremal_members(spec: &ClassSpec, n: usize) -> Result<(usize, Vec<Graph>)> {
    let mut level = vec![Graph::new(n)];
    let mut m = 0;
    loop {
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut fresh: Vec<(Vec<u8>, Graph)> = Vec::new();
        let children: Vec<(Vec<u8>, Graph)> = level
            .par_iter()
            .flat_map_iter(|g| {
                let mut out = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if !g.has_edge(u, v) {
                            let mut c = g.clone();
                            c.add_edge(u, v);
                            out.push((canonical_form(&c), c));
                        }
                    }
                }
                out
            })
            .collect();
        for (key, g) in children {
            if seen.insert(key.clone()) {
                fresh.push((key, g));
            }
        }
        let kept: Vec<(Vec<u8>, Graph)> = fresh
            .into_par_iter()
            .map(|(k, g)| spec.contains(&g).map(|ok| ok.then_some((k, g))))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        if kept.is_empty() {
            let mut top: Vec<(Vec<u8>, Graph)> = level.into_iter().map(|g| (canonical_form(&g), g)).collect();
            top.sort_by(|a, b| a.0.cmp(&b.0));
            return Ok((m, top.into_iter().map(|(_, g)| g).collect()));
        }
        let mut next: Vec<(Vec<u8>, Graph)> = kept;
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next.into_iter().map(|(_, g)| g).collect();
        m += 1;
    }
}

/// `ex(n)` for `n = 1, …, n_max`, each with a witness.
pub fn ex_table(spec: &ClassSpec, n_max: usize) -> Result<ExtremalTable> {
    ex_table_with_cap(spec, n_max, DEFAULT_CAP)
}

pub fn ex_table_with_cap(spec: &ClassSpec, n_max: usize, cap: usize) -> Result<ExtremalTable> {
    let cap = cap.min(MAX_CAP);
    if n_max > cap {
        return Err(Error::CapExceeded { name: "extremal_vertices", limit: cap, requested: n_max });
    }
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (ex, members) = extremal_members(spec, n)?;
        let witness = canonical_witness(members);
        rows.push(ExtremalRow { n, ex, witness });
    }
    Ok(ExtremalTable { spec: spec.clone(), rows })
}

fn canonical_witness(members: Vec<Graph>) -> Graph {
    members
        .into_iter()
        .map(|g| {
            let c = crate::canon::canonical_graph(&g);
            (c.to_graph6(), c)
        })
        .min_by(|a, b| a.0.cmp(&b.0))
        .map(|(_, g)| g)
        .expect("at least one member")
}

/// `f(n) = ex(n) − Δ n` per row.
pub fn f_values(table: &ExtremalTable, delta: &Rational) -> Vec<(usize, Rational)> {
    table
        .rows
        .iter()
        .map(|r| (r.n, int(r.ex as i64) - delta * int(r.n as i64)))
        .collect()
}

/// Heuristic slope `ex(n) − ex(n−1)` of the last two rows. Not a proof of anything.
pub fn heuristic_delta(table: &ExtremalTable) -> Option<Rational> {
    let k = table.rows.len();
    (k >= 2).then(|| int(table.rows[k - 1].ex as i64 - table.rows[k - 2].ex as i64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodReport {
    pub period: usize,
    /// `f(n) = residues[n mod period]` for every tabulated `n > onset`.
    pub onset: usize,
    pub residues: Vec<Rational>,
    /// Tabulated range the report was checked on.
    pub n_min: usize,
    pub n_max: usize,
}

/// Smallest period `P ≤ search_limit`, then smallest onset `M`, such that the
/// tabulated values with `n > M` are `P`-periodic and at least `2P` of them remain.
///
/// `None` means the table is inconclusive, not that no period exists.
pub fn detect_period(f: &[(usize, Rational)], search_limit: usize) -> Option<PeriodReport> {
    let (n_min, n_max) = (f.first()?.0, f.last()?.0);
    if f.windows(2).any(|w| w[1].0 != w[0].0 + 1) {
        return None;
    }
    for p in 1..=search_limit {
        // Longest periodic suffix: walk back while f(n) = f(n + p).
        let mut start = f.len();
        while start > 0 && (start - 1 + p >= f.len() || f[start - 1].1 == f[start - 1 + p].1) {
            start -= 1;
        }
        // Every position from `start` on agrees with its period-successor.
        let tail = f.len() - start;
        if tail < 2 * p {
            continue;
        }
        let onset = f[start].0 - 1;
        let mut residues = vec![Rational::zero(); p];
        for (n, v) in &f[start..start + p] {
            residues[n % p] = v.clone();
        }
        return Some(PeriodReport { period: p, onset, residues, n_min, n_max });
    }
    None
}

/// One-step minors: vertex deletions and edge contractions.
fn one_step_minors(g: &Graph) -> Vec<Graph> {
    let n = g.n();
    let mut out = Vec::new();
    for v in 0..n {
        let mut removed = vec![false; n];
        removed[v] = true;
        out.push(g.remove_vertices(&removed).0);
    }
    for (u, v) in g.edges() {
        out.push(contract_edge(g, u, v));
    }
    out
}

/// Merges `v` into `u` (`u < v`), dropping loops and parallel edges.
pub fn contract_edge(g: &Graph, u: usize, v: usize) -> Graph {
    let n = g.n();
    let map = |x: usize| -> usize {
        let x = if x == v { u } else { x };
        if x > v {
            x - 1
        } else {
            x
        }
    };
    let edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| (map(a), map(b)))
        .filter(|(a, b)| a != b)
        .collect();
    Graph::from_edges_merged(n - 1, &edges)
}

/// Distinct minors of `g` reachable by exactly `k` deletions/contractions, for
/// `k = 0, …, depth`. Edge deletions are omitted: they only lower `φ`.
fn minor_levels(g: &Graph, depth: usize, state_cap: usize) -> Result<Vec<Vec<Graph>>> {
    let mut levels = vec![vec![g.clone()]];
    let mut total = 1usize;
    for _ in 0..depth {
        let last = levels.last().unwrap();
        if last.iter().all(|h| h.n() == 0) {
            break;
        }
        let children: Vec<(Vec<u8>, Graph)> = last
            .par_iter()
            .flat_map_iter(|h| one_step_minors(h).into_iter().map(|c| (canonical_form(&c), c)))
            .collect();
        let mut seen = HashSet::new();
        let mut next: Vec<(Vec<u8>, Graph)> = children.into_iter().filter(|(k, _)| seen.insert(k.clone())).collect();
        next.sort_by(|a, b| a.0.cmp(&b.0));
        total += next.len();
        if total > state_cap {
            return Err(Error::CapExceeded { name: "minor_states", limit: state_cap, requested: total });
        }
        levels.push(next.into_iter().map(|(_, h)| h).collect());
    }
    Ok(levels)
}

pub const DEFAULT_PRUNE_STATES: usize = 500_000;

/// `φ(G) ≥ φ(H)` for every minor `H` with `|V(H)| ≥ |V(G)| − p`.
pub fn is_pruned(g: &Graph, p: usize, delta: &Rational) -> Result<bool> {
    let base = graph_phi(g, delta);
    let levels = minor_levels(g, p, DEFAULT_PRUNE_STATES)?;
    Ok(levels.iter().flatten().all(|h| graph_phi(h, delta) <= base))
}

/// `min_{k∈[p]} (1 + Δk − ⌈Δk⌉)`.
pub fn prune_delta(p: usize, delta: &Rational) -> Rational {
    (1..=p)
        .map(|k| {
            let dk = delta * int(k as i64);
            Rational::one() + &dk - dk.ceil()
        })
        .min()
        .unwrap_or_else(Rational::one)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PruneOutcome {
    /// `p`-pruned with `φ` at least that of the input.
    Pruned,
    /// Density at least `Δ + ε`.
    Dense,
    /// Neither verified (the input was outside the guaranteed range).
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruneResult {
    pub graph: Graph,
    pub epsilon: Rational,
    pub outcome: PruneOutcome,
}

/// Among minors `G'` with `|V(G')| ≥ n0` and
/// `φ(G') ≥ φ(G) + 2ε(|V(G)| − |V(G')|)`, `ε = δ/(2p)`, one with fewest vertices
/// (most edges, then smallest canonical form, among those).
pub fn prune_search(g: &Graph, p: usize, delta: &Rational, n0: usize) -> Result<PruneResult> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be positive".into()));
    }
    let eps = prune_delta(p, delta) / int(2 * p as i64);
    let base = graph_phi(g, delta);
    let n = g.n();
    let depth = n.saturating_sub(n0);
    let levels = minor_levels(g, depth, DEFAULT_PRUNE_STATES)?;
    let mut chosen = g.clone();
    for (k, level) in levels.iter().enumerate() {
        let bound = &base + int(2) * &eps * int(k as i64);
        let best = level
            .iter()
            .filter(|h| h.n() >= n0 && graph_phi(h, delta) >= bound)
            .max_by(|a, b| a.m().cmp(&b.m()).then_with(|| canonical_form(b).cmp(&canonical_form(a))));
        if let Some(h) = best {
            chosen = h.clone();
        }
    }
    let outcome = if is_pruned(&chosen, p, delta)? && graph_phi(&chosen, delta) >= base {
        PruneOutcome::Pruned
    } else if chosen.n() > 0 && int(chosen.m() as i64) >= (delta + &eps) * int(chosen.n() as i64) {
        PruneOutcome::Dense
    } else {
        PruneOutcome::Neither
    };
    Ok(PruneResult { graph: chosen, epsilon: eps, outcome })
}

fn factorial(p: usize) -> usize {
    (1..=p).product()
}

/// Indices (0-based) of entries of `c` summing to exactly `p!`, given
/// `|c| ≥ p·p!` and every `c_i ∈ [1, p]`: some value `v` occurs `p!` times and
/// `p!/v` of its occurrences are returned.
pub fn subset_sum_factorial(c: &[u64], p: usize) -> Result<Vec<usize>> {
    if p == 0 {
        return Err(Error::Precondition("p must be positive".into()));
    }
    let pf = factorial(p);
    if c.len() < p * pf {
        return Err(Error::Precondition(format!("need at least {} values, got {}", p * pf, c.len())));
    }
    if c.iter().any(|&x| x == 0 || x as usize > p) {
        return Err(Error::Precondition(format!("values must lie in [1, {p}]")));
    }
    let mut at: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, &x) in c.iter().enumerate() {
        at.entry(x).or_default().push(i);
    }
    let v = (1..=p as u64)
        .find(|v| at.get(v).is_some_and(|ix| ix.len() >= pf))
        .expect("pigeonhole");
    Ok(at[&v][..pf / v as usize].to_vec())
}

/// Largest `ex(n)/n` over the table rows.
pub fn max_density(table: &ExtremalTable) -> Option<Rational> {
    table.rows.iter().map(|r| Rational::new((r.ex as i64).into(), (r.n as i64).into())).max()
}
