//! Δ-excess, the H₊/H₋ pair for rational Δ ≥ 3/2, greedy Δ-controlled sequences
//! and the density tables of their products.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{generators, Graph};
use crate::patch::{patch_product, product_all, Patch};
use crate::rational::{ceil_i64, floor_i64, int, rat, Rational};
use crate::topo::{is_suppressible, suppress};

pub const PSI_VERTEX_CAP: usize = 10;
pub const PSI_EDGE_CAP: usize = 24;
pub const PRODUCT_CAP: usize = 20_000;

fn min_delta() -> Rational {
    rat(3, 2)
}

fn check_delta(delta: &Rational) -> Result<()> {
    if *delta < min_delta() {
        return Err(Error::InvalidParameter(format!(
            "delta must be at least 3/2, got {delta}"
        )));
    }
    Ok(())
}

/// `|E| − Δ(|V| − 1)`.
pub fn excess_of(g: &Graph, delta: &Rational) -> Rational {
    int(g.m() as i64) - delta * int(g.n() as i64 - 1)
}

/// ψ_Δ together with a maximally suppressed subgraph attaining it.
#[derive(Debug, Clone)]
pub struct Excess {
    pub value: Rational,
    pub witness: Graph,
}

pub fn psi_excess(g: &Graph, delta: &Rational) -> Result<Rational> {
    Ok(psi_witness(g, delta, PSI_VERTEX_CAP)?.value)
}

pub fn psi_excess_with_cap(g: &Graph, delta: &Rational, cap: usize) -> Result<Rational> {
    Ok(psi_witness(g, delta, cap)?.value)
}

/// Every topological minor is a maximal simple suppression of some subgraph, and for
/// Δ ≥ 1 suppressing never lowers the objective, so those are the only candidates.
/// Isolated vertices never help, so a subgraph is determined by its edge set.
pub fn psi_witness(g: &Graph, delta: &Rational, cap: usize) -> Result<Excess> {
    if g.n() < 2 {
        return Err(Error::InvalidParameter("psi needs at least 2 vertices".into()));
    }
    if delta < &Rational::one() {
        return Err(Error::InvalidParameter("psi needs delta >= 1".into()));
    }
    let cap = cap.min(64);
    if g.n() > cap {
        return Err(Error::CapExceeded {
            name: "psi_vertices",
            limit: cap,
            requested: g.n(),
        });
    }
    let edges = g.edges();
    if edges.len() > PSI_EDGE_CAP {
        return Err(Error::CapExceeded {
            name: "psi_edges",
            limit: PSI_EDGE_CAP,
            requested: edges.len(),
        });
    }
    if edges.is_empty() {
        return Ok(Excess {
            value: -delta.clone(),
            witness: Graph::new(2),
        });
    }
    let total = 1u64 << edges.len();
    let best = (1..total)
        .into_par_iter()
        .map(|set| {
            let h = subgraph_from_edges(&edges, set);
            let (steps, reduced) = max_suppression(&h);
            let obj = excess_of(&h, delta) + int(steps as i64) * (delta - Rational::one());
            (obj, set, reduced)
        })
        .reduce_with(|a, b| {
            if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        })
        .expect("at least one edge");
    Ok(Excess {
        value: best.0,
        witness: best.2,
    })
}

/// The subgraph spanned by the chosen edges, relabelled onto the covered vertices.
fn subgraph_from_edges(edges: &[(usize, usize)], set: u64) -> Graph {
    let mut idx: HashMap<usize, usize> = HashMap::new();
    let mut pairs = Vec::new();
    let mut rest = set;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let (u, v) = edges[i];
        let n = idx.len();
        let a = *idx.entry(u).or_insert(n);
        let n = idx.len();
        let b = *idx.entry(v).or_insert(n);
        pairs.push((a, b));
    }
    Graph::from_edges(idx.len(), &pairs).expect("simple subgraph")
}

/// Longest sequence of simple suppressions, and the graph it ends in.
pub fn max_suppression(g: &Graph) -> (usize, Graph) {
    let mut memo: HashMap<Vec<u64>, usize> = HashMap::new();
    let steps = suppression_depth(g, &mut memo);
    // Replay greedily along the memoised optimum.
    let mut cur = g.clone();
    let mut left = steps;
    while left > 0 {
        let next = (0..cur.n())
            .filter(|&v| is_suppressible(&cur, v))
            .map(|v| suppress(&cur, v))
            .find(|h| suppression_depth(h, &mut memo) + 1 == left)
            .expect("memoised path exists");
        cur = next;
        left -= 1;
    }
    (steps, cur)
}

fn suppression_depth(g: &Graph, memo: &mut HashMap<Vec<u64>, usize>) -> usize {
    let key = g.masks();
    if let Some(&d) = memo.get(&key) {
        return d;
    }
    let mut best = 0;
    for v in 0..g.n() {
        if is_suppressible(g, v) {
            best = best.max(1 + suppression_depth(&suppress(g, v), memo));
            if best + 2 >= g.n() {
                break;
            }
        }
    }
    memo.insert(key, best);
    best
}

/// H₊ and H₋ as 1-patches with α = ψ_Δ(H₊) and β = ψ_Δ(H₋).
#[derive(Debug, Clone)]
pub struct PmPair {
    pub delta: Rational,
    pub plus: Patch,
    pub minus: Patch,
    pub alpha: Rational,
    pub beta: Rational,
}

/// Boundary rule: the two lowest-index vertices of maximum degree.
fn one_patch(g: Graph) -> Result<Patch> {
    let d = g.max_degree();
    let top: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) == d).take(2).collect();
    let (a, b) = if top.len() == 2 {
        (top[0], top[1])
    } else {
        let other = (0..g.n()).find(|&v| v != top[0]).ok_or_else(|| {
            Error::InvalidParameter("1-patch needs two vertices".into())
        })?;
        (top[0], other)
    };
    Patch::new(g, vec![a], vec![b])
}

fn delete_smallest_edges(mut g: Graph, k: usize) -> Graph {
    for (u, v) in g.edges().into_iter().take(k) {
        g.remove_edge(u, v);
    }
    g
}

/// If the graph does not attain its own excess, swap in the maximising topological minor.
fn tighten(g: Graph, delta: &Rational, cap: usize) -> Result<(Graph, Rational)> {
    let ex = psi_witness(&g, delta, cap)?;
    if excess_of(&g, delta) == ex.value {
        Ok((g, ex.value))
    } else {
        Ok((ex.witness, ex.value))
    }
}

pub fn construct_h_pm(delta: &Rational) -> Result<PmPair> {
    construct_h_pm_with_cap(delta, PSI_VERTEX_CAP)
}

pub fn construct_h_pm_with_cap(delta: &Rational, cap: usize) -> Result<PmPair> {
    check_delta(delta)?;
    let (plus, minus) = if *delta >= int(2) {
        let t = ceil_i64(&(delta * int(2))) as usize;
        if t > cap {
            return Err(Error::CapExceeded {
                name: "psi_vertices",
                limit: cap,
                requested: t,
            });
        }
        let kt = generators::complete(t)?;
        let s = floor_i64(&psi_excess_with_cap(&kt, delta, cap)?) as usize;
        (
            delete_smallest_edges(kt.clone(), s),
            delete_smallest_edges(kt, s + 1),
        )
    } else {
        // Smallest t with 2t − 3 ≥ Δ(t − 1).
        let mut t = 3usize;
        while int(2 * t as i64 - 3) < delta * int(t as i64 - 1) {
            t += 1;
        }
        (generators::fan(t)?, generators::fan(t - 1)?)
    };
    let (plus, alpha) = tighten(plus, delta, cap)?;
    let (minus, beta) = tighten(minus, delta, cap)?;
    if alpha.is_negative() {
        return Err(Error::IdentityViolation(format!("psi(H+) = {alpha} < 0")));
    }
    if !beta.is_negative() {
        return Err(Error::IdentityViolation(format!("psi(H-) = {beta} is not negative")));
    }
    if &alpha - &beta > delta - Rational::one() {
        return Err(Error::IdentityViolation(format!(
            "psi(H+) - psi(H-) = {} exceeds delta - 1",
            &alpha - &beta
        )));
    }
    Ok(PmPair {
        delta: delta.clone(),
        plus: one_patch(plus)?,
        minus: one_patch(minus)?,
        alpha,
        beta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ControlledSequence {
    pub pair: PmPair,
    pub choices: Vec<Sign>,
    /// `prefix_sums[k]` is the excess total over the first `k + 1` patches.
    pub prefix_sums: Vec<Rational>,
}

impl ControlledSequence {
    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn delta(&self) -> &Rational {
        &self.pair.delta
    }

    pub fn patch(&self, i: usize) -> &Patch {
        match self.choices[i] {
            Sign::Plus => &self.pair.plus,
            Sign::Minus => &self.pair.minus,
        }
    }

    pub fn psi(&self, i: usize) -> &Rational {
        match self.choices[i] {
            Sign::Plus => &self.pair.alpha,
            Sign::Minus => &self.pair.beta,
        }
    }

    pub fn patches(&self, l: usize) -> Vec<Patch> {
        (0..l.min(self.len())).map(|i| self.patch(i).clone()).collect()
    }

    /// Prefix sums within [β, α], (Δ1) over every interval and (Δ2).
    pub fn validate(&self) -> Result<()> {
        let (alpha, beta) = (&self.pair.alpha, &self.pair.beta);
        let mut run = Rational::zero();
        for (k, s) in self.prefix_sums.iter().enumerate() {
            run += self.psi(k);
            if &run != s {
                return Err(Error::IdentityViolation(format!("prefix sum {k} is stale")));
            }
            if s < beta || s > alpha {
                return Err(Error::IdentityViolation(format!(
                    "prefix sum {k} = {s} outside [{beta}, {alpha}]"
                )));
            }
        }
        let cap = self.delta() - Rational::one();
        let l = self.len();
        for j1 in 0..l {
            let before = if j1 == 0 {
                Rational::zero()
            } else {
                self.prefix_sums[j1 - 1].clone()
            };
            for j2 in j1..l {
                if &self.prefix_sums[j2] - &before > cap {
                    return Err(Error::IdentityViolation(format!(
                        "interval [{}, {}] exceeds delta - 1",
                        j1 + 1,
                        j2 + 1
                    )));
                }
            }
        }
        for p in [&self.pair.plus, &self.pair.minus] {
            if p.a()[0] == p.b()[0] {
                return Err(Error::IdentityViolation("a(1) = b(1)".into()));
            }
        }
        Ok(())
    }
}

fn greedy_choices(alpha: &Rational, beta: &Rational, l: usize) -> (Vec<Sign>, Vec<Rational>) {
    let mut choices = Vec::with_capacity(l);
    let mut sums = Vec::with_capacity(l);
    let mut run = Rational::zero();
    for k in 0..l {
        let s = if k == 0 || !run.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        };
        run += if s == Sign::Plus { alpha } else { beta };
        choices.push(s);
        sums.push(run.clone());
    }
    (choices, sums)
}

pub fn build_controlled_sequence(delta: &Rational, l: usize) -> Result<ControlledSequence> {
    let pair = construct_h_pm(delta)?;
    controlled_from_pair(pair, l)
}

pub fn controlled_from_pair(pair: PmPair, l: usize) -> Result<ControlledSequence> {
    if l == 0 {
        return Err(Error::InvalidParameter("sequence needs l >= 1".into()));
    }
    let (choices, prefix_sums) = greedy_choices(&pair.alpha, &pair.beta, l);
    let seq = ControlledSequence {
        pair,
        choices,
        prefix_sums,
    };
    seq.validate()?;
    Ok(seq)
}

#[derive(Debug, Clone)]
pub struct ProductStats {
    pub graph: Graph,
    pub vertices: usize,
    pub edges: usize,
}

impl ProductStats {
    pub fn density(&self) -> Rational {
        rat(self.edges as i64, self.vertices as i64)
    }
}

/// ⟦𝓗_l⟧ for the first `l` patches of `seq`.
pub fn controlled_product_graph(seq: &ControlledSequence, l: usize) -> Result<ProductStats> {
    if l == 0 || l > seq.len() {
        return Err(Error::InvalidParameter(format!(
            "l must be in 1..={}, got {l}",
            seq.len()
        )));
    }
    let size: usize = (0..l).map(|i| seq.patch(i).n()).sum();
    if size > PRODUCT_CAP {
        return Err(Error::CapExceeded {
            name: "product_vertices",
            limit: PRODUCT_CAP,
            requested: size,
        });
    }
    let (p, _) = product_all(&seq.patches(l))?;
    let expected: usize = (0..l).map(|i| seq.patch(i).graph().m()).sum();
    let g = p.graph().clone();
    if g.m() != expected {
        return Err(Error::IdentityViolation(format!(
            "product has {} edges, factors sum to {expected}",
            g.m()
        )));
    }
    Ok(ProductStats {
        vertices: g.n(),
        edges: g.m(),
        graph: g,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityRow {
    pub l: usize,
    pub vertices: usize,
    pub edges: usize,
    pub prefix_psi: Rational,
}

impl DensityRow {
    /// `|E|/|V|` unreduced, as the table prints it.
    pub fn density_parts(&self) -> (usize, usize) {
        (self.edges, self.vertices)
    }

    pub fn density(&self) -> Rational {
        rat(self.edges as i64, self.vertices as i64)
    }

    /// Δ(|V| − 1) + β ≤ |E| ≤ Δ|V| − 1.
    pub fn within_bounds(&self, delta: &Rational, beta: &Rational) -> bool {
        let e = int(self.edges as i64);
        let v = int(self.vertices as i64);
        let lower = delta * (&v - Rational::one()) + beta;
        let upper = delta * v - Rational::one();
        lower <= e && e <= upper
    }
}

/// One row per prefix length, built by multiplying on one patch at a time.
pub fn density_table(seq: &ControlledSequence, l_max: usize) -> Result<Vec<DensityRow>> {
    if l_max == 0 || l_max > seq.len() {
        return Err(Error::InvalidParameter(format!(
            "l must be in 1..={}, got {l_max}",
            seq.len()
        )));
    }
    let mut rows = Vec::with_capacity(l_max);
    let mut acc = seq.patch(0).clone();
    let mut edge_sum = acc.graph().m();
    for l in 1..=l_max {
        if l > 1 {
            acc = patch_product(&acc, seq.patch(l - 1))?;
            edge_sum += seq.patch(l - 1).graph().m();
        }
        if acc.n() > PRODUCT_CAP {
            return Err(Error::CapExceeded {
                name: "product_vertices",
                limit: PRODUCT_CAP,
                requested: acc.n(),
            });
        }
        if acc.graph().m() != edge_sum {
            return Err(Error::IdentityViolation(format!("edge identity fails at l = {l}")));
        }
        rows.push(DensityRow {
            l,
            vertices: acc.n(),
            edges: acc.graph().m(),
            prefix_psi: seq.prefix_sums[l - 1].clone(),
        });
    }
    Ok(rows)
}

/// Smallest `l` from which |d − Δ| < `tol` is guaranteed by (Δ + |β|)/|V| < tol.
/// Vertex counts only grow, so the guarantee persists for every longer prefix.
pub fn l_zero(pair: &PmPair, tol: &Rational) -> Result<usize> {
    if !tol.is_positive() {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let slack = &pair.delta + pair.beta.abs();
    let mut run = Rational::zero();
    let mut vertices = 0usize;
    for l in 1.. {
        let s = if l == 1 || !run.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        };
        let (p, psi) = match s {
            Sign::Plus => (&pair.plus, &pair.alpha),
            Sign::Minus => (&pair.minus, &pair.beta),
        };
        run += psi;
        vertices += if l == 1 { p.n() } else { p.n() - 1 };
        if &slack / int(vertices as i64) < *tol {
            return Ok(l);
        }
    }
    unreachable!()
}

/// |E(G)| ≤ Δ|V(G)| − 1 for ⟦𝓗_l⟧ and for `samples` random topological minors of it.
pub fn check_class_upper_bound(
    seq: &ControlledSequence,
    l: usize,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    let stats = controlled_product_graph(seq, l)?;
    let delta = seq.delta();
    let ok = |g: &Graph| g.n() == 0 || int(g.m() as i64) <= delta * int(g.n() as i64) - Rational::one();
    if !ok(&stats.graph) {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let h = random_topological_minor(&stats.graph, &mut rng);
        if !ok(&h) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Random subgraph followed by a random run of simple suppressions.
pub fn random_topological_minor<R: Rng>(g: &Graph, rng: &mut R) -> Graph {
    let keep_v: f64 = rng.gen_range(0.3..=1.0);
    let keep_e: f64 = rng.gen_range(0.3..=1.0);
    let removed: Vec<bool> = (0..g.n()).map(|_| !rng.gen_bool(keep_v)).collect();
    let (mut h, _) = g.remove_vertices(&removed);
    for (u, v) in h.edges() {
        if !rng.gen_bool(keep_e) {
            h.remove_edge(u, v);
        }
    }
    loop {
        let cands: Vec<usize> = (0..h.n()).filter(|&v| is_suppressible(&h, v)).collect();
        if cands.is_empty() || rng.gen_bool(0.1) {
            break;
        }
        let v = cands[rng.gen_range(0..cands.len())];
        h = suppress(&h, v);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_excess_values() {
        let k4 = generators::complete(4).unwrap();
        assert_eq!(psi_excess(&k4, &int(2)).unwrap(), int(0));
        let k3 = generators::complete(3).unwrap();
        assert_eq!(psi_excess(&k3, &rat(3, 2)).unwrap(), int(0));
        let e = generators::path(2).unwrap();
        assert_eq!(psi_excess(&e, &rat(7, 3)).unwrap(), rat(-4, 3));
    }

    #[test]
    fn cycle_suppresses_to_triangle() {
        let c6 = generators::cycle(6).unwrap();
        let (steps, h) = max_suppression(&c6);
        assert_eq!(steps, 3);
        assert_eq!(h.n(), 3);
        assert_eq!(h.m(), 3);
    }

    #[test]
    fn three_halves_pair() {
        let pair = construct_h_pm(&rat(3, 2)).unwrap();
        assert_eq!(pair.plus.graph().m(), 3);
        assert_eq!(pair.minus.graph().m(), 1);
        assert_eq!(pair.alpha, int(0));
        assert_eq!(pair.beta, rat(-1, 2));
    }

    #[test]
    fn rejects_small_delta() {
        assert!(construct_h_pm(&rat(7, 5)).is_err());
    }
}
