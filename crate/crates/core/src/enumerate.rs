//! One graph per isomorphism class, by vertex augmentation and canonical dedup.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::canon::canonical_graph;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_CAP: usize = 9;
pub const MAX_CAP: usize = 10;

/// All graphs on `n` vertices up to isomorphism, canonically labelled,
/// sorted by edge count then graph6.
pub fn all_graphs(n: usize, cap: usize) -> Result<Vec<Graph>> {
    let cap = cap.min(MAX_CAP);
    if n > cap {
        return Err(Error::CapExceeded {
            name: "enumeration_vertices",
            limit: cap,
            requested: n,
        });
    }
    let mut level = vec![Graph::new(0)];
    for k in 0..n {
        level = augment(&level, k);
    }
    Ok(level)
}

/// Every graph on `k + 1` vertices arises from one on `k` vertices by adding a vertex.
fn augment(level: &[Graph], k: usize) -> Vec<Graph> {
    let shards: Vec<HashSet<Vec<u8>>> = level
        .par_iter()
        .map(|g| {
            let mut seen = HashSet::new();
            for nb in 0u64..(1u64 << k) {
                let mut h = g.clone();
                let v = h.add_vertex();
                let mut rest = nb;
                while rest != 0 {
                    let w = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    h.add_edge(v, w);
                }
                seen.insert(canonical_graph(&h).to_graph6().into_bytes());
            }
            seen
        })
        .collect();
    let mut all: HashSet<Vec<u8>> = HashSet::new();
    for s in shards {
        all.extend(s);
    }
    let mut out: Vec<Graph> = all
        .into_iter()
        .map(|b| Graph::from_graph6(std::str::from_utf8(&b).unwrap()).unwrap())
        .collect();
    out.sort_by_cached_key(|g| (g.m(), g.to_graph6()));
    out
}

/// Representatives passing `filter`, in the order of `all_graphs`.
pub fn enumerate_graphs<F>(n: usize, filter: F, cap: usize) -> Result<Vec<Graph>>
where
    F: Fn(&Graph) -> bool + Sync,
{
    let all = all_graphs(n, cap)?;
    Ok(all.into_par_iter().filter(|g| filter(g)).collect())
}
