use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{SpInstance, SpOutcome};
use crate::error::{Error, Result};
use crate::graph::Owner;
use crate::rational::{common_denominator, Rational};

/// One player's costs scaled by their common denominator to integers.
/// Paths compare by `(length, key)` where the key adds `2^(127-e)` per
/// edge: the same order as the explicit `ε·2^{-e}` perturbation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledCosts {
    pub lengths: Vec<i64>,
}

pub const MAX_EDGES: usize = 128;

impl ScaledCosts {
    pub fn new(costs: &[Rational]) -> Result<Self> {
        if costs.len() > MAX_EDGES {
            return Err(Error::Precondition(format!(
                "shortest-path tie breaking supports at most {MAX_EDGES} edges"
            )));
        }
        let l: BigInt = common_denominator(costs.iter());
        let lengths = costs
            .iter()
            .map(|c| {
                (c.numer() * (&l / c.denom()))
                    .to_i64()
                    .filter(|v| *v > 0 && *v < i64::MAX / (MAX_EDGES as i64 + 1))
                    .ok_or_else(|| Error::InvalidCosts("cost out of range after scaling".into()))
            })
            .collect::<Result<_>>()?;
        Ok(ScaledCosts { lengths })
    }
}

fn edge_key(e: usize) -> u128 {
    1u128 << (127 - e)
}

/// Unique shortest `s → t` path under the perturbed order, where each
/// position `v` with `fixed[v] = Some(k)` may only use its `k`-th move.
/// Dense O(V²) Dijkstra; instances here are small.
pub fn shortest_path(inst: &SpInstance, costs: &ScaledCosts, fixed: &[Option<usize>]) -> Option<Vec<usize>> {
    let g = inst.graph();
    let n = g.num_vertices();
    let mut dist: Vec<Option<(i64, u128)>> = vec![None; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    dist[inst.s()] = Some((0, 0));
    loop {
        let mut best: Option<(usize, (i64, u128))> = None;
        for v in 0..n {
            if let (false, Some(d)) = (done[v], dist[v]) {
                if best.is_none_or(|(_, b)| d < b) {
                    best = Some((v, d));
                }
            }
        }
        let Some((v, d)) = best else { break };
        done[v] = true;
        if v == inst.t() {
            break;
        }
        let out = g.out_edges(v);
        let allowed: &[usize] = match fixed[v] {
            Some(k) => &out[k..k + 1],
            None => out,
        };
        for &e in allowed {
            let w = g.edge(e).1;
            if done[w] {
                continue;
            }
            let cand = (d.0 + costs.lengths[e], d.1 + edge_key(e));
            if dist[w].map_or(true, |cur| cand < cur) {
                dist[w] = Some(cand);
                pred[w] = e;
            }
        }
    }
    if !done[inst.t()] {
        return None;
    }
    let mut path = Vec::new();
    let mut v = inst.t();
    while v != inst.s() {
        let e = pred[v];
        path.push(e);
        v = g.edge(e).0;
    }
    path.reverse();
    Some(path)
}

/// Bellman-Ford over explicit rational lengths; with perturbed lengths the
/// shortest path is unique, so this is an independent check of
/// [`shortest_path`].
pub fn bellman_ford_path(inst: &SpInstance, lengths: &[Rational], fixed: &[Option<usize>]) -> Option<Vec<usize>> {
    let g = inst.graph();
    let n = g.num_vertices();
    let allowed: Vec<usize> = (0..g.num_edges())
        .filter(|&e| {
            let a = g.edge(e).0;
            match fixed[a] {
                Some(k) => g.out_edges(a)[k] == e,
                None => true,
            }
        })
        .collect();
    let mut dist: Vec<Option<Rational>> = vec![None; n];
    let mut pred = vec![usize::MAX; n];
    dist[inst.s()] = Some(Rational::from_integer(0.into()));
    for _ in 0..n {
        let mut changed = false;
        for &e in &allowed {
            let (a, b) = g.edge(e);
            if b == inst.s() || g.owner(a) == Owner::Terminal {
                continue;
            }
            let Some(da) = dist[a].clone() else { continue };
            let cand = da + &lengths[e];
            if dist[b].as_ref().map_or(true, |cur| cand < *cur) {
                dist[b] = Some(cand);
                pred[b] = e;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    dist[inst.t()].as_ref()?;
    let mut path = Vec::new();
    let mut v = inst.t();
    while v != inst.s() {
        let e = pred[v];
        path.push(e);
        v = g.edge(e).0;
        if path.len() > n {
            unreachable!("positive lengths admit no cycles in the predecessor tree");
        }
    }
    path.reverse();
    Some(path)
}

impl SpOutcome {
    pub fn from_path(p: Option<Vec<usize>>) -> SpOutcome {
        p.map_or(SpOutcome::Cycle, SpOutcome::Path)
    }
}
