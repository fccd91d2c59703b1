use std::collections::HashSet;

use rand::Rng;

use super::{normalize, RawInstance, SpInstance};
use crate::graph::Owner;
use crate::nf::next_permutation;
use crate::rational::{int, Rational};

/// Positive costs `p/q` with `1 ≤ p ≤ 20`, `1 ≤ q ≤ 4`, per player and edge.
pub fn random_costs<R: Rng>(rng: &mut R, players: usize, edges: usize) -> Vec<Vec<Rational>> {
    (0..players)
        .map(|_| {
            (0..edges)
                .map(|_| Rational::new(rng.gen_range(1..=20).into(), rng.gen_range(1..=4).into()))
                .collect()
        })
        .collect()
}

fn unit_costs(players: usize, edges: usize) -> Vec<Vec<Rational>> {
    vec![vec![int(1); edges]; players]
}

/// Random normalized bipartite two-player instance on `k ≥ 2` non-terminal
/// positions (`s` is Alice's position 0, `t` is position `k`), with unit
/// costs. Every cross pair and every position-to-`t` move is present
/// independently with probability `p`; draws that fail to normalize or
/// leave a player without positions are redrawn.
pub fn random_bipartite<R: Rng>(rng: &mut R, k: usize, p: f64) -> SpInstance {
    assert!(k >= 2);
    loop {
        let a = rng.gen_range(1..k);
        let mut owners: Vec<Owner> = (0..k).map(|v| if v < a { Owner::ALICE } else { Owner::BOB }).collect();
        owners.push(Owner::Terminal);
        let mut edges = Vec::new();
        for u in 0..k {
            for v in 0..k {
                if owners[u] != owners[v] && rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
            if rng.gen_bool(p) {
                edges.push((u, k));
            }
        }
        let raw = RawInstance {
            owners,
            costs: unit_costs(2, edges.len()),
            edges,
            s: 0,
            t: k,
        };
        if let Ok(inst) = normalize(&raw) {
            if inst.num_players() == 2 && inst.is_bipartite() {
                return inst;
            }
        }
    }
}

/// Canonical key: positions other than `s` and `t` relabeled by the
/// owner-preserving permutation giving the smallest sorted edge list.
fn canonical_key(inst: &SpInstance) -> (Vec<Owner>, Vec<(usize, usize)>) {
    let g = inst.graph();
    let n = g.num_vertices();
    let inner: Vec<usize> = (0..n).filter(|&v| v != inst.s() && v != inst.t()).collect();
    let mut perm: Vec<usize> = (0..inner.len()).collect();
    let mut best: Option<(Vec<Owner>, Vec<(usize, usize)>)> = None;
    loop {
        let mut label = vec![0; n];
        label[inst.s()] = 0;
        label[inst.t()] = n - 1;
        for (i, &v) in inner.iter().enumerate() {
            label[v] = 1 + perm[i];
        }
        let mut owners = vec![Owner::Terminal; n];
        for v in 0..n {
            owners[label[v]] = g.owner(v);
        }
        let mut edges: Vec<(usize, usize)> = g.edges().iter().map(|&(a, b)| (label[a], label[b])).collect();
        edges.sort_unstable();
        let key = (owners, edges);
        if best.as_ref().is_none_or(|b| {
            (key.0.iter().map(owner_rank).collect::<Vec<_>>(), &key.1)
                < (b.0.iter().map(owner_rank).collect::<Vec<_>>(), &b.1)
        }) {
            best = Some(key);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.expect("at least one permutation")
}

fn owner_rank(o: &Owner) -> usize {
    match o {
        Owner::Player(p) => *p,
        Owner::Terminal => usize::MAX,
    }
}

/// Every normalized bipartite two-player instance with `2..=max_k`
/// non-terminal positions, `s` owned by Alice, up to isomorphism fixing
/// `s` and `t`. Costs are units; callers attach their own.
pub fn exhaustive_bipartite(max_k: usize) -> Vec<SpInstance> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for k in 2..=max_k {
        for a in 1..k {
            let mut owners: Vec<Owner> = (0..k).map(|v| if v < a { Owner::ALICE } else { Owner::BOB }).collect();
            owners.push(Owner::Terminal);
            let mut candidates = Vec::new();
            for u in 0..k {
                for v in 0..k {
                    if owners[u] != owners[v] {
                        candidates.push((u, v));
                    }
                }
                candidates.push((u, k));
            }
            assert!(candidates.len() < 32, "exhaustive generation is for tiny digraphs");
            for mask in 0u32..(1 << candidates.len()) {
                let edges: Vec<(usize, usize)> = candidates
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                let raw = RawInstance {
                    owners: owners.clone(),
                    costs: unit_costs(2, edges.len()),
                    edges,
                    s: 0,
                    t: k,
                };
                let Ok(inst) = normalize(&raw) else { continue };
                if inst.num_players() != 2 || !inst.is_bipartite() {
                    continue;
                }
                if seen.insert(canonical_key(&inst)) {
                    out.push(inst);
                }
            }
        }
    }
    out
}

/// Random symmetric instance: a random connected undirected graph on `k`
/// non-terminal positions, each with both orientations, plus moves to `t`
/// (at least one). Owners are drawn from `players` players. Unit costs.
pub fn random_symmetric<R: Rng>(rng: &mut R, k: usize, players: usize) -> SpInstance {
    assert!(k >= 1 && players >= 1);
    loop {
        let mut owners: Vec<Owner> = (0..k).map(|_| Owner::Player(rng.gen_range(0..players))).collect();
        owners.push(Owner::Terminal);
        let mut edges = Vec::new();
        // random spanning tree keeps the position set connected
        for v in 1..k {
            let u = rng.gen_range(0..v);
            edges.push((u, v));
            edges.push((v, u));
        }
        for u in 0..k {
            for v in u + 1..k {
                if !edges.contains(&(u, v)) && rng.gen_bool(0.3) {
                    edges.push((u, v));
                    edges.push((v, u));
                }
            }
        }
        for u in 0..k {
            if rng.gen_bool(0.4) {
                edges.push((u, k));
            }
        }
        let raw = RawInstance {
            owners,
            costs: unit_costs(players, edges.len()),
            edges,
            s: 0,
            t: k,
        };
        if let Ok(inst) = normalize(&raw) {
            debug_assert!(inst.is_symmetric());
            return inst;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_small() {
        let two = exhaustive_bipartite(2);
        // s(A) with b(B): s->t always needed or s->b->t...
        assert!(!two.is_empty());
        for inst in &two {
            assert!(inst.is_bipartite());
            assert_eq!(normalize(&inst.to_raw()).unwrap(), *inst);
        }
        let three = exhaustive_bipartite(3);
        assert!(three.len() > two.len());
    }

    #[test]
    fn symmetric_generator() {
        let mut rng = crate::rng::stream(4, 4);
        for _ in 0..50 {
            let inst = random_symmetric(&mut rng, 4, 3);
            assert!(inst.is_symmetric());
        }
    }
}
