use serde::{Deserialize, Serialize};

use super::{GameGraph, Owner};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentKind {
    Terminal,
    Transient,
    Cyclic,
}

/// Strongly connected components numbered in reverse topological order:
/// every condensation arc goes from a larger id to a smaller one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    pub component_of: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    pub kinds: Vec<ComponentKind>,
    /// Sorted, deduplicated successor components of each component.
    pub condensation: Vec<Vec<usize>>,
}

impl SccDecomposition {
    pub fn num_components(&self) -> usize {
        self.members.len()
    }

    pub fn kind_of_vertex(&self, v: usize) -> ComponentKind {
        self.kinds[self.component_of[v]]
    }

    /// Components that can be outcomes: terminal and cyclic ones.
    pub fn outcome_components(&self) -> Vec<usize> {
        (0..self.num_components())
            .filter(|&c| self.kinds[c] != ComponentKind::Transient)
            .collect()
    }
}

/// Tarjan's lowlink algorithm with an explicit stack; O(|V| + |E|).
pub fn scc_decompose(g: &GameGraph) -> SccDecomposition {
    const UNSEEN: usize = usize::MAX;
    let n = g.num_vertices();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut component_of = vec![UNSEEN; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0usize;
    // (vertex, position in its out-edge list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let out = g.out_edges(v);
            if *pos < out.len() {
                let w = g.edge(out[*pos]).1;
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = members.len();
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component_of[w] = id;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                members.push(comp);
            }
        }
    }

    let k = members.len();
    let mut condensation = vec![Vec::new(); k];
    let mut self_loop = vec![false; k];
    for &(a, b) in g.edges() {
        let (ca, cb) = (component_of[a], component_of[b]);
        if ca == cb {
            self_loop[ca] = true;
        } else {
            condensation[ca].push(cb);
        }
    }
    for succ in &mut condensation {
        succ.sort_unstable();
        succ.dedup();
    }
    let kinds = (0..k)
        .map(|c| {
            let v = members[c][0];
            if g.owner(v) == Owner::Terminal {
                ComponentKind::Terminal
            } else if members[c].len() == 1 && !self_loop[c] {
                ComponentKind::Transient
            } else {
                ComponentKind::Cyclic
            }
        })
        .collect();
    SccDecomposition {
        component_of,
        members,
        kinds,
        condensation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random_graph;

    fn graph(owners: &str, edges: &[(usize, usize)]) -> GameGraph {
        let owners = owners
            .chars()
            .map(|c| match c {
                'A' => Owner::ALICE,
                'B' => Owner::BOB,
                _ => Owner::Terminal,
            })
            .collect();
        GameGraph::new(owners, edges.to_vec(), 0).unwrap()
    }

    #[test]
    fn two_cycle_with_exit() {
        let g = graph("ABT", &[(0, 1), (1, 0), (0, 2)]);
        let d = scc_decompose(&g);
        assert_eq!(d.num_components(), 2);
        assert_eq!(d.component_of[0], d.component_of[1]);
        assert_eq!(d.kind_of_vertex(0), ComponentKind::Cyclic);
        assert_eq!(d.kind_of_vertex(2), ComponentKind::Terminal);
    }

    #[test]
    fn chain_is_transient() {
        let g = graph("ABT", &[(0, 1), (1, 2)]);
        let d = scc_decompose(&g);
        assert_eq!(d.num_components(), 3);
        assert_eq!(d.kind_of_vertex(0), ComponentKind::Transient);
        assert_eq!(d.kind_of_vertex(1), ComponentKind::Transient);
        assert_eq!(d.kind_of_vertex(2), ComponentKind::Terminal);
        let outcomes: Vec<usize> = d.outcome_components();
        assert_eq!(outcomes, vec![d.component_of[2]]);
    }

    #[test]
    fn self_loop_is_cyclic() {
        let g = graph("AT", &[(0, 0), (0, 1)]);
        assert_eq!(scc_decompose(&g).kind_of_vertex(0), ComponentKind::Cyclic);
    }

    fn reach(g: &GameGraph) -> Vec<Vec<bool>> {
        (0..g.num_vertices()).map(|v| g.reachable_from(v)).collect()
    }

    #[test]
    fn matches_mutual_reachability() {
        let mut rng = crate::rng::stream(7, 1);
        for round in 0..40 {
            let n = if round < 10 { 50 } else { 2 + round % 12 };
            let g = random_graph(&mut rng, n, 3, 0.1);
            let d = scc_decompose(&g);
            let r = reach(&g);
            for u in 0..n {
                for w in 0..n {
                    let same = r[u][w] && r[w][u];
                    assert_eq!(same, d.component_of[u] == d.component_of[w]);
                }
            }
            for (c, succ) in d.condensation.iter().enumerate() {
                assert!(succ.iter().all(|&s| s < c), "not reverse topological");
            }
        }
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let n = 200_000;
        let mut owners = vec![Owner::ALICE; n];
        owners[n - 1] = Owner::Terminal;
        let edges: Vec<_> = (0..n - 1).map(|v| (v, v + 1)).collect();
        let g = GameGraph::new(owners, edges, 0).unwrap();
        assert_eq!(scc_decompose(&g).num_components(), n);
    }
}
