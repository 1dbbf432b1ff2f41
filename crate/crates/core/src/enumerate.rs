//! Canonical forms by exhaustive permutation minimisation, and isomorph-free
//! enumeration of small graphs built on top of them.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest order accepted by [`canonical_form`] (the code must fit in a `u128`).
pub const MAX_CANONICAL_N: usize = 16;
/// Largest order accepted by [`enumerate_graphs`].
pub const MAX_ENUMERATE_N: usize = 8;

/// Upper-triangle adjacency bits in graph6 order, first bit most significant.
/// Comparing codes numerically compares the bit strings lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    pub n: usize,
    pub bits: u128,
}

impl CanonicalCode {
    pub fn to_graph(self) -> Graph {
        let n = self.n;
        let total = n * n.saturating_sub(1) / 2;
        let mut adj = vec![0u64; n];
        let mut t = 0;
        for j in 1..n {
            for i in 0..j {
                if self.bits >> (total - 1 - t) & 1 == 1 {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
                t += 1;
            }
        }
        Graph::from_adjacency(adj).expect("canonical code decodes to a simple graph")
    }
}

struct Search<'g> {
    g: &'g Graph,
    n: usize,
    perm: Vec<usize>,
    // best[k] is the k-bit column for position k of the best labelling seen;
    // u32::MAX marks "not yet fixed".
    best: Vec<u32>,
    best_perm: Vec<usize>,
}

impl Search<'_> {
    fn column(&self, k: usize, v: usize) -> u32 {
        let row = self.g.adjacency_row(v);
        let mut col = 0u32;
        for &u in &self.perm[..k] {
            col = col << 1 | (row >> u & 1) as u32;
        }
        col
    }

    fn descend(&mut self, k: usize, used: u64) {
        if k == self.n {
            self.best_perm.clone_from(&self.perm);
            return;
        }
        for v in 0..self.n {
            if used >> v & 1 == 1 {
                continue;
            }
            let col = self.column(k, v);
            if col > self.best[k] {
                continue;
            }
            if col < self.best[k] {
                self.best[k] = col;
                for b in &mut self.best[k + 1..] {
                    *b = u32::MAX;
                }
            }
            self.perm[k] = v;
            self.descend(k + 1, used | 1 << v);
        }
    }
}

/// Lexicographically least adjacency code over all `n!` relabellings, with a
/// relabelling that attains it (`labelling[k]` is the original vertex placed
/// at position `k`).
///
/// The search walks permutations position by position and abandons a branch
/// as soon as its prefix exceeds the best prefix seen, so the minimum is exact
/// but symmetric graphs still cost up to `n!` leaves.
pub fn canonical_labelling(g: &Graph) -> Result<(CanonicalCode, Vec<usize>)> {
    let n = g.n();
    if n > MAX_CANONICAL_N {
        return Err(Error::TooLarge(format!(
            "canonical form supports n <= {MAX_CANONICAL_N}, got {n}"
        )));
    }
    let mut s = Search {
        g,
        n,
        perm: vec![0; n],
        best: vec![u32::MAX; n],
        best_perm: Vec::new(),
    };
    s.descend(0, 0);
    let mut bits = 0u128;
    for (k, &col) in s.best.iter().enumerate().skip(1) {
        bits = bits << k | col as u128;
    }
    if n == 0 {
        s.best_perm.clear();
    }
    Ok((CanonicalCode { n, bits }, s.best_perm))
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalCode> {
    canonical_labelling(g).map(|(code, _)| code)
}

/// The canonical representative of `g`'s isomorphism class.
pub fn canonical_graph(g: &Graph) -> Result<Graph> {
    Ok(canonical_form(g)?.to_graph())
}

/// One representative per isomorphism class of graphs on `n` vertices, in
/// increasing canonical-code order.
///
/// Graphs on `n` vertices are obtained from those on `n - 1` by attaching a
/// new vertex to every possible neighbourhood and deduplicating canonical
/// codes; every graph arises this way by deleting its last vertex.
pub fn enumerate_graphs(n: usize, connected_only: bool) -> Result<Vec<Graph>> {
    Ok(enumerate_codes(n, connected_only)?.into_iter().map(CanonicalCode::to_graph).collect())
}

pub fn enumerate_codes(n: usize, connected_only: bool) -> Result<Vec<CanonicalCode>> {
    if !(1..=MAX_ENUMERATE_N).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "enumeration supports 1 <= n <= {MAX_ENUMERATE_N}, got {n}"
        )));
    }
    let mut level = vec![CanonicalCode { n: 1, bits: 0 }];
    for k in 2..=n {
        let parents: Vec<Graph> = level.iter().map(|c| c.to_graph()).collect();
        let codes: HashSet<CanonicalCode> = parents
            .par_iter()
            .flat_map_iter(|p| {
                (0u64..1 << (k - 1)).map(move |nbhd| {
                    let mut adj: Vec<u64> = (0..k - 1)
                        .map(|v| p.adjacency_row(v) | (nbhd >> v & 1) << (k - 1))
                        .collect();
                    adj.push(nbhd);
                    let g = Graph::from_adjacency(adj).expect("extension is simple");
                    canonical_form(&g).expect("k <= 8")
                })
            })
            .collect();
        level = codes.into_iter().collect();
        level.sort_unstable();
    }
    if connected_only {
        level.retain(|c| c.to_graph().is_connected());
    }
    Ok(level)
}

/// G(n, p) sample, deterministic in `seed`. Pairs are visited in the order
/// `(0,1), (0,2), ..., (n-2,n-1)`, one uniform draw per pair.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("edge probability {p} outside [0, 1]")));
    }
    Graph::empty(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj = vec![0u64; n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
    }
    Graph::from_adjacency(adj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_graphs(1, false).unwrap().len(), 1);
        assert_eq!(enumerate_graphs(3, false).unwrap().len(), 4);
        assert_eq!(enumerate_graphs(4, false).unwrap().len(), 11);
        assert_eq!(enumerate_graphs(4, true).unwrap().len(), 6);
    }

    #[test]
    fn out_of_range() {
        assert!(enumerate_graphs(0, false).is_err());
        assert!(enumerate_graphs(9, false).is_err());
        assert!(canonical_form(&Graph::empty(17).unwrap()).is_err());
    }

    #[test]
    fn labelling_reproduces_code() {
        let g = Graph::from_edges(5, [(0, 3), (3, 4), (1, 4), (2, 4)]).unwrap();
        let (code, lab) = canonical_labelling(&g).unwrap();
        let mut pos = vec![0; 5];
        for (k, &v) in lab.iter().enumerate() {
            pos[v] = k;
        }
        assert_eq!(g.permuted(&pos).unwrap(), code.to_graph());
    }

    #[test]
    fn minimal_code_prefers_zeros_first() {
        // a single edge on three vertices is relabelled onto (1,2)
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(canonical_graph(&g).unwrap().edges(), vec![(1, 2)]);
    }

    #[test]
    fn random_graph_extremes() {
        let e = random_graph(5, 0.0, 9).unwrap();
        assert_eq!(e.m(), 0);
        let k = random_graph(5, 1.0, 9).unwrap();
        assert_eq!(k, Graph::complete(5).unwrap());
        assert_eq!(random_graph(6, 0.5, 42).unwrap(), random_graph(6, 0.5, 42).unwrap());
        assert!(random_graph(3, 1.5, 0).is_err());
    }
}
