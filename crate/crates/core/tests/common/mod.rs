//! Brute-force oracles written against the plain definitions, plus random
//! instance generators shared by the integration tests.
#![allow(dead_code)]

use defcolor::{Capacity, CapacityMap, Color, Coloring, Graph, VertexSet};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_caps(n: usize, r: &mut impl Rng) -> CapacityMap {
    CapacityMap::per_vertex(
        (0..n)
            .map(|_| Capacity::new(r.gen_range(-1..=1), r.gen_range(-1..=3)).unwrap())
            .collect(),
    )
}

pub fn random_graph(n: usize, p: f64, r: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn random_subset(n: usize, r: &mut impl Rng) -> VertexSet {
    VertexSet::from_vertices((0..n).filter(|_| r.gen_bool(0.5)))
}

pub fn caps_of(c: &CapacityMap, v: usize) -> (i64, i64) {
    let cap = c.get(v);
    (cap.c1() as i64, cap.c2() as i64)
}

fn members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

fn edges_inside(g: &Graph, vs: &[usize]) -> i64 {
    let mut e = 0;
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            if g.has_edge(u, v) {
                e += 1;
            }
        }
    }
    e
}

/// Assignment `bits` (bit `v` set means color 2) respects every capacity.
pub fn assignment_ok(g: &Graph, c: &CapacityMap, bits: u64) -> bool {
    let n = g.n();
    (0..n).all(|v| {
        let second = bits >> v & 1 == 1;
        let same = (0..n).filter(|&u| g.has_edge(u, v) && (bits >> u & 1 == 1) == second).count() as i64;
        let (c1, c2) = caps_of(c, v);
        same <= if second { c2 } else { c1 }
    })
}

pub fn coloring_ok(g: &Graph, c: &CapacityMap, phi: &Coloring) -> bool {
    let bits = (0..g.n()).filter(|&v| phi.get(v) == Color::Two).fold(0u64, |b, v| b | 1 << v);
    phi.len() == g.n() && assignment_ok(g, c, bits)
}

pub fn brute_colorable(g: &Graph, c: &CapacityMap) -> bool {
    (0u64..1 << g.n()).any(|bits| assignment_ok(g, c, bits))
}

pub fn rho(g: &Graph, c: &CapacityMap, vs: &[usize]) -> i64 {
    let vertex: i64 = vs
        .iter()
        .map(|&v| {
            let (c1, c2) = caps_of(c, v);
            1 + 4 * c1 + 3 * c2
        })
        .sum();
    vertex - 9 * edges_inside(g, vs)
}

pub fn is_top(g: &Graph, c: &CapacityMap, v: usize) -> bool {
    g.degree(v) == 2 && caps_of(c, v) == (1, 3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    All,
    Proper,
    Nontrivial,
}

pub fn admissible(g: &Graph, c: &CapacityMap, mask: u64, family: Family) -> bool {
    let n = g.n();
    let full = (1u64 << n) - 1;
    let size = mask.count_ones();
    match family {
        Family::All => mask != 0,
        Family::Proper => mask != 0 && mask != full,
        Family::Nontrivial => {
            size >= 2
                && mask != full
                && !(0..n).any(|t| is_top(g, c, t) && mask == full & !(1 << t))
        }
    }
}

/// Minimum potential and the smallest minimising mask.
pub fn brute_min_potential(g: &Graph, c: &CapacityMap, family: Family) -> Option<(i64, u64)> {
    let n = g.n();
    let mut best: Option<(i64, u64)> = None;
    for mask in 1u64..1 << n {
        if admissible(g, c, mask, family) {
            let p = rho(g, c, &members(mask, n));
            if best.is_none_or(|(b, _)| p < b) {
                best = Some((p, mask));
            }
        }
    }
    best
}

/// `max over nonempty A of e(A) - (p/q)|A|`.
pub fn brute_max_excess(g: &Graph, p: i64, q: i64) -> Ratio<i64> {
    let n = g.n();
    (1u64..1 << n)
        .map(|mask| {
            let vs = members(mask, n);
            Ratio::new(q * edges_inside(g, &vs) - p * vs.len() as i64, q)
        })
        .max()
        .unwrap()
}

pub fn brute_mad(g: &Graph) -> Ratio<i64> {
    let n = g.n();
    (1u64..1 << n)
        .map(|mask| {
            let vs = members(mask, n);
            Ratio::new(2 * edges_inside(g, &vs), vs.len() as i64)
        })
        .max()
        .unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    heap(n, &mut perm, &mut out);
    out
}

fn heap(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(perm.clone());
        return;
    }
    for i in 0..k {
        heap(k - 1, perm, out);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        perm.swap(j, k - 1);
    }
}

/// Whether some bijection maps the edges of `a` onto those of `b`.
pub fn brute_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.m() != b.m() {
        return false;
    }
    let n = a.n();
    permutations(n)
        .into_iter()
        .any(|p| a.edges().iter().all(|&(u, v)| b.has_edge(p[u], p[v])))
}

/// Upper-triangle bit string minimised over all relabellings.
fn brute_code(g: &Graph, perms: &[Vec<usize>]) -> Vec<bool> {
    let n = g.n();
    perms
        .iter()
        .map(|p| {
            let mut inv = vec![0; n];
            for (i, &x) in p.iter().enumerate() {
                inv[x] = i;
            }
            let mut bits = Vec::new();
            for v in 1..n {
                for u in 0..v {
                    bits.push(g.has_edge(inv[u], inv[v]));
                }
            }
            bits
        })
        .min()
        .unwrap_or_default()
}

/// Isomorphism classes of all (or connected) graphs on `n` vertices, by
/// listing every labelled graph.
pub fn brute_class_count(n: usize, connected_only: bool) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::HashSet::new();
    for mask in 0u64..1 << pairs.len() {
        let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
        let g = Graph::from_edges(n, edges).unwrap();
        if connected_only && !g.is_connected() {
            continue;
        }
        seen.insert(brute_code(&g, &perms));
    }
    seen.len()
}

/// Charges in half units straight from the definitions: `2 rho(v) - 9 d(v)`,
/// then each top vertex hands 5 half units to every neighbour.
pub fn brute_charges(g: &Graph, c: &CapacityMap) -> (Vec<i64>, Vec<i64>) {
    let n = g.n();
    let before: Vec<i64> = (0..n).map(|v| 2 * rho(g, c, &[v]) - 9 * g.degree(v) as i64).collect();
    let mut after = before.clone();
    for t in (0..n).filter(|&t| is_top(g, c, t)) {
        for u in (0..n).filter(|&u| g.has_edge(t, u)) {
            after[t] -= 5;
            after[u] += 5;
        }
    }
    (before, after)
}
