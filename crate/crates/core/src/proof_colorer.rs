//! Coloring by contracting top vertices into quasi-edges.
//!
//! Every top vertex (degree 2, capacities `(1,3)`) is replaced by a
//! quasi-edge between its two neighbours. A score-maximising assignment of
//! the remaining vertices is then extended back to the tops: a top whose
//! neighbours agree takes the other color, and a top on a conflicting
//! quasi-edge copies the color of the edge's tail under a balanced
//! (Eulerian) orientation of the conflict multigraph. Each vertex therefore
//! gains exactly half its conflicting quasi-edges as same-colored
//! neighbours, which is what the score charges for.
//!
//! The extension is only guaranteed under strong structural hypotheses, so
//! its output is always re-verified; [`proof_guided_solve`] falls back to the
//! exact solver when anything fails.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{solve, verify_coloring, CapacityMap, Color, Coloring};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::potential::top_set;

/// Largest quasi-graph accepted by [`ScoreMode::Exact`].
pub const MAX_EXACT_VERTICES: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiEdge {
    /// Endpoints as quasi-graph indices, smaller first.
    pub ends: (usize, usize),
    /// The top vertex this edge stands for (original id).
    pub label: usize,
}

/// Multigraph on the normal vertices: real edges between normal vertices plus
/// one quasi-edge per top vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiGraph {
    /// Original ids of the quasi-graph's vertices, increasing.
    pub vertices: Vec<usize>,
    /// Real edges as index pairs `(a, b)`, `a < b`.
    pub real_edges: Vec<(usize, usize)>,
    /// Sorted by label.
    pub quasi_edges: Vec<QuasiEdge>,
    real_adj: Vec<Vec<usize>>,
    quasi_adj: Vec<Vec<usize>>,
}

impl QuasiGraph {
    /// Assembles a quasi-graph from parts. `vertices` holds original ids;
    /// edge endpoints are positions in `vertices`.
    pub fn new(vertices: Vec<usize>, real_edges: Vec<(usize, usize)>, quasi_edges: Vec<QuasiEdge>) -> Result<QuasiGraph> {
        let k = vertices.len();
        let mut real_adj = vec![Vec::new(); k];
        let mut quasi_adj = vec![Vec::new(); k];
        for &(a, b) in &real_edges {
            if a >= k || b >= k || a == b {
                return Err(Error::InvalidArgument(format!("bad real edge ({a},{b})")));
            }
            real_adj[a].push(b);
            real_adj[b].push(a);
        }
        for e in &quasi_edges {
            let (a, b) = e.ends;
            if a >= k || b >= k || a == b {
                return Err(Error::InvalidArgument(format!("bad quasi-edge ({a},{b})")));
            }
            quasi_adj[a].push(b);
            quasi_adj[b].push(a);
        }
        Ok(QuasiGraph { vertices, real_edges, quasi_edges, real_adj, quasi_adj })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Number of real edges at index `a`.
    pub fn real_degree(&self, a: usize) -> usize {
        self.real_adj[a].len()
    }

    /// Number of quasi-edges at index `a`, with multiplicity.
    pub fn quasi_degree(&self, a: usize) -> usize {
        self.quasi_adj[a].len()
    }

    #[inline]
    fn cap(&self, c: &CapacityMap, a: usize, col: Color) -> i64 {
        c.get(self.vertices[a]).get(col) as i64
    }

    /// `2 d*(a)`: twice the same-colored real neighbours plus the conflicting
    /// quasi-edges at `a`.
    pub fn doubled_defect_degree(&self, psi: &Coloring, a: usize) -> i64 {
        let col = psi.get(a);
        let same = self.real_adj[a].iter().filter(|&&b| psi.get(b) == col).count() as i64;
        let conflicts = self.quasi_adj[a].iter().filter(|&&b| psi.get(b) != col).count() as i64;
        2 * same + conflicts
    }

    /// `2 (c_{psi(a)}(a) - d*(a))`.
    pub fn doubled_slack(&self, c: &CapacityMap, psi: &Coloring, a: usize) -> i64 {
        2 * self.cap(c, a, psi.get(a)) - self.doubled_defect_degree(psi, a)
    }

    /// Change of `4 S` when `a` switches color.
    fn flip_gain(&self, c: &CapacityMap, psi: &Coloring, a: usize) -> i64 {
        let col = psi.get(a);
        let new = col.other();
        let mut gain = 4 * (self.cap(c, a, new) - self.cap(c, a, col));
        for &b in &self.real_adj[a] {
            // same-colored real edges cost 4 each in 4S
            gain += if psi.get(b) == col { 4 } else { -4 };
        }
        for &b in &self.quasi_adj[a] {
            // conflicting quasi-edges cost 2 each in 4S
            gain += if psi.get(b) == col { -2 } else { 2 };
        }
        gain
    }
}

/// Contracts every top vertex into a quasi-edge.
///
/// Fails when two top vertices are adjacent: the quasi-graph is undefined
/// there.
pub fn build_quasi_graph(g: &Graph, c: &CapacityMap) -> Result<QuasiGraph> {
    c.check_order(g)?;
    let tops = top_set(g, c);
    for t in tops.iter() {
        if !g.neighbors(t).intersection(tops).is_empty() {
            return Err(Error::Precondition(format!("top vertex {t} is adjacent to another top vertex")));
        }
    }
    let normal = g.vertices().difference(tops);
    let vertices = normal.to_vec();
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in vertices.iter().enumerate() {
        index[v] = i;
    }
    let real_edges = g
        .edges()
        .into_iter()
        .filter(|&(u, v)| normal.contains(u) && normal.contains(v))
        .map(|(u, v)| (index[u], index[v]))
        .collect();
    let quasi_edges = tops
        .iter()
        .map(|t| {
            let ends = g.neighbors(t).to_vec();
            QuasiEdge { ends: (index[ends[0]], index[ends[1]]), label: t }
        })
        .collect();
    QuasiGraph::new(vertices, real_edges, quasi_edges)
}

/// `S` in quarter units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Score {
    pub quarters: i64,
}

impl Score {
    pub fn value(self) -> f64 {
        self.quarters as f64 / 4.0
    }
}

/// `S(psi) = sum of c_{psi(v)}(v) - 1/2 sum of d*_psi(v)`.
///
/// `c` is the capacity map of the original graph; it must agree with the one
/// the quasi-graph was built from.
pub fn score(q: &QuasiGraph, c: &CapacityMap, psi: &Coloring) -> Result<Score> {
    if psi.len() != q.len() {
        return Err(Error::Coloring(format!(
            "assignment covers {} vertices, quasi-graph has {}",
            psi.len(),
            q.len()
        )));
    }
    let mut quarters = 0;
    for (a, &v) in q.vertices.iter().enumerate() {
        let cap = c.get(v).get(psi.get(a)) as i64;
        quarters += 4 * cap - q.doubled_defect_degree(psi, a);
    }
    Ok(Score { quarters })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreMode {
    /// Global maximum; lexicographically least maximiser (color 1 < color 2,
    /// vertex 0 most significant).
    Exact,
    /// Best single-flip local maximum over seeded random restarts.
    LocalSearch { seed: u64, restarts: u32 },
}

fn bits_to_coloring(bits: u32, k: usize) -> Coloring {
    Coloring::new(
        (0..k)
            .map(|a| if bits >> (k - 1 - a) & 1 == 1 { Color::Two } else { Color::One })
            .collect(),
    )
}

fn coloring_key(psi: &Coloring) -> Vec<Color> {
    psi.as_slice().to_vec()
}

pub fn maximize_score(q: &QuasiGraph, c: &CapacityMap, mode: ScoreMode) -> Result<(Coloring, Score)> {
    let k = q.len();
    match mode {
        ScoreMode::Exact => {
            if k > MAX_EXACT_VERTICES {
                return Err(Error::TooLarge(format!(
                    "exact score maximisation supports at most {MAX_EXACT_VERTICES} vertices, got {k}"
                )));
            }
            // Gray-code walk: consecutive assignments differ in one vertex
            let mut psi = Coloring::uniform(k, Color::One);
            let mut current = score(q, c, &psi)?.quarters;
            let mut best = (current, 0u32);
            let mut bits = 0u32;
            for step in 1u64..1 << k {
                let flip_bit = step.trailing_zeros() as usize;
                let a = k - 1 - flip_bit;
                current += q.flip_gain(c, &psi, a);
                psi.set(a, psi.get(a).other());
                bits ^= 1 << flip_bit;
                if current > best.0 || (current == best.0 && bits < best.1) {
                    best = (current, bits);
                }
            }
            Ok((bits_to_coloring(best.1, k), Score { quarters: best.0 }))
        }
        ScoreMode::LocalSearch { seed, restarts } => {
            let mut best: Option<(Coloring, i64)> = None;
            for r in 0..restarts.max(1) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
                let mut psi = Coloring::new(
                    (0..k).map(|_| if rng.gen::<bool>() { Color::Two } else { Color::One }).collect(),
                );
                let mut current = score(q, c, &psi)?.quarters;
                // steepest ascent, lowest index among equal gains
                loop {
                    let step = (0..k).map(|a| (q.flip_gain(c, &psi, a), a)).filter(|&(g, _)| g > 0).max_by_key(|&(g, a)| (g, std::cmp::Reverse(a)));
                    let Some((gain, a)) = step else { break };
                    psi.set(a, psi.get(a).other());
                    current += gain;
                }
                let better = match &best {
                    None => true,
                    Some((b, s)) => current > *s || (current == *s && coloring_key(&psi) < coloring_key(b)),
                };
                if better {
                    best = Some((psi, current));
                }
            }
            let (psi, quarters) = best.expect("at least one restart");
            Ok((psi, Score { quarters }))
        }
    }
}

/// How a successful extension was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionCase {
    /// No vertex over capacity.
    Balanced,
    /// One vertex half a unit over capacity, repaired along a path.
    RepairedPath { deficient: usize, partner: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    Colored { coloring: Coloring, case: ExtensionCase, orientation: Orientation },
    Fail(String),
}

/// Heads of the conflicting quasi-edges after orientation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Orientation {
    /// `(quasi-edge position, tail index, head index)`.
    pub arcs: Vec<(usize, usize, usize)>,
    /// Positions of the quasi-edges forming the repair path, if any.
    pub path: Vec<usize>,
}

impl Orientation {
    /// In- and out-degrees per quasi-graph index.
    pub fn degrees(&self, k: usize) -> (Vec<usize>, Vec<usize>) {
        let mut indeg = vec![0; k];
        let mut outdeg = vec![0; k];
        for &(_, tail, head) in &self.arcs {
            outdeg[tail] += 1;
            indeg[head] += 1;
        }
        (indeg, outdeg)
    }
}

/// Closed-trail orientation of a multigraph in which every vertex has even
/// degree. Returns each edge's `(tail, head)`. Neighbours are scanned in
/// order of (vertex, edge position).
fn eulerian_orientation(nodes: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut inc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes];
    for (e, &(a, b)) in edges.iter().enumerate() {
        inc[a].push((b, e));
        inc[b].push((a, e));
    }
    for list in &mut inc {
        list.sort_unstable();
    }
    let mut used = vec![false; edges.len()];
    let mut next = vec![0usize; nodes];
    let mut dir = vec![(usize::MAX, usize::MAX); edges.len()];
    for start in 0..nodes {
        let mut stack = vec![start];
        while let Some(&v) = stack.last() {
            while next[v] < inc[v].len() && used[inc[v][next[v]].1] {
                next[v] += 1;
            }
            match inc[v].get(next[v]) {
                Some(&(w, e)) => {
                    used[e] = true;
                    dir[e] = (v, w);
                    stack.push(w);
                }
                None => {
                    stack.pop();
                }
            }
        }
    }
    dir
}

/// Extends an assignment of the quasi-graph to a coloring of `g`, or reports
/// why it cannot. Any coloring returned has passed [`verify_coloring`].
pub fn extend_to_full_coloring(g: &Graph, c: &CapacityMap, q: &QuasiGraph, psi: &Coloring) -> Result<Extension> {
    c.check_order(g)?;
    let k = q.len();
    if psi.len() != k {
        return Err(Error::Coloring(format!("assignment covers {} vertices, quasi-graph has {k}", psi.len())));
    }
    let slack: Vec<i64> = (0..k).map(|a| q.doubled_slack(c, psi, a)).collect();
    let deficient: Vec<usize> = (0..k).filter(|&a| slack[a] < 0).collect();

    // conflict multigraph G'
    let conflicts: Vec<usize> = q
        .quasi_edges
        .iter()
        .enumerate()
        .filter(|(_, e)| psi.get(e.ends.0) != psi.get(e.ends.1))
        .map(|(i, _)| i)
        .collect();
    let mut conflict_adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
    for &i in &conflicts {
        let (a, b) = q.quasi_edges[i].ends;
        conflict_adj[a].push((b, i));
        conflict_adj[b].push((a, i));
    }
    for list in &mut conflict_adj {
        list.sort_unstable();
    }

    let mut orientation = Orientation::default();
    let mut on_path = vec![false; q.quasi_edges.len()];
    let case = match deficient.as_slice() {
        [] => ExtensionCase::Balanced,
        &[u] if slack[u] == -1 => {
            // BFS from u for the nearest odd-degree vertex with spare capacity
            let mut parent: Vec<Option<(usize, usize)>> = vec![None; k];
            let mut seen = vec![false; k];
            seen[u] = true;
            let mut queue = VecDeque::from([u]);
            let mut partner = None;
            let mut layer_end = u;
            let mut candidates = Vec::new();
            while let Some(x) = queue.pop_front() {
                if x != u && conflict_adj[x].len() % 2 == 1 && slack[x] >= 1 {
                    candidates.push(x);
                }
                for &(y, e) in &conflict_adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        parent[y] = Some((x, e));
                        queue.push_back(y);
                    }
                }
                if x == layer_end {
                    if !candidates.is_empty() {
                        partner = candidates.iter().copied().min();
                        break;
                    }
                    layer_end = queue.back().copied().unwrap_or(usize::MAX);
                }
            }
            let Some(v) = partner else {
                return Ok(Extension::Fail(format!(
                    "vertex {} is over capacity and no conflict path reaches a vertex with spare capacity",
                    q.vertices[u]
                )));
            };
            // walk back from v to u; the path is directed from v towards u
            let mut x = v;
            while let Some((prev, e)) = parent[x] {
                on_path[e] = true;
                orientation.path.push(e);
                orientation.arcs.push((e, x, prev));
                x = prev;
            }
            ExtensionCase::RepairedPath { deficient: q.vertices[u], partner: q.vertices[v] }
        }
        &[u] => {
            return Ok(Extension::Fail(format!(
                "vertex {} is {} over capacity",
                q.vertices[u],
                -slack[u] as f64 / 2.0
            )))
        }
        many => {
            return Ok(Extension::Fail(format!("{} vertices over capacity", many.len())));
        }
    };

    // G'' plus an apex joined to its odd vertices
    let rest: Vec<usize> = conflicts.iter().copied().filter(|&i| !on_path[i]).collect();
    let mut edges: Vec<(usize, usize)> = rest.iter().map(|&i| q.quasi_edges[i].ends).collect();
    let mut parity = vec![0usize; k];
    for &(a, b) in &edges {
        parity[a] ^= 1;
        parity[b] ^= 1;
    }
    let apex = k;
    edges.extend((0..k).filter(|&a| parity[a] == 1).map(|a| (a, apex)));
    let dirs = eulerian_orientation(k + 1, &edges);
    for (j, &i) in rest.iter().enumerate() {
        let (tail, head) = dirs[j];
        orientation.arcs.push((i, tail, head));
    }
    orientation.arcs.sort_unstable();

    let mut full = Coloring::uniform(g.n(), Color::Two);
    for (a, &v) in q.vertices.iter().enumerate() {
        full.set(v, psi.get(a));
    }
    let mut head_of = vec![usize::MAX; q.quasi_edges.len()];
    for &(i, _, head) in &orientation.arcs {
        head_of[i] = head;
    }
    for (i, e) in q.quasi_edges.iter().enumerate() {
        let (a, b) = e.ends;
        let color = if psi.get(a) == psi.get(b) {
            psi.get(a).other()
        } else {
            psi.get(head_of[i]).other()
        };
        full.set(e.label, color);
    }
    if !verify_coloring(g, c, &full)? {
        return Ok(Extension::Fail("extended coloring does not verify".into()));
    }
    Ok(Extension::Colored { coloring: full, case, orientation })
}

/// What the pipeline did.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "stage")]
pub enum PipelineTrace {
    Extracted { mode: ScoreMode, case: ExtensionCase, quasi_vertices: usize, quasi_edges: usize },
    Fallback { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofOutcome {
    /// `None` means not colorable.
    pub coloring: Option<Coloring>,
    pub trace: PipelineTrace,
}

impl ProofOutcome {
    pub fn used_fallback(&self) -> bool {
        matches!(self.trace, PipelineTrace::Fallback { .. })
    }
}

/// Score mode used by [`proof_guided_solve`]: exact up to 20 quasi-vertices,
/// local search beyond.
pub fn default_mode(k: usize) -> ScoreMode {
    if k <= 20 {
        ScoreMode::Exact
    } else {
        ScoreMode::LocalSearch { seed: 0, restarts: 16 }
    }
}

/// Quasi-graph, score maximisation and extension, falling back to the exact
/// solver on any failure. Agrees with [`solve`] on colorability.
pub fn proof_guided_solve(g: &Graph, c: &CapacityMap) -> Result<ProofOutcome> {
    c.check_order(g)?;
    let fallback = |reason: String| -> Result<ProofOutcome> {
        Ok(ProofOutcome { coloring: solve(g, c)?, trace: PipelineTrace::Fallback { reason } })
    };
    let q = match build_quasi_graph(g, c) {
        Ok(q) => q,
        Err(Error::Precondition(msg)) => return fallback(msg),
        Err(e) => return Err(e),
    };
    let mode = default_mode(q.len());
    let (psi, _) = maximize_score(&q, c, mode)?;
    match extend_to_full_coloring(g, c, &q, &psi)? {
        Extension::Colored { coloring, case, .. } => Ok(ProofOutcome {
            coloring: Some(coloring),
            trace: PipelineTrace::Extracted { mode, case, quasi_vertices: q.len(), quasi_edges: q.quasi_edges.len() },
        }),
        Extension::Fail(reason) => fallback(reason),
    }
}

/// Vertices of `g` that became quasi-edges.
pub fn contracted_tops(q: &QuasiGraph) -> VertexSet {
    q.quasi_edges.iter().map(|e| e.label).collect()
}
