//! Vertex and set potentials, their exact minimisation, and the
//! colored-subset reduction.
//!
//! `rho(v) = 1 + 4 c1(v) + 3 c2(v)` and `rho(A) = sum of rho(v) over A minus
//! 9 |E(G[A])|`. Low potential marks sets that behave like obstructions to
//! coloring.

use serde::{Deserialize, Serialize};

use crate::coloring::{verify_coloring, Capacity, CapacityMap, Color, Coloring};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub type Potential = i64;

/// Charge subtracted per edge inside a set.
pub const EDGE_WEIGHT: Potential = 9;
/// Potential of a top vertex (a `(1,3)`-vertex).
pub const TOP_POTENTIAL: Potential = 14;
/// Largest order accepted by the plain subset scan.
pub const MAX_SCAN_N: usize = 24;

#[inline]
pub fn rho_capacity(cap: Capacity) -> Potential {
    1 + 4 * cap.c1() as Potential + 3 * cap.c2() as Potential
}

#[inline]
pub fn rho_vertex(c: &CapacityMap, v: usize) -> Potential {
    rho_capacity(c.get(v))
}

pub fn rho_set(g: &Graph, c: &CapacityMap, a: VertexSet) -> Potential {
    let vertex_sum: Potential = a.iter().map(|v| rho_vertex(c, v)).sum();
    vertex_sum - EDGE_WEIGHT * g.edges_within(a) as Potential
}

/// Degree 2 and potential 14.
pub fn is_top(g: &Graph, c: &CapacityMap, v: usize) -> bool {
    g.degree(v) == 2 && rho_vertex(c, v) == TOP_POTENTIAL
}

pub fn top_set(g: &Graph, c: &CapacityMap) -> VertexSet {
    (0..g.n()).filter(|&v| is_top(g, c, v)).collect()
}

/// Which subsets `min_potential` ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetFilter {
    /// Every nonempty subset, `V(G)` included.
    AllNonempty,
    /// Nonempty subsets other than `V(G)`.
    ProperNonempty,
    /// At least two vertices, not `V(G)`, and not `V(G)` minus one top vertex.
    Nontrivial,
}

impl SubsetFilter {
    pub fn parse(s: &str) -> Result<SubsetFilter> {
        match s {
            "all" => Ok(SubsetFilter::AllNonempty),
            "proper" => Ok(SubsetFilter::ProperNonempty),
            "nontrivial" => Ok(SubsetFilter::Nontrivial),
            other => Err(Error::InvalidArgument(format!(
                "unknown filter {other:?} (expected all, proper or nontrivial)"
            ))),
        }
    }

    pub fn accepts(self, g: &Graph, c: &CapacityMap, a: VertexSet) -> bool {
        a.is_subset(g.vertices()) && FilterCheck::new(g, c, self).accepts(a.0)
    }
}

struct FilterCheck {
    full: u64,
    excluded: Vec<u64>,
    kind: SubsetFilter,
}

impl FilterCheck {
    fn new(g: &Graph, c: &CapacityMap, kind: SubsetFilter) -> FilterCheck {
        let full = g.vertices().0;
        let excluded = match kind {
            SubsetFilter::Nontrivial => top_set(g, c).iter().map(|t| full & !(1u64 << t)).collect(),
            _ => Vec::new(),
        };
        FilterCheck { full, excluded, kind }
    }

    #[inline]
    fn accepts(&self, mask: u64) -> bool {
        match self.kind {
            SubsetFilter::AllNonempty => mask != 0,
            SubsetFilter::ProperNonempty => mask != 0 && mask != self.full,
            SubsetFilter::Nontrivial => {
                mask.count_ones() >= 2 && mask != self.full && !self.excluded.contains(&mask)
            }
        }
    }
}

fn check_inputs(g: &Graph, c: &CapacityMap) -> Result<()> {
    c.check_order(g)?;
    if g.n() == 0 {
        return Err(Error::Precondition("potential minimisation needs a nonempty graph".into()));
    }
    Ok(())
}

fn empty_space(kind: SubsetFilter) -> Error {
    Error::EmptySearchSpace(format!("no subset passes the {kind:?} filter"))
}

/// Minimum potential over the filtered subsets, with the numerically smallest
/// minimising bitmask as witness.
///
/// Depth-first over vertices in id order. A branch with current set `A` and
/// undecided pool `R` is cut when
/// `rho(A) + sum over v in R of min(0, rho(v) - 9 deg_{A+R}(v))`
/// exceeds the best value found; every completion is bounded below by that
/// quantity since each added edge is charged to at least one of its ends.
pub fn min_potential(g: &Graph, c: &CapacityMap, filter: SubsetFilter) -> Result<(Potential, VertexSet)> {
    check_inputs(g, c)?;
    let n = g.n();
    let rho: Vec<Potential> = (0..n).map(|v| rho_vertex(c, v)).collect();
    let mut search = Pruned {
        g,
        rho: &rho,
        filter: FilterCheck::new(g, c, filter),
        best: None,
    };
    search.descend(0, 0, 0);
    search.best.map(|(p, m)| (p, VertexSet(m))).ok_or_else(|| empty_space(filter))
}

struct Pruned<'a> {
    g: &'a Graph,
    rho: &'a [Potential],
    filter: FilterCheck,
    best: Option<(Potential, u64)>,
}

impl Pruned<'_> {
    fn descend(&mut self, k: usize, mask: u64, value: Potential) {
        let n = self.g.n();
        if k == n {
            if self.filter.accepts(mask) {
                match self.best {
                    Some(b) if b <= (value, mask) => {}
                    _ => self.best = Some((value, mask)),
                }
            }
            return;
        }
        if let Some((best, _)) = self.best {
            let pool = !((1u64 << k) - 1) & self.filter.full;
            let reach = mask | pool;
            let slack: Potential = VertexSet(pool)
                .iter()
                .map(|v| (self.rho[v] - EDGE_WEIGHT * self.g.degree_in(v, VertexSet(reach)) as Potential).min(0))
                .sum();
            if value + slack > best {
                return;
            }
        }
        // exclude first: smaller masks are reached earlier among ties
        self.descend(k + 1, mask, value);
        let gain = self.rho[k] - EDGE_WEIGHT * (self.g.adjacency_row(k) & mask).count_ones() as Potential;
        self.descend(k + 1, mask | 1 << k, value + gain);
    }
}

/// Plain scan over all `2^n` subsets; same contract as [`min_potential`].
pub fn min_potential_scan(g: &Graph, c: &CapacityMap, filter: SubsetFilter) -> Result<(Potential, VertexSet)> {
    check_inputs(g, c)?;
    let n = g.n();
    if n > MAX_SCAN_N {
        return Err(Error::TooLarge(format!("subset scan supports n <= {MAX_SCAN_N}, got {n}")));
    }
    let check = FilterCheck::new(g, c, filter);
    let rho: Vec<Potential> = (0..n).map(|v| rho_vertex(c, v)).collect();
    // value[mask] built from value[mask without its top bit]
    let mut value = vec![0 as Potential; 1 << n];
    let mut best: Option<(Potential, u64)> = None;
    for mask in 1u64..1 << n {
        let top = 63 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << top);
        let v = value[rest as usize] + rho[top]
            - EDGE_WEIGHT * (g.adjacency_row(top) & rest).count_ones() as Potential;
        value[mask as usize] = v;
        if check.accepts(mask) && best.is_none_or(|(b, _)| v < b) {
            best = Some((v, mask));
        }
    }
    best.map(|(p, m)| (p, VertexSet(m))).ok_or_else(|| empty_space(filter))
}

/// `rho(A) + rho(B) >= rho(A u B) + rho(A n B)`.
pub fn check_submodularity(g: &Graph, c: &CapacityMap, a: VertexSet, b: VertexSet) -> bool {
    rho_set(g, c, a) + rho_set(g, c, b) >= rho_set(g, c, a.union(b)) + rho_set(g, c, a.intersection(b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionCase {
    /// No outside vertex sees color 1: a single `y2` with capacities `(-1,0)`.
    OnlySecond = 1,
    /// No outside vertex sees color 2: a single `y1` with capacities `(0,-1)`.
    OnlyFirst = 2,
    /// Both: adjacent `y1 (0,3)` and `y2 (-1,0)`.
    Both = 3,
}

impl ReductionCase {
    pub fn number(self) -> u8 {
        self as u8
    }
}

/// `G` with a colored subset `S` collapsed into one or two gadget vertices.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub graph: Graph,
    pub caps: CapacityMap,
    /// The gadget vertices, in the new numbering.
    pub added: VertexSet,
    pub y1: Option<usize>,
    pub y2: Option<usize>,
    pub case: ReductionCase,
    /// `origin[new]` is the original id of a kept vertex, `None` for gadgets.
    pub origin: Vec<Option<usize>>,
    /// Outside vertices with a color-1 (resp. color-2) neighbour in `S`.
    pub n1: VertexSet,
    pub n2: VertexSet,
    s: VertexSet,
}

impl ReductionResult {
    pub fn collapsed(&self) -> VertexSet {
        self.s
    }

    /// Union of the coloring of `G[S]` (indexed like `Graph::induced`) and
    /// `psi` restricted to the kept vertices, as a coloring of the original
    /// graph.
    pub fn glue(&self, phi: &Coloring, psi: &Coloring) -> Coloring {
        let n = self.s.len() + self.origin.iter().flatten().count();
        let mut out = Coloring::uniform(n, Color::Two);
        for (i, v) in self.s.iter().enumerate() {
            out.set(v, phi.get(i));
        }
        for (new, old) in self.origin.iter().enumerate() {
            if let Some(old) = *old {
                out.set(old, psi.get(new));
            }
        }
        out
    }
}

/// Deletes `s` and replaces it by the gadget determined by which colors
/// `phi` presents to the rest of the graph.
///
/// `phi` colors `G[s]`, indexed by the members of `s` in increasing order.
/// Kept vertices are renumbered in increasing order, followed by `y1` and
/// then `y2` when present.
pub fn reduce(g: &Graph, c: &CapacityMap, s: VertexSet, phi: &Coloring) -> Result<ReductionResult> {
    c.check_order(g)?;
    let full = g.vertices();
    if s.is_empty() || s == full || !s.is_subset(full) {
        return Err(Error::Precondition("S must be a proper nonempty subset of V(G)".into()));
    }
    let (gs, keep_s) = g.induced(s);
    if phi.len() != keep_s.len() || !verify_coloring(&gs, &c.restrict(&keep_s), phi)? {
        return Err(Error::Precondition("phi is not a valid coloring of G[S]".into()));
    }
    let outside = full.difference(s);
    let mut n1 = VertexSet::EMPTY;
    let mut n2 = VertexSet::EMPTY;
    for (i, v) in keep_s.iter().enumerate() {
        let nb = g.neighbors(*v).intersection(outside);
        match phi.get(i) {
            Color::One => n1 = n1.union(nb),
            Color::Two => n2 = n2.union(nb),
        }
    }
    let case = match (n1.is_empty(), n2.is_empty()) {
        (true, true) => {
            return Err(Error::Precondition(
                "S has no neighbours outside it (the graph must be connected)".into(),
            ))
        }
        (true, false) => ReductionCase::OnlySecond,
        (false, true) => ReductionCase::OnlyFirst,
        (false, false) => ReductionCase::Both,
    };

    let kept = outside.to_vec();
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in kept.iter().enumerate() {
        index[v] = i;
    }
    let mut origin: Vec<Option<usize>> = kept.iter().map(|&v| Some(v)).collect();
    let mut caps: Vec<Capacity> = kept.iter().map(|&v| c.get(v)).collect();
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(u, v)| outside.contains(u) && outside.contains(v))
        .map(|(u, v)| (index[u], index[v]))
        .collect();

    let mut add = |cap: Capacity, wire: VertexSet, origin: &mut Vec<Option<usize>>| {
        let id = origin.len();
        origin.push(None);
        caps.push(cap);
        edges.extend(wire.iter().map(|v| (index[v], id)));
        id
    };
    let y1 = match case {
        ReductionCase::OnlyFirst => Some(add(Capacity::new(0, -1)?, n1, &mut origin)),
        ReductionCase::Both => Some(add(Capacity::new(0, 3)?, n1, &mut origin)),
        ReductionCase::OnlySecond => None,
    };
    let y2 = match case {
        ReductionCase::OnlyFirst => None,
        _ => Some(add(Capacity::new(-1, 0)?, n2, &mut origin)),
    };
    if let (Some(a), Some(b)) = (y1, y2) {
        edges.push((a, b));
    }
    let graph = Graph::from_edges(origin.len(), edges)?;
    let added = y1.into_iter().chain(y2).collect();
    Ok(ReductionResult {
        graph,
        caps: CapacityMap::per_vertex(caps),
        added,
        y1,
        y2,
        case,
        origin,
        n1,
        n2,
        s,
    })
}
