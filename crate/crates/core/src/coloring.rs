//! Capacity maps, colorings, and the exact colorability solver.
//!
//! A coloring assigns each vertex color 1 or 2. Vertex `v` with color `i`
//! tolerates at most `c_i(v)` neighbours of its own color; `c_i(v) = -1`
//! forbids color `i` outright.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub const C1_RANGE: std::ops::RangeInclusive<i8> = -1..=1;
pub const C2_RANGE: std::ops::RangeInclusive<i8> = -1..=3;

/// The pair `(c1, c2)` attached to one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i8; 2]", into = "[i8; 2]")]
pub struct Capacity {
    c1: i8,
    c2: i8,
}

impl Capacity {
    pub const ONE_THREE: Capacity = Capacity { c1: 1, c2: 3 };

    pub fn new(c1: i8, c2: i8) -> Result<Capacity> {
        if !C1_RANGE.contains(&c1) || !C2_RANGE.contains(&c2) {
            return Err(Error::Capacity(format!(
                "({c1},{c2}) outside -1 <= c1 <= 1, -1 <= c2 <= 3"
            )));
        }
        Ok(Capacity { c1, c2 })
    }

    #[inline]
    pub fn c1(self) -> i8 {
        self.c1
    }

    #[inline]
    pub fn c2(self) -> i8 {
        self.c2
    }

    /// Capacity for color `i` (1 or 2).
    #[inline]
    pub fn get(self, color: Color) -> i8 {
        match color {
            Color::One => self.c1,
            Color::Two => self.c2,
        }
    }
}

impl TryFrom<[i8; 2]> for Capacity {
    type Error = Error;

    fn try_from([c1, c2]: [i8; 2]) -> Result<Capacity> {
        Capacity::new(c1, c2)
    }
}

impl From<Capacity> for [i8; 2] {
    fn from(c: Capacity) -> [i8; 2] {
        [c.c1, c.c2]
    }
}

/// Per-vertex capacities for a graph of known order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CapacityMap(Vec<Capacity>);

impl CapacityMap {
    pub fn uniform(n: usize, cap: Capacity) -> CapacityMap {
        CapacityMap(vec![cap; n])
    }

    /// The `(1,3)` map on `n` vertices.
    pub fn one_three(n: usize) -> CapacityMap {
        CapacityMap::uniform(n, Capacity::ONE_THREE)
    }

    pub fn per_vertex(caps: Vec<Capacity>) -> CapacityMap {
        CapacityMap(caps)
    }

    pub fn from_pairs<I: IntoIterator<Item = (i8, i8)>>(pairs: I) -> Result<CapacityMap> {
        pairs
            .into_iter()
            .map(|(a, b)| Capacity::new(a, b))
            .collect::<Result<Vec<_>>>()
            .map(CapacityMap)
    }

    #[inline]
    pub fn get(&self, v: usize) -> Capacity {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, cap: Capacity) {
        self.0[v] = cap;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Capacity] {
        &self.0
    }

    /// Restriction to the listed original vertices, in order.
    pub fn restrict(&self, keep: &[usize]) -> CapacityMap {
        CapacityMap(keep.iter().map(|&v| self.0[v]).collect())
    }

    pub fn check_order(&self, g: &Graph) -> Result<()> {
        if self.0.len() != g.n() {
            return Err(Error::Capacity(format!(
                "map has {} entries but the graph has {} vertices",
                self.0.len(),
                g.n()
            )));
        }
        Ok(())
    }
}

/// JSON form of a capacity map: `{"uniform": [1,3]}` or
/// `{"per_vertex": [[c1,c2], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CapacitySpec {
    Uniform(Capacity),
    PerVertex(Vec<Capacity>),
}

impl CapacitySpec {
    pub fn resolve(&self, n: usize) -> Result<CapacityMap> {
        match self {
            CapacitySpec::Uniform(c) => Ok(CapacityMap::uniform(n, *c)),
            CapacitySpec::PerVertex(cs) if cs.len() == n => Ok(CapacityMap(cs.clone())),
            CapacitySpec::PerVertex(cs) => Err(Error::Capacity(format!(
                "per_vertex has {} entries but the graph has {n} vertices",
                cs.len()
            ))),
        }
    }

    /// Accepts the JSON forms or the shorthand `uniform:J,K`.
    pub fn parse(text: &str) -> Result<CapacitySpec> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("uniform:") {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            let [a, b] = parts.as_slice() else {
                return Err(Error::Capacity(format!("expected uniform:J,K, got {text:?}")));
            };
            let parse = |s: &str| {
                s.parse::<i8>().map_err(|_| Error::Capacity(format!("not an integer: {s:?}")))
            };
            return Ok(CapacitySpec::Uniform(Capacity::new(parse(a)?, parse(b)?)?));
        }
        serde_json::from_str(text).map_err(|e| Error::Capacity(e.to_string()))
    }

    /// Most compact spec that resolves to `map`.
    pub fn from_map(map: &CapacityMap) -> CapacitySpec {
        match map.0.first() {
            Some(&first) if map.0.iter().all(|&c| c == first) => CapacitySpec::Uniform(first),
            _ => CapacitySpec::PerVertex(map.0.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Color {
    One,
    Two,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::One => Color::Two,
            Color::Two => Color::One,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Color::One => 0,
            Color::Two => 1,
        }
    }
}

impl TryFrom<u8> for Color {
    type Error = Error;

    fn try_from(x: u8) -> Result<Color> {
        match x {
            1 => Ok(Color::One),
            2 => Ok(Color::Two),
            _ => Err(Error::Coloring(format!("color must be 1 or 2, got {x}"))),
        }
    }
}

impl From<Color> for u8 {
    fn from(c: Color) -> u8 {
        match c {
            Color::One => 1,
            Color::Two => 2,
        }
    }
}

/// Total map from vertices to colors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring(Vec<Color>);

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Coloring {
        Coloring(colors)
    }

    pub fn uniform(n: usize, color: Color) -> Coloring {
        Coloring(vec![color; n])
    }

    /// Colors given as 1/2 integers.
    pub fn from_digits(digits: &[u8]) -> Result<Coloring> {
        digits.iter().map(|&d| Color::try_from(d)).collect::<Result<Vec<_>>>().map(Coloring)
    }

    #[inline]
    pub fn get(&self, v: usize) -> Color {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, c: Color) {
        self.0[v] = c;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.0
    }

    /// Vertices with the given color.
    pub fn class(&self, color: Color) -> VertexSet {
        self.0.iter().enumerate().filter(|&(_, &c)| c == color).map(|(v, _)| v).collect()
    }
}

/// Number of neighbours of `v` sharing its color.
pub fn same_color_degree(g: &Graph, phi: &Coloring, v: usize) -> usize {
    g.degree_in(v, phi.class(phi.get(v)))
}

/// Checks every vertex against its capacity for its own color.
///
/// Errors only when `phi` or `c` do not cover exactly the vertices of `g`.
pub fn verify_coloring(g: &Graph, c: &CapacityMap, phi: &Coloring) -> Result<bool> {
    c.check_order(g)?;
    if phi.len() != g.n() {
        return Err(Error::Coloring(format!(
            "coloring covers {} vertices, graph has {}",
            phi.len(),
            g.n()
        )));
    }
    let classes = [phi.class(Color::One), phi.class(Color::Two)];
    Ok((0..g.n()).all(|v| {
        let col = phi.get(v);
        let cap = c.get(v).get(col);
        cap >= 0 && g.degree_in(v, classes[col.index()]) <= cap as usize
    }))
}

struct Backtracker<'a> {
    g: &'a Graph,
    caps: [Vec<i8>; 2],
    order: Vec<usize>,
    class: [u64; 2],
}

impl Backtracker<'_> {
    #[inline]
    fn load(&self, v: usize, i: usize) -> i8 {
        (self.g.adjacency_row(v) & self.class[i]).count_ones() as i8
    }

    /// Whether uncolored `w` could take color `i` right now.
    fn admissible(&self, w: usize, i: usize) -> bool {
        let cap = self.caps[i][w];
        if cap < 0 {
            return false;
        }
        let same = self.g.adjacency_row(w) & self.class[i];
        if same.count_ones() as i8 > cap {
            return false;
        }
        VertexSet(same).iter().all(|u| self.load(u, i) < self.caps[i][u])
    }

    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        // color 2 first
        for i in [1usize, 0] {
            if !self.admissible(v, i) {
                continue;
            }
            self.class[i] |= 1 << v;
            if self.forward_ok(depth + 1) && self.run(depth + 1) {
                return true;
            }
            self.class[i] &= !(1u64 << v);
        }
        false
    }

    /// Every still-uncolored vertex keeps at least one admissible color.
    fn forward_ok(&self, from: usize) -> bool {
        self.order[from..].iter().all(|&w| self.admissible(w, 0) || self.admissible(w, 1))
    }
}

/// Exact colorability. `None` means no valid coloring exists.
///
/// Backtracks over vertices in descending-degree order (ties by lower id),
/// trying color 2 before color 1, and prunes whenever an uncolored vertex has
/// no admissible color left. The result is deterministic.
pub fn solve(g: &Graph, c: &CapacityMap) -> Result<Option<Coloring>> {
    c.check_order(g)?;
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut bt = Backtracker {
        g,
        caps: [
            c.as_slice().iter().map(|x| x.c1()).collect(),
            c.as_slice().iter().map(|x| x.c2()).collect(),
        ],
        order,
        class: [0, 0],
    };
    if !bt.forward_ok(0) || !bt.run(0) {
        return Ok(None);
    }
    let colors = (0..n)
        .map(|v| if bt.class[0] >> v & 1 == 1 { Color::One } else { Color::Two })
        .collect();
    Ok(Some(Coloring(colors)))
}

/// [`solve`] with the uniform `(1,3)` map.
pub fn solve_13(g: &Graph) -> Option<Coloring> {
    solve(g, &CapacityMap::one_three(g.n())).expect("uniform map matches graph order")
}

/// Why a graph is or is not critical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum CriticalityEvidence {
    /// The graph itself is colorable.
    Colorable { coloring: Coloring },
    /// Not colorable, but neither is the named proper subgraph.
    UncolorableEdgeDeletion { edge: (usize, usize) },
    UncolorableVertexDeletion { vertex: usize },
    /// Not colorable, and every maximal proper subgraph is.
    Critical {
        edge_witnesses: Vec<((usize, usize), Coloring)>,
        /// Colorings of `g - v` for isolated `v`, indexed by the remaining
        /// vertices in increasing order.
        vertex_witnesses: Vec<(usize, Coloring)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Criticality {
    pub critical: bool,
    pub evidence: CriticalityEvidence,
}

/// Criticality test.
///
/// A coloring restricted to a subgraph stays valid, so it suffices to check
/// `g - e` for every edge and `g - v` for every isolated vertex: any other
/// proper subgraph lies inside one of those.
pub fn is_critical(g: &Graph, c: &CapacityMap) -> Result<Criticality> {
    if let Some(coloring) = solve(g, c)? {
        return Ok(Criticality { critical: false, evidence: CriticalityEvidence::Colorable { coloring } });
    }
    let mut edge_witnesses = Vec::with_capacity(g.m());
    for (u, v) in g.edges() {
        match solve(&g.without_edge(u, v)?, c)? {
            Some(w) => edge_witnesses.push(((u, v), w)),
            None => {
                return Ok(Criticality {
                    critical: false,
                    evidence: CriticalityEvidence::UncolorableEdgeDeletion { edge: (u, v) },
                })
            }
        }
    }
    let mut vertex_witnesses = Vec::new();
    for v in g.isolated_vertices().iter() {
        let rest = g.vertices().difference(VertexSet::singleton(v));
        let (h, keep) = g.induced(rest);
        match solve(&h, &c.restrict(&keep))? {
            Some(w) => vertex_witnesses.push((v, w)),
            None => {
                return Ok(Criticality {
                    critical: false,
                    evidence: CriticalityEvidence::UncolorableVertexDeletion { vertex: v },
                })
            }
        }
    }
    Ok(Criticality {
        critical: true,
        evidence: CriticalityEvidence::Critical { edge_witnesses, vertex_witnesses },
    })
}
