//! Maximum average degree and `(a,b)`-sparseness, exactly.
//!
//! Everything reduces to `max over nonempty A of e(A) - (p/q)|A|`, which is a
//! maximum-closure problem: edges are items worth `q`, vertices cost `p`, and
//! an edge requires both endpoints.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{Graph, VertexSet};

/// Graphs up to this order use the subset scan under [`Method::Auto`].
pub const BRUTE_FORCE_MAX_N: usize = 12;

/// Exact rational in lowest terms with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Rational> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(Rational(Ratio::new(num, den)))
    }

    pub fn integer(x: i64) -> Rational {
        Rational(Ratio::from_integer(x))
    }

    pub fn num(self) -> i64 {
        *self.0.numer()
    }

    pub fn den(self) -> i64 {
        *self.0.denom()
    }

    pub fn is_positive(self) -> bool {
        self.num() > 0
    }

    /// Parses `p/q` or an integer.
    pub fn parse(s: &str) -> Result<Rational> {
        let bad = || Error::InvalidArgument(format!("not a rational: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        Rational::new(n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?)
    }
}

impl std::ops::Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl std::ops::Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den() == 1 {
            write!(f, "{}", self.num())
        } else {
            write!(f, "{}/{}", self.num(), self.den())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct RationalJson {
    num: i64,
    den: i64,
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalJson { num: self.num(), den: self.den() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = RationalJson::deserialize(d)?;
        let out = Rational::new(r.num, r.den).map_err(serde::de::Error::custom)?;
        if out.num() != r.num || out.den() != r.den {
            return Err(serde::de::Error::custom("rational not in lowest terms"));
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    /// Subset scan for `n <= 12`, min-cut otherwise.
    #[default]
    Auto,
    Flow,
    BruteForce,
}

/// `max over nonempty A of e(A) - (p/q)|A|`, with a maximising set.
pub fn max_excess(g: &Graph, p: i64, q: i64) -> Result<(Rational, VertexSet)> {
    max_excess_with(g, p, q, Method::Auto)
}

pub fn max_excess_with(g: &Graph, p: i64, q: i64, method: Method) -> Result<(Rational, VertexSet)> {
    if g.n() == 0 {
        return Err(Error::Precondition("max_excess needs a nonempty graph".into()));
    }
    if q <= 0 {
        return Err(Error::InvalidArgument(format!("denominator must be positive, got {q}")));
    }
    let brute = match method {
        Method::Auto => g.n() <= BRUTE_FORCE_MAX_N,
        Method::Flow => false,
        Method::BruteForce => true,
    };
    let (scaled, witness) = if brute { scaled_excess_brute(g, p, q)? } else { scaled_excess_flow(g, p, q) };
    Ok((Rational::new(scaled, q)?, witness))
}

/// `q e(A) - p |A|` maximised by scanning every subset; smallest mask wins ties.
fn scaled_excess_brute(g: &Graph, p: i64, q: i64) -> Result<(i64, VertexSet)> {
    let n = g.n();
    if n > 24 {
        return Err(Error::TooLarge(format!("subset scan supports n <= 24, got {n}")));
    }
    let mut edges = vec![0i64; 1 << n];
    let mut best = (i64::MIN, 0u64);
    for mask in 1u64..1 << n {
        let top = 63 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << top);
        let e = edges[rest as usize] + (g.adjacency_row(top) & rest).count_ones() as i64;
        edges[mask as usize] = e;
        let value = q * e - p * mask.count_ones() as i64;
        if value > best.0 {
            best = (value, mask);
        }
    }
    Ok((best.0, VertexSet(best.1)))
}

/// Max-closure value with optional forced vertex, and the minimal optimal set.
fn closure(g: &Graph, p: i64, q: i64, forced: Option<usize>) -> (i64, VertexSet) {
    let edges = g.edges();
    let n = g.n();
    let m = edges.len();
    let source = m + n;
    let sink = source + 1;
    let inf = q * m as i64 + p.abs() * n as i64 + 1;
    let mut net = FlowNetwork::new(n + m + 2);
    for (i, &(u, v)) in edges.iter().enumerate() {
        net.add_arc(source, i, q);
        net.add_arc(i, m + u, inf);
        net.add_arc(i, m + v, inf);
    }
    for v in 0..n {
        net.add_arc(m + v, sink, p);
    }
    if let Some(v) = forced {
        net.add_arc(source, m + v, inf);
    }
    let cut = net.max_flow(source, sink);
    let side = net.source_side(source);
    let set: VertexSet = (0..n).filter(|&v| side[m + v]).collect();
    (q * m as i64 - cut, set)
}

fn scaled_excess_flow(g: &Graph, p: i64, q: i64) -> (i64, VertexSet) {
    let n = g.n();
    if p <= 0 {
        // every vertex pays for itself, so the whole graph is optimal
        return (q * g.m() as i64 - p * n as i64, g.vertices());
    }
    let (value, set) = closure(g, p, q, None);
    if value > 0 {
        return (value, set);
    }
    // the empty set may be optimal; force each vertex in turn
    (0..n)
        .map(|v| closure(g, p, q, Some(v)))
        .fold((i64::MIN, VertexSet::EMPTY), |best, cur| if cur.0 > best.0 { cur } else { best })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityVerdict {
    pub sparse: bool,
    /// `max over nonempty A of e(A) - a|A|`.
    pub max_excess: Rational,
    /// A maximising set; when `sparse` is false it violates the bound.
    pub witness: VertexSet,
}

/// Whether every nonempty subgraph `H` has `|E(H)| <= a|V(H)| + b`
/// (strict: `<`). Induced subgraphs dominate, so subsets suffice.
pub fn is_ab_sparse(g: &Graph, a: Rational, b: Rational, strict: bool) -> Result<SparsityVerdict> {
    is_ab_sparse_with(g, a, b, strict, Method::Auto)
}

pub fn is_ab_sparse_with(g: &Graph, a: Rational, b: Rational, strict: bool, method: Method) -> Result<SparsityVerdict> {
    if !a.is_positive() {
        return Err(Error::Precondition(format!("a must be positive, got {a}")));
    }
    let (excess, witness) = max_excess_with(g, a.num(), a.den(), method)?;
    let sparse = if strict { excess < b } else { excess <= b };
    Ok(SparsityVerdict { sparse, max_excess: excess, witness })
}

/// `max over nonempty A of 2 e(A) / |A|`; edgeless graphs give 0.
///
/// Iterates on the density threshold: starting from the density of `V`, the
/// best set for the current threshold has strictly larger density until the
/// maximum is reached, so the loop visits finitely many candidates.
pub fn mad(g: &Graph) -> Result<(Rational, VertexSet)> {
    mad_with(g, Method::Auto)
}

pub fn mad_with(g: &Graph, method: Method) -> Result<(Rational, VertexSet)> {
    if g.n() == 0 {
        return Err(Error::Precondition("mad needs a nonempty graph".into()));
    }
    let mut witness = g.vertices();
    let mut density = Rational::new(g.m() as i64, g.n() as i64)?;
    loop {
        let (excess, set) = max_excess_with(g, density.num(), density.den(), method)?;
        if !excess.is_positive() {
            break;
        }
        witness = set;
        density = Rational::new(g.edges_within(set) as i64, set.len() as i64)?;
    }
    Ok((density * Rational::integer(2), witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn rational_basics() {
        assert_eq!(r(4, 6), r(2, 3));
        assert_eq!(r(3, -6).den(), 2);
        assert_eq!(Rational::parse("14/9").unwrap(), r(14, 9));
        assert_eq!(Rational::parse("5").unwrap(), Rational::integer(5));
        assert!(Rational::parse("1/0").is_err());
        assert_eq!(serde_json::to_string(&r(14, 5)).unwrap(), r#"{"num":14,"den":5}"#);
        assert!(serde_json::from_str::<Rational>(r#"{"num":2,"den":4}"#).is_err());
    }

    #[test]
    fn excess_examples() {
        let k7 = Graph::complete(7).unwrap();
        for method in [Method::Flow, Method::BruteForce] {
            let (x, w) = max_excess_with(&k7, 14, 9, method).unwrap();
            assert_eq!(x, r(91, 9));
            assert_eq!(w, k7.vertices());
        }
        let tree = Graph::from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        for method in [Method::Flow, Method::BruteForce] {
            assert_eq!(max_excess_with(&tree, 1, 1, method).unwrap().0, Rational::integer(-1));
        }
        let one = Graph::empty(1).unwrap();
        assert_eq!(max_excess_with(&one, 3, 7, Method::Flow).unwrap().0, r(-3, 7));
        assert_eq!(max_excess_with(&one, 3, 7, Method::BruteForce).unwrap().0, r(-3, 7));
    }

    #[test]
    fn sparseness_examples() {
        let a = r(14, 9);
        let b = r(5, 9);
        let k7 = Graph::complete(7).unwrap();
        let v = is_ab_sparse(&k7, a, b, false).unwrap();
        assert!(!v.sparse);
        assert_eq!(v.witness, k7.vertices());
        let c5 = Graph::cycle(5).unwrap();
        assert!(is_ab_sparse(&c5, a, b, false).unwrap().sparse);
        let k2 = Graph::complete(2).unwrap();
        assert!(is_ab_sparse(&k2, Rational::integer(1), Rational::integer(0), false).unwrap().sparse);
        assert!(is_ab_sparse(&k2, Rational::integer(1), Rational::integer(0), true).unwrap().sparse);
        assert!(is_ab_sparse(&k2, Rational::integer(0), Rational::integer(0), true).is_err());
    }

    #[test]
    fn mad_examples() {
        for method in [Method::Flow, Method::BruteForce] {
            for n in 3..9 {
                let (m, w) = mad_with(&Graph::cycle(n).unwrap(), method).unwrap();
                assert_eq!(m, Rational::integer(2));
                assert_eq!(w.len(), n);
            }
            assert_eq!(mad_with(&Graph::complete(7).unwrap(), method).unwrap().0, Rational::integer(6));
            assert_eq!(mad_with(&Graph::path(3).unwrap(), method).unwrap().0, r(4, 3));
            assert_eq!(mad_with(&Graph::empty(4).unwrap(), method).unwrap().0, Rational::integer(0));
        }
    }

    #[test]
    fn mad_finds_dense_part() {
        // K4 with a pendant path: K4 has density 3/2
        let g = Graph::from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5)]).unwrap();
        let (m, w) = mad_with(&g, Method::Flow).unwrap();
        assert_eq!(m, Rational::integer(3));
        assert_eq!(w.to_vec(), vec![0, 1, 2, 3]);
    }
}
