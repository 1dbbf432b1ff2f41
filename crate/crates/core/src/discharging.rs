//! Top/normal classification, charges, the discharging rule, and a scanner
//! for configurations that cannot occur in a minimal counterexample.
//!
//! Charges live on a half-integer grid, so they are stored doubled.

use serde::{Deserialize, Serialize};

use crate::coloring::{Capacity, CapacityMap};
use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::potential::{rho_vertex, top_set, Potential};

/// Doubled amount a top vertex sends to each neighbour (2.5 per neighbour).
pub const TOP_GIFT_DOUBLED: i64 = 5;

/// Per-vertex charges in half units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeMap {
    pub doubled: Vec<i64>,
}

impl ChargeMap {
    pub fn doubled(&self, v: usize) -> i64 {
        self.doubled[v]
    }

    pub fn value(&self, v: usize) -> f64 {
        self.doubled[v] as f64 / 2.0
    }

    pub fn total_doubled(&self) -> i64 {
        self.doubled.iter().sum()
    }
}

pub fn top_vertices(g: &Graph, c: &CapacityMap) -> Result<VertexSet> {
    c.check_order(g)?;
    Ok(top_set(g, c))
}

/// `h(v) = rho(v) - 4.5 d(v)`.
pub fn initial_charges(g: &Graph, c: &CapacityMap) -> Result<ChargeMap> {
    c.check_order(g)?;
    let doubled = (0..g.n()).map(|v| 2 * rho_vertex(c, v) - 9 * g.degree(v) as i64).collect();
    Ok(ChargeMap { doubled })
}

/// Every top vertex sends 2.5 to each neighbour, applied literally (tops
/// adjacent to tops both send and receive).
pub fn discharge(g: &Graph, c: &CapacityMap) -> Result<ChargeMap> {
    let mut ch = initial_charges(g, c)?;
    for t in top_set(g, c).iter() {
        for u in g.neighbors(t).iter() {
            ch.doubled[t] -= TOP_GIFT_DOUBLED;
            ch.doubled[u] += TOP_GIFT_DOUBLED;
        }
    }
    Ok(ch)
}

/// Closed form for a normal vertex, doubled:
/// `2 (1 + 4 c1 + 3 c2) - 9 d1 - 4 d2` with `d1`/`d2` counting normal/top
/// neighbours.
pub fn normal_charge_closed_form(g: &Graph, c: &CapacityMap, v: usize) -> i64 {
    let tops = top_set(g, c);
    let d2 = g.degree_in(v, tops) as i64;
    let d1 = g.degree(v) as i64 - d2;
    2 * rho_vertex(c, v) - 9 * d1 - 4 * d2
}

/// Forbidden-configuration rule labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// A `(-1,0)`-vertex.
    #[serde(rename = "a")]
    MinusOneZero,
    /// A `(0,-1)`-vertex.
    #[serde(rename = "b")]
    ZeroMinusOne,
    /// Non-positive vertex potential.
    #[serde(rename = "c")]
    NonPositivePotential,
    /// `(1,3)`-vertex, exactly one normal neighbour, at most 4 top neighbours.
    #[serde(rename = "d")]
    OneThreeSingleNormal,
    /// `(1,2)`-vertex, at least one normal neighbour, at most 3 top neighbours.
    #[serde(rename = "e")]
    OneTwoWithNormal,
    /// `(1,3)`-vertex of degree at most 6 whose neighbours are all tops.
    #[serde(rename = "f")]
    OneThreeAllTop,
    /// `(1,2)`-vertex of degree at most 5 whose neighbours are all tops.
    #[serde(rename = "g")]
    OneTwoAllTop,
    /// Positive charge after discharging.
    #[serde(rename = "h")]
    PositiveCharge,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::MinusOneZero,
        Rule::ZeroMinusOne,
        Rule::NonPositivePotential,
        Rule::OneThreeSingleNormal,
        Rule::OneTwoWithNormal,
        Rule::OneThreeAllTop,
        Rule::OneTwoAllTop,
        Rule::PositiveCharge,
    ];

    pub fn letter(self) -> char {
        (b'a' + self as u8) as char
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub vertex: usize,
    pub rule: Rule,
    pub detail: String,
}

/// Local data the rules look at.
#[derive(Clone, Copy, Debug)]
pub struct VertexProfile {
    pub cap: Capacity,
    pub potential: Potential,
    pub degree: usize,
    pub normal_neighbors: usize,
    pub top_neighbors: usize,
    pub charge_doubled: i64,
}

impl VertexProfile {
    pub fn of(g: &Graph, c: &CapacityMap, tops: VertexSet, charges: &ChargeMap, v: usize) -> VertexProfile {
        let top_neighbors = g.degree_in(v, tops);
        VertexProfile {
            cap: c.get(v),
            potential: rho_vertex(c, v),
            degree: g.degree(v),
            normal_neighbors: g.degree(v) - top_neighbors,
            top_neighbors,
            charge_doubled: charges.doubled(v),
        }
    }

    pub fn violates(&self, rule: Rule) -> bool {
        let (c1, c2) = (self.cap.c1(), self.cap.c2());
        let all_top = self.normal_neighbors == 0;
        match rule {
            Rule::MinusOneZero => (c1, c2) == (-1, 0),
            Rule::ZeroMinusOne => (c1, c2) == (0, -1),
            Rule::NonPositivePotential => self.potential <= 0,
            Rule::OneThreeSingleNormal => (c1, c2) == (1, 3) && self.normal_neighbors == 1 && self.top_neighbors <= 4,
            Rule::OneTwoWithNormal => (c1, c2) == (1, 2) && self.normal_neighbors >= 1 && self.top_neighbors <= 3,
            Rule::OneThreeAllTop => (c1, c2) == (1, 3) && self.degree <= 6 && all_top,
            Rule::OneTwoAllTop => (c1, c2) == (1, 2) && self.degree <= 5 && all_top,
            Rule::PositiveCharge => self.charge_doubled > 0,
        }
    }

    fn describe(&self, rule: Rule) -> String {
        let (c1, c2) = (self.cap.c1(), self.cap.c2());
        match rule {
            Rule::MinusOneZero | Rule::ZeroMinusOne => format!("capacities ({c1},{c2})"),
            Rule::NonPositivePotential => format!("potential {}", self.potential),
            Rule::PositiveCharge => format!("charge {} after discharging", self.charge_doubled as f64 / 2.0),
            _ => format!(
                "({c1},{c2})-vertex of degree {} with {} normal and {} top neighbours",
                self.degree, self.normal_neighbors, self.top_neighbors
            ),
        }
    }
}

/// Reports every vertex matching one of the rules, ordered by vertex then
/// rule. An empty report only means the necessary conditions hold.
pub fn forbidden_configurations(g: &Graph, c: &CapacityMap) -> Result<Vec<Finding>> {
    let charges = discharge(g, c)?;
    let tops = top_set(g, c);
    let mut out = Vec::new();
    for v in 0..g.n() {
        let p = VertexProfile::of(g, c, tops, &charges, v);
        for rule in Rule::ALL {
            if p.violates(rule) {
                out.push(Finding { vertex: v, rule, detail: p.describe(rule) });
            }
        }
    }
    Ok(out)
}
