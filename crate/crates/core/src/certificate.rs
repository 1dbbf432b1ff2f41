//! Self-checking JSON certificates.
//!
//! A certificate carries the instance it talks about (graph6 plus capacity
//! spec), a claim, and a SHA-256 hash of the instance. [`Certificate::verify`]
//! recomputes the claim from those fields alone.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coloring::{solve, verify_coloring, CapacityMap, CapacitySpec, Color, Coloring, CriticalityEvidence};
use crate::discharging::{discharge, forbidden_configurations, initial_charges, top_vertices, Finding};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::graph6::{parse_graph6, write_graph6};
use crate::potential::{min_potential_scan, min_potential, reduce, rho_set, Potential, ReductionCase, SubsetFilter, MAX_SCAN_N};
use crate::proof_colorer::PipelineTrace;
use crate::sparsity::{mad_with, Method, Rational};
use crate::survey::{run_survey, SurveyReport};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest order for which an unsat claim is rechecked by plain enumeration
/// of all colorings rather than by the backtracking solver.
pub const BRUTE_RECHECK_MAX_N: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    /// graph6 string.
    pub graph: String,
    pub caps: CapacitySpec,
}

impl Instance {
    pub fn new(g: &Graph, c: &CapacityMap) -> Result<Instance> {
        c.check_order(g)?;
        Ok(Instance { graph: write_graph6(g)?, caps: CapacitySpec::from_map(c) })
    }

    pub fn load(&self) -> Result<(Graph, CapacityMap)> {
        let g = parse_graph6(&self.graph)?;
        let c = self.caps.resolve(g.n())?;
        Ok((g, c))
    }

    fn hash(&self) -> Result<String> {
        let caps = serde_json::to_string(&self.caps).map_err(|e| Error::Certificate(e.to_string()))?;
        Ok(sha256_hex(format!("{}\n{}", self.graph, caps).as_bytes()))
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Charges as plain numbers; every entry is a multiple of one half.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChargeAudit {
    pub tops: VertexSet,
    pub initial: Vec<f64>,
    pub charges: Vec<f64>,
    pub total: f64,
    /// `rho(V)`.
    pub potential: Potential,
    pub conserved: bool,
    pub findings: Vec<Finding>,
}

impl ChargeAudit {
    pub fn compute(g: &Graph, c: &CapacityMap) -> Result<ChargeAudit> {
        let init = initial_charges(g, c)?;
        let after = discharge(g, c)?;
        let potential = rho_set(g, c, g.vertices());
        let half = |x: &i64| *x as f64 / 2.0;
        Ok(ChargeAudit {
            tops: top_vertices(g, c)?,
            initial: init.doubled.iter().map(half).collect(),
            charges: after.doubled.iter().map(half).collect(),
            total: after.total_doubled() as f64 / 2.0,
            potential,
            conserved: init.total_doubled() == 2 * potential && after.total_doubled() == 2 * potential,
            findings: forbidden_configurations(g, c)?,
        })
    }
}

/// Outcome of collapsing a colored set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionClaim {
    pub set: VertexSet,
    /// Coloring of `G[set]`, indexed by the members of `set` in increasing order.
    pub phi: Coloring,
    pub case: ReductionCase,
    pub reduced: Instance,
    pub origin: Vec<Option<usize>>,
    /// A coloring of the reduced instance, if it has one.
    pub reduced_coloring: Option<Coloring>,
    /// `phi` glued to `reduced_coloring`: a coloring of the input graph.
    pub glued: Option<Coloring>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum Claim {
    Coloring {
        coloring: Coloring,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trace: Option<PipelineTrace>,
    },
    Unsat {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trace: Option<PipelineTrace>,
    },
    Critical {
        critical: bool,
        evidence: CriticalityEvidence,
    },
    LowPotentialSet {
        filter: SubsetFilter,
        value: Potential,
        witness: VertexSet,
    },
    DensityWitness {
        mad: Rational,
        witness: VertexSet,
    },
    ChargeAudit(ChargeAudit),
    Reduction(ReductionClaim),
    SurveySummary(SurveyReport),
}

impl Claim {
    pub fn kind(&self) -> &'static str {
        match self {
            Claim::Coloring { .. } => "coloring",
            Claim::Unsat { .. } => "unsat",
            Claim::Critical { .. } => "critical",
            Claim::LowPotentialSet { .. } => "low-potential-set",
            Claim::DensityWitness { .. } => "density-witness",
            Claim::ChargeAudit(_) => "charge-audit",
            Claim::Reduction(_) => "reduction",
            Claim::SurveySummary(_) => "survey-summary",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub tool_version: String,
    pub input_hash: String,
    /// Absent only for survey summaries, which have no single input graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<Instance>,
    #[serde(flatten)]
    pub claim: Claim,
}

fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Certificate(msg.into()))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        fail(msg())
    }
}

impl Certificate {
    pub fn new(g: &Graph, c: &CapacityMap, claim: Claim) -> Result<Certificate> {
        let input = Instance::new(g, c)?;
        Ok(Certificate { tool_version: TOOL_VERSION.into(), input_hash: input.hash()?, input: Some(input), claim })
    }

    pub fn for_survey(report: SurveyReport) -> Result<Certificate> {
        let cfg = serde_json::to_string(&report.config).map_err(|e| Error::Certificate(e.to_string()))?;
        Ok(Certificate {
            tool_version: TOOL_VERSION.into(),
            input_hash: sha256_hex(cfg.as_bytes()),
            input: None,
            claim: Claim::SurveySummary(report),
        })
    }

    /// Solves and wraps the answer as a coloring or unsat certificate.
    pub fn solve(g: &Graph, c: &CapacityMap) -> Result<Certificate> {
        let claim = match solve(g, c)? {
            Some(coloring) => Claim::Coloring { coloring, trace: None },
            None => Claim::Unsat { trace: None },
        };
        Certificate::new(g, c, claim)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Certificate(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        serde_json::from_str(text).map_err(|e| Error::Certificate(e.to_string()))
    }

    /// Recomputes the claim. `Ok(())` means every part checked out.
    pub fn verify(&self) -> Result<()> {
        if let Claim::SurveySummary(report) = &self.claim {
            let cfg = serde_json::to_string(&report.config).map_err(|e| Error::Certificate(e.to_string()))?;
            ensure(self.input_hash == sha256_hex(cfg.as_bytes()), || "input hash mismatch".into())?;
            let again = run_survey(&report.config)?;
            return ensure(&again == report, || "survey summary does not match a fresh run".into());
        }
        let Some(input) = &self.input else {
            return fail("certificate has no input instance");
        };
        ensure(self.input_hash == input.hash()?, || "input hash mismatch".into())?;
        let (g, c) = input.load()?;
        match &self.claim {
            Claim::Coloring { coloring, .. } => {
                ensure(coloring.len() == g.n() && verify_coloring(&g, &c, coloring)?, || {
                    "coloring does not satisfy the capacities".into()
                })
            }
            Claim::Unsat { .. } => ensure(!colorable_recheck(&g, &c)?, || "instance is colorable".into()),
            Claim::Critical { critical, evidence } => verify_criticality(&g, &c, *critical, evidence),
            Claim::LowPotentialSet { filter, value, witness } => {
                ensure(filter.accepts(&g, &c, *witness), || format!("witness {witness} is not admissible"))?;
                let actual = rho_set(&g, &c, *witness);
                ensure(actual == *value, || format!("witness has potential {actual}, claimed {value}"))?;
                let best = if g.n() <= MAX_SCAN_N {
                    min_potential_scan(&g, &c, *filter)?.0
                } else {
                    min_potential(&g, &c, *filter)?.0
                };
                ensure(best == *value, || format!("minimum potential is {best}, claimed {value}"))
            }
            Claim::DensityWitness { mad, witness } => {
                ensure(!witness.is_empty() && witness.is_subset(g.vertices()), || "empty or foreign witness".into())?;
                let d = Rational::new(2 * g.edges_within(*witness) as i64, witness.len() as i64)?;
                ensure(d == *mad, || format!("witness has average degree {d}, claimed {mad}"))?;
                let (best, _) = mad_with(&g, Method::Flow)?;
                ensure(best == *mad, || format!("maximum average degree is {best}, claimed {mad}"))
            }
            Claim::ChargeAudit(audit) => {
                let again = ChargeAudit::compute(&g, &c)?;
                ensure(&again == audit, || "charge audit does not match a recomputation".into())
            }
            Claim::Reduction(r) => verify_reduction(&g, &c, r),
            Claim::SurveySummary(_) => unreachable!(),
        }
    }
}

/// Colorability by listing all `2^n` assignments when that is cheap, and by
/// the solver otherwise.
fn colorable_recheck(g: &Graph, c: &CapacityMap) -> Result<bool> {
    let n = g.n();
    if n > BRUTE_RECHECK_MAX_N {
        return Ok(solve(g, c)?.is_some());
    }
    for bits in 0u32..1 << n {
        let phi = Coloring::new((0..n).map(|v| if bits >> v & 1 == 1 { Color::Two } else { Color::One }).collect());
        if verify_coloring(g, c, &phi)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn verify_criticality(g: &Graph, c: &CapacityMap, critical: bool, evidence: &CriticalityEvidence) -> Result<()> {
    match evidence {
        CriticalityEvidence::Colorable { coloring } => {
            ensure(!critical, || "colorable graphs are not critical".into())?;
            ensure(coloring.len() == g.n() && verify_coloring(g, c, coloring)?, || "invalid coloring".into())
        }
        CriticalityEvidence::UncolorableEdgeDeletion { edge: (u, v) } => {
            ensure(!critical, || "evidence contradicts the claim".into())?;
            ensure(g.has_edge(*u, *v), || format!("({u},{v}) is not an edge"))?;
            ensure(!colorable_recheck(g, c)?, || "graph is colorable".into())?;
            ensure(!colorable_recheck(&g.without_edge(*u, *v)?, c)?, || format!("g - ({u},{v}) is colorable"))
        }
        CriticalityEvidence::UncolorableVertexDeletion { vertex } => {
            ensure(!critical, || "evidence contradicts the claim".into())?;
            ensure(*vertex < g.n(), || format!("vertex {vertex} out of range"))?;
            ensure(!colorable_recheck(g, c)?, || "graph is colorable".into())?;
            let (h, keep) = g.induced(g.vertices().difference(VertexSet::singleton(*vertex)));
            ensure(!colorable_recheck(&h, &c.restrict(&keep))?, || format!("g - {vertex} is colorable"))
        }
        CriticalityEvidence::Critical { edge_witnesses, vertex_witnesses } => {
            ensure(critical, || "evidence contradicts the claim".into())?;
            ensure(!colorable_recheck(g, c)?, || "graph is colorable".into())?;
            let covered: Vec<(usize, usize)> = edge_witnesses.iter().map(|(e, _)| *e).collect();
            ensure(covered == g.edges(), || "edge witnesses do not cover every edge once".into())?;
            for ((u, v), phi) in edge_witnesses {
                let h = g.without_edge(*u, *v)?;
                ensure(phi.len() == g.n() && verify_coloring(&h, c, phi)?, || format!("bad coloring of g - ({u},{v})"))?;
            }
            let isolated: Vec<usize> = vertex_witnesses.iter().map(|(v, _)| *v).collect();
            ensure(isolated == g.isolated_vertices().to_vec(), || "vertex witnesses do not cover the isolated vertices".into())?;
            for (v, phi) in vertex_witnesses {
                let (h, keep) = g.induced(g.vertices().difference(VertexSet::singleton(*v)));
                ensure(phi.len() == h.n() && verify_coloring(&h, &c.restrict(&keep), phi)?, || {
                    format!("bad coloring of g - {v}")
                })?;
            }
            Ok(())
        }
    }
}

fn verify_reduction(g: &Graph, c: &CapacityMap, r: &ReductionClaim) -> Result<()> {
    let again = reduce(g, c, r.set, &r.phi)?;
    ensure(again.case == r.case, || "reduction case differs".into())?;
    ensure(again.origin == r.origin, || "vertex correspondence differs".into())?;
    ensure(Instance::new(&again.graph, &again.caps)? == r.reduced, || "reduced instance differs".into())?;
    match (&r.reduced_coloring, &r.glued) {
        (Some(psi), Some(glued)) => {
            ensure(psi.len() == again.graph.n() && verify_coloring(&again.graph, &again.caps, psi)?, || {
                "reduced coloring is invalid".into()
            })?;
            ensure(again.glue(&r.phi, psi) == *glued, || "glued coloring differs".into())?;
            ensure(verify_coloring(g, c, glued)?, || "glued coloring is invalid on the input".into())
        }
        (None, None) => ensure(!colorable_recheck(&again.graph, &again.caps)?, || "reduced instance is colorable".into()),
        _ => fail("reduced and glued colorings must be given together"),
    }
}

/// Collapses `set` under `phi` and records the outcome, coloring the reduced
/// instance with the solver when possible.
pub fn reduction_claim(g: &Graph, c: &CapacityMap, set: VertexSet, phi: &Coloring) -> Result<ReductionClaim> {
    let red = reduce(g, c, set, phi)?;
    let reduced_coloring = solve(&red.graph, &red.caps)?;
    let glued = reduced_coloring.as_ref().map(|psi| red.glue(phi, psi));
    Ok(ReductionClaim {
        set,
        phi: phi.clone(),
        case: red.case,
        reduced: Instance::new(&red.graph, &red.caps)?,
        origin: red.origin.clone(),
        reduced_coloring,
        glued,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_critical;
    use crate::sparsity::mad;
    use crate::survey::{SurveyCheck, SurveyConfig};

    fn round_trip(cert: &Certificate) -> Certificate {
        let back = Certificate::from_json(&cert.to_json().unwrap()).unwrap();
        assert_eq!(&back, cert);
        back
    }

    #[test]
    fn solve_certificates() {
        let k6 = Graph::complete(6).unwrap();
        let cert = Certificate::solve(&k6, &CapacityMap::one_three(6)).unwrap();
        assert_eq!(cert.claim.kind(), "coloring");
        round_trip(&cert).verify().unwrap();

        let k7 = Graph::complete(7).unwrap();
        let cert = Certificate::solve(&k7, &CapacityMap::one_three(7)).unwrap();
        assert_eq!(cert.claim.kind(), "unsat");
        let json = cert.to_json().unwrap();
        assert!(json.contains("\"kind\": \"unsat\""));
        round_trip(&cert).verify().unwrap();
    }

    #[test]
    fn tampering_is_caught() {
        let k6 = Graph::complete(6).unwrap();
        let mut cert = Certificate::solve(&k6, &CapacityMap::one_three(6)).unwrap();
        cert.claim = Claim::Coloring { coloring: Coloring::uniform(6, Color::Two), trace: None };
        assert!(cert.verify().is_err());

        let mut cert = Certificate::solve(&k6, &CapacityMap::one_three(6)).unwrap();
        cert.claim = Claim::Unsat { trace: None };
        assert!(cert.verify().is_err());

        let mut cert = Certificate::solve(&k6, &CapacityMap::one_three(6)).unwrap();
        cert.input_hash = "00".into();
        assert!(cert.verify().is_err());
    }

    #[test]
    fn critical_certificates() {
        let one = Graph::empty(1).unwrap();
        let c = CapacityMap::from_pairs([(-1, -1)]).unwrap();
        let crit = is_critical(&one, &c).unwrap();
        let cert = Certificate::new(&one, &c, Claim::Critical { critical: crit.critical, evidence: crit.evidence }).unwrap();
        round_trip(&cert).verify().unwrap();

        let k7 = Graph::complete(7).unwrap();
        let c7 = CapacityMap::one_three(7);
        let crit = is_critical(&k7, &c7).unwrap();
        let cert = Certificate::new(&k7, &c7, Claim::Critical { critical: crit.critical, evidence: crit.evidence.clone() }).unwrap();
        cert.verify().unwrap();
        let forged = Certificate::new(&k7, &c7, Claim::Critical { critical: !crit.critical, evidence: crit.evidence }).unwrap();
        assert!(forged.verify().is_err());
    }

    #[test]
    fn potential_and_density() {
        let k7 = Graph::complete(7).unwrap();
        let c = CapacityMap::one_three(7);
        let (value, witness) = min_potential(&k7, &c, SubsetFilter::AllNonempty).unwrap();
        assert_eq!(value, -91);
        let cert = Certificate::new(&k7, &c, Claim::LowPotentialSet { filter: SubsetFilter::AllNonempty, value, witness }).unwrap();
        round_trip(&cert).verify().unwrap();
        let bad = Certificate::new(&k7, &c, Claim::LowPotentialSet { filter: SubsetFilter::AllNonempty, value: -91, witness: VertexSet::singleton(0) }).unwrap();
        assert!(bad.verify().is_err());

        let c5 = Graph::cycle(5).unwrap();
        let (m, w) = mad(&c5).unwrap();
        let cert = Certificate::new(&c5, &CapacityMap::one_three(5), Claim::DensityWitness { mad: m, witness: w }).unwrap();
        assert!(cert.to_json().unwrap().contains("\"num\": 2"));
        round_trip(&cert).verify().unwrap();
    }

    #[test]
    fn audit_certificate() {
        let k7 = Graph::complete(7).unwrap();
        let c = CapacityMap::one_three(7);
        let audit = ChargeAudit::compute(&k7, &c).unwrap();
        assert!(audit.conserved);
        assert!(audit.charges.iter().all(|&x| x == -13.0));
        let cert = Certificate::new(&k7, &c, Claim::ChargeAudit(audit)).unwrap();
        round_trip(&cert).verify().unwrap();
    }

    #[test]
    fn reduction_certificate() {
        let p4 = Graph::path(4).unwrap();
        let c = CapacityMap::one_three(4);
        let phi = Coloring::from_digits(&[1, 2]).unwrap();
        let claim = reduction_claim(&p4, &c, VertexSet::from_vertices([0, 1]), &phi).unwrap();
        assert!(claim.glued.is_some());
        let cert = Certificate::new(&p4, &c, Claim::Reduction(claim)).unwrap();
        round_trip(&cert).verify().unwrap();
    }

    #[test]
    fn survey_certificate() {
        let report = run_survey(&SurveyConfig::new(4, SurveyCheck::Th0critical)).unwrap();
        let cert = Certificate::for_survey(report).unwrap();
        assert!(cert.input.is_none());
        round_trip(&cert).verify().unwrap();
    }
}
