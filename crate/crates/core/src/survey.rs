//! Exhaustive checks over all connected graphs up to eight vertices.
//!
//! Graphs are processed in parallel and the per-graph outcomes are merged in
//! canonical-code order, so a report never depends on the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{is_critical, solve_13, verify_coloring, CapacityMap, Coloring};
use crate::enumerate::{enumerate_codes, MAX_ENUMERATE_N};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::graph6::write_graph6;
use crate::potential::{min_potential, Potential, SubsetFilter};
use crate::proof_colorer::proof_guided_solve;
use crate::sparsity::{max_excess, Rational};

/// Upper bound on `9 e(A) - 14 |A|` for the sparse side of the density check.
pub const SPARSE_EXCESS_BOUND: i64 = 5;
/// Claimed bound on `14 n - 9 m` and on the potential of critical graphs.
pub const CRITICAL_BOUND: i64 = -6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurveyCheck {
    /// Sparse graphs (`9 e(A) - 14 |A| <= 5` for all `A`) are `(1,3)`-colorable.
    Th0,
    /// `(1,3)`-critical graphs have `14 n - 9 m <= -6`.
    Th0critical,
    /// `(1,3)`-critical graphs have minimum potential at most `-6`.
    PotentialTh1,
    /// The extraction colorer returns a verified coloring for every
    /// colorable graph.
    ProofColorer,
}

impl SurveyCheck {
    pub const ALL: [SurveyCheck; 4] =
        [SurveyCheck::Th0, SurveyCheck::Th0critical, SurveyCheck::PotentialTh1, SurveyCheck::ProofColorer];

    pub fn name(self) -> &'static str {
        match self {
            SurveyCheck::Th0 => "th0",
            SurveyCheck::Th0critical => "th0critical",
            SurveyCheck::PotentialTh1 => "potential-th1",
            SurveyCheck::ProofColorer => "proof-colorer",
        }
    }

    pub fn parse(s: &str) -> Result<SurveyCheck> {
        SurveyCheck::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown check {s:?} (expected th0, th0critical, potential-th1 or proof-colorer)"
            ))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyConfig {
    pub max_n: usize,
    pub check: SurveyCheck,
    /// Keep one verified coloring per eligible graph (`th0`, `proof-colorer`).
    #[serde(default)]
    pub keep_witnesses: bool,
}

impl SurveyConfig {
    pub fn new(max_n: usize, check: SurveyCheck) -> SurveyConfig {
        SurveyConfig { max_n, check, keep_witnesses: false }
    }
}

/// Counts for one vertex count.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub n: usize,
    /// Connected graphs up to isomorphism.
    pub graphs: usize,
    /// Graphs the check applies to: sparse ones for `th0`, critical ones for
    /// `th0critical` and `potential-th1`, colorable ones for `proof-colorer`.
    pub eligible: usize,
    pub passed: usize,
    /// `proof-colorer` only: colorings produced without the exact fallback.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extracted: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalEntry {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    /// `14 n - 9 m`.
    pub density_bound: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_potential: Option<Potential>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential_witness: Option<VertexSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub graph: String,
    pub coloring: Coloring,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub graph: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub config: SurveyConfig,
    pub levels: Vec<LevelStats>,
    /// Critical graphs in canonical order (`th0critical`, `potential-th1`).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub critical: Vec<CriticalEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    pub violations: Vec<Violation>,
}

impl SurveyReport {
    pub fn total(&self, f: impl Fn(&LevelStats) -> usize) -> usize {
        self.levels.iter().map(f).sum()
    }

    /// Share of eligible graphs colored without fallback (`proof-colorer`).
    pub fn extraction_rate(&self) -> Option<f64> {
        let eligible = self.total(|l| l.eligible);
        let extracted: usize = self.levels.iter().filter_map(|l| l.extracted).sum();
        (self.config.check == SurveyCheck::ProofColorer && eligible > 0).then(|| extracted as f64 / eligible as f64)
    }
}

#[derive(Default)]
struct Outcome {
    eligible: bool,
    passed: bool,
    extracted: bool,
    critical: Option<CriticalEntry>,
    witness: Option<Coloring>,
    violation: Option<String>,
}

fn examine(g: &Graph, check: SurveyCheck) -> Result<Outcome> {
    let mut out = Outcome::default();
    let caps = CapacityMap::one_three(g.n());
    match check {
        SurveyCheck::Th0 => {
            let (excess, _) = max_excess(g, 14, 9)?;
            // 9 e(A) - 14 |A| <= 5  iff  e(A) - 14/9 |A| <= 5/9
            if excess <= Rational::new(SPARSE_EXCESS_BOUND, 9)? {
                out.eligible = true;
                match solve_13(g) {
                    Some(phi) if verify_coloring(g, &caps, &phi)? => {
                        out.passed = true;
                        out.witness = Some(phi);
                    }
                    Some(_) => out.violation = Some("solver returned an invalid coloring".into()),
                    None => out.violation = Some(format!("sparse (max excess {excess}) but not colorable")),
                }
            }
        }
        SurveyCheck::Th0critical | SurveyCheck::PotentialTh1 => {
            if is_critical(g, &caps)?.critical {
                out.eligible = true;
                let (n, m) = (g.n(), g.m());
                let density_bound = 14 * n as i64 - 9 * m as i64;
                let mut entry =
                    CriticalEntry { graph: write_graph6(g)?, n, m, density_bound, min_potential: None, potential_witness: None };
                if check == SurveyCheck::Th0critical {
                    out.passed = density_bound <= CRITICAL_BOUND;
                    if !out.passed {
                        out.violation = Some(format!("critical with 14n - 9m = {density_bound}"));
                    }
                } else {
                    let (p, w) = min_potential(g, &caps, SubsetFilter::AllNonempty)?;
                    out.passed = p <= CRITICAL_BOUND;
                    if !out.passed {
                        out.violation = Some(format!("critical with minimum potential {p}"));
                    }
                    entry.min_potential = Some(p);
                    entry.potential_witness = Some(w);
                }
                out.critical = Some(entry);
            }
        }
        SurveyCheck::ProofColorer => {
            if solve_13(g).is_some() {
                out.eligible = true;
                let outcome = proof_guided_solve(g, &caps)?;
                let extracted = !outcome.used_fallback();
                match outcome.coloring {
                    Some(phi) if verify_coloring(g, &caps, &phi)? => {
                        out.passed = true;
                        out.extracted = extracted;
                        out.witness = Some(phi);
                    }
                    Some(_) => out.violation = Some("pipeline returned an invalid coloring".into()),
                    None => out.violation = Some("pipeline reported a colorable graph as uncolorable".into()),
                }
            }
        }
    }
    Ok(out)
}

/// Runs one check over every connected graph with `1..=max_n` vertices on
/// the current rayon pool.
pub fn run_survey(config: &SurveyConfig) -> Result<SurveyReport> {
    if config.max_n == 0 || config.max_n > MAX_ENUMERATE_N {
        return Err(Error::InvalidArgument(format!(
            "max-n must lie in 1..={MAX_ENUMERATE_N}, got {}",
            config.max_n
        )));
    }
    let mut report = SurveyReport {
        config: config.clone(),
        levels: Vec::new(),
        critical: Vec::new(),
        witnesses: Vec::new(),
        violations: Vec::new(),
    };
    for n in 1..=config.max_n {
        let codes = enumerate_codes(n, true)?;
        let outcomes: Vec<(Graph, Outcome)> = codes
            .par_iter()
            .map(|code| {
                let g = code.to_graph();
                examine(&g, config.check).map(|o| (g, o))
            })
            .collect::<Result<_>>()?;
        let mut level = LevelStats { n, graphs: codes.len(), ..LevelStats::default() };
        if config.check == SurveyCheck::ProofColorer {
            level.extracted = Some(0);
        }
        for (g, o) in outcomes {
            level.eligible += o.eligible as usize;
            level.passed += o.passed as usize;
            if let Some(x) = level.extracted.as_mut() {
                *x += o.extracted as usize;
            }
            if let Some(entry) = o.critical {
                report.critical.push(entry);
            }
            if let Some(detail) = o.violation {
                report.violations.push(Violation { graph: write_graph6(&g)?, detail });
            }
            if let (true, Some(coloring)) = (config.keep_witnesses, o.witness) {
                report.witnesses.push(Witness { graph: write_graph6(&g)?, coloring });
            }
        }
        report.levels.push(level);
    }
    Ok(report)
}

/// [`run_survey`] on a dedicated pool with `threads` workers.
pub fn run_survey_with_threads(config: &SurveyConfig, threads: usize) -> Result<SurveyReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start {threads} workers: {e}")))?;
    pool.install(|| run_survey(config))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_have_no_violations() {
        for check in SurveyCheck::ALL {
            let r = run_survey(&SurveyConfig::new(5, check)).unwrap();
            assert!(r.violations.is_empty(), "{check:?}");
            let graphs: Vec<usize> = r.levels.iter().map(|l| l.graphs).collect();
            assert_eq!(graphs, vec![1, 1, 2, 6, 21]);
        }
    }

    #[test]
    fn th0_small_graphs_are_all_sparse() {
        // K4 is the densest case: 9*6 - 14*4 = -2
        let r = run_survey(&SurveyConfig::new(4, SurveyCheck::Th0)).unwrap();
        assert_eq!(r.total(|l| l.eligible), r.total(|l| l.graphs));
        assert_eq!(r.total(|l| l.eligible), r.total(|l| l.passed));
    }

    #[test]
    fn range_checked() {
        assert!(run_survey(&SurveyConfig::new(0, SurveyCheck::Th0)).is_err());
        assert!(run_survey(&SurveyConfig::new(9, SurveyCheck::Th0)).is_err());
    }

    #[test]
    fn thread_count_does_not_change_report() {
        let mut cfg = SurveyConfig::new(6, SurveyCheck::ProofColorer);
        cfg.keep_witnesses = true;
        let a = run_survey_with_threads(&cfg, 1).unwrap();
        let b = run_survey_with_threads(&cfg, 4).unwrap();
        assert_eq!(a, b);
        assert!(a.extraction_rate().is_some());
    }

    #[test]
    fn check_names_round_trip() {
        for c in SurveyCheck::ALL {
            assert_eq!(SurveyCheck::parse(c.name()).unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{}\"", c.name()));
        }
        assert!(SurveyCheck::parse("th1").is_err());
    }
}
