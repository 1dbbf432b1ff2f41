//! Library routines against brute-force oracles.

mod common;

use common::*;
use defcolor::coloring::{is_critical, solve};
use defcolor::enumerate::{canonical_form, canonical_labelling, enumerate_graphs};
use defcolor::potential::{min_potential, min_potential_scan, SubsetFilter};
use defcolor::sparsity::{mad_with, max_excess_with, Method};
use defcolor::{CapacityMap, Graph, VertexSet};
use rand::Rng;

fn family(f: SubsetFilter) -> Family {
    match f {
        SubsetFilter::AllNonempty => Family::All,
        SubsetFilter::ProperNonempty => Family::Proper,
        SubsetFilter::Nontrivial => Family::Nontrivial,
    }
}

#[test]
fn solver_matches_exhaustive_search() {
    let mut r = rng(11);
    for _ in 0..400 {
        let n = r.gen_range(1..=7);
        let g = random_graph(n, r.gen_range(0.2..0.9), &mut r);
        let c = random_caps(n, &mut r);
        let got = solve(&g, &c).unwrap();
        assert_eq!(got.is_some(), brute_colorable(&g, &c), "{g:?} {c:?}");
        if let Some(phi) = got {
            assert!(coloring_ok(&g, &c, &phi));
        }
    }
}

#[test]
fn criticality_matches_definition() {
    // critical: uncolorable, and deleting any edge or any vertex helps
    let mut r = rng(12);
    for _ in 0..300 {
        let n = r.gen_range(1..=6);
        let g = random_graph(n, 0.6, &mut r);
        let c = random_caps(n, &mut r);
        let mut expected = !brute_colorable(&g, &c);
        if expected {
            for (u, v) in g.edges() {
                expected &= brute_colorable(&g.without_edge(u, v).unwrap(), &c);
            }
            for v in 0..n {
                let (h, keep) = g.induced(g.vertices().difference(VertexSet::singleton(v)));
                expected &= h.n() == 0 || brute_colorable(&h, &c.restrict(&keep));
            }
        }
        assert_eq!(is_critical(&g, &c).unwrap().critical, expected, "{g:?} {c:?}");
    }
}

#[test]
fn min_potential_matches_subset_scan() {
    let mut r = rng(13);
    for _ in 0..300 {
        let n = r.gen_range(1..=9);
        let g = random_graph(n, r.gen_range(0.1..0.9), &mut r);
        let c = if r.gen_bool(0.5) { CapacityMap::one_three(n) } else { random_caps(n, &mut r) };
        for f in [SubsetFilter::AllNonempty, SubsetFilter::ProperNonempty, SubsetFilter::Nontrivial] {
            let oracle = brute_min_potential(&g, &c, family(f));
            let pruned = min_potential(&g, &c, f).ok().map(|(p, w)| (p, w.0));
            let scan = min_potential_scan(&g, &c, f).ok().map(|(p, w)| (p, w.0));
            assert_eq!(pruned, oracle, "{g:?} {f:?}");
            assert_eq!(scan, oracle, "{g:?} {f:?}");
        }
    }
}

#[test]
fn excess_and_mad_match_subset_scan() {
    let mut r = rng(14);
    for _ in 0..200 {
        let n = r.gen_range(1..=10);
        let g = random_graph(n, r.gen_range(0.1..0.9), &mut r);
        let (p, q) = (r.gen_range(0..=20), r.gen_range(1..=9));
        let expected = brute_max_excess(&g, p, q);
        for method in [Method::Flow, Method::BruteForce] {
            let (excess, witness) = max_excess_with(&g, p, q, method).unwrap();
            assert_eq!((excess.num(), excess.den()), (*expected.numer(), *expected.denom()), "{g:?} {p}/{q}");
            let e = g.edges_within(witness) as i64;
            assert_eq!(num_rational::Ratio::new(q * e - p * witness.len() as i64, q), expected);
        }
        let m = brute_mad(&g);
        let (got, _) = mad_with(&g, Method::Flow).unwrap();
        assert_eq!((got.num(), got.den()), (*m.numer(), *m.denom()));
    }
}

#[test]
fn canonical_form_decides_isomorphism() {
    let mut r = rng(15);
    for _ in 0..150 {
        let n = r.gen_range(1..=6);
        let a = random_graph(n, 0.5, &mut r);
        let b = random_graph(n, 0.5, &mut r);
        assert_eq!(
            canonical_form(&a).unwrap() == canonical_form(&b).unwrap(),
            brute_isomorphic(&a, &b),
            "{a:?} {b:?}"
        );
        let (code, labelling) = canonical_labelling(&a).unwrap();
        // labelling[k] is the original vertex placed at position k
        let mut perm = vec![0; n];
        for (k, &v) in labelling.iter().enumerate() {
            perm[v] = k;
        }
        assert_eq!(a.permuted(&perm).unwrap(), code.to_graph());
    }
}

#[test]
fn enumeration_matches_labelled_listing() {
    for n in 1..=5 {
        for connected in [false, true] {
            let listed = enumerate_graphs(n, connected).unwrap();
            assert_eq!(listed.len(), brute_class_count(n, connected), "n={n} connected={connected}");
            for (i, a) in listed.iter().enumerate() {
                assert!(!connected || a.is_connected());
                for b in &listed[i + 1..] {
                    assert!(!brute_isomorphic(a, b));
                }
            }
        }
    }
}

#[test]
fn enumeration_counts() {
    let all = [1, 2, 4, 11, 34, 156, 1044];
    let connected = [1, 1, 2, 6, 21, 112, 853];
    for n in 1..=7 {
        assert_eq!(enumerate_graphs(n, false).unwrap().len(), all[n - 1], "n={n}");
        assert_eq!(enumerate_graphs(n, true).unwrap().len(), connected[n - 1], "n={n}");
    }
}

#[test]
fn edgeless_and_complete_anchors() {
    let k = Graph::complete(5).unwrap();
    assert_eq!(brute_mad(&k), num_rational::Ratio::from_integer(4));
    assert!(brute_colorable(&Graph::complete(6).unwrap(), &CapacityMap::one_three(6)));
    assert!(!brute_colorable(&Graph::complete(7).unwrap(), &CapacityMap::one_three(7)));
}
