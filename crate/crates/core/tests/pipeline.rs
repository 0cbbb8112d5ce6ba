use std::sync::Arc;

use cohomod::complete::{compute_until_complete, Inequality, PipelineOptions, PipelineReport};
use cohomod::gring::{exact_hilbert_series, hilbert};
use cohomod::group::{named, PGroup};
use cohomod::modres::{MinimalResolution, ResolutionCaps};

fn run(g: PGroup, inequality: Option<Inequality>, max_degree: usize) -> PipelineReport {
    let options = PipelineOptions {
        caps: ResolutionCaps {
            max_degree,
            ..ResolutionCaps::default()
        },
        inequality,
        ..PipelineOptions::default()
    };
    compute_until_complete(Arc::new(g), options).unwrap()
}

/// The presentation must reproduce `b_n` beyond the degree where it was certified.
fn audit(g: PGroup, report: &PipelineReport, extra: usize) {
    let pres = report.presentation.to_presentation().unwrap();
    let through = report.n + extra;
    let res = MinimalResolution::through(Arc::new(g), through, ResolutionCaps::default()).unwrap();
    let dims = hilbert(&pres, through).unwrap();
    for (n, &d) in dims.iter().enumerate() {
        assert_eq!(d, res.rank(n), "degree {n}");
    }
}

#[test]
fn dihedral_completes_with_three_generators() {
    let report = run(named::dihedral8().unwrap(), None, 16);
    assert!(report.complete);
    let degrees: Vec<usize> = report.presentation.generators.iter().map(|g| g.degree).collect();
    assert_eq!(degrees, vec![1, 1, 2]);
    assert_eq!(report.presentation.relations.len(), 1);
    assert!(report.n <= report.projected_degree.unwrap());
    audit(named::dihedral8().unwrap(), &report, 5);
}

#[test]
fn quaternion_completes_through_periodicity() {
    let report = run(named::quaternion8().unwrap(), None, 16);
    assert!(report.complete);
    assert_eq!(report.periodicity, Some(4));
    let degrees: Vec<usize> = report.presentation.generators.iter().map(|g| g.degree).collect();
    assert_eq!(degrees, vec![1, 1, 4]);
    audit(named::quaternion8().unwrap(), &report, 5);
}

#[test]
fn cyclic_groups() {
    let z4 = run(named::cyclic(2, 4).unwrap(), None, 16);
    assert!(z4.complete);
    assert_eq!(z4.n, 2);
    audit(named::cyclic(2, 4).unwrap(), &z4, 8);
    let z3 = run(named::cyclic(3, 3).unwrap(), None, 16);
    assert!(z3.complete);
    assert_eq!(z3.periodicity, Some(2));
    audit(named::cyclic(3, 3).unwrap(), &z3, 6);
}

#[test]
fn odd_prime_rank_two() {
    let e9 = named::elementary_abelian(3, 2).unwrap();
    let report = run(e9.clone(), None, 32);
    assert!(report.complete);
    assert_eq!(report.n, 26);
    assert_eq!(report.param_degrees, vec![12, 16]);
    let degrees: Vec<usize> = report.presentation.generators.iter().map(|g| g.degree).collect();
    assert_eq!(degrees, vec![1, 1, 2, 2]);
    assert!(report.presentation.relations.is_empty());
    audit(e9, &report, 2);
}

#[test]
fn klein_monotone_in_degree() {
    for ineq in [Inequality::Strict, Inequality::NonStrict] {
        let first = run(named::klein().unwrap(), Some(ineq), 12).n;
        for cap in 1..first {
            assert!(!run(named::klein().unwrap(), Some(ineq), cap).complete);
        }
        for cap in first..first + 3 {
            let r = run(named::klein().unwrap(), Some(ineq), cap);
            assert!(r.complete);
            assert_eq!(r.n, first);
        }
    }
}

#[test]
fn caps_never_claim_completion() {
    let r = run(named::dihedral8().unwrap(), None, 2);
    assert!(!r.complete);
    assert!(r.stop_reason.is_some());
}

#[test]
fn completed_presentations_have_finite_series() {
    for g in [named::klein().unwrap(), named::dihedral8().unwrap(), named::quaternion8().unwrap()] {
        let report = run(g, None, 16);
        let pres = report.presentation.to_presentation().unwrap();
        let hs = exact_hilbert_series(&pres).unwrap();
        assert!(hs.krull_dimension().is_some());
    }
}
