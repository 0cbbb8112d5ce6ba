//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails or overruns its time budget.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use cohomod::complete::{
    compute_until_complete, projected_degree, Inequality, PipelineOptions, PipelineReport,
};
use cohomod::dickson::{
    dickson_set, rank_restriction_check, restrict_parameters, restriction_power_relation,
    search_parameters, verify_gl_invariance,
};
use cohomod::extint::{ExtInt, Finite, NegInf};
use cohomod::gring::{
    hilbert, r_module_structure, Generator, GradedPresentation, Monomial, ParameterSequence,
    Polynomial,
};
use cohomod::group::{named, PGroup};
use cohomod::linalg::PrimeField;
use cohomod::modres::{l_module, Cocycle, MinimalResolution, ResolutionCaps};
use cohomod::regseq::{
    classify, koszul_cohomology, local_cohomology_report, measure_type, sharpen_group_type,
    FilterType, Mode,
};
use cohomod::ring_extract::{ElabRestriction, Extraction};

type Check = std::result::Result<(), String>;
type Oracle = Box<dyn Fn(usize) -> usize>;
type Criterion = (&'static str, Duration, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: std::result::Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn mono(e: &[u32]) -> Polynomial {
    Polynomial::monomial(Monomial::new(e.to_vec()), 1)
}

fn sum(terms: &[&[u32]]) -> Polynomial {
    let f = PrimeField::new(2).unwrap();
    Polynomial::from_terms(f, terms.iter().map(|e| (Monomial::new(e.to_vec()), 1)))
}

fn ring(degrees: &[usize], rels: Vec<Polynomial>) -> GradedPresentation {
    let gens = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| Generator { name: format!("x{}", i + 1), degree: d })
        .collect();
    GradedPresentation::new(2, gens, rels).unwrap()
}

struct Pair {
    name: &'static str,
    ring: GradedPresentation,
    params: ParameterSequence,
}

fn pair(name: &'static str, ring: GradedPresentation, elements: Vec<Polynomial>) -> Pair {
    let params = ParameterSequence::new(&ring, elements).unwrap();
    Pair { name, ring, params }
}

/// Hand-checkable rings with a system of parameters.
fn corpus() -> Vec<Pair> {
    vec![
        pair("micro", ring(&[1, 1], vec![mono(&[2]), mono(&[1, 1])]), vec![mono(&[0, 1])]),
        pair("micro-cubic", ring(&[1, 1], vec![mono(&[3]), mono(&[1, 1])]), vec![mono(&[0, 1])]),
        pair("polynomial", ring(&[1, 1], vec![]), vec![mono(&[1]), mono(&[0, 1])]),
        pair("z4", ring(&[1, 2], vec![mono(&[2])]), vec![mono(&[0, 1])]),
        pair(
            "dickson-subring",
            ring(&[1, 1], vec![]),
            vec![sum(&[&[2], &[1, 1], &[0, 2]]), sum(&[&[2, 1], &[1, 2]])],
        ),
        pair(
            "d8",
            ring(&[1, 1, 2], vec![mono(&[1, 1])]),
            vec![sum(&[&[2], &[0, 0, 1]]), sum(&[&[0, 2], &[0, 0, 1]])],
        ),
        pair(
            "q8",
            ring(&[1, 1, 4], vec![sum(&[&[2], &[1, 1], &[0, 2]]), sum(&[&[2, 1], &[1, 2]])]),
            vec![mono(&[0, 0, 1])],
        ),
    ]
}

fn pipeline(g: PGroup, inequality: Option<Inequality>, max_degree: usize) -> std::result::Result<PipelineReport, String> {
    let options = PipelineOptions {
        caps: ResolutionCaps {
            max_degree,
            ..ResolutionCaps::default()
        },
        inequality,
        ..PipelineOptions::default()
    };
    ok(compute_until_complete(Arc::new(g), options))
}

fn dickson_generation() -> Check {
    let d = ok(dickson_set(2, 2, 1))?;
    let shown = d.display();
    ensure!(shown[0] == "x^2 + x*y + y^2", "c_2,1 = {}", shown[0]);
    ensure!(shown[1] == "x^2*y + x*y^2", "c_2,0 = {}", shown[1]);
    ensure!(d.degrees == vec![2, 3], "degrees {:?}", d.degrees);
    ensure!(verify_gl_invariance(&d), "not GL(2,F_2)-invariant");
    ensure!(ok(restriction_power_relation(&d, 1))?, "restriction relation fails");
    Ok(())
}

fn resolutions() -> Check {
    let d8_oracle = hilbert(&ring(&[1, 1, 2], vec![mono(&[1, 1])]), 15).unwrap();
    ensure!((0..=15).all(|n| d8_oracle[n] == n + 1), "D8 oracle series");
    let cases: Vec<(&str, PGroup, Oracle)> = vec![
        ("Z/2", named::cyclic(2, 2).unwrap(), Box::new(|_| 1)),
        ("Z/4", named::cyclic(2, 4).unwrap(), Box::new(|_| 1)),
        ("Klein", named::klein().unwrap(), Box::new(|n| n + 1)),
        ("D8", named::dihedral8().unwrap(), Box::new(move |n| d8_oracle[n])),
    ];
    for (name, g, expected) in cases {
        let start = Instant::now();
        let res = ok(MinimalResolution::through(Arc::new(g), 15, ResolutionCaps::default()))?;
        for n in 0..=15 {
            ensure!(res.rank(n) == expected(n), "{name}: b_{n} = {}", res.rank(n));
        }
        ensure!(start.elapsed() < Duration::from_secs(30), "{name} too slow");
    }
    Ok(())
}

fn micro_ring() -> Check {
    let c = &corpus()[0];
    let (m, rep) = ok(local_cohomology_report(&c.ring, &c.params, 40, Mode::Certified))?;
    ensure!(m.measured == FilterType::from_ints(&[1, 0]), "measured {:?}", m.measured.d);
    ensure!(rep.a_bound[0] == Finite(1) && rep.a0_exact == Finite(1), "a0 {:?}", rep.a0_exact);
    let betti = rep.betti.ok_or("no Betti table")?;
    ensure!(betti.betti == vec![Finite(1), Finite(2)], "betti {:?}", betti.betti);
    ensure!(rep.a_max_exact == Some(Finite(1)), "max a {:?}", rep.a_max_exact);
    ensure!(rep.reg_exact == Some(Finite(1)), "reg {:?}", rep.reg_exact);
    let flags = ok(classify(&m.envelope, 1))?;
    ensure!(!flags.quasi && !flags.strongly && !flags.very_strongly, "flags {flags:?}");
    Ok(())
}

fn cohen_macaulay() -> Check {
    let c = &corpus()[4];
    let rmod = ok(r_module_structure(&c.ring, &c.params, 40))?;
    ensure!(rmod.certified, "R-module structure not certified");
    ensure!(rmod.generator_degrees[0] == vec![0, 1, 1, 2, 2, 3], "F_0 {:?}", rmod.generator_degrees[0]);
    ensure!(rmod.generator_degrees[1..].iter().all(|g| g.is_empty()), "not free");
    let (m, rep) = ok(local_cohomology_report(&c.ring, &c.params, 40, Mode::Certified))?;
    let a = rep.a_exact.ok_or("no exact a-invariants")?;
    ensure!(a[2] == Finite(-2) && a[2] == Finite(3 - c.params.degree_sum()), "a^2 {:?}", a[2]);
    ensure!(rep.reg_exact == Some(Finite(0)), "reg {:?}", rep.reg_exact);
    ensure!(m.envelope == FilterType::from_ints(&[-2, -2, -2]), "envelope {:?}", m.envelope.d);
    let flags = ok(classify(&m.envelope, 2))?;
    ensure!(flags.quasi && flags.strongly && flags.very_strongly, "flags {flags:?}");
    Ok(())
}

/// A complete presentation together with parameters found by the pipeline's search.
fn group_ring(g: PGroup) -> std::result::Result<(Extraction, ParameterSequence), String> {
    let report = pipeline(g.clone(), None, 24)?;
    ensure!(report.complete, "pipeline did not complete");
    let group = Arc::new(g);
    let ext = ok(Extraction::through(group, report.n.max(4), ResolutionCaps::default()))?;
    let mut elabs = ok(ElabRestriction::all(&ext))?;
    let (params, _) = ok(search_parameters(&ext, &mut elabs))?;
    Ok((ext, params))
}

fn regularity_sign() -> Check {
    let groups = [
        ("Z/2", named::cyclic(2, 2).unwrap()),
        ("Z/4", named::cyclic(2, 4).unwrap()),
        ("Klein", named::klein().unwrap()),
        ("D8", named::dihedral8().unwrap()),
        ("Q8", named::quaternion8().unwrap()),
    ];
    for (name, g) in groups {
        let (ext, params) = group_ring(g)?;
        let (_, rep) = ok(local_cohomology_report(ext.presentation(), &params, 40, Mode::Certified))?;
        let reg = rep.reg_exact.ok_or(format!("{name}: no exact regularity"))?;
        ensure!(reg >= Finite(0), "{name}: Reg = {reg}");
        ensure!(reg == Finite(0), "{name}: Reg = {reg}");
    }
    Ok(())
}

fn completion_certificate() -> Check {
    let klein = || named::klein().unwrap();
    let strict = pipeline(klein(), Some(Inequality::Strict), 12)?;
    ensure!(strict.complete && strict.n == 4, "strict N = {}", strict.n);
    let nonstrict = pipeline(klein(), Some(Inequality::NonStrict), 12)?;
    ensure!(nonstrict.complete && nonstrict.n == 3, "nonstrict N = {}", nonstrict.n);
    let tau2 = pipeline(klein(), Some(Inequality::NonStrict), 2)?;
    ensure!(!tau2.complete, "tau_2 judged complete");
    for cap in 1..=8 {
        let r = pipeline(klein(), Some(Inequality::Strict), cap)?;
        ensure!(r.complete == (cap >= 4), "strict verdict at cap {cap}: {}", r.complete);
    }

    let oracles = [
        ("Z/4", named::cyclic(2, 4).unwrap(), ring(&[1, 2], vec![mono(&[2])])),
        ("D8", named::dihedral8().unwrap(), ring(&[1, 1, 2], vec![mono(&[1, 1])])),
    ];
    for (name, g, oracle) in oracles {
        let start = Instant::now();
        let report = pipeline(g, None, 24)?;
        ensure!(report.complete, "{name} incomplete");
        if let Some(p) = report.projected_degree {
            ensure!(report.n <= p, "{name}: N = {} beyond projected {p}", report.n);
        } else {
            ensure!(report.periodicity.is_some_and(|d| report.n <= d), "{name}: no schedule");
        }
        let pres = ok(report.presentation.to_presentation())?;
        ensure!(ok(hilbert(&pres, 10))? == ok(hilbert(&oracle, 10))?, "{name}: Hilbert function");
        if name == "D8" {
            let degrees: Vec<usize> = report.presentation.generators.iter().map(|g| g.degree).collect();
            ensure!(degrees == vec![1, 1, 2], "D8 generators {degrees:?}");
            ensure!(report.presentation.relations.len() == 1, "D8 relations");
            ensure!(report.projected_degree == Some(projected_degree(&report.param_degrees)), "schedule");
        }
        ensure!(start.elapsed() < Duration::from_secs(120), "{name} too slow");
    }
    Ok(())
}

fn tensor_is_free(ext: &Extraction, params: &[Polynomial]) -> std::result::Result<bool, String> {
    let degrees = ext.presentation().grading().degrees.clone();
    let mut product = None;
    for z in params {
        let n = ok(z.homogeneous_degree(&degrees))?.ok_or("zero parameter")?;
        let v = ok(ext.to_cocycle(n, z))?;
        let l = ok(l_module(ext.resolution(), &Cocycle::new(n, v)))?;
        product = Some(match product {
            None => l,
            Some(acc) => ok(l.tensor(&acc))?,
        });
    }
    Ok(product.ok_or("no parameters")?.is_free())
}

fn projectivity() -> Check {
    let klein = ok(Extraction::through(Arc::new(named::klein().unwrap()), 4, ResolutionCaps::default()))?;
    ensure!(ok(tensor_is_free(&klein, &[mono(&[1]), mono(&[0, 1])]))?, "Klein: L_x (x) L_y not free");
    let (d8, params) = group_ring(named::dihedral8().unwrap())?;
    ensure!(params.len() == 2, "D8 parameters {}", params.len());
    ensure!(ok(tensor_is_free(&d8, &params.elements))?, "D8: tensor of L-modules not free");
    let mut elabs = ok(ElabRestriction::all(&d8))?;
    let data = ok(restrict_parameters(&d8, &mut elabs, &params))?;
    ensure!(ok(rank_restriction_check(&data))?.holds(), "D8: rank restriction fails");
    Ok(())
}

fn koszul_vanishing() -> Check {
    for c in corpus() {
        let m = ok(measure_type(&c.ring, &c.params, 40, Mode::Certified))?;
        let table = ok(koszul_cohomology(&c.ring, &c.params, 14))?;
        let bad = table.violations(&c.params.degrees, &m.envelope.d);
        ensure!(bad.is_empty(), "{}: nonzero above the bound at {bad:?}", c.name);
    }
    let c = &corpus()[0];
    let table = ok(koszul_cohomology(&c.ring, &c.params, 8))?;
    ensure!(table.dim(1, 2) > 0, "micro-ring H^(-1,2) vanishes");
    ensure!((0..=8).all(|t| t == 2 || table.dim(1, t) == 0), "micro-ring H^(-1,*) off t = 2");
    Ok(())
}

fn exact(ring: &GradedPresentation, params: &ParameterSequence) -> std::result::Result<Option<Vec<ExtInt>>, String> {
    Ok(ok(local_cohomology_report(ring, params, 40, Mode::Certified))?.1.a_exact)
}

fn sandwich() -> Check {
    let mut checked = 0;
    for c in corpus() {
        let Some(a) = exact(&c.ring, &c.params)? else { continue };
        let quotient = ok(c.params.quotient(&c.ring, 1))?;
        let rest = ok(ParameterSequence::new(&quotient, c.params.elements[1..].to_vec()))?;
        let Some(b) = exact(&quotient, &rest)? else { continue };
        let n = c.params.degrees[0] as i64;
        for i in 0..b.len() {
            let lower = a[i + 1] + n;
            let upper = a[i].max(a[i + 1] + n);
            ensure!(lower <= b[i] && b[i] <= upper, "{}: i = {i}, {lower} <= {} <= {upper}", c.name, b[i]);
        }
        checked += 1;
    }
    ensure!(checked >= 4, "only {checked} pairs had exact invariants");
    Ok(())
}

fn sharpening() -> Check {
    let t2 = ok(sharpen_group_type(&FilterType::from_ints(&[-1, -1, -1]), true))?;
    ensure!(t2 == FilterType::from_ints(&[-1, -2, -2]), "r = 2 gives {:?}", t2.d);
    let flags = ok(classify(&t2, 2))?;
    ensure!(flags.very_strongly, "r = 2 sharpened type not very strongly quasi-regular");
    let t3 = ok(sharpen_group_type(&FilterType::from_ints(&[-1, -1, -1, -1]), true))?;
    ensure!(t3 == FilterType::from_ints(&[-1, -2, -3, -3]), "r = 3 gives {:?}", t3.d);
    let t1 = ok(sharpen_group_type(&FilterType::from_ints(&[0, -1]), true))?;
    ensure!(t1 == FilterType::from_ints(&[0, -1]), "r = 1 changed");
    ensure!(sharpen_group_type(&FilterType::from_ints(&[-1, -1, -1]), false).is_err(), "provenance ignored");
    ensure!(NegInf < Finite(i64::MIN), "-inf ordering");
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Dickson generation", Duration::from_secs(1), dickson_generation),
        ("resolution ranks through degree 15", Duration::from_secs(120), resolutions),
        ("micro-ring analyzer", Duration::from_secs(1), micro_ring),
        ("Cohen-Macaulay exactness", Duration::from_secs(5), cohen_macaulay),
        ("regularity sign", Duration::from_secs(300), regularity_sign),
        ("completion certificate", Duration::from_secs(240), completion_certificate),
        ("projectivity of L-module tensors", Duration::from_secs(60), projectivity),
        ("Koszul vanishing", Duration::from_secs(60), koszul_vanishing),
        ("quotient sandwich", Duration::from_secs(60), sandwich),
        ("sharpening rules", Duration::from_secs(1), sharpening),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed > *budget {
                Err(format!("took {elapsed:?}, budget {budget:?}"))
            } else {
                Ok(())
            }
        });
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({} ms)", i + 1, elapsed.as_millis()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
