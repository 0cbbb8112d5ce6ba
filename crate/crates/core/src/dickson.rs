//! Dickson invariants of elementary abelian groups and parameter search.
//!
//! The invariants are read off the expanded product `∏_{w ∈ V} (X - w)`
//! over the span `V` of the variables. Parameters of a cohomology ring are
//! found by solving for classes whose restriction to every maximal
//! elementary abelian subgroup is a power of its Dickson invariant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gring::groebner::exact_hilbert_series;
use crate::gring::{Generator, GradedPresentation, Grading, Monomial, ParameterSequence, Polynomial};
use crate::linalg::{FpMatrix, PrimeField};
use crate::ring_extract::{ElabRestriction, Extraction};

/// Largest span the defining product is expanded over.
pub const DICKSON_CAP: u64 = 64;

/// `c_{r,r-1}, …, c_{r,0}` as polynomials in `r` variables of degree `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DicksonSet {
    pub p: u32,
    pub r: usize,
    pub gen_degree: usize,
    pub ring: GradedPresentation,
    /// `invariants[j - 1] = c_{r,r-j}`.
    pub invariants: Vec<Polynomial>,
    pub degrees: Vec<usize>,
}

impl DicksonSet {
    /// `c_{r,r-j}` for `1 ≤ j ≤ r`.
    pub fn invariant(&self, j: usize) -> &Polynomial {
        &self.invariants[j - 1]
    }

    pub fn display(&self) -> Vec<String> {
        let names = self.ring.names();
        self.invariants.iter().map(|c| c.display(&names)).collect()
    }
}

/// The natural generator degree: 1 at `p = 2`, 2 at odd `p`.
pub fn default_gen_degree(p: u32) -> usize {
    if p == 2 {
        1
    } else {
        2
    }
}

fn variable_names(r: usize) -> Vec<String> {
    if r <= 3 {
        ["x", "y", "z"][..r].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=r).map(|i| format!("x{i}")).collect()
    }
}

/// The polynomial ring on `r` generators of degree `g`.
pub fn polynomial_ring(p: u32, r: usize, g: usize) -> Result<GradedPresentation> {
    if p != 2 && g % 2 == 1 {
        return Err(Error::Inapplicable(format!(
            "odd generator degree {g} gives an exterior algebra at p = {p}"
        )));
    }
    let gens = variable_names(r)
        .into_iter()
        .map(|name| Generator { name, degree: g })
        .collect();
    GradedPresentation::new(p, gens, Vec::new())
}

fn span_size(p: u32, r: usize) -> Result<u64> {
    let size = (p as u64).checked_pow(r as u32).unwrap_or(u64::MAX);
    if size > DICKSON_CAP {
        return Err(Error::DicksonCap {
            size,
            cap: DICKSON_CAP,
        });
    }
    Ok(size)
}

/// Linear form `Σ a_i x_i`.
fn linear_form(field: PrimeField, coeffs: &[u32]) -> Polynomial {
    Polynomial::from_terms(
        field,
        coeffs.iter().enumerate().map(|(i, &a)| (Monomial::var(i), a)),
    )
}

/// Coefficient vectors of every element of `F_p^r`.
fn all_vectors(p: u32, r: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

/// Coefficients of `∏_{w ∈ V} (X - w)` by power of `X`.
pub fn defining_product(p: u32, r: usize, g: usize) -> Result<(GradedPresentation, Vec<Polynomial>)> {
    let size = span_size(p, r)? as usize;
    let ring = polynomial_ring(p, r, g)?;
    let grading = ring.grading().clone();
    let f = grading.field;
    let mut coef = vec![Polynomial::constant(1)];
    for v in all_vectors(p, r) {
        let w = linear_form(f, &v);
        let mut next = vec![Polynomial::zero(); coef.len() + 1];
        for (k, c) in coef.iter().enumerate() {
            next[k + 1] = next[k + 1].add(f, c);
            next[k] = next[k].add(f, &w.mul(&grading, c).scale(f, f.neg(1)));
        }
        coef = next;
    }
    debug_assert_eq!(coef.len(), size + 1);
    Ok((ring, coef))
}

pub fn dickson_set(p: u32, r: usize, gen_degree: usize) -> Result<DicksonSet> {
    if r == 0 {
        return Err(Error::Inapplicable("rank 0 has no Dickson invariants".into()));
    }
    let (ring, coef) = defining_product(p, r, gen_degree)?;
    let f = ring.field();
    let pw = |e: usize| (p as usize).pow(e as u32);
    for (k, c) in coef.iter().enumerate() {
        let is_power = (0..=r).any(|i| pw(i) == k);
        assert!(is_power || c.is_zero(), "coefficient of X^{k} must vanish");
    }
    let mut invariants = Vec::with_capacity(r);
    let mut degrees = Vec::with_capacity(r);
    for j in 1..=r {
        let c = &coef[pw(r - j)];
        let sign = if j % 2 == 0 { 1 } else { f.neg(1) };
        invariants.push(c.scale(f, sign));
        degrees.push(gen_degree * (pw(r) - pw(r - j)));
    }
    Ok(DicksonSet {
        p,
        r,
        gen_degree,
        ring,
        invariants,
        degrees,
    })
}

/// `f^{p^e}`, computed by scaling exponents.
pub fn frobenius(f: &Polynomial, p: u32, e: u32) -> Polynomial {
    let q = p.pow(e);
    let field = PrimeField::new(p).expect("prime");
    Polynomial::from_terms(
        field,
        f.terms()
            .map(|(m, c)| (Monomial::new(m.exponents().iter().map(|&x| x * q).collect()), c)),
    )
}

fn primitive_root(p: u32) -> u32 {
    let f = PrimeField::new(p).expect("prime");
    (1..p)
        .find(|&a| (1..p - 1).all(|k| f.pow(a, k as u64) != 1))
        .unwrap_or(1)
}

/// Substitutions generating `GL(r, F_p)`: a transvection, a diagonal matrix
/// with a primitive root, a transposition and an `r`-cycle.
fn gl_generators(p: u32, r: usize) -> Vec<Vec<Polynomial>> {
    let f = PrimeField::new(p).expect("prime");
    let id: Vec<Polynomial> = (0..r).map(Polynomial::var).collect();
    let mut out = Vec::new();
    if r >= 2 {
        let mut t = id.clone();
        t[0] = Polynomial::var(0).add(f, &Polynomial::var(1));
        out.push(t);
        let mut s = id.clone();
        s.swap(0, 1);
        out.push(s);
        out.push((0..r).map(|i| Polynomial::var((i + 1) % r)).collect());
    }
    if p > 2 {
        let mut d = id;
        d[0] = Polynomial::var(0).scale(f, primitive_root(p));
        out.push(d);
    }
    out
}

/// Whether `poly` in `r` variables is fixed by `GL(r, F_p)`.
pub fn is_gl_invariant(ring: &GradedPresentation, poly: &Polynomial) -> bool {
    let r = ring.generators().len();
    let g = ring.grading();
    let poly = poly.normalize(g);
    gl_generators(ring.p(), r)
        .iter()
        .all(|images| poly.substitute(g, images).normalize(g) == poly)
}

pub fn verify_gl_invariance(d: &DicksonSet) -> bool {
    d.invariants.iter().all(|c| is_gl_invariant(&d.ring, c))
}

/// Setting the last `r - s` variables to zero sends `c_{r,r-j}` to
/// `c_{s,s-j}^{p^{r-s}}` for `j ≤ s` and to zero for `j > s`.
pub fn restriction_power_relation(d: &DicksonSet, s: usize) -> Result<bool> {
    if s == 0 || s >= d.r {
        return Err(Error::Inapplicable(format!(
            "sub-rank {s} outside 1..{}",
            d.r
        )));
    }
    let small = dickson_set(d.p, s, d.gen_degree)?;
    let target = small.ring.grading();
    let images: Vec<Polynomial> = (0..d.r)
        .map(|i| if i < s { Polynomial::var(i) } else { Polynomial::zero() })
        .collect();
    Ok((1..=d.r).all(|j| {
        let restricted = d.invariant(j).substitute(target, &images).normalize(target);
        let expected = if j <= s {
            frobenius(small.invariant(j), d.p, (d.r - s) as u32)
        } else {
            Polynomial::zero()
        };
        restricted == expected
    }))
}

/// All `s × rho` matrices in reduced row echelon form of rank `s`, one per
/// `s`-dimensional subspace of `F_p^rho`.
pub fn subspaces(p: u32, rho: usize, s: usize) -> Vec<Vec<Vec<u32>>> {
    fn choose(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            choose(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut pivot_sets = Vec::new();
    choose(0, rho, s, &mut Vec::new(), &mut pivot_sets);
    let mut out = Vec::new();
    for pivots in pivot_sets {
        let free: Vec<(usize, usize)> = (0..s)
            .flat_map(|i| {
                let pivots = pivots.clone();
                (pivots[i] + 1..rho)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        for values in all_vectors(p, free.len()) {
            let mut m = vec![vec![0u32; rho]; s];
            for (i, &c) in pivots.iter().enumerate() {
                m[i][c] = 1;
            }
            for (&(i, c), &v) in free.iter().zip(&values) {
                m[i][c] = v;
            }
            out.push(m);
        }
    }
    out
}

/// The ring map from the cohomology of a rank-`rho` elementary abelian group
/// onto its polynomial part `k[z_1, …, z_rho]`, killing nilpotents.
#[derive(Clone, Debug)]
pub struct PolynomialPart {
    pub rank: usize,
    pub target: GradedPresentation,
    /// Image of each generator of the source presentation.
    pub images: Vec<Polynomial>,
    /// Source generators mapping to `z_1, …, z_rho`.
    pub polynomial_generators: Vec<usize>,
}

impl PolynomialPart {
    pub fn new(ring: &GradedPresentation, rank: usize) -> Result<Self> {
        let p = ring.p();
        let g = default_gen_degree(p);
        let mut images = Vec::new();
        let mut polynomial_generators = Vec::new();
        for (i, gen) in ring.generators().iter().enumerate() {
            if gen.degree == g {
                images.push(Polynomial::var(polynomial_generators.len()));
                polynomial_generators.push(i);
            } else if p != 2 && gen.degree % 2 == 1 {
                images.push(Polynomial::zero());
            } else {
                return Err(Error::InvalidPresentation(format!(
                    "unexpected generator {} of degree {} for an elementary abelian group",
                    gen.name, gen.degree
                )));
            }
        }
        if polynomial_generators.len() != rank {
            return Err(Error::MissingRestriction(format!(
                "expected {rank} polynomial generators, found {}",
                polynomial_generators.len()
            )));
        }
        Ok(Self {
            rank,
            target: polynomial_ring(p, rank, g)?,
            images,
            polynomial_generators,
        })
    }

    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        let g = self.target.grading();
        f.substitute(g, &self.images).normalize(g)
    }

    /// A polynomial in the `z_i` as an element of the source ring.
    pub fn lift(&self, source: &GradedPresentation, f: &Polynomial) -> Polynomial {
        let images: Vec<Polynomial> =
            self.polynomial_generators.iter().map(|&i| Polynomial::var(i)).collect();
        f.substitute(source.grading(), &images).normalize(source.grading())
    }
}

/// Parameter images on one maximal elementary abelian subgroup.
#[derive(Clone, Debug)]
pub struct RestrictedParameters {
    pub rank: usize,
    pub ring: GradedPresentation,
    pub images: Vec<Polynomial>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RankRestrictionReport {
    /// `ζ_i` vanishes on every elementary abelian subgroup of rank below `i`.
    pub vanishing: bool,
    /// `ζ_1, …, ζ_i` cut out a finite-length quotient on every rank-`i` subgroup.
    pub hsop: bool,
}

impl RankRestrictionReport {
    pub fn holds(&self) -> bool {
        self.vanishing && self.hsop
    }
}

fn substitute_subspace(part: &PolynomialPart, m: &[Vec<u32>], f: &Polynomial) -> Result<(GradedPresentation, Polynomial)> {
    let s = m.len();
    let p = part.target.p();
    let small = polynomial_ring(p, s, default_gen_degree(p))?;
    let field = small.field();
    let images: Vec<Polynomial> = (0..part.rank)
        .map(|k| {
            Polynomial::from_terms(
                field,
                (0..s).map(|l| (Monomial::var(l), m[l][k])),
            )
        })
        .collect();
    let out = f.substitute(small.grading(), &images).normalize(small.grading());
    Ok((small, out))
}

/// Check the rank-restriction condition (modulo nilpotents) and its
/// finite-length consequence on every subgroup of every listed class.
pub fn rank_restriction_check(data: &[RestrictedParameters]) -> Result<RankRestrictionReport> {
    if data.is_empty() {
        return Err(Error::MissingRestriction("no elementary abelian classes".into()));
    }
    let mut report = RankRestrictionReport {
        vanishing: true,
        hsop: true,
    };
    for d in data {
        let part = PolynomialPart::new(&d.ring, d.rank)?;
        let reduced: Vec<Polynomial> = d.images.iter().map(|z| part.reduce(z)).collect();
        let p = d.ring.p();
        for (idx, z) in reduced.iter().enumerate() {
            let i = idx + 1;
            let s = i - 1;
            if s >= d.rank {
                report.vanishing &= z.is_zero();
            } else if s > 0 {
                for m in subspaces(p, d.rank, s) {
                    report.vanishing &= substitute_subspace(&part, &m, z)?.1.is_zero();
                }
            }
            if i <= d.rank {
                for m in subspaces(p, d.rank, i) {
                    let mut small = None;
                    let mut elems = Vec::with_capacity(i);
                    for prior in &reduced[..i] {
                        let (ring, e) = substitute_subspace(&part, &m, prior)?;
                        elems.push(e);
                        small = Some(ring);
                    }
                    let ring = small.expect("i ≥ 1").quotient(&elems)?;
                    let finite = exact_hilbert_series(&ring)?.top_degree().is_some();
                    report.hsop &= finite;
                }
            }
        }
    }
    Ok(report)
}

/// Restrict parameters of the parent ring to every class.
pub fn restrict_parameters(
    parent: &Extraction,
    elabs: &mut [ElabRestriction],
    params: &ParameterSequence,
) -> Result<Vec<RestrictedParameters>> {
    let g = default_gen_degree(parent.group().p());
    let mut out = Vec::with_capacity(elabs.len());
    for e in elabs.iter_mut() {
        e.ring.advance(g)?;
        let images = params
            .elements
            .iter()
            .zip(&params.degrees)
            .map(|(z, &n)| e.restrict(parent, n, z))
            .collect::<Result<Vec<_>>>()?;
        out.push(RestrictedParameters {
            rank: e.rank,
            ring: e.ring.presentation().clone(),
            images,
        });
    }
    Ok(out)
}

/// Degree `g · p^a · (p^r - p^{r-j})` of the `j`-th parameter at dilation `a`.
pub fn parameter_degree(p: u32, r: usize, j: usize, a: u32) -> usize {
    let p = p as usize;
    default_gen_degree(p as u32) * p.pow(a) * (p.pow(r as u32) - p.pow((r - j) as u32))
}

fn is_even_monomial(grading: &Grading, m: &Monomial) -> bool {
    m.support().all(|(i, _)| !grading.is_exterior(i))
}

/// A class of degree `parameter_degree(p, r, j, a)` restricting to
/// `c_{ρ,ρ-j}^{p^{a + r - ρ}}` on every rank-`ρ` class (zero when `j > ρ`),
/// modulo nilpotents. The solution is the canonical one of the stacked system.
pub fn find_parameter(parent: &Extraction, elabs: &mut [ElabRestriction], j: usize, a: u32) -> Result<Polynomial> {
    if elabs.is_empty() {
        return Err(Error::MissingRestriction("no elementary abelian classes".into()));
    }
    let p = parent.group().p();
    let r = elabs.iter().map(|e| e.rank).max().unwrap_or(0);
    let n = parameter_degree(p, r, j, a);
    let top = parent.degree().unwrap_or(0);
    if n > top {
        return Err(Error::DegreeCap { cap: top });
    }
    let field = parent.resolution().field();
    let b = parent.resolution().rank(n);
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut rhs: Vec<u32> = Vec::new();
    for e in elabs.iter_mut() {
        let restriction = e.matrix(parent, n)?;
        let ring = &e.ring;
        let pres = ring.presentation();
        let part = PolynomialPart::new(pres, e.rank)?;
        let target = if j <= e.rank {
            let set = dickson_set(p, e.rank, default_gen_degree(p))?;
            let power = frobenius(set.invariant(j), p, a + (r - e.rank) as u32);
            part.lift(pres, &power)
        } else {
            Polynomial::zero()
        };
        let target = ring.basis().normal_form(n, &target)?;
        let columns = (0..b)
            .map(|i| ring.coordinates(n, &restriction.column(i)))
            .collect::<Result<Vec<_>>>()?;
        let coords = FpMatrix::from_columns(field, target.len(), &columns);
        for (k, m) in ring.basis().standard_monomials(n).iter().enumerate() {
            if is_even_monomial(pres.grading(), m) {
                rows.push(coords.row(k).to_vec());
                rhs.push(target[k]);
            }
        }
    }
    let system = FpMatrix::from_vecs(field, b, rows);
    match system.solve(&rhs)? {
        Some(z) => parent.from_cocycle(n, &z),
        None => Err(Error::NoParameter { degree: n }),
    }
}

/// One parameter per rank, each at its given dilation.
pub fn find_parameters(parent: &Extraction, elabs: &mut [ElabRestriction], dilations: &[u32]) -> Result<ParameterSequence> {
    let elements = dilations
        .iter()
        .enumerate()
        .map(|(idx, &a)| find_parameter(parent, elabs, idx + 1, a))
        .collect::<Result<Vec<_>>>()?;
    ParameterSequence::new(parent.presentation(), elements)
}

/// The lowest dilation for each parameter with a solution inside the
/// extracted degrees.
pub fn search_parameters(parent: &Extraction, elabs: &mut [ElabRestriction]) -> Result<(ParameterSequence, Vec<u32>)> {
    let p = parent.group().p();
    let r = elabs.iter().map(|e| e.rank).max().unwrap_or(0);
    let top = parent.degree().unwrap_or(0);
    let mut dilations = Vec::with_capacity(r);
    for j in 1..=r {
        let mut a = 0;
        loop {
            if parameter_degree(p, r, j, a) > top {
                return Err(Error::DegreeCap { cap: top });
            }
            match find_parameter(parent, elabs, j, a) {
                Ok(_) => break,
                Err(Error::NoParameter { .. }) => a += 1,
                Err(e) => return Err(e),
            }
        }
        dilations.push(a);
    }
    let params = find_parameters(parent, elabs, &dilations)?;
    Ok((params, dilations))
}
