use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::PrimeField;

/// An exponent vector over the generators, with trailing zeros trimmed so
/// that monomials compare consistently when generators are appended.
///
/// The derived order is lexicographic; within a fixed degree larger means
/// leading.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Self(exps)
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u32) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = e;
        Self::new(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, degrees: &[usize]) -> usize {
        self.0.iter().zip(degrees).map(|(&e, &d)| e as usize * d).sum()
    }

    pub fn total_exponent(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| e <= other.exp(i))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Self::new((0..n).map(|i| self.exp(i).max(other.exp(i))).collect())
    }

    pub fn gcd_is_one(&self, other: &Monomial) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| e == 0 || other.exp(i) == 0)
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Self::new(self.0.iter().enumerate().map(|(i, &e)| e - other.exp(i)).collect())
    }

    pub fn mul_plain(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Self::new((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// Index of the first generator with a nonzero exponent.
    pub fn first_var(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e))
    }
}

/// Generator data shared by everything that multiplies monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub field: PrimeField,
    pub degrees: Vec<usize>,
}

impl Grading {
    pub fn new(field: PrimeField, degrees: Vec<usize>) -> Self {
        Self { field, degrees }
    }

    /// Whether generator `i` anticommutes and squares to zero.
    pub fn is_exterior(&self, i: usize) -> bool {
        self.field.p() != 2 && self.degrees[i] % 2 == 1
    }

    /// A monomial is admissible when no exterior generator is repeated.
    pub fn admissible(&self, m: &Monomial) -> bool {
        m.support().all(|(i, e)| e == 1 || !self.is_exterior(i))
    }

    /// Graded-commutative product of monomials in normal order: the result
    /// monomial and its sign, or `None` when an exterior generator repeats.
    pub fn mul(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, u32)> {
        let m = a.mul_plain(b);
        if !self.admissible(&m) {
            return None;
        }
        let f = self.field;
        if f.p() == 2 {
            return Some((m, 1));
        }
        // Moving each exterior factor of `b` left past the exterior factors of
        // `a` with larger index.
        let mut swaps = 0usize;
        for (j, _) in b.support().filter(|&(j, _)| self.is_exterior(j)) {
            swaps += a.support().filter(|&(i, _)| i > j && self.is_exterior(i)).count();
        }
        Some((m, if swaps.is_multiple_of(2) { 1 } else { f.neg(1) }))
    }

    /// All admissible monomials of degree `n`, largest first.
    pub fn monomials_of_degree(&self, n: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.degrees.len()];
        self.enumerate(0, n, &mut exps, &mut out);
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    fn enumerate(&self, i: usize, remaining: usize, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == self.degrees.len() {
            if remaining == 0 {
                out.push(Monomial::new(exps.clone()));
            }
            return;
        }
        let d = self.degrees[i];
        let max = if self.is_exterior(i) { 1 } else { remaining / d };
        for e in 0..=max.min(remaining / d) {
            exps[i] = e as u32;
            self.enumerate(i + 1, remaining - e * d, exps, out);
        }
        exps[i] = 0;
    }
}

/// A polynomial with coefficients in `F_p`, terms keyed by monomial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, u32>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: u32) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: u32) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Monomial::var(i), 1)
    }

    pub fn from_terms(field: PrimeField, terms: impl IntoIterator<Item = (Monomial, u32)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(field, m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, field: PrimeField, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                let v = field.add(*o.get(), c);
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
        }
    }

    pub fn add(&self, field: PrimeField, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(field, m.clone(), c);
        }
        out
    }

    pub fn scale(&self, field: PrimeField, c: u32) -> Polynomial {
        Self::from_terms(field, self.terms().map(|(m, v)| (m.clone(), field.mul(v, c))))
    }

    pub fn mul(&self, grading: &Grading, other: &Polynomial) -> Polynomial {
        let f = grading.field;
        let mut out = Polynomial::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if let Some((m, s)) = grading.mul(a, b) {
                    out.add_term(f, m, f.mul(s, f.mul(ca, cb)));
                }
            }
        }
        out
    }

    pub fn pow(&self, grading: &Grading, e: u64) -> Polynomial {
        let mut out = Polynomial::constant(1);
        for _ in 0..e {
            out = out.mul(grading, self);
        }
        out
    }

    /// The common degree of all terms, or an error if terms disagree.
    /// The zero polynomial has no degree.
    pub fn homogeneous_degree(&self, degrees: &[usize]) -> Result<Option<usize>> {
        let mut deg = None;
        for (m, _) in self.terms() {
            if m.exponents().len() > degrees.len() {
                return Err(Error::InvalidPresentation("monomial uses an unknown generator".into()));
            }
            let d = m.degree(degrees);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(Error::NotHomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Largest monomial.
    pub fn leading(&self) -> Option<(&Monomial, u32)> {
        self.terms().next_back()
    }

    /// Drop terms that vanish in the graded-commutative algebra.
    pub fn normalize(&self, grading: &Grading) -> Polynomial {
        Self::from_terms(
            grading.field,
            self.terms()
                .filter(|(m, _)| grading.admissible(m))
                .map(|(m, c)| (m.clone(), c)),
        )
    }

    /// Substitute polynomials for the generators.
    pub fn substitute(&self, target: &Grading, images: &[Polynomial]) -> Polynomial {
        let f = target.field;
        let mut out = Polynomial::zero();
        for (m, c) in self.terms() {
            let mut term = Polynomial::constant(c);
            for (i, e) in m.support() {
                term = term.mul(target, &images[i].pow(target, e as u64));
            }
            out = out.add(f, &term);
        }
        out
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms().rev() {
            let mut factors: Vec<String> = m
                .support()
                .map(|(i, e)| {
                    let name = names.get(i).cloned().unwrap_or_else(|| format!("g{i}"));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if c != 1 || factors.is_empty() {
                factors.insert(0, c.to_string());
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
}

/// A graded-commutative algebra `F_p[generators] / (relations)`.
///
/// At odd `p` odd-degree generators anticommute and square to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPresentation {
    grading: Grading,
    generators: Vec<Generator>,
    relations: Vec<Polynomial>,
}

impl GradedPresentation {
    pub fn new(p: u32, generators: Vec<Generator>, relations: Vec<Polynomial>) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if let Some(g) = generators.iter().find(|g| g.degree == 0) {
            return Err(Error::InvalidPresentation(format!(
                "generator {} has degree 0",
                g.name
            )));
        }
        let grading = Grading::new(field, generators.iter().map(|g| g.degree).collect());
        let mut pres = Self {
            grading,
            generators,
            relations: Vec::new(),
        };
        for r in relations {
            pres.add_relation(r)?;
        }
        Ok(pres)
    }

    pub fn polynomial_ring(p: u32, degrees: &[usize]) -> Result<Self> {
        let gens = degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| Generator {
                name: format!("x{}", i + 1),
                degree: d,
            })
            .collect();
        Self::new(p, gens, Vec::new())
    }

    pub fn add_relation(&mut self, r: Polynomial) -> Result<()> {
        let reduced = r.normalize(&self.grading);
        match reduced.homogeneous_degree(&self.grading.degrees)? {
            None => Ok(()),
            Some(0) => Err(Error::InvalidPresentation(
                "relation has a nonzero constant term".into(),
            )),
            Some(_) => {
                self.relations.push(reduced);
                Ok(())
            }
        }
    }

    pub fn add_generator(&mut self, g: Generator) -> Result<usize> {
        if g.degree == 0 {
            return Err(Error::InvalidPresentation("generator of degree 0".into()));
        }
        self.grading.degrees.push(g.degree);
        self.generators.push(g);
        Ok(self.generators.len() - 1)
    }

    /// The same ring with extra relations (a quotient).
    pub fn quotient(&self, extra: &[Polynomial]) -> Result<Self> {
        let mut q = self.clone();
        for r in extra {
            q.add_relation(r.clone())?;
        }
        Ok(q)
    }

    pub fn p(&self) -> u32 {
        self.grading.field.p()
    }
    pub fn field(&self) -> PrimeField {
        self.grading.field
    }
    pub fn grading(&self) -> &Grading {
        &self.grading
    }
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }
    pub fn degrees(&self) -> &[usize] {
        &self.grading.degrees
    }
    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }
    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn max_generator_degree(&self) -> usize {
        self.degrees().iter().copied().max().unwrap_or(0)
    }

    pub fn max_relation_degree(&self) -> usize {
        self.relations
            .iter()
            .filter_map(|r| r.homogeneous_degree(self.degrees()).ok().flatten())
            .max()
            .unwrap_or(0)
    }

    /// Parse-free constructor for a homogeneous element of this ring.
    pub fn element_degree(&self, e: &Polynomial) -> Result<Option<usize>> {
        e.normalize(&self.grading).homogeneous_degree(self.degrees())
    }
}

impl fmt::Display for GradedPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names();
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| format!("{}:{}", g.name, g.degree))
            .collect();
        write!(f, "F_{}[{}]", self.p(), gens.join(", "))?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|r| r.display(&names)).collect();
            write!(f, " / ({})", rels.join(", "))?;
        }
        Ok(())
    }
}

/// A presentation whose generators and relations all live in degrees `≤ N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPresentation {
    pub base: GradedPresentation,
    pub n: usize,
}

impl TruncatedPresentation {
    pub fn new(base: GradedPresentation, n: usize) -> Result<Self> {
        if base.max_generator_degree() > n || base.max_relation_degree() > n {
            return Err(Error::InvalidPresentation(format!(
                "presentation has data above the truncation degree {n}"
            )));
        }
        Ok(Self { base, n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn monomial_basics() {
        let a = Monomial::new(vec![1, 2, 0, 0]);
        assert_eq!(a.exponents(), &[1, 2]);
        assert!(Monomial::var(0).divides(&a));
        assert!(!Monomial::var(2).divides(&a));
        assert_eq!(a.degree(&[1, 2, 3]), 5);
        assert_eq!(a.lcm(&Monomial::var(2)), Monomial::new(vec![1, 2, 1]));
        assert!(Monomial::new(vec![1, 0]) < Monomial::new(vec![1, 0, 1]));
    }

    #[test]
    fn degree_enumeration() {
        let g = Grading::new(f(2), vec![1, 1]);
        assert_eq!(g.monomials_of_degree(3).len(), 4);
        assert_eq!(g.monomials_of_degree(3)[0], Monomial::new(vec![3]));
        let g = Grading::new(f(3), vec![1, 2]);
        // x exterior: degree 3 has only x*y.
        assert_eq!(g.monomials_of_degree(3), vec![Monomial::new(vec![1, 1])]);
    }

    #[test]
    fn koszul_signs() {
        let g = Grading::new(f(3), vec![1, 1, 2]);
        let x = Monomial::var(0);
        let y = Monomial::var(1);
        assert_eq!(g.mul(&x, &y), Some((Monomial::new(vec![1, 1]), 1)));
        assert_eq!(g.mul(&y, &x), Some((Monomial::new(vec![1, 1]), 2)));
        assert_eq!(g.mul(&x, &x), None);
        let z = Monomial::var(2);
        assert_eq!(g.mul(&z, &x), Some((Monomial::new(vec![1, 0, 1]), 1)));
    }

    #[test]
    fn polynomial_arithmetic() {
        let g = Grading::new(f(2), vec![1, 1]);
        let x = Polynomial::var(0);
        let y = Polynomial::var(1);
        let s = x.add(g.field, &y);
        let sq = s.mul(&g, &s);
        // (x+y)^2 = x^2 + y^2 in characteristic 2.
        assert_eq!(sq.len(), 2);
        assert_eq!(sq.homogeneous_degree(&g.degrees).unwrap(), Some(2));
        assert!(x.add(g.field, &x).is_zero());
        assert_eq!(sq.display(&["x".into(), "y".into()]), "x^2 + y^2");
    }

    #[test]
    fn presentation_validation() {
        let x = Polynomial::var(0);
        let y2 = Polynomial::monomial(Monomial::var_pow(1, 1), 1);
        let bad = x.add(f(2), &Polynomial::monomial(Monomial::var_pow(0, 2), 1));
        let gens = vec![
            Generator { name: "x".into(), degree: 1 },
            Generator { name: "y".into(), degree: 2 },
        ];
        assert!(matches!(
            GradedPresentation::new(2, gens.clone(), vec![bad]),
            Err(Error::NotHomogeneous)
        ));
        assert!(GradedPresentation::new(2, gens.clone(), vec![y2]).is_ok());
        assert!(GradedPresentation::new(4, gens, vec![]).is_err());
    }
}
