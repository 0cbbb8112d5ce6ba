use crate::error::{Error, Result};

use super::basis::DegreeBasis;
use super::poly::{GradedPresentation, Monomial};
use super::series::{monomial_quotient_numerator, HilbertSeries};

/// Evidence that the leading monomials found through degree `through`
/// generate the whole leading-monomial ideal.
///
/// The degreewise echelon forms are exact in every computed degree. Once the
/// computation covers every relation degree and the degree of every
/// S-polynomial of the minimal leading monomials (and, at odd `p`, every
/// product of a generator with an exterior variable of its leading term),
/// Buchberger's criterion holds and the leading ideal is known in all degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerCertificate {
    pub through: usize,
    pub leading: Vec<Monomial>,
    pub required: usize,
}

pub const DEFAULT_CERTIFY_CAP: usize = 200;

/// Minimal generators of the leading-monomial ideal found through the computed degrees.
pub fn minimal_leading(basis: &DegreeBasis) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    for n in 0..=basis.through().unwrap_or(0) {
        if basis.through().is_none() {
            break;
        }
        for m in basis.part(n).leading_monomials() {
            if !out.iter().any(|g| g.divides(&m)) {
                out.push(m);
            }
        }
    }
    out
}

fn required_degree(pres: &GradedPresentation, leading: &[Monomial]) -> usize {
    let grading = pres.grading();
    let deg = |m: &Monomial| m.degree(&grading.degrees);
    let mut req = pres.max_relation_degree();
    let commutative = pres.p() == 2;
    for (i, a) in leading.iter().enumerate() {
        for b in &leading[i + 1..] {
            if commutative && a.gcd_is_one(b) {
                continue;
            }
            req = req.max(deg(&a.lcm(b)));
        }
        for (v, _) in a.support().filter(|&(v, _)| grading.is_exterior(v)) {
            req = req.max(deg(a) + grading.degrees[v]);
        }
    }
    req
}

/// Extend `basis` until its leading ideal is certified, up to degree `cap`.
pub fn certify(basis: &mut DegreeBasis, cap: usize) -> Result<GroebnerCertificate> {
    let mut target = basis.presentation().max_relation_degree();
    loop {
        if target > cap {
            return Err(Error::Uncertified(format!(
                "Gröbner certificate needs degree {target}, above the cap {cap}"
            )));
        }
        basis.extend_to(target)?;
        let leading = minimal_leading(basis);
        let required = required_degree(basis.presentation(), &leading);
        if required <= target {
            return Ok(GroebnerCertificate {
                through: target,
                leading,
                required,
            });
        }
        target = required;
    }
}

/// The exact Hilbert series from a certified leading ideal.
pub fn series_from_certificate(pres: &GradedPresentation, cert: &GroebnerCertificate) -> HilbertSeries {
    let grading = pres.grading();
    let mut gens = cert.leading.clone();
    for v in 0..grading.degrees.len() {
        if grading.is_exterior(v) {
            gens.push(Monomial::var_pow(v, 2));
        }
    }
    HilbertSeries::new(
        monomial_quotient_numerator(&gens, &grading.degrees),
        grading.degrees.clone(),
    )
}

/// Certified Hilbert series of a presentation.
pub fn exact_hilbert_series(pres: &GradedPresentation) -> Result<HilbertSeries> {
    let mut basis = DegreeBasis::new(pres);
    let cert = certify(&mut basis, DEFAULT_CERTIFY_CAP)?;
    Ok(series_from_certificate(pres, &cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gring::poly::{Generator, Polynomial};
    use crate::linalg::PrimeField;

    fn mono(e: &[u32]) -> Polynomial {
        Polynomial::monomial(Monomial::new(e.to_vec()), 1)
    }

    fn ring(p: u32, degrees: &[usize], rels: Vec<Polynomial>) -> GradedPresentation {
        let gens = degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| Generator { name: format!("x{}", i + 1), degree: d })
            .collect();
        GradedPresentation::new(p, gens, rels).unwrap()
    }

    #[test]
    fn quaternion_series() {
        let f = PrimeField::new(2).unwrap();
        let r1 = mono(&[2]).add(f, &mono(&[1, 1])).add(f, &mono(&[0, 2]));
        let r2 = mono(&[2, 1]).add(f, &mono(&[1, 2]));
        let q8 = ring(2, &[1, 1, 4], vec![r1, r2]);
        let h = exact_hilbert_series(&q8).unwrap();
        assert!(h.same_series(&HilbertSeries::new(vec![1, 2, 2, 1], vec![4])));
        let dims = crate::gring::basis::hilbert(&q8, 12).unwrap();
        let expect: Vec<i64> = dims.iter().map(|&d| d as i64).collect();
        assert_eq!(h.expand(12), expect);
    }

    #[test]
    fn dihedral_series() {
        let d8 = ring(2, &[1, 1, 2], vec![mono(&[1, 1])]);
        let h = exact_hilbert_series(&d8).unwrap();
        let expect: Vec<i64> = (1..=11).collect();
        assert_eq!(h.expand(10), expect);
        assert_eq!(h.krull_dimension(), Some(2));
    }

    #[test]
    fn certification_extends_past_relations() {
        // x^2 + yz with y > z in the order needs an S-pair check in higher degree.
        let f = PrimeField::new(2).unwrap();
        let r = mono(&[0, 2]).add(f, &mono(&[1, 0, 1]));
        let s = mono(&[1, 1]);
        let pres = ring(2, &[1, 1, 1], vec![r, s]);
        let mut basis = DegreeBasis::new(&pres);
        let cert = certify(&mut basis, 50).unwrap();
        assert!(cert.through >= cert.required);
        let h = series_from_certificate(&pres, &cert);
        let dims = crate::gring::basis::hilbert(&pres, 10).unwrap();
        let expect: Vec<i64> = dims.iter().map(|&d| d as i64).collect();
        assert_eq!(h.expand(10), expect);
    }

    #[test]
    fn odd_prime_series() {
        let z3 = ring(3, &[1, 2], vec![]);
        let h = exact_hilbert_series(&z3).unwrap();
        assert_eq!(h.expand(6), vec![1; 7]);
        let q = ring(3, &[1, 1, 2], vec![mono(&[1, 1])]);
        let h = exact_hilbert_series(&q).unwrap();
        let dims = crate::gring::basis::hilbert(&q, 8).unwrap();
        assert_eq!(h.expand(8), dims.iter().map(|&d| d as i64).collect::<Vec<_>>());
    }
}
