use std::fmt;

use super::poly::Monomial;

/// Integer polynomial in `t`, index = exponent, no trailing zeros.
pub type IntPoly = Vec<i64>;

fn trim(mut p: IntPoly) -> IntPoly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

pub fn poly_add(a: &[i64], b: &[i64]) -> IntPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect())
}

pub fn poly_sub(a: &[i64], b: &[i64]) -> IntPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).unwrap_or(&0) - b.get(i).unwrap_or(&0)).collect())
}

pub fn poly_mul(a: &[i64], b: &[i64]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn monomial_t(k: usize, c: i64) -> IntPoly {
    let mut v = vec![0; k + 1];
    v[k] = c;
    trim(v)
}

/// `1 - t^d`.
pub fn one_minus_t(d: usize) -> IntPoly {
    poly_sub(&[1], &monomial_t(d, 1))
}

/// Exact quotient `p / (1 - t^d)` if it is a polynomial.
pub fn div_one_minus_t(p: &[i64], d: usize) -> Option<IntPoly> {
    if p.is_empty() {
        return Some(Vec::new());
    }
    let deg = p.len() - 1;
    if deg < d {
        return None;
    }
    let mut q = vec![0i64; deg - d + 1];
    for k in 0..q.len() {
        q[k] = p[k] + if k >= d { q[k - d] } else { 0 };
    }
    for k in (deg - d + 1)..=deg {
        let carried = if k >= d && k - d < q.len() { q[k - d] } else { 0 };
        if p[k] + carried != 0 {
            return None;
        }
    }
    Some(trim(q))
}

/// A rational Hilbert series `numerator / Π (1 - t^{d})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    pub numerator: IntPoly,
    pub denominator: Vec<usize>,
}

impl HilbertSeries {
    pub fn new(numerator: IntPoly, denominator: Vec<usize>) -> Self {
        Self {
            numerator: trim(numerator),
            denominator,
        }
    }

    pub fn polynomial(p: IntPoly) -> Self {
        Self::new(p, Vec::new())
    }

    fn denominator_poly(&self) -> IntPoly {
        self.denominator
            .iter()
            .fold(vec![1], |acc, &d| poly_mul(&acc, &one_minus_t(d)))
    }

    /// Coefficients of degrees `0..=n`.
    pub fn expand(&self, n: usize) -> Vec<i64> {
        let mut c: Vec<i64> = (0..=n).map(|k| *self.numerator.get(k).unwrap_or(&0)).collect();
        for &d in &self.denominator {
            for k in d..=n {
                c[k] += c[k - d];
            }
        }
        c
    }

    pub fn same_series(&self, other: &HilbertSeries) -> bool {
        poly_mul(&self.numerator, &other.denominator_poly())
            == poly_mul(&other.numerator, &self.denominator_poly())
    }

    /// The series as a polynomial, when the module has finite length.
    pub fn as_polynomial(&self) -> Option<IntPoly> {
        let mut p = self.numerator.clone();
        for &d in &self.denominator {
            p = div_one_minus_t(&p, d)?;
        }
        Some(p)
    }

    /// Top nonzero degree of a finite-length module; `None` if it is zero.
    pub fn top_degree(&self) -> Option<Option<usize>> {
        self.as_polynomial().map(|p| p.len().checked_sub(1))
    }

    /// Order of the pole at `t = 1`; zero for finite length, `None` for the zero module.
    pub fn krull_dimension(&self) -> Option<usize> {
        if self.numerator.is_empty() {
            return None;
        }
        let mut p = self.numerator.clone();
        let mut order = 0;
        while let Some(q) = div_one_minus_t(&p, 1) {
            if q.is_empty() {
                break;
            }
            p = q;
            order += 1;
        }
        Some(self.denominator.len().saturating_sub(order))
    }

    pub fn add(&self, other: &HilbertSeries) -> HilbertSeries {
        let mut denominator = self.denominator.clone();
        denominator.extend(&other.denominator);
        HilbertSeries::new(
            poly_add(
                &poly_mul(&self.numerator, &other.denominator_poly()),
                &poly_mul(&other.numerator, &self.denominator_poly()),
            ),
            denominator,
        )
    }

    pub fn negate(&self) -> HilbertSeries {
        HilbertSeries::new(self.numerator.iter().map(|c| -c).collect(), self.denominator.clone())
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = if self.numerator.is_empty() {
            "0".to_string()
        } else {
            self.numerator
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(k, c)| match k {
                    0 => c.to_string(),
                    1 => format!("{c}t"),
                    _ => format!("{c}t^{k}"),
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        if self.denominator.is_empty() {
            return write!(f, "{num}");
        }
        let den: Vec<String> = self.denominator.iter().map(|d| format!("(1-t^{d})")).collect();
        write!(f, "({num}) / {}", den.join(""))
    }
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(Monomial::total_exponent);
    let mut out: Vec<Monomial> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

/// Numerator `N(t)` of the Hilbert series of `k[x] / L` for a monomial ideal
/// `L`, with respect to the denominator `Π (1 - t^{d_i})`.
pub fn monomial_quotient_numerator(gens: &[Monomial], degrees: &[usize]) -> IntPoly {
    numerator_rec(minimalize(gens.to_vec()), degrees)
}

fn numerator_rec(gens: Vec<Monomial>, degrees: &[usize]) -> IntPoly {
    if gens.iter().any(Monomial::is_one) {
        return Vec::new();
    }
    // Pivot on a variable of some generator that is not a pure power.
    let pivot = gens
        .iter()
        .find(|g| g.support().count() > 1)
        .and_then(|g| g.first_var());
    match pivot {
        None => gens.iter().fold(vec![1], |acc, g| {
            let (i, e) = g.support().next().expect("nonconstant");
            poly_mul(&acc, &one_minus_t(e as usize * degrees[i]))
        }),
        Some(i) => {
            let x = Monomial::var(i);
            let mut with_x = gens.clone();
            with_x.push(x.clone());
            let colon: Vec<Monomial> = gens
                .iter()
                .map(|g| if x.divides(g) { g.div(&x) } else { g.clone() })
                .collect();
            let a = numerator_rec(minimalize(with_x), degrees);
            let b = numerator_rec(minimalize(colon), degrees);
            poly_add(&a, &poly_mul(&monomial_t(degrees[i], 1), &b))
        }
    }
}
