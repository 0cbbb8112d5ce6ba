//! Finite p-groups given by multiplication tables, their subgroups and
//! elementary abelian subgroups.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::linalg::is_prime;

pub const DEFAULT_ORDER_CAP: usize = 128;

/// A finite p-group. Element `0` is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PGroup {
    p: u32,
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
}

impl PGroup {
    /// Close a set of permutations (1-based image arrays) under composition.
    ///
    /// Elements are numbered breadth-first over generator words, the identity first.
    pub fn from_permutations(p: u32, generators: &[Vec<usize>], cap: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let degree = generators.iter().map(Vec::len).max().unwrap_or(0);
        let mut gens: Vec<Vec<usize>> = Vec::new();
        for g in generators {
            // Pad shorter permutations with fixed points.
            let mut perm: Vec<usize> = (0..degree).collect();
            let mut seen = vec![false; degree];
            for (i, &img) in g.iter().enumerate() {
                if img == 0 || img > degree {
                    return Err(Error::InvalidGroup(format!(
                        "image {img} out of range 1..={degree}"
                    )));
                }
                perm[i] = img - 1;
            }
            for &img in &perm {
                if std::mem::replace(&mut seen[img], true) {
                    return Err(Error::InvalidGroup(format!(
                        "generator {g:?} is not a permutation"
                    )));
                }
            }
            gens.push(perm);
        }

        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let next = compose(&elements[i], g);
                if !index.contains_key(&next) {
                    if elements.len() >= cap {
                        return Err(Error::OrderCap { cap });
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }

        let order = elements.len();
        if !is_power_of(order, p) {
            return Err(Error::NotPGroup { p, order });
        }
        let mut table = vec![0; order * order];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                table[i * order + j] = index[&compose(a, b)];
            }
        }
        let mut generators: Vec<usize> = gens.iter().map(|g| index[g]).filter(|&i| i != 0).collect();
        generators.dedup();
        let mut seen = BTreeSet::new();
        generators.retain(|g| seen.insert(*g));
        Self::assemble(p, order, table, Some(generators))
    }

    /// Build from a 0-based multiplication table with the identity at index 0.
    pub fn from_table(p: u32, rows: &[Vec<usize>], cap: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let order = rows.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if order > cap {
            return Err(Error::OrderCap { cap });
        }
        let mut table = Vec::with_capacity(order * order);
        for row in rows {
            if row.len() != order {
                return Err(Error::InvalidGroup("table is not square".into()));
            }
            if row.iter().any(|&x| x >= order) {
                return Err(Error::InvalidGroup("table entry out of range".into()));
            }
            table.extend_from_slice(row);
        }
        for i in 0..order {
            if table[i] != i || table[i * order] != i {
                return Err(Error::InvalidGroup("element 0 is not the identity".into()));
            }
            let mut seen = vec![false; order];
            for j in 0..order {
                if std::mem::replace(&mut seen[table[i * order + j]], true) {
                    return Err(Error::InvalidGroup("table is not a latin square".into()));
                }
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = table[a * order + b];
                for c in 0..order {
                    if table[ab * order + c] != table[a * order + table[b * order + c]] {
                        return Err(Error::InvalidGroup("multiplication is not associative".into()));
                    }
                }
            }
        }
        if !is_power_of(order, p) {
            return Err(Error::NotPGroup { p, order });
        }
        Self::assemble(p, order, table, None)
    }

    fn assemble(p: u32, order: usize, table: Vec<usize>, generators: Option<Vec<usize>>) -> Result<Self> {
        let mut inverse = vec![0; order];
        for a in 0..order {
            inverse[a] = (0..order)
                .find(|&b| table[a * order + b] == 0)
                .ok_or_else(|| Error::InvalidGroup("missing inverse".into()))?;
        }
        let mut g = Self {
            p,
            order,
            table,
            inverse,
            generators: Vec::new(),
        };
        g.generators = match generators {
            Some(gens) => gens,
            None => g.greedy_generators(&(0..order).collect::<Vec<_>>()),
        };
        if (0..order).any(|x| !is_power_of(g.element_order(x), p)) {
            return Err(Error::NotPGroup { p, order });
        }
        Ok(g)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// `log_p |G|`.
    pub fn log_order(&self) -> u32 {
        log_p(self.order, self.p)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut elems = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    elems.push(y);
                    queue.push_back(y);
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    /// Walk `candidates` in order, keeping each element not already generated.
    fn greedy_generators(&self, candidates: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for &c in candidates {
            if span.binary_search(&c).is_err() {
                gens.push(c);
                span = self.closure(&gens);
            }
        }
        gens
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.commute(z, g)))
            .collect()
    }

    /// p-rank of the center: rank of its subgroup of elements of order dividing p.
    pub fn center_rank(&self) -> u32 {
        let omega = self
            .center()
            .into_iter()
            .filter(|&z| self.element_order(z) <= self.p as usize)
            .count();
        log_p(omega, self.p)
    }

    pub fn subgroup(&self, gens: &[usize]) -> SubgroupEmbedding {
        SubgroupEmbedding {
            elements: self.closure(gens),
        }
    }

    /// All elementary abelian subgroups, trivial one included, in a deterministic order.
    pub fn elementary_abelian_subgroups(&self) -> Vec<SubgroupEmbedding> {
        let order_p: Vec<usize> = (1..self.order)
            .filter(|&x| self.element_order(x) == self.p as usize)
            .collect();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::from([vec![0usize]]);
        found.insert(vec![0]);
        while let Some(s) = queue.pop_front() {
            for &t in &order_p {
                if s.binary_search(&t).is_ok() || !s.iter().all(|&x| self.commute(x, t)) {
                    continue;
                }
                let mut gens = s.clone();
                gens.push(t);
                let bigger = self.closure(&gens);
                if found.insert(bigger.clone()) {
                    queue.push_back(bigger);
                }
            }
        }
        let mut all: Vec<Vec<usize>> = found.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all.into_iter()
            .map(|elements| SubgroupEmbedding { elements })
            .collect()
    }

    /// Conjugacy classes of maximal elementary abelian subgroups.
    pub fn maximal_elementary_abelians(&self) -> ElabClassList {
        let order_p: Vec<usize> = (1..self.order)
            .filter(|&x| self.element_order(x) == self.p as usize)
            .collect();
        let mut maximal: Vec<SubgroupEmbedding> = self
            .elementary_abelian_subgroups()
            .into_iter()
            .filter(|s| {
                !order_p
                    .iter()
                    .any(|&t| !s.contains(t) && s.elements.iter().all(|&x| self.commute(x, t)))
            })
            .collect();
        // Larger subgroups first so representatives are stable.
        maximal.sort_by(|a, b| b.order().cmp(&a.order()).then_with(|| a.elements.cmp(&b.elements)));
        let mut classes: Vec<ElabClass> = Vec::new();
        for s in maximal {
            let conjugate_seen = classes.iter().any(|c| {
                c.representative.order() == s.order()
                    && (0..self.order).any(|g| self.conjugate_subgroup(&c.representative, g) == s)
            });
            if !conjugate_seen {
                let rank = log_p(s.order(), self.p);
                classes.push(ElabClass {
                    representative: s,
                    rank,
                });
            }
        }
        ElabClassList { classes }
    }

    pub fn conjugate_subgroup(&self, s: &SubgroupEmbedding, g: usize) -> SubgroupEmbedding {
        let mut elements: Vec<usize> = s.elements.iter().map(|&x| self.conjugate(g, x)).collect();
        elements.sort_unstable();
        SubgroupEmbedding { elements }
    }

    pub fn p_rank(&self) -> u32 {
        self.maximal_elementary_abelians().p_rank()
    }

    /// The subgroup as a group in its own right, with the map from its
    /// element indices back into `self`.
    pub fn subgroup_as_group(&self, s: &SubgroupEmbedding) -> Result<(PGroup, Vec<usize>)> {
        let elems = &s.elements;
        let n = elems.len();
        let local: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut table = vec![0; n * n];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                table[i * n + j] = *local
                    .get(&self.mul(a, b))
                    .ok_or_else(|| Error::InvalidGroup("subgroup is not closed".into()))?;
            }
        }
        let sub = PGroup::assemble(self.p, n, table, None)?;
        Ok((sub, elems.clone()))
    }
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn is_power_of(mut n: usize, p: u32) -> bool {
    let p = p as usize;
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

fn log_p(mut n: usize, p: u32) -> u32 {
    let mut k = 0;
    while n > 1 {
        n /= p as usize;
        k += 1;
    }
    k
}

/// A subgroup as a sorted list of element indices in its parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupEmbedding {
    pub elements: Vec<usize>,
}

impl SubgroupEmbedding {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &SubgroupEmbedding) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn is_elementary_abelian(&self, g: &PGroup) -> bool {
        self.elements.iter().all(|&x| {
            g.element_order(x) <= g.p() as usize && self.elements.iter().all(|&y| g.commute(x, y))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElabClass {
    pub representative: SubgroupEmbedding,
    pub rank: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElabClassList {
    pub classes: Vec<ElabClass>,
}

impl ElabClassList {
    pub fn p_rank(&self) -> u32 {
        self.classes.iter().map(|c| c.rank).max().unwrap_or(0)
    }
}

/// Small groups used throughout the tests and examples.
pub mod named {
    use super::*;

    pub fn cyclic(p: u32, n: usize) -> Result<PGroup> {
        let gen: Vec<usize> = (0..n).map(|i| (i + 1) % n + 1).collect();
        PGroup::from_permutations(p, &[gen], DEFAULT_ORDER_CAP)
    }

    /// `(Z/p)^r` acting on `r` disjoint p-cycles.
    pub fn elementary_abelian(p: u32, r: usize) -> Result<PGroup> {
        let p_us = p as usize;
        let gens: Vec<Vec<usize>> = (0..r)
            .map(|k| {
                (0..p_us * r)
                    .map(|i| {
                        if i / p_us == k {
                            k * p_us + (i % p_us + 1) % p_us + 1
                        } else {
                            i + 1
                        }
                    })
                    .collect()
            })
            .collect();
        PGroup::from_permutations(p, &gens, DEFAULT_ORDER_CAP)
    }

    pub fn klein() -> Result<PGroup> {
        PGroup::from_permutations(2, &[vec![2, 1, 3, 4], vec![1, 2, 4, 3]], DEFAULT_ORDER_CAP)
    }

    /// Dihedral group of order 8 as symmetries of a square.
    pub fn dihedral8() -> Result<PGroup> {
        PGroup::from_permutations(2, &[vec![2, 3, 4, 1], vec![3, 2, 1, 4]], DEFAULT_ORDER_CAP)
    }

    /// Quaternion group, via its left-regular permutation representation.
    pub fn quaternion8() -> Result<PGroup> {
        // Units ±1, ±i, ±j, ±k encoded as (sign, axis) with axis 0..4 = 1,i,j,k.
        fn mul(a: (i8, u8), b: (i8, u8)) -> (i8, u8) {
            const T: [[(i8, u8); 4]; 4] = [
                [(1, 0), (1, 1), (1, 2), (1, 3)],
                [(1, 1), (-1, 0), (1, 3), (-1, 2)],
                [(1, 2), (-1, 3), (-1, 0), (1, 1)],
                [(1, 3), (1, 2), (-1, 1), (-1, 0)],
            ];
            let (s, c) = T[a.1 as usize][b.1 as usize];
            (a.0 * b.0 * s, c)
        }
        let units: Vec<(i8, u8)> = [1i8, -1]
            .iter()
            .flat_map(|&s| (0..4u8).map(move |c| (s, c)))
            .collect();
        let pos = |u: (i8, u8)| units.iter().position(|&v| v == u).unwrap() + 1;
        let left = |g: (i8, u8)| units.iter().map(|&x| pos(mul(g, x))).collect::<Vec<_>>();
        PGroup::from_permutations(2, &[left((1, 1)), left((1, 2))], DEFAULT_ORDER_CAP)
    }
}
