//! Finite abelian p-groups, Pontryagin duality and subgroup lattices.
//!
//! A group `Z/p^e1 x ... x Z/p^er` is stored with its exponents sorted
//! non-increasing. Elements and dual characters are both addressed by a dense
//! index in lexicographic order of their coordinate vectors (first coordinate
//! most significant), so index order and coordinate order agree everywhere.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of subgroups a single enumeration may produce.
pub const DEFAULT_MAX_SUBGROUPS: usize = 1 << 16;

/// Largest group order the index arithmetic accepts.
const MAX_ORDER: u128 = 1 << 32;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Z/p^e1 x Z/p^e2 x ... x Z/p^er` with `e1 >= e2 >= ... >= er >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianPGroup {
    prime: u64,
    exponents: Vec<u32>,
    moduli: Vec<u64>,
    /// `p^(e1 - ei)`: scales coordinate `i` into `Z/p^e1` for the pairing.
    weights: Vec<u64>,
    strides: Vec<usize>,
    order: usize,
}

/// Coordinates of an element of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

/// Coordinates of a character `A -> roots of unity`, acting by
/// `chi(a) = zeta_{p^e1}^(sum_i c_i a_i p^(e1 - ei))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualCharacter {
    pub coords: Vec<u64>,
}

impl FiniteAbelianPGroup {
    pub fn new(prime: u64, exponents: &[u32]) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if exponents.is_empty() {
            return Err(Error::EmptyExponents);
        }
        if exponents.contains(&0) {
            return Err(Error::NonPositiveExponent);
        }
        let mut exponents = exponents.to_vec();
        exponents.sort_unstable_by(|a, b| b.cmp(a));

        let total: u32 = exponents.iter().sum();
        let order = (prime as u128)
            .checked_pow(total)
            .filter(|&o| o <= MAX_ORDER);
        let Some(order) = order else {
            return Err(Error::BoundExceeded {
                what: "group order",
                limit: MAX_ORDER,
                actual: (prime as f64).powi(total as i32).min(u128::MAX as f64) as u128,
            });
        };

        let moduli: Vec<u64> = exponents.iter().map(|&e| prime.pow(e)).collect();
        let top = exponents[0];
        let weights = exponents.iter().map(|&e| prime.pow(top - e)).collect();
        let mut strides = vec![1usize; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1] as usize;
        }

        Ok(Self {
            prime,
            exponents,
            moduli,
            weights,
            strides,
            order: order as usize,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Orders `p^ei` of the cyclic factors.
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `p^e1`, the largest element order.
    pub fn exponent(&self) -> u64 {
        self.moduli[0]
    }

    /// `e1`, so that `exponent() == p^exponent_log()`.
    pub fn exponent_log(&self) -> u32 {
        self.exponents[0]
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank() == 1
    }

    /// The Pontryagin dual. It has the same invariants; characters are
    /// addressed through [`DualCharacter`] and the pairing.
    pub fn dual(&self) -> FiniteAbelianPGroup {
        self.clone()
    }

    pub fn element(&self, index: usize) -> GroupElement {
        GroupElement {
            coords: self.coords(index),
        }
    }

    pub fn character(&self, index: usize) -> DualCharacter {
        DualCharacter {
            coords: self.coords(index),
        }
    }

    pub fn coords(&self, mut index: usize) -> Vec<u64> {
        let mut out = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            let m = self.moduli[i] as usize;
            out[i] = (index % m) as u64;
            index /= m;
        }
        out
    }

    /// Dense index of a coordinate vector; coordinates are reduced first.
    pub fn index_of(&self, coords: &[u64]) -> Result<usize> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                actual: coords.len(),
            });
        }
        Ok(coords
            .iter()
            .zip(&self.moduli)
            .zip(&self.strides)
            .map(|((&c, &m), &s)| (c % m) as usize * s)
            .sum())
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for i in (0..self.rank()).rev() {
            let m = self.moduli[i] as usize;
            let d = (a % m + b % m) % m;
            out += d * self.strides[i];
            a /= m;
            b /= m;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        self.scale(a, self.exponent() - 1)
    }

    pub fn scale(&self, a: usize, k: u64) -> usize {
        let mut a = a;
        let mut out = 0;
        for i in (0..self.rank()).rev() {
            let m = self.moduli[i];
            let d = ((a as u64 % m) as u128 * k as u128 % m as u128) as usize;
            out += d * self.strides[i];
            a /= m as usize;
        }
        out
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut ord = 1;
        let mut x = a;
        while x != 0 {
            x = self.scale(x, self.prime);
            ord *= self.prime;
        }
        ord
    }

    /// Exponent `k mod p^e1` with `chi(a) = zeta_{p^e1}^k`, on dense indices.
    pub fn pairing_index(&self, chi: usize, a: usize) -> u64 {
        let (mut chi, mut a) = (chi, a);
        let n = self.exponent() as u128;
        let mut acc: u128 = 0;
        for i in (0..self.rank()).rev() {
            let m = self.moduli[i] as usize;
            let c = (chi % m) as u128;
            let x = (a % m) as u128;
            acc = (acc + c * x % n * self.weights[i] as u128) % n;
            chi /= m;
            a /= m;
        }
        acc as u64
    }

    pub fn pairing(&self, chi: &DualCharacter, a: &GroupElement) -> Result<u64> {
        Ok(self.pairing_index(self.index_of(&chi.coords)?, self.index_of(&a.coords)?))
    }

    /// Compact descriptor such as `2^2x2^1`.
    pub fn descriptor(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FiniteAbelianPGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{}^{}", self.prime, e)?;
        }
        Ok(())
    }
}

/// Shorthand for [`FiniteAbelianPGroup::new`].
pub fn make_group(prime: u64, exponents: &[u32]) -> Result<FiniteAbelianPGroup> {
    FiniteAbelianPGroup::new(prime, exponents)
}

/// Every nontrivial abelian p-group of order at most `max_order`, ordered by
/// order and then by exponent list (descending partitions).
pub fn abelian_p_groups(prime: u64, max_order: usize) -> Result<Vec<FiniteAbelianPGroup>> {
    if !is_prime(prime) {
        return Err(Error::NotPrime(prime));
    }
    let mut max_total = 0u32;
    while (prime as u128).pow(max_total + 1) <= max_order as u128 {
        max_total += 1;
    }
    let mut out = Vec::new();
    for total in 1..=max_total {
        let mut parts = Vec::new();
        partitions(total, total, &mut Vec::new(), &mut parts);
        parts.sort_by(|a, b| b.cmp(a));
        for p in parts {
            out.push(FiniteAbelianPGroup::new(prime, &p)?);
        }
    }
    Ok(out)
}

fn partitions(rest: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if rest == 0 {
        out.push(cur.clone());
        return;
    }
    for part in (1..=max_part.min(rest)).rev() {
        cur.push(part);
        partitions(rest - part, part, cur, out);
        cur.pop();
    }
}

/// A subgroup of an ambient group, identified by its sorted element indices.
#[derive(Clone, Debug)]
pub struct Subgroup {
    elements: Vec<usize>,
    members: Vec<u64>,
    generators: Vec<usize>,
    ambient_order: usize,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_order == other.ambient_order && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient_order.hash(state);
        self.elements.hash(state);
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.elements.len(), &self.elements).cmp(&(other.elements.len(), &other.elements))
    }
}

fn bitset(len: usize) -> Vec<u64> {
    vec![0; len.div_ceil(64)]
}

fn bit(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

/// Extends the subgroup `(elements, bits)` by the cyclic group `<g>`.
fn extend(group: &FiniteAbelianPGroup, elements: &mut Vec<usize>, bits: &mut [u64], g: usize) {
    let base = elements.clone();
    let mut shift = g;
    while !bit(bits, shift) {
        for &h in &base {
            let x = group.add(h, shift);
            set_bit(bits, x);
            elements.push(x);
        }
        shift = group.add(shift, g);
    }
}

impl Subgroup {
    pub fn trivial(group: &FiniteAbelianPGroup) -> Self {
        Self::generated_by(group, &[])
    }

    pub fn whole(group: &FiniteAbelianPGroup) -> Self {
        let gens: Vec<usize> = (0..group.rank())
            .map(|i| {
                let mut c = vec![0; group.rank()];
                c[i] = 1;
                group.index_of(&c).expect("unit coordinate vector")
            })
            .collect();
        Self::generated_by(group, &gens)
    }

    /// Closure of a set of elements under addition.
    pub fn generated_by(group: &FiniteAbelianPGroup, gens: &[usize]) -> Self {
        let mut elements = vec![0];
        let mut bits = bitset(group.order());
        set_bit(&mut bits, 0);
        for &g in gens {
            extend(group, &mut elements, &mut bits, g % group.order());
        }
        Self::from_closed(group, elements, bits)
    }

    /// Validates that `elements` is closed under addition and contains 0.
    pub fn from_elements(group: &FiniteAbelianPGroup, elements: &[usize]) -> Result<Self> {
        let mut bits = bitset(group.order());
        for &e in elements {
            if e >= group.order() {
                return Err(Error::NotASubgroup);
            }
            set_bit(&mut bits, e);
        }
        if !bit(&bits, 0) {
            return Err(Error::NotASubgroup);
        }
        let mut elements: Vec<usize> = elements.to_vec();
        elements.sort_unstable();
        elements.dedup();
        // A finite nonempty subset closed under addition is a subgroup.
        for &a in &elements {
            for &b in &elements {
                if !bit(&bits, group.add(a, b)) {
                    return Err(Error::NotASubgroup);
                }
            }
        }
        Ok(Self::from_closed(group, elements, bits))
    }

    fn from_closed(
        group: &FiniteAbelianPGroup,
        mut elements: Vec<usize>,
        members: Vec<u64>,
    ) -> Self {
        elements.sort_unstable();
        let generators = minimal_generators(group, &elements, &members);
        Self {
            elements,
            members,
            generators,
            ambient_order: group.order(),
        }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// A generating set of minimal size (the rank of the subgroup).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.ambient_order / self.elements.len()
    }

    pub fn ambient_order(&self) -> usize {
        self.ambient_order
    }

    pub fn contains(&self, a: usize) -> bool {
        a < self.ambient_order && bit(&self.members, a)
    }

    pub fn is_proper(&self) -> bool {
        self.index() > 1
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient_order == other.ambient_order
            && self.elements.len() <= other.elements.len()
            && self.elements.iter().all(|&e| other.contains(e))
    }

    pub fn intersection(&self, group: &FiniteAbelianPGroup, other: &Subgroup) -> Subgroup {
        let elements: Vec<usize> = self
            .elements
            .iter()
            .copied()
            .filter(|&e| other.contains(e))
            .collect();
        let mut bits = bitset(group.order());
        for &e in &elements {
            set_bit(&mut bits, e);
        }
        Self::from_closed(group, elements, bits)
    }

    pub fn join(&self, group: &FiniteAbelianPGroup, other: &Subgroup) -> Subgroup {
        let mut elements = self.elements.clone();
        let mut bits = self.members.clone();
        for &g in &other.generators {
            extend(group, &mut elements, &mut bits, g);
        }
        Self::from_closed(group, elements, bits)
    }
}

/// Burnside basis: lift a basis of `K / pK` greedily, preferring elements of
/// large order, then small index.
fn minimal_generators(
    group: &FiniteAbelianPGroup,
    elements: &[usize],
    members: &[u64],
) -> Vec<usize> {
    let p = group.prime();
    let mut frattini: Vec<usize> = elements.iter().map(|&e| group.scale(e, p)).collect();
    frattini.sort_unstable();
    frattini.dedup();
    let mut bits = bitset(group.order());
    for &f in &frattini {
        set_bit(&mut bits, f);
    }
    let mut span = frattini;
    if span.len() == elements.len() {
        return Vec::new();
    }
    let mut candidates: Vec<(u64, usize)> = elements
        .iter()
        .map(|&e| (group.element_order(e), e))
        .collect();
    candidates.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut gens = Vec::new();
    for (_, x) in candidates {
        if span.len() == elements.len() {
            break;
        }
        if !bit(&bits, x) {
            debug_assert!(bit(members, x));
            gens.push(x);
            extend(group, &mut span, &mut bits, x);
        }
    }
    gens
}

/// All subgroups of `group`, sorted by order and then by element list.
pub fn enumerate_subgroups(group: &FiniteAbelianPGroup) -> Result<Vec<Subgroup>> {
    enumerate_subgroups_bounded(group, DEFAULT_MAX_SUBGROUPS)
}

/// Like [`enumerate_subgroups`] but fails once more than `max_subgroups`
/// distinct subgroups have been found.
///
/// Every subgroup of a p-group sits at the top of a chain of index-p steps
/// from the trivial group, and each step adjoins one element `g` with `pg` in
/// the smaller subgroup. The search walks those steps breadth first.
pub fn enumerate_subgroups_bounded(
    group: &FiniteAbelianPGroup,
    max_subgroups: usize,
) -> Result<Vec<Subgroup>> {
    let p = group.prime();
    let trivial = Subgroup::trivial(group);
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(trivial.members.clone());
    let mut queue = VecDeque::from([trivial]);
    let mut out = Vec::new();

    while let Some(h) = queue.pop_front() {
        let mut tried = h.members.clone();
        for g in 0..group.order() {
            if bit(&tried, g) || !h.contains(group.scale(g, p)) {
                continue;
            }
            let mut elements = h.elements.clone();
            let mut bits = h.members.clone();
            extend(group, &mut elements, &mut bits, g);
            for &x in &elements {
                set_bit(&mut tried, x);
            }
            if seen.insert(bits.clone()) {
                if seen.len() > max_subgroups {
                    return Err(Error::BoundExceeded {
                        what: "subgroup count",
                        limit: max_subgroups as u128,
                        actual: seen.len() as u128,
                    });
                }
                queue.push_back(Subgroup::from_closed(group, elements, bits));
            }
        }
        out.push(h);
    }
    out.sort();
    Ok(out)
}

/// The index-p subgroups, computed as kernels of the order-p characters (one
/// per line in the p-torsion of the dual).
pub fn maximal_subgroups(group: &FiniteAbelianPGroup) -> Result<Vec<Subgroup>> {
    if group.order() == 1 {
        return Err(Error::TrivialGroup);
    }
    let p = group.prime();
    let mut out = Vec::new();
    for chi in 1..group.order() {
        if group.scale(chi, p) != 0 {
            continue;
        }
        // Keep one representative per nonzero scalar class.
        if (2..p).any(|k| group.scale(chi, k) < chi) {
            continue;
        }
        let kernel: Vec<usize> = (0..group.order())
            .filter(|&a| group.pairing_index(chi, a) == 0)
            .collect();
        let mut bits = bitset(group.order());
        for &a in &kernel {
            set_bit(&mut bits, a);
        }
        out.push(Subgroup::from_closed(group, kernel, bits));
    }
    out.sort();
    Ok(out)
}

/// A homomorphism `A -> (Z/p)^2` given by a 2 x rank integer matrix acting on
/// coordinates mod p. Any integer matrix is well defined since every factor
/// order is divisible by p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surjection {
    prime: u64,
    matrix: [Vec<i64>; 2],
    codomain: FiniteAbelianPGroup,
}

impl Surjection {
    pub fn new(group: &FiniteAbelianPGroup, matrix: [Vec<i64>; 2]) -> Result<Self> {
        for row in &matrix {
            if row.len() != group.rank() {
                return Err(Error::InvalidSurjection(format!(
                    "rows must have {} entries, got {}",
                    group.rank(),
                    row.len()
                )));
            }
        }
        let p = group.prime();
        let rho = Self {
            prime: p,
            matrix,
            codomain: FiniteAbelianPGroup::new(p, &[1, 1])?,
        };
        let mut hit = vec![false; (p * p) as usize];
        for a in 0..group.order() {
            hit[rho.apply(group, a)] = true;
        }
        if hit.iter().all(|&h| h) {
            Ok(rho)
        } else {
            Err(Error::NotSurjective(p))
        }
    }

    /// Reduction mod p of the two largest cyclic factors.
    pub fn project_two_largest(group: &FiniteAbelianPGroup) -> Result<Self> {
        if group.rank() < 2 {
            return Err(Error::Precondition(format!(
                "{group} has rank {} < 2",
                group.rank()
            )));
        }
        let mut rows = [vec![0; group.rank()], vec![0; group.rank()]];
        rows[0][0] = 1;
        rows[1][1] = 1;
        Self::new(group, rows)
    }

    pub fn matrix(&self) -> &[Vec<i64>; 2] {
        &self.matrix
    }

    pub fn codomain(&self) -> &FiniteAbelianPGroup {
        &self.codomain
    }

    /// Image of element `a` as a dense index into the codomain.
    pub fn apply(&self, group: &FiniteAbelianPGroup, a: usize) -> usize {
        let p = self.prime as i128;
        let coords = group.coords(a);
        let img: Vec<u64> = self
            .matrix
            .iter()
            .map(|row| {
                let s: i128 = row
                    .iter()
                    .zip(&coords)
                    .map(|(&m, &c)| m as i128 * c as i128)
                    .sum();
                s.rem_euclid(p) as u64
            })
            .collect();
        self.codomain.index_of(&img).expect("two coordinates")
    }

    /// `rho^-1(H)` for a proper subgroup `H` of the codomain.
    pub fn preimage(&self, group: &FiniteAbelianPGroup, h: &Subgroup) -> Result<Subgroup> {
        if h.ambient_order() != self.codomain.order() {
            return Err(Error::DomainMismatch);
        }
        if !h.is_proper() {
            return Err(Error::Precondition(
                "preimage requires a proper subgroup".into(),
            ));
        }
        let elements: Vec<usize> = (0..group.order())
            .filter(|&a| h.contains(self.apply(group, a)))
            .collect();
        let mut bits = bitset(group.order());
        for &a in &elements {
            set_bit(&mut bits, a);
        }
        Ok(Subgroup::from_closed(group, elements, bits))
    }
}

/// Free function form of [`Surjection::preimage`].
pub fn preimage_subgroup(
    group: &FiniteAbelianPGroup,
    rho: &Surjection,
    h: &Subgroup,
) -> Result<Subgroup> {
    rho.preimage(group, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: u64, e: &[u32]) -> FiniteAbelianPGroup {
        make_group(p, e).unwrap()
    }

    /// Closure of every subset of elements, deduplicated. Only for tiny groups.
    fn brute_force_subgroups(group: &FiniteAbelianPGroup) -> HashSet<Vec<usize>> {
        let n = group.order();
        assert!(n <= 16);
        let mut out = HashSet::new();
        for mask in 0u32..(1 << n) {
            let mut set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            set.push(0);
            set.sort_unstable();
            set.dedup();
            loop {
                let mut next = set.clone();
                for &a in &set {
                    for &b in &set {
                        next.push(group.add(a, b));
                    }
                }
                next.sort_unstable();
                next.dedup();
                if next.len() == set.len() {
                    break;
                }
                set = next;
            }
            out.insert(set);
        }
        out
    }

    #[test]
    fn make_group_examples() {
        let v = g(2, &[1, 1]);
        assert_eq!((v.order(), v.rank(), v.exponent()), (4, 2, 2));
        let c = g(3, &[2]);
        assert_eq!((c.order(), c.rank()), (9, 1));
        let n = g(2, &[1, 2]);
        assert_eq!(n.exponents(), &[2, 1]);
        assert_eq!(n.order(), 8);
        assert_eq!(n.to_string(), "2^2x2^1");
    }

    #[test]
    fn make_group_errors() {
        assert_eq!(make_group(4, &[1]), Err(Error::NotPrime(4)));
        assert_eq!(make_group(1, &[1]), Err(Error::NotPrime(1)));
        assert_eq!(make_group(2, &[]), Err(Error::EmptyExponents));
        assert_eq!(make_group(2, &[1, 0]), Err(Error::NonPositiveExponent));
        assert!(matches!(
            make_group(2, &[40]),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn rank_is_minimal_generating_set_size() {
        for group in abelian_p_groups(2, 32)
            .unwrap()
            .into_iter()
            .chain(abelian_p_groups(3, 27).unwrap())
        {
            let n = group.order();
            // smallest k such that some k-subset generates
            let mut best = None;
            'k: for k in 0..=group.rank() {
                let mut idx = vec![0usize; k];
                loop {
                    if Subgroup::generated_by(&group, &idx).order() == n {
                        best = Some(k);
                        break 'k;
                    }
                    let mut i = k;
                    loop {
                        if i == 0 {
                            continue 'k;
                        }
                        i -= 1;
                        idx[i] += 1;
                        if idx[i] < n {
                            break;
                        }
                        idx[i] = 0;
                    }
                }
            }
            assert_eq!(best, Some(group.rank()), "{group}");
        }
    }

    #[test]
    fn element_orders_divide_exponent() {
        let group = g(3, &[2, 1]);
        for a in 0..group.order() {
            assert_eq!(group.exponent() % group.element_order(a), 0);
            assert_eq!(group.add(a, group.neg(a)), 0);
        }
    }

    #[test]
    fn subgroup_counts_match_brute_force() {
        for (p, e, count) in [
            (2, vec![2], 3),
            (2, vec![1, 1], 5),
            (3, vec![1, 1], 6),
            (2, vec![2, 1], 8),
        ] {
            let group = g(p, &e);
            let subs = enumerate_subgroups(&group).unwrap();
            assert_eq!(subs.len(), count, "{group}");
            let brute = brute_force_subgroups(&group);
            let ours: HashSet<Vec<usize>> = subs.iter().map(|s| s.elements().to_vec()).collect();
            assert_eq!(ours, brute);
        }
        let z4 = g(2, &[2]);
        let subs = enumerate_subgroups(&z4).unwrap();
        let sets: Vec<&[usize]> = subs.iter().map(|s| s.elements()).collect();
        assert_eq!(sets, vec![&[0][..], &[0, 2], &[0, 1, 2, 3]]);
    }

    #[test]
    fn enumeration_bound() {
        let group = g(2, &[1, 1, 1, 1]);
        assert!(matches!(
            enumerate_subgroups_bounded(&group, 10),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn subgroups_are_closed_with_consistent_index() {
        let group = g(2, &[2, 1, 1]);
        for s in enumerate_subgroups(&group).unwrap() {
            assert!(s.contains(0));
            assert_eq!(s.index() * s.order(), group.order());
            for &a in s.elements() {
                assert!(s.contains(group.neg(a)));
                for &b in s.elements() {
                    assert!(s.contains(group.add(a, b)));
                }
            }
            assert_eq!(Subgroup::generated_by(&group, s.generators()), s);
        }
    }

    #[test]
    fn lattice_closed_under_meet_and_join() {
        for group in [g(2, &[2, 1]), g(3, &[1, 1]), g(2, &[1, 1, 1])] {
            let subs = enumerate_subgroups(&group).unwrap();
            let set: HashSet<&Subgroup> = subs.iter().collect();
            for h in &subs {
                for k in &subs {
                    assert!(set.contains(&h.intersection(&group, k)));
                    assert!(set.contains(&h.join(&group, k)));
                }
            }
        }
    }

    #[test]
    fn maximal_subgroup_examples() {
        assert_eq!(maximal_subgroups(&g(2, &[1, 1])).unwrap().len(), 3);
        let z8 = maximal_subgroups(&g(2, &[3])).unwrap();
        assert_eq!(z8.len(), 1);
        assert_eq!(z8[0].elements(), &[0, 2, 4, 6]);
        assert_eq!(maximal_subgroups(&g(2, &[2, 1])).unwrap().len(), 3);
    }

    #[test]
    fn maximal_subgroups_agree_with_enumeration() {
        for p in [2, 3, 5] {
            for group in abelian_p_groups(p, 128).unwrap() {
                if group.order() > 64 && p == 2 && group.rank() > 4 {
                    continue;
                }
                let r = group.rank() as u32;
                let expected = ((p.pow(r) - 1) / (p - 1)) as usize;
                let max = maximal_subgroups(&group).unwrap();
                assert_eq!(max.len(), expected, "{group}");
                let filtered: Vec<Subgroup> = enumerate_subgroups(&group)
                    .unwrap()
                    .into_iter()
                    .filter(|s| s.index() as u64 == p)
                    .collect();
                assert_eq!(max, filtered, "{group}");
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let z4 = g(2, &[2]);
        let chi = DualCharacter { coords: vec![1] };
        let a = GroupElement { coords: vec![2] };
        assert_eq!(z4.pairing(&chi, &a).unwrap(), 2);
        let trivial = DualCharacter { coords: vec![0] };
        for i in 0..4 {
            assert_eq!(z4.pairing(&trivial, &z4.element(i)).unwrap(), 0);
        }
    }

    #[test]
    fn pairing_is_biadditive_and_nondegenerate() {
        for group in [g(2, &[2, 1]), g(3, &[2, 1]), g(2, &[3, 1, 1])] {
            let n = group.order();
            let e = group.exponent();
            for chi in 0..n {
                for a in 0..n {
                    for b in [0, 1, n / 2, n - 1] {
                        let lhs = group.pairing_index(chi, group.add(a, b));
                        let rhs = (group.pairing_index(chi, a) + group.pairing_index(chi, b)) % e;
                        assert_eq!(lhs, rhs);
                        let lhs = group.pairing_index(group.add(chi, b), a);
                        let rhs = (group.pairing_index(chi, a) + group.pairing_index(b, a)) % e;
                        assert_eq!(lhs, rhs);
                    }
                }
                let trivial = (0..n).all(|a| group.pairing_index(chi, a) == 0);
                assert_eq!(trivial, chi == 0);
            }
        }
    }

    #[test]
    fn annihilator_orders() {
        for group in [g(2, &[2, 1]), g(3, &[1, 1]), g(2, &[2, 2])] {
            for s in enumerate_subgroups(&group).unwrap() {
                let ann = (0..group.order())
                    .filter(|&chi| {
                        s.elements()
                            .iter()
                            .all(|&a| group.pairing_index(chi, a) == 0)
                    })
                    .count();
                assert_eq!(ann, s.index());
            }
        }
    }

    #[test]
    fn preimage_examples() {
        let v = g(2, &[1, 1]);
        let id = Surjection::new(&v, [vec![1, 0], vec![0, 1]]).unwrap();
        let trivial = Subgroup::trivial(id.codomain());
        assert_eq!(id.preimage(&v, &trivial).unwrap().elements(), &[0]);

        let a = g(2, &[2, 1]);
        let rho = Surjection::project_two_largest(&a).unwrap();
        let codomain = rho.codomain().clone();
        let image: HashSet<usize> = (0..a.order()).map(|x| rho.apply(&a, x)).collect();
        assert_eq!(image.len(), 4);
        // first factor of (Z/2)^2 = {(0,0),(1,0)}
        let h = Subgroup::from_elements(&codomain, &[0, 2]).unwrap();
        let pre = rho.preimage(&a, &h).unwrap();
        let brute: Vec<usize> = (0..a.order())
            .filter(|&x| {
                let c = a.coords(x);
                c[1] == 0
            })
            .collect();
        assert_eq!(pre.elements(), &brute[..]);
        assert!(pre.is_proper());
        for h in enumerate_subgroups(&codomain)
            .unwrap()
            .into_iter()
            .filter(|h| h.is_proper())
        {
            let pre = rho.preimage(&a, &h).unwrap();
            assert!(pre.is_proper());
            assert_eq!(pre.index(), h.index());
        }
    }

    #[test]
    fn surjection_errors() {
        let a = g(3, &[1, 1]);
        assert_eq!(
            Surjection::new(&a, [vec![1, 1], vec![2, 2]]),
            Err(Error::NotSurjective(3))
        );
        assert!(matches!(
            Surjection::new(&a, [vec![1], vec![0]]),
            Err(Error::InvalidSurjection(_))
        ));
        assert!(Surjection::project_two_largest(&g(3, &[2])).is_err());
    }

    #[test]
    fn family_enumeration() {
        let fam: Vec<String> = abelian_p_groups(2, 16)
            .unwrap()
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert_eq!(
            fam,
            [
                "2^1",
                "2^2",
                "2^1x2^1",
                "2^3",
                "2^2x2^1",
                "2^1x2^1x2^1",
                "2^4",
                "2^3x2^1",
                "2^2x2^2",
                "2^2x2^1x2^1",
                "2^1x2^1x2^1x2^1"
            ]
        );
    }
}
