//! The character ring `Z[S*]` of a subgroup `S` of an ambient group `A`.
//!
//! Characters of `S` are the classes of `A*` modulo the annihilator of `S`;
//! each class is named by its lexicographically smallest member. With
//! `S = A` this is the group ring of the dual, the integral model of the
//! representation ring. Coefficient vectors are dense and indexed by class
//! number, which follows the order of the smallest representatives.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::{maximal_subgroups, FiniteAbelianPGroup, Subgroup};

/// The set of characters and elements of one subgroup, with the restriction
/// map from the ambient dual.
#[derive(Debug)]
pub struct CharDomain {
    group: Arc<FiniteAbelianPGroup>,
    subgroup: Subgroup,
    /// Ambient element index -> position among the subgroup's elements.
    local_element: Vec<u32>,
    reps_min: Vec<usize>,
    reps_max: Vec<usize>,
    /// Ambient character index -> class (local character) index.
    restriction: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl CharDomain {
    pub fn ambient(group: Arc<FiniteAbelianPGroup>) -> Arc<Self> {
        let whole = Subgroup::whole(&group);
        Self::build(group, whole)
    }

    pub fn new(group: Arc<FiniteAbelianPGroup>, subgroup: Subgroup) -> Result<Arc<Self>> {
        if subgroup.ambient_order() != group.order() {
            return Err(Error::DomainMismatch);
        }
        Ok(Self::build(group, subgroup))
    }

    fn build(group: Arc<FiniteAbelianPGroup>, subgroup: Subgroup) -> Arc<Self> {
        let n = group.order();
        let mut local_element = vec![ABSENT; n];
        for (i, &a) in subgroup.elements().iter().enumerate() {
            local_element[a] = i as u32;
        }
        let gens = subgroup.generators();
        let annihilator: Vec<usize> = (0..n)
            .filter(|&chi| gens.iter().all(|&g| group.pairing_index(chi, g) == 0))
            .collect();
        let mut restriction = vec![ABSENT; n];
        let mut reps_min = Vec::with_capacity(subgroup.order());
        let mut reps_max = Vec::with_capacity(subgroup.order());
        for chi in 0..n {
            if restriction[chi] != ABSENT {
                continue;
            }
            let class = reps_min.len() as u32;
            let mut max = chi;
            for &z in &annihilator {
                let member = group.add(chi, z);
                restriction[member] = class;
                max = max.max(member);
            }
            reps_min.push(chi);
            reps_max.push(max);
        }
        debug_assert_eq!(reps_min.len(), subgroup.order());
        Arc::new(Self {
            group,
            subgroup,
            local_element,
            reps_min,
            reps_max,
            restriction,
        })
    }

    pub fn group(&self) -> &Arc<FiniteAbelianPGroup> {
        &self.group
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Number of characters, which equals the number of elements.
    pub fn size(&self) -> usize {
        self.reps_min.len()
    }

    pub fn is_ambient(&self) -> bool {
        !self.subgroup.is_proper()
    }

    pub fn same_as(&self, other: &CharDomain) -> bool {
        std::ptr::eq(self, other) || (self.group == other.group && self.subgroup == other.subgroup)
    }

    /// Whether this domain's subgroup contains `other`'s.
    pub fn contains_domain(&self, other: &CharDomain) -> bool {
        self.group == other.group && other.subgroup.is_subgroup_of(&self.subgroup)
    }

    /// Class of an ambient character in this domain's dual.
    pub fn restrict_character(&self, ambient_chi: usize) -> usize {
        self.restriction[ambient_chi] as usize
    }

    /// Smallest ambient character restricting to local character `psi`.
    pub fn lift_min(&self, psi: usize) -> usize {
        self.reps_min[psi]
    }

    pub fn lift_max(&self, psi: usize) -> usize {
        self.reps_max[psi]
    }

    pub fn local_element(&self, ambient_a: usize) -> Option<usize> {
        match self.local_element.get(ambient_a) {
            Some(&i) if i != ABSENT => Some(i as usize),
            _ => None,
        }
    }

    pub fn elements(&self) -> &[usize] {
        self.subgroup.elements()
    }

    pub fn mul_characters(&self, psi: usize, phi: usize) -> usize {
        self.restrict_character(self.group.add(self.reps_min[psi], self.reps_min[phi]))
    }

    /// Exponent `k` with `psi(a) = zeta^k`, `zeta` a primitive root of order
    /// `exponent(A)`; `a` is an ambient element index lying in the subgroup.
    pub fn pairing(&self, psi: usize, ambient_a: usize) -> u64 {
        self.group.pairing_index(self.reps_min[psi], ambient_a)
    }
}

/// Choice of section of the restriction map used when transferring.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Lift {
    /// Lexicographically smallest preimage.
    #[default]
    Smallest,
    /// Lexicographically largest preimage.
    Largest,
}

/// An element of `Z[S*]`.
#[derive(Clone, Debug)]
pub struct CharRingElement {
    domain: Arc<CharDomain>,
    coeffs: Vec<BigInt>,
}

impl PartialEq for CharRingElement {
    fn eq(&self, other: &Self) -> bool {
        self.domain.same_as(&other.domain) && self.coeffs == other.coeffs
    }
}

impl Eq for CharRingElement {}

impl CharRingElement {
    pub fn zero(domain: &Arc<CharDomain>) -> Self {
        Self {
            domain: domain.clone(),
            coeffs: vec![BigInt::zero(); domain.size()],
        }
    }

    pub fn one(domain: &Arc<CharDomain>) -> Self {
        Self::character(domain, 0)
    }

    /// The basis element of local character `psi`.
    pub fn character(domain: &Arc<CharDomain>, psi: usize) -> Self {
        let mut x = Self::zero(domain);
        x.coeffs[psi] = BigInt::one();
        x
    }

    pub fn from_coeffs(domain: &Arc<CharDomain>, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != domain.size() {
            return Err(Error::DimensionMismatch {
                expected: domain.size(),
                actual: coeffs.len(),
            });
        }
        Ok(Self {
            domain: domain.clone(),
            coeffs,
        })
    }

    pub fn domain(&self) -> &Arc<CharDomain> {
        &self.domain
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Characters with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&i| !self.coeffs[i].is_zero())
            .collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.domain.same_as(&other.domain) {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            domain: self.domain.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            domain: self.domain.clone(),
            coeffs,
        })
    }

    /// Group-ring product: `psi * phi` is the character `psi + phi`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(&self.domain);
        let rhs = other.support();
        for psi in self.support() {
            for &phi in &rhs {
                let k = self.domain.mul_characters(psi, phi);
                out.coeffs[k] += &self.coeffs[psi] * &other.coeffs[phi];
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self {
            domain: self.domain.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Sum of coefficients (the virtual dimension).
    pub fn augmentation(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Restriction to a subgroup of this element's domain.
    pub fn restrict(&self, target: &Arc<CharDomain>) -> Result<Self> {
        if !self.domain.contains_domain(target) {
            return Err(Error::NotASubgroup);
        }
        let mut out = Self::zero(target);
        for psi in self.support() {
            let k = target.restrict_character(self.domain.lift_min(psi));
            out.coeffs[k] += &self.coeffs[psi];
        }
        Ok(out)
    }

    /// Transfer (induction) to a larger domain: `lift(x) * Tr(1)`.
    pub fn transfer(&self, target: &Arc<CharDomain>) -> Result<Self> {
        self.transfer_with(target, Lift::Smallest)
    }

    pub fn transfer_with(&self, target: &Arc<CharDomain>, lift: Lift) -> Result<Self> {
        if !target.contains_domain(&self.domain) {
            return Err(Error::NotASubgroup);
        }
        let unit = transfer_unit(target, &self.domain)?.support();
        let mut out = Self::zero(target);
        for psi in self.support() {
            let ambient = match lift {
                Lift::Smallest => self.domain.lift_min(psi),
                Lift::Largest => self.domain.lift_max(psi),
            };
            let lifted = target.restrict_character(ambient);
            for &u in &unit {
                out.coeffs[target.mul_characters(lifted, u)] += &self.coeffs[psi];
            }
        }
        Ok(out)
    }
}

/// `Tr_{small}^{big}(1)`: the sum of the characters of `big` that are trivial
/// on `small`, each with coefficient 1.
pub fn transfer_unit(big: &Arc<CharDomain>, small: &Arc<CharDomain>) -> Result<CharRingElement> {
    if !big.contains_domain(small) {
        return Err(Error::NotASubgroup);
    }
    let group = big.group();
    let gens = small.subgroup().generators();
    let mut out = CharRingElement::zero(big);
    for chi in 0..group.order() {
        if gens.iter().all(|&g| group.pairing_index(chi, g) == 0) {
            out.coeffs[big.restrict_character(chi)] = BigInt::one();
        }
    }
    Ok(out)
}

/// `sum_i Tr_{V_i}(1) - Tr_0(1)` over the `p + 1` lines `V_i` of `(Z/p)^2`.
/// The expected value is `p * 1`.
pub fn line_transfer_defect(prime: u64) -> Result<CharRingElement> {
    let group = Arc::new(FiniteAbelianPGroup::new(prime, &[1, 1])?);
    let ambient = CharDomain::ambient(group.clone());
    let mut acc = CharRingElement::zero(&ambient);
    for v in maximal_subgroups(&group)? {
        let dom = CharDomain::new(group.clone(), v)?;
        acc = acc.add(&transfer_unit(&ambient, &dom)?)?;
    }
    let zero = CharDomain::new(group.clone(), Subgroup::trivial(&group))?;
    acc.sub(&transfer_unit(&ambient, &zero)?)
}
