//! Cyclotomic integers `Z[zeta_{p^e}]`, class functions with values in them,
//! the character map `Z[S*] -> Cl(S)` and the class-function transfer.
//!
//! A cyclotomic integer is stored in the power basis `1, zeta, ...,
//! zeta^(phi-1)`, reduced modulo `Phi_{p^e}(x) = sum_{j<p} x^(j p^(e-1))`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::charring::{CharDomain, CharRingElement};
use crate::error::{Error, Result};
use crate::intlin::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicInteger {
    prime: u64,
    level_log: u32,
    coeffs: Vec<BigInt>,
}

fn totient(prime: u64, level_log: u32) -> usize {
    if level_log == 0 {
        1
    } else {
        ((prime - 1) * prime.pow(level_log - 1)) as usize
    }
}

impl CyclotomicInteger {
    pub fn zero(prime: u64, level_log: u32) -> Self {
        Self {
            prime,
            level_log,
            coeffs: vec![BigInt::zero(); totient(prime, level_log)],
        }
    }

    pub fn from_int(prime: u64, level_log: u32, n: BigInt) -> Self {
        let mut z = Self::zero(prime, level_log);
        z.coeffs[0] = n;
        z
    }

    pub fn one(prime: u64, level_log: u32) -> Self {
        Self::from_int(prime, level_log, BigInt::one())
    }

    /// `zeta^k`.
    pub fn root_power(prime: u64, level_log: u32, k: u64) -> Self {
        let n = prime.pow(level_log);
        let mut buckets = vec![BigInt::zero(); n as usize];
        buckets[(k % n) as usize] = BigInt::one();
        Self::from_root_buckets(prime, level_log, buckets)
    }

    /// `sum_k buckets[k] zeta^k` for `k < p^e`.
    pub fn from_root_buckets(prime: u64, level_log: u32, buckets: Vec<BigInt>) -> Self {
        Self {
            prime,
            level_log,
            coeffs: reduce(prime, level_log, buckets),
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// `p^e`, the order of `zeta`.
    pub fn level(&self) -> u64 {
        self.prime.pow(self.level_log)
    }

    pub fn level_log(&self) -> u32 {
        self.level_log
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational integer, when it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    /// Membership in the ideal `(n)`; the power basis is a Z-basis, so this is
    /// coefficientwise divisibility.
    pub fn is_divisible_by(&self, n: &BigInt) -> bool {
        self.coeffs.iter().all(|c| c.is_multiple_of(n))
    }

    fn check_level(&self, other: &Self) -> Result<()> {
        if self.prime == other.prime && self.level_log == other.level_log {
            Ok(())
        } else {
            Err(Error::LevelMismatch(self.level(), other.level()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
            ..self.clone()
        })
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self {
            prime: self.prime,
            level_log: self.level_log,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let phi = self.coeffs.len();
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self {
            prime: self.prime,
            level_log: self.level_log,
            coeffs: reduce(self.prime, self.level_log, prod),
        })
    }

    /// Image under `zeta_{p^a} -> zeta_{p^b}^(p^(b-a))`.
    pub fn raise_level(&self, level_log: u32) -> Result<Self> {
        if level_log < self.level_log {
            return Err(Error::LevelMismatch(
                self.level(),
                self.prime.pow(level_log),
            ));
        }
        let step = self.prime.pow(level_log - self.level_log) as usize;
        let n = self.prime.pow(level_log) as usize;
        let mut buckets = vec![BigInt::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            buckets[k * step] += c;
        }
        Ok(Self::from_root_buckets(self.prime, level_log, buckets))
    }

    /// Matrix of multiplication by `self` on the power basis; row `i` holds
    /// the coordinates of `self * zeta^i`. Its determinant is the norm.
    pub fn multiplication_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = (0..self.coeffs.len())
            .map(|i| {
                let z = Self::root_power(self.prime, self.level_log, i as u64);
                self.mul(&z).expect("same level").coeffs
            })
            .collect();
        IntMatrix::from_rows(self.coeffs.len(), &rows).expect("square")
    }
}

/// Reduces a polynomial in `zeta` modulo `Phi_{p^e}`, using
/// `x^phi = -sum_{j<p-1} x^(j p^(e-1))`.
fn reduce(prime: u64, level_log: u32, mut poly: Vec<BigInt>) -> Vec<BigInt> {
    if level_log == 0 {
        // Z[zeta_1] = Z with zeta = 1
        let s = poly.into_iter().sum();
        return vec![s];
    }
    let phi = totient(prime, level_log);
    let block = prime.pow(level_log - 1) as usize;
    for k in (phi..poly.len()).rev() {
        if poly[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut poly[k]);
        let base = k - phi;
        for j in 0..(prime as usize - 1) {
            poly[base + j * block] -= &c;
        }
    }
    poly.resize(phi, BigInt::zero());
    poly
}

/// A function on the elements of a subgroup, valued in `Z[zeta_{exp(A)}]`.
/// For abelian p-groups every element is its own conjugacy class and has
/// p-power order, so this is the full class-function ring.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    domain: Arc<CharDomain>,
    values: Vec<CyclotomicInteger>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.domain.same_as(&other.domain) && self.values == other.values
    }
}

impl Eq for ClassFunction {}

impl ClassFunction {
    fn level(domain: &CharDomain) -> (u64, u32) {
        (domain.group().prime(), domain.group().exponent_log())
    }

    pub fn constant(domain: &Arc<CharDomain>, c: BigInt) -> Self {
        let (p, e) = Self::level(domain);
        Self {
            domain: domain.clone(),
            values: vec![CyclotomicInteger::from_int(p, e, c); domain.size()],
        }
    }

    pub fn one(domain: &Arc<CharDomain>) -> Self {
        Self::constant(domain, BigInt::one())
    }

    pub fn from_values(domain: &Arc<CharDomain>, values: Vec<CyclotomicInteger>) -> Result<Self> {
        if values.len() != domain.size() {
            return Err(Error::DimensionMismatch {
                expected: domain.size(),
                actual: values.len(),
            });
        }
        let (p, e) = Self::level(domain);
        if let Some(v) = values.iter().find(|v| v.prime != p || v.level_log != e) {
            return Err(Error::LevelMismatch(v.level(), p.pow(e)));
        }
        Ok(Self {
            domain: domain.clone(),
            values,
        })
    }

    pub fn domain(&self) -> &Arc<CharDomain> {
        &self.domain
    }

    /// Values in the order of the domain's elements.
    pub fn values(&self) -> &[CyclotomicInteger] {
        &self.values
    }

    /// Value at an ambient element index, if it lies in the domain.
    pub fn value_at(&self, ambient_a: usize) -> Option<&CyclotomicInteger> {
        self.domain
            .local_element(ambient_a)
            .map(|i| &self.values[i])
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&CyclotomicInteger, &CyclotomicInteger) -> Result<CyclotomicInteger>,
    ) -> Result<Self> {
        if !self.domain.same_as(&other.domain) {
            return Err(Error::DomainMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| f(a, b))
            .collect::<Result<_>>()?;
        Ok(Self {
            domain: self.domain.clone(),
            values,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, CyclotomicInteger::add)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, CyclotomicInteger::mul)
    }

    /// Concatenated power-basis coordinates of all values.
    pub fn to_integer_vector(&self) -> Vec<BigInt> {
        self.values
            .iter()
            .flat_map(|v| v.coeffs.iter().cloned())
            .collect()
    }
}

/// `x -> (a -> sum_psi x_psi psi(a))`.
pub fn character_map(x: &CharRingElement) -> ClassFunction {
    let domain = x.domain();
    let (p, e) = ClassFunction::level(domain);
    let n = p.pow(e) as usize;
    let support = x.support();
    let values = domain
        .elements()
        .iter()
        .map(|&a| {
            let mut buckets = vec![BigInt::zero(); n];
            for &psi in &support {
                buckets[domain.pairing(psi, a) as usize] += &x.coeffs()[psi];
            }
            CyclotomicInteger::from_root_buckets(p, e, buckets)
        })
        .collect();
    ClassFunction {
        domain: domain.clone(),
        values,
    }
}

/// Transfer of class functions to a larger subgroup `T`. For abelian groups
/// conjugation is trivial, so `(1/|S|) sum_{k in T, g in S} f(g)` is
/// `[T:S] f(g)` on `S` and `0` off `S`.
pub fn class_transfer(f: &ClassFunction, target: &Arc<CharDomain>) -> Result<ClassFunction> {
    let source = f.domain();
    if !target.contains_domain(source) {
        return Err(Error::NotASubgroup);
    }
    let (p, e) = ClassFunction::level(target);
    let index = BigInt::from(target.size() / source.size());
    let values = target
        .elements()
        .iter()
        .map(|&g| match f.value_at(g) {
            Some(v) => v.scale(&index),
            None => CyclotomicInteger::zero(p, e),
        })
        .collect();
    Ok(ClassFunction {
        domain: target.clone(),
        values,
    })
}

/// The image of an ideal inside `prod_a Z[zeta]`: all products of character
/// images with the generators' class functions.
#[derive(Clone, Debug)]
pub struct IdealImage {
    domain: Arc<CharDomain>,
    products: Vec<ClassFunction>,
}

impl IdealImage {
    pub fn products(&self) -> &[ClassFunction] {
        &self.products
    }

    /// Projection onto the factor at one element: the generators of the
    /// corresponding ideal of `Z[zeta]`.
    pub fn projection_at(&self, ambient_a: usize) -> Vec<CyclotomicInteger> {
        self.products
            .iter()
            .filter_map(|f| f.value_at(ambient_a).cloned())
            .collect()
    }

    /// Whether the projection at `ambient_a` lies in `(n)`.
    pub fn projection_divisible_by(&self, ambient_a: usize, n: &BigInt) -> bool {
        self.projection_at(ambient_a)
            .iter()
            .all(|v| v.is_divisible_by(n))
    }

    /// The image as integer vectors of length `|S| * phi(exp A)`.
    pub fn integer_vectors(&self) -> Vec<Vec<BigInt>> {
        self.products
            .iter()
            .map(ClassFunction::to_integer_vector)
            .collect()
    }

    pub fn domain(&self) -> &Arc<CharDomain> {
        &self.domain
    }
}

/// Spans `character_map(chi) * g` for every character `chi` and generator `g`.
pub fn classfun_ideal_image(
    domain: &Arc<CharDomain>,
    generators: &[ClassFunction],
) -> Result<IdealImage> {
    let chars: Vec<ClassFunction> = (0..domain.size())
        .map(|psi| character_map(&CharRingElement::character(domain, psi)))
        .collect();
    let mut products = Vec::with_capacity(chars.len() * generators.len());
    for g in generators {
        for c in &chars {
            products.push(c.mul(g)?);
        }
    }
    Ok(IdealImage {
        domain: domain.clone(),
        products,
    })
}

/// The image of `Z[S*]` itself: the character map of every basis character.
pub fn integral_image_vectors(domain: &Arc<CharDomain>) -> Vec<Vec<BigInt>> {
    (0..domain.size())
        .map(|psi| character_map(&CharRingElement::character(domain, psi)).to_integer_vector())
        .collect()
}
