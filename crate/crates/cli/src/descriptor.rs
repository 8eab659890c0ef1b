//! Group descriptors: `p^e(xp^e)*`, e.g. `2^2x2^1` for `Z/4 x Z/2`.

use std::fmt;

use trideal::groups::is_prime;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descriptor {
    pub prime: u64,
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DescriptorError {
    Empty,
    Malformed(String),
    NotPrime(u64),
    ZeroExponent(String),
    MixedPrimes(u64, u64),
}

impl fmt::Display for DescriptorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Empty => write!(f, "empty group descriptor; expected p^e(xp^e)*, e.g. 2^1x2^1"),
            Self::Malformed(part) => write!(f, "malformed factor '{part}'; expected p^e, e.g. 3^2"),
            Self::NotPrime(p) => write!(f, "{p} is not a prime"),
            Self::ZeroExponent(part) => write!(f, "factor '{part}' has exponent 0; exponents must be at least 1"),
            Self::MixedPrimes(p, q) => write!(
                f,
                "descriptor mixes primes {p} and {q}; only abelian p-groups are supported, since the \
                 transfer-ideal analysis is local at a single prime"
            ),
        }
    }
}

impl std::error::Error for DescriptorError {}

impl Descriptor {
    pub fn parse(input: &str) -> Result<Self, DescriptorError> {
        let input = input.trim();
        if input.is_empty() {
            return Err(DescriptorError::Empty);
        }
        let mut prime = None;
        let mut exponents = Vec::new();
        for part in input.split(['x', 'X', '×']) {
            let part = part.trim();
            let (p, e) = part
                .split_once('^')
                .ok_or_else(|| DescriptorError::Malformed(part.to_string()))?;
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| DescriptorError::Malformed(part.to_string()))?;
            let e: u32 = e
                .trim()
                .parse()
                .map_err(|_| DescriptorError::Malformed(part.to_string()))?;
            if !is_prime(p) {
                return Err(DescriptorError::NotPrime(p));
            }
            if e == 0 {
                return Err(DescriptorError::ZeroExponent(part.to_string()));
            }
            match prime {
                None => prime = Some(p),
                Some(q) if q != p => return Err(DescriptorError::MixedPrimes(q, p)),
                Some(_) => {}
            }
            exponents.push(e);
        }
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self {
            prime: prime.expect("at least one factor"),
            exponents,
        })
    }

    /// `p^(sum e)`, or `None` on overflow.
    pub fn order(&self) -> Option<u128> {
        let total: u32 = self.exponents.iter().sum();
        (self.prime as u128).checked_pow(total)
    }
}
