//! Transfer ideals in `Z[A*]`, the structure of the quotient ring, and
//! executable checks that the quotient carries p-torsion.
//!
//! An ideal is stored as the Z-lattice spanned by all character twists
//! `chi * Tr_{A'}(1)` of its ring generators. Twists by a full basis close a
//! Z-span under the ring action, so the lattice is exactly the ideal.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::charring::{transfer_unit, CharDomain, CharRingElement};
use crate::classfun::{character_map, classfun_ideal_image};
use crate::error::{Error, Result};
use crate::groups::{
    enumerate_subgroups_bounded, maximal_subgroups, FiniteAbelianPGroup, Subgroup, Surjection,
    DEFAULT_MAX_SUBGROUPS,
};
use crate::intlin::{Lattice, QuotientStructure};

/// Groups up to this order get the maximal-vs-all-proper audit by default.
pub const POLICY_AUDIT_MAX_ORDER: usize = 81;

/// Which subgroups contribute transfers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum SubgroupPolicy {
    AllProper,
    #[default]
    MaximalOnly,
    Explicit(Vec<Subgroup>),
}

impl SubgroupPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            SubgroupPolicy::AllProper => "all-proper",
            SubgroupPolicy::MaximalOnly => "maximal",
            SubgroupPolicy::Explicit(_) => "explicit",
        }
    }
}

impl fmt::Display for SubgroupPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The ideal generated by `Tr_{A'}^A(1)` for the listed subgroups `A'`.
#[derive(Clone, Debug)]
pub struct TransferIdeal {
    ambient: Arc<CharDomain>,
    policy: SubgroupPolicy,
    source_subgroups: Vec<Subgroup>,
    /// Support of `Tr_{A'}(1)` for each source subgroup, as character indices.
    unit_supports: Vec<Vec<usize>>,
}

impl TransferIdeal {
    pub fn ambient(&self) -> &Arc<CharDomain> {
        &self.ambient
    }

    pub fn group(&self) -> &Arc<FiniteAbelianPGroup> {
        self.ambient.group()
    }

    pub fn policy(&self) -> &SubgroupPolicy {
        &self.policy
    }

    pub fn source_subgroups(&self) -> &[Subgroup] {
        &self.source_subgroups
    }

    /// `|A*| * #source_subgroups`, counting repeated twists.
    pub fn generator_count(&self) -> usize {
        self.ambient.size() * self.source_subgroups.len()
    }

    /// The ring generators `Tr_{A'}(1)`.
    pub fn transfer_units(&self) -> Vec<CharRingElement> {
        self.unit_supports
            .iter()
            .map(|s| self.indicator(s))
            .collect()
    }

    fn indicator(&self, support: &[usize]) -> CharRingElement {
        let mut coeffs = vec![BigInt::zero(); self.ambient.size()];
        for &k in support {
            coeffs[k] = BigInt::one();
        }
        CharRingElement::from_coeffs(&self.ambient, coeffs).expect("ambient length")
    }

    /// Supports of every twist `chi * Tr_{A'}(1)`, in (subgroup, chi) order.
    pub fn generator_supports(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let group = self.ambient.group();
        self.unit_supports.iter().flat_map(move |unit| {
            (0..group.order()).map(move |chi| {
                let mut s: Vec<usize> = unit.iter().map(|&u| group.add(chi, u)).collect();
                s.sort_unstable();
                s
            })
        })
    }

    /// All generator vectors, repeats included.
    pub fn generator_vectors(&self) -> Vec<Vec<BigInt>> {
        self.generator_supports()
            .map(|s| self.indicator(&s).into_coeffs())
            .collect()
    }

    /// The ideal as a lattice in the character basis.
    pub fn lattice(&self) -> Lattice {
        let mut lattice = Lattice::new(self.ambient.size());
        let mut seen = HashSet::new();
        for support in self.generator_supports() {
            if seen.insert(support.clone()) {
                lattice
                    .insert(self.indicator(&support).into_coeffs())
                    .expect("ambient length");
            }
        }
        lattice
    }

    pub fn contains(&self, x: &CharRingElement) -> Result<bool> {
        if !x.domain().same_as(&self.ambient) {
            return Err(Error::DomainMismatch);
        }
        self.lattice().contains(x.coeffs())
    }
}

fn check_nontrivial(group: &FiniteAbelianPGroup) -> Result<()> {
    if group.order() == 1 {
        Err(Error::TrivialGroup)
    } else {
        Ok(())
    }
}

/// Builds the transfer ideal for a policy. `max_subgroups` bounds the
/// enumeration needed by [`SubgroupPolicy::AllProper`].
pub fn build_transfer_ideal(
    group: &Arc<FiniteAbelianPGroup>,
    policy: SubgroupPolicy,
    max_subgroups: usize,
) -> Result<TransferIdeal> {
    let sources = match &policy {
        SubgroupPolicy::AllProper => {
            check_nontrivial(group)?;
            enumerate_subgroups_bounded(group, max_subgroups)?
                .into_iter()
                .filter(Subgroup::is_proper)
                .collect()
        }
        SubgroupPolicy::MaximalOnly => {
            check_nontrivial(group)?;
            maximal_subgroups(group)?
        }
        SubgroupPolicy::Explicit(list) => {
            if list.iter().any(|s| s.ambient_order() != group.order()) {
                return Err(Error::DomainMismatch);
            }
            list.clone()
        }
    };
    Ok(ideal_from_sources(group, policy, sources))
}

pub(crate) fn ideal_from_sources(
    group: &Arc<FiniteAbelianPGroup>,
    policy: SubgroupPolicy,
    sources: Vec<Subgroup>,
) -> TransferIdeal {
    let ambient = CharDomain::ambient(group.clone());
    let unit_supports = sources
        .iter()
        .map(|s| {
            let dom = CharDomain::new(group.clone(), s.clone()).expect("same ambient");
            transfer_unit(&ambient, &dom)
                .expect("subgroup of ambient")
                .support()
        })
        .collect();
    TransferIdeal {
        ambient,
        policy,
        source_subgroups: sources,
        unit_supports,
    }
}

/// Default-policy ideal (maximal subgroups).
pub fn transfer_ideal(group: &Arc<FiniteAbelianPGroup>) -> Result<TransferIdeal> {
    build_transfer_ideal(group, SubgroupPolicy::MaximalOnly, DEFAULT_MAX_SUBGROUPS)
}

/// `p * 1` in the character basis.
pub fn p_times_unit(domain: &Arc<CharDomain>) -> CharRingElement {
    CharRingElement::one(domain).scale(&BigInt::from(domain.group().prime()))
}

/// Structure of `Z[A*] / I` as an abelian group. `p_annihilates` is decided
/// by testing `p * 1` for membership in the ideal.
pub fn quotient_report(ideal: &TransferIdeal) -> QuotientStructure {
    let lattice = ideal.lattice();
    quotient_from_lattice(ideal.ambient(), &lattice)
}

pub(crate) fn quotient_from_lattice(
    ambient: &Arc<CharDomain>,
    lattice: &Lattice,
) -> QuotientStructure {
    let mut q = QuotientStructure::from_lattice(lattice, ambient.group().prime());
    let p_in_ideal = lattice
        .contains(p_times_unit(ambient).coeffs())
        .expect("ambient length");
    // For an ideal, p * 1 in I is the same as p killing the quotient module.
    debug_assert_eq!(p_in_ideal, q.p_annihilates);
    q.p_annihilates = p_in_ideal;
    q
}

/// Number of elements lying in no proper subgroup (the generators of a cyclic
/// group, none otherwise). This is the rank of the quotient after tensoring
/// with Q.
pub fn free_rank_prediction(group: &FiniteAbelianPGroup) -> usize {
    (0..group.order())
        .filter(|&a| group.element_order(a) as usize == group.order())
        .count()
}

/// Whether the maximal-only and all-proper ideals have the same lattice,
/// tested by mutual containment of generators.
pub fn audit_policy_equivalence(
    group: &Arc<FiniteAbelianPGroup>,
    max_subgroups: usize,
) -> Result<bool> {
    let maximal =
        build_transfer_ideal(group, SubgroupPolicy::MaximalOnly, max_subgroups)?.lattice();
    let all = build_transfer_ideal(group, SubgroupPolicy::AllProper, max_subgroups)?.lattice();
    Ok(maximal.contains_lattice(&all)? && all.contains_lattice(&maximal)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonvanishingReport {
    pub group: String,
    pub quotient_nonzero: bool,
    /// Every generator's value at `0 in A` lies in `(p)`.
    pub zero_factor_in_p: bool,
}

impl NonvanishingReport {
    pub fn holds(&self) -> bool {
        self.quotient_nonzero && self.zero_factor_in_p
    }
}

/// The quotient by all proper transfers is nonzero, and the image of the
/// ideal in the class-function factor at `0` lies in `(p)`.
pub fn check_nonvanishing(group: &Arc<FiniteAbelianPGroup>) -> Result<NonvanishingReport> {
    let ideal = transfer_ideal(group)?;
    let q = quotient_report(&ideal);
    let generators: Vec<_> = ideal.transfer_units().iter().map(character_map).collect();
    let image = classfun_ideal_image(ideal.ambient(), &generators)?;
    Ok(NonvanishingReport {
        group: group.to_string(),
        quotient_nonzero: !q.is_zero(),
        zero_factor_in_p: image.projection_divisible_by(0, &BigInt::from(group.prime())),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTwoReport {
    pub prime: u64,
    /// `sum_i Tr_{V_i}(1) - Tr_0(1) == p` in `Z[A*]`.
    pub identity_holds: bool,
    /// Class function of `sum_i Tr_{V_i}(1)` is `p^2 + p` at 0 and `p` elsewhere.
    pub class_values_hold: bool,
    pub p_annihilates: bool,
    pub quotient_nonzero: bool,
}

impl RankTwoReport {
    pub fn holds(&self) -> bool {
        self.identity_holds && self.class_values_hold && self.p_annihilates && self.quotient_nonzero
    }
}

/// `K(B(Z/p)^2) / I_tr` is a nonzero F_p-algebra.
pub fn check_rank_two(prime: u64) -> Result<RankTwoReport> {
    let group = Arc::new(FiniteAbelianPGroup::new(prime, &[1, 1])?);
    let witness = crate::charring::line_transfer_defect(prime)?;
    let ambient = witness.domain().clone();
    let identity_holds = witness == p_times_unit(&ambient);

    let lines = build_transfer_ideal(&group, SubgroupPolicy::MaximalOnly, DEFAULT_MAX_SUBGROUPS)?;
    let sum = lines
        .transfer_units()
        .into_iter()
        .try_fold(CharRingElement::zero(lines.ambient()), |acc, t| acc.add(&t))?;
    let f = character_map(&sum);
    let p = BigInt::from(prime);
    let class_values_hold = (0..group.order()).all(|a| {
        let expected = if a == 0 { &p * &p + &p } else { p.clone() };
        f.value_at(a).and_then(|v| v.as_integer()) == Some(expected)
    });

    let all = build_transfer_ideal(&group, SubgroupPolicy::AllProper, DEFAULT_MAX_SUBGROUPS)?;
    let q = quotient_report(&all);
    Ok(RankTwoReport {
        prime,
        identity_holds,
        class_values_hold,
        p_annihilates: q.p_annihilates,
        quotient_nonzero: !q.is_zero(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackReport {
    pub group: String,
    pub surjection: [Vec<i64>; 2],
    /// The `(Z/p)^2` line-transfer identity pulled back along the surjection:
    /// `sum_i Tr_{rho^-1 V_i}(1) - Tr_{ker rho}(1) == p`.
    pub pulled_back_identity_holds: bool,
    /// `p` lies in the ideal generated by transfers from `rho^-1(H)`.
    pub p_in_pulled_back_ideal: bool,
    /// `p` lies in the full transfer ideal of `A`.
    pub p_annihilates: bool,
    pub quotient_nonzero: bool,
}

impl PullbackReport {
    pub fn holds(&self) -> bool {
        self.pulled_back_identity_holds
            && self.p_in_pulled_back_ideal
            && self.p_annihilates
            && self.quotient_nonzero
    }
}

/// Rank >= 2 groups: transfers from the preimages of the proper subgroups of
/// `(Z/p)^2` already put `p` in the ideal.
pub fn check_pullback(
    group: &Arc<FiniteAbelianPGroup>,
    rho: &Surjection,
) -> Result<PullbackReport> {
    if group.rank() < 2 {
        return Err(Error::Precondition(format!(
            "{group} has rank {} < 2",
            group.rank()
        )));
    }
    let codomain = rho.codomain();
    let mut lines = Vec::new();
    for h in maximal_subgroups(codomain)? {
        lines.push(rho.preimage(group, &h)?);
    }
    let kernel = rho.preimage(group, &Subgroup::trivial(codomain))?;

    let ambient = CharDomain::ambient(group.clone());
    let mut acc = CharRingElement::zero(&ambient);
    for v in &lines {
        acc = acc.add(&transfer_unit(
            &ambient,
            &CharDomain::new(group.clone(), v.clone())?,
        )?)?;
    }
    acc = acc.sub(&transfer_unit(
        &ambient,
        &CharDomain::new(group.clone(), kernel.clone())?,
    )?)?;
    let pulled_back_identity_holds = acc == p_times_unit(&ambient);

    let mut sources = lines;
    sources.push(kernel);
    let pulled = ideal_from_sources(group, SubgroupPolicy::Explicit(sources.clone()), sources);
    let p_in_pulled_back_ideal = pulled.lattice().contains(p_times_unit(&ambient).coeffs())?;

    let q = quotient_report(&transfer_ideal(group)?);
    Ok(PullbackReport {
        group: group.to_string(),
        surjection: rho.matrix().clone(),
        pulled_back_identity_holds,
        p_in_pulled_back_ideal,
        p_annihilates: q.p_annihilates,
        quotient_nonzero: !q.is_zero(),
    })
}
