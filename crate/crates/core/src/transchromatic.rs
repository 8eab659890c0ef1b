//! Height-n bookkeeping: the factors indexed by tuples in `A^(n-1)`, one
//! transfer ideal per tuple, and the aggregated p-torsion verdict.
//!
//! The ideal attached to a tuple is generated by transfers from the proper
//! subgroups containing the subgroup the tuple generates. For the zero tuple
//! this is the full transfer ideal. The choice for other tuples is a modeling
//! assumption and lives only in [`tuple_ideal`].

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::groups::{
    enumerate_subgroups_bounded, maximal_subgroups, FiniteAbelianPGroup, GroupElement, Subgroup,
};
use crate::ideals::{ideal_from_sources, quotient_report, SubgroupPolicy, TransferIdeal};
use crate::intlin::QuotientStructure;

pub const DEFAULT_MAX_TUPLES: usize = 100_000;

/// Stated with every decomposition report.
pub const TUPLE_IDEAL_ASSUMPTION: &str =
    "the ideal for a tuple (a_i) is generated by transfers from the proper \
subgroups containing <a_1, ..., a_{n-1}>; for the zero tuple this is the full transfer ideal";

/// Stated with every decomposition report.
pub const FLAT_BASE_CHANGE_NOTE: &str =
    "p-torsion of a finite product is detected factorwise, and a faithfully \
flat base change of each factor preserves and reflects it";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopTuple {
    entries: Vec<GroupElement>,
    indices: Vec<usize>,
    generated: Subgroup,
}

impl LoopTuple {
    pub fn new(group: &FiniteAbelianPGroup, indices: Vec<usize>) -> Self {
        let generated = Subgroup::generated_by(group, &indices);
        let entries = indices.iter().map(|&i| group.element(i)).collect();
        Self {
            entries,
            indices,
            generated,
        }
    }

    pub fn entries(&self) -> &[GroupElement] {
        &self.entries
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn generated_subgroup(&self) -> &Subgroup {
        &self.generated
    }

    pub fn is_zero(&self) -> bool {
        self.indices.iter().all(|&i| i == 0)
    }
}

/// `|A|^(n-1)`, or `None` on overflow.
fn tuple_count(group: &FiniteAbelianPGroup, height: u32) -> Option<u128> {
    (group.order() as u128).checked_pow(height.checked_sub(1)?)
}

/// All tuples in `A^(n-1)`, lexicographic on element indices.
pub fn enumerate_tuples(
    group: &FiniteAbelianPGroup,
    height: u32,
    max_tuples: usize,
) -> Result<Vec<LoopTuple>> {
    if height == 0 {
        return Err(Error::Precondition("height must be at least 1".into()));
    }
    let count = tuple_count(group, height).unwrap_or(u128::MAX);
    if count > max_tuples as u128 {
        return Err(Error::BoundExceeded {
            what: "tuple count",
            limit: max_tuples as u128,
            actual: count,
        });
    }
    let len = (height - 1) as usize;
    let n = group.order();
    let mut out = Vec::with_capacity(count as usize);
    let mut idx = vec![0usize; len];
    loop {
        out.push(LoopTuple::new(group, idx.clone()));
        let mut i = len;
        loop {
            if i == 0 {
                return Ok(out);
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

/// Proper subgroups containing `base`, per policy. With `MaximalOnly` only
/// the maximal ones; they generate the same ideal by transitivity and the
/// projection formula.
fn sources_containing(
    group: &FiniteAbelianPGroup,
    base: &Subgroup,
    policy: &SubgroupPolicy,
    max_subgroups: usize,
) -> Result<Vec<Subgroup>> {
    let candidates = match policy {
        SubgroupPolicy::AllProper => enumerate_subgroups_bounded(group, max_subgroups)?,
        SubgroupPolicy::MaximalOnly => maximal_subgroups(group)?,
        SubgroupPolicy::Explicit(list) => list.clone(),
    };
    Ok(candidates
        .into_iter()
        .filter(|s| s.is_proper() && base.is_subgroup_of(s))
        .collect())
}

/// The transfer ideal attached to a tuple.
pub fn tuple_ideal(
    group: &Arc<FiniteAbelianPGroup>,
    tuple: &LoopTuple,
    policy: &SubgroupPolicy,
    max_subgroups: usize,
) -> Result<TransferIdeal> {
    subgroup_ideal(group, tuple.generated_subgroup(), policy, max_subgroups)
}

fn subgroup_ideal(
    group: &Arc<FiniteAbelianPGroup>,
    base: &Subgroup,
    policy: &SubgroupPolicy,
    max_subgroups: usize,
) -> Result<TransferIdeal> {
    let sources = sources_containing(group, base, policy, max_subgroups)?;
    Ok(ideal_from_sources(group, policy.clone(), sources))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleFactor {
    pub tuple: LoopTuple,
    pub structure: QuotientStructure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub group: String,
    pub height: u32,
    pub per_tuple: Vec<TupleFactor>,
    pub verdict_p_torsion: bool,
    /// First tuple (in lexicographic order) whose factor has p-torsion.
    pub witness: Option<usize>,
    pub assumptions: Vec<&'static str>,
}

impl DecompositionReport {
    pub fn witness_tuple(&self) -> Option<&LoopTuple> {
        self.witness.map(|i| &self.per_tuple[i].tuple)
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionOptions {
    pub policy: SubgroupPolicy,
    pub max_tuples: usize,
    pub max_subgroups: usize,
    pub execution: Execution,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        Self {
            policy: SubgroupPolicy::MaximalOnly,
            max_tuples: DEFAULT_MAX_TUPLES,
            max_subgroups: crate::groups::DEFAULT_MAX_SUBGROUPS,
            execution: Execution::default(),
        }
    }
}

/// Quotient structure of every factor, plus the verdict. The quotient depends
/// only on the generated subgroup, so each distinct subgroup is computed once.
pub fn decomposition_report(
    group: &Arc<FiniteAbelianPGroup>,
    height: u32,
    opts: &DecompositionOptions,
) -> Result<DecompositionReport> {
    let tuples = enumerate_tuples(group, height, opts.max_tuples)?;

    let mut distinct: Vec<Subgroup> = Vec::new();
    let mut slot: HashMap<&Subgroup, usize> = HashMap::new();
    let mut which = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let next = distinct.len();
        let k = *slot.entry(t.generated_subgroup()).or_insert(next);
        if k == next {
            distinct.push(t.generated_subgroup().clone());
        }
        which.push(k);
    }

    let structures = opts
        .execution
        .map(&distinct, |base| {
            subgroup_ideal(group, base, &opts.policy, opts.max_subgroups)
                .map(|ideal| quotient_report(&ideal))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let per_tuple: Vec<TupleFactor> = tuples
        .into_iter()
        .zip(which)
        .map(|(tuple, k)| TupleFactor {
            tuple,
            structure: structures[k].clone(),
        })
        .collect();
    let witness = per_tuple.iter().position(|f| f.structure.p_torsion_present);
    Ok(DecompositionReport {
        group: group.to_string(),
        height,
        verdict_p_torsion: witness.is_some(),
        witness,
        per_tuple,
        assumptions: vec![TUPLE_IDEAL_ASSUMPTION, FLAT_BASE_CHANGE_NOTE],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::make_group;
    use crate::ideals::build_transfer_ideal;
    use num_bigint::BigInt;

    fn group(p: u64, e: &[u32]) -> Arc<FiniteAbelianPGroup> {
        Arc::new(make_group(p, e).unwrap())
    }

    #[test]
    fn tuple_counts() {
        let v4 = make_group(2, &[1, 1]).unwrap();
        let t = enumerate_tuples(&v4, 1, 10).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t[0].entries().is_empty());
        assert!(t[0].generated_subgroup().is_trivial());
        assert_eq!(enumerate_tuples(&v4, 2, 10).unwrap().len(), 4);
        let z2 = make_group(2, &[1]).unwrap();
        let t = enumerate_tuples(&z2, 3, 10).unwrap();
        assert_eq!(t.len(), 4);
        let idx: Vec<&[usize]> = t.iter().map(|x| x.indices()).collect();
        assert_eq!(idx, vec![&[0, 0][..], &[0, 1], &[1, 0], &[1, 1]]);
    }

    #[test]
    fn tuple_bound_and_height_errors() {
        let g = make_group(2, &[2, 2]).unwrap();
        assert!(matches!(
            enumerate_tuples(&g, 4, 1000),
            Err(Error::BoundExceeded { .. })
        ));
        assert!(matches!(
            enumerate_tuples(&g, 0, 1000),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn zero_tuple_is_full_transfer_ideal() {
        let g = group(2, &[2, 1]);
        let zero = LoopTuple::new(&g, vec![0]);
        for policy in [SubgroupPolicy::AllProper, SubgroupPolicy::MaximalOnly] {
            let a = tuple_ideal(&g, &zero, &policy, 1000).unwrap();
            let b = build_transfer_ideal(&g, policy, 1000).unwrap();
            assert_eq!(a.generator_vectors(), b.generator_vectors());
        }
    }

    #[test]
    fn nonzero_tuple_in_v4() {
        let g = group(2, &[1, 1]);
        // (1,0) has index 2
        let t = LoopTuple::new(&g, vec![2]);
        let ideal = tuple_ideal(&g, &t, &SubgroupPolicy::AllProper, 100).unwrap();
        assert_eq!(ideal.source_subgroups().len(), 1);
        assert_eq!(ideal.source_subgroups()[0].elements(), &[0, 2]);
    }

    #[test]
    fn generating_tuple_gives_zero_ideal() {
        let g = group(2, &[1, 1]);
        let t = LoopTuple::new(&g, vec![1, 2]);
        let ideal = tuple_ideal(&g, &t, &SubgroupPolicy::AllProper, 100).unwrap();
        assert!(ideal.source_subgroups().is_empty());
        let q = quotient_report(&ideal);
        assert_eq!(q.free_rank, 4);
        assert!(q.is_torsion_free());
    }

    #[test]
    fn monotone_in_generated_subgroup() {
        let g = group(2, &[2, 1]);
        let tuples = enumerate_tuples(&g, 2, 100).unwrap();
        let lattices: Vec<_> = tuples
            .iter()
            .map(|t| {
                tuple_ideal(&g, t, &SubgroupPolicy::AllProper, 100)
                    .unwrap()
                    .lattice()
            })
            .collect();
        for (i, a) in tuples.iter().enumerate() {
            for (j, b) in tuples.iter().enumerate() {
                if a.generated_subgroup()
                    .is_subgroup_of(b.generated_subgroup())
                {
                    assert!(lattices[i].contains_lattice(&lattices[j]).unwrap());
                }
            }
        }
    }

    #[test]
    fn report_examples() {
        let opts = DecompositionOptions::default();
        let r = decomposition_report(&group(2, &[1, 1]), 1, &opts).unwrap();
        assert!(r.verdict_p_torsion);
        assert_eq!(r.per_tuple.len(), 1);
        assert_eq!(r.witness, Some(0));
        assert_eq!(
            r.per_tuple[0].structure.elementary_divisors,
            vec![BigInt::from(2)]
        );

        let r = decomposition_report(&group(2, &[2]), 2, &opts).unwrap();
        assert!(!r.verdict_p_torsion);
        assert!(r.per_tuple.iter().all(|f| f.structure.is_torsion_free()));

        let r = decomposition_report(&group(2, &[1, 1]), 2, &opts).unwrap();
        assert!(r.verdict_p_torsion);
        assert!(r.witness_tuple().unwrap().is_zero());
    }

    #[test]
    fn execution_modes_agree() {
        let g = group(3, &[1, 1]);
        let seq = DecompositionOptions {
            execution: Execution::Sequential,
            ..Default::default()
        };
        let par = DecompositionOptions::default();
        assert_eq!(
            decomposition_report(&g, 2, &seq).unwrap(),
            decomposition_report(&g, 2, &par).unwrap()
        );
    }
}
