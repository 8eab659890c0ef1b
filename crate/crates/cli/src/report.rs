//! Report trees. Every command produces one of these; JSON output serializes
//! it directly and the human renderer walks the same tree.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use trideal::groups::{
    enumerate_subgroups_bounded, make_group, maximal_subgroups, FiniteAbelianPGroup, Subgroup,
    Surjection, DEFAULT_MAX_SUBGROUPS,
};
use trideal::ideals::{
    audit_policy_equivalence, build_transfer_ideal, check_nonvanishing, check_pullback,
    check_rank_two, quotient_report, SubgroupPolicy, POLICY_AUDIT_MAX_ORDER,
};
use trideal::transchromatic::{decomposition_report, DecompositionOptions, DecompositionReport};
use trideal::{Execution, QuotientStructure};

use crate::descriptor::Descriptor;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub group: GroupSummary,
    pub subgroups: SubgroupCounts,
    pub ideal: IdealSummary,
    pub quotient: QuotientSummary,
    pub checks: CheckSummary,
    pub policy_audit: Option<PolicyAudit>,
    pub decomposition: Option<DecompositionSummary>,
    pub assumptions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSummary {
    pub descriptor: String,
    pub prime: u64,
    pub exponents: Vec<u32>,
    pub order: u64,
    pub rank: usize,
    pub cyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupCounts {
    /// `None` when the subgroup lattice exceeds the enumeration bound.
    pub total: Option<u64>,
    pub maximal: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealSummary {
    pub policy: String,
    pub source_subgroups: usize,
    pub generator_count: usize,
    pub lattice_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientSummary {
    pub ambient_rank: usize,
    pub free_rank: usize,
    /// Invariant factors greater than 1, as decimal strings.
    pub elementary_divisors: Vec<String>,
    pub nonzero: bool,
    pub p_torsion_present: bool,
    pub prime_to_p_torsion_present: bool,
    /// `p` lies in the ideal, so the quotient is an F_p-algebra.
    pub fp_algebra: bool,
}

impl From<&QuotientStructure> for QuotientSummary {
    fn from(q: &QuotientStructure) -> Self {
        Self {
            ambient_rank: q.ambient_rank,
            free_rank: q.free_rank,
            elementary_divisors: q
                .elementary_divisors
                .iter()
                .map(ToString::to_string)
                .collect(),
            nonzero: !q.is_zero(),
            p_torsion_present: q.p_torsion_present,
            prime_to_p_torsion_present: q.prime_to_p_torsion_present(),
            fp_algebra: q.p_annihilates,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSummary {
    pub nonvanishing: NonvanishingCheck,
    /// Present for groups of rank at least 2.
    pub rank_two: Option<RankTwoCheck>,
    pub pullback: Option<PullbackCheck>,
}

/// The quotient is nonzero and the ideal's image at `0 in A` lies in `(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonvanishingCheck {
    pub quotient_nonzero: bool,
    pub zero_factor_in_p: bool,
    pub holds: bool,
}

/// For `(Z/p)^2`: the line transfers minus the regular transfer equal `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankTwoCheck {
    pub prime: u64,
    pub identity_holds: bool,
    pub class_values_hold: bool,
    pub p_annihilates: bool,
    pub quotient_nonzero: bool,
    pub holds: bool,
}

/// The rank-two identity pulled back along a surjection `rho: A -> (Z/p)^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PullbackCheck {
    pub surjection: Vec<Vec<i64>>,
    pub pulled_back_identity_holds: bool,
    pub p_in_pulled_back_ideal: bool,
    pub p_annihilates: bool,
    pub quotient_nonzero: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyAudit {
    pub maximal_equals_all_proper: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionSummary {
    pub height: u32,
    pub tuple_count: usize,
    pub distinct_subgroups: usize,
    pub verdict_p_torsion: bool,
    /// Row index of the first tuple whose factor has p-torsion.
    pub witness: Option<usize>,
    pub rows: Vec<TupleRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleRow {
    pub tuple: Vec<Vec<u64>>,
    pub subgroup_order: usize,
    pub subgroup_generators: Vec<Vec<u64>>,
    pub free_rank: usize,
    pub elementary_divisors: Vec<String>,
    pub p_torsion_present: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupListing {
    pub schema_version: u32,
    pub group: GroupSummary,
    pub total: usize,
    pub maximal: usize,
    pub subgroups: Vec<SubgroupRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupRow {
    pub order: usize,
    pub index: usize,
    pub generators: Vec<Vec<u64>>,
    pub maximal: bool,
}

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub policy: SubgroupPolicy,
    pub max_order: u64,
    pub max_tuples: usize,
    pub height: Option<u32>,
    pub execution: Execution,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            policy: SubgroupPolicy::MaximalOnly,
            max_order: 256,
            max_tuples: trideal::transchromatic::DEFAULT_MAX_TUPLES,
            height: None,
            execution: Execution::default(),
        }
    }
}

pub fn build_group(
    desc: &Descriptor,
    max_order: u64,
) -> Result<Arc<FiniteAbelianPGroup>, CliError> {
    match desc.order() {
        Some(order) if order <= max_order as u128 => {}
        order => {
            let shown = order.map_or_else(|| "more than 2^128".to_string(), |o| o.to_string());
            return Err(CliError::Bound(format!(
                "group order {shown} exceeds --max-order {max_order}"
            )));
        }
    }
    Ok(Arc::new(make_group(desc.prime, &desc.exponents)?))
}

pub fn group_summary(g: &FiniteAbelianPGroup) -> GroupSummary {
    GroupSummary {
        descriptor: g.descriptor(),
        prime: g.prime(),
        exponents: g.exponents().to_vec(),
        order: g.order() as u64,
        rank: g.rank(),
        cyclic: g.is_cyclic(),
    }
}

fn coords(g: &FiniteAbelianPGroup, indices: &[usize]) -> Vec<Vec<u64>> {
    indices.iter().map(|&a| g.coords(a)).collect()
}

pub fn analyze(
    g: &Arc<FiniteAbelianPGroup>,
    opts: &AnalyzeOptions,
) -> Result<AnalysisReport, CliError> {
    let total = match enumerate_subgroups_bounded(g, DEFAULT_MAX_SUBGROUPS) {
        Ok(subs) => Some(subs.len() as u64),
        Err(trideal::Error::BoundExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let maximal = maximal_subgroups(g)?.len() as u64;

    let ideal = build_transfer_ideal(g, opts.policy.clone(), DEFAULT_MAX_SUBGROUPS)?;
    let q = quotient_report(&ideal);

    let nv = check_nonvanishing(g)?;
    let (rank_two, pullback) = if g.rank() >= 2 {
        let r2 = check_rank_two(g.prime())?;
        let rho = Surjection::project_two_largest(g)?;
        let pb = check_pullback(g, &rho)?;
        (
            Some(RankTwoCheck {
                prime: r2.prime,
                identity_holds: r2.identity_holds,
                class_values_hold: r2.class_values_hold,
                p_annihilates: r2.p_annihilates,
                quotient_nonzero: r2.quotient_nonzero,
                holds: r2.holds(),
            }),
            Some(PullbackCheck {
                surjection: pb.surjection.to_vec(),
                pulled_back_identity_holds: pb.pulled_back_identity_holds,
                p_in_pulled_back_ideal: pb.p_in_pulled_back_ideal,
                p_annihilates: pb.p_annihilates,
                quotient_nonzero: pb.quotient_nonzero,
                holds: pb.holds(),
            }),
        )
    } else {
        (None, None)
    };

    let policy_audit = if g.order() <= POLICY_AUDIT_MAX_ORDER {
        Some(PolicyAudit {
            maximal_equals_all_proper: audit_policy_equivalence(g, DEFAULT_MAX_SUBGROUPS)?,
        })
    } else {
        None
    };

    let (decomposition, assumptions) = match opts.height {
        Some(height) => {
            let report = decomposition_report(
                g,
                height,
                &DecompositionOptions {
                    policy: opts.policy.clone(),
                    max_tuples: opts.max_tuples,
                    max_subgroups: DEFAULT_MAX_SUBGROUPS,
                    execution: opts.execution,
                },
            )?;
            let notes = report.assumptions.iter().map(|s| s.to_string()).collect();
            (Some(decomposition_summary(g, &report)), notes)
        }
        None => (None, Vec::new()),
    };

    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        group: group_summary(g),
        subgroups: SubgroupCounts { total, maximal },
        ideal: IdealSummary {
            policy: opts.policy.name().to_string(),
            source_subgroups: ideal.source_subgroups().len(),
            generator_count: ideal.generator_count(),
            lattice_rank: ideal.lattice().rank(),
        },
        quotient: QuotientSummary::from(&q),
        checks: CheckSummary {
            nonvanishing: NonvanishingCheck {
                quotient_nonzero: nv.quotient_nonzero,
                zero_factor_in_p: nv.zero_factor_in_p,
                holds: nv.holds(),
            },
            rank_two,
            pullback,
        },
        policy_audit,
        decomposition,
        assumptions,
    })
}

fn decomposition_summary(
    g: &FiniteAbelianPGroup,
    report: &DecompositionReport,
) -> DecompositionSummary {
    let rows: Vec<TupleRow> = report
        .per_tuple
        .iter()
        .map(|f| {
            let sub: &Subgroup = f.tuple.generated_subgroup();
            TupleRow {
                tuple: coords(g, f.tuple.indices()),
                subgroup_order: sub.order(),
                subgroup_generators: coords(g, sub.generators()),
                free_rank: f.structure.free_rank,
                elementary_divisors: f
                    .structure
                    .elementary_divisors
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
                p_torsion_present: f.structure.p_torsion_present,
            }
        })
        .collect();
    let mut distinct: Vec<&[usize]> = report
        .per_tuple
        .iter()
        .map(|f| f.tuple.generated_subgroup().elements())
        .collect();
    distinct.sort_unstable();
    distinct.dedup();
    DecompositionSummary {
        height: report.height,
        tuple_count: rows.len(),
        distinct_subgroups: distinct.len(),
        verdict_p_torsion: report.verdict_p_torsion,
        witness: report.witness,
        rows,
    }
}

pub fn list_subgroups(g: &Arc<FiniteAbelianPGroup>) -> Result<SubgroupListing, CliError> {
    let mut subs = enumerate_subgroups_bounded(g, DEFAULT_MAX_SUBGROUPS)?;
    subs.sort();
    let maximal = maximal_subgroups(g)?;
    let rows: Vec<SubgroupRow> = subs
        .iter()
        .map(|s| SubgroupRow {
            order: s.order(),
            index: s.index(),
            generators: coords(g, s.generators()),
            maximal: maximal.contains(s),
        })
        .collect();
    Ok(SubgroupListing {
        schema_version: SCHEMA_VERSION,
        group: group_summary(g),
        total: rows.len(),
        maximal: maximal.len(),
        subgroups: rows,
    })
}

/// `s mod m` for a decimal string.
fn decimal_mod(s: &str, m: u64) -> Option<u64> {
    s.bytes().try_fold(0u64, |acc, b| {
        b.is_ascii_digit()
            .then(|| (acc * 10 + u64::from(b - b'0')) % m)
    })
}

impl AnalysisReport {
    /// Recomputes every derived boolean from the raw fields and lists the
    /// ones that disagree with the stored values.
    pub fn consistency_errors(&self) -> Vec<String> {
        let mut errors = Vec::new();
        let mut expect = |name: &str, stored: bool, recomputed: bool| {
            if stored != recomputed {
                errors.push(format!("{name}: stored {stored}, recomputed {recomputed}"));
            }
        };
        let p = self.group.prime;
        let divisible = |ds: &[String]| ds.iter().any(|d| decimal_mod(d, p) == Some(0));
        let q = &self.quotient;
        expect(
            "quotient.nonzero",
            q.nonzero,
            q.free_rank > 0 || !q.elementary_divisors.is_empty(),
        );
        expect(
            "quotient.p_torsion_present",
            q.p_torsion_present,
            divisible(&q.elementary_divisors),
        );
        expect(
            "quotient.fp_algebra",
            q.fp_algebra,
            q.free_rank == 0 && q.elementary_divisors.iter().all(|d| *d == p.to_string()),
        );

        let nv = &self.checks.nonvanishing;
        expect(
            "checks.nonvanishing.holds",
            nv.holds,
            nv.quotient_nonzero && nv.zero_factor_in_p,
        );
        if let Some(r) = &self.checks.rank_two {
            let all =
                r.identity_holds && r.class_values_hold && r.p_annihilates && r.quotient_nonzero;
            expect("checks.rank_two.holds", r.holds, all);
        }
        if let Some(r) = &self.checks.pullback {
            let all = r.pulled_back_identity_holds
                && r.p_in_pulled_back_ideal
                && r.p_annihilates
                && r.quotient_nonzero;
            expect("checks.pullback.holds", r.holds, all);
        }
        expect(
            "checks.rank_two present",
            self.checks.rank_two.is_some(),
            self.group.rank >= 2,
        );

        if let Some(d) = &self.decomposition {
            for (i, row) in d.rows.iter().enumerate() {
                expect(
                    &format!("decomposition.rows[{i}].p_torsion_present"),
                    row.p_torsion_present,
                    divisible(&row.elementary_divisors),
                );
            }
            let first = d.rows.iter().position(|r| r.p_torsion_present);
            expect(
                "decomposition.verdict_p_torsion",
                d.verdict_p_torsion,
                first.is_some(),
            );
            expect("decomposition.witness", d.witness == first, true);
            expect(
                "decomposition.tuple_count",
                d.tuple_count == d.rows.len(),
                true,
            );
        }
        errors
    }
}
