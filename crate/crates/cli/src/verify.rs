//! Claim suites over a family of groups.

use std::sync::Arc;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use trideal::charring::{transfer_unit, CharDomain};
use trideal::classfun::character_map;
use trideal::groups::{
    abelian_p_groups, enumerate_subgroups_bounded, is_prime, FiniteAbelianPGroup, Surjection,
    DEFAULT_MAX_SUBGROUPS,
};
use trideal::ideals::{
    audit_policy_equivalence, check_nonvanishing, check_pullback, check_rank_two,
    free_rank_prediction, quotient_report, transfer_ideal, POLICY_AUDIT_MAX_ORDER,
};
use trideal::transchromatic::{decomposition_report, DecompositionOptions};
use trideal::Execution;

use crate::report::SCHEMA_VERSION;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    /// Structural torsion checks only.
    Lemmas,
    /// Torsion checks plus transfer values, verdicts, policy audit and degeneration.
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Any,
    Cyclic,
    Noncyclic,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub scope: Scope,
    pub primes: Vec<u64>,
    pub max_order: u64,
    pub shape: Shape,
    pub execution: Execution,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySummary {
    pub schema_version: u32,
    pub scope: Scope,
    pub primes: Vec<u64>,
    pub max_order: u64,
    pub shape: Shape,
    pub groups: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: Vec<String>,
    pub claims: Vec<ClaimResult>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimResult {
    pub claim: String,
    pub group: String,
    pub passed: bool,
    pub detail: String,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn claim(name: &str, group: &str, passed: bool, detail: impl Into<String>) -> ClaimResult {
    ClaimResult {
        claim: name.to_string(),
        group: group.to_string(),
        passed,
        detail: detail.into(),
    }
}

fn failed_with(name: &str, group: &str, e: trideal::Error) -> ClaimResult {
    claim(name, group, false, format!("error: {e}"))
}

pub fn run_verify(opts: &VerifyOptions) -> Result<VerifySummary, CliError> {
    let mut primes = opts.primes.clone();
    primes.sort_unstable();
    primes.dedup();
    if let Some(&bad) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(CliError::Usage(format!("{bad} is not a prime")));
    }
    let max_order = usize::try_from(opts.max_order).unwrap_or(usize::MAX);
    if max_order as u128 > 1u128 << 32 {
        return Err(CliError::Bound(format!(
            "--max-order {} exceeds 2^32",
            opts.max_order
        )));
    }

    let mut skipped = vec![
        "trivial group: skipped, it has no proper subgroups and no transfer ideal".to_string(),
    ];
    let mut groups = Vec::new();
    for &p in &primes {
        let family = abelian_p_groups(p, max_order)?;
        if family.is_empty() {
            skipped.push(format!(
                "p = {p}: no nontrivial group of order <= {max_order}"
            ));
        }
        groups.extend(family.into_iter().filter(|g| match opts.shape {
            Shape::Any => true,
            Shape::Cyclic => g.is_cyclic(),
            Shape::Noncyclic => !g.is_cyclic(),
        }));
    }
    let groups: Vec<Arc<FiniteAbelianPGroup>> = groups.into_iter().map(Arc::new).collect();

    let mut claims = Vec::new();
    if opts.shape != Shape::Cyclic {
        for &p in &primes {
            if (p as u128) * (p as u128) > max_order as u128 {
                continue;
            }
            let name = "rank-two identity";
            let d = format!("{p}^1x{p}^1");
            claims.push(match check_rank_two(p) {
                Ok(r) => claim(
                    name,
                    &d,
                    r.holds(),
                    format!(
                        "identity {}, class values {}, p in ideal {}",
                        r.identity_holds, r.class_values_hold, r.p_annihilates
                    ),
                ),
                Err(e) => failed_with(name, &d, e),
            });
        }
    }
    let per_group = opts.execution.map(&groups, |g| group_claims(g, opts.scope));
    claims.extend(per_group.into_iter().flatten());

    let passed = claims.iter().filter(|c| c.passed).count();
    Ok(VerifySummary {
        schema_version: SCHEMA_VERSION,
        scope: opts.scope,
        primes,
        max_order: opts.max_order,
        shape: opts.shape,
        groups: groups.len(),
        passed,
        failed: claims.len() - passed,
        skipped,
        claims,
    })
}

fn group_claims(g: &Arc<FiniteAbelianPGroup>, scope: Scope) -> Vec<ClaimResult> {
    let d = g.descriptor();
    let mut out = Vec::new();

    let name = "nonvanishing";
    out.push(match check_nonvanishing(g) {
        Ok(r) => claim(
            name,
            &d,
            r.holds(),
            format!(
                "quotient nonzero {}, zero factor in (p) {}",
                r.quotient_nonzero, r.zero_factor_in_p
            ),
        ),
        Err(e) => failed_with(name, &d, e),
    });

    if g.rank() >= 2 {
        let name = "pullback to (Z/p)^2";
        out.push(
            match Surjection::project_two_largest(g).and_then(|rho| check_pullback(g, &rho)) {
                Ok(r) => claim(
                    name,
                    &d,
                    r.holds(),
                    format!(
                        "identity {}, p in pulled-back ideal {}",
                        r.pulled_back_identity_holds, r.p_in_pulled_back_ideal
                    ),
                ),
                Err(e) => failed_with(name, &d, e),
            },
        );
    }

    if scope == Scope::All {
        out.push(transfer_value_claim(g));
        out.push(torsion_claim(g));
        if g.order() <= POLICY_AUDIT_MAX_ORDER {
            let name = "policy equivalence";
            out.push(match audit_policy_equivalence(g, DEFAULT_MAX_SUBGROUPS) {
                Ok(same) => claim(name, &d, same, "maximal-only vs all-proper lattices"),
                Err(e) => failed_with(name, &d, e),
            });
        }
        out.push(degeneration_claim(g));
    }
    out
}

/// `character_map(Tr_{A'}(1))` is `|A/A'|` on `A'` and 0 off it, for every `A'`.
fn transfer_value_claim(g: &Arc<FiniteAbelianPGroup>) -> ClaimResult {
    let name = "transfer unit values";
    let d = g.descriptor();
    let subs = match enumerate_subgroups_bounded(g, DEFAULT_MAX_SUBGROUPS) {
        Ok(s) => s,
        Err(e) => return failed_with(name, &d, e),
    };
    let ambient = CharDomain::ambient(g.clone());
    for s in &subs {
        let f = match CharDomain::new(g.clone(), s.clone())
            .and_then(|dom| transfer_unit(&ambient, &dom))
        {
            Ok(t) => character_map(&t),
            Err(e) => return failed_with(name, &d, e),
        };
        let index = s.index() as u64;
        let ok = (0..g.order()).all(|a| {
            let expected = if s.contains(a) { index } else { 0 };
            f.value_at(a)
                .and_then(|v| v.as_integer())
                .is_some_and(|v| v == expected.into())
        });
        if !ok {
            return claim(
                name,
                &d,
                false,
                format!("wrong values for subgroup of order {}", s.order()),
            );
        }
    }
    claim(name, &d, true, format!("{} subgroups", subs.len()))
}

fn torsion_claim(g: &Arc<FiniteAbelianPGroup>) -> ClaimResult {
    let d = g.descriptor();
    let q = match transfer_ideal(g) {
        Ok(ideal) => quotient_report(&ideal),
        Err(e) => return failed_with("torsion verdict", &d, e),
    };
    if g.is_cyclic() {
        let expected = free_rank_prediction(g);
        claim(
            "cyclic quotient is free",
            &d,
            q.is_torsion_free() && q.free_rank == expected,
            format!(
                "free rank {} (expected {expected}), divisors {:?}",
                q.free_rank,
                divisors(&q)
            ),
        )
    } else {
        claim(
            "quotient is a nonzero F_p-algebra",
            &d,
            q.free_rank == 0 && !q.is_zero() && q.p_annihilates && q.p_torsion_present,
            format!(
                "free rank {}, {} divisors",
                q.free_rank,
                q.elementary_divisors.len()
            ),
        )
    }
}

fn degeneration_claim(g: &Arc<FiniteAbelianPGroup>) -> ClaimResult {
    let name = "height-1 degeneration";
    let d = g.descriptor();
    let direct = match transfer_ideal(g) {
        Ok(ideal) => quotient_report(&ideal),
        Err(e) => return failed_with(name, &d, e),
    };
    let opts = DecompositionOptions {
        execution: Execution::Sequential,
        ..DecompositionOptions::default()
    };
    match decomposition_report(g, 1, &opts) {
        Ok(r) => claim(
            name,
            &d,
            r.per_tuple.len() == 1
                && r.per_tuple[0].structure == direct
                && r.verdict_p_torsion == direct.p_torsion_present,
            format!("verdict {}", r.verdict_p_torsion),
        ),
        Err(e) => failed_with(name, &d, e),
    }
}

fn divisors(q: &trideal::QuotientStructure) -> Vec<String> {
    q.elementary_divisors
        .iter()
        .map(ToString::to_string)
        .collect()
}
