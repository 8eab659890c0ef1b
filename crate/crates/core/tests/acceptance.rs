//! Acceptance criteria. Runs as a plain binary under `cargo test` and prints
//! one PASS/FAIL line per criterion, with its wall-clock limit.

use std::collections::HashSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trideal::charring::{line_transfer_defect, transfer_unit, CharDomain, CharRingElement};
use trideal::classfun::{character_map, class_transfer};
use trideal::groups::{abelian_p_groups, enumerate_subgroups, make_group, FiniteAbelianPGroup};
use trideal::ideals::{build_transfer_ideal, quotient_report, transfer_ideal, SubgroupPolicy};
use trideal::intlin::{quotient_structure, smith_normal_form, IntMatrix};
use trideal::transchromatic::{decomposition_report, DecompositionOptions};
use trideal::Execution;

type Outcome = Result<(), String>;

/// Id, description, wall-clock limit, check.
type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn family(primes: &[u64], max_order: usize) -> Vec<Arc<FiniteAbelianPGroup>> {
    primes
        .iter()
        .flat_map(|&p| abelian_p_groups(p, max_order).unwrap())
        .map(Arc::new)
        .collect()
}

fn first_error(results: Vec<Outcome>) -> Outcome {
    results
        .into_iter()
        .collect::<Result<Vec<()>, String>>()
        .map(|_| ())
}

/// AC1: sum of line transfers minus the regular transfer is p * 1.
fn ac1_line_transfer_identity() -> Outcome {
    for p in [2u64, 3, 5, 7] {
        let w = line_transfer_defect(p).map_err(|e| e.to_string())?;
        let mut expected = vec![BigInt::zero(); (p * p) as usize];
        expected[0] = BigInt::from(p);
        ensure(w.coeffs() == &expected[..], || {
            format!("p = {p}: got {:?}", w.coeffs())
        })?;
    }
    Ok(())
}

/// AC2: character of Tr_{A'}(1) is |A/A'| on A' and 0 off A'.
fn ac2_transfer_unit_values() -> Outcome {
    let groups = family(&[2, 3], 128);
    first_error(Execution::Parallel.map(&groups, |g| {
        let ambient = CharDomain::ambient(g.clone());
        let subs = enumerate_subgroups(g).map_err(|e| e.to_string())?;
        first_error(Execution::Parallel.map(&subs, |s| {
            let dom = CharDomain::new(g.clone(), s.clone()).map_err(|e| e.to_string())?;
            let f = character_map(&transfer_unit(&ambient, &dom).map_err(|e| e.to_string())?);
            let index = BigInt::from(s.index());
            for a in 0..g.order() {
                let expected = if s.contains(a) {
                    index.clone()
                } else {
                    BigInt::zero()
                };
                let got = f.value_at(a).and_then(|v| v.as_integer());
                ensure(got.as_ref() == Some(&expected), || {
                    format!("{g}, subgroup {:?}, element {a}: {got:?}", s.elements())
                })?;
            }
            Ok(())
        }))
    }))
}

/// AC3: every non-cyclic group has a nonzero, finite F_p-algebra quotient with p-torsion.
fn ac3_noncyclic_torsion() -> Outcome {
    let groups: Vec<_> = family(&[2, 3, 5], 128)
        .into_iter()
        .filter(|g| !g.is_cyclic())
        .collect();
    ensure(groups.len() == 47, || {
        format!("expected 47 non-cyclic groups, found {}", groups.len())
    })?;
    first_error(Execution::Parallel.map(&groups, |g| {
        let q = quotient_report(&transfer_ideal(g).map_err(|e| e.to_string())?);
        let p = BigInt::from(g.prime());
        ensure(
            q.free_rank == 0
                && !q.is_zero()
                && q.p_annihilates
                && q.elementary_divisors.iter().any(|d| d.is_multiple_of(&p)),
            || format!("{g}: {q:?}"),
        )
    }))
}

/// AC4: cyclic groups give torsion-free quotients of rank p^k - p^(k-1).
fn ac4_cyclic_control() -> Outcome {
    let mut groups = Vec::new();
    for p in [2u64, 3, 5] {
        for k in 1..=4u32 {
            groups.push(Arc::new(make_group(p, &[k]).unwrap()));
        }
    }
    first_error(Execution::Parallel.map(&groups, |g| {
        let q = quotient_report(&transfer_ideal(g).map_err(|e| e.to_string())?);
        let p = g.prime() as usize;
        let k = g.exponent_log();
        let expected = p.pow(k) - p.pow(k - 1);
        ensure(q.is_torsion_free() && q.free_rank == expected, || {
            format!("{g}: expected free rank {expected}, got {q:?}")
        })
    }))
}

/// AC5: (Z/2)^2 gives exactly Z/2, cross-checked by a Smith form of the raw
/// generator matrix.
fn ac5_klein_four() -> Outcome {
    let g = Arc::new(make_group(2, &[1, 1]).unwrap());
    let ideal =
        build_transfer_ideal(&g, SubgroupPolicy::AllProper, 100).map_err(|e| e.to_string())?;
    let q = quotient_report(&ideal);
    ensure(
        q.free_rank == 0 && q.elementary_divisors == vec![BigInt::from(2)],
        || format!("{q:?}"),
    )?;
    let m = IntMatrix::from_rows(4, &ideal.generator_vectors()).map_err(|e| e.to_string())?;
    let snf = smith_normal_form(&m);
    snf.verify(&m)?;
    let factors: Vec<BigInt> = snf.invariant_factors();
    let ones = factors.iter().filter(|d| d.is_one()).count();
    ensure(
        factors.len() == 4 && ones == 3 && factors[3] == BigInt::from(2),
        || format!("raw Smith factors {factors:?}"),
    )
}

/// AC6: character_map . transfer == class_transfer . character_map on bases.
fn ac6_transfer_square() -> Outcome {
    let groups = family(&[2, 3], 64);
    first_error(Execution::Parallel.map(&groups, |g| {
        let ambient = CharDomain::ambient(g.clone());
        let subs = enumerate_subgroups(g).map_err(|e| e.to_string())?;
        first_error(Execution::Parallel.map(&subs, |s| {
            let dom = CharDomain::new(g.clone(), s.clone()).map_err(|e| e.to_string())?;
            for psi in 0..dom.size() {
                let x = CharRingElement::character(&dom, psi);
                let lhs = character_map(&x.transfer(&ambient).map_err(|e| e.to_string())?);
                let rhs =
                    class_transfer(&character_map(&x), &ambient).map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || {
                    format!("{g}, subgroup {:?}, character {psi}", s.elements())
                })?;
            }
            Ok(())
        }))
    }))
}

/// AC7: maximal-only and all-proper ideals are the same lattice.
fn ac7_policy_equivalence() -> Outcome {
    let groups = family(&[2, 3, 5, 7], 81);
    first_error(Execution::Parallel.map(&groups, |g| {
        let maximal = build_transfer_ideal(g, SubgroupPolicy::MaximalOnly, 1 << 16)
            .map_err(|e| e.to_string())?;
        let all = build_transfer_ideal(g, SubgroupPolicy::AllProper, 1 << 16)
            .map_err(|e| e.to_string())?;
        let (lm, la) = (maximal.lattice(), all.lattice());
        let mutual = lm.contains_lattice(&la).map_err(|e| e.to_string())?
            && la.contains_lattice(&lm).map_err(|e| e.to_string())?;
        ensure(mutual && lm == la, || format!("{g}: lattices differ"))
    }))
}

fn laplace_det(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = BigInt::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * laplace_det(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Invariant factors from determinantal divisors: d_k = D_k / D_(k-1) with
/// D_k the gcd of all k x k minors.
fn determinantal_invariants(m: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let rows = m.len();
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let sub: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                    .collect();
                g = g.gcd(&laplace_det(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// |Z^n / (L + M Z^n)| by closing the row span inside (Z/M)^n.
fn enumerated_quotient_order(m: &[Vec<i64>], cols: usize, modulus: i64) -> Option<u64> {
    let space = (modulus as u64).checked_pow(cols as u32)?;
    if space > 1 << 22 {
        return None;
    }
    let encode = |v: &[i64]| {
        v.iter().fold(0u64, |acc, &x| {
            acc * modulus as u64 + x.rem_euclid(modulus) as u64
        })
    };
    let mut seen = HashSet::from([encode(&vec![0; cols])]);
    let mut frontier = vec![vec![0i64; cols]];
    while let Some(v) = frontier.pop() {
        for row in m {
            let w: Vec<i64> = v
                .iter()
                .zip(row)
                .map(|(a, b)| (a + b).rem_euclid(modulus))
                .collect();
            if seen.insert(encode(&w)) {
                frontier.push(w);
            }
        }
    }
    Some(space / seen.len() as u64)
}

/// AC8: Smith form postconditions on random matrices, and quotient orders
/// against determinantal and enumeration oracles.
fn ac8_snf_self_verification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut oracle_checks = 0;
    for trial in 0..1000 {
        let rows = rng.gen_range(1..=12);
        let cols = rng.gen_range(1..=12);
        let m: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-1000..=1000)).collect())
            .collect();
        let mat = IntMatrix::from_i64(&m).unwrap();
        let snf = smith_normal_form(&mat);
        snf.verify(&mat)
            .map_err(|e| format!("trial {trial}: {e}"))?;
        if cols <= 6 && rows <= 8 {
            let big: Vec<Vec<BigInt>> = m
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            let oracle = determinantal_invariants(&big, cols);
            ensure(oracle == snf.invariant_factors(), || {
                format!(
                    "trial {trial}: oracle {oracle:?} vs {:?}",
                    snf.invariant_factors()
                )
            })?;
            oracle_checks += 1;
        }
    }
    ensure(oracle_checks >= 50, || {
        format!("only {oracle_checks} determinantal checks")
    })?;

    // small entries so that finite quotients are small enough to enumerate
    let mut enumerated = 0;
    for trial in 0..2000 {
        let cols = rng.gen_range(1..=6);
        let rows = cols + rng.gen_range(0..=2);
        let m: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-4..=4)).collect())
            .collect();
        let big: Vec<Vec<BigInt>> = m
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let q = quotient_structure(cols, &big, 2).map_err(|e| e.to_string())?;
        if q.free_rank != 0 {
            continue;
        }
        let order = q.torsion_order();
        let oracle: BigInt = determinantal_invariants(&big, cols).iter().product();
        ensure(order == oracle.abs(), || {
            format!("small trial {trial}: {order} vs minors {oracle}")
        })?;
        let Ok(modulus) = i64::try_from(&order) else {
            continue;
        };
        if let Some(count) = enumerated_quotient_order(&m, cols, modulus.max(1)) {
            ensure(BigInt::from(count) == order, || {
                format!("small trial {trial}: enumeration {count} vs {order}")
            })?;
            enumerated += 1;
        }
    }
    ensure(enumerated >= 100, || {
        format!("only {enumerated} quotients enumerated")
    })
}

/// AC9: height-1 degeneration and verdicts at heights 2 and 3.
fn ac9_decomposition() -> Outcome {
    let opts = DecompositionOptions::default();
    for g in family(&[2, 3], 32) {
        let direct = quotient_report(&transfer_ideal(&g).map_err(|e| e.to_string())?);
        let r = decomposition_report(&g, 1, &opts).map_err(|e| e.to_string())?;
        ensure(
            r.per_tuple.len() == 1 && r.per_tuple[0].structure == direct,
            || format!("{g}: height-1 factor differs from direct analysis"),
        )?;
        ensure(r.verdict_p_torsion == direct.p_torsion_present, || {
            format!("{g}: height-1 verdict")
        })?;
    }
    for (p, e) in [(2u64, vec![1u32, 1]), (3, vec![1, 1])] {
        let g = Arc::new(make_group(p, &e).unwrap());
        for height in [2, 3] {
            let r = decomposition_report(&g, height, &opts).map_err(|e| e.to_string())?;
            let expected_len = g.order().pow(height - 1);
            ensure(
                r.per_tuple.len() == expected_len
                    && r.verdict_p_torsion
                    && r.witness_tuple().is_some_and(|t| t.is_zero()),
                || format!("{g} at height {height}: {:?}", r.witness),
            )?;
        }
    }
    let z8 = Arc::new(make_group(2, &[3]).unwrap());
    for height in 1..=3 {
        let r = decomposition_report(&z8, height, &opts).map_err(|e| e.to_string())?;
        ensure(!r.verdict_p_torsion, || {
            format!("Z/8 at height {height} reported torsion")
        })?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "AC1",
            "line-transfer identity equals p for p in {2,3,5,7}",
            Duration::from_secs(1),
            ac1_line_transfer_identity,
        ),
        (
            "AC2",
            "transfer units take |A/A'| on A' and 0 off (p in {2,3}, |A| <= 128)",
            Duration::from_secs(30),
            ac2_transfer_unit_values,
        ),
        (
            "AC3",
            "non-cyclic quotients are finite nonzero F_p-algebras with p-torsion",
            Duration::from_secs(120),
            ac3_noncyclic_torsion,
        ),
        (
            "AC4",
            "cyclic quotients are free of rank p^k - p^(k-1)",
            Duration::from_secs(60),
            ac4_cyclic_control,
        ),
        (
            "AC5",
            "(Z/2)^2 quotient is exactly Z/2",
            Duration::from_secs(1),
            ac5_klein_four,
        ),
        (
            "AC6",
            "character map commutes with transfer on bases (|A| <= 64)",
            Duration::from_secs(60),
            ac6_transfer_square,
        ),
        (
            "AC7",
            "maximal and all-proper ideals coincide (|A| <= 81)",
            Duration::from_secs(60),
            ac7_policy_equivalence,
        ),
        (
            "AC8",
            "Smith form postconditions and quotient-order oracles",
            Duration::from_secs(120),
            ac8_snf_self_verification,
        ),
        (
            "AC9",
            "decomposition degeneration and height 1-3 verdicts",
            Duration::from_secs(120),
            ac9_decomposition,
        ),
    ];

    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (id, what, limit, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| id.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|_| {
            ensure(elapsed <= limit, || {
                format!("took {elapsed:.2?}, limit {limit:?}")
            })
        });
        match outcome {
            Ok(()) => println!("[PASS] {id} {what} ({elapsed:.2?}, limit {limit:?})"),
            Err(e) => {
                failed += 1;
                println!("[FAIL] {id} {what} ({elapsed:.2?}, limit {limit:?}): {e}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
