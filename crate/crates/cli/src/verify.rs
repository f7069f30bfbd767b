use std::collections::HashSet;

use anyhow::{bail, Result};
use avoidance_core::enumerate::{count_avoiders, count_monotone_avoiders, lower_bound_a_kk, MAX_DFS_LENGTH};
use avoidance_core::injection::verify_injection;
use avoidance_core::perm::{decode_rank_profile, family_a, family_a_ki, rank_profile};
use avoidance_core::tableaux::{inverse_rsk, rsk, syt_count};
use avoidance_core::{PatternSet, Permutation, Shape};
use num_bigint::BigUint;
use serde::Serialize;

use crate::args::{RunConfig, Suite, VerifyArgs};
use crate::output;

#[derive(Serialize, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    fn pass(name: String, detail: String) -> Self {
        Self { name, passed: true, detail, witness: None }
    }

    fn fail(name: String, detail: String, witness: impl ToString) -> Self {
        Self { name, passed: false, detail, witness: Some(witness.to_string()) }
    }
}

#[derive(Serialize, Debug)]
pub struct VerifyReport {
    pub suite: Suite,
    pub config: RunConfig,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::Injection => "injection",
        Suite::Rsk => "rsk",
        Suite::ProductFormula => "product-formula",
        Suite::RankWords => "rank-words",
        Suite::LowerBound => "lower-bound",
        Suite::Tableaux => "tableaux",
    }
}

fn require_k(args: &VerifyArgs, min: usize) -> Result<usize> {
    match args.k {
        Some(k) if k >= min => Ok(k),
        Some(k) => bail!("suite {} needs --k >= {min}, got {k}", suite_name(args.suite)),
        None => bail!("suite {} needs --k", suite_name(args.suite)),
    }
}

fn require_dfs_reach(n: usize) -> Result<()> {
    if n > MAX_DFS_LENGTH {
        bail!("--n {n} is beyond enumeration reach (at most {MAX_DFS_LENGTH})");
    }
    Ok(())
}

fn injection(k: usize, n_max: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 1..=n_max {
        let r = verify_injection(k, n)?;
        let name = format!("n={n}");
        let detail = format!("{} domain members, {} codomain members", r.domain_size, r.codomain_size);
        checks.push(match r.witnesses.first() {
            None if r.passed() => Check::pass(name, detail),
            None => Check::fail(name, detail, "count inequality fails"),
            Some(w) => {
                let other = w.other.as_ref().map(|o| format!(" / {o}")).unwrap_or_default();
                Check::fail(name, detail, format!("{}: {}{other} ({})", w.check, w.permutation, w.detail))
            }
        });
    }
    Ok(checks)
}

fn rsk_suite(n_max: usize) -> Vec<Check> {
    (0..=n_max)
        .map(|n| {
            let name = format!("n={n}");
            let mut count = 0usize;
            for p in Permutation::all(n) {
                let (pt, qt) = rsk(&p);
                let failure = match inverse_rsk(&pt, &qt) {
                    Err(e) => Some(format!("inverse fails: {e}")),
                    Ok(back) if back != p => Some(format!("round trip gives {back}")),
                    Ok(_) if (pt == qt) != p.is_involution() => Some("P = Q disagrees with involution".into()),
                    Ok(_) if p.descent_set() != qt.descent_set() => Some("descent sets differ".into()),
                    Ok(_) => None,
                };
                if let Some(why) = failure {
                    return Check::fail(name, why, p);
                }
                count += 1;
            }
            Check::pass(name, format!("{count} permutations"))
        })
        .collect()
}

fn rank_words(n_max: usize) -> Vec<Check> {
    (0..=n_max)
        .map(|n| {
            let name = format!("n={n}");
            let mut seen = HashSet::new();
            for p in Permutation::all(n) {
                let profile = rank_profile(&p);
                if decode_rank_profile(&profile.w, &profile.z).as_ref() != Some(&p) {
                    return Check::fail(name, "decoding does not recover the permutation".into(), p);
                }
                if !seen.insert((profile.w, profile.z)) {
                    return Check::fail(name, "two permutations share rank words".into(), p);
                }
            }
            Check::pass(name, format!("{} distinct encodings", seen.len()))
        })
        .collect()
}

fn compare(name: String, lhs: &BigUint, rhs: &BigUint, relation: &str, holds: bool) -> Check {
    let detail = format!("{lhs} {relation} {rhs}");
    if holds {
        Check::pass(name, detail)
    } else {
        Check::fail(name, detail, format!("{lhs} vs {rhs}"))
    }
}

fn product_formula(k: usize, n_max: usize) -> Result<Vec<Check>> {
    require_dfs_reach(n_max)?;
    let lhs = count_avoiders(&family_a(k)?, n_max);
    let mono = count_monotone_avoiders(k - 1, n_max.saturating_sub(1))?;
    Ok((1..=n_max)
        .map(|n| {
            let rhs = BigUint::from(n) * &mono.terms[n - 1];
            compare(format!("n={n}"), &lhs.terms[n], &rhs, "=", lhs.terms[n] == rhs)
        })
        .collect())
}

fn lower_bound(k: usize, n_max: usize) -> Result<Vec<Check>> {
    require_dfs_reach(n_max)?;
    let counts = count_avoiders(&family_a_ki(k, k)?, n_max);
    ((k - 2)..=n_max)
        .map(|n| {
            let lb = lower_bound_a_kk(k, n)?;
            Ok(compare(format!("n={n}"), &lb, &counts.terms[n], "<=", lb <= counts.terms[n]))
        })
        .collect()
}

fn tableaux(m: usize, n_max: usize) -> Result<Vec<Check>> {
    require_dfs_reach(n_max)?;
    let dfs = count_avoiders(&PatternSet::new(vec![Permutation::identity(m)])?, n_max);
    Ok((0..=n_max)
        .map(|n| {
            let sum: BigUint = Shape::partitions(n, m - 1)
                .iter()
                .map(|shape| {
                    let f = syt_count(shape);
                    &f * &f
                })
                .sum();
            compare(format!("n={n}"), &sum, &dfs.terms[n], "=", sum == dfs.terms[n])
        })
        .collect())
}

pub fn build_report(args: &VerifyArgs, threads: Option<usize>) -> Result<VerifyReport> {
    let (k, checks) = match args.suite {
        Suite::Rsk | Suite::RankWords => {
            if args.k.is_some() {
                bail!("suite {} does not take --k", suite_name(args.suite));
            }
            let checks = if args.suite == Suite::Rsk { rsk_suite(args.n) } else { rank_words(args.n) };
            (None, checks)
        }
        Suite::Injection => {
            let k = require_k(args, 3)?;
            (Some(k), injection(k, args.n)?)
        }
        Suite::ProductFormula => {
            let k = require_k(args, 3)?;
            (Some(k), product_formula(k, args.n)?)
        }
        Suite::LowerBound => {
            let k = require_k(args, 3)?;
            (Some(k), lower_bound(k, args.n)?)
        }
        Suite::Tableaux => {
            let k = require_k(args, 2)?;
            (Some(k), tableaux(k, args.n)?)
        }
    };
    Ok(VerifyReport {
        suite: args.suite,
        config: RunConfig {
            command: "verify",
            suite: Some(args.suite),
            k,
            n: Some(args.n),
            threads,
            ..Default::default()
        },
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// Runs the suite and writes its report; `Ok(false)` means a check failed.
pub fn run(args: &VerifyArgs, threads: Option<usize>) -> Result<bool> {
    let report = build_report(args, threads)?;
    for c in report.checks.iter().filter(|c| !c.passed) {
        log::error!("{} {}: {}", suite_name(report.suite), c.name, c.detail);
    }
    output::write_json(&report, args.out.as_deref())?;
    Ok(report.passed)
}
