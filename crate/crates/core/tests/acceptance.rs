//! Acceptance criteria. Runs as a plain binary so that every criterion
//! reports one PASS/FAIL line; the process fails if any criterion fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use avoidance_core::enumerate::{count_avoiders, count_monotone_avoiders, lower_bound_a_kk};
use avoidance_core::injection::verify_injection;
use avoidance_core::perm::{decode_rank_profile, family_a, family_a_ki, rank_profile};
use avoidance_core::series::{
    differential_approximation, guess_dfinite, guess_rational, ode_to_recurrence, root_isolation,
    verify_ode, Confidence, PolynomialODE,
};
use avoidance_core::tableaux::{inverse_rsk, rsk, syt_count};
use avoidance_core::{IntegerSeries, PatternSet, Permutation, RationalPolynomial, Shape};
use num_bigint::BigUint;
use num_rational::BigRational;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn two_pow_closed_form() -> Outcome {
    let set: PatternSet = "123,132".parse().map_err(|e| format!("{e}"))?;
    let s = count_avoiders(&set, 14);
    for n in 1..=14 {
        let want = BigUint::from(1u32) << (n - 1);
        ensure(s.terms[n] == want, || format!("n={n}: {} != {want}", s.terms[n]))?;
    }
    Ok(format!("av_14 = {}", s.terms[14]))
}

fn a_k_product_formula() -> Outcome {
    for k in 3..=5 {
        let lhs = count_avoiders(&family_a(k).map_err(|e| e.to_string())?, 8);
        let rhs = count_monotone_avoiders(k - 1, 7).map_err(|e| e.to_string())?;
        for n in 1..=8 {
            let want = BigUint::from(n) * &rhs.terms[n - 1];
            ensure(lhs.terms[n] == want, || format!("k={k} n={n}: {} != {want}", lhs.terms[n]))?;
        }
    }
    Ok("k = 3..5, n = 1..8".into())
}

fn tableaux_consistency() -> Outcome {
    for m in 3..=4 {
        let monotone = Permutation::identity(m);
        let set = PatternSet::new(vec![monotone]).map_err(|e| e.to_string())?;
        let dfs = count_avoiders(&set, 9);
        for n in 0..=9 {
            let sum: BigUint = Shape::partitions(n, m - 1)
                .iter()
                .map(|l| {
                    let f = syt_count(l);
                    &f * &f
                })
                .sum();
            ensure(sum == dfs.terms[n], || format!("m={m} n={n}: {sum} != {}", dfs.terms[n]))?;
        }
    }
    Ok("m = 3, 4, n = 0..9".into())
}

fn rsk_suite() -> Outcome {
    let mut checked = 0usize;
    for n in 0..=7 {
        for p in Permutation::all(n) {
            let (pt, qt) = rsk(&p);
            let back = inverse_rsk(&pt, &qt).map_err(|e| format!("{p}: {e}"))?;
            ensure(back == p, || format!("round trip {p} -> {back}"))?;
            ensure((pt == qt) == p.is_involution(), || format!("involution property fails at {p}"))?;
            ensure(p.descent_set() == qt.descent_set(), || format!("descent sets differ at {p}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} permutations"))
}

fn rank_word_encoding() -> Outcome {
    let mut checked = 0usize;
    for n in 0..=7 {
        let mut seen = HashSet::new();
        for p in Permutation::all(n) {
            let profile = rank_profile(&p);
            let decoded = decode_rank_profile(&profile.w, &profile.z);
            ensure(decoded.as_ref() == Some(&p), || format!("decode fails at {p}"))?;
            ensure(seen.insert((profile.w, profile.z)), || format!("collision at {p}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} permutations"))
}

fn injection_theorem() -> Outcome {
    let mut last = String::new();
    for k in 3..=5 {
        for n in 1..=8 {
            let r = verify_injection(k, n).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("k={k} n={n}: {:?}", r.witnesses))?;
            last = format!("k={k} n={n}: {} <= {}", r.domain_size, r.codomain_size);
        }
    }
    Ok(last)
}

fn lower_bound() -> Outcome {
    for k in 3..=5 {
        let counts = count_avoiders(&family_a_ki(k, k).map_err(|e| e.to_string())?, 9);
        for n in (k - 2)..=9 {
            let lb = lower_bound_a_kk(k, n).map_err(|e| e.to_string())?;
            ensure(lb <= counts.terms[n], || format!("k={k} n={n}: {lb} > {}", counts.terms[n]))?;
        }
    }
    Ok("k = 3..5, n = k-2..9".into())
}

fn a55_ode() -> Outcome {
    let brute = count_avoiders(&family_a_ki(5, 5).map_err(|e| e.to_string())?, 11);
    let ode = PolynomialODE::a55();
    let check = verify_ode(&ode, &brute).map_err(|e| e.to_string())?;
    ensure(check.holds, || format!("residual {:?}", check.first_nonzero))?;
    let rec = ode_to_recurrence(&ode).map_err(|e| e.to_string())?;
    let extended = rec.extend_integers(&brute.terms[..10], 12).map_err(|e| e.to_string())?;
    for n in [10, 11] {
        ensure(extended[n] == brute.terms[n], || {
            format!("n={n}: recurrence {} != brute force {}", extended[n], brute.terms[n])
        })?;
    }
    Ok(format!(
        "{} coefficients zero; a_10 = {}, a_11 = {}",
        check.checked, brute.terms[10], brute.terms[11]
    ))
}

fn calibration() -> Outcome {
    let catalan = count_monotone_avoiders(3, 60).map_err(|e| e.to_string())?;
    let out = differential_approximation(&catalan).map_err(|e| e.to_string())?;
    let e = out.estimate().ok_or("no estimate on the Catalan series")?;
    let alpha = e.critical_exponent.ok_or("no exponent on the Catalan series")?;
    ensure((e.growth_rate - 4.0).abs() <= 0.04, || format!("Catalan growth {}", e.growth_rate))?;
    ensure((alpha - 0.5).abs() <= 0.05, || format!("Catalan exponent {alpha}"))?;

    let mut terms = vec![1u64];
    terms.extend((1..40).map(|n| 1u64 << (n - 1)));
    let pow2 = IntegerSeries::from_u64("2^(n-1)", &terms);
    let out = differential_approximation(&pow2).map_err(|e| e.to_string())?;
    let g = out.estimate().ok_or("no estimate on 2^(n-1)")?.growth_rate;
    ensure((g - 2.0).abs() <= 0.002, || format!("2^(n-1) growth {g}"))?;
    Ok(format!("Catalan growth {:.6}, alpha {alpha:.6}; 2^(n-1) growth {g:.6}", e.growth_rate))
}

fn a51_series() -> Result<IntegerSeries, String> {
    Ok(count_avoiders(&family_a_ki(5, 1).map_err(|e| e.to_string())?, 12))
}

fn desk_scale_a51() -> Outcome {
    let s = a51_series()?;
    let out = differential_approximation(&s).map_err(|e| e.to_string())?;
    let e = out.estimate().ok_or("no estimate")?;
    ensure((8.0..=10.0).contains(&e.growth_rate), || format!("growth {}", e.growth_rate))?;
    ensure(e.confidence == Confidence::Low, || "confidence not flagged low".into())?;
    Ok(format!("growth {:.4} (dispersion {:.4}), confidence low", e.growth_rate, e.dispersion))
}

fn non_fits() -> Outcome {
    let catalan = count_monotone_avoiders(3, 19).map_err(|e| e.to_string())?;
    let r = guess_rational(&catalan).map_err(|e| e.to_string())?;
    ensure(r.is_none(), || format!("rational fit {}", r.as_ref().unwrap()))?;
    let s = a51_series()?;
    let d = guess_dfinite(&s, 3, 3);
    ensure(d.is_none(), || format!("unexpected ODE\n{}", d.as_ref().unwrap()))?;
    Ok("no rational fit for Catalan; no ODE of order <= 3, degree <= 3 for A(5,1)".into())
}

fn root_identification() -> Outcome {
    let lin = |a: i64, b: i64| RationalPolynomial::from_i64(&[a, b]);
    let x = RationalPolynomial::x();
    let factors = [x.clone(), x.clone(), x, lin(-1, 1), lin(-2, 5), lin(-1, 10), lin(-1, 2), lin(-1, 2)];
    let lead = factors.iter().fold(RationalPolynomial::one(), |acc, f| &acc * f);
    ensure(lead.monic() == PolynomialODE::a55().leading().monic(), || {
        "shipped ODE has a different leading polynomial".into()
    })?;
    let roots = root_isolation(&lead, 12).map_err(|e| e.to_string())?;
    let want = [0.0, 0.1, 0.4, 0.5, 1.0];
    ensure(roots.len() == want.len(), || format!("{} distinct roots", roots.len()))?;
    for (r, w) in roots.iter().zip(want) {
        ensure(r.is_real && r.im == 0.0, || format!("root {r:?} not real"))?;
        ensure((r.re - w).abs() <= 1e-12 * w.max(1.0), || format!("root {} != {w}", r.re))?;
    }
    let smallest = roots.iter().find(|r| r.re > 0.0).ok_or("no positive root")?;
    ensure(smallest.re == 0.1, || format!("smallest positive root {}", smallest.re))?;
    // Exact confirmation that the rounded values are the roots.
    for w in [(1, 10), (2, 5), (1, 2), (1, 1)] {
        let q = BigRational::new(w.0.into(), w.1.into());
        ensure(lead.eval(&q) == BigRational::from_integer(0.into()), || format!("{q} is not a root"))?;
    }
    Ok("roots {0, 1/10, 2/5, 1/2, 1}; growth 10".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("C1  av_n(123,132) = 2^(n-1), n <= 14", two_pow_closed_form),
        ("C2  av_n(A(k)) = n av_(n-1)(12..k-1), k = 3..5, n <= 8", a_k_product_formula),
        ("C3  sum of squared tableau counts = av_n(12..m), m = 3,4, n <= 9", tableaux_consistency),
        ("C4  RSK round trip, involutions, descents, n <= 7", rsk_suite),
        ("C5  rank words decode and are injective, n <= 7", rank_word_encoding),
        ("C6  injection A(k,k-1) -> A(k,k), k = 3..5, n <= 8", injection_theorem),
        ("C7  lower bound <= av_n(A(k,k)), k = 3..5, n <= 9", lower_bound),
        ("C8  shipped A(5,5) ODE against brute force, n <= 11", a55_ode),
        ("C9  differential approximation on Catalan and 2^(n-1)", calibration),
        ("C10 A(5,1) growth from n <= 12 in [8, 10], low confidence", desk_scale_a51),
        ("C11 clean non-fits on Catalan and A(5,1)", non_fits),
        ("C12 roots of the A(5,5) leading polynomial", root_identification),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} [{secs:.2}s] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} [{secs:.2}s] {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
