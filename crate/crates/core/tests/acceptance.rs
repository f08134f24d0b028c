//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sparse_sunit::arithmetic::{greatest_prime_factor, radical, s_part, FactorEffort, FactorStatus, PrimeSet};
use sparse_sunit::effective_bounds::{default_cofactor_cap, smooth_threshold, three_digit_certificate};
use sparse_sunit::lfl_bounds::{matveev_bound, yu_bound, LinearFormInstance, LinearTerm};
use sparse_sunit::sparse_digits::{enumerate_sparse, Stop};
use sparse_sunit::sunit_solver::{check_problem42, solve_three_digit, SolveOptions};
use sparse_sunit::Error;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.1?}, limit {limit:?}"))
}

fn enumerator_exactness() -> Outcome {
    let start = Instant::now();
    let limit = 1_000_000u64;
    for b in [2u64, 3, 10] {
        for k in 1..=3 {
            let got: Vec<u64> = enumerate_sparse(b, k, &Stop::Ceiling(BigUint::from(limit)))
                .map_err(|e| e.to_string())?
                .iter()
                .map(|x| x.value.to_u64().unwrap())
                .collect();
            let want = common::brute_sparse(b, k, limit);
            ensure(got == want, || format!("b={b} k={k}: {} values vs {} expected", got.len(), want.len()))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("9 (b, k) pairs up to 10^6 in {:.1?}", start.elapsed()))
}

fn spart_identities() -> Outcome {
    const FIRST: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    for _ in 0..10_000 {
        let mut chosen: Vec<u64> = FIRST.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
        if chosen.is_empty() {
            chosen.push(FIRST[rng.gen_range(0..10)]);
        }
        let set = PrimeSet::new(chosen.clone()).unwrap();
        let n = rng.gen_range(1..=1_000_000_000_000u64);
        let m = rng.gen_range(1..=1_000_000_000_000u64);
        let (bn, bm) = (BigUint::from(n), BigUint::from(m));
        let fnn = s_part(&bn, &set).unwrap();
        let fm = s_part(&bm, &set).unwrap();
        let fmn = s_part(&(&bn * &bm), &set).unwrap();
        ensure(fnn.s_part() * &fnn.cofactor == bn, || format!("[n]_S M != n for n={n}"))?;
        for &q in &chosen {
            ensure(fnn.cofactor.gcd(&BigUint::from(q)).is_one(), || format!("q={q} divides M for n={n}"))?;
        }
        ensure(fmn.s_part() == fnn.s_part() * fm.s_part(), || format!("not multiplicative at {m}*{n}"))?;
    }
    Ok("10^4 samples, zero failures".into())
}

fn solver_reproduction() -> Outcome {
    let set = PrimeSet::new(vec![3, 5]).unwrap();
    let one = solve_three_digit(2, &set, 20, &SolveOptions::default()).map_err(|e| e.to_string())?;
    let eight = solve_three_digit(2, &set, 20, &SolveOptions { workers: 8, ..SolveOptions::default() })
        .map_err(|e| e.to_string())?;
    let got: Vec<common::Relation> = one
        .iter()
        .map(|r| (r.value.to_u128().unwrap(), r.m, r.n, r.d3, r.d2, r.d1))
        .collect();
    let want = common::solver_oracle(2, &[3, 5], 20, false);
    ensure(got == want, || format!("{got:?} != {want:?}"))?;
    ensure(want.iter().any(|r| (r.0, r.1, r.2) == (25, 4, Some(3))), || "25 at (4,3) missing".into())?;
    ensure(want.iter().any(|r| (r.0, r.1, r.2) == (81, 6, Some(4))), || "81 at (6,4) missing".into())?;
    let a = serde_json::to_vec(&one).unwrap();
    let b = serde_json::to_vec(&eight).unwrap();
    ensure(a == b, || "1-worker and 8-worker output differ".into())?;
    Ok(format!("{} relations match the unpruned oracle; 1 and 8 workers identical", got.len()))
}

fn problem42_evidence() -> Outcome {
    let start = Instant::now();
    let v = check_problem42(30).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let got: Vec<(u32, u32)> = v.iter().map(|x| (x.m, x.n)).collect();
    ensure(got == common::check42_oracle(30), || format!("{got:?} differs from the exact oracle"))?;
    let low: Vec<(u32, u32)> = got.iter().copied().filter(|&(m, _)| m <= 10).collect();
    ensure(low == [(4, 3), (6, 4)], || format!("m <= 10 slice is {low:?}"))?;
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("{} violations up to m = 30, slice {{(4,3), (6,4)}}, {elapsed:.1?}", got.len()))
}

fn random_terms(rng: &mut StdRng, coprime_to: Option<u64>) -> Vec<(i64, i64, i64)> {
    let n = rng.gen_range(2..=3);
    let ok = |v: i64| coprime_to.is_none_or(|p| v % p as i64 != 0);
    (0..n)
        .map(|_| loop {
            let x = if coprime_to.is_some() { rng.gen_range(-30..=30) } else { rng.gen_range(1..=30) };
            let y = rng.gen_range(1..=30);
            let b = loop {
                let b = rng.gen_range(-8..=8);
                if b != 0 {
                    break b;
                }
            };
            if x != 0 && ok(x) && ok(y) {
                break (x, y, b);
            }
        })
        .collect()
}

fn instance(items: &[(i64, i64, i64)]) -> LinearFormInstance {
    LinearFormInstance::new(items.iter().map(|&(x, y, b)| LinearTerm::new(x, y, b)).collect())
}

fn lfl_soundness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let mut arch = 0;
    let mut worst_arch = f64::INFINITY;
    while arch < 10_000 {
        let items = random_terms(&mut rng, None);
        let lam = common::lambda(&items);
        if lam.numer().bits() == 0 {
            continue;
        }
        let truth = common::ln_bigint(lam.numer()) - common::ln_bigint(lam.denom());
        let bound = matveev_bound(&instance(&items), 128).map_err(|e| e.to_string())?.value_f64();
        ensure(truth > bound, || format!("Matveev violated at {items:?}: {truth} <= {bound}"))?;
        worst_arch = worst_arch.min(truth - bound);
        arch += 1;
    }
    let mut padic = 0;
    let primes = [2u64, 3, 5, 7, 11];
    while padic < 10_000 {
        let p = primes[rng.gen_range(0..primes.len())];
        let items = random_terms(&mut rng, Some(p));
        let lam = common::lambda(&items);
        if lam.numer().bits() == 0 {
            continue;
        }
        let v = common::valuation(lam.numer(), p) - common::valuation(lam.denom(), p);
        let big_b = items.iter().map(|t| t.2.unsigned_abs()).max().unwrap().max(3);
        let b = BigRational::from_integer(BigInt::from(big_b));
        let half = BigRational::new(1.into(), 2.into());
        let bound = yu_bound(p, &instance(&items), &b, &b, &half, 128).map_err(|e| e.to_string())?;
        ensure((v as f64) < bound.value_f64(), || format!("Yu violated at p={p} {items:?}: v={v}"))?;
        padic += 1;
    }
    Ok(format!(
        "{arch} Archimedean (least margin {worst_arch:.3e}) and {padic} p-adic instances, zero violations"
    ))
}

fn certificate_consistency() -> Outcome {
    let pool = [2u64, 3, 5, 7];
    let subsets: Vec<Vec<u64>> = (1u32..16)
        .map(|mask| pool.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &q)| q).collect())
        .collect();
    let mut checked = 0;
    for b in [2u64, 3, 10] {
        let cap = default_cofactor_cap(b);
        let mut m0 = std::collections::HashMap::new();
        for s in &subsets {
            let set = PrimeSet::new(s.clone()).unwrap();
            let lo = three_digit_certificate(b, &set, &cap, 128).map_err(|e| format!("b={b} S={s:?}: {e}"))?;
            let hi = three_digit_certificate(b, &set, &cap, 256).map_err(|e| format!("b={b} S={s:?}: {e}"))?;
            ensure(lo.m0 == hi.m0, || format!("b={b} S={s:?}: m0 {} at 128 bits, {} at 256", lo.m0, hi.m0))?;
            let sols = solve_three_digit(b, &set, 40, &SolveOptions { workers: 4, ..SolveOptions::default() })
                .map_err(|e| e.to_string())?;
            if let Some(r) = sols.iter().find(|r| BigUint::from(r.m) > lo.m0) {
                return Err(format!("b={b} S={s:?}: solution at m={} beyond m0={}", r.m, lo.m0));
            }
            m0.insert(s.clone(), lo.m0);
            checked += 1;
        }
        for s in &subsets {
            for &q in pool.iter().filter(|q| !s.contains(q)) {
                let mut t = s.clone();
                t.push(q);
                t.sort();
                ensure(m0[s] <= m0[&t], || format!("b={b}: m0({s:?}) = {} > m0({t:?}) = {}", m0[s], m0[&t]))?;
            }
        }
    }
    Ok(format!("{checked} (b, S) cases"))
}

fn threshold_reproduction() -> Outcome {
    let eps = BigRational::new(1.into(), 10.into());
    let t = smooth_threshold(&BigUint::from(10u32).pow(100), &eps, 128).map_err(|e| e.to_string())?;
    ensure((t.value - 15.73).abs() <= 0.01, || format!("value {}", t.value))?;
    let edge = smooth_threshold(&BigUint::from(3_814_279u32), &eps, 128);
    ensure(matches!(edge, Err(Error::Domain(_))), || format!("n = 3814279 gave {edge:?}"))?;
    smooth_threshold(&BigUint::from(10_000_000u32), &eps, 128).map_err(|e| format!("n = 10^7: {e}"))?;
    Ok(format!("threshold(10^100, 0.1) = {:.4}", t.value))
}

fn factorization_exactness() -> Outcome {
    let effort = FactorEffort::default();
    for n in 2..=1_000_000u64 {
        let f = common::trial_factor(n);
        let big = BigUint::from(n);
        let lp = greatest_prime_factor(&big, &effort).map_err(|e| e.to_string())?;
        let want_p = f.last().unwrap().0;
        ensure(lp.status == FactorStatus::Complete && lp.prime == Some(BigUint::from(want_p)), || {
            format!("P[{n}] = {:?}, expected {want_p}", lp.prime)
        })?;
        let r = radical(&big, &effort).map_err(|e| e.to_string())?;
        let want_r: u64 = f.iter().map(|&(p, _)| p).product();
        ensure(r.value == BigUint::from(want_r), || format!("Q[{n}] = {}, expected {want_r}", r.value))?;
    }
    let n = BigUint::from(1_049_601u64);
    let lp = greatest_prime_factor(&n, &effort).map_err(|e| e.to_string())?;
    ensure(lp.prime == Some(BigUint::from(331u32)), || format!("P[1049601] = {:?}", lp.prime))?;
    let r = radical(&n, &effort).map_err(|e| e.to_string())?;
    ensure(r.value == n, || format!("Q[1049601] = {}", r.value))?;
    Ok("all n <= 10^6; P[1049601] = 331, Q[1049601] = 1049601".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("enumerator exactness", enumerator_exactness),
        ("S-part identities", spart_identities),
        ("solver reproduction", solver_reproduction),
        ("2^m + 2^n + 1 evidence", problem42_evidence),
        ("linear form bound soundness", lfl_soundness),
        ("certificate consistency", certificate_consistency),
        ("threshold reproduction", threshold_reproduction),
        ("factorization exactness", factorization_exactness),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail} [{:.1?}]", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why} [{:.1?}]", start.elapsed());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
