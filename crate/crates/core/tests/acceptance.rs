//! End-to-end acceptance run. Every criterion is an exact equality check; the
//! test prints one PASS/FAIL line per criterion and fails if any of them fails.

use std::time::Instant;

use hurwitz_core::exactmath::{
    binomial, elementary_series, factorial, rat, ratio, stirling, sym_poly, ElementaryFn, StirlingKind, SymKind,
};
use hurwitz_core::fock::{expsum_to_series, folded_correlator_series, vacuum_expectation, EOpSpec, ExpKey, ExpSum};
use hurwitz_core::hurwitz::{connected_series, disconnected_series_character, oracle_group_algebra};
use hurwitz_core::partitions::enumerate_partitions;
use hurwitz_core::polycheck::{admissible_residues, verify_quasipolynomiality};
use hurwitz_core::spectral::{
    check_bergman02, check_case_identities, check_derivative_structure, check_f01, check_xi, check_xi_derivative,
};
use hurwitz_core::{BigRational, HurwitzKind, TruncatedSeries};
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn route_agreement() -> Outcome {
    let mut cases = Vec::new();
    for kind in HurwitzKind::ALL {
        for r in 1..=3usize {
            for d in (r..=6).step_by(r) {
                for lambda in enumerate_partitions(d) {
                    cases.push((kind, r, lambda.parts().to_vec()));
                }
            }
        }
    }
    let checked: Vec<usize> = cases
        .par_iter()
        .map(|(kind, r, mu)| -> Result<usize, String> {
            let (kind, r) = (*kind, *r);
            let tag = format!("{kind} r={r} mu={mu:?}");
            let err = |e: hurwitz_core::Error| format!("{tag}: {e}");
            let d: usize = mu.iter().sum();
            let n = mu.len() as i64;
            let m = (d / r) as i64;
            let mut count = 0;
            let disconnected = disconnected_series_character(kind, r, mu, 6).map_err(err)?;
            for b in 0..=5usize {
                let oracle = oracle_group_algebra(kind, r, b, mu).map_err(err)?;
                let character = disconnected.coeff1(b as i64).map_err(err)?;
                if oracle != character {
                    return Err(format!("{tag} b={b}: oracle {oracle} vs character {character}"));
                }
                count += 1;
            }
            let connected =
                connected_series(mu, 6, |s, o| disconnected_series_character(kind, r, s, o)).map_err(err)?;
            let top = 5 - m;
            let fock = connected_series(mu, 6, |s, _| {
                let sub: Vec<i64> = s.iter().map(|&x| x as i64).collect();
                folded_correlator_series(kind, r as i64, &sub, top + n)
            })
            .map_err(err)?;
            for b in 0..=5i64 {
                let character = connected.coeff1(b).map_err(err)?;
                let k = b - m;
                let via_fock = if k < -n { BigRational::zero() } else { fock.coeff1(k).map_err(err)? };
                if via_fock != character {
                    return Err(format!("{tag} b={b}: fock {via_fock} vs character {character}"));
                }
                count += 1;
            }
            Ok(count)
        })
        .collect::<Result<_, _>>()?;
    Ok(format!("{} coefficient comparisons over {} profiles", checked.iter().sum::<usize>(), cases.len()))
}

fn quasi_polynomiality() -> Outcome {
    let mut configs = Vec::new();
    for kind in HurwitzKind::ALL {
        for (g, n) in [(0i64, 3usize), (0, 4), (1, 1), (1, 2), (2, 1)] {
            for r in 1..=2usize {
                for residues in admissible_residues(r, n) {
                    configs.push((kind, g, n, r, residues));
                }
            }
        }
    }
    let mut holdouts = 0;
    for (kind, g, n, r, residues) in &configs {
        let report = verify_quasipolynomiality(*kind, *r, *g, *n, residues, 1, 3)
            .map_err(|e| format!("{kind} r={r} (g,n)=({g},{n}) eta={residues:?}: {e}"))?;
        if !report.status.is_pass() {
            return Err(format!(
                "{kind} r={r} (g,n)=({g},{n}) eta={residues:?}: degree {:?} vs bound {}, notes {:?}",
                report.observed_degree, report.degree_bound, report.notes
            ));
        }
        holdouts += report.holdouts.len();
    }
    Ok(format!("{} residue classes, {holdouts} held-out predictions", configs.len()))
}

fn one_point_closed_forms() -> Outcome {
    let mut rows = 0;
    for kind in [HurwitzKind::Monotone, HurwitzKind::StrictlyMonotone] {
        for r in 1..=4usize {
            let report = check_f01(kind, r, 20).map_err(|e| e.to_string())?;
            if !report.status.is_pass() {
                return Err(format!("{kind} r={r}: first mismatch at exponent {:?}", report.first_mismatch));
            }
            rows += report.rows.len();
        }
    }
    Ok(format!("{rows} coefficients"))
}

fn two_point_identities() -> Outcome {
    let mut count = 0;
    for r in 1..=3usize {
        let report = check_bergman02(r, 12).map_err(|e| e.to_string())?;
        if !report.status.is_pass() {
            return Err(format!("Bergman r={r}: mismatch at {:?}", report.first_mismatch));
        }
        count += report.rows.len();
    }
    for r in 2..=3usize {
        for mu1 in 1..=12i64 {
            for mu2 in 1..=12i64 {
                if (mu1 + mu2) % r as i64 != 0 {
                    continue;
                }
                let report = check_case_identities(r, mu1, mu2).map_err(|e| e.to_string())?;
                if !report.status.is_pass() {
                    return Err(format!("case {} r={r} ({mu1},{mu2}): {} vs {}", report.case, report.lhs, report.rhs));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} checks"))
}

fn xi_closed_forms() -> Outcome {
    let mut count = 0;
    for kind in HurwitzKind::ALL {
        for r in 1..=4usize {
            for i in 0..r {
                let report = check_xi(kind, r, i, 25).map_err(|e| e.to_string())?;
                if !report.status.is_pass() {
                    return Err(format!("xi {kind} r={r} i={i}: mismatch at {:?}", report.first_mismatch));
                }
                count += 1;
                for p in 0..=3u32 {
                    let calculus = check_xi_derivative(kind, r, i, p, 25).map_err(|e| e.to_string())?;
                    if !calculus.status.is_pass() {
                        return Err(format!("d^{p} xi {kind} r={r} i={i}: mismatch at {:?}", calculus.first_mismatch));
                    }
                    let structure = check_derivative_structure(kind, r, i, p).map_err(|e| e.to_string())?;
                    if !structure.status.is_pass() {
                        return Err(format!("structure {kind} r={r} i={i} p={p}: {:?}", structure.rows));
                    }
                    count += 2;
                }
            }
        }
    }
    Ok(format!("{count} checks"))
}

fn commutator_probe(a: i64, b: i64, c: i64) -> bool {
    let d = -(a + b + c);
    let vars = ["y", "z", "w", "v"];
    let ord = [3; 4];
    let (ey, ez, ew, ev) = (EOpSpec::new(c, 0), EOpSpec::new(a, 1), EOpSpec::new(b, 2), EOpSpec::new(d, 3));
    let ab = vacuum_expectation(&[ey.clone(), ez.clone(), ew.clone(), ev.clone()], &vars, &ord).unwrap();
    let ba = vacuum_expectation(&[ey.clone(), ew, ez, ev.clone()], &vars, &ord).unwrap();
    let merged = EOpSpec::with_arg(a + b, vec![(1, 1), (2, 1)]);
    let inner = vacuum_expectation(&[ey, merged, ev], &vars, &ord).unwrap();
    let mut zeta = ExpSum::new();
    zeta.insert(ExpKey { half: vec![0, -b, a, 0], poles: 0 }, BigInt::from(1));
    *zeta.entry(ExpKey { half: vec![0, b, -a, 0], poles: 0 }).or_insert_with(BigInt::zero) -= 1;
    zeta.retain(|_, x| !x.is_zero());
    let rhs = inner.mul(&expsum_to_series(&[], &zeta, &vars, &ord).unwrap()).unwrap();
    let lhs = ab.sub(&ba).unwrap();
    let common: Vec<i64> = lhs.order().iter().zip(rhs.order()).map(|(x, y)| *x.min(y)).collect();
    lhs.truncate(&common) == rhs.truncate(&common)
}

fn exp_series(c: BigRational, order: i64) -> TruncatedSeries {
    let terms = (0..order)
        .map(|k| (k, num_traits::pow::pow(c.clone(), k as usize) / BigRational::from_integer(factorial(k as u64))));
    TruncatedSeries::univariate("y", order, terms).unwrap()
}

fn identity_suites() -> Outcome {
    let mut count = 0;
    for a in -3i64..=3 {
        for b in -3i64..=3 {
            for c in -3i64..=3 {
                if a + b == 0 || (a + b + c).abs() > 3 {
                    continue;
                }
                if !commutator_probe(a, b, c) {
                    return Err(format!("commutator a={a} b={b} c={c}"));
                }
                count += 1;
            }
        }
    }
    for v in 1..=6i64 {
        let two = vacuum_expectation(&[EOpSpec::new(v, 0), EOpSpec::new(-v, 1)], &["z1", "z2"], &[2, 2]).unwrap();
        let one = vacuum_expectation(&[EOpSpec::new(v, 0)], &["z1"], &[2]).unwrap();
        if !one.is_zero() || two.coeff(&[0, 0]).unwrap() != rat(v) {
            return Err(format!("two-point constant term for v={v}"));
        }
        count += 1;
    }
    let lists: Vec<Vec<BigRational>> = vec![
        vec![],
        vec![ratio(1, 2)],
        vec![rat(3), ratio(-2, 3)],
        vec![rat(1), rat(2), rat(3), ratio(5, 7)],
        vec![ratio(-1, 4), rat(0), rat(7), ratio(2, 5), rat(-3)],
    ];
    for xs in &lists {
        let n = xs.len() as i64;
        for k in 1..=8usize {
            let dual: BigRational = (0..=k)
                .map(|l| {
                    let sign = if l % 2 == 0 { rat(1) } else { rat(-1) };
                    sign * sym_poly(SymKind::Complete, k - l, xs) * sym_poly(SymKind::Elementary, l, xs)
                })
                .sum();
            if !dual.is_zero() {
                return Err(format!("duality k={k} X={xs:?}"));
            }
            count += 1;
        }
        for a in -3i64..=3 {
            let shifted: Vec<BigRational> = xs.iter().map(|x| x + rat(a)).collect();
            for k in 0..=6usize {
                let mut h = BigRational::zero();
                let mut s = BigRational::zero();
                for i in 0..=k {
                    let ai = num_traits::pow::pow(rat(a), i);
                    h += binomial(k as i64 + n - 1, i as i64) * sym_poly(SymKind::Complete, k - i, xs) * &ai;
                    s += binomial(n + i as i64 - k as i64, i as i64) * sym_poly(SymKind::Elementary, k - i, xs) * &ai;
                }
                if sym_poly(SymKind::Complete, k, &shifted) != h || sym_poly(SymKind::Elementary, k, &shifted) != s {
                    return Err(format!("offset a={a} k={k} X={xs:?}"));
                }
                count += 1;
            }
        }
    }
    for t in 0..=8usize {
        for v in 0..=8usize {
            let below: Vec<BigRational> = (1..t as i64).map(rat).collect();
            let upto: Vec<BigRational> = (1..=t as i64).map(rat).collect();
            let c = if v <= t { stirling(StirlingKind::First, t, t - v) } else { BigRational::zero() };
            if sym_poly(SymKind::Elementary, v, &below) != c
                || sym_poly(SymKind::Complete, v, &upto) != stirling(StirlingKind::Second, t + v, t)
            {
                return Err(format!("Stirling link t={t} v={v}"));
            }
            count += 1;
        }
    }
    for j in 1..=8i64 {
        let order = j + 1;
        let s = elementary_series(ElementaryFn::S, "y", order);
        for t in 1..=j {
            let first = s.pow(-j).unwrap().mul(&exp_series(ratio(j, 2), order)).unwrap().coeff1(j - t).unwrap()
                * BigRational::new(factorial((j - 1) as u64), factorial((t - 1) as u64));
            let second = s.pow(t).unwrap().mul(&exp_series(ratio(t, 2), order)).unwrap().coeff1(j - t).unwrap()
                * BigRational::new(factorial(j as u64), factorial(t as u64));
            if first != stirling(StirlingKind::First, j as usize, t as usize)
                || second != stirling(StirlingKind::Second, j as usize, t as usize)
            {
                return Err(format!("generating forms j={j} t={t}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} checks"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("route agreement", route_agreement),
        ("quasi-polynomiality", quasi_polynomiality),
        ("(0,1) closed forms", one_point_closed_forms),
        ("(0,2) Bergman identity and case identities", two_point_identities),
        ("xi closed forms and derivative structure", xi_closed_forms),
        ("identity suites", identity_suites),
    ];
    let mut failures = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(summary) => println!("PASS {}: {name} ({summary}; {secs:.1}s)", i + 1),
            Err(why) => {
                println!("FAIL {}: {name} ({why}; {secs:.1}s)", i + 1);
                failures.push(i + 1);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
