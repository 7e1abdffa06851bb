use hurwitz_core::exactmath::rat;
use hurwitz_core::fock::{expsum_to_series, vacuum_expectation, EOpSpec, ExpKey, ExpSum};
use hurwitz_core::TruncatedSeries;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

const VARS: [&str; 4] = ["y", "z", "w", "v"];
const ORDER: i64 = 3;

fn orders() -> [i64; 4] {
    [ORDER; 4]
}

/// `ζ(a·w - b·z) = e^{(aw-bz)/2} - e^{-(aw-bz)/2}` in the variables `VARS`.
fn zeta_det(a: i64, b: i64) -> TruncatedSeries {
    let mut sum = ExpSum::new();
    sum.insert(ExpKey { half: vec![0, -b, a, 0], poles: 0 }, BigInt::from(1));
    *sum.entry(ExpKey { half: vec![0, b, -a, 0], poles: 0 }).or_insert_with(BigInt::zero) -= 1;
    sum.retain(|_, c| !c.is_zero());
    expsum_to_series(&[], &sum, &VARS, &orders()).unwrap()
}

/// Both sides of `[𝓔_a(z), 𝓔_b(w)] = ζ(aw - bz) 𝓔_{a+b}(z+w)` between
/// `⟨0|𝓔_c(y)` and `𝓔_d(v)|0⟩`.
fn commutator_sides(a: i64, b: i64, c: i64, d: i64) -> (TruncatedSeries, TruncatedSeries) {
    let ey = EOpSpec::new(c, 0);
    let ez = EOpSpec::new(a, 1);
    let ew = EOpSpec::new(b, 2);
    let ev = EOpSpec::new(d, 3);
    let ab = vacuum_expectation(&[ey.clone(), ez.clone(), ew.clone(), ev.clone()], &VARS, &orders()).unwrap();
    let ba = vacuum_expectation(&[ey.clone(), ew, ez, ev.clone()], &VARS, &orders()).unwrap();
    let lhs = ab.sub(&ba).unwrap();
    let merged = EOpSpec::with_arg(a + b, vec![(1, 1), (2, 1)]);
    let inner = vacuum_expectation(&[ey, merged, ev], &VARS, &orders()).unwrap();
    let rhs = inner.mul(&zeta_det(a, b)).unwrap();
    let common: Vec<i64> = lhs.order().iter().zip(rhs.order()).map(|(x, y)| *x.min(y)).collect();
    (lhs.truncate(&common), rhs.truncate(&common))
}

#[test]
fn commutation_probes() {
    let mut probes = 0;
    for a in -3i64..=3 {
        for b in -3i64..=3 {
            if a + b == 0 {
                continue;
            }
            for c in -3i64..=3 {
                let d = -(a + b + c);
                if d.abs() > 3 {
                    continue;
                }
                let (lhs, rhs) = commutator_sides(a, b, c, d);
                assert_eq!(lhs, rhs, "a={a} b={b} c={c} d={d}");
                probes += 1;
            }
        }
    }
    assert!(probes > 100);
}

/// `⟨𝓔_a(z)𝓔_{-a}(w)⟩ = ζ(a(z+w))/ζ(z+w) = Σ_k e^{k(z+w)/2}`, `k = 1-a, 3-a, …, a-1`.
#[test]
fn two_point_function_closed_form() {
    for a in 1..=6i64 {
        let vars = ["z", "w"];
        let ord = [4, 4];
        let got = vacuum_expectation(&[EOpSpec::new(a, 0), EOpSpec::new(-a, 1)], &vars, &ord).unwrap();
        let mut sum = ExpSum::new();
        for k in (1 - a..=a - 1).step_by(2) {
            sum.insert(ExpKey { half: vec![k, k], poles: 0 }, BigInt::from(1));
        }
        let expected = expsum_to_series(&[], &sum, &vars, &ord).unwrap();
        assert_eq!(got, expected, "a={a}");
    }
}

#[test]
fn two_point_connected_constant_term() {
    for v in 1..=6i64 {
        let vars = ["z1", "z2"];
        let ord = [2, 2];
        let full = vacuum_expectation(&[EOpSpec::new(v, 0), EOpSpec::new(-v, 1)], &vars, &ord).unwrap();
        // ⟨𝓔_v⟩ = 0 for v ≠ 0, so the connected part is the full correlator
        let one = vacuum_expectation(&[EOpSpec::new(v, 0)], &["z1"], &[2]).unwrap();
        assert!(one.is_zero());
        assert_eq!(full.coeff(&[0, 0]).unwrap(), rat(v), "v={v}");
    }
}

proptest! {
    #[test]
    fn energy_is_conserved(energies in prop::collection::vec(-3i64..=3, 1..=4)) {
        prop_assume!(energies.iter().sum::<i64>() != 0);
        let ops: Vec<EOpSpec> = energies.iter().enumerate().map(|(i, &e)| EOpSpec::new(e, i)).collect();
        let vars: Vec<String> = (0..ops.len()).map(|i| format!("z{i}")).collect();
        let ord = vec![2; ops.len()];
        let value = vacuum_expectation(&ops, &vars, &ord).unwrap();
        prop_assert!(value.is_zero());
    }

    #[test]
    fn random_commutators(a in -3i64..=3, b in -3i64..=3, c in -2i64..=2) {
        prop_assume!(a + b != 0);
        let d = -(a + b + c);
        let (lhs, rhs) = commutator_sides(a, b, c, d);
        prop_assert_eq!(lhs, rhs);
    }
}
