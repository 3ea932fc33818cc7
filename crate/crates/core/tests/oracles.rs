//! Independent oracles for the library's numerical claims. Each oracle uses
//! plain big-integer arithmetic and never calls the code path it checks.

use gfib_core::*;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn ord(d: i64) -> Order {
    Order::new(d).unwrap()
}

/// Exact bisection on `q + ... + q^d - 1` with `q = num / 2^k`, evaluated by
/// scaling everything by `2^(k d)`.
fn bisection_oracle(d: u32, bits: u32) -> (BigInt, BigInt, u32) {
    let sign = |num: &BigInt| -> BigInt {
        // sum_{i=1}^d num^i 2^(k(d-i)) - 2^(kd)
        let k = bits;
        let mut total = -(BigInt::one() << (k * d));
        for i in 1..=d {
            total += num.pow(i) << (k * (d - i));
        }
        total
    };
    let mut lo = BigInt::one() << (bits - 1);
    let mut hi = BigInt::one() << bits;
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if sign(&mid).is_positive() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi, bits)
}

fn dyadic(num: &BigInt, bits: u32) -> Dyadic {
    Dyadic::new(num.clone(), -i64::from(bits))
}

#[test]
fn tribonacci_root_matches_rational_bisection() {
    let (lo, hi, bits) = bisection_oracle(3, 80);
    let oracle = CertifiedReal::new(dyadic(&lo, bits), dyadic(&hi, bits), 80);
    let enc = solve_q(ord(3), 64, &Config::default()).unwrap();
    assert!(enc.q().intersects(&oracle));
    // frozen from the oracle: 0.543689012692...
    assert!((oracle.to_f64() - 0.543_689_012_692).abs() < 1e-12);
}

#[test]
fn golden_root_satisfies_quadratic() {
    // q = (sqrt 5 - 1)/2 exactly when (2q + 1)^2 = 5.
    let enc = solve_q(ord(2), 64, &Config::default()).unwrap();
    let check = |q: &Dyadic| {
        let t = &q.shl(1) + &Dyadic::one();
        (&t * &t).cmp(&Dyadic::from_int(5))
    };
    assert_eq!(check(enc.q_lo()), std::cmp::Ordering::Less);
    assert_eq!(check(enc.q_hi()), std::cmp::Ordering::Greater);
}

#[test]
fn root_excludes_bracket_ends() {
    for bits in [8, 16, 64, 128] {
        let enc = solve_q(ord(2), bits, &Config::default()).unwrap();
        assert!(enc.q_lo() > &Dyadic::half() && enc.q_hi() < &Dyadic::one());
    }
}

#[test]
fn mean_lifetime_values() {
    let g = solve_q(ord(2), 64, &Config::default()).unwrap();
    // q + 2q^2 = 2 - q when q^2 = 1 - q
    let two_minus_q = CertifiedReal::from_int(2, 96).sub(&g.q());
    assert!(mean_lifetime(&g).intersects(&two_minus_q));
    assert!((mean_lifetime(&g).to_f64() - 1.381_966_011_250_105).abs() < 1e-14);

    let (lo, hi, bits) = bisection_oracle(3, 80);
    let q = CertifiedReal::new(dyadic(&lo, bits), dyadic(&hi, bits), 100);
    let oracle_mean = q
        .mul_int(1)
        .add(&q.powu(2).mul_int(2))
        .add(&q.powu(3).mul_int(3));
    let t = solve_q(ord(3), 64, &Config::default()).unwrap();
    assert!(mean_lifetime(&t).intersects(&oracle_mean));
    assert!((oracle_mean.to_f64() - 1.617_02).abs() < 1e-5);
}

#[test]
fn mean_lifetime_width_tracks_input_width() {
    for d in 2..=8 {
        for bits in [32, 64, 128, 256] {
            let enc = solve_q(ord(d), bits, &Config::default()).unwrap();
            let ratio = mean_lifetime(&enc).width().to_f64() / enc.q().width().to_f64();
            // derivative sum i^2 q^(i-1) < d^3, plus rounding slack
            assert!(
                ratio < (d * d * d) as f64 + 1.0,
                "d={d} bits={bits} ratio={ratio}"
            );
        }
    }
}

#[test]
fn blackwell_constant_values() {
    let cfg = Config::default();
    let t = solve_q(ord(3), 64, &cfg).unwrap();
    let c3 = blackwell_constant(&t, ConstantMethod::ReciprocalMean).unwrap();
    assert!((c3.to_f64() - 0.618_420).abs() < 1e-6);
    let g = solve_q(ord(2), 64, &cfg).unwrap();
    let c2 = blackwell_constant(&g, ConstantMethod::ClosedForm).unwrap();
    // 1/(2 - q) = (5 + sqrt 5)/10
    assert!((c2.to_f64() - (5.0 + 5f64.sqrt()) / 10.0).abs() < 1e-15);
    for d in 2..=10 {
        let enc = solve_q(ord(d), 128, &cfg).unwrap();
        let a = blackwell_constant(&enc, ConstantMethod::ReciprocalMean).unwrap();
        let b = blackwell_constant(&enc, ConstantMethod::ClosedForm).unwrap();
        assert!(a.intersects(&b), "d={d}");
        assert!(a.lo() > &Dyadic::zero() && a.hi() < &Dyadic::one());
    }
}

#[test]
fn closed_form_constant_needs_precision() {
    // At 8 bits the closed-form denominator is still resolved away from zero
    // for small d; the reciprocal route never fails.
    let enc = solve_q(ord(2), 8, &Config::default()).unwrap();
    assert!(blackwell_constant(&enc, ConstantMethod::ClosedForm).is_ok());
}

#[test]
fn characteristic_residual_shrinks() {
    let cfg = Config::default();
    let g = solve_q(ord(2), 64, &cfg).unwrap();
    assert!(characteristic_residual(&g).unwrap().contains_zero());
    let t = characteristic_residual(&solve_q(ord(3), 64, &cfg).unwrap()).unwrap();
    assert!(t.contains_zero());
    assert!(t.width() < Dyadic::pow2(-40));
    let widths: Vec<Dyadic> = [32, 64, 96, 128]
        .iter()
        .map(|&b| {
            characteristic_residual(&solve_q(ord(3), b, &cfg).unwrap())
                .unwrap()
                .width()
        })
        .collect();
    assert!(widths.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn derived_constants_support_half_unit_argument() {
    for d in 2..=16 {
        let enc = solve_q(ord(d), 128, &Config::default()).unwrap();
        let consts = derived_constants(&enc).unwrap();
        let two_q_lo = enc.q_lo().shl(1);
        assert!(consts.mean_lifetime.lo() > &two_q_lo, "d={d}");
        assert!(consts.c_d.lo() > &Dyadic::zero() && consts.c_d.hi() < &Dyadic::one());
    }
}

#[test]
fn roots_decrease_with_order() {
    let cfg = Config::default();
    for d in 2..=15 {
        let a = solve_q(ord(d), 128, &cfg).unwrap();
        let b = solve_q(ord(d + 1), 128, &cfg).unwrap();
        assert!(b.q_hi() < a.q_lo(), "d={d}");
    }
}

/// Odometer over `{1..d}^m` for every length `m`, keeping tuples that sum to `n`.
fn brute_force_compositions(d: u32, n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for m in 0..=n {
        let mut t = vec![1u32; m as usize];
        loop {
            if t.iter().sum::<u32>() == n {
                out.push(t.clone());
            }
            let mut i = 0;
            while i < t.len() && t[i] == d {
                t[i] = 1;
                i += 1;
            }
            if i == t.len() {
                break;
            }
            t[i] += 1;
        }
    }
    out.sort();
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for d in 2..=4u32 {
        for n in 0..=9u32 {
            let set = enumerate_compositions(ord(i64::from(d)), i64::from(n), &Config::default())
                .unwrap();
            assert_eq!(
                set.compositions,
                brute_force_compositions(d, n),
                "d={d} n={n}"
            );
        }
    }
}

#[test]
fn composition_counts_small_table() {
    for d in 2..=5 {
        for n in 0..=20 {
            let listed = enumerate_compositions(ord(d), n, &Config::default())
                .unwrap()
                .len();
            assert_eq!(BigUint::from(listed), fib_at(ord(d), n + 1));
            assert_eq!(count_compositions(ord(d), n), fib_at(ord(d), n + 1));
        }
    }
}

#[test]
fn composition_mass_matches_renewal_mass() {
    let enc = solve_q(ord(3), 128, &Config::default()).unwrap();
    let dist = build_distribution(&enc);
    let mass = renewal_mass_dp(&dist, 14).unwrap();
    for n in 0..=14 {
        let set = enumerate_compositions(ord(3), n, &Config::default()).unwrap();
        // sum over compositions of prod P(X = part)
        let total = set
            .compositions
            .iter()
            .fold(CertifiedReal::zero(160), |acc, c| {
                let p = c.iter().fold(CertifiedReal::one(160), |pr, &part| {
                    pr.mul(&dist.pmf[part as usize - 1])
                });
                acc.add(&p)
            });
        assert!(total.intersects(&mass.values[n as usize]), "n={n}");
    }
}

#[test]
fn log_probability_is_shape_independent() {
    let enc = solve_q(ord(4), 96, &Config::default()).unwrap();
    for n in 1..=10 {
        let set = enumerate_compositions(ord(4), n, &Config::default()).unwrap();
        let first = composition_log_probability(ord(4), &set.compositions[0], &enc).unwrap();
        for c in &set.compositions {
            assert_eq!(composition_log_probability(ord(4), c, &enc).unwrap(), first);
        }
        let expected = enc.q().ln().unwrap().mul_int(n);
        assert!(first.intersects(&expected));
    }
}

#[test]
fn renewal_mass_identity() {
    for d in 2..=6 {
        let dist = build_distribution(&solve_q(ord(d), 128, &Config::default()).unwrap());
        let mass = renewal_mass_dp(&dist, 200).unwrap();
        for k in 0..=200u64 {
            assert!(mass.values[k as usize].intersects(&renewal::renewal_mass_exact(&dist, k)));
            let u = &mass.values[k as usize];
            assert!(u.lo() > &Dyadic::zero() && u.hi() <= &Dyadic::one());
        }
        // widths grow at most linearly
        let w200 = mass.values[200].width().to_f64();
        let w10 = mass.values[10].width().to_f64().max(f64::MIN_POSITIVE);
        assert!(w200 / w10 < 200.0, "d={d}");
    }
}

#[test]
fn renewal_mass_never_exceeds_one_beyond_start() {
    for d in 2..=6 {
        let dist = build_distribution(&solve_q(ord(d), 128, &Config::default()).unwrap());
        let mass = renewal_mass_dp(&dist, 50).unwrap();
        for u in &mass.values[1..] {
            assert!(u.hi() < &Dyadic::one());
        }
    }
}

#[test]
fn blackwell_values() {
    let t = build_distribution(&solve_q(ord(3), 128, &Config::default()).unwrap());
    let mass = renewal_mass_dp(&t, 10).unwrap();
    let c = blackwell_constant(&t.enclosure, ConstantMethod::ReciprocalMean).unwrap();
    // |u_0 - c_3| = 0.38158... <= 1 - q = 0.45631...
    let gap = mass.values[0].sub(&c).abs();
    assert!((gap.to_f64() - 0.381_580).abs() < 1e-6);
    assert_eq!(blackwell_rate_check(&t, &mass, &c, 1), Ok(Verdict::Holds));
    // |u_10 - c_3| = 3.89e-5 <= (1 - q)^11 = 1.78e-4
    let gap = mass.values[10].sub(&c).abs();
    assert!((gap.to_f64() - 3.8935e-5).abs() < 1e-8);
    assert_eq!(blackwell_rate_check(&t, &mass, &c, 11), Ok(Verdict::Holds));
}

#[test]
fn nbu_grid() {
    for d in 2..=8u64 {
        let dist = build_distribution(&solve_q(ord(d as i64), 128, &Config::default()).unwrap());
        for i in 0..d {
            for j in 0..=d {
                assert_eq!(nbu_check(&dist, i, j), Ok(true), "d={d} i={i} j={j}");
            }
        }
    }
}

#[test]
fn error_values() {
    let cfg = Config::default();
    let e = error_term(ord(3), 10, 64, &cfg).unwrap();
    // 149 - 148.98016922... = 0.01983078
    assert!((e.x_n.to_f64() - 0.019_830_78).abs() < 1e-8);
    let e1 = error_term(ord(3), 1, 64, &cfg).unwrap();
    assert!((e1.bound.to_f64() - 0.456_310_987_307_923_6).abs() < 1e-15);
    assert!(e1.bound.hi() < &Dyadic::half());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_equals_exact(d in 2i64..=8, n in -20i64..=1500) {
        let v = fib_closed(ord(d), n, &Config::default()).unwrap();
        prop_assert!(v.certified);
        prop_assert_eq!(v.rounded, fib_at(ord(d), n));
    }

    #[test]
    fn error_within_half_and_bound(d in 2i64..=12, n in -10i64..=300) {
        let rec = certified_error_term(ord(d), n, &Config::default()).unwrap();
        prop_assert_eq!(rec.below_half(), Verdict::Holds);
        prop_assert_eq!(rec.within_bound(), Verdict::Holds);
    }

    #[test]
    fn approx_encloses_exact_minus_error(d in 2i64..=6, n in 1i64..=400, extra in 0u32..64) {
        let bits = required_precision(ord(d), n) as u32 + extra;
        let approx = approx_value(ord(d), n, bits, &Config::default()).unwrap();
        let f = Dyadic::from_int(BigInt::from(fib_at(ord(d), n)));
        // |F_n - approx| < 1/2
        prop_assert!(approx.lo() > &(&f - &Dyadic::half()) && approx.hi() < &(&f + &Dyadic::half()));
    }

    #[test]
    fn sequence_is_increasing(d in 2i64..=10, n_max in 3i64..=300) {
        let seq = fib_sequence(ord(d), n_max).unwrap();
        for n in 2..n_max as usize {
            prop_assert!(seq[n + 1] > seq[n]);
        }
        prop_assert!(seq[2] >= seq[1]);
        prop_assert!(!seq[1].is_zero());
    }
}
