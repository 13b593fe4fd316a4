use coxspec::numeric::Rational;
use coxspec::rho::{
    canonical_branch_vectors, classify_branch_vector, rho, rho_closed_form, rho_table, rho_via_u,
    solve_rho_equation, BranchTag, RecurrenceSequence,
};
use coxspec::sigma::{phi_plus, phi_plus_recurrent, SigmaError};
use coxspec::ExtendedValue;
use num_bigint::BigInt;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn finite_f64(x: ExtendedValue<f64>) -> f64 {
    x.into_finite().expect("finite")
}

#[test]
fn recurrence_matches_closed_form() {
    for r in [4.5, 5.0, 6.0, 10.0] {
        for n in 0..=30 {
            let a = finite_f64(rho(&r, n).unwrap());
            let b = rho_closed_form(r, n).unwrap();
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "r={r} n={n}");
        }
    }
}

#[test]
fn odd_index_u_ratio() {
    for r in 4..=7 {
        let r = q(r, 1);
        let u = RecurrenceSequence::u(r.clone()).unwrap();
        for k in 1..=15u64 {
            let lhs = rho(&r, 2 * k - 1).unwrap().into_finite().unwrap();
            let rhs = q(1, 1) + u.term(k - 1).unwrap() / u.term(k).unwrap();
            assert_eq!(lhs, rhs, "r={r} k={k}");
        }
    }
}

#[test]
fn u_sequence_form_of_rho() {
    for r in [4, 5, 6, 9] {
        let r = q(r, 1);
        for n in 1..=20 {
            assert_eq!(
                rho(&r, n).unwrap().into_finite().unwrap(),
                rho_via_u(&r, n).unwrap()
            );
        }
    }
}

#[test]
fn v_sequence_ratio() {
    for r in [4.0, 5.0, 2.0 + 3f64.sqrt()] {
        let v = RecurrenceSequence::v(r).unwrap();
        let scale = (0..=21)
            .map(|n| v.term(n).unwrap().abs())
            .fold(1.0, f64::max);
        let mut poles = 0;
        for n in 0..=20 {
            let lhs = finite_f64(rho(&r, n).unwrap());
            let den = v.term(n + 1).unwrap();
            if den.abs() <= 1e-12 * scale {
                // both sides sit on a pole of rho
                assert!(lhs.abs() > 1e10, "r={r} n={n}");
                poles += 1;
                continue;
            }
            let rhs = r.sqrt() * v.term(n).unwrap() / den;
            assert!((lhs - rhs).abs() <= 1e-10, "r={r} n={n}");
        }
        assert_eq!(poles, usize::from(r < 4.0));
    }
}

#[test]
fn periods_below_four() {
    for (r, period) in [(1, 3usize), (2, 4), (3, 6)] {
        let table = rho_table(&q(r, 1), 40).unwrap();
        for m in 0..table.len() - period {
            assert_eq!(table[m], table[m + period], "r={r}");
        }
        for p in 1..period {
            assert!(
                (0..table.len() - p).any(|m| table[m] != table[m + p]),
                "r={r} has period {p}"
            );
        }
    }
}

#[test]
fn phi_forms_agree() {
    for r in [4.0, 5.0, 6.0] {
        for alpha in [0.0, 0.5, 1.0, 2.0] {
            for k in 1..=10 {
                match (phi_plus(&r, &alpha, k), phi_plus_recurrent(&r, &alpha, k)) {
                    (Ok(a), Ok(b)) => assert!(
                        (a - b).abs() <= 1e-10 * a.abs().max(1.0),
                        "r={r} a={alpha} k={k}"
                    ),
                    (Err(SigmaError::Pole { .. }), _) | (_, Err(SigmaError::Pole { .. })) => {}
                    other => panic!("{other:?}"),
                }
            }
        }
    }
    assert_eq!(phi_plus(&q(5, 1), &q(1, 1), 2).unwrap(), q(11, 8));
    assert_eq!(phi_plus_recurrent(&q(4, 1), &q(0, 1), 2).unwrap(), q(8, 5));
}

#[test]
fn solver_families() {
    for r in 4..=7i64 {
        let res = solve_rho_equation(&q(r, 1), r as usize + 1, 12).unwrap();
        assert!(res.exhaustive);
        let got: Vec<Vec<u64>> = res.solutions.iter().map(|v| v.entries().to_vec()).collect();
        let n = (r - 1) as usize;
        let mut want = vec![
            vec![1; r as usize],
            vec![2; n],
            std::iter::once(1)
                .chain(std::iter::repeat_n(3, n - 1))
                .collect(),
            [1, 2]
                .into_iter()
                .chain(std::iter::repeat_n(5, n - 2))
                .collect::<Vec<u64>>(),
        ];
        want.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        assert_eq!(got, want, "r={r}");
    }
    let res = solve_rho_equation(&q(9, 2), 6, 20).unwrap();
    assert!(res.solutions.is_empty() && res.exhaustive);
}

fn dynkin_shape(e: &[u64]) -> bool {
    matches!(
        e,
        [_] | [_, _] | [1, 1, _] | [1, 2, 2] | [1, 2, 3] | [1, 2, 4]
    )
}

#[test]
fn classification_matches_dynkin_families() {
    let all = canonical_branch_vectors(6, 12);
    for v in &all {
        let dynkin = classify_branch_vector(v).tag == BranchTag::Dynkin;
        assert_eq!(dynkin, dynkin_shape(v.entries()), "{v}");
    }
}

proptest! {
    #[test]
    fn rho_of_one_is_one(r in 1.0f64..50.0) {
        prop_assert_eq!(rho(&r, 1).unwrap(), ExtendedValue::Finite(1.0));
    }

    #[test]
    fn rho_decreases_in_r(n in 2u64..30, step in 0usize..63) {
        let r = q(16 + step as i64, 4);
        let r2 = q(17 + step as i64, 4);
        let a = rho(&r, n).unwrap().into_finite().unwrap();
        let b = rho(&r2, n).unwrap().into_finite().unwrap();
        prop_assert!(b < a);
    }

    #[test]
    fn rho_increases_in_n(r_num in 16i64..80, n in 0u64..30) {
        let r = q(r_num, 4);
        let a = rho(&r, n).unwrap().into_finite().unwrap();
        let b = rho(&r, n + 1).unwrap().into_finite().unwrap();
        prop_assert!(a < b);
    }
}
