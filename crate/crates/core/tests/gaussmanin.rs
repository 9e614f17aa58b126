mod common;

use fresco_core::gaussmanin::{
    bernstein_divisor, closure_degree_bounded, recurrence, run, solve_weights,
};
use fresco_core::rational::{int, rat};
use fresco_core::{Error, MonomialInput, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Whether some nonnegative integer vector `p` has `Σ p_i·rows_i = target`.
fn reachable(rows: &[Vec<u32>], target: &[i64]) -> bool {
    let Some((row, rest)) = rows.split_first() else {
        return target.iter().all(|&t| t == 0);
    };
    let mut t = target.to_vec();
    loop {
        if reachable(rest, &t) {
            return true;
        }
        for (x, &e) in t.iter_mut().zip(row) {
            *x -= e as i64;
        }
        if t.iter().any(|&x| x < 0) || row.iter().all(|&e| e == 0) {
            return false;
        }
    }
}

fn input_strategy() -> impl Strategy<Value = MonomialInput> {
    (2usize..=3)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(prop::collection::vec(0u32..=4, n), n),
                prop::collection::vec(common::rational(3, 2).prop_filter("nonzero", |c| !c.is_zero()), n),
            )
        })
        .prop_map(|(m, c)| MonomialInput::new(m, Some(c), None, None).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn weights_invert_the_scaled_exponents(input in input_strategy()) {
        let n = input.num_vars();
        for i in 0..n {
            let Ok(u) = solve_weights(&input, i) else { continue };
            for r in 0..n {
                let dot: Rational = (0..n)
                    .map(|j| &input.coefficients()[r] * int(input.monomials()[r][j] as i64) * &u[j])
                    .sum();
                let expected = if r == i { Rational::one() } else { Rational::zero() };
                prop_assert_eq!(dot, expected);
            }
        }
    }

    #[test]
    fn sigma_is_affine(input in input_strategy()) {
        let Ok(rec) = recurrence(&input) else { return Ok(()) };
        let step = rec.sigma.eval(1) - rec.sigma.eval(0);
        for k in 1..10 {
            prop_assert_eq!(rec.sigma.eval(k + 1) - rec.sigma.eval(k), step.clone());
        }
        let weighted: Rational = rec.alpha.iter().zip(input.coefficients()).map(|(a, c)| a * c).sum();
        prop_assert_eq!(rec.sigma.slope.clone(), weighted);
    }

    #[test]
    fn closure_is_minimal(input in input_strategy()) {
        let Ok(c) = closure_degree_bounded(&input, 64) else { return Ok(()) };
        let n = input.num_vars();
        for j in 0..n {
            let s: u64 = (0..n).map(|i| c.exponents[i] * input.monomials()[i][j] as u64).sum();
            prop_assert_eq!(s, c.degree as u64 * input.distinguished()[j] as u64);
        }
        for smaller in 1..c.degree {
            let target: Vec<i64> = input.distinguished().iter().map(|&m| (m * smaller) as i64).collect();
            prop_assert!(!reachable(input.monomials(), &target), "N' = {} also closes", smaller);
        }
    }

    #[test]
    fn divisor_degree_is_closure_degree(input in input_strategy()) {
        let Ok(c) = closure_degree_bounded(&input, 64) else { return Ok(()) };
        if recurrence(&input).is_err() {
            return Ok(());
        }
        let (b, _) = bernstein_divisor(&input).unwrap();
        prop_assert_eq!(b.degree(), c.degree);
        prop_assert!(b.poly().is_monic());
    }
}

fn worked_input() -> MonomialInput {
    serde_json::from_str(
        r#"{"monomials": [[1,2,0,0],[2,1,0,0],[0,0,1,3],[0,0,3,1]],
            "coefficients": ["1","1","1","1"], "distinguished": [1,1,1,1], "form": [0,0,0,0]}"#,
    )
    .unwrap()
}

#[test]
fn worked_quartic() {
    let input = worked_input();
    let r = run(&input).unwrap();
    assert_eq!(r.alpha, vec![rat(1, 3), rat(1, 3), rat(1, 4), rat(1, 4)]);
    assert_eq!(r.sigma.slope, rat(7, 6));
    assert_eq!(r.sigma.intercept, rat(7, 6));
    assert_eq!(r.rhs, rat(-1, 6));
    assert_eq!(r.closure_degree, 12);
    assert_eq!(r.closure_exponents, vec![4, 4, 3, 3]);
    let roots: Vec<Rational> = (0..12).map(|k| rat(-(k + 7), 6)).collect();
    let mut got = r.divisor.rational_roots();
    got.sort();
    let mut want = roots;
    want.sort();
    assert_eq!(got, want);
    assert!(r.warnings.is_empty());
}

#[test]
fn singular_exponents() {
    let input = MonomialInput::new(vec![vec![1, 1], vec![2, 2]], None, None, None).unwrap();
    assert_eq!(solve_weights(&input, 0), Err(Error::DegenerateExponents));
}
