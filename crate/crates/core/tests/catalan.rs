use num_bigint::BigInt;
use proptest::prelude::*;
use twotrees::catalan::{binomial, catalan, catalan_power, catq, PowerMethod};
use twotrees::{a_series, Rational, UniSeries};

/// Catalan numbers by the convolution recurrence, independent of the binomial formula.
fn catalan_table(n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::from(1)];
    for m in 1..=n {
        let next = (0..m).map(|i| &c[i] * &c[m - 1 - i]).sum();
        c.push(next);
    }
    c
}

fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

#[test]
fn catalan_values() {
    let table = catalan_table(40);
    for (n, c) in table.iter().enumerate() {
        assert_eq!(&catalan(n as u64), c, "n={n}");
    }
    assert_eq!(catalan(4u64), BigInt::from(14));
    assert_eq!(catq(5, 2), int(0));
    assert_eq!(catq(-2, 1), int(0));
    assert_eq!(catq(6, 2), int(5));
    assert_eq!(catalan(0u64), BigInt::from(1));
}

#[test]
fn binomial_is_total() {
    assert_eq!(binomial(5, 2), BigInt::from(10));
    assert_eq!(binomial(3, -1), BigInt::from(0));
    assert_eq!(binomial(3, 4), BigInt::from(0));
    assert_eq!(binomial(-1, 0), BigInt::from(0));
}

#[test]
fn a_series_examples() {
    let a = a_series(6);
    assert_eq!(a, UniSeries::from_integers(6, &[1, 1, 2, 5, 14, 42, 132]));
    assert_eq!(a_series(0), UniSeries::one(0));
    // fixpoint of S <- 1 + x S^2
    let mut s = UniSeries::one(8);
    for _ in 0..9 {
        s = &UniSeries::one(8) + &(&s * &s).shift(1);
    }
    assert_eq!(s.coeff(8), int(1430));
    assert_eq!(a_series(8), s);
}

#[test]
fn a_squared_is_a_minus_one_over_x() {
    let a = a_series(41);
    let lhs = (&a * &a).truncate(40);
    for n in 0..=40 {
        assert_eq!(lhs.coeff(n), a.coeff(n + 1), "n={n}");
    }
}

#[test]
fn power_examples() {
    for m in PowerMethod::ALL {
        assert_eq!(catalan_power(2, 3, m).unwrap(), BigInt::from(9));
        assert_eq!(catalan_power(0, 5, m).unwrap(), BigInt::from(1));
        for n in 0..20 {
            assert_eq!(catalan_power(n, 2, m).unwrap(), catalan(n + 1));
        }
        assert!(catalan_power(3, 0, m).is_err());
    }
}

#[test]
fn power_identity_after_clearing_denominators() {
    let order = 40;
    let a = a_series(order);
    for k in 2..=8u32 {
        let shift = (k - 1) as usize;
        // x^(k-1) A^k = sum_i (-1)^i C(k-1-i,i) x^i A + sum_i (-1)^(i+1) C(k-2-i,i) x^i
        let lhs = a.pow(k).shift(shift).truncate(order);
        let mut rhs = UniSeries::zero(order);
        for i in 0..=((k as i64 - 1) / 2) {
            let c = int(binomial(k as i64 - 1 - i, i)) * int(if i % 2 == 0 { 1 } else { -1 });
            rhs = &rhs + &a.shift(i as usize).truncate(order).scale(&c);
        }
        for i in 0..=((k as i64 - 2) / 2) {
            let c = int(binomial(k as i64 - 2 - i, i)) * int(if i % 2 == 0 { -1 } else { 1 });
            rhs = &rhs + &UniSeries::monomial(c, i as usize, order);
        }
        assert_eq!(lhs, rhs, "k={k}");
    }
}

proptest! {
    #[test]
    fn convolution(n in 0u64..30, j in 1u64..6, k in 1u64..6) {
        let p = |n, k| catalan_power(n, k, PowerMethod::ClosedForm).unwrap();
        let sum: BigInt = (0..=n).map(|a| p(a, j) * p(n - a, k)).sum();
        prop_assert_eq!(p(n, j + k), sum);
    }

    #[test]
    fn methods_agree(n in 0u64..=50, k in 1u64..=10) {
        let a = catalan_power(n, k, PowerMethod::AlternatingSum).unwrap();
        prop_assert_eq!(&a, &catalan_power(n, k, PowerMethod::ClosedForm).unwrap());
        prop_assert_eq!(&a, &catalan_power(n, k, PowerMethod::SeriesProduct).unwrap());
    }
}
