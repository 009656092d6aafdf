use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sfseries::exactnum::{gamma_half, render};
use sfseries::identities::{registry, rhs_paper};
use sfseries::{ClosedValue, ExactScalar, Family};

fn scalar(sp: i32) -> impl Strategy<Value = ExactScalar> {
    (-1000i64..1000, 1i64..500).prop_map(move |(n, d)| ExactScalar::new(BigInt::from(n), BigInt::from(d), sp).unwrap())
}

proptest! {
    #[test]
    fn addition_is_a_group(a in scalar(1), b in scalar(1), c in scalar(1)) {
        let ab = a.checked_add(&b).unwrap();
        prop_assert_eq!(ab.clone(), b.checked_add(&a).unwrap());
        prop_assert_eq!(ab.checked_add(&c).unwrap(), a.checked_add(&b.checked_add(&c).unwrap()).unwrap());
        prop_assert!(a.checked_sub(&a).unwrap().is_zero());
    }

    #[test]
    fn multiplication_distributes(a in scalar(-1), b in scalar(2), c in scalar(2)) {
        let lhs = a.clone() * b.checked_add(&c).unwrap();
        let rhs = (a.clone() * b).checked_add(&(a * c)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplicative_inverse(a in scalar(3)) {
        prop_assume!(!a.is_zero());
        let p = a.clone() * a.recip().unwrap();
        prop_assert_eq!(p, ExactScalar::one());
    }

    #[test]
    fn mixed_powers_do_not_add(a in scalar(0), b in scalar(1)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        prop_assert!(a.checked_add(&b).is_err());
    }

    #[test]
    fn gamma_half_recurrence(two_x in 1u32..60) {
        // Γ(x + 1) = x Γ(x)
        let lhs = gamma_half(two_x + 2).unwrap();
        let x = BigRational::new(BigInt::from(two_x), BigInt::from(2));
        prop_assert_eq!(lhs, gamma_half(two_x).unwrap().mul_rational(&x));
    }
}

#[test]
fn render_is_stable_across_precisions() {
    let ys = [BigRational::new(1.into(), 4.into()), BigRational::from_integer(1.into()), BigRational::from_integer(4.into())];
    for ((family, nu), value) in registry() {
        let y = match value {
            ClosedValue::ExpPoly(_) => ys.iter().collect::<Vec<_>>(),
            ClosedValue::Constant(_) => vec![&ys[0]],
        };
        for y in y {
            let lo = render(value, Some(y), 32).unwrap();
            let hi = render(value, Some(y), 64).unwrap();
            let rel = ((lo.clone() - hi.clone()).abs() / hi.abs()).to_f64();
            assert!(rel < 1e-31, "{family} {nu}: {rel:e}");
        }
    }
    assert!(render(&rhs_paper(Family::F1, 1).unwrap(), None, 15).is_err());
}
