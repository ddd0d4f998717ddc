use std::collections::BTreeMap;

use num_bigint::BigInt;
use repbasis::construct::{self, Phi, Sparsity, TargetFn, TargetValue};
use repbasis::linforms::{self, BinaryForm};
use repbasis::oracle::{self, TupleRule};
use repbasis::{Error, FiniteIntSet};

fn widen(a: &FiniteIntSet<i64>) -> FiniteIntSet<BigInt> {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn urb_is_scalar_independent() {
    let small = construct::urb_build::<i64>(30, None).unwrap();
    let wide = construct::urb_build::<i128>(30, None).unwrap();
    let big = construct::urb_build::<BigInt>(30, None).unwrap();
    assert_eq!(widen(small.set()), *big.set());
    assert_eq!(small.set().iter().map(|&x| x as i128).collect::<FiniteIntSet<_>>(), *wide.set());
}

#[test]
fn urb_overflow_is_an_error_not_a_wrong_answer() {
    assert_eq!(construct::urb_build::<i64>(80, None).unwrap_err(), Error::Overflow);
    assert!(construct::urb_build::<BigInt>(80, None).is_ok());
}

#[test]
fn urb_prefixes_grow() {
    let mut s = construct::urb_build::<BigInt>(1, None).unwrap();
    for _ in 0..15 {
        let next = construct::urb_step(s.clone(), None, construct::DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(s.set().is_subset(next.set()));
        assert_eq!(next.set().len(), s.set().len() + 2);
        assert!(construct::verify_urb(&next).unwrap().passed());
        s = next;
    }
}

#[test]
fn sparse_urb_respects_closure_phi() {
    let phi = |x: &BigInt| -> BigInt { x.bits().max(1).into() };
    let sparsity: &dyn Sparsity<BigInt> = &phi;
    let s = construct::urb_build::<BigInt>(20, Some(sparsity)).unwrap();
    assert!(construct::sparsity_checkpoints(&s, &phi).unwrap().iter().all(|c| c.holds()));
    assert!(construct::verify_urb(&s).unwrap().passed());
}

#[test]
fn phi_parsing() {
    assert_eq!(Phi::parse("log").unwrap(), Phi::Log { offset: 4 });
    assert_eq!(Phi::parse("log+9").unwrap(), Phi::Log { offset: 9 });
    assert!(Phi::parse("poly:0.25").is_ok());
    assert_eq!(Phi::parse("poly:2/4").unwrap(), Phi::Power { num: 1, den: 2 });
    assert!(matches!(Phi::parse("poly:0"), Err(Error::InvalidInput(_))));
    assert!(matches!(Phi::parse("sqrt"), Err(Error::InvalidInput(_))));
}

#[test]
fn prescribed_counts_are_bounded_by_target() {
    let f = TargetFn::new(
        TargetValue::Finite(3),
        BTreeMap::from([(BigInt::from(1), TargetValue::Finite(1)), (BigInt::from(-2), TargetValue::Finite(0))]),
    )
    .unwrap();
    let s = construct::fundrep_build(&f, 2, 40).unwrap();
    let counts = oracle::enum_support(s.set(), 2, TupleRule::Unordered).unwrap();
    assert!(!counts.contains_key(&BigInt::from(-2)));
    assert_eq!(counts.get(&BigInt::from(1)), Some(&1));
    for (n, &c) in &counts {
        assert!(f.eval(n).admits(c), "r({n}) = {c}");
    }
    assert!(construct::verify_fundrep(&s, &f).unwrap().passed());
}

#[test]
fn all_zero_target_is_rejected() {
    let f = TargetFn::<BigInt>::constant(TargetValue::Finite(0));
    assert!(f.is_err() || construct::fundrep_build(&f.unwrap(), 2, 1).is_err());
}

#[test]
fn linear_form_bases_are_unique() {
    for (u1, u2) in [(1, 2), (1, 3), (2, 5), (4, 7)] {
        let phi = BinaryForm::new(BigInt::from(u1), BigInt::from(u2)).unwrap();
        let a = linforms::urb_form(&phi, 12).unwrap();
        let counts = oracle::enum_form(phi.u1(), phi.u2(), &a, &a).unwrap();
        assert!(counts.values().all(|&c| c == 1), "({u1},{u2})");
        assert_eq!(phi.u1() * phi.v1() + phi.u2() * phi.v2(), BigInt::from(1));
    }
}

#[test]
fn non_coprime_forms_are_rejected() {
    assert!(BinaryForm::new(BigInt::from(2), BigInt::from(4)).is_err());
    assert!(BinaryForm::new(BigInt::from(0), BigInt::from(1)).is_err());
}
