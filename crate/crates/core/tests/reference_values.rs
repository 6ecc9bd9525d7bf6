//! Cross-checks between the independent oracles, frozen reference values
//! and the library's certified enclosures.

mod common;

use capcert::channel::binary_entropy;
use capcert::exactnum::{enc_log2, log2_rational, realrep_query};
use capcert::{Enclosure, Rational, RealRep};
use common::*;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn oracles_reproduce_frozen_values() {
    let cases = [
        (log2_approx(&q("3")), frozen::LOG2_3),
        (pi_approx().recip().unwrap(), frozen::INV_PI),
        (exp_neg_approx(&q("1")), frozen::EXP_NEG_1),
        (exp_neg_approx(&q("1/2")), frozen::EXP_NEG_HALF),
        (exp_neg_approx(&q("1/3")), frozen::EXP_NEG_THIRD),
        (
            Rational::one() - h2_approx(&q("1/4")),
            frozen::ONE_MINUS_H2_QUARTER,
        ),
        (h2_approx(&q("1/4")), frozen::H2_QUARTER),
    ];
    for (value, digits) in cases {
        assert_eq!(scaled64(&value).to_string(), digits);
    }
}

#[test]
fn log2_enclosures_contain_oracle_values() {
    for x in ["3", "1/3", "7/5", "1000/999", "123456789/1024", "2/3"] {
        let truth = log2_approx(&q(x));
        for m in [10, 30, 60, 100] {
            let e = log2_rational(&q(x), m).unwrap();
            assert!(e.contains(&truth), "x={x} m={m}");
            assert!(e.width() < Rational::pow2(-(m as i64)));
        }
    }
}

#[test]
fn log2_of_three_against_frozen_value() {
    let e = enc_log2(&Enclosure::point(q("3")), 64).unwrap();
    let frozen = frozen_value(frozen::LOG2_3);
    let ulp = Rational::pow2(-64);
    assert!(e.lo() <= &(&frozen + &ulp) && &frozen <= e.hi());
}

#[test]
fn quarter_entropy_matches_closed_form() {
    // h2(1/4) = 2 - (3/4) log2 3
    let h = binary_entropy(&q("1/4"), 30).unwrap();
    let closed = Rational::from(2) - q("3/4") * log2_approx(&q("3"));
    assert!(h.contains(&closed));
    assert!(h.width() < Rational::pow2(-30));
}

#[test]
fn inverse_pi_representation() {
    // r_n = 1/pi truncated to n bits, queried one bit deeper
    let inv_pi = pi_approx().recip().unwrap();
    let rep = {
        let inv_pi = inv_pi.clone();
        RealRep::new(move |n| inv_pi.floor_to_bits(n as u32), |m| m as u64 + 1)
    };
    let r = realrep_query(&rep, 5);
    assert!((r - &inv_pi).abs() < Rational::pow2(-5));
    let frozen = frozen_value(frozen::INV_PI);
    assert!((rep.query(40) - frozen).abs() < Rational::pow2(-40));
}
