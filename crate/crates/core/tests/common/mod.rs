//! Independent reference values for the integration suites.
//!
//! Nothing here calls the library's numeric kernels. Every routine works in
//! plain fixed point with `WORK` fractional bits and truncating arithmetic;
//! the accumulated error is far below `2^-(WORK-32)`, which is what the
//! `*_approx` helpers promise.

#![allow(dead_code)]

use std::path::PathBuf;

use capcert::reduction::TuringMachine;
use capcert::{Channel, Distribution, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const WORK: u32 = 320;

/// Guaranteed accuracy of every `*_approx` value.
pub fn oracle_tolerance() -> Rational {
    Rational::pow2(-((WORK - 32) as i64))
}

fn to_fixed(r: &Rational) -> BigInt {
    (r.numer() << WORK as usize).div_floor(r.denom())
}

fn from_fixed(v: BigInt) -> Rational {
    Rational::new(v, BigInt::one() << WORK as usize).unwrap()
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> WORK as usize
}

/// `log2(x)` for `x > 0` by repeated squaring: each squaring of the
/// normalised mantissa yields one binary digit.
pub fn log2_approx(x: &Rational) -> Rational {
    assert!(x.is_positive());
    let one = BigInt::one() << WORK as usize;
    let two = &one << 1;
    let mut y = to_fixed(x);
    let mut int_part = 0i64;
    while y >= two {
        y >>= 1;
        int_part += 1;
    }
    while y < one {
        y <<= 1;
        int_part -= 1;
    }
    let mut frac = BigInt::zero();
    for i in 1..=(WORK - 16) {
        y = mul(&y, &y);
        if y >= two {
            y >>= 1;
            frac += BigInt::one() << (WORK - i) as usize;
        }
    }
    Rational::from(int_part) + from_fixed(frac)
}

/// `pi` from Machin's formula `16 atan(1/5) - 4 atan(1/239)`.
pub fn pi_approx() -> Rational {
    fn atan_inv(n: i64) -> BigInt {
        let n2 = BigInt::from(n * n);
        let mut power = (BigInt::one() << WORK as usize) / n;
        let mut sum = BigInt::zero();
        let mut k = 0i64;
        while !power.is_zero() {
            let term = &power / (2 * k + 1);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &n2;
            k += 1;
        }
        sum
    }
    from_fixed(atan_inv(5) * 16 - atan_inv(239) * 4)
}

/// `e^x` for `0 <= x <= 1` from the power series.
pub fn exp_approx_oracle(x: &Rational) -> Rational {
    let xf = to_fixed(x);
    let mut term = BigInt::one() << WORK as usize;
    let mut sum = BigInt::zero();
    let mut k = 1i64;
    while !term.is_zero() {
        sum += &term;
        term = mul(&term, &xf) / k;
        k += 1;
    }
    from_fixed(sum)
}

/// `e^-x` as the reciprocal of the series for `e^x`.
pub fn exp_neg_approx(x: &Rational) -> Rational {
    exp_approx_oracle(x).recip().unwrap()
}

/// `h2(p)` from [`log2_approx`].
pub fn h2_approx(p: &Rational) -> Rational {
    if p.is_zero() || *p == Rational::one() {
        return Rational::zero();
    }
    let q = Rational::one() - p;
    -(p * &log2_approx(p) + &q * &log2_approx(&q))
}

/// `I(p, W)` from [`log2_approx`].
pub fn mutual_information_approx(p: &Distribution, w: &Channel) -> Rational {
    let mut q = vec![Rational::zero(); w.outputs()];
    for (x, px) in p.probs().iter().enumerate() {
        for (y, qy) in q.iter_mut().enumerate() {
            *qy = &*qy + &(px * w.get(x, y));
        }
    }
    let mut total = Rational::zero();
    for (x, px) in p.probs().iter().enumerate() {
        for (y, qy) in q.iter().enumerate() {
            let wy = w.get(x, y);
            if px.is_zero() || wy.is_zero() {
                continue;
            }
            total = total + px * wy * log2_approx(&wy.checked_div(qy).unwrap());
        }
    }
    total
}

/// `floor(v * 2^64)`.
pub fn scaled64(v: &Rational) -> BigInt {
    (v.numer() << 64usize).div_floor(v.denom())
}

/// Reference values `floor(v * 2^64)` computed offline at 400-bit
/// precision with an arbitrary-precision float library.
pub mod frozen {
    pub const LOG2_3: &str = "29237397617229858719";
    pub const INV_PI: &str = "5871781006564002452";
    pub const EXP_NEG_1: &str = "6786177901268885274";
    pub const EXP_NEG_HALF: &str = "11188515852577165299";
    pub const EXP_NEG_THIRD: &str = "13217669706954385033";
    pub const ONE_MINUS_H2_QUARTER: &str = "3481304139212842423";
    pub const H2_QUARTER: &str = "14965439934496709192";
}

pub fn frozen_value(digits: &str) -> Rational {
    let n: BigInt = digits.parse().unwrap();
    Rational::new(n, BigInt::one() << 64usize).unwrap()
}

/// A rational `a/b` with `0 <= a <= b <= max_den`.
pub fn random_unit(rng: &mut ChaCha8Rng, max_den: i64) -> Rational {
    let b = rng.gen_range(1..=max_den);
    let a = rng.gen_range(0..=b);
    Rational::frac(a, b)
}

/// A distribution on `n` symbols with entries that are multiples of
/// `1/den`, each weight drawn uniformly.
pub fn random_distribution(rng: &mut ChaCha8Rng, n: usize, den: i64) -> Distribution {
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=den)).collect();
    let total: i64 = weights.iter().sum();
    if total == 0 {
        return Distribution::uniform(n).unwrap();
    }
    Distribution::new(weights.iter().map(|&w| Rational::frac(w, total)).collect()).unwrap()
}

/// A row-stochastic `x` by `y` matrix with strictly positive rational rows.
pub fn random_channel(rng: &mut ChaCha8Rng, x: usize, y: usize, den: i64) -> Channel {
    let rows = (0..x)
        .map(|_| {
            let weights: Vec<i64> = (0..y).map(|_| rng.gen_range(1..=den)).collect();
            let total: i64 = weights.iter().sum();
            weights.iter().map(|&w| Rational::frac(w, total)).collect()
        })
        .collect();
    Channel::new(rows).unwrap()
}

pub fn l1(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn load_fixture(name: &str) -> TuringMachine {
    let path = fixture_dir().join(format!("{name}.tm"));
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .parse()
        .unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Fixture name and halting time on input 3, `None` for looping ones.
pub const FIXTURES: [(&str, Option<u64>); 10] = [
    ("halt0", Some(0)),
    ("halt3", Some(3)),
    ("halt4", Some(4)),
    ("counter", Some(4)),
    ("bounce", Some(8)),
    ("loop", None),
    ("pingpong", None),
    ("blank_runner", None),
    ("flipper", None),
    ("shuttle", None),
];

/// Input used for every fixture run.
pub const FIXTURE_INPUT: u64 = 3;
