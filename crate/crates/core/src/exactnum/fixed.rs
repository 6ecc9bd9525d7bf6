//! Fixed-point series kernels with directed rounding.
//!
//! Every routine works on non-negative integers read as multiples of
//! `2^-bits`. Lower-bound routines round every intermediate toward zero and
//! drop the (positive) tail; upper-bound routines round away from zero and add
//! an explicit tail bound. Callers convert the resulting integer pairs into
//! rational enclosures.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn shr_ceil(a: &BigInt, bits: u32) -> BigInt {
    -((-a) >> bits)
}

/// Lower bound on `atanh(z) * 2^bits` for `z = z_units * 2^-bits`, `0 <= z <= 1/2`.
fn atanh_lower(z_units: &BigInt, bits: u32) -> BigInt {
    if z_units.is_zero() {
        return BigInt::zero();
    }
    let z2 = (z_units * z_units) >> bits;
    let mut term = z_units.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while term.is_positive() {
        sum += &term / BigInt::from(2 * k + 1);
        term = (&term * &z2) >> bits;
        k += 1;
    }
    sum
}

/// Upper bound on `atanh(z) * 2^bits`, same domain as [`atanh_lower`].
fn atanh_upper(z_units: &BigInt, bits: u32) -> BigInt {
    if z_units.is_zero() {
        return BigInt::zero();
    }
    let z2 = shr_ceil(&(z_units * z_units), bits);
    let mut term = z_units.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    loop {
        sum += div_ceil(&term, &BigInt::from(2 * k + 1));
        term = shr_ceil(&(&term * &z2), bits);
        k += 1;
        if term <= BigInt::one() {
            // remaining terms sum to at most term / (1 - z^2) <= 2 * term
            sum += &term << 1;
            return sum;
        }
    }
}

const LN2_CACHE_BITS: u32 = 1024;

fn ln2_cached() -> &'static (BigInt, BigInt) {
    static CACHE: OnceLock<(BigInt, BigInt)> = OnceLock::new();
    CACHE.get_or_init(|| ln2_direct(LN2_CACHE_BITS))
}

fn ln2_direct(bits: u32) -> (BigInt, BigInt) {
    // ln 2 = 2 atanh(1/3)
    let one = BigInt::one() << bits;
    let third = BigInt::from(3);
    let z_lo = one.div_floor(&third);
    let z_hi = div_ceil(&one, &third);
    (atanh_lower(&z_lo, bits) << 1, atanh_upper(&z_hi, bits) << 1)
}

/// Bounds `(lo, hi)` with `lo * 2^-bits <= ln 2 <= hi * 2^-bits`.
pub(crate) fn ln2_bounds(bits: u32) -> (BigInt, BigInt) {
    if bits > LN2_CACHE_BITS {
        return ln2_direct(bits);
    }
    let (lo, hi) = ln2_cached();
    let drop = LN2_CACHE_BITS - bits;
    (lo >> drop, shr_ceil(hi, drop))
}

/// `floor(log2(r))` for `r > 0`.
pub(crate) fn floor_log2(r: &Rational) -> i64 {
    let n = r.numer();
    let d = r.denom();
    let mut k = n.bits() as i64 - d.bits() as i64;
    // 2^(k-1) < r < 2^(k+1); settle which side of 2^k it lies on
    let below = if k >= 0 {
        n < &(d << k as u32)
    } else {
        &(n << (-k) as u32) < d
    };
    if below {
        k -= 1;
    }
    k
}

/// Enclosure of `log2(r)` for `r > 0`: returns `(k, lo, hi)` with
/// `k + lo * 2^-bits <= log2(r) <= k + hi * 2^-bits`.
pub(crate) fn log2_bounds(r: &Rational, bits: u32) -> (i64, BigInt, BigInt) {
    debug_assert!(r.is_positive());
    let k = floor_log2(r);
    let y = r.shl(-k);
    if y == Rational::one() {
        return (k, BigInt::zero(), BigInt::zero());
    }
    let one = Rational::one();
    // y in (1, 2) so z = (y - 1) / (y + 1) in (0, 1/3)
    let z = (&y - &one)
        .checked_div(&(&y + &one))
        .expect("y + 1 is positive");
    let ln_lo: BigInt = atanh_lower(&z.floor_scaled(bits), bits) << 1;
    let ln_hi: BigInt = atanh_upper(&z.ceil_scaled(bits), bits) << 1;
    let (l2_lo, l2_hi) = ln2_bounds(bits);
    let lo = (ln_lo << bits).div_floor(&l2_hi);
    let hi = div_ceil(&(ln_hi << bits), &l2_lo);
    (k, lo, hi)
}

fn exp_lower(u_units: &BigInt, bits: u32) -> BigInt {
    let mut term = BigInt::one() << bits;
    let mut sum = BigInt::zero();
    let mut i = 1u64;
    while term.is_positive() {
        sum += &term;
        term = (&term * u_units).div_floor(&(BigInt::from(i) << bits));
        i += 1;
    }
    sum
}

fn exp_upper(u_units: &BigInt, bits: u32) -> BigInt {
    let mut term = BigInt::one() << bits;
    let mut sum = BigInt::zero();
    if u_units.is_zero() {
        return term;
    }
    let mut i = 1u64;
    loop {
        sum += &term;
        term = div_ceil(&(&term * u_units), &(BigInt::from(i) << bits));
        i += 1;
        if term <= BigInt::one() && i > 2 {
            // u < 1 and i >= 2: tail ratio below 1/2
            sum += &term << 1;
            return sum;
        }
    }
}

/// Rational bounds on `2^t`.
pub(crate) fn exp2_bounds(t: &Rational, bits: u32) -> (Rational, Rational) {
    let k = t.floor();
    let k_i64: i64 = i64::try_from(&k).expect("exponent out of range");
    let frac = t - &Rational::from_integer(k);
    let scale = Rational::pow2(k_i64);
    if frac.is_zero() {
        return (scale.clone(), scale);
    }
    let (l2_lo, l2_hi) = ln2_bounds(bits);
    // u = frac * ln 2 in (0, ln 2)
    let u_lo = (frac.numer() * &l2_lo).div_floor(frac.denom());
    let u_hi = div_ceil(&(frac.numer() * &l2_hi), frac.denom());
    let lo = Rational::from_scaled(exp_lower(&u_lo, bits), bits) * &scale;
    let hi = Rational::from_scaled(exp_upper(&u_hi, bits), bits) * &scale;
    (lo, hi)
}
