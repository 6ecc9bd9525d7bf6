use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::fixed;
use super::Rational;
use crate::{Error, Result};

/// Guard bits carried by the series kernels beyond the requested precision.
const GUARD_BITS: u32 = 16;

/// Closed interval `[lo, hi]` with rational endpoints that is guaranteed to
/// contain the exact value it stands for.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEnclosure")]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

#[derive(Deserialize)]
struct RawEnclosure {
    lo: Rational,
    hi: Rational,
}

impl TryFrom<RawEnclosure> for Enclosure {
    type Error = Error;
    fn try_from(raw: RawEnclosure) -> Result<Self> {
        Enclosure::new(raw.lo, raw.hi)
    }
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!("empty enclosure [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        self.lo.midpoint(&self.hi)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Smallest enclosure containing both.
    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Multiply by a non-negative rational.
    pub fn scale(&self, c: &Rational) -> Enclosure {
        debug_assert!(!c.is_negative());
        Enclosure {
            lo: &self.lo * c,
            hi: &self.hi * c,
        }
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().expect("four products");
        let hi = products.iter().max().cloned().expect("four products");
        Enclosure { lo, hi }
    }

    /// Widen onto the dyadic grid `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> Enclosure {
        Enclosure {
            lo: self.lo.floor_to_bits(bits),
            hi: self.hi.ceil_to_bits(bits),
        }
    }

    /// Add a non-negative slack on both sides.
    pub fn inflate(&self, slack: &Rational) -> Enclosure {
        Enclosure {
            lo: &self.lo - slack,
            hi: &self.hi + slack,
        }
    }

    pub fn max(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for &Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Add for Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: Enclosure) -> Enclosure {
        &self + &rhs
    }
}

impl Sub for &Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Sub for Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: Enclosure) -> Enclosure {
        &self - &rhs
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

/// Certified `log2` of a positive enclosure.
///
/// For a point input the result has width at most `2^-(precision+1)`, and
/// raising `precision` never widens it. Endpoints land on the grid
/// `2^-(precision+2)`; exact powers of two come back as exact points.
pub fn enc_log2(x: &Enclosure, precision: u32) -> Result<Enclosure> {
    if !x.lo.is_positive() {
        return Err(Error::Domain(format!(
            "log2 needs a positive argument, got lower end {}",
            x.lo
        )));
    }
    let bits = precision + GUARD_BITS;
    let grid = precision + 2;
    let to_rational = |k: i64, units| Rational::from(k) + Rational::from_scaled(units, bits);
    let (k_lo, lo_units, hi_units) = fixed::log2_bounds(&x.lo, bits);
    let lo = to_rational(k_lo, lo_units).floor_to_bits(grid);
    let hi = if x.lo == x.hi {
        to_rational(k_lo, hi_units)
    } else {
        let (k_hi, _, hi_units) = fixed::log2_bounds(&x.hi, bits);
        to_rational(k_hi, hi_units)
    };
    Ok(Enclosure {
        lo,
        hi: hi.ceil_to_bits(grid),
    })
}

/// Certified `log2` of a positive rational.
pub fn log2_rational(x: &Rational, precision: u32) -> Result<Enclosure> {
    enc_log2(&Enclosure::point(x.clone()), precision)
}

/// Certified `2^t`. The relative width is about `2^-precision`.
pub fn enc_exp2(t: &Enclosure, precision: u32) -> Enclosure {
    let bits = precision + GUARD_BITS;
    let (lo, _) = fixed::exp2_bounds(&t.lo, bits);
    let hi = if t.lo == t.hi {
        fixed::exp2_bounds(&t.lo, bits).1
    } else {
        fixed::exp2_bounds(&t.hi, bits).1
    };
    Enclosure { lo, hi }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn pt(s: &str) -> Enclosure {
        Enclosure::point(r(s))
    }

    #[test]
    fn log2_of_two() {
        let e = enc_log2(&pt("2"), 30).unwrap();
        assert!(e.contains(&Rational::one()));
        assert!(e.width() < Rational::pow2(-30));
    }

    #[test]
    fn log2_of_one_and_half() {
        assert!(enc_log2(&pt("1"), 10).unwrap().contains(&Rational::zero()));
        assert!(enc_log2(&pt("1/2"), 20)
            .unwrap()
            .contains(&Rational::from(-1)));
        assert_eq!(enc_log2(&pt("1/1024"), 5).unwrap(), pt("-10"));
    }

    #[test]
    fn log2_domain_error() {
        assert!(matches!(enc_log2(&pt("0"), 10), Err(Error::Domain(_))));
        let straddle = Enclosure::new(r("-1"), r("1")).unwrap();
        assert!(enc_log2(&straddle, 10).is_err());
    }

    #[test]
    fn log2_of_three_matches_known_digits() {
        // log2 3 = 1.58496250072115618145...
        let e = enc_log2(&pt("3"), 50).unwrap();
        assert!(e.lo() > &r("158496250072115/100000000000000"));
        assert!(e.hi() < &r("158496250072116/100000000000000"));
    }

    #[test]
    fn log2_interval_contains_endpoint_logs() {
        let x = Enclosure::new(r("3/2"), r("5")).unwrap();
        let e = enc_log2(&x, 20).unwrap();
        assert_eq!(e.lo(), enc_log2(&pt("3/2"), 20).unwrap().lo());
        assert_eq!(e.hi(), enc_log2(&pt("5"), 20).unwrap().hi());
        assert!(e.lo() < &r("585/1000") && e.hi() > &r("2321/1000"));
    }

    #[test]
    fn refinement_never_widens_point_logs() {
        for x in ["3", "5/7", "1000001/1000000", "123456789/2", "7/3"] {
            let mut prev = enc_log2(&pt(x), 1).unwrap().width();
            for m in 2..60 {
                let w = enc_log2(&pt(x), m).unwrap().width();
                assert!(w <= prev, "x={x} m={m}");
                assert!(w < Rational::pow2(-(m as i64)));
                prev = w;
            }
        }
    }

    #[test]
    fn exp2_contains_exact_powers() {
        let e = enc_exp2(&pt("-3"), 20);
        assert_eq!(e, pt("1/8"));
        let e = enc_exp2(&Enclosure::new(r("0"), r("1")).unwrap(), 20);
        assert!(e.contains(&Rational::one()) && e.contains(&Rational::from(2)));
    }

    #[test]
    fn interval_arithmetic_basics() {
        let a = Enclosure::new(r("-1"), r("2")).unwrap();
        let b = Enclosure::new(r("3"), r("4")).unwrap();
        assert_eq!(&a + &b, Enclosure::new(r("2"), r("6")).unwrap());
        assert_eq!(&a - &b, Enclosure::new(r("-5"), r("-1")).unwrap());
        assert_eq!(a.mul(&b), Enclosure::new(r("-4"), r("8")).unwrap());
        assert_eq!(-&a, Enclosure::new(r("-2"), r("1")).unwrap());
        assert!(Enclosure::new(r("1"), r("0")).is_err());
    }

    #[test]
    fn serde_shape() {
        let e = Enclosure::new(r("1/3"), r("1/2")).unwrap();
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"{"lo":"1/3","hi":"1/2"}"#);
        assert!(serde_json::from_str::<Enclosure>(r#"{"lo":"1","hi":"0"}"#).is_err());
    }
}
