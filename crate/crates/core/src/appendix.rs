//! Effective approximation of `e^(-x)` and exact algebraic facts about
//! `2^(h2(p))` for rational `p`.
//!
//! For `p = n/m` in lowest terms,
//! `2^(h2(p)) = (m/n)^(n/m) * (m/(m-n))^((m-n)/m)`, a product of two real
//! algebraic numbers. The functions here check the integer identities behind
//! that statement and exclude rational values of `h2(p)` with bounded
//! denominator. That `h2(p)` is transcendental for `p` outside `{0, 1/2, 1}`
//! is not finitely checkable and is not claimed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use crate::channel::binary_entropy;
use crate::exactnum::{enc_exp2, Enclosure, Rational, RealRep};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpApproxResult {
    /// `y_n = sum_{l=0}^{n} (-1)^l r^l / l!`.
    pub value: Rational,
    pub n: u32,
    /// `|e^(-x) - value| < 2^-certified_error_exponent`.
    pub certified_error_exponent: u32,
}

/// Approximates `e^(-x)` for a represented `x` in `[0, 1]` to within
/// `2^-(n-1)`.
///
/// Queries `r = x.query(n)`, projects it onto `[0, 1]` (which cannot move it
/// away from `x`) and sums the Taylor polynomial of degree `n` exactly. The
/// representation error contributes less than `2^-n` because `e^(-t)` is
/// 1-Lipschitz on `[0, 1]`, and the Lagrange remainder is at most
/// `1/(n+1)! < 2^-n` for `n >= 2`.
pub fn exp_approx(x: &RealRep, n: u32) -> Result<ExpApproxResult> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "degree n must be at least 2, got {n}"
        )));
    }
    let r = x.query(n);
    let tol = Rational::pow2(-(n as i64));
    if r < -tol.clone() || r > Rational::one() + &tol {
        return Err(Error::Domain(format!(
            "approximant {r} at precision {n} places x outside [0, 1]"
        )));
    }
    let r = r.max(Rational::zero()).min(Rational::one());
    let mut term = Rational::one();
    let mut value = Rational::one();
    for l in 1..=n {
        term = -(&term * &r) * Rational::frac(1, l as i64);
        value = &value + &term;
    }
    Ok(ExpApproxResult {
        value,
        n,
        certified_error_exponent: n - 1,
    })
}

/// `coeff * x^degree - constant` with positive integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinomialPolynomial {
    #[serde(serialize_with = "as_string")]
    pub coeff: BigInt,
    pub degree: u32,
    #[serde(serialize_with = "as_string")]
    pub constant: BigInt,
}

fn as_string<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl BinomialPolynomial {
    pub fn eval(&self, x: &Rational) -> Rational {
        Rational::from(self.coeff.clone()) * x.pow(self.degree)
            - Rational::from(self.constant.clone())
    }

    /// Dyadic bracket `[t, t+1] / 2^bits` around the positive root.
    pub fn root_bracket(&self, bits: u32) -> Enclosure {
        let scaled =
            (&self.constant << (self.degree as usize * bits as usize)).div_floor(&self.coeff);
        let t = scaled.nth_root(self.degree);
        let lo = Rational::from_scaled(t.clone(), bits);
        let hi = Rational::from_scaled(t + 1, bits);
        Enclosure::new(lo, hi).expect("t < t + 1")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityVerdict {
    pub p: Rational,
    /// Annihilates `(1/p)^p`: `n^n x^m - m^n`.
    pub first: BinomialPolynomial,
    /// Annihilates `(1/(1-p))^(1-p)`: `(m-n)^(m-n) x^m - m^(m-n)`.
    pub second: BinomialPolynomial,
    /// Both polynomials vanish on the prescribed `m`-th powers and change
    /// sign across their dyadic root brackets, in exact arithmetic.
    pub root_checks_exact: bool,
    /// Certified enclosure of `2^(h2(p))`.
    pub entropy_power: Enclosure,
    /// Product of the two root brackets.
    pub root_product: Enclosure,
    pub enclosures_overlap: bool,
}

impl IdentityVerdict {
    pub fn passed(&self) -> bool {
        self.root_checks_exact && self.enclosures_overlap
    }
}

fn open_unit(p: &Rational) -> Result<()> {
    if !p.is_positive() || p >= &Rational::one() {
        return Err(Error::Domain(format!(
            "p must lie strictly between 0 and 1, got {p}"
        )));
    }
    Ok(())
}

fn big_pow(base: &BigInt, exp: &BigInt) -> BigInt {
    let e = u32::try_from(exp).expect("exponent fits in u32");
    Pow::pow(base, e)
}

/// Precision of the numeric cross-check; brackets use a few more bits.
const IDENTITY_PRECISION: u32 = 30;

/// Checks `2^(h2(p)) = (1/p)^p (1/(1-p))^(1-p)` through its exact
/// consequences, then compares certified enclosures of both sides.
pub fn entropy_power_identity(p: &Rational) -> Result<IdentityVerdict> {
    open_unit(p)?;
    let n = p.numer().clone();
    let m = p.denom().clone();
    let k = &m - &n;
    let degree = u32::try_from(&m).map_err(|_| Error::TooLarge(format!("denominator {m}")))?;
    let first = BinomialPolynomial {
        coeff: big_pow(&n, &n),
        degree,
        constant: big_pow(&m, &n),
    };
    let second = BinomialPolynomial {
        coeff: big_pow(&k, &k),
        degree,
        constant: big_pow(&m, &k),
    };
    // x^m for x = (m/n)^(n/m) and y = (m/(m-n))^((m-n)/m)
    let x_pow = Rational::new(first.constant.clone(), first.coeff.clone())?;
    let y_pow = Rational::new(second.constant.clone(), second.coeff.clone())?;
    let vanish = |poly: &BinomialPolynomial, power: &Rational| {
        Rational::from(poly.coeff.clone()) * power - Rational::from(poly.constant.clone())
    };
    let bits = IDENTITY_PRECISION + 8;
    let bx = first.root_bracket(bits);
    let by = second.root_bracket(bits);
    let sign_change = |poly: &BinomialPolynomial, b: &Enclosure| {
        !poly.eval(b.lo()).is_positive() && !poly.eval(b.hi()).is_negative()
    };
    let root_checks_exact = vanish(&first, &x_pow).is_zero()
        && vanish(&second, &y_pow).is_zero()
        && sign_change(&first, &bx)
        && sign_change(&second, &by);
    let h = binary_entropy(p, IDENTITY_PRECISION + 4)?;
    let entropy_power = enc_exp2(&h, IDENTITY_PRECISION + 4);
    let root_product = bx.mul(&by);
    let enclosures_overlap = entropy_power.overlaps(&root_product);
    Ok(IdentityVerdict {
        p: p.clone(),
        first,
        second,
        root_checks_exact,
        entropy_power,
        root_product,
        enclosures_overlap,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefutationReport {
    pub p: Rational,
    pub v_max: u64,
    /// Number of fractions `u/v` excluded as values of `h2(p)`.
    pub refuted: u64,
    /// Fractions for which the exact identity held. Always empty for
    /// `p != 1/2`.
    pub counterexamples: Vec<Rational>,
}

fn refutation_parts(p: &Rational) -> Result<(BigInt, BigInt, BigInt)> {
    open_unit(p)?;
    if p == &Rational::frac(1, 2) {
        return Err(Error::Precondition(
            "p = 1/2 gives h2(p) = 1, which is rational".into(),
        ));
    }
    let n = p.numer().clone();
    let m = p.denom().clone();
    let k = &m - &n;
    Ok((n, m, k))
}

/// `true` when `h2(p) = u/v` is excluded, i.e. when
/// `2^(m u) n^(n v) (m-n)^((m-n) v) != m^(m v)` for `p = n/m`.
pub fn refutation_check(p: &Rational, u: u64, v: u64) -> Result<bool> {
    let (n, m, k) = refutation_parts(p)?;
    Ok(refutes(&n, &m, &k, u, v))
}

fn refutes(n: &BigInt, m: &BigInt, k: &BigInt, u: u64, v: u64) -> bool {
    let v = BigInt::from(v);
    let lhs = (BigInt::one() << (u64::try_from(m * u).expect("small exponent") as usize))
        * big_pow(n, &(n * &v))
        * big_pow(k, &(k * &v));
    lhs != big_pow(m, &(m * &v))
}

/// Excludes every `u/v` with `2 <= v <= v_max`, `0 < u < v`, `gcd(u, v) = 1`
/// as a value of `h2(p)`.
pub fn rationality_refutation(p: &Rational, v_max: u64) -> Result<RefutationReport> {
    use rayon::prelude::*;
    let (n, m, k) = refutation_parts(p)?;
    if v_max < 2 {
        return Err(Error::Precondition(format!(
            "v_max must be at least 2, got {v_max}"
        )));
    }
    let per_v: Vec<(u64, Vec<Rational>)> = (2..=v_max)
        .into_par_iter()
        .map(|v| {
            let mut refuted = 0;
            let mut found = Vec::new();
            for u in (1..v).filter(|u| u.gcd(&v) == 1) {
                if refutes(&n, &m, &k, u, v) {
                    refuted += 1;
                } else {
                    found.push(Rational::frac(u as i64, v as i64));
                }
            }
            (refuted, found)
        })
        .collect();
    let refuted = per_v.iter().map(|(c, _)| c).sum();
    let counterexamples = per_v.into_iter().flat_map(|(_, f)| f).collect();
    Ok(RefutationReport {
        p: p.clone(),
        v_max,
        refuted,
        counterexamples,
    })
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            while (&n % &d).is_zero() {
                n /= &d;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn exp_at_zero_is_one() {
        let y = exp_approx(&RealRep::constant(r("0")), 10).unwrap();
        assert_eq!(y.value, Rational::one());
        assert_eq!(y.certified_error_exponent, 9);
    }

    #[test]
    fn exp_degree_guard_and_domain() {
        assert!(matches!(
            exp_approx(&RealRep::constant(r("1/2")), 1),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            exp_approx(&RealRep::constant(r("2")), 5),
            Err(Error::Domain(_))
        ));
        // within tolerance of the interval: clamped, not rejected
        let near = RealRep::new(|n| -Rational::pow2(-(n as i64) - 1), |m| m as u64);
        assert_eq!(exp_approx(&near, 6).unwrap().value, Rational::one());
    }

    #[test]
    fn exp_of_one_brackets_known_digits() {
        // e^-1 = 0.36787944117144232159...
        let y = exp_approx(&RealRep::constant(r("1")), 20).unwrap().value;
        let truth = r("36787944117144232159/100000000000000000000");
        assert!((y - truth).abs() < Rational::pow2(-19));
    }

    #[test]
    fn identity_at_one_third() {
        let v = entropy_power_identity(&r("1/3")).unwrap();
        assert_eq!(v.first.coeff, BigInt::one());
        assert_eq!(v.first.degree, 3);
        assert_eq!(v.first.constant, BigInt::from(3));
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn identity_at_half_and_two_fifths() {
        let v = entropy_power_identity(&r("1/2")).unwrap();
        assert!(v.passed());
        assert!(v.entropy_power.contains(&Rational::from(2)));
        assert!(v.root_product.contains(&Rational::from(2)));
        let v = entropy_power_identity(&r("2/5")).unwrap();
        assert_eq!(v.first.coeff, BigInt::from(4));
        assert_eq!(v.first.constant, BigInt::from(25));
        assert!(v.passed());
        assert!(entropy_power_identity(&r("1")).is_err());
    }

    #[test]
    fn root_bracket_is_tight() {
        let poly = BinomialPolynomial {
            coeff: BigInt::one(),
            degree: 2,
            constant: BigInt::from(2),
        };
        let b = poly.root_bracket(20);
        assert_eq!(b.width(), Rational::pow2(-20));
        let two = Rational::from(2);
        assert!(b.lo().pow(2) <= two && b.hi().pow(2) >= two);
    }

    #[test]
    fn refutation_counts() {
        let rep = rationality_refutation(&r("1/3"), 50).unwrap();
        assert!(rep.counterexamples.is_empty());
        assert_eq!(rep.refuted, 773);
        assert!(refutation_check(&r("1/3"), 9, 10).unwrap());
        assert!(matches!(
            rationality_refutation(&r("1/2"), 10),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn prime_sets() {
        let six = prime_factors(&BigInt::from(6));
        assert_eq!(six, vec![BigInt::from(2), BigInt::from(3)]);
        assert_eq!(prime_factors(&BigInt::from(216)), six);
        assert!(prime_factors(&BigInt::one()).is_empty());
        assert_eq!(prime_factors(&BigInt::from(97)), vec![BigInt::from(97)]);
    }
}
