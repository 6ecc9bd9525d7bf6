use std::fmt;
use std::sync::Arc;

use super::{Enclosure, Rational};

type Approximant = dyn Fn(u64) -> Rational + Send + Sync;
type Modulus = dyn Fn(u32) -> u64 + Send + Sync;

/// A computable real given by a rational sequence together with a modulus of
/// effective convergence.
///
/// The contract, which the constructor cannot check, is that for every
/// precision `m` and every index `n >= modulus(m)` the represented real `x`
/// satisfies `|x - approximant(n)| < 2^-m`, and that `modulus` is
/// non-decreasing.
#[derive(Clone)]
pub struct RealRep {
    approximant: Arc<Approximant>,
    modulus: Arc<Modulus>,
}

impl RealRep {
    pub fn new(
        approximant: impl Fn(u64) -> Rational + Send + Sync + 'static,
        modulus: impl Fn(u32) -> u64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            approximant: Arc::new(approximant),
            modulus: Arc::new(modulus),
        }
    }

    /// The constant sequence `x, x, x, ...` with modulus `0`.
    pub fn constant(x: Rational) -> Self {
        Self::new(move |_| x.clone(), |_| 0)
    }

    pub fn approximant(&self, n: u64) -> Rational {
        (self.approximant)(n)
    }

    pub fn modulus(&self, m: u32) -> u64 {
        (self.modulus)(m)
    }

    /// A rational within `2^-m` of the represented real.
    pub fn query(&self, m: u32) -> Rational {
        self.approximant(self.modulus(m))
    }

    /// Closed enclosure `[r - 2^-m, r + 2^-m]` around `r = query(m)`.
    pub fn enclosure(&self, m: u32) -> Enclosure {
        let r = self.query(m);
        Enclosure::point(r).inflate(&Rational::pow2(-(m as i64)))
    }

    /// Spot check that the modulus is non-decreasing on `0..=up_to`.
    pub fn modulus_is_monotone(&self, up_to: u32) -> bool {
        (0..up_to).all(|m| self.modulus(m) <= self.modulus(m + 1))
    }
}

impl fmt::Debug for RealRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealRep")
            .field("query(0)", &self.query(0))
            .finish_non_exhaustive()
    }
}

pub fn realrep_query(r: &RealRep, m: u32) -> Rational {
    r.query(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_rep() {
        let half = RealRep::constant(Rational::frac(1, 2));
        assert_eq!(realrep_query(&half, 10), Rational::frac(1, 2));
        assert_eq!(half.query(3), half.query(3));
    }

    #[test]
    fn query_is_forced_by_modulus() {
        let rep = RealRep::new(
            |n| Rational::one() - Rational::pow2(-(n as i64)),
            |m| m as u64,
        );
        assert_eq!(rep.query(8), Rational::one() - Rational::pow2(-8));
        assert!(rep.modulus_is_monotone(40));
    }

    #[test]
    fn enclosure_has_width_twice_the_tolerance() {
        let rep = RealRep::constant(Rational::frac(1, 3));
        let e = rep.enclosure(5);
        assert_eq!(e.width(), Rational::pow2(-4));
        assert!(e.contains(&Rational::frac(1, 3)));
    }
}
