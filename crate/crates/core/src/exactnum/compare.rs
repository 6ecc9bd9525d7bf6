use serde::Serialize;

use super::{Enclosure, Rational, RealRep};

/// Anything that can produce a sound enclosure of its value at a requested
/// precision.
pub trait Refine {
    fn enclosure_at(&self, precision: u32) -> Enclosure;
}

impl Refine for Enclosure {
    fn enclosure_at(&self, _precision: u32) -> Enclosure {
        self.clone()
    }
}

impl Refine for RealRep {
    fn enclosure_at(&self, precision: u32) -> Enclosure {
        self.enclosure(precision)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BelowVerdict {
    ConfirmedBelow,
    Undecided,
}

/// Semi-decision procedure for `x < threshold`, advanced one refinement at a
/// time. Step `i` inspects the enclosure at precision `i`.
///
/// It can only ever confirm; a value at or above the threshold keeps it
/// running forever.
pub struct BelowTest<'a, T: Refine + ?Sized> {
    value: &'a T,
    threshold: Rational,
    steps: u32,
    last: Option<Enclosure>,
}

impl<'a, T: Refine + ?Sized> BelowTest<'a, T> {
    pub fn new(value: &'a T, threshold: Rational) -> Self {
        Self {
            value,
            threshold,
            steps: 0,
            last: None,
        }
    }

    /// One refinement. Returns `true` once `x < threshold` is certain.
    pub fn step(&mut self) -> bool {
        let enc = self.value.enclosure_at(self.steps);
        self.steps += 1;
        let confirmed = enc.hi() < &self.threshold;
        self.last = Some(enc);
        confirmed
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    /// Enclosure seen by the most recent step.
    pub fn last_enclosure(&self) -> Option<&Enclosure> {
        self.last.as_ref()
    }
}

/// Refines `x` at precisions `0, 1, ..., budget` and reports whether
/// `x < threshold` was established. Never confirms a value `>= threshold`.
pub fn compare_below<T: Refine + ?Sized>(x: &T, threshold: &Rational, budget: u32) -> BelowVerdict {
    let mut test = BelowTest::new(x, threshold.clone());
    for _ in 0..=budget {
        if test.step() {
            return BelowVerdict::ConfirmedBelow;
        }
    }
    BelowVerdict::Undecided
}
