//! Exact rationals, outward-rounded enclosures and computable reals.

mod compare;
mod enclosure;
mod fixed;
mod rational;
mod realrep;

pub use compare::{compare_below, BelowTest, BelowVerdict, Refine};
pub use enclosure::{enc_exp2, enc_log2, log2_rational, Enclosure};
pub use rational::{rat_arith, RatOp, Rational};
pub use realrep::{realrep_query, RealRep};
