//! Certified numerics for discrete memoryless channels.
//!
//! The crate computes channel capacity with rigorous two-sided bounds using
//! Blahut-Arimoto iterations whose every inexact quantity is carried in an
//! outward-rounded [`Enclosure`]. Alongside the capacity solver it provides:
//!
//! * exact rational channels and distributions, entropic functionals with
//!   certified enclosures, and the three-input gadget channels whose optimal
//!   inputs jump discontinuously as the channel converges ([`channel`]);
//! * a brute-force simplex-grid oracle for small alphabets ([`oracle`]);
//! * a bounded Turing-machine interpreter and the constructive witnesses of
//!   the reduction from the halting problem to optimizer computation
//!   ([`reduction`]);
//! * the effective approximation of `e^(-x)` and exact algebraic identity
//!   checks for `2^(h2(p))` ([`appendix`]).
//!
//! No floating point is used on any certified path.

pub mod appendix;
pub mod capacity;
pub mod channel;
mod error;
pub mod exactnum;
pub mod oracle;
pub mod reduction;

pub use capacity::{ba_step, capacity_certified, optimizer_heuristic, CapacityCertificate};
pub use channel::{Channel, Distribution, Gadget};
pub use error::{Error, Result};
pub use exactnum::{compare_below, BelowVerdict, Enclosure, Rational, RealRep};
