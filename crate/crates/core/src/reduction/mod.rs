//! Bounded Turing machines and the channel sequences built from them.
//!
//! The halting set cannot be instantiated, so everything here runs on
//! fixture machines with known behaviour. The demonstrators exhibit the
//! mechanics of the reduction; they do not decide halting.

mod construction;
mod decider;
mod tm;

pub use construction::{
    effective_convergence_check, limit_channel, q, q_exponent, resolved_limit_channel, split_index,
    wkn, ConvergenceReport, ConvergenceRow,
};
pub use decider::{
    approx_hardness_demo, closed_form_gadget_optimizer, halting_decider_via_optimizer,
    hardness_threshold, DeciderReport, Verdict,
};
pub use tm::{Execution, HaltStatus, Move, RunOutcome, TuringMachine, INPUT_SYMBOL};
