use num_bigint::BigInt;
use serde::Serialize;

use super::tm::{HaltStatus, TuringMachine};
use crate::channel::{tv_distance, Channel, Gadget};
use crate::exactnum::Rational;
use crate::{Error, Result};

/// Exponent `e` with `q(l, n) = 2^e`: `s + 2` if the machine halts on `l`
/// after `s <= n` steps, otherwise `n + 2`.
pub fn q_exponent(tm: &TuringMachine, l: u64, n: u64) -> u64 {
    let run = tm.run_bounded(l, n);
    run.steps + 2
}

/// `q(l, n)` as an integer. Non-decreasing in `n` and constant from the
/// halting time on.
pub fn q(tm: &TuringMachine, l: u64, n: u64) -> BigInt {
    BigInt::from(1u8) << q_exponent(tm, l, n)
}

/// Split `k >= 1` into `(l, odd)` with `k = 2l - 1` or `k = 2l`.
pub fn split_index(k: u64) -> Result<(u64, bool)> {
    if k == 0 {
        return Err(Error::Domain("channel index k starts at 1".into()));
    }
    Ok((k.div_ceil(2), k % 2 == 1))
}

fn gadget_for(odd: bool, mu: Rational) -> Gadget {
    if odd {
        Gadget::W1(mu)
    } else {
        Gadget::W2(mu)
    }
}

/// `W_{k,n}`: `W1(1/q(l,n))` for `k = 2l - 1`, `W2(1/q(l,n))` for `k = 2l`.
pub fn wkn(tm: &TuringMachine, k: u64, n: u64) -> Result<Channel> {
    let (l, odd) = split_index(k)?;
    let mu = Rational::pow2(-(q_exponent(tm, l, n) as i64));
    gadget_for(odd, mu).channel()
}

fn halted_limit(odd: bool, s: u64) -> Result<Channel> {
    gadget_for(odd, Rational::pow2(-(s as i64 + 2))).channel()
}

/// Best available guess at `W_k^*` after `budget` steps on input `l`.
///
/// Returns the exact limit and `true` when the machine halts within the
/// budget. Otherwise returns `W*` and `false`: the guess is right exactly
/// when the machine never halts, which no finite budget can confirm.
pub fn limit_channel(tm: &TuringMachine, k: u64, budget: u64) -> Result<(Channel, bool)> {
    let (l, odd) = split_index(k)?;
    let run = tm.run_bounded(l, budget);
    if run.halted {
        Ok((halted_limit(odd, run.steps)?, true))
    } else {
        Ok((Gadget::WStar.channel()?, false))
    }
}

/// `W_k^*` for a machine whose status on `l` is settled within `budget`
/// steps, either by halting or by a repeated configuration.
pub fn resolved_limit_channel(tm: &TuringMachine, k: u64, budget: u64) -> Result<Channel> {
    let (l, odd) = split_index(k)?;
    match tm.resolve(l, budget) {
        HaltStatus::Halts { steps } => halted_limit(odd, steps),
        HaltStatus::Loops { .. } => Gadget::WStar.channel(),
        HaltStatus::Unknown => Err(Error::Unresolved { input: l, budget }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergenceRow {
    pub n: u64,
    /// `D(W_k^*, W_{k,n})`.
    pub distance: Rational,
    /// The value predicted by the case analysis.
    pub expected: Rational,
    /// `2^-n`.
    pub bound: Rational,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergenceReport {
    pub k: u64,
    pub l: u64,
    pub status: HaltStatus,
    pub rows: Vec<ConvergenceRow>,
    pub all_passed: bool,
}

/// Checks `D(W_k^*, W_{k,n}) < 2^-n` for `n = 0..=n_max` and that each
/// distance equals `2^-(n+1)` for a looping machine. For one halting after
/// `s` steps it must equal `2 |2^-(n+2) - 2^-(s+2)|` when `n < s` and vanish
/// when `n >= s`.
///
/// The machine's status on `l` must be settled within `resolve_budget`.
pub fn effective_convergence_check(
    tm: &TuringMachine,
    k: u64,
    n_max: u64,
    resolve_budget: u64,
) -> Result<ConvergenceReport> {
    let (l, _) = split_index(k)?;
    let status = tm.resolve(l, resolve_budget);
    let limit = resolved_limit_channel(tm, k, resolve_budget)?;
    let two = Rational::from(2);
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let distance = tv_distance(&limit, &wkn(tm, k, n)?)?;
        let at_n = Rational::pow2(-(n as i64 + 2));
        let expected = match status {
            HaltStatus::Halts { steps } if n >= steps => Rational::zero(),
            HaltStatus::Halts { steps } => &two * &(at_n - Rational::pow2(-(steps as i64 + 2))),
            _ => &two * &at_n,
        };
        let bound = Rational::pow2(-(n as i64));
        let passed = distance == expected && distance < bound;
        rows.push(ConvergenceRow {
            n,
            distance,
            expected,
            bound,
            passed,
        });
    }
    let all_passed = rows.iter().all(|r| r.passed);
    Ok(ConvergenceReport {
        k,
        l,
        status,
        rows,
        all_passed,
    })
}
