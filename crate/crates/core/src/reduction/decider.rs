//! Step-interleaved machines that would decide halting if an exact optimizer
//! existed.
//!
//! Machine 1 simulates the fixture on `l`. Machine 2 evaluates the supplied
//! optimizer `F` on `W*`, `W_{2l-1}^*` and `W_{2l}^*` and semi-decides
//! `r < threshold` for the resulting l1 gap `r`, one refinement per round.
//! For `l` in the halting set `r >= 1/2`; otherwise `r = 0`.
//!
//! Machine 2 needs the limit channels exactly. On fixtures they are obtained
//! from a bounded run with repeat detection, which stands in for the
//! representation a genuine optimizer would consume.

use serde::Serialize;

use super::construction::resolved_limit_channel;
use super::tm::TuringMachine;
use crate::capacity::optimizer_heuristic;
use crate::channel::{Channel, Distribution, Gadget};
use crate::exactnum::{BelowTest, Enclosure, Rational, RealRep};
use crate::{Error, Result};

/// Iterations of the heuristic fallback in [`closed_form_gadget_optimizer`].
const FALLBACK_ITERATIONS: u64 = 500;
const FALLBACK_PRECISION: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    InA,
    NotInA,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeciderReport {
    pub l: u64,
    pub verdict: Verdict,
    pub rounds: u64,
    /// Last enclosure of `r` inspected by machine 2, if it ran.
    pub r_value: Option<Enclosure>,
}

fn dist(v: [(i64, i64); 3]) -> Distribution {
    Distribution::new(v.iter().map(|&(n, d)| Rational::frac(n, d)).collect())
        .expect("hand-written law")
}

/// Exact optimizer for the gadget channels:
/// `W* -> (1/2, 1/4, 1/4)`, `W1(mu) -> (1/2, 1/2, 0)` and
/// `W2(mu) -> (1/2, 0, 1/2)` for `mu > 0`. `WHat` coincides with `W1(1)`.
/// Any other channel falls back to the uncertified iteration.
pub fn closed_form_gadget_optimizer(w: &Channel) -> Distribution {
    if w.inputs() == 3 && w.outputs() == 2 {
        let mu3 = w.get(2, 0).clone();
        let mu2 = w.get(1, 0).clone();
        if mu2.is_zero()
            && *w
                == Gadget::W1(mu3.clone())
                    .channel()
                    .expect("row is stochastic")
        {
            return if mu3.is_zero() {
                dist([(1, 2), (1, 4), (1, 4)])
            } else {
                dist([(1, 2), (1, 2), (0, 1)])
            };
        }
        if !mu2.is_zero()
            && *w
                == Gadget::W2(mu2.clone())
                    .channel()
                    .expect("row is stochastic")
        {
            return dist([(1, 2), (0, 1), (1, 2)]);
        }
    }
    optimizer_heuristic(w, FALLBACK_ITERATIONS, FALLBACK_PRECISION)
        .map(|(p, _)| p)
        .unwrap_or_else(|_| Distribution::uniform(w.inputs()).expect("non-empty alphabet"))
}

/// `max(||F(a) - F(ref)||_1, ||F(b) - F(ref)||_1)`.
fn gap_value(
    optimizer: &dyn Fn(&Channel) -> Distribution,
    tm: &TuringMachine,
    l: u64,
    budget: u64,
) -> Result<Rational> {
    let reference = optimizer(&Gadget::WStar.channel()?);
    let odd = optimizer(&resolved_limit_channel(tm, 2 * l - 1, budget)?);
    let even = optimizer(&resolved_limit_channel(tm, 2 * l, budget)?);
    Ok(odd
        .l1_distance(&reference)?
        .max(even.l1_distance(&reference)?))
}

fn interleave(
    tm: &TuringMachine,
    l: u64,
    r: Option<Rational>,
    threshold: Rational,
    budget: u64,
) -> DeciderReport {
    let mut machine1 = tm.start(l);
    let rep = r.map(RealRep::constant);
    let mut machine2 = rep.as_ref().map(|x| BelowTest::new(x, threshold));
    let report = |verdict, rounds, m2: &Option<BelowTest<'_, RealRep>>| DeciderReport {
        l,
        verdict,
        rounds,
        r_value: m2.as_ref().and_then(|t| t.last_enclosure().cloned()),
    };
    if machine1.halted() {
        return report(Verdict::InA, 0, &machine2);
    }
    for round in 1..=budget {
        if machine1.step() {
            return report(Verdict::InA, round, &machine2);
        }
        if let Some(t) = machine2.as_mut() {
            if t.step() {
                return report(Verdict::NotInA, round, &machine2);
            }
        }
    }
    report(Verdict::BudgetExhausted, budget, &machine2)
}

fn check_l(l: u64) -> Result<()> {
    if l == 0 {
        return Err(Error::Domain(
            "the reduction indexes inputs from l = 1".into(),
        ));
    }
    Ok(())
}

/// Runs both machines for at most `step_budget` rounds. Machine 1 wins ties.
///
/// When the fixture's status is not settled within `step_budget` steps,
/// machine 2 has no channel to query and stays idle.
pub fn halting_decider_via_optimizer(
    tm: &TuringMachine,
    l: u64,
    optimizer: &dyn Fn(&Channel) -> Distribution,
    step_budget: u64,
) -> Result<DeciderReport> {
    check_l(l)?;
    let r = match gap_value(optimizer, tm, l, step_budget) {
        Ok(r) => Some(r),
        Err(Error::Unresolved { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(interleave(tm, l, r, Rational::frac(1, 4), step_budget))
}

/// `(1 - 2 alpha) / 2`, the separation an `alpha`-accurate optimizer must
/// exhibit on halting inputs.
pub fn hardness_threshold(alpha: &Rational) -> Result<Rational> {
    if alpha.is_negative() || alpha >= &Rational::frac(1, 2) {
        return Err(Error::Precondition(format!(
            "accuracy alpha must satisfy 0 <= alpha < 1/2, got {alpha}"
        )));
    }
    Ok((Rational::one() - &(Rational::from(2) * alpha)) * Rational::frac(1, 2))
}

/// The decider driven by an approximate optimizer, claimed accurate to
/// `alpha` in l1, with threshold [`hardness_threshold`].
pub fn approx_hardness_demo(
    tm: &TuringMachine,
    l: u64,
    approx: &dyn Fn(&Channel) -> Distribution,
    alpha: &Rational,
    budget: u64,
) -> Result<DeciderReport> {
    let threshold = hardness_threshold(alpha)?;
    if budget == 0 {
        return Err(Error::Precondition("budget must be at least 1".into()));
    }
    check_l(l)?;
    let r = match gap_value(approx, tm, l, budget) {
        Ok(r) => Some(r),
        Err(Error::Unresolved { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(interleave(tm, l, r, threshold, budget))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn machine(src: &str) -> TuringMachine {
        src.parse().unwrap()
    }

    fn spin() -> TuringMachine {
        machine("start: a\nhalt: h\na 1 -> a 1 R\na _ -> a _ L\n")
    }

    fn counter() -> TuringMachine {
        machine("start: a\nhalt: h\na 1 -> a 1 R\na _ -> h _ R\n")
    }

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn closed_form_values() {
        let f = closed_form_gadget_optimizer;
        assert_eq!(
            f(&Gadget::WStar.channel().unwrap()),
            dist([(1, 2), (1, 4), (1, 4)])
        );
        assert_eq!(
            f(&Gadget::W1(r("1/8")).channel().unwrap()),
            dist([(1, 2), (1, 2), (0, 1)])
        );
        assert_eq!(
            f(&Gadget::W2(r("1/8")).channel().unwrap()),
            dist([(1, 2), (0, 1), (1, 2)])
        );
        assert_eq!(
            f(&Gadget::WHat.channel().unwrap()),
            dist([(1, 2), (1, 2), (0, 1)])
        );
        let bsc = Channel::bsc(&r("1/4")).unwrap();
        assert_eq!(f(&bsc), Distribution::uniform(2).unwrap());
    }

    #[test]
    fn halting_fixture_is_in_a() {
        let rep = halting_decider_via_optimizer(&counter(), 3, &closed_form_gadget_optimizer, 1000)
            .unwrap();
        assert_eq!(rep.verdict, Verdict::InA);
        assert_eq!(rep.rounds, 4);
        assert!(rep.r_value.unwrap().contains(&r("1/2")));
    }

    #[test]
    fn looping_fixture_is_not_in_a() {
        let rep =
            halting_decider_via_optimizer(&spin(), 3, &closed_form_gadget_optimizer, 1000).unwrap();
        assert_eq!(rep.verdict, Verdict::NotInA);
        assert_eq!(rep.rounds, 4);
        assert!(rep.r_value.unwrap().contains(&Rational::zero()));
    }

    #[test]
    fn stub_optimizer_depends_on_reference_value() {
        let stub = |_: &Channel| dist([(1, 2), (1, 2), (0, 1)]);
        let rep = halting_decider_via_optimizer(&spin(), 2, &stub, 1000).unwrap();
        assert_eq!(rep.verdict, Verdict::NotInA);
        let rep = halting_decider_via_optimizer(&counter(), 40, &stub, 1000).unwrap();
        assert_eq!(
            rep.verdict,
            Verdict::NotInA,
            "a constant optimizer misleads machine 2"
        );
    }

    #[test]
    fn idle_second_machine_exhausts_budget() {
        let writer = machine("start: a\nhalt: h\na 1 -> a 1 R\na _ -> a 1 R\n");
        let rep =
            halting_decider_via_optimizer(&writer, 1, &closed_form_gadget_optimizer, 50).unwrap();
        assert_eq!(rep.verdict, Verdict::BudgetExhausted);
        assert_eq!(rep.rounds, 50);
        assert!(rep.r_value.is_none());
    }

    #[test]
    fn hardness_threshold_values() {
        assert_eq!(hardness_threshold(&r("1/4")).unwrap(), r("1/4"));
        assert_eq!(hardness_threshold(&r("0")).unwrap(), r("1/2"));
        assert!(hardness_threshold(&r("1/2")).is_err());
        assert!(hardness_threshold(&r("-1/8")).is_err());
    }

    #[test]
    fn hardness_demo() {
        let exact = closed_form_gadget_optimizer;
        let rep = approx_hardness_demo(&counter(), 3, &exact, &r("0"), 1000).unwrap();
        assert_eq!(rep.verdict, Verdict::InA);
        assert!(rep.r_value.unwrap().contains(&r("1/2")));
        let rep = approx_hardness_demo(&spin(), 3, &exact, &r("1/4"), 1000).unwrap();
        assert_eq!(rep.verdict, Verdict::NotInA);
    }

    #[test]
    fn report_json_shape() {
        let rep =
            halting_decider_via_optimizer(&spin(), 1, &closed_form_gadget_optimizer, 100).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.starts_with(r#"{"l":1,"verdict":"NotInA","rounds":4,"r_value":{"lo":"#));
    }
}
