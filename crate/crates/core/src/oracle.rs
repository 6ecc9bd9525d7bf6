//! Exhaustive simplex-grid search for small alphabets.
//!
//! Independent of the Blahut-Arimoto solver: mutual information is enclosed
//! at every point `p` with entries in `{0, 1/d, ..., 1}` and the maxima are
//! reported as sets, never as a single selected point.

use serde::{Deserialize, Serialize};

use crate::channel::{
    binary_entropy, mutual_information, tv_distance, Channel, Distribution, Gadget,
};
use crate::exactnum::{log2_rational, Enclosure, Rational};
use crate::{Error, Result};

/// Precision used when the slack bound is evaluated.
const SLACK_PRECISION: u32 = 30;

/// Evaluation precision for the instability table.
const INSTABILITY_PRECISION: u32 = 30;

#[derive(Debug, Clone)]
pub struct GridOptions {
    pub max_inputs: usize,
    pub max_denominator: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            max_inputs: 4,
            max_denominator: 128,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridResult {
    /// `[max lo, max hi]` over the grid.
    pub best_value: Enclosure,
    /// Every grid point whose enclosure reaches `best_value.lo`, in
    /// lexicographic order.
    pub best_points: Vec<Distribution>,
    /// Grid spacing `1/d`.
    pub resolution: Rational,
    /// `C(W) <= best_value.hi + lipschitz_slack`.
    pub lipschitz_slack: Rational,
    pub points_evaluated: usize,
}

impl GridResult {
    /// `[best_value.lo, best_value.hi + slack]`, which contains `C(W)`.
    pub fn capacity_bracket(&self) -> Enclosure {
        Enclosure::new(
            self.best_value.lo().clone(),
            self.best_value.hi() + &self.lipschitz_slack,
        )
        .expect("slack is non-negative")
    }
}

/// All compositions of `d` into `parts` non-negative parts, lexicographic.
fn compositions(d: u64, parts: usize) -> Vec<Vec<u64>> {
    fn rec(left: u64, parts: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(left - k, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Every distribution on `n` symbols with entries in multiples of `1/d`.
pub fn simplex_grid(n: usize, d: u64) -> Vec<Distribution> {
    compositions(d, n)
        .into_iter()
        .map(|c| {
            let probs = c
                .into_iter()
                .map(|k| Rational::frac(k as i64, d as i64))
                .collect();
            Distribution::new(probs).expect("compositions sum to d")
        })
        .collect()
}

/// Upper bound on `|I(p,W) - I(p',W)|` over all channels with the given
/// alphabets and all `p` within reach of the nearest point of the grid `1/d`.
///
/// The nearest grid point lies within `l1 <= |X|/d`. With `T` half that
/// distance, the input-weighted row entropies move by at most `T log|Y|`,
/// and the output entropy by at most `T log(|Y|-1) + h2(min(T, 1/2))`,
/// capped at `log|Y|`.
pub fn lipschitz_slack(inputs: usize, outputs: usize, d: u64) -> Result<Rational> {
    if inputs == 0 || outputs == 0 || d == 0 {
        return Err(Error::Domain(
            "slack needs non-empty alphabets and d >= 1".into(),
        ));
    }
    if outputs == 1 {
        return Ok(Rational::zero());
    }
    let t = Rational::frac(inputs as i64, 2 * d as i64);
    let log_y = log2_rational(&Rational::from(outputs as i64), SLACK_PRECISION)?;
    let log_y_minus = log2_rational(&Rational::from(outputs as i64 - 1), SLACK_PRECISION)?;
    let h = binary_entropy(&t.clone().min(Rational::frac(1, 2)), SLACK_PRECISION)?;
    let output_term = log_y_minus.hi() * &t + h.hi();
    let output_term = output_term.min(log_y.hi().clone());
    Ok(log_y.hi() * &t + output_term)
}

fn check_guards(w: &Channel, d: u64, opts: &GridOptions) -> Result<()> {
    if d < 2 {
        return Err(Error::Precondition(format!(
            "grid denominator must be at least 2, got {d}"
        )));
    }
    if w.inputs() > opts.max_inputs {
        return Err(Error::TooLarge(format!(
            "{} inputs exceed the limit of {}",
            w.inputs(),
            opts.max_inputs
        )));
    }
    if d > opts.max_denominator {
        return Err(Error::TooLarge(format!(
            "denominator {d} exceeds the limit of {}",
            opts.max_denominator
        )));
    }
    Ok(())
}

fn evaluate_grid(
    w: &Channel,
    d: u64,
    precision: u32,
    opts: &GridOptions,
) -> Result<Vec<(Distribution, Enclosure)>> {
    use rayon::prelude::*;
    check_guards(w, d, opts)?;
    let points = simplex_grid(w.inputs(), d);
    let eval = || {
        points
            .into_par_iter()
            .map(|p| {
                let v = mutual_information(&p, w, precision)?;
                Ok((p, v))
            })
            .collect::<Result<Vec<_>>>()
    };
    match opts.threads {
        None => eval(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?
            .install(eval),
    }
}

fn best_of(values: &[(Distribution, Enclosure)]) -> Enclosure {
    let lo = values
        .iter()
        .map(|(_, v)| v.lo())
        .max()
        .expect("grid non-empty");
    let hi = values
        .iter()
        .map(|(_, v)| v.hi())
        .max()
        .expect("grid non-empty");
    Enclosure::new(lo.clone(), hi.clone()).expect("max lo <= max hi")
}

/// Grid maximisation of `I(p, W)` with default guards.
pub fn grid_capacity(w: &Channel, d: u64, precision: u32) -> Result<GridResult> {
    grid_capacity_with(w, d, precision, &GridOptions::default())
}

pub fn grid_capacity_with(
    w: &Channel,
    d: u64,
    precision: u32,
    opts: &GridOptions,
) -> Result<GridResult> {
    let values = evaluate_grid(w, d, precision, opts)?;
    let points_evaluated = values.len();
    let best_value = best_of(&values);
    let best_points = values
        .into_iter()
        .filter(|(_, v)| v.hi() >= best_value.lo())
        .map(|(p, _)| p)
        .collect();
    Ok(GridResult {
        best_value,
        best_points,
        resolution: Rational::frac(1, d as i64),
        lipschitz_slack: lipschitz_slack(w.inputs(), w.outputs(), d)?,
        points_evaluated,
    })
}

/// Grid points whose information may lie within `2^-tol_m` of the grid
/// maximum. The discretisation slack is not added, so the result
/// approximates the optimizer set as seen by the grid.
pub fn optimizer_set_probe(w: &Channel, d: u64, tol_m: u32) -> Result<Vec<Distribution>> {
    optimizer_set_probe_with(w, d, tol_m, &GridOptions::default())
}

pub fn optimizer_set_probe_with(
    w: &Channel,
    d: u64,
    tol_m: u32,
    opts: &GridOptions,
) -> Result<Vec<Distribution>> {
    let values = evaluate_grid(w, d, tol_m + 8, opts)?;
    let best = best_of(&values);
    let cutoff = best.lo() - &Rational::pow2(-(tol_m as i64));
    Ok(values
        .into_iter()
        .filter(|(_, v)| v.hi() >= &cutoff)
        .map(|(p, _)| p)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstabilityRow {
    pub mu: Rational,
    pub tv_distance: Rational,
    /// Smallest l1 distance between a grid argmax of `W1(mu)` and one of
    /// `W2(mu)`.
    pub argmax_l1_distance: Rational,
}

/// For `mu = 2^-t`, `t = 1..=t_max`: the channels `W1(mu)` and `W2(mu)` merge
/// while their grid optimizers stay a unit apart.
pub fn instability_report(t_max: u32, d: u64) -> Result<Vec<InstabilityRow>> {
    instability_report_with(t_max, d, &GridOptions::default())
}

pub fn instability_report_with(
    t_max: u32,
    d: u64,
    opts: &GridOptions,
) -> Result<Vec<InstabilityRow>> {
    if t_max == 0 {
        return Err(Error::Precondition("t_max must be at least 1".into()));
    }
    (1..=t_max)
        .map(|t| {
            let mu = Rational::pow2(-(t as i64));
            let w1 = Gadget::W1(mu.clone()).channel()?;
            let w2 = Gadget::W2(mu.clone()).channel()?;
            let a = grid_capacity_with(&w1, d, INSTABILITY_PRECISION, opts)?;
            let b = grid_capacity_with(&w2, d, INSTABILITY_PRECISION, opts)?;
            let mut closest: Option<Rational> = None;
            for p in &a.best_points {
                for q in &b.best_points {
                    let dist = p.l1_distance(q)?;
                    closest = Some(match closest {
                        Some(c) => c.min(dist),
                        None => dist,
                    });
                }
            }
            Ok(InstabilityRow {
                tv_distance: tv_distance(&w1, &w2)?,
                mu,
                argmax_l1_distance: closest.expect("argmax sets are non-empty"),
            })
        })
        .collect()
}

/// CSV with header `mu,tv_distance,argmax_l1_distance`.
pub fn instability_csv(rows: &[InstabilityRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("ascii output")
}
