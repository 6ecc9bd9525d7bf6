//! Blahut-Arimoto iteration with certified two-sided capacity bounds.
//!
//! For an iterate `p` with output law `q = pW`, write `D_x = D(W(.|x) || q)`.
//! Then `I(p, W) = sum_x p(x) D_x <= C(W) <= max_x D_x`, so every iterate
//! brackets the capacity. The bracket closes as the iteration converges,
//! which gives a stopping rule for the capacity value. No analogous rule
//! exists for the iterate itself, and [`optimizer_heuristic`] is labelled
//! accordingly.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::channel::{kl_divergence_rows, output_distribution, Channel, Distribution};
use crate::exactnum::{enc_exp2, Enclosure, Rational};
use crate::{Error, Result};

/// Bits of headroom between a requested capacity precision and the
/// precision of the divergences evaluated per step.
const STEP_GUARD: u32 = 12;

/// Extra bits used for the exponential re-weighting and the rounding grid
/// of an iterate.
const WEIGHT_GUARD: u32 = 8;

/// Certified capacity bracket together with the final iterate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityCertificate {
    pub lower: Rational,
    pub upper: Rational,
    pub iterations: u64,
    #[serde(rename = "target_M")]
    pub target_m: u32,
    pub converged: bool,
    /// Final iterate. Not a certified approximation of any optimizer.
    pub iterate: Distribution,
}

impl CapacityCertificate {
    pub fn gap(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn bracket(&self) -> Enclosure {
        Enclosure::new(self.lower.clone(), self.upper.clone()).expect("lower <= upper")
    }
}

/// Bounds attached to one iterate.
#[derive(Debug, Clone)]
pub struct IterateBounds {
    /// Sound enclosure of `I(p, W)`.
    pub information: Enclosure,
    /// Upper end of the enclosure of `max_x D_x`.
    pub upper: Rational,
    divergences: Vec<Enclosure>,
}

impl IterateBounds {
    pub fn lower(&self) -> &Rational {
        self.information.lo()
    }

    pub fn gap(&self) -> Rational {
        &self.upper - self.information.lo()
    }
}

/// Evaluates the duality bracket of a strictly positive iterate with
/// divergences of width at most `2^-(precision+1)`.
pub fn iterate_bounds(p: &Distribution, w: &Channel, precision: u32) -> Result<IterateBounds> {
    let q = output_distribution(p, w)?;
    let divergences = kl_divergence_rows(w, &q, precision)?;
    let mut information = Enclosure::zero();
    for (px, d) in p.probs().iter().zip(&divergences) {
        information = information + d.scale(px);
    }
    let upper = divergences
        .iter()
        .map(|d| d.hi().clone())
        .max()
        .expect("at least one input");
    // I(p, W) <= max_x D_x holds exactly; keep the reported pair ordered
    let upper = upper.max(information.hi().clone());
    Ok(IterateBounds {
        information,
        upper,
        divergences,
    })
}

fn require_positive(p: &Distribution) -> Result<()> {
    if let Some(x) = p.probs().iter().position(|v| !v.is_positive()) {
        return Err(Error::Precondition(format!(
            "iterate gives zero mass to input {x}; the update can never revive it"
        )));
    }
    Ok(())
}

fn reweight(p: &Distribution, divergences: &[Enclosure], precision: u32) -> Result<Distribution> {
    let top = divergences
        .iter()
        .map(|d| d.hi().clone())
        .max()
        .expect("at least one input");
    let shift = Enclosure::point(top);
    let bits = precision + WEIGHT_GUARD;
    let mids: Vec<Rational> = p
        .probs()
        .iter()
        .zip(divergences)
        .map(|(px, d)| enc_exp2(&(d - &shift), bits).scale(px).midpoint())
        .collect();
    let total: Rational = mids.iter().sum();
    let units: Vec<BigInt> = mids
        .iter()
        .map(|m| {
            let u = m
                .checked_div(&total)
                .expect("positive total")
                .round_scaled(bits);
            // a grid unit of mass keeps every symbol alive
            u.max(BigInt::one())
        })
        .collect();
    let sum: BigInt = units.iter().sum();
    let probs = units
        .into_iter()
        .map(|u| Rational::new(u, sum.clone()))
        .collect::<Result<Vec<_>>>()?;
    Distribution::new(probs)
}

/// One Blahut-Arimoto update `p'(x) ∝ p(x) 2^(D_x)`.
///
/// Divergences are enclosed at `precision`, re-weighted with exponentials
/// at `precision + 8` bits, and the midpoints rounded to the grid
/// `2^-(precision+8)` before exact renormalisation. Every coordinate stays
/// at least one grid unit, so iterates remain strictly positive.
pub fn ba_step(p: &Distribution, w: &Channel, precision: u32) -> Result<Distribution> {
    w.check_input_len(p)?;
    require_positive(p)?;
    let q = output_distribution(p, w)?;
    let divergences = kl_divergence_rows(w, &q, precision)?;
    reweight(p, &divergences, precision)
}

/// Blahut-Arimoto iterates from the uniform start, each with its bracket.
pub struct BlahutArimoto<'a> {
    channel: &'a Channel,
    precision: u32,
    current: Distribution,
    bounds: IterateBounds,
    iterations: u64,
}

impl<'a> BlahutArimoto<'a> {
    pub fn new(channel: &'a Channel, precision: u32) -> Result<Self> {
        Self::from_start(channel, Distribution::uniform(channel.inputs())?, precision)
    }

    pub fn from_start(channel: &'a Channel, start: Distribution, precision: u32) -> Result<Self> {
        channel.check_input_len(&start)?;
        require_positive(&start)?;
        let bounds = iterate_bounds(&start, channel, precision)?;
        Ok(Self {
            channel,
            precision,
            current: start,
            bounds,
            iterations: 0,
        })
    }

    pub fn iterate(&self) -> &Distribution {
        &self.current
    }

    pub fn bounds(&self) -> &IterateBounds {
        &self.bounds
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// Advance one step and return the movement `||p' - p||_1`.
    pub fn advance(&mut self) -> Result<Rational> {
        let next = reweight(&self.current, &self.bounds.divergences, self.precision)?;
        let moved = next.l1_distance(&self.current)?;
        self.bounds = iterate_bounds(&next, self.channel, self.precision)?;
        self.current = next;
        self.iterations += 1;
        Ok(moved)
    }
}

impl Iterator for BlahutArimoto<'_> {
    type Item = (Distribution, IterateBounds);

    fn next(&mut self) -> Option<Self::Item> {
        self.advance().ok()?;
        Some((self.current.clone(), self.bounds.clone()))
    }
}

/// Runs Blahut-Arimoto until the duality gap drops below `2^-target_m` or
/// `max_iter` updates have been made.
///
/// The bracket is sound either way; `converged` records whether the width
/// target was met.
pub fn capacity_certified(
    w: &Channel,
    target_m: u32,
    max_iter: u64,
) -> Result<CapacityCertificate> {
    if target_m == 0 {
        return Err(Error::Precondition(
            "target precision must be at least 1".into(),
        ));
    }
    let tolerance = Rational::pow2(-(target_m as i64));
    let mut ba = BlahutArimoto::new(w, target_m + STEP_GUARD)?;
    loop {
        let converged = ba.bounds().gap() < tolerance;
        if converged || ba.iterations() >= max_iter {
            let b = ba.bounds();
            return Ok(CapacityCertificate {
                lower: b.lower().clone(),
                upper: b.upper.clone(),
                iterations: ba.iterations(),
                target_m,
                converged,
                iterate: ba.iterate().clone(),
            });
        }
        ba.advance()?;
    }
}

/// Observable quantities after a fixed iteration budget. There is
/// deliberately no field bounding the distance to an optimal input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicDiagnostics {
    /// Always `true`.
    pub uncertified: bool,
    pub iterations: u64,
    /// Duality gap of the returned iterate.
    pub capacity_gap: Rational,
    /// `||p_n - p_(n-1)||_1`, zero when no step was taken.
    pub last_step_l1: Rational,
}

/// Runs exactly `iterations` Blahut-Arimoto updates and returns the iterate.
///
/// The output is a heuristic: small movement and a small capacity gap do not
/// imply closeness to an optimal input distribution.
pub fn optimizer_heuristic(
    w: &Channel,
    iterations: u64,
    precision: u32,
) -> Result<(Distribution, HeuristicDiagnostics)> {
    let mut ba = BlahutArimoto::new(w, precision)?;
    let mut last = Rational::zero();
    for _ in 0..iterations {
        last = ba.advance()?;
    }
    let diagnostics = HeuristicDiagnostics {
        uncertified: true,
        iterations,
        capacity_gap: ba.bounds().gap(),
        last_step_l1: last,
    };
    Ok((ba.iterate().clone(), diagnostics))
}
