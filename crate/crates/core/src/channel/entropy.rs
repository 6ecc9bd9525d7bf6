use super::{Channel, Distribution};
use crate::exactnum::{log2_rational, Enclosure, Rational};
use crate::{Error, Result};

/// Certified `h2(p)` with width below `2^-precision`. Exact `[0, 0]` at the
/// endpoints.
pub fn binary_entropy(p: &Rational, precision: u32) -> Result<Enclosure> {
    let one = Rational::one();
    if p.is_negative() || p > &one {
        return Err(Error::Domain(format!(
            "binary entropy needs 0 <= p <= 1, got {p}"
        )));
    }
    if p.is_zero() || p == &one {
        return Ok(Enclosure::zero());
    }
    let q = &one - p;
    // -p log p - q log q, each log of width <= 2^-(precision+3)
    let a = log2_rational(p, precision + 2)?.scale(p);
    let b = log2_rational(&q, precision + 2)?.scale(&q);
    Ok((-&(a + b)).round_outward(precision + 3))
}

/// Output law `q(y) = sum_x p(x) W(y|x)`, exact.
pub fn output_distribution(p: &Distribution, w: &Channel) -> Result<Vec<Rational>> {
    w.check_input_len(p)?;
    let mut q = vec![Rational::zero(); w.outputs()];
    for (px, row) in p.probs().iter().zip(w.rows()) {
        if px.is_zero() {
            continue;
        }
        for (qy, wy) in q.iter_mut().zip(row) {
            *qy = &*qy + &(px * wy);
        }
    }
    Ok(q)
}

/// Sum of `weight(y) * log2(W(y|x) / q(y))` over the support of row `x`.
/// Total weight is at most 1, so the width stays below `2^-(precision+1)`.
fn row_sum(
    row: &[Rational],
    q: &[Rational],
    weight: &Rational,
    precision: u32,
) -> Result<Enclosure> {
    let mut acc = Enclosure::zero();
    for (wy, qy) in row.iter().zip(q) {
        if wy.is_zero() {
            continue;
        }
        if qy.is_zero() {
            return Err(Error::Domain(
                "divergence is infinite: output law vanishes on the support of a row".into(),
            ));
        }
        let ratio = wy.checked_div(qy)?;
        acc = acc + log2_rational(&ratio, precision)?.scale(&(weight * wy));
    }
    Ok(acc)
}

/// Certified `D(W(.|x) || q)` for every input `x`, each of width at most
/// `2^-(precision+1)`.
///
/// Errors when some row charges an output that `q` gives zero mass.
pub fn kl_divergence_rows(w: &Channel, q: &[Rational], precision: u32) -> Result<Vec<Enclosure>> {
    if q.len() != w.outputs() {
        return Err(Error::Dimension(format!(
            "output law of length {}, channel has {} outputs",
            q.len(),
            w.outputs()
        )));
    }
    let one = Rational::one();
    w.rows()
        .iter()
        .map(|row| row_sum(row, q, &one, precision))
        .collect()
}

/// Certified `I(p, W)` with width below `2^-precision`.
///
/// Terms with `p(x) = 0` or `W(y|x) = 0` are dropped before any logarithm.
pub fn mutual_information(p: &Distribution, w: &Channel, precision: u32) -> Result<Enclosure> {
    let q = output_distribution(p, w)?;
    let mut acc = Enclosure::zero();
    for (px, row) in p.probs().iter().zip(w.rows()) {
        if px.is_zero() {
            continue;
        }
        acc = acc + row_sum(row, &q, px, precision + 1)?;
    }
    Ok(acc.round_outward(precision + 3))
}
