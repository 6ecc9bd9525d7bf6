//! Exact discrete memoryless channels and input distributions.
//!
//! A [`Channel`] stores `W(y|x)` at `rows[x][y]`, so every row is a
//! probability vector over outputs. Both types validate exact stochasticity
//! on construction and are immutable afterwards.

mod entropy;
mod gadget;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactnum::Rational;
use crate::{Error, Result};

pub use entropy::{binary_entropy, kl_divergence_rows, mutual_information, output_distribution};
pub use gadget::{embed, mix, project_optimizer, tv_distance, Gadget};

/// Probability vector over input symbols `0..len`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct Distribution {
    probs: Vec<Rational>,
}

impl Distribution {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Dimension(
                "distribution over an empty alphabet".into(),
            ));
        }
        if let Some(i) = probs.iter().position(Rational::is_negative) {
            return Err(Error::NegativeProbability(i));
        }
        let sum: Rational = probs.iter().sum();
        if sum != Rational::one() {
            return Err(Error::DistributionSum(sum));
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension(
                "distribution over an empty alphabet".into(),
            ));
        }
        let each = Rational::frac(1, n as i64);
        Ok(Self {
            probs: vec![each; n],
        })
    }

    /// Point mass on symbol `x`.
    pub fn point_mass(n: usize, x: usize) -> Result<Self> {
        if x >= n {
            return Err(Error::Dimension(format!(
                "symbol {x} outside alphabet of size {n}"
            )));
        }
        let mut probs = vec![Rational::zero(); n];
        probs[x] = Rational::one();
        Ok(Self { probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn get(&self, x: usize) -> &Rational {
        &self.probs[x]
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.probs.iter().all(Rational::is_positive)
    }

    pub fn l1_distance(&self, other: &Distribution) -> Result<Rational> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "distributions of length {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .sum())
    }

    /// One CSV record of canonical fractions.
    pub fn to_csv_row(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        w.write_record(self.probs.iter().map(|p| p.to_string()))
            .expect("writing to memory");
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("ascii output")
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs.iter().map(Rational::to_f64).collect()
    }
}

impl TryFrom<Vec<Rational>> for Distribution {
    type Error = Error;
    fn try_from(probs: Vec<Rational>) -> Result<Self> {
        Distribution::new(probs)
    }
}

impl From<Distribution> for Vec<Rational> {
    fn from(d: Distribution) -> Self {
        d.probs
    }
}

impl fmt::Debug for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.probs).finish()
    }
}

/// Row-stochastic matrix with exact rational entries.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ChannelJson", into = "ChannelJson")]
pub struct Channel {
    rows: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    x: usize,
    y: usize,
    rows: Vec<Vec<Rational>>,
}

impl TryFrom<ChannelJson> for Channel {
    type Error = Error;
    fn try_from(raw: ChannelJson) -> Result<Self> {
        if raw.rows.len() != raw.x {
            return Err(Error::Dimension(format!(
                "declared x = {} but {} rows given",
                raw.x,
                raw.rows.len()
            )));
        }
        if let Some(i) = raw.rows.iter().position(|r| r.len() != raw.y) {
            return Err(Error::Dimension(format!(
                "declared y = {} but row index {i} has {} entries",
                raw.y,
                raw.rows[i].len()
            )));
        }
        Channel::new(raw.rows)
    }
}

impl From<Channel> for ChannelJson {
    fn from(c: Channel) -> Self {
        ChannelJson {
            x: c.inputs(),
            y: c.outputs(),
            rows: c.rows,
        }
    }
}

impl Channel {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::Dimension("channel with no input symbols".into()));
        };
        let width = first.len();
        if width == 0 {
            return Err(Error::Dimension("channel with no output symbols".into()));
        }
        for (x, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::Dimension(format!(
                    "row index {x} has {} entries, expected {width}",
                    row.len()
                )));
            }
            if let Some(y) = row.iter().position(Rational::is_negative) {
                return Err(Error::NegativeEntry { row: x, col: y });
            }
            let sum: Rational = row.iter().sum();
            if sum != Rational::one() {
                return Err(Error::RowSum { row: x, sum });
            }
        }
        Ok(Self { rows })
    }

    /// Parse from `"a/b"` strings, row by row.
    pub fn from_strs(rows: &[&[&str]]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| s.parse())
                    .collect::<Result<Vec<Rational>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parsed)
    }

    /// Binary symmetric channel with crossover `eps`.
    pub fn bsc(eps: &Rational) -> Result<Self> {
        if eps.is_negative() || eps > &Rational::one() {
            return Err(Error::Domain(format!("crossover {eps} outside [0,1]")));
        }
        let keep = Rational::one() - eps;
        Self::new(vec![
            vec![keep.clone(), eps.clone()],
            vec![eps.clone(), keep],
        ])
    }

    /// `n` inputs all mapped to the same output law.
    pub fn identical_rows(n: usize, row: Vec<Rational>) -> Result<Self> {
        Self::new(vec![row; n])
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn outputs(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, x: usize) -> &[Rational] {
        &self.rows[x]
    }

    /// `W(y|x)`.
    pub fn get(&self, x: usize, y: usize) -> &Rational {
        &self.rows[x][y]
    }

    pub(crate) fn check_input_len(&self, p: &Distribution) -> Result<()> {
        if p.len() != self.inputs() {
            return Err(Error::Dimension(format!(
                "distribution over {} symbols, channel has {} inputs",
                p.len(),
                self.inputs()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_same_shape(&self, other: &Channel) -> Result<()> {
        if self.inputs() != other.inputs() || self.outputs() != other.outputs() {
            return Err(Error::Dimension(format!(
                "{}x{} channel against {}x{} channel",
                self.inputs(),
                self.outputs(),
                other.inputs(),
                other.outputs()
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.rows).finish()
    }
}
