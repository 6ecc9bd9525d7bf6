use serde::{Deserialize, Serialize};

use super::{Channel, Distribution};
use crate::exactnum::Rational;
use crate::{Error, Result};

/// The three-input, two-output channels whose optimal inputs separate.
///
/// Rows are inputs:
///
/// ```text
///            x1     x2       x3
/// WStar    (1,0)  (0,1)    (0,1)
/// WHat     (1,0)  (0,1)    (1,0)
/// W1(mu)   (1,0)  (0,1)    (mu,1-mu)
/// W2(mu)   (1,0)  (mu,1-mu) (0,1)
/// ```
///
/// `W1(mu) = (1-mu) WStar + mu WHat`; `W2` is the same mixture with the
/// roles of inputs 2 and 3 swapped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gadget {
    WStar,
    WHat,
    W1(Rational),
    W2(Rational),
}

fn check_mu(mu: &Rational) -> Result<()> {
    if mu.is_negative() || mu > &Rational::one() {
        return Err(Error::Domain(format!("mixing weight {mu} outside [0,1]")));
    }
    Ok(())
}

impl Gadget {
    pub fn channel(&self) -> Result<Channel> {
        let one = Rational::one;
        let zero = Rational::zero;
        let a = vec![one(), zero()];
        let b = vec![zero(), one()];
        let rows = match self {
            Gadget::WStar => vec![a, b.clone(), b],
            Gadget::WHat => vec![a.clone(), b, a],
            Gadget::W1(mu) => {
                check_mu(mu)?;
                vec![a, b, vec![mu.clone(), one() - mu]]
            }
            Gadget::W2(mu) => {
                check_mu(mu)?;
                vec![a, vec![mu.clone(), one() - mu], b]
            }
        };
        Channel::new(rows)
    }
}

/// Entrywise `(1-mu) Wa + mu Wb`.
pub fn mix(wa: &Channel, wb: &Channel, mu: &Rational) -> Result<Channel> {
    wa.check_same_shape(wb)?;
    check_mu(mu)?;
    let keep = Rational::one() - mu;
    let rows = wa
        .rows()
        .iter()
        .zip(wb.rows())
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(a, b)| &keep * a + mu * b).collect())
        .collect();
    Channel::new(rows)
}

/// `max_x sum_y |Wa(y|x) - Wb(y|x)|`.
pub fn tv_distance(wa: &Channel, wb: &Channel) -> Result<Rational> {
    wa.check_same_shape(wb)?;
    Ok(wa
        .rows()
        .iter()
        .zip(wb.rows())
        .map(|(ra, rb)| {
            ra.iter()
                .zip(rb)
                .map(|(a, b)| (a - b).abs())
                .sum::<Rational>()
        })
        .max()
        .expect("channels have at least one row"))
}

/// Lift a 3x2 channel to `x_size` inputs and `y_size` outputs. Extra outputs
/// get zero mass; extra inputs copy the first row.
pub fn embed(small: &Channel, x_size: usize, y_size: usize) -> Result<Channel> {
    if small.inputs() != 3 || small.outputs() != 2 {
        return Err(Error::Dimension(format!(
            "embedding needs a 3x2 channel, got {}x{}",
            small.inputs(),
            small.outputs()
        )));
    }
    if x_size < 3 || y_size < 2 {
        return Err(Error::Dimension(format!(
            "target alphabets {x_size}x{y_size} smaller than 3x2"
        )));
    }
    let padded = |x: usize| {
        let mut row = small.row(x).to_vec();
        row.resize(y_size, Rational::zero());
        row
    };
    let rows = (0..x_size)
        .map(|x| padded(if x < 3 { x } else { 0 }))
        .collect();
    Channel::new(rows)
}

/// Fold the mass of inputs `4..` onto input 1, giving a law on 3 symbols.
pub fn project_optimizer(p_big: &Distribution, x_size: usize) -> Result<Distribution> {
    if p_big.len() != x_size || x_size < 3 {
        return Err(Error::Dimension(format!(
            "projection of a {}-symbol law with x_size = {x_size}",
            p_big.len()
        )));
    }
    let probs = p_big.probs();
    let first = &probs[0] + &probs[3..].iter().sum::<Rational>();
    Distribution::new(vec![first, probs[1].clone(), probs[2].clone()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::mutual_information;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn dist(v: &[&str]) -> Distribution {
        Distribution::new(v.iter().map(|s| r(s)).collect()).unwrap()
    }

    #[test]
    fn gadget_rows() {
        let ws = Gadget::WStar.channel().unwrap();
        assert_eq!(
            ws,
            Channel::from_strs(&[&["1", "0"], &["0", "1"], &["0", "1"]]).unwrap()
        );
        assert_eq!(Gadget::W1(r("0")).channel().unwrap(), ws);
        assert_eq!(Gadget::W2(r("0")).channel().unwrap(), ws);
        assert!(Gadget::W1(r("5/4")).channel().is_err());
        assert!(Gadget::W2(r("-1/4")).channel().is_err());
    }

    #[test]
    fn w1_is_mixture_of_wstar_and_what() {
        let ws = Gadget::WStar.channel().unwrap();
        let wh = Gadget::WHat.channel().unwrap();
        for mu in ["1/4", "1/8", "1", "0"] {
            assert_eq!(
                mix(&ws, &wh, &r(mu)).unwrap(),
                Gadget::W1(r(mu)).channel().unwrap()
            );
        }
    }

    #[test]
    fn mix_endpoints_and_errors() {
        let ws = Gadget::WStar.channel().unwrap();
        let wh = Gadget::WHat.channel().unwrap();
        assert_eq!(mix(&ws, &wh, &r("0")).unwrap(), ws);
        assert_eq!(mix(&wh, &wh, &r("3/7")).unwrap(), wh);
        assert!(mix(&ws, &wh, &r("2")).is_err());
        let bsc = Channel::bsc(&r("1/4")).unwrap();
        assert!(matches!(
            mix(&ws, &bsc, &r("1/2")),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn tv_distances() {
        let ws = Gadget::WStar.channel().unwrap();
        assert_eq!(tv_distance(&ws, &ws).unwrap(), Rational::zero());
        let w1 = Gadget::W1(r("1/32")).channel().unwrap();
        assert_eq!(tv_distance(&ws, &w1).unwrap(), r("1/16"));
        let a = Gadget::W1(r("1/8")).channel().unwrap();
        let b = Gadget::W2(r("1/8")).channel().unwrap();
        assert_eq!(tv_distance(&a, &b).unwrap(), r("1/4"));
        assert_eq!(tv_distance(&b, &a).unwrap(), r("1/4"));
    }

    #[test]
    fn embedding() {
        let ws = Gadget::WStar.channel().unwrap();
        assert_eq!(embed(&ws, 3, 2).unwrap(), ws);
        let big = embed(&ws, 5, 4).unwrap();
        assert_eq!(big.inputs(), 5);
        assert_eq!(big.outputs(), 4);
        let first = vec![r("1"), r("0"), r("0"), r("0")];
        assert_eq!(big.row(3), first.as_slice());
        assert_eq!(big.row(4), first.as_slice());
        assert_eq!(big.row(2), [r("0"), r("1"), r("0"), r("0")].as_slice());
        let w1 = embed(&Gadget::W1(r("1/4")).channel().unwrap(), 4, 3).unwrap();
        assert_eq!(w1.row(2), [r("1/4"), r("3/4"), r("0")].as_slice());
        assert_eq!(w1.row(3), [r("1"), r("0"), r("0")].as_slice());
        assert!(embed(&ws, 2, 2).is_err());
        assert!(embed(&ws, 3, 1).is_err());
        assert!(embed(&Channel::bsc(&r("1/3")).unwrap(), 3, 2).is_err());
    }

    #[test]
    fn projection_folds_mass() {
        assert_eq!(
            project_optimizer(&dist(&["1/2", "1/2", "0"]), 3).unwrap(),
            dist(&["1/2", "1/2", "0"])
        );
        assert_eq!(
            project_optimizer(&dist(&["1/4", "1/2", "0", "1/4"]), 4).unwrap(),
            dist(&["1/2", "1/2", "0"])
        );
        assert_eq!(
            project_optimizer(&dist(&["0", "0", "0", "1"]), 4).unwrap(),
            dist(&["1", "0", "0"])
        );
        assert!(project_optimizer(&dist(&["1/2", "1/2"]), 2).is_err());
    }

    #[test]
    fn projection_preserves_information() {
        let small = Gadget::W2(r("1/8")).channel().unwrap();
        let big = embed(&small, 5, 3).unwrap();
        let p = dist(&["1/10", "3/10", "1/5", "1/4", "3/20"]);
        let a = mutual_information(&p, &big, 25).unwrap();
        let b = mutual_information(&project_optimizer(&p, 5).unwrap(), &small, 25).unwrap();
        assert!(a.overlaps(&b));
    }
}
