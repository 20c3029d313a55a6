//! Lozenge weights.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::lattice::Lozenge;
use crate::qlaurent::{rational, LaurentQ};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightScheme {
    /// `(q^c + q^-c)/2` on vertical lozenges.
    Symmetric,
    /// As `Symmetric`, except vertical lozenges on the axis weigh `1/2`.
    Halved,
    /// `q^c` on vertical lozenges (exponents doubled).
    Volume,
}

impl WeightScheme {
    pub fn name(&self) -> &'static str {
        match self {
            WeightScheme::Symmetric => "wt1",
            WeightScheme::Halved => "wt2",
            WeightScheme::Volume => "wt3",
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wt1" => Ok(WeightScheme::Symmetric),
            "wt2" => Ok(WeightScheme::Halved),
            "wt3" => Ok(WeightScheme::Volume),
            other => Err(format!("unknown weight scheme `{other}`")),
        }
    }
}

/// `(q^c + q^-c)/2`.
pub fn symmetric_weight(c: i64) -> LaurentQ {
    &LaurentQ::monomial(rational(1, 2), c) + &LaurentQ::monomial(rational(1, 2), -c)
}

/// Weight of a vertical lozenge whose center sits `c` units right of the axis.
pub fn vertical_weight(scheme: WeightScheme, c: i64) -> LaurentQ {
    match scheme {
        WeightScheme::Symmetric => symmetric_weight(c),
        WeightScheme::Halved if c == 0 => LaurentQ::constant(rational(1, 2)),
        WeightScheme::Halved => symmetric_weight(c),
        WeightScheme::Volume => LaurentQ::q_pow(c),
    }
}

pub fn lozenge_weight(scheme: WeightScheme, loz: &Lozenge, axis_offset: i64) -> LaurentQ {
    match loz.vertical_center_i() {
        Some(i) => vertical_weight(scheme, i - axis_offset),
        None => LaurentQ::one(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{lozenge_of, UnitTriangle};
    use proptest::prelude::*;

    #[test]
    fn symmetric_vertical() {
        let loz = lozenge_of(UnitTriangle::up(3, 0), UnitTriangle::down(3, 0)).unwrap();
        let w = lozenge_weight(WeightScheme::Symmetric, &loz, 0);
        assert_eq!(
            w,
            LaurentQ::from_terms([(3, rational(1, 2)), (-3, rational(1, 2))])
        );
    }

    #[test]
    fn halved_axis_is_one_half() {
        let loz = lozenge_of(UnitTriangle::up(2, 1), UnitTriangle::down(2, 1)).unwrap();
        assert_eq!(
            lozenge_weight(WeightScheme::Halved, &loz, 2),
            LaurentQ::constant(rational(1, 2))
        );
        assert_eq!(
            lozenge_weight(WeightScheme::Symmetric, &loz, 2),
            LaurentQ::one()
        );
    }

    #[test]
    fn tilted_weigh_one() {
        let loz = lozenge_of(UnitTriangle::up(3, 0), UnitTriangle::down(2, 1)).unwrap();
        for s in [
            WeightScheme::Symmetric,
            WeightScheme::Halved,
            WeightScheme::Volume,
        ] {
            assert_eq!(lozenge_weight(s, &loz, 0), LaurentQ::one());
        }
    }

    #[test]
    fn volume_weight_is_monomial() {
        assert_eq!(vertical_weight(WeightScheme::Volume, 5), LaurentQ::q_pow(5));
    }

    #[test]
    fn scheme_names_roundtrip() {
        for s in [
            WeightScheme::Symmetric,
            WeightScheme::Halved,
            WeightScheme::Volume,
        ] {
            assert_eq!(s.name().parse::<WeightScheme>().unwrap(), s);
        }
        assert!("wt4".parse::<WeightScheme>().is_err());
    }

    proptest! {
        #[test]
        fn palindromic_and_unit_at_one(c in -40i64..40) {
            for s in [WeightScheme::Symmetric, WeightScheme::Halved] {
                let w = vertical_weight(s, c);
                prop_assert_eq!(w.reverse(), w.clone());
                let expect = if s == WeightScheme::Halved && c == 0 { rational(1, 2) } else { rational(1, 1) };
                prop_assert_eq!(w.eval_at_one(), expect);
            }
        }
    }
}
