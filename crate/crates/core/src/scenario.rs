//! Optimization scenarios and their offset bounds.
//!
//! | scenario | variables | roof | floor | width |
//! |---|---|---|---|---|
//! | I.a | 14 | ±0.25 | ±0.25 | fixed |
//! | I.b | 14 | [−0.25, 0] | [0, 0.25] | fixed |
//! | II.a | 18 | ±0.25 | ±0.25 | ±0.25 |
//! | II.b | 18 | [−0.25, 0] | [0, 0.25] | [−0.25, 0] |
//!
//! The "b" scenarios only move walls inward, so every design stays inside
//! the reference envelope.

use std::fmt;
use std::str::FromStr;

use crate::bounds::Bounds;
use crate::error::{Error, Result};
use crate::geometry::design::{DIM_FIXED_WIDTH, DIM_FREE_WIDTH, FLOOR_VARS, ROOF_VARS, WIDTH_VARS};

pub const MAX_OFFSET: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Ia,
    Ib,
    IIa,
    IIb,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [Scenario::Ia, Scenario::Ib, Scenario::IIa, Scenario::IIb];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Ia => "I.a",
            Scenario::Ib => "I.b",
            Scenario::IIa => "II.a",
            Scenario::IIb => "II.b",
        }
    }

    pub fn free_width(self) -> bool {
        matches!(self, Scenario::IIa | Scenario::IIb)
    }

    pub fn inward_only(self) -> bool {
        matches!(self, Scenario::Ib | Scenario::IIb)
    }

    pub fn dim(self) -> usize {
        if self.free_width() {
            DIM_FREE_WIDTH
        } else {
            DIM_FIXED_WIDTH
        }
    }

    /// Bounds used for the design of experiments: the full ±0.25 box of the
    /// matching variable count.
    pub fn sampling_bounds(self) -> Bounds {
        Bounds::uniform(self.dim(), -MAX_OFFSET, MAX_OFFSET).expect("static bounds")
    }

    pub fn bounds(self) -> Bounds {
        let (m, r) = (MAX_OFFSET, self.inward_only());
        let mut lo = Vec::with_capacity(self.dim());
        let mut hi = Vec::with_capacity(self.dim());
        let mut push = |n: usize, l: f64, h: f64| {
            lo.extend(std::iter::repeat_n(l, n));
            hi.extend(std::iter::repeat_n(h, n));
        };
        push(ROOF_VARS, -m, if r { 0.0 } else { m });
        push(FLOOR_VARS, if r { 0.0 } else { -m }, m);
        if self.free_width() {
            push(WIDTH_VARS, -m, if r { 0.0 } else { m });
        }
        Bounds::new(lo, hi).expect("static bounds")
    }

    /// Scenario sharing the variable count, whose bounds contain these.
    pub fn sampling_scenario(self) -> Scenario {
        if self.free_width() {
            Scenario::IIa
        } else {
            Scenario::Ia
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scenario '{s}' (expected I.a, I.b, II.a or II.b)")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_table() {
        let b = Scenario::IIb.bounds();
        assert_eq!(b.dim(), 18);
        assert_eq!((b.lower()[0], b.upper()[0]), (-0.25, 0.0));
        assert_eq!((b.lower()[7], b.upper()[7]), (0.0, 0.25));
        assert_eq!((b.lower()[14], b.upper()[17]), (-0.25, 0.0));
        let b = Scenario::Ib.bounds();
        assert_eq!(b.dim(), 14);
        assert_eq!((b.lower()[6], b.upper()[6], b.lower()[13], b.upper()[13]), (-0.25, 0.0, 0.0, 0.25));
        assert_eq!(Scenario::Ia.bounds(), Bounds::uniform(14, -0.25, 0.25).unwrap());
        assert_eq!(Scenario::IIa.bounds(), Scenario::IIa.sampling_bounds());
    }

    #[test]
    fn names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(s.as_str().parse::<Scenario>().unwrap(), s);
        }
        assert!("III".parse::<Scenario>().is_err());
    }
}
