//! The six classical continuous t-norms and t-conorms.

use super::table::{BinaryOp, OpMeta};
use super::Family;
use crate::grid::Grid;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasicOpKind {
    /// Minimum.
    Tm,
    /// Product.
    Tp,
    /// Bounded difference `max(x + y - 1, 0)`.
    Tl,
    /// Maximum.
    Sm,
    /// Probabilistic sum `x + y - xy`.
    Sp,
    /// Bounded sum `min(x + y, 1)`.
    Sl,
}

impl BasicOpKind {
    pub fn eval(self, x: f64, y: f64) -> f64 {
        match self {
            BasicOpKind::Tm => x.min(y),
            BasicOpKind::Tp => x * y,
            BasicOpKind::Tl => (x + y - 1.0).max(0.0),
            BasicOpKind::Sm => x.max(y),
            BasicOpKind::Sp => x + y - x * y,
            BasicOpKind::Sl => (x + y).min(1.0),
        }
    }

    pub fn is_tnorm(self) -> bool {
        matches!(self, BasicOpKind::Tm | BasicOpKind::Tp | BasicOpKind::Tl)
    }

    pub fn is_tconorm(self) -> bool {
        !self.is_tnorm()
    }

    pub fn tag(self) -> &'static str {
        match self {
            BasicOpKind::Tm => "TM",
            BasicOpKind::Tp => "TP",
            BasicOpKind::Tl => "TL",
            BasicOpKind::Sm => "SM",
            BasicOpKind::Sp => "SP",
            BasicOpKind::Sl => "SL",
        }
    }

    pub const ALL: [BasicOpKind; 6] = [
        BasicOpKind::Tm,
        BasicOpKind::Tp,
        BasicOpKind::Tl,
        BasicOpKind::Sm,
        BasicOpKind::Sp,
        BasicOpKind::Sl,
    ];
}

impl fmt::Display for BasicOpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for BasicOpKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BasicOpKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| format!("unknown basic operator `{s}`"))
    }
}

/// Tabulates one of the six basic operators on `grid`.
pub fn basic_op(grid: &Grid, kind: BasicOpKind) -> BinaryOp {
    let family = if kind.is_tnorm() {
        Family::BasicTnorm
    } else {
        Family::BasicTconorm
    };
    let meta = OpMeta::new(family).with_kind(kind);
    BinaryOp::tabulate(grid, meta, |x, y| kind.eval(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_difference_at_half_and_seven_tenths() {
        let g = Grid::new(10).unwrap();
        let op = basic_op(&g, BasicOpKind::Tl);
        assert!((op.value(5, 7) - 0.2).abs() <= 1e-12);
    }

    #[test]
    fn probabilistic_sum_at_half_half() {
        let g = Grid::new(4).unwrap();
        let op = basic_op(&g, BasicOpKind::Sp);
        assert_eq!(op.value(2, 2), 0.75);
    }

    #[test]
    fn minimum_picks_smaller_argument() {
        let g = Grid::new(10).unwrap();
        let op = basic_op(&g, BasicOpKind::Tm);
        assert_eq!(op.value(3, 7), 0.3);
    }

    #[test]
    fn closure_flags_match_the_family() {
        let g = Grid::new(4).unwrap();
        for kind in BasicOpKind::ALL {
            let closed = basic_op(&g, kind).is_closed();
            match kind {
                BasicOpKind::Tp | BasicOpKind::Sp => assert!(!closed, "{kind}"),
                _ => assert!(closed, "{kind}"),
            }
        }
    }
}
