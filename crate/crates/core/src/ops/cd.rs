//! Conditional distributivity of one operator over another.
//!
//! The checked law is `F(x, U(y,z)) = U(F(x,y), F(x,z))` restricted to
//! triples where the inner value `U(y,z)` stays strictly below 1; the right
//! variant distributes from the other side. Inner results that fall between
//! grid points are read through bilinear interpolation, so the outcome is a
//! residual magnitude, not just a verdict.

use super::table::BinaryOp;
use super::OpError;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdMode {
    /// Both sides; equivalent to one side for commutative operators.
    Cd,
    CdLeft,
    CdRight,
}

impl CdMode {
    fn label(self) -> &'static str {
        match self {
            CdMode::Cd => "CD",
            CdMode::CdLeft => "CDl",
            CdMode::CdRight => "CDr",
        }
    }
}

impl fmt::Display for CdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for CdMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cd" => Ok(CdMode::Cd),
            "cdl" | "left" => Ok(CdMode::CdLeft),
            "cdr" | "right" => Ok(CdMode::CdRight),
            _ => Err(format!("unknown distributivity mode `{s}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CdReport {
    pub mode: CdMode,
    pub tol: f64,
    pub max_residual: f64,
    /// Grid indices `(x, y, z)` of the worst guarded triple.
    pub witness: Option<[usize; 3]>,
    pub guarded_triples: usize,
    pub pass: bool,
}

impl fmt::Display for CdReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: max residual {:.3e} over {} guarded triples (tol {:.1e}): {}",
            self.mode,
            self.max_residual,
            self.guarded_triples,
            self.tol,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Measures how far `outer` is from conditionally distributing over
/// `inner` on their shared grid.
pub fn check_conditional_distributivity(
    outer: &BinaryOp,
    inner: &BinaryOp,
    mode: CdMode,
    tol: f64,
) -> Result<CdReport, OpError> {
    if outer.grid() != inner.grid() {
        return Err(OpError::GridMismatch);
    }
    let grid = outer.grid();
    let n = grid.resolution();
    let mut max_residual: f64 = 0.0;
    let mut witness = None;
    let mut guarded_triples = 0usize;
    let left = matches!(mode, CdMode::Cd | CdMode::CdLeft);
    let right = matches!(mode, CdMode::Cd | CdMode::CdRight);
    for i in 0..=n {
        let x = grid.point(i);
        for j in 0..=n {
            for l in 0..=n {
                let u = inner.value(j, l);
                if u >= 1.0 {
                    continue;
                }
                guarded_triples += 1;
                let mut residual: f64 = 0.0;
                if left {
                    let lhs = outer.eval(x, u);
                    let rhs = inner.eval(outer.value(i, j), outer.value(i, l));
                    residual = residual.max((lhs - rhs).abs());
                }
                if right {
                    let lhs = outer.eval(u, x);
                    let rhs = inner.eval(outer.value(j, i), outer.value(l, i));
                    residual = residual.max((lhs - rhs).abs());
                }
                if residual > max_residual {
                    max_residual = residual;
                    witness = Some([i, j, l]);
                }
            }
        }
    }
    Ok(CdReport {
        mode,
        tol,
        max_residual,
        witness,
        guarded_triples,
        pass: max_residual <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::super::basic::basic_op;
    use super::super::build::{build_operator, OperatorSpec};
    use super::super::{BasicOpKind, BlockSlot, Family};
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn min_distributes_over_max_exactly() {
        let g = Grid::new(8).unwrap();
        let f = basic_op(&g, BasicOpKind::Tm);
        let u = basic_op(&g, BasicOpKind::Sm);
        let r = check_conditional_distributivity(&f, &u, CdMode::Cd, 0.0).unwrap();
        assert!(r.pass, "{r}");
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn lukasiewicz_pair_fails_even_under_the_guard() {
        let g = Grid::new(8).unwrap();
        let f = basic_op(&g, BasicOpKind::Tl);
        let u = basic_op(&g, BasicOpKind::Sl);
        let r = check_conditional_distributivity(&f, &u, CdMode::CdLeft, 1e-9).unwrap();
        assert!(!r.pass);
        assert!(r.max_residual >= 0.25 - 1e-12, "{r}");
        assert!(r.witness.is_some());
    }

    #[test]
    fn guard_excludes_saturated_inner_values() {
        let g = Grid::new(4).unwrap();
        let f = basic_op(&g, BasicOpKind::Tm);
        let u = basic_op(&g, BasicOpKind::Sl);
        let r = check_conditional_distributivity(&f, &u, CdMode::CdLeft, 0.0).unwrap();
        // Of the 25 inner pairs, those with x+y >= 1 are excluded.
        assert_eq!(r.guarded_triples, 5 * 10);
    }

    #[test]
    fn three_block_nullnorm_distributes_over_matching_uninorm() {
        let g = Grid::new(8).unwrap();
        let f = build_operator(
            &g,
            &OperatorSpec::new(Family::NullnormDisjI)
                .with_e(0.25)
                .with_k(0.5)
                .with_basic_block(BlockSlot::S1, BasicOpKind::Sl)
                .with_basic_block(BlockSlot::S2, BasicOpKind::Sl)
                .with_basic_block(BlockSlot::T, BasicOpKind::Tl),
        )
        .unwrap();
        let u =
            build_operator(&g, &OperatorSpec::new(Family::OverlineUninorm).with_e(0.25)).unwrap();
        let r = check_conditional_distributivity(&f, &u, CdMode::Cd, 0.0).unwrap();
        assert!(r.pass, "{r}");
    }
}
