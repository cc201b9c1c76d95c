//! Axiom audits for tabulated operators.
//!
//! All checks run on the tabulated values. Associativity composes values
//! that can fall between grid points, so it is measured through bilinear
//! interpolation and reported as a residual rather than a bare verdict.

use super::table::{BinaryOp, OpMeta};
use super::{Family, OpError, ASSOC_TOL, EQ_TOL};
use std::fmt;

/// Behaviour at the opposite corners `(1,0)` and `(0,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryClass {
    /// Both corners evaluate to 0.
    Conjunctive,
    /// Both corners evaluate to 1.
    Disjunctive,
    Neither,
}

impl fmt::Display for BoundaryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryClass::Conjunctive => "conjunctive",
            BoundaryClass::Disjunctive => "disjunctive",
            BoundaryClass::Neither => "neither",
        })
    }
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub n: usize,
    pub commutative: bool,
    pub monotone: bool,
    pub idempotent: bool,
    pub assoc_residual: f64,
    pub associative: bool,
    pub neutral_elements: Vec<usize>,
    pub absorbing_elements: Vec<usize>,
    pub boundary_class: BoundaryClass,
    pub max_jump: f64,
    pub grid_closed: bool,
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let list = |idx: &[usize]| -> String {
            if idx.is_empty() {
                "none".into()
            } else {
                idx.iter()
                    .map(|&i| format!("{}", i as f64 / self.n as f64))
                    .collect::<Vec<_>>()
                    .join(", ")
            }
        };
        writeln!(f, "commutative:            {}", yn(self.commutative))?;
        writeln!(f, "monotone:               {}", yn(self.monotone))?;
        writeln!(f, "idempotent:             {}", yn(self.idempotent))?;
        writeln!(
            f,
            "associativity residual: {:.3e} ({})",
            self.assoc_residual,
            yn(self.associative)
        )?;
        writeln!(f, "neutral elements:       {}", list(&self.neutral_elements))?;
        writeln!(
            f,
            "absorbing elements:     {}",
            list(&self.absorbing_elements)
        )?;
        writeln!(f, "boundary class:         {}", self.boundary_class)?;
        writeln!(f, "max adjacent jump:      {:.6}", self.max_jump)?;
        write!(f, "grid closed:            {}", yn(self.grid_closed))
    }
}

/// Audits a tabulated operator against the standard aggregation axioms.
///
/// Runs in cubic time in the grid resolution because of the associativity
/// scan.
pub fn axiom_report(op: &BinaryOp) -> AxiomReport {
    let grid = op.grid();
    let n = grid.resolution();
    let pt = |i: usize| grid.point(i);

    let mut commutative = true;
    let mut monotone = true;
    let mut max_jump: f64 = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            if j < i && (op.value(i, j) - op.value(j, i)).abs() > EQ_TOL {
                commutative = false;
            }
            if j < n {
                let row_step = op.value(i, j + 1) - op.value(i, j);
                let col_step = op.value(j + 1, i) - op.value(j, i);
                if row_step < -EQ_TOL || col_step < -EQ_TOL {
                    monotone = false;
                }
                max_jump = max_jump.max(row_step.abs()).max(col_step.abs());
            }
        }
    }

    let idempotent = (0..=n).all(|i| (op.value(i, i) - pt(i)).abs() <= EQ_TOL);
    let neutral_elements: Vec<usize> = (0..=n)
        .filter(|&e| {
            (0..=n).all(|i| {
                (op.value(i, e) - pt(i)).abs() <= EQ_TOL && (op.value(e, i) - pt(i)).abs() <= EQ_TOL
            })
        })
        .collect();
    let absorbing_elements: Vec<usize> = (0..=n)
        .filter(|&k| {
            (0..=n).all(|i| {
                (op.value(i, k) - pt(k)).abs() <= EQ_TOL && (op.value(k, i) - pt(k)).abs() <= EQ_TOL
            })
        })
        .collect();

    let mut assoc_residual: f64 = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            let ij = op.value(i, j);
            for l in 0..=n {
                let lhs = op.eval(ij, pt(l));
                let rhs = op.eval(pt(i), op.value(j, l));
                assoc_residual = assoc_residual.max((lhs - rhs).abs());
            }
        }
    }

    let corner = |v: f64| (v - op.value(n, 0)).abs() <= EQ_TOL && (v - op.value(0, n)).abs() <= EQ_TOL;
    let boundary_class = if corner(0.0) {
        BoundaryClass::Conjunctive
    } else if corner(1.0) {
        BoundaryClass::Disjunctive
    } else {
        BoundaryClass::Neither
    };

    AxiomReport {
        n,
        commutative,
        monotone,
        idempotent,
        assoc_residual,
        associative: assoc_residual <= ASSOC_TOL,
        neutral_elements,
        absorbing_elements,
        boundary_class,
        max_jump,
        grid_closed: op.is_closed(),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct UninormProfile {
    pub e: f64,
    pub e_index: usize,
    pub class: BoundaryClass,
}

#[derive(Debug, Clone, Copy)]
pub struct NullnormProfile {
    pub k: f64,
    pub k_index: usize,
}

fn fail(msg: impl Into<String>) -> OpError {
    OpError::Validation(msg.into())
}

/// Checks the uninorm axioms and classifies the corner behaviour.
pub fn validate_uninorm(op: &BinaryOp) -> Result<UninormProfile, OpError> {
    let r = axiom_report(op);
    if !r.commutative {
        return Err(fail("uninorm must be commutative"));
    }
    if !r.monotone {
        return Err(fail("uninorm must be non-decreasing"));
    }
    if !r.associative {
        return Err(fail(format!(
            "uninorm associativity residual {:.3e} exceeds {ASSOC_TOL:.0e}",
            r.assoc_residual
        )));
    }
    let e_index = match r.neutral_elements[..] {
        [e] => e,
        [] => return Err(fail("uninorm must have a neutral element")),
        _ => return Err(fail("uninorm must have a unique neutral element")),
    };
    if r.boundary_class == BoundaryClass::Neither {
        return Err(fail(format!(
            "uninorm corner value U(1,0)={} must be 0 or 1",
            op.value(r.n, 0)
        )));
    }
    let grid = op.grid();
    for i in 0..=r.n {
        for j in 0..=r.n {
            let in_lower = i <= e_index && j <= e_index;
            let in_upper = i >= e_index && j >= e_index;
            if in_lower || in_upper {
                continue;
            }
            let (lo, hi) = (grid.point(i).min(grid.point(j)), grid.point(i).max(grid.point(j)));
            let v = op.value(i, j);
            if v < lo - EQ_TOL || v > hi + EQ_TOL {
                return Err(fail(format!(
                    "uninorm must stay between min and max off the diagonal squares, got {v} at ({}, {})",
                    grid.point(i),
                    grid.point(j)
                )));
            }
        }
    }
    Ok(UninormProfile {
        e: grid.point(e_index),
        e_index,
        class: r.boundary_class,
    })
}

/// Checks the nullnorm axioms: continuity at grid scale, an absorbing
/// element on the grid, and the identity-like boundary behaviour on either
/// side of it.
pub fn validate_nullnorm(op: &BinaryOp) -> Result<NullnormProfile, OpError> {
    let r = axiom_report(op);
    if !r.commutative {
        return Err(fail("nullnorm must be commutative"));
    }
    if !r.monotone {
        return Err(fail("nullnorm must be non-decreasing"));
    }
    if !r.associative {
        return Err(fail(format!(
            "nullnorm associativity residual {:.3e} exceeds {ASSOC_TOL:.0e}",
            r.assoc_residual
        )));
    }
    continuity_and_absorbing(op, &r, "nullnorm")
}

/// Checks the relaxed absorbing-element axioms: monotone, continuous at
/// grid scale, absorbing element with identity boundaries. Commutativity
/// and associativity are deliberately not required.
pub fn validate_zk_operator(op: &BinaryOp) -> Result<NullnormProfile, OpError> {
    let r = axiom_report(op);
    if !r.monotone {
        return Err(fail("operator must be non-decreasing"));
    }
    continuity_and_absorbing(op, &r, "operator")
}

fn continuity_and_absorbing(
    op: &BinaryOp,
    r: &AxiomReport,
    label: &str,
) -> Result<NullnormProfile, OpError> {
    let grid = op.grid();
    let n = r.n;
    let step_bound = 2.0 / n as f64 + EQ_TOL;
    if r.max_jump > step_bound {
        return Err(fail(format!(
            "{label} must be continuous at grid scale: adjacent jump {:.6} exceeds 2/n",
            r.max_jump
        )));
    }
    let k = op.value(0, n);
    if (op.value(n, 0) - k).abs() > EQ_TOL {
        return Err(fail(format!(
            "{label} corner values F(0,1)={k} and F(1,0)={} must agree",
            op.value(n, 0)
        )));
    }
    let k_index = grid
        .index_of(k)
        .ok_or_else(|| fail(format!("absorbing element F(0,1)={k} must lie on the grid")))?;
    if !r.absorbing_elements.contains(&k_index) {
        return Err(fail(format!("{k} must be an absorbing element")));
    }
    for i in 0..=n {
        let x = grid.point(i);
        if i <= k_index
            && ((op.value(0, i) - x).abs() > EQ_TOL || (op.value(i, 0) - x).abs() > EQ_TOL)
        {
            return Err(fail(format!(
                "{label} must satisfy F(0,x)=x below the absorbing element, got F(0,{x})={}",
                op.value(0, i)
            )));
        }
        if i >= k_index
            && ((op.value(n, i) - x).abs() > EQ_TOL || (op.value(i, n) - x).abs() > EQ_TOL)
        {
            return Err(fail(format!(
                "{label} must satisfy F(1,x)=x above the absorbing element, got F(1,{x})={}",
                op.value(n, i)
            )));
        }
    }
    Ok(NullnormProfile { k, k_index })
}

/// Checks the t-conorm axioms (commutative, associative, monotone, neutral
/// element 0).
pub fn validate_tconorm(op: &BinaryOp) -> Result<(), OpError> {
    let r = axiom_report(op);
    if !r.commutative {
        return Err(fail("t-conorm must be commutative"));
    }
    if !r.monotone {
        return Err(fail("t-conorm must be non-decreasing"));
    }
    if !r.associative {
        return Err(fail(format!(
            "t-conorm associativity residual {:.3e} exceeds {ASSOC_TOL:.0e}",
            r.assoc_residual
        )));
    }
    if !r.neutral_elements.contains(&0) {
        return Err(fail("t-conorm must have neutral element 0"));
    }
    Ok(())
}

/// Extracts the scaled-down t-norm and scaled-up t-conorm a uninorm with
/// neutral element `e` acts as on `[0,e]^2` and `[e,1]^2`.
///
/// Both are tabulated back onto the uninorm's own grid, reading the source
/// table through bilinear interpolation where the scaled arguments fall
/// between grid points.
pub fn underlying_ops(op: &BinaryOp, e: f64) -> Result<(BinaryOp, BinaryOp), OpError> {
    if !(0.0 < e && e < 1.0) {
        return Err(OpError::InvalidNeutral(e));
    }
    let grid = op.grid();
    let n = grid.resolution();
    for i in 0..=n {
        let x = grid.point(i);
        if (op.eval(e, x) - x).abs() > 1e-9 || (op.eval(x, e) - x).abs() > 1e-9 {
            return Err(OpError::InvalidNeutral(e));
        }
    }
    let t = BinaryOp::tabulate(grid, OpMeta::new(Family::CustomTable).with_e(e), |x, y| {
        (op.eval(e * x, e * y) / e).clamp(0.0, 1.0)
    });
    let s = BinaryOp::tabulate(grid, OpMeta::new(Family::CustomTable).with_e(e), |x, y| {
        ((op.eval(e + (1.0 - e) * x, e + (1.0 - e) * y) - e) / (1.0 - e)).clamp(0.0, 1.0)
    });
    Ok((t, s))
}

#[cfg(test)]
mod tests {
    use super::super::basic::basic_op;
    use super::super::build::{build_operator, OperatorSpec};
    use super::super::{BasicOpKind, BlockSlot, Family};
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn product_tnorm_passes_the_audit() {
        let g = Grid::new(16).unwrap();
        let r = axiom_report(&basic_op(&g, BasicOpKind::Tp));
        assert!(r.commutative);
        assert!(r.monotone);
        assert!(!r.idempotent);
        assert!(r.associative, "residual {}", r.assoc_residual);
        assert_eq!(r.neutral_elements, vec![16]);
        assert_eq!(r.absorbing_elements, vec![0]);
        assert_eq!(r.boundary_class, BoundaryClass::Conjunctive);
    }

    #[test]
    fn min_is_idempotent_and_closed() {
        let g = Grid::new(12).unwrap();
        let r = axiom_report(&basic_op(&g, BasicOpKind::Tm));
        assert!(r.idempotent);
        assert!(r.grid_closed);
        assert_eq!(r.assoc_residual, 0.0);
    }

    #[test]
    fn uninorm_validation_reports_class_and_neutral() {
        let g = Grid::new(16).unwrap();
        let under = build_operator(&g, &OperatorSpec::new(Family::UnderlineUninorm).with_e(0.5))
            .unwrap();
        let p = validate_uninorm(&under).unwrap();
        assert_eq!(p.e, 0.5);
        assert_eq!(p.class, BoundaryClass::Conjunctive);
        let over = build_operator(&g, &OperatorSpec::new(Family::OverlineUninorm).with_e(0.5))
            .unwrap();
        assert_eq!(
            validate_uninorm(&over).unwrap().class,
            BoundaryClass::Disjunctive
        );
    }

    #[test]
    fn nullnorm_validation_finds_the_absorbing_element() {
        let g = Grid::new(16).unwrap();
        let spec = OperatorSpec::new(Family::NullnormDisjI)
            .with_e(0.25)
            .with_k(0.5)
            .with_basic_block(BlockSlot::S1, BasicOpKind::Sl)
            .with_basic_block(BlockSlot::S2, BasicOpKind::Sl)
            .with_basic_block(BlockSlot::T, BasicOpKind::Tl);
        let op = build_operator(&g, &spec).unwrap();
        let p = validate_nullnorm(&op).unwrap();
        assert_eq!(p.k, 0.5);
        assert_eq!(p.k_index, 8);
    }

    #[test]
    fn tconorm_neutral_violation_is_reported() {
        let g = Grid::new(8).unwrap();
        let err = validate_tconorm(&basic_op(&g, BasicOpKind::Tm)).unwrap_err();
        assert!(err.to_string().contains("neutral element 0"), "{err}");
    }

    #[test]
    fn underlying_ops_of_underline_uninorm_are_min_and_max() {
        let g = Grid::new(16).unwrap();
        let op = build_operator(&g, &OperatorSpec::new(Family::UnderlineUninorm).with_e(0.5))
            .unwrap();
        let (t, s) = underlying_ops(&op, 0.5).unwrap();
        let tol = 1.0 / 32.0 + 1e-12;
        for i in 0..=16 {
            for j in 0..=16 {
                let (x, y) = (g.point(i), g.point(j));
                assert!((t.value(i, j) - x.min(y)).abs() <= tol);
                assert!((s.value(i, j) - x.max(y)).abs() <= tol);
            }
        }
    }

    #[test]
    fn non_associative_table_is_rejected_as_uninorm() {
        let g = Grid::new(4).unwrap();
        // Arithmetic mean: commutative and monotone but not associative.
        let mean = crate::ops::table::BinaryOp::tabulate(
            &g,
            crate::ops::table::OpMeta::new(Family::CustomTable),
            |x, y| (x + y) / 2.0,
        );
        let err = validate_uninorm(&mean).unwrap_err();
        assert!(err.to_string().contains("associativity") || err.to_string().contains("neutral"));
    }
}
