//! Counterexample search.
//!
//! Where [`run_suite`](super::run_suite) samples triples that satisfy a
//! theorem's hypotheses, the search deliberately breaks one: a chosen
//! operand is drawn non-convex by rejection, and the first strict
//! violation of the law is reported after greedy minimization.

use super::{compare_series, lhs_rhs_left, lhs_rhs_right, subject_seed, Comparison, LabError, Side};
use crate::ftv::{random_convex, random_ftv, ConvMode, Ftv};
use crate::ops::BinaryOp;
use std::fmt;

/// Which operand of the law the search perturbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subject {
    F,
    G,
    H,
}

impl Subject {
    fn lane(self) -> u64 {
        match self {
            Subject::F => 0,
            Subject::G => 1,
            Subject::H => 2,
        }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subject::F => "f",
            Subject::G => "g",
            Subject::H => "h",
        })
    }
}

impl std::str::FromStr for Subject {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "f" => Ok(Subject::F),
            "g" => Ok(Subject::G),
            "h" => Ok(Subject::H),
            _ => Err(format!("unknown subject `{s}`, expected f, g or h")),
        }
    }
}

/// How the perturbed operand is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Rejection-sample until the operand is non-convex.
    NonConvex,
    /// Control run: keep the operand convex and expect no witness.
    ConvexControl,
}

impl fmt::Display for Sampling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sampling::NonConvex => "non-convex",
            Sampling::ConvexControl => "convex-control",
        })
    }
}

impl std::str::FromStr for Sampling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "non-convex" | "nonconvex" => Ok(Sampling::NonConvex),
            "convex-control" | "convex" => Ok(Sampling::ConvexControl),
            _ => Err(format!(
                "unknown sampling `{s}`, expected non-convex or convex-control"
            )),
        }
    }
}

/// A minimized violating triple.
#[derive(Debug, Clone)]
pub struct SearchWitness {
    pub trial: usize,
    pub z: usize,
    pub deviation: f64,
    pub f: Ftv,
    pub g: Ftv,
    pub h: Ftv,
}

const REJECTION_CAP: usize = 1000;

fn draw_non_convex(
    grid: &crate::grid::Grid,
    seed: u64,
    trial: usize,
    lane: u64,
) -> Result<Ftv, LabError> {
    for attempt in 0..REJECTION_CAP {
        let candidate = random_ftv(grid, subject_seed(seed, trial, lane + 3 * attempt as u64));
        if !candidate.is_convex() {
            return Ok(candidate);
        }
    }
    Err(LabError::InvalidConfig(format!(
        "could not sample a non-convex series on a grid with {} points",
        grid.point_count()
    )))
}

/// The operand that must stay convex for the violation to contradict the
/// theorem: `f` for the left law, `h` for the right one.
fn convex_lane(side: Side) -> u64 {
    match side {
        Side::Left => 0,
        Side::Right => 2,
    }
}

fn draw_triple(
    grid: &crate::grid::Grid,
    side: Side,
    subject: Subject,
    sampling: Sampling,
    seed: u64,
    trial: usize,
) -> Result<[Ftv; 3], LabError> {
    let mut out = Vec::with_capacity(3);
    for lane in 0u64..3 {
        let ftv = if lane == subject.lane() {
            match sampling {
                Sampling::NonConvex => draw_non_convex(grid, seed, trial, lane)?,
                Sampling::ConvexControl => random_convex(grid, subject_seed(seed, trial, lane)),
            }
        } else if lane == convex_lane(side) {
            random_convex(grid, subject_seed(seed, trial, lane))
        } else {
            random_ftv(grid, subject_seed(seed, trial, lane))
        };
        out.push(ftv);
    }
    Ok(out.try_into().expect("three lanes"))
}

/// Scans up to `trials` sampled triples and returns the first one whose
/// two sides differ strictly by more than `tol`, minimized by greedily
/// zeroing grades while the violation persists. Returns `Ok(None)` when
/// every trial satisfies the law.
#[allow(clippy::too_many_arguments)]
pub fn search_counterexample(
    f_op: &BinaryOp,
    v_op: &BinaryOp,
    side: Side,
    subject: Subject,
    trials: usize,
    seed: u64,
    tol: f64,
    mode: ConvMode,
    sampling: Sampling,
) -> Result<Option<SearchWitness>, LabError> {
    if trials == 0 {
        return Err(LabError::InvalidConfig("trials must be at least 1".into()));
    }
    if f_op.grid() != v_op.grid() {
        return Err(LabError::Op(crate::ops::OpError::GridMismatch));
    }
    let grid = f_op.grid().clone();
    for trial in 0..trials {
        let triple = draw_triple(&grid, side, subject, sampling, seed, trial)?;
        let d = violation(f_op, v_op, side, &triple, mode, tol)?;
        if d.is_some() {
            let minimized = minimize(f_op, v_op, side, subject, sampling, triple, mode, tol)?;
            let final_dev = violation(f_op, v_op, side, &minimized, mode, tol)?
                .expect("minimization preserves the violation");
            let [f, g, h] = minimized;
            return Ok(Some(SearchWitness {
                trial,
                z: final_dev.1,
                deviation: final_dev.0,
                f,
                g,
                h,
            }));
        }
    }
    Ok(None)
}

/// Returns `(deviation, worst index)` when the triple violates the law
/// strictly beyond `tol`.
fn violation(
    f_op: &BinaryOp,
    v_op: &BinaryOp,
    side: Side,
    triple: &[Ftv; 3],
    mode: ConvMode,
    tol: f64,
) -> Result<Option<(f64, usize)>, LabError> {
    let [f, g, h] = triple;
    let (lhs, rhs) = match side {
        Side::Left => lhs_rhs_left(f_op, v_op, f, g, h, mode)?,
        Side::Right => lhs_rhs_right(f_op, v_op, f, g, h, mode)?,
    };
    let d = compare_series(lhs.grades(), rhs.grades(), Comparison::Strict, tol);
    if d.pass {
        Ok(None)
    } else {
        Ok(Some((d.max_deviation, d.worst_index)))
    }
}

/// Greedily zeroes grades, lane by lane and index by index, keeping a zero
/// only when the violation survives and every operand the theorem requires
/// convex stays convex. Runs to a fixpoint.
#[allow(clippy::too_many_arguments)]
fn minimize(
    f_op: &BinaryOp,
    v_op: &BinaryOp,
    side: Side,
    subject: Subject,
    sampling: Sampling,
    mut triple: [Ftv; 3],
    mode: ConvMode,
    tol: f64,
) -> Result<[Ftv; 3], LabError> {
    let grid = f_op.grid().clone();
    let must_stay_convex = |lane: u64| -> bool {
        if lane == subject.lane() && sampling == Sampling::NonConvex {
            return false;
        }
        lane == convex_lane(side)
    };
    loop {
        let mut improved = false;
        for lane in 0..3usize {
            for idx in 0..grid.point_count() {
                if triple[lane].grade(idx) == 0.0 {
                    continue;
                }
                let mut grades = triple[lane].grades().to_vec();
                grades[idx] = 0.0;
                let candidate = Ftv::new(&grid, grades)?;
                if must_stay_convex(lane as u64) && !candidate.is_convex() {
                    continue;
                }
                let mut next = triple.clone();
                next[lane] = candidate;
                if violation(f_op, v_op, side, &next, mode, tol)?.is_some() {
                    triple = next;
                    improved = true;
                }
            }
        }
        if !improved {
            return Ok(triple);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::lab::falsifiability_pair;
    use crate::ftv::ConvMode;
    use crate::ops::{build_operator, OperatorSpec};

    fn falsifiability_ops(n: usize) -> (BinaryOp, BinaryOp) {
        let grid = Grid::new(n).unwrap();
        let (spec_f, spec_v) = falsifiability_pair(&grid);
        (
            build_operator(&grid, &spec_f).unwrap(),
            build_operator(&grid, &spec_v).unwrap(),
        )
    }

    #[test]
    fn non_convex_first_operand_yields_a_witness() {
        let (f_op, v_op) = falsifiability_ops(8);
        let witness = search_counterexample(
            &f_op,
            &v_op,
            Side::Left,
            Subject::F,
            1000,
            7,
            0.0,
            ConvMode::Snap,
            Sampling::NonConvex,
        )
        .unwrap()
        .expect("the law must fail without convexity");
        assert!(witness.deviation > 0.0);
    }

    #[test]
    fn convex_control_finds_nothing() {
        let (f_op, v_op) = falsifiability_ops(8);
        let witness = search_counterexample(
            &f_op,
            &v_op,
            Side::Left,
            Subject::F,
            200,
            7,
            0.0,
            ConvMode::Snap,
            Sampling::ConvexControl,
        )
        .unwrap();
        assert!(witness.is_none());
    }

    #[test]
    fn perturbing_an_unconstrained_operand_finds_nothing() {
        let grid = Grid::new(8).unwrap();
        let f_op = build_operator(&grid, &OperatorSpec::basic(crate::ops::BasicOpKind::Tm)).unwrap();
        let v_op = build_operator(&grid, &OperatorSpec::basic(crate::ops::BasicOpKind::Sm)).unwrap();
        let witness = search_counterexample(
            &f_op,
            &v_op,
            Side::Left,
            Subject::G,
            200,
            11,
            0.0,
            ConvMode::Exact,
            Sampling::NonConvex,
        )
        .unwrap();
        assert!(witness.is_none());
    }

    #[test]
    fn search_is_deterministic() {
        let (f_op, v_op) = falsifiability_ops(8);
        let run = || {
            search_counterexample(
                &f_op,
                &v_op,
                Side::Left,
                Subject::F,
                1000,
                3,
                0.0,
                ConvMode::Snap,
                Sampling::NonConvex,
            )
            .unwrap()
            .unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.trial, b.trial);
        assert_eq!(a.f.grades(), b.f.grades());
        assert_eq!(a.g.grades(), b.g.grades());
        assert_eq!(a.h.grades(), b.h.grades());
    }

    #[test]
    fn minimized_witness_is_at_a_fixpoint_of_grade_zeroing() {
        let (f_op, v_op) = falsifiability_ops(8);
        let w = search_counterexample(
            &f_op,
            &v_op,
            Side::Left,
            Subject::F,
            1000,
            7,
            0.0,
            ConvMode::Snap,
            Sampling::NonConvex,
        )
        .unwrap()
        .unwrap();
        let grid = f_op.grid().clone();
        let triple = [w.f.clone(), w.g.clone(), w.h.clone()];
        for lane in 0..3usize {
            for idx in 0..grid.point_count() {
                if triple[lane].grade(idx) == 0.0 {
                    continue;
                }
                let mut grades = triple[lane].grades().to_vec();
                grades[idx] = 0.0;
                let mut next = triple.clone();
                next[lane] = Ftv::new(&grid, grades).unwrap();
                let still = violation(&f_op, &v_op, Side::Left, &next, ConvMode::Snap, 0.0)
                    .unwrap()
                    .is_some();
                // The perturbed operand carries no convexity guard here, so
                // at a fixpoint every single zeroing must kill the violation.
                assert!(!still, "zeroing ({lane}, {idx}) kept the violation");
            }
        }
    }
}
