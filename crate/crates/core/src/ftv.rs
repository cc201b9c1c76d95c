//! Fuzzy truth values on the grid and their sup-min convolution.
//!
//! A fuzzy truth value assigns a membership grade to every grid point.
//! Extending a binary operator `G` to truth values takes, at each output
//! point `z`, the largest `min(f(x), g(y))` over all pairs with
//! `G(x, y) = z`. On a finite grid the output point is the operator value
//! mapped back to an index, and the two [`ConvMode`]s differ in how that
//! mapping is allowed to happen.

use crate::grid::{Grid, GridError};
use crate::io;
use crate::ops::{basic_op, BasicOpKind, BinaryOp};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FtvError {
    #[error("fuzzy truth values live on different grids")]
    GridMismatch,
    #[error("exact convolution requires a grid-closed operator")]
    ClosureRequired,
    #[error("grade {0} lies outside [0,1]")]
    GradeOutOfRange(f64),
    #[error("series has {found} grades, expected {expected}")]
    Shape { expected: usize, found: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How operator values are mapped back onto the grid during convolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvMode {
    /// Demand a grid-closed operator so no rounding happens at all.
    Exact,
    /// Round each operator value to the nearest grid point, ties upward.
    Snap,
}

impl std::fmt::Display for ConvMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConvMode::Exact => "exact",
            ConvMode::Snap => "snap",
        })
    }
}

impl std::str::FromStr for ConvMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(ConvMode::Exact),
            "snap" => Ok(ConvMode::Snap),
            _ => Err(format!("unknown convolution mode `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ftv {
    grid: Grid,
    grades: Vec<f64>,
}

impl Ftv {
    pub fn new(grid: &Grid, grades: Vec<f64>) -> Result<Self, FtvError> {
        if grades.len() != grid.point_count() {
            return Err(FtvError::Shape {
                expected: grid.point_count(),
                found: grades.len(),
            });
        }
        if let Some(&bad) = grades.iter().find(|g| !(0.0..=1.0).contains(*g)) {
            return Err(FtvError::GradeOutOfRange(bad));
        }
        Ok(Ftv {
            grid: grid.clone(),
            grades,
        })
    }

    pub fn constant(grid: &Grid, grade: f64) -> Result<Self, FtvError> {
        Self::new(grid, vec![grade; grid.point_count()])
    }

    /// Crisp truth value: grade 1 at the grid point nearest `v`, 0 elsewhere.
    pub fn indicator(grid: &Grid, v: f64) -> Result<Self, FtvError> {
        let i = grid.snap(v)?;
        let mut grades = vec![0.0; grid.point_count()];
        grades[i] = 1.0;
        Self::new(grid, grades)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn grade(&self, i: usize) -> f64 {
        self.grades[i]
    }

    pub fn grades(&self) -> &[f64] {
        &self.grades
    }

    pub fn max_grade(&self) -> f64 {
        self.grades.iter().fold(0.0, |acc, &g| acc.max(g))
    }

    /// Whether the grade function is convex in the truth-value sense: every
    /// point between two others carries at least their smaller grade.
    ///
    /// Runs in linear time by comparing each grade against the smaller of
    /// the running maxima from the left and from the right.
    pub fn is_convex(&self) -> bool {
        let m = self.grades.len();
        let mut suffix = vec![0.0f64; m];
        let mut acc = 0.0f64;
        for i in (0..m).rev() {
            acc = acc.max(self.grades[i]);
            suffix[i] = acc;
        }
        let mut prefix = 0.0f64;
        for (&g, &s) in self.grades.iter().zip(&suffix) {
            prefix = prefix.max(g);
            if g < prefix.min(s) {
                return false;
            }
        }
        true
    }

    pub fn to_csv(&self) -> String {
        io::series_to_csv(self.grid.resolution(), &self.grades)
    }

    pub fn from_csv_str(text: &str) -> Result<Self, FtvError> {
        let (n, grades) = io::parse_series(text).map_err(|e| FtvError::Parse {
            line: e.line,
            msg: e.msg,
        })?;
        let grid = Grid::new(n)?;
        Self::new(&grid, grades)
    }

    pub fn load(path: &Path) -> Result<Self, FtvError> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), FtvError> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Sup-min convolution of two truth values through a binary operator.
pub fn convolve(op: &BinaryOp, f: &Ftv, g: &Ftv, mode: ConvMode) -> Result<Ftv, FtvError> {
    if op.grid() != f.grid() || f.grid != g.grid {
        return Err(FtvError::GridMismatch);
    }
    if mode == ConvMode::Exact && !op.is_closed() {
        return Err(FtvError::ClosureRequired);
    }
    let grid = &f.grid;
    let n = grid.resolution();
    let mut out = vec![0.0f64; grid.point_count()];
    for i in 0..=n {
        let fi = f.grades[i];
        if fi == 0.0 {
            continue;
        }
        for j in 0..=n {
            let m = fi.min(g.grades[j]);
            if m == 0.0 {
                continue;
            }
            let z = grid.snap(op.value(i, j))?;
            if m > out[z] {
                out[z] = m;
            }
        }
    }
    Ftv::new(grid, out)
}

/// Truth-value meet: convolution through the minimum.
pub fn meet(f: &Ftv, g: &Ftv) -> Result<Ftv, FtvError> {
    let op = basic_op(&f.grid, BasicOpKind::Tm);
    convolve(&op, f, g, ConvMode::Exact)
}

/// Truth-value join: convolution through the maximum.
pub fn join(f: &Ftv, g: &Ftv) -> Result<Ftv, FtvError> {
    let op = basic_op(&f.grid, BasicOpKind::Sm);
    convolve(&op, f, g, ConvMode::Exact)
}

/// Uniformly random grades, deterministic in the seed.
pub fn random_ftv(grid: &Grid, seed: u64) -> Ftv {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grades = (0..grid.point_count()).map(|_| rng.gen()).collect();
    Ftv {
        grid: grid.clone(),
        grades,
    }
}

/// Random convex truth value: the grades of [`random_ftv`] rearranged to
/// rise to a uniformly chosen peak and fall after it.
pub fn random_convex(grid: &Grid, seed: u64) -> Ftv {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grades: Vec<f64> = (0..grid.point_count()).map(|_| rng.gen()).collect();
    let peak = rng.gen_range(0..grid.point_count());
    grades.sort_by(f64::total_cmp);
    let descending: Vec<f64> = grades.drain(peak + 1..).collect();
    grades.extend(descending.into_iter().rev());
    Ftv {
        grid: grid.clone(),
        grades,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Grid {
        Grid::new(n).unwrap()
    }

    #[test]
    fn convexity_matches_the_definition_on_small_cases() {
        let g = grid(2);
        assert!(Ftv::new(&g, vec![0.0, 1.0, 0.0]).unwrap().is_convex());
        assert!(Ftv::new(&g, vec![0.2, 0.2, 0.9]).unwrap().is_convex());
        assert!(!Ftv::new(&g, vec![1.0, 0.0, 1.0]).unwrap().is_convex());
        assert!(!Ftv::new(&g, vec![0.5, 0.1, 0.4]).unwrap().is_convex());
    }

    #[test]
    fn meet_with_the_constant_one_is_the_running_suffix_maximum() {
        let g = grid(4);
        let f = Ftv::new(&g, vec![0.1, 0.7, 0.3, 0.5, 0.2]).unwrap();
        let one = Ftv::constant(&g, 1.0).unwrap();
        let m = meet(&f, &one).unwrap();
        assert_eq!(m.grades(), &[0.7, 0.7, 0.5, 0.5, 0.2]);
    }

    #[test]
    fn join_of_indicators_is_the_indicator_of_the_larger_point() {
        let g = grid(4);
        let a = Ftv::indicator(&g, 0.25).unwrap();
        let b = Ftv::indicator(&g, 0.5).unwrap();
        let j = join(&a, &b).unwrap();
        assert_eq!(j, Ftv::indicator(&g, 0.5).unwrap());
    }

    #[test]
    fn neutral_indicator_leaves_any_truth_value_unchanged() {
        let g = grid(8);
        let op = crate::ops::build_operator(
            &g,
            &crate::ops::OperatorSpec::new(crate::ops::Family::UnderlineUninorm).with_e(0.5),
        )
        .unwrap();
        let f = random_ftv(&g, 7);
        let e = Ftv::indicator(&g, 0.5).unwrap();
        let out = convolve(&op, &f, &e, ConvMode::Exact).unwrap();
        assert_eq!(out.grades(), f.grades());
    }

    #[test]
    fn convolution_agrees_with_a_scan_over_output_points() {
        let g = grid(8);
        let op = crate::ops::basic_op(&g, BasicOpKind::Sl);
        let f = random_ftv(&g, 1);
        let h = random_ftv(&g, 2);
        let fast = convolve(&op, &f, &h, ConvMode::Exact).unwrap();
        for z in 0..=8 {
            let mut best = 0.0f64;
            for i in 0..=8 {
                for j in 0..=8 {
                    if g.snap(op.value(i, j)).unwrap() == z {
                        best = best.max(f.grade(i).min(h.grade(j)));
                    }
                }
            }
            assert_eq!(fast.grade(z), best, "output point {z}");
        }
    }

    #[test]
    fn exact_mode_refuses_operators_that_leave_the_grid() {
        let g = grid(8);
        let op = crate::ops::basic_op(&g, BasicOpKind::Tp);
        let f = random_ftv(&g, 3);
        let h = random_ftv(&g, 4);
        assert!(matches!(
            convolve(&op, &f, &h, ConvMode::Exact),
            Err(FtvError::ClosureRequired)
        ));
        assert!(convolve(&op, &f, &h, ConvMode::Snap).is_ok());
    }

    #[test]
    fn random_convex_is_convex_and_seed_stable() {
        let g = grid(16);
        for seed in 0..50 {
            let f = random_convex(&g, seed);
            assert!(f.is_convex(), "seed {seed}");
        }
        assert_eq!(random_convex(&g, 9).grades(), random_convex(&g, 9).grades());
        assert_ne!(random_convex(&g, 9).grades(), random_convex(&g, 10).grades());
    }

    #[test]
    fn csv_round_trip_preserves_grades() {
        let g = grid(6);
        let f = random_ftv(&g, 11);
        let back = Ftv::from_csv_str(&f.to_csv()).unwrap();
        for i in 0..=6 {
            assert!((back.grade(i) - f.grade(i)).abs() < 1e-10);
        }
    }

    #[test]
    fn shape_and_range_violations_are_rejected() {
        let g = grid(4);
        assert!(matches!(
            Ftv::new(&g, vec![0.0; 4]),
            Err(FtvError::Shape { expected: 5, .. })
        ));
        assert!(matches!(
            Ftv::new(&g, vec![0.0, 0.0, 1.5, 0.0, 0.0]),
            Err(FtvError::GradeOutOfRange(_))
        ));
    }
}
