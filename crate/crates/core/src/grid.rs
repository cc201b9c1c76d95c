//! The quantized unit interval every operator and fuzzy truth value is
//! tabulated on.

use thiserror::Error;

/// Absolute tolerance separating genuine grid membership from float noise.
pub const GRID_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("invalid resolution {0}: need at least 2 subintervals")]
    InvalidResolution(usize),
    #[error("value {0} lies outside [0,1]")]
    OutOfRange(f64),
}

/// Uniform quantization of `[0,1]` into `n` subintervals, carrying the
/// points `x_i = i/n` for `i = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: usize,
    points: Vec<f64>,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self, GridError> {
        if n < 2 {
            return Err(GridError::InvalidResolution(n));
        }
        let points = (0..=n).map(|i| i as f64 / n as f64).collect();
        Ok(Grid { n, points })
    }

    /// Number of subintervals.
    pub fn resolution(&self) -> usize {
        self.n
    }

    /// Number of grid points, `n + 1`.
    pub fn point_count(&self) -> usize {
        self.n + 1
    }

    pub fn point(&self, i: usize) -> f64 {
        self.points[i]
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Index of the grid point nearest to `v`; ties round upward.
    pub fn snap(&self, v: f64) -> Result<usize, GridError> {
        if !(0.0..=1.0).contains(&v) {
            return Err(GridError::OutOfRange(v));
        }
        let idx = (v * self.n as f64 + 0.5).floor() as usize;
        Ok(idx.min(self.n))
    }

    /// Exact grid index of `v`, when `v` is a grid point up to [`GRID_EPS`].
    pub fn index_of(&self, v: f64) -> Option<usize> {
        let r = (v * self.n as f64).round();
        if !(0.0..=self.n as f64).contains(&r) {
            return None;
        }
        let i = r as usize;
        if (v - self.points[i]).abs() <= GRID_EPS {
            Some(i)
        } else {
            None
        }
    }
}

/// True iff every entry of `values` is itself a grid point within
/// [`GRID_EPS`]. Operators with this property can be convolved without any
/// rounding step.
pub fn table_is_grid_closed(grid: &Grid, values: &[f64]) -> bool {
    values.iter().all(|&v| grid.index_of(v).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_subintervals_have_five_points() {
        let g = Grid::new(4).unwrap();
        assert_eq!(g.points(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn two_subintervals_have_three_points() {
        let g = Grid::new(2).unwrap();
        assert_eq!(g.points(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn resolution_below_two_is_rejected() {
        assert_eq!(Grid::new(1).unwrap_err(), GridError::InvalidResolution(1));
    }

    #[test]
    fn snap_rounds_to_nearest() {
        let g = Grid::new(4).unwrap();
        assert_eq!(g.snap(0.3).unwrap(), 1);
        assert_eq!(g.snap(1.0).unwrap(), 4);
    }

    #[test]
    fn snap_breaks_ties_upward() {
        let g = Grid::new(4).unwrap();
        assert_eq!(g.snap(0.375).unwrap(), 2);
        assert_eq!(g.snap(0.125).unwrap(), 1);
    }

    #[test]
    fn snap_rejects_values_outside_unit_interval() {
        let g = Grid::new(4).unwrap();
        assert_eq!(g.snap(-0.1).unwrap_err(), GridError::OutOfRange(-0.1));
        assert!(g.snap(1.1).is_err());
    }

    #[test]
    fn index_of_recognizes_grid_points_only() {
        let g = Grid::new(8).unwrap();
        assert_eq!(g.index_of(0.625), Some(5));
        assert_eq!(g.index_of(0.6), None);
        assert_eq!(g.index_of(1.0 + 1e-15), Some(8));
    }

    #[test]
    fn min_table_is_closed_product_table_is_not() {
        let g = Grid::new(4).unwrap();
        let mut min_vals = Vec::new();
        let mut prod_vals = Vec::new();
        for &x in g.points() {
            for &y in g.points() {
                min_vals.push(x.min(y));
                prod_vals.push(x * y);
            }
        }
        assert!(table_is_grid_closed(&g, &min_vals));
        assert!(!table_is_grid_closed(&g, &prod_vals));
    }

    #[test]
    fn bounded_sum_table_is_closed() {
        let g = Grid::new(4).unwrap();
        let vals: Vec<f64> = g
            .points()
            .iter()
            .flat_map(|&x| g.points().iter().map(move |&y| (x + y - 1.0).max(0.0)))
            .collect();
        assert!(table_is_grid_closed(&g, &vals));
    }
}
