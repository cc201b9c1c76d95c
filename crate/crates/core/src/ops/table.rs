//! Tabulated binary operators and their continuous (interpolated) reading.

use super::basic::BasicOpKind;
use super::{BlockSlot, Family, OpError};
use crate::grid::{table_is_grid_closed, Grid};
use crate::io;

/// Provenance of a tabulated operator: its family tag, the parameters the
/// family was built with, and a short description of each block.
#[derive(Debug, Clone, PartialEq)]
pub struct OpMeta {
    pub family: Family,
    pub kind: Option<BasicOpKind>,
    pub e: Option<f64>,
    pub k: Option<f64>,
    pub a: Option<f64>,
    pub blocks: Vec<(BlockSlot, String)>,
}

impl OpMeta {
    pub fn new(family: Family) -> Self {
        OpMeta {
            family,
            kind: None,
            e: None,
            k: None,
            a: None,
            blocks: Vec::new(),
        }
    }

    pub fn with_kind(mut self, kind: BasicOpKind) -> Self {
        self.kind = Some(kind);
        self
    }

    pub fn with_e(mut self, e: f64) -> Self {
        self.e = Some(e);
        self
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_a(mut self, a: f64) -> Self {
        self.a = Some(a);
        self
    }

    pub fn with_block(mut self, slot: BlockSlot, desc: impl Into<String>) -> Self {
        self.blocks.push((slot, desc.into()));
        self
    }
}

/// A binary operator tabulated on the full grid square.
///
/// `values` is row-major in the first operand: entry `(i, j)` holds the
/// operator applied to `(x_i, x_j)`. The `closed` flag records whether every
/// entry is itself a grid point, which is what exact-mode convolution
/// requires.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryOp {
    grid: Grid,
    values: Vec<f64>,
    meta: OpMeta,
    closed: bool,
}

impl BinaryOp {
    /// Evaluates `f` at every pair of grid points in real arithmetic.
    pub fn tabulate(grid: &Grid, meta: OpMeta, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::tabulate_indexed(grid, meta, |_, _, x, y| f(x, y))
    }

    /// Like [`BinaryOp::tabulate`] but also hands the grid indices to the
    /// closure, for families whose definition reads tabulated data.
    pub fn tabulate_indexed(
        grid: &Grid,
        meta: OpMeta,
        f: impl Fn(usize, usize, f64, f64) -> f64,
    ) -> Self {
        let m = grid.point_count();
        let mut values = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                values.push(f(i, j, grid.point(i), grid.point(j)));
            }
        }
        let closed = table_is_grid_closed(grid, &values);
        BinaryOp {
            grid: grid.clone(),
            values,
            meta,
            closed,
        }
    }

    /// Wraps an existing table, validating shape and range.
    pub fn from_values(grid: &Grid, meta: OpMeta, values: Vec<f64>) -> Result<Self, OpError> {
        let m = grid.point_count();
        if values.len() != m * m {
            return Err(OpError::TableShape {
                expected: m * m,
                found: values.len(),
            });
        }
        if let Some(&bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(OpError::ValueOutOfRange(bad));
        }
        let closed = table_is_grid_closed(grid, &values);
        Ok(BinaryOp {
            grid: grid.clone(),
            values,
            meta,
            closed,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn meta(&self) -> &OpMeta {
        &self.meta
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.point_count() + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Reads the table at an arbitrary point of the unit square by bilinear
    /// interpolation. At grid points this returns the table entry exactly.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let (i, tx) = cell(x, self.grid.resolution());
        let (j, ty) = cell(y, self.grid.resolution());
        if tx == 0.0 && ty == 0.0 {
            return self.value(i, j);
        }
        let i1 = (i + 1).min(self.grid.resolution());
        let j1 = (j + 1).min(self.grid.resolution());
        let v00 = self.value(i, j);
        let v10 = self.value(i1, j);
        let v01 = self.value(i, j1);
        let v11 = self.value(i1, j1);
        let a = v00 + tx * (v10 - v00);
        let b = v01 + tx * (v11 - v01);
        a + ty * (b - a)
    }

    pub fn to_csv(&self) -> String {
        io::matrix_to_csv(self.grid.resolution(), &self.values)
    }

    /// Parses a table CSV; the result carries the `custom-table` family tag.
    pub fn from_csv_str(text: &str) -> Result<Self, OpError> {
        let (n, values) = io::parse_matrix(text).map_err(|e| OpError::Parse {
            line: e.line,
            msg: e.msg,
        })?;
        let grid = Grid::new(n)?;
        BinaryOp::from_values(&grid, OpMeta::new(Family::CustomTable), values)
    }
}

/// Splits `v` into a cell index and the fractional offset within the cell,
/// clamping to the unit interval.
fn cell(v: f64, n: usize) -> (usize, f64) {
    let v = v.clamp(0.0, 1.0);
    let scaled = v * n as f64;
    let i = scaled.floor() as usize;
    if i >= n {
        (n, 0.0)
    } else {
        (i, scaled - i as f64)
    }
}

/// The restriction of a rescaled operator to a subsquare `[low, high]^2`,
/// tabulated at the grid points that fall inside it.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialTable {
    grid: Grid,
    lo: usize,
    hi: usize,
    values: Vec<f64>,
}

impl PartialTable {
    pub fn low_index(&self) -> usize {
        self.lo
    }

    pub fn high_index(&self) -> usize {
        self.hi
    }

    /// Entry at absolute grid indices `(i, j)`, both within `lo..=hi`.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        let w = self.hi - self.lo + 1;
        self.values[(i - self.lo) * w + (j - self.lo)]
    }
}

/// Rescales `op` from the unit square onto `[low, high]^2`.
///
/// The entry at `(x, y)` is `low + (high - low) * op(u, v)` with `u, v` the
/// affine pullbacks of `x, y`; off-grid pullbacks read `op` through bilinear
/// interpolation. Both endpoints must be grid points.
pub fn rescale_block(op: &BinaryOp, low: f64, high: f64) -> Result<PartialTable, OpError> {
    if low >= high {
        return Err(OpError::InvalidInterval { low, high });
    }
    let grid = op.grid().clone();
    let lo = grid.index_of(low).ok_or(OpError::OffGridEndpoint(low))?;
    let hi = grid.index_of(high).ok_or(OpError::OffGridEndpoint(high))?;
    let width = high - low;
    let m = hi - lo + 1;
    let mut values = Vec::with_capacity(m * m);
    for i in lo..=hi {
        for j in lo..=hi {
            let u = (grid.point(i) - low) / width;
            let v = (grid.point(j) - low) / width;
            values.push(low + width * op.eval(u, v));
        }
    }
    Ok(PartialTable {
        grid,
        lo,
        hi,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::basic::basic_op;

    #[test]
    fn bounded_difference_rescaled_to_upper_half() {
        let g = Grid::new(4).unwrap();
        let tl = basic_op(&g, BasicOpKind::Tl);
        let block = rescale_block(&tl, 0.5, 1.0).unwrap();
        assert_eq!(block.value(3, 3), 0.5);
        assert_eq!(block.value(4, 3), 0.75);
        assert_eq!(block.value(4, 4), 1.0);
    }

    #[test]
    fn identity_rescale_reproduces_the_table() {
        let g = Grid::new(8).unwrap();
        let sp = basic_op(&g, BasicOpKind::Sp);
        let block = rescale_block(&sp, 0.0, 1.0).unwrap();
        for i in 0..=8 {
            for j in 0..=8 {
                assert_eq!(block.value(i, j), sp.value(i, j));
            }
        }
    }

    #[test]
    fn maximum_rescaled_to_quarter_band() {
        let g = Grid::new(4).unwrap();
        let sm = basic_op(&g, BasicOpKind::Sm);
        let block = rescale_block(&sm, 0.25, 0.5).unwrap();
        assert_eq!(block.value(1, 2), 0.5);
        assert_eq!(block.value(1, 1), 0.25);
    }

    #[test]
    fn degenerate_interval_is_rejected() {
        let g = Grid::new(4).unwrap();
        let sm = basic_op(&g, BasicOpKind::Sm);
        assert!(matches!(
            rescale_block(&sm, 0.5, 0.5),
            Err(OpError::InvalidInterval { .. })
        ));
        assert!(matches!(
            rescale_block(&sm, 0.3, 0.75),
            Err(OpError::OffGridEndpoint(_))
        ));
    }

    #[test]
    fn interpolation_is_exact_at_grid_points_and_linear_between() {
        let g = Grid::new(4).unwrap();
        let tp = basic_op(&g, BasicOpKind::Tp);
        assert_eq!(tp.eval(0.5, 0.75), tp.value(2, 3));
        // Product is bilinear on every cell, so interpolation reproduces it.
        assert!((tp.eval(0.3, 0.6) - 0.18).abs() <= 1e-12);
    }

    #[test]
    fn csv_roundtrip_keeps_values_and_closure() {
        let g = Grid::new(4).unwrap();
        let tl = basic_op(&g, BasicOpKind::Tl);
        let parsed = BinaryOp::from_csv_str(&tl.to_csv()).unwrap();
        assert_eq!(parsed.values(), tl.values());
        assert!(parsed.is_closed());
        assert_eq!(parsed.meta().family, Family::CustomTable);
    }
}
