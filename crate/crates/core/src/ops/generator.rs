//! Generator-built t-norms and t-conorms.
//!
//! A generator is a strictly monotone function tabulated at the grid
//! points. Inversion works by binary search over the sample table followed
//! by linear interpolation, so a generated operator is only as sharp as the
//! grid it was sampled on.

use super::table::{BinaryOp, OpMeta};
use super::{Family, OpError};
use crate::grid::Grid;
use crate::io;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    samples: Vec<f64>,
    direction: Direction,
}

impl Generator {
    /// Builds a generator from samples at the grid points, inferring the
    /// direction. Samples must be strictly monotone and lie in `[0,1]`.
    pub fn from_samples(samples: Vec<f64>) -> Result<Self, OpError> {
        if samples.len() < 3 {
            return Err(OpError::InvalidGenerator(format!(
                "need at least 3 samples, found {}",
                samples.len()
            )));
        }
        if let Some(&bad) = samples.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(OpError::InvalidGenerator(format!(
                "sample {bad} lies outside [0,1]"
            )));
        }
        let increasing = samples.windows(2).all(|w| w[0] < w[1]);
        let decreasing = samples.windows(2).all(|w| w[0] > w[1]);
        let direction = if increasing {
            Direction::Increasing
        } else if decreasing {
            Direction::Decreasing
        } else {
            return Err(OpError::InvalidGenerator(
                "samples are not strictly monotone".into(),
            ));
        };
        Ok(Generator { samples, direction })
    }

    /// The identity generator on `grid`, `s(x) = x`.
    pub fn identity(grid: &Grid) -> Self {
        Generator {
            samples: grid.points().to_vec(),
            direction: Direction::Increasing,
        }
    }

    pub fn from_csv_str(text: &str) -> Result<Self, OpError> {
        let (_, samples) = io::parse_series(text).map_err(|e| OpError::Parse {
            line: e.line,
            msg: e.msg,
        })?;
        Generator::from_samples(samples)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn resolution(&self) -> usize {
        self.samples.len() - 1
    }

    /// Boundary record: the sample at 0.
    pub fn at_zero(&self) -> f64 {
        self.samples[0]
    }

    /// Boundary record: the sample at 1.
    pub fn at_one(&self) -> f64 {
        *self.samples.last().unwrap()
    }

    /// Value at an arbitrary point of `[0,1]`, linearly interpolated.
    pub fn value_at(&self, x: f64) -> f64 {
        let n = self.resolution();
        let x = x.clamp(0.0, 1.0);
        let scaled = x * n as f64;
        let i = (scaled.floor() as usize).min(n - 1);
        let t = scaled - i as f64;
        if t == 0.0 {
            self.samples[i]
        } else {
            self.samples[i] + t * (self.samples[i + 1] - self.samples[i])
        }
    }

    /// Monotone inverse: the `x` with `s(x) = w`, clamped to `[0,1]` when
    /// `w` falls outside the sample range.
    pub fn invert(&self, w: f64) -> f64 {
        let n = self.resolution();
        // Segment search on the monotone samples, then a linear solve
        // within the bracketing segment.
        let seg = match self.direction {
            Direction::Increasing => {
                if w <= self.samples[0] {
                    return 0.0;
                }
                if w >= self.samples[n] {
                    return 1.0;
                }
                self.samples.partition_point(|&s| s < w) - 1
            }
            Direction::Decreasing => {
                if w >= self.samples[0] {
                    return 0.0;
                }
                if w <= self.samples[n] {
                    return 1.0;
                }
                self.samples.partition_point(|&s| s > w) - 1
            }
        };
        let (s0, s1) = (self.samples[seg], self.samples[seg + 1]);
        let t = (w - s0) / (s1 - s0);
        (seg as f64 + t) / n as f64
    }

    fn check_resolution(&self, grid: &Grid) -> Result<(), OpError> {
        if self.resolution() != grid.resolution() {
            return Err(OpError::InvalidGenerator(format!(
                "generator sampled at resolution {}, grid has {}",
                self.resolution(),
                grid.resolution()
            )));
        }
        Ok(())
    }
}

/// `S(x,y) = s^{-1}(min(s(x) + s(y), 1))` for an increasing additive
/// generator with `s(0) = 0` and `s(1) = 1`; such an `S` is a nilpotent
/// t-conorm. The identity generator yields the bounded sum.
pub fn tconorm_from_additive_generator(grid: &Grid, s: &Generator) -> Result<BinaryOp, OpError> {
    s.check_resolution(grid)?;
    if s.direction() != Direction::Increasing {
        return Err(OpError::InvalidGenerator(
            "additive t-conorm generator must be increasing".into(),
        ));
    }
    if s.at_zero().abs() > 1e-12 || (s.at_one() - 1.0).abs() > 1e-12 {
        return Err(OpError::InvalidGenerator(
            "additive t-conorm generator must satisfy s(0)=0 and s(1)=1".into(),
        ));
    }
    let meta = OpMeta::new(Family::BasicTconorm).with_block(super::BlockSlot::S, "generated");
    Ok(BinaryOp::tabulate(grid, meta, |x, y| {
        s.invert((s.value_at(x) + s.value_at(y)).min(1.0))
    }))
}

/// `T(x,y) = s^{-1}(s(x) s(y))` for an increasing multiplicative generator
/// with `s(1) = 1` and `s > 0` on `(0,1]`; the identity generator yields
/// the product.
pub fn tnorm_from_multiplicative_generator(grid: &Grid, s: &Generator) -> Result<BinaryOp, OpError> {
    s.check_resolution(grid)?;
    if s.direction() != Direction::Increasing {
        return Err(OpError::InvalidGenerator(
            "multiplicative t-norm generator must be increasing".into(),
        ));
    }
    if (s.at_one() - 1.0).abs() > 1e-12 {
        return Err(OpError::InvalidGenerator(
            "multiplicative t-norm generator must satisfy s(1)=1".into(),
        ));
    }
    if s.samples().iter().skip(1).any(|&v| v <= 0.0) {
        return Err(OpError::InvalidGenerator(
            "multiplicative t-norm generator must be positive on (0,1]".into(),
        ));
    }
    let meta = OpMeta::new(Family::BasicTnorm).with_block(super::BlockSlot::T, "generated");
    Ok(BinaryOp::tabulate(grid, meta, |x, y| {
        if x == 0.0 || y == 0.0 {
            0.0
        } else {
            s.invert(s.value_at(x) * s.value_at(y))
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::basic::{basic_op, BasicOpKind};

    #[test]
    fn identity_additive_generator_gives_bounded_sum() {
        let g = Grid::new(16).unwrap();
        let s = Generator::identity(&g);
        let op = tconorm_from_additive_generator(&g, &s).unwrap();
        let sl = basic_op(&g, BasicOpKind::Sl);
        for (a, b) in op.values().iter().zip(sl.values()) {
            assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn generated_tconorm_has_neutral_zero_and_saturates() {
        let g = Grid::new(10).unwrap();
        let s = Generator::identity(&g);
        let op = tconorm_from_additive_generator(&g, &s).unwrap();
        for i in 0..=10 {
            assert!((op.value(i, 0) - g.point(i)).abs() <= 1e-12);
        }
        assert_eq!(op.value(7, 7), 1.0);
    }

    #[test]
    fn identity_multiplicative_generator_gives_product() {
        let g = Grid::new(16).unwrap();
        let s = Generator::identity(&g);
        let op = tnorm_from_multiplicative_generator(&g, &s).unwrap();
        let tp = basic_op(&g, BasicOpKind::Tp);
        for (a, b) in op.values().iter().zip(tp.values()) {
            assert!((a - b).abs() <= 1e-9);
        }
        assert!((op.value(8, 8) - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn generated_tnorm_has_neutral_one() {
        let g = Grid::new(10).unwrap();
        let s = Generator::identity(&g);
        let op = tnorm_from_multiplicative_generator(&g, &s).unwrap();
        for i in 0..=10 {
            assert!((op.value(i, 10) - g.point(i)).abs() <= 1e-12);
        }
    }

    #[test]
    fn non_monotone_samples_are_rejected() {
        assert!(matches!(
            Generator::from_samples(vec![0.0, 0.5, 0.4, 1.0]),
            Err(OpError::InvalidGenerator(_))
        ));
    }

    #[test]
    fn inversion_is_the_interpolated_inverse() {
        let samples = vec![0.0, 0.1, 0.3, 0.6, 1.0];
        let s = Generator::from_samples(samples).unwrap();
        assert!((s.invert(0.45) - 0.625).abs() <= 1e-12);
        assert_eq!(s.invert(1.5), 1.0);
        assert_eq!(s.invert(-0.2), 0.0);
    }

    #[test]
    fn decreasing_samples_infer_direction() {
        let s = Generator::from_samples(vec![1.0, 0.6, 0.2, 0.0]).unwrap();
        assert_eq!(s.direction(), Direction::Decreasing);
        assert!((s.invert(0.4) - (1.0 / 3.0 + 0.5 / 3.0)).abs() <= 1e-12);
    }
}
