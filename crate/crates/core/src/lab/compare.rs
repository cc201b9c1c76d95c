//! Quantization-aware equality of grade series.

use std::fmt;

/// How two grade series are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// Pointwise absolute difference.
    Strict,
    /// Each grade must be covered, up to `tol`, by the other series within
    /// one index step. Rounding inside convolution displaces mass along the
    /// output axis, never in grade, so the honest error model for rounded
    /// operators is positional.
    Dilated,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Strict => "strict",
            Comparison::Dilated => "dilated",
        })
    }
}

impl std::str::FromStr for Comparison {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(Comparison::Strict),
            "dilated" => Ok(Comparison::Dilated),
            _ => Err(format!("unknown comparison `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Deviation {
    pub max_deviation: f64,
    pub violations: usize,
    /// Index of the largest deviation; 0 when the series are equal.
    pub worst_index: usize,
    pub pass: bool,
}

fn window_max(series: &[f64], z: usize) -> f64 {
    let lo = z.saturating_sub(1);
    let hi = (z + 1).min(series.len() - 1);
    series[lo..=hi].iter().fold(0.0f64, |acc, &v| acc.max(v))
}

/// Measures how far `a` and `b` are from being equal under the chosen
/// comparison. Symmetric in its arguments.
pub fn compare_series(a: &[f64], b: &[f64], comparison: Comparison, tol: f64) -> Deviation {
    assert_eq!(a.len(), b.len(), "grade series must share a grid");
    let mut max_deviation = 0.0f64;
    let mut worst_index = 0usize;
    let mut violations = 0usize;
    for z in 0..a.len() {
        let d = match comparison {
            Comparison::Strict => (a[z] - b[z]).abs(),
            Comparison::Dilated => {
                let excess_a = a[z] - window_max(b, z);
                let excess_b = b[z] - window_max(a, z);
                excess_a.max(excess_b).max(0.0)
            }
        };
        if d > tol {
            violations += 1;
        }
        if d > max_deviation {
            max_deviation = d;
            worst_index = z;
        }
    }
    Deviation {
        max_deviation,
        violations,
        worst_index,
        pass: violations == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_series_pass_strict_with_zero_tolerance() {
        let a = [0.0, 0.5, 1.0, 0.25];
        let d = compare_series(&a, &a, Comparison::Strict, 0.0);
        assert!(d.pass);
        assert_eq!(d.max_deviation, 0.0);
        assert_eq!(d.violations, 0);
    }

    #[test]
    fn strict_reports_the_worst_index() {
        let a = [0.0, 0.5, 1.0];
        let b = [0.0, 0.8, 0.9];
        let d = compare_series(&a, &b, Comparison::Strict, 0.0);
        assert!(!d.pass);
        assert_eq!(d.worst_index, 1);
        assert!((d.max_deviation - 0.3).abs() < 1e-12);
        assert_eq!(d.violations, 2);
    }

    #[test]
    fn one_index_shift_passes_dilated() {
        let a = [0.0, 0.7, 0.0, 0.0, 0.3];
        let b = [0.7, 0.0, 0.0, 0.3, 0.0];
        let d = compare_series(&a, &b, Comparison::Dilated, 0.0);
        assert!(d.pass, "deviation {}", d.max_deviation);
    }

    #[test]
    fn two_index_shift_fails_dilated() {
        let a = [0.0, 0.0, 0.9, 0.0, 0.0];
        let b = [0.9, 0.0, 0.0, 0.0, 0.0];
        let d = compare_series(&a, &b, Comparison::Dilated, 0.0);
        assert!(!d.pass);
        assert!((d.max_deviation - 0.9).abs() < 1e-12);
    }

    #[test]
    fn dilation_is_symmetric() {
        let a = [0.1, 0.9, 0.2, 0.0];
        let b = [0.4, 0.1, 0.6, 0.3];
        let ab = compare_series(&a, &b, Comparison::Dilated, 0.0);
        let ba = compare_series(&b, &a, Comparison::Dilated, 0.0);
        assert_eq!(ab.max_deviation, ba.max_deviation);
        assert_eq!(ab.violations, ba.violations);
    }
}
