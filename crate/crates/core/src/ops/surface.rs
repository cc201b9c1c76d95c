//! Continuous reading of a unit-square operator, used wherever a block
//! formula needs values between grid points.

use super::basic::BasicOpKind;
use super::generator::Generator;
use super::table::BinaryOp;

#[derive(Debug, Clone)]
pub enum Surface {
    /// Closed-form basic operator.
    Basic(BasicOpKind),
    /// Nilpotent t-conorm from an additive generator.
    GenTconorm(Generator),
    /// Strict t-norm from a multiplicative generator.
    GenTnorm(Generator),
    /// Arbitrary table, read through bilinear interpolation.
    Table(BinaryOp),
    /// Ordinal sum with a product block: minimum below `alpha`, the product
    /// rescaled onto `[alpha, 1]^2` above it. `alpha = 0` is the plain
    /// product.
    OrdinalTp { alpha: f64 },
}

impl Surface {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Surface::Basic(kind) => kind.eval(x, y),
            Surface::GenTconorm(s) => s.invert((s.value_at(x) + s.value_at(y)).min(1.0)),
            Surface::GenTnorm(s) => {
                if x == 0.0 || y == 0.0 {
                    0.0
                } else {
                    s.invert(s.value_at(x) * s.value_at(y))
                }
            }
            Surface::Table(op) => op.eval(x, y),
            Surface::OrdinalTp { alpha } => {
                if x >= *alpha && y >= *alpha {
                    alpha + (x - alpha) * (y - alpha) / (1.0 - alpha)
                } else {
                    x.min(y)
                }
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Surface::Basic(kind) => kind.tag().to_string(),
            Surface::GenTconorm(_) => "generated-tconorm".into(),
            Surface::GenTnorm(_) => "generated-tnorm".into(),
            Surface::Table(_) => "table".into(),
            Surface::OrdinalTp { alpha } => format!("ordinal-TP(alpha={alpha})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordinal_product_block_has_neutral_one() {
        let s = Surface::OrdinalTp { alpha: 0.5 };
        for x in [0.0, 0.3, 0.5, 0.7, 1.0] {
            assert!((s.eval(x, 1.0) - x).abs() <= 1e-12);
        }
        assert_eq!(s.eval(0.75, 0.75), 0.5 + 0.25 * 0.25 / 0.5);
        assert_eq!(s.eval(0.25, 0.75), 0.25);
    }

    #[test]
    fn zero_alpha_is_the_plain_product() {
        let s = Surface::OrdinalTp { alpha: 0.0 };
        assert_eq!(s.eval(0.5, 0.5), 0.25);
    }
}
