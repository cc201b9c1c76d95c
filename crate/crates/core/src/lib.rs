//! Aggregation operators on a quantized unit interval.
//!
//! The crate tabulates families of binary operators (t-norms, t-conorms,
//! uninorms, nullnorms and their relaxations with an absorbing element) on
//! the uniform grid `{0, 1/n, ..., 1}`, extends them to fuzzy truth values
//! through sup-min convolution, and mechanically checks distributivity laws
//! between the extended operators, including randomized counterexample
//! search when a law's hypotheses are deliberately broken.

pub mod ftv;
pub mod grid;
mod io;
pub mod lab;
pub mod ops;

pub use ftv::{convolve, join, meet, random_convex, random_ftv, ConvMode, Ftv, FtvError};
pub use grid::{Grid, GridError};
pub use ops::{
    axiom_report, basic_op, build_operator, check_conditional_distributivity, idempotent_uninorm,
    rescale_block, tconorm_from_additive_generator, tnorm_from_multiplicative_generator,
    underlying_ops, AxiomReport, BasicOpKind, BinaryOp, BlockSlot, BlockSpec, BoundaryClass,
    CdMode, CdReport, Family, Generator, OpError, OperatorSpec,
};
