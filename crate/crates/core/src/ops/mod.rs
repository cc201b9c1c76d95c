//! Construction and inspection of binary aggregation operators.
//!
//! Operators are tabulated on a [`Grid`](crate::grid::Grid) in real
//! arithmetic; rounding onto the grid happens only later, inside
//! convolution. Families with internal structure (rescaled blocks,
//! generator-built norms, boundary functions) are assembled by
//! [`build_operator`] from a declarative [`OperatorSpec`].

mod axiom;
mod basic;
mod build;
mod cd;
mod generator;
mod specfile;
mod surface;
mod table;

pub use axiom::{
    axiom_report, underlying_ops, validate_nullnorm, validate_tconorm, validate_uninorm,
    validate_zk_operator, AxiomReport, BoundaryClass, NullnormProfile, UninormProfile,
};
pub use basic::{basic_op, BasicOpKind};
pub use build::{build_operator, idempotent_uninorm, BlockSpec, OperatorSpec, RawTable};
pub use cd::{check_conditional_distributivity, CdMode, CdReport};
pub use generator::{
    tconorm_from_additive_generator, tnorm_from_multiplicative_generator, Direction, Generator,
};
pub use specfile::{load_operator_spec, parse_operator_spec};
pub use surface::Surface;
pub use table::{rescale_block, BinaryOp, OpMeta, PartialTable};

use crate::grid::GridError;
use std::fmt;
use thiserror::Error;

/// Tolerance for exact-equality checks on tabulated values (neutral and
/// absorbing elements, commutativity, idempotence).
pub const EQ_TOL: f64 = 1e-12;

/// Tolerance below which an interpolated associativity residual still
/// counts as associative.
pub const ASSOC_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum OpError {
    #[error("invalid interval: low {low} must lie strictly below high {high}")]
    InvalidInterval { low: f64, high: f64 },
    #[error("interval endpoint {0} is not a grid point")]
    OffGridEndpoint(f64),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("invalid boundary function: {0}")]
    InvalidBoundary(String),
    #[error("family {family} requires {condition}")]
    SpecViolation { family: Family, condition: String },
    #[error("family {family} is missing block {slot}")]
    MissingBlock { family: Family, slot: BlockSlot },
    #[error("family {family} requires a generator")]
    MissingGenerator { family: Family },
    #[error("invalid block {slot}: {msg}")]
    InvalidBlock { slot: BlockSlot, msg: String },
    #[error("operators are tabulated on different grids")]
    GridMismatch,
    #[error("{0} is not a neutral element of the operator")]
    InvalidNeutral(f64),
    #[error("table value {0} lies outside [0,1]")]
    ValueOutOfRange(f64),
    #[error("table has {found} entries, expected {expected}")]
    TableShape { expected: usize, found: usize },
    #[error("operator validation failed: {0}")]
    Validation(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Operator families [`build_operator`] understands.
///
/// The disjunctive and conjunctive uninorm/nullnorm families come in the
/// three matched cases that admit conditional distributivity; `zk-*`
/// families carry an absorbing element but drop commutativity and
/// associativity requirements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    BasicTnorm,
    BasicTconorm,
    IdempotentUninorm,
    UnderlineUninorm,
    OverlineUninorm,
    UninormDisjI,
    UninormDisjII,
    UninormDisjIII,
    UninormConjI,
    UninormConjII,
    UninormConjIII,
    NullnormDisjI,
    NullnormDisjII,
    NullnormDisjIII,
    NullnormConjI,
    NullnormConjII,
    NullnormConjIII,
    ZkTconormII,
    ZkFTconorm,
    ZkFUmax,
    ZkFUmin,
    CustomTable,
}

impl Family {
    pub const ALL: [Family; 22] = [
        Family::BasicTnorm,
        Family::BasicTconorm,
        Family::IdempotentUninorm,
        Family::UnderlineUninorm,
        Family::OverlineUninorm,
        Family::UninormDisjI,
        Family::UninormDisjII,
        Family::UninormDisjIII,
        Family::UninormConjI,
        Family::UninormConjII,
        Family::UninormConjIII,
        Family::NullnormDisjI,
        Family::NullnormDisjII,
        Family::NullnormDisjIII,
        Family::NullnormConjI,
        Family::NullnormConjII,
        Family::NullnormConjIII,
        Family::ZkTconormII,
        Family::ZkFTconorm,
        Family::ZkFUmax,
        Family::ZkFUmin,
        Family::CustomTable,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::BasicTnorm => "basic-tnorm",
            Family::BasicTconorm => "basic-tconorm",
            Family::IdempotentUninorm => "idempotent-uninorm",
            Family::UnderlineUninorm => "underline-uninorm",
            Family::OverlineUninorm => "overline-uninorm",
            Family::UninormDisjI => "uninorm-disj-i",
            Family::UninormDisjII => "uninorm-disj-ii",
            Family::UninormDisjIII => "uninorm-disj-iii",
            Family::UninormConjI => "uninorm-conj-i",
            Family::UninormConjII => "uninorm-conj-ii",
            Family::UninormConjIII => "uninorm-conj-iii",
            Family::NullnormDisjI => "nullnorm-disj-i",
            Family::NullnormDisjII => "nullnorm-disj-ii",
            Family::NullnormDisjIII => "nullnorm-disj-iii",
            Family::NullnormConjI => "nullnorm-conj-i",
            Family::NullnormConjII => "nullnorm-conj-ii",
            Family::NullnormConjIII => "nullnorm-conj-iii",
            Family::ZkTconormII => "zk-tconorm-ii",
            Family::ZkFTconorm => "zk-F-tconorm",
            Family::ZkFUmax => "zk-F-umax",
            Family::ZkFUmin => "zk-F-umin",
            Family::CustomTable => "custom-table",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|fam| fam.tag() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// Block positions in the piecewise family formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockSlot {
    S,
    S1,
    S2,
    T,
    T1,
    T2,
    A,
    A1,
    A2,
    A3,
    B,
    B1,
    B2,
    B3,
}

impl BlockSlot {
    pub fn name(self) -> &'static str {
        match self {
            BlockSlot::S => "S",
            BlockSlot::S1 => "S1",
            BlockSlot::S2 => "S2",
            BlockSlot::T => "T",
            BlockSlot::T1 => "T1",
            BlockSlot::T2 => "T2",
            BlockSlot::A => "A",
            BlockSlot::A1 => "A1",
            BlockSlot::A2 => "A2",
            BlockSlot::A3 => "A3",
            BlockSlot::B => "B",
            BlockSlot::B1 => "B1",
            BlockSlot::B2 => "B2",
            BlockSlot::B3 => "B3",
        }
    }

    pub const ALL: [BlockSlot; 14] = [
        BlockSlot::S,
        BlockSlot::S1,
        BlockSlot::S2,
        BlockSlot::T,
        BlockSlot::T1,
        BlockSlot::T2,
        BlockSlot::A,
        BlockSlot::A1,
        BlockSlot::A2,
        BlockSlot::A3,
        BlockSlot::B,
        BlockSlot::B1,
        BlockSlot::B2,
        BlockSlot::B3,
    ];
}

impl fmt::Display for BlockSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BlockSlot {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BlockSlot::ALL
            .into_iter()
            .find(|slot| slot.name() == s)
            .ok_or_else(|| format!("unknown block slot `{s}`"))
    }
}
