//! Declarative operator construction.
//!
//! An [`OperatorSpec`] names a family and supplies whatever parameters,
//! blocks, generator or boundary function that family needs;
//! [`build_operator`] validates the combination against the family's side
//! conditions and tabulates the operator in real arithmetic.

use super::basic::BasicOpKind;
use super::generator::{Direction, Generator};
use super::surface::Surface;
use super::table::{BinaryOp, OpMeta};
use super::{BlockSlot, Family, OpError};
use crate::grid::Grid;
use std::collections::BTreeMap;

/// A raw table payload for the `custom-table` family.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub n: usize,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum BlockSpec {
    Basic(BasicOpKind),
    Table(BinaryOp),
}

impl BlockSpec {
    fn surface(&self) -> Surface {
        match self {
            BlockSpec::Basic(kind) => Surface::Basic(*kind),
            BlockSpec::Table(op) => Surface::Table(op.clone()),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct OperatorSpec {
    pub family: Option<Family>,
    pub kind: Option<BasicOpKind>,
    pub e: Option<f64>,
    pub k: Option<f64>,
    pub a: Option<f64>,
    pub blocks: BTreeMap<BlockSlot, BlockSpec>,
    pub generator: Option<Generator>,
    pub gfun: Option<Vec<f64>>,
    pub table: Option<RawTable>,
}

impl OperatorSpec {
    pub fn new(family: Family) -> Self {
        OperatorSpec {
            family: Some(family),
            ..Default::default()
        }
    }

    pub fn basic(kind: BasicOpKind) -> Self {
        let family = if kind.is_tnorm() {
            Family::BasicTnorm
        } else {
            Family::BasicTconorm
        };
        Self::new(family).with_kind(kind)
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

    pub fn with_block(mut self, slot: BlockSlot, block: BlockSpec) -> Self {
        self.blocks.insert(slot, block);
        self
    }

    pub fn with_basic_block(self, slot: BlockSlot, kind: BasicOpKind) -> Self {
        self.with_block(slot, BlockSpec::Basic(kind))
    }

    pub fn with_generator(mut self, g: Generator) -> Self {
        self.generator = Some(g);
        self
    }

    pub fn with_gfun(mut self, samples: Vec<f64>) -> Self {
        self.gfun = Some(samples);
        self
    }

    pub fn with_table(mut self, n: usize, values: Vec<f64>) -> Self {
        self.table = Some(RawTable { n, values });
        self
    }
}

fn violation(family: Family, condition: impl Into<String>) -> OpError {
    OpError::SpecViolation {
        family,
        condition: condition.into(),
    }
}

fn need(v: Option<f64>, family: Family, name: &str) -> Result<f64, OpError> {
    let v = v.ok_or_else(|| violation(family, format!("parameter {name}")))?;
    if !(0.0 < v && v < 1.0) {
        return Err(violation(family, format!("{name} in (0,1), got {v}")));
    }
    Ok(v)
}

fn forbid(family: Family, what: &str, present: bool) -> Result<(), OpError> {
    if present {
        Err(violation(family, format!("no {what}")))
    } else {
        Ok(())
    }
}

fn forbid_blocks_except(
    spec: &OperatorSpec,
    family: Family,
    allowed: &[BlockSlot],
) -> Result<(), OpError> {
    for slot in spec.blocks.keys() {
        if !allowed.contains(slot) {
            return Err(violation(family, format!("no block {slot}")));
        }
    }
    Ok(())
}

fn require_block(spec: &OperatorSpec, family: Family, slot: BlockSlot) -> Result<Surface, OpError> {
    spec.blocks
        .get(&slot)
        .map(BlockSpec::surface)
        .ok_or(OpError::MissingBlock { family, slot })
}

/// Case-(ii) families share one generator between the nilpotent t-conorm
/// block and the strict t-norm block, so it must be increasing with the
/// fixed boundary values.
fn shared_generator(spec: &OperatorSpec, family: Family, grid: &Grid) -> Result<Generator, OpError> {
    let s = spec
        .generator
        .clone()
        .ok_or(OpError::MissingGenerator { family })?;
    if s.resolution() != grid.resolution() {
        return Err(OpError::InvalidGenerator(format!(
            "generator sampled at resolution {}, grid has {}",
            s.resolution(),
            grid.resolution()
        )));
    }
    if s.direction() != Direction::Increasing
        || s.at_zero().abs() > 1e-12
        || (s.at_one() - 1.0).abs() > 1e-12
    {
        return Err(OpError::InvalidGenerator(
            "shared case-(ii) generator must be increasing with s(0)=0 and s(1)=1".into(),
        ));
    }
    Ok(s)
}

/// Side conditions a block surface is probed against, in unit coordinates.
#[derive(Debug, Clone, Copy)]
enum BlockCond {
    /// 0 is a two-sided neutral element.
    NeutralLo,
    /// 1 is a two-sided neutral element.
    NeutralHi,
    /// `b(u, 0) = u`.
    RightNeutralLo,
    /// `b(u, 1) = u`.
    RightNeutralHi,
    /// `b(0, v) = v`.
    LeftNeutralLo,
    /// `b(1, v) = v`.
    LeftNeutralHi,
    Monotone,
    Commutative,
    /// Above `alpha` the block must agree with the rescaled product.
    TpAbove(f64),
}

const BLOCK_TOL: f64 = 1e-9;

fn check_block(
    surface: &Surface,
    slot: BlockSlot,
    conds: &[BlockCond],
    n: usize,
) -> Result<(), OpError> {
    let bad = |msg: String| OpError::InvalidBlock { slot, msg };
    let pt = |i: usize| i as f64 / n as f64;
    for &cond in conds {
        match cond {
            BlockCond::NeutralLo => {
                for i in 0..=n {
                    let u = pt(i);
                    if (surface.eval(0.0, u) - u).abs() > BLOCK_TOL
                        || (surface.eval(u, 0.0) - u).abs() > BLOCK_TOL
                    {
                        return Err(bad("0 must be a neutral element".into()));
                    }
                }
            }
            BlockCond::NeutralHi => {
                for i in 0..=n {
                    let u = pt(i);
                    if (surface.eval(1.0, u) - u).abs() > BLOCK_TOL
                        || (surface.eval(u, 1.0) - u).abs() > BLOCK_TOL
                    {
                        return Err(bad("1 must be a neutral element".into()));
                    }
                }
            }
            BlockCond::RightNeutralLo => {
                for i in 0..=n {
                    let u = pt(i);
                    if (surface.eval(u, 0.0) - u).abs() > BLOCK_TOL {
                        return Err(bad("lower edge must act as a right neutral element".into()));
                    }
                }
            }
            BlockCond::RightNeutralHi => {
                for i in 0..=n {
                    let u = pt(i);
                    if (surface.eval(u, 1.0) - u).abs() > BLOCK_TOL {
                        return Err(bad("upper edge must act as a right neutral element".into()));
                    }
                }
            }
            BlockCond::LeftNeutralLo => {
                for i in 0..=n {
                    let u = pt(i);
                    if (surface.eval(0.0, u) - u).abs() > BLOCK_TOL {
                        return Err(bad("lower edge must act as a left neutral element".into()));
                    }
                }
            }
            BlockCond::LeftNeutralHi => {
                for i in 0..=n {
                    let u = pt(i);
                    if (surface.eval(1.0, u) - u).abs() > BLOCK_TOL {
                        return Err(bad("upper edge must act as a left neutral element".into()));
                    }
                }
            }
            BlockCond::Monotone => {
                for i in 0..=n {
                    for j in 0..n {
                        let u = pt(i);
                        if surface.eval(u, pt(j + 1)) < surface.eval(u, pt(j)) - 1e-12
                            || surface.eval(pt(j + 1), u) < surface.eval(pt(j), u) - 1e-12
                        {
                            return Err(bad("block must be non-decreasing".into()));
                        }
                    }
                }
            }
            BlockCond::Commutative => {
                for i in 0..=n {
                    for j in 0..i {
                        if (surface.eval(pt(i), pt(j)) - surface.eval(pt(j), pt(i))).abs()
                            > BLOCK_TOL
                        {
                            return Err(bad("block must be commutative".into()));
                        }
                    }
                }
            }
            BlockCond::TpAbove(alpha) => {
                let reference = Surface::OrdinalTp { alpha };
                for i in 0..=n {
                    for j in 0..=n {
                        let (u, v) = (pt(i), pt(j));
                        if u >= alpha
                            && v >= alpha
                            && (surface.eval(u, v) - reference.eval(u, v)).abs() > BLOCK_TOL
                        {
                            return Err(bad(format!(
                                "block must agree with the rescaled product above {alpha}"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn tconorm_block(
    spec: &OperatorSpec,
    family: Family,
    slot: BlockSlot,
    n: usize,
) -> Result<Surface, OpError> {
    let s = require_block(spec, family, slot)?;
    check_block(
        &s,
        slot,
        &[BlockCond::Monotone, BlockCond::Commutative, BlockCond::NeutralLo],
        n,
    )?;
    Ok(s)
}

fn tnorm_block(
    spec: &OperatorSpec,
    family: Family,
    slot: BlockSlot,
    n: usize,
) -> Result<Surface, OpError> {
    let s = require_block(spec, family, slot)?;
    check_block(
        &s,
        slot,
        &[BlockCond::Monotone, BlockCond::Commutative, BlockCond::NeutralHi],
        n,
    )?;
    Ok(s)
}

/// Affine embedding of a unit-square surface onto `[low, high]^2`.
fn sq(s: &Surface, low: f64, high: f64, x: f64, y: f64) -> f64 {
    let w = high - low;
    if w <= 0.0 {
        return low;
    }
    low + w * s.eval((x - low) / w, (y - low) / w)
}

/// Affine embedding onto the rectangle `[x0,x1] x [y0,y1]` with output
/// interval `[o0, o1]`.
#[allow(clippy::too_many_arguments)]
fn rect(s: &Surface, x0: f64, x1: f64, y0: f64, y1: f64, o0: f64, o1: f64, x: f64, y: f64) -> f64 {
    o0 + (o1 - o0) * s.eval((x - x0) / (x1 - x0), (y - y0) / (y1 - y0))
}

fn interp_series(samples: &[f64], x: f64) -> f64 {
    let n = samples.len() - 1;
    let scaled = x.clamp(0.0, 1.0) * n as f64;
    let i = (scaled.floor() as usize).min(n - 1);
    let t = scaled - i as f64;
    if t == 0.0 {
        samples[i]
    } else {
        samples[i] + t * (samples[i + 1] - samples[i])
    }
}

/// Idempotent uninorm with neutral element `e` determined by a
/// non-increasing boundary function tabulated at the grid points.
///
/// Below the boundary the operator is the minimum, above it the maximum;
/// on the boundary the roles are decided by comparing against the iterated
/// boundary value, and the remaining ambiguous points take the minimum,
/// which reproduces the conjunctive representative.
pub fn idempotent_uninorm(grid: &Grid, e: f64, gfun: &[f64]) -> Result<BinaryOp, OpError> {
    let family = Family::IdempotentUninorm;
    if !(0.0 < e && e < 1.0) {
        return Err(violation(family, format!("e in (0,1), got {e}")));
    }
    let ie = grid
        .index_of(e)
        .ok_or_else(|| violation(family, format!("e on a grid point, got {e}")))?;
    if gfun.len() != grid.point_count() {
        return Err(OpError::InvalidBoundary(format!(
            "boundary function has {} samples, expected {}",
            gfun.len(),
            grid.point_count()
        )));
    }
    if let Some(&bad) = gfun.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(OpError::InvalidBoundary(format!(
            "boundary value {bad} lies outside [0,1]"
        )));
    }
    if gfun.windows(2).any(|w| w[1] > w[0] + 1e-12) {
        return Err(OpError::InvalidBoundary(
            "boundary function must be non-increasing".into(),
        ));
    }
    if (gfun[ie] - e).abs() > 1e-12 {
        return Err(OpError::InvalidBoundary(format!(
            "boundary function must fix e: g({e}) = {}",
            gfun[ie]
        )));
    }
    const TIE: f64 = 1e-12;
    let g = gfun.to_vec();
    let meta = OpMeta::new(family).with_e(e);
    Ok(BinaryOp::tabulate_indexed(grid, meta, move |i, j, x, y| {
        if i <= ie && j <= ie {
            return x.min(y);
        }
        if i >= ie && j >= ie {
            return x.max(y);
        }
        let gx = g[i];
        if y < gx - TIE {
            x.min(y)
        } else if y > gx + TIE {
            x.max(y)
        } else {
            let ggx = interp_series(&g, gx);
            if x < ggx - TIE {
                x.min(y)
            } else if x > ggx + TIE {
                x.max(y)
            } else {
                x.min(y)
            }
        }
    }))
}

/// Builds the operator a spec describes, validating the family's side
/// conditions first.
pub fn build_operator(grid: &Grid, spec: &OperatorSpec) -> Result<BinaryOp, OpError> {
    let family = spec.family.ok_or(OpError::Parse {
        line: 0,
        msg: "spec does not name a family".into(),
    })?;
    let n = grid.resolution();

    // Families that take none of kind/generator/gfun/table reject them up
    // front; the per-family arms below own the rest of the validation.
    match family {
        Family::BasicTnorm | Family::BasicTconorm => {}
        _ => forbid(family, "kind parameter", spec.kind.is_some())?,
    }
    match family {
        Family::IdempotentUninorm => {}
        _ => forbid(family, "boundary function", spec.gfun.is_some())?,
    }
    match family {
        Family::CustomTable => {}
        _ => forbid(family, "table payload", spec.table.is_some())?,
    }
    match family {
        Family::UninormDisjII
        | Family::UninormConjII
        | Family::NullnormDisjII
        | Family::NullnormConjII => {}
        _ => forbid(family, "generator", spec.generator.is_some())?,
    }

    match family {
        Family::BasicTnorm | Family::BasicTconorm => {
            forbid(family, "parameter e", spec.e.is_some())?;
            forbid(family, "parameter k", spec.k.is_some())?;
            forbid(family, "parameter a", spec.a.is_some())?;
            forbid_blocks_except(spec, family, &[])?;
            let kind = spec
                .kind
                .ok_or_else(|| violation(family, "parameter kind"))?;
            let want_tnorm = family == Family::BasicTnorm;
            if kind.is_tnorm() != want_tnorm {
                return Err(violation(family, format!("a matching kind, got {kind}")));
            }
            Ok(super::basic::basic_op(grid, kind))
        }

        Family::IdempotentUninorm => {
            forbid(family, "parameter k", spec.k.is_some())?;
            forbid(family, "parameter a", spec.a.is_some())?;
            forbid_blocks_except(spec, family, &[])?;
            let e = need(spec.e, family, "e")?;
            let gfun = spec
                .gfun
                .as_deref()
                .ok_or_else(|| violation(family, "a boundary function"))?;
            idempotent_uninorm(grid, e, gfun)
        }

        Family::UnderlineUninorm | Family::UninormConjI => {
            forbid(family, "parameter k", spec.k.is_some())?;
            forbid(family, "parameter a", spec.a.is_some())?;
            forbid_blocks_except(spec, family, &[])?;
            let e = need(spec.e, family, "e")?;
            let meta = OpMeta::new(family).with_e(e);
            Ok(BinaryOp::tabulate(grid, meta, move |x, y| {
                if x >= e && y >= e {
                    x.max(y)
                } else {
                    x.min(y)
                }
            }))
        }

        Family::OverlineUninorm | Family::UninormDisjI => {
            forbid(family, "parameter k", spec.k.is_some())?;
            forbid(family, "parameter a", spec.a.is_some())?;
            forbid_blocks_except(spec, family, &[])?;
            let e = need(spec.e, family, "e")?;
            let meta = OpMeta::new(family).with_e(e);
            Ok(BinaryOp::tabulate(grid, meta, move |x, y| {
                if x <= e && y <= e {
                    x.min(y)
                } else {
                    x.max(y)
                }
            }))
        }

        Family::UninormDisjII => {
            forbid(family, "parameter k", spec.k.is_some())?;
            forbid_blocks_except(spec, family, &[BlockSlot::S])?;
            let e = need(spec.e, family, "e")?;
            let a = need(spec.a, family, "a")?;
            if e >= a {
                return Err(violation(family, format!("e<a, got e={e}, a={a}")));
            }
            let s = upper_conorm_block(spec, family, grid)?;
            let meta = OpMeta::new(family)
                .with_e(e)
                .with_a(a)
                .with_block(BlockSlot::S, s.describe());
            Ok(BinaryOp::tabulate(grid, meta, move |x, y| {
                if x <= e && y <= e {
                    x.min(y)
                } else if x >= a && y >= a {
                    sq(&s, a, 1.0, x, y)
                } else {
                    x.max(y)
                }
            }))
        }

        Family::UninormDisjIII => {
            forbid(family, "parameter k", spec.k.is_some())?;
            forbid(family, "parameter a", spec.a.is_some())?;
            forbid_blocks_except(spec, family, &[])?;
            let e = need(spec.e, family, "e")?;
            let meta = OpMeta::new(family).with_e(e);
            Ok(BinaryOp::tabulate(grid, meta, move |x, y| {
                if x >= e && y >= e {
                    x.max(y)
                } else if x == 1.0 || y == 1.0 {
                    1.0
                } else {
                    x.min(y)
                }
            }))
        }

        Family::UninormConjII => {
            forbid(family, "parameter k", spec.k.is_some())?;
            forbid_blocks_except(spec, family, &[BlockSlot::S])?;
            let e = need(spec.e, family, "e")?;
            let a = need(spec.a, family, "a")?;
            if a < e {
                return Err(violation(family, format!("a in [e,1), got e={e}, a={a}")));
            }
            let s = upper_conorm_block(spec, family, grid)?;
            let meta = OpMeta::new(family)
                .with_e(e)
                .with_a(a)
                .with_block(BlockSlot::S, s.describe());
            Ok(BinaryOp::tabulate(grid, meta, move |x, y| {
                if x >= e && y >= e {
                    if x >= a && y >= a {
                        sq(&s, a, 1.0, x, y)
                    } else {
                        x.max(y)
                    }
                } else {
                    x.min(y)
                }
            }))
        }

        Family::UninormConjIII => {
            forbid(family, "parameter k", spec.k.is_some())?;
            forbid(family, "parameter a", spec.a.is_some())?;
            forbid_blocks_except(spec, family, &[])?;
            let e = need(spec.e, family, "e")?;
            let meta = OpMeta::new(family).with_e(e);
            Ok(BinaryOp::tabulate(grid, meta, move |x, y| {
                if x <= e && y <= e {
                    x.min(y)
                } else if x >= e && y >= e {
                    x.max(y)
                } else if (x == 1.0 && y != 0.0) || (y == 1.0 && x != 0.0) {
                    1.0
                } else {
                    x.min(y)
                }
            }))
        }

        Family::NullnormDisjI | Family::NullnormConjIII => {
            forbid(family, "parameter a", spec.a.is_some())?;
            forbid_blocks_except(spec, family, &[BlockSlot::S1, BlockSlot::S2, BlockSlot::T])?;
            let e = need(spec.e, family, "e")?;
            let k = need(spec.k, family, "k")?;
            if e >= k {
                return Err(violation(family, format!("e<k, got e={e}, k={k}")));
            }
            let s1 = tconorm_block(spec, family, BlockSlot::S1, n)?;
            let s2 = tconorm_block(spec, family, BlockSlot::S2, n)?;
            let t = tnorm_block(spec, family, BlockSlot::T, n)?;
            let meta = OpMeta::new(family)
                .with_e(e)
                .with_k(k)
                .with_block(BlockSlot::S1, s1.describe())
                .with_block(BlockSlot::S2, s2.describe())
                .with_block(BlockSlot::T, t.describe());
            Ok(BinaryOp::tabulate(grid, meta, move |x, y| {
                let (lo, hi) = (x.min(y), x.max(y));
                if hi <= e {
                    sq(&s1, 0.0, e, x, y)
                } else if lo >= e && hi <= k {
                    sq(&s2, e, k, x, y)
                } else if lo >= k {
                    sq(&t, k, 1.0, x, y)
                } else if lo <= e && hi <= k {
                    hi
                } else {
                    k
                }
            }))
        }

        Family::NullnormDisjII => {
            forbid_blocks_except(
                spec,
                family,
                &[BlockSlot::S1, BlockSlot::S2, BlockSlot::T1],
            )?;
            let e = need(spec.e, family, "e")?;
            let k = need(spec.k, family, "k")?;
            let a = need(spec.a, family, "a")?;
            if e >= k {
                return Err(violation(family, format!("e<k, got e={e}, k={k}")));
            }
            if a < k {
                return Err(violation(family, format!("a in [k,1), got k={k}, a={a}")));
            }
            let s1 = tconorm_block(spec, family, BlockSlot::S1, n)?;
            let s2 = tconorm_block(spec, family, BlockSlot::S2, n)?;
            let t1 = tnorm_block(spec, family, BlockSlot::T1, n)?;
            let gen = shared_generator(spec, family, grid)?;
            let t = Surface::GenTnorm(gen);
            let meta = OpMeta::new(family)
                .with_e(e)
                .with_k(k)
                .with_a(a)
                .with_block(BlockSlot::S1, s1.describe())
                .with_block(BlockSlot::S2, s2.describe())
                .with_block(BlockSlot::T1, t1.describe())
                .with_block(BlockSlot::T, t.describe());
            Ok(BinaryOp::tabulate(grid, meta, move |x, y| {
                let (lo, hi) = (x.min(y), x.max(y));
                if hi <= e {
                    sq(&s1, 0.0, e, x, y)
                } else if lo >= e && hi <= k {
                    sq(&s2, e, k, x, y)
                } else if lo >= k && hi <= a {
                    sq(&t1, k, a, x, y)
                } else if lo >= a {
                    sq(&t, a, 1.0, x, y)
                } else if lo <= e && hi <= k {
                    hi
                } else if lo >= k && lo <= a {
                    lo
                } else {
                    k
                }
            }))
        }

        Family::NullnormDisjIII | Family::NullnormConjI => {
            forbid(family, "parameter a", spec.a.is_some())?;
            forbid_blocks_except(spec, family, &[BlockSlot::S1, BlockSlot::T1, BlockSlot::T2])?;
            let e = need(spec.e, family, "e")?;
            let k = need(spec.k, family, "k")?;
            if k >= e {
                return Err(violation(family, format!("k<e, got k={k}, e={e}")));
            }
            let s1 = tconorm_block(spec, family, BlockSlot::S1, n)?;
            let t1 = tnorm_block(spec, family, BlockSlot::T1, n)?;
            let t2 = tnorm_block(spec, family, BlockSlot::T2, n)?;
            let meta = OpMeta::new(family)
                .with_e(e)
                .with_k(k)
                .with_block(BlockSlot::S1, s1.describe())
                .with_block(BlockSlot::T1, t1.describe())
                .with_block(BlockSlot::T2, t2.describe());
            Ok(BinaryOp::tabulate(grid, meta, move |x, y| {
                let (lo, hi) = (x.min(y), x.max(y));
                if hi <= k {
                    sq(&s1, 0.0, k, x, y)
                } else if lo >= k && hi <= e {
                    sq(&t1, k, e, x, y)
                } else if lo >= e {
                    sq(&t2, e, 1.0, x, y)
                } else if lo <= k {
                    k
                } else {
                    lo
                }
            }))
        }

        Family::NullnormConjII => {
            forbid_blocks_except(
                spec,
                family,
                &[BlockSlot::S1, BlockSlot::T1, BlockSlot::T2],
            )?;
            let e = need(spec.e, family, "e")?;
            let k = need(spec.k, family, "k")?;
            let a = need(spec.a, family, "a")?;
            if k >= e {
                return Err(violation(family, format!("k<e, got k={k}, e={e}")));
            }
            if a < e {
                return Err(violation(family, format!("a in [e,1), got e={e}, a={a}")));
            }
            let s1 = tconorm_block(spec, family, BlockSlot::S1, n)?;
            let t1 = tnorm_block(spec, family, BlockSlot::T1, n)?;
            let t2 = tnorm_block(spec, family, BlockSlot::T2, n)?;
            let gen = shared_generator(spec, family, grid)?;
            let t = Surface::GenTnorm(gen);
            let meta = OpMeta::new(family)
                .with_e(e)
                .with_k(k)
                .with_a(a)
                .with_block(BlockSlot::S1, s1.describe())
                .with_block(BlockSlot::T1, t1.describe())
                .with_block(BlockSlot::T2, t2.describe())
                .with_block(BlockSlot::T, t.describe());
            Ok(BinaryOp::tabulate(grid, meta, move |x, y| {
                let (lo, hi) = (x.min(y), x.max(y));
                if hi <= k {
                    sq(&s1, 0.0, k, x, y)
                } else if lo >= k && hi <= e {
                    sq(&t1, k, e, x, y)
                } else if lo >= e && hi <= a {
                    sq(&t2, e, a, x, y)
                } else if lo >= a {
                    sq(&t, a, 1.0, x, y)
                } else if lo <= k {
                    k
                } else {
                    lo
                }
            }))
        }

        Family::ZkTconormII => {
            forbid(family, "parameter e", spec.e.is_some())?;
            forbid(family, "parameter k", spec.k.is_some())?;
            forbid_blocks_except(spec, family, &[])?;
            let a = need(spec.a, family, "a")?;
            let s = Surface::Basic(BasicOpKind::Sl);
            let meta = OpMeta::new(family)
                .with_a(a)
                .with_block(BlockSlot::S, s.describe());
            Ok(BinaryOp::tabulate(grid, meta, move |x, y| {
                if x >= a && y >= a {
                    sq(&s, a, 1.0, x, y)
                } else {
                    x.max(y)
                }
            }))
        }

        Family::ZkFTconorm => {
            forbid(family, "parameter e", spec.e.is_some())?;
            forbid_blocks_except(spec, family, &[BlockSlot::A, BlockSlot::B])?;
            let k = need(spec.k, family, "k")?;
            if let Some(a) = spec.a {
                if !(k <= a && a < 1.0) {
                    return Err(violation(family, format!("a in [k,1), got k={k}, a={a}")));
                }
            }
            let a_block = neutral_lo_block(spec, family, BlockSlot::A, n)?;
            let b_block = neutral_hi_block(spec, family, BlockSlot::B, spec.a, k, n)?;
            let mut meta = OpMeta::new(family)
                .with_k(k)
                .with_block(BlockSlot::A, a_block.describe())
                .with_block(BlockSlot::B, b_block.describe());
            if let Some(a) = spec.a {
                meta = meta.with_a(a);
            }
            Ok(BinaryOp::tabulate(grid, meta, move |x, y| {
                if x <= k && y <= k {
                    sq(&a_block, 0.0, k, x, y)
                } else if x >= k && y >= k {
                    sq(&b_block, k, 1.0, x, y)
                } else {
                    k
                }
            }))
        }

        Family::ZkFUmax => {
            forbid_blocks_except(
                spec,
                family,
                &[BlockSlot::A1, BlockSlot::A2, BlockSlot::A3, BlockSlot::B],
            )?;
            let e = need(spec.e, family, "e")?;
            let k = need(spec.k, family, "k")?;
            if e >= k {
                return Err(violation(family, format!("e<k, got e={e}, k={k}")));
            }
            if let Some(a) = spec.a {
                if !(k <= a && a < 1.0) {
                    return Err(violation(family, format!("a in [k,1), got k={k}, a={a}")));
                }
            }
            let a1 = neutral_lo_block(spec, family, BlockSlot::A1, n)?;
            let a2 = edge_neutral_block(spec, BlockSlot::A2, BlockCond::RightNeutralLo, n)?
                .unwrap_or(Surface::Basic(BasicOpKind::Sm));
            let a3 = edge_neutral_block(spec, BlockSlot::A3, BlockCond::LeftNeutralLo, n)?;
            let b = neutral_hi_block(spec, family, BlockSlot::B, spec.a, k, n)?;
            let mut meta = OpMeta::new(family)
                .with_e(e)
                .with_k(k)
                .with_block(BlockSlot::A1, a1.describe())
                .with_block(BlockSlot::A2, a2.describe())
                .with_block(
                    BlockSlot::A3,
                    a3.as_ref().map_or("max".into(), Surface::describe),
                )
                .with_block(BlockSlot::B, b.describe());
            if let Some(a) = spec.a {
                meta = meta.with_a(a);
            }
            Ok(BinaryOp::tabulate(grid, meta, move |x, y| {
                if x <= e && y <= e {
                    sq(&a1, 0.0, e, x, y)
                } else if x >= e && x <= k && y >= e && y <= k {
                    sq(&a2, e, k, x, y)
                } else if x <= e && y >= e && y <= k {
                    match &a3 {
                        None => x.max(y),
                        Some(s) => rect(s, 0.0, e, e, k, e, k, x, y),
                    }
                } else if x >= e && x <= k && y <= e {
                    x.max(y)
                } else if x >= k && y >= k {
                    sq(&b, k, 1.0, x, y)
                } else {
                    k
                }
            }))
        }

        Family::ZkFUmin => {
            forbid_blocks_except(
                spec,
                family,
                &[BlockSlot::A, BlockSlot::B1, BlockSlot::B2, BlockSlot::B3],
            )?;
            let e = need(spec.e, family, "e")?;
            let k = need(spec.k, family, "k")?;
            if k >= e {
                return Err(violation(family, format!("k<e, got k={k}, e={e}")));
            }
            if let Some(a) = spec.a {
                if !(e <= a && a < 1.0) {
                    return Err(violation(family, format!("a in [e,1), got e={e}, a={a}")));
                }
            }
            let a_block = neutral_lo_block(spec, family, BlockSlot::A, n)?;
            let b1 = edge_neutral_block(spec, BlockSlot::B1, BlockCond::RightNeutralHi, n)?
                .unwrap_or(Surface::Basic(BasicOpKind::Tm));
            let b3 = edge_neutral_block(spec, BlockSlot::B3, BlockCond::LeftNeutralHi, n)?;
            let b2 = neutral_hi_block(spec, family, BlockSlot::B2, spec.a, e, n)?;
            let mut meta = OpMeta::new(family)
                .with_e(e)
                .with_k(k)
                .with_block(BlockSlot::A, a_block.describe())
                .with_block(BlockSlot::B1, b1.describe())
                .with_block(BlockSlot::B2, b2.describe())
                .with_block(
                    BlockSlot::B3,
                    b3.as_ref().map_or("min".into(), Surface::describe),
                );
            if let Some(a) = spec.a {
                meta = meta.with_a(a);
            }
            Ok(BinaryOp::tabulate(grid, meta, move |x, y| {
                if x <= k && y <= k {
                    sq(&a_block, 0.0, k, x, y)
                } else if x >= k && x <= e && y >= k && y <= e {
                    sq(&b1, k, e, x, y)
                } else if x >= e && y >= k && y <= e {
                    match &b3 {
                        None => x.min(y),
                        Some(s) => rect(s, e, 1.0, k, e, k, e, x, y),
                    }
                } else if x >= k && x <= e && y >= e {
                    x.min(y)
                } else if x >= e && y >= e {
                    sq(&b2, e, 1.0, x, y)
                } else {
                    k
                }
            }))
        }

        Family::CustomTable => {
            forbid(family, "parameter e", spec.e.is_some())?;
            forbid(family, "parameter k", spec.k.is_some())?;
            forbid(family, "parameter a", spec.a.is_some())?;
            forbid_blocks_except(spec, family, &[])?;
            let raw = spec
                .table
                .as_ref()
                .ok_or_else(|| violation(family, "a table payload"))?;
            if raw.n != grid.resolution() {
                return Err(violation(
                    family,
                    format!(
                        "a table at grid resolution {}, got {}",
                        grid.resolution(),
                        raw.n
                    ),
                ));
            }
            BinaryOp::from_values(grid, OpMeta::new(family), raw.values.clone())
        }
    }
}

/// The nilpotent upper block of a case-(ii) uninorm: either derived from
/// the shared generator or supplied explicitly, but not both.
fn upper_conorm_block(
    spec: &OperatorSpec,
    family: Family,
    grid: &Grid,
) -> Result<Surface, OpError> {
    match (&spec.generator, spec.blocks.contains_key(&BlockSlot::S)) {
        (Some(_), true) => Err(violation(family, "either block S or a generator, not both")),
        (Some(_), false) => Ok(Surface::GenTconorm(shared_generator(spec, family, grid)?)),
        (None, true) => tconorm_block(spec, family, BlockSlot::S, grid.resolution()),
        (None, false) => Err(OpError::MissingGenerator { family }),
    }
}

/// A-type block: continuous increasing with neutral element 0. Defaults to
/// the maximum.
fn neutral_lo_block(
    spec: &OperatorSpec,
    _family: Family,
    slot: BlockSlot,
    n: usize,
) -> Result<Surface, OpError> {
    let s = spec
        .blocks
        .get(&slot)
        .map(BlockSpec::surface)
        .unwrap_or(Surface::Basic(BasicOpKind::Sm));
    check_block(&s, slot, &[BlockCond::Monotone, BlockCond::NeutralLo], n)?;
    Ok(s)
}

/// B-type block: continuous increasing with neutral element 1, forced to
/// agree with the rescaled product above `a` when `a` is present. Defaults
/// to the minimum, or to the ordinal product block when `a` is given.
fn neutral_hi_block(
    spec: &OperatorSpec,
    _family: Family,
    slot: BlockSlot,
    a: Option<f64>,
    base: f64,
    n: usize,
) -> Result<Surface, OpError> {
    let alpha = a.map(|a| (a - base) / (1.0 - base));
    let s = spec.blocks.get(&slot).map(BlockSpec::surface).unwrap_or({
        match alpha {
            Some(alpha) => Surface::OrdinalTp { alpha },
            None => Surface::Basic(BasicOpKind::Tm),
        }
    });
    let mut conds = vec![BlockCond::Monotone, BlockCond::NeutralHi];
    if let Some(alpha) = alpha {
        conds.push(BlockCond::TpAbove(alpha));
    }
    check_block(&s, slot, &conds, n)?;
    Ok(s)
}

/// Rectangle block with a one-sided neutral edge; `None` keeps the
/// family's literal min/max on that rectangle.
fn edge_neutral_block(
    spec: &OperatorSpec,
    slot: BlockSlot,
    cond: BlockCond,
    n: usize,
) -> Result<Option<Surface>, OpError> {
    match spec.blocks.get(&slot) {
        None => Ok(None),
        Some(b) => {
            let s = b.surface();
            check_block(&s, slot, &[BlockCond::Monotone, cond], n)?;
            Ok(Some(s))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nullnorm_disj_i(e: f64, k: f64) -> OperatorSpec {
        OperatorSpec::new(Family::NullnormDisjI)
            .with_e(e)
            .with_k(k)
            .with_basic_block(BlockSlot::S1, BasicOpKind::Sl)
            .with_basic_block(BlockSlot::S2, BasicOpKind::Sl)
            .with_basic_block(BlockSlot::T, BasicOpKind::Tl)
    }

    #[test]
    fn disjunctive_nullnorm_takes_max_between_e_and_k() {
        let g = Grid::new(20).unwrap();
        let op = build_operator(&g, &nullnorm_disj_i(0.25, 0.5)).unwrap();
        assert_eq!(op.value(2, 8), 0.4);
        assert_eq!(op.value(8, 2), 0.4);
    }

    #[test]
    fn absorbing_element_holds_across_nullnorm_families() {
        let g = Grid::new(16).unwrap();
        let specs = [
            nullnorm_disj_i(0.25, 0.5),
            OperatorSpec::new(Family::NullnormDisjIII)
                .with_e(0.5)
                .with_k(0.25)
                .with_basic_block(BlockSlot::S1, BasicOpKind::Sl)
                .with_basic_block(BlockSlot::T1, BasicOpKind::Tl)
                .with_basic_block(BlockSlot::T2, BasicOpKind::Tl),
            OperatorSpec::new(Family::NullnormConjIII)
                .with_e(0.25)
                .with_k(0.5)
                .with_basic_block(BlockSlot::S1, BasicOpKind::Sl)
                .with_basic_block(BlockSlot::S2, BasicOpKind::Sl)
                .with_basic_block(BlockSlot::T, BasicOpKind::Tl),
        ];
        for spec in &specs {
            let op = build_operator(&g, spec).unwrap();
            let k = spec.k.unwrap();
            let ki = g.index_of(k).unwrap();
            for j in 0..=16 {
                assert_eq!(op.value(ki, j), k, "{}", spec.family.unwrap());
                assert_eq!(op.value(j, ki), k, "{}", spec.family.unwrap());
            }
        }
    }

    #[test]
    fn disjunctive_uninorm_takes_min_below_e() {
        let g = Grid::new(20).unwrap();
        let spec = OperatorSpec::new(Family::UninormDisjI).with_e(0.25);
        let op = build_operator(&g, &spec).unwrap();
        assert_eq!(op.value(2, 4), 0.1);
        assert_eq!(op.value(2, 8), 0.4);
    }

    #[test]
    fn order_violation_between_e_and_k_is_rejected() {
        let g = Grid::new(20).unwrap();
        let err = build_operator(&g, &nullnorm_disj_i(0.6, 0.5)).unwrap_err();
        assert!(err.to_string().contains("requires e<k"), "{err}");
    }

    #[test]
    fn missing_block_is_rejected() {
        let g = Grid::new(20).unwrap();
        let mut spec = nullnorm_disj_i(0.25, 0.5);
        spec.blocks.remove(&BlockSlot::T);
        let err = build_operator(&g, &spec).unwrap_err();
        assert!(matches!(
            err,
            OpError::MissingBlock {
                slot: BlockSlot::T,
                ..
            }
        ));
    }

    #[test]
    fn wrong_block_class_is_rejected() {
        let g = Grid::new(8).unwrap();
        let spec = nullnorm_disj_i(0.25, 0.5).with_basic_block(BlockSlot::T, BasicOpKind::Sm);
        let err = build_operator(&g, &spec).unwrap_err();
        assert!(matches!(err, OpError::InvalidBlock { .. }), "{err}");
    }

    #[test]
    fn idempotent_uninorm_with_complement_boundary() {
        let g = Grid::new(10).unwrap();
        let gfun: Vec<f64> = g.points().iter().map(|x| 1.0 - x).collect();
        let op = idempotent_uninorm(&g, 0.5, &gfun).unwrap();
        assert_eq!(op.value(2, 9), 0.9);
        for i in 0..=10 {
            assert_eq!(op.value(i, 5), g.point(i), "neutral element");
            assert_eq!(op.value(i, i), g.point(i), "idempotent");
        }
        // On the boundary line x + y = 1 the ambiguity resolves to min.
        assert_eq!(op.value(3, 7), 0.3);
        assert_eq!(op.value(10, 0), 0.0);
    }

    #[test]
    fn increasing_boundary_function_is_rejected() {
        let g = Grid::new(4).unwrap();
        let err = idempotent_uninorm(&g, 0.5, &[0.0, 0.25, 0.5, 0.75, 1.0]).unwrap_err();
        assert!(matches!(err, OpError::InvalidBoundary(_)));
    }

    #[test]
    fn zk_umax_defaults_collapse_to_max_below_k() {
        let g = Grid::new(16).unwrap();
        let spec = OperatorSpec::new(Family::ZkFUmax)
            .with_e(0.25)
            .with_k(0.5)
            .with_a(0.75);
        let op = build_operator(&g, &spec).unwrap();
        for i in 0..=8 {
            for j in 0..=8 {
                assert_eq!(op.value(i, j), g.point(i).max(g.point(j)));
            }
        }
        // Product block above a, rescaled.
        let x = g.point(14);
        assert_eq!(op.value(14, 14), 0.75 + (x - 0.75) * (x - 0.75) / 0.25);
        // Absorbing outside the diagonal squares.
        assert_eq!(op.value(2, 14), 0.5);
    }

    #[test]
    fn zk_boundary_conditions_hold() {
        let g = Grid::new(16).unwrap();
        for spec in [
            OperatorSpec::new(Family::ZkFTconorm).with_k(0.5).with_a(0.75),
            OperatorSpec::new(Family::ZkFUmax)
                .with_e(0.25)
                .with_k(0.5)
                .with_a(0.75),
            OperatorSpec::new(Family::ZkFUmin)
                .with_k(0.25)
                .with_e(0.5)
                .with_a(0.75),
        ] {
            let op = build_operator(&g, &spec).unwrap();
            let k = spec.k.unwrap();
            let ki = g.index_of(k).unwrap();
            for i in 0..=ki {
                assert_eq!(op.value(0, i), g.point(i), "{}", spec.family.unwrap());
                assert_eq!(op.value(i, 0), g.point(i), "{}", spec.family.unwrap());
            }
            for i in ki..=16 {
                assert_eq!(op.value(16, i), g.point(i), "{}", spec.family.unwrap());
                assert_eq!(op.value(i, 16), g.point(i), "{}", spec.family.unwrap());
            }
        }
    }

    #[test]
    fn non_product_custom_b_block_is_rejected_when_a_is_set() {
        let g = Grid::new(8).unwrap();
        let spec = OperatorSpec::new(Family::ZkFTconorm)
            .with_k(0.5)
            .with_a(0.75)
            .with_basic_block(BlockSlot::B, BasicOpKind::Tm);
        let err = build_operator(&g, &spec).unwrap_err();
        assert!(matches!(
            err,
            OpError::InvalidBlock {
                slot: BlockSlot::B,
                ..
            }
        ));
    }

    #[test]
    fn extraneous_parameters_are_rejected() {
        let g = Grid::new(8).unwrap();
        let spec = OperatorSpec::basic(BasicOpKind::Tm).with_e(0.5);
        assert!(build_operator(&g, &spec).is_err());
    }
}
