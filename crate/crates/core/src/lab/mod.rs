//! Randomized and exhaustive verification of the distributive laws.
//!
//! Each law states that convolution through an outer operator `F`
//! distributes over convolution through an inner operator `V` (a t-norm,
//! t-conorm or uninorm), under hypotheses on the pair and a convexity
//! requirement on one of the three truth values. [`run_suite`] first
//! validates the hypotheses, then samples random triples and compares both
//! sides; [`search_counterexample`] drops the convexity hypothesis and
//! hunts for a violation instead.

mod compare;
mod fixtures;
mod search;

pub use compare::{compare_series, Comparison, Deviation};
pub use fixtures::{cd_case_pair, default_pair, falsifiability_pair, CdCase};
pub use search::{search_counterexample, Sampling, SearchWitness, Subject};

use crate::ftv::{convolve, random_convex, random_ftv, ConvMode, Ftv, FtvError};
use crate::grid::{Grid, GridError};
use crate::ops::{
    axiom_report, basic_op, build_operator, check_conditional_distributivity, validate_nullnorm,
    validate_tconorm, validate_uninorm, validate_zk_operator, BasicOpKind, BinaryOp,
    BoundaryClass, CdMode, OpError, OperatorSpec, ASSOC_TOL, EQ_TOL,
};
use rayon::prelude::*;
use std::fmt;
use std::time::{Duration, Instant};
use thiserror::Error;

/// The distributive laws the lab can exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    /// Convolution distributes over the meet for continuous non-decreasing
    /// operators and convex first operand.
    MinMaxI,
    /// The same over the join.
    MinMaxII,
    /// Continuous nullnorm over an idempotent uninorm.
    Idem,
    /// Continuous nullnorm over a disjunctive uninorm under conditional
    /// distributivity.
    CdDisj,
    /// The conjunctive twin.
    CdConj,
    /// Relaxed absorbing-element operator over a continuous t-conorm.
    ZkSLeft,
    ZkSRight,
    /// Relaxed operator over a uninorm that takes the maximum off the
    /// diagonal squares.
    ZkUmaxLeft,
    ZkUmaxRight,
    /// The minimum-class counterpart.
    ZkUminLeft,
    ZkUminRight,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::MinMaxI,
        TheoremId::MinMaxII,
        TheoremId::Idem,
        TheoremId::CdDisj,
        TheoremId::CdConj,
        TheoremId::ZkSLeft,
        TheoremId::ZkSRight,
        TheoremId::ZkUmaxLeft,
        TheoremId::ZkUmaxRight,
        TheoremId::ZkUminLeft,
        TheoremId::ZkUminRight,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            TheoremId::MinMaxI => "T-MIN-MAX-i",
            TheoremId::MinMaxII => "T-MIN-MAX-ii",
            TheoremId::Idem => "T-IDEM",
            TheoremId::CdDisj => "T-CD-DISJ",
            TheoremId::CdConj => "T-CD-CONJ",
            TheoremId::ZkSLeft => "T-ZK-S-L",
            TheoremId::ZkSRight => "T-ZK-S-R",
            TheoremId::ZkUmaxLeft => "T-ZK-UMAX-L",
            TheoremId::ZkUmaxRight => "T-ZK-UMAX-R",
            TheoremId::ZkUminLeft => "T-ZK-UMIN-L",
            TheoremId::ZkUminRight => "T-ZK-UMIN-R",
        }
    }

    /// Which variant of the law the theorem states, and with it which
    /// operand carries the convexity hypothesis: `f` for the left laws,
    /// `h` for the right ones.
    pub fn side(self) -> Side {
        match self {
            TheoremId::ZkSRight | TheoremId::ZkUmaxRight | TheoremId::ZkUminRight => Side::Right,
            _ => Side::Left,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown theorem `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(format!("unknown side `{s}`")),
        }
    }
}

#[derive(Debug, Error)]
pub enum LabError {
    #[error("suite rejected: {0}")]
    SuiteRejected(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Op(#[from] OpError),
    #[error(transparent)]
    Ftv(#[from] FtvError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub theorem: TheoremId,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: ConvMode,
    pub comparison: Comparison,
    pub tol: f64,
    pub spec_f: OperatorSpec,
    pub spec_v: OperatorSpec,
}

impl SuiteConfig {
    /// The stock configuration: shipped fixture pair, 200 trials, seed 0,
    /// snap mode under dilated comparison with zero tolerance.
    pub fn with_defaults(theorem: TheoremId, n: usize) -> Result<Self, LabError> {
        let grid = Grid::new(n)?;
        let (spec_f, spec_v) = default_pair(theorem, &grid);
        Ok(SuiteConfig {
            theorem,
            n,
            trials: 200,
            seed: 0,
            mode: ConvMode::Snap,
            comparison: Comparison::Dilated,
            tol: 0.0,
            spec_f,
            spec_v,
        })
    }
}

/// The sampled triple behind the worst deviation of a suite run.
#[derive(Debug, Clone)]
pub struct TrialWitness {
    pub trial: usize,
    pub z: usize,
    pub deviation: f64,
    pub f: Ftv,
    pub g: Ftv,
    pub h: Ftv,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub theorem: TheoremId,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: ConvMode,
    pub comparison: Comparison,
    pub tol: f64,
    pub passes: usize,
    pub failures: usize,
    pub max_deviation: f64,
    pub worst: Option<TrialWitness>,
    pub wall: Duration,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.failures == 0
    }

    /// One-row CSV export; `witness_file` names where the worst triple was
    /// written, empty when it was not.
    pub fn to_csv(&self, witness_file: &str) -> String {
        let mut out = String::from(
            "theorem_id,n,trials,mode,comparison,tol,passes,max_deviation,witness_file\n",
        );
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{:.12e},{}\n",
            self.theorem,
            self.n,
            self.trials,
            self.mode,
            self.comparison,
            self.tol,
            self.passes,
            self.max_deviation,
            witness_file
        ));
        out
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}/{} trials passed (n={}, {}, {}, tol {}), max deviation {:.3e}, {:.2?}",
            self.theorem,
            self.passes,
            self.trials,
            self.n,
            self.mode,
            self.comparison,
            self.tol,
            self.max_deviation,
            self.wall
        )
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the RNG seed for one sampled truth value so results do not
/// depend on trial scheduling.
pub(crate) fn subject_seed(seed: u64, trial: usize, lane: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed).wrapping_add(trial as u64)).wrapping_add(lane))
}

/// Both sides of the left law: `f` convolved into `(g, h)` against the
/// recombination of the pairwise convolutions.
pub fn lhs_rhs_left(
    f_op: &BinaryOp,
    v_op: &BinaryOp,
    f: &Ftv,
    g: &Ftv,
    h: &Ftv,
    mode: ConvMode,
) -> Result<(Ftv, Ftv), FtvError> {
    let inner = convolve(v_op, g, h, mode)?;
    let lhs = convolve(f_op, f, &inner, mode)?;
    let fg = convolve(f_op, f, g, mode)?;
    let fh = convolve(f_op, f, h, mode)?;
    let rhs = convolve(v_op, &fg, &fh, mode)?;
    Ok((lhs, rhs))
}

/// Both sides of the right law, the mirror image of [`lhs_rhs_left`]: the
/// common operand `h` enters from the right and carries the convexity
/// hypothesis.
pub fn lhs_rhs_right(
    f_op: &BinaryOp,
    v_op: &BinaryOp,
    f: &Ftv,
    g: &Ftv,
    h: &Ftv,
    mode: ConvMode,
) -> Result<(Ftv, Ftv), FtvError> {
    let inner = convolve(v_op, f, g, mode)?;
    let lhs = convolve(f_op, &inner, h, mode)?;
    let fh = convolve(f_op, f, h, mode)?;
    let gh = convolve(f_op, g, h, mode)?;
    let rhs = convolve(v_op, &fh, &gh, mode)?;
    Ok((lhs, rhs))
}

fn trial_subjects(side: Side, grid: &Grid, seed: u64, trial: usize) -> (Ftv, Ftv, Ftv) {
    let s = |lane| subject_seed(seed, trial, lane);
    match side {
        Side::Left => (
            random_convex(grid, s(0)),
            random_ftv(grid, s(1)),
            random_ftv(grid, s(2)),
        ),
        Side::Right => (
            random_ftv(grid, s(0)),
            random_ftv(grid, s(1)),
            random_convex(grid, s(2)),
        ),
    }
}

struct TrialOutcome {
    trial: usize,
    pass: bool,
    deviation: f64,
    z: usize,
    f: Ftv,
    g: Ftv,
    h: Ftv,
}

/// Validates the theorem's hypotheses and runs the randomized trials.
///
/// Trials execute in parallel; every sampled truth value is seeded from
/// `(seed, trial index)`, so the report is identical however the trials
/// are scheduled.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, LabError> {
    if config.trials == 0 {
        return Err(LabError::InvalidConfig("trials must be at least 1".into()));
    }
    if config.tol < 0.0 {
        return Err(LabError::InvalidConfig(format!(
            "tolerance must be non-negative, got {}",
            config.tol
        )));
    }
    let start = Instant::now();
    let grid = Grid::new(config.n)?;
    let f_op = build_operator(&grid, &config.spec_f)?;
    let v_op = build_operator(&grid, &config.spec_v)?;
    validate_hypotheses(config.theorem, &f_op, &v_op)?;
    let side = config.theorem.side();

    let outcomes: Result<Vec<TrialOutcome>, FtvError> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let (f, g, h) = trial_subjects(side, &grid, config.seed, t);
            let (lhs, rhs) = match side {
                Side::Left => lhs_rhs_left(&f_op, &v_op, &f, &g, &h, config.mode)?,
                Side::Right => lhs_rhs_right(&f_op, &v_op, &f, &g, &h, config.mode)?,
            };
            let d = compare_series(lhs.grades(), rhs.grades(), config.comparison, config.tol);
            Ok(TrialOutcome {
                trial: t,
                pass: d.pass,
                deviation: d.max_deviation,
                z: d.worst_index,
                f,
                g,
                h,
            })
        })
        .collect();
    let outcomes = outcomes?;

    let mut passes = 0;
    let mut max_deviation = 0.0f64;
    let mut worst: Option<TrialWitness> = None;
    for o in outcomes {
        if o.pass {
            passes += 1;
        }
        if worst.is_none() || o.deviation > max_deviation {
            max_deviation = o.deviation;
            worst = Some(TrialWitness {
                trial: o.trial,
                z: o.z,
                deviation: o.deviation,
                f: o.f,
                g: o.g,
                h: o.h,
            });
        }
    }
    Ok(SuiteReport {
        theorem: config.theorem,
        n: config.n,
        trials: config.trials,
        seed: config.seed,
        mode: config.mode,
        comparison: config.comparison,
        tol: config.tol,
        passes,
        failures: config.trials - passes,
        max_deviation,
        worst,
        wall: start.elapsed(),
    })
}

fn reject(msg: impl Into<String>) -> LabError {
    LabError::SuiteRejected(msg.into())
}

fn grid_step_bound(n: usize) -> f64 {
    2.0 / n as f64 + EQ_TOL
}

fn require_continuous_monotone(op: &BinaryOp, label: &str) -> Result<(), LabError> {
    let r = axiom_report(op);
    if !r.monotone {
        return Err(reject(format!("{label} must be non-decreasing")));
    }
    if r.max_jump > grid_step_bound(r.n) {
        return Err(reject(format!(
            "{label} must be continuous at grid scale: adjacent jump {:.6} exceeds 2/n",
            r.max_jump
        )));
    }
    Ok(())
}

fn require_table(v_op: &BinaryOp, kind: BasicOpKind) -> Result<(), LabError> {
    let reference = basic_op(v_op.grid(), kind);
    let same = v_op
        .values()
        .iter()
        .zip(reference.values())
        .all(|(a, b)| (a - b).abs() <= EQ_TOL);
    if same {
        Ok(())
    } else {
        Err(reject(format!("inner operator must be {kind}")))
    }
}

/// Continuity of the rescaled behaviour on the two diagonal squares, the
/// grid-scale stand-in for membership in the class with continuous
/// underlying operations.
fn require_underlying_continuity(v_op: &BinaryOp, e_index: usize) -> Result<(), LabError> {
    let n = v_op.grid().resolution();
    let bound = grid_step_bound(n);
    let check = |lo: usize, hi: usize| -> Result<(), LabError> {
        for i in lo..=hi {
            for j in lo..hi {
                let row = (v_op.value(i, j + 1) - v_op.value(i, j)).abs();
                let col = (v_op.value(j + 1, i) - v_op.value(j, i)).abs();
                if row > bound || col > bound {
                    return Err(reject(
                        "uninorm must have continuous underlying operations",
                    ));
                }
            }
        }
        Ok(())
    };
    check(0, e_index)?;
    check(e_index, n)
}

fn require_on_e(v_op: &BinaryOp, e_index: usize, want_max: bool) -> Result<(), LabError> {
    let grid = v_op.grid();
    let n = grid.resolution();
    for i in 0..=n {
        for j in 0..=n {
            if (i <= e_index && j <= e_index) || (i >= e_index && j >= e_index) {
                continue;
            }
            let expect = if want_max {
                grid.point(i).max(grid.point(j))
            } else {
                grid.point(i).min(grid.point(j))
            };
            if (v_op.value(i, j) - expect).abs() > EQ_TOL {
                return Err(reject(format!(
                    "uninorm must take the {} off the diagonal squares",
                    if want_max { "maximum" } else { "minimum" }
                )));
            }
        }
    }
    Ok(())
}

fn require_cd(f_op: &BinaryOp, v_op: &BinaryOp, mode: CdMode) -> Result<(), LabError> {
    let tol = if f_op.is_closed() && v_op.is_closed() {
        ASSOC_TOL
    } else {
        2.0 / f_op.grid().resolution() as f64
    };
    let report = check_conditional_distributivity(f_op, v_op, mode, tol)?;
    if report.pass {
        Ok(())
    } else {
        Err(reject(format!(
            "outer operator must be conditionally distributive over the inner one ({mode}): max residual {:.3e} exceeds {tol:.3e}",
            report.max_residual
        )))
    }
}

/// Checks that `(f_op, v_op)` satisfy the theorem's hypotheses, naming the
/// first violated one.
pub fn validate_hypotheses(
    theorem: TheoremId,
    f_op: &BinaryOp,
    v_op: &BinaryOp,
) -> Result<(), LabError> {
    if f_op.grid() != v_op.grid() {
        return Err(LabError::Op(OpError::GridMismatch));
    }
    match theorem {
        TheoremId::MinMaxI => {
            require_continuous_monotone(f_op, "outer operator")?;
            require_table(v_op, BasicOpKind::Tm)
        }
        TheoremId::MinMaxII => {
            require_continuous_monotone(f_op, "outer operator")?;
            require_table(v_op, BasicOpKind::Sm)
        }
        TheoremId::Idem => {
            validate_nullnorm(f_op)
                .map_err(|e| reject(format!("outer operator must be a continuous nullnorm: {e}")))?;
            validate_uninorm(v_op)
                .map_err(|e| reject(format!("inner operator must be a uninorm: {e}")))?;
            if !axiom_report(v_op).idempotent {
                return Err(reject("inner uninorm must be idempotent"));
            }
            Ok(())
        }
        TheoremId::CdDisj | TheoremId::CdConj => {
            validate_nullnorm(f_op)
                .map_err(|e| reject(format!("outer operator must be a continuous nullnorm: {e}")))?;
            let profile = validate_uninorm(v_op)
                .map_err(|e| reject(format!("inner operator must be a uninorm: {e}")))?;
            let want = if theorem == TheoremId::CdDisj {
                BoundaryClass::Disjunctive
            } else {
                BoundaryClass::Conjunctive
            };
            if profile.class != want {
                return Err(reject(format!("theorem requires a {want} uninorm")));
            }
            require_underlying_continuity(v_op, profile.e_index)?;
            require_cd(f_op, v_op, CdMode::Cd)
        }
        TheoremId::ZkSLeft | TheoremId::ZkSRight => {
            validate_zk_operator(f_op).map_err(|e| {
                reject(format!(
                    "outer operator must be continuous with an absorbing element: {e}"
                ))
            })?;
            validate_tconorm(v_op)
                .map_err(|e| reject(format!("inner operator must be a t-conorm: {e}")))?;
            require_continuous_monotone(v_op, "inner t-conorm")?;
            require_cd(f_op, v_op, cd_mode_for(theorem))
        }
        TheoremId::ZkUmaxLeft | TheoremId::ZkUmaxRight => {
            let fp = validate_zk_operator(f_op).map_err(|e| {
                reject(format!(
                    "outer operator must be continuous with an absorbing element: {e}"
                ))
            })?;
            let up = validate_uninorm(v_op)
                .map_err(|e| reject(format!("inner operator must be a uninorm: {e}")))?;
            require_on_e(v_op, up.e_index, true)?;
            require_underlying_continuity(v_op, up.e_index)?;
            if up.e_index >= fp.k_index {
                return Err(reject(format!(
                    "theorem requires e<k, got e={}, k={}",
                    up.e, fp.k
                )));
            }
            require_cd(f_op, v_op, cd_mode_for(theorem))
        }
        TheoremId::ZkUminLeft | TheoremId::ZkUminRight => {
            let fp = validate_zk_operator(f_op).map_err(|e| {
                reject(format!(
                    "outer operator must be continuous with an absorbing element: {e}"
                ))
            })?;
            let up = validate_uninorm(v_op)
                .map_err(|e| reject(format!("inner operator must be a uninorm: {e}")))?;
            require_on_e(v_op, up.e_index, false)?;
            require_underlying_continuity(v_op, up.e_index)?;
            if fp.k_index >= up.e_index {
                return Err(reject(format!(
                    "theorem requires k<e, got k={}, e={}",
                    fp.k, up.e
                )));
            }
            require_cd(f_op, v_op, cd_mode_for(theorem))
        }
    }
}

fn cd_mode_for(theorem: TheoremId) -> CdMode {
    match theorem.side() {
        Side::Left => CdMode::CdLeft,
        Side::Right => CdMode::CdRight,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExhaustiveReport {
    pub cases: usize,
    pub failures: usize,
    pub max_deviation: f64,
}

/// Checks the law over every triple of truth values with grades drawn from
/// `{0, 1/2, 1}`, with the theorem's convex operand restricted to convex
/// series. Only feasible for very small grids.
pub fn exhaustive_check(
    theorem: TheoremId,
    f_op: &BinaryOp,
    v_op: &BinaryOp,
    mode: ConvMode,
    comparison: Comparison,
    tol: f64,
) -> Result<ExhaustiveReport, LabError> {
    let grid = f_op.grid().clone();
    let n = grid.resolution();
    if n > 4 {
        return Err(LabError::InvalidConfig(
            "exhaustive verification is limited to n <= 4".into(),
        ));
    }
    validate_hypotheses(theorem, f_op, v_op)?;
    let all: Vec<Ftv> = enumerate_grades(grid.point_count())
        .into_iter()
        .map(|grades| Ftv::new(&grid, grades).expect("enumerated grades are valid"))
        .collect();
    let convex: Vec<Ftv> = all.iter().filter(|f| f.is_convex()).cloned().collect();
    let side = theorem.side();

    let (firsts, thirds): (&[Ftv], &[Ftv]) = match side {
        Side::Left => (&convex, &all),
        Side::Right => (&all, &convex),
    };
    let mut cases = 0usize;
    let mut failures = 0usize;
    let mut max_deviation = 0.0f64;
    for f in firsts {
        for g in &all {
            for h in thirds {
                let (lhs, rhs) = match side {
                    Side::Left => lhs_rhs_left(f_op, v_op, f, g, h, mode)?,
                    Side::Right => lhs_rhs_right(f_op, v_op, f, g, h, mode)?,
                };
                let d = compare_series(lhs.grades(), rhs.grades(), comparison, tol);
                cases += 1;
                if !d.pass {
                    failures += 1;
                }
                max_deviation = max_deviation.max(d.max_deviation);
            }
        }
    }
    Ok(ExhaustiveReport {
        cases,
        failures,
        max_deviation,
    })
}

fn enumerate_grades(len: usize) -> Vec<Vec<f64>> {
    let levels = [0.0, 0.5, 1.0];
    let total = 3usize.pow(len as u32);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut grades = Vec::with_capacity(len);
        for _ in 0..len {
            grades.push(levels[code % 3]);
            code /= 3;
        }
        out.push(grades);
    }
    out
}
