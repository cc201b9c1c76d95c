//! Shipped operator pairs satisfying each theorem's hypotheses.
//!
//! All parameters sit on quarters of the unit interval so the pairs stay
//! grid-aligned at every resolution divisible by 4.

use super::TheoremId;
use crate::grid::Grid;
use crate::ops::{BasicOpKind, BlockSlot, Family, Generator, OperatorSpec};

/// The six conditional-distributivity lemma cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdCase {
    DisjI,
    DisjII,
    DisjIII,
    ConjI,
    ConjII,
    ConjIII,
}

impl CdCase {
    pub const ALL: [CdCase; 6] = [
        CdCase::DisjI,
        CdCase::DisjII,
        CdCase::DisjIII,
        CdCase::ConjI,
        CdCase::ConjII,
        CdCase::ConjIII,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            CdCase::DisjI => "disj-i",
            CdCase::DisjII => "disj-ii",
            CdCase::DisjIII => "disj-iii",
            CdCase::ConjI => "conj-i",
            CdCase::ConjII => "conj-ii",
            CdCase::ConjIII => "conj-iii",
        }
    }
}

impl std::fmt::Display for CdCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Nullnorm/uninorm pair for one lemma case. The case-(ii) pairs share an
/// identity generator, which makes the nilpotent block the rescaled
/// bounded sum and the strict block the rescaled product.
pub fn cd_case_pair(case: CdCase, grid: &Grid) -> (OperatorSpec, OperatorSpec) {
    let sl = |spec: OperatorSpec, slot| OperatorSpec::with_basic_block(spec, slot, BasicOpKind::Sl);
    let tl = |spec: OperatorSpec, slot| OperatorSpec::with_basic_block(spec, slot, BasicOpKind::Tl);
    match case {
        CdCase::DisjI => {
            let f = OperatorSpec::new(Family::NullnormDisjI).with_e(0.25).with_k(0.5);
            let f = tl(sl(sl(f, BlockSlot::S1), BlockSlot::S2), BlockSlot::T);
            let u = OperatorSpec::new(Family::UninormDisjI).with_e(0.25);
            (f, u)
        }
        CdCase::DisjII => {
            let f = OperatorSpec::new(Family::NullnormDisjII)
                .with_e(0.25)
                .with_k(0.5)
                .with_a(0.75)
                .with_generator(Generator::identity(grid));
            let f = tl(sl(sl(f, BlockSlot::S1), BlockSlot::S2), BlockSlot::T1);
            let u = OperatorSpec::new(Family::UninormDisjII)
                .with_e(0.25)
                .with_a(0.75)
                .with_generator(Generator::identity(grid));
            (f, u)
        }
        CdCase::DisjIII => {
            let f = OperatorSpec::new(Family::NullnormDisjIII).with_e(0.5).with_k(0.25);
            let f = tl(tl(sl(f, BlockSlot::S1), BlockSlot::T1), BlockSlot::T2);
            let u = OperatorSpec::new(Family::UninormDisjIII).with_e(0.5);
            (f, u)
        }
        CdCase::ConjI => {
            let f = OperatorSpec::new(Family::NullnormConjI).with_e(0.5).with_k(0.25);
            let f = tl(tl(sl(f, BlockSlot::S1), BlockSlot::T1), BlockSlot::T2);
            let u = OperatorSpec::new(Family::UninormConjI).with_e(0.5);
            (f, u)
        }
        CdCase::ConjII => {
            let f = OperatorSpec::new(Family::NullnormConjII)
                .with_e(0.5)
                .with_k(0.25)
                .with_a(0.75)
                .with_generator(Generator::identity(grid));
            let f = tl(tl(sl(f, BlockSlot::S1), BlockSlot::T1), BlockSlot::T2);
            let u = OperatorSpec::new(Family::UninormConjII)
                .with_e(0.5)
                .with_a(0.75)
                .with_generator(Generator::identity(grid));
            (f, u)
        }
        CdCase::ConjIII => {
            let f = OperatorSpec::new(Family::NullnormConjIII).with_e(0.25).with_k(0.5);
            let f = tl(sl(sl(f, BlockSlot::S1), BlockSlot::S2), BlockSlot::T);
            let u = OperatorSpec::new(Family::UninormConjIII).with_e(0.25);
            (f, u)
        }
    }
}

/// The default operator pair for a theorem's suite.
pub fn default_pair(theorem: TheoremId, grid: &Grid) -> (OperatorSpec, OperatorSpec) {
    match theorem {
        TheoremId::MinMaxI => {
            let (f, _) = cd_case_pair(CdCase::DisjI, grid);
            (f, OperatorSpec::basic(BasicOpKind::Tm))
        }
        TheoremId::MinMaxII => {
            let (f, _) = cd_case_pair(CdCase::DisjI, grid);
            (f, OperatorSpec::basic(BasicOpKind::Sm))
        }
        TheoremId::Idem => {
            let (f, _) = cd_case_pair(CdCase::DisjI, grid);
            (f, OperatorSpec::new(Family::OverlineUninorm).with_e(0.5))
        }
        TheoremId::CdDisj => cd_case_pair(CdCase::DisjII, grid),
        TheoremId::CdConj => cd_case_pair(CdCase::ConjII, grid),
        TheoremId::ZkSLeft | TheoremId::ZkSRight => (
            OperatorSpec::new(Family::ZkFTconorm).with_k(0.5).with_a(0.75),
            OperatorSpec::new(Family::ZkTconormII).with_a(0.75),
        ),
        TheoremId::ZkUmaxLeft | TheoremId::ZkUmaxRight => (
            OperatorSpec::new(Family::ZkFUmax)
                .with_e(0.25)
                .with_k(0.5)
                .with_a(0.75),
            OperatorSpec::new(Family::UninormDisjII)
                .with_e(0.25)
                .with_a(0.75)
                .with_generator(Generator::identity(grid)),
        ),
        TheoremId::ZkUminLeft | TheoremId::ZkUminRight => (
            OperatorSpec::new(Family::ZkFUmin)
                .with_k(0.25)
                .with_e(0.5)
                .with_a(0.75),
            OperatorSpec::new(Family::UninormConjII)
                .with_e(0.5)
                .with_a(0.75)
                .with_generator(Generator::identity(grid)),
        ),
    }
}

/// The closed pair used by the counterexample search when convexity is
/// dropped: grid-aligned, so any strict violation is genuinely structural
/// rather than a rounding artifact.
pub fn falsifiability_pair(grid: &Grid) -> (OperatorSpec, OperatorSpec) {
    let (f, _) = cd_case_pair(CdCase::DisjI, grid);
    (f, OperatorSpec::new(Family::OverlineUninorm).with_e(0.25))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::build_operator;

    #[test]
    fn every_cd_case_pair_builds_on_a_quarter_aligned_grid() {
        let g = Grid::new(16).unwrap();
        for case in CdCase::ALL {
            let (f, u) = cd_case_pair(case, &g);
            build_operator(&g, &f).unwrap_or_else(|e| panic!("{case} F: {e}"));
            build_operator(&g, &u).unwrap_or_else(|e| panic!("{case} U: {e}"));
        }
    }

    #[test]
    fn every_theorem_default_pair_builds() {
        let g = Grid::new(16).unwrap();
        for theorem in TheoremId::ALL {
            let (f, v) = default_pair(theorem, &g);
            build_operator(&g, &f).unwrap_or_else(|e| panic!("{theorem} F: {e}"));
            build_operator(&g, &v).unwrap_or_else(|e| panic!("{theorem} V: {e}"));
        }
    }
}
