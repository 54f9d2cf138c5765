//! Failure classification, parameter selection and repair-plan construction.
//!
//! Wherever a scheme only needs *some* element with a property (delta,
//! gamma, gamma1, gamma2, kappa, basis extensions) the enumeration-first
//! such element is taken, so plans are reproducible byte for byte.

mod gamma;
mod plan;
mod single;
mod three_l1;
mod three_l2;
mod two;

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, SubElem, Tower};
use crate::linalg::triple_kernel_dim;
use crate::rs::RsCode;

pub use gamma::{solve_gamma_system, GammaSystem, GammaSystemSolution};
pub use plan::{Bandwidth, Exchange, NamedCoords, Recipe, Recovery, RepairPlan, Slot};
pub use single::plan_single;
pub use three_l1::{canonical_gamma_pair, plan_three_l1};
pub use three_l2::plan_three_l2;
pub use two::plan_two;

/// A set of 1 to 3 erased positions, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FailurePattern {
    erased: Vec<usize>,
}

impl FailurePattern {
    pub fn new(code: &RsCode, indices: &[usize]) -> Result<FailurePattern> {
        let mut erased = indices.to_vec();
        erased.sort_unstable();
        erased.dedup();
        let bad = |m: &str| Err(Error::InvalidPattern(m.to_string()));
        if erased.len() != indices.len() {
            return bad("erased indices must be distinct");
        }
        if erased.is_empty() || erased.len() > 3 {
            return bad("between one and three erasures are supported");
        }
        if erased.iter().any(|&i| i >= code.n()) {
            return bad("erased index out of range");
        }
        if code.n() - erased.len() < code.k() {
            return bad("fewer than k symbols survive");
        }
        Ok(FailurePattern { erased })
    }

    pub fn erased(&self) -> &[usize] {
        &self.erased
    }

    pub fn len(&self) -> usize {
        self.erased.len()
    }

    pub fn is_empty(&self) -> bool {
        self.erased.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Single,
    Two,
    /// l = t-1, t >= 3
    ThreeL1General,
    /// l = t-1, t = 2, char != 3
    ThreeL1T2CharNot3,
    /// l = t-1, t = 2, char = 3
    ThreeL1T2Char3,
    /// l = t-2, t > 3
    ThreeL2,
}

impl Branch {
    pub fn tag(self) -> &'static str {
        match self {
            Branch::Single => "single",
            Branch::Two => "two",
            Branch::ThreeL1General => "three-l1-general",
            Branch::ThreeL1T2CharNot3 => "three-l1-t2-charNot3",
            Branch::ThreeL1T2Char3 => "three-l1-t2-char3",
            Branch::ThreeL2 => "three-l2",
        }
    }

    pub fn expected_rounds(self) -> usize {
        match self {
            Branch::Single => 0,
            Branch::ThreeL2 => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// The scheme selected for a pattern; `l` is dim K_{1,2,3} for three erasures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SchemeBranch {
    pub branch: Branch,
    pub l: Option<usize>,
}

pub fn classify(code: &RsCode, pattern: &FailurePattern) -> Result<SchemeBranch> {
    code.require_feasible()?;
    let field = code.field();
    let e = pattern.erased();
    let simple = |branch| Ok(SchemeBranch { branch, l: None });
    match e.len() {
        1 => simple(Branch::Single),
        2 => simple(Branch::Two),
        3 => {
            let t = field.t() as usize;
            let l = triple_kernel_dim(field, code.point(e[0]), code.point(e[1]), code.point(e[2]))?;
            let branch = if l + 1 == t {
                if t >= 3 {
                    Branch::ThreeL1General
                } else if field.p() == 3 {
                    Branch::ThreeL1T2Char3
                } else {
                    Branch::ThreeL1T2CharNot3
                }
            } else if t > 3 {
                Branch::ThreeL2
            } else {
                return Err(Error::Unsupported { l, t });
            };
            Ok(SchemeBranch { branch, l: Some(l) })
        }
        _ => Err(Error::InvalidPattern("unsupported erasure count".into())),
    }
}

/// Enumeration-first element with trace one.
pub fn choose_delta(field: &Tower) -> Elem {
    field
        .elements()
        .find(|&x| field.trace(x) == SubElem::ONE)
        .expect("trace is surjective")
}

/// delta for a given branch: the char-3, t = 2 scheme uses delta = 2.
pub fn choose_delta_for(field: &Tower, branch: Branch) -> Result<Elem> {
    let delta = match branch {
        Branch::ThreeL1T2Char3 => field.from_int(2),
        _ => choose_delta(field),
    };
    if field.trace(delta) != SubElem::ONE {
        return Err(Error::Internal(
            "chosen delta does not have trace one".into(),
        ));
    }
    Ok(delta)
}

/// Enumeration-first nonzero element of K = Ker Tr.
pub fn choose_gamma_two(field: &Tower) -> Elem {
    field
        .nonzero_elements()
        .find(|&x| field.trace(x).is_zero())
        .expect("trace kernel is nontrivial for t >= 2")
}

/// Classifies the pattern and builds the matching plan.
pub fn plan(code: &RsCode, pattern: &FailurePattern) -> Result<RepairPlan> {
    let branch = classify(code, pattern)?;
    match branch.branch {
        Branch::Single => plan_single(code, pattern.erased()[0]),
        Branch::Two => plan_two(code, pattern),
        Branch::ThreeL2 => plan_three_l2(code, pattern),
        _ => plan_three_l1(code, pattern),
    }
}

pub(crate) fn expect_branch(
    code: &RsCode,
    pattern: &FailurePattern,
    allowed: &[Branch],
) -> Result<SchemeBranch> {
    let b = classify(code, pattern)?;
    if !allowed.contains(&b.branch) {
        return Err(Error::InvalidPattern(format!(
            "pattern classifies as {}, not {}",
            b.branch,
            allowed
                .iter()
                .map(|b| b.tag())
                .collect::<Vec<_>>()
                .join("/")
        )));
    }
    Ok(b)
}
