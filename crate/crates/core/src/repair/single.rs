use crate::error::Result;
use crate::field::Elem;
use crate::linalg::{extend_basis, BBasis};
use crate::rs::RsCode;

use super::plan::{PlanParts, Recipe, Slot};
use super::{expect_branch, Branch, FailurePattern, RepairPlan};

/// Single erasure: every helper sends Tr(lambda_a f(a) / (a - a*)) and the
/// replacement node reads off t traces of lambda* f(a*) against a canonical
/// basis of F.
pub fn plan_single(code: &RsCode, erased_index: usize) -> Result<RepairPlan> {
    let pattern = FailurePattern::new(code, &[erased_index])?;
    let branch = expect_branch(code, &pattern, &[Branch::Single])?;
    let field = code.field();
    let t = field.t() as usize;
    let basis = extend_basis(field, &BBasis::empty(), t, None)?;
    let traces = (0..t).map(|j| Recipe::slot(Slot::Obtained(j))).collect();
    PlanParts {
        branch,
        erased: pattern.erased().to_vec(),
        delta: None,
        gammas: Vec::new(),
        check_scalars: vec![Elem::ONE],
        bases: vec![basis.clone()],
        coefficients: Vec::new(),
        schedule: Vec::new(),
        recovery: vec![(basis, traces)],
    }
    .build(code)
}
